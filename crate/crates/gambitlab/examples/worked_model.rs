//! Worked numbers for the trinomial model: neutral vectors from the
//! first-move-advantage/imperfection decomposition, estimates from observed
//! counts, and the inversion back to the decomposition.
//!
//! ```bash
//! cargo run --example worked_model
//! ```

use gambitlab::model::{NeutralModel, OutcomeCounts, ProbabilityVector};

fn main() {
    println!("Neutral openings under the two-parameter decomposition");
    println!("  p_w = fma + imp/2,  p_b = imp/2,  p_d = 1 - fma - imp\n");
    for (fma, imp) in [(0.04, 0.10), (0.04, 0.02), (0.0, 0.0)] {
        let v = ProbabilityVector::neutral(NeutralModel::new(fma, imp).unwrap()).unwrap();
        println!(
            "  fma = {fma:<5} imp = {imp:<5} ->  [{:.4}, {:.4}, {:.4}]",
            v.p_w(),
            v.p_b(),
            v.p_d()
        );
    }

    println!("\nEstimates from observed 300-game tallies");
    for (label, counts) in [
        ("Ruy Lopez baseline", OutcomeCounts::new(16, 3, 281)),
        ("Sicilian baseline ", OutcomeCounts::new(21, 2, 277)),
    ] {
        let v = counts.estimate().unwrap();
        println!(
            "  {label}  ({:>2}, {:>2}, {:>3})  ->  [{:.4}, {:.4}, {:.4}]",
            counts.white,
            counts.black,
            counts.draws,
            v.p_w(),
            v.p_b(),
            v.p_d()
        );
    }

    let pooled = OutcomeCounts::new(16, 3, 281).pooled(&OutcomeCounts::new(21, 2, 277));
    let params = NeutralModel::from_counts(&pooled).unwrap();
    println!("\nPooled 600-game baseline sample inverted through the neutral model:");
    println!(
        "  imperfection rate = {:.4} ({:.2}%), first-move advantage = {:.4} ({:.2}%)",
        params.imp,
        100.0 * params.imp,
        params.fma,
        100.0 * params.fma
    );
}
