//! Full hypothesis test on one pair of recorded experiments: the Bird
//! Defense against the Ruy Lopez baseline.
//!
//! ```bash
//! cargo run --example compare_openings
//! ```

use gambitlab::chess::Color;
use gambitlab::hypothesis::compare;
use gambitlab::model::OutcomeCounts;

fn main() {
    let bird = OutcomeCounts::new(56, 2, 242);
    let ruy = OutcomeCounts::new(16, 3, 281);

    let result = compare(&bird, &ruy, 1000, 42, 0.001)
        .unwrap()
        .with_classification(Color::Black); // the innovation is black's

    println!("C61 Bird Defense vs C68 Ruy Lopez, 300 games each");
    println!("  distance between observed scores  {:.3} games", result.distance);
    println!("  pooled radial stdev               {:.3} games", result.pooled_stdev);
    println!("  t = {:.3}, p = {:.3e}, alpha = {}", result.t_value, result.p_value, result.alpha);
    println!("  decision: {}", result.decision);
    println!(
        "  delta p_w = {:+.4}, delta p_b = {:+.4} (epsilon {:.4})",
        result.delta_p_w, result.delta_p_b, result.advantage_epsilon
    );
    println!(
        "  category {} — the innovator lost ground",
        result.category.unwrap()
    );
}
