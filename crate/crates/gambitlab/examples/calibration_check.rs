//! Measures the empirical false-positive rate of the centroid-distance
//! test: both count sets are drawn from the same generator, so every
//! rejection is a type-I error.
//!
//! The radial dispersion the test divides by measures the two-dimensional
//! spread of one cluster, not the sampling error of the difference between
//! two observed scores, so the realised rate runs well above the nominal
//! alpha — roughly fifteenfold at alpha = 0.001 for baseline-like vectors.
//! Worth knowing before trusting a verdict near the threshold.
//!
//! ```bash
//! cargo run --example calibration_check
//! ```

use gambitlab::hypothesis::{compare, Decision};
use gambitlab::model::OutcomeCounts;
use gambitlab::sim::{child_seed, simulate_match};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let pi = OutcomeCounts::new(21, 2, 277).estimate().unwrap();
    let trials = 400;
    let alpha = 0.001;
    let mut rejections = 0;

    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(child_seed(99, trial));
        let (w1, b1) = simulate_match(&pi, 300, &mut rng);
        let (w2, b2) = simulate_match(&pi, 300, &mut rng);
        let a = OutcomeCounts::new(w1, b1, 300 - w1 - b1);
        let b = OutcomeCounts::new(w2, b2, 300 - w2 - b2);
        let result = compare(&a, &b, 500, child_seed(7, trial), alpha).unwrap();
        if result.decision == Decision::Reject {
            rejections += 1;
        }
    }

    let rate = f64::from(rejections) / f64::from(trials as u32);
    println!("same-generator comparisons: {trials}");
    println!("nominal alpha:              {alpha}");
    println!("observed rejection rate:    {rate:.4} ({rejections} rejections)");
    println!(
        "inflation factor:           {:.1}x the nominal rate",
        rate / alpha
    );
}
