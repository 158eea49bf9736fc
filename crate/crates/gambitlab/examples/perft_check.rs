//! Validates the rules engine against the published perft node counts for
//! the starting position.
//!
//! ```bash
//! cargo run --example perft_check
//! ```

use std::time::Instant;

use gambitlab::chess::{perft, Position};

const EXPECTED: [u64; 5] = [20, 400, 8_902, 197_281, 4_865_609];

fn main() {
    let pos = Position::initial();
    println!("depth      nodes   expected  time");
    for (i, &expected) in EXPECTED.iter().enumerate() {
        let depth = i as u32 + 1;
        let start = Instant::now();
        let nodes = perft(&pos, depth);
        let elapsed = start.elapsed();
        let mark = if nodes == expected { "ok" } else { "MISMATCH" };
        println!("{depth:<5} {nodes:>10} {expected:>10}  {elapsed:>8.2?}  {mark}");
        assert_eq!(nodes, expected);
    }
}
