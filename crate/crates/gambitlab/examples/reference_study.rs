//! Runs the bundled twelve-experiment reference study end to end: loads the
//! recorded counts, executes all ten comparisons, grades every innovation,
//! and persists the full artifact set under `out/reference/`.
//!
//! ```bash
//! cargo run --example reference_study
//! ```

use std::path::Path;

use gambitlab::study::{run_study, StudyFile};

fn main() -> anyhow::Result<()> {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/reference_study.toml");
    let file = StudyFile::load(&config)?;
    let report = run_study(&file, Path::new("out/reference"), true)?;

    print!("{}", report.counts_table());
    println!();
    print!("{}", report.comparisons_table());
    for notice in &report.notices {
        println!("notice: {notice}");
    }
    println!("\nartifacts written to out/reference/");
    Ok(())
}
