//! Monte Carlo resampling of two baseline experiments: simulate a thousand
//! repetitions of each 300-game match, print the cluster statistics, and
//! write scatter data (CSV + SVG) to `out/`.
//!
//! ```bash
//! cargo run --example simulate_clusters
//! ```

use std::fs;

use gambitlab::model::OutcomeCounts;
use gambitlab::sim::{pooled_radial_stdev, scatter_svg, simulate_experiment, write_scatter};

fn main() -> std::io::Result<()> {
    let ruy = OutcomeCounts::new(16, 3, 281).estimate().unwrap();
    let sicilian = OutcomeCounts::new(21, 2, 277).estimate().unwrap();

    let ruy_cluster = simulate_experiment(&ruy, 300, 1000, 1);
    let sicilian_cluster = simulate_experiment(&sicilian, 300, 1000, 2);

    for (label, cluster) in [("C68 Ruy Lopez", &ruy_cluster), ("B53 Sicilian", &sicilian_cluster)] {
        let c = cluster.centroid();
        println!(
            "{label:<14} {} repetitions, centroid = ({:.2}, {:.2})",
            cluster.len(),
            c.mean_white,
            c.mean_black
        );
    }
    println!(
        "pooled radial stdev = {:.3} games",
        pooled_radial_stdev(&ruy_cluster, &sicilian_cluster)
    );

    fs::create_dir_all("out")?;
    let mut csv = Vec::new();
    write_scatter(&ruy_cluster, &sicilian_cluster, &mut csv)?;
    fs::write("out/baselines.scatter.csv", csv)?;
    fs::write(
        "out/baselines.svg",
        scatter_svg(&ruy_cluster, &sicilian_cluster),
    )?;
    println!("wrote out/baselines.scatter.csv and out/baselines.svg");
    Ok(())
}
