//! Monte Carlo resampling of match outcomes.
//!
//! Given an estimated probability vector, [`simulate_experiment`] replays the
//! n-game match many times and records each repetition as an
//! `(white_wins, black_wins)` point. The resulting cluster of points measures
//! how much a match score could vary if the same generator were sampled
//! again; its centroid and radial dispersion feed the hypothesis test.
//!
//! Reproducibility contract: every repetition draws from its own counter
//! stream of a seeded ChaCha generator, keyed by the repetition index. The
//! same `(vector, games, repetitions, seed)` inputs yield bit-identical
//! clusters on any number of worker threads.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::model::ProbabilityVector;

/// Derives an independent child seed from a master seed and an index
/// (SplitMix64 finalizer).
pub fn child_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9e3779b97f4a7c15)
        .wrapping_add(index.wrapping_mul(0xbf58476d1ce4e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn match_rng(seed: u64, match_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(match_index);
    rng
}

/// One simulated repetition of an n-game match.
///
/// Each game draws a uniform variate `u` in `[0, 1)`: white wins when
/// `u < p_w`, black wins when `p_w <= u < p_w + p_b`, and the game is drawn
/// otherwise. Returns the `(white_wins, black_wins)` tallies.
pub fn simulate_match<R: Rng>(pi: &ProbabilityVector, n_games: u32, rng: &mut R) -> (u32, u32) {
    assert!(n_games > 0, "a match must contain at least one game");
    let white_cut = pi.p_w();
    let black_cut = pi.p_w() + pi.p_b();
    let mut white = 0u32;
    let mut black = 0u32;
    for _ in 0..n_games {
        let u: f64 = rng.random();
        if u < white_cut {
            white += 1;
        } else if u < black_cut {
            black += 1;
        }
    }
    (white, black)
}

/// A cluster of simulated match outcomes, one point per repetition.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedCluster {
    /// `(white_wins, black_wins)` per repetition, in repetition order.
    pub points: Vec<(u32, u32)>,
    /// The generator the cluster was sampled from.
    pub source: ProbabilityVector,
    pub games_per_match: u32,
    pub seed: u64,
}

impl SimulatedCluster {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Component-wise mean of the cluster points.
    pub fn centroid(&self) -> Centroid {
        assert!(!self.points.is_empty(), "centroid of an empty cluster");
        let n = self.points.len() as f64;
        let (sw, sb) = self
            .points
            .iter()
            .fold((0f64, 0f64), |(sw, sb), &(w, b)| {
                (sw + f64::from(w), sb + f64::from(b))
            });
        Centroid {
            mean_white: sw / n,
            mean_black: sb / n,
        }
    }

    /// Sum of squared distances of the points to this cluster's centroid.
    fn radial_sum_of_squares(&self) -> f64 {
        let c = self.centroid();
        self.points
            .iter()
            .map(|&(w, b)| {
                let dw = f64::from(w) - c.mean_white;
                let db = f64::from(b) - c.mean_black;
                dw * dw + db * db
            })
            .sum()
    }

    /// Sample variance of `white_wins - black_wins` across the points,
    /// used to scale the direction analysis of a classification.
    pub fn score_diff_variance(&self) -> f64 {
        let n = self.points.len();
        if n < 2 {
            return 0.0;
        }
        let diffs: Vec<f64> = self
            .points
            .iter()
            .map(|&(w, b)| f64::from(w) - f64::from(b))
            .collect();
        let mean = diffs.iter().sum::<f64>() / n as f64;
        diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0)
    }
}

/// Mean point of a cluster, in units of games.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Centroid {
    pub mean_white: f64,
    pub mean_black: f64,
}

impl Centroid {
    pub fn new(mean_white: f64, mean_black: f64) -> Self {
        Self {
            mean_white,
            mean_black,
        }
    }

    /// Euclidean distance to another centroid (always non-negative).
    pub fn distance_to(&self, other: &Centroid) -> f64 {
        let dw = self.mean_white - other.mean_white;
        let db = self.mean_black - other.mean_black;
        (dw * dw + db * db).sqrt()
    }
}

/// Euclidean distance between two centroids.
pub fn euclidean_distance(a: &Centroid, b: &Centroid) -> f64 {
    a.distance_to(b)
}

/// Simulates `repetitions` independent matches of `n_games` each.
///
/// Repetitions are distributed over the rayon pool; each repetition uses the
/// counter stream keyed by its index, so the output does not depend on the
/// worker count and is reproducible from the seed alone.
pub fn simulate_experiment(
    pi: &ProbabilityVector,
    n_games: u32,
    repetitions: u32,
    seed: u64,
) -> SimulatedCluster {
    assert!(repetitions > 0, "at least one repetition is required");
    let points: Vec<(u32, u32)> = (0..repetitions)
        .into_par_iter()
        .map(|rep| {
            let mut rng = match_rng(seed, u64::from(rep));
            simulate_match(pi, n_games, &mut rng)
        })
        .collect();
    SimulatedCluster {
        points,
        source: *pi,
        games_per_match: n_games,
        seed,
    }
}

/// Pooled radial dispersion of two clusters.
///
/// Each point's deviation is its Euclidean distance to its own cluster's
/// centroid. Because the centroid is the mean point, the deviations are not
/// re-centred; the statistic is the root mean square of all deviations from
/// both clusters, with an N-1 divisor over the combined point count.
pub fn pooled_radial_stdev(a: &SimulatedCluster, b: &SimulatedCluster) -> f64 {
    assert!(
        !a.is_empty() && !b.is_empty(),
        "pooled stdev of an empty cluster"
    );
    let n = (a.len() + b.len()) as f64;
    ((a.radial_sum_of_squares() + b.radial_sum_of_squares()) / (n - 1.0)).sqrt()
}

/// Writes both clusters as delimiter-separated scatter data with a
/// `cluster,white_wins,black_wins` header, baseline rows first.
pub fn write_scatter<W: Write>(
    baseline: &SimulatedCluster,
    test: &SimulatedCluster,
    mut out: W,
) -> io::Result<()> {
    writeln!(out, "cluster,white_wins,black_wins")?;
    for &(w, b) in &baseline.points {
        writeln!(out, "baseline,{w},{b}")?;
    }
    for &(w, b) in &test.points {
        writeln!(out, "test,{w},{b}")?;
    }
    Ok(())
}

/// Renders both clusters as an SVG scatter plot: the baseline cluster as
/// diamond markers, the test cluster as squares.
pub fn scatter_svg(baseline: &SimulatedCluster, test: &SimulatedCluster) -> String {
    const SIZE: f64 = 480.0;
    const MARGIN: f64 = 48.0;

    let max_w = baseline
        .points
        .iter()
        .chain(&test.points)
        .map(|&(w, _)| w)
        .max()
        .unwrap_or(1)
        .max(1);
    let max_b = baseline
        .points
        .iter()
        .chain(&test.points)
        .map(|&(_, b)| b)
        .max()
        .unwrap_or(1)
        .max(1);
    let scale_x = (SIZE - 2.0 * MARGIN) / f64::from(max_w);
    let scale_y = (SIZE - 2.0 * MARGIN) / f64::from(max_b);
    let px = |w: u32| MARGIN + f64::from(w) * scale_x;
    let py = |b: u32| SIZE - MARGIN - f64::from(b) * scale_y;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" \
         viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    ));
    svg.push_str(&format!(
        "  <rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>\n"
    ));
    // axes
    svg.push_str(&format!(
        "  <line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        b = SIZE - MARGIN,
        r = SIZE - MARGIN
    ));
    svg.push_str(&format!(
        "  <line x1=\"{m}\" y1=\"{m}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        b = SIZE - MARGIN
    ));
    svg.push_str(&format!(
        "  <text x=\"{x}\" y=\"{y}\" font-size=\"12\" text-anchor=\"middle\">white wins</text>\n",
        x = SIZE / 2.0,
        y = SIZE - 12.0
    ));
    svg.push_str(&format!(
        "  <text x=\"14\" y=\"{y}\" font-size=\"12\" text-anchor=\"middle\" \
         transform=\"rotate(-90 14 {y})\">black wins</text>\n",
        y = SIZE / 2.0
    ));
    for &(w, b) in &baseline.points {
        let (x, y) = (px(w), py(b));
        svg.push_str(&format!(
            "  <path d=\"M {x} {y0} L {x1} {y} L {x} {y1} L {x0} {y} Z\" \
             fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1\"/>\n",
            y0 = y - 4.0,
            x1 = x + 4.0,
            y1 = y + 4.0,
            x0 = x - 4.0
        ));
    }
    for &(w, b) in &test.points {
        let (x, y) = (px(w) - 3.0, py(b) - 3.0);
        svg.push_str(&format!(
            "  <rect x=\"{x}\" y=\"{y}\" width=\"6\" height=\"6\" \
             fill=\"none\" stroke=\"#c23b22\" stroke-width=\"1\"/>\n"
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
