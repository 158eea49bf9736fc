//! Hypothesis tests on pairs of opening experiments.
//!
//! Two openings are compared by asking whether their observed match scores
//! could have been generated by the same probability vector. The null
//! hypothesis is that the distance between the two outcome points is zero;
//! the observed distance is scaled by the pooled radial dispersion of the
//! simulated clusters and referred to a Student t distribution.
//!
//! A rejected null is then graded by direction: an innovation that moved the
//! win probabilities in the innovator's favour has succeeded (category A),
//! one that moved them against the innovator has failed (category F), and a
//! change without relative advantage — or no detectable change at all — is
//! benign (category C).

use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

use crate::chess::Color;
use crate::model::{ModelError, OutcomeCounts};
use crate::sim::{
    child_seed, pooled_radial_stdev, simulate_experiment, Centroid, SimulatedCluster,
};

#[derive(Debug, Error)]
pub enum CompareError {
    #[error("matches have different totals (test {test} vs baseline {baseline})")]
    UnequalTotals { test: u32, baseline: u32 },
    #[error("at least two repetitions are required, got {0}")]
    TooFewRepetitions(u32),
    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    InvalidAlpha(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Reject,
    FailToReject,
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Decision::Reject => write!(f, "Reject H0"),
            Decision::FailToReject => write!(f, "Fail to reject"),
        }
    }
}

/// Grade of an opening innovation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    /// The innovation succeeded: it moved the probability vector in the
    /// innovator's favour.
    A,
    /// The innovation is benign: no detectable change, or a change without
    /// relative advantage to either side.
    C,
    /// The innovation failed: it moved the probability vector against the
    /// innovator.
    F,
}

impl std::fmt::Display for Category {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Category::A => write!(f, "A"),
            Category::C => write!(f, "C"),
            Category::F => write!(f, "F"),
        }
    }
}

/// Full result of one test-vs-baseline comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonResult {
    /// Euclidean distance between the two observed score points, in games.
    pub distance: f64,
    /// Pooled radial dispersion of the two simulated clusters, in games.
    pub pooled_stdev: f64,
    pub t_value: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub decision: Decision,
    /// Test-minus-baseline change in the estimated white win probability.
    pub delta_p_w: f64,
    /// Test-minus-baseline change in the estimated black win probability.
    pub delta_p_b: f64,
    /// Two standard errors of `delta_p_w - delta_p_b`, estimated from the
    /// simulated clusters; the threshold below which a directional change
    /// counts as "no relative advantage".
    pub advantage_epsilon: f64,
    /// Set when the dispersion was zero but the distance was not; the
    /// reported `p = 0` is then a statement of certainty, not of scale.
    pub degenerate: bool,
    pub innovator: Option<Color>,
    pub category: Option<Category>,
}

impl ComparisonResult {
    /// Grades the innovation and records the innovator on the result.
    pub fn with_classification(mut self, innovator: Color) -> Self {
        self.category = Some(classify(&self, innovator));
        self.innovator = Some(innovator);
        self
    }
}

/// Two-sided p-value of `t` under Student's t with `2 * repetitions - 2`
/// degrees of freedom (indistinguishable from the normal at large counts).
pub fn two_sided_p(t: f64, repetitions: u32) -> f64 {
    let df = f64::from(2 * repetitions - 2);
    let dist = StudentsT::new(0.0, 1.0, df).expect("valid t distribution");
    (2.0 * dist.cdf(-t.abs())).clamp(0.0, 1.0)
}

/// Per-comparison error rate that keeps a family of `comparisons` tests
/// within `family_alpha` overall (Bonferroni).
pub fn bonferroni_alpha(family_alpha: f64, comparisons: u32) -> f64 {
    assert!(comparisons >= 1, "at least one comparison is required");
    family_alpha / f64::from(comparisons)
}

/// Compares a test opening's observed counts against a baseline's.
///
/// Both counts must come from matches of the same length. The distance is
/// computed from the observed integer counts (exact); the simulated clusters
/// contribute only the dispersion scale.
pub fn compare(
    test_counts: &OutcomeCounts,
    base_counts: &OutcomeCounts,
    repetitions: u32,
    seed: u64,
    alpha: f64,
) -> Result<ComparisonResult, CompareError> {
    compare_with_clusters(test_counts, base_counts, repetitions, seed, alpha)
        .map(|(result, _)| result)
}

/// [`compare`], additionally returning the simulated clusters
/// `(test, baseline)` for scatter export.
pub fn compare_with_clusters(
    test_counts: &OutcomeCounts,
    base_counts: &OutcomeCounts,
    repetitions: u32,
    seed: u64,
    alpha: f64,
) -> Result<(ComparisonResult, (SimulatedCluster, SimulatedCluster)), CompareError> {
    if test_counts.total != base_counts.total {
        return Err(CompareError::UnequalTotals {
            test: test_counts.total,
            baseline: base_counts.total,
        });
    }
    if repetitions < 2 {
        return Err(CompareError::TooFewRepetitions(repetitions));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CompareError::InvalidAlpha(alpha));
    }

    let n_games = test_counts.total;
    let p_test = test_counts.estimate()?;
    let p_base = base_counts.estimate()?;

    let test_cluster = simulate_experiment(&p_test, n_games, repetitions, child_seed(seed, 0));
    let base_cluster = simulate_experiment(&p_base, n_games, repetitions, child_seed(seed, 1));

    let test_point = Centroid::new(f64::from(test_counts.white), f64::from(test_counts.black));
    let base_point = Centroid::new(f64::from(base_counts.white), f64::from(base_counts.black));
    let distance = test_point.distance_to(&base_point);

    let pooled_stdev = pooled_radial_stdev(&test_cluster, &base_cluster);

    let (t_value, p_value, degenerate) = if pooled_stdev > 0.0 {
        let t = distance / pooled_stdev;
        (t, two_sided_p(t, repetitions), false)
    } else if distance == 0.0 {
        (0.0, 1.0, false)
    } else {
        // zero dispersion with a non-zero distance: certain rejection
        (f64::INFINITY, 0.0, true)
    };

    let decision = if p_value < alpha {
        Decision::Reject
    } else {
        Decision::FailToReject
    };

    let n = f64::from(n_games);
    let delta_p_w = p_test.p_w() - p_base.p_w();
    let delta_p_b = p_test.p_b() - p_base.p_b();
    let se_diff = ((test_cluster.score_diff_variance() + base_cluster.score_diff_variance())
        .sqrt())
        / n;
    let advantage_epsilon = 2.0 * se_diff;

    let result = ComparisonResult {
        distance,
        pooled_stdev,
        t_value,
        p_value,
        alpha,
        decision,
        delta_p_w,
        delta_p_b,
        advantage_epsilon,
        degenerate,
        innovator: None,
        category: None,
    };
    Ok((result, (test_cluster, base_cluster)))
}

/// Grades an innovation given which side departed from the baseline stem.
///
/// A retained null is always benign. On rejection, the innovator's relative
/// advantage is `delta_p_w - delta_p_b` for a white innovation and the
/// negation for a black one; advantages within `advantage_epsilon` of zero
/// grade as benign — the vector changed, but proportionally, with no
/// relative gain to either side.
pub fn classify(result: &ComparisonResult, innovator: Color) -> Category {
    if result.decision == Decision::FailToReject {
        return Category::C;
    }
    let advantage = match innovator {
        Color::White => result.delta_p_w - result.delta_p_b,
        Color::Black => result.delta_p_b - result.delta_p_w,
    };
    if advantage > result.advantage_epsilon {
        Category::A
    } else if advantage < -result.advantage_epsilon {
        Category::F
    } else {
        Category::C
    }
}

/// Observed counts of one experiment with a display label and the
/// innovating side, if any.
#[derive(Debug, Clone)]
pub struct LabeledCounts {
    pub label: String,
    pub counts: OutcomeCounts,
    pub innovator: Option<Color>,
}

impl LabeledCounts {
    pub fn new(label: impl Into<String>, counts: OutcomeCounts) -> Self {
        Self {
            label: label.into(),
            counts,
            innovator: None,
        }
    }

    pub fn with_innovator(mut self, innovator: Color) -> Self {
        self.innovator = Some(innovator);
        self
    }
}

/// One row of a batch comparison: errors are carried per row so a single
/// degenerate opening cannot abort the rest of the report.
#[derive(Debug)]
pub struct ComparisonRow {
    pub test_label: String,
    pub baseline_label: String,
    pub outcome: Result<ComparisonResult, CompareError>,
}

/// Comparisons per baseline within the experiment-wide error budget at the
/// default family alpha of 0.005 and per-comparison alpha of 0.001.
pub const COMPARISON_BUDGET: usize = 5;

/// Runs every test opening against the baseline at the Bonferroni-adjusted
/// per-comparison alpha. Rows are computed in parallel but returned in input
/// order, each with a row-derived seed so the batch is reproducible.
pub fn run_comparison_table(
    baseline: &LabeledCounts,
    tests: &[LabeledCounts],
    family_alpha: f64,
    repetitions: u32,
    seed: u64,
) -> Vec<ComparisonRow> {
    assert!(!tests.is_empty(), "no test openings supplied");
    let alpha = bonferroni_alpha(family_alpha, tests.len() as u32);
    tests
        .par_iter()
        .enumerate()
        .map(|(i, test)| {
            let outcome = compare(
                &test.counts,
                &baseline.counts,
                repetitions,
                child_seed(seed, i as u64),
                alpha,
            )
            .map(|r| match test.innovator {
                Some(color) => r.with_classification(color),
                None => r,
            });
            ComparisonRow {
                test_label: test.label.clone(),
                baseline_label: baseline.label.clone(),
                outcome,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn counts(w: u32, b: u32, d: u32) -> OutcomeCounts {
        OutcomeCounts::new(w, b, d)
    }

    #[test]
    fn bird_defense_rejects_decisively() {
        let r = compare(&counts(56, 2, 242), &counts(16, 3, 281), 1000, 7, 0.001).unwrap();
        assert!((r.distance - 40.012).abs() < 1e-3, "{}", r.distance);
        assert!((6.5..7.5).contains(&r.t_value), "{}", r.t_value);
        assert!(r.p_value < 1e-9, "{}", r.p_value);
        assert_eq!(r.decision, Decision::Reject);
        assert!(!r.degenerate);
    }

    #[test]
    fn scotch_game_fails_to_reject() {
        let r = compare(&counts(12, 7, 281), &counts(16, 3, 281), 1000, 7, 0.001).unwrap();
        assert!((r.distance - 5.657).abs() < 1e-3, "{}", r.distance);
        assert!((1.2..1.45).contains(&r.t_value), "{}", r.t_value);
        assert!((r.p_value - 0.185).abs() < 0.04, "{}", r.p_value);
        assert_eq!(r.decision, Decision::FailToReject);
    }

    #[test]
    fn identical_counts_have_zero_distance() {
        let c = counts(16, 3, 281);
        let r = compare(&c, &c, 100, 3, 0.001).unwrap();
        assert_eq!(r.distance, 0.0);
        assert_eq!(r.decision, Decision::FailToReject);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn baselines_are_equivalent() {
        // distance is exactly sqrt(26); p stays near a quarter across seeds
        for seed in 0..5 {
            let r = compare(&counts(21, 2, 277), &counts(16, 3, 281), 1000, seed, 0.001).unwrap();
            assert!((r.distance - 26f64.sqrt()).abs() < 1e-12);
            assert_eq!(r.decision, Decision::FailToReject);
            assert!((r.p_value - 0.25).abs() < 0.08, "seed {seed}: {}", r.p_value);
        }
    }

    #[test]
    fn unequal_totals_are_rejected() {
        let err = compare(&counts(1, 1, 8), &counts(1, 1, 9), 100, 0, 0.001).unwrap_err();
        assert!(matches!(err, CompareError::UnequalTotals { .. }));
    }

    #[test]
    fn degenerate_dispersion_is_flagged() {
        // all-draw vs all-white-win: both clusters collapse to single points
        let r = compare(&counts(0, 0, 50), &counts(50, 0, 0), 100, 1, 0.001).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.p_value, 0.0);
        assert_eq!(r.decision, Decision::Reject);
        assert_eq!(r.pooled_stdev, 0.0);
        assert_eq!(r.distance, 50.0);
    }

    #[test]
    fn bonferroni_budget() {
        assert_eq!(bonferroni_alpha(0.005, 5), 0.001);
        assert_eq!(bonferroni_alpha(0.005, 1), 0.005);
        assert_eq!(bonferroni_alpha(0.05, 10), 0.005);
    }

    #[test]
    fn classification_follows_direction() {
        // black's innovation backfired: white's win rate rose
        let r = compare(&counts(56, 2, 242), &counts(16, 3, 281), 1000, 7, 0.001).unwrap();
        assert!((r.delta_p_w - 40.0 / 300.0).abs() < 1e-12);
        assert!((r.delta_p_b + 1.0 / 300.0).abs() < 1e-12);
        assert_eq!(classify(&r, Color::Black), Category::F);

        // white's innovation backfired: white lost ground on both axes
        let r = compare(&counts(7, 13, 280), &counts(21, 2, 277), 1000, 9, 0.001).unwrap();
        assert_eq!(r.decision, Decision::Reject);
        assert_eq!(classify(&r, Color::White), Category::F);

        // a retained null is always benign
        let r = compare(&counts(12, 7, 281), &counts(16, 3, 281), 1000, 7, 0.001).unwrap();
        assert_eq!(classify(&r, Color::White), Category::C);
        assert_eq!(classify(&r, Color::Black), Category::C);
    }

    #[test]
    fn a_success_is_reachable() {
        // synthetic: black's win rate triples while white's collapses
        let r = compare(&counts(2, 30, 268), &counts(16, 3, 281), 1000, 11, 0.001).unwrap();
        assert_eq!(r.decision, Decision::Reject);
        assert_eq!(classify(&r, Color::Black), Category::A);
        assert_eq!(classify(&r, Color::White), Category::F);
    }

    #[test]
    fn proportional_change_grades_benign() {
        // both win rates rise by the same amount: rejected, but no relative
        // advantage to either side
        let r = compare(&counts(40, 27, 233), &counts(16, 3, 281), 1000, 13, 0.001).unwrap();
        assert_eq!(r.decision, Decision::Reject);
        assert!((r.delta_p_w - r.delta_p_b).abs() <= r.advantage_epsilon);
        assert_eq!(classify(&r, Color::White), Category::C);
        assert_eq!(classify(&r, Color::Black), Category::C);
    }

    #[test]
    fn scale_consistency() {
        let r = compare(&counts(56, 2, 242), &counts(16, 3, 281), 500, 21, 0.001).unwrap();
        assert!((r.t_value * r.pooled_stdev - r.distance).abs() <= 1e-12 * r.distance);
    }

    #[test]
    fn batch_preserves_order_and_isolates_rows() {
        let baseline = LabeledCounts::new("base", counts(16, 3, 281));
        let tests = vec![
            LabeledCounts::new("ok", counts(56, 2, 242)).with_innovator(Color::Black),
            // mismatched total: this row must fail without sinking the batch
            LabeledCounts::new("broken", counts(1, 1, 1)),
            LabeledCounts::new("also ok", counts(12, 7, 281)).with_innovator(Color::White),
        ];
        let rows = run_comparison_table(&baseline, &tests, 0.005, 200, 3);
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].test_label, "ok");
        assert!(rows[0].outcome.is_ok());
        assert!(matches!(
            rows[1].outcome,
            Err(CompareError::UnequalTotals { .. })
        ));
        let last = rows[2].outcome.as_ref().unwrap();
        assert_eq!(last.category, Some(Category::C));
        // five-way split of the family alpha would be 0.001; three-way is larger
        assert!((last.alpha - 0.005 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn group_one_stable_decisions() {
        let baseline = LabeledCounts::new("C68", counts(16, 3, 281));
        let tests = vec![
            LabeledCounts::new("C61", counts(56, 2, 242)).with_innovator(Color::Black),
            LabeledCounts::new("C50", counts(3, 7, 290)).with_innovator(Color::White),
            LabeledCounts::new("C44", counts(12, 7, 281)).with_innovator(Color::White),
            LabeledCounts::new("C41", counts(32, 0, 268)).with_innovator(Color::Black),
            LabeledCounts::new("C37", counts(4, 29, 267)).with_innovator(Color::White),
        ];
        let rows = run_comparison_table(&baseline, &tests, 0.005, 1000, 17);
        let decisions: Vec<Decision> = rows
            .iter()
            .map(|r| r.outcome.as_ref().unwrap().decision)
            .collect();
        assert_eq!(decisions[0], Decision::Reject); // C61
        assert_eq!(decisions[2], Decision::FailToReject); // C44
        assert_eq!(decisions[4], Decision::Reject); // C37
        // The C50 counts sit firmly on the reject side: the distance implied
        // by the recorded counts is 13.601, not the 11.705 their historical
        // verdict was computed from. C41 sits within noise of the threshold,
        // so its decision is not pinned here.
        let c50 = rows[1].outcome.as_ref().unwrap();
        assert!((c50.distance - 13.601).abs() < 1e-3);
        assert_eq!(c50.decision, Decision::Reject);
    }

    #[test]
    fn group_two_stable_decisions() {
        let baseline = LabeledCounts::new("B53", counts(21, 2, 277));
        let tests = vec![
            LabeledCounts::new("B21", counts(7, 13, 280)).with_innovator(Color::White),
            LabeledCounts::new("B22", counts(17, 3, 280)).with_innovator(Color::White),
            LabeledCounts::new("B12", counts(37, 4, 259)).with_innovator(Color::Black),
            LabeledCounts::new("B01", counts(59, 0, 241)).with_innovator(Color::Black),
            LabeledCounts::new("B07", counts(60, 2, 238)).with_innovator(Color::Black),
        ];
        let rows = run_comparison_table(&baseline, &tests, 0.005, 1000, 19);
        let expect = [
            (Decision::Reject, Category::F),       // B21
            (Decision::FailToReject, Category::C), // B22
            (Decision::FailToReject, Category::C), // B12
            (Decision::Reject, Category::F),       // B01
            (Decision::Reject, Category::F),       // B07
        ];
        for (row, (decision, category)) in rows.iter().zip(expect) {
            let r = row.outcome.as_ref().unwrap();
            assert_eq!(r.decision, decision, "{}", row.test_label);
            assert_eq!(r.category, Some(category), "{}", row.test_label);
        }
    }

    proptest! {
        // for a fixed dispersion, growing the distance can only push the
        // p-value down, so a rejection never reverts
        #[test]
        fn p_is_monotone_in_t(t1 in 0.0f64..10.0, t2 in 0.0f64..10.0) {
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            prop_assert!(two_sided_p(hi, 1000) <= two_sided_p(lo, 1000) + 1e-15);
        }

        // swapping the win columns and the innovator yields the same grade
        #[test]
        fn classification_is_exchange_invariant(
            dw in -0.3f64..0.3,
            db in -0.3f64..0.3,
            eps in 0.0f64..0.1,
            reject in proptest::bool::ANY,
        ) {
            let base = ComparisonResult {
                distance: 1.0,
                pooled_stdev: 1.0,
                t_value: 1.0,
                p_value: if reject { 1e-6 } else { 0.5 },
                alpha: 0.001,
                decision: if reject { Decision::Reject } else { Decision::FailToReject },
                delta_p_w: dw,
                delta_p_b: db,
                advantage_epsilon: eps,
                degenerate: false,
                innovator: None,
                category: None,
            };
            let swapped = ComparisonResult {
                delta_p_w: db,
                delta_p_b: dw,
                ..base.clone()
            };
            prop_assert_eq!(classify(&base, Color::White), classify(&swapped, Color::Black));
            prop_assert_eq!(classify(&base, Color::Black), classify(&swapped, Color::White));
        }
    }
}
