//! Trinomial outcome model for chess games.
//!
//! A game between two players of equal strength is treated as a draw of a
//! three-sided loaded coin: white wins, black wins, or draw. The generator is
//! a probability vector `[p_w, p_b, p_d]` which is never observed directly;
//! it is estimated from the win/loss/draw tallies of a match.
//!
//! For a neutral opening played by equal engines the vector decomposes into
//! two parameters: the first-move advantage (white's edge from moving first)
//! and the imperfection rate (the chance that evaluation noise decides an
//! otherwise drawn game, split evenly between the sides).

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance for probability invariants. All quantities are O(1).
pub const PROB_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("probability component {name} = {value} is outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("probabilities sum to {sum}, which exceeds 1")]
    ExcessiveSum { sum: f64 },
    #[error("counts {white} + {black} + {draws} do not add up to total {total}")]
    CountMismatch {
        white: u32,
        black: u32,
        draws: u32,
        total: u32,
    },
    #[error("cannot estimate from an empty sample")]
    EmptySample,
    #[error(
        "neutral model is inapplicable: black won {black} games to white's {white}; \
         the decomposition requires p_w >= p_b"
    )]
    NeutralModelInapplicable { white: u32, black: u32 },
}

/// The trinomial generator `[p_w, p_b, p_d]`.
///
/// Components always sum to one within [`PROB_TOLERANCE`] and each lies in
/// `[0, 1]`. Values are immutable once constructed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityVector {
    p_w: f64,
    p_b: f64,
    p_d: f64,
}

impl ProbabilityVector {
    /// Builds a vector from the two win probabilities; the draw probability
    /// is the complement `1 - p_w - p_b`.
    pub fn new(p_w: f64, p_b: f64) -> Result<Self, ModelError> {
        if !(0.0..=1.0).contains(&p_w) || p_w.is_nan() {
            return Err(ModelError::OutOfRange {
                name: "p_w",
                value: p_w,
            });
        }
        if !(0.0..=1.0).contains(&p_b) || p_b.is_nan() {
            return Err(ModelError::OutOfRange {
                name: "p_b",
                value: p_b,
            });
        }
        let sum = p_w + p_b;
        if sum > 1.0 + PROB_TOLERANCE {
            return Err(ModelError::ExcessiveSum { sum });
        }
        let p_d = (1.0 - p_w - p_b).max(0.0);
        Ok(Self { p_w, p_b, p_d })
    }

    /// The vector of a neutral, "perfect" opening under the two-parameter
    /// decomposition: `[fma + imp/2, imp/2, 1 - fma - imp]`.
    pub fn neutral(params: NeutralModel) -> Result<Self, ModelError> {
        Self::new(params.fma + params.imp / 2.0, params.imp / 2.0)
    }

    pub fn p_w(&self) -> f64 {
        self.p_w
    }

    pub fn p_b(&self) -> f64 {
        self.p_b
    }

    pub fn p_d(&self) -> f64 {
        self.p_d
    }

    /// Probability that a game is decisive (not drawn).
    pub fn p_decisive(&self) -> f64 {
        self.p_w + self.p_b
    }
}

/// Observed tallies of one match: the only datum an experiment records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub white: u32,
    pub black: u32,
    pub draws: u32,
    pub total: u32,
}

impl OutcomeCounts {
    /// Tallies with `total` computed as the sum of the three outcomes.
    pub fn new(white: u32, black: u32, draws: u32) -> Self {
        Self {
            white,
            black,
            draws,
            total: white + black + draws,
        }
    }

    /// Validates an externally supplied total against the tallies.
    pub fn with_total(white: u32, black: u32, draws: u32, total: u32) -> Result<Self, ModelError> {
        if white + black + draws != total {
            return Err(ModelError::CountMismatch {
                white,
                black,
                draws,
                total,
            });
        }
        Ok(Self {
            white,
            black,
            draws,
            total,
        })
    }

    /// The unbiased estimate `P = [w/n, b/n, d/n]` of the generator.
    pub fn estimate(&self) -> Result<ProbabilityVector, ModelError> {
        if self.total == 0 {
            return Err(ModelError::EmptySample);
        }
        let n = f64::from(self.total);
        ProbabilityVector::new(f64::from(self.white) / n, f64::from(self.black) / n)
    }

    /// Merges two tallies, e.g. to pool baseline experiments.
    pub fn pooled(&self, other: &Self) -> Self {
        Self {
            white: self.white + other.white,
            black: self.black + other.black,
            draws: self.draws + other.draws,
            total: self.total + other.total,
        }
    }
}

/// First-move advantage and imperfection rate of a neutral opening.
///
/// `fma` is the probability increment that white wins purely from moving
/// first; `imp` is the probability that move imperfections decide an
/// otherwise drawn game, shared equally by both sides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeutralModel {
    pub fma: f64,
    pub imp: f64,
}

impl NeutralModel {
    pub fn new(fma: f64, imp: f64) -> Result<Self, ModelError> {
        if !(0.0..=1.0).contains(&fma) || fma.is_nan() {
            return Err(ModelError::OutOfRange {
                name: "fma",
                value: fma,
            });
        }
        if !(0.0..=1.0).contains(&imp) || imp.is_nan() {
            return Err(ModelError::OutOfRange {
                name: "imp",
                value: imp,
            });
        }
        if fma + imp > 1.0 + PROB_TOLERANCE {
            return Err(ModelError::ExcessiveSum { sum: fma + imp });
        }
        Ok(Self { fma, imp })
    }

    /// Inverts the neutral decomposition on observed tallies:
    /// `imp = 2 b/n`, `fma = (w - b)/n`.
    ///
    /// This is the unique algebraic inverse of [`ProbabilityVector::neutral`]
    /// and requires `white >= black`; an opening where black out-scores white
    /// cannot be interpreted as neutral.
    pub fn from_counts(counts: &OutcomeCounts) -> Result<Self, ModelError> {
        if counts.total == 0 {
            return Err(ModelError::EmptySample);
        }
        if counts.black > counts.white {
            return Err(ModelError::NeutralModelInapplicable {
                white: counts.white,
                black: counts.black,
            });
        }
        let n = f64::from(counts.total);
        let imp = 2.0 * f64::from(counts.black) / n;
        let fma = f64::from(counts.white - counts.black) / n;
        Self::new(fma, imp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_close(got: f64, want: f64, tol: f64) {
        assert!(
            (got - want).abs() <= tol,
            "got {got}, want {want} (tol {tol})"
        );
    }

    fn assert_vector(v: &ProbabilityVector, want: [f64; 3], tol: f64) {
        assert_close(v.p_w(), want[0], tol);
        assert_close(v.p_b(), want[1], tol);
        assert_close(v.p_d(), want[2], tol);
    }

    #[test]
    fn vector_from_win_probabilities() {
        let v = ProbabilityVector::new(0.09, 0.05).unwrap();
        assert_vector(&v, [0.09, 0.05, 0.86], PROB_TOLERANCE);

        let v = ProbabilityVector::new(0.0, 0.0).unwrap();
        assert_vector(&v, [0.0, 0.0, 1.0], 0.0);

        let v = ProbabilityVector::new(0.07, 0.0067).unwrap();
        assert_vector(&v, [0.07, 0.0067, 0.9233], PROB_TOLERANCE);
    }

    #[test]
    fn vector_rejects_bad_inputs() {
        assert!(matches!(
            ProbabilityVector::new(-0.1, 0.2),
            Err(ModelError::OutOfRange { name: "p_w", .. })
        ));
        assert!(matches!(
            ProbabilityVector::new(0.1, -0.2),
            Err(ModelError::OutOfRange { name: "p_b", .. })
        ));
        assert!(matches!(
            ProbabilityVector::new(0.7, 0.4),
            Err(ModelError::ExcessiveSum { .. })
        ));
    }

    #[test]
    fn neutral_vector_worked_examples() {
        let v = ProbabilityVector::neutral(NeutralModel::new(0.04, 0.10).unwrap()).unwrap();
        assert_vector(&v, [0.09, 0.05, 0.86], PROB_TOLERANCE);

        let v = ProbabilityVector::neutral(NeutralModel::new(0.04, 0.02).unwrap()).unwrap();
        assert_vector(&v, [0.05, 0.01, 0.94], PROB_TOLERANCE);

        let v = ProbabilityVector::neutral(NeutralModel::new(0.0, 0.0).unwrap()).unwrap();
        assert_vector(&v, [0.0, 0.0, 1.0], 0.0);
    }

    #[test]
    fn estimate_from_counts() {
        let v = OutcomeCounts::new(16, 3, 281).estimate().unwrap();
        assert_vector(&v, [16.0 / 300.0, 0.01, 281.0 / 300.0], PROB_TOLERANCE);
        // quoted to four decimals
        assert_vector(&v, [0.0533, 0.01, 0.9367], 5e-5);

        let v = OutcomeCounts::new(0, 0, 10).estimate().unwrap();
        assert_vector(&v, [0.0, 0.0, 1.0], 0.0);

        let v = OutcomeCounts::new(21, 2, 277).estimate().unwrap();
        assert_vector(&v, [0.07, 0.0067, 0.9233], 5e-5);
    }

    #[test]
    fn estimate_rejects_empty_sample() {
        assert_eq!(
            OutcomeCounts::new(0, 0, 0).estimate(),
            Err(ModelError::EmptySample)
        );
    }

    #[test]
    fn with_total_checks_the_sum() {
        assert!(OutcomeCounts::with_total(16, 3, 281, 300).is_ok());
        assert!(matches!(
            OutcomeCounts::with_total(16, 3, 281, 299),
            Err(ModelError::CountMismatch { .. })
        ));
    }

    #[test]
    fn neutral_model_from_pooled_baselines() {
        // pooled 600-game baseline sample: w=37, b=5
        let m = NeutralModel::from_counts(&OutcomeCounts::new(37, 5, 558)).unwrap();
        assert_close(m.imp, 10.0 / 600.0, PROB_TOLERANCE);
        assert_close(m.fma, 32.0 / 600.0, PROB_TOLERANCE);
        assert_close(m.imp, 0.01667, 5e-5);
        assert_close(m.fma, 0.05333, 5e-5);

        let m = NeutralModel::from_counts(&OutcomeCounts::new(10, 0, 90)).unwrap();
        assert_close(m.imp, 0.0, 0.0);
        assert_close(m.fma, 0.10, PROB_TOLERANCE);

        let m = NeutralModel::from_counts(&OutcomeCounts::new(0, 0, 50)).unwrap();
        assert_close(m.imp, 0.0, 0.0);
        assert_close(m.fma, 0.0, 0.0);
    }

    #[test]
    fn neutral_model_rejects_black_majority() {
        assert!(matches!(
            NeutralModel::from_counts(&OutcomeCounts::new(3, 7, 290)),
            Err(ModelError::NeutralModelInapplicable { white: 3, black: 7 })
        ));
    }

    proptest! {
        // Exact expected counts of a neutral vector invert back to the
        // same parameters.
        #[test]
        fn neutral_round_trip(white in 0u32..600, black in 0u32..600, draws in 0u32..600) {
            prop_assume!(white >= black);
            prop_assume!(white + black + draws > 0);
            let counts = OutcomeCounts::new(white, black, draws);
            let m = NeutralModel::from_counts(&counts).unwrap();
            let v = ProbabilityVector::neutral(m).unwrap();
            let n = f64::from(counts.total);
            // expected counts of the reconstructed vector equal the originals
            prop_assert!((v.p_w() * n - f64::from(white)).abs() < 1e-9 * n);
            prop_assert!((v.p_b() * n - f64::from(black)).abs() < 1e-9 * n);
            // and inverting once more reproduces the parameters
            let m2 = NeutralModel::from_counts(&counts).unwrap();
            prop_assert!((m2.fma - m.fma).abs() < PROB_TOLERANCE);
            prop_assert!((m2.imp - m.imp).abs() < PROB_TOLERANCE);
        }

        #[test]
        fn estimates_sum_to_one(white in 0u32..1000, black in 0u32..1000, draws in 0u32..1000) {
            prop_assume!(white + black + draws > 0);
            let v = OutcomeCounts::new(white, black, draws).estimate().unwrap();
            prop_assert!((v.p_w() + v.p_b() + v.p_d() - 1.0).abs() <= PROB_TOLERANCE);
        }

        // Increasing imp strictly increases p_b; increasing fma increases
        // p_w and leaves p_b alone.
        #[test]
        fn neutral_vector_is_monotone(fma in 0.0f64..0.4, imp in 0.0f64..0.4, bump in 1e-6f64..0.1) {
            let base = ProbabilityVector::neutral(NeutralModel::new(fma, imp).unwrap()).unwrap();
            let more_imp = ProbabilityVector::neutral(NeutralModel::new(fma, imp + bump).unwrap()).unwrap();
            let more_fma = ProbabilityVector::neutral(NeutralModel::new(fma + bump, imp).unwrap()).unwrap();
            prop_assert!(more_imp.p_b() > base.p_b());
            prop_assert!(more_fma.p_w() > base.p_w());
            prop_assert!((more_fma.p_b() - base.p_b()).abs() == 0.0);
        }
    }
}
