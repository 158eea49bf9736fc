//! Controlled experiments for comparing chess openings.
//!
//! Chess game outcomes are modelled as draws of a three-sided loaded coin
//! driven by an unobservable probability vector `[p_w, p_b, p_d]`. To
//! measure the effect of an opening on that vector, identical copies of one
//! engine play both sides of a match under a forced opening prefix; the
//! observed win tallies estimate the vector, Monte Carlo resampling measures
//! the estimate's dispersion, and a centroid-distance test decides whether
//! two openings could share a generator. Rejected innovations are graded by
//! direction: successful, benign, or failed.
//!
//! The crate is organised around that pipeline:
//!
//! - [`model`] — the trinomial vector, observed counts, and the
//!   first-move-advantage/imperfection decomposition;
//! - [`sim`] — seeded Monte Carlo resampling, cluster centroids, and radial
//!   dispersion;
//! - [`hypothesis`] — distance tests, the multiple-comparison budget, and
//!   innovation grading;
//! - [`chess`] — a minimal fully-legal rules engine (move generation, SAN,
//!   FEN) used to drive and validate matches;
//! - [`openings`] — forced opening prefixes, rarity ratios, and ECO prefix
//!   tagging, with a built-in dataset of twelve reference openings;
//! - [`pgn`] — game archive import/export;
//! - [`uci`] — a UCI subprocess harness that plays engine-vs-engine matches
//!   under controlled settings, plus a synthetic mode for validating the
//!   statistics without engines;
//! - [`study`] — experiment configuration, batch orchestration, and
//!   reproducible report emission.
//!
//! ```
//! use gambitlab::hypothesis::{compare, Decision};
//! use gambitlab::model::OutcomeCounts;
//!
//! // two 300-game matches, compared at the per-test error rate 0.001
//! let test = OutcomeCounts::new(56, 2, 242);
//! let base = OutcomeCounts::new(16, 3, 281);
//! let result = compare(&test, &base, 1000, 42, 0.001).unwrap();
//! assert_eq!(result.decision, Decision::Reject);
//! ```

pub mod chess;
pub mod hypothesis;
pub mod model;
pub mod openings;
pub mod pgn;
pub mod sim;
pub mod study;
pub mod uci;
