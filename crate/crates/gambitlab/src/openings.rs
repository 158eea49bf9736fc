//! Opening specifications, rarity ratios, and ECO prefix tagging.
//!
//! An opening here is a forced prefix of exactly six half-moves. Test
//! openings depart from their group's baseline at a marked half-move (the
//! innovation); the rarity of an innovation is the frequency of the
//! baseline move divided by the frequency of the innovation at a chosen
//! rating floor, both supplied by the caller.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chess::{parse_move, Color, Move, Position};

/// Forced prefixes are fixed at six half-moves so every compared experiment
/// hands the engines the board at the same ply.
pub const PREFIX_PLIES: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    Baseline,
    Test,
}

/// A forced opening prefix with its identifying metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpeningSpec {
    pub eco: String,
    pub name: String,
    /// Exactly six half-moves in SAN.
    pub prefix: Vec<String>,
    pub role: Role,
    /// 1-based index of the half-move that departs from the baseline stem;
    /// `None` for baselines.
    pub innovation_ply: Option<u8>,
    /// Links a test opening to its baseline.
    pub group: String,
}

#[derive(Debug, Error)]
pub enum OpeningError {
    #[error("half-move {ply} ({text:?}) of {eco} is not legal: {message}")]
    IllegalPrefix {
        eco: String,
        ply: usize,
        text: String,
        message: String,
    },
}

impl OpeningSpec {
    pub fn new(
        eco: impl Into<String>,
        name: impl Into<String>,
        prefix: [&str; PREFIX_PLIES],
        role: Role,
        innovation_ply: Option<u8>,
        group: impl Into<String>,
    ) -> Self {
        Self {
            eco: eco.into(),
            name: name.into(),
            prefix: prefix.iter().map(|s| s.to_string()).collect(),
            role,
            innovation_ply,
            group: group.into(),
        }
    }

    pub fn label(&self) -> String {
        format!("{} {}", self.eco, self.name)
    }

    /// Replays the prefix from the initial position, validating legality.
    pub fn prefix_moves(&self) -> Result<Vec<Move>, OpeningError> {
        let mut pos = Position::initial();
        let mut moves = Vec::with_capacity(self.prefix.len());
        for (i, text) in self.prefix.iter().enumerate() {
            let mv = parse_move(&pos, text).map_err(|e| OpeningError::IllegalPrefix {
                eco: self.eco.clone(),
                ply: i + 1,
                text: text.clone(),
                message: e.to_string(),
            })?;
            pos = pos.apply(&mv).expect("parsed moves are legal");
            moves.push(mv);
        }
        Ok(moves)
    }

    /// The side that played the innovation: odd plies are white's.
    pub fn innovator(&self) -> Option<Color> {
        self.innovation_ply.map(|ply| {
            if ply % 2 == 1 {
                Color::White
            } else {
                Color::Black
            }
        })
    }

    /// Checks prefix legality, length, and consistency with the baseline
    /// stem. Violations are data for the caller, not failures.
    pub fn validate(&self, baseline: Option<&OpeningSpec>) -> ValidationReport {
        let mut violations = Vec::new();
        if self.prefix.len() != PREFIX_PLIES {
            violations.push(format!(
                "prefix has {} half-moves; exactly {PREFIX_PLIES} are required",
                self.prefix.len()
            ));
        }
        if let Err(e) = self.prefix_moves() {
            violations.push(e.to_string());
        }
        match (self.role, self.innovation_ply) {
            (Role::Baseline, Some(_)) => {
                violations.push("a baseline cannot carry an innovation marker".to_string());
            }
            (Role::Test, None) => {
                violations.push("a test opening must mark its innovation ply".to_string());
            }
            (Role::Test, Some(ply)) if !(1..=PREFIX_PLIES as u8).contains(&ply) => {
                violations.push(format!("innovation ply {ply} outside 1..={PREFIX_PLIES}"));
            }
            _ => {}
        }
        if let (Some(base), Some(ply)) = (baseline, self.innovation_ply) {
            let stem = usize::from(ply) - 1;
            if base.prefix.len() >= stem && self.prefix.len() >= stem {
                if self.prefix[..stem] != base.prefix[..stem] {
                    violations.push(format!(
                        "prefix does not share the baseline stem up to half-move {}",
                        stem
                    ));
                }
                if self.prefix.get(stem).is_some()
                    && self.prefix.get(stem) == base.prefix.get(stem)
                {
                    violations.push(format!(
                        "half-move {ply} does not depart from the baseline"
                    ));
                }
            }
        }
        ValidationReport { violations }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Frequencies of the baseline move and the innovation at a rating floor,
/// as counted in a game database chosen by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RarityInput {
    pub baseline_move_frequency: u64,
    pub innovation_frequency: u64,
    /// Minimum Elo of the games behind the frequencies (metadata only).
    pub rating_floor: u32,
}

#[derive(Debug, Error, PartialEq)]
#[error("rarity frequencies must be positive (baseline {baseline}, innovation {innovation})")]
pub struct RarityError {
    baseline: u64,
    innovation: u64,
}

impl RarityInput {
    pub fn new(
        baseline_move_frequency: u64,
        innovation_frequency: u64,
        rating_floor: u32,
    ) -> Result<Self, RarityError> {
        if baseline_move_frequency == 0 || innovation_frequency == 0 {
            return Err(RarityError {
                baseline: baseline_move_frequency,
                innovation: innovation_frequency,
            });
        }
        Ok(Self {
            baseline_move_frequency,
            innovation_frequency,
            rating_floor,
        })
    }

    /// How many times more often the baseline move is played than the
    /// innovation.
    pub fn rarity_ratio(&self) -> f64 {
        self.baseline_move_frequency as f64 / self.innovation_frequency as f64
    }
}

/// The built-in dataset: two baseline openings and ten test openings, in
/// two groups keyed to their baselines.
pub fn builtin_openings() -> Vec<OpeningSpec> {
    vec![
        OpeningSpec::new(
            "C68",
            "Ruy Lopez",
            ["e4", "e5", "Nf3", "Nc6", "Bb5", "a6"],
            Role::Baseline,
            None,
            "1",
        ),
        OpeningSpec::new(
            "C61",
            "Bird Defense",
            ["e4", "e5", "Nf3", "Nc6", "Bb5", "Nd4"],
            Role::Test,
            Some(6),
            "1",
        ),
        OpeningSpec::new(
            "C50",
            "Giuoco Piano",
            ["e4", "e5", "Nf3", "Nc6", "Bc4", "Bc5"],
            Role::Test,
            Some(5),
            "1",
        ),
        OpeningSpec::new(
            "C44",
            "Scotch Game",
            ["e4", "e5", "Nf3", "Nc6", "d4", "exd4"],
            Role::Test,
            Some(5),
            "1",
        ),
        OpeningSpec::new(
            "C41",
            "Philidor",
            ["e4", "e5", "Nf3", "d6", "d4", "exd4"],
            Role::Test,
            Some(4),
            "1",
        ),
        OpeningSpec::new(
            "C37",
            "Kings Gambit",
            ["e4", "e5", "f4", "exf4", "Nf3", "g5"],
            Role::Test,
            Some(3),
            "1",
        ),
        OpeningSpec::new(
            "B53",
            "Sicilian Defense",
            ["e4", "c5", "Nf3", "d6", "d4", "cxd4"],
            Role::Baseline,
            None,
            "2",
        ),
        OpeningSpec::new(
            "B21",
            "Smith Morra",
            ["e4", "c5", "d4", "cxd4", "c3", "dxc3"],
            Role::Test,
            Some(3),
            "2",
        ),
        OpeningSpec::new(
            "B22",
            "Sicilian Alapin",
            ["e4", "c5", "c3", "d5", "exd5", "Qxd5"],
            Role::Test,
            Some(3),
            "2",
        ),
        OpeningSpec::new(
            "B12",
            "Caro Kann",
            ["e4", "c6", "d4", "d5", "e5", "Bf5"],
            Role::Test,
            Some(2),
            "2",
        ),
        OpeningSpec::new(
            "B01",
            "Scandinavian",
            ["e4", "d5", "exd5", "Qxd5", "Nc3", "Qd6"],
            Role::Test,
            Some(2),
            "2",
        ),
        OpeningSpec::new(
            "B07",
            "Pirc",
            ["e4", "d6", "d4", "Nf6", "Nc3", "g6"],
            Role::Test,
            Some(2),
            "2",
        ),
    ]
}

/// Looks up a built-in opening by ECO code.
pub fn builtin_opening(eco: &str) -> Option<OpeningSpec> {
    builtin_openings().into_iter().find(|o| o.eco == eco)
}

// Prefix table for ECO tagging: the twelve openings above plus the deeper
// lines that games forced into them are known to transpose to.
const ECO_PREFIXES: &[(&str, &[&str])] = &[
    ("C68", &["e4", "e5", "Nf3", "Nc6", "Bb5", "a6"]),
    ("C61", &["e4", "e5", "Nf3", "Nc6", "Bb5", "Nd4"]),
    ("C50", &["e4", "e5", "Nf3", "Nc6", "Bc4", "Bc5"]),
    (
        "C54",
        &["e4", "e5", "Nf3", "Nc6", "Bc4", "Bc5", "c3", "Nf6", "d4"],
    ),
    ("C44", &["e4", "e5", "Nf3", "Nc6", "d4", "exd4"]),
    ("C45", &["e4", "e5", "Nf3", "Nc6", "d4", "exd4", "Nxd4"]),
    ("C41", &["e4", "e5", "Nf3", "d6", "d4", "exd4"]),
    ("C37", &["e4", "e5", "f4", "exf4", "Nf3", "g5"]),
    ("C39", &["e4", "e5", "f4", "exf4", "Nf3", "g5", "h4"]),
    ("B53", &["e4", "c5", "Nf3", "d6", "d4", "cxd4"]),
    (
        "B90",
        &["e4", "c5", "Nf3", "d6", "d4", "cxd4", "Nxd4", "Nf6", "Nc3", "a6"],
    ),
    (
        "B92",
        &[
            "e4", "c5", "Nf3", "d6", "d4", "cxd4", "Nxd4", "Nf6", "Nc3", "a6", "Be2",
        ],
    ),
    (
        "B73",
        &[
            "e4", "c5", "Nf3", "d6", "d4", "cxd4", "Nxd4", "Nf6", "Nc3", "g6", "Be2",
        ],
    ),
    (
        "B76",
        &[
            "e4", "c5", "Nf3", "d6", "d4", "cxd4", "Nxd4", "Nf6", "Nc3", "g6", "Be3", "Bg7", "f3",
        ],
    ),
    ("B21", &["e4", "c5", "d4", "cxd4", "c3", "dxc3"]),
    ("B22", &["e4", "c5", "c3", "d5", "exd5", "Qxd5"]),
    ("B12", &["e4", "c6", "d4", "d5", "e5", "Bf5"]),
    ("B01", &["e4", "d5", "exd5", "Qxd5", "Nc3", "Qd6"]),
    ("B07", &["e4", "d6", "d4", "Nf6", "Nc3", "g6"]),
    ("B08", &["e4", "d6", "d4", "Nf6", "Nc3", "g6", "Nf3"]),
    ("A43", &["d4", "c5"]),
];

fn eco_move_table() -> &'static Vec<(&'static str, Vec<Move>)> {
    static TABLE: OnceLock<Vec<(&'static str, Vec<Move>)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        ECO_PREFIXES
            .iter()
            .map(|&(code, sans)| {
                let mut pos = Position::initial();
                let mut moves = Vec::with_capacity(sans.len());
                for text in sans {
                    let mv = parse_move(&pos, text)
                        .unwrap_or_else(|e| panic!("bad table entry {code}: {e}"));
                    pos = pos.apply(&mv).expect("table moves are legal");
                    moves.push(mv);
                }
                (code, moves)
            })
            .collect()
    })
}

/// Tags a move sequence with the ECO code of the longest matching prefix in
/// the built-in table, or `None` when no entry matches.
pub fn eco_tag(moves: &[Move]) -> Option<&'static str> {
    eco_move_table()
        .iter()
        .filter(|(_, prefix)| moves.len() >= prefix.len() && moves[..prefix.len()] == prefix[..])
        .max_by_key(|(_, prefix)| prefix.len())
        .map(|&(code, _)| code)
}
