//! Minimal, fully legal chess move engine.
//!
//! Covers exactly what driving and validating engine matches requires:
//! position representation, legal move generation, move application,
//! terminal-state detection, SAN/coordinate move text, and FEN. All chess
//! *skill* lives in the engines under test; this module only knows the
//! rules.

mod fen;
mod position;
mod san;

pub use fen::FenError;
pub use position::{perft, IllegalMove, Position};
pub use san::{parse_move, san, MoveError};

/// Side to move or piece colour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub fn opponent(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }
}

impl std::fmt::Display for Color {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Color::White => write!(f, "white"),
            Color::Black => write!(f, "black"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Piece {
    Pawn,
    Knight,
    Bishop,
    Rook,
    Queen,
    King,
}

impl Piece {
    pub fn letter(self) -> char {
        match self {
            Piece::Pawn => 'P',
            Piece::Knight => 'N',
            Piece::Bishop => 'B',
            Piece::Rook => 'R',
            Piece::Queen => 'Q',
            Piece::King => 'K',
        }
    }

    fn from_promotion_char(c: char) -> Option<Piece> {
        match c.to_ascii_lowercase() {
            'q' => Some(Piece::Queen),
            'r' => Some(Piece::Rook),
            'b' => Some(Piece::Bishop),
            'n' => Some(Piece::Knight),
            _ => None,
        }
    }
}

/// Board square, indexed 0..64 as `rank * 8 + file` with a1 = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Square(u8);

impl Square {
    pub fn new(file: u8, rank: u8) -> Square {
        debug_assert!(file < 8 && rank < 8);
        Square(rank * 8 + file)
    }

    pub fn from_index(index: u8) -> Square {
        debug_assert!(index < 64);
        Square(index)
    }

    pub fn index(self) -> usize {
        usize::from(self.0)
    }

    pub fn file(self) -> u8 {
        self.0 % 8
    }

    pub fn rank(self) -> u8 {
        self.0 / 8
    }

    /// Offsets the square by file/rank deltas, if it stays on the board.
    pub fn offset(self, df: i8, dr: i8) -> Option<Square> {
        let file = self.file() as i8 + df;
        let rank = self.rank() as i8 + dr;
        if (0..8).contains(&file) && (0..8).contains(&rank) {
            Some(Square::new(file as u8, rank as u8))
        } else {
            None
        }
    }

    pub fn parse(text: &str) -> Option<Square> {
        let bytes = text.as_bytes();
        if bytes.len() != 2 {
            return None;
        }
        let file = bytes[0].checked_sub(b'a')?;
        let rank = bytes[1].checked_sub(b'1')?;
        if file < 8 && rank < 8 {
            Some(Square::new(file, rank))
        } else {
            None
        }
    }
}

impl std::fmt::Display for Square {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}{}",
            char::from(b'a' + self.file()),
            char::from(b'1' + self.rank())
        )
    }
}

/// A move: from-square, to-square, and a promotion piece for pawns reaching
/// the last rank. Castling is encoded as the king moving two files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Move {
    pub from: Square,
    pub to: Square,
    pub promotion: Option<Piece>,
}

impl Move {
    pub fn new(from: Square, to: Square) -> Move {
        Move {
            from,
            to,
            promotion: None,
        }
    }

    pub fn promoting(from: Square, to: Square, piece: Piece) -> Move {
        Move {
            from,
            to,
            promotion: Some(piece),
        }
    }

    /// Parses long-algebraic coordinate form, e.g. `e2e4` or `e7e8q`.
    pub fn parse_coordinate(text: &str) -> Option<Move> {
        if !(4..=5).contains(&text.len()) {
            return None;
        }
        let from = Square::parse(&text[0..2])?;
        let to = Square::parse(&text[2..4])?;
        let promotion = match text.len() {
            5 => Some(Piece::from_promotion_char(text.chars().nth(4)?)?),
            _ => None,
        };
        Some(Move {
            from,
            to,
            promotion,
        })
    }
}

impl std::fmt::Display for Move {
    /// Coordinate notation, as used on the wire with engines.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}", self.from, self.to)?;
        if let Some(p) = self.promotion {
            write!(f, "{}", p.letter().to_ascii_lowercase())?;
        }
        Ok(())
    }
}

/// Why a finished game ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndReason {
    Checkmate,
    Stalemate,
    FiftyMove,
    ThreefoldRepetition,
    InsufficientMaterial,
    Adjudicated,
    Resignation,
}

impl std::fmt::Display for EndReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            EndReason::Checkmate => "checkmate",
            EndReason::Stalemate => "stalemate",
            EndReason::FiftyMove => "fifty-move rule",
            EndReason::ThreefoldRepetition => "threefold repetition",
            EndReason::InsufficientMaterial => "insufficient material",
            EndReason::Adjudicated => "adjudicated",
            EndReason::Resignation => "resignation",
        };
        write!(f, "{name}")
    }
}

impl EndReason {
    pub(crate) fn parse(text: &str) -> Option<EndReason> {
        Some(match text {
            "checkmate" => EndReason::Checkmate,
            "stalemate" => EndReason::Stalemate,
            "fifty-move rule" => EndReason::FiftyMove,
            "threefold repetition" => EndReason::ThreefoldRepetition,
            "insufficient material" => EndReason::InsufficientMaterial,
            "adjudicated" => EndReason::Adjudicated,
            "resignation" => EndReason::Resignation,
            _ => return None,
        })
    }
}

/// Game state: ongoing, or one of the three terminal outcomes with the rule
/// that produced it. Wins arise only from checkmate, adjudication, or
/// resignation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameStatus {
    Ongoing,
    WhiteWins(EndReason),
    BlackWins(EndReason),
    Draw(EndReason),
}

impl GameStatus {
    pub fn is_terminal(&self) -> bool {
        !matches!(self, GameStatus::Ongoing)
    }

    /// PGN result token.
    pub fn result_token(&self) -> &'static str {
        match self {
            GameStatus::Ongoing => "*",
            GameStatus::WhiteWins(_) => "1-0",
            GameStatus::BlackWins(_) => "0-1",
            GameStatus::Draw(_) => "1/2-1/2",
        }
    }

    pub fn reason(&self) -> Option<EndReason> {
        match self {
            GameStatus::Ongoing => None,
            GameStatus::WhiteWins(r) | GameStatus::BlackWins(r) | GameStatus::Draw(r) => Some(*r),
        }
    }

    pub fn win_for(color: Color, reason: EndReason) -> GameStatus {
        debug_assert!(matches!(
            reason,
            EndReason::Checkmate | EndReason::Adjudicated | EndReason::Resignation
        ));
        match color {
            Color::White => GameStatus::WhiteWins(reason),
            Color::Black => GameStatus::BlackWins(reason),
        }
    }
}
