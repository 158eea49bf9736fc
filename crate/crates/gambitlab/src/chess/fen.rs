//! FEN import and export (standard six-field records).

use super::position::{Board, CastlingRights};
use super::{Color, Piece, Position, Square};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FenError {
    #[error("FEN must have six fields, found {0}")]
    FieldCount(usize),
    #[error("bad piece placement: {0}")]
    Placement(String),
    #[error("bad side to move: {0:?}")]
    SideToMove(String),
    #[error("bad castling field: {0:?}")]
    Castling(String),
    #[error("bad en-passant field: {0:?}")]
    EnPassant(String),
    #[error("bad clock field: {0:?}")]
    Clock(String),
    #[error("each side must have exactly one king")]
    KingCount,
    #[error("the side not to move is in check")]
    OpponentInCheck,
}

impl Position {
    pub fn from_fen(fen: &str) -> Result<Position, FenError> {
        let fields: Vec<&str> = fen.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(FenError::FieldCount(fields.len()));
        }

        let mut board: Board = [None; 64];
        let ranks: Vec<&str> = fields[0].split('/').collect();
        if ranks.len() != 8 {
            return Err(FenError::Placement(format!(
                "{} ranks instead of 8",
                ranks.len()
            )));
        }
        for (row, rank_text) in ranks.iter().enumerate() {
            let rank = 7 - row as u8;
            let mut file = 0u8;
            for c in rank_text.chars() {
                if let Some(skip) = c.to_digit(10) {
                    file += skip as u8;
                    continue;
                }
                if file >= 8 {
                    return Err(FenError::Placement(format!("rank {rank_text} overflows")));
                }
                let color = if c.is_ascii_uppercase() {
                    Color::White
                } else {
                    Color::Black
                };
                let piece = match c.to_ascii_lowercase() {
                    'p' => Piece::Pawn,
                    'n' => Piece::Knight,
                    'b' => Piece::Bishop,
                    'r' => Piece::Rook,
                    'q' => Piece::Queen,
                    'k' => Piece::King,
                    other => {
                        return Err(FenError::Placement(format!("unknown piece {other:?}")))
                    }
                };
                board[Square::new(file, rank).index()] = Some((color, piece));
                file += 1;
            }
            if file != 8 {
                return Err(FenError::Placement(format!(
                    "rank {rank_text} covers {file} files"
                )));
            }
        }

        let side_to_move = match fields[1] {
            "w" => Color::White,
            "b" => Color::Black,
            other => return Err(FenError::SideToMove(other.to_string())),
        };

        let mut castling = CastlingRights::none();
        if fields[2] != "-" {
            for c in fields[2].chars() {
                let flag = match c {
                    'K' => CastlingRights::WHITE_KINGSIDE,
                    'Q' => CastlingRights::WHITE_QUEENSIDE,
                    'k' => CastlingRights::BLACK_KINGSIDE,
                    'q' => CastlingRights::BLACK_QUEENSIDE,
                    other => return Err(FenError::Castling(other.to_string())),
                };
                castling.set(flag);
            }
        }

        let ep_target = match fields[3] {
            "-" => None,
            text => Some(Square::parse(text).ok_or_else(|| FenError::EnPassant(text.into()))?),
        };

        let halfmove_clock: u32 = fields[4]
            .parse()
            .map_err(|_| FenError::Clock(fields[4].into()))?;
        let fullmove_number: u32 = fields[5]
            .parse()
            .map_err(|_| FenError::Clock(fields[5].into()))?;
        if fullmove_number == 0 {
            return Err(FenError::Clock(fields[5].into()));
        }

        for color in [Color::White, Color::Black] {
            let kings = board
                .iter()
                .filter(|&&p| p == Some((color, Piece::King)))
                .count();
            if kings != 1 {
                return Err(FenError::KingCount);
            }
        }

        let mut pos = Position {
            board,
            side_to_move,
            castling,
            ep_target,
            halfmove_clock,
            fullmove_number,
            history: Vec::new(),
        };
        let opponent = side_to_move.opponent();
        if pos.square_attacked(pos.king_square(opponent), side_to_move) {
            return Err(FenError::OpponentInCheck);
        }
        pos.history.push(pos.key());
        Ok(pos)
    }

    pub fn to_fen(&self) -> String {
        let mut out = String::new();
        for row in 0..8u8 {
            let rank = 7 - row;
            let mut empty = 0;
            for file in 0..8u8 {
                match self.board[Square::new(file, rank).index()] {
                    None => empty += 1,
                    Some((color, piece)) => {
                        if empty > 0 {
                            out.push_str(&empty.to_string());
                            empty = 0;
                        }
                        let c = piece.letter();
                        out.push(if color == Color::White {
                            c
                        } else {
                            c.to_ascii_lowercase()
                        });
                    }
                }
            }
            if empty > 0 {
                out.push_str(&empty.to_string());
            }
            if rank > 0 {
                out.push('/');
            }
        }
        out.push(' ');
        out.push(if self.side_to_move == Color::White {
            'w'
        } else {
            'b'
        });
        out.push(' ');
        let mut any = false;
        for (flag, c) in [
            (CastlingRights::WHITE_KINGSIDE, 'K'),
            (CastlingRights::WHITE_QUEENSIDE, 'Q'),
            (CastlingRights::BLACK_KINGSIDE, 'k'),
            (CastlingRights::BLACK_QUEENSIDE, 'q'),
        ] {
            if self.castling.has(flag) {
                out.push(c);
                any = true;
            }
        }
        if !any {
            out.push('-');
        }
        out.push(' ');
        match self.ep_target {
            Some(sq) => out.push_str(&sq.to_string()),
            None => out.push('-'),
        }
        out.push_str(&format!(" {} {}", self.halfmove_clock, self.fullmove_number));
        out
    }
}
