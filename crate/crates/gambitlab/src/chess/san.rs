//! Standard algebraic notation and coordinate move text.

use super::{Color, Move, Piece, Position, Square};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MoveError {
    #[error("cannot parse move text {text:?}")]
    Malformed { text: String },
    #[error("{text:?} matches {count} legal moves; disambiguation required")]
    Ambiguous { text: String, count: usize },
    #[error("{text:?} does not denote a legal move here")]
    NoLegalMatch { text: String },
}

/// Parses SAN (`Nf3`, `exd4`, `O-O`, `e8=Q`) or coordinate form (`g1f3`,
/// `e7e8q`) into the unique legal move it denotes.
pub fn parse_move(pos: &Position, text: &str) -> Result<Move, MoveError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(MoveError::Malformed {
            text: text.to_string(),
        });
    }
    // coordinate syntax is unambiguous, try it first
    if let Some(mv) = Move::parse_coordinate(trimmed) {
        return if pos.legal_moves().contains(&mv) {
            Ok(mv)
        } else {
            Err(MoveError::NoLegalMatch {
                text: trimmed.to_string(),
            })
        };
    }
    parse_san(pos, trimmed)
}

fn parse_san(pos: &Position, text: &str) -> Result<Move, MoveError> {
    let malformed = || MoveError::Malformed {
        text: text.to_string(),
    };

    let mut s = text
        .trim_end_matches(['+', '#', '!', '?'])
        .trim_end_matches("e.p.")
        .trim_end_matches(['+', '#', '!', '?']);

    let legal = pos.legal_moves();

    // castling
    let normalized = s.replace('0', "O");
    if normalized == "O-O" || normalized == "O-O-O" {
        let rank = if pos.side_to_move() == Color::White { 0 } else { 7 };
        let to_file = if normalized == "O-O" { 6 } else { 2 };
        let mv = Move::new(Square::new(4, rank), Square::new(to_file, rank));
        return if legal.contains(&mv) {
            Ok(mv)
        } else {
            Err(MoveError::NoLegalMatch {
                text: text.to_string(),
            })
        };
    }

    // promotion suffix: "=Q" per the standard, bare "Q" accepted leniently
    let mut promotion = None;
    if let Some(stripped) = s.strip_suffix(['Q', 'R', 'B', 'N']) {
        let piece = Piece::from_promotion_char(s.chars().last().unwrap()).unwrap();
        if stripped.ends_with('=') {
            promotion = Some(piece);
            s = &s[..stripped.len() - 1];
        } else if stripped
            .chars()
            .last()
            .is_some_and(|c| c.is_ascii_digit())
            && stripped.len() >= 2
        {
            promotion = Some(piece);
            s = stripped;
        }
    }

    if s.len() < 2 {
        return Err(malformed());
    }
    let dest = Square::parse(&s[s.len() - 2..]).ok_or_else(malformed)?;
    let mut rest = &s[..s.len() - 2];

    let is_capture = rest.ends_with('x');
    if is_capture {
        rest = &rest[..rest.len() - 1];
    }

    let mut chars = rest.chars();
    let piece = match chars.clone().next() {
        Some(c @ ('K' | 'Q' | 'R' | 'B' | 'N')) => {
            chars.next();
            match c {
                'K' => Piece::King,
                'Q' => Piece::Queen,
                'R' => Piece::Rook,
                'B' => Piece::Bishop,
                _ => Piece::Knight,
            }
        }
        _ => Piece::Pawn,
    };

    let mut from_file = None;
    let mut from_rank = None;
    for c in chars {
        match c {
            'a'..='h' if from_file.is_none() => from_file = Some(c as u8 - b'a'),
            '1'..='8' if from_rank.is_none() => from_rank = Some(c as u8 - b'1'),
            _ => return Err(malformed()),
        }
    }

    if piece == Piece::Pawn && is_capture && from_file.is_none() {
        return Err(malformed());
    }

    let candidates: Vec<Move> = legal
        .iter()
        .filter(|mv| {
            mv.to == dest
                && mv.promotion == promotion
                && pos.piece_at(mv.from).map(|(_, p)| p) == Some(piece)
                && from_file.is_none_or(|f| mv.from.file() == f)
                && from_rank.is_none_or(|r| mv.from.rank() == r)
        })
        .copied()
        .collect();

    match candidates.as_slice() {
        [mv] => Ok(*mv),
        [] => Err(MoveError::NoLegalMatch {
            text: text.to_string(),
        }),
        many => Err(MoveError::Ambiguous {
            text: text.to_string(),
            count: many.len(),
        }),
    }
}

/// Renders a legal move in SAN with minimal disambiguation and check or
/// mate suffix.
pub fn san(pos: &Position, mv: &Move) -> String {
    let (_, piece) = pos.piece_at(mv.from).expect("move from an occupied square");
    let is_ep = piece == Piece::Pawn
        && pos.en_passant_target() == Some(mv.to)
        && mv.from.file() != mv.to.file();
    let is_capture = pos.piece_at(mv.to).is_some() || is_ep;

    let mut out = String::new();
    if piece == Piece::King && mv.from.file().abs_diff(mv.to.file()) == 2 {
        out.push_str(if mv.to.file() == 6 { "O-O" } else { "O-O-O" });
    } else if piece == Piece::Pawn {
        if is_capture {
            out.push(char::from(b'a' + mv.from.file()));
            out.push('x');
        }
        out.push_str(&mv.to.to_string());
        if let Some(promo) = mv.promotion {
            out.push('=');
            out.push(promo.letter());
        }
    } else {
        out.push(piece.letter());
        // minimal disambiguation among same-kind moves to the same square
        let rivals: Vec<Square> = pos
            .legal_moves()
            .iter()
            .filter(|other| {
                other.to == mv.to
                    && other.from != mv.from
                    && pos.piece_at(other.from).map(|(_, p)| p) == Some(piece)
            })
            .map(|other| other.from)
            .collect();
        if !rivals.is_empty() {
            let file_unique = rivals.iter().all(|sq| sq.file() != mv.from.file());
            let rank_unique = rivals.iter().all(|sq| sq.rank() != mv.from.rank());
            if file_unique {
                out.push(char::from(b'a' + mv.from.file()));
            } else if rank_unique {
                out.push(char::from(b'1' + mv.from.rank()));
            } else {
                out.push(char::from(b'a' + mv.from.file()));
                out.push(char::from(b'1' + mv.from.rank()));
            }
        }
        if is_capture {
            out.push('x');
        }
        out.push_str(&mv.to.to_string());
    }

    let next = pos.apply_unchecked(mv);
    if next.in_check() {
        let mate = next.legal_moves().is_empty();
        out.push(if mate { '#' } else { '+' });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn play(texts: &[&str]) -> Position {
        let mut pos = Position::initial();
        for text in texts {
            let mv = parse_move(&pos, text).unwrap();
            pos = pos.apply(&mv).unwrap();
        }
        pos
    }

    #[test]
    fn parses_simple_pawn_move() {
        let pos = Position::initial();
        let mv = parse_move(&pos, "e4").unwrap();
        assert_eq!(mv, Move::parse_coordinate("e2e4").unwrap());
    }

    #[test]
    fn parses_bishop_to_b5() {
        let pos = play(&["e4", "e5", "Nf3", "Nc6"]);
        let mv = parse_move(&pos, "Bb5").unwrap();
        assert_eq!(mv, Move::parse_coordinate("f1b5").unwrap());
    }

    #[test]
    fn rejects_illegal_king_move() {
        let pos = Position::initial();
        assert_eq!(
            parse_move(&pos, "Ke2"),
            Err(MoveError::NoLegalMatch {
                text: "Ke2".to_string()
            })
        );
    }

    #[test]
    fn rejects_garbage() {
        let pos = Position::initial();
        assert!(matches!(
            parse_move(&pos, "xyzzy"),
            Err(MoveError::Malformed { .. })
        ));
    }

    #[test]
    fn ambiguity_requires_disambiguation() {
        // knights on b1 and f3 can both reach the vacated d2
        let pos = play(&["Nf3", "e6", "d4", "d5"]);
        assert!(matches!(
            parse_move(&pos, "Nd2"),
            Err(MoveError::Ambiguous { count: 2, .. })
        ));
        let mv = parse_move(&pos, "Nbd2").unwrap();
        assert_eq!(mv.from, Square::parse("b1").unwrap());
        let mv = parse_move(&pos, "Nfd2").unwrap();
        assert_eq!(mv.from, Square::parse("f3").unwrap());
    }

    #[test]
    fn parses_castling_both_ways() {
        let pos = play(&["e4", "e5", "Nf3", "Nc6", "Bc4", "Bc5"]);
        let mv = parse_move(&pos, "O-O").unwrap();
        assert_eq!(mv, Move::parse_coordinate("e1g1").unwrap());
        let mv = parse_move(&pos, "0-0").unwrap();
        assert_eq!(mv, Move::parse_coordinate("e1g1").unwrap());
    }

    #[test]
    fn parses_promotions() {
        let pos = Position::from_fen("8/4P1k1/8/8/8/8/8/4K3 w - - 0 1").unwrap();
        let mv = parse_move(&pos, "e8=Q+").unwrap();
        assert_eq!(mv.promotion, Some(Piece::Queen));
        let mv = parse_move(&pos, "e8N").unwrap();
        assert_eq!(mv.promotion, Some(Piece::Knight));
        let mv = parse_move(&pos, "e7e8r").unwrap();
        assert_eq!(mv.promotion, Some(Piece::Rook));
    }

    #[test]
    fn renders_checks_mates_and_captures() {
        let pos = play(&["e4", "e5", "Bc4", "Nc6", "Qh5", "Nf6"]);
        let mv = parse_move(&pos, "Qxf7").unwrap();
        assert_eq!(san(&pos, &mv), "Qxf7#");

        let pos = play(&["e4", "e5", "Nf3", "Nc6"]);
        let mv = parse_move(&pos, "Bb5").unwrap();
        assert_eq!(san(&pos, &mv), "Bb5");
    }

    #[test]
    fn renders_en_passant_as_capture() {
        let pos = play(&["e4", "Nf6", "e5", "d5"]);
        let mv = parse_move(&pos, "exd6").unwrap();
        assert_eq!(san(&pos, &mv), "exd6");
    }

    #[test]
    fn san_round_trips_over_random_playouts() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..8 {
            let mut pos = Position::initial();
            for _ in 0..60 {
                let moves = pos.legal_moves();
                if moves.is_empty() || pos.status().is_terminal() {
                    break;
                }
                // every legal move must survive render-then-parse
                for mv in &moves {
                    let text = san(&pos, mv);
                    let parsed = parse_move(&pos, &text)
                        .unwrap_or_else(|e| panic!("{text} failed to re-parse: {e}"));
                    assert_eq!(parsed, *mv, "{text}");
                }
                let mv = moves[rng.random_range(0..moves.len())];
                pos = pos.apply(&mv).unwrap();
            }
        }
    }
}
