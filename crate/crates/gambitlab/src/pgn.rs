//! PGN game archive import and export.
//!
//! Export writes the seven-tag roster plus `ECO` and `Opening`, SAN movetext
//! wrapped at 80 columns, and the result marker. Two private-use tags keep
//! records lossless: `ForcedPlies` marks where the forced opening prefix
//! ends and `Termination` preserves the exact end-of-game rule. Import
//! replays every move through the rules engine, so an archive that parses is
//! also guaranteed legal; comments, variations, and numeric annotation
//! glyphs are skipped.

use std::fmt::Write as _;

use thiserror::Error;

use crate::chess::{parse_move, san, Color, EndReason, GameStatus, Position};
use crate::uci::GameRecord;

#[derive(Debug, Error, PartialEq)]
pub enum PgnError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("game {game}: move {text:?} is not legal ({message})")]
    IllegalMove {
        game: usize,
        text: String,
        message: String,
    },
    #[error("game {game}: movetext ended without a result marker")]
    MissingResult { game: usize },
}

/// Archive-level header metadata; per-game `Round` numbers are assigned from
/// the record order.
#[derive(Debug, Clone, PartialEq)]
pub struct PgnMeta {
    pub event: String,
    pub site: String,
    /// `YYYY.MM.DD`, or the standard unknown-date placeholder.
    pub date: String,
    pub white: String,
    pub black: String,
}

impl Default for PgnMeta {
    fn default() -> Self {
        Self {
            event: "?".to_string(),
            site: "?".to_string(),
            date: "????.??.??".to_string(),
            white: "?".to_string(),
            black: "?".to_string(),
        }
    }
}

fn escape_tag(value: &str) -> String {
    value.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Serializes game records as a PGN document. An empty record list yields
/// an empty document.
pub fn write_games(records: &[GameRecord], meta: &PgnMeta) -> String {
    let mut out = String::new();
    for (i, record) in records.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let result = record.status.result_token();
        let mut tag = |name: &str, value: &str| {
            writeln!(out, "[{name} \"{}\"]", escape_tag(value)).expect("string write");
        };
        tag("Event", &meta.event);
        tag("Site", &meta.site);
        tag("Date", &meta.date);
        tag("Round", &(i + 1).to_string());
        tag("White", &meta.white);
        tag("Black", &meta.black);
        tag("Result", result);
        tag("ECO", &record.eco);
        tag("Opening", &record.opening);
        if !record.prefix.is_empty() {
            tag("ForcedPlies", &record.prefix.len().to_string());
        }
        if let Some(reason) = record.status.reason() {
            tag("Termination", &reason.to_string());
        }
        out.push('\n');

        let mut tokens: Vec<String> = Vec::new();
        let mut pos = Position::initial();
        for mv in record.all_moves() {
            if pos.side_to_move() == Color::White {
                tokens.push(format!("{}.", pos.fullmove_number()));
            }
            tokens.push(san(&pos, &mv));
            pos = pos.apply(&mv).expect("game records replay legally");
        }
        tokens.push(result.to_string());

        let mut column = 0;
        for (t, token) in tokens.iter().enumerate() {
            let width = token.len() + usize::from(t > 0);
            if column + width > 80 && column > 0 {
                out.push('\n');
                column = 0;
            } else if t > 0 {
                out.push(' ');
            }
            out.push_str(token);
            column += width;
        }
        out.push('\n');
    }
    out
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner {
            bytes: text.as_bytes(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(b)
    }

    fn skip_whitespace(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.bump();
        }
    }

    fn error(&self, message: impl Into<String>) -> PgnError {
        PgnError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_whitespace();
        self.peek().is_none()
    }
}

#[derive(Debug, Default)]
struct RawGame {
    tags: Vec<(String, String)>,
    moves: Vec<String>,
    result: String,
}

impl RawGame {
    fn tag(&self, name: &str) -> Option<&str> {
        self.tags
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_str())
    }
}

fn parse_tag(scanner: &mut Scanner) -> Result<(String, String), PgnError> {
    scanner.bump(); // consume '['
    scanner.skip_whitespace();
    let mut name = String::new();
    while let Some(b) = scanner.peek() {
        if b.is_ascii_whitespace() {
            break;
        }
        name.push(scanner.bump().unwrap() as char);
    }
    scanner.skip_whitespace();
    if scanner.peek() != Some(b'"') {
        return Err(scanner.error("expected a quoted tag value"));
    }
    scanner.bump();
    let mut value = String::new();
    loop {
        match scanner.bump() {
            None => return Err(scanner.error("unterminated tag value")),
            Some(b'"') => break,
            Some(b'\\') => match scanner.bump() {
                Some(c @ (b'"' | b'\\')) => value.push(c as char),
                Some(c) => {
                    value.push('\\');
                    value.push(c as char);
                }
                None => return Err(scanner.error("unterminated escape")),
            },
            Some(c) => value.push(c as char),
        }
    }
    scanner.skip_whitespace();
    if scanner.peek() != Some(b']') {
        return Err(scanner.error("expected ']' after tag value"));
    }
    scanner.bump();
    Ok((name, value))
}

fn skip_comment(scanner: &mut Scanner) -> Result<(), PgnError> {
    scanner.bump(); // consume '{'
    loop {
        match scanner.bump() {
            None => return Err(scanner.error("unterminated comment")),
            Some(b'}') => return Ok(()),
            _ => {}
        }
    }
}

fn skip_variation(scanner: &mut Scanner) -> Result<(), PgnError> {
    scanner.bump(); // consume '('
    let mut depth = 1;
    loop {
        match scanner.bump() {
            None => return Err(scanner.error("unterminated variation")),
            Some(b'(') => depth += 1,
            Some(b')') => {
                depth -= 1;
                if depth == 0 {
                    return Ok(());
                }
            }
            Some(b'{') => {
                // a comment may hide parentheses
                loop {
                    match scanner.bump() {
                        None => return Err(scanner.error("unterminated comment")),
                        Some(b'}') => break,
                        _ => {}
                    }
                }
            }
            _ => {}
        }
    }
}

fn parse_raw_games(text: &str) -> Result<Vec<RawGame>, PgnError> {
    let mut scanner = Scanner::new(text);
    let mut games = Vec::new();
    while !scanner.at_end() {
        let mut game = RawGame::default();
        // tag pair section
        loop {
            scanner.skip_whitespace();
            match scanner.peek() {
                Some(b'[') => game.tags.push(parse_tag(&mut scanner)?),
                _ => break,
            }
        }
        // movetext section, ended by a result token
        loop {
            scanner.skip_whitespace();
            match scanner.peek() {
                None => {
                    if game.tags.is_empty() && game.moves.is_empty() {
                        break;
                    }
                    return Err(PgnError::MissingResult { game: games.len() });
                }
                Some(b'{') => skip_comment(&mut scanner)?,
                Some(b'(') => skip_variation(&mut scanner)?,
                Some(b';') => {
                    while !matches!(scanner.peek(), None | Some(b'\n')) {
                        scanner.bump();
                    }
                }
                Some(b'$') => {
                    scanner.bump();
                    while matches!(scanner.peek(), Some(b) if b.is_ascii_digit()) {
                        scanner.bump();
                    }
                }
                Some(b'[') => {
                    return Err(scanner.error("tag pair inside movetext (missing result?)"))
                }
                Some(_) => {
                    let mut token = String::new();
                    while let Some(b) = scanner.peek() {
                        if b.is_ascii_whitespace()
                            || matches!(b, b'{' | b'(' | b')' | b';' | b'$')
                        {
                            break;
                        }
                        token.push(scanner.bump().unwrap() as char);
                    }
                    match token.as_str() {
                        "1-0" | "0-1" | "1/2-1/2" | "*" => {
                            game.result = token;
                            break;
                        }
                        _ => {
                            // strip any leading move number ("12." or "12...")
                            let stripped =
                                token.trim_start_matches(|c: char| c.is_ascii_digit());
                            let stripped = stripped.trim_start_matches('.');
                            if !stripped.is_empty() {
                                game.moves.push(stripped.to_string());
                            }
                        }
                    }
                }
            }
        }
        if !game.tags.is_empty() || !game.moves.is_empty() || !game.result.is_empty() {
            games.push(game);
        }
    }
    Ok(games)
}

fn status_from(raw: &RawGame, final_position: &Position) -> GameStatus {
    let reason = raw.tag("Termination").and_then(EndReason::parse);
    match raw.result.as_str() {
        "1-0" => GameStatus::WhiteWins(reason.unwrap_or(EndReason::Resignation)),
        "0-1" => GameStatus::BlackWins(reason.unwrap_or(EndReason::Resignation)),
        "1/2-1/2" => GameStatus::Draw(reason.unwrap_or_else(|| {
            final_position
                .status()
                .reason()
                .unwrap_or(EndReason::Adjudicated)
        })),
        _ => GameStatus::Ongoing,
    }
}

/// Parses a PGN document into game records, replaying and validating every
/// move. Games come back in document order.
pub fn read_games(text: &str) -> Result<Vec<GameRecord>, PgnError> {
    let raw_games = parse_raw_games(text)?;
    let mut records = Vec::with_capacity(raw_games.len());
    for (game_index, raw) in raw_games.iter().enumerate() {
        let mut pos = Position::initial();
        let mut moves = Vec::with_capacity(raw.moves.len());
        for text in &raw.moves {
            let mv = parse_move(&pos, text).map_err(|e| PgnError::IllegalMove {
                game: game_index,
                text: text.clone(),
                message: e.to_string(),
            })?;
            pos = pos.apply(&mv).expect("parsed moves are legal");
            moves.push(mv);
        }
        let forced: usize = raw
            .tag("ForcedPlies")
            .and_then(|v| v.parse().ok())
            .unwrap_or(0)
            .min(moves.len());
        let played = moves.split_off(forced);
        records.push(GameRecord {
            eco: raw.tag("ECO").unwrap_or("?").to_string(),
            opening: raw.tag("Opening").unwrap_or("?").to_string(),
            prefix: moves,
            played,
            status: status_from(raw, &pos),
            depths: Vec::new(),
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::openings::builtin_opening;

    fn record_from(sans: &[&str], forced: usize, status: GameStatus) -> GameRecord {
        let mut pos = Position::initial();
        let mut moves = Vec::new();
        for text in sans {
            let mv = parse_move(&pos, text).unwrap();
            pos = pos.apply(&mv).unwrap();
            moves.push(mv);
        }
        let played = moves.split_off(forced);
        GameRecord {
            eco: "C68".to_string(),
            opening: "Ruy Lopez".to_string(),
            prefix: moves,
            played,
            status,
            depths: Vec::new(),
        }
    }

    #[test]
    fn empty_list_writes_an_empty_document() {
        assert_eq!(write_games(&[], &PgnMeta::default()), "");
        assert!(read_games("").unwrap().is_empty());
        assert!(read_games("   \n\n ").unwrap().is_empty());
    }

    #[test]
    fn drawn_game_carries_the_draw_marker() {
        let opening = builtin_opening("C68").unwrap();
        let prefix: Vec<&str> = opening.prefix.iter().map(String::as_str).collect();
        let record = record_from(&prefix, 6, GameStatus::Draw(EndReason::Adjudicated));
        let text = write_games(&[record], &PgnMeta::default());
        assert!(text.contains("[Result \"1/2-1/2\"]"));
        assert!(text.contains("[ECO \"C68\"]"));
        assert!(text.contains("1. e4 e5 2. Nf3 Nc6 3. Bb5 a6 1/2-1/2"));
    }

    #[test]
    fn round_trip_preserves_records() {
        let opening = builtin_opening("C68").unwrap();
        let mut sans: Vec<&str> = opening.prefix.iter().map(String::as_str).collect();
        sans.extend(["Bxc6", "dxc6", "O-O", "f6", "d4", "exd4"]);
        let original = vec![
            record_from(&sans, 6, GameStatus::Draw(EndReason::Adjudicated)),
            record_from(&sans[..8], 6, GameStatus::WhiteWins(EndReason::Resignation)),
        ];
        let text = write_games(&original, &PgnMeta::default());
        let parsed = read_games(&text).unwrap();
        assert_eq!(parsed.len(), 2);
        for (a, b) in original.iter().zip(&parsed) {
            assert_eq!(a.eco, b.eco);
            assert_eq!(a.opening, b.opening);
            assert_eq!(a.prefix, b.prefix);
            assert_eq!(a.played, b.played);
            assert_eq!(a.status, b.status);
        }
    }

    #[test]
    fn mate_games_round_trip_their_status() {
        let record = record_from(
            &["f3", "e5", "g4", "Qh4"],
            0,
            GameStatus::BlackWins(EndReason::Checkmate),
        );
        let text = write_games(std::slice::from_ref(&record), &PgnMeta::default());
        assert!(text.contains("Qh4# 0-1"), "{text}");
        let parsed = read_games(&text).unwrap();
        assert_eq!(parsed[0].status, record.status);
    }

    #[test]
    fn comments_variations_and_nags_are_skipped() {
        let text = "[Result \"*\"]\n\n1. e4 {best by test} $1 (1. d4 d5 (1... Nf6)) e5 ; rest\n2. Nf3 *\n";
        let records = read_games(text).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].played.len(), 3);
        assert_eq!(records[0].status, GameStatus::Ongoing);
    }

    #[test]
    fn illegal_movetext_is_reported_with_game_index() {
        let text = "1. e4 e5 2. Ke3 1-0\n";
        match read_games(text) {
            Err(PgnError::IllegalMove { game: 0, text, .. }) => assert_eq!(text, "Ke3"),
            other => panic!("expected illegal move, got {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        let text = "[Event \"unterminated]\n1. e4 *\n";
        match read_games(text) {
            Err(PgnError::Syntax { line, .. }) => assert!(line >= 1),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn two_games_come_back_in_order() {
        let a = record_from(&["e4"], 0, GameStatus::Ongoing);
        let b = record_from(&["d4"], 0, GameStatus::Ongoing);
        let text = write_games(&[a, b], &PgnMeta::default());
        let parsed = read_games(&text).unwrap();
        assert_eq!(parsed[0].played[0].to_string(), "e2e4");
        assert_eq!(parsed[1].played[0].to_string(), "d2d4");
    }

    #[test]
    fn long_movetext_wraps_below_81_columns() {
        // a long shuffling game
        let mut sans = vec!["e4", "e5"];
        for _ in 0..12 {
            sans.extend(["Nf3", "Nf6", "Ng1", "Ng8"]);
        }
        let record = record_from(&sans, 0, GameStatus::Draw(EndReason::ThreefoldRepetition));
        let text = write_games(&[record], &PgnMeta::default());
        assert!(text.lines().all(|l| l.len() <= 80), "{text}");
        read_games(&text).unwrap();
    }
}
