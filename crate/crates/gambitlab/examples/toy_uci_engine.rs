//! A tiny but rule-complete UCI engine built on the crate's rules module.
//!
//! It searches a plain negamax over material and a small centralisation
//! term, clamped to three plies, and plays fully deterministically. It
//! exists so the match harness can be exercised end to end without any
//! external engine installed:
//!
//! ```bash
//! cargo build --example toy_uci_engine
//! GAMBITLAB_ENGINE=target/debug/examples/toy_uci_engine \
//!     cargo run --example engine_match
//! ```
//!
//! Test hooks (never used in normal play):
//! `--mute` consumes input without ever answering, and
//! `--crash-after-gos N` exits abruptly after the Nth `go`.

use std::io::{self, BufRead, Write};

use gambitlab::chess::{parse_move, Move, Piece, Position, Square};

const MATE: i32 = 100_000;
const MAX_DEPTH: u32 = 3;

fn piece_value(piece: Piece) -> i32 {
    match piece {
        Piece::Pawn => 100,
        Piece::Knight => 300,
        Piece::Bishop => 310,
        Piece::Rook => 500,
        Piece::Queen => 900,
        Piece::King => 0,
    }
}

/// Static evaluation from the side to move's point of view.
fn evaluate(pos: &Position) -> i32 {
    let mut score = 0;
    for index in 0..64u8 {
        let sq = Square::from_index(index);
        let Some((color, piece)) = pos.piece_at(sq) else {
            continue;
        };
        let centrality = {
            let df = (f64::from(sq.file()) - 3.5).abs() as i32;
            let dr = (f64::from(sq.rank()) - 3.5).abs() as i32;
            6 - 2 * (df + dr).min(3)
        };
        let value = piece_value(piece) + centrality;
        if color == pos.side_to_move() {
            score += value;
        } else {
            score -= value;
        }
    }
    score
}

fn negamax(pos: &Position, depth: u32, ply: i32) -> i32 {
    if depth == 0 {
        return evaluate(pos);
    }
    let moves = pos.legal_moves();
    if moves.is_empty() {
        return if pos.in_check() { -MATE + ply } else { 0 };
    }
    let mut best = i32::MIN;
    for mv in moves {
        let score = -negamax(&pos.apply_unchecked(&mv), depth - 1, ply + 1);
        if score > best {
            best = score;
        }
    }
    best
}

fn pick_move(pos: &Position, depth: u32) -> Option<Move> {
    let mut moves = pos.legal_moves();
    // deterministic ordering so identical inputs give identical games
    moves.sort_by_key(|m| (m.from, m.to, m.promotion));
    let mut best: Option<(i32, Move)> = None;
    for mv in moves {
        let score = -negamax(&pos.apply_unchecked(&mv), depth.saturating_sub(1), 1);
        if best.is_none_or(|(b, _)| score > b) {
            best = Some((score, mv));
        }
    }
    best.map(|(_, mv)| mv)
}

fn parse_position(line: &str) -> Option<Position> {
    let rest = line.strip_prefix("position")?.trim();
    let (mut pos, moves_text) = if let Some(rest) = rest.strip_prefix("startpos") {
        (Position::initial(), rest.trim())
    } else {
        let rest = rest.strip_prefix("fen")?.trim();
        let (fen_part, moves_part) = match rest.find(" moves ") {
            Some(at) => (&rest[..at], &rest[at..]),
            None => (rest, ""),
        };
        (Position::from_fen(fen_part.trim()).ok()?, moves_part)
    };
    if let Some(list) = moves_text.trim().strip_prefix("moves") {
        for text in list.split_whitespace() {
            let mv = parse_move(&pos, text).ok()?;
            pos = pos.apply(&mv).ok()?;
        }
    }
    Some(pos)
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mute = args.iter().any(|a| a == "--mute");
    let crash_after_gos: Option<u64> = args
        .iter()
        .position(|a| a == "--crash-after-gos")
        .and_then(|i| args.get(i + 1))
        .and_then(|v| v.parse().ok());

    let stdin = io::stdin();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut pos = Position::initial();
    let mut gos_handled = 0u64;

    for line in stdin.lock().lines() {
        let Ok(line) = line else { break };
        let line = line.trim();
        if mute {
            continue;
        }
        if line == "uci" {
            writeln!(out, "id name toy-uci 0.1").unwrap();
            writeln!(out, "id author gambitlab example").unwrap();
            writeln!(out, "uciok").unwrap();
        } else if line == "isready" {
            writeln!(out, "readyok").unwrap();
        } else if line == "ucinewgame" {
            pos = Position::initial();
        } else if line.starts_with("setoption") {
            // every option is silently accepted
        } else if line.starts_with("position") {
            if let Some(parsed) = parse_position(line) {
                pos = parsed;
            }
        } else if line.starts_with("go") {
            if let Some(limit) = crash_after_gos {
                if gos_handled >= limit {
                    std::process::exit(3);
                }
            }
            gos_handled += 1;
            let requested: u32 = line
                .split_whitespace()
                .skip_while(|t| *t != "depth")
                .nth(1)
                .and_then(|d| d.parse().ok())
                .unwrap_or(2);
            let depth = requested.clamp(1, MAX_DEPTH);
            match pick_move(&pos, depth) {
                Some(mv) => {
                    writeln!(out, "info depth {depth}").unwrap();
                    writeln!(out, "bestmove {mv}").unwrap();
                }
                None => {
                    writeln!(out, "bestmove 0000").unwrap();
                }
            }
        } else if line == "quit" {
            break;
        }
        out.flush().unwrap();
    }
}
