//! UCI engine harness: subprocess sessions and controlled matches.
//!
//! A match pits two copies of the same engine, configured identically,
//! against each other from a forced opening prefix. Games are validated
//! move by move against the rules engine and terminate by rule, or by draw
//! adjudication at a configurable move cap so a match always finishes.
//!
//! Synthetic mode bypasses move play entirely and draws game results
//! straight from a probability vector; it exists to validate the statistics
//! pipeline without engine hardware and is deterministic per seed.

use std::collections::VecDeque;
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{channel, Receiver, RecvTimeoutError};
use std::thread::JoinHandle;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::chess::{Color, EndReason, GameStatus, IllegalMove, Move, Position};
use crate::model::{OutcomeCounts, ProbabilityVector};
use crate::openings::OpeningSpec;
use crate::sim::child_seed;

const TRANSCRIPT_CAP: usize = 400;

/// Per-move search limit handed to the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchLimit {
    /// `go depth N` — the primary limit; both seats search to a fixed depth.
    Depth(u32),
    /// `go movetime <ms>` — for engines whose depth scaling is impractical.
    MoveTime(Duration),
}

/// How to launch and drive one engine seat.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub path: PathBuf,
    pub args: Vec<String>,
    /// `setoption` assignments applied in order after `uciok`.
    pub options: Vec<(String, String)>,
    pub limit: SearchLimit,
    pub handshake_timeout: Duration,
    pub move_timeout: Duration,
}

impl EngineConfig {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self {
            path: path.into(),
            args: Vec::new(),
            options: Vec::new(),
            limit: SearchLimit::Depth(22),
            handshake_timeout: Duration::from_secs(10),
            move_timeout: Duration::from_secs(120),
        }
    }

    pub fn option(mut self, name: impl Into<String>, value: impl Into<String>) -> Self {
        self.options.push((name.into(), value.into()));
        self
    }

    pub fn limit(mut self, limit: SearchLimit) -> Self {
        self.limit = limit;
        self
    }

    pub fn timeouts(mut self, handshake: Duration, per_move: Duration) -> Self {
        self.handshake_timeout = handshake;
        self.move_timeout = per_move;
        self
    }
}

#[derive(Debug, Error)]
pub enum UciError {
    #[error("failed to launch {path}: {source}")]
    Launch {
        path: String,
        source: std::io::Error,
    },
    #[error("engine did not complete the handshake within {timeout:?}\n{transcript}")]
    HandshakeTimeout {
        timeout: Duration,
        transcript: String,
    },
    #[error("engine rejected an option: {line}\n{transcript}")]
    OptionRejected { line: String, transcript: String },
    #[error("engine produced no best move within {timeout:?}\n{transcript}")]
    MoveTimeout {
        timeout: Duration,
        transcript: String,
    },
    #[error("engine played illegal move {text:?} in {fen}\n{transcript}")]
    IllegalBestMove {
        text: String,
        fen: String,
        transcript: String,
    },
    #[error("engine closed its output stream\n{transcript}")]
    Closed { transcript: String },
    #[error("failed to write to engine: {source}\n{transcript}")]
    Io {
        source: std::io::Error,
        transcript: String,
    },
}

/// A live UCI engine subprocess, handshaken and configured.
#[derive(Debug)]
pub struct EngineSession {
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<String>,
    reader: Option<JoinHandle<()>>,
    limit: SearchLimit,
    move_timeout: Duration,
    transcript: VecDeque<String>,
    option_lines: Vec<String>,
    name: Option<String>,
}

impl EngineSession {
    /// Spawns the engine, performs the `uci`/`uciok` handshake, applies all
    /// option assignments, and waits for `readyok`.
    pub fn launch(config: &EngineConfig) -> Result<EngineSession, UciError> {
        let mut child = Command::new(&config.path)
            .args(&config.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|source| UciError::Launch {
                path: config.path.display().to_string(),
                source,
            })?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let (tx, rx) = channel();
        let reader = std::thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                let Ok(line) = line else { break };
                if tx.send(line).is_err() {
                    break;
                }
            }
        });

        let mut session = EngineSession {
            child,
            stdin,
            lines: rx,
            reader: Some(reader),
            limit: config.limit,
            move_timeout: config.move_timeout,
            transcript: VecDeque::new(),
            option_lines: Vec::new(),
            name: None,
        };

        session.send("uci")?;
        let deadline = Instant::now() + config.handshake_timeout;
        loop {
            let line = session.recv_until(deadline).map_err(|e| match e {
                WaitError::Timeout => UciError::HandshakeTimeout {
                    timeout: config.handshake_timeout,
                    transcript: session.transcript_text(),
                },
                WaitError::Closed => UciError::Closed {
                    transcript: session.transcript_text(),
                },
            })?;
            if let Some(name) = line.strip_prefix("id name ") {
                session.name = Some(name.trim().to_string());
            }
            if line.trim() == "uciok" {
                break;
            }
        }

        for (name, value) in &config.options {
            let line = format!("setoption name {name} value {value}");
            session.option_lines.push(line.clone());
            session.send(&line)?;
        }
        session.sync(config.handshake_timeout)?;

        // engines signal unknown options as plain text rather than errors
        let complaints: Vec<String> = session
            .transcript
            .iter()
            .filter(|l| {
                let lower = l.to_ascii_lowercase();
                lower.contains("unknown option") || lower.contains("no such option")
            })
            .cloned()
            .collect();
        if let Some(line) = complaints.into_iter().next() {
            return Err(UciError::OptionRejected {
                line,
                transcript: session.transcript_text(),
            });
        }
        Ok(session)
    }

    /// Engine name advertised during the handshake.
    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// The exact `setoption` lines sent, for auditing that both seats of a
    /// match received byte-identical assignments.
    pub fn option_lines(&self) -> &[String] {
        &self.option_lines
    }

    pub fn transcript_text(&self) -> String {
        self.transcript
            .iter()
            .cloned()
            .collect::<Vec<_>>()
            .join("\n")
    }

    fn log(&mut self, entry: String) {
        if self.transcript.len() == TRANSCRIPT_CAP {
            self.transcript.pop_front();
        }
        self.transcript.push_back(entry);
    }

    fn send(&mut self, command: &str) -> Result<(), UciError> {
        self.log(format!(">> {command}"));
        writeln!(self.stdin, "{command}")
            .and_then(|_| self.stdin.flush())
            .map_err(|source| UciError::Io {
                source,
                transcript: self.transcript_text(),
            })
    }

    fn recv_until(&mut self, deadline: Instant) -> Result<String, WaitError> {
        let now = Instant::now();
        let remaining = deadline.saturating_duration_since(now);
        match self.lines.recv_timeout(remaining) {
            Ok(line) => {
                self.log(format!("<< {line}"));
                Ok(line)
            }
            Err(RecvTimeoutError::Timeout) => Err(WaitError::Timeout),
            Err(RecvTimeoutError::Disconnected) => Err(WaitError::Closed),
        }
    }

    /// `isready`/`readyok` synchronisation point.
    pub fn sync(&mut self, timeout: Duration) -> Result<(), UciError> {
        self.send("isready")?;
        let deadline = Instant::now() + timeout;
        loop {
            let line = self.recv_until(deadline).map_err(|e| match e {
                WaitError::Timeout => UciError::HandshakeTimeout {
                    timeout,
                    transcript: self.transcript_text(),
                },
                WaitError::Closed => UciError::Closed {
                    transcript: self.transcript_text(),
                },
            })?;
            if line.trim() == "readyok" {
                return Ok(());
            }
        }
    }

    /// Signals the start of a new game and waits for readiness.
    pub fn new_game(&mut self) -> Result<(), UciError> {
        // drop any stale output from a previous game
        while let Ok(line) = self.lines.try_recv() {
            self.log(format!("<< {line}"));
        }
        self.send("ucinewgame")?;
        self.sync(self.move_timeout)
    }

    /// Asks for the best move in the position reached by `moves_played`
    /// from the starting position. Returns the move (validated against
    /// `pos`) and the deepest search depth the engine reported.
    pub fn best_move(
        &mut self,
        pos: &Position,
        moves_played: &[Move],
    ) -> Result<(Move, Option<u32>), UciError> {
        if moves_played.is_empty() {
            self.send("position startpos")?;
        } else {
            let list: Vec<String> = moves_played.iter().map(|m| m.to_string()).collect();
            self.send(&format!("position startpos moves {}", list.join(" ")))?;
        }
        self.go(pos)
    }

    /// Like [`EngineSession::best_move`], but hands the engine the position
    /// as a FEN record instead of a move list.
    pub fn best_move_from(&mut self, pos: &Position) -> Result<(Move, Option<u32>), UciError> {
        self.send(&format!("position fen {}", pos.to_fen()))?;
        self.go(pos)
    }

    fn go(&mut self, pos: &Position) -> Result<(Move, Option<u32>), UciError> {
        match self.limit {
            SearchLimit::Depth(depth) => self.send(&format!("go depth {depth}"))?,
            SearchLimit::MoveTime(time) => self.send(&format!("go movetime {}", time.as_millis()))?,
        }

        let deadline = Instant::now() + self.move_timeout;
        let mut depth_seen = None;
        loop {
            let line = self.recv_until(deadline).map_err(|e| match e {
                WaitError::Timeout => UciError::MoveTimeout {
                    timeout: self.move_timeout,
                    transcript: self.transcript_text(),
                },
                WaitError::Closed => UciError::Closed {
                    transcript: self.transcript_text(),
                },
            })?;
            let mut tokens = line.split_whitespace();
            match tokens.next() {
                Some("info") => {
                    let mut rest = tokens;
                    while let Some(tok) = rest.next() {
                        if tok == "depth" {
                            depth_seen = rest.next().and_then(|d| d.parse().ok()).or(depth_seen);
                            break;
                        }
                    }
                }
                Some("bestmove") => {
                    let text = tokens.next().unwrap_or("").to_string();
                    let illegal = |session: &EngineSession| UciError::IllegalBestMove {
                        text: text.clone(),
                        fen: pos.to_fen(),
                        transcript: session.transcript_text(),
                    };
                    let mv = Move::parse_coordinate(&text).ok_or_else(|| illegal(self))?;
                    if !pos.legal_moves().contains(&mv) {
                        return Err(illegal(self));
                    }
                    return Ok((mv, depth_seen));
                }
                _ => {}
            }
        }
    }

    /// Asks the engine to quit and reaps the process.
    pub fn quit(mut self) {
        let _ = self.send("quit");
        self.shutdown();
    }

    fn shutdown(&mut self) {
        let deadline = Instant::now() + Duration::from_millis(500);
        loop {
            match self.child.try_wait() {
                Ok(Some(_)) => break,
                Ok(None) if Instant::now() < deadline => {
                    std::thread::sleep(Duration::from_millis(10));
                }
                _ => {
                    let _ = self.child.kill();
                    let _ = self.child.wait();
                    break;
                }
            }
        }
        if let Some(handle) = self.reader.take() {
            let _ = handle.join();
        }
    }
}

impl Drop for EngineSession {
    fn drop(&mut self) {
        let _ = self.send("quit");
        self.shutdown();
    }
}

enum WaitError {
    Timeout,
    Closed,
}

/// One finished game: the forced prefix, the engine moves, and how it ended.
#[derive(Debug, Clone, PartialEq)]
pub struct GameRecord {
    pub eco: String,
    pub opening: String,
    /// The forced opening moves.
    pub prefix: Vec<Move>,
    /// The moves chosen by the engines.
    pub played: Vec<Move>,
    pub status: GameStatus,
    /// Deepest reported search depth per engine move, when available.
    pub depths: Vec<u32>,
}

impl GameRecord {
    /// Every move of the game in order.
    pub fn all_moves(&self) -> Vec<Move> {
        let mut moves = self.prefix.clone();
        moves.extend_from_slice(&self.played);
        moves
    }

    /// Replays the whole game from the initial position, proving every move
    /// legal, and returns the final position.
    pub fn replay(&self) -> Result<Position, IllegalMove> {
        let mut pos = Position::initial();
        for mv in self.all_moves() {
            pos = pos.apply(&mv)?;
        }
        Ok(pos)
    }
}

#[derive(Debug, Error)]
pub enum MatchError {
    #[error(transparent)]
    Uci(#[from] UciError),
    #[error("opening prefix of {opening} is illegal: {source}")]
    IllegalPrefix {
        opening: String,
        source: crate::openings::OpeningError,
    },
    #[error("match configuration: {0}")]
    Config(String),
}

/// Outcome source for a match: real engine subprocesses, or results drawn
/// directly from a probability vector.
#[derive(Debug, Clone, PartialEq)]
pub enum MatchMode {
    Engines(EngineConfig),
    Synthetic(ProbabilityVector),
}

/// Full description of one match experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchConfig {
    pub opening: OpeningSpec,
    pub games: u32,
    pub mode: MatchMode,
    /// Games still running at this fullmove number are adjudicated drawn.
    pub adjudication_cap: u32,
    /// Engine pairs are restarted after this many games to bound state
    /// leakage between games.
    pub restart_interval: u32,
    pub seed: u64,
    pub workers: usize,
}

impl MatchConfig {
    pub fn new(opening: OpeningSpec, mode: MatchMode) -> Self {
        Self {
            opening,
            games: 300,
            mode,
            adjudication_cap: 250,
            restart_interval: 50,
            seed: 0,
            workers: 1,
        }
    }

    pub fn games(mut self, games: u32) -> Self {
        self.games = games;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn adjudication_cap(mut self, fullmoves: u32) -> Self {
        self.adjudication_cap = fullmoves;
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    fn validate(&self) -> Result<(), MatchError> {
        if self.games == 0 {
            return Err(MatchError::Config("games must be positive".into()));
        }
        let prefix_fullmoves = (self.opening.prefix.len() as u32).div_ceil(2);
        if self.adjudication_cap <= prefix_fullmoves {
            return Err(MatchError::Config(format!(
                "adjudication cap {} does not clear the opening prefix",
                self.adjudication_cap
            )));
        }
        Ok(())
    }
}

/// A game that failed twice and was excluded from the tallies.
#[derive(Debug, Clone)]
pub struct AbortedGame {
    pub index: u32,
    pub message: String,
}

/// Result of a match: tallies over completed games, their records, and any
/// aborted games (never counted).
#[derive(Debug)]
pub struct MatchOutcome {
    pub counts: OutcomeCounts,
    pub records: Vec<GameRecord>,
    pub aborted: Vec<AbortedGame>,
}

/// Draws whole-game outcomes from a probability vector, one independent
/// seeded stream per game index.
#[derive(Debug, Clone, Copy)]
pub struct SyntheticSource {
    pub pi: ProbabilityVector,
    pub seed: u64,
}

impl SyntheticSource {
    pub fn new(pi: ProbabilityVector, seed: u64) -> Self {
        Self { pi, seed }
    }

    /// Result of game `index`; deterministic in `(seed, index)`.
    pub fn outcome(&self, index: u32) -> GameStatus {
        let mut rng = ChaCha8Rng::seed_from_u64(child_seed(self.seed, u64::from(index)));
        let u: f64 = rng.random();
        if u < self.pi.p_w() {
            GameStatus::WhiteWins(EndReason::Adjudicated)
        } else if u < self.pi.p_w() + self.pi.p_b() {
            GameStatus::BlackWins(EndReason::Adjudicated)
        } else {
            GameStatus::Draw(EndReason::Adjudicated)
        }
    }
}

/// Plays one game: forces the opening prefix, then alternates engine moves
/// until the rules end the game or the adjudication cap is reached.
pub fn play_game(
    white: &mut EngineSession,
    black: &mut EngineSession,
    opening: &OpeningSpec,
    adjudication_cap: u32,
) -> Result<GameRecord, MatchError> {
    let prefix = opening
        .prefix_moves()
        .map_err(|source| MatchError::IllegalPrefix {
            opening: opening.label(),
            source,
        })?;
    let mut pos = Position::initial();
    let mut all_moves = Vec::with_capacity(prefix.len() + 64);
    for mv in &prefix {
        pos = pos.apply(mv).expect("prefix moves validated above");
        all_moves.push(*mv);
    }

    let mut played = Vec::new();
    let mut depths = Vec::new();
    let status = loop {
        let status = pos.status();
        if status.is_terminal() {
            break status;
        }
        if pos.fullmove_number() > adjudication_cap {
            break GameStatus::Draw(EndReason::Adjudicated);
        }
        let session = match pos.side_to_move() {
            Color::White => &mut *white,
            Color::Black => &mut *black,
        };
        let (mv, depth) = session.best_move(&pos, &all_moves)?;
        pos = pos.apply(&mv).expect("session validated legality");
        all_moves.push(mv);
        played.push(mv);
        if let Some(d) = depth {
            depths.push(d);
        }
    };

    Ok(GameRecord {
        eco: opening.eco.clone(),
        opening: opening.name.clone(),
        prefix,
        played,
        status,
        depths,
    })
}

/// Runs a full match per the configuration and tallies the outcomes.
///
/// Engine mode plays `games` games on `workers` parallel engine pairs, with
/// a fresh `ucinewgame` per game and periodic engine restarts. A failed
/// game is retried once on a fresh pair, then recorded as aborted; aborted
/// games never contribute to the counts. Synthetic mode draws outcomes
/// directly from the vector and is bit-reproducible for a given seed at any
/// worker count.
pub fn run_match(config: &MatchConfig) -> Result<MatchOutcome, MatchError> {
    config.validate()?;
    match &config.mode {
        MatchMode::Synthetic(pi) => run_synthetic(config, pi),
        MatchMode::Engines(engine) => run_engines(config, engine),
    }
}

fn run_synthetic(config: &MatchConfig, pi: &ProbabilityVector) -> Result<MatchOutcome, MatchError> {
    use rayon::prelude::*;
    let source = SyntheticSource::new(*pi, config.seed);
    let prefix = config
        .opening
        .prefix_moves()
        .map_err(|source| MatchError::IllegalPrefix {
            opening: config.opening.label(),
            source,
        })?;
    let statuses: Vec<GameStatus> = (0..config.games)
        .into_par_iter()
        .map(|i| source.outcome(i))
        .collect();
    let mut counts = OutcomeCounts::new(0, 0, 0);
    let mut records = Vec::with_capacity(statuses.len());
    for status in statuses {
        match status {
            GameStatus::WhiteWins(_) => counts.white += 1,
            GameStatus::BlackWins(_) => counts.black += 1,
            GameStatus::Draw(_) => counts.draws += 1,
            GameStatus::Ongoing => unreachable!("synthetic outcomes are terminal"),
        }
        counts.total += 1;
        records.push(GameRecord {
            eco: config.opening.eco.clone(),
            opening: config.opening.name.clone(),
            prefix: prefix.clone(),
            played: Vec::new(),
            status,
            depths: Vec::new(),
        });
    }
    Ok(MatchOutcome {
        counts,
        records,
        aborted: Vec::new(),
    })
}

fn run_engines(config: &MatchConfig, engine: &EngineConfig) -> Result<MatchOutcome, MatchError> {
    let workers = config.workers.min(config.games as usize).max(1);
    let mut slots: Vec<Option<Result<GameRecord, String>>> = Vec::new();
    slots.resize_with(config.games as usize, || None);

    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for worker in 0..workers {
            let indices: Vec<u32> = (0..config.games)
                .filter(|i| (*i as usize) % workers == worker)
                .collect();
            handles.push(scope.spawn(move || {
                let mut results = Vec::with_capacity(indices.len());
                let mut pair: Option<(EngineSession, EngineSession)> = None;
                let mut games_on_pair = 0u32;
                for &index in &indices {
                    let mut attempt = |fresh_pair: bool| -> Result<GameRecord, MatchError> {
                        if fresh_pair || games_on_pair >= config.restart_interval {
                            pair = None;
                        }
                        if pair.is_none() {
                            pair = Some((
                                EngineSession::launch(engine)?,
                                EngineSession::launch(engine)?,
                            ));
                            games_on_pair = 0;
                        }
                        let (white, black) = pair.as_mut().expect("pair launched above");
                        white.new_game()?;
                        black.new_game()?;
                        let record =
                            play_game(white, black, &config.opening, config.adjudication_cap)?;
                        games_on_pair += 1;
                        Ok(record)
                    };
                    // one retry on a fresh pair before giving up on a game
                    let outcome = attempt(false).or_else(|first| {
                        attempt(true)
                            .map_err(|second| format!("first attempt: {first}; retry: {second}"))
                    });
                    results.push((index, outcome));
                }
                results
            }));
        }
        for handle in handles {
            for (index, outcome) in handle.join().expect("match worker panicked") {
                slots[index as usize] = Some(outcome);
            }
        }
    });

    let mut counts = OutcomeCounts::new(0, 0, 0);
    let mut records = Vec::new();
    let mut aborted = Vec::new();
    for (index, slot) in slots.into_iter().enumerate() {
        match slot.expect("every game index is assigned to a worker") {
            Ok(record) => {
                match record.status {
                    GameStatus::WhiteWins(_) => counts.white += 1,
                    GameStatus::BlackWins(_) => counts.black += 1,
                    GameStatus::Draw(_) => counts.draws += 1,
                    GameStatus::Ongoing => unreachable!("play_game returns terminal states"),
                }
                counts.total += 1;
                records.push(record);
            }
            Err(message) => aborted.push(AbortedGame {
                index: index as u32,
                message,
            }),
        }
    }
    Ok(MatchOutcome {
        counts,
        records,
        aborted,
    })
}
