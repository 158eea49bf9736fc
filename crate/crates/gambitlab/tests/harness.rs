//! Integration tests of the UCI harness against the bundled toy engine.

use std::path::PathBuf;
use std::time::Duration;

use gambitlab::chess::{Color, EndReason, GameStatus, Position};
use gambitlab::openings::builtin_opening;
use gambitlab::uci::{
    play_game, run_match, EngineConfig, MatchConfig, MatchMode, SearchLimit, EngineSession,
};

fn toy_engine_path() -> PathBuf {
    let mut path = std::env::current_exe().expect("test binary path");
    path.pop();
    path.pop();
    path.push("examples");
    path.push("toy_uci_engine");
    if !path.exists() {
        let mut args = vec!["build", "--example", "toy_uci_engine", "--offline"];
        if !cfg!(debug_assertions) {
            args.push("--release");
        }
        let status = std::process::Command::new(env!("CARGO"))
            .args(&args)
            .current_dir(env!("CARGO_MANIFEST_DIR"))
            .status()
            .expect("cargo is available to build the example engine");
        assert!(status.success(), "building the toy engine failed");
    }
    path
}

fn toy_config(depth: u32) -> EngineConfig {
    EngineConfig::new(toy_engine_path())
        .limit(SearchLimit::Depth(depth))
        .timeouts(Duration::from_secs(20), Duration::from_secs(60))
}

#[test]
fn launch_advertises_the_engine_name() {
    let session = EngineSession::launch(&toy_config(1)).unwrap();
    assert_eq!(session.name(), Some("toy-uci 0.1"));
    session.quit();
}

#[test]
fn best_move_is_validated_and_carries_depth() {
    let mut session = EngineSession::launch(&toy_config(1)).unwrap();
    let pos = Position::initial();
    let (mv, depth) = session.best_move(&pos, &[]).unwrap();
    assert!(pos.legal_moves().contains(&mv));
    assert_eq!(depth, Some(1));
}

#[test]
fn mate_in_one_is_found_at_depth_two() {
    let mut session = EngineSession::launch(&toy_config(2)).unwrap();
    let pos = Position::from_fen("6k1/5ppp/8/8/8/8/8/4R1K1 w - - 0 1").unwrap();
    let (mv, _) = session.best_move_from(&pos).unwrap();
    let after = pos.apply(&mv).unwrap();
    assert_eq!(
        after.status(),
        GameStatus::WhiteWins(EndReason::Checkmate),
        "{mv} did not mate"
    );
}

#[test]
fn sole_legal_move_is_returned() {
    let mut session = EngineSession::launch(&toy_config(2)).unwrap();
    let pos = Position::from_fen("k7/7R/8/8/8/8/8/K7 b - - 0 1").unwrap();
    assert_eq!(pos.legal_moves().len(), 1);
    let (mv, _) = session.best_move_from(&pos).unwrap();
    assert_eq!(mv.to_string(), "a8b8");
}

#[test]
fn play_game_forces_the_prefix_before_engine_moves() {
    let config = toy_config(1);
    let mut white = EngineSession::launch(&config).unwrap();
    let mut black = EngineSession::launch(&config).unwrap();
    let opening = builtin_opening("C68").unwrap();
    let record = play_game(&mut white, &mut black, &opening, 12).unwrap();

    assert_eq!(record.prefix.len(), 6);
    // the first engine-chosen move is white's fourth
    let mut pos = Position::initial();
    for mv in &record.prefix {
        pos = pos.apply(mv).unwrap();
    }
    assert_eq!(pos.fullmove_number(), 4);
    assert_eq!(pos.side_to_move(), Color::White);
    record.replay().unwrap();
}

#[test]
fn long_games_are_adjudicated_drawn_at_the_cap() {
    let config = toy_config(1);
    let mut white = EngineSession::launch(&config).unwrap();
    let mut black = EngineSession::launch(&config).unwrap();
    let opening = builtin_opening("C68").unwrap();
    let record = play_game(&mut white, &mut black, &opening, 10).unwrap();
    if record.status == GameStatus::Draw(EndReason::Adjudicated) {
        let final_pos = record.replay().unwrap();
        assert!(final_pos.fullmove_number() > 10);
    } else {
        // the game ended by rule before the cap; that is fine too
        assert!(record.status.is_terminal());
    }
}

#[test]
fn both_seats_receive_identical_option_lines() {
    let config = toy_config(1)
        .option("Threads", "1")
        .option("Contempt", "1");
    let white = EngineSession::launch(&config).unwrap();
    let black = EngineSession::launch(&config).unwrap();
    assert_eq!(white.option_lines(), black.option_lines());
    assert_eq!(
        white.option_lines(),
        [
            "setoption name Threads value 1",
            "setoption name Contempt value 1"
        ]
    );
}

#[test]
fn crashed_games_are_excluded_from_the_tallies() {
    let mut engine = toy_config(1);
    engine.args = vec!["--crash-after-gos".into(), "0".into()];
    let opening = builtin_opening("C68").unwrap();
    let config = MatchConfig::new(opening, MatchMode::Engines(engine)).games(2);
    let outcome = run_match(&config).unwrap();
    assert_eq!(outcome.aborted.len(), 2);
    assert_eq!(outcome.counts.total, 0);
    assert_eq!(
        outcome.counts.white + outcome.counts.black + outcome.counts.draws,
        0
    );
    assert!(outcome.records.is_empty());
}

#[test]
fn a_mid_match_crash_is_retried_on_a_fresh_pair() {
    // each 20-fullmove game costs 17 `go`s per seat; the crash lands in
    // game two and the retry completes it
    let mut engine = toy_config(1);
    engine.args = vec!["--crash-after-gos".into(), "30".into()];
    let opening = builtin_opening("C68").unwrap();
    let config = MatchConfig::new(opening, MatchMode::Engines(engine))
        .games(2)
        .adjudication_cap(20);
    let outcome = run_match(&config).unwrap();
    assert!(outcome.aborted.is_empty(), "{:?}", outcome.aborted);
    assert_eq!(outcome.counts.total, 2);
    for record in &outcome.records {
        record.replay().unwrap();
    }
}

#[test]
fn mute_engine_times_out_the_handshake() {
    let mut config = toy_config(1).timeouts(
        Duration::from_millis(300),
        Duration::from_millis(300),
    );
    config.args = vec!["--mute".into()];
    match EngineSession::launch(&config) {
        Err(gambitlab::uci::UciError::HandshakeTimeout { .. }) => {}
        other => panic!("expected a handshake timeout, got {other:?}"),
    }
}
