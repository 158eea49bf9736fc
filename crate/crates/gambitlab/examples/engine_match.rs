//! Plays a small engine-vs-engine match under a forced opening prefix,
//! prints the tallies, tags the games' final opening lines, and writes the
//! archive to `out/engine_match.pgn`.
//!
//! The engine comes from `GAMBITLAB_ENGINE`, falling back to the bundled
//! toy engine example (build it first):
//!
//! ```bash
//! cargo build --example toy_uci_engine
//! cargo run --example engine_match
//! ```

use std::path::PathBuf;
use std::time::Duration;

use gambitlab::openings::{builtin_opening, eco_tag};
use gambitlab::pgn::{read_games, write_games, PgnMeta};
use gambitlab::study::ENGINE_PATH_VAR;
use gambitlab::uci::{run_match, EngineConfig, MatchConfig, MatchMode, SearchLimit};

fn engine_path() -> PathBuf {
    if let Ok(path) = std::env::var(ENGINE_PATH_VAR) {
        return PathBuf::from(path);
    }
    // sibling example binary: target/{profile}/examples/toy_uci_engine
    let mut path = std::env::current_exe().expect("own path");
    path.pop();
    path.push("toy_uci_engine");
    path
}

fn main() -> anyhow::Result<()> {
    let path = engine_path();
    if !path.exists() {
        anyhow::bail!(
            "no engine at {}; set {ENGINE_PATH_VAR} or run `cargo build --example toy_uci_engine`",
            path.display()
        );
    }

    let engine = EngineConfig::new(&path)
        .option("Threads", "1")
        .limit(SearchLimit::Depth(2))
        .timeouts(Duration::from_secs(10), Duration::from_secs(60));
    let opening = builtin_opening("C68").unwrap();
    let config = MatchConfig::new(opening, MatchMode::Engines(engine))
        .games(4)
        .adjudication_cap(40);

    println!("playing 4 games of C68 Ruy Lopez with {} ...", path.display());
    let outcome = run_match(&config)?;
    println!(
        "tallies: white {}, black {}, draws {} (total {}, aborted {})",
        outcome.counts.white,
        outcome.counts.black,
        outcome.counts.draws,
        outcome.counts.total,
        outcome.aborted.len()
    );

    for (i, record) in outcome.records.iter().enumerate() {
        let final_eco = eco_tag(&record.all_moves()).unwrap_or("?");
        println!(
            "game {}: {} after {} engine moves (line tagged {final_eco})",
            i + 1,
            record.status.result_token(),
            record.played.len()
        );
        record.replay()?; // every move must replay legally
    }

    std::fs::create_dir_all("out")?;
    let meta = PgnMeta {
        event: "engine match demo".to_string(),
        site: "gambitlab".to_string(),
        white: "toy".to_string(),
        black: "toy".to_string(),
        ..PgnMeta::default()
    };
    let pgn = write_games(&outcome.records, &meta);
    std::fs::write("out/engine_match.pgn", &pgn)?;
    // archives must survive a round trip
    assert_eq!(read_games(&pgn)?.len(), outcome.records.len());
    println!("wrote out/engine_match.pgn");
    Ok(())
}
