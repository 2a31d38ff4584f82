//! Sweeps the spotting threshold over a synthetic corpus and checks that
//! raising it only ever removes glosses.
//!
//! ```text
//! cargo run -p signspot --example threshold_sweep [OUT_DIR]
//! ```

use signspot::pipeline::{sweep_threshold, RunConfig, DEFAULT_SWEEP};
use signspot::stub::StubServer;
use signspot::synthetic::write_demo_corpus;
use signspot::translator::ClientConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("signspot-sweep"));
    let corpus = write_demo_corpus(root.join("data"))?;
    let stub = StubServer::echo()?;
    let config = RunConfig {
        client: ClientConfig::local(stub.url()),
        vocab_path: Some(corpus.vocab_path.clone()),
        ..RunConfig::new(root.join("sweep"))
    };

    let mut thresholds = vec![0.0];
    thresholds.extend(DEFAULT_SWEEP);
    let sweep = sweep_threshold(&corpus.manifest, &config, &thresholds)?;

    println!(
        "{:>9}  {:>6}  {:>6}  {:>14}  glosses per entry",
        "threshold", "B-1", "B-4", "no-translation"
    );
    for row in &sweep.rows {
        let counts: Vec<String> = row
            .spotted
            .iter()
            .map(|s| s.as_ref().map_or("-".into(), |ids| ids.len().to_string()))
            .collect();
        println!(
            "{:>9.2}  {:>6.2}  {:>6.2}  {:>14}  {}",
            row.threshold,
            row.report.bleu[0],
            row.report.bleu[3],
            row.report.n_no_translation,
            counts.join(" ")
        );
    }
    let violations = sweep.monotonicity_violations();
    println!("\nmonotonicity violations: {}", violations.len());
    println!(
        "stub requests: {} (later thresholds reuse cached answers)",
        stub.calls()
    );
    println!("tables in {}", config.output_dir.join("sweep.md").display());
    Ok(())
}
