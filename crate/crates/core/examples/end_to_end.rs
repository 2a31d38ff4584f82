//! Full run over a small synthetic corpus: score streams → glosses →
//! translations → BLEU, with the output layout written to disk.
//!
//! ```text
//! cargo run -p signspot --example end_to_end [OUT_DIR]
//! ```
//!
//! Translation uses the bundled local stub, which lower-cases the glosses
//! into a sentence, so the scores only show the mechanics.

use std::fs;

use signspot::pipeline::{run, GlossSource, RunConfig, REPORT_MD_FILE};
use signspot::stub::StubServer;
use signspot::synthetic::write_demo_corpus;
use signspot::translator::ClientConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let root = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("signspot-end-to-end"));
    let corpus = write_demo_corpus(root.join("data"))?;
    let stub = StubServer::echo()?;

    for (source, dir) in [
        (GlossSource::Spotter, "spotter"),
        (GlossSource::GroundTruth, "ground-truth"),
        (GlossSource::GroundTruthInVocab, "ground-truth-in-vocab"),
    ] {
        let config = RunConfig {
            client: ClientConfig::local(stub.url()),
            vocab_path: Some(corpus.vocab_path.clone()),
            gloss_source: source,
            ..RunConfig::new(root.join(dir))
        };
        let outcome = run(&corpus.manifest, &config)?;
        println!("\n== {} ({})", source.name(), config.output_dir.display());
        for record in &outcome.records {
            println!(
                "  {:<9} {:<32} -> {}",
                record.id,
                record.glosses.join(" "),
                record.hypothesis.as_deref().unwrap_or("<no translation>")
            );
        }
        print!("{}", fs::read_to_string(config.output_dir.join(REPORT_MD_FILE))?);
    }
    println!("\nstub requests: {}", stub.calls());
    Ok(())
}
