//! Builds a gloss vocabulary from annotated spans and writes it to disk.
//!
//! ```text
//! cargo run -p signspot --example build_vocabulary [OUT_FILE]
//! ```

use std::collections::BTreeSet;

use signspot::synthetic::demo_spans;
use signspot::vocab::{base_label, build_vocabulary, GlossLabel, Vocabulary, DEFAULT_MIN_COUNT, INDEX_GLOSS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spans = demo_spans();
    let exclusions = BTreeSet::from([GlossLabel::new(INDEX_GLOSS)?]);
    let vocab = build_vocabulary(&spans, DEFAULT_MIN_COUNT, &exclusions)?;

    println!(
        "{} spans, {} glosses kept (min_count {})",
        spans.len(),
        vocab.len(),
        vocab.min_count()
    );
    println!("{:>5}  {:<12} {:>7}", "class", "gloss", "samples");
    for entry in vocab.entries() {
        println!(
            "{:>5}  {:<12} {:>7}",
            entry.class_id, entry.gloss, entry.sample_count
        );
    }
    println!("content hash {}", vocab.content_hash());

    // SARDINIEN has 12 spans: one short of the cut.
    assert!(!vocab.contains("SARDINIEN"));

    println!("\nvariant labels and the base label sent to the translator:");
    for label in ["FAMILIE1", "ESSEN1A", "NUM-EINER1A:1d", "HAUS2B", "DDR4"] {
        println!("  {label:<16} -> {}", base_label(label));
    }

    let out = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("signspot-vocab.tsv"));
    vocab.save(&out)?;
    let reloaded = Vocabulary::load(&out)?;
    assert_eq!(reloaded.content_hash(), vocab.content_hash());
    println!("\nwrote {}", out.display());
    Ok(())
}
