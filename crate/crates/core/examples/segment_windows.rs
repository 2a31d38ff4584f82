//! Cuts fixed-length training windows out of annotated gloss spans.
//!
//! ```text
//! cargo run -p signspot --example segment_windows
//! ```

use signspot::segmenter::{
    segment_corpus, segment_span, write_window_manifest, DEFAULT_STRIDE, DEFAULT_WINDOW,
};
use signspot::synthetic::{demo_spans, demo_vocabulary};
use signspot::vocab::{GlossLabel, GlossSpan};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gloss = GlossLabel::new("HAUS1A")?;
    for len in [10, 16, 24, 37] {
        let span = GlossSpan::new("video", 100, 100 + len, gloss.clone())?;
        let windows = segment_span(&span, DEFAULT_WINDOW, DEFAULT_STRIDE)?;
        println!("span of {len:>2} frames -> {} window(s)", windows.len());
        for w in &windows {
            let frames: Vec<String> = w.frame_indices.iter().map(u32::to_string).collect();
            println!("    {}", frames.join(" "));
        }
    }

    let vocab = demo_vocabulary();
    let spans = demo_spans();
    let corpus = segment_corpus(&spans, &vocab, DEFAULT_WINDOW, DEFAULT_STRIDE)?;
    println!(
        "\ncorpus: {} spans -> {} windows, {} spans outside the vocabulary",
        spans.len(),
        corpus.windows.len(),
        corpus.skipped_spans
    );

    println!("first lines of the window manifest:");
    let mut manifest = Vec::new();
    write_window_manifest(&mut manifest, &corpus.windows[..3])?;
    print!("{}", String::from_utf8(manifest)?);
    Ok(())
}
