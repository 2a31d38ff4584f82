//! Spots glosses in a score stream: argmax per window, threshold filter,
//! then run collapse.
//!
//! ```text
//! cargo run -p signspot --example spot_stream [SCORE_FILE VOCAB_FILE]
//! ```

use signspot::spotter::{
    argmax_predictions, collapse, filter_then_collapse, load_score_stream, spot, Prediction, ScoreStream,
    SpottingConfig,
};
use signspot::synthetic::{demo_vocabulary, scripted_stream, Segment};
use signspot::vocab::Vocabulary;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (stream, vocab) = match args.as_slice() {
        [scores, vocab] => {
            let vocab = Vocabulary::load(vocab)?;
            let stream = load_score_stream(scores)?;
            stream.check_vocabulary(&vocab)?;
            (stream, vocab)
        }
        _ => demo_stream()?,
    };

    println!(
        "{}: {} frames, {} windows",
        stream.video_id(),
        stream.num_frames(),
        stream.windows().len()
    );
    let preds = argmax_predictions(&stream);
    let label = |id: usize| vocab.label_of(id).map_or("?", |g| g.as_str());
    let raw: Vec<String> = preds
        .iter()
        .map(|p| format!("{}:{:.2}", label(p.class_id), p.prob))
        .collect();
    println!("argmax per window:\n  {}", raw.join(" "));

    for threshold in [0.0, 0.5, 0.7, 0.9] {
        let seq = spot(&stream, &SpottingConfig::new(threshold, stream.window_size())?)?;
        let glosses: Vec<&str> = seq.items.iter().map(|g| label(g.class_id)).collect();
        println!("threshold {threshold:.1}: {}", glosses.join(" "));
    }

    // Filtering first lets a sign survive a low-confidence interruption.
    let fixture =
        [(0, 0.9), (0, 0.8), (1, 0.6), (0, 0.95)].map(|(class_id, prob)| Prediction { class_id, prob });
    let filtered: Vec<usize> = filter_then_collapse(&fixture, 0.7)
        .iter()
        .map(|g| g.class_id)
        .collect();
    let collapsed_first: Vec<usize> = collapse(&fixture.map(|p| p.class_id))
        .into_iter()
        .zip([0.9, 0.6, 0.95])
        .filter(|(_, p)| *p >= 0.7)
        .map(|(c, _)| c)
        .collect();
    println!("\nA A B A with B at 0.6: filter-then-collapse {filtered:?}, collapse-then-filter {collapsed_first:?}");
    Ok(())
}

fn demo_stream() -> Result<(ScoreStream, Vocabulary), Box<dyn std::error::Error>> {
    let vocab = demo_vocabulary();
    let id = |g: &str| vocab.class_id_of(g).expect("demo gloss");
    let stream = scripted_stream(
        "demo",
        &vocab,
        16,
        &[
            Segment::new(id("HEUTE"), 4, 0.93),
            Segment::new(id("REGEN"), 2, 0.42),
            Segment::new(id("FAMILIE"), 5, 0.88),
            Segment::new(id("SONNE"), 2, 0.61),
            Segment::new(id("FAMILIE"), 2, 0.79),
            Segment::new(id("ESSEN"), 6, 0.74),
        ],
    )?;
    Ok((stream, vocab))
}
