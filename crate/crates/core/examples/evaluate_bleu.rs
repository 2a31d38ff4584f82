//! Scores translations with corpus BLEU-1..4 and class predictions with
//! per-instance and per-class accuracy.
//!
//! ```text
//! cargo run -p signspot --example evaluate_bleu
//! ```

use signspot::metrics::{accuracy, evaluate_translations, render_markdown_table, tokenize_13a};

/// Figures reported for the full-scale system, shown for orientation only.
/// Nothing here is computed.
const REPORTED_MEINEDGS: [(&str, [f64; 5]); 3] = [
    ("Spotter+GPT", [14.82, 4.19, 1.45, 0.64, 21.62]),
    ("Spotter+Transformer", [19.5, 6.13, 2.48, 1.08, 19.01]),
    ("Sub-GT+GPT", [16.65, 6.45, 3.02, 1.55, 29.72]),
];
const REPORTED_DGS20: [(&str, [f64; 5]); 3] = [
    ("Spotter+GPT", [38.25, 24.13, 15.81, 9.12, 46.93]),
    ("Spotter+Transformer", [18.65, 4.91, 1.79, 0.92, 19.85]),
    ("GT+GPT", [68.74, 59.23, 52.21, 46.22, 79.04]),
];
const REPORTED_RECOGNITION: [(&str, f64, f64); 2] = [
    ("I3D, Kinetics", 53.24, 40.70),
    ("I3D, Kinetics + BOBSL", 54.57, 42.48),
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "13a tokens: {:?}\n",
        tokenize_13a("Heute, am 3.5., regnet's (leider).")
    );

    let hyps = [
        Some("Die Familie isst am Abend im Restaurant."),
        Some("Morgen regnet es."),
        None,
        Some("Der Urlaub war schön."),
    ];
    let refs = [
        "Die Familie geht abends ins Restaurant.",
        "Morgen regnet es im Süden.",
        "Heute scheint die Sonne.",
        "Der letzte Urlaub war schön.",
    ];
    let report = evaluate_translations(&hyps, &refs)?;
    print!("{}", render_markdown_table(&[("this corpus", &report)]));
    println!(
        "BP {:.3}, {} hypothesis / {} reference tokens, {} no-translation\n",
        report.bp, report.hyp_len, report.ref_len, report.n_no_translation
    );

    for (title, rows) in [
        ("MeineDGS-V test", &REPORTED_MEINEDGS),
        ("DGS-20", &REPORTED_DGS20),
    ] {
        println!("reported, {title} (reference only):");
        println!("| Method | B-1 | B-2 | B-3 | B-4 | BLEURT |\n|---|---|---|---|---|---|");
        for (method, v) in rows.iter() {
            println!(
                "| {method} | {:.2} | {:.2} | {:.2} | {:.2} | {:.2} |",
                v[0], v[1], v[2], v[3], v[4]
            );
        }
        println!();
    }

    // class 0: three instances, two right; class 1: one instance, wrong
    let acc = accuracy(&[0, 0, 1, 0], &[0, 0, 0, 1])?;
    println!(
        "accuracy: per-instance {:.2}, per-class {:.2} over {} classes",
        acc.per_instance, acc.per_class, acc.class_count
    );
    println!("reported isolated recognition, 2,301 classes (reference only):");
    for (model, instance, class) in REPORTED_RECOGNITION {
        println!("  {model:<24} per-instance {instance:.2}  per-class {class:.2}");
    }
    Ok(())
}
