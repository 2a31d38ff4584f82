//! Translates gloss sequences through a chat-completion endpoint with a
//! response cache. Runs against the bundled local stub, so no key is needed.
//!
//! ```text
//! cargo run -p signspot --example translate_with_stub
//! ```

use signspot::stub::StubServer;
use signspot::translator::{
    build_user_message, ChatClient, ClientConfig, ResponseCache, TranslationJob, Translator,
    TranslatorOptions,
};
use signspot::vocab::GlossLabel;

fn labels(items: &[&str]) -> Vec<GlossLabel> {
    items.iter().map(|s| GlossLabel::new(*s).unwrap()).collect()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    env_logger::init();
    let stub = StubServer::echo()?;
    let cache_dir = tempfile::tempdir()?;

    let glosses = labels(&["FAMILIE1", "ESSEN1", "ABEND2", "RESTAURANT1"]);
    println!("user message: {:?}", build_user_message(&glosses)?);

    let jobs = vec![
        TranslationJob {
            video_id: "a".into(),
            glosses,
        },
        TranslationJob {
            video_id: "b".into(),
            glosses: labels(&["LETZTE", "MEHR"]),
        },
        TranslationJob {
            video_id: "c".into(),
            glosses: Vec::new(),
        },
    ];

    for pass in 1..=2 {
        let client = ChatClient::new(ClientConfig::local(stub.url()))?;
        let cache = ResponseCache::open(cache_dir.path())?;
        let translator = Translator::new(client, Some(cache), TranslatorOptions::default());
        println!("\npass {pass}:");
        for result in translator.translate_all(&jobs) {
            let record = result?;
            println!(
                "  {} [{}] -> {:?}{}",
                record.video_id,
                record.glosses.join(" "),
                record.hypothesis.as_sentence().unwrap_or("<no translation>"),
                if record.from_cache { " (cached)" } else { "" }
            );
        }
        println!(
            "  requests sent {}, cache hits {}",
            translator.client().requests_sent(),
            translator.cache_hits()
        );
    }
    println!("\nstub saw {} requests in total", stub.calls());
    Ok(())
}
