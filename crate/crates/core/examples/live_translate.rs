//! Translates glosses given on the command line with a real
//! chat-completion endpoint.
//!
//! ```text
//! OPENAI_API_KEY=... cargo run -p signspot --example live_translate -- FAMILIE1 ESSEN1 ABEND2
//! ```
//!
//! The key is read from the variable named in the client configuration
//! (`OPENAI_API_KEY` by default). Without it the example says so and exits.

use signspot::translator::{ChatClient, ClientConfig, ResponseCache, Translator, TranslatorOptions};
use signspot::vocab::GlossLabel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    env_logger::init();
    let config = ClientConfig::default();
    let env = config.api_key_env.clone().unwrap_or_default();
    if std::env::var(&env).map_or(true, |k| k.is_empty()) {
        println!("{env} is not set; nothing sent. See translate_with_stub for an offline run.");
        return Ok(());
    }

    let mut words: Vec<String> = std::env::args().skip(1).collect();
    if words.is_empty() {
        words = ["FAMILIE1", "ESSEN1", "ABEND2", "RESTAURANT1"]
            .map(String::from)
            .to_vec();
    }
    let glosses = words.iter().map(GlossLabel::new).collect::<Result<Vec<_>, _>>()?;

    let cache = ResponseCache::open(std::env::temp_dir().join("signspot-live-cache"))?;
    let translator = Translator::new(
        ChatClient::new(config)?,
        Some(cache),
        TranslatorOptions::default(),
    );
    let record = translator.translate("cli", &glosses)?;
    println!("{} -> {}", record.glosses.join(" "), record.raw_response);
    Ok(())
}
