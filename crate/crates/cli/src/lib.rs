//! Front end of `rrfilt`: input files, report assembly and the report cache.

pub mod cache;
pub mod report;
pub mod request;

use std::path::Path;

pub use report::{run_report, summary, Outcome, EXIT_INPUT, SCHEMA_VERSION};
pub use request::{parse_input, AnalysisRequest, InputError, Overrides};

/// Renders a document the way it is written to disk and stdout.
pub fn render(doc: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

/// Runs a request, going through the cache under `cache_root` when given.
/// Returns the rendered document and its exit code.
pub fn analyze(req: &AnalysisRequest, cache_root: Option<&Path>) -> Result<(String, i32), InputError> {
    let dir = match cache_root {
        Some(root) => Some(cache::entry_dir(root, &cache::key(req, &report::canonical_basis(req)?))),
        None => None,
    };
    if let Some(text) = dir.as_deref().and_then(cache::lookup) {
        let code = serde_json::from_str::<serde_json::Value>(&text)
            .ok()
            .and_then(|v| v["exit_code"].as_i64())
            .map(|c| c as i32);
        if let Some(code) = code {
            return Ok((text, code));
        }
    }
    let outcome = run_report(req)?;
    let text = render(&outcome.document);
    if let Some(dir) = &dir {
        if let Err(e) = cache::store(dir, &outcome, &text) {
            eprintln!("warning: could not write the cache entry {}: {e}", dir.display());
        }
    }
    Ok((text, outcome.exit_code))
}
