//! On-disk cache of finished reports.
//!
//! One directory per request, named by the SHA-256 of the ring, the reduced
//! Gröbner basis of the ideal and every parameter. It holds `report.json`
//! and, for inspection, the bases of the powers and closures computed on
//! the cold run in the input grammar.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::report::{Outcome, SCHEMA_VERSION};
use crate::request::AnalysisRequest;

pub const CACHE_ENV: &str = "RRFILT_CACHE_DIR";

pub fn key(req: &AnalysisRequest, basis: &[String]) -> String {
    let mut h = Sha256::new();
    let text = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "ring": req.ring.vars,
        "field": format!("{:?}", req.ring.field),
        "basis": basis,
        "params": req.params,
        "checks": req.checks,
        "assume_integrally_closed": req.assume_integrally_closed,
        "element": req.element.as_ref().map(|e| &e.text),
        "powers": req.powers,
        "reduction": req.reduction.as_ref().map(|e| &e.text),
    })
    .to_string();
    h.update(text.as_bytes());
    format!("{:x}", h.finalize())
}

pub fn entry_dir(root: &Path, key: &str) -> PathBuf {
    root.join(key)
}

/// The cached report, if present.
pub fn lookup(dir: &Path) -> Option<String> {
    fs::read_to_string(dir.join("report.json")).ok()
}

fn write_atomic(dir: &Path, name: &str, contents: &str) -> io::Result<()> {
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, dir.join(name))
}

fn table(rows: &[(usize, Vec<String>)]) -> String {
    let mut s = String::new();
    for (n, gens) in rows {
        s.push_str(&format!("{n}: {}\n", gens.join(", ")));
    }
    s
}

/// Stores the rendered report with the bases behind it. The report is
/// written last, so a reader never sees it without its companions.
pub fn store(dir: &Path, outcome: &Outcome, rendered: &str) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    write_atomic(dir, "ideal.txt", &format!("{}\n", outcome.groebner_basis.join(", ")))?;
    write_atomic(dir, "powers.txt", &table(&outcome.powers))?;
    write_atomic(dir, "closures.txt", &table(&outcome.closures))?;
    write_atomic(dir, "report.json", rendered)
}
