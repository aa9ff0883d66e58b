//! Runs the requested checks and assembles the JSON document.

use std::sync::Arc;

use rrfilt_core::filtration::FiltrationCache;
use rrfilt_core::parse::FieldSpec;
use rrfilt_core::theorems::{self, Status, TheoremVerdict};
use rrfilt_core::{graded, hilbert, reductions, Error, Field, PrimeField, Rationals};
use serde_json::{json, Value};

use crate::request::{load, AnalysisRequest, InputError, Loaded};

pub const SCHEMA_VERSION: u32 = 1;

/// Exit code for inputs that could not be loaded.
pub const EXIT_INPUT: i32 = 3;

/// The finished document plus the data the on-disk cache stores next to it.
pub struct Outcome {
    pub document: Value,
    pub exit_code: i32,
    pub groebner_basis: Vec<String>,
    /// `(n, reduced GB of I^n)`.
    pub powers: Vec<(usize, Vec<String>)>,
    /// `(n, reduced GB of the closure of I^n)`.
    pub closures: Vec<(usize, Vec<String>)>,
}

fn status_of(e: &Error) -> Status {
    if theorems::is_resource_error(e) {
        Status::Undetermined
    } else if matches!(e, Error::Precondition(_)) {
        Status::Inapplicable
    } else {
        Status::Fail
    }
}

fn status_name(s: Status) -> Value {
    serde_json::to_value(s).expect("status serializes")
}

fn report_entry(name: &str, r: Result<Value, Error>) -> (Status, Value) {
    match r {
        Ok(v) => (Status::Pass, json!({ "check": name, "status": status_name(Status::Pass), "report": v })),
        Err(e) => {
            let s = status_of(&e);
            (s, json!({ "check": name, "status": status_name(s), "error": e.to_string() }))
        }
    }
}

fn verdict_entry(name: &str, r: Result<TheoremVerdict, Error>) -> (Status, Value) {
    match theorems::run_check(name, || r) {
        Ok(v) => (v.conclusion, json!({ "check": name, "status": status_name(v.conclusion), "verdict": v })),
        Err(e) => report_entry(name, Err(e)),
    }
}

fn to_value<T: serde::Serialize>(t: T) -> Result<Value, Error> {
    Ok(serde_json::to_value(t).expect("reports serialize"))
}

fn closure_table<F: Field>(cache: &Arc<FiltrationCache<F>>) -> Result<Value, Error> {
    let bound = cache.closure_bound()?;
    let mut rows = Vec::new();
    for n in 1..=bound.max(1) {
        let c = cache.closure(n)?;
        rows.push(json!({
            "n": n,
            "length": c.length,
            "power_length": c.power_length,
            "equals_power": c.is_trivial(),
            "witness": c.witness.as_ref().map(|w| w.to_string()),
            "k_superficial": c.k_superficial,
            "k_colon": c.k_colon,
        }));
    }
    Ok(json!({ "stabilization_bound": bound, "closures": rows }))
}

fn run_one<F: Field>(name: &str, req: &AnalysisRequest, cache: &Arc<FiltrationCache<F>>, loaded: &Loaded<F>) -> (Status, Value) {
    let p = cache.params();
    match name {
        "hilbert" => report_entry(name, hilbert::h_polynomial(cache).and_then(to_value)),
        "rr" => report_entry(
            name,
            hilbert::h_polynomial(cache).and_then(|h| hilbert::rr_hilbert(cache, &h)).and_then(to_value),
        ),
        "closure" => report_entry(name, closure_table(cache)),
        "sigma" => report_entry(
            name,
            (|| {
                let h = hilbert::h_polynomial(cache)?;
                let rr = hilbert::rr_hilbert(cache, &h)?;
                let red = reductions::minimal_reduction(cache)?;
                to_value(hilbert::sigma_invariants(cache, &red, &h, &rr)?)
            })(),
        ),
        "reduction" => report_entry(
            name,
            (|| {
                let minimal = reductions::minimal_reduction(cache)?.summary();
                let given = match &loaded.reduction {
                    Some(j) => Some(reductions::reduction_number(cache, j)?.summary()),
                    None => None,
                };
                to_value(json!({ "minimal": minimal, "given": given }))
            })(),
        ),
        "depth" => report_entry(name, graded::depth_assoc_graded(cache).and_then(to_value)),
        "xi" => report_entry(name, graded::xi_estimate(cache, p.max_power, p.xi_window).and_then(to_value)),
        "identity" => report_entry(
            name,
            cache.superficial().and_then(|c| hilbert::verify_superficial_identity(cache, &c)).and_then(to_value),
        ),
        "narita" => verdict_entry(name, theorems::check_narita(cache)),
        "e2" => verdict_entry(name, theorems::check_e2_consequences(cache)),
        "red2" => verdict_entry(name, theorems::check_red2_dim3(cache)),
        "rr_mod" => verdict_entry(
            name,
            theorems::check_rr_mod_sequence(cache, 1, &[p.seed.wrapping_add(1), p.seed.wrapping_add(2)]),
        ),
        "xi_descent" => verdict_entry(
            name,
            (|| {
                let x = match &loaded.element {
                    Some(x) => x.clone(),
                    None => cache.superficial()?.element.clone(),
                };
                theorems::check_xi_descent(cache, &x, &req.powers)
            })(),
        ),
        "e2_dim2" => verdict_entry(name, theorems::check_e2_dim2(cache, req.assume_integrally_closed)),
        other => unreachable!("unvalidated check {other}"),
    }
}

fn texts<F: Field>(polys: &[rrfilt_core::Polynomial<F>]) -> Vec<String> {
    polys.iter().map(|p| p.to_string()).collect()
}

fn run_in<F: Field>(req: &AnalysisRequest, field: F) -> Result<Outcome, InputError> {
    let loaded = load(req, field)?;
    let gb = loaded.ideal.groebner().map_err(|e| InputError { line: req.ideal.line, column: req.ideal.column, message: e.to_string() })?;
    let gb_text = texts(gb.polys());
    let cache = FiltrationCache::new(&loaded.ideal, req.params.clone())
        .map_err(|e| InputError { line: req.ideal.line, column: req.ideal.column, message: e.to_string() })?;
    let mut results = Vec::new();
    let mut worst = Status::Pass;
    for name in &req.checks {
        let (s, entry) = run_one(name, req, &cache, &loaded);
        worst = worst.max(match s {
            Status::Inapplicable => Status::Pass,
            other => other,
        });
        results.push(entry);
    }
    let exit_code = match worst {
        Status::Fail => 1,
        Status::Undetermined => 2,
        _ => 0,
    };
    let provenance = if req.checks.is_empty() {
        json!({ "seed": req.params.seed })
    } else {
        let sup = cache.superficial().ok().map(|c| {
            json!({
                "element": c.element.to_string(),
                "window_start": c.window_start,
                "window_length": c.window_length,
                "trial": c.trial,
                "seed": c.seed,
            })
        });
        json!({
            "seed": req.params.seed,
            "superficial": sup,
            "closure_bound": cache.closure_bound().ok(),
            "powers_computed": cache.computed_powers().iter().map(|(n, _)| *n).collect::<Vec<_>>(),
            "closures_computed": cache.computed_closures().iter().map(|(n, _)| *n).collect::<Vec<_>>(),
        })
    };
    let mut params = serde_json::to_value(&req.params).expect("params serialize");
    params["assume_integrally_closed"] = json!(req.assume_integrally_closed);
    params["powers"] = json!(req.powers);
    let document = json!({
        "schema_version": SCHEMA_VERSION,
        "input": {
            "ring": loaded.ring.header(),
            "generators": texts(loaded.ideal.generators()),
            "groebner_basis": gb_text,
            "dim": cache.dim(),
            "checks": req.checks,
            "element": loaded.element.as_ref().map(|e| e.to_string()),
            "reduction": loaded.reduction.as_ref().map(|j| texts(j)),
        },
        "parameters": params,
        "results": results,
        "provenance": provenance,
        "exit_code": exit_code,
    });
    let powers = cache
        .computed_powers()
        .into_iter()
        .filter_map(|(n, p)| p.groebner().ok().map(|g| (n, texts(g.polys()))))
        .collect();
    let closures = cache
        .computed_closures()
        .into_iter()
        .filter_map(|(n, c)| c.ideal.groebner().ok().map(|g| (n, texts(g.polys()))))
        .collect();
    Ok(Outcome { document, exit_code, groebner_basis: gb_text, powers, closures })
}

/// Executes a parsed request. Exit codes: 0 when every result is PASS or
/// INAPPLICABLE, 1 on any FAIL, 2 on any UNDETERMINED otherwise.
pub fn run_report(req: &AnalysisRequest) -> Result<Outcome, InputError> {
    match req.ring.field {
        FieldSpec::Rationals => run_in(req, Rationals),
        FieldSpec::Prime(p) => run_in(req, PrimeField::new(p).expect("checked by the header parser")),
    }
}

/// The reduced Gröbner basis of the request's ideal, as text.
pub fn canonical_basis(req: &AnalysisRequest) -> Result<Vec<String>, InputError> {
    fn gb<F: Field>(req: &AnalysisRequest, field: F) -> Result<Vec<String>, InputError> {
        let l = load(req, field)?;
        let g = l.ideal.groebner().map_err(|e| InputError { line: req.ideal.line, column: req.ideal.column, message: e.to_string() })?;
        Ok(texts(g.polys()))
    }
    match req.ring.field {
        FieldSpec::Rationals => gb(req, Rationals),
        FieldSpec::Prime(p) => gb(req, PrimeField::new(p).expect("checked by the header parser")),
    }
}

/// One line per result for the terminal.
pub fn summary(doc: &Value) -> String {
    let mut out = format!("{}  ideal ({})\n", doc["input"]["ring"].as_str().unwrap_or(""), {
        let g: Vec<&str> = doc["input"]["generators"].as_array().map(|a| a.iter().filter_map(|v| v.as_str()).collect()).unwrap_or_default();
        g.join(", ")
    });
    if let Some(rs) = doc["results"].as_array() {
        for r in rs {
            let check = r["check"].as_str().unwrap_or("?");
            let status = r["status"].as_str().unwrap_or("?");
            let note = match r.get("error") {
                Some(Value::String(e)) => format!("  ({e})"),
                _ => String::new(),
            };
            out.push_str(&format!("{check:<12} {status}{note}\n"));
        }
    }
    out.push_str(&format!("exit code {}\n", doc["exit_code"]));
    out
}
