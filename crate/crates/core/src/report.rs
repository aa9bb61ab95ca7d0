//! JSON reports for searches, verifications and sweeps.

use serde_json::{json, Value};

use crate::certify::Certificate;
use crate::gaps::GapReport;
use crate::poly::{RealPolynomial, RootSpec};
use crate::sampler::{SearchConfig, SearchOutcome, SearchStatus, Strategy};

pub const SCHEMA_VERSION: u32 = 1;

pub fn strategy_json(strategy: &Strategy) -> Value {
    match strategy {
        Strategy::Uniform => json!({ "name": "uniform" }),
        Strategy::Mixture { narrow_scale, narrow_fraction } => {
            json!({ "name": "mixture", "narrow_scale": narrow_scale, "narrow_fraction": narrow_fraction })
        }
        Strategy::MultiplicityBias { dup_probability } => {
            json!({ "name": "multiplicity", "dup_probability": dup_probability })
        }
    }
}

pub fn config_json(cfg: &SearchConfig) -> Value {
    json!({
        "seed": cfg.seed,
        "n": cfg.max_attempts,
        "ell": cfg.half_width,
        "strategy": strategy_json(&cfg.strategy),
        "tolerance": cfg.tolerance,
        "digits": cfg.digits,
    })
}

pub fn polynomial_json(poly: &RealPolynomial) -> Value {
    json!({ "coefficients": poly.coefficients().iter().map(|c| c.to_string()).collect::<Vec<_>>() })
}

pub fn roots_json(spec: &RootSpec) -> Value {
    json!({
        "real": spec.real_roots,
        "complex_pairs": spec.complex_pairs.iter().map(|p| [p.re, p.im]).collect::<Vec<_>>(),
    })
}

pub fn certificate_json(cert: &Certificate) -> Value {
    json!({
        "rational_coefficients": cert.rational_coefficients(),
        "claim": cert.claim,
        "checks": cert.checks,
    })
}

pub fn gap_report_json(r: &GapReport) -> Value {
    json!({
        "x": r.x,
        "z": r.z,
        "xi": r.xi.iter().map(|c| c.value).collect::<Vec<_>>(),
        "m_p": r.m_p,
        "M_p": r.big_m_p,
        "m_tilde": r.m_tilde,
        "M_tilde": r.big_m_tilde,
        "m_prime": r.m_prime,
        "M_prime": r.big_m_prime,
        "class": r.class.as_str(),
        "margins": [r.margins.0, r.margins.1],
    })
}

/// The `outcome` object. Exhausted searches are reported as `unresolved`:
/// running out of attempts proves nothing.
pub fn outcome_json(outcome: &SearchOutcome) -> Value {
    let mut out = match &outcome.status {
        SearchStatus::Found(w) => {
            let mut o = json!({
                "status": "found",
                "attempt_index": w.attempt_index,
                "polynomial": polynomial_json(&w.poly),
                "roots": roots_json(&w.spec),
            });
            if let Some(c) = &w.certificate {
                o["certificate"] = certificate_json(c);
            }
            if let Some(g) = &w.gap_report {
                o["gap_report"] = gap_report_json(g);
            }
            o
        }
        SearchStatus::Exhausted => json!({ "status": "unresolved" }),
    };
    out["timing"] = json!({ "attempts": outcome.attempts, "seconds": outcome.seconds });
    out
}

pub fn search_report(command: &str, cfg: &SearchConfig, query: Value, outcome: &SearchOutcome) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config_json(cfg),
        "query": query,
        "outcome": outcome_json(outcome),
    })
}

/// Report for commands that check given roots instead of searching.
pub fn verification_report(command: &str, query: Value, status: &str, spec: &RootSpec, details: Value) -> Value {
    let mut outcome = json!({ "status": status, "roots": roots_json(spec) });
    if let (Some(o), Value::Object(extra)) = (outcome.as_object_mut(), details) {
        o.extend(extra);
    }
    json!({ "schema_version": SCHEMA_VERSION, "command": command, "query": query, "outcome": outcome })
}
