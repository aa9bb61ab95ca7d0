//! Exhaustive sweeps over all couples of a degree, or all orders of moduli
//! of one pattern.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::catalog::{moduli_witness, Payload};
use crate::certify::{certify_moduli, certify_pair, Certificate};
use crate::exact::{rationalize, ExactRootSpec};
use crate::concat::{extend_large, extend_small, ModuliRealizer};
use crate::moduli::{enumerate_orders, forcing_test, ForcedSign, Forcing, Letter, ModuliCouple, ModuliOrder};
use crate::poly::RootSpec;
use crate::report::{certificate_json, config_json, roots_json, SCHEMA_VERSION};
use crate::sampler::{search_moduli, search_pair, SearchConfig, SearchStatus};
use crate::signs::{PairCouple, Sign, SignPattern};

/// Every couple of degree `d`: patterns in enumeration order, each followed
/// by its compatible pairs in lexicographic order.
pub fn enumerate_couples(d: usize) -> Vec<PairCouple> {
    SignPattern::enumerate(d)
        .into_iter()
        .flat_map(|p| {
            p.compatible_pairs()
                .into_iter()
                .map(move |pair| PairCouple::new(p.clone(), pair).expect("compatible by construction"))
        })
        .collect()
}

/// One representative per orbit, the lexicographically least member.
pub fn enumerate_orbits(d: usize) -> Vec<PairCouple> {
    let mut reps: Vec<PairCouple> = enumerate_couples(d).iter().map(|c| c.orbit().canonical().clone()).collect();
    reps.sort();
    reps.dedup();
    reps
}

#[derive(Debug, Clone, PartialEq)]
pub enum WitnessSource {
    Search { attempt_index: u64 },
    Catalog { id: &'static str },
    /// Mapped from the witness of another orbit member.
    Orbit { from: PairCouple },
    /// One root added to a witness of a couple of lower degree.
    Extension { from: ModuliCouple, end: End, letter: Letter },
}

/// Which end of the order of moduli an extension adds to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    Small,
    Large,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Realized { source: WitnessSource, spec: RootSpec, certificate: Box<Certificate> },
    ForcedNonRealizable { sign: ForcedSign },
    Unresolved { budget: u64 },
}

impl RowStatus {
    pub fn label(&self) -> &'static str {
        match self {
            RowStatus::Realized { .. } => "realized",
            RowStatus::ForcedNonRealizable { .. } => "forced-non-realizable",
            RowStatus::Unresolved { .. } => "unresolved",
        }
    }

    pub fn is_realized(&self) -> bool {
        matches!(self, RowStatus::Realized { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepCouple {
    Pair(PairCouple),
    Moduli(ModuliCouple),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub couple: SweepCouple,
    pub status: RowStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Totals {
    pub realized: usize,
    pub forced: usize,
    pub unresolved: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub degree: usize,
    /// Set for moduli sweeps.
    pub pattern: Option<SignPattern>,
    pub config: SearchConfig,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn totals(&self) -> Totals {
        let mut t = Totals::default();
        for row in &self.rows {
            match row.status {
                RowStatus::Realized { .. } => t.realized += 1,
                RowStatus::ForcedNonRealizable { .. } => t.forced += 1,
                RowStatus::Unresolved { .. } => t.unresolved += 1,
            }
        }
        t
    }

    pub fn unresolved(&self) -> Vec<&SweepCouple> {
        self.rows.iter().filter(|r| matches!(r.status, RowStatus::Unresolved { .. })).map(|r| &r.couple).collect()
    }

    /// Pair rows grouped by orbit canonical member.
    pub fn orbits(&self) -> BTreeMap<PairCouple, Vec<&SweepRow>> {
        let mut map: BTreeMap<PairCouple, Vec<&SweepRow>> = BTreeMap::new();
        for row in &self.rows {
            if let SweepCouple::Pair(c) = &row.couple {
                map.entry(c.orbit().canonical().clone()).or_default().push(row);
            }
        }
        map
    }

    /// Deterministic JSON; wall-clock time is left out so reruns compare
    /// byte for byte.
    pub fn to_json(&self, with_orbits: bool) -> Value {
        let t = self.totals();
        let mut v = json!({
            "schema_version": SCHEMA_VERSION,
            "command": if self.pattern.is_some() { "sweep moduli" } else { "sweep pairs" },
            "degree": self.degree,
            "pattern": self.pattern.as_ref().map(|p| p.to_string()),
            "config": config_json(&self.config),
            "rows": self.rows.iter().map(row_json).collect::<Vec<_>>(),
            "totals": { "couples": self.rows.len(), "realized": t.realized, "forced_non_realizable": t.forced, "unresolved": t.unresolved },
        });
        if with_orbits {
            v["orbits"] = self
                .orbits()
                .into_iter()
                .map(|(canonical, rows)| {
                    json!({
                        "canonical": couple_label(&SweepCouple::Pair(canonical)),
                        "members": rows.iter().map(|r| couple_label(&r.couple)).collect::<Vec<_>>(),
                        "statuses": rows.iter().map(|r| r.status.label()).collect::<Vec<_>>(),
                    })
                })
                .collect();
        }
        v
    }
}

pub fn couple_label(c: &SweepCouple) -> String {
    match c {
        SweepCouple::Pair(c) => format!("({}, ({}, {}))", c.pattern(), c.pair().pos, c.pair().neg),
        SweepCouple::Moduli(c) => format!("({}, {})", c.pattern(), c.order().bracket_string()),
    }
}

fn row_json(row: &SweepRow) -> Value {
    let mut v = match &row.couple {
        SweepCouple::Pair(c) => json!({ "pattern": c.pattern().to_string(), "pos": c.pair().pos, "neg": c.pair().neg }),
        SweepCouple::Moduli(c) => {
            json!({ "pattern": c.pattern().to_string(), "order": c.order().bracket_string(), "word": c.order().word_string() })
        }
    };
    v["status"] = json!(row.status.label());
    match &row.status {
        RowStatus::Realized { source, spec, certificate } => {
            v["source"] = match source {
                WitnessSource::Search { attempt_index } => json!({ "search": { "attempt_index": attempt_index } }),
                WitnessSource::Catalog { id } => json!({ "catalog": id }),
                WitnessSource::Orbit { from } => json!({ "orbit": couple_label(&SweepCouple::Pair(from.clone())) }),
                WitnessSource::Extension { from, end, letter } => json!({ "extension": {
                    "from": couple_label(&SweepCouple::Moduli(from.clone())),
                    "end": match end { End::Small => "small", End::Large => "large" },
                    "letter": letter.to_string(),
                } }),
            };
            v["roots"] = roots_json(spec);
            v["certificate"] = certificate_json(certificate);
        }
        RowStatus::ForcedNonRealizable { sign } => v["forced_sign"] = json!(sign),
        RowStatus::Unresolved { budget } => v["budget"] = json!(budget),
    }
    v
}

fn single_worker(cfg: &SearchConfig) -> SearchConfig {
    SearchConfig { workers: 1, ..cfg.clone() }
}

fn search_pair_row(couple: &PairCouple, cfg: &SearchConfig) -> RowStatus {
    let out = search_pair(couple.pattern(), couple.pair(), cfg).expect("enumerated couples are compatible");
    match out.status {
        SearchStatus::Found(w) => match w.certificate {
            Some(certificate) => RowStatus::Realized {
                source: WitnessSource::Search { attempt_index: w.attempt_index },
                spec: w.spec,
                certificate: Box::new(certificate),
            },
            None => certify_spec(&w.spec, couple)
                .map(|(spec, certificate)| RowStatus::Realized {
                    source: WitnessSource::Search { attempt_index: w.attempt_index },
                    spec,
                    certificate: Box::new(certificate),
                })
                .unwrap_or(RowStatus::Unresolved { budget: cfg.max_attempts }),
        },
        SearchStatus::Exhausted => RowStatus::Unresolved { budget: cfg.max_attempts },
    }
}

fn certify_spec(spec: &RootSpec, couple: &PairCouple) -> Option<(RootSpec, Certificate)> {
    let exact = rationalize(spec, crate::exact::DEFAULT_DIGITS).ok()?;
    let certificate = certify_pair(&exact, couple).ok()?;
    Some((spec.clone(), certificate))
}

/// The images of a certified witness under `g1`, `g2` and `g1 g2`, each
/// re-certified against the mapped couple.
pub fn orbit_images(exact: &ExactRootSpec, couple: &PairCouple) -> Vec<(PairCouple, Certificate)> {
    let images = [
        (couple.act_g1(), exact.negated()),
        (couple.act_g2(), exact.inverted()),
        (couple.act_g1().act_g2(), exact.negated().inverted()),
    ];
    images
        .into_iter()
        .filter_map(|(c, spec)| certify_pair(&spec, &c).ok().map(|cert| (c, cert)))
        .collect()
}

/// Runs a pair search for every couple of degree `d`. Couples left
/// unresolved whose orbit contains a realized member get the mapped witness.
pub fn sweep_pairs(d: usize, cfg: &SearchConfig) -> SweepReport {
    let couples = enumerate_couples(d);
    let inner = single_worker(cfg);
    let statuses: Vec<RowStatus> = couples.par_iter().map(|c| search_pair_row(c, &inner)).collect();
    let mut rows: Vec<SweepRow> =
        couples.into_iter().zip(statuses).map(|(c, status)| SweepRow { couple: SweepCouple::Pair(c), status }).collect();
    fill_from_orbits(&mut rows);
    SweepReport { degree: d, pattern: None, config: cfg.clone(), rows }
}

fn fill_from_orbits(rows: &mut [SweepRow]) {
    let mut mapped: BTreeMap<PairCouple, (PairCouple, Certificate)> = BTreeMap::new();
    for row in rows.iter() {
        if let (SweepCouple::Pair(c), RowStatus::Realized { certificate, .. }) = (&row.couple, &row.status) {
            for (image, cert) in orbit_images(&certificate.spec, c) {
                mapped.entry(image).or_insert_with(|| (c.clone(), cert));
            }
        }
    }
    for row in rows.iter_mut() {
        if let (SweepCouple::Pair(c), RowStatus::Unresolved { .. }) = (&row.couple, &row.status) {
            if let Some((from, cert)) = mapped.get(c) {
                row.status = RowStatus::Realized {
                    source: WitnessSource::Orbit { from: from.clone() },
                    spec: cert.spec.to_float(),
                    certificate: Box::new(cert.clone()),
                };
            }
        }
    }
}

/// Depth of the extension fallback in moduli sweeps.
pub const EXTENSION_DEPTH: usize = 2;

/// Couples of degree one lower that `extend_small` or `extend_large` maps
/// onto `couple`.
pub fn reductions(couple: &ModuliCouple) -> Vec<(ModuliCouple, End, Letter)> {
    let sigma = couple.pattern().signs();
    let word = couple.order().word();
    let d = word.len();
    if d < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let last = word[d - 1];
    let tau: Option<Vec<Sign>> = match last {
        Letter::P if sigma[1] == Sign::Minus => Some(sigma[1..].iter().map(|s| s.flipped()).collect()),
        Letter::N if sigma[1] == Sign::Plus => Some(sigma[1..].to_vec()),
        _ => None,
    };
    if let Some(tau) = tau {
        push_reduction(&mut out, tau, &word[..d - 1], End::Large, last);
    }
    let first = word[0];
    let (a, b) = (sigma[d - 1], sigma[d]);
    let fits = match first {
        Letter::P => b != a,
        Letter::N => b == a,
    };
    if fits {
        push_reduction(&mut out, sigma[..d].to_vec(), &word[1..], End::Small, first);
    }
    out
}

fn push_reduction(out: &mut Vec<(ModuliCouple, End, Letter)>, signs: Vec<Sign>, word: &[Letter], end: End, letter: Letter) {
    let (Ok(pattern), Ok(order)) = (SignPattern::from_signs(signs), ModuliOrder::from_word(word.to_vec())) else { return };
    if let Ok(c) = ModuliCouple::new(pattern, order) {
        out.push((c, end, letter));
    }
}

type Resolved = (WitnessSource, RootSpec, Certificate);

fn resolve_moduli(couple: &ModuliCouple, cfg: &SearchConfig, depth: usize) -> Option<Resolved> {
    if let Ok(Forcing::Conflict(_)) = forcing_test(couple.pattern(), couple.order()) {
        return None;
    }
    let out = search_moduli(couple.pattern(), couple.order(), cfg).ok()?;
    if let SearchStatus::Found(w) = out.status {
        let certificate = match w.certificate {
            Some(c) => Some(c),
            None => rationalize(&w.spec, cfg.digits).ok().and_then(|e| certify_moduli(&e, couple).ok()),
        };
        if let Some(certificate) = certificate {
            return Some((WitnessSource::Search { attempt_index: w.attempt_index }, w.spec, certificate));
        }
    }
    if let Some(entry) = moduli_witness(couple) {
        if let Payload::ModuliFixture { roots, .. } = &entry.payload {
            if let Ok(certificate) = certify_moduli(roots, couple) {
                return Some((WitnessSource::Catalog { id: entry.id }, roots.to_float(), certificate));
            }
        }
    }
    if depth == 0 {
        return None;
    }
    for (reduced, end, letter) in reductions(couple) {
        let Some((_, _, base)) = resolve_moduli(&reduced, cfg, depth - 1) else { continue };
        let Ok(realizer) = ModuliRealizer::from_exact(base.spec) else { continue };
        let extended = match end {
            End::Small => extend_small(&realizer, letter),
            End::Large => extend_large(&realizer, letter),
        };
        if let Ok(r) = extended {
            if let Ok(certificate) = certify_moduli(&r.exact, couple) {
                return Some((WitnessSource::Extension { from: reduced, end, letter }, r.spec, certificate));
            }
        }
    }
    None
}

fn moduli_row(couple: &ModuliCouple, cfg: &SearchConfig) -> RowStatus {
    if let Ok(Forcing::Conflict(sign)) = forcing_test(couple.pattern(), couple.order()) {
        return RowStatus::ForcedNonRealizable { sign };
    }
    match resolve_moduli(couple, cfg, EXTENSION_DEPTH) {
        Some((source, spec, certificate)) => RowStatus::Realized { source, spec, certificate: Box::new(certificate) },
        None => RowStatus::Unresolved { budget: cfg.max_attempts },
    }
}

/// Classifies every order of moduli compatible with `pattern`: the forcing
/// test runs first, then a search, then the catalog witnesses, then
/// extensions of lower-degree witnesses.
pub fn sweep_moduli(pattern: &SignPattern, cfg: &SearchConfig) -> SweepReport {
    let dp = pattern.descartes_pair();
    let couples: Vec<ModuliCouple> = enumerate_orders(dp.changes, dp.preservations)
        .into_iter()
        .map(|o| ModuliCouple::new(pattern.clone(), o).expect("compatible by construction"))
        .collect();
    let inner = single_worker(cfg);
    let statuses: Vec<RowStatus> = couples.par_iter().map(|c| moduli_row(c, &inner)).collect();
    let rows = couples
        .into_iter()
        .zip(statuses)
        .map(|(c, status)| SweepRow { couple: SweepCouple::Moduli(c), status })
        .collect();
    SweepReport { degree: pattern.degree(), pattern: Some(pattern.clone()), config: cfg.clone(), rows }
}
