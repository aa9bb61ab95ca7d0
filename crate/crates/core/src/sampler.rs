//! Rejection sampling over random roots.
//!
//! Each search draws root sets, expands them, and stops at the first attempt
//! whose polynomial has the requested signs (and, for gap searches, class).
//! Attempt `i` (1-based) is a pure function of `(seed, i)`; parallel runs
//! report the smallest successful index, so the result does not depend on
//! the number of workers.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::{certify_gap_claim, certify_moduli, certify_pair, Certificate};
use crate::exact::{rationalize, DEFAULT_DIGITS};
use crate::gaps::{gap_report, GapClass, GapReport};
use crate::moduli::{is_compatible, Letter, ModuliCouple, ModuliOrder};
use crate::poly::{expand_unchecked, ComplexPair, RealPolynomial, RootSpec, DEFAULT_SIGN_TOLERANCE};
use crate::rng::AttemptRng;
use crate::signs::{PairCouple, RootCountPair, SignPattern};

pub const DEFAULT_SEED: u64 = 0x5EED_2024;
pub const DEFAULT_MAX_ATTEMPTS: u64 = 1_000_000;

/// Attempts handed to a worker at a time.
const CHUNK: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("incompatible couple: {0}")]
    IncompatibleCouple(String),
    #[error("degree {degree} minus {real} real roots is odd; complex roots come in pairs")]
    ParityMismatch { degree: usize, real: usize },
    #[error("gap searches need degree >= 3, got {0}")]
    DegreeTooSmall(usize),
}

/// How root magnitudes are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    /// Every magnitude uniform on `(0, ell]`.
    Uniform,
    /// Each root independently drawn on the narrow scale with probability
    /// `narrow_fraction`, otherwise on `ell`.
    Mixture { narrow_scale: f64, narrow_fraction: f64 },
    /// In pair searches, a real root repeats the previous root of the same
    /// sign with probability `dup_probability`.
    MultiplicityBias { dup_probability: f64 },
}

impl Strategy {
    pub fn mixture(half_width: f64) -> Self {
        Strategy::Mixture { narrow_scale: half_width / 100.0, narrow_fraction: 0.5 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Uniform => "uniform",
            Strategy::Mixture { .. } => "mixture",
            Strategy::MultiplicityBias { .. } => "multiplicity",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Uniform => write!(f, "uniform"),
            Strategy::Mixture { narrow_scale, narrow_fraction } => {
                write!(f, "mixture(scale={narrow_scale}, fraction={narrow_fraction})")
            }
            Strategy::MultiplicityBias { dup_probability } => write!(f, "multiplicity(p={dup_probability})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Maximum number of attempts `N`.
    pub max_attempts: u64,
    /// Sampling half-width `ell`.
    pub half_width: f64,
    pub seed: u64,
    pub strategy: Strategy,
    /// Relative threshold below which a coefficient counts as zero.
    pub tolerance: f64,
    pub workers: usize,
    /// Re-verify every hit in exact arithmetic before accepting it.
    pub certify: bool,
    /// Significant digits kept when rationalizing a hit.
    pub digits: u32,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_attempts: DEFAULT_MAX_ATTEMPTS,
            half_width: 1.0,
            seed: DEFAULT_SEED,
            strategy: Strategy::Uniform,
            tolerance: DEFAULT_SIGN_TOLERANCE,
            workers: 1,
            certify: true,
            digits: DEFAULT_DIGITS,
        }
    }
}

impl SearchConfig {
    pub fn with_attempts(max_attempts: u64) -> Self {
        Self { max_attempts, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: String| Err(SearchError::InvalidConfig(m));
        if self.max_attempts == 0 {
            return bad("N must be positive".into());
        }
        if !(self.half_width.is_finite() && self.half_width > 0.0) {
            return bad(format!("ell must be positive, got {}", self.half_width));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return bad(format!("tolerance must be positive, got {}", self.tolerance));
        }
        if self.workers == 0 {
            return bad("workers must be positive".into());
        }
        if self.digits == 0 {
            return bad("digits must be positive".into());
        }
        match self.strategy {
            Strategy::Uniform => {}
            Strategy::Mixture { narrow_scale, narrow_fraction } => {
                if !(narrow_scale > 0.0 && narrow_scale < self.half_width) {
                    return bad(format!("narrow scale must lie in (0, ell), got {narrow_scale}"));
                }
                if !(0.0..=1.0).contains(&narrow_fraction) {
                    return bad(format!("narrow fraction must lie in [0, 1], got {narrow_fraction}"));
                }
            }
            Strategy::MultiplicityBias { dup_probability } => {
                if !(0.0..=1.0).contains(&dup_probability) {
                    return bad(format!("duplicate probability must lie in [0, 1], got {dup_probability}"));
                }
            }
        }
        Ok(())
    }
}

/// A successful attempt.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub attempt_index: u64,
    pub spec: RootSpec,
    pub poly: RealPolynomial,
    pub certificate: Option<Certificate>,
    pub gap_report: Option<GapReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchStatus {
    Found(Box<Witness>),
    /// No witness within `N` attempts. This is evidence, not a proof.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    /// Attempts consumed: the winning index, or `N`.
    pub attempts: u64,
    pub seconds: f64,
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&Witness> {
        match &self.status {
            SearchStatus::Found(w) => Some(w),
            SearchStatus::Exhausted => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self.status, SearchStatus::Found(_))
    }
}

/// Runs `attempt(1..=max_attempts)` on `workers` threads and returns the
/// smallest index that produced a value.
pub fn run_attempts<T, F>(max_attempts: u64, workers: usize, attempt: F) -> Option<(u64, T)>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync,
{
    if workers <= 1 {
        return (1..=max_attempts).find_map(|i| attempt(i).map(|t| (i, t)));
    }
    let next_chunk = AtomicU64::new(0);
    let best = AtomicU64::new(u64::MAX);
    let found: Mutex<Option<(u64, T)>> = Mutex::new(None);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let chunk = next_chunk.fetch_add(1, Ordering::Relaxed);
                let start = chunk.saturating_mul(CHUNK).saturating_add(1);
                if start > max_attempts || start >= best.load(Ordering::Acquire) {
                    return;
                }
                let end = start.saturating_add(CHUNK - 1).min(max_attempts);
                for i in start..=end {
                    if i >= best.load(Ordering::Acquire) {
                        break;
                    }
                    if let Some(value) = attempt(i) {
                        best.fetch_min(i, Ordering::AcqRel);
                        let mut slot = found.lock().expect("result lock poisoned");
                        if slot.as_ref().map_or(true, |(j, _)| i < *j) {
                            *slot = Some((i, value));
                        }
                        break;
                    }
                }
            });
        }
    });
    found.into_inner().expect("result lock poisoned")
}

fn finish(cfg: &SearchConfig, started: Instant, hit: Option<(u64, Witness)>) -> SearchOutcome {
    let seconds = started.elapsed().as_secs_f64();
    match hit {
        Some((index, witness)) => SearchOutcome { status: SearchStatus::Found(Box::new(witness)), attempts: index, seconds },
        None => SearchOutcome { status: SearchStatus::Exhausted, attempts: cfg.max_attempts, seconds },
    }
}

fn draw_magnitude(rng: &mut AttemptRng, cfg: &SearchConfig) -> f64 {
    match cfg.strategy {
        Strategy::Mixture { narrow_scale, narrow_fraction } => {
            if rng.bernoulli(narrow_fraction) {
                rng.positive(narrow_scale)
            } else {
                rng.positive(cfg.half_width)
            }
        }
        _ => rng.positive(cfg.half_width),
    }
}

fn draw_symmetric(rng: &mut AttemptRng, cfg: &SearchConfig) -> f64 {
    match cfg.strategy {
        Strategy::Mixture { narrow_scale, narrow_fraction } => {
            if rng.bernoulli(narrow_fraction) {
                rng.symmetric(narrow_scale)
            } else {
                rng.symmetric(cfg.half_width)
            }
        }
        _ => rng.symmetric(cfg.half_width),
    }
}

fn draw_signed_group(rng: &mut AttemptRng, cfg: &SearchConfig, count: usize, sign: f64, out: &mut Vec<f64>) {
    let mut previous: Option<f64> = None;
    for _ in 0..count {
        let value = match (cfg.strategy, previous) {
            (Strategy::MultiplicityBias { dup_probability }, Some(prev)) if rng.bernoulli(dup_probability) => prev,
            _ => sign * draw_magnitude(rng, cfg),
        };
        out.push(value);
        previous = Some(value);
    }
}

/// Roots for one attempt of a pair search: `pos` positives on `(0, ell]`,
/// `neg` negatives on `[-ell, 0)`, and `(d - pos - neg) / 2` conjugate pairs
/// with `re` on `[-ell, ell]` and `im` on `(0, ell]`.
pub fn draw_rootspec_pair(
    degree: usize,
    pair: RootCountPair,
    cfg: &SearchConfig,
    attempt_index: u64,
) -> Result<RootSpec, SearchError> {
    let real = pair.pos + pair.neg;
    if real > degree || (degree - real) % 2 != 0 {
        return Err(SearchError::ParityMismatch { degree, real });
    }
    Ok(draw_pair_unchecked(degree, pair, cfg, attempt_index))
}

fn draw_pair_unchecked(degree: usize, pair: RootCountPair, cfg: &SearchConfig, attempt_index: u64) -> RootSpec {
    let mut rng = AttemptRng::new(cfg.seed, attempt_index);
    let mut real_roots = Vec::with_capacity(pair.pos + pair.neg);
    draw_signed_group(&mut rng, cfg, pair.pos, 1.0, &mut real_roots);
    draw_signed_group(&mut rng, cfg, pair.neg, -1.0, &mut real_roots);
    let pairs = (degree - pair.pos - pair.neg) / 2;
    let complex_pairs = (0..pairs)
        .map(|_| {
            let re = draw_symmetric(&mut rng, cfg);
            let im = draw_magnitude(&mut rng, cfg);
            ComplexPair::new(re, im)
        })
        .collect();
    RootSpec { real_roots, complex_pairs }
}

/// Roots for one attempt of a moduli search: `d` magnitudes sorted
/// ascending, negated where the order has `N`. `None` on a tie.
pub fn draw_roots_for_order(order: &ModuliOrder, cfg: &SearchConfig, attempt_index: u64) -> Option<Vec<f64>> {
    let mut rng = AttemptRng::new(cfg.seed, attempt_index);
    let mut magnitudes: Vec<f64> = (0..order.len()).map(|_| draw_magnitude(&mut rng, cfg)).collect();
    magnitudes.sort_by(f64::total_cmp);
    if magnitudes.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(
        magnitudes
            .into_iter()
            .zip(order.word())
            .map(|(m, letter)| if *letter == Letter::P { m } else { -m })
            .collect(),
    )
}

/// Sorted distinct nonzero reals on `[-ell, ell]` for one gap attempt.
pub fn draw_gap_roots(degree: usize, cfg: &SearchConfig, attempt_index: u64) -> Option<Vec<f64>> {
    let mut rng = AttemptRng::new(cfg.seed, attempt_index);
    let mut x: Vec<f64> = (0..degree).map(|_| draw_symmetric(&mut rng, cfg)).collect();
    if x.contains(&0.0) {
        return None;
    }
    x.sort_by(f64::total_cmp);
    if x.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(x)
}

/// Searches for a polynomial with sign pattern `pattern` and exactly
/// `pair.pos` positive and `pair.neg` negative roots.
pub fn search_pair(pattern: &SignPattern, pair: RootCountPair, cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    cfg.validate()?;
    let couple = PairCouple::new(pattern.clone(), pair).map_err(|e| SearchError::IncompatibleCouple(e.to_string()))?;
    let degree = pattern.degree();
    let started = Instant::now();
    let hit = run_attempts(cfg.max_attempts, cfg.workers, |i| {
        let spec = draw_pair_unchecked(degree, pair, cfg, i);
        let poly = expand_unchecked(&spec);
        if !poly.matches_pattern(pattern, cfg.tolerance) {
            return None;
        }
        let certificate = if cfg.certify {
            let exact = rationalize(&spec, cfg.digits).ok()?;
            Some(certify_pair(&exact, &couple).ok()?)
        } else {
            None
        };
        Some(Witness { attempt_index: i, spec, poly, certificate, gap_report: None })
    });
    Ok(finish(cfg, started, hit))
}

/// Searches for a hyperbolic polynomial with sign pattern `pattern` whose
/// roots realize the order of moduli `order`.
pub fn search_moduli(pattern: &SignPattern, order: &ModuliOrder, cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    cfg.validate()?;
    if !is_compatible(pattern, order) {
        return Err(SearchError::IncompatibleCouple(format!("{pattern} with {}", order.bracket_string())));
    }
    let couple = ModuliCouple::new(pattern.clone(), order.clone())
        .map_err(|e| SearchError::IncompatibleCouple(e.to_string()))?;
    let started = Instant::now();
    let hit = run_attempts(cfg.max_attempts, cfg.workers, |i| {
        let roots = draw_roots_for_order(order, cfg, i)?;
        let spec = RootSpec::real(roots);
        let poly = expand_unchecked(&spec);
        if !poly.matches_pattern(pattern, cfg.tolerance) {
            return None;
        }
        let certificate = if cfg.certify {
            let exact = rationalize(&spec, cfg.digits).ok()?;
            Some(certify_moduli(&exact, &couple).ok()?)
        } else {
            None
        };
        Some(Witness { attempt_index: i, spec, poly, certificate, gap_report: None })
    });
    Ok(finish(cfg, started, hit))
}

/// Searches for `degree` distinct real roots whose polynomial falls in the
/// gap class `target`.
pub fn search_gap_class(degree: usize, target: GapClass, cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    cfg.validate()?;
    if degree < 3 {
        return Err(SearchError::DegreeTooSmall(degree));
    }
    let started = Instant::now();
    let hit = run_attempts(cfg.max_attempts, cfg.workers, |i| {
        let x = draw_gap_roots(degree, cfg, i)?;
        let report = gap_report(&x).ok()?;
        if report.class != target {
            return None;
        }
        let certificate = if cfg.certify {
            let exact = rationalize(&RootSpec::real(x.clone()), cfg.digits).ok()?;
            let roots = exact.real_roots;
            if roots.windows(2).any(|w| w[0] >= w[1]) {
                return None;
            }
            Some(certify_gap_claim(&roots, target).ok()?)
        } else {
            None
        };
        let spec = RootSpec::real(x);
        let poly = expand_unchecked(&spec);
        Some(Witness { attempt_index: i, spec, poly, certificate, gap_report: Some(report) })
    });
    Ok(finish(cfg, started, hit))
}

impl FromStr for Strategy {
    type Err = String;

    /// Parses the strategy name with default parameters for `ell = 1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "uniform" => Ok(Strategy::Uniform),
            "mixture" => Ok(Strategy::mixture(1.0)),
            "multiplicity" => Ok(Strategy::MultiplicityBias { dup_probability: 0.5 }),
            other => Err(format!("unknown strategy {other:?}; expected uniform, mixture or multiplicity")),
        }
    }
}
