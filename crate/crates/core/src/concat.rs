//! Building higher-degree realizers from verified lower-degree ones.
//!
//! Pair couples combine as `eps^{d2} P1(x) P2(x / eps)`, i.e. the roots of
//! `P2` shrunk by `eps`. Moduli couples grow by one root, either smaller
//! than every modulus (`x -+ eps`) or larger than every modulus (`x -+ delta`).
//! The scale is found by halving (or doubling) and every candidate is checked
//! with an exact expansion.

use num_traits::Signed;
use thiserror::Error;

use crate::certify::{certify_moduli, certify_pair, exact_order, Certificate, CertifyError};
use crate::exact::{rationalize, to_f64, ExactError, ExactRootSpec, Rational, DEFAULT_DIGITS};
use crate::moduli::{Letter, ModuliCouple};
use crate::poly::{expand_from_roots, RealPolynomial, RootSpec};
use crate::signs::{PairCouple, RootCountPair, Sign, SignPattern};

/// Maximum number of halvings (or doublings) tried.
pub const MAX_SCALE_STEPS: u32 = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConcatError {
    #[error("no epsilon found after {0} halvings")]
    EpsilonNotFound(u32),
    #[error("no delta found after {0} doublings")]
    DeltaNotFound(u32),
    #[error("input is not a verified realizer: {0}")]
    Unverified(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

impl From<CertifyError> for ConcatError {
    fn from(e: CertifyError) -> Self {
        ConcatError::Unverified(e.to_string())
    }
}

fn rational(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// A root set together with the pair couple it is certified to realize.
#[derive(Debug, Clone, PartialEq)]
pub struct PairRealizer {
    pub exact: ExactRootSpec,
    pub couple: PairCouple,
    pub certificate: Certificate,
}

impl PairRealizer {
    /// Reads the couple off the exact roots and certifies it.
    pub fn from_exact(exact: ExactRootSpec) -> Result<Self, ConcatError> {
        let poly = crate::exact::exact_expand(&exact);
        let pattern = poly
            .sign_vector()
            .map_err(|index| ConcatError::Unverified(format!("coefficient {index} vanishes")))?;
        let pair = RootCountPair::new(exact.positive_count(), exact.negative_count());
        let couple = PairCouple::new(pattern, pair).map_err(|e| ConcatError::Unverified(e.to_string()))?;
        Self::with_claim(exact, couple)
    }

    /// Certifies that `exact` realizes `couple`.
    pub fn with_claim(exact: ExactRootSpec, couple: PairCouple) -> Result<Self, ConcatError> {
        let certificate = certify_pair(&exact, &couple)?;
        Ok(Self { exact, couple, certificate })
    }

    pub fn from_spec(spec: &RootSpec) -> Result<Self, ConcatError> {
        Self::from_exact(rationalize(spec, DEFAULT_DIGITS)?)
    }

    pub fn spec(&self) -> RootSpec {
        self.exact.to_float()
    }
}

/// A real-rooted set with the moduli couple it is certified to realize.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuliRealizer {
    pub exact: ExactRootSpec,
    pub couple: ModuliCouple,
    pub certificate: Certificate,
}

impl ModuliRealizer {
    pub fn from_exact(exact: ExactRootSpec) -> Result<Self, ConcatError> {
        if !exact.complex_pairs.is_empty() {
            return Err(ConcatError::Unverified("moduli couples need real roots only".into()));
        }
        let poly = crate::exact::exact_expand(&exact);
        let pattern = poly
            .sign_vector()
            .map_err(|index| ConcatError::Unverified(format!("coefficient {index} vanishes")))?;
        let order = exact_order(&exact.real_roots).ok_or_else(|| ConcatError::Unverified("tied moduli".into()))?;
        let couple = ModuliCouple::new(pattern, order).map_err(|e| ConcatError::Unverified(e.to_string()))?;
        let certificate = certify_moduli(&exact, &couple)?;
        Ok(Self { exact, couple, certificate })
    }

    pub fn from_roots(roots: &[f64]) -> Result<Self, ConcatError> {
        Self::from_exact(rationalize(&RootSpec::real(roots.to_vec()), DEFAULT_DIGITS)?)
    }

    pub fn spec(&self) -> RootSpec {
        self.exact.to_float()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RealizedCouple {
    Pair(PairCouple),
    Moduli(ModuliCouple),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcatResult {
    /// The `eps` or `delta` that was accepted.
    pub scale: Rational,
    /// Halvings (or doublings) applied to the starting scale.
    pub steps: u32,
    pub exact: ExactRootSpec,
    pub spec: RootSpec,
    pub poly: RealPolynomial,
    pub couple: RealizedCouple,
    pub certificate: Certificate,
}

impl ConcatResult {
    pub fn scale_f64(&self) -> f64 {
        to_f64(&self.scale)
    }
}

/// The pattern produced by the concatenation lemma: `(+, s1, s2)` when the
/// last sign of the left pattern is `+`, `(+, s1, -s2)` otherwise, where
/// `s1`, `s2` are the patterns without their leading `+`.
pub fn concatenated_pattern(left: &SignPattern, right: &SignPattern) -> SignPattern {
    let mut signs = left.signs().to_vec();
    let tail = &right.signs()[1..];
    match left.last() {
        Sign::Plus => signs.extend_from_slice(tail),
        Sign::Minus => signs.extend(tail.iter().map(|s| s.flipped())),
    }
    SignPattern::from_signs(signs).expect("starts with +")
}

fn finish(scale: Rational, steps: u32, exact: ExactRootSpec, couple: RealizedCouple, certificate: Certificate) -> ConcatResult {
    let spec = exact.to_float();
    let poly = expand_from_roots(&spec).expect("certified roots are nonzero");
    ConcatResult { scale, steps, exact, spec, poly, couple, certificate }
}

/// Concatenates two pair realizers; `eps` starts at `1/2` and is halved
/// until the exact product realizes the target couple.
pub fn concat_pairs(left: &PairRealizer, right: &PairRealizer) -> Result<ConcatResult, ConcatError> {
    let pattern = concatenated_pattern(left.couple.pattern(), right.couple.pattern());
    let (l, r) = (left.couple.pair(), right.couple.pair());
    let pair = RootCountPair::new(l.pos + r.pos, l.neg + r.neg);
    let target = PairCouple::new(pattern, pair).map_err(|e| ConcatError::Unverified(e.to_string()))?;
    let half = Rational::new(1.into(), 2.into());
    let mut eps = half.clone();
    for steps in 0..MAX_SCALE_STEPS {
        let candidate = left.exact.union(&right.exact.scaled(&eps));
        if let Ok(certificate) = certify_pair(&candidate, &target) {
            return Ok(finish(eps, steps, candidate, RealizedCouple::Pair(target), certificate));
        }
        eps *= &half;
    }
    Err(ConcatError::EpsilonNotFound(MAX_SCALE_STEPS))
}

fn min_max_modulus(exact: &ExactRootSpec) -> (Rational, Rational) {
    let mut moduli = exact.real_roots.iter().map(|r| r.abs());
    let first = moduli.next().expect("realizer has roots");
    moduli.fold((first.clone(), first), |(lo, hi), m| (lo.min(m.clone()), hi.max(m)))
}

fn new_root(letter: Letter, magnitude: &Rational) -> Rational {
    match letter {
        Letter::P => magnitude.clone(),
        Letter::N => -magnitude.clone(),
    }
}

/// Multiplies by `(x - eps)` (letter `P`) or `(x + eps)` (letter `N`) with
/// `eps` below every modulus; the order gains `letter` at its small end and
/// the pattern gains one sign at its right end.
pub fn extend_small(v: &ModuliRealizer, letter: Letter) -> Result<ConcatResult, ConcatError> {
    let sigma = v.couple.pattern();
    let appended = match letter {
        Letter::P => sigma.last().flipped(),
        Letter::N => sigma.last(),
    };
    let mut signs = sigma.signs().to_vec();
    signs.push(appended);
    let pattern = SignPattern::from_signs(signs).expect("starts with +");
    let order = v.couple.order().prepended(letter);
    let target = ModuliCouple::new(pattern, order).map_err(|e| ConcatError::Unverified(e.to_string()))?;

    let half = Rational::new(1.into(), 2.into());
    let mut eps = min_max_modulus(&v.exact).0 * &half;
    for steps in 0..MAX_SCALE_STEPS {
        let candidate = v.exact.union(&ExactRootSpec { real_roots: vec![new_root(letter, &eps)], complex_pairs: vec![] });
        if let Ok(certificate) = certify_moduli(&candidate, &target) {
            return Ok(finish(eps, steps, candidate, RealizedCouple::Moduli(target), certificate));
        }
        eps *= &half;
    }
    Err(ConcatError::EpsilonNotFound(MAX_SCALE_STEPS))
}

/// Multiplies by `(x - delta)` (letter `P`) or `(x + delta)` (letter `N`)
/// with `delta` above every modulus; the order gains `letter` at its large
/// end and the pattern becomes `(+, -sigma)` for `P` or `(+, sigma)` for `N`.
pub fn extend_large(v: &ModuliRealizer, letter: Letter) -> Result<ConcatResult, ConcatError> {
    let sigma = v.couple.pattern();
    let mut signs = vec![Sign::Plus];
    match letter {
        Letter::P => signs.extend(sigma.negated_signs()),
        Letter::N => signs.extend_from_slice(sigma.signs()),
    }
    let pattern = SignPattern::from_signs(signs).expect("starts with +");
    let order = v.couple.order().appended(letter);
    let target = ModuliCouple::new(pattern, order).map_err(|e| ConcatError::Unverified(e.to_string()))?;

    let two = rational(2);
    let mut delta = min_max_modulus(&v.exact).1 * &two;
    for steps in 0..MAX_SCALE_STEPS {
        let candidate = v.exact.union(&ExactRootSpec { real_roots: vec![new_root(letter, &delta)], complex_pairs: vec![] });
        if let Ok(certificate) = certify_moduli(&candidate, &target) {
            return Ok(finish(delta, steps, candidate, RealizedCouple::Moduli(target), certificate));
        }
        delta *= &two;
    }
    Err(ConcatError::DeltaNotFound(MAX_SCALE_STEPS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rational;

    fn exact(roots: &[&str]) -> ExactRootSpec {
        ExactRootSpec::from_decimals(roots, &[]).unwrap()
    }

    #[test]
    fn lemma_case_one() {
        let left = PairRealizer::from_exact(exact(&["-1"])).unwrap();
        let right = PairRealizer::from_exact(exact(&["1"])).unwrap();
        assert_eq!(left.couple.pattern().to_string(), "++");
        let out = concat_pairs(&left, &right).unwrap();
        let RealizedCouple::Pair(c) = &out.couple else { panic!() };
        assert_eq!(c.pattern().to_string(), "++-");
        assert_eq!(c.pair(), RootCountPair::new(1, 1));
        assert_eq!(out.steps, 0);
        assert_eq!(out.scale, parse_rational("1/2").unwrap());
        assert_eq!(out.poly.coefficients(), &[1.0, 0.5, -0.5]);
    }

    #[test]
    fn lemma_case_two() {
        let p = PairRealizer::from_exact(exact(&["1"])).unwrap();
        let out = concat_pairs(&p, &p).unwrap();
        let RealizedCouple::Pair(c) = &out.couple else { panic!() };
        assert_eq!(c.pattern().to_string(), "+-+");
        assert_eq!(c.pair(), RootCountPair::new(2, 0));
        assert_eq!(out.poly.coefficients(), &[1.0, -1.5, 0.5]);
    }

    #[test]
    fn small_extensions() {
        // (x - 1)(x + 2) = x^2 + x - 2
        let v = ModuliRealizer::from_exact(exact(&["1", "-2"])).unwrap();
        assert_eq!(v.couple.pattern().to_string(), "++-");
        assert_eq!(v.couple.order().word_string(), "PN");

        let w = extend_small(&v, Letter::P).unwrap();
        let RealizedCouple::Moduli(c) = &w.couple else { panic!() };
        assert_eq!(c.pattern().to_string(), "++-+");
        assert_eq!(c.order().word_string(), "PPN");

        let w = extend_small(&v, Letter::N).unwrap();
        let RealizedCouple::Moduli(c) = &w.couple else { panic!() };
        assert_eq!(c.pattern().to_string(), "++--");
        assert_eq!(c.order().word_string(), "NPN");
    }

    #[test]
    fn large_extensions() {
        let v = ModuliRealizer::from_exact(exact(&["1", "-2"])).unwrap();
        let w = extend_large(&v, Letter::P).unwrap();
        let RealizedCouple::Moduli(c) = &w.couple else { panic!() };
        assert_eq!(c.order().word_string(), "PNP");
        assert_eq!(c.pattern().to_string(), "+--+");
        assert_eq!(*c.order().word().last().unwrap(), Letter::P);
        assert!(w.certificate.reverify());

        let w = extend_large(&v, Letter::N).unwrap();
        let RealizedCouple::Moduli(c) = &w.couple else { panic!() };
        assert_eq!(c.order().word_string(), "PNN");
        assert_eq!(c.pattern().to_string(), "+++-");
    }

    #[test]
    fn unverified_input_rejected() {
        let spec = exact(&["0.5", "-0.25"]);
        let wrong = PairCouple::new("++-".parse().unwrap(), RootCountPair::new(1, 1)).unwrap();
        assert!(matches!(PairRealizer::with_claim(spec, wrong), Err(ConcatError::Unverified(_))));
        assert!(PairRealizer::from_exact(exact(&["1", "-1"])).is_err());
    }
}
