//! Exact verification of sampled witnesses.
//!
//! Every check here runs on rational data: coefficient signs come from an
//! exact expansion, moduli are compared exactly, and critical points are
//! enclosed by bisection with exact derivative signs at dyadic midpoints.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{exact_expand, fraction_string, to_f64, ExactPolynomial, ExactRootSpec, Rational};
use crate::gaps::GapClass;
use crate::moduli::{Letter, ModuliCouple, ModuliOrder};
use crate::signs::{PairCouple, RootCountPair, SignPattern};

/// Refinement rounds before a gap-class comparison is reported undecided.
pub const MAX_REFINEMENT_ROUNDS: usize = 1000;

/// What a certificate asserts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Claim {
    Pair { pattern: SignPattern, pos: usize, neg: usize },
    Moduli { pattern: SignPattern, order: ModuliOrder },
    GapClass { class: GapClass },
}

impl Claim {
    pub fn pair(couple: &PairCouple) -> Self {
        Claim::Pair { pattern: couple.pattern().clone(), pos: couple.pair().pos, neg: couple.pair().neg }
    }

    pub fn moduli(couple: &ModuliCouple) -> Self {
        Claim::Moduli { pattern: couple.pattern().clone(), order: couple.order().clone() }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Pair { pattern, pos, neg } => write!(f, "({pattern}, ({pos}, {neg}))"),
            Claim::Moduli { pattern, order } => write!(f, "({pattern}, {})", order.bracket_string()),
            Claim::GapClass { class } => write!(f, "{class}"),
        }
    }
}

/// The first check that failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Mismatch {
    #[error("degree {found} does not match the claimed degree {expected}")]
    Degree { expected: usize, found: usize },
    #[error("sign pattern {found} does not match the claimed {expected}")]
    SignPattern { expected: SignPattern, found: SignPattern },
    #[error("root counts {found} do not match the claimed {expected}")]
    RootCounts { expected: RootCountPair, found: RootCountPair },
    #[error("order of moduli needs real roots only, found {pairs} complex pairs")]
    NotHyperbolic { pairs: usize },
    #[error("two roots share a modulus")]
    TiedModuli,
    #[error("order of moduli {found} does not match the claimed {expected}")]
    Order { expected: ModuliOrder, found: ModuliOrder },
    #[error("gap class {found} does not match the claimed {expected}")]
    GapClass { expected: GapClass, found: GapClass },
    #[error("subdominant coefficient is not the negated root sum")]
    RootSumIdentity,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("mismatch: {0}")]
    Mismatch(Mismatch),
    #[error("coefficient {index} vanishes exactly; the sign pattern is undefined")]
    ZeroCoefficient { index: usize },
    #[error("gap class undecided after {rounds} refinement rounds")]
    Undecided { rounds: usize },
}

impl From<Mismatch> for CertifyError {
    fn from(m: Mismatch) -> Self {
        CertifyError::Mismatch(m)
    }
}

/// A rational interval `[lo, hi]` known to contain a root of the derivative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        to_f64(&self.lo) <= x && x <= to_f64(&self.hi)
    }
}

/// Exact data plus the claim it proves and the list of checks that ran.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub spec: ExactRootSpec,
    pub coefficients: Vec<Rational>,
    pub claim: Claim,
    pub checks: Vec<String>,
    pub enclosures: Vec<Enclosure>,
}

impl Certificate {
    /// Repeats the verification from the stored exact data.
    pub fn reverify(&self) -> bool {
        let rerun = match &self.claim {
            Claim::GapClass { .. } => match certify_gap_class(&self.spec.real_roots) {
                GapVerdict::Certified(c) => Ok(c),
                GapVerdict::Undecided { .. } => return false,
            },
            claim => certify_couple(&self.spec, claim),
        };
        matches!(rerun, Ok(c) if c.claim == self.claim && c.coefficients == self.coefficients)
    }

    pub fn rational_coefficients(&self) -> Vec<String> {
        self.coefficients.iter().map(fraction_string).collect()
    }
}

fn common_checks(spec: &ExactRootSpec, degree: usize, checks: &mut Vec<String>) -> Result<ExactPolynomial, CertifyError> {
    if spec.degree() != degree {
        return Err(Mismatch::Degree { expected: degree, found: spec.degree() }.into());
    }
    checks.push(format!("degree = {degree}"));
    let poly = exact_expand(spec);
    if poly.coefficients()[1] != -spec.root_sum() {
        return Err(Mismatch::RootSumIdentity.into());
    }
    checks.push("a_{d-1} = -(sum of roots)".to_string());
    Ok(poly)
}

fn check_signs(poly: &ExactPolynomial, expected: &SignPattern, checks: &mut Vec<String>) -> Result<(), CertifyError> {
    let found = poly.sign_vector().map_err(|index| CertifyError::ZeroCoefficient { index })?;
    checks.push("all coefficients nonzero".to_string());
    if &found != expected {
        return Err(Mismatch::SignPattern { expected: expected.clone(), found }.into());
    }
    checks.push(format!("exact sign pattern = {found}"));
    Ok(())
}

/// Order of moduli of exact real roots, or `None` on a tie.
pub fn exact_order(roots: &[Rational]) -> Option<ModuliOrder> {
    let mut sorted: Vec<&Rational> = roots.iter().collect();
    sorted.sort_by_key(|r| r.abs());
    if sorted.windows(2).any(|w| w[0].abs() == w[1].abs()) {
        return None;
    }
    let word = sorted.iter().map(|r| if r.is_positive() { Letter::P } else { Letter::N }).collect();
    ModuliOrder::from_word(word).ok()
}

/// Verifies a pair or moduli claim exactly.
pub fn certify_couple(spec: &ExactRootSpec, claim: &Claim) -> Result<Certificate, CertifyError> {
    let mut checks = Vec::new();
    let pattern = match claim {
        Claim::Pair { pattern, .. } | Claim::Moduli { pattern, .. } => pattern,
        Claim::GapClass { .. } => panic!("gap-class claims are certified by certify_gap_class"),
    };
    let poly = common_checks(spec, pattern.degree(), &mut checks)?;
    check_signs(&poly, pattern, &mut checks)?;
    let found = RootCountPair::new(spec.positive_count(), spec.negative_count());
    match claim {
        Claim::Pair { pos, neg, .. } => {
            let expected = RootCountPair::new(*pos, *neg);
            if found != expected {
                return Err(Mismatch::RootCounts { expected, found }.into());
            }
            checks.push(format!("root counts (pos, neg) = {found}"));
        }
        Claim::Moduli { order, .. } => {
            if !spec.complex_pairs.is_empty() {
                return Err(Mismatch::NotHyperbolic { pairs: spec.complex_pairs.len() }.into());
            }
            let extracted = exact_order(&spec.real_roots).ok_or(Mismatch::TiedModuli)?;
            checks.push("moduli pairwise distinct".to_string());
            if &extracted != order {
                return Err(Mismatch::Order { expected: order.clone(), found: extracted }.into());
            }
            checks.push(format!("exact order of moduli = {}", order.bracket_string()));
        }
        Claim::GapClass { .. } => unreachable!(),
    }
    Ok(Certificate {
        spec: spec.clone(),
        coefficients: poly.coefficients().to_vec(),
        claim: claim.clone(),
        checks,
        enclosures: Vec::new(),
    })
}

/// Convenience wrapper for a pair couple.
pub fn certify_pair(spec: &ExactRootSpec, couple: &PairCouple) -> Result<Certificate, CertifyError> {
    certify_couple(spec, &Claim::pair(couple))
}

/// Convenience wrapper for a moduli couple.
pub fn certify_moduli(spec: &ExactRootSpec, couple: &ModuliCouple) -> Result<Certificate, CertifyError> {
    certify_couple(spec, &Claim::moduli(couple))
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

/// Bisection state for one interval between consecutive roots.
struct Bracket {
    lo: Rational,
    hi: Rational,
    lo_sign: Ordering,
    exact: bool,
}

fn initial_brackets(derivative: &ExactPolynomial, x: &[Rational]) -> Vec<Bracket> {
    x.windows(2)
        .map(|w| {
            let lo_sign = derivative.sign_at(&w[0]);
            let hi_sign = derivative.sign_at(&w[1]);
            assert!(
                lo_sign != Ordering::Equal && hi_sign != Ordering::Equal && lo_sign != hi_sign,
                "derivative must change sign between simple roots"
            );
            Bracket { lo: w[0].clone(), hi: w[1].clone(), lo_sign, exact: false }
        })
        .collect()
}

fn bisect(derivative: &ExactPolynomial, b: &mut Bracket) {
    if b.exact {
        return;
    }
    let mid = (&b.lo + &b.hi) * half();
    match derivative.sign_at(&mid) {
        Ordering::Equal => {
            b.lo = mid.clone();
            b.hi = mid;
            b.exact = true;
        }
        s if s == b.lo_sign => b.lo = mid,
        _ => b.hi = mid,
    }
}

fn check_roots(x: &[Rational]) {
    assert!(x.len() >= 2, "need at least two roots");
    assert!(x.windows(2).all(|w| w[0] < w[1]), "roots must be strictly increasing");
}

/// Encloses each root of `p'` lying between consecutive roots `x` of `p` in
/// an interval narrower than `max_width`.
pub fn enclose_critical_points(p: &ExactPolynomial, x: &[Rational], max_width: &Rational) -> Vec<Enclosure> {
    check_roots(x);
    let derivative = p.derivative();
    initial_brackets(&derivative, x)
        .into_iter()
        .map(|mut b| {
            while &(&b.hi - &b.lo) >= max_width && !b.exact {
                bisect(&derivative, &mut b);
            }
            Enclosure { lo: b.lo, hi: b.hi }
        })
        .collect()
}

/// Either a certified class or the rounds spent without separating.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GapVerdict {
    Certified(Certificate),
    Undecided { rounds: usize },
}

/// Decides one strict comparison of `value in [lo, hi]` against `bound`:
/// `Some(true)` if `value > bound`, `Some(false)` if `value <= bound`.
fn above(lo: &Rational, hi: &Rational, bound: &Rational, exact: bool) -> Option<bool> {
    if lo > bound {
        Some(true)
    } else if hi < bound || (exact && hi <= bound) {
        Some(false)
    } else {
        None
    }
}

/// Certifies the gap class of the monic polynomial with simple rational
/// roots `x` (strictly increasing, at least three).
pub fn certify_gap_class(x: &[Rational]) -> GapVerdict {
    certify_gap_class_with_rounds(x, MAX_REFINEMENT_ROUNDS)
}

pub fn certify_gap_class_with_rounds(x: &[Rational], max_rounds: usize) -> GapVerdict {
    assert!(x.len() >= 3, "gap classes need at least three roots");
    check_roots(x);
    let spec = ExactRootSpec { real_roots: x.to_vec(), complex_pairs: Vec::new() };
    let poly = exact_expand(&spec);
    let derivative = poly.derivative();
    let mut brackets = initial_brackets(&derivative, x);

    let two = Rational::from_integer(2.into());
    let tilde: Vec<Rational> = x.windows(3).map(|w| (&w[2] - &w[0]) / &two).collect();
    let m_tilde = tilde.iter().min().expect("at least one midpoint gap").clone();
    let big_m_tilde = tilde.iter().max().expect("at least one midpoint gap").clone();

    for round in 0..=max_rounds {
        if round > 0 {
            brackets.iter_mut().for_each(|b| bisect(&derivative, b));
        }
        // bounds on each critical gap, then on their min and max
        let gaps: Vec<(Rational, Rational)> =
            brackets.windows(2).map(|w| (&w[1].lo - &w[0].hi, &w[1].hi - &w[0].lo)).collect();
        let all_exact = brackets.iter().all(|b| b.exact);
        let min_lo = gaps.iter().map(|g| &g.0).min().expect("gap").clone();
        let min_hi = gaps.iter().map(|g| &g.1).min().expect("gap").clone();
        let max_lo = gaps.iter().map(|g| &g.0).max().expect("gap").clone();
        let max_hi = gaps.iter().map(|g| &g.1).max().expect("gap").clone();

        // left: m' > m~ ; right: M' < M~, i.e. not (M' >= M~)
        let left = above(&min_lo, &min_hi, &m_tilde, all_exact);
        let right_fails = if max_lo >= big_m_tilde {
            Some(true)
        } else if max_hi < big_m_tilde {
            Some(false)
        } else {
            None
        };
        if let (Some(left), Some(right_fails)) = (left, right_fails) {
            let class = GapClass::from_sides(left, !right_fails);
            let checks = vec![
                "roots strictly increasing".to_string(),
                "derivative changes sign on every root interval".to_string(),
                format!("m(P~) = {}, M(P~) = {}", fraction_string(&m_tilde), fraction_string(&big_m_tilde)),
                format!(
                    "m(P') in [{:.12}, {:.12}], M(P') in [{:.12}, {:.12}]",
                    to_f64(&min_lo),
                    to_f64(&min_hi),
                    to_f64(&max_lo),
                    to_f64(&max_hi)
                ),
                format!("left inequality {}", if left { "holds" } else { "fails" }),
                format!("right inequality {}", if right_fails { "fails" } else { "holds" }),
                format!("separated after {round} refinement rounds"),
            ];
            return GapVerdict::Certified(Certificate {
                spec,
                coefficients: poly.coefficients().to_vec(),
                claim: Claim::GapClass { class },
                checks,
                enclosures: brackets.into_iter().map(|b| Enclosure { lo: b.lo, hi: b.hi }).collect(),
            });
        }
    }
    GapVerdict::Undecided { rounds: max_rounds }
}

/// Certifies that the roots realize `expected`.
pub fn certify_gap_claim(x: &[Rational], expected: GapClass) -> Result<Certificate, Option<Mismatch>> {
    match certify_gap_class(x) {
        GapVerdict::Certified(c) => match c.claim {
            Claim::GapClass { class } if class == expected => Ok(c),
            Claim::GapClass { class } => Err(Some(Mismatch::GapClass { expected, found: class })),
            _ => unreachable!(),
        },
        GapVerdict::Undecided { .. } => Err(None),
    }
}

/// `2^-bits` as a rational.
pub fn dyadic(bits: u32) -> BigRational {
    Rational::new(One::one(), num_traits::pow(num_bigint::BigInt::from(2u32), bits as usize))
}

/// `true` if the exact derivative changes sign across the enclosure, or
/// vanishes on a degenerate one.
pub fn enclosure_is_sound(p: &ExactPolynomial, e: &Enclosure) -> bool {
    let dp = p.derivative();
    let a = dp.sign_at(&e.lo);
    let b = dp.sign_at(&e.hi);
    if e.lo == e.hi {
        return a == Ordering::Equal;
    }
    a == Ordering::Equal || b == Ordering::Equal || a != b
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::exact::{parse_rational, rationalize};
    use crate::gaps::gap_report;
    use crate::poly::{ComplexPair, RootSpec};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn q1() -> ExactRootSpec {
        ExactRootSpec::from_decimals(&["-0.723", "-0.59", "-0.48"], &[("-1.97", "0.977")]).unwrap()
    }

    #[test]
    fn certifies_q1() {
        let couple = PairCouple::new("1,3,2".parse().unwrap(), RootCountPair::new(0, 3)).unwrap();
        let cert = certify_pair(&q1(), &couple).unwrap();
        assert!(cert.reverify());
        assert!(cert.checks.iter().any(|c| c.contains("sign pattern")));

        let wrong = PairCouple::new("1,3,2".parse().unwrap(), RootCountPair::new(2, 1)).unwrap();
        assert!(matches!(
            certify_pair(&q1(), &wrong),
            Err(CertifyError::Mismatch(Mismatch::RootCounts { .. }))
        ));
    }

    #[test]
    fn q1_rationalized_from_floats() {
        let pair = ComplexPair::from_quadratic(-1.97, 0.977).unwrap();
        let spec = RootSpec::new(vec![-0.723, -0.59, -0.48], vec![pair]);
        let exact = rationalize(&spec, 12).unwrap();
        let couple = PairCouple::new("1,3,2".parse().unwrap(), RootCountPair::new(0, 3)).unwrap();
        assert!(certify_pair(&exact, &couple).is_ok());
    }

    #[test]
    fn certifies_sigma_341_witness() {
        let spec = ExactRootSpec::from_decimals(&["0.77", "4.28", "-4.31", "-4.47", "-4.59", "-4.68", "-4.91"], &[])
            .unwrap();
        let couple = ModuliCouple::new("3,4,1".parse().unwrap(), "[0,0,5]".parse().unwrap()).unwrap();
        let cert = certify_moduli(&spec, &couple).unwrap();
        assert!(cert.reverify());
        let other = ModuliCouple::new("3,4,1".parse().unwrap(), "[0,1,4]".parse().unwrap()).unwrap();
        assert!(matches!(certify_moduli(&spec, &other), Err(CertifyError::Mismatch(Mismatch::Order { .. }))));
    }

    #[test]
    fn zero_coefficient_reported() {
        let spec = ExactRootSpec::from_decimals(&["1", "-1"], &[]).unwrap();
        let claim = Claim::Pair { pattern: "++-".parse().unwrap(), pos: 1, neg: 1 };
        assert_eq!(certify_couple(&spec, &claim), Err(CertifyError::ZeroCoefficient { index: 1 }));
    }

    #[test]
    fn enclosures_for_simple_cases() {
        let spec = ExactRootSpec::from_decimals(&["-1", "1"], &[]).unwrap();
        let p = exact_expand(&spec);
        let e = enclose_critical_points(&p, &spec.real_roots, &dyadic(40));
        assert_eq!(e.len(), 1);
        assert!(e[0].lo <= Rational::zero() && Rational::zero() <= e[0].hi);
        assert!(e[0].width() < dyadic(40));
    }

    #[test]
    fn witness_enclosures_contain_float_critical_points() {
        let roots = ["-0.19", "-0.18", "0.13", "0.21", "0.67", "0.96"];
        let spec = ExactRootSpec::from_decimals(&roots, &[]).unwrap();
        let p = exact_expand(&spec);
        let enclosures = enclose_critical_points(&p, &spec.real_roots, &dyadic(50));
        let report = gap_report(&[-0.19, -0.18, 0.13, 0.21, 0.67, 0.96]).unwrap();
        for (k, (e, xi)) in enclosures.iter().zip(&report.xi).enumerate() {
            assert!(enclosure_is_sound(&p, e));
            assert!((to_f64(&e.lo) - xi.value).abs() < 1e-12);
            assert!(spec.real_roots[k] < e.lo && e.hi < spec.real_roots[k + 1]);
        }
        for w in enclosures.windows(2) {
            assert!(w[0].hi < w[1].lo);
        }
    }

    #[test]
    fn certifies_witness_class() {
        let roots: Vec<Rational> = ["-0.19", "-0.18", "0.13", "0.21", "0.67", "0.96"].iter().map(|s| q(s)).collect();
        match certify_gap_class(&roots) {
            GapVerdict::Certified(c) => {
                assert_eq!(c.claim, Claim::GapClass { class: GapClass::LminusRplus });
                assert!(c.reverify());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn certifies_three_roots() {
        let roots = vec![q("-1"), q("0"), q("1")];
        assert!(matches!(
            certify_gap_claim(&roots, GapClass::LplusRminus),
            Ok(Certificate { claim: Claim::GapClass { class: GapClass::LplusRminus }, .. })
        ));
    }

    #[test]
    fn equally_spaced_certified() {
        let roots = vec![q("0"), q("1"), q("2"), q("3")];
        assert!(certify_gap_claim(&roots, GapClass::LplusRminus).is_ok());
    }

    #[test]
    fn near_tie_is_undecided_within_small_budget() {
        // symmetric -b, -a, a, b: xi gaps are sqrt((a^2 + b^2) / 2), the
        // midpoint gaps (a + b) / 2; with a close to b the two nearly agree
        let roots = vec![q("-1.000001"), q("-1"), q("1"), q("1.000001")];
        assert_eq!(certify_gap_class_with_rounds(&roots, 5), GapVerdict::Undecided { rounds: 5 });
        assert!(matches!(certify_gap_class(&roots), GapVerdict::Certified(_)));
    }
}
