//! Known results and published example polynomials, stored in factored form.

use serde_json::{json, Value};
use thiserror::Error;

use crate::certify::{certify_gap_claim, certify_moduli, certify_pair, Certificate, CertifyError};
use crate::exact::{exact_expand, fraction_string, parse_rational, ExactRootSpec, Rational};
use crate::gaps::GapClass;
use crate::moduli::{enumerate_orders, ModuliCouple, ModuliOrder};
use crate::signs::{PairCouple, RootCountPair, SignPattern};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown catalog id {0:?}")]
    UnknownId(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogKind {
    NonRealizablePairCouple,
    NonRealizableModuliCouple,
    Fixture,
    ClassificationTable,
}

impl CatalogKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CatalogKind::NonRealizablePairCouple => "non-realizable-pair-couple",
            CatalogKind::NonRealizableModuliCouple => "non-realizable-moduli-couple",
            CatalogKind::Fixture => "fixture",
            CatalogKind::ClassificationTable => "classification-table",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    PairCouples(Vec<PairCouple>),
    PairFixture {
        roots: ExactRootSpec,
        claim: PairCouple,
        /// Coefficients as printed in the source, leading 1 first.
        printed: Vec<f64>,
    },
    ModuliFixture {
        roots: ExactRootSpec,
        claim: ModuliCouple,
        printed: Vec<f64>,
    },
    GapFixture {
        /// Sorted roots.
        roots: Vec<Rational>,
        class: GapClass,
        printed: Vec<f64>,
        xi: Vec<f64>,
        m_tilde: f64,
        big_m_tilde: f64,
        m_prime: f64,
        big_m_prime: f64,
    },
    /// Orders of moduli for one pattern split into forced and realized.
    ModuliTable {
        pattern: SignPattern,
        forced: Vec<ModuliOrder>,
        by_concatenation: Vec<ModuliOrder>,
        by_witness: Vec<ModuliOrder>,
    },
    /// A pair couple that cannot be split into two realizable halves.
    ConcatObstruction {
        target: PairCouple,
        splits: Vec<(PairCouple, PairCouple)>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub kind: CatalogKind,
    pub payload: Payload,
    pub source: &'static str,
    /// Reported search time on the original hardware; provenance only.
    pub cpu_seconds: Option<f64>,
    pub note: Option<&'static str>,
}

fn pattern(runs: &[usize]) -> SignPattern {
    SignPattern::from_runs(runs).expect("catalog patterns are valid")
}

fn pair_couple(runs: &[usize], pos: usize, neg: usize) -> PairCouple {
    PairCouple::new(pattern(runs), RootCountPair::new(pos, neg)).expect("catalog couples are compatible")
}

fn word_couple(word: &str, pos: usize, neg: usize) -> PairCouple {
    PairCouple::new(word.parse().expect("valid word"), RootCountPair::new(pos, neg)).expect("compatible")
}

fn order(text: &str) -> ModuliOrder {
    text.parse().expect("catalog orders are valid")
}

fn exact(real: &[&str], quadratics: &[(&str, &str)]) -> ExactRootSpec {
    ExactRootSpec::from_decimals(real, quadratics).expect("catalog roots are valid")
}

/// Factors `(x + a)` are stored as the root `-a`.
fn neg(a: &str) -> String {
    format!("-{a}")
}

fn real_from_factors(factors: &[&str]) -> Vec<String> {
    factors
        .iter()
        .map(|f| match f.strip_prefix('-') {
            Some(a) => a.to_string(),
            None => neg(f),
        })
        .collect()
}

fn pair_fixture(
    id: &'static str,
    factors: &[&str],
    quadratics: &[(&str, &str)],
    claim: PairCouple,
    printed: &[f64],
    cpu_seconds: Option<f64>,
    note: Option<&'static str>,
) -> CatalogEntry {
    let real = real_from_factors(factors);
    let real: Vec<&str> = real.iter().map(String::as_str).collect();
    CatalogEntry {
        id,
        kind: CatalogKind::Fixture,
        payload: Payload::PairFixture { roots: exact(&real, quadratics), claim, printed: printed.to_vec() },
        source: "random root sampling, N = 1e7, ell = 1",
        cpu_seconds,
        note,
    }
}

fn moduli_fixture(
    id: &'static str,
    factors: &[&str],
    runs: &[usize],
    bracket: &str,
    printed: &[f64],
    source: &'static str,
    cpu_seconds: Option<f64>,
) -> CatalogEntry {
    let real = real_from_factors(factors);
    let real: Vec<&str> = real.iter().map(String::as_str).collect();
    let claim = ModuliCouple::new(pattern(runs), order(bracket)).expect("compatible");
    CatalogEntry {
        id,
        kind: CatalogKind::Fixture,
        payload: Payload::ModuliFixture { roots: exact(&real, &[]), claim, printed: printed.to_vec() },
        source,
        cpu_seconds,
        note: None,
    }
}

/// Brackets of the thirteen orders whose first two coefficients force `q6 > 0`.
pub const SIGMA1232_COEFFICIENT_FORCED: [&str; 13] = [
    "[0,0,0,4]", "[0,0,1,3]", "[0,0,2,2]", "[0,0,3,1]", "[0,1,0,3]", "[0,1,1,2]", "[0,1,2,1]", "[0,2,0,2]",
    "[0,2,1,1]", "[1,0,0,3]", "[1,0,2,1]", "[1,0,1,2]", "[1,1,0,2]",
];

/// The rigid order, realizable only with alternating runs of two.
pub const SIGMA1232_RIGID: &str = "[1,1,1,1]";

/// Orders obtained by appending a large positive root to a degree-6
/// realizer of `Sigma_{2,3,2}`; every one ends in `P`.
pub const SIGMA1232_BY_CONCATENATION: [&str; 15] = [
    "[4,0,0,0]", "[3,1,0,0]", "[2,2,0,0]", "[1,3,0,0]", "[0,4,0,0]", "[3,0,1,0]", "[2,1,1,0]", "[1,2,1,0]",
    "[0,3,1,0]", "[2,0,2,0]", "[1,1,2,0]", "[0,2,2,0]", "[1,0,3,0]", "[0,1,3,0]", "[0,0,4,0]",
];

pub const SIGMA1232_BY_WITNESS: [&str; 6] = ["[0,3,0,1]", "[1,2,0,1]", "[2,0,1,1]", "[2,0,0,2]", "[2,1,0,1]", "[3,0,0,1]"];

fn sigma1232_witnesses() -> Vec<CatalogEntry> {
    let s = "random moduli sampling, N = 1e3, ell = 5";
    let t = Some(1.12);
    let r = &[1, 2, 3, 2];
    vec![
        moduli_fixture(
            "sigma1232-0301",
            &["-0.628", "0.688", "0.722", "0.950", "-2.83", "-4.26", "4.33"],
            r,
            "[0,3,0,1]",
            &[1.0, -1.028, -23.070064, 18.25165163, 85.39426303, 32.00673579, -30.03754531, -15.47008913],
            s,
            t,
        ),
        moduli_fixture(
            "sigma1232-1201",
            &["0.14", "-0.15", "0.20", "0.32", "-0.77", "-2.05", "2.13"],
            r,
            "[1,2,0,1]",
            &[1.0, -0.18, -4.7422, 1.066232, 1.55397477, 0.1792075450, -0.03291572340, -0.004518803520],
            s,
            t,
        ),
        moduli_fixture(
            "sigma1232-2011",
            &["0.88", "1.19", "-2.64", "-2.67", "2.8", "-3.69", "3.92"],
            r,
            "[2,0,1,1]",
            &[1.0, -0.21, -26.5337, 4.534365, 205.9891230, 14.83884381, -467.7618374, -298.9615155],
            s,
            t,
        ),
        moduli_fixture(
            "sigma1232-2002",
            &["1.01", "1.65", "-3.3", "-3.9", "-4.23", "4.24", "4.47"],
            r,
            "[2,0,0,2]",
            &[1.0, -0.06, -42.8452, 2.610486, 567.6094115, 68.3101894, -2166.332517, -1719.481913],
            s,
            t,
        ),
        moduli_fixture(
            "sigma1232-2101",
            &["1.13", "1.7", "-3.28", "3.46", "-3.559", "-4.445", "4.64"],
            r,
            "[2,1,0,1]",
            &[1.0, -0.354, -40.362845, 7.46423375, 496.1523459, 96.0221457, -1867.359344, -1600.276550],
            s,
            t,
        ),
        moduli_fixture(
            "sigma1232-3001",
            &["1.19", "1.3", "1.4", "-2", "-3", "-3.5", "3.93"],
            r,
            "[3,0,0,1]",
            &[1.0, -0.68, -22.6493, 11.98954, 135.291379, 16.6357660, -260.8328310, -178.7434740],
            s,
            t,
        ),
    ]
}

/// Every entry, in listing order.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut entries = vec![
        CatalogEntry {
            id: "grabiner-d4",
            kind: CatalogKind::NonRealizablePairCouple,
            payload: Payload::PairCouples(vec![word_couple("+---+", 0, 2), word_couple("++-++", 2, 0)]),
            source: "Grabiner's classification of degree 4",
            cpu_seconds: None,
            note: Some("the only non-realizable couples in degree 4; one orbit"),
        },
        pair_fixture(
            "q1",
            &["0.723", "0.59", "0.48"],
            &[("-1.97", "0.977")],
            pair_couple(&[1, 3, 2], 0, 3),
            &[1.0, -0.177, -1.498, -0.125, 0.629, 0.2],
            Some(3.46),
            None,
        ),
        pair_fixture(
            "q2",
            &["0.8", "0.77", "0.39"],
            &[("-0.13", "0.65"), ("-1.88", "0.89")],
            pair_couple(&[1, 5, 2], 0, 3),
            &[1.0, -0.05, -0.927, -0.069, -0.334, -0.08, 0.389, 0.139],
            Some(3.46),
            None,
        ),
        pair_fixture(
            "q3",
            &["-0.389", "-0.4121", "-0.579"],
            &[("1.4124", "0.499"), ("0.032", "0.704")],
            pair_couple(&[2, 1, 1, 1, 2, 1], 3, 0),
            &[1.0, 0.065, -0.121, 0.096, -0.398, 0.030, 0.125, -0.033],
            Some(3.46),
            Some("first factor read as (x - 0.389): the printed (x + 0.389) gives a negative root, contradicting the pair (3, 0) and the printed expansion"),
        ),
        pair_fixture(
            "q4",
            &["-0.5", "-0.596", "-0.975"],
            &[("1.954", "0.956"), ("0.2", "0.359")],
            pair_couple(&[2, 1, 4, 1], 3, 0),
            &[1.0, 0.083, -1.389, 0.013, 0.2, 0.014, 0.210, -0.1],
            Some(3.46),
            None,
        ),
        pair_fixture(
            "q5",
            &["-0.597", "-0.69", "-0.85"],
            &[("1.81", "0.83"), ("0.35", "0.15")],
            pair_couple(&[2, 1, 3, 2], 3, 0),
            &[1.0, 0.023, -1.497, 0.017, 0.597, 0.0153, -0.009, -0.044],
            Some(3.46),
            None,
        ),
        CatalogEntry {
            id: "pc1",
            kind: CatalogKind::Fixture,
            payload: Payload::PairFixture {
                // x^2 - 1.84x + 0.846 has the real roots 0.9 and 0.94
                roots: exact(&["-0.2", "-0.3", "-0.3", "0.9", "0.94"], &[("-1.62", "0.67"), ("1.72", "1.348")]),
                claim: pair_couple(&[1, 3, 2, 3, 1], 0, 3),
                printed: vec![
                    1.0,
                    -0.73,
                    -1.5258,
                    -0.191020,
                    2.52140544,
                    -0.2081491476,
                    -1.051144849,
                    -0.0043084783,
                    0.1632999587,
                    0.02862830065,
                ],
            },
            source: "random root sampling, N = 1e7, ell = 1",
            cpu_seconds: Some(2.45),
            note: Some(
                "the factored form does not realize the claimed couple and its expansion disagrees with the printed one; kept as the factored form so certification reports the mismatch",
            ),
        },
        pair_fixture(
            "pc2",
            &["0.25", "0.27", "0.43"],
            &[("-0.4", "0.0402"), ("-1.06", "0.33"), ("0.4", "0.14")],
            pair_couple(&[1, 3, 2, 3, 1], 0, 3),
            &[1.0, -0.11, -0.3659, -0.0082, 0.06757, 0.025, -0.0022, -0.0022, -0.000017, 0.000053],
            Some(2.45),
            Some("listed as the example for C2 = (Sigma 1,3,1,3,2, (0, 3)), but both the factored form and the printed expansion have the pattern Sigma 1,3,2,3,1; stored with the couple it realizes, C1"),
        ),
        pair_fixture(
            "pc3",
            &["0.786", "0.696", "0.622"],
            &[("0.3848", "0.808"), ("-0.5783", "0.706"), ("-1.972", "0.975")],
            pair_couple(&[1, 5, 1, 1, 2], 0, 3),
            &[
                1.0,
                -0.0615,
                -0.43929984,
                -0.200085009,
                -0.798790981,
                -0.0587716,
                0.044796444,
                -0.008446381,
                0.369292280,
                0.1892530328,
            ],
            Some(200.0),
            None,
        ),
        CatalogEntry {
            id: "c3-concat-obstruction",
            kind: CatalogKind::NonRealizablePairCouple,
            payload: Payload::ConcatObstruction {
                target: pair_couple(&[1, 5, 1, 1, 2], 0, 3),
                splits: vec![
                    (pair_couple(&[1, 5, 1, 1, 1], 0, 2), pair_couple(&[2], 0, 1)),
                    (pair_couple(&[1, 5, 1], 0, 2), pair_couple(&[1, 1, 2], 0, 1)),
                ],
            },
            source: "known non-realizable left halves",
            cpu_seconds: None,
            note: Some("every split has a non-realizable left half, so concatenation cannot produce the target"),
        },
        moduli_fixture(
            "sigma341",
            &["-0.77", "-4.28", "4.31", "4.47", "4.59", "4.68", "4.91"],
            &[3, 4, 1],
            "[0,0,5]",
            &[1.0, 17.91, 98.1106, -21.793074, -1971.427200, -5976.303538, -2955.965399, 6696.676474],
            "random moduli sampling, ell = 5",
            None,
        ),
    ];
    entries.extend(sigma1232_witnesses());
    entries.push(CatalogEntry {
        id: "gap-d6-LmRp",
        kind: CatalogKind::Fixture,
        payload: Payload::GapFixture {
            roots: ["-0.19", "-0.18", "0.13", "0.21", "0.67", "0.96"]
                .iter()
                .map(|s| parse_rational(s).expect("decimal"))
                .collect(),
            class: GapClass::LminusRplus,
            printed: vec![1.0, -1.60, 0.5300, 0.122578, -0.03793509, -0.0025040322, 0.000600530112],
            xi: vec![-0.1850968062, -0.02957083052, 0.1718593928, 0.5155057599, 0.8606358173],
            m_tilde: 0.16,
            big_m_tilde: 0.375,
            m_prime: 0.1555259757,
            big_m_prime: 0.3451300574,
        },
        source: "random real-root sampling, N = 1e5, ell = 1",
        cpu_seconds: Some(23.99),
        note: None,
    });
    entries.push(CatalogEntry {
        id: "sigma1232-table",
        kind: CatalogKind::ClassificationTable,
        payload: Payload::ModuliTable {
            pattern: pattern(&[1, 2, 3, 2]),
            forced: SIGMA1232_COEFFICIENT_FORCED.iter().chain([&SIGMA1232_RIGID]).map(|s| order(s)).collect(),
            by_concatenation: SIGMA1232_BY_CONCATENATION.iter().map(|s| order(s)).collect(),
            by_witness: SIGMA1232_BY_WITNESS.iter().map(|s| order(s)).collect(),
        },
        source: "coefficient inequalities, rigidity, concatenation and six sampled witnesses",
        cpu_seconds: None,
        note: Some(
            "the concatenation list is stored with the largest modulus last (u4 = 0); the same brackets read in the opposite index order would collide with the forced list",
        ),
    });
    entries
}

pub fn catalog_lookup(id: &str) -> Result<CatalogEntry, CatalogError> {
    catalog().into_iter().find(|e| e.id == id).ok_or_else(|| CatalogError::UnknownId(id.to_string()))
}

/// Catalog witness for a moduli couple, if one is stored.
pub fn moduli_witness(couple: &ModuliCouple) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| matches!(&e.payload, Payload::ModuliFixture { claim, .. } if claim == couple))
}

/// Result of re-checking a fixture.
#[derive(Debug, Clone, PartialEq)]
pub struct FixtureCheck {
    pub certificate: Result<Certificate, CertifyError>,
    /// Largest absolute difference between the expansion and the printed coefficients.
    pub max_printed_error: f64,
    /// Sign vector of the exact expansion, or the index of a zero coefficient.
    pub actual_pattern: Result<SignPattern, usize>,
    pub actual_pair: RootCountPair,
}

impl CatalogEntry {
    /// Re-certifies a fixture; `None` for entries that carry no roots.
    pub fn check(&self) -> Option<FixtureCheck> {
        let (roots, printed, certificate) = match &self.payload {
            Payload::PairFixture { roots, claim, printed } => (roots.clone(), printed, certify_pair(roots, claim)),
            Payload::ModuliFixture { roots, claim, printed } => (roots.clone(), printed, certify_moduli(roots, claim)),
            Payload::GapFixture { roots, class, printed, .. } => {
                let spec = ExactRootSpec { real_roots: roots.clone(), complex_pairs: vec![] };
                let certificate = certify_gap_claim(roots, *class).map_err(|m| match m {
                    Some(m) => CertifyError::Mismatch(m),
                    None => CertifyError::Undecided { rounds: crate::certify::MAX_REFINEMENT_ROUNDS },
                });
                (spec, printed, certificate)
            }
            _ => return None,
        };
        let poly = exact_expand(&roots);
        let expanded = poly.to_float();
        let max_printed_error = if expanded.len() == printed.len() {
            expanded.iter().zip(printed).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        Some(FixtureCheck {
            certificate,
            max_printed_error,
            actual_pattern: poly.sign_vector(),
            actual_pair: RootCountPair::new(roots.positive_count(), roots.negative_count()),
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "kind": self.kind.as_str(),
            "source": self.source,
            "cpu_seconds": self.cpu_seconds,
            "note": self.note,
            "payload": payload_json(&self.payload),
        })
    }
}

fn couple_json(c: &PairCouple) -> Value {
    json!({ "pattern": c.pattern().to_string(), "runs": c.pattern().run_string(), "pos": c.pair().pos, "neg": c.pair().neg })
}

fn exact_roots_json(roots: &ExactRootSpec) -> Value {
    json!({
        "real": roots.real_roots.iter().map(fraction_string).collect::<Vec<_>>(),
        "quadratics": roots
            .complex_pairs
            .iter()
            .map(|p| [fraction_string(&p.linear_coefficient()), fraction_string(&p.norm_sqr)])
            .collect::<Vec<_>>(),
    })
}

fn orders_json(orders: &[ModuliOrder]) -> Vec<String> {
    orders.iter().map(ModuliOrder::bracket_string).collect()
}

fn payload_json(payload: &Payload) -> Value {
    match payload {
        Payload::PairCouples(cs) => json!({ "couples": cs.iter().map(couple_json).collect::<Vec<_>>() }),
        Payload::PairFixture { roots, claim, printed } => json!({
            "roots": exact_roots_json(roots),
            "claim": couple_json(claim),
            "printed_coefficients": printed,
        }),
        Payload::ModuliFixture { roots, claim, printed } => json!({
            "roots": exact_roots_json(roots),
            "claim": { "pattern": claim.pattern().to_string(), "order": claim.order().bracket_string(), "word": claim.order().word_string() },
            "printed_coefficients": printed,
        }),
        Payload::GapFixture { roots, class, printed, xi, m_tilde, big_m_tilde, m_prime, big_m_prime } => json!({
            "roots": roots.iter().map(fraction_string).collect::<Vec<_>>(),
            "class": class.as_str(),
            "printed_coefficients": printed,
            "xi": xi,
            "m_tilde": m_tilde,
            "M_tilde": big_m_tilde,
            "m_prime": m_prime,
            "M_prime": big_m_prime,
        }),
        Payload::ModuliTable { pattern, forced, by_concatenation, by_witness } => json!({
            "pattern": pattern.to_string(),
            "forced": orders_json(forced),
            "realized_by_concatenation": orders_json(by_concatenation),
            "realized_by_witness": orders_json(by_witness),
            "total": enumerate_orders(pattern.descartes_pair().changes, pattern.descartes_pair().preservations).len(),
        }),
        Payload::ConcatObstruction { target, splits } => json!({
            "target": couple_json(target),
            "splits": splits.iter().map(|(l, r)| json!([couple_json(l), couple_json(r)])).collect::<Vec<_>>(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::{forcing_test, Forcing};

    #[test]
    fn lookup() {
        let g = catalog_lookup("grabiner-d4").unwrap();
        let Payload::PairCouples(cs) = &g.payload else { panic!() };
        assert_eq!(cs.len(), 2);
        assert!(cs[0].orbit().contains(&cs[1]));
        assert_eq!(catalog_lookup("nope"), Err(CatalogError::UnknownId("nope".into())));
        let gap = catalog_lookup("gap-d6-LmRp").unwrap();
        let Payload::GapFixture { roots, .. } = &gap.payload else { panic!() };
        assert_eq!(roots[0], parse_rational("-0.19").unwrap());
    }

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = catalog().iter().map(|e| e.id).collect();
        ids.sort_unstable();
        let n = ids.len();
        ids.dedup();
        assert_eq!(ids.len(), n);
    }

    #[test]
    fn table_partitions_the_orders() {
        let Payload::ModuliTable { pattern, forced, by_concatenation, by_witness } = catalog_lookup("sigma1232-table").unwrap().payload
        else {
            panic!()
        };
        let mut all: Vec<_> = forced.iter().chain(&by_concatenation).chain(&by_witness).cloned().collect();
        all.sort();
        let mut expected = enumerate_orders(3, 4);
        expected.sort();
        assert_eq!(all, expected);
        assert_eq!(forced.len(), 14);
        assert!(by_concatenation.iter().all(|o| o.bracket()[3] == 0));
        for o in &forced {
            assert!(matches!(forcing_test(&pattern, o).unwrap(), Forcing::Conflict(_)), "{o}");
        }
    }

    #[test]
    fn fixture_roots_match_claims() {
        for e in catalog() {
            if let Payload::ModuliFixture { roots, claim, .. } = &e.payload {
                let o = crate::certify::exact_order(&roots.real_roots).unwrap();
                assert_eq!(&o, claim.order(), "{}", e.id);
            }
        }
    }

    #[test]
    fn json_is_well_formed() {
        for e in catalog() {
            let v = e.to_json();
            assert_eq!(v["id"], e.id);
        }
    }
}
