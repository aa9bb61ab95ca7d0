use proptest::prelude::*;

use rootsample::exact::{exact_expand, rationalize};
use rootsample::gaps::gap_report;
use rootsample::poly::expand_from_roots;
use rootsample::{ComplexPair, RootSpec};

fn nonzero() -> impl Strategy<Value = f64> {
    prop_oneof![0.01f64..3.0, -3.0f64..-0.01]
}

fn spec() -> impl Strategy<Value = RootSpec> {
    (prop::collection::vec(nonzero(), 0..6), prop::collection::vec((-2.0f64..2.0, 0.01f64..2.0), 0..3))
        .prop_filter("nonempty", |(r, c)| !r.is_empty() || !c.is_empty())
        .prop_map(|(r, c)| RootSpec::new(r, c.into_iter().map(|(re, im)| ComplexPair::new(re, im)).collect()))
}

fn distinct_sorted(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n).prop_filter_map("distinct", |mut x| {
        x.sort_by(f64::total_cmp);
        x.windows(2).all(|w| w[1] - w[0] > 1e-6).then_some(x)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn negating_roots_alternates_the_pattern(s in spec()) {
        let p = expand_from_roots(&s).unwrap();
        let q = expand_from_roots(&s.negated()).unwrap();
        if let (Some(a), Some(b)) = (p.sign_vector(1e-9), q.sign_vector(1e-9)) {
            prop_assert_eq!(a.alternated(), b);
        }
    }

    #[test]
    fn inverting_roots_reverses_the_pattern(s in spec()) {
        let p = expand_from_roots(&s).unwrap();
        let q = expand_from_roots(&s.inverted()).unwrap();
        if let (Some(a), Some(b)) = (p.sign_vector(1e-9), q.sign_vector(1e-9)) {
            prop_assert_eq!(a.reversed(), b);
        }
    }

    #[test]
    fn exact_subdominant_is_negated_root_sum(s in spec()) {
        let e = rationalize(&s, 12).unwrap();
        let p = exact_expand(&e);
        prop_assert_eq!(p.coefficients()[1].clone(), -e.root_sum());
    }

    #[test]
    fn gap_class_is_translation_and_scale_invariant(x in distinct_sorted(3..8), shift in -5.0f64..5.0, scale in 0.1f64..10.0) {
        let r = gap_report(&x).unwrap();
        let moved: Vec<f64> = x.iter().map(|v| v * scale + shift).collect();
        let s = gap_report(&moved).unwrap();
        // classification only compared away from ties
        if r.margins.0.abs() > 1e-6 && r.margins.1.abs() > 1e-6 {
            prop_assert_eq!(r.class, s.class);
        }
    }
}
