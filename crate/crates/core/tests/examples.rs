use rootsample::concat::{concat_pairs, PairRealizer};
use rootsample::gaps::GapClass;
use rootsample::moduli::{forcing_test, Forcing};
use rootsample::report::search_report;
use rootsample::sampler::{search_gap_class, search_moduli, search_pair, SearchConfig, SearchStatus};
use rootsample::sweep::{orbit_images, sweep_moduli, sweep_pairs, RowStatus, SweepCouple};
use rootsample::{catalog_lookup, RootCountPair, SignPattern};

fn pattern(s: &str) -> SignPattern {
    s.parse().unwrap()
}

#[test]
fn degree_six_gap_class_found() {
    let cfg = SearchConfig::with_attempts(100_000);
    let out = search_gap_class(6, GapClass::LminusRplus, &cfg).unwrap();
    let w = out.witness().expect("found within 1e5");
    assert_eq!(w.gap_report.as_ref().unwrap().class, GapClass::LminusRplus);
    assert!(w.certificate.as_ref().unwrap().reverify());

    let again = search_gap_class(6, GapClass::LminusRplus, &cfg).unwrap();
    assert_eq!(again.witness().unwrap().attempt_index, w.attempt_index);
    assert_eq!(again.witness().unwrap().spec, w.spec);
}

#[test]
fn grabiner_couples_exhaust() {
    let cfg = SearchConfig::with_attempts(100_000);
    for (p, pair) in [("+---+", RootCountPair::new(0, 2)), ("++-++", RootCountPair::new(2, 0))] {
        let out = search_pair(&pattern(p), pair, &cfg).unwrap();
        assert_eq!(out.status, SearchStatus::Exhausted);
        assert_eq!(out.attempts, 100_000);
    }
}

#[test]
fn forced_order_exhausts() {
    let out = search_moduli(&pattern("1,2,3,2"), &"[0,0,0,4]".parse().unwrap(), &SearchConfig::with_attempts(100_000)).unwrap();
    assert_eq!(out.status, SearchStatus::Exhausted);
}

#[test]
fn sweep_json_is_byte_identical() {
    let cfg = SearchConfig::with_attempts(20_000);
    let a = serde_json::to_string(&sweep_pairs(4, &cfg).to_json(true)).unwrap();
    let b = serde_json::to_string(&sweep_pairs(4, &cfg).to_json(true)).unwrap();
    assert_eq!(a, b);
    let m1 = serde_json::to_string(&sweep_moduli(&pattern("2,3,2"), &cfg).to_json(false)).unwrap();
    let m2 = serde_json::to_string(&sweep_moduli(&pattern("2,3,2"), &cfg).to_json(false)).unwrap();
    assert_eq!(m1, m2);
}

#[test]
fn orbit_members_share_status() {
    let r = sweep_pairs(4, &SearchConfig::with_attempts(100_000));
    for (canonical, rows) in r.orbits() {
        let realized = rows.iter().filter(|row| row.status.is_realized()).count();
        assert!(realized == 0 || realized == rows.len(), "orbit of {canonical:?} is split");
        for row in rows {
            if let (SweepCouple::Pair(c), RowStatus::Realized { certificate, .. }) = (&row.couple, &row.status) {
                for (image, cert) in orbit_images(&certificate.spec, c) {
                    assert!(c.orbit().contains(&image));
                    assert!(cert.reverify());
                }
            }
        }
    }
}

#[test]
fn sigma232_realizes_all_fifteen_orders() {
    let r = sweep_moduli(&pattern("2,3,2"), &SearchConfig::with_attempts(1_000_000));
    assert_eq!(r.rows.len(), 15);
    assert_eq!(r.totals().realized, 15, "{:?}", r.unresolved());
}

#[test]
fn forcing_test_never_rejects_sampled_polynomials() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(5);
    let mut tested = 0;
    while tested < 10_000 {
        let d = rng.gen_range(1..=8);
        let roots: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let spec = rootsample::RootSpec::real(roots.clone());
        let Ok(order) = rootsample::moduli::order_from_roots(&roots) else { continue };
        let Ok(poly) = rootsample::poly::expand_from_roots(&spec) else { continue };
        let Some(p) = poly.sign_vector(1e-9) else { continue };
        tested += 1;
        assert_eq!(forcing_test(&p, &order).unwrap(), Forcing::Inconclusive, "{roots:?}");
    }
}

#[test]
fn concatenation_obstruction_cannot_start() {
    let entry = catalog_lookup("c3-concat-obstruction").unwrap();
    let rootsample::catalog::Payload::ConcatObstruction { splits, .. } = entry.payload else { panic!() };
    let cfg = SearchConfig::with_attempts(100_000);
    for (left, _) in splits {
        let out = search_pair(left.pattern(), left.pair(), &cfg).unwrap();
        assert_eq!(out.status, SearchStatus::Exhausted, "{left:?}");
    }
}

#[test]
fn concatenating_catalog_fixtures() {
    let q1 = catalog_lookup("q1").unwrap();
    let rootsample::catalog::Payload::PairFixture { roots, .. } = q1.payload else { panic!() };
    let left = PairRealizer::from_exact(roots).unwrap();
    let right = PairRealizer::from_spec(&rootsample::RootSpec::real(vec![-0.5])).unwrap();
    let out = concat_pairs(&left, &right).unwrap();
    assert_eq!(out.exact.degree(), 6);
    assert!(out.certificate.reverify());
}

#[test]
fn exhausted_report_says_unresolved() {
    let cfg = SearchConfig::with_attempts(1000);
    let out = search_gap_class(5, GapClass::LminusRplus, &cfg).unwrap();
    let r = search_report("search gaps", &cfg, serde_json::Value::Null, &out);
    assert_eq!(r["outcome"]["status"], "unresolved");
    assert_eq!(r["outcome"]["timing"]["attempts"], 1000);
}
