//! Algebraic and analytic invariants under random inputs.

use kummer_core::algebra::{make_algebra, parse_element, Algebra, AlgebraElement};
use kummer_core::bounds::{check_lemma, g_rational, BoundConfig, SuiteParams};
use kummer_core::exact::{rat, ratio, BigRational};
use kummer_core::measures::{delta, measure, TowerStep};
use kummer_core::representations::{decompose_step, min_rep_count, term_set};
use proptest::prelude::*;

fn element(alg: &Algebra, coeffs: &[i64]) -> AlgebraElement {
    let v: Vec<i64> = (0..alg.dim()).map(|i| coeffs.get(i).copied().unwrap_or(0)).collect();
    AlgebraElement::from_ints(alg, &v).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_a_commutative_ring_law(x in coeffs(), y in coeffs(), z in coeffs()) {
        let alg = make_algebra(2, 6).unwrap();
        let (x, y, z) = (element(&alg, &x), element(&alg, &y), element(&alg, &z));
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(x.mul(&y.add(&z).unwrap()).unwrap(), x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap());
    }

    #[test]
    fn display_parses_back(c in coeffs(), den in 1i64..6) {
        let alg = make_algebra(3, 4).unwrap();
        let e = element(&alg, &c).scalar_mul(&ratio(1, den));
        prop_assert_eq!(parse_element(&alg, &e.to_string()).unwrap(), e);
    }

    #[test]
    fn house_dominates_mean_square(c in coeffs(), field in 0usize..4) {
        let (a, n) = [(1, 5), (2, 3), (3, 2), (1, 12)][field];
        let alg = make_algebra(a, n).unwrap();
        let e = element(&alg, &c);
        let m = measure(&e, &ratio(1, 1 << 40)).unwrap();
        prop_assert!(m.house_high() * m.house_high() >= *m.msq_low());
        if !e.is_zero() {
            prop_assert!(*m.msq_high() >= rat(1));
        }
    }

    #[test]
    fn step_decomposition_reassembles(c in coeffs(), p in prop::sample::select(vec![2u64, 3])) {
        let alg = make_algebra(2, 6).unwrap();
        let e = element(&alg, &c);
        let d = decompose_step(&e, &TowerStep::new(p, 6).unwrap()).unwrap();
        prop_assert_eq!(d.reassemble(&alg).unwrap(), e);
        prop_assert!(d.all_integral());
    }

    #[test]
    fn term_sums_cost_at_most_their_length(picks in prop::collection::vec(0usize..64, 0..5)) {
        let alg = make_algebra(1, 5).unwrap();
        let terms = term_set(&alg);
        let scaled = picks.iter().fold(AlgebraElement::zero(&alg), |acc, &i| {
            acc.add(&terms[i % terms.len()].value(&alg)).unwrap()
        });
        let d = delta(&alg).unwrap();
        let (count, rep) = min_rep_count(&scaled.scalar_mul(&d.recip()), 8).unwrap();
        prop_assert!(count <= picks.len() as u128);
        prop_assert_eq!(rep.evaluate(&alg), scaled);
        prop_assert_eq!(rep.total(), count);
    }

    #[test]
    fn g_is_superadditive_on_integers(s in 0u64..1_000_000, t in 0u64..1_000_000) {
        let cfg = BoundConfig::basic(&rat(1)).unwrap();
        let g = |x: u64| g_rational(&BigRational::from_integer(x.into()), &cfg.k, &cfg.c1, 128).unwrap();
        let lhs = g(s).add(&g(t));
        prop_assert!(!lhs.lt(&g(s + t)));
    }

    #[test]
    fn suites_replay_from_their_seed(seed in any::<u64>()) {
        let p = SuiteParams::defaults("lemma3.5").unwrap();
        let a = check_lemma("lemma3.5", &p, 20, seed).unwrap().to_json().unwrap();
        let b = check_lemma("lemma3.5", &p, 20, seed).unwrap().to_json().unwrap();
        prop_assert_eq!(a, b);
    }
}
