use filter_xl::anf::{from_truth_table, monomials_up_to, to_truth_table, BoolPoly, Monomial, TruthTable};
use filter_xl::annihilator::{
    expand_polys, normal_form, reduced_gb_of_annihilator_ideal, span_rank, vanishing_ideal_basis, Side,
};
use filter_xl::cipher::{CipherSpec, WordState};
use filter_xl::estimator::{binomial_big, required_keystream};
use filter_xl::xl::{compose, tap_forms};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn poly_strategy(max_m: usize) -> impl Strategy<Value = (usize, BoolPoly)> {
    (0..=max_m).prop_flat_map(|m| {
        proptest::collection::vec(any::<bool>(), 1usize << m)
            .prop_map(move |t| (m, from_truth_table(&TruthTable::new(m, t).unwrap()).unwrap()))
    })
}

fn pair_strategy(max_m: usize) -> impl Strategy<Value = (BoolPoly, BoolPoly)> {
    (0..=max_m).prop_flat_map(|m| {
        let table = proptest::collection::vec(any::<bool>(), 1usize << m);
        (table.clone(), table).prop_map(move |(a, b)| {
            (
                from_truth_table(&TruthTable::new(m, a).unwrap()).unwrap(),
                from_truth_table(&TruthTable::new(m, b).unwrap()).unwrap(),
            )
        })
    })
}

fn table_of(p: &BoolPoly) -> Vec<bool> {
    to_truth_table(p).unwrap().values().to_vec()
}

fn points(f: &BoolPoly, side: Side) -> Vec<u64> {
    table_of(f)
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == side.bit())
        .map(|(x, _)| x as u64)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_pointwise_and((a, b) in pair_strategy(10)) {
        let prod = table_of(&a.mul_reduced(&b).unwrap());
        let want: Vec<bool> = table_of(&a).iter().zip(table_of(&b)).map(|(x, y)| *x && y).collect();
        prop_assert_eq!(prod, want);
    }

    #[test]
    fn addition_laws((a, b) in pair_strategy(8)) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert!(a.add(&a).unwrap().is_zero());
        let sum = table_of(&a.add(&b).unwrap());
        let want: Vec<bool> = table_of(&a).iter().zip(table_of(&b)).map(|(x, y)| *x ^ y).collect();
        prop_assert_eq!(sum, want);
        prop_assert_eq!(a.add(&b).unwrap().add(&b).unwrap(), a);
    }

    #[test]
    fn truth_table_round_trip((m, p) in poly_strategy(12)) {
        let t = to_truth_table(&p).unwrap();
        prop_assert_eq!(t.nvars(), m);
        prop_assert_eq!(from_truth_table(&t).unwrap(), p);
    }

    #[test]
    fn terms_strictly_increase((_, p) in poly_strategy(9)) {
        prop_assert!(p.terms().windows(2).all(|w| w[0] < w[1]));
        if let Some(lm) = p.leading_monomial() {
            prop_assert_eq!(Some(lm.degree()), p.degree().finite());
        }
    }

    #[test]
    fn annihilator_members_vanish((m, f) in poly_strategy(6)) {
        for side in [Side::Zero, Side::One] {
            let b = reduced_gb_of_annihilator_ideal(&f, side).unwrap();
            let pts = points(&f, side);
            for g in &b.gb {
                prop_assert!(pts.iter().all(|&x| !g.evaluate_set(&Monomial::from_mask(x))));
            }
            prop_assert!(normal_form(&side.generator(&f), &b.gb_prime).is_zero());
            prop_assert!(b.gb_prime.iter().all(|g| g.degree() <= f.degree() || g.is_constant()));
            prop_assert_eq!(b.m, m);
        }
    }

    #[test]
    fn basis_is_reduced((_, f) in poly_strategy(6)) {
        for side in [Side::Zero, Side::One] {
            let gb = reduced_gb_of_annihilator_ideal(&f, side).unwrap().gb;
            let lms: Vec<Monomial> = gb.iter().map(|g| g.leading_monomial().unwrap()).collect();
            for (i, g) in gb.iter().enumerate() {
                for (j, lm) in lms.iter().enumerate() {
                    prop_assert!(i == j || g.terms().iter().all(|t| !lm.divides(t)));
                }
            }
        }
    }

    #[test]
    fn full_expansion_spans_the_ideal((m, f) in poly_strategy(6)) {
        for side in [Side::Zero, Side::One] {
            let b = reduced_gb_of_annihilator_ideal(&f, side).unwrap();
            let dim = (1usize << m) - points(&f, side).len();
            let span: Vec<BoolPoly> = expand_polys(&b.gb_prime, m, m).polys.into_iter().map(|e| e.poly).collect();
            prop_assert_eq!(span_rank(&span, m), dim);
        }
    }

    #[test]
    fn vanishing_ideal_of_points(m in 1usize..6, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<u64> = (0..1u64 << m).filter(|_| rand::Rng::gen_bool(&mut rng, 0.5)).collect();
        let basis = vanishing_ideal_basis(m, &pts);
        for g in &basis {
            prop_assert!(pts.iter().all(|&x| !g.evaluate_set(&Monomial::from_mask(x))));
        }
        for x in 0..1u64 << m {
            if !pts.contains(&x) {
                let mut indicator = BoolPoly::one(m);
                for i in 0..m {
                    let lit = BoolPoly::var(m, i).unwrap();
                    let lit = if x >> i & 1 == 1 { lit } else { lit.complement() };
                    indicator = indicator.mul_reduced(&lit).unwrap();
                }
                prop_assert!(normal_form(&indicator, &basis).is_zero());
            }
        }
    }

    #[test]
    fn required_keystream_decreases_in_k(k in 1u64..1_000_000, extra in 0u64..1000, d in 1usize..6) {
        let small = required_keystream(&BigUint::from(k), &BigUint::from(k), 40, d).unwrap();
        let large = required_keystream(&BigUint::from(k + extra), &BigUint::from(k + extra), 40, d).unwrap();
        prop_assert!(large <= small);
        let covered = &small * BigUint::from(k);
        let total: BigUint = (0..=d).map(|i| binomial_big(40, i)).sum();
        prop_assert!(covered >= total);
    }

    #[test]
    fn binomial_matches_pascal(n in 1usize..300, k in 1usize..8) {
        prop_assert_eq!(binomial_big(n, k), binomial_big(n - 1, k - 1) + binomial_big(n - 1, k));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn composition_is_a_ring_map(seed: u64, clock in 0usize..80) {
        let spec = CipherSpec::toy3();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let random = |rng: &mut ChaCha8Rng, d: usize| {
            let terms = monomials_up_to(7, d).into_iter().filter(|_| rand::Rng::gen_bool(rng, 0.5));
            BoolPoly::from_terms(7, terms).unwrap()
        };
        let (a, b) = (random(&mut rng, 7), random(&mut rng, 7));
        let forms = tap_forms(&spec.update_matrix(), clock, &spec);
        let lhs = compose(&a.add(&b).unwrap(), &forms).unwrap();
        let rhs = compose(&a, &forms).unwrap().add(&compose(&b, &forms).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let (a, b) = (random(&mut rng, 2), random(&mut rng, 1));
        let prod = compose(&a.mul_reduced(&b).unwrap(), &forms).unwrap();
        let rprod = compose(&a, &forms).unwrap().mul_reduced(&compose(&b, &forms).unwrap()).unwrap();
        prop_assert_eq!(prod, rprod);
    }

    #[test]
    fn keystream_is_deterministic_and_shift_consistent(seed: u64, t in 0usize..200, shift in 0usize..50) {
        let spec = CipherSpec::toy5();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = WordState::random_nonzero(spec.a, &mut rng);
        let a = spec.keystream(&s, t + shift, false).unwrap();
        prop_assert_eq!(&a, &spec.keystream(&s, t + shift, false).unwrap());
        let later = spec.advance(&s, shift).unwrap();
        let tail = spec.keystream(&later, t, false).unwrap();
        prop_assert_eq!(&a[shift..], tail.as_slice());
    }
}

#[test]
fn monomial_listing_is_ascending_and_complete() {
    for n in 0..9 {
        for d in 0..=n {
            let list = monomials_up_to(n, d);
            assert!(list.windows(2).all(|w| w[0] < w[1]));
            let want: usize = (0..=d)
                .map(|k| binomial_big(n, k).to_string().parse::<usize>().unwrap())
                .sum();
            assert_eq!(list.len(), want);
        }
    }
}

#[test]
fn cli_output_is_deterministic() {
    let run = |args: &[&str]| {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = filter_xl::workbench::run(
            std::iter::once("filter-xl").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap())
    };
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.ks");
    let b = dir.path().join("b.ks");
    for path in [&a, &b] {
        let path = path.to_str().unwrap();
        let (code, _) = run(&["keystream", "toy5", "--t", "500", "--seed", "9", "--out", path]);
        assert_eq!(code, 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let (c1, t1) = run(&["estimate", "wg-prng", "--csv"]);
    let (c2, t2) = run(&["estimate", "wg-prng", "--csv"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(t1, t2);
}

#[test]
fn truncated_basis_spans_like_the_full_one_for_wgt() {
    let f = filter_xl::cipher::wgt_anf();
    for side in [Side::Zero, Side::One] {
        let b = reduced_gb_of_annihilator_ideal(&f, side).unwrap();
        for e in 0..=7 {
            let span = |polys: &[BoolPoly]| {
                let v: Vec<BoolPoly> = expand_polys(polys, 7, e).polys.into_iter().map(|x| x.poly).collect();
                span_rank(&v, 7)
            };
            assert_eq!(span(&b.gb), span(&b.gb_prime), "{side:?}, degree {e}");
        }
    }
}
