use proptest::prelude::*;

use steiner_core::forms::{gradient_direct, steiner_form, tree_form};
use steiner_core::gp_matrix::{distance_matrix, RatMatrix};
use steiner_core::hypermatrix::ExportFormat;
use steiner_core::nullspace::{canonical_odd_nullvector, membership_sg, verify_nullvector};
use steiner_core::scalar::{lift_all, rat, Numeric};
use steiner_core::{CycNum, Hypermatrix, Rat, Scalar, SparsePoly, Tree};

fn tree_in(min_n: usize, max_n: usize) -> impl Strategy<Value = Tree> {
    (min_n..=max_n, any::<u64>()).prop_map(|(n, seed)| Tree::random(n, seed))
}

fn tree(max_n: usize) -> impl Strategy<Value = Tree> {
    tree_in(1, max_n)
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-7i64..=7, 1i64..=4).prop_map(|(a, b)| rat(a, b))
}

fn cyc(m: u64) -> impl Strategy<Value = CycNum> {
    proptest::collection::vec(small_rat(), m as usize).prop_map(move |c| CycNum::from_coeffs(m, c))
}

fn rat_point(n: usize) -> impl Strategy<Value = Vec<CycNum>> {
    proptest::collection::vec(small_rat(), n).prop_map(|v| v.into_iter().map(|r| CycNum::from_rat(1, r)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    // the empty sequence is K2; a single vertex has no sequence of its own
    #[test]
    fn prufer_round_trip(t in tree_in(2, 12)) {
        prop_assert_eq!(Tree::from_prufer(&t.prufer()).unwrap(), t.clone());
        prop_assert_eq!(Tree::parse(&t.to_edge_list()).unwrap(), t);
    }

    #[test]
    fn gradient_matches_form_partials((t, k, x) in (tree(5), 2usize..=4).prop_flat_map(|(t, k)| {
        let n = t.n();
        (Just(t), Just(k), rat_point(n))
    })) {
        let p = steiner_form(&Hypermatrix::build_steiner(&t, k).unwrap());
        prop_assert_eq!(&p, &tree_form(&t, k).unwrap());
        let direct = gradient_direct(&t, k, &x).unwrap();
        for (r, d) in direct.iter().enumerate() {
            prop_assert_eq!(&p.partial(r).evaluate(&x).unwrap(), d);
        }
    }

    #[test]
    fn form_is_homogeneous((t, k, x, lam) in (tree(5), 2usize..=4).prop_flat_map(|(t, k)| {
        let n = t.n();
        (Just(t), Just(k), proptest::collection::vec(small_rat(), n), small_rat())
    })) {
        let p = tree_form(&t, k).unwrap();
        let scaled: Vec<Rat> = x.iter().map(|v| v * &lam).collect();
        let lhs = p.eval(&scaled).unwrap();
        let rhs = p.eval(&x).unwrap() * num_traits::pow(lam, k);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gradient_finite_difference((t, k, x) in (tree(6), 2usize..=4).prop_flat_map(|(t, k)| {
        let n = t.n();
        (Just(t), Just(k), proptest::collection::vec(-1.0f64..1.0, n))
    })) {
        let p = tree_form(&t, k).unwrap();
        let grad = gradient_direct(&t, k, &x).unwrap();
        let h = 1e-6;
        for r in 0..t.n() {
            let mut up = x.clone();
            let mut dn = x.clone();
            up[r] += h;
            dn[r] -= h;
            let fd = (p.eval(&up).unwrap() - p.eval(&dn).unwrap()) / (2.0 * h);
            prop_assert!((fd - grad[r]).abs() <= 1e-5 * (1.0 + grad[r].abs()), "{} vs {}", fd, grad[r]);
        }
    }

    #[test]
    fn cyclotomic_field_axioms((m, a, b, c) in prop::sample::select(vec![3u64, 4, 5, 6, 8, 12])
        .prop_flat_map(|m| (Just(m), cyc(m), cyc(m), cyc(m))))
    {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), CycNum::one(m));
        }
        let (ea, eb) = (a.embed(128), b.embed(128));
        let diff = (&a * &b).embed(128).minus(&ea.times(&eb)).modulus();
        prop_assert!(diff <= 1e-30 * (1.0 + ea.modulus() * eb.modulus()));
        let sum = (&a + &b).embed(128).minus(&ea.plus(&eb)).modulus();
        prop_assert!(sum <= 1e-30 * (1.0 + ea.modulus() + eb.modulus()));
    }

    #[test]
    fn odd_nullvectors_scale_and_sum_to_zero(
        (t, k, lam, j) in (tree_in(3, 7),
                           prop::sample::select(vec![3usize, 5, 7]),
                           small_rat().prop_filter("nonzero", |r| *r != rat(0, 1)),
                           0i64..8)
    ) {
        let y = canonical_odd_nullvector(&t, k).unwrap();
        let lam = &CycNum::root_of_unity(2 * k as u64 - 2, j) * &CycNum::from_rat(1, lam);
        let scaled: Vec<CycNum> = y.iter().map(|v| v * &lam).collect();
        let scaled = lift_all(&scaled);
        prop_assert!(verify_nullvector(&t, k, &scaled).unwrap().exact_zero);
        let s = scaled.iter().skip(1).fold(scaled[0].clone(), |acc, v| &acc + v);
        prop_assert!(s.is_zero());
        if k == 3 {
            prop_assert!(membership_sg(&t, &scaled).unwrap());
        }
    }

    #[test]
    fn membership_matches_gradient((t, x) in tree_in(2, 6).prop_flat_map(|t| {
        let n = t.n();
        (Just(t), rat_point(n))
    })) {
        prop_assume!(x.iter().any(|v| !v.is_zero()));
        let vanishes = gradient_direct(&t, 3, &x).unwrap().iter().all(CycNum::is_zero);
        prop_assert_eq!(membership_sg(&t, &x).unwrap(), vanishes);
    }

    #[test]
    fn hypermatrix_is_symmetric_and_round_trips((t, k) in (tree(5), 2usize..=3)) {
        let h = Hypermatrix::build_steiner(&t, k).unwrap();
        for idx in 0..h.entries().len() {
            let mut tuple = h.tuple_of(idx);
            prop_assert_eq!(h.get(&tuple), t.steiner_distance(&tuple).unwrap() as i64);
            tuple.reverse();
            prop_assert_eq!(h.get(&tuple), h.entries()[idx]);
        }
        prop_assert_eq!(&Hypermatrix::from_json(&h.export(ExportFormat::Json)).unwrap(), &h);
        prop_assert_eq!(&Hypermatrix::from_flat_text(&h.export(ExportFormat::FlatText)).unwrap(), &h);
    }

    #[test]
    fn serialization_round_trips(t in tree(8)) {
        let d = distance_matrix(&t);
        prop_assert_eq!(&RatMatrix::from_json(&d.to_json()).unwrap(), &d);
        let p = tree_form(&t, 3).unwrap();
        prop_assert_eq!(&SparsePoly::from_json(&p.to_json()).unwrap(), &p);
    }
}
