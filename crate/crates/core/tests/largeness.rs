use alignlab::catalog::{gaussian, scaled_z};
use alignlab::largeness::{
    contains_ipr, density_estimate, fp_set, fs_set, piecewise_syndetic_witness, syndetic_witness, thick_witness,
    FiniteSet, IpSearchLimits, Membership, Operation, PredicateSet, Verdict,
};
use alignlab::points::cube;
use alignlab::Q;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn multiples(q: i64) -> PredicateSet<impl Fn(&[i64]) -> bool + Sync> {
    PredicateSet::new(1, move |x: &[i64]| x[0] % q == 0)
}

fn member<A: Membership>(a: &A, x: &[i64]) -> bool {
    a.membership(x) == Some(true)
}

#[test]
fn generic_fp_sets_are_full() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = gaussian();
    for r in 1..=6 {
        let gens: Vec<Vec<i64>> = (0..r).map(|_| vec![rng.gen_range(100..1000), rng.gen_range(100..1000)]).collect();
        assert_eq!(fp_set(&g, &gens).unwrap().len(), (1 << r) - 1);
    }
    // coincidences only shrink the set
    let s = fp_set(&g, &[vec![1, 0], vec![1, 0], vec![0, 1]]).unwrap();
    assert!(s.len() < 7);
}

#[test]
fn ps_witness_splits_into_shifts_and_stretch() {
    let a = PredicateSet::new(1, |x: &[i64]| x[0] % 2 == 0);
    let shifts = FiniteSet::new(1, (0..4).map(|k| vec![k])).unwrap();
    let f = FiniteSet::new(1, (1..=5).map(|k| vec![k])).unwrap();
    let r = piecewise_syndetic_witness(&a, Operation::Additive, &shifts, &f, 10, 2).unwrap();
    assert_eq!(r.verdict, Verdict::Witnessed);
    let (x, chosen) = r.witness.split_last().unwrap();
    // the union of the chosen translates is thick along F + x
    for g in f.iter() {
        let p = g[0] + x[0];
        assert!(chosen.iter().any(|s| member(&a, &[s[0] + p])));
    }
    // and the chosen shifts alone cover a whole window syndetically
    let cover = FiniteSet::new(1, chosen.to_vec()).unwrap();
    let synd = syndetic_witness(&a, Operation::Additive, &cover, 6, chosen.len()).unwrap();
    assert_eq!(synd.verdict, Verdict::Witnessed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn witnesses_reverify_pointwise(q in 2i64..=6) {
        let a = multiples(q);
        let shifts = FiniteSet::new(1, (0..q).map(|k| vec![k])).unwrap();
        let s = syndetic_witness(&a, Operation::Additive, &shifts, 12, q as usize).unwrap();
        prop_assert_eq!(s.verdict, Verdict::Witnessed);
        for p in -12..=12 {
            prop_assert!(s.witness.iter().any(|sh| member(&a, &[sh[0] + p])));
        }

        let z = scaled_z(1).unwrap();
        let f = FiniteSet::new(1, cube(1, 3)).unwrap();
        let t = thick_witness(&a, Operation::Mult(&z), &f, 10).unwrap();
        prop_assert_eq!(t.verdict, Verdict::Witnessed);
        let x = &t.witness[0];
        for g in f.iter() {
            prop_assert!(member(&a, &[g[0] * x[0]]));
        }

        let ip = contains_ipr(&a, Operation::Additive, 3, 3 * q, IpSearchLimits::default()).unwrap();
        prop_assert_eq!(ip.verdict, Verdict::Witnessed);
        for p in fs_set(&ip.witness).unwrap().iter() {
            prop_assert!(member(&a, p));
        }
    }

    #[test]
    fn density_is_monotone_and_bounded(q in 2i64..=7, len in 1i64..=12) {
        let a = multiples(q);
        let f = FiniteSet::new(1, (1..=len).map(|k| vec![k])).unwrap();
        let mut last = Q::from_integer(0.into());
        for r in 0..8 {
            let (d, _) = density_estimate(&a, Operation::Additive, &f, r).unwrap();
            prop_assert!(d >= last);
            prop_assert!(d <= Q::from_integer(1.into()));
            last = d;
        }
    }
}

#[test]
fn windowed_sets_report_inconclusive() {
    let a = FiniteSet::new(1, vec![vec![2], vec![4]]).unwrap().with_window(4);
    let z = scaled_z(1).unwrap();
    let f = FiniteSet::new(1, vec![vec![1], vec![2], vec![3]]).unwrap();
    let r = thick_witness(&a, Operation::Mult(&z), &f, 5).unwrap();
    assert_eq!(r.verdict, Verdict::Inconclusive);
}
