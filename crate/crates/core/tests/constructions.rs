use alignlab::catalog::{gaussian, quadratic, quaternion, scaled_z};
use alignlab::constructions::{
    build_ip_separating, build_ipstar_nonsyndetic, build_thick_avoiding, norm_constant, verify_avoiding, StagedSet,
    DEFAULT_SEARCH_BOUND,
};
use alignlab::largeness::{fp_set, FiniteSet};
use alignlab::linalg::qvec;
use alignlab::points::{box_points, cube, norm_sq};
use alignlab::{Multiplication, RatMatrix};
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn recheck_norms(b: &StagedSet, factor: impl Fn(usize) -> i128) {
    let mut prev: Option<i128> = None;
    for st in &b.stages {
        let min = st.h.iter().map(|p| norm_sq(p)).min().unwrap();
        let max = st.h.iter().map(|p| norm_sq(p)).max().unwrap();
        if let Some(pm) = prev {
            assert!(min > factor(st.n) * pm, "stage {} norm growth", st.n);
        }
        let m = &b.mults[st.mult_index];
        let expected: Vec<Vec<i64>> = cube(b.dim, st.n as i64).iter().map(|f| m.mul_int(f, &st.x).unwrap()).collect();
        assert_eq!(st.h, FiniteSet::new(b.dim, expected).unwrap());
        prev = Some(max);
    }
}

#[test]
fn staged_sets_satisfy_their_norm_inequalities() {
    let thick = build_thick_avoiding(&[gaussian()], &[quadratic(0, 2)], 3, DEFAULT_SEARCH_BOUND).unwrap();
    assert!(thick.check_invariants().unwrap());
    recheck_norms(&thick, |n| (n * n) as i128);

    let ip = build_ipstar_nonsyndetic(&[gaussian(), quadratic(0, 2)], 3, DEFAULT_SEARCH_BOUND).unwrap();
    assert!(ip.check_invariants().unwrap());
    recheck_norms(&ip, |_| 4);
    for st in &ip.stages {
        let m = &ip.mults[st.mult_index];
        let n = st.n as i128;
        for f in cube(2, 2 * st.n as i64) {
            assert!(norm_sq(&m.mul_int(&f, &st.x).unwrap()) > n * n);
        }
    }
}

/// For `G ⊆ cube(1)` over these three rings, `‖φ(f)^{-1}‖_∞ ≤ 3`, so every
/// `z` with `f ⊙ z ∈ A` lies within sup-norm `3 ‖A‖_max`.
#[test]
fn avoiding_agrees_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let rings = [gaussian(), quadratic(0, 2), quadratic(1, -1)];
    let unit = cube(2, 1);
    let mut violated = 0;
    for _ in 0..50 {
        let m = &rings[rng.gen_range(0..rings.len())];
        for f in &unit {
            let inv = m.left_rep(&qvec(f)).unwrap().inverse().unwrap();
            let row_max = (0..2)
                .map(|i| inv.row(i).iter().map(|e| e.abs().to_f64().unwrap()).sum::<f64>())
                .fold(0.0, f64::max);
            assert!(row_max <= 3.0);
        }
        let k = rng.gen_range(2..=4);
        let g: Vec<Vec<i64>> = unit.choose_multiple(&mut rng, k).cloned().collect();
        let mut a: Vec<Vec<i64>> = (0..rng.gen_range(1..=5))
            .map(|_| vec![rng.gen_range(-6..=6), rng.gen_range(-6..=6)])
            .collect();
        if rng.gen_bool(0.5) {
            let z0 = vec![rng.gen_range(-3..=3), rng.gen_range(1..=3)];
            for f in g.iter().take(2) {
                a.push(m.mul_int(f, &z0).unwrap());
            }
        }
        let a = FiniteSet::new(2, a).unwrap();
        let gs = FiniteSet::new(2, g.clone()).unwrap();
        let report = verify_avoiding(&a, &gs, m).unwrap();

        let r = 3 * a.max_sup_norm().max(1);
        let mut candidates = 0;
        let mut max_inc = 0;
        let mut avoiding = true;
        for z in box_points(2, -r, r) {
            if z == [0, 0] {
                continue;
            }
            let hits: Vec<&Vec<i64>> = g.iter().filter(|f| a.contains(&m.mul_int(f, &z).unwrap())).collect();
            if hits.is_empty() {
                continue;
            }
            candidates += 1;
            max_inc = max_inc.max(hits.len());
            if hits.iter().any(|u| hits.iter().any(|v| u[0] * v[1] != u[1] * v[0])) {
                avoiding = false;
            }
        }
        assert_eq!(report.avoiding, avoiding);
        assert_eq!(report.candidates, candidates);
        assert_eq!(report.max_incidence, max_inc);
        if !avoiding {
            violated += 1;
            let v = report.violation.unwrap();
            for f in &v.f {
                assert!(a.contains(&m.mul_int(f, &v.z).unwrap()));
            }
        }
    }
    assert!(violated > 0, "the planted instances should produce violations");
}

fn assert_fp_triple_free(ma: &Multiplication, mb: &Multiplication, n: usize) {
    let seq = build_ip_separating(ma, mb, n, DEFAULT_SEARCH_BOUND).unwrap();
    let fp = fp_set(ma, &seq.generators).unwrap();
    for a in fp.iter() {
        for b in fp.iter() {
            assert!(!fp.contains(&mb.mul_int(a, b).unwrap()), "{a:?} * {b:?} lands in FP");
        }
    }
}

#[test]
fn separating_sequences_are_triple_free() {
    assert_fp_triple_free(&gaussian(), &quadratic(0, 2), 3);
    assert_fp_triple_free(&quadratic(0, 2), &gaussian(), 3);
    assert_fp_triple_free(&scaled_z(1).unwrap(), &scaled_z(2).unwrap(), 4);
}

#[test]
fn norm_constants_bound_dilates() {
    let m = quadratic(0, 3);
    for y in cube(2, 3) {
        let k = norm_constant(&m, &y).unwrap().to_f64().unwrap();
        for x in cube(2, 4) {
            let xy = norm_sq(&m.mul_int(&x, &y).unwrap()) as f64;
            let xx = norm_sq(&x) as f64;
            assert!(xy.sqrt() <= k * xx.sqrt() * (1.0 + 1e-12));
            assert!(xx.sqrt() <= k * xy.sqrt() * (1.0 + 1e-12));
        }
    }
}

fn unimodular() -> impl Strategy<Value = RatMatrix> {
    (-3i64..=3, -3i64..=3, any::<bool>()).prop_map(|(a, b, swap)| {
        // [[1, a], [0, 1]] · [[1, 0], [b, 1]], optionally with swapped rows
        let mut rows = vec![vec![1 + a * b, a], vec![b, 1]];
        if swap {
            rows.swap(0, 1);
        }
        RatMatrix::from_i64_rows(&rows).unwrap()
    })
}

fn apply(t: &RatMatrix, x: &[i64]) -> Vec<i64> {
    t.mul_vec(&qvec(x)).iter().map(|e| e.to_integer().to_i64().unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reversal_identity(gens in prop::collection::vec(
        prop::collection::vec(-3i64..=3, 4).prop_filter("nonzero", |v| v.iter().any(|&e| e != 0)), 1..=5)) {
        let h = quaternion();
        let rev: Vec<Vec<i64>> = gens.iter().rev().cloned().collect();
        prop_assert_eq!(fp_set(&h.opposite(), &gens).unwrap(), fp_set(&h, &rev).unwrap());
    }

    #[test]
    fn fp_sets_transfer(t in unimodular(), c in prop::sample::select(vec![-1i64, 2, 3]),
        gens in prop::collection::vec(
            prop::collection::vec(-3i64..=3, 2).prop_filter("nonzero", |v| v.iter().any(|&e| e != 0)), 1..=4)) {
        let m = quadratic(0, c);
        let mt = m.act(&t).unwrap();
        prop_assert!(mt.is_integral());
        let image: Vec<Vec<i64>> = fp_set(&mt, &gens).unwrap().iter().map(|x| apply(&t, x)).collect();
        let moved: Vec<Vec<i64>> = gens.iter().map(|g| apply(&t, g)).collect();
        prop_assert_eq!(FiniteSet::new(2, image).unwrap(), fp_set(&m, &moved).unwrap());
    }

}
