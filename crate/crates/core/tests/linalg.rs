use alignlab::linalg::{hnf, kernel_rational, lattice_intersect, qvec, IntLattice};
use alignlab::points::box_points;
use alignlab::RatMatrix;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&e| BigInt::from(e)).collect()).collect()
}

fn gens(dim: usize, max_rows: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, dim), 1..=max_rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hnf_idempotent(g in gens(3, 5)) {
        let l = hnf(3, &big(&g)).unwrap();
        let again = hnf(3, l.basis()).unwrap();
        prop_assert_eq!(l, again);
    }

    #[test]
    fn hnf_ignores_row_order(g in gens(3, 5), seed in any::<u64>()) {
        let mut shuffled = g.clone();
        let n = shuffled.len();
        for i in (1..n).rev() {
            let j = (seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64) % (i as u64 + 1)) as usize;
            shuffled.swap(i, j);
        }
        prop_assert_eq!(hnf(3, &big(&g)).unwrap(), hnf(3, &big(&shuffled)).unwrap());
    }

    #[test]
    fn hnf_ignores_unimodular_moves(g in gens(3, 4), k in -5i64..=5, i in 0usize..4, j in 0usize..4) {
        let n = g.len();
        let (i, j) = (i % n, j % n);
        prop_assume!(i != j);
        let mut moved = g.clone();
        for c in 0..3 {
            moved[i][c] += k * g[j][c];
        }
        moved[j] = moved[j].iter().map(|e| -e).collect();
        prop_assert_eq!(hnf(3, &big(&g)).unwrap(), hnf(3, &big(&moved)).unwrap());
    }

    #[test]
    fn intersection_is_contained_and_complete(g1 in gens(2, 3), g2 in gens(2, 3)) {
        let l1 = IntLattice::from_i64(2, &g1).unwrap();
        let l2 = IntLattice::from_i64(2, &g2).unwrap();
        let both = lattice_intersect(&l1, &l2).unwrap();
        for b in both.basis() {
            prop_assert!(l1.contains(b).unwrap());
            prop_assert!(l2.contains(b).unwrap());
        }
        for p in box_points(2, -8, 8) {
            let pb: Vec<BigInt> = p.iter().map(|&e| BigInt::from(e)).collect();
            if l1.contains(&pb).unwrap() && l2.contains(&pb).unwrap() {
                prop_assert!(both.contains(&pb).unwrap(), "{:?} missing", p);
            }
        }
    }

    #[test]
    fn kernel_vectors_are_annihilated(rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 4), 1..=4)) {
        let a = RatMatrix::from_i64_rows(&rows).unwrap();
        let ker = kernel_rational(&a);
        for v in &ker {
            prop_assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
        prop_assert_eq!(a.rank() + ker.len(), 4);
    }
}

#[test]
fn inverse_round_trip() {
    let a = RatMatrix::from_i64_rows(&[vec![2, 1], vec![7, 4]]).unwrap();
    let inv = a.inverse().unwrap();
    assert!((&a * &inv).is_identity());
    assert_eq!(inv.mul_vec(&qvec(&[2, 7])), qvec(&[1, 0]));
}
