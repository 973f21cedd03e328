use alignlab::catalog::{gaussian, quadratic, quadratic_catalog, quaternion, scaled_z};
use alignlab::linalg::{q, qvec};
use alignlab::{Multiplication, RatMatrix, Q};
use num_traits::Zero;
use proptest::prelude::*;

fn rings() -> Vec<Multiplication> {
    let mut out = quadratic_catalog(&[-1, 2, -2, 3, -3, 5, -5, 7], &[0]).unwrap();
    out.extend(quadratic_catalog(&[-1, -2, 3, -3, 5, -5, 7], &[1]).unwrap());
    out.push(quaternion());
    out.push(scaled_z(1).unwrap());
    out.push(scaled_z(6).unwrap());
    out
}

fn ring_and_vectors(k: i64) -> impl Strategy<Value = (Multiplication, Vec<Q>, Vec<Q>)> {
    prop::sample::select(rings()).prop_flat_map(move |m| {
        let d = m.dim();
        (
            Just(m),
            prop::collection::vec(-k..=k, d).prop_map(|v| qvec(&v)),
            prop::collection::vec(-k..=k, d).prop_map(|v| qvec(&v)),
        )
    })
}

fn invertible_2x2() -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(-3i64..=3, 4)
        .prop_filter("invertible", |e| e[0] * e[3] - e[1] * e[2] != 0)
        .prop_map(|e| RatMatrix::from_i64_rows(&[vec![e[0], e[1]], vec![e[2], e[3]]]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn representations_agree((m, x, y) in ring_and_vectors(50)) {
        let xy = m.multiply(&x, &y).unwrap();
        prop_assert_eq!(m.left_rep(&x).unwrap().mul_vec(&y), xy.clone());
        prop_assert_eq!(m.right_rep(&y).unwrap().mul_vec(&x), xy);
    }

    #[test]
    fn representation_is_homomorphism((m, x, y) in ring_and_vectors(20)) {
        let xy = m.multiply(&x, &y).unwrap();
        prop_assert_eq!(m.left_rep(&xy).unwrap(), &m.left_rep(&x).unwrap() * &m.left_rep(&y).unwrap());
        prop_assert_eq!(m.right_rep(&xy).unwrap(), &m.right_rep(&y).unwrap() * &m.right_rep(&x).unwrap());
    }

    #[test]
    fn nonzero_elements_are_invertible((m, x, _y) in ring_and_vectors(30)) {
        prop_assume!(x.iter().any(|e| !e.is_zero()));
        prop_assert!(!m.left_rep(&x).unwrap().det().unwrap().is_zero());
    }

    #[test]
    fn identity_round_trip((m, x, _y) in ring_and_vectors(30)) {
        prop_assume!(x.iter().any(|e| !e.is_zero()));
        let (b, z) = m.reaches_identity(&x).unwrap();
        let z: Vec<Q> = z.into_iter().map(Q::from_integer).collect();
        let lhs = m.left_rep(&x).unwrap().inverse().unwrap().scale(&Q::from_integer(b));
        prop_assert_eq!(lhs, m.left_rep(&z).unwrap());
    }

    #[test]
    fn left_and_right_actions_commute(x in prop::collection::vec(-9i64..=9, 4), y in prop::collection::vec(-9i64..=9, 4)) {
        let h = quaternion();
        let l = h.left_rep(&qvec(&x)).unwrap();
        let r = h.right_rep(&qvec(&y)).unwrap();
        prop_assert!(l.commutes_with(&r));
    }

    #[test]
    fn act_is_right_action(t in invertible_2x2(), s in invertible_2x2(), c in prop::sample::select(vec![-1i64, 2, 3, -5])) {
        let m = quadratic(0, c);
        let ts = &t * &s;
        prop_assert_eq!(m.act(&ts).unwrap(), m.act(&t).unwrap().act(&s).unwrap());
    }

    #[test]
    fn acted_representation(t in invertible_2x2(), x in prop::collection::vec(-9i64..=9, 2)) {
        let m = gaussian();
        let mt = m.act(&t).unwrap();
        let xq = qvec(&x);
        let expected = &(&t.inverse().unwrap() * &m.left_rep(&t.mul_vec(&xq)).unwrap()) * &t;
        prop_assert_eq!(mt.left_rep(&xq).unwrap(), expected);
    }
}

#[test]
fn central_scalar_identities() {
    for m in rings() {
        let (c, w) = m.central_scalar().unwrap();
        let w: Vec<Q> = w.into_iter().map(Q::from_integer).collect();
        let target = RatMatrix::scalar(m.dim(), Q::from_integer(c));
        assert_eq!(m.left_rep(&w).unwrap(), target);
        assert_eq!(m.right_rep(&w).unwrap(), target);
    }
}

#[test]
fn catalog_rings_are_unital_and_associative() {
    let scaled6 = scaled_z(6).unwrap();
    for m in rings() {
        assert!(m.is_associative());
        let mut e1 = vec![Q::zero(); m.dim()];
        e1[0] = q(1);
        assert_eq!(m.left_rep(&e1).unwrap().is_identity(), m != scaled6);
    }
}

#[test]
fn quadratic_norm_form() {
    for b in [0, 1] {
        for c in [-1, 2, -2, 3, -3, 5, -5, 6, 7] {
            let m = quadratic(b, c);
            for x1 in -6i64..=6 {
                for x2 in -6i64..=6 {
                    let det = m.left_rep(&qvec(&[x1, x2])).unwrap().det().unwrap();
                    assert_eq!(det, q(x1 * x1 + b * x1 * x2 - c * x2 * x2), "b={b} c={c} x=({x1},{x2})");
                }
            }
        }
    }
}
