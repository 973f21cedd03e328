use alignlab::genpoly::{
    eval, eval_at, fs_intersection_check, nearest_int_distance, parse, return_set_scan, return_set_scan_with, Atom,
    Expr, Precision,
};
use alignlab::largeness::Verdict;
use alignlab::{Error, Q};
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

fn atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        (-5i64..=5).prop_map(|k| Atom::Int(BigInt::from(k))),
        (-999i64..=999, 1u32..=3).prop_map(|(d, s)| Atom::Dec {
            digits: BigInt::from(d),
            scale: s
        }),
        Just(Atom::Pi),
        Just(Atom::E),
        (0u64..=20).prop_map(Atom::Sqrt),
        (0u64..=20, 1u32..=5).prop_map(|(k, j)| Atom::Root(k, j)),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = (prop::collection::vec(atom(), 0..=2), 0usize..3).prop_map(|(coeff, var)| Expr::Linear { coeff, var });
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            inner.prop_map(|a| Expr::Frac(Box::new(a))),
        ]
    })
}

fn point() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-40i64..=40, 3)
}

#[test]
fn doubled_precision_nests() {
    let mut runner = TestRunner::new(Config {
        cases: 10_000,
        ..Config::default()
    });
    let bits = prop::sample::select(vec![32u32, 64, 128, 256]);
    runner
        .run(&(expr(), point(), bits), |(f, x, p)| {
            let (Ok(lo), Ok(hi)) = (eval_at(&f, &x, p), eval_at(&f, &x, 2 * p)) else {
                return Ok(());
            };
            prop_assert!(lo.contains(&hi), "{} at {:?}: {} vs {}", f, x, lo, hi);
            Ok(())
        })
        .unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn print_parse_round_trip(f in expr()) {
        let text = f.to_string();
        prop_assert_eq!(parse(&text).unwrap(), f, "{}", text);
    }

    #[test]
    fn zero_maps_to_zero(f in expr()) {
        let v = eval_at(&f, &[0, 0, 0], 64).unwrap();
        prop_assert!(v.is_exact());
        prop_assert_eq!(v.lower(), Q::from_integer(0.into()));
    }

    #[test]
    fn distances_lie_in_unit_half(f in expr(), x in point()) {
        if let Ok(d) = nearest_int_distance(&f, &x, 64) {
            prop_assert!(d.lower() >= Q::from_integer(0.into()));
            prop_assert!(d.upper() <= Q::new(1.into(), 2.into()));
        }
    }
}

#[test]
fn scans_agree_across_precisions() {
    let eps = Q::new(1.into(), 20.into());
    for src in ["sqrt(2)*n", "pi*n*[e*n]", "[sqrt(3)*n]*root(5,3)*n + 0.1*n", "[0.5*n]*n"] {
        let f = parse(src).unwrap();
        for p in [16u32, 32, 64] {
            let at = |b: u32| {
                return_set_scan_with(&f, &eps, 1, -300, 300, Precision { start_bits: b, cap_bits: b }).unwrap()
            };
            let (lo, hi) = (at(p), at(2 * p));
            for x in -300..=300 {
                let x = [x];
                let undecided = lo.straddles.iter().any(|s| s[..] == x) || hi.straddles.iter().any(|s| s[..] == x);
                if !undecided {
                    assert_eq!(lo.members.contains(&x), hi.members.contains(&x), "{src} at {x:?}, {p} bits");
                }
            }
        }
    }
}

#[test]
fn eval_examples() {
    let v = eval(&parse("sqrt(2)*n").unwrap(), &[1], 64).unwrap();
    assert!(v.width() < Q::new(1.into(), BigInt::from(1u64 << 60)));
    assert!(v.lower() < Q::new(141421357.into(), 100000000.into()));
    assert!(v.upper() > Q::new(141421356.into(), 100000000.into()));
    let d = nearest_int_distance(&parse("sqrt(2)*n").unwrap(), &[169], 128).unwrap();
    assert!(d.upper() < Q::new(1.into(), 100.into()));
    assert!(d.lower() > Q::new(209.into(), 100000.into()) && d.upper() < Q::new(210.into(), 100000.into()));
    assert!(matches!(eval(&parse("[n]").unwrap(), &[], 64), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn scans_and_fs_checks() {
    let f = parse("sqrt(2)*n").unwrap();
    let all = return_set_scan(&f, &Q::new(1.into(), 2.into()), 1, -20, 20).unwrap();
    assert_eq!(all.members.len(), 41);
    let r = return_set_scan(&f, &Q::new(1.into(), 100.into()), 1, -5, 5).unwrap();
    assert!(r.members.contains(&[0]));

    let single = fs_intersection_check(&f, &Q::new(1.into(), 10.into()), &[vec![1]]).unwrap();
    assert_eq!(single.verdict, Verdict::RefutedOnWindow);
    let rational = parse("0.25*n + 1.5*m").unwrap();
    let gens = vec![vec![4, 2], vec![8, -6], vec![12, 4]];
    let rep = fs_intersection_check(&rational, &Q::new(1.into(), 1000.into()), &gens).unwrap();
    assert_eq!(rep.witness.len(), 7);
    let gens: Vec<Vec<i64>> = [17, 29, 41, 70, 99].iter().map(|&g| vec![g]).collect();
    let rep = fs_intersection_check(&f, &Q::new(1.into(), 10.into()), &gens).unwrap();
    assert_eq!(rep.verdict, Verdict::Witnessed);
}
