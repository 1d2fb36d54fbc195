use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use rootgroupoid::exact::{
    cone_membership, integrality_probe, parse_scalar, smith_normal_form, Field, IntMatrix, Integrality, Scalar, Q,
};

fn field() -> Arc<Field> {
    // Q(t)[θ]/(θ^2 - 2)
    let two = Q::from_integer(2.into());
    Arc::new(Field::new(vec!["t".into()], Some(vec![-two, Q::from_integer(0.into()), Q::from_integer(1.into())]), None).unwrap())
}

/// `(c0 + c1 θ + c2 t + c3 tθ) / (d0 + d1 t)` with a nonzero denominator.
fn scalar(k: &Arc<Field>, c: [i64; 4], d: (i64, i64)) -> Scalar {
    let t = Scalar::param(k, 0);
    let th = Scalar::theta(k);
    let num = Scalar::int(c[0]) + &th * Scalar::int(c[1]) + &t * Scalar::int(c[2]) + &(&t * &th) * Scalar::int(c[3]);
    let den = Scalar::int(d.0) + &t * Scalar::int(d.1);
    num / den
}

fn arb_parts() -> impl Strategy<Value = ([i64; 4], (i64, i64))> {
    (prop::array::uniform4(-4i64..=4), (-3i64..=3, -3i64..=3)).prop_filter("nonzero denominator", |(_, d)| *d != (0, 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in arb_parts(), b in arb_parts(), c in arb_parts()) {
        let k = field();
        let (x, y, z) = (scalar(&k, a.0, a.1), scalar(&k, b.0, b.1), scalar(&k, c.0, c.1));
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert!((&x - &x).is_zero());
        if !x.is_zero() {
            let inv = x.inv().unwrap();
            prop_assert!((&x * &inv).is_one());
            prop_assert_eq!(&(&y / &x) * &x, y.clone());
        }
    }

    #[test]
    fn display_round_trips(a in arb_parts()) {
        let k = field();
        let x = scalar(&k, a.0, a.1);
        let back = parse_scalar(&x.to_string(), &k).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn smith_form_factors(rows in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 1..5)) {
        let m = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&s.d).mul(&s.v), m);
        prop_assert_eq!(s.u.det().magnitude().clone(), BigInt::from(1).magnitude().clone());
        prop_assert_eq!(s.v.det().magnitude().clone(), BigInt::from(1).magnitude().clone());
        let d = s.diagonal();
        for w in d.windows(2) {
            prop_assert!(w[0] >= 0 && w[1] >= 0);
            let divides = if w[0] == 0 { w[1] == 0 } else { w[1] % w[0] == 0 };
            prop_assert!(divides);
        }
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert_eq!(s.d[(i, j)], 0);
                }
            }
        }
    }

    #[test]
    fn cone_witness_reverifies(
        gens in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 1..6),
        target in prop::collection::vec(-5i64..=5, 3),
    ) {
        let g: Vec<Vec<Scalar>> = gens.iter().map(|v| v.iter().map(|&x| Scalar::int(x)).collect()).collect();
        let t: Vec<Scalar> = target.iter().map(|&x| Scalar::int(x)).collect();
        if let Some(c) = cone_membership(&g, &t).unwrap() {
            prop_assert_eq!(c.len(), gens.len());
            prop_assert!(c.iter().all(|ci| *ci >= Q::from_integer(0.into())));
            for j in 0..3 {
                let s = c.iter().zip(&gens).fold(Q::from_integer(0.into()), |acc, (ci, v)| acc + ci * Q::from_integer(v[j].into()));
                prop_assert_eq!(s, Q::from_integer(target[j].into()));
            }
        }
    }

    #[test]
    fn cone_membership_of_nonnegative_combinations(
        gens in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 1..5),
        coeffs in prop::collection::vec(0i64..=3, 5),
    ) {
        let target: Vec<i64> = (0..3).map(|j| gens.iter().zip(&coeffs).map(|(v, c)| v[j] * c).sum()).collect();
        let g: Vec<Vec<Scalar>> = gens.iter().map(|v| v.iter().map(|&x| Scalar::int(x)).collect()).collect();
        let t: Vec<Scalar> = target.iter().map(|&x| Scalar::int(x)).collect();
        prop_assert!(cone_membership(&g, &t).unwrap().is_some());
    }
}

#[test]
fn integrality_examples() {
    assert_eq!(integrality_probe(&Scalar::int(-3)), Integrality::NonpositiveInteger((-3).into()));
    assert_eq!(integrality_probe(&Scalar::ratio(-3, 2)), Integrality::NotInteger);
    let k = Arc::new(Field::with_params(&["t"]));
    assert_eq!(integrality_probe(&Scalar::param(&k, 0)), Integrality::NotInteger);
}

#[test]
fn cone_examples() {
    let s = |v: &[i64]| v.iter().map(|&x| Scalar::int(x)).collect::<Vec<_>>();
    let e = vec![s(&[1, 0]), s(&[0, 1])];
    let q = |n: i64| Q::from_integer(n.into());
    assert_eq!(cone_membership(&e, &s(&[2, 3])).unwrap(), Some(vec![q(2), q(3)]));
    assert_eq!(cone_membership(&e, &s(&[-1, 0])).unwrap(), None);
    let pi = vec![s(&[0, 1, 1]), s(&[1, 0, 1]), s(&[1, 1, 0])];
    assert_eq!(cone_membership(&pi, &s(&[2, 2, 2])).unwrap(), Some(vec![q(1), q(1), q(1)]));
    let k = Arc::new(Field::with_params(&["t"]));
    assert!(cone_membership(&[vec![Scalar::param(&k, 0)]], &[Scalar::one()]).is_err());
}

#[test]
fn smith_examples() {
    let id = smith_normal_form(&IntMatrix::identity(2));
    assert_eq!(id.diagonal(), vec![1, 1]);
    let m = smith_normal_form(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 0]]));
    assert_eq!(m.diagonal(), vec![2, 0]);
}
