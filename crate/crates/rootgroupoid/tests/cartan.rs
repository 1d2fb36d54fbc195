#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;
use rootgroupoid::cartan::{CartanDatum, Gcm, GcmType};
use rootgroupoid::exact::{IntMatrix, Scalar};
use rootgroupoid::families::{construct, q_twisted, FamilySpec};
use rootgroupoid::groupoid::{explore, Mode, Vertex};

fn family(name: &str) -> CartanDatum {
    construct(&name.parse::<FamilySpec>().unwrap()).unwrap()
}

fn datum(rows: &[Vec<i64>], p: &[u8]) -> CartanDatum {
    CartanDatum::from_ints(rows, p)
}

fn diag(d: &[i64]) -> Vec<Scalar> {
    d.iter().map(|&x| Scalar::int(x)).collect()
}

fn arb_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, n), n)
}

fn arb_nonzero(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], n)
}

/// Symmetric-zero-pattern GCM of size `n`.
fn arb_gcm(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec((0i64..=3, 0i64..=3), n * n).prop_map(move |pairs| {
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            m[i][i] = 2;
            for j in i + 1..n {
                let (a, b) = pairs[i * n + j];
                if a != 0 && b != 0 {
                    m[i][j] = -a;
                    m[j][i] = -b;
                }
            }
        }
        m
    })
}

fn arb_symmetric(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    arb_gcm(n).prop_map(move |mut m| {
        for i in 0..n {
            for j in 0..i {
                m[i][j] = m[j][i];
            }
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_equivalence_is_an_equivalence(a in arb_matrix(3), p in prop::collection::vec(0u8..=1, 3), d1 in arb_nonzero(3), d2 in arb_nonzero(3)) {
        let x = datum(&a, &p);
        let y = x.scaled(&diag(&d1));
        let z = y.scaled(&diag(&d2));
        prop_assert!(x.d_equivalence(&x).is_some());
        let dxy = x.d_equivalence(&y);
        let dyx = y.d_equivalence(&x);
        prop_assert_eq!(dxy.is_some(), dyx.is_some());
        prop_assert!(dyx.is_some());
        prop_assert!(x.d_equivalence(&z).is_some());
        // the returned D satisfies A1 = D·A2
        let d = y.d_equivalence(&x).unwrap();
        prop_assert_eq!(x.scaled(&d), y.clone());
        // parity must match
        let flipped: Vec<u8> = p.iter().map(|b| 1 - b).collect();
        prop_assert!(x.d_equivalence(&datum(&a, &flipped)).is_none());
    }

    #[test]
    fn symmetrize_gives_a_symmetric_matrix(s in arb_symmetric(4), d in arb_nonzero(4)) {
        let x = datum(&s, &[0; 4]).scaled(&diag(&d));
        match x.symmetrize() {
            Some((dd, y)) => {
                prop_assert!(y.is_symmetric());
                prop_assert_eq!(x.scaled(&dd), y);
            }
            None => prop_assert!(false, "a diagonal rescaling of a symmetric matrix is symmetrizable"),
        }
    }

    #[test]
    fn gcm_type_is_permutation_invariant(m in arb_gcm(4), perm in Just((0..4usize).collect::<Vec<_>>()).prop_shuffle()) {
        let g = Gcm::new(IntMatrix::from_rows(&m)).unwrap();
        let pm: Vec<Vec<i64>> = (0..4).map(|i| (0..4).map(|j| m[perm[i]][perm[j]]).collect()).collect();
        let h = Gcm::new(IntMatrix::from_rows(&pm)).unwrap();
        prop_assert_eq!(g.gcm_type(false).unwrap(), h.gcm_type(false).unwrap());
        let mut bg: Vec<GcmType> = g.block_types().into_iter().map(|(_, t)| t).collect();
        let mut bh: Vec<GcmType> = h.block_types().into_iter().map(|(_, t)| t).collect();
        bg.sort();
        bh.sort();
        prop_assert_eq!(bg, bh);
    }

    #[test]
    fn json_round_trip(a in arb_matrix(3), p in prop::collection::vec(0u8..=1, 3)) {
        let x = datum(&a, &p);
        let s = x.to_json();
        let y = CartanDatum::from_json(&s).unwrap();
        prop_assert_eq!(&y, &x);
        prop_assert_eq!(y.to_json(), s);
    }
}

#[test]
fn reflectability_examples() {
    let c2 = CartanDatum::rational(&[&["0", "2"], &["2", "-4"]], &[1, 0]).unwrap();
    assert!(c2.reflectable(0));
    assert!(c2.reflectable(1));
    let ex = family("InfinitePiS(t)");
    assert!(!ex.reflectable(3));
    assert!((0..3).all(|x| ex.reflectable(x)));
}

#[test]
fn flag_examples() {
    let one = datum(&[vec![2]], &[0]).flags();
    assert!(one.weakly_symmetrizable && one.fully_reflectable && one.indecomposable && one.symmetrizable);
    let q = family("Q(1,1,2)").flags();
    assert!(q.fully_reflectable && q.indecomposable);
    let ex = family("InfinitePiS(t)").flags();
    assert!(!ex.fully_reflectable && ex.weakly_symmetrizable);
}

#[test]
fn d_equivalence_examples() {
    let g1 = family("G3_1");
    let g2 = family("G3_2");
    assert_eq!(g1.d_equivalence(&g1), Some(diag(&[1, 1, 1, 1])));
    assert_eq!(g2.d_equivalence(&g1), Some(diag(&[2, 2, 2, 2])));
    // A(1|1): the other D-equivalent spine vertex has A_u = -A_v
    let spine = explore(Vertex::base(family("A(1|1)")), Mode::Spine, 100);
    let v = &spine.base().datum;
    let found: Vec<_> = spine.vertices[1..].iter().filter_map(|u| u.datum.d_equivalence(v)).collect();
    assert_eq!(found, vec![diag(&[-1, -1, -1])]);
}

#[test]
fn symmetrize_examples() {
    let a = datum(&[vec![2, -1], vec![-2, 2]], &[0, 0]);
    let (d, s) = a.symmetrize().unwrap();
    assert_eq!(d, vec![Scalar::one(), Scalar::ratio(1, 2)]);
    assert_eq!(s, CartanDatum::rational(&[&["2", "-1"], &["-1", "1"]], &[0, 0]).unwrap());
    let sym = datum(&[vec![2, -1], vec![-1, 2]], &[0, 0]);
    assert_eq!(sym.symmetrize(), Some((diag(&[1, 1]), sym.clone())));
    for n in 3..=6 {
        assert!(q_twisted(n).symmetrize().is_none(), "q_{n}^(2)");
    }
}

#[test]
fn gcm_type_examples() {
    let t = |rows: &[Vec<i64>]| Gcm::new(IntMatrix::from_rows(rows)).unwrap().gcm_type(true).unwrap();
    assert_eq!(t(&[vec![2, -1], vec![-1, 2]]), GcmType::Fin);
    assert_eq!(t(&[vec![2, -2], vec![-2, 2]]), GcmType::Aff);
    assert_eq!(t(&[vec![2, -1, -1], vec![-1, 2, -1], vec![-2, -2, 2]]), GcmType::Ind);
    assert!(Gcm::new(IntMatrix::from_rows(&[vec![2, 1], vec![-1, 2]])).is_err());
    assert!(Gcm::new(IntMatrix::from_rows(&[vec![2, 0], vec![-1, 2]])).is_err());
}
