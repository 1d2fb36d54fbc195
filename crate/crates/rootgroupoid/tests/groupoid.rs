mod common;

use std::collections::{BTreeSet, HashSet};

use common::{datum, graph, random_reflexions, vertex_invariants, walk_families};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rootgroupoid::cartan::CartanDatum;
use rootgroupoid::groupoid::{explore, transport_namesake, walk, Mode, Vertex};
use rootgroupoid::roots::{finite_root_system, principal_data, weyl_generate};

#[test]
fn random_reflexions_are_involutive() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, restart) in walk_families() {
        let n = random_reflexions(&datum(name), 200, restart, &mut rng).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(n > 0, "{name}");
    }
}

#[test]
fn explored_graphs_are_well_formed() {
    for (name, mode, bound) in [
        ("A(2|1)", Mode::Skeleton, 1000),
        ("D(2|1;a)", Mode::Skeleton, 100),
        ("Q(1,1,2)", Mode::Skeleton, 200),
        ("C(3)^(1)", Mode::Spine, 40),
        ("InfinitePiS(t)", Mode::Spine, 24),
    ] {
        let g = graph(name, mode, bound);
        let base = g.base().datum.clone();
        for (u, row) in g.adj.iter().enumerate() {
            for (x, t) in row.iter().enumerate() {
                if let Some(w) = *t {
                    assert_ne!(u, w, "{name}: loop");
                    assert_eq!(g.adj[w][x], Some(u), "{name}: edge not symmetric");
                    if mode == Mode::Spine {
                        assert!(g.vertices[u].datum.is_isotropic(x), "{name}: non-isotropic spine edge");
                    }
                }
            }
        }
        for u in &g.vertices {
            vertex_invariants(&base, u).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        let keys: HashSet<_> = g.vertices.iter().map(|u| u.key().clone()).collect();
        assert_eq!(keys.len(), g.len(), "{name}: duplicate vertices");
    }
}

/// Roots with nonnegative coordinates in the basis of `u`.
fn positive_for(u: &Vertex, delta: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let bc = rootgroupoid::roots::BasisCoords::new(&u.b).unwrap();
    delta
        .iter()
        .filter(|r| bc.signed_integral(r).expect("root basis").iter().all(|&c| c >= 0))
        .cloned()
        .collect()
}

#[test]
fn positive_system_changes_by_one_root_along_edges() {
    for name in ["A(1|0)", "A(2|1)", "B(1|1)", "B(1|2)", "C(3)", "D(2|1)", "G(3)"] {
        let spine = graph(name, Mode::Spine, 10_000);
        let pd = principal_data(&spine).unwrap();
        let delta = finite_root_system(&pd, &spine, 40).unwrap();
        let skel = graph(name, Mode::Skeleton, 100_000);
        assert!(skel.status.is_complete());
        let pos: Vec<BTreeSet<Vec<i64>>> = skel.vertices.iter().map(|u| positive_for(u, &delta)).collect();
        for (v, x, u) in skel.edges() {
            let alpha = &skel.vertices[v].b[x];
            let changed: BTreeSet<Vec<i64>> = pos[v].symmetric_difference(&pos[u]).cloned().collect();
            let want: BTreeSet<Vec<i64>> = [1i64, 2, -1, -2]
                .iter()
                .map(|k| alpha.iter().map(|c| k * c).collect::<Vec<_>>())
                .filter(|r| delta.contains(r))
                .collect();
            assert_eq!(changed, want, "{name}: edge {v} -r_{x}- {u}");
        }
    }
}

#[test]
fn spine_vertices_see_pi_positive() {
    for name in ["A(2|1)", "D(2|1)", "Q(2,2,2)", "C(3)^(1)", "A(1|1)^(1)", "G3_1"] {
        let spine = graph(name, Mode::Spine, 60);
        let pd = principal_data(&spine).unwrap();
        for u in &spine.vertices {
            let bc = rootgroupoid::roots::BasisCoords::new(&u.b).unwrap();
            for a in &pd.pi {
                let c = bc.signed_integral(a).unwrap_or_else(|| panic!("{name}: π element not integral"));
                assert!(c.iter().all(|&x| x >= 0), "{name}: π not positive at a spine vertex");
            }
        }
    }
}

#[test]
fn skeleton_is_weyl_orbit_of_spine() {
    for name in ["A(1|0)", "A(2|1)", "B(1|1)", "B(2|1)", "C(3)", "D(2|1)", "D(2|2)"] {
        let spine = graph(name, Mode::Spine, 10_000);
        let skel = graph(name, Mode::Skeleton, 100_000);
        assert!(spine.status.is_complete() && skel.status.is_complete());
        let pd = principal_data(&spine).unwrap();
        let w = weyl_generate(&pd, 100);
        let mut orbit = HashSet::new();
        for e in &w {
            for u in &spine.vertices {
                let key: Vec<Vec<i64>> = u.b.iter().map(|r| e.matrix.apply(r)).collect();
                assert!(skel.find(&key).is_some(), "{name}: wΣ_u is not a skeleton vertex");
                orbit.insert(key);
            }
        }
        assert_eq!(orbit.len(), skel.len(), "{name}");
        assert_eq!(w.len() * spine.len(), skel.len(), "{name}: W acts freely");
    }
}

#[test]
fn reflexion_examples() {
    // C(2) at v_{-1}: Σ' = {(-1,0),(1,1)}, A' = [[0,-2],[-2,0]], both odd
    let c2 = CartanDatum::rational(&[&["0", "2"], &["2", "-4"]], &[1, 0]).unwrap();
    let u = Vertex::base(c2).reflect(0).unwrap();
    assert_eq!(u.b, vec![vec![-1, 0], vec![1, 1]]);
    assert_eq!(u.datum, CartanDatum::rational(&[&["0", "-2"], &["-2", "0"]], &[1, 1]).unwrap());
    // Q(m,n,t): one odd root -β_1 and two even roots after r_{x_1}
    for name in ["Q(1,1,2)", "Q(2,2,2)", "Q(1,2,3)"] {
        let u = Vertex::base(datum(name)).reflect(0).unwrap();
        assert_eq!(u.b[0], vec![-1, 0, 0]);
        assert_eq!(u.datum.parity(), &[1, 0, 0]);
    }
}

#[test]
fn exploration_examples() {
    for name in ["Q(1,1,2)", "Q(2,2,2)"] {
        let g = graph(name, Mode::Spine, 100);
        assert!(g.status.is_complete());
        assert_eq!(g.len(), 4);
    }
    let c3 = graph("C(3)", Mode::Spine, 100);
    let (_, marks) = c3.adjacency().as_line().unwrap();
    let marks: Vec<usize> = marks.iter().map(|m| m + 1).collect();
    assert!(marks == [1, 2, 3, 1] || marks == [1, 3, 2, 1], "{marks:?}");
    assert_eq!(graph("B(1|1)", Mode::Skeleton, 1000).len(), 8);
    assert_eq!(graph("B(1|1)", Mode::Spine, 1000).len(), 2);
    let t = graph("C(3)^(1)", Mode::Spine, 10);
    assert!(!t.status.is_complete());
    assert_eq!(t.len(), 10);
}

#[test]
fn namesake_transport() {
    let v = Vertex::base(datum("A(1|1)"));
    assert_eq!(transport_namesake(&[], &v, &v).unwrap(), v);
    let spine = explore(v.clone(), Mode::Spine, 100);
    let u = spine.vertices.iter().position(|w| w.datum.d_equivalence(&v.datum).is_some() && w != &v).unwrap();
    let path = spine.path_marks(0, u).unwrap();
    let end = transport_namesake(&path, &v, &spine.vertices[u]).unwrap();
    assert_eq!(end.datum, v.datum);
    assert!(transport_namesake(&path, &v, &Vertex::base(datum("A(2|1)"))).is_err());

    // C(n+1)^(1): the 4n-periodic path from v_{4n} reaches v_{8n}
    for n in 2..=3usize {
        let name = format!("C({})^(1)", n + 1);
        let spine = graph(&name, Mode::Spine, 24 * n);
        let (order, _) = spine.adjacency().as_line().unwrap();
        let i0 = order.iter().position(|&x| x == 0).unwrap();
        let forward = if i0 + 8 * n < order.len() { 1i64 } else { -1 };
        let at = |k: usize| order[(i0 as i64 + forward * k as i64) as usize];
        let path = spine.path_marks(0, at(4 * n)).unwrap();
        assert_eq!(path.len(), 4 * n);
        let end = transport_namesake(&path, spine.base(), &spine.vertices[at(4 * n)]).unwrap();
        assert_eq!(end, spine.vertices[at(8 * n)], "{name}");
        assert_eq!(walk(&path, spine.base()).unwrap(), spine.vertices[at(4 * n)]);
    }
}
