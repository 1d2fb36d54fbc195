#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rootgroupoid::cartan::CartanDatum;
use rootgroupoid::exact::{rank, Scalar};
use rootgroupoid::families::{construct, FamilySpec};
use rootgroupoid::groupoid::{explore, root_parity, MarkedGraph, Mode, Vertex};

pub fn spec(name: &str) -> FamilySpec {
    name.parse().unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn datum(name: &str) -> CartanDatum {
    construct(&spec(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn graph(name: &str, mode: Mode, bound: usize) -> MarkedGraph {
    explore(Vertex::base(datum(name)), mode, bound)
}

/// Checks the vertex invariants of `u` relative to `base`.
pub fn vertex_invariants(base: &CartanDatum, u: &Vertex) -> Result<(), String> {
    if u.recomputed_matrix(base) != u.datum.matrix() {
        return Err("A_u differs from C_a A_v C_b^T".into());
    }
    for x in 0..u.size() {
        if root_parity(base.parity(), &u.b[x]) != u.datum.parity()[x] {
            return Err(format!("parity of b_u(x_{x}) is not the homomorphic extension"));
        }
    }
    let m: Vec<Vec<Scalar>> = u.b.iter().map(|r| r.iter().map(|&c| Scalar::int(c)).collect()).collect();
    if rank(&m) != u.size() {
        return Err("b-coordinates are dependent".into());
    }
    Ok(())
}

/// `steps` random reflexions, restarting from the base every `restart`
/// steps; every application is undone and compared exactly.
pub fn random_reflexions(base: &CartanDatum, steps: usize, restart: usize, rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let start = Vertex::base(base.clone());
    let mut cur = start.clone();
    let mut applied = 0;
    for step in 0..steps {
        if step % restart == 0 {
            cur = start.clone();
        }
        let xs: Vec<usize> = (0..cur.size()).filter(|&x| cur.datum.reflectable(x)).collect();
        let x = match xs.choose(rng) {
            Some(&x) => x,
            None => return Ok(applied),
        };
        let next = cur.reflect(x).map_err(|e| e.to_string())?;
        let back = next.reflect(x).map_err(|e| e.to_string())?;
        if back != cur {
            return Err(format!("r_{x} is not an involution"));
        }
        vertex_invariants(base, &next)?;
        applied += 1;
        if rng.gen_bool(0.9) {
            cur = next;
        }
    }
    Ok(applied)
}

/// Built-in families exercised by the randomized checks, with a restart
/// period small enough for the parametric ones.
pub fn walk_families() -> Vec<(&'static str, usize)> {
    vec![
        ("A(1|0)", 40),
        ("A(2|1)", 40),
        ("A(2|2)", 40),
        ("B(1|1)", 40),
        ("B(2|1)", 40),
        ("C(3)", 40),
        ("D(2|1)", 40),
        ("D(2|1;a)", 12),
        ("D(2|1;3)", 40),
        ("G(3)", 40),
        ("F(4)", 40),
        ("A(1|0)^(1)", 40),
        ("A(1|1)^(1)", 40),
        ("C(3)^(1)", 40),
        ("G3_1", 40),
        ("G3_2", 40),
        ("q_4^(2)", 40),
        ("q_5^(2)", 40),
        ("Q(1,1,2)", 20),
        ("Q^-(1,2,3)", 20),
        ("S(1|2;b)", 8),
        ("InfinitePiS(t)", 8),
    ]
}

/// Imaginary test straight from an integer Cartan matrix: move `μ` down by
/// simple reflections while it stays in `Q^+`, then ask for nonpositive
/// pairings and connected support.
pub fn kac_imaginary(a: &[Vec<i64>], mu: &[i64]) -> bool {
    let n = a.len();
    let pair = |m: &[i64], i: usize| (0..n).map(|j| a[i][j] * m[j]).sum::<i64>();
    let mut m = mu.to_vec();
    loop {
        if m.iter().any(|&c| c < 0) {
            return false;
        }
        match (0..n).find(|&i| pair(&m, i) > 0) {
            Some(i) => m[i] -= pair(&m, i),
            None => break,
        }
    }
    let supp: Vec<usize> = (0..n).filter(|&i| m[i] != 0).collect();
    let mut reached = vec![supp[0]];
    let mut k = 0;
    while k < reached.len() {
        let x = reached[k];
        for &y in &supp {
            if !reached.contains(&y) && (a[x][y] != 0 || a[y][x] != 0) {
                reached.push(y);
            }
        }
        k += 1;
    }
    reached.len() == supp.len()
}

/// Coordinates in the base `Σ_{v_0} = (ε_1-ε_2, ε_2-δ_1, δ-ε_1+δ_1, β)` of the
/// infinite-π_S example.
pub mod infinite_pi_s {
    use std::collections::BTreeSet;

    fn comb(terms: &[(i64, [i64; 4])]) -> Vec<i64> {
        let mut v = vec![0i64; 4];
        for (k, t) in terms {
            for i in 0..4 {
                v[i] += k * t[i];
            }
        }
        v
    }

    const E12: [i64; 4] = [1, 0, 0, 0];
    const E2D1: [i64; 4] = [0, 1, 0, 0];
    const DELTA: [i64; 4] = [1, 1, 1, 0];
    const BETA: [i64; 4] = [0, 0, 0, 1];
    // -ε_1+δ_1 = x_3 - δ
    const D1E1: [i64; 4] = [-1, -1, 0, 0];
    // str = ε_1+ε_2-2δ_1 = (ε_1-ε_2) + 2(ε_2-δ_1)
    const STR: [i64; 4] = [1, 2, 0, 0];

    /// Unordered simple roots at `v_j` as displayed in closed form.
    pub fn sigma(j: i64) -> BTreeSet<Vec<i64>> {
        let i = j.div_euclid(2);
        let set = if j.rem_euclid(2) == 0 {
            vec![
                E12.to_vec(),
                comb(&[(i, DELTA), (1, E2D1)]),
                comb(&[(1 - i, DELTA), (1, D1E1)]),
                comb(&[(1, BETA), (i * (i - 1), DELTA), (i, STR)]),
            ]
        } else {
            vec![
                comb(&[(1, DELTA), (-1, E12)]),
                comb(&[(i, DELTA), (-1, D1E1)]),
                comb(&[(-i, DELTA), (-1, E2D1)]),
                x4(j),
            ]
        };
        set.into_iter().collect()
    }

    /// `b_{v_j}(x_4)`.
    pub fn x4(j: i64) -> Vec<i64> {
        let i = j.div_euclid(2);
        if j.rem_euclid(2) == 0 {
            comb(&[(1, BETA), (i * (i - 1), DELTA), (i, STR)])
        } else {
            comb(&[(1, BETA), (i * i, DELTA), (i, STR), (1, E2D1)])
        }
    }

    /// S-principal elements contributed by `v_j`.
    pub fn pi_s(j: i64) -> BTreeSet<Vec<i64>> {
        let mut out = BTreeSet::new();
        if j.rem_euclid(2) == 0 {
            out.insert(E12.to_vec());
            out.insert(x4(j));
        } else {
            out.insert(comb(&[(1, DELTA), (-1, E12)]));
            out.insert(x4(j).iter().map(|c| 2 * c).collect());
        }
        out
    }

    /// Index `j` of every vertex of an explored spine line, with `v_1 = r_{x_2} v_0`.
    pub fn indices(spine: &rootgroupoid::groupoid::MarkedGraph) -> Vec<i64> {
        let (order, _) = spine.adjacency().as_line().expect("spine is a line");
        let p0 = order.iter().position(|&u| u == 0).unwrap() as i64;
        let v1 = spine.adj[0][1].expect("x_2 is isotropic at v_0");
        let p1 = order.iter().position(|&u| u == v1).unwrap() as i64;
        let dir = p1 - p0;
        let mut j = vec![0i64; order.len()];
        for (p, &u) in order.iter().enumerate() {
            j[u] = (p as i64 - p0) * dir;
        }
        j
    }
}
