//! Reflexions and bounded exploration of the skeleton and spine.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::CartanDatum;
use crate::exact::{mat_mul, transpose, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupoidError {
    #[error("x_{0} is not reflectable at this vertex")]
    NotReflectable(usize),
    #[error("start vertex is not D-equivalent to the path origin")]
    NotDEquivalent,
    #[error("path breaks at mark x_{0}")]
    PathBreaks(usize),
    #[error("integer overflow in root coordinates")]
    Overflow,
}

/// A vertex of the root groupoid, in coordinates relative to a base vertex.
///
/// Row `x` of `b` holds `b_u(x)` in the basis `Σ_v`; row `x` of `a` holds
/// `a_u(x)` in the basis `{a_v(y)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub b: Vec<Vec<i64>>,
    pub a: Vec<Vec<Scalar>>,
    pub datum: CartanDatum,
}

impl Vertex {
    pub fn base(datum: CartanDatum) -> Self {
        let n = datum.size();
        let b = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        let a = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
            .collect();
        Vertex { b, a, datum }
    }

    pub fn size(&self) -> usize {
        self.b.len()
    }

    pub fn key(&self) -> &Vec<Vec<i64>> {
        &self.b
    }

    /// `C_a · A_v · C_bᵀ`, which must reproduce `A_u`.
    pub fn recomputed_matrix(&self, base: &CartanDatum) -> Vec<Vec<Scalar>> {
        let cb: Vec<Vec<Scalar>> = self.b.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect();
        mat_mul(&mat_mul(&self.a, base.matrix()), &transpose(&cb))
    }

    /// Parity of `b_u(x)` computed from base parities.
    pub fn coordinate_parity(&self, base_parity: &[u8], x: usize) -> u8 {
        root_parity(base_parity, &self.b[x])
    }

    pub fn reflect(&self, x: usize) -> Result<Vertex, GroupoidError> {
        let d = &self.datum;
        if !d.reflectable(x) {
            return Err(GroupoidError::NotReflectable(x));
        }
        let n = self.size();
        let axx = d.entry(x, x).clone();
        // a'(y) = s_y a(y) + mu_y a(x),  b'(y) = s_y b(y) + kappa_y b(x)
        let mut s = vec![1i64; n];
        let mut mu = vec![Scalar::zero(); n];
        let mut kappa = vec![0i64; n];
        let mut p = d.parity().to_vec();
        s[x] = -1;
        if !axx.is_zero() {
            for y in 0..n {
                if y == x {
                    continue;
                }
                mu[y] = -(&(Scalar::int(2) * d.entry(y, x)) / &axx);
                let k = &(Scalar::int(2) * d.entry(x, y)) / &axx;
                kappa[y] = -k.as_i64().expect("reflectability makes this an integer");
            }
        } else {
            for y in 0..n {
                if y == x || d.entry(x, y).is_zero() {
                    continue;
                }
                mu[y] = d.entry(y, x) / d.entry(x, y);
                kappa[y] = 1;
                p[y] = 1 - p[y];
            }
        }
        let mut b = self.b.clone();
        let mut a = self.a.clone();
        for y in 0..n {
            for j in 0..n {
                let v = s[y]
                    .checked_mul(self.b[y][j])
                    .and_then(|t| kappa[y].checked_mul(self.b[x][j]).and_then(|u| t.checked_add(u)))
                    .ok_or(GroupoidError::Overflow)?;
                b[y][j] = v;
                let sa = if s[y] == 1 { self.a[y][j].clone() } else { -&self.a[y][j] };
                a[y][j] = if mu[y].is_zero() { sa } else { sa + &mu[y] * &self.a[x][j] };
            }
        }
        let m = d.matrix();
        let am: Vec<Vec<Scalar>> = (0..n)
            .map(|y| {
                (0..n)
                    .map(|z| {
                        let mut acc = if s[y] * s[z] == 1 { m[y][z].clone() } else { -&m[y][z] };
                        if kappa[z] != 0 {
                            acc = acc + Scalar::int(s[y] * kappa[z]) * &m[y][x];
                        }
                        if !mu[y].is_zero() {
                            acc = acc + &mu[y] * &(Scalar::int(s[z]) * &m[x][z]);
                            if kappa[z] != 0 {
                                acc = acc + &mu[y] * &(Scalar::int(kappa[z]) * &axx);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Ok(Vertex { b, a, datum: d.with_matrix(am, p) })
    }

    /// Ordered simple roots as coordinate rows.
    pub fn sigma(&self) -> &[Vec<i64>] {
        &self.b
    }
}

pub fn root_parity(base_parity: &[u8], coords: &[i64]) -> u8 {
    let s: i64 = coords.iter().zip(base_parity).filter(|(_, &p)| p == 1).map(|(c, _)| c.rem_euclid(2)).sum();
    (s % 2) as u8
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Spine,
    Skeleton,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Complete,
    Truncated(usize),
}

impl Status {
    pub fn is_complete(&self) -> bool {
        matches!(self, Status::Complete)
    }
}

/// Graph of explored vertices with edges marked by reflexion index.
#[derive(Clone, Debug)]
pub struct MarkedGraph {
    pub mode: Mode,
    pub vertices: Vec<Vertex>,
    /// `adj[u][x]` is the vertex reached from `u` by `r_x`, when explored.
    pub adj: Vec<Vec<Option<usize>>>,
    pub depth: Vec<usize>,
    pub status: Status,
    /// Depths strictly below this value were expanded without loss.
    pub full_depth: usize,
    index: HashMap<Vec<Vec<i64>>, usize>,
}

impl MarkedGraph {
    pub fn base(&self) -> &Vertex {
        &self.vertices[0]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn find(&self, key: &[Vec<i64>]) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Undirected edges `(u, x, u')` with `u < u'`.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = vec![];
        for (u, row) in self.adj.iter().enumerate() {
            for (x, t) in row.iter().enumerate() {
                if let Some(w) = *t {
                    if u < w {
                        out.push((u, x, w));
                    }
                }
            }
        }
        out
    }

    pub fn adjacency(&self) -> MarkedAdjacency {
        MarkedAdjacency {
            adj: self
                .adj
                .iter()
                .map(|row| row.iter().enumerate().filter_map(|(x, t)| t.map(|w| (x, w))).collect())
                .collect(),
        }
    }

    /// Marks of a shortest path from `from` to `to`.
    pub fn path_marks(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.len()];
        let mut seen = vec![false; self.len()];
        seen[from] = true;
        let mut q = VecDeque::from([from]);
        while let Some(u) = q.pop_front() {
            if u == to {
                break;
            }
            for (x, t) in self.adj[u].iter().enumerate() {
                if let Some(w) = *t {
                    if !seen[w] {
                        seen[w] = true;
                        prev[w] = Some((u, x));
                        q.push_back(w);
                    }
                }
            }
        }
        if !seen[to] {
            return None;
        }
        let mut marks = vec![];
        let mut cur = to;
        while let Some((p, x)) = prev[cur] {
            marks.push(x);
            cur = p;
        }
        marks.reverse();
        Some(marks)
    }

    pub fn to_dot(&self, name: &str) -> String {
        let base_p = self.base().datum.parity().to_vec();
        let mut s = String::new();
        let _ = writeln!(s, "graph {name} {{");
        for (i, v) in self.vertices.iter().enumerate() {
            let sigma: Vec<String> = v
                .b
                .iter()
                .map(|r| format!("({})", r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")))
                .collect();
            let par: String = (0..v.size()).map(|x| char::from(b'0' + v.coordinate_parity(&base_p, x))).collect();
            let _ = writeln!(s, "  {i} [label=\"{} p={}\"];", sigma.join(" "), par);
        }
        for (u, x, w) in self.edges() {
            let iso = self.vertices[u].datum.is_isotropic(x);
            let style = if self.mode == Mode::Skeleton && iso { ", style=bold" } else { "" };
            let _ = writeln!(s, "  {u} -- {w} [label=\"r_{}\"{style}];", x + 1);
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        use serde_json::json;
        let (status, bound) = match self.status {
            Status::Complete => ("complete", serde_json::Value::Null),
            Status::Truncated(b) => ("truncated", json!(b)),
        };
        let vertices: Vec<serde_json::Value> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| {
                json!({
                    "index": i,
                    "depth": self.depth[i],
                    "sigma": v.b,
                    "parity": v.datum.parity(),
                    "cartan": v.datum.matrix().iter().map(|r| r.iter().map(|s| s.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "a_coords": v.a.iter().map(|r| r.iter().map(|s| s.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                })
            })
            .collect();
        let edges: Vec<serde_json::Value> =
            self.edges().into_iter().map(|(u, x, w)| json!({"from": u, "mark": x, "to": w})).collect();
        json!({
            "mode": self.mode,
            "status": status,
            "bound": bound,
            "vertex_count": self.len(),
            "vertices": vertices,
            "edges": edges,
        })
    }
}

/// Explores from `base` by BFS, keeping at most `bound` vertices.
pub fn explore(base: Vertex, mode: Mode, bound: usize) -> MarkedGraph {
    assert!(bound >= 1, "bound must be positive");
    let n = base.size();
    let mut g = MarkedGraph {
        mode,
        vertices: vec![],
        adj: vec![],
        depth: vec![],
        status: Status::Complete,
        full_depth: usize::MAX,
        index: HashMap::new(),
    };
    g.index.insert(base.b.clone(), 0);
    g.vertices.push(base);
    g.adj.push(vec![None; n]);
    g.depth.push(0);
    let mut head = 0;
    while head < g.vertices.len() {
        let u = head;
        head += 1;
        for x in 0..n {
            let allowed = match mode {
                Mode::Spine => g.vertices[u].datum.is_isotropic(x),
                Mode::Skeleton => g.vertices[u].datum.reflectable(x),
            };
            if !allowed {
                continue;
            }
            let w = match g.vertices[u].reflect(x) {
                Ok(w) => w,
                Err(_) => continue,
            };
            let target = match g.index.get(&w.b) {
                Some(&t) => {
                    let old = &g.vertices[t];
                    assert!(
                        old.a == w.a && old.datum == w.datum,
                        "rediscovered vertex disagrees on coroots or Cartan datum"
                    );
                    t
                }
                None => {
                    if g.vertices.len() >= bound {
                        g.status = Status::Truncated(bound);
                        g.full_depth = g.full_depth.min(g.depth[u] + 1);
                        continue;
                    }
                    let t = g.vertices.len();
                    g.index.insert(w.b.clone(), t);
                    g.vertices.push(w);
                    g.adj.push(vec![None; n]);
                    g.depth.push(g.depth[u] + 1);
                    t
                }
            };
            g.adj[u][x] = Some(target);
        }
    }
    if g.status.is_complete() {
        g.full_depth = g.depth.iter().max().copied().unwrap_or(0) + 1;
    }
    g
}

/// Walks `path` from `start`, which must be D-equivalent to `origin`, and
/// checks the endpoint against the walk from `origin`: `A^{u'} = D·A^{u}`.
pub fn transport_namesake(path: &[usize], origin: &Vertex, start: &Vertex) -> Result<Vertex, GroupoidError> {
    let d = start.datum.d_equivalence(&origin.datum).ok_or(GroupoidError::NotDEquivalent)?;
    let mut cur = start.clone();
    let mut reference = origin.clone();
    for &x in path {
        reference = reference.reflect(x).map_err(|_| GroupoidError::PathBreaks(x))?;
        cur = cur.reflect(x).map_err(|_| GroupoidError::PathBreaks(x))?;
    }
    assert_eq!(cur.datum, reference.datum.scaled(&d), "namesake endpoint is not D-equivalent with the same D");
    Ok(cur)
}

/// Walks `path` from `start` without a reference walk.
pub fn walk(path: &[usize], start: &Vertex) -> Result<Vertex, GroupoidError> {
    let mut cur = start.clone();
    for &x in path {
        cur = cur.reflect(x).map_err(|_| GroupoidError::PathBreaks(x))?;
    }
    Ok(cur)
}

/// Undirected graph whose edges carry marks, distinct at each vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedAdjacency {
    pub adj: Vec<Vec<(usize, usize)>>,
}

impl MarkedAdjacency {
    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.len()).sum::<usize>() / 2
    }

    fn neighbour(&self, u: usize, mark: usize) -> Option<usize> {
        self.adj[u].iter().find(|(m, _)| *m == mark).map(|&(_, w)| w)
    }

    /// A mark-preserving isomorphism onto `other`, if one exists. Both graphs
    /// must be connected; an isomorphism is fixed by the image of vertex 0.
    pub fn isomorphism(&self, other: &MarkedAdjacency) -> Option<Vec<usize>> {
        if self.len() != other.len() || self.edge_count() != other.edge_count() || self.is_empty() {
            return None;
        }
        'cand: for c in 0..other.len() {
            let mut map = vec![usize::MAX; self.len()];
            let mut inv = vec![usize::MAX; other.len()];
            map[0] = c;
            inv[c] = 0;
            let mut q = VecDeque::from([0]);
            while let Some(u) = q.pop_front() {
                if self.adj[u].len() != other.adj[map[u]].len() {
                    continue 'cand;
                }
                for &(m, w) in &self.adj[u] {
                    let tw = match other.neighbour(map[u], m) {
                        Some(t) => t,
                        None => continue 'cand,
                    };
                    if map[w] == usize::MAX {
                        if inv[tw] != usize::MAX {
                            continue 'cand;
                        }
                        map[w] = tw;
                        inv[tw] = w;
                        q.push_back(w);
                    } else if map[w] != tw {
                        continue 'cand;
                    }
                }
            }
            if map.iter().all(|&m| m != usize::MAX) {
                return Some(map);
            }
        }
        None
    }

    /// If the graph is a simple path, its vertices in order from one end
    /// together with the marks between consecutive vertices.
    pub fn as_line(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let n = self.len();
        if n == 1 {
            return Some((vec![0], vec![]));
        }
        if self.edge_count() != n - 1 || self.adj.iter().any(|r| r.len() > 2 || r.is_empty()) {
            return None;
        }
        let start = (0..n).find(|&u| self.adj[u].len() == 1)?;
        let mut order = vec![start];
        let mut marks = vec![];
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            let next = self.adj[cur].iter().find(|&&(_, w)| w != prev);
            match next {
                None => break,
                Some(&(m, w)) => {
                    marks.push(m);
                    order.push(w);
                    prev = cur;
                    cur = w;
                }
            }
            if order.len() > n {
                return None;
            }
        }
        if order.len() == n {
            Some((order, marks))
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2_minus() -> CartanDatum {
        CartanDatum::rational(&[&["0", "2"], &["2", "-4"]], &[1, 0]).unwrap()
    }

    #[test]
    fn c2_isotropic_reflexion() {
        let v = Vertex::base(c2_minus());
        let u = v.reflect(0).unwrap();
        assert_eq!(u.b, vec![vec![-1, 0], vec![1, 1]]);
        assert_eq!(u.datum, CartanDatum::rational(&[&["0", "-2"], &["-2", "0"]], &[1, 1]).unwrap());
        assert_eq!(u.recomputed_matrix(&v.datum), u.datum.matrix());
        assert_eq!(u.reflect(0).unwrap(), v);
    }

    #[test]
    fn c2_spine_is_path_of_three() {
        let g = explore(Vertex::base(c2_minus()), Mode::Spine, 100);
        assert!(g.status.is_complete());
        let (_, marks) = g.adjacency().as_line().unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(marks.len(), 2);
    }

    #[test]
    fn truncation_is_reported() {
        // affine A_1: infinite skeleton
        let d = CartanDatum::rational(&[&["2", "-2"], &["-2", "2"]], &[0, 0]).unwrap();
        let g = explore(Vertex::base(d), Mode::Skeleton, 7);
        assert_eq!(g.status, Status::Truncated(7));
        assert_eq!(g.len(), 7);
        for (u, x, w) in g.edges() {
            assert_eq!(g.adj[w][x], Some(u));
        }
    }

    #[test]
    fn isomorphism_of_relabelled_path() {
        let a = MarkedAdjacency { adj: vec![vec![(0, 1)], vec![(0, 0), (1, 2)], vec![(1, 1)]] };
        let b = MarkedAdjacency { adj: vec![vec![(1, 2)], vec![(0, 2)], vec![(1, 0), (0, 1)]] };
        assert!(a.isomorphism(&b).is_some());
        let c = MarkedAdjacency { adj: vec![vec![(1, 1)], vec![(1, 0), (0, 2)], vec![(0, 1)]] };
        assert!(a.isomorphism(&c).is_some());
        let d = MarkedAdjacency { adj: vec![vec![(0, 1)], vec![(0, 0), (0, 2)], vec![(0, 1)]] };
        assert!(a.isomorphism(&d).is_none());
    }
}
