//! The groups `Sp^D(v)` and `Sk^D(v)`, the Dynkin homomorphism, invariant
//! bilinear forms and affine translations.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::cartan::{CartanDatum, Gcm};
use crate::exact::{kernel, rref, solve_any, solve_in_span, IntMatrix, Scalar, Q};
use crate::groupoid::{transport_namesake, GroupoidError, MarkedGraph};
use crate::roots::{primitive, reduce_by_pi, weyl_generate, PrincipalData};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("component is not symmetrizable")]
    NotSymmetrizable,
    #[error("bilinear forms need rational Cartan entries")]
    NotRational,
    #[error("component is not affine (corank {0})")]
    NotAffine(usize),
    #[error("not a Dynkin diagram automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("vector has {got} coordinates, expected {want}")]
    Dimension { got: usize, want: usize },
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

pub type QMatrix = Vec<Vec<Q>>;

fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn q_identity(n: usize) -> QMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

pub fn q_mul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, |r| r.len()));
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(Q::zero(), |acc, t| if a[i][t].is_zero() { acc } else { acc + &a[i][t] * &b[t][j] }))
                .collect()
        })
        .collect()
}

pub fn q_apply(a: &QMatrix, v: &[Q]) -> Vec<Q> {
    a.iter().map(|r| r.iter().zip(v).fold(Q::zero(), |acc, (x, y)| acc + x * y)).collect()
}

fn q_of_int(m: &IntMatrix) -> QMatrix {
    m.to_rows().iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect()
}

fn rational(s: &Scalar) -> Result<Q, SymmetryError> {
    s.as_rational().cloned().ok_or(SymmetryError::NotRational)
}

/// A `D`-equivalent vertex with its lattice map `σ_b`.
#[derive(Clone, Debug)]
pub struct DGroupElement {
    /// Index in the explored graph.
    pub vertex: usize,
    /// Columns are the coordinates of `b_u(x)`, so `σ_b(b_v(x)) = b_u(x)`.
    pub sigma_b: IntMatrix,
    /// `A^u = D·A^v`.
    pub diag_d: Vec<Scalar>,
    pub depth: usize,
}

impl DGroupElement {
    pub fn is_identity(&self) -> bool {
        self.sigma_b.is_identity()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "vertex": self.vertex,
            "sigma_b": self.sigma_b.to_rows(),
            "diag_D": self.diag_d.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Vertices of `graph` whose Cartan datum is `D`-equivalent to the base one.
pub fn d_equivalent_vertices(graph: &MarkedGraph) -> Vec<DGroupElement> {
    let base = &graph.base().datum;
    graph
        .vertices
        .iter()
        .enumerate()
        .filter_map(|(i, u)| {
            u.datum.d_equivalence(base).map(|d| DGroupElement {
                vertex: i,
                sigma_b: IntMatrix::from_cols(&u.b),
                diag_d: d,
                depth: graph.depth[i],
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum GroupOrder {
    Finite(usize),
    Infinite(&'static str),
}

/// Order of a group element, or `None` when no power up to `bound` is trivial.
pub fn element_order(m: &IntMatrix, bound: u32) -> Option<u32> {
    let mut p = m.clone();
    for k in 1..=bound {
        if p.is_identity() {
            return Some(k);
        }
        p = p.mul(m);
    }
    None
}

/// `g ≠ 1` with `(g^k - 1)^n = 0` for some `k ≤ bound` has infinite order:
/// a nontrivial unipotent integer matrix has no finite order.
pub fn certify_infinite_order(m: &IntMatrix, bound: u32) -> bool {
    let n = m.rows();
    let mut p = m.clone();
    for _ in 0..bound {
        if p.is_identity() {
            return false;
        }
        let mut nil = p.clone();
        for i in 0..n {
            nil[(i, i)] -= 1;
        }
        if nil.pow(n as u32).to_rows().iter().flatten().all(|&x| x == 0) {
            return true;
        }
        p = p.mul(m);
    }
    false
}

#[derive(Clone, Debug)]
pub struct SpDGroup {
    pub elements: Vec<DGroupElement>,
    /// Indices into `elements`.
    pub generators: Vec<usize>,
    pub order: GroupOrder,
    /// "trivial", "Z_2", "Z", "Z x| Z_2", … as far as the data decides.
    pub class: String,
    pub complete: bool,
    pub relations_checked: Vec<String>,
    /// Element products whose namesake transport was walked and compared
    /// with the matrix product.
    pub products_verified: usize,
}

impl SpDGroup {
    pub fn is_trivial(&self) -> bool {
        self.order == GroupOrder::Finite(1)
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &DGroupElement> {
        self.elements.iter().filter(|e| !e.is_identity())
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "order": match &self.order {
                GroupOrder::Finite(n) => json!(n),
                GroupOrder::Infinite(_) => json!("infinite"),
            },
            "class": self.class,
            "complete": self.complete,
            "elements_found": self.elements.len(),
            "generators": self.generators.iter().map(|&g| self.elements[g].to_json_value()).collect::<Vec<_>>(),
            "relations_checked": self.relations_checked,
        })
    }
}

/// `Sp^D(v)` from an explored spine. Products are computed by transporting
/// a namesake path and checked against the product of the `σ_b` matrices.
/// On a truncated spine the result lists generators found so far; an
/// element is called infinite when its first `power_bound` powers are
/// distinct.
pub fn sp_d_group(spine: &MarkedGraph, power_bound: u32) -> Result<SpDGroup, SymmetryError> {
    let elements = d_equivalent_vertices(spine);
    let base = spine.base();
    let by_matrix: HashMap<IntMatrix, usize> = elements.iter().enumerate().map(|(i, e)| (e.sigma_b.clone(), i)).collect();
    let mut verified = 0;
    let mut relations = vec![];
    // group law: u1 * u2 is the end of the path v -> u2 transported to u1
    for e1 in &elements {
        for e2 in &elements {
            let path = spine.path_marks(0, e2.vertex).expect("spine is connected");
            let end = transport_namesake(&path, base, &spine.vertices[e1.vertex])?;
            let prod = e1.sigma_b.mul(&e2.sigma_b);
            assert_eq!(IntMatrix::from_cols(&end.b), prod, "σ_b of a product is the matrix product");
            if spine.status.is_complete() {
                assert!(by_matrix.contains_key(&prod), "Sp^D closed under the product");
            }
            verified += 1;
        }
    }
    if verified > 0 {
        relations.push(format!("sigma_b(u1*u2) = sigma_b(u1) sigma_b(u2) on {verified} pairs"));
    }
    if spine.status.is_complete() {
        let n = elements.len();
        let orders: Vec<u32> = elements.iter().map(|e| element_order(&e.sigma_b, n as u32 + 1).unwrap()).collect();
        let abelian = elements
            .iter()
            .all(|a| elements.iter().all(|b| a.sigma_b.mul(&b.sigma_b) == b.sigma_b.mul(&a.sigma_b)));
        let class = match n {
            1 => "trivial".to_string(),
            _ if orders.iter().any(|&o| o as usize == n) => format!("Z_{n}"),
            _ if abelian => format!("abelian of order {n}"),
            _ => format!("order {n}"),
        };
        let generators = minimal_generators(&elements);
        relations.push(format!("closed under products; element orders {orders:?}"));
        return Ok(SpDGroup {
            elements,
            generators,
            order: GroupOrder::Finite(n),
            class,
            complete: true,
            relations_checked: relations,
            products_verified: verified,
        });
    }
    let generators = minimal_generators(&elements);
    let mut infinite = vec![];
    let mut finite = vec![];
    for &g in &generators {
        let m = &elements[g].sigma_b;
        match element_order(m, power_bound) {
            Some(k) => finite.push((g, k)),
            None => {
                let distinct: HashSet<IntMatrix> = (1..=power_bound).map(|k| m.pow(k)).collect();
                assert_eq!(distinct.len(), power_bound as usize);
                let certified = certify_infinite_order(m, power_bound);
                relations.push(format!(
                    "generator at vertex {}: powers 1..{power_bound} distinct{}",
                    elements[g].vertex,
                    if certified { ", unipotent power (infinite order certified)" } else { "" }
                ));
                infinite.push(g);
            }
        }
    }
    for (g, k) in &finite {
        relations.push(format!("generator at vertex {} has order {k}", elements[*g].vertex));
    }
    // two involutions with a product of infinite order generate Z ⋊ Z_2
    let dihedral = infinite.is_empty()
        && finite.len() == 2
        && finite.iter().all(|&(_, k)| k == 2)
        && element_order(&elements[finite[0].0].sigma_b.mul(&elements[finite[1].0].sigma_b), power_bound).is_none();
    let class = match (infinite.len(), finite.len()) {
        (0, 0) => "trivial".to_string(),
        _ if dihedral => {
            let t = elements[finite[0].0].sigma_b.mul(&elements[finite[1].0].sigma_b);
            let distinct: HashSet<IntMatrix> = (1..=power_bound).map(|k| t.pow(k)).collect();
            assert_eq!(distinct.len(), power_bound as usize);
            relations.push(format!(
                "product of the two involutions: powers 1..{power_bound} distinct{}",
                if certify_infinite_order(&t, power_bound) { ", unipotent power (infinite order certified)" } else { "" }
            ));
            "Z x| Z_2".to_string()
        }
        (0, _) => "finite so far".to_string(),
        (1, 0) => "Z".to_string(),
        (1, 1) if finite[0].1 == 2 => {
            let t = &elements[infinite[0]].sigma_b;
            let s = &elements[finite[0].0].sigma_b;
            let t_inv = t.inverse().expect("lattice automorphism");
            if s.mul(t).mul(s) == t_inv {
                relations.push("involution conjugates the infinite generator to its inverse".into());
                "Z x| Z_2".to_string()
            } else {
                "infinite".to_string()
            }
        }
        _ => "infinite".to_string(),
    };
    let order = if infinite.is_empty() && !dihedral {
        GroupOrder::Finite(elements.len())
    } else {
        GroupOrder::Infinite("infinite")
    };
    Ok(SpDGroup {
        elements,
        generators,
        order,
        class,
        complete: false,
        relations_checked: relations,
        products_verified: verified,
    })
}

/// Greedy generators by depth: an element joins when it is not reachable
/// from the identity through products of earlier generators (and their
/// inverses) that stay inside the found element set.
fn minimal_generators(elements: &[DGroupElement]) -> Vec<usize> {
    let found: HashSet<&IntMatrix> = elements.iter().map(|e| &e.sigma_b).collect();
    let mut order: Vec<usize> = (0..elements.len()).filter(|&i| !elements[i].is_identity()).collect();
    order.sort_by_key(|&i| (elements[i].depth, i));
    let n = elements[0].sigma_b.rows();
    let mut gens: Vec<usize> = vec![];
    let mut reach: HashSet<IntMatrix> = HashSet::from([IntMatrix::identity(n)]);
    for i in order {
        if reach.contains(&elements[i].sigma_b) {
            continue;
        }
        gens.push(i);
        let mut letters = vec![];
        for &g in &gens {
            let m = elements[g].sigma_b.clone();
            letters.push(m.inverse().expect("lattice automorphism"));
            letters.push(m);
        }
        let mut frontier: Vec<IntMatrix> = reach.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = vec![];
            for w in &frontier {
                for l in &letters {
                    let m = w.mul(l);
                    if found.contains(&m) && reach.insert(m.clone()) {
                        next.push(m);
                    }
                }
            }
            frontier = next;
        }
    }
    gens
}

/// The permutation `α ↦ σ_b(α)` of `Σ_pr`; checks parity and the pairing
/// table are preserved.
pub fn dynkin_hom(g: &DGroupElement, pd: &PrincipalData) -> Result<Vec<usize>, SymmetryError> {
    let index: HashMap<&Vec<i64>, usize> = pd.sigma_pr.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut perm = vec![];
    for a in &pd.sigma_pr {
        let image = g.sigma_b.apply(a);
        let j = *index
            .get(&image)
            .ok_or_else(|| SymmetryError::NotAnAutomorphism(format!("σ_b{a:?} = {image:?} is not principal")))?;
        if pd.parity(a) != pd.parity(&image) {
            return Err(SymmetryError::NotAnAutomorphism(format!("parity of {a:?} changes")));
        }
        perm.push(j);
    }
    for i in 0..pd.pi.len() {
        for j in 0..pd.pi.len() {
            let before = pd.pairing(&pd.pi[j], i);
            let after = pd.pairing(&g.sigma_b.apply(&pd.pi[j]), perm[i]);
            if before != after {
                return Err(SymmetryError::NotAnAutomorphism(format!("pairing ⟨π_{j}, π_{i}^∨⟩ changes")));
            }
        }
    }
    Ok(perm)
}

/// Dynkin components of `π`, as sets of indices, under the `B_π` graph.
pub fn pi_components(pd: &PrincipalData) -> Vec<BTreeSet<usize>> {
    pd.b_pi.blocks().into_iter().map(|b| b.into_iter().collect()).collect()
}

/// `V_b` with a symmetric form, extended by `Λ_j` dual to a basis of the radical.
#[derive(Clone, Debug)]
pub struct AffineFrame {
    /// `|X|`.
    pub rank: usize,
    /// Gram matrix on `V_b ⊕ span(Λ_j)`.
    pub gram: QMatrix,
    /// Integral basis of the radical, primitive and with positive first nonzero entry.
    pub radical: Vec<Vec<i64>>,
    /// Row scaling that made the Cartan matrix symmetric, when it was used.
    pub scaling: Option<Vec<Q>>,
    /// How the form on `V_b` was obtained.
    pub source: &'static str,
}

impl AffineFrame {
    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn corank(&self) -> usize {
        self.radical.len()
    }

    pub fn form(&self, u: &[Q], v: &[Q]) -> Q {
        let gv = q_apply(&self.gram, v);
        u.iter().zip(&gv).fold(Q::zero(), |acc, (a, b)| acc + a * b)
    }

    /// A `Q_v` vector as a frame vector.
    pub fn embed(&self, beta: &[i64]) -> Vec<Q> {
        let mut v: Vec<Q> = beta.iter().map(|&x| qi(x)).collect();
        v.resize(self.dim(), Q::zero());
        v
    }

    pub fn embed_q(&self, beta: &[Q]) -> Vec<Q> {
        let mut v = beta.to_vec();
        v.resize(self.dim(), Q::zero());
        v
    }

    /// The null root of an affine frame.
    pub fn delta(&self) -> Result<Vec<i64>, SymmetryError> {
        if self.corank() != 1 {
            return Err(SymmetryError::NotAffine(self.corank()));
        }
        Ok(self.radical[0].clone())
    }

    /// `Λ_j` as a frame vector.
    pub fn lambda(&self, j: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[self.rank + j] = Q::one();
        v
    }

    /// `s_α(λ) = λ - 2(λ,α)/(α,α) α` for anisotropic `α`.
    pub fn reflection(&self, alpha: &[Q]) -> Result<QMatrix, SymmetryError> {
        let a = self.embed_q(alpha);
        let aa = self.form(&a, &a);
        if aa.is_zero() {
            return Err(SymmetryError::NotAnAutomorphism("isotropic vector has no reflection".into()));
        }
        let n = self.dim();
        let ga = q_apply(&self.gram, &a);
        let two = qi(2);
        Ok((0..n)
            .map(|i| (0..n).map(|j| {
                let id = if i == j { Q::one() } else { Q::zero() };
                id - &two * &ga[j] / &aa * &a[i]
            }).collect())
            .collect())
    }

    /// `t_ν(λ) = λ + kν - ((λ,ν) + (k/2)(ν,ν))δ` with `k = (λ,δ)`, for `ν ∈ V_b`.
    pub fn translation(&self, nu: &[Q]) -> Result<QMatrix, SymmetryError> {
        if nu.len() != self.rank {
            return Err(SymmetryError::Dimension { got: nu.len(), want: self.rank });
        }
        let delta = self.embed(&self.delta()?);
        let nu = self.embed_q(nu);
        let n = self.dim();
        let gnu = q_apply(&self.gram, &nu);
        let gdelta = q_apply(&self.gram, &delta);
        let nunu = self.form(&nu, &nu);
        let half = Q::new(1.into(), 2.into());
        let mut m = q_identity(n);
        for j in 0..n {
            // column j is the image of the j-th basis vector
            let k = &gdelta[j];
            let c = &gnu[j] + k * &nunu * &half;
            for i in 0..n {
                m[i][j] = &m[i][j] + k * &nu[i] - &c * &delta[i];
            }
        }
        Ok(m)
    }

    /// `m` preserves the form: `mᵀ G m = G`.
    pub fn preserves_form(&self, m: &QMatrix) -> bool {
        let mt: QMatrix = (0..m.len()).map(|i| m.iter().map(|r| r[i].clone()).collect()).collect();
        q_mul(&q_mul(&mt, &self.gram), m) == self.gram
    }

    /// A Weyl word as a frame map, through the frame reflections of `π`.
    pub fn weyl_word(&self, pd: &PrincipalData, word: &[usize]) -> Result<QMatrix, SymmetryError> {
        let mut m = q_identity(self.dim());
        for &i in word {
            let a: Vec<Q> = pd.pi[i].iter().map(|&x| qi(x)).collect();
            m = q_mul(&m, &self.reflection(&a)?);
        }
        Ok(m)
    }

    /// The `V_b` block of a frame map that preserves `V_b`.
    pub fn restrict(&self, m: &QMatrix) -> Option<QMatrix> {
        for j in 0..self.rank {
            if m[self.rank..].iter().any(|r| !r[j].is_zero()) {
                return None;
            }
        }
        Some(m[..self.rank].iter().map(|r| r[..self.rank].to_vec()).collect())
    }

    /// JSON description of the frame.
    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "rank": self.rank,
            "corank": self.corank(),
            "source": self.source,
            "radical": self.radical,
            "gram": self.gram.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// The frame of a symmetrizable datum: Gram matrix `D·A` on `V_b`, plus
/// `Λ_j` pairing as the Kronecker delta with the radical basis and
/// supported on the pivot coordinates of that basis.
pub fn bilinear_frame(datum: &CartanDatum) -> Result<AffineFrame, SymmetryError> {
    let (d, sym) = datum.symmetrize().ok_or(SymmetryError::NotSymmetrizable)?;
    let gram: QMatrix = sym
        .matrix()
        .iter()
        .map(|r| r.iter().map(rational).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let scaling = d.iter().map(rational).collect::<Result<Vec<_>, _>>()?;
    Ok(extend_frame(gram, Some(scaling), "symmetrized Cartan matrix"))
}

/// The frame built from the even part: the symmetrized `B_π` transported to
/// `Σ_v` coordinates. Needs `π` to span `V_b`.
pub fn bilinear_frame_from_pi(pd: &PrincipalData) -> Result<AffineFrame, SymmetryError> {
    let n = pd.rank();
    if pd.pi.len() != n {
        return Err(SymmetryError::Dimension { got: pd.pi.len(), want: n });
    }
    let b = Gcm::new(pd.b_pi.matrix().clone()).map_err(|_| SymmetryError::NotSymmetrizable)?;
    let as_datum = CartanDatum::from_ints(&b.matrix().to_rows(), &vec![0; n]);
    let (_, sym) = as_datum.symmetrize().ok_or(SymmetryError::NotSymmetrizable)?;
    let s_pi: QMatrix = sym
        .matrix()
        .iter()
        .map(|r| r.iter().map(rational).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    // P has the π vectors as columns; gram on Σ_v is P^{-T} S P^{-1}
    let p = IntMatrix::from_cols(&pd.pi);
    let p_inv = crate::exact::inverse(&crate::exact::to_scalar(&p)).ok_or(SymmetryError::Dimension { got: 0, want: n })?;
    let p_inv: QMatrix = p_inv.iter().map(|r| r.iter().map(rational).collect::<Result<Vec<_>, _>>()).collect::<Result<_, _>>()?;
    let p_inv_t: QMatrix = (0..n).map(|i| (0..n).map(|j| p_inv[j][i].clone()).collect()).collect();
    let gram = q_mul(&q_mul(&p_inv_t, &s_pi), &p_inv);
    Ok(extend_frame(gram, None, "symmetrized B_pi on the even part"))
}

fn extend_frame(gram_vb: QMatrix, scaling: Option<Vec<Q>>, source: &'static str) -> AffineFrame {
    let n = gram_vb.len();
    let sc: Vec<Vec<Scalar>> = gram_vb.iter().map(|r| r.iter().map(|x| Scalar::from_q(x.clone())).collect()).collect();
    let radical: Vec<Vec<i64>> = kernel(&sc, n)
        .into_iter()
        .map(|v| {
            let q: Vec<Q> = v.iter().map(|s| s.as_rational().cloned().unwrap()).collect();
            let mut p = primitive(&q);
            if p.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
                p.iter_mut().for_each(|x| *x = -*x);
            }
            p
        })
        .collect();
    let c = radical.len();
    let mut gram = vec![vec![Q::zero(); n + c]; n + c];
    for i in 0..n {
        for j in 0..n {
            gram[i][j] = gram_vb[i][j].clone();
        }
    }
    if c > 0 {
        // R f_j = e_j with f_j supported on the pivot columns of R
        let mut r: Vec<Vec<Scalar>> = radical.iter().map(|v| v.iter().map(|&x| Scalar::int(x)).collect()).collect();
        let pivots = rref(&mut r);
        let sub: Vec<Vec<Scalar>> = pivots.iter().map(|&p| radical.iter().map(|v| Scalar::int(v[p])).collect()).collect();
        for j in 0..c {
            let target: Vec<Scalar> = (0..c).map(|i| if i == j { Scalar::one() } else { Scalar::zero() }).collect();
            // columns of `sub` indexed by pivot give R restricted to pivots
            let f = solve_in_span(&sub, &target).expect("pivot block is invertible");
            for (k, &p) in pivots.iter().enumerate() {
                let v = f[k].as_rational().cloned().unwrap();
                gram[p][n + j] = v.clone();
                gram[n + j][p] = v;
            }
        }
    }
    AffineFrame { rank: n, gram, radical, scaling, source }
}

/// Counts from checking `Sk^D(v) = W ⋊ Sp^D(v)` on enumerated data.
#[derive(Clone, Debug, Serialize)]
pub struct SkDReport {
    /// Skeleton vertices `D`-equivalent to the base.
    pub sk_d_elements: usize,
    /// Of those, how many factor as `w·s` with `s ∈ Sp^D` found.
    pub factored: usize,
    pub weyl_elements_checked: usize,
    /// No nontrivial `Sp^D` element (or quotient of two) is an enumerated Weyl element.
    pub w_meets_sp_d_trivially: bool,
    pub affine: Option<AffineDecomposition>,
    /// Every infinite-order `Sp^D` generator commutes with all `s_α`, `α ∈ π`.
    pub generators_central: Option<bool>,
    /// `ν` with `σ_b = t_ν` on `V_b`, per infinite generator, as strings.
    pub generator_translations: Vec<Option<Vec<String>>>,
    /// Those `ν` lie outside `Qπ̇ + Qδ`, so no power of the generator is in `W`.
    pub generators_outside_w: Option<bool>,
    pub complete: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AffineDecomposition {
    pub checked: usize,
    /// `w = t_ν·ẇ` with `ẇ(Λ_0) = Λ_0` of finite order and `ν ∈ Qπ̇ + Qδ`.
    pub factored: usize,
    pub pi_dot: Vec<Vec<i64>>,
}

/// `ν` (mod `δ`) with `σ = t_ν` on `V_b`, i.e. `σ(β) = β - (β,ν)δ`.
pub fn translation_part(frame: &AffineFrame, sigma: &IntMatrix) -> Option<Vec<Q>> {
    let n = frame.rank;
    let delta = frame.delta().ok()?;
    // σ e_x - e_x = c_x δ
    let mut c = vec![];
    for x in 0..n {
        let col = sigma.col(x);
        let diff: Vec<i64> = (0..n).map(|i| col[i] - if i == x { 1 } else { 0 }).collect();
        let k = delta.iter().position(|&d| d != 0)?;
        let cx = Q::new(diff[k].into(), delta[k].into());
        if (0..n).any(|i| Q::from_integer(diff[i].into()) != &cx * qi(delta[i])) {
            return None;
        }
        c.push(cx);
    }
    // (e_x, ν) = -c_x
    let gram_cols: Vec<Vec<Scalar>> = (0..n).map(|j| (0..n).map(|i| Scalar::from_q(frame.gram[i][j].clone())).collect()).collect();
    let target: Vec<Scalar> = c.iter().map(|x| Scalar::from_q(-x.clone())).collect();
    let nu = solve_any(&gram_cols, &target)?;
    Some(nu.iter().map(|s| s.as_rational().cloned().unwrap()).collect())
}

fn in_span(vectors: &[Vec<Q>], v: &[Q]) -> bool {
    let cols: Vec<Vec<Scalar>> = vectors.iter().map(|c| c.iter().map(|x| Scalar::from_q(x.clone())).collect()).collect();
    let t: Vec<Scalar> = v.iter().map(|x| Scalar::from_q(x.clone())).collect();
    if cols.is_empty() {
        return v.iter().all(|x| x.is_zero());
    }
    solve_any(&cols, &t).is_some()
}

/// Checks the decomposition `Sk^D(v) = W ⋊ Sp^D(v)` on a bounded skeleton,
/// and for affine frames `W = Ẇ ⋉ t(M_π)` on Weyl elements up to `max_length`.
pub fn sk_d_structure(
    skeleton: &MarkedGraph,
    sp_d: &SpDGroup,
    pd: &PrincipalData,
    max_length: usize,
    frame: Option<&AffineFrame>,
) -> Result<SkDReport, SymmetryError> {
    let sk = d_equivalent_vertices(skeleton);
    let sp_by_sigma: HashMap<Vec<Vec<i64>>, usize> =
        sp_d.elements.iter().enumerate().map(|(i, e)| (e.sigma_b.transpose().to_rows(), i)).collect();
    let mut factored = 0;
    for e in &sk {
        let cols = e.sigma_b.transpose().to_rows();
        if let Some((word, end)) = reduce_by_pi(pd, &cols, 10_000) {
            if let Some(&s) = sp_by_sigma.get(&end) {
                let mut w = IntMatrix::identity(pd.rank());
                for &i in &word {
                    w = w.mul(&pd.reflection_matrix(i));
                }
                assert_eq!(w.mul(&sp_d.elements[s].sigma_b), e.sigma_b, "σ_u = w·σ_s");
                factored += 1;
            }
        }
    }
    let weyl = weyl_generate(pd, max_length);
    let weyl_set: HashSet<&IntMatrix> = weyl.iter().map(|w| &w.matrix).collect();
    let mut meets_trivially = true;
    for a in &sp_d.elements {
        for b in &sp_d.elements {
            if a.vertex == b.vertex {
                continue;
            }
            let q = a.sigma_b.inverse().expect("automorphism").mul(&b.sigma_b);
            if weyl_set.contains(&q) {
                meets_trivially = false;
            }
        }
    }
    let mut affine = None;
    let mut central = None;
    let mut translations = vec![];
    let mut outside = None;
    if let Some(frame) = frame.filter(|f| f.corank() == 1) {
        let lambda0 = frame.lambda(0);
        let pi_dot: Vec<usize> = (0..pd.pi.len()).filter(|&i| frame.form(&lambda0, &frame.embed(&pd.pi[i])).is_zero()).collect();
        let mut span: Vec<Vec<Q>> = pi_dot.iter().map(|&i| pd.pi[i].iter().map(|&x| qi(x)).collect()).collect();
        span.push(frame.delta()?.iter().map(|&x| qi(x)).collect());
        let mut ok = 0;
        for w in &weyl {
            let m = frame.weyl_word(pd, &w.word)?;
            debug_assert_eq!(frame.restrict(&m), Some(q_of_int(&w.matrix)));
            let image = q_apply(&m, &lambda0);
            let nu: Vec<Q> = (0..frame.rank).map(|i| image[i].clone() - &lambda0[i]).collect();
            let t_inv = frame.translation(&nu.iter().map(|x| -x.clone()).collect::<Vec<_>>())?;
            let finite_part = q_mul(&t_inv, &m);
            let fixes = q_apply(&finite_part, &lambda0) == lambda0;
            let finite_order = {
                let id = q_identity(frame.dim());
                let mut p = finite_part.clone();
                let mut found = false;
                for _ in 0..10_000 {
                    if p == id {
                        found = true;
                        break;
                    }
                    p = q_mul(&p, &finite_part);
                }
                found
            };
            if fixes && finite_order && in_span(&span, &nu) {
                ok += 1;
            }
        }
        affine = Some(AffineDecomposition {
            checked: weyl.len(),
            factored: ok,
            pi_dot: pi_dot.iter().map(|&i| pd.pi[i].clone()).collect(),
        });
        let infinite: Vec<&DGroupElement> = sp_d
            .generators
            .iter()
            .map(|&g| &sp_d.elements[g])
            .filter(|e| element_order(&e.sigma_b, 64).is_none())
            .collect();
        if !infinite.is_empty() {
            central = Some(infinite.iter().all(|e| {
                (0..pd.pi.len()).all(|i| {
                    let s = pd.reflection_matrix(i);
                    e.sigma_b.mul(&s) == s.mul(&e.sigma_b)
                })
            }));
            let mut all_outside = true;
            for e in &infinite {
                let nu = translation_part(frame, &e.sigma_b);
                if let Some(nu) = &nu {
                    if in_span(&span, nu) {
                        all_outside = false;
                    }
                } else {
                    all_outside = false;
                }
                translations.push(nu.map(|v| v.iter().map(|x| x.to_string()).collect()));
            }
            outside = Some(all_outside);
        }
    }
    Ok(SkDReport {
        sk_d_elements: sk.len(),
        factored,
        weyl_elements_checked: weyl.len(),
        w_meets_sp_d_trivially: meets_trivially,
        affine,
        generators_central: central,
        generator_translations: translations,
        generators_outside_w: outside,
        complete: skeleton.status.is_complete(),
    })
}

/// Rational coordinates in `Σ_v` of the vector `(b(y) - b(x))/2`; used for
/// `ε_1` in the `C(n+1)^(1)` frame, where `x, y` are the last two roots.
pub fn half_difference(n: usize, x: usize, y: usize) -> Vec<Q> {
    let half = Q::new(1.into(), 2.into());
    let mut v = vec![Q::zero(); n];
    v[x] = -half.clone();
    v[y] = half;
    v
}
