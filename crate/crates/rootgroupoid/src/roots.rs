//! Principal roots, the Weyl group, real and imaginary roots, type
//! classification and root bases.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cartan::{components, CartanDatum, CartanError, Gcm, GcmType};
use crate::exact::{cone_membership, inverse, kernel, smith_normal_form, ExactError, IntMatrix, Scalar, Q};
use crate::groupoid::{root_parity, MarkedGraph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootsError {
    #[error("principal pairing is not an integer: {0}")]
    NonIntegralPairing(String),
    #[error("principal root {0:?} has two different coroots")]
    InconsistentCoroot(Vec<i64>),
    #[error("B_pi is not a generalized Cartan matrix: {0}")]
    NotAGcm(String),
    #[error("iterate left the positive cone")]
    NotInPositiveCone,
    #[error("component is not Kac-Moody (some vertex is not fully reflectable)")]
    NotKacMoody,
    #[error("component is decomposable")]
    Decomposable,
    #[error("root system is not finite within the bound")]
    InfiniteSystem,
    #[error("quotient of the root lattice by the even lattice has free rank {0}")]
    ParityTypeUndetermined(usize),
    #[error("root classes overlap at {0:?}")]
    OverlappingClasses(Vec<i64>),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

impl From<CartanError> for RootsError {
    fn from(e: CartanError) -> Self {
        RootsError::NotAGcm(e.to_string())
    }
}

pub fn height(v: &[i64]) -> i64 {
    v.iter().sum()
}

pub fn is_positive(v: &[i64]) -> bool {
    v.iter().all(|&c| c >= 0) && v.iter().any(|&c| c > 0)
}

pub fn is_negative(v: &[i64]) -> bool {
    v.iter().all(|&c| c <= 0) && v.iter().any(|&c| c < 0)
}

pub fn neg(v: &[i64]) -> Vec<i64> {
    v.iter().map(|c| -c).collect()
}

fn dot(f: &[i64], v: &[i64]) -> i64 {
    f.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Principal roots, `π`, coroots and `B_π`.
#[derive(Clone, Debug)]
pub struct PrincipalData {
    pub base: CartanDatum,
    pub sigma_pr: Vec<Vec<i64>>,
    pub sigma_pr_odd: Vec<bool>,
    pub pi: Vec<Vec<i64>>,
    /// `coroots[i]·β = ⟨β, π_i^∨⟩`.
    pub coroots: Vec<Vec<i64>>,
    pub b_pi: Gcm,
    pub saturated: bool,
    pub spine_complete: bool,
    /// Every explored spine vertex is fully reflectable.
    pub kac_moody: bool,
}

#[derive(Serialize)]
pub struct PrincipalReport {
    pub sigma_pr: Vec<Vec<i64>>,
    pub pi: Vec<Vec<i64>>,
    pub b_pi: Vec<Vec<i64>>,
    pub saturated: bool,
}

impl PrincipalData {
    pub fn rank(&self) -> usize {
        self.base.size()
    }

    pub fn pairing(&self, beta: &[i64], i: usize) -> i64 {
        dot(&self.coroots[i], beta)
    }

    pub fn reflect(&self, i: usize, beta: &[i64]) -> Vec<i64> {
        let k = self.pairing(beta, i);
        beta.iter().zip(&self.pi[i]).map(|(b, a)| b - k * a).collect()
    }

    /// `s_i` as a matrix on column vectors of `Q_v` coordinates.
    pub fn reflection_matrix(&self, i: usize) -> IntMatrix {
        let n = self.rank();
        let mut m = IntMatrix::identity(n);
        for r in 0..n {
            for c in 0..n {
                m[(r, c)] -= self.pi[i][r] * self.coroots[i][c];
            }
        }
        m
    }

    pub fn parity(&self, beta: &[i64]) -> u8 {
        root_parity(self.base.parity(), beta)
    }

    pub fn report(&self) -> PrincipalReport {
        PrincipalReport {
            sigma_pr: self.sigma_pr.clone(),
            pi: self.pi.clone(),
            b_pi: self.b_pi.matrix().to_rows(),
            saturated: self.saturated,
        }
    }
}

/// Coroot of `b_u(x)` as an integer functional on `Q_v`, or its half for
/// odd `x`, together with the root itself.
fn coroot_functional(base: &CartanDatum, u: &Vertex, x: usize) -> Result<Vec<i64>, RootsError> {
    let n = base.size();
    let axx = u.datum.entry(x, x);
    let scale = if u.datum.parity()[x] == 1 { Scalar::one() } else { Scalar::int(2) };
    let scale = &scale / axx;
    (0..n)
        .map(|y| {
            let s = (0..n).fold(Scalar::zero(), |acc, i| {
                if u.a[x][i].is_zero() {
                    acc
                } else {
                    acc + &u.a[x][i] * base.entry(i, y)
                }
            });
            let v = &s * &scale;
            v.as_i64().ok_or_else(|| RootsError::NonIntegralPairing(v.to_string()))
        })
        .collect()
}

/// Σ_pr, π and B_π from an explored spine.
pub fn principal_data(spine: &MarkedGraph) -> Result<PrincipalData, RootsError> {
    let base = spine.base().datum.clone();
    let mut sigma_pr: Vec<Vec<i64>> = vec![];
    let mut odd = vec![];
    let mut coroots: Vec<Vec<i64>> = vec![];
    let mut first_depth = vec![];
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    for (idx, u) in spine.vertices.iter().enumerate() {
        for x in 0..u.size() {
            if u.datum.entry(x, x).is_zero() || !u.datum.reflectable(x) {
                continue;
            }
            let f = coroot_functional(&base, u, x)?;
            let alpha = u.b[x].clone();
            match seen.get(&alpha) {
                Some(&i) => {
                    if coroots[i] != f {
                        return Err(RootsError::InconsistentCoroot(alpha));
                    }
                }
                None => {
                    seen.insert(alpha.clone(), sigma_pr.len());
                    odd.push(u.datum.parity()[x] == 1);
                    sigma_pr.push(alpha);
                    coroots.push(f);
                    first_depth.push(spine.depth[idx]);
                }
            }
        }
    }
    let pi: Vec<Vec<i64>> = sigma_pr
        .iter()
        .zip(&odd)
        .map(|(a, &o)| if o { a.iter().map(|c| 2 * c).collect() } else { a.clone() })
        .collect();
    let k = pi.len();
    let mut b = IntMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            b[(i, j)] = dot(&coroots[i], &pi[j]);
        }
    }
    let b_pi = Gcm::new(b)?;
    let spine_complete = spine.status.is_complete();
    let saturated = spine_complete || layer_saturated(spine, &first_depth);
    let kac_moody = require_kac_moody(spine).is_ok();
    Ok(PrincipalData { base, sigma_pr, sigma_pr_odd: odd, pi, coroots, b_pi, saturated, spine_complete, kac_moody })
}

/// No new principal root and no new D-class in the last fully explored layer.
fn layer_saturated(spine: &MarkedGraph, pr_depth: &[usize]) -> bool {
    if spine.full_depth == 0 {
        return false;
    }
    let last = spine.full_depth - 1;
    if last == 0 || pr_depth.contains(&last) {
        return false;
    }
    let mut reps: Vec<&CartanDatum> = vec![];
    let mut rep_depth = vec![];
    for (i, u) in spine.vertices.iter().enumerate() {
        if spine.depth[i] > last {
            continue;
        }
        if !reps.iter().any(|r| u.datum.d_equivalence(r).is_some()) {
            reps.push(&u.datum);
            rep_depth.push(spine.depth[i]);
        }
    }
    !rep_depth.contains(&last)
}

/// Elements that are not a sum of two or more members (repetition allowed).
/// Members must have positive height.
pub fn indecomposables_oracle(set: &[Vec<i64>]) -> Vec<Vec<i64>> {
    assert!(set.iter().all(|a| height(a) > 0), "members must have positive height");
    indecomposables_wrt(set, &|v| Q::from_integer(height(v).into()))
}

/// Same, for members on which the functional `f` is positive.
fn indecomposables_wrt(set: &[Vec<i64>], f: &dyn Fn(&[i64]) -> Q) -> Vec<Vec<i64>> {
    fn in_monoid(
        v: &[i64],
        set: &[Vec<i64>],
        f: &dyn Fn(&[i64]) -> Q,
        memo: &mut HashMap<Vec<i64>, bool>,
    ) -> bool {
        if v.iter().all(|&c| c == 0) {
            return true;
        }
        if !f(v).is_positive() {
            return false;
        }
        if let Some(&b) = memo.get(v) {
            return b;
        }
        let found = set.iter().any(|a| in_monoid(&sub(v, a), set, f, memo));
        memo.insert(v.to_vec(), found);
        found
    }
    fn sub(x: &[i64], y: &[i64]) -> Vec<i64> {
        x.iter().zip(y).map(|(a, b)| a - b).collect()
    }
    let mut memo = HashMap::new();
    set.iter()
        .filter(|g| {
            !set.iter().any(|a| {
                let rest = sub(g, a);
                rest.iter().any(|&c| c != 0) && in_monoid(&rest, set, f, &mut memo)
            })
        })
        .cloned()
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub word: Vec<usize>,
    pub matrix: IntMatrix,
}

impl WeylElement {
    pub fn length(&self) -> usize {
        self.word.len()
    }
}

/// Inversion-set test: `s_{i1}…s_{i(k-1)} α_{ik}` are positive and distinct.
pub fn is_reduced(pd: &PrincipalData, word: &[usize]) -> bool {
    let mut seen = HashSet::new();
    let mut prefix = IntMatrix::identity(pd.rank());
    for &i in word {
        let beta = prefix.apply(&pd.pi[i]);
        if !is_positive(&beta) || !seen.insert(beta) {
            return false;
        }
        prefix = prefix.mul(&pd.reflection_matrix(i));
    }
    true
}

/// All Weyl group elements of length at most `max_length`, by BFS on length.
pub fn weyl_generate(pd: &PrincipalData, max_length: usize) -> Vec<WeylElement> {
    let gens: Vec<IntMatrix> = (0..pd.pi.len()).map(|i| pd.reflection_matrix(i)).collect();
    let id = WeylElement { word: vec![], matrix: IntMatrix::identity(pd.rank()) };
    let mut seen: HashSet<IntMatrix> = HashSet::from([id.matrix.clone()]);
    let mut out = vec![id];
    let mut layer_start = 0;
    for _ in 0..max_length {
        let layer_end = out.len();
        for e in layer_start..layer_end {
            for (i, g) in gens.iter().enumerate() {
                let m = out[e].matrix.mul(g);
                if seen.insert(m.clone()) {
                    let mut word = out[e].word.clone();
                    word.push(i);
                    debug_assert!(is_reduced(pd, &word));
                    out.push(WeylElement { word, matrix: m });
                }
            }
        }
        if out.len() == layer_end {
            break;
        }
        layer_start = layer_end;
    }
    out
}

/// Real roots within a height bound, split by class.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RealRoots {
    pub anisotropic: BTreeSet<Vec<i64>>,
    pub isotropic: BTreeSet<Vec<i64>>,
    pub nonreflectable: BTreeSet<Vec<i64>>,
    /// Some orbit element was cut off by the height bound.
    pub truncated: bool,
}

impl RealRoots {
    pub fn all(&self) -> BTreeSet<Vec<i64>> {
        self.anisotropic.iter().chain(&self.isotropic).chain(&self.nonreflectable).cloned().collect()
    }
}

fn orbit_within(pd: &PrincipalData, seeds: &BTreeSet<Vec<i64>>, bound: i64, cut: &mut bool) -> BTreeSet<Vec<i64>> {
    let mut out: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut q = VecDeque::new();
    for s in seeds {
        if height(s).abs() <= bound {
            if out.insert(s.clone()) {
                q.push_back(s.clone());
            }
        } else {
            *cut = true;
        }
    }
    while let Some(mu) = q.pop_front() {
        for i in 0..pd.pi.len() {
            if pd.pairing(&mu, i) == 0 {
                continue;
            }
            let nu = pd.reflect(i, &mu);
            if height(&nu).abs() > bound {
                *cut = true;
                continue;
            }
            if out.insert(nu.clone()) {
                q.push_back(nu);
            }
        }
    }
    out
}

/// `Δ_an`, `Δ_is`, `Δ_nr` as W-orbits of simple roots over the spine.
pub fn real_roots(pd: &PrincipalData, spine: &MarkedGraph, height_bound: i64) -> Result<RealRoots, RootsError> {
    let mut an = BTreeSet::new();
    for a in &pd.sigma_pr {
        an.insert(a.clone());
        an.insert(neg(a));
    }
    let mut is = BTreeSet::new();
    let mut nr = BTreeSet::new();
    for u in &spine.vertices {
        for x in 0..u.size() {
            let target = if u.datum.is_isotropic(x) {
                &mut is
            } else if !u.datum.reflectable(x) {
                &mut nr
            } else {
                continue;
            };
            target.insert(u.b[x].clone());
            target.insert(neg(&u.b[x]));
        }
    }
    let mut cut = !spine.status.is_complete();
    let anisotropic = orbit_within(pd, &an, height_bound, &mut cut);
    let isotropic = orbit_within(pd, &is, height_bound, &mut cut);
    let nonreflectable = orbit_within(pd, &nr, height_bound, &mut cut);
    for r in anisotropic.iter().chain(&isotropic) {
        if nonreflectable.contains(r) {
            return Err(RootsError::OverlappingClasses(r.clone()));
        }
    }
    if let Some(r) = anisotropic.intersection(&isotropic).next() {
        return Err(RootsError::OverlappingClasses(r.clone()));
    }
    Ok(RealRoots { anisotropic, isotropic, nonreflectable, truncated: cut })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Descent {
    /// `w` with `w·μ0 = μ`.
    pub word: Vec<usize>,
    pub mu0: Vec<i64>,
    /// Heights of the iterates, strictly decreasing.
    pub heights: Vec<i64>,
}

/// Moves `μ` down to its W-dominant representative, lowest π index first.
pub fn descend_to_dominant(pd: &PrincipalData, mu: &[i64]) -> Result<Descent, RootsError> {
    let mut cur = mu.to_vec();
    let mut word = vec![];
    let mut heights = vec![height(&cur)];
    loop {
        if cur.iter().any(|&c| c < 0) {
            return Err(RootsError::NotInPositiveCone);
        }
        let step = (0..pd.pi.len()).find(|&i| pd.pairing(&cur, i) > 0);
        let i = match step {
            None => return Ok(Descent { word, mu0: cur, heights }),
            Some(i) => i,
        };
        cur = pd.reflect(i, &cur);
        let h = height(&cur);
        assert!(h < *heights.last().unwrap(), "descent must lower the height");
        heights.push(h);
        word.push(i);
    }
}

fn to_scalars(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&c| Scalar::int(c)).collect()
}

/// Membership in `Q^{++} = W·K_R` for a Kac-Moody component.
pub fn totally_positive(pd: &PrincipalData, mu: &[i64]) -> Result<bool, RootsError> {
    let d = match descend_to_dominant(pd, mu) {
        Ok(d) => d,
        Err(RootsError::NotInPositiveCone) => return Ok(false),
        Err(e) => return Err(e),
    };
    if pd.pi.is_empty() {
        return Ok(d.mu0.iter().all(|&c| c == 0));
    }
    let gens: Vec<Vec<Scalar>> = pd.pi.iter().map(|a| to_scalars(a)).collect();
    Ok(cone_membership(&gens, &to_scalars(&d.mu0))?.is_some())
}

/// Coordinates of `v` in the basis `basis` (rows), when it is one.
pub struct BasisCoords {
    inv: Vec<Vec<Scalar>>,
}

impl BasisCoords {
    pub fn new(basis: &[Vec<i64>]) -> Option<Self> {
        let m: Vec<Vec<Scalar>> = basis.iter().map(|r| to_scalars(r)).collect();
        // row vector c with c·B = v  <=>  c = v·B^{-1}
        inverse(&m).map(|inv| BasisCoords { inv })
    }

    pub fn coords(&self, v: &[i64]) -> Vec<Q> {
        let n = self.inv.len();
        (0..n)
            .map(|j| {
                v.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .fold(Q::zero(), |acc, (i, &c)| acc + self.inv[i][j].as_rational().unwrap() * Q::from_integer(c.into()))
            })
            .collect()
    }

    /// Integer coordinates of a single sign, or `None`.
    pub fn signed_integral(&self, v: &[i64]) -> Option<Vec<i64>> {
        let c = self.coords(v);
        if c.iter().any(|x| !x.is_integer()) {
            return None;
        }
        let pos = c.iter().all(|x| !x.is_negative());
        let negs = c.iter().all(|x| !x.is_positive());
        if !(pos || negs) {
            return None;
        }
        Some(c.iter().map(|x| i64::try_from(x.to_integer()).unwrap()).collect())
    }
}

/// Fallback for non Kac-Moody components: `μ ∈ C(Σ_u)` over explored
/// skeleton vertices. Returns `(value, exploration complete)`.
pub fn totally_positive_by_skeleton(skeleton: &MarkedGraph, mu: &[i64]) -> (bool, bool) {
    for u in &skeleton.vertices {
        let bc = BasisCoords::new(&u.b).expect("simple roots are independent");
        if bc.coords(mu).iter().any(|x| x.is_negative()) {
            return (false, skeleton.status.is_complete());
        }
    }
    (true, skeleton.status.is_complete())
}

pub fn support_connected(base: &CartanDatum, mu: &[i64]) -> bool {
    let supp: Vec<usize> = (0..mu.len()).filter(|&i| mu[i] != 0).collect();
    if supp.is_empty() {
        return false;
    }
    components(supp.len(), |i, j| base.adjacent(supp[i], supp[j])).len() == 1
}

/// Checks that every vertex of `graph` is fully reflectable.
pub fn require_kac_moody(graph: &MarkedGraph) -> Result<(), RootsError> {
    if graph.vertices.iter().all(|u| u.datum.fully_reflectable()) {
        Ok(())
    } else {
        Err(RootsError::NotKacMoody)
    }
}

/// Imaginary root test: totally positive with connected support, up to sign.
pub fn is_imaginary(pd: &PrincipalData, mu: &[i64]) -> Result<bool, RootsError> {
    if !pd.kac_moody {
        return Err(RootsError::NotKacMoody);
    }
    let m: Vec<i64> = if is_negative(mu) { neg(mu) } else { mu.to_vec() };
    if !is_positive(&m) {
        return Ok(false);
    }
    Ok(totally_positive(pd, &m)? && support_connected(&pd.base, &m))
}

/// Every `μ ∈ Q^+` with `1 ≤ ht μ ≤ bound`.
pub fn positive_lattice_points(n: usize, bound: i64) -> Vec<Vec<i64>> {
    fn rec(i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == cur.len() {
            if cur.iter().any(|&c| c > 0) {
                out.push(cur.clone());
            }
            return;
        }
        for c in 0..=left {
            cur[i] = c;
            rec(i + 1, left - c, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = vec![];
    rec(0, bound, &mut vec![0; n], &mut out);
    out
}

/// Kac-style oracle: W-closure of `K = {μ : supp connected, ⟨μ, α^∨⟩ ≤ 0}`
/// within the height bound, built upward.
pub fn imaginary_oracle(pd: &PrincipalData, bound: i64) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    let mut q = VecDeque::new();
    for mu in positive_lattice_points(pd.rank(), bound) {
        if support_connected(&pd.base, &mu) && (0..pd.pi.len()).all(|i| pd.pairing(&mu, i) <= 0) && out.insert(mu.clone()) {
            q.push_back(mu);
        }
    }
    while let Some(mu) = q.pop_front() {
        for i in 0..pd.pi.len() {
            if pd.pairing(&mu, i) < 0 {
                let nu = pd.reflect(i, &mu);
                if height(&nu) <= bound && out.insert(nu.clone()) {
                    q.push_back(nu);
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ParityType {
    I,
    II,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    #[serde(rename = "type")]
    pub gcm_type: GcmType,
    pub parity_type: ParityType,
    /// Invariant factors of `Q_v / Q_0` that are not 1; zero means a free summand.
    pub quotient: Vec<i64>,
    pub saturated: bool,
}

/// Primitive null vectors of the affine blocks of `B_π`, mapped into `Q_v`.
pub fn affine_null_roots(pd: &PrincipalData) -> Vec<Vec<i64>> {
    let mut out = vec![];
    for (block, t) in pd.b_pi.block_types() {
        if t != GcmType::Aff {
            continue;
        }
        let m: Vec<Vec<Scalar>> = block
            .iter()
            .map(|&i| block.iter().map(|&j| Scalar::int(pd.b_pi.matrix()[(i, j)])).collect())
            .collect();
        let ker = kernel(&m, block.len());
        assert_eq!(ker.len(), 1, "affine block has corank one");
        let mut v = vec![Q::zero(); pd.rank()];
        for (c, &i) in ker[0].iter().zip(&block) {
            let c = c.as_rational().unwrap();
            for (vy, py) in v.iter_mut().zip(&pd.pi[i]) {
                *vy += c * Q::from_integer((*py).into());
            }
        }
        out.push(primitive(&v));
    }
    out
}

/// The primitive integer vector on the ray of `v`, oriented positive.
pub fn primitive(v: &[Q]) -> Vec<i64> {
    use num_integer::Integer;
    let lcm = v.iter().fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * Q::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    let mut out: Vec<i64> = ints.iter().map(|x| i64::try_from(x / &g).unwrap()).collect();
    if out.iter().sum::<i64>() < 0 {
        out = neg(&out);
    }
    out
}

/// Type of `B_π` and type I/II from the Smith form of `Q_0 ⊂ Q_v`.
pub fn classify_component(pd: &PrincipalData, spine: &MarkedGraph, height_bound: i64) -> Result<Classification, RootsError> {
    if pd.base.blocks().len() != 1 {
        return Err(RootsError::Decomposable);
    }
    let gcm_type = pd.b_pi.gcm_type(false)?;
    let real = real_roots(pd, spine, height_bound)?;
    let mut gens: Vec<Vec<i64>> = vec![];
    for r in real.all() {
        if pd.parity(&r) == 0 && is_positive(&r) {
            gens.push(r);
        }
    }
    for r in &real.anisotropic {
        if pd.parity(r) == 1 && is_positive(r) {
            gens.push(r.iter().map(|c| 2 * c).collect());
        }
    }
    for d in affine_null_roots(pd) {
        let d = if pd.parity(&d) == 1 { d.iter().map(|c| 2 * c).collect() } else { d };
        gens.push(d);
    }
    let n = pd.rank();
    let diag = if gens.is_empty() { vec![] } else { smith_normal_form(&IntMatrix::from_rows(&gens)).diagonal() };
    let nonzero = diag.iter().filter(|&&d| d != 0).count();
    let free = n - nonzero;
    let mut quotient: Vec<i64> = diag.iter().filter(|&&d| d != 0 && d != 1).map(|d| d.abs()).collect();
    quotient.extend(std::iter::repeat_n(0, free));
    let parity_type = match free {
        1 => ParityType::I,
        0 => ParityType::II,
        k => return Err(RootsError::ParityTypeUndetermined(k)),
    };
    Ok(Classification { gcm_type, parity_type, quotient, saturated: pd.saturated })
}

/// S-principal elements over the explored spine, in discovery order.
#[derive(Clone, Debug, Serialize)]
pub struct PiS {
    pub elements: Vec<Vec<i64>>,
    /// Spine depth at which each element first appears.
    pub depth: Vec<usize>,
    pub complete: bool,
    /// Whether `CΔ = Cπ_S` holds whenever `Cπ_S` meets an isotropic simple root.
    pub span_implication_holds: bool,
}

pub fn pi_s_enumerate(spine: &MarkedGraph) -> PiS {
    let mut elements = vec![];
    let mut depth = vec![];
    let mut seen = HashSet::new();
    let mut iso = vec![];
    for (idx, u) in spine.vertices.iter().enumerate() {
        for x in 0..u.size() {
            let odd = u.datum.parity()[x] == 1;
            let e = if !odd {
                u.b[x].clone()
            } else if !u.datum.entry(x, x).is_zero() {
                u.b[x].iter().map(|c| 2 * c).collect()
            } else {
                iso.push(u.b[x].clone());
                continue;
            };
            if seen.insert(e.clone()) {
                elements.push(e);
                depth.push(spine.depth[idx]);
            }
        }
    }
    let n = spine.base().size();
    let span: Vec<Vec<Scalar>> = elements.iter().map(|e| to_scalars(e)).collect();
    let r = crate::exact::rank(&span);
    let meets = iso.iter().any(|b| {
        let mut m = span.clone();
        m.push(to_scalars(b));
        crate::exact::rank(&m) == r
    });
    PiS {
        elements,
        depth,
        complete: spine.status.is_complete(),
        span_implication_holds: !meets || r == n,
    }
}

/// Full finite root system: real roots and doubled odd anisotropic roots.
pub fn finite_root_system(pd: &PrincipalData, spine: &MarkedGraph, height_bound: i64) -> Result<Vec<Vec<i64>>, RootsError> {
    let real = real_roots(pd, spine, height_bound)?;
    if real.truncated || pd.b_pi.gcm_type(false)? != GcmType::Fin {
        return Err(RootsError::InfiniteSystem);
    }
    let mut all = real.all();
    for r in &real.anisotropic {
        if pd.parity(r) == 1 {
            all.insert(r.iter().map(|c| 2 * c).collect());
        }
    }
    Ok(all.into_iter().collect())
}

fn combinations(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut vec![], f);
}

fn splits(bc: &BasisCoords, delta: &[Vec<i64>]) -> bool {
    delta.iter().all(|r| bc.signed_integral(r).is_some())
}

/// Brute force over independent subsets `S` with `Δ ⊂ Z≥0 S ∪ Z≤0 S`.
pub fn root_bases(delta: &[Vec<i64>], n: usize) -> Vec<BTreeSet<Vec<i64>>> {
    let mut out = vec![];
    combinations(delta.len(), n, &mut |idx| {
        let basis: Vec<Vec<i64>> = idx.iter().map(|&i| delta[i].clone()).collect();
        if let Some(bc) = BasisCoords::new(&basis) {
            if splits(&bc, delta) {
                out.push(basis.into_iter().collect());
            }
        }
    });
    out
}

/// Positive roots and their indecomposable elements.
pub type PositiveSystem = (Vec<Vec<i64>>, Vec<Vec<i64>>);

/// Roots with `⟨α, h⟩ > 0` and their indecomposable elements; `h[y]` is
/// the value on `b_v(y)`.
pub fn positive_system(delta: &[Vec<i64>], h: &[Q]) -> Option<PositiveSystem> {
    let val = |r: &[i64]| r.iter().zip(h).fold(Q::zero(), |acc, (c, x)| acc + x * Q::from_integer((*c).into()));
    let mut pos = vec![];
    for r in delta {
        let v = val(r);
        if v.is_zero() {
            return None;
        }
        if v.is_positive() {
            pos.push(r.clone());
        }
    }
    let ind = indecomposables_wrt(&pos, &val);
    Some((pos, ind))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RootBasisVerdict {
    Yes,
    No,
    Unknown(i64),
}

/// Walks `sigma` down by simple reflections in `π` until every element of
/// `π` is positive for it; returns the word applied and the final set.
pub fn reduce_by_pi(pd: &PrincipalData, sigma: &[Vec<i64>], max_steps: usize) -> Option<(Vec<usize>, Vec<Vec<i64>>)> {
    let mut cur = sigma.to_vec();
    let mut word = vec![];
    for _ in 0..max_steps {
        let bc = BasisCoords::new(&cur)?;
        let mut step = None;
        for (i, a) in pd.pi.iter().enumerate() {
            let c = bc.signed_integral(a)?;
            if c.iter().any(|&x| x < 0) {
                step = Some(i);
                break;
            }
        }
        match step {
            None => return Some((word, cur)),
            Some(i) => {
                cur = cur.iter().map(|b| pd.reflect(i, b)).collect();
                word.push(i);
            }
        }
    }
    None
}

/// Root-basis test: `No` if some listed root is not of one sign in the
/// candidate; `Yes` if the candidate or its negative is `wΣ_s` for an
/// explored spine vertex `s`; `Unknown` otherwise.
pub fn is_root_basis(
    candidate: &[Vec<i64>],
    pd: &PrincipalData,
    spine: &MarkedGraph,
    roots: &[Vec<i64>],
    height_bound: i64,
) -> RootBasisVerdict {
    let bc = match BasisCoords::new(candidate) {
        Some(b) => b,
        None => return RootBasisVerdict::No,
    };
    if !splits(&bc, roots) || !splits(&bc, &pd.pi) {
        return RootBasisVerdict::No;
    }
    let spine_sets: HashSet<BTreeSet<Vec<i64>>> =
        spine.vertices.iter().map(|u| u.b.iter().cloned().collect()).collect();
    // only one sign can reduce, so both are tried with growing step budgets
    let signed: Vec<Vec<Vec<i64>>> = [1i64, -1]
        .iter()
        .map(|&sign| candidate.iter().map(|r| r.iter().map(|c| sign * c).collect()).collect())
        .collect();
    for budget in [16, 128, 1024, 10_000] {
        for s in &signed {
            if let Some((_, end)) = reduce_by_pi(pd, s, budget) {
                let set: BTreeSet<Vec<i64>> = end.into_iter().collect();
                if spine_sets.contains(&set) {
                    return RootBasisVerdict::Yes;
                }
            }
        }
    }
    RootBasisVerdict::Unknown(height_bound)
}
