//! Cartan data, reflectability, D-equivalence, symmetrization and the
//! finite/affine/indefinite trichotomy for generalized Cartan matrices.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{det, parse_scalar, ExactError, Field, IntMatrix, Integrality, Scalar, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CartanError {
    #[error("matrix must be square and nonempty")]
    NotSquare,
    #[error("parity vector has length {0}, expected {1}")]
    ParityLength(usize, usize),
    #[error("parity entries must be 0 or 1")]
    BadParity,
    #[error("nonzero assumption {0:?} is zero in the field")]
    ZeroAssumption(String),
    #[error("not a generalized Cartan matrix: {0}")]
    NotGcm(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("json: {0}")]
    Json(String),
}

/// How a simple root behaves under reflexion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootKind {
    /// `a_xx = 0`, odd.
    Isotropic,
    /// reflectable with `a_xx != 0`.
    Anisotropic,
    NonReflectable,
}

/// A square scalar matrix with a parity vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CartanDatum {
    field: Arc<Field>,
    a: Vec<Vec<Scalar>>,
    p: Vec<u8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexFlags {
    pub weakly_symmetrizable: bool,
    pub fully_reflectable: bool,
    pub indecomposable: bool,
    pub symmetrizable: bool,
}

impl CartanDatum {
    pub fn new(field: Arc<Field>, a: Vec<Vec<Scalar>>, p: Vec<u8>) -> Result<Self, CartanError> {
        let n = a.len();
        if n == 0 || a.iter().any(|r| r.len() != n) {
            return Err(CartanError::NotSquare);
        }
        if p.len() != n {
            return Err(CartanError::ParityLength(p.len(), n));
        }
        if p.iter().any(|&x| x > 1) {
            return Err(CartanError::BadParity);
        }
        for s in a.iter().flatten() {
            if let Some(k) = s.field() {
                assert!(**k == *field, "matrix entry from a foreign field");
            }
        }
        Ok(CartanDatum { field, a, p })
    }

    /// Rational datum from integer-or-fraction strings, for tests and families.
    pub fn rational(rows: &[&[&str]], p: &[u8]) -> Result<Self, CartanError> {
        let k = Arc::new(Field::rational());
        let a = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_scalar(s, &k)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        CartanDatum::new(k, a, p.to_vec())
    }

    pub fn from_ints(rows: &[Vec<i64>], p: &[u8]) -> Self {
        let a = rows.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect();
        CartanDatum::new(Arc::new(Field::rational()), a, p.to_vec()).expect("valid integer datum")
    }

    pub fn size(&self) -> usize {
        self.a.len()
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn matrix(&self) -> &[Vec<Scalar>] {
        &self.a
    }

    pub fn entry(&self, x: usize, y: usize) -> &Scalar {
        &self.a[x][y]
    }

    pub fn parity(&self) -> &[u8] {
        &self.p
    }

    pub fn with_matrix(&self, a: Vec<Vec<Scalar>>, p: Vec<u8>) -> Self {
        CartanDatum { field: self.field.clone(), a, p }
    }

    /// True when `x` satisfies one of the three reflectability conditions.
    pub fn reflectable(&self, x: usize) -> bool {
        let axx = &self.a[x][x];
        let odd = self.p[x] == 1;
        if axx.is_zero() {
            return odd;
        }
        let scale = if odd { Scalar::one() } else { Scalar::int(2) };
        (0..self.size()).filter(|&y| y != x).all(|y| {
            let r = &(&scale * &self.a[x][y]) / axx;
            r.integrality().is_nonpositive_integer()
        })
    }

    pub fn root_kind(&self, x: usize) -> RootKind {
        if !self.reflectable(x) {
            RootKind::NonReflectable
        } else if self.a[x][x].is_zero() {
            RootKind::Isotropic
        } else {
            RootKind::Anisotropic
        }
    }

    pub fn is_isotropic(&self, x: usize) -> bool {
        self.a[x][x].is_zero() && self.p[x] == 1
    }

    /// Edges of the Dynkin graph: `x ~ y` when `a_xy` or `a_yx` is nonzero.
    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        x != y && (!self.a[x][y].is_zero() || !self.a[y][x].is_zero())
    }

    /// Connected components of the Dynkin graph, each sorted.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        components(self.size(), |x, y| self.adjacent(x, y))
    }

    pub fn fully_reflectable(&self) -> bool {
        (0..self.size()).all(|x| self.reflectable(x))
    }

    pub fn flags(&self) -> VertexFlags {
        let n = self.size();
        let refl: Vec<bool> = (0..n).map(|x| self.reflectable(x)).collect();
        let weakly_symmetrizable = (0..n).filter(|&x| refl[x]).all(|x| {
            (0..n).all(|y| !self.a[x][y].is_zero() || self.a[y][x].is_zero())
        });
        VertexFlags {
            weakly_symmetrizable,
            fully_reflectable: refl.iter().all(|&b| b),
            indecomposable: self.blocks().len() == 1,
            symmetrizable: self.symmetrize().is_some(),
        }
    }

    /// `D` with `self.A = D · other.A`, when the parities agree.
    pub fn d_equivalence(&self, other: &CartanDatum) -> Option<Vec<Scalar>> {
        let n = self.size();
        if other.size() != n || self.p != other.p {
            return None;
        }
        let mut d = Vec::with_capacity(n);
        for i in 0..n {
            let j = (0..n).find(|&j| !other.a[i][j].is_zero());
            let di = match j {
                None => {
                    if self.a[i].iter().any(|s| !s.is_zero()) {
                        return None;
                    }
                    Scalar::one()
                }
                Some(j) => &self.a[i][j] / &other.a[i][j],
            };
            if di.is_zero() {
                return None;
            }
            if (0..n).any(|k| self.a[i][k] != &di * &other.a[i][k]) {
                return None;
            }
            d.push(di);
        }
        Some(d)
    }

    /// `Some((D, D·A))` with `D·A` symmetric; the first index of every block
    /// gets `D = 1`.
    pub fn symmetrize(&self) -> Option<(Vec<Scalar>, CartanDatum)> {
        let n = self.size();
        let mut d: Vec<Option<Scalar>> = vec![None; n];
        for block in self.blocks() {
            d[block[0]] = Some(Scalar::one());
            let mut queue = VecDeque::from([block[0]]);
            while let Some(i) = queue.pop_front() {
                let di = d[i].clone().unwrap();
                for j in 0..n {
                    if !self.adjacent(i, j) {
                        continue;
                    }
                    if self.a[i][j].is_zero() || self.a[j][i].is_zero() {
                        return None;
                    }
                    // d_i a_ij = d_j a_ji
                    let dj = &(&di * &self.a[i][j]) / &self.a[j][i];
                    match &d[j] {
                        None => {
                            d[j] = Some(dj);
                            queue.push_back(j);
                        }
                        Some(old) if *old != dj => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let d: Vec<Scalar> = d.into_iter().map(|x| x.unwrap()).collect();
        let a: Vec<Vec<Scalar>> =
            (0..n).map(|i| (0..n).map(|j| &d[i] * &self.a[i][j]).collect()).collect();
        for i in 0..n {
            for j in 0..i {
                if a[i][j] != a[j][i] {
                    return None;
                }
            }
        }
        Some((d, self.with_matrix(a, self.p.clone())))
    }

    /// `D·A` for a diagonal `D`.
    pub fn scaled(&self, d: &[Scalar]) -> CartanDatum {
        let a = self.a.iter().zip(d).map(|(r, di)| r.iter().map(|s| di * s).collect()).collect();
        self.with_matrix(a, self.p.clone())
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..i).all(|j| self.a[i][j] == self.a[j][i]))
    }

    pub fn to_json_value(&self) -> CartanJson {
        CartanJson {
            size: self.size(),
            parity: self.p.clone(),
            matrix: self.a.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect(),
            field: FieldJson {
                parameters: self.field.params().to_vec(),
                minpoly: self.field.minpoly().map_or(vec![], |f| f.iter().map(q_string).collect()),
                nonzero_assumptions: self.field.nonzero_assumptions().to_vec(),
                root_interval: self.field.root_interval().map(|(a, b)| vec![q_string(a), q_string(b)]),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, CartanError> {
        let j: CartanJson = serde_json::from_str(s).map_err(|e| CartanError::Json(e.to_string()))?;
        CartanDatum::from_json_value(&j)
    }

    pub fn from_json_value(j: &CartanJson) -> Result<Self, CartanError> {
        let plain = Arc::new(Field::rational());
        let rat = |s: &String| -> Result<Q, CartanError> {
            parse_scalar(s, &plain)?
                .as_rational()
                .cloned()
                .ok_or_else(|| CartanError::Json(format!("{s:?} is not rational")))
        };
        let minpoly = if j.field.minpoly.is_empty() {
            None
        } else {
            Some(j.field.minpoly.iter().map(rat).collect::<Result<Vec<_>, _>>()?)
        };
        let interval = match &j.field.root_interval {
            None => None,
            Some(v) if v.len() == 2 => Some((rat(&v[0])?, rat(&v[1])?)),
            Some(_) => return Err(CartanError::Json("root_interval needs two bounds".into())),
        };
        let mut field = Field::new(j.field.parameters.clone(), minpoly, interval)?;
        let probe = Arc::new(field.clone());
        let mut assumptions = vec![];
        for s in &j.field.nonzero_assumptions {
            let v = parse_scalar(s, &probe)?;
            if v.is_zero() {
                return Err(CartanError::ZeroAssumption(s.clone()));
            }
            assumptions.push(v.to_string());
        }
        for s in assumptions {
            field.push_assumption(s);
        }
        let field = Arc::new(field);
        if j.matrix.len() != j.size {
            return Err(CartanError::NotSquare);
        }
        let a = j
            .matrix
            .iter()
            .map(|r| r.iter().map(|s| parse_scalar(s, &field)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let a = rehome(&field, a);
        CartanDatum::new(field, a, j.parity.clone())
    }
}

/// Reattach parsed scalars to the final field instance.
fn rehome(field: &Arc<Field>, a: Vec<Vec<Scalar>>) -> Vec<Vec<Scalar>> {
    a.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|s| match s {
                    Scalar::Fun(_, f) => Scalar::Fun(field.clone(), f),
                    other => other,
                })
                .collect()
        })
        .collect()
}

fn q_string(q: &Q) -> String {
    Scalar::from_q(q.clone()).to_string()
}

impl fmt::Display for CartanDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, p) in self.a.iter().zip(&self.p) {
            let cells: Vec<String> = r.iter().map(|s| s.to_string()).collect();
            writeln!(f, "[{}]  p={}", cells.join(", "), p)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub parameters: Vec<String>,
    pub minpoly: Vec<String>,
    pub nonzero_assumptions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_interval: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanJson {
    pub size: usize,
    pub parity: Vec<u8>,
    pub matrix: Vec<Vec<String>>,
    pub field: FieldJson,
}

pub(crate) fn components(n: usize, adj: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = vec![];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && adj(i, j) {
                    seen[j] = true;
                    comp.push(j);
                    stack.push(j);
                }
            }
        }
        comp.sort();
        out.push(comp);
    }
    out
}

/// A generalized Cartan matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gcm(IntMatrix);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GcmType {
    Fin,
    Aff,
    Ind,
}

impl fmt::Display for GcmType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", match self {
            GcmType::Fin => "Fin",
            GcmType::Aff => "Aff",
            GcmType::Ind => "Ind",
        })
    }
}

impl Gcm {
    pub fn new(m: IntMatrix) -> Result<Self, CartanError> {
        let n = m.rows();
        if m.cols() != n {
            return Err(CartanError::NotGcm("not square".into()));
        }
        for i in 0..n {
            if m[(i, i)] != 2 {
                return Err(CartanError::NotGcm(format!("diagonal entry {i} is {}", m[(i, i)])));
            }
            for j in 0..n {
                if i != j && (m[(i, j)] > 0 || (m[(i, j)] == 0) != (m[(j, i)] == 0)) {
                    return Err(CartanError::NotGcm(format!("entry ({i},{j})")));
                }
            }
        }
        Ok(Gcm(m))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        components(self.size(), |i, j| i != j && self.0[(i, j)] != 0)
    }

    fn minor(&self, idx: &[usize]) -> Scalar {
        let m: Vec<Vec<Scalar>> =
            idx.iter().map(|&i| idx.iter().map(|&j| Scalar::int(self.0[(i, j)])).collect()).collect();
        det(&m)
    }

    fn block_type(&self, block: &[usize]) -> GcmType {
        let k = block.len();
        let mut proper_positive = true;
        for mask in 1u64..(1u64 << k) {
            if mask == (1u64 << k) - 1 {
                continue;
            }
            let idx: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| block[b]).collect();
            if !matches!(self.minor(&idx).integrality(), Integrality::NonnegativeInteger(_)) {
                proper_positive = false;
                break;
            }
        }
        if !proper_positive {
            return GcmType::Ind;
        }
        match self.minor(block).integrality() {
            Integrality::NonnegativeInteger(_) => GcmType::Fin,
            Integrality::Integer(_) => GcmType::Aff,
            _ => GcmType::Ind,
        }
    }

    /// Type of every indecomposable block, in block order.
    pub fn block_types(&self) -> Vec<(Vec<usize>, GcmType)> {
        self.blocks().into_iter().map(|b| {
            let t = self.block_type(&b);
            (b, t)
        }).collect()
    }

    /// Trichotomy; decomposable matrices get their worst block.
    pub fn gcm_type(&self, require_indecomposable: bool) -> Result<GcmType, CartanError> {
        let blocks = self.block_types();
        if require_indecomposable && blocks.len() > 1 {
            return Err(CartanError::NotGcm("decomposable".into()));
        }
        Ok(blocks.into_iter().map(|(_, t)| t).max().unwrap_or(GcmType::Fin))
    }
}
