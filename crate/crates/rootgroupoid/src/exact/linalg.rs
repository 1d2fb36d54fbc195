//! Integer matrices, Smith normal form, and exact Gaussian elimination.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::scalar::Scalar;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.concat() }
    }

    pub fn from_cols(cols: &[Vec<i64>]) -> Self {
        IntMatrix::from_rows(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a.checked_mul(other[(k, j)]).expect("integer overflow");
                    out[(i, j)] = out[(i, j)].checked_add(p).expect("integer overflow");
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .try_fold(0i64, |acc, (a, b)| acc.checked_add(a.checked_mul(*b)?))
                    .expect("integer overflow")
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == IntMatrix::identity(self.rows)
    }

    pub fn pow(&self, e: u32) -> IntMatrix {
        let mut acc = IntMatrix::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact determinant via fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let m: Vec<Vec<Scalar>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(Scalar::int).collect())
            .collect();
        det(&m).as_integer().expect("integer determinant")
    }

    /// Inverse when unimodular.
    pub fn inverse(&self) -> Option<IntMatrix> {
        let m = to_scalar(self);
        let inv = inverse(&m)?;
        let rows: Option<Vec<Vec<i64>>> =
            inv.iter().map(|r| r.iter().map(|x| x.as_i64()).collect()).collect();
        rows.map(|r| IntMatrix::from_rows(&r))
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn to_scalar(m: &IntMatrix) -> Vec<Vec<Scalar>> {
    m.to_rows().into_iter().map(|r| r.into_iter().map(Scalar::int).collect()).collect()
}

/// Result of [`smith_normal_form`]: `m = u * d * v`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)]).collect()
    }
}

type Big = Vec<Vec<BigInt>>;

fn big_identity(n: usize) -> Big {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn to_int(m: &Big) -> IntMatrix {
    let rows: Vec<Vec<i64>> =
        m.iter().map(|r| r.iter().map(|x| x.to_i64().expect("entry fits i64")).collect()).collect();
    if rows.is_empty() {
        return IntMatrix::zeros(0, 0);
    }
    IntMatrix::from_rows(&rows)
}

/// Smith normal form with transforms, `m = u·d·v`, `u`, `v` unimodular and
/// `d_1 | d_2 | ...` nonnegative.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (r, c) = (m.rows(), m.cols());
    let mut a: Big = m.to_rows().into_iter().map(|row| row.into_iter().map(BigInt::from).collect()).collect();
    // u = L^{-1}, v = R^{-1}; row op E on a multiplies u on the right by E^{-1}
    let mut u = big_identity(r);
    let mut v = big_identity(c);

    // row i += k * row j  =>  u: col j -= k * col i
    fn row_add(a: &mut Big, u: &mut Big, i: usize, j: usize, k: &BigInt) {
        for col in 0..a[0].len() {
            let t = &a[j][col] * k;
            a[i][col] += t;
        }
        for row in u.iter_mut() {
            let t = &row[i] * k;
            row[j] -= t;
        }
    }
    fn col_add(a: &mut Big, v: &mut Big, i: usize, j: usize, k: &BigInt) {
        for row in a.iter_mut() {
            let t = &row[j] * k;
            row[i] += t;
        }
        let vi = v[i].clone();
        for (col, x) in vi.iter().enumerate() {
            let t = x * k;
            v[j][col] -= t;
        }
    }
    fn row_swap(a: &mut Big, u: &mut Big, i: usize, j: usize) {
        a.swap(i, j);
        for row in u.iter_mut() {
            row.swap(i, j);
        }
    }
    fn col_swap(a: &mut Big, v: &mut Big, i: usize, j: usize) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        v.swap(i, j);
    }

    let n = r.min(c);
    for t in 0..n {
        loop {
            // pivot: smallest nonzero absolute value in the remaining block
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let (pi, pj) = match best {
                None => break,
                Some(p) => p,
            };
            row_swap(&mut a, &mut u, t, pi);
            col_swap(&mut a, &mut v, t, pj);
            let mut clean = true;
            for i in t + 1..r {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    row_add(&mut a, &mut u, i, t, &-q);
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..c {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    col_add(&mut a, &mut v, j, t, &-q);
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold any offending entry into row t
            let mut bad = None;
            'outer: for i in t + 1..r {
                for j in t + 1..c {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        bad = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad {
                Some(i) => row_add(&mut a, &mut u, t, i, &BigInt::one()),
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for col in 0..c {
                a[t][col] = -a[t][col].clone();
            }
            for row in u.iter_mut() {
                row[t] = -row[t].clone();
            }
        }
    }
    Smith { u: to_int(&u), d: to_int(&a), v: to_int(&v) }
}

/// Reduced row echelon form over the scalar field; returns pivot columns.
pub fn rref(m: &mut [Vec<Scalar>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let p = match (r..rows).find(|&i| !m[i][c].is_zero()) {
            None => continue,
            Some(p) => p,
        };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for j in c..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Scalar>]) -> usize {
    let mut w = m.to_vec();
    rref(&mut w).len()
}

pub fn det(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Scalar::one();
    for c in 0..n {
        let p = match (c..n).find(|&i| !a[i][c].is_zero()) {
            None => return Scalar::zero(),
            Some(p) => p,
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d = &d * &a[c][c];
        let inv = a[c][c].inv().unwrap();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] = &a[i][j] - &t;
            }
        }
    }
    d
}

pub fn inverse(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            row
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of the right kernel `{x : m x = 0}`.
pub fn kernel(m: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    let mut w = m.to_vec();
    let piv = rref(&mut w);
    let free: Vec<usize> = (0..ncols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Scalar::zero(); ncols];
            x[f] = Scalar::one();
            for (r, &p) in piv.iter().enumerate() {
                x[p] = -&w[r][f];
            }
            x
        })
        .collect()
}

/// Unique solution of `Σ_j x_j cols[j] = target`, if the columns are
/// independent and the target lies in their span.
pub fn solve_in_span(cols: &[Vec<Scalar>], target: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = target.len();
    let k = cols.len();
    let mut aug: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            let mut row: Vec<Scalar> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.contains(&k) || piv.len() < k {
        return None;
    }
    Some((0..k).map(|r| aug[r][k].clone()).collect())
}

/// Some solution of `Σ_j x_j cols[j] = target` (free variables set to zero),
/// with no independence requirement.
pub fn solve_any(cols: &[Vec<Scalar>], target: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = target.len();
    let k = cols.len();
    let mut aug: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            let mut row: Vec<Scalar> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.contains(&k) {
        return None;
    }
    let mut x = vec![Scalar::zero(); k];
    for (r, &p) in piv.iter().enumerate() {
        x[p] = aug[r][k].clone();
    }
    Some(x)
}

pub fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| {
                    row.iter().zip(b).fold(Scalar::zero(), |acc, (x, br)| {
                        if x.is_zero() || br[j].is_zero() {
                            acc
                        } else {
                            acc + x * &br[j]
                        }
                    })
                })
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}
