//! Coefficient field `K = Q[θ]/(f)` and the parameter context `K(t_1, ..., t_k)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ExactError;

pub type Q = BigRational;

/// An element of `K`, stored as coefficients of `1, θ, ..., θ^{d-1}`.
pub type Nf = Vec<Q>;

/// The field in which every scalar of one computation lives.
///
/// `minpoly` is monic with ascending coefficients; `None` means plain `Q`.
/// Parameters are formal indeterminates. Every nonzero assumption is checked
/// to be a nonzero element of the field at construction, which is all that
/// genericity of a formal parameter requires.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    params: Vec<String>,
    minpoly: Option<Vec<Q>>,
    nonzero: Vec<String>,
    root_interval: Option<(Q, Q)>,
}

impl Field {
    pub fn rational() -> Self {
        Field { params: vec![], minpoly: None, nonzero: vec![], root_interval: None }
    }

    pub fn with_params(params: &[&str]) -> Self {
        Field {
            params: params.iter().map(|s| s.to_string()).collect(),
            ..Field::rational()
        }
    }

    /// Builds `Q(params)[θ]/(f)`. `f` is given by ascending coefficients and
    /// is made monic. Degree-1 polynomials are rejected: use plain `Q`.
    pub fn new(
        params: Vec<String>,
        minpoly: Option<Vec<Q>>,
        root_interval: Option<(Q, Q)>,
    ) -> Result<Self, ExactError> {
        for (i, p) in params.iter().enumerate() {
            if !is_identifier(p) || p == "θ" || p == "theta" {
                return Err(ExactError::BadField(format!("invalid parameter name {p:?}")));
            }
            if params[..i].contains(p) {
                return Err(ExactError::BadField(format!("duplicate parameter {p:?}")));
            }
        }
        let minpoly = match minpoly {
            None => None,
            Some(mut f) => {
                while f.last().is_some_and(|c| c.is_zero()) {
                    f.pop();
                }
                if f.len() < 3 {
                    return Err(ExactError::BadField(
                        "minimal polynomial must have degree at least 2".into(),
                    ));
                }
                let lc = f.last().unwrap().clone();
                for c in f.iter_mut() {
                    *c = &*c / &lc;
                }
                if has_rational_root(&f) {
                    return Err(ExactError::BadField(
                        "minimal polynomial has a rational root".into(),
                    ));
                }
                if f.len() == 3 {
                    let disc = &f[1] * &f[1] - Q::from_integer(4.into()) * &f[0];
                    if is_rational_square(&disc) {
                        return Err(ExactError::BadField("quadratic minimal polynomial splits".into()));
                    }
                }
                Some(f)
            }
        };
        if let Some((lo, hi)) = &root_interval {
            let f = minpoly
                .as_ref()
                .ok_or_else(|| ExactError::BadField("root interval without minimal polynomial".into()))?;
            if lo >= hi || (eval_q(f, lo) * eval_q(f, hi)).is_positive() || eval_q(f, lo).is_zero() {
                return Err(ExactError::BadField("root interval does not isolate a sign change".into()));
            }
        }
        Ok(Field { params, minpoly, nonzero: vec![], root_interval })
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn nparams(&self) -> usize {
        self.params.len()
    }

    pub fn minpoly(&self) -> Option<&[Q]> {
        self.minpoly.as_deref()
    }

    pub fn root_interval(&self) -> Option<&(Q, Q)> {
        self.root_interval.as_ref()
    }

    pub fn nonzero_assumptions(&self) -> &[String] {
        &self.nonzero
    }

    /// Records a declared nonzero assumption; the caller has verified it.
    pub(crate) fn push_assumption(&mut self, expr: String) {
        self.nonzero.push(expr);
    }

    pub fn is_rational(&self) -> bool {
        self.params.is_empty() && self.minpoly.is_none()
    }

    pub fn degree(&self) -> usize {
        self.minpoly.as_ref().map_or(1, |f| f.len() - 1)
    }

    pub(crate) fn nf_zero(&self) -> Nf {
        vec![Q::zero(); self.degree()]
    }

    pub(crate) fn nf_const(&self, q: Q) -> Nf {
        let mut v = self.nf_zero();
        v[0] = q;
        v
    }

    pub(crate) fn nf_theta(&self) -> Nf {
        let mut v = self.nf_zero();
        if v.len() > 1 {
            v[1] = Q::one();
        }
        v
    }

    pub(crate) fn nf_is_zero(a: &Nf) -> bool {
        a.iter().all(|c| c.is_zero())
    }

    pub(crate) fn nf_add(a: &Nf, b: &Nf) -> Nf {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub(crate) fn nf_neg(a: &Nf) -> Nf {
        a.iter().map(|x| -x).collect()
    }

    pub(crate) fn nf_mul(&self, a: &Nf, b: &Nf) -> Nf {
        let d = self.degree();
        if d == 1 {
            return vec![&a[0] * &b[0]];
        }
        let mut prod = vec![Q::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        self.reduce(prod)
    }

    fn reduce(&self, mut p: Vec<Q>) -> Nf {
        let f = self.minpoly.as_ref().unwrap();
        let d = f.len() - 1;
        while p.len() > d {
            let top = p.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = p.len() - d;
            for k in 0..d {
                let t = &top * &f[k];
                p[shift + k] -= t;
            }
        }
        p.resize(d, Q::zero());
        p
    }

    /// Inverse in `K` by the extended Euclidean algorithm against `f`.
    pub(crate) fn nf_inv(&self, a: &Nf) -> Option<Nf> {
        if Self::nf_is_zero(a) {
            return None;
        }
        if self.degree() == 1 {
            return Some(vec![a[0].recip()]);
        }
        let f = self.minpoly.as_ref().unwrap().clone();
        // invariant: s * a ≡ r (mod f)
        let (mut r0, mut r1) = (f, trim(a.clone()));
        let (mut s0, mut s1): (Vec<Q>, Vec<Q>) = (vec![], vec![Q::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        // r0 is the gcd; for irreducible f it is a nonzero constant
        if r0.len() != 1 {
            return None;
        }
        let c = r0[0].recip();
        let s: Vec<Q> = s0.iter().map(|x| x * &c).collect();
        Some(self.reduce(s))
    }

    /// Real approximation of θ inside the isolating interval, refined by
    /// bisection to the requested width.
    pub fn theta_interval(&self, width: &Q) -> Option<(Q, Q)> {
        let f = self.minpoly.as_ref()?;
        let (mut lo, mut hi) = self.root_interval.clone()?;
        let slo = eval_q(f, &lo).is_positive();
        while &(&hi - &lo) > width {
            let mid = (&lo + &hi) / Q::from_integer(2.into());
            let v = eval_q(f, &mid);
            if v.is_zero() {
                return Some((mid.clone(), mid));
            }
            if v.is_positive() == slo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some((lo, hi))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_')
}

fn trim(mut p: Vec<Q>) -> Vec<Q> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    let mut out = vec![Q::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(out)
}

fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divrem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lb = b[db].clone();
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![Q::zero(); r.len() - db];
    while r.len() >= b.len() {
        let k = r.len() - b.len();
        let c = r.last().unwrap() / &lb;
        for (j, y) in b.iter().enumerate() {
            r[k + j] -= &c * y;
        }
        q[k] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

pub(crate) fn eval_q(f: &[Q], x: &Q) -> Q {
    let mut acc = Q::zero();
    for c in f.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn is_rational_square(q: &Q) -> bool {
    if q.is_negative() {
        return false;
    }
    let is_sq = |n: &BigInt| {
        let r = n.sqrt();
        &(&r * &r) == n
    };
    is_sq(q.numer()) && is_sq(q.denom())
}

/// Rational root test on a monic rational polynomial.
fn has_rational_root(f: &[Q]) -> bool {
    if f[0].is_zero() {
        return true;
    }
    let l = f.iter().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    let ints: Vec<BigInt> = f.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect();
    let a0 = ints[0].abs();
    let an = ints.last().unwrap().abs();
    // the coefficients here are small; trial division over divisors suffices
    let divisors = |n: &BigInt| -> Vec<BigInt> {
        let mut out = vec![];
        let mut d = BigInt::one();
        while &(&d * &d) <= n {
            if (n % &d).is_zero() {
                out.push(d.clone());
                out.push(n / &d);
            }
            d += 1;
        }
        out
    };
    for p in divisors(&a0) {
        for q in divisors(&an) {
            for s in [1, -1] {
                let x = Q::new(&p * BigInt::from(s), q.clone());
                if eval_q(f, &x).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}
