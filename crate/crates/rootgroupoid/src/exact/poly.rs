//! Sparse multivariate polynomials over `K = Q[θ]/(f)` and their gcd.

use std::collections::BTreeMap;

use super::field::{Field, Nf, Q};

pub type Monomial = Vec<u32>;

/// Terms keyed by exponent vectors; lexicographic key order doubles as the
/// monomial order, so the last key is the leading monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    pub(crate) terms: BTreeMap<Monomial, Nf>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(k: &Field, c: Nf) -> Self {
        let mut p = Poly::zero();
        if !Field::nf_is_zero(&c) {
            p.terms.insert(vec![0; k.nparams()], c);
        }
        p
    }

    pub fn one(k: &Field) -> Self {
        Poly::constant(k, k.nf_const(Q::from_integer(1.into())))
    }

    pub fn var(k: &Field, i: usize) -> Self {
        let mut m = vec![0; k.nparams()];
        m[i] = 1;
        let mut p = Poly::zero();
        p.terms.insert(m, k.nf_const(Q::from_integer(1.into())));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant coefficient when the polynomial has no parameter.
    pub fn as_constant(&self) -> Option<Nf> {
        match self.terms.len() {
            0 => None,
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                if m.iter().all(|&e| e == 0) {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || self.as_constant().is_some()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Nf)> {
        self.terms.iter().next_back()
    }

    fn insert_add(&mut self, m: Monomial, c: Nf) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                if !Field::nf_is_zero(&c) {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                let s = Field::nf_add(e.get(), &c);
                if Field::nf_is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), Field::nf_neg(c))).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), Field::nf_neg(c));
        }
        out
    }

    pub fn mul(&self, k: &Field, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.insert_add(m, k.nf_mul(c1, c2));
            }
        }
        out
    }

    pub fn scale(&self, k: &Field, c: &Nf) -> Poly {
        if Field::nf_is_zero(c) {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (m.clone(), k.nf_mul(x, c))).collect() }
    }

    fn mul_term(&self, k: &Field, m: &Monomial, c: &Nf) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            let mm: Monomial = m1.iter().zip(m).map(|(a, b)| a + b).collect();
            out.insert_add(mm, k.nf_mul(c1, c));
        }
        out
    }

    /// Scales to make the leading coefficient 1.
    pub fn monic(&self, k: &Field) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) => {
                let inv = k.nf_inv(c).expect("nonzero leading coefficient");
                self.scale(k, &inv)
            }
        }
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m[i]).max().unwrap_or(0)
    }

    /// Coefficients as polynomials in the other variables, keyed by the
    /// exponent of variable `i`.
    fn coeffs_in(&self, i: usize) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut mm = m.clone();
            let e = mm[i];
            mm[i] = 0;
            out.entry(e).or_default().terms.insert(mm, c.clone());
        }
        out
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, k: &Field, d: &Poly) -> Option<Poly> {
        let (lm, lc) = d.leading()?;
        let lc_inv = k.nf_inv(lc)?;
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some((rm, rc)) = r.leading() {
            if rm.iter().zip(lm).any(|(a, b)| a < b) {
                return None;
            }
            let m: Monomial = rm.iter().zip(lm).map(|(a, b)| a - b).collect();
            let c = k.nf_mul(rc, &lc_inv);
            r = r.sub(&d.mul_term(k, &m, &c));
            q.insert_add(m, c);
        }
        Some(q)
    }

    /// Pseudo-remainder of `self` by `b` viewed as polynomials in variable `i`.
    fn prem(&self, k: &Field, b: &Poly, i: usize) -> Poly {
        let db = b.degree_in(i);
        let lb = b.coeffs_in(i).remove(&db).unwrap();
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(i) >= db {
            let dr = r.degree_in(i);
            let lr = r.coeffs_in(i).remove(&dr).unwrap();
            let mut shift = vec![0; k.nparams()];
            shift[i] = dr - db;
            let one = k.nf_const(Q::from_integer(1.into()));
            let t = lr.mul_term(k, &shift, &one).mul(k, b);
            r = lb.mul(k, &r).sub(&t);
        }
        r
    }

    fn content_in(&self, k: &Field, i: usize) -> Poly {
        let mut g = Poly::zero();
        for (_, c) in self.coeffs_in(i) {
            g = gcd_from(k, &g, &c, i + 1);
            if g.is_constant() && !g.is_zero() {
                return Poly::one(k);
            }
        }
        g
    }

    fn primitive_in(&self, k: &Field, i: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.content_in(k, i);
        self.div_exact(k, &c).expect("content divides")
    }
}

/// Monic gcd over `K[t_1..t_k]`.
pub fn gcd(k: &Field, a: &Poly, b: &Poly) -> Poly {
    gcd_from(k, a, b, 0)
}

fn gcd_from(k: &Field, a: &Poly, b: &Poly, from: usize) -> Poly {
    if a.is_zero() {
        return b.monic(k);
    }
    if b.is_zero() {
        return a.monic(k);
    }
    let var = (from..k.nparams()).find(|&i| a.degree_in(i) > 0 || b.degree_in(i) > 0);
    let i = match var {
        None => return Poly::one(k),
        Some(i) => i,
    };
    let ca = a.content_in(k, i);
    let cb = b.content_in(k, i);
    let c = gcd_from(k, &ca, &cb, i + 1);
    let mut pa = a.div_exact(k, &ca).expect("content divides");
    let mut pb = b.div_exact(k, &cb).expect("content divides");
    if pa.degree_in(i) < pb.degree_in(i) {
        std::mem::swap(&mut pa, &mut pb);
    }
    // with no variables left beyond `i` the coefficients form a field, so
    // monic remainders keep them from swelling
    let last = (i + 1..k.nparams()).all(|j| pa.degree_in(j) == 0 && pb.degree_in(j) == 0);
    while !pb.is_zero() {
        let r = pa.prem(k, &pb, i);
        pa = pb;
        pb = if last && !r.is_zero() { r.monic(k) } else { r.primitive_in(k, i) };
    }
    pa.primitive_in(k, i).mul(k, &c).monic(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field2() -> Field {
        Field::with_params(&["s", "t"])
    }

    fn c(k: &Field, n: i64) -> Poly {
        Poly::constant(k, k.nf_const(Q::from_integer(n.into())))
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let k = field2();
        let s = Poly::var(&k, 0);
        let t = Poly::var(&k, 1);
        let common = s.mul(&k, &t).add(&c(&k, 1)); // st + 1
        let a = common.mul(&k, &s.sub(&t));
        let b = common.mul(&k, &s.add(&c(&k, 3)));
        assert_eq!(gcd(&k, &a, &b), common.monic(&k));
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let k = field2();
        let s = Poly::var(&k, 0);
        let t = Poly::var(&k, 1);
        assert_eq!(gcd(&k, &s, &t), Poly::one(&k));
    }

    #[test]
    fn exact_division_detects_non_divisibility() {
        let k = field2();
        let s = Poly::var(&k, 0);
        let t = Poly::var(&k, 1);
        assert!(s.div_exact(&k, &t).is_none());
        let p = s.mul(&k, &t);
        assert_eq!(p.div_exact(&k, &t), Some(s));
    }
}
