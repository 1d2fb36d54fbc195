//! The exact scalar type used for Cartan matrix entries.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::{Field, Nf, Q};
use super::poly::{gcd, Monomial, Poly};

/// An element of `K(t_1..t_k)`. Rational constants are kept in the `Rat`
/// variant whatever the ambient field, so mixing them with field elements
/// is always allowed; `Fun` values are canonical (coprime, monic
/// denominator) and never equal to a rational constant.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rat(Q),
    Fun(Arc<Field>, Arc<RatFun>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun {
    pub(crate) num: Poly,
    pub(crate) den: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Integrality {
    NotInteger,
    Integer(BigInt),
    NonpositiveInteger(BigInt),
    NonnegativeInteger(BigInt),
}

impl Integrality {
    pub fn is_nonpositive_integer(&self) -> bool {
        matches!(self, Integrality::NonpositiveInteger(_))
            || matches!(self, Integrality::Integer(n) if !n.is_positive())
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(Q::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(Q::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rat(Q::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::Rat(Q::new(n.into(), d.into()))
    }

    pub fn from_q(q: Q) -> Self {
        Scalar::Rat(q)
    }

    /// The `i`-th parameter of `k` as a scalar.
    pub fn param(k: &Arc<Field>, i: usize) -> Self {
        Scalar::from_parts(k, Poly::var(k, i), Poly::one(k))
    }

    /// The algebraic generator θ of `k`.
    pub fn theta(k: &Arc<Field>) -> Self {
        assert!(k.degree() > 1, "field has no algebraic generator");
        Scalar::from_parts(k, Poly::constant(k, k.nf_theta()), Poly::one(k))
    }

    fn lift(&self, k: &Field) -> (Poly, Poly) {
        match self {
            Scalar::Rat(q) => (Poly::constant(k, k.nf_const(q.clone())), Poly::one(k)),
            Scalar::Fun(_, f) => (f.num.clone(), f.den.clone()),
        }
    }

    /// Canonicalizes `num/den`.
    pub(crate) fn from_parts(k: &Arc<Field>, num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "division by zero");
        if num.is_zero() {
            return Scalar::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(k, &num, &den);
            (num.div_exact(k, &g).unwrap(), den.div_exact(k, &g).unwrap())
        };
        let lc = den.leading().unwrap().1.clone();
        let inv = k.nf_inv(&lc).expect("nonzero leading coefficient");
        let num = num.scale(k, &inv);
        let den = den.scale(k, &inv);
        if den.is_constant() {
            if let Some(c) = num.as_constant() {
                if c[1..].iter().all(|x| x.is_zero()) {
                    return Scalar::Rat(c[0].clone());
                }
            }
        }
        Scalar::Fun(k.clone(), Arc::new(RatFun { num, den }))
    }

    fn field_of<'a>(a: &'a Scalar, b: &'a Scalar) -> Option<&'a Arc<Field>> {
        match (a, b) {
            (Scalar::Fun(k1, _), Scalar::Fun(k2, _)) => {
                assert!(Arc::ptr_eq(k1, k2) || k1 == k2, "scalars from different fields");
                Some(k1)
            }
            (Scalar::Fun(k, _), _) | (_, Scalar::Fun(k, _)) => Some(k),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(q) if q.is_one())
    }

    pub fn as_rational(&self) -> Option<&Q> {
        match self {
            Scalar::Rat(q) => Some(q),
            Scalar::Fun(..) => None,
        }
    }

    pub fn field(&self) -> Option<&Arc<Field>> {
        match self {
            Scalar::Rat(_) => None,
            Scalar::Fun(k, _) => Some(k),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(q) if q.is_zero() => None,
            Scalar::Rat(q) => Some(Scalar::Rat(q.recip())),
            Scalar::Fun(k, f) => Some(Scalar::from_parts(k, f.den.clone(), f.num.clone())),
        }
    }

    /// Classifies `self` against the integers. Non-constant values are never
    /// integers because parameters are formal and θ is irrational.
    pub fn integrality(&self) -> Integrality {
        match self {
            Scalar::Rat(q) if q.is_integer() => {
                let n = q.to_integer();
                if n.is_zero() {
                    Integrality::Integer(n)
                } else if n.is_negative() {
                    Integrality::NonpositiveInteger(n)
                } else {
                    Integrality::NonnegativeInteger(n)
                }
            }
            _ => Integrality::NotInteger,
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        match self.integrality() {
            Integrality::NotInteger => None,
            Integrality::Integer(n)
            | Integrality::NonpositiveInteger(n)
            | Integrality::NonnegativeInteger(n) => Some(n),
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        self.as_integer().and_then(|n| n.to_i64())
    }

    /// Sign of a constant real scalar, using the isolating interval of θ when
    /// needed. `None` when parameters are involved or no embedding is known.
    pub fn real_sign(&self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering;
        match self {
            Scalar::Rat(q) => Some(q.cmp(&Q::zero())),
            Scalar::Fun(k, f) => {
                let n = f.num.as_constant()?;
                let d = f.den.as_constant()?;
                let v = k.nf_mul(&n, &k.nf_inv(&d)?);
                // refine until the interval image excludes zero
                let mut w = Q::new(1.into(), 16.into());
                for _ in 0..200 {
                    let (lo, hi) = k.theta_interval(&w)?;
                    let (a, b) = eval_interval(&v, &lo, &hi);
                    if a.is_positive() {
                        return Some(Ordering::Greater);
                    }
                    if b.is_negative() {
                        return Some(Ordering::Less);
                    }
                    w /= Q::from_integer(16.into());
                }
                None
            }
        }
    }

    /// Floating approximation for display and labelling only.
    pub fn approx(&self) -> Option<f64> {
        use num_traits::ToPrimitive;
        match self {
            Scalar::Rat(q) => q.to_f64(),
            Scalar::Fun(k, f) => {
                let n = f.num.as_constant()?;
                let d = f.den.as_constant()?;
                let v = k.nf_mul(&n, &k.nf_inv(&d)?);
                let (lo, hi) = k.theta_interval(&Q::new(1.into(), BigInt::from(10u64).pow(18)))?;
                let (a, _) = eval_interval(&v, &lo, &hi);
                a.to_f64()
            }
        }
    }

    /// Flattened view as a polynomial in (θ, t_1..t_k) with rational coefficients.
    fn flat_terms(k: &Field, p: &Poly) -> Vec<(Vec<u32>, Q)> {
        let mut out = vec![];
        for (m, c) in &p.terms {
            for (j, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    let mut key: Monomial = m.clone();
                    key.push(j as u32);
                    out.push((key, x.clone()));
                }
            }
        }
        let _ = k;
        out.sort_by(|a, b| b.0.cmp(&a.0));
        out
    }
}

/// Crude interval image of an element of `K` given θ ∈ [lo, hi].
fn eval_interval(v: &Nf, lo: &Q, hi: &Q) -> (Q, Q) {
    let mut a = Q::zero();
    let mut b = Q::zero();
    for (j, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = j as i32;
        let p_lo = num_traits::pow::Pow::pow(lo.clone(), e);
        let p_hi = num_traits::pow::Pow::pow(hi.clone(), e);
        let mut cands = vec![&p_lo * c, &p_hi * c];
        if e % 2 == 0 && lo.is_negative() && hi.is_positive() {
            cands.push(Q::zero());
        }
        let mn = cands.iter().min().unwrap().clone();
        let mx = cands.iter().max().unwrap().clone();
        a += mn;
        b += mx;
    }
    (a, b)
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
            (Scalar::Fun(k1, a), Scalar::Fun(k2, b)) => (Arc::ptr_eq(k1, k2) || k1 == k2) && a == b,
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Scalar::Rat(q) => {
                0u8.hash(state);
                q.hash(state);
            }
            Scalar::Fun(_, f) => {
                1u8.hash(state);
                f.hash(state);
            }
        }
    }
}

fn binop(a: &Scalar, b: &Scalar, op: char) -> Scalar {
    if let (Scalar::Rat(x), Scalar::Rat(y)) = (a, b) {
        return Scalar::Rat(match op {
            '+' => x + y,
            '-' => x - y,
            '*' => x * y,
            '/' => {
                assert!(!y.is_zero(), "division by zero");
                x / y
            }
            _ => unreachable!(),
        });
    }
    let k = Scalar::field_of(a, b).unwrap().clone();
    let (an, ad) = a.lift(&k);
    let (bn, bd) = b.lift(&k);
    let (num, den) = match op {
        '+' | '-' => {
            let l = an.mul(&k, &bd);
            let r = bn.mul(&k, &ad);
            (if op == '+' { l.add(&r) } else { l.sub(&r) }, ad.mul(&k, &bd))
        }
        '*' => (an.mul(&k, &bn), ad.mul(&k, &bd)),
        '/' => {
            assert!(!bn.is_zero(), "division by zero");
            (an.mul(&k, &bd), ad.mul(&k, &bn))
        }
        _ => unreachable!(),
    };
    Scalar::from_parts(&k, num, den)
}

macro_rules! impl_op {
    ($tr:ident, $f:ident, $c:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $f(self, rhs: &Scalar) -> Scalar {
                binop(self, rhs, $c)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, rhs: Scalar) -> Scalar {
                binop(&self, &rhs, $c)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, rhs: &Scalar) -> Scalar {
                binop(&self, rhs, $c)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $f(self, rhs: Scalar) -> Scalar {
                binop(self, &rhs, $c)
            }
        }
    };
}

impl_op!(Add, add, '+');
impl_op!(Sub, sub, '-');
impl_op!(Mul, mul, '*');
impl_op!(Div, div, '/');

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(q) => Scalar::Rat(-q),
            Scalar::Fun(k, f) => Scalar::Fun(k.clone(), Arc::new(RatFun { num: f.num.neg(), den: f.den.clone() })),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

fn write_flat(
    f: &mut fmt::Formatter<'_>,
    k: &Field,
    terms: &[(Vec<u32>, BigInt)],
) -> fmt::Result {
    for (idx, (key, c)) in terms.iter().enumerate() {
        let (pexp, th) = key.split_at(key.len() - 1);
        let mut factors: Vec<String> = vec![];
        for (i, &e) in pexp.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(k.params()[i].clone()),
                _ => factors.push(format!("{}^{}", k.params()[i], e)),
            }
        }
        match th[0] {
            0 => {}
            1 => factors.push("θ".into()),
            e => factors.push(format!("θ^{e}")),
        }
        let neg = c.is_negative();
        let a = c.abs();
        if idx == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if neg { "-" } else { "+" })?;
        }
        if factors.is_empty() {
            write!(f, "{a}")?;
        } else {
            if !a.is_one() {
                write!(f, "{a}*")?;
            }
            write!(f, "{}", factors.join("*"))?;
        }
    }
    Ok(())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fun(k, r) => {
                let nt = Scalar::flat_terms(k, &r.num);
                let dt = Scalar::flat_terms(k, &r.den);
                let mut l = BigInt::one();
                for (_, c) in nt.iter().chain(dt.iter()) {
                    l = l.lcm(c.denom());
                }
                let lq = Q::from_integer(l);
                let to_int = |v: &[(Vec<u32>, Q)]| -> Vec<(Vec<u32>, BigInt)> {
                    v.iter().map(|(m, c)| (m.clone(), (c * &lq).to_integer())).collect()
                };
                let mut ni = to_int(&nt);
                let mut di = to_int(&dt);
                let mut g = BigInt::zero();
                for (_, c) in ni.iter().chain(di.iter()) {
                    g = g.gcd(c);
                }
                if di[0].1.is_negative() {
                    g = -g;
                }
                for (_, c) in ni.iter_mut().chain(di.iter_mut()) {
                    *c = &*c / &g;
                }
                let den_const = di.len() == 1 && di[0].0.iter().all(|&e| e == 0);
                if den_const && di[0].1.is_one() {
                    return write_flat(f, k, &ni);
                }
                if ni.len() > 1 {
                    write!(f, "(")?;
                    write_flat(f, k, &ni)?;
                    write!(f, ")")?;
                } else {
                    write_flat(f, k, &ni)?;
                }
                write!(f, "/")?;
                if den_const {
                    write!(f, "{}", di[0].1)
                } else {
                    write!(f, "(")?;
                    write_flat(f, k, &di)?;
                    write!(f, ")")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kt() -> Arc<Field> {
        Arc::new(Field::with_params(&["t"]))
    }

    #[test]
    fn integrality_examples() {
        assert_eq!(Scalar::int(-3).integrality(), Integrality::NonpositiveInteger((-3).into()));
        assert_eq!(Scalar::ratio(-3, 2).integrality(), Integrality::NotInteger);
        let k = kt();
        assert_eq!(Scalar::param(&k, 0).integrality(), Integrality::NotInteger);
    }

    #[test]
    fn cancellation_returns_rational() {
        let k = kt();
        let t = Scalar::param(&k, 0);
        let x = (&t * &t - Scalar::one()) / (&t - Scalar::one());
        assert_eq!(x, &t + Scalar::one());
        let y = (&t + Scalar::int(2)) - &t;
        assert_eq!(y, Scalar::int(2));
        assert!(matches!(y, Scalar::Rat(_)));
    }

    #[test]
    fn display_forms() {
        let k = kt();
        let t = Scalar::param(&k, 0);
        assert_eq!((Scalar::int(3) * &t - Scalar::one()) / Scalar::int(2), {
            let s = (Scalar::int(3) * &t - Scalar::one()) / Scalar::int(2);
            assert_eq!(s.to_string(), "(3*t-1)/2");
            s
        });
        assert_eq!(Scalar::ratio(-3, 2).to_string(), "-3/2");
        let s = Scalar::one() / (&t + Scalar::one());
        assert_eq!(s.to_string(), "1/(t+1)");
    }
}
