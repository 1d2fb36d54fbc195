//! Named Cartan data and independent combinatorial models of their spines.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cartan::{CartanDatum, CartanError, GcmType};
use crate::exact::{parse_scalar, Field, Scalar, Q};
use crate::groupoid::MarkedAdjacency;
use crate::roots::ParityType;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("unknown family name {0:?}")]
    UnknownName(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("no combinatorial oracle for {0}")]
    NoOracle(String),
    #[error(transparent)]
    Cartan(#[from] CartanError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QSign {
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `A(m|n)`, words in `m+1` letters ε and `n+1` letters δ.
    A { m: usize, n: usize },
    B { m: usize, n: usize },
    /// `C(n+1)`; `n` is the number of δ letters.
    C { n: usize },
    D { m: usize, n: usize },
    /// `D(2|1;a)` with a formal or rational parameter.
    D21 { a: String },
    G3,
    F4,
    AAff { m: usize, n: usize },
    CAff { n: usize },
    G3First,
    G3Second,
    /// `q_n^(2)`.
    QTwisted { n: usize },
    Q { m: i64, n: i64, t: i64, sign: QSign },
    S12 { b: String },
    /// Rank 4 datum over Q(t) with an infinite set of S-principal roots.
    InfinitePiS,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
}

fn parse_list(s: &str, sep: char) -> Option<Vec<i64>> {
    s.split(sep).map(|x| x.trim().parse().ok()).collect()
}

fn strip<'a>(s: &'a str, pre: &str, post: &str) -> Option<&'a str> {
    s.strip_prefix(pre)?.strip_suffix(post)
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    fn from_str(raw: &str) -> Result<Self, FamilyError> {
        let s: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || FamilyError::UnknownName(raw.to_string());
        let inv = |m: &str| FamilyError::InvalidParameters(format!("{raw}: {m}"));
        let uz = |v: i64| usize::try_from(v).map_err(|_| inv("negative index"));
        let family = if s == "G(3)" {
            Family::G3
        } else if s == "F(4)" {
            Family::F4
        } else if s == "G3_1" || s == "G(3)^(1)" {
            Family::G3First
        } else if s == "G3_2" || s == "G(3)^(2)" {
            Family::G3Second
        } else if s == "InfinitePiS" || s == "InfinitePiS(t)" {
            Family::InfinitePiS
        } else if let Some(b) = strip(&s, "S(1|2;", ")") {
            Family::S12 { b: b.to_string() }
        } else if let Some(a) = strip(&s, "D(2|1;", ")") {
            Family::D21 { a: a.to_string() }
        } else if let Some(k) = strip(&s, "q_", "^(2)").or_else(|| strip(&s, "q(", ")^(2)")) {
            let n: usize = k.parse().map_err(|_| bad())?;
            if n < 3 {
                return Err(inv("q_n^(2) needs n >= 3"));
            }
            Family::QTwisted { n }
        } else if let Some(body) = strip(&s, "A(", ")^(1)") {
            let v = parse_list(body, '|').filter(|v| v.len() == 2).ok_or_else(bad)?;
            Family::AAff { m: uz(v[0])?, n: uz(v[1])? }
        } else if let Some(body) = strip(&s, "C(", ")^(1)") {
            let k: i64 = body.parse().map_err(|_| bad())?;
            if k < 2 {
                return Err(inv("C(k)^(1) needs k >= 2"));
            }
            Family::CAff { n: uz(k - 1)? }
        } else if let Some(body) = strip(&s, "A(", ")") {
            let v = parse_list(body, '|').filter(|v| v.len() == 2).ok_or_else(bad)?;
            Family::A { m: uz(v[0])?, n: uz(v[1])? }
        } else if let Some(body) = strip(&s, "B(", ")") {
            let v = parse_list(body, '|').filter(|v| v.len() == 2).ok_or_else(bad)?;
            if v[1] < 1 || v[0] < 0 {
                return Err(inv("B(m|n) needs m >= 0, n >= 1"));
            }
            Family::B { m: uz(v[0])?, n: uz(v[1])? }
        } else if let Some(body) = strip(&s, "C(", ")") {
            let k: i64 = body.parse().map_err(|_| bad())?;
            if k < 2 {
                return Err(inv("C(k) needs k >= 2"));
            }
            Family::C { n: uz(k - 1)? }
        } else if let Some(body) = strip(&s, "D(", ")") {
            let v = parse_list(body, '|').filter(|v| v.len() == 2).ok_or_else(bad)?;
            if v[0] < 1 || v[1] < 1 {
                return Err(inv("D(m|n) needs m, n >= 1"));
            }
            Family::D { m: uz(v[0])?, n: uz(v[1])? }
        } else {
            let (sign, body) = if let Some(b) = strip(&s, "Q^+(", ")").or_else(|| strip(&s, "Q+(", ")")) {
                (QSign::Plus, b)
            } else if let Some(b) = strip(&s, "Q^-(", ")").or_else(|| strip(&s, "Q-(", ")")) {
                (QSign::Minus, b)
            } else if let Some(b) = strip(&s, "Q(", ")") {
                (QSign::Plus, b)
            } else {
                return Err(bad());
            };
            let v = parse_list(body, ',').filter(|v| v.len() == 3).ok_or_else(bad)?;
            if v.iter().any(|&x| x < 1) || v[0] * v[1] * v[2] <= 1 {
                return Err(inv("Q(m,n,t) needs positive integers with mnt > 1"));
            }
            Family::Q { m: v[0], n: v[1], t: v[2], sign }
        };
        Ok(FamilySpec { family })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::A { m, n } => write!(f, "A({m}|{n})"),
            Family::B { m, n } => write!(f, "B({m}|{n})"),
            Family::C { n } => write!(f, "C({})", n + 1),
            Family::D { m, n } => write!(f, "D({m}|{n})"),
            Family::D21 { a } => write!(f, "D(2|1;{a})"),
            Family::G3 => write!(f, "G(3)"),
            Family::F4 => write!(f, "F(4)"),
            Family::AAff { m, n } => write!(f, "A({m}|{n})^(1)"),
            Family::CAff { n } => write!(f, "C({})^(1)", n + 1),
            Family::G3First => write!(f, "G3_1"),
            Family::G3Second => write!(f, "G3_2"),
            Family::QTwisted { n } => write!(f, "q_{n}^(2)"),
            Family::Q { m, n, t, sign } => {
                let s = if *sign == QSign::Plus { "+" } else { "-" };
                write!(f, "Q^{s}({m},{n},{t})")
            }
            Family::S12 { b } => write!(f, "S(1|2;{b})"),
            Family::InfinitePiS => write!(f, "InfinitePiS(t)"),
        }
    }
}

/// Names accepted by [`FamilySpec::from_str`], as examples.
pub fn registry() -> Vec<&'static str> {
    vec![
        "A(1|0)", "A(1|1)", "B(1|1)", "C(3)", "D(2|1)", "D(2|1;a)", "G(3)", "F(4)", "A(1|0)^(1)", "C(3)^(1)", "G3_1",
        "G3_2", "q_4^(2)", "Q(1,1,2)", "Q^-(1,1,2)", "S(1|2;b)", "InfinitePiS(t)",
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Count {
    Exact(u64),
    Named(&'static str),
}

#[derive(Clone, Debug, Serialize)]
pub struct Expected {
    pub spine: Option<Count>,
    pub skeleton: Option<Count>,
    pub sp_d: Option<&'static str>,
    #[serde(rename = "type")]
    pub gcm_type: Option<GcmType>,
    pub parity_type: Option<ParityType>,
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn fact(n: u64) -> u64 {
    (1..=n).product()
}

/// Counts and groups as stated for the family; `None` where nothing is claimed.
pub fn expected(spec: &FamilySpec) -> Expected {
    use Count::*;
    let fin = Some(GcmType::Fin);
    let aff = Some(GcmType::Aff);
    match &spec.family {
        Family::A { m, n } => {
            let (m, n) = (*m as u64, *n as u64);
            Expected {
                spine: Some(Exact(binom(m + n + 2, m + 1))),
                skeleton: Some(Exact(fact(m + n + 2))),
                sp_d: Some(if m == n { "Z_2" } else { "trivial" }),
                gcm_type: fin,
                parity_type: Some(ParityType::I),
            }
        }
        Family::B { m, n } => {
            let (m, n) = (*m as u64, *n as u64);
            Expected {
                spine: Some(Exact(binom(m + n, m))),
                skeleton: Some(Exact((1u64 << (m + n)) * fact(m + n))),
                sp_d: Some("trivial"),
                gcm_type: fin,
                parity_type: Some(ParityType::II),
            }
        }
        Family::C { n } => Expected {
            spine: Some(Exact(2 * *n as u64 + 1)),
            skeleton: Some(Exact(d_skeleton(1, *n as u64))),
            sp_d: Some("trivial"),
            gcm_type: fin,
            parity_type: Some(ParityType::I),
        },
        Family::D { m, n } => {
            let (m, n) = (*m as u64, *n as u64);
            Expected {
                spine: Some(Exact(binom(m + n, m) + binom(m + n - 1, m))),
                skeleton: Some(Exact(d_skeleton(m, n))),
                sp_d: Some("trivial"),
                gcm_type: fin,
                parity_type: Some(if m == 1 { ParityType::I } else { ParityType::II }),
            }
        }
        Family::D21 { .. } => Expected {
            spine: Some(Exact(4)),
            skeleton: Some(Exact(32)),
            sp_d: Some("trivial"),
            gcm_type: fin,
            parity_type: Some(ParityType::II),
        },
        Family::G3 | Family::F4 => Expected {
            spine: None,
            skeleton: None,
            sp_d: Some("trivial"),
            gcm_type: fin,
            parity_type: Some(ParityType::II),
        },
        Family::AAff { m, n } => Expected {
            spine: Some(Named("infinite")),
            skeleton: Some(Named("infinite")),
            sp_d: Some(if m == n { "Z x| Z_2" } else { "Z" }),
            gcm_type: aff,
            parity_type: Some(ParityType::I),
        },
        Family::CAff { .. } => Expected {
            spine: Some(Named("infinite")),
            skeleton: Some(Named("infinite")),
            sp_d: Some("Z"),
            gcm_type: aff,
            parity_type: Some(ParityType::I),
        },
        Family::G3First | Family::G3Second => Expected {
            spine: None,
            skeleton: Some(Named("infinite")),
            sp_d: Some("trivial"),
            gcm_type: aff,
            parity_type: Some(ParityType::II),
        },
        Family::QTwisted { n } => Expected {
            spine: None,
            skeleton: Some(Named("infinite")),
            sp_d: Some(if n % 2 == 0 { "Z_2" } else { "trivial" }),
            gcm_type: aff,
            parity_type: Some(ParityType::II),
        },
        Family::Q { .. } => Expected {
            spine: Some(Exact(4)),
            skeleton: Some(Named("infinite")),
            sp_d: Some("trivial"),
            gcm_type: Some(GcmType::Ind),
            parity_type: Some(ParityType::II),
        },
        Family::S12 { .. } => Expected {
            spine: None,
            skeleton: Some(Named("infinite")),
            sp_d: Some("trivial"),
            gcm_type: aff,
            parity_type: Some(ParityType::I),
        },
        Family::InfinitePiS => Expected {
            spine: Some(Named("infinite")),
            skeleton: Some(Named("infinite")),
            sp_d: None,
            gcm_type: None,
            parity_type: None,
        },
    }
}

fn d_skeleton(m: u64, n: u64) -> u64 {
    (1u64 << (m + n - 1)) * (m + 2 * n) * fact(m + n - 1)
}

/// Gram matrix of `roots` (coefficient rows) under the diagonal form `diag`.
fn gram(diag: &[Q], roots: &[Vec<Q>]) -> Vec<Vec<Scalar>> {
    roots
        .iter()
        .map(|a| {
            roots
                .iter()
                .map(|b| Scalar::from_q(a.iter().zip(b).zip(diag).fold(Q::zero(), |acc, ((x, y), d)| acc + x * y * d)))
                .collect()
        })
        .collect()
}

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn qr(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn unit(len: usize, i: usize) -> Vec<Q> {
    (0..len).map(|j| if j == i { q(1) } else { q(0) }).collect()
}

fn diff(len: usize, i: usize, j: usize) -> Vec<Q> {
    let mut v = unit(len, i);
    v[j] -= q(1);
    v
}

fn from_gram(diag: &[Q], roots: &[Vec<Q>], odd: &[bool]) -> CartanDatum {
    let a = gram(diag, roots);
    let p: Vec<u8> = odd.iter().map(|&o| o as u8).collect();
    CartanDatum::new(Arc::new(Field::rational()), a, p).expect("well-formed family datum")
}

/// Letters `true` = ε (+1), `false` = δ (-1); simple roots `w_i - w_{i+1}`.
fn word_roots(word: &[bool]) -> (Vec<Q>, Vec<Vec<Q>>, Vec<bool>) {
    let len = word.len();
    let diag: Vec<Q> = word.iter().map(|&e| if e { q(1) } else { q(-1) }).collect();
    let roots: Vec<Vec<Q>> = (0..len - 1).map(|i| diff(len, i, i + 1)).collect();
    let odd = (0..len - 1).map(|i| word[i] != word[i + 1]).collect();
    (diag, roots, odd)
}

fn rows(entries: &[&[&str]], p: &[u8]) -> CartanDatum {
    CartanDatum::rational(entries, p).expect("well-formed literal datum")
}

fn param_field(name: &str, assumptions: &[&str]) -> Result<(Arc<Field>, Scalar), FamilyError> {
    let mut f = Field::with_params(&[name]);
    for a in assumptions {
        f.push_assumption(a.to_string());
    }
    let k = Arc::new(f);
    let x = Scalar::param(&k, 0);
    Ok((k, x))
}

/// A parameter given as a number stays rational; anything else is formal.
fn parameter(text: &str, assumptions: &[&str]) -> Result<(Arc<Field>, Scalar), FamilyError> {
    let plain = Arc::new(Field::rational());
    match parse_scalar(text, &plain) {
        Ok(v) => Ok((plain, v)),
        Err(_) => {
            if !text.chars().all(|c| c.is_alphanumeric() || c == '_') || text.chars().next().is_none_or(|c| c.is_ascii_digit()) {
                return Err(FamilyError::InvalidParameters(format!("bad parameter {text:?}")));
            }
            let asm: Vec<String> = assumptions.iter().map(|a| a.replace('#', text)).collect();
            let asm: Vec<&str> = asm.iter().map(|s| s.as_str()).collect();
            param_field(text, &asm)
        }
    }
}

pub fn construct(spec: &FamilySpec) -> Result<CartanDatum, FamilyError> {
    let inv = |m: &str| Err(FamilyError::InvalidParameters(format!("{spec}: {m}")));
    Ok(match &spec.family {
        Family::A { m, n } => {
            let word: Vec<bool> = std::iter::repeat_n(true, m + 1).chain(std::iter::repeat_n(false, n + 1)).collect();
            let (diag, roots, odd) = word_roots(&word);
            from_gram(&diag, &roots, &odd)
        }
        Family::B { m, n } => {
            let word: Vec<bool> = std::iter::repeat_n(true, *m).chain(std::iter::repeat_n(false, *n)).collect();
            let len = word.len();
            let (diag, mut roots, mut odd) = if len > 1 { word_roots(&word) } else { (vec![q(-1)], vec![], vec![]) };
            roots.push(unit(len, len - 1));
            odd.push(!word[len - 1]);
            from_gram(&diag, &roots, &odd)
        }
        Family::C { n } => construct(&FamilySpec { family: Family::D { m: 1, n: *n } })?,
        Family::D { m, n } => {
            let word: Vec<bool> = std::iter::repeat_n(true, *m).chain(std::iter::repeat_n(false, *n)).collect();
            let len = word.len();
            let (diag, mut roots, mut odd) = word_roots(&word);
            let mut last = unit(len, len - 1);
            last[len - 1] = q(2);
            roots.push(last);
            odd.push(false);
            from_gram(&diag, &roots, &odd)
        }
        Family::D21 { a } => {
            let (k, a) = parameter(a, &["#", "#+1"])?;
            if a.is_zero() || (&a + &Scalar::one()).is_zero() {
                return inv("a must differ from 0 and -1");
            }
            let two = Scalar::int(2);
            let m = vec![
                vec![Scalar::zero(), -&two, -(&two * &a)],
                vec![-&two, Scalar::int(4), Scalar::zero()],
                vec![-(&two * &a), Scalar::zero(), Scalar::int(4) * &a],
            ];
            CartanDatum::new(k, m, vec![1, 0, 0])?
        }
        Family::G3 => rows(&[&["0", "-1/2", "3/2"], &["-1/2", "1", "-1"], &["3/2", "-1", "0"]], &[1, 0, 1]),
        Family::F4 => {
            // basis ε1, ε2, ε3, δ
            let diag = vec![q(1), q(1), q(1), q(-3)];
            let roots = vec![
                vec![qr(-1, 2), qr(-1, 2), qr(-1, 2), qr(1, 2)],
                unit(4, 2),
                diff(4, 1, 2),
                diff(4, 0, 1),
            ];
            from_gram(&diag, &roots, &[true, false, false, false])
        }
        Family::AAff { m, n } => {
            // basis δ, ε_1..ε_{m+1}, δ_1..δ_{n+1}
            let len = m + n + 3;
            let mut diag = vec![q(0)];
            diag.extend((0..m + 1).map(|_| q(1)));
            diag.extend((0..n + 1).map(|_| q(-1)));
            let mut x0 = unit(len, 0);
            x0[1] -= q(1);
            x0[len - 1] += q(1);
            let mut roots = vec![x0];
            let mut odd = vec![true];
            for i in 1..len - 1 {
                roots.push(diff(len, i, i + 1));
                odd.push(i == m + 1);
            }
            from_gram(&diag, &roots, &odd)
        }
        Family::CAff { n } => {
            // basis δ, δ_1..δ_n, ε_1
            let len = n + 2;
            let mut diag = vec![q(0)];
            diag.extend((0..*n).map(|_| q(-1)));
            diag.push(q(1));
            let mut x0 = unit(len, 0);
            x0[1] = q(-2);
            let mut roots = vec![x0];
            let mut odd = vec![false];
            for i in 1..*n {
                roots.push(diff(len, i, i + 1));
                odd.push(false);
            }
            roots.push(diff(len, *n, n + 1));
            let mut plus = unit(len, *n);
            plus[n + 1] = q(1);
            roots.push(plus);
            odd.extend([true, true]);
            from_gram(&diag, &roots, &odd)
        }
        Family::G3First => g3_first(),
        Family::G3Second => {
            let g = g3_first();
            g.scaled(&vec![Scalar::int(2); 4])
        }
        Family::QTwisted { n } => q_twisted(*n),
        Family::Q { m, n, t, sign } => q_family(*m, *n, *t, *sign)?,
        Family::S12 { b } => {
            let (k, b) = parameter(b, &["#"])?;
            if b.as_rational().is_some_and(|x| x.is_integer()) {
                return inv("b must not be an integer");
            }
            let one = Scalar::one();
            let m = vec![
                vec![Scalar::zero(), b.clone(), &one - &b],
                vec![-&b, Scalar::zero(), &one + &b],
                vec![-&one, -&one, Scalar::int(2)],
            ];
            CartanDatum::new(k, m, vec![1, 1, 0])?
        }
        Family::InfinitePiS => {
            let (k, t) = param_field("t", &["t"])?;
            let i = Scalar::int;
            let m = vec![
                vec![i(2), i(-1), i(-1), i(0)],
                vec![i(-1), i(0), i(1), -&t],
                vec![i(-1), i(1), i(0), t.clone()],
                vec![i(0), -&t, t.clone(), i(2)],
            ];
            CartanDatum::new(k, m, vec![0, 1, 1, 0])?
        }
    })
}

fn g3_first() -> CartanDatum {
    rows(
        &[&["0", "-3/2", "-1/2", "3/2"], &["-3/2", "3", "0", "0"], &["-1/2", "0", "1", "-1"], &["3/2", "0", "-1", "0"]],
        &[1, 0, 0, 1],
    )
}

/// `q_n^(2)`: one odd isotropic node tied into an `A_{n-1}` chain, zero row sums.
pub fn q_twisted(n: usize) -> CartanDatum {
    let mut a = vec![vec![0i64; n]; n];
    a[0][1] = 1;
    a[0][n - 1] = -1;
    a[1][0] = -1;
    a[n - 1][0] = -1;
    for i in 1..n {
        a[i][i] = 2;
        if i + 1 < n {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    }
    let mut p = vec![0u8; n];
    p[0] = 1;
    CartanDatum::from_ints(&a, &p)
}

/// `Q^±(m,n,t)`: `A = [[0,a,1],[1,0,b],[c,1,0]]`, all odd, with
/// `1+a+1/c = -m`, `1+b+1/a = -t`, `1+c+1/b = -n`.
///
/// This is the labelling under which `α_i = δ - b(x_i)` has
/// `B_π = [[2,-n,-n],[-m,2,-m],[-t,-t,2]]` and `⟨δ, α_i^∨⟩ = (1-n, 1-m, 1-t)`.
pub fn q_family(m: i64, n: i64, t: i64, sign: QSign) -> Result<CartanDatum, FamilyError> {
    let (n, t) = (t, n);
    let (mm, nn, tt) = (m + 1, n + 1, t + 1);
    // (TN-1)a^2 + (TNM+T-N-M)a + (TM-1) = 0
    let c2 = q(tt * nn - 1);
    let c1 = q(tt * nn * mm + tt - nn - mm);
    let c0 = q(tt * mm - 1);
    let bound = q(1) + [&c1, &c0].iter().map(|c| (*c / &c2).abs()).fold(q(0), |a, b| if b > a { b } else { a });
    let (lo, hi) = match sign {
        QSign::Plus => (q(-1), q(0)),
        QSign::Minus => (-bound, q(-1)),
    };
    let disc = &c1 * &c1 - q(4) * &c2 * &c0;
    let disc_int = disc.to_integer();
    let sq = disc_int.sqrt();
    let (field, a) = if !disc.is_negative() && &sq * &sq == disc_int {
        let roots = [(-&c1 + Q::from_integer(sq.clone())) / (q(2) * &c2), (-&c1 - Q::from_integer(sq)) / (q(2) * &c2)];
        let r = roots
            .into_iter()
            .find(|r| *r > lo && *r < hi)
            .ok_or_else(|| FamilyError::InvalidParameters(format!("no root of the constraint in ({lo}, {hi})")))?;
        (Arc::new(Field::rational()), Scalar::from_q(r))
    } else {
        let monic = vec![&c0 / &c2, &c1 / &c2, q(1)];
        let f = Field::new(vec![], Some(monic), Some((lo.clone(), hi.clone())))
            .map_err(|e| FamilyError::InvalidParameters(format!("no root of the constraint in ({lo}, {hi}): {e}")))?;
        let k = Arc::new(f);
        let th = Scalar::theta(&k);
        (k, th)
    };
    let one = Scalar::one();
    let b = -Scalar::int(nn) - a.inv().expect("a is nonzero");
    let c = -(Scalar::int(mm) + &a).inv().expect("m+1+a is nonzero");
    debug_assert_eq!(&(&one + &c) + &b.inv().unwrap(), -Scalar::int(t));
    for (name, x) in [("a", &a), ("b", &b), ("c", &c)] {
        let s1 = (x + &one).real_sign();
        let s0 = x.real_sign();
        let ok = match sign {
            QSign::Plus => s1 == Some(std::cmp::Ordering::Greater) && s0 == Some(std::cmp::Ordering::Less),
            QSign::Minus => s1 != Some(std::cmp::Ordering::Greater),
        };
        if !ok {
            return Err(FamilyError::InvalidParameters(format!("{name} violates the sign condition")));
        }
    }
    let z = Scalar::zero();
    let mat = vec![vec![z.clone(), a, one.clone()], vec![one.clone(), z.clone(), b], vec![c, one, z]];
    Ok(CartanDatum::new(field, mat, vec![1, 1, 1])?)
}

/// Word-model spines for the A, B, C, D series; vertex 0 is the base word.
pub fn spine_oracle(spec: &FamilySpec) -> Result<MarkedAdjacency, FamilyError> {
    match &spec.family {
        Family::A { m, n } => Ok(word_graph(m + 1, n + 1, false)),
        Family::B { m, n } => Ok(word_graph(*m, *n, false)),
        Family::C { n } => Ok(word_graph(1, *n, true)),
        Family::D { m, n } => Ok(word_graph(*m, *n, true)),
        Family::D21 { .. } => Ok(word_graph(2, 1, true)),
        _ => Err(FamilyError::NoOracle(spec.to_string())),
    }
}

/// The path `r_1, …, r_n, r_{n+1}, r_{n-1}, …, r_1` for `C(n+1)` (0-based marks).
pub fn c_series_marks(n: usize) -> Vec<usize> {
    let mut marks: Vec<usize> = (0..n).collect();
    marks.push(n);
    marks.extend((0..n.saturating_sub(1)).rev());
    marks
}

/// Words in `m` letters ε and `n` letters δ; with `signed`, words ending in
/// δ carry a sign and the last-pair swaps are re-marked.
fn word_graph(m: usize, n: usize, signed: bool) -> MarkedAdjacency {
    let len = m + n;
    let mut words: Vec<(Vec<bool>, i8)> = vec![];
    let mut index: HashMap<(Vec<bool>, i8), usize> = HashMap::new();
    let base: Vec<bool> = std::iter::repeat_n(true, m).chain(std::iter::repeat_n(false, n)).collect();
    let signs = |w: &Vec<bool>| -> Vec<i8> {
        if signed && !w[len - 1] {
            vec![1, -1]
        } else {
            vec![0]
        }
    };
    let mut all: Vec<Vec<bool>> = vec![];
    permutations(&base, &mut all);
    // base word first, with sign +
    all.sort_by_key(|w| w != &base);
    for w in all {
        for s in signs(&w) {
            index.insert((w.clone(), s), words.len());
            words.push((w.clone(), s));
        }
    }
    let mut adj = vec![vec![]; words.len()];
    for (u, (w, s)) in words.iter().enumerate() {
        for i in 0..len.saturating_sub(1) {
            if w[i] == w[i + 1] {
                continue;
            }
            let mut v = w.clone();
            v.swap(i, i + 1);
            let last_pair = signed && i + 2 == len;
            let (target_sign, mark) = if !last_pair {
                (*s, i)
            } else if *s == 0 {
                // unsigned word ending in ε: two neighbours
                for (ts, mk) in [(1i8, i), (-1i8, i + 1)] {
                    adj[u].push((mk, index[&(v.clone(), ts)]));
                }
                continue;
            } else {
                (0, if *s == 1 { i } else { i + 1 })
            };
            adj[u].push((mark, index[&(v, target_sign)]));
        }
    }
    MarkedAdjacency { adj }
}

fn permutations(base: &[bool], out: &mut Vec<Vec<bool>>) {
    let m = base.iter().filter(|&&b| b).count();
    let len = base.len();
    for mask in 0u64..(1u64 << len) {
        if mask.count_ones() as usize == m {
            out.push((0..len).map(|i| mask >> (len - 1 - i) & 1 == 1).collect());
        }
    }
}

/// Named roots in base coordinates: `δ` and the conventional `α_i` for the
/// Q family (`α_i = δ - b_v(x_i)`).
pub fn named_root(spec: &FamilySpec, name: &str) -> Option<Vec<i64>> {
    let norm = name.replace("delta", "δ").replace("alpha", "α");
    match &spec.family {
        Family::Q { .. } => {
            if norm == "δ" {
                return Some(vec![1, 1, 1]);
            }
            let i: usize = norm.strip_prefix("α_")?.parse().ok()?;
            if (1..=3).contains(&i) {
                let mut v = vec![1, 1, 1];
                v[i - 1] = 0;
                return Some(v);
            }
            None
        }
        Family::AAff { m, n } if norm == "δ" => Some(vec![1; m + n + 2]),
        Family::CAff { n } if norm == "δ" => {
            let mut v = vec![2; n + 2];
            v[0] = 1;
            v[*n] = 1;
            v[n + 1] = 1;
            Some(v)
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        for s in registry() {
            let f: FamilySpec = s.parse().unwrap();
            let again: FamilySpec = f.to_string().parse().unwrap();
            assert_eq!(f, again, "{s}");
        }
        assert!("A(1".parse::<FamilySpec>().is_err());
        assert!("Q(1,1,1)".parse::<FamilySpec>().is_err());
    }

    #[test]
    fn c2_matches_d11() {
        let c = construct(&"C(2)".parse().unwrap()).unwrap();
        assert_eq!(c, rows(&[&["0", "2"], &["2", "-4"]], &[1, 0]));
    }

    #[test]
    fn word_model_d21() {
        let g = spine_oracle(&"D(2|1)".parse().unwrap()).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn c_marks() {
        assert_eq!(c_series_marks(2), vec![0, 1, 2, 0]);
        assert_eq!(c_series_marks(1), vec![0, 1]);
    }

    #[test]
    fn q_constraints() {
        let d = construct(&"Q(1,2,3)".parse().unwrap()).unwrap();
        let a = d.entry(0, 1);
        let b = d.entry(1, 2);
        let c = d.entry(2, 0);
        let one = Scalar::one();
        assert_eq!(&(&one + a) + &c.inv().unwrap(), Scalar::int(-1));
        assert_eq!(&(&one + b) + &a.inv().unwrap(), Scalar::int(-3));
        assert_eq!(&(&one + c) + &b.inv().unwrap(), Scalar::int(-2));
        assert!(construct(&"Q^-(1,1,2)".parse().unwrap()).is_ok());
    }
}
