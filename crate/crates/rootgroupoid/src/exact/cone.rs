//! Exact cone membership by a phase-one simplex with Bland's rule.

use num_traits::{Signed, Zero};

use super::field::Q;
use super::scalar::Scalar;
use super::ExactError;

/// Returns nonnegative `c` with `Σ c_i generators[i] = target`, if any.
pub fn cone_membership(generators: &[Vec<Scalar>], target: &[Scalar]) -> Result<Option<Vec<Q>>, ExactError> {
    let rat = |s: &Scalar| s.as_rational().cloned().ok_or(ExactError::ParameterizedInput);
    let m = target.len();
    for g in generators {
        if g.len() != m {
            return Err(ExactError::Dimension);
        }
    }
    let b: Vec<Q> = target.iter().map(rat).collect::<Result<_, _>>()?;
    let a: Vec<Vec<Q>> = generators
        .iter()
        .map(|g| g.iter().map(rat).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    Ok(feasible(&a, &b))
}

fn feasible(gens: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let m = b.len();
    let n = gens.len();
    // tableau rows: m constraints over n real + m artificial variables, plus rhs
    let width = n + m + 1;
    let mut t: Vec<Vec<Q>> = (0..m)
        .map(|i| {
            let sign = if b[i].is_negative() { -Q::from_integer(1.into()) } else { Q::from_integer(1.into()) };
            let mut row = vec![Q::zero(); width];
            for j in 0..n {
                row[j] = &gens[j][i] * &sign;
            }
            row[n + i] = Q::from_integer(1.into());
            row[width - 1] = &b[i] * &sign;
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    // objective: minimize sum of artificials, reduced costs z_j
    loop {
        let mut cost = vec![Q::zero(); width];
        for j in 0..width {
            if j >= n && j < n + m {
                cost[j] = Q::from_integer(1.into());
            }
        }
        for (i, &bi) in basis.iter().enumerate() {
            let cb = cost[bi].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..width {
                let x = &t[i][j] * &cb;
                cost[j] -= x;
            }
        }
        // cost[j] is now the reduced cost, cost[width-1] is -objective
        let enter = (0..n + m).find(|&j| cost[j].is_negative() && !basis.contains(&j));
        let e = match enter {
            None => {
                if cost[width - 1].is_zero() {
                    let mut x = vec![Q::zero(); n];
                    for (i, &bi) in basis.iter().enumerate() {
                        if bi < n {
                            x[bi] = t[i][width - 1].clone();
                        }
                    }
                    return Some(x);
                }
                return None;
            }
            Some(e) => e,
        };
        // ratio test with Bland tie-breaking on basis index
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][e].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][e];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let r = match leave {
            None => return None, // unbounded cannot happen for this objective
            Some((r, _)) => r,
        };
        let piv = t[r][e].clone();
        for j in 0..width {
            t[r][j] = &t[r][j] / &piv;
        }
        for i in 0..m {
            if i != r && !t[i][e].is_zero() {
                let f = t[i][e].clone();
                for j in 0..width {
                    let x = &f * &t[r][j];
                    t[i][j] -= x;
                }
            }
        }
        basis[r] = e;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::int(x)).collect()
    }

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn verify(gens: &[Vec<Scalar>], target: &[Scalar], c: &[Q]) {
        for i in 0..target.len() {
            let s = gens.iter().zip(c).fold(Q::zero(), |acc, (g, ci)| acc + g[i].as_rational().unwrap() * ci);
            assert_eq!(&s, target[i].as_rational().unwrap());
        }
        assert!(c.iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn unit_cone() {
        let g = vec![v(&[1, 0]), v(&[0, 1])];
        let c = cone_membership(&g, &v(&[2, 3])).unwrap().unwrap();
        assert_eq!(c, vec![q(2), q(3)]);
        assert!(cone_membership(&g, &v(&[-1, 0])).unwrap().is_none());
    }

    #[test]
    fn two_delta_in_pi_cone() {
        let g = vec![v(&[0, 1, 1]), v(&[1, 0, 1]), v(&[1, 1, 0])];
        let t = v(&[2, 2, 2]);
        let c = cone_membership(&g, &t).unwrap().unwrap();
        assert_eq!(c, vec![q(1), q(1), q(1)]);
        verify(&g, &t, &c);
    }

    #[test]
    fn redundant_generators() {
        let g = vec![v(&[1, 1]), v(&[1, -1]), v(&[2, 0]), v(&[0, 0])];
        let t = v(&[3, 1]);
        let c = cone_membership(&g, &t).unwrap().unwrap();
        verify(&g, &t, &c);
        assert!(cone_membership(&g, &v(&[0, 1])).unwrap().is_none());
    }
}
