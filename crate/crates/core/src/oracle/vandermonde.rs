//! Exact moments for even β: expand Δ(x)^β into monomials and integrate each
//! against the product weight using one-dimensional moments.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::ensemble::{converges, Beta, EnsembleSpec, Family};
use crate::error::{Result, RmtError};
use crate::exactnum::{poch_q, q, qi, Rational};

type Poly = HashMap<Vec<u32>, BigInt>;

fn vandermonde_power(n: usize, beta: u32) -> Poly {
    let mut p: Poly = HashMap::from([(vec![0; n], BigInt::one())]);
    for i in 0..n {
        for j in i + 1..n {
            for _ in 0..beta {
                let mut next: Poly = HashMap::with_capacity(p.len() * 2);
                for (mono, c) in &p {
                    let mut up = mono.clone();
                    up[i] += 1;
                    *next.entry(up).or_insert_with(BigInt::zero) += c;
                    let mut dn = mono.clone();
                    dn[j] += 1;
                    *next.entry(dn).or_insert_with(BigInt::zero) -= c;
                }
                next.retain(|_, c| !c.is_zero());
                p = next;
            }
        }
    }
    p
}

struct OneDim {
    family: Family,
    beta: Rational,
    cache: HashMap<i64, Option<Rational>>,
}

impl OneDim {
    /// ∫x^p w / ∫w; `None` if divergent.
    fn mu(&mut self, p: i64) -> Option<Rational> {
        if let Some(v) = self.cache.get(&p) {
            return v.clone();
        }
        let half = &self.beta / qi(2);
        let edge = |r: &Rational| &half * (r + qi(1)) - qi(1);
        let v = match &self.family {
            Family::Gaussian => {
                if p % 2 != 0 {
                    Some(Rational::zero())
                } else if p < 0 {
                    None
                } else {
                    let m = p / 2;
                    poch_q(&q(1, 2), m).ok().map(|v| v / pow(&half, m))
                }
            }
            Family::Laguerre { b } => {
                let e = edge(b);
                poch_q(&(e + qi(1)), p).ok().map(|v| v / pow(&half, p))
            }
            Family::Jacobi { a, b } => {
                let (eb, ea) = (edge(b), edge(a));
                let num = poch_q(&(&eb + qi(1)), p).ok();
                let den = poch_q(&(eb + ea + qi(2)), p).ok();
                num.zip(den).map(|(x, y)| x / y)
            }
        };
        self.cache.insert(p, v.clone());
        v
    }
}

fn pow(x: &Rational, m: i64) -> Rational {
    if m >= 0 {
        num_traits::pow(x.clone(), m as usize)
    } else {
        num_traits::pow(x.recip(), (-m) as usize)
    }
}

/// ⟨Σxᵢᵏ⟩ for β ∈ {2, 4} as an exact rational, by monomial expansion.
/// Practical for n ≤ 5.
pub fn vandermonde_moment(ensemble: &EnsembleSpec, k: i64) -> Result<Rational> {
    ensemble.validate()?;
    if ensemble.beta == Beta::One {
        return Err(RmtError::invalid("|Δ| is not a polynomial for beta = 1"));
    }
    let n = ensemble.require_int_n()? as usize;
    if n > 6 {
        return Err(RmtError::invalid("monomial expansion is limited to n ≤ 6"));
    }
    if !converges(ensemble, &qi(k)) {
        return Err(RmtError::Divergent(format!("order {k} for {ensemble}")));
    }
    let beta = u32::from(ensemble.beta.value());
    let poly = vandermonde_power(n, beta);
    let mut od = OneDim { family: ensemble.family.clone(), beta: qi(beta.into()), cache: HashMap::new() };
    let divergent = || RmtError::Divergent(format!("order {k} for {ensemble}"));
    let (mut num, mut den) = (Rational::zero(), Rational::zero());
    for (mono, c) in &poly {
        let base: Vec<Rational> = mono.iter().map(|&p| od.mu(p.into()).ok_or_else(divergent)).collect::<Result<_>>()?;
        let prod: Rational = base.iter().product();
        let c = Rational::from_integer(c.clone());
        den += &c * &prod;
        for (i, &p) in mono.iter().enumerate() {
            if base[i].is_zero() && k % 2 == 0 {
                continue;
            }
            let shifted = od.mu(i64::from(p) + k).ok_or_else(divergent)?;
            let rest: Rational = base.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v).product();
            num += &c * shifted * rest;
        }
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{moment, MomentQuery};

    #[test]
    fn matches_closed_forms() {
        let cases = [
            EnsembleSpec::gaussian(Beta::Two, 3),
            EnsembleSpec::gaussian(Beta::Four, 3),
            EnsembleSpec::laguerre(Beta::Two, 3, q(3, 2)),
            EnsembleSpec::laguerre(Beta::Four, 3, qi(2)),
            EnsembleSpec::jacobi(Beta::Two, 3, qi(1), q(3, 2)),
            EnsembleSpec::jacobi(Beta::Four, 2, q(1, 2), qi(0)),
        ];
        for e in cases {
            let ks: Vec<i64> = match e.family {
                Family::Laguerre { .. } => vec![-2, -1, 1, 2, 3],
                _ => vec![1, 2, 3, 4],
            };
            for k in ks {
                let exact = moment(&MomentQuery::new(e.clone(), qi(k))).unwrap();
                let v = vandermonde_moment(&e, k).unwrap();
                assert_eq!(Some(&v), exact.rational_value(), "{e} k={k}");
            }
        }
    }
}
