//! Monic classical orthogonal polynomials.
//!
//! Weights: Hermite e^{−x²} on ℝ, Laguerre x^b e^{−x} on (0,∞), Jacobi
//! x^b(1−x)^a on (0,1). The recurrence is
//! P_{j+1}(x) = (x − α_j)P_j(x) − γ_j P_{j−1}(x), and γ_j = h_j/h_{j−1}.

use num_traits::{One, Zero};

use crate::error::{MathError, Result, RmtError};
use crate::exactnum::{
    binom_gen, gamma_q, ln_gamma_f64, poch_q, pow2, q, qi, rat_to_f64, ExactReal, Rational,
};

#[derive(Clone, Debug, PartialEq)]
pub enum PolyFamily {
    Hermite,
    Laguerre { b: Rational },
    Jacobi { a: Rational, b: Rational },
}

impl PolyFamily {
    fn check(&self) -> Result<()> {
        let ok = |v: &Rational| v > &qi(-1);
        match self {
            PolyFamily::Hermite => Ok(()),
            PolyFamily::Laguerre { b } if ok(b) => Ok(()),
            PolyFamily::Jacobi { a, b } if ok(a) && ok(b) => Ok(()),
            _ => Err(RmtError::invalid(format!("weight exponents must exceed -1: {self:?}"))),
        }
    }

    /// Exact recurrence coefficients (α_j, γ_j); γ_0 is 0.
    pub fn recurrence(&self, j: usize) -> (Rational, Rational) {
        let jj = qi(j as i64);
        match self {
            PolyFamily::Hermite => (Rational::zero(), &jj / qi(2)),
            PolyFamily::Laguerre { b } => (qi(2) * &jj + b + qi(1), &jj * (&jj + b)),
            PolyFamily::Jacobi { a, b } => {
                // monic Jacobi on [−1,1], weight (1−t)^a(1+t)^b, mapped by t = 2x−1
                let ab = a + b;
                let s = qi(2) * &jj + &ab;
                let big_a = if j == 0 {
                    (b - a) / (&ab + qi(2))
                } else {
                    (b * b - a * a) / (&s * (&s + qi(2)))
                };
                let big_b = match j {
                    0 => Rational::zero(),
                    1 => qi(4) * (a + qi(1)) * (b + qi(1)) / ((&ab + qi(2)) * (&ab + qi(2)) * (&ab + qi(3))),
                    _ => {
                        qi(4) * &jj * (&jj + a) * (&jj + b) * (&jj + &ab)
                            / (&s * &s * (&s + qi(1)) * (&s - qi(1)))
                    }
                };
                ((qi(1) + big_a) / qi(2), big_b / qi(4))
            }
        }
    }

    /// Weight function w₂(x); zero outside the support.
    pub fn weight(&self, x: f64) -> f64 {
        match self {
            PolyFamily::Hermite => (-x * x).exp(),
            PolyFamily::Laguerre { b } => {
                if x <= 0.0 {
                    0.0
                } else {
                    (rat_to_f64(b) * x.ln() - x).exp()
                }
            }
            PolyFamily::Jacobi { a, b } => {
                if x <= 0.0 || x >= 1.0 {
                    0.0
                } else {
                    (rat_to_f64(b) * x.ln() + rat_to_f64(a) * (1.0 - x).ln()).exp()
                }
            }
        }
    }

    /// Support (lo, hi); infinite ends are ±∞.
    pub fn support(&self) -> (f64, f64) {
        match self {
            PolyFamily::Hermite => (f64::NEG_INFINITY, f64::INFINITY),
            PolyFamily::Laguerre { .. } => (0.0, f64::INFINITY),
            PolyFamily::Jacobi { .. } => (0.0, 1.0),
        }
    }

    /// ∫w₂, by log-gamma so any rational parameters work.
    pub fn h0_f64(&self) -> f64 {
        let lg = ln_gamma_f64;
        match self {
            PolyFamily::Hermite => std::f64::consts::PI.sqrt(),
            PolyFamily::Laguerre { b } => lg(&(b + qi(1))).exp(),
            PolyFamily::Jacobi { a, b } => {
                (lg(&(a + qi(1))) + lg(&(b + qi(1))) - lg(&(a + b + qi(2)))).exp()
            }
        }
    }
}

/// A family with cached recurrence coefficients up to a maximum degree.
#[derive(Clone, Debug)]
pub struct OrthoPolySystem {
    family: PolyFamily,
    alpha: Vec<f64>,
    gamma: Vec<f64>,
    h: Vec<f64>,
}

impl OrthoPolySystem {
    pub fn new(family: PolyFamily, max_degree: usize) -> Result<Self> {
        family.check()?;
        let mut alpha = Vec::with_capacity(max_degree + 1);
        let mut gamma = Vec::with_capacity(max_degree + 1);
        for j in 0..=max_degree + 1 {
            let (a, g) = family.recurrence(j);
            alpha.push(rat_to_f64(&a));
            gamma.push(rat_to_f64(&g));
        }
        let mut h = vec![family.h0_f64()];
        for j in 1..=max_degree + 1 {
            let prev = h[j - 1];
            h.push(prev * gamma[j]);
        }
        Ok(OrthoPolySystem { family, alpha, gamma, h })
    }

    pub fn family(&self) -> &PolyFamily {
        &self.family
    }

    pub fn max_degree(&self) -> usize {
        self.alpha.len() - 2
    }

    /// Recurrence coefficients (α_j, γ_j) as floats.
    pub fn coeffs(&self, j: usize) -> (f64, f64) {
        (self.alpha[j], self.gamma[j])
    }

    /// P_0(x), …, P_d(x).
    pub fn eval_all(&self, d: usize, x: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(d + 1);
        let (mut p0, mut p1) = (0.0, 1.0);
        out.push(1.0);
        for j in 0..d {
            let p2 = (x - self.alpha[j]) * p1 - self.gamma[j] * p0;
            p0 = p1;
            p1 = p2;
            out.push(p1);
        }
        out
    }

    pub fn eval_monic(&self, degree: usize, x: f64) -> f64 {
        self.eval_all(degree, x)[degree]
    }

    /// (P_d(x), P_d'(x)).
    pub fn eval_with_derivative(&self, d: usize, x: f64) -> (f64, f64) {
        let (mut p0, mut p1) = (0.0, 1.0);
        let (mut d0, mut d1) = (0.0, 0.0);
        for j in 0..d {
            let p2 = (x - self.alpha[j]) * p1 - self.gamma[j] * p0;
            let d2 = p1 + (x - self.alpha[j]) * d1 - self.gamma[j] * d0;
            p0 = p1;
            p1 = p2;
            d0 = d1;
            d1 = d2;
        }
        (p1, d1)
    }

    /// h_j as a float, valid for any rational parameters.
    pub fn norm_h_f64(&self, j: usize) -> f64 {
        self.h[j]
    }

    /// Exact norm h_j; parameters must be integers or half-integers.
    pub fn norm_h(&self, j: usize) -> Result<ExactReal> {
        norm_h(&self.family, j)
    }

    pub fn weight(&self, x: f64) -> f64 {
        self.family.weight(x)
    }
}

fn gq(x: Rational) -> Result<ExactReal> {
    gamma_q(&x).map_err(|e| match e {
        MathError::Pole(p) => RmtError::invalid(format!("exact norm needs half-integer parameters: {p}")),
        other => other.into(),
    })
}

/// Exact norm ∫w₂P_j² for integer or half-integer parameters.
pub fn norm_h(family: &PolyFamily, j: usize) -> Result<ExactReal> {
    let jj = qi(j as i64);
    match family {
        PolyFamily::Hermite => {
            let f = Rational::from_integer(crate::exactnum::factorial(j as u64));
            Ok(ExactReal::sqrt_pi().scale(&(f * pow2(-(j as i64)))))
        }
        PolyFamily::Laguerre { b } => Ok(gq(&jj + qi(1))? * gq(b + &jj + qi(1))?),
        PolyFamily::Jacobi { a, b } => {
            let ab = a + b;
            let num = gq(a + &jj + qi(1))? * gq(b + &jj + qi(1))? * gq(&jj + qi(1))? * gq(&ab + &jj + qi(1))?;
            let den = gq(&ab + qi(2) * &jj + qi(1))? * gq(&ab + qi(2) * &jj + qi(2))?;
            Ok(num.checked_div(&den)?)
        }
    }
}

/// Exact monic polynomial coefficients, lowest degree first.
pub fn monic_coefficients(family: &PolyFamily, degree: usize) -> Vec<Rational> {
    let mut p0: Vec<Rational> = vec![];
    let mut p1: Vec<Rational> = vec![Rational::one()];
    for j in 0..degree {
        let (a, g) = family.recurrence(j);
        let mut p2 = vec![Rational::zero(); p1.len() + 1];
        for (i, c) in p1.iter().enumerate() {
            p2[i + 1] += c;
            p2[i] -= &a * c;
        }
        for (i, c) in p0.iter().enumerate() {
            p2[i] -= &g * c;
        }
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Expands `p` (monic of degree d) in the basis of `basis` polynomials of degree d, d−1, …, 0.
/// Returns C with p = Σ_j C_j·Q_{d−j}.
pub fn connect_by_identity(p: &[Rational], basis: &PolyFamily) -> Vec<Rational> {
    let d = p.len() - 1;
    let mut rest = p.to_vec();
    let mut out = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let deg = d - j;
        let c = rest[deg].clone();
        let qd = monic_coefficients(basis, deg);
        for (i, x) in qd.iter().enumerate() {
            rest[i] -= &c * x;
        }
        out.push(c);
    }
    out
}

/// Coefficients C_j with ℒ_n^b = Σ_j C_j ℒ_{n−j}^{b+k}: C_j = binom(k,j)·n!/(n−j)!.
pub fn connect_laguerre(k: &Rational, n: usize) -> Vec<Rational> {
    (0..=n as i64)
        .map(|j| binom_gen(k, j) * poch_q(&qi(n as i64 - j + 1), j).expect("positive Pochhammer"))
        .collect()
}

/// Coefficients C_j with 𝒫_n^{a,b} = Σ_j C_j 𝒫_{n−j}^{a,b+k} (Jacobi on [0,1]).
pub fn connect_jacobi(k: &Rational, n: usize, a: &Rational, b: &Rational) -> Result<Vec<Rational>> {
    let n = n as i64;
    let ab = a + b;
    (0..=n)
        .map(|j| {
            let num = poch_q(&(a + qi(n + 1 - j)), j)? * poch_q(&(&ab + qi(2 * n + 1)), -j)?;
            let den = poch_q(&(&ab + qi(2 * n - 2 * j + 2) + k), j)?;
            let nn = poch_q(&qi(n - j + 1), j)?;
            Ok(binom_gen(k, j) * num / den * nn)
        })
        .collect::<std::result::Result<_, MathError>>()
        .map_err(Into::into)
}

/// Skew-orthogonal bookkeeping constants for one (j, n).
#[derive(Clone, Debug, PartialEq)]
pub struct SkewCoefficients {
    pub c_j: ExactReal,
    pub gamma_j: ExactReal,
    pub e1: ExactReal,
    pub e4: ExactReal,
    pub eta1: ExactReal,
}

/// h_jγ_j (γ here is the skew constant, not the recurrence coefficient).
pub fn h_gamma(family: &PolyFamily, j: usize) -> Rational {
    match family {
        PolyFamily::Hermite => qi(1),
        PolyFamily::Laguerre { .. } => q(1, 2),
        PolyFamily::Jacobi { a, b } => (qi(2 * j as i64 + 2) + a + b) / qi(2),
    }
}

/// The skew constant γ_j = (h_jγ_j)/h_j.
pub fn skew_gamma(family: &PolyFamily, j: usize) -> Result<ExactReal> {
    Ok(ExactReal::rational(h_gamma(family, j)).checked_div(&norm_h(family, j)?)?)
}

/// c_j = h_{j+1}h_jγ_j.
pub fn skew_c(family: &PolyFamily, j: usize) -> Result<ExactReal> {
    Ok(norm_h(family, j + 1)?.scale(&h_gamma(family, j)))
}

fn ratio(x: &ExactReal, y: &ExactReal) -> Result<ExactReal> {
    Ok(x.checked_div(y)?)
}

/// e⁽⁴⁾_{j,n} = h_{2n+1}/c_{2n}·Π_{i=j}^{n−1} c_{2i+1}/c_{2i}.
pub fn e4(family: &PolyFamily, j: usize, n: usize) -> Result<ExactReal> {
    let mut v = ratio(&norm_h(family, 2 * n + 1)?, &skew_c(family, 2 * n)?)?;
    for i in j..n {
        v = v * ratio(&skew_c(family, 2 * i + 1)?, &skew_c(family, 2 * i)?)?;
    }
    Ok(v)
}

/// e⁽¹⁾_{j,n} = h_{2n+2}/c_{2j+1}·Π_{i=j+1}^{n} c_{2i}/c_{2i+1}.
pub fn e1(family: &PolyFamily, j: usize, n: usize) -> Result<ExactReal> {
    let mut v = ratio(&norm_h(family, 2 * n + 2)?, &skew_c(family, 2 * j + 1)?)?;
    for i in j + 1..=n {
        v = v * ratio(&skew_c(family, 2 * i)?, &skew_c(family, 2 * i + 1)?)?;
    }
    Ok(v)
}

/// η⁽¹⁾_n = Π_{j=0}^{n} c_{2j}h_{2j+2}/(c_{2j+1}h_{2j}); η⁽¹⁾_{−1} = 1.
pub fn eta1(family: &PolyFamily, n: i64) -> Result<ExactReal> {
    let mut v = ExactReal::one();
    for j in 0..=n {
        let j = j as usize;
        let num = skew_c(family, 2 * j)? * norm_h(family, 2 * j + 2)?;
        let den = skew_c(family, 2 * j + 1)? * norm_h(family, 2 * j)?;
        v = v * ratio(&num, &den)?;
    }
    Ok(v)
}

/// All skew constants at (j, n).
pub fn skew_coeffs(family: &PolyFamily, j: usize, n: usize) -> Result<SkewCoefficients> {
    family.check()?;
    Ok(SkewCoefficients {
        c_j: skew_c(family, j)?,
        gamma_j: skew_gamma(family, j)?,
        e1: e1(family, j, n)?,
        e4: e4(family, j, n)?,
        eta1: eta1(family, n as i64)?,
    })
}

/// Closed forms of e⁽⁴⁾, e⁽¹⁾, η⁽¹⁾ written as Pochhammer ratios.
pub mod closed {
    use super::*;

    fn pq(x: Rational, m: i64) -> Result<Rational> {
        Ok(poch_q(&x, m)?)
    }

    fn steps(j: &Rational, n: &Rational) -> Result<i64> {
        let d = n - j;
        if !d.is_integer() || d < Rational::zero() {
            return Err(RmtError::invalid(format!("n − j = {d} must be a nonnegative integer")));
        }
        d.to_integer().try_into().map_err(|_| RmtError::invalid("index too large"))
    }

    pub fn e4(family: &PolyFamily, j: usize, n: usize) -> Result<Rational> {
        e4_at(family, &qi(j as i64), &qi(n as i64))
    }

    /// e⁽⁴⁾ at integer or half-integer indices with n − j a nonnegative integer.
    pub fn e4_at(family: &PolyFamily, jj: &Rational, n: &Rational) -> Result<Rational> {
        let d = steps(jj, n)?;
        let f = pq(jj + qi(1), d)?;
        Ok(match family {
            PolyFamily::Hermite => f,
            PolyFamily::Laguerre { b } => qi(2) * pow2(2 * d) * f * pq(jj + qi(1) + b / qi(2), d)?,
            PolyFamily::Jacobi { a, b } => {
                let ab = a + b;
                qi(2) * pow2(4 * d)
                    * f
                    * pq(jj + qi(1) + a / qi(2), d)?
                    * pq(jj + qi(1) + b / qi(2), d)?
                    * pq(jj + qi(1) + &ab / qi(2), d)?
                    / pq(qi(4) * jj + &ab + qi(2), 4 * d + 1)?
            }
        })
    }

    pub fn e1(family: &PolyFamily, j: usize, n: usize) -> Result<Rational> {
        e1_at(family, &qi(j as i64), &qi(n as i64))
    }

    /// e⁽¹⁾ at integer or half-integer indices with n − j a nonnegative integer.
    pub fn e1_at(family: &PolyFamily, jj: &Rational, n: &Rational) -> Result<Rational> {
        let d = steps(jj, n)?;
        let h = q(3, 2);
        let f = pq(jj + &h, d)?;
        Ok(match family {
            PolyFamily::Hermite => f,
            PolyFamily::Laguerre { b } => qi(2) * pow2(2 * d) * f * pq(jj + &h + b / qi(2), d)?,
            PolyFamily::Jacobi { a, b } => {
                let ab = a + b;
                qi(2) * pow2(4 * d)
                    * f
                    * pq(jj + &h + a / qi(2), d)?
                    * pq(jj + &h + b / qi(2), d)?
                    * pq(jj + &h + &ab / qi(2), d)?
                    / pq(qi(4) * jj + &ab + qi(4), 4 * d + 1)?
            }
        })
    }

    /// Laguerre and Hermite only; the Jacobi form carries 2^{a+b}.
    pub fn eta1(family: &PolyFamily, n: usize) -> Result<Rational> {
        let m = n as i64 + 1;
        let half = pq(q(1, 2), m)?;
        Ok(match family {
            PolyFamily::Hermite => half,
            PolyFamily::Laguerre { b } => pow2(2 * m) * half * pq(b / qi(2) + q(1, 2), m)?,
            PolyFamily::Jacobi { .. } => {
                return Err(RmtError::invalid("closed η⁽¹⁾ is provided for Hermite and Laguerre"))
            }
        })
    }
}

/// D_n of the differential identity d/dx(f ρ₂) = −D_n w₂ P_n P_{n−1},
/// with f = 1, x, x(1−x) for Hermite, Laguerre, Jacobi.
pub fn differential_d(family: &PolyFamily, n: usize) -> f64 {
    let h = OrthoPolySystem::new(family.clone(), n).expect("valid family").norm_h_f64(n - 1);
    2.0 * rat_to_f64(&h_gamma(family, n - 1)) / h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fams() -> Vec<PolyFamily> {
        vec![
            PolyFamily::Hermite,
            PolyFamily::Laguerre { b: qi(0) },
            PolyFamily::Laguerre { b: q(3, 2) },
            PolyFamily::Jacobi { a: qi(0), b: qi(0) },
            PolyFamily::Jacobi { a: q(1, 2), b: qi(2) },
            PolyFamily::Jacobi { a: q(-1, 2), b: q(1, 2) },
        ]
    }

    #[test]
    fn eval_examples() {
        let h = OrthoPolySystem::new(PolyFamily::Hermite, 4).unwrap();
        assert_eq!(h.eval_monic(0, 1.7), 1.0);
        let l = OrthoPolySystem::new(PolyFamily::Laguerre { b: qi(0) }, 4).unwrap();
        assert_eq!(l.eval_monic(1, 3.0), 2.0);
        let j = OrthoPolySystem::new(PolyFamily::Jacobi { a: qi(0), b: qi(0) }, 4).unwrap();
        assert!(j.eval_monic(1, 0.5).abs() < 1e-15);
    }

    #[test]
    fn norm_examples() {
        let h0 = norm_h(&PolyFamily::Hermite, 0).unwrap();
        assert_eq!(h0, ExactReal::sqrt_pi());
        assert_eq!(norm_h(&PolyFamily::Laguerre { b: qi(0) }, 0).unwrap(), ExactReal::one());
        assert_eq!(norm_h(&PolyFamily::Jacobi { a: qi(0), b: qi(0) }, 0).unwrap(), ExactReal::one());
    }

    #[test]
    fn float_norms_match_exact() {
        for f in fams() {
            let s = OrthoPolySystem::new(f.clone(), 8).unwrap();
            for j in 0..=8 {
                let e = norm_h(&f, j).unwrap().to_f64();
                assert!((s.norm_h_f64(j) - e).abs() <= 1e-12 * e, "{f:?} {j}");
            }
        }
    }

    #[test]
    fn recurrence_matches_power_basis() {
        for f in fams() {
            let s = OrthoPolySystem::new(f.clone(), 6).unwrap();
            for d in 0..=6 {
                let c = monic_coefficients(&f, d);
                assert_eq!(c[d], qi(1));
                for x in [0.13, 0.5, 0.77] {
                    let direct: f64 = c.iter().rev().fold(0.0, |acc, ci| acc * x + rat_to_f64(ci));
                    let r = s.eval_monic(d, x);
                    assert!((direct - r).abs() <= 1e-10 * (1.0 + r.abs()));
                }
            }
        }
    }

    #[test]
    fn laguerre_connection_examples() {
        assert_eq!(connect_laguerre(&qi(1), 2), vec![qi(1), qi(2), qi(0)]);
        assert_eq!(connect_laguerre(&qi(0), 3), vec![qi(1), qi(0), qi(0), qi(0)]);
        assert_eq!(connect_laguerre(&qi(2), 1), vec![qi(1), qi(2)]);
    }

    #[test]
    fn connection_identities_hold_exactly() {
        for n in 0..=6usize {
            for k in [qi(1), qi(2), q(1, 2), q(-1, 2), q(7, 3)] {
                for b in [qi(0), q(1, 2), qi(3)] {
                    let p = monic_coefficients(&PolyFamily::Laguerre { b: b.clone() }, n);
                    let c = connect_by_identity(&p, &PolyFamily::Laguerre { b: &b + &k });
                    assert_eq!(c, connect_laguerre(&k, n), "n={n} k={k} b={b}");
                    for a in [qi(0), qi(1), q(3, 2)] {
                        let p = monic_coefficients(&PolyFamily::Jacobi { a: a.clone(), b: b.clone() }, n);
                        let c = connect_by_identity(&p, &PolyFamily::Jacobi { a: a.clone(), b: &b + &k });
                        assert_eq!(c, connect_jacobi(&k, n, &a, &b).unwrap(), "n={n} k={k} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn skew_constant_relations() {
        for f in fams() {
            for j in 0..6 {
                let c = skew_c(&f, j).unwrap();
                let prod = norm_h(&f, j + 1).unwrap() * norm_h(&f, j).unwrap() * skew_gamma(&f, j).unwrap();
                assert_eq!(c, prod);
            }
        }
    }

    #[test]
    fn closed_forms_match_products() {
        for f in fams() {
            for n in 0..4 {
                for j in 0..=n {
                    let e4p = e4(&f, j, n).unwrap();
                    assert_eq!(e4p.as_rational(), Some(&closed::e4(&f, j, n).unwrap()), "e4 {f:?} {j} {n}");
                    let e1p = e1(&f, j, n).unwrap();
                    assert_eq!(e1p.as_rational(), Some(&closed::e1(&f, j, n).unwrap()), "e1 {f:?} {j} {n}");
                }
                if !matches!(f, PolyFamily::Jacobi { .. }) {
                    let p = eta1(&f, n as i64).unwrap();
                    assert_eq!(p.as_rational(), Some(&closed::eta1(&f, n).unwrap()), "eta {f:?} {n}");
                }
            }
        }
    }

    #[test]
    fn hermite_table_examples() {
        assert_eq!(e4(&PolyFamily::Hermite, 2, 3).unwrap().as_rational(), Some(&qi(3)));
        assert_eq!(eta1(&PolyFamily::Hermite, 2).unwrap().as_rational(), Some(&q(15, 8)));
        assert_eq!(eta1(&PolyFamily::Hermite, -1).unwrap(), ExactReal::one());
    }

    #[test]
    fn differential_identity() {
        for f in fams() {
            let s = OrthoPolySystem::new(f.clone(), 7).unwrap();
            for n in 1..=6usize {
                let rho = |x: f64| -> f64 {
                    let p = s.eval_all(n, x);
                    s.weight(x) * (0..n).map(|j| p[j] * p[j] / s.norm_h_f64(j)).sum::<f64>()
                };
                let fx = |x: f64| match &f {
                    PolyFamily::Hermite => 1.0,
                    PolyFamily::Laguerre { .. } => x,
                    PolyFamily::Jacobi { .. } => x * (1.0 - x),
                };
                let d = differential_d(&f, n);
                for x in [0.2, 0.45, 0.8] {
                    let e = 1e-5;
                    let lhs = (fx(x + e) * rho(x + e) - fx(x - e) * rho(x - e)) / (2.0 * e);
                    let p = s.eval_all(n, x);
                    let rhs = -d * s.weight(x) * p[n] * p[n - 1];
                    assert!((lhs - rhs).abs() <= 1e-6 * (lhs.abs().max(rhs.abs()) + 1e-3), "{f:?} n={n} x={x}: {lhs} {rhs}");
                }
            }
        }
    }
}
