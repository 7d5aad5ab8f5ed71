//! Transport through a chaotic cavity: transmission eigenvalue moments,
//! proper delay time moments, charge cumulants and their n → ∞ limits.
//!
//! Transmission eigenvalues follow the Jacobi ensemble with
//! a = (2/β)(1+δ/2) − 1 and b = m − n; inverse delay times follow the
//! Laguerre ensemble with b = n − 1 + 2/β, and ⟨tr Qᵏ⟩ = n^{k−1}M_L(−k, n).

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::ensemble::{moment, Beta, EnsembleSpec, Family, MomentQuery};
use crate::error::{Result, RmtError};
use crate::exactnum::{binom_i, factorial, q, qi, ExactReal, HalfInt, Rational};
use crate::moments::MomentResult;

/// A transmission query: m ≥ n channels, δ = 0 for the Dyson ensembles.
#[derive(Clone, Debug, PartialEq)]
pub struct TransportQuery {
    pub beta: Beta,
    pub delta: Rational,
    pub m: i64,
    pub n: i64,
    pub k: i64,
}

impl TransportQuery {
    pub fn new(beta: Beta, delta: Rational, m: i64, n: i64, k: i64) -> Self {
        TransportQuery { beta, delta, m, n, k }
    }

    pub fn dyson(beta: Beta, m: i64, n: i64, k: i64) -> Self {
        Self::new(beta, Rational::zero(), m, n, k)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.m < self.n {
            return Err(RmtError::invalid(format!("need m ≥ n ≥ 1, got m = {}, n = {}", self.m, self.n)));
        }
        if HalfInt::from_rational(&self.delta).is_none() || self.delta <= qi(-2) {
            return Err(RmtError::invalid(format!("δ = {} must be a half-integer above −2", self.delta)));
        }
        Ok(())
    }

    /// Jacobi parameters (a, b) of the transmission eigenvalue density.
    pub fn jacobi_parameters(&self) -> (Rational, Rational) {
        let beta = qi(self.beta.value().into());
        let a = qi(2) / beta * (qi(1) + &self.delta / qi(2)) - qi(1);
        (a, qi(self.m - self.n))
    }

    pub fn ensemble(&self) -> EnsembleSpec {
        let (a, b) = self.jacobi_parameters();
        EnsembleSpec::new(Family::Jacobi { a, b }, self.beta, qi(self.n))
    }
}

/// ⟨tr Qᵏ⟩ for n channels, in units where τ_H = n.
#[derive(Clone, Debug, PartialEq)]
pub struct DelayQuery {
    pub beta: Beta,
    pub n: i64,
    pub k: i64,
}

impl DelayQuery {
    pub fn new(beta: Beta, n: i64, k: i64) -> Self {
        DelayQuery { beta, n, k }
    }

    pub fn ensemble(&self) -> EnsembleSpec {
        let b = qi(self.n - 1) + qi(2) / qi(self.beta.value().into());
        EnsembleSpec::new(Family::Laguerre { b }, self.beta, qi(self.n))
    }
}

/// ⟨tr (tt†)ᵏ⟩.
pub fn transmission_moment(query: &TransportQuery) -> Result<MomentResult> {
    query.validate()?;
    if query.k < 0 {
        return Err(RmtError::invalid(format!("k must be nonnegative, got {}", query.k)));
    }
    moment(&MomentQuery::new(query.ensemble(), qi(query.k)))
}

/// ⟨tr Qᵏ⟩ = n^{k−1}·M_L(−k, n); finite for k < nβ/2 + 1.
pub fn delay_moment(query: &DelayQuery) -> Result<MomentResult> {
    if query.n < 1 || query.k < 0 {
        return Err(RmtError::invalid(format!("need n ≥ 1 and k ≥ 0, got n = {}, k = {}", query.n, query.k)));
    }
    let m = moment(&MomentQuery::new(query.ensemble(), qi(-query.k)))?;
    if !m.convergent {
        return Err(RmtError::Divergent(format!(
            "delay moment k = {} needs k < nβ/2 + 1 = {}",
            query.k,
            q(query.n * i64::from(query.beta.value()), 2) + qi(1)
        )));
    }
    let scale = if query.k >= 1 { num_traits::pow(qi(query.n), (query.k - 1) as usize) } else { q(1, query.n) };
    let v = m.exact_value().ok_or_else(|| RmtError::invalid("exact value expected"))?.scale(&scale);
    Ok(MomentResult { value: Some(crate::exactnum::NumericValue::Exact(v)), ..m })
}

/// ⟨tr Qᵏ⟩ for β = 2 in double precision, usable for n in the thousands.
pub fn unitary_delay_moment_f64(n: i64, k: i64) -> Result<f64> {
    if n < 1 || k < 0 {
        return Err(RmtError::invalid(format!("need n ≥ 1 and k ≥ 0, got n = {n}, k = {k}")));
    }
    let m = crate::moments::lue_moment_f64(-k, n, n as f64)?;
    Ok((n as f64).powi(k as i32 - 1) * m)
}

/// κ₁ … κ_order of the transmitted charge.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CumulantSeries {
    #[serde(serialize_with = "ser_rationals")]
    pub kappas: Vec<Rational>,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

impl CumulantSeries {
    /// κ_j, 1-based.
    pub fn kappa(&self, j: usize) -> Option<&Rational> {
        self.kappas.get(j.checked_sub(1)?)
    }
}

fn rational_moment(m: &MomentResult) -> Result<Rational> {
    m.rational_value()
        .cloned()
        .ok_or_else(|| RmtError::invalid("transport moments are expected to be rational"))
}

/// Truncated product of power series (coefficients of x⁰ … x^order).
fn series_mul(a: &[Rational], b: &[Rational], order: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); order + 1];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Cumulants from Σκⱼxʲ/j! = −Σₖ(−1)ᵏ/k·⟨T_k⟩(eˣ−1)ᵏ, by exact series composition.
pub fn charge_cumulants(query: &TransportQuery, order: usize) -> Result<CumulantSeries> {
    query.validate()?;
    if order < 1 {
        return Err(RmtError::invalid("order must be at least 1"));
    }
    let mut em1 = vec![Rational::zero(); order + 1];
    for (j, c) in em1.iter_mut().enumerate().skip(1) {
        *c = Rational::new(1.into(), factorial(j as u64));
    }
    let mut f = vec![Rational::zero(); order + 1];
    let mut power = vec![Rational::one()];
    for k in 1..=order as i64 {
        power = series_mul(&power, &em1, order);
        let t = rational_moment(&transmission_moment(&TransportQuery { k, ..query.clone() })?)?;
        let c = -q(if k % 2 == 0 { 1 } else { -1 }, k) * t;
        for (fj, pj) in f.iter_mut().zip(&power) {
            *fj += &c * pj;
        }
    }
    let kappas = (1..=order).map(|j| &f[j] * Rational::from_integer(factorial(j as u64))).collect();
    Ok(CumulantSeries { kappas })
}

fn channel_constants(beta: Beta, delta: &Rational) -> (Rational, Rational, Rational) {
    let b = qi(beta.value().into());
    ((qi(2) + delta) / &b, (qi(4) + delta) / &b, (qi(6) + delta) / b)
}

/// Closed form of the variance κ₂.
pub fn kappa2_closed(beta: Beta, delta: &Rational, m: i64, n: i64) -> Rational {
    let (c, cp, _) = channel_constants(beta, delta);
    let (n, m) = (qi(n), qi(m));
    let nm = &n + &m;
    &n * &m * (&c - qi(1) + &n) * (&c - qi(1) + &m)
        / ((&cp - qi(1) + &nm) * (&c - qi(2) + &nm) * (&c - qi(1) + &nm))
}

/// Closed form of κ₃/κ₂ as (numerator, denominator); the denominator may vanish.
pub fn kappa3_ratio_closed(beta: Beta, delta: &Rational, m: i64, n: i64) -> (Rational, Rational) {
    let (c, _, c6) = channel_constants(beta, delta);
    let (n, m) = (qi(n), qi(m));
    let num = -(&n - &m - &c + qi(1)) * (&n - &m + &c - qi(1));
    let den = (&n + &m + &c - qi(3)) * (&n + &m + c6 - qi(1));
    (num, den)
}

fn catalan(j: i64) -> Rational {
    binom_i(2 * j, j) / qi(j + 1)
}

/// lim ⟨T_k⟩/n for n, m → ∞ at fixed m/n:
/// (1 + m/n)·Σ_{j<k} C(k−1, j)·Cat_j·(−1)ʲ·ξ^{j+1} with ξ = nm/(n+m)².
pub fn limit_catalan(k: i64, m_over_n: &Rational) -> Result<ExactReal> {
    if k < 1 || !m_over_n.is_positive() {
        return Err(RmtError::invalid("need k ≥ 1 and m/n > 0"));
    }
    let r = m_over_n;
    let xi = r / ((qi(1) + r) * (qi(1) + r));
    let mut s = Rational::zero();
    let mut xp = xi.clone();
    for j in 0..k {
        let sign = if j % 2 == 0 { qi(1) } else { qi(-1) };
        s += binom_i(k - 1, j) * catalan(j) * sign * &xp;
        xp *= &xi;
    }
    Ok(ExactReal::rational((qi(1) + r) * s))
}

/// The displayed large-n delay formula (1/k)Σⱼ C(k,j)C(k,j−1)2ʲ: 2, 6, 22, 90, …
pub fn schroeder_series(k: i64) -> Result<ExactReal> {
    if k < 1 {
        return Err(RmtError::invalid("k must be at least 1"));
    }
    let s: Rational = (1..=k).map(|j| binom_i(k, j) * binom_i(k, j - 1) * crate::exactnum::pow2(j)).sum();
    Ok(ExactReal::rational(s / qi(k)))
}

/// lim ⟨tr Qᵏ⟩ as n → ∞ obtained from the exact finite-n moments: 1, 2, 6, 22, …,
/// the displayed formula shifted by one index.
pub fn delay_limit(k: i64) -> Result<ExactReal> {
    match k {
        1 => Ok(ExactReal::one()),
        k if k > 1 => schroeder_series(k - 1),
        _ => Err(RmtError::invalid("k must be at least 1")),
    }
}
