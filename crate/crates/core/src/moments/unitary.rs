//! β = 2: Laguerre, Jacobi and Gaussian unitary ensembles.

use num_traits::Zero;

use super::{check_exponent, check_n, laguerre_converges, pert, regularized, sum_s, tally, wrap, MomentResult};
use crate::error::{MathError, Result, RmtError};
use crate::exactnum::{
    binom_gen, binom_i, gamma_q, poch_s, pow2, q, qi, scaled_gamma_ratio, ExactReal, NumericValue,
    Rational, Scalar,
};

/// Σ_j N(k,j)·(b+n)_(k−j+1)/(n+1)_(−j), the LUE moment for integer k ≠ 0.
pub(crate) fn lue_raw<S: Scalar>(k: i64, n: i64, b: &S) -> Result<S, MathError> {
    if k == 0 {
        return Ok(S::int(n));
    }
    let top = if k > 0 { n.min(k) } else { n };
    let bn = b.shift(&qi(n));
    let n1 = S::int(n + 1);
    let s = sum_s((1..=top).map(|j| {
        let c = binom_i(k, j) * binom_i(k, j - 1);
        Ok(poch_s(&bn, k - j + 1)?.over(&poch_s(&n1, -j)?)?.scale(&c))
    }))?;
    Ok(s.scale(&q(1, k)))
}

fn u_coeff<S: Scalar>(n: i64, a: &S, b: &S, k: i64, j: i64) -> Result<S, MathError> {
    let ab = a.plus(b);
    let lin = ab.shift(&qi(2 * n - 2 * j + k + 1));
    let num = lin
        .times(&poch_s(&ab.shift(&qi(n)), k - j + 1)?)
        .times(&poch_s(&a.shift(&qi(n - j + 1)), j)?)
        .times(&poch_s(&b.shift(&qi(n)), k - j + 1)?);
    let den = poch_s(&ab.shift(&qi(2 * n - j)), k + 2)?
        .times(&poch_s(&ab.shift(&qi(2 * n - j + 1)), k)?)
        .times(&poch_s(&S::int(n + 1), -j)?);
    num.over(&den)
}

pub(crate) fn jue_diff_raw<S: Scalar>(k: i64, n: i64, a: &S, b: &S) -> Result<S, MathError> {
    let s = sum_s((1..=n.min(k)).map(|j| {
        let c = binom_i(k, j) * binom_i(k, j - 1);
        Ok(u_coeff(n, a, b, k, j)?.scale(&c))
    }))?;
    Ok(s.scale(&q(1, k)))
}

pub(crate) fn jue_raw<S: Scalar>(k: i64, n: i64, a: &S, b: &S) -> Result<S, MathError> {
    if k == 0 {
        return Ok(S::int(n));
    }
    let m1 = b.shift(&qi(n)).scale(&qi(n)).over(&a.plus(b).shift(&qi(2 * n)))?;
    tally(1);
    let mut m = m1;
    for j in 1..k {
        m = m.minus(&jue_diff_raw(j, n, a, b)?);
    }
    Ok(m)
}

fn check_k_positive(k: i64) -> Result<()> {
    if k < 0 {
        return Err(RmtError::invalid(format!("k must be a nonnegative integer, got {k}")));
    }
    Ok(())
}

/// Moment ⟨Σ xᵢᵏ⟩ of the LUE with weight x^b e^{−x}, for integer k of either sign.
pub fn lue_moment(k: i64, n: i64, b: &Rational) -> Result<MomentResult> {
    check_n(n)?;
    check_exponent("b", b)?;
    if !laguerre_converges(&qi(k), 2, b) {
        return Ok(MomentResult::divergent());
    }
    wrap(regularized(|| lue_raw(k, n, b), |cap| lue_raw(k, n, &pert(b, 1, cap))))
}

/// The LUE moment sum of [`lue_moment`] in double precision, with each term
/// obtained from the previous one. For k < 0 all terms share one sign, so this
/// stays accurate for n in the thousands where exact arithmetic is too slow.
pub fn lue_moment_f64(k: i64, n: i64, b: f64) -> Result<f64> {
    check_n(n)?;
    if b <= -1.0 {
        return Err(RmtError::invalid(format!("b must exceed -1, got {b}")));
    }
    if k == 0 {
        return Ok(n as f64);
    }
    if (-k) as f64 >= b + 1.0 {
        return Err(RmtError::Divergent(format!("order {k} with b = {b}")));
    }
    let (kf, nf, bn) = (k as f64, n as f64, b + n as f64);
    let top = if k > 0 { n.min(k) } else { n };
    // j = 1: c = k, (b+n)_k, n!/(n−1)! = n
    let mut poch = 1.0;
    if k > 0 {
        for i in 0..k {
            poch *= bn + i as f64;
        }
    } else {
        for i in 1..=-k {
            poch /= bn - i as f64;
        }
    }
    let mut term = kf * poch * nf;
    let mut s = term;
    for j in 1..top {
        let jf = j as f64;
        term *= (kf - jf) / (jf + 1.0) * (kf - jf + 1.0) / jf * (nf - jf) / (bn + kf - jf);
        s += term;
    }
    Ok(s / kf)
}

/// LUE moment of real order k, evaluated in multi-precision floating point.
/// Integer k is delegated to the exact path.
pub fn lue_moment_real(k: &Rational, n: i64, b: &Rational) -> Result<MomentResult> {
    if k.is_integer() {
        return lue_moment(k.to_integer().try_into().map_err(|_| RmtError::invalid("k too large"))?, n, b);
    }
    check_n(n)?;
    check_exponent("b", b)?;
    if !laguerre_converges(k, 2, b) {
        return Ok(MomentResult::divergent());
    }
    // (b+n)_(k−j+1) = G/(b+n+k−j+1)_(j),  G = Γ(b+n+k+1)/Γ(b+n)
    let bn = b + qi(n);
    let r = lue_real_rational_part(k, n, &bn)?;
    let v = scaled_gamma_ratio(&r, &Rational::zero(), &(&bn + k + qi(1)), &bn);
    Ok(MomentResult { value: Some(NumericValue::Float(v)), convergent: true, terms_summed: super::take_tally() })
}

fn lue_real_rational_part(k: &Rational, n: i64, bn: &Rational) -> Result<Rational> {
    let mut s = Rational::zero();
    for j in 1..=n {
        let c = binom_gen(k, j) * binom_gen(k, j - 1);
        let den = poch_s(&(bn + k - qi(j) + qi(1)), j)?;
        let conn = poch_s(&qi(n + 1), -j)?;
        s += c / den / conn;
    }
    tally(n as usize);
    Ok(s / k)
}

/// M(k,n) − M(k+1,n) for the JUE with weight x^b(1−x)^a.
pub fn jue_moment_diff(k: i64, n: i64, a: &Rational, b: &Rational) -> Result<ExactReal> {
    check_n(n)?;
    if k < 1 {
        return Err(RmtError::invalid(format!("k must be positive, got {k}")));
    }
    let v = regularized(
        || jue_diff_raw(k, n, a, b),
        |cap| jue_diff_raw(k, n, &pert(a, 0, cap), &pert(b, 1, cap)),
    )?;
    super::take_tally();
    Ok(ExactReal::rational(v))
}

/// Moment ⟨Σ xᵢᵏ⟩ of the JUE with weight x^b(1−x)^a on [0,1].
pub fn jue_moment(k: i64, n: i64, a: &Rational, b: &Rational) -> Result<MomentResult> {
    check_n(n)?;
    check_k_positive(k)?;
    check_exponent("a", a)?;
    check_exponent("b", b)?;
    wrap(regularized(
        || jue_raw(k, n, a, b),
        |cap| jue_raw(k, n, &pert(a, 0, cap), &pert(b, 1, cap)),
    ))
}

/// GUE moment of order `two_k` for weight e^{−x²}; odd orders vanish.
pub fn gue_moment(two_k: i64, n: i64) -> Result<MomentResult> {
    check_n(n)?;
    check_k_positive(two_k)?;
    Ok(MomentResult::exact(gue_exact(two_k, n)?))
}

pub(crate) fn gue_exact(two_k: i64, n: i64) -> Result<ExactReal, MathError> {
    if two_k % 2 != 0 {
        return Ok(ExactReal::zero());
    }
    let k = two_k / 2;
    if k == 0 {
        return Ok(ExactReal::rational(qi(n)));
    }
    let g = |x: Rational| gamma_q(&x);
    let half = q(1, 2);
    let (pre, terms) = if n % 2 == 0 {
        let h = qi(n / 2);
        let pre = g(&h + qi(1))? * g(h.clone())?;
        let terms: Vec<ExactReal> = (0..=(n / 2 - 1).min(k))
            .map(|j| {
                let c = binom_i(k, j) * binom_i(k + 1, j + 1);
                let r = g(&h - qi(j) + qi(k) + &half)?.checked_div(&g(&h - qi(j))?)?;
                Ok(r.scale(&c))
            })
            .collect::<Result<_, MathError>>()?;
        (pre, terms)
    } else {
        let h = qi((n + 1) / 2);
        let gh = g(h.clone())?;
        let pre = gh.clone() * gh;
        let terms: Vec<ExactReal> = (0..=((n - 1) / 2).min(k))
            .map(|j| {
                let c = binom_i(k, j) * binom_i(k + 1, j);
                let r = g(&h - qi(j) + qi(k) + &half)?.checked_div(&g(&h - qi(j))?)?;
                Ok(r.scale(&c))
            })
            .collect::<Result<_, MathError>>()?;
        (pre, terms)
    };
    tally(terms.len());
    let mut s = ExactReal::zero();
    for t in &terms {
        s = s.checked_add(t)?;
    }
    let den = ExactReal::sqrt_pi().scale(&qi(2 * k + 1)) * g(qi(n))?;
    let v = (pre.scale(&pow2(n)) * s).checked_div(&den)?;
    debug_assert_eq!(v.pi_half_exp(), 0);
    Ok(v)
}
