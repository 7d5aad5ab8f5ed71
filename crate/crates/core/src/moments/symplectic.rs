//! β = 4: correction sums and the assembled symplectic moments.
//!
//! The sums are kept in the normalization with weights w₂², then mapped to
//! the public weights x^{2b+1}e^{−2x}, x^{2b+1}(1−x)^{2a+1}, e^{−2x²} by the
//! substitutions a → 2a, b → 2b and powers of 2 in the assembly functions.

use num_traits::{ToPrimitive, Zero};

use super::unitary::{gue_exact, jue_raw, lue_raw};
use super::{check_exponent, laguerre_converges, pert, regularized, take_tally, wrap, MomentResult};
use crate::error::{MathError, Result, RmtError};
use crate::exactnum::{
    binom_i, gamma_q, poch_s, pow2, q, qi, ExactReal, HalfInt, Rational, Scalar,
};

/// Value of a β = 4 correction sum and the number of (i, j) terms visited.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticCorrection {
    pub value: ExactReal,
    pub i_j_terms: usize,
}

/// 2n for a positive integer or half-integer n.
pub(crate) fn twice_n(n: &Rational) -> Result<i64> {
    let h = HalfInt::from_rational(n)
        .ok_or_else(|| RmtError::invalid(format!("n = {n} must be an integer or half-integer")))?;
    let t = h.twice().to_i64().ok_or_else(|| RmtError::invalid("n too large"))?;
    if t < 1 {
        return Err(RmtError::invalid(format!("n = {n} must be positive")));
    }
    Ok(t)
}

fn add_term<S: Scalar>(acc: &mut S, count: &mut usize, t: S) {
    *acc = acc.plus(&t);
    *count += 1;
}

pub(crate) fn s_laguerre_raw<S: Scalar>(k: i64, tn: i64, b: &S) -> Result<(S, usize), MathError> {
    let n = q(tn, 2);
    let mut acc = S::int(0);
    let mut count = 0;
    let bn = b.shift(&n);
    let b2n = b.scale(&qi(2)).shift(&qi(tn));
    for j in 1..=tn / 2 {
        for i in 0..=(tn - 2 * j) {
            let c = binom_i(k, i) * binom_i(k, i + 2 * j);
            if c.is_zero() {
                continue;
            }
            let num = poch_s(&b2n, k - i - 2 * j + 1)?
                .times(&S::from_q(poch_s(&qi(tn - i - 2 * j + 1), i)?));
            let den = poch_s(&bn, 1 - j)?
                .scale(&poch_s(&(&n + qi(1)), -j)?)
                .scale(&pow2(k - 2 * j + 2));
            add_term(&mut acc, &mut count, num.over(&den)?.scale(&c));
        }
    }
    super::tally(count);
    Ok((acc, count))
}

fn s_ab<S: Scalar>(a: &S, b: &S, k: i64, n: &Rational, i: i64, j: i64) -> Result<S, MathError> {
    let a2 = a.scale(&qi(2));
    let b2 = b.scale(&qi(2));
    let ab2 = a2.plus(&b2);
    let ab = a.plus(b);
    let n2 = n * qi(2);
    let n4 = n * qi(4);
    let num = poch_s(&a2.shift(&(&n2 - qi(i + 2 * j - 1))), i)?
        .times(&poch_s(&b2.shift(&n2), k - i - 2 * j + 1)?)
        .times(&poch_s(&ab2.shift(&n2), k - i - 2 * j + 1)?)
        .times(&ab2.shift(&(&n4 - qi(4 * j - 1))))
        .times(&ab2.shift(&(&n4 - qi(2 * i + 4 * j - k - 1))))
        .scale(&pow2(4 * j - 3));
    let den = poch_s(&a.shift(&(n + qi(1))), -j)?
        .times(&poch_s(&b.shift(n), 1 - j)?)
        .times(&poch_s(&ab.shift(n), 1 - j)?)
        .times(&poch_s(&ab2.shift(&(&n4 - qi(i + 2 * j - 1))), 1 + k)?)
        .times(&poch_s(&ab2.shift(&(&n4 - qi(i + 4 * j - 1))), 1 + k)?)
        .scale(&poch_s(&(&n2 - qi(2 * j - 1)), -i)?)
        .scale(&poch_s(&(n + qi(1)), -j)?);
    num.over(&den)
}

pub(crate) fn s_jacobi_raw<S: Scalar>(k: i64, tn: i64, a: &S, b: &S) -> Result<(S, usize), MathError> {
    let n = q(tn, 2);
    let mut acc = S::int(0);
    let mut count = 0;
    for j in 1..=(tn / 2).min(k / 2) {
        for i in 0..=(tn - 2 * j).min(k - 2 * j) {
            let c = binom_i(k, i + 2 * j) * binom_i(k, i);
            add_term(&mut acc, &mut count, s_ab(a, b, k, &n, i, j)?.scale(&c));
        }
    }
    super::tally(count);
    Ok((acc, count))
}

fn s_gauss_exact(two_k: i64, n: i64) -> Result<(ExactReal, usize), MathError> {
    if two_k % 2 != 0 || two_k == 0 {
        return Ok((ExactReal::zero(), 0));
    }
    let k = two_k / 2;
    let half = q(1, 2);
    let mut acc = ExactReal::zero();
    let mut count = 0;
    for j in 1..=n.min(k) {
        for i in 0..=(n - j).min(k - j) {
            let c = binom_i(k, i) * binom_i(k, i + j);
            let t = gamma_q(&(qi(n - i - j + k) + &half))?.checked_div(&gamma_q(&qi(n - i - j + 1))?)?;
            acc = acc.checked_add(&t.scale(&c))?;
            count += 1;
        }
    }
    super::tally(count);
    let pre_num = gamma_q(&qi(n + 1))? * gamma_q(&qi(n))?;
    let pre_den = (ExactReal::sqrt_pi() * gamma_q(&qi(2 * n))?).scale(&(pow2(k) * pow2(2 - 2 * n)));
    Ok(((pre_num * acc).checked_div(&pre_den)?, count))
}

fn correction(r: std::result::Result<(Rational, usize), MathError>) -> Result<SymplecticCorrection> {
    take_tally();
    match r {
        Ok((v, c)) => Ok(SymplecticCorrection { value: ExactReal::rational(v), i_j_terms: c }),
        Err(MathError::Pole(p)) => Err(RmtError::Divergent(p)),
        Err(e) => Err(e.into()),
    }
}

/// Regularized evaluation that also reports the term count of the exact path.
fn reg_count<FQ, FS>(exact: FQ, series: FS) -> std::result::Result<(Rational, usize), MathError>
where
    FQ: Fn() -> std::result::Result<(Rational, usize), MathError>,
    FS: Fn(usize) -> std::result::Result<(crate::exactnum::Series, usize), MathError>,
{
    let mut count = 0;
    let v = regularized(
        || exact().map(|(v, c)| {
            count = c;
            v
        }),
        |cap| series(cap).map(|(s, _)| s),
    )?;
    if count == 0 {
        count = series(4).map(|(_, c)| c).unwrap_or(0);
    }
    Ok((v, count))
}

/// Laguerre correction sum at size n (integer or half-integer).
pub fn s_laguerre(k: i64, n: &Rational, b: &Rational) -> Result<SymplecticCorrection> {
    let tn = twice_n(n)?;
    correction(reg_count(|| s_laguerre_raw(k, tn, b), |cap| s_laguerre_raw(k, tn, &pert(b, 1, cap))))
}

/// Jacobi correction sum at size n (integer or half-integer).
pub fn s_jacobi(k: i64, n: &Rational, a: &Rational, b: &Rational) -> Result<SymplecticCorrection> {
    let tn = twice_n(n)?;
    if k < 0 {
        return Err(RmtError::invalid(format!("k must be nonnegative, got {k}")));
    }
    correction(reg_count(
        || s_jacobi_raw(k, tn, a, b),
        |cap| s_jacobi_raw(k, tn, &pert(a, 0, cap), &pert(b, 1, cap)),
    ))
}

/// Gaussian correction sum; includes the 2^{−k} of the public normalization.
pub fn s_gauss(two_k: i64, n: i64) -> Result<SymplecticCorrection> {
    super::check_n(n)?;
    let (value, i_j_terms) = s_gauss_exact(two_k, n)?;
    take_tally();
    Ok(SymplecticCorrection { value, i_j_terms })
}

pub(crate) fn lse_raw<S: Scalar>(k: i64, tn: i64, b: &S) -> Result<S, MathError> {
    if k == 0 {
        return Ok(S::from_q(q(tn, 2)));
    }
    let main = lue_raw(k, tn, &b.scale(&qi(2)))?.scale(&pow2(-k - 1));
    Ok(main.minus(&s_laguerre_raw(k, tn, b)?.0))
}

pub(crate) fn jse_raw<S: Scalar>(k: i64, tn: i64, a: &S, b: &S) -> Result<S, MathError> {
    if k == 0 {
        return Ok(S::from_q(q(tn, 2)));
    }
    let main = jue_raw(k, tn, &a.scale(&qi(2)), &b.scale(&qi(2)))?.scale(&q(1, 2));
    Ok(main.minus(&s_jacobi_raw(k, tn, a, b)?.0))
}

/// LSE moment for weight x^{2b+1}e^{−2x}; n may be a half-integer, k of either sign.
pub fn lse_moment(k: i64, n: &Rational, b: &Rational) -> Result<MomentResult> {
    let tn = twice_n(n)?;
    check_exponent("b", b)?;
    if !laguerre_converges(&qi(k), 4, b) {
        return Ok(MomentResult::divergent());
    }
    wrap(regularized(|| lse_raw(k, tn, b), |cap| lse_raw(k, tn, &pert(b, 1, cap))))
}

/// JSE moment for weight x^{2b+1}(1−x)^{2a+1}; n may be a half-integer.
pub fn jse_moment(k: i64, n: &Rational, a: &Rational, b: &Rational) -> Result<MomentResult> {
    let tn = twice_n(n)?;
    check_exponent("a", a)?;
    check_exponent("b", b)?;
    if k < 0 {
        return Err(RmtError::invalid(format!("k must be nonnegative, got {k}")));
    }
    wrap(regularized(
        || jse_raw(k, tn, a, b),
        |cap| jse_raw(k, tn, &pert(a, 0, cap), &pert(b, 1, cap)),
    ))
}

/// GSE moment of order `two_k` for weight e^{−2x²}.
pub fn gse_moment(two_k: i64, n: i64) -> Result<MomentResult> {
    super::check_n(n)?;
    if two_k < 0 {
        return Err(RmtError::invalid(format!("order must be nonnegative, got {two_k}")));
    }
    if two_k % 2 != 0 {
        return Ok(MomentResult::exact(ExactReal::zero()));
    }
    if two_k == 0 {
        return Ok(MomentResult::rational(qi(n)));
    }
    let k = two_k / 2;
    let main = gue_exact(two_k, 2 * n)?.scale(&pow2(-k - 1));
    let v = main.checked_sub(&s_gauss_exact(two_k, n)?.0)?;
    Ok(MomentResult::exact(v))
}

/// LSE moment of real order, in multi-precision floating point.
///
/// The whole expression is Γ(2b+2n+k+1)/Γ(2b+2n)·2^{−k} times a rational
/// function of k, so the Γ ratio is factored out of both blocks.
pub fn lse_moment_real(k: &Rational, n: &Rational, b: &Rational) -> Result<MomentResult> {
    if k.is_integer() {
        let ki = k.to_integer().to_i64().ok_or_else(|| RmtError::invalid("k too large"))?;
        return lse_moment(ki, n, b);
    }
    let tn = twice_n(n)?;
    check_exponent("b", b)?;
    if !laguerre_converges(k, 4, b) {
        return Ok(MomentResult::divergent());
    }
    use crate::exactnum::binom_gen;
    let nn = q(tn, 2);
    let c = qi(2) * b + qi(tn);
    // main block: 2^{−k−1}/k Σ_j N-coefficients (c)_(k−j+1)/(2n+1)_(−j)
    let mut main = Rational::zero();
    for j in 1..=tn {
        let cf = binom_gen(k, j) * binom_gen(k, j - 1);
        main += cf / poch_s(&(&c + k - qi(j) + qi(1)), j)? / poch_s(&qi(tn + 1), -j)?;
    }
    main = main / k / qi(2);
    // correction block: (c)_(k−i−2j+1) = G/(c+k−i−2j+1)_(i+2j), 2^{−(k−2j+2)} = 2^{−k}·2^{2j−2}
    let mut corr = Rational::zero();
    let mut count = tn as usize;
    for j in 1..=tn / 2 {
        for i in 0..=(tn - 2 * j) {
            let cf = binom_gen(k, i) * binom_gen(k, i + 2 * j);
            let t = cf * poch_s(&qi(tn - i - 2 * j + 1), i)? * pow2(2 * j - 2)
                / poch_s(&(&c + k - qi(i + 2 * j - 1)), i + 2 * j)?
                / poch_s(&(&nn + qi(1)), -j)?
                / poch_s(&(b + &nn), 1 - j)?;
            corr += t;
            count += 1;
        }
    }
    let r = main - corr;
    let v = crate::exactnum::scaled_gamma_ratio(&r, &-k, &(&c + k + qi(1)), &c);
    take_tally();
    Ok(MomentResult {
        value: Some(crate::exactnum::NumericValue::Float(v)),
        convergent: true,
        terms_summed: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(m: &MomentResult) -> Rational {
        m.rational_value().cloned().expect("exact rational")
    }

    #[test]
    fn empty_ranges() {
        for k in 0..=1 {
            assert!(s_laguerre(k, &qi(3), &qi(1)).unwrap().value.is_zero());
            assert!(s_jacobi(k, &q(3, 2), &qi(1), &qi(2)).unwrap().value.is_zero());
        }
        assert!(s_gauss(0, 3).unwrap().value.is_zero());
        assert_eq!(s_jacobi(1, &qi(2), &qi(0), &qi(0)).unwrap().i_j_terms, 0);
    }

    #[test]
    fn n_equals_one_is_one_dimensional() {
        // n = 1: single eigenvalue with weight x^{2b+1}e^{−2x}
        for b in [qi(0), qi(1), q(1, 2), q(7, 3)] {
            assert_eq!(r(&lse_moment(1, &qi(1), &b).unwrap()), &b + qi(1));
            // ⟨x^{-1}⟩ = 2/(2b+1)
            assert_eq!(r(&lse_moment(-1, &qi(1), &b).unwrap()), qi(2) / (qi(2) * &b + qi(1)));
        }
        // e^{−2x²}: ⟨x²⟩ = 1/4
        assert_eq!(r(&gse_moment(2, 1).unwrap()), q(1, 4));
        // Beta(2b+2, 2a+2): ⟨x²⟩ = (2b+2)(2b+3)/((2a+2b+4)(2a+2b+5))
        assert_eq!(r(&jse_moment(2, &qi(1), &qi(0), &qi(0)).unwrap()), q(3, 10));
    }

    #[test]
    fn zero_order_is_n() {
        assert_eq!(r(&lse_moment(0, &q(3, 2), &qi(1)).unwrap()), q(3, 2));
        assert_eq!(r(&jse_moment(0, &qi(2), &qi(1), &qi(1)).unwrap()), qi(2));
        assert_eq!(r(&gse_moment(0, 4).unwrap()), qi(4));
    }

    #[test]
    fn divergence_bound() {
        // −k < 2(b+1)
        assert!(lse_moment(-3, &qi(1), &qi(1)).unwrap().convergent);
        assert!(!lse_moment(-4, &qi(1), &qi(1)).unwrap().convergent);
    }

    #[test]
    fn half_integer_n_is_finite() {
        let v = s_jacobi(3, &q(3, 2), &qi(1), &qi(1)).unwrap();
        assert!(v.value.as_rational().is_some());
        assert!(lse_moment(2, &q(5, 2), &q(1, 2)).unwrap().convergent);
    }

    #[test]
    fn real_order_lse_near_integer() {
        let exact = lse_moment(2, &qi(2), &qi(1)).unwrap().to_f64().unwrap();
        let near = lse_moment_real(&(qi(2) + q(1, 10_000_000)), &qi(2), &qi(1)).unwrap().to_f64().unwrap();
        assert!((near - exact).abs() / exact < 1e-5, "{near} vs {exact}");
        let exact = lse_moment(-1, &qi(2), &qi(1)).unwrap().to_f64().unwrap();
        let near = lse_moment_real(&(qi(-1) + q(1, 10_000_000)), &qi(2), &qi(1)).unwrap().to_f64().unwrap();
        assert!((near - exact).abs() / exact < 1e-5, "{near} vs {exact}");
    }
}
