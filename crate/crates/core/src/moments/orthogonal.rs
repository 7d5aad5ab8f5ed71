//! β = 1 moments for even n, assembled from the β = 4 engines at half-integer
//! size (n−1)/2 plus the incomplete-integral terms.

use num_traits::Zero;

use super::symplectic::{jse_raw, lse_raw};
use super::unitary::gue_exact;
use super::{check_exponent, laguerre_converges, pert, regularized, take_tally, tally, wrap, MomentResult};
use crate::error::{MathError, Result, RmtError};
use crate::exactnum::{
    binom_i, factorial, gamma_q, poch_s, pow2, q, qi, ExactReal, Rational, Scalar,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

/// Incomplete-integral contribution I and its φ part.
#[derive(Clone, Debug, PartialEq)]
pub struct IncompleteTerm {
    pub i_value: ExactReal,
    pub phi_value: ExactReal,
    pub phi_vanishes: bool,
}

fn check_even(n: i64) -> Result<()> {
    if n < 1 {
        return Err(RmtError::invalid(format!("n must be at least 1, got {n}")));
    }
    if n % 2 != 0 {
        return Err(RmtError::OddDimension(n));
    }
    Ok(())
}

fn fact(n: i64) -> Rational {
    Rational::from_integer(factorial(n as u64))
}

/// φ̃ for the positive-order Laguerre term. Zero whenever n > 2k.
fn phi_laguerre_pos<S: Scalar>(k: i64, n: i64, b: &S) -> Result<S, MathError> {
    let mut acc = S::int(0);
    let h = n / 2;
    for j in 1..=k {
        if j + k - n < 0 {
            continue; // (j+k−n+1)_(n−1) = 0
        }
        let c = poch_s(&qi(j + k - n + 1), n - 1)? / fact(h - 1) * pow2(-j);
        let t = poch_s(&b.shift(&qi(n - 1)), j + k - n + 1)?
            .times(&poch_s(&b.scale(&q(1, 2)).shift(&(q(1, 2) + qi(j))), h - 1 - j)?);
        acc = acc.plus(&t.scale(&c));
        tally(1);
    }
    Ok(acc)
}

/// φ for the Laguerre term of order −kk.
fn phi_laguerre_neg<S: Scalar>(kk: i64, n: i64, b: &S) -> Result<S, MathError> {
    let mut acc = S::int(0);
    let h = n / 2;
    for j in 0..kk {
        let c = poch_s(&qi(kk + j + 1), n - 1)? * pow2(j) / fact(h - 1);
        let t = poch_s(&b.scale(&q(1, 2)).shift(&(q(1, 2) - qi(j))), h - 1 + j)?
            .times(&poch_s(&b.shift(&qi(n - 1)), -(n - 1 + kk + j))?);
        acc = acc.plus(&t.scale(&c));
        tally(1);
    }
    Ok(acc)
}

/// (I, φ) for the Laguerre term; `k` may be negative.
pub(crate) fn i_laguerre_raw<S: Scalar>(k: i64, n: i64, b: &S) -> Result<(S, S), MathError> {
    let h = n / 2;
    let half_bn = b.shift(&qi(n)).scale(&q(1, 2));
    let half_n1 = q(n + 1, 2);
    let mut main = S::int(0);
    if k > 0 {
        for j in 0..=(h - 1).min(k) {
            let t = poch_s(&half_bn, k - j)?.scale(&(binom_i(2 * k, 2 * j) / poch_s(&half_n1, -j)?));
            main = main.plus(&t);
        }
        tally(((h - 1).min(k) + 1) as usize);
        main = main.scale(&pow2(k));
        let phi = phi_laguerre_pos(k, n, b)?;
        Ok((main.plus(&phi), phi))
    } else {
        let kk = -k;
        for j in 0..h {
            let t = poch_s(&half_bn, -kk - j)?.scale(&(binom_i(2 * kk + 2 * j - 1, 2 * j) / poch_s(&half_n1, -j)?));
            main = main.plus(&t);
        }
        tally(h as usize);
        main = main.scale(&pow2(-kk));
        let phi = phi_laguerre_neg(kk, n, b)?;
        Ok((main.plus(&phi), phi))
    }
}

fn phi_jacobi<S: Scalar>(k: i64, n: i64, a: &S, b: &S) -> Result<S, MathError> {
    let mut acc = S::int(0);
    let h = n / 2;
    let ab = a.plus(b);
    for j in 1..=k {
        if j + k + 1 - n <= 0 {
            continue;
        }
        let c = pow2(2 - n + 2 * j) * poch_s(&qi(j + k + 1 - n), n - 1)? / fact(h - 1);
        let num = poch_s(&a.scale(&q(1, 2)).shift(&q(1, 2)), h)?
            .times(&poch_s(&b.shift(&qi(1 + 2 * j)), k - j - 1)?);
        let den = poch_s(&ab.scale(&q(1, 2)).shift(&qi(j)), h - j)?
            .times(&poch_s(&ab.shift(&qi(n)), j + k)?)
            .times(&poch_s(&b.scale(&q(1, 2)).shift(&qi(1 + j)), h - 1 - j)?);
        acc = acc.plus(&num.over(&den)?.scale(&c));
        tally(1);
    }
    Ok(acc)
}

pub(crate) fn i_jacobi_raw<S: Scalar>(k: i64, n: i64, a: &S, b: &S) -> Result<(S, S), MathError> {
    let h = n / 2;
    let ab = a.plus(b);
    let mut main = S::int(0);
    for j in 0..=(h - 1).min(k) {
        let num = ab
            .shift(&qi(2 * n - 4 * j - 1 + 2 * k))
            .times(&poch_s(&ab.shift(&qi(n)).scale(&q(1, 2)), k - j)?)
            .times(&poch_s(&b.shift(&qi(n)).scale(&q(1, 2)), k - j)?);
        let den = poch_s(&ab.shift(&qi(2 * n - 2 * j - 1)), 2 * k + 1)?
            .times(&poch_s(&a.shift(&qi(n + 1)).scale(&q(1, 2)), -j)?)
            .scale(&poch_s(&q(n + 1, 2), -j)?);
        main = main.plus(&num.over(&den)?.scale(&binom_i(2 * k, 2 * j)));
    }
    tally(((h - 1).min(k) + 1) as usize);
    main = main.scale(&Rational::from_integer(num_bigint::BigInt::from(4).pow(k as u32)));
    let phi = phi_jacobi(k, n, a, b)?;
    Ok((main.plus(&phi), phi))
}

pub(crate) fn loe_raw<S: Scalar>(k: i64, n: i64, b: &S) -> Result<S, MathError> {
    if k == 0 {
        return Ok(S::int(n));
    }
    let dual = lse_raw(k, n - 1, &b.scale(&q(1, 2)))?.scale(&pow2(1 + k));
    Ok(dual.plus(&i_laguerre_raw(k, n, b)?.0))
}

pub(crate) fn joe_raw<S: Scalar>(k: i64, n: i64, a: &S, b: &S) -> Result<S, MathError> {
    if k == 0 {
        return Ok(S::int(n));
    }
    let dual = jse_raw(k, n - 1, &a.scale(&q(1, 2)), &b.scale(&q(1, 2)))?.scale(&qi(2));
    Ok(dual.plus(&i_jacobi_raw(k, n, a, b)?.0))
}

/// LOE moment for weight x^{(b−1)/2}e^{−x/2}, n even, k of either sign.
pub fn loe_moment(k: i64, n: i64, b: &Rational) -> Result<MomentResult> {
    check_even(n)?;
    check_exponent("b", b)?;
    if !laguerre_converges(&qi(k), 1, b) {
        return Ok(MomentResult::divergent());
    }
    wrap(regularized(|| loe_raw(k, n, b), |cap| loe_raw(k, n, &pert(b, 1, cap))))
}

/// JOE moment for weight x^{(b−1)/2}(1−x)^{(a−1)/2}, n even.
pub fn joe_moment(k: i64, n: i64, a: &Rational, b: &Rational) -> Result<MomentResult> {
    check_even(n)?;
    check_exponent("a", a)?;
    check_exponent("b", b)?;
    if k < 0 {
        return Err(RmtError::invalid(format!("k must be nonnegative, got {k}")));
    }
    wrap(regularized(
        || joe_raw(k, n, a, b),
        |cap| joe_raw(k, n, &pert(a, 0, cap), &pert(b, 1, cap)),
    ))
}

fn incomplete(pair: Result<(Rational, Rational), MathError>, vanishes: bool) -> Result<IncompleteTerm> {
    take_tally();
    match pair {
        Ok((i, phi)) => Ok(IncompleteTerm {
            phi_vanishes: vanishes || phi.is_zero(),
            i_value: ExactReal::rational(i),
            phi_value: ExactReal::rational(phi),
        }),
        Err(MathError::Pole(p)) => Err(RmtError::Divergent(p)),
        Err(e) => Err(e.into()),
    }
}

/// Regularize both components of a pair, using one ε for each.
fn reg_pair<FQ, FS>(exact: FQ, series: FS) -> Result<(Rational, Rational), MathError>
where
    FQ: Fn() -> Result<(Rational, Rational), MathError>,
    FS: Fn(usize) -> Result<(crate::exactnum::Series, crate::exactnum::Series), MathError>,
{
    let i = regularized(|| exact().map(|p| p.0), |cap| series(cap).map(|p| p.0))?;
    let phi = regularized(|| exact().map(|p| p.1), |cap| series(cap).map(|p| p.1))?;
    Ok((i, phi))
}

/// Laguerre incomplete term of order k (positive) or −k (negative), k ≥ 1.
pub fn i_laguerre(k: i64, n: i64, b: &Rational, sign: Sign) -> Result<IncompleteTerm> {
    check_even(n)?;
    if k < 1 {
        return Err(RmtError::invalid(format!("k must be positive, got {k}")));
    }
    let ks = match sign {
        Sign::Positive => k,
        Sign::Negative => {
            if !laguerre_converges(&qi(-k), 1, b) {
                return Err(RmtError::Divergent(format!("order −{k} with b = {b}")));
            }
            -k
        }
    };
    let vanishes = sign == Sign::Positive && n > 2 * k;
    incomplete(
        reg_pair(|| i_laguerre_raw(ks, n, b), |cap| i_laguerre_raw(ks, n, &pert(b, 1, cap))),
        vanishes,
    )
}

/// Jacobi incomplete term, k ≥ 1.
pub fn i_jacobi(k: i64, n: i64, a: &Rational, b: &Rational) -> Result<IncompleteTerm> {
    check_even(n)?;
    if k < 1 {
        return Err(RmtError::invalid(format!("k must be positive, got {k}")));
    }
    incomplete(
        reg_pair(
            || i_jacobi_raw(k, n, a, b),
            |cap| i_jacobi_raw(k, n, &pert(a, 0, cap), &pert(b, 1, cap)),
        ),
        n > 2 * k,
    )
}

/// The O-integral of the GOE assembly.
pub fn goe_o(two_k: i64, n: i64) -> Result<ExactReal> {
    check_even(n)?;
    let k = two_k / 2;
    let h = n / 2;
    let half = q(1, 2);
    let mut acc = ExactReal::zero();
    for j in 1..=(h - 1).min(k) {
        for i in 0..=(h - j - 1).min(k - j) {
            let c = binom_i(k, i) * binom_i(k, i + j);
            let t = gamma_q(&(qi(h - i - j + k) + &half))?
                .checked_div(&gamma_q(&qi(h - i - j))?)?
                * gamma_q(&qi(h - j))?.checked_div(&gamma_q(&(qi(h - j) + &half))?)?;
            acc = acc.checked_add(&t.scale(&c))?;
            tally(1);
        }
    }
    Ok(acc)
}

/// The generating-function coefficient term of the GOE assembly.
pub fn goe_phi(two_k: i64, n: i64) -> Result<ExactReal> {
    check_even(n)?;
    let k = two_k / 2;
    let h = n / 2;
    let f2k = fact(2 * k);
    let mut s = Rational::zero();
    if n > 2 * k {
        for j in 0..=k {
            s += poch_s(&(q(n + 1, 2) - qi(j)), j)? * pow2(3 * j - k) / (fact(2 * j) * fact(k - j));
        }
        tally((k + 1) as usize);
        return Ok(ExactReal::rational(f2k * s));
    }
    let gh = fact(h - 1);
    let mut t1 = Rational::zero();
    for j in 0..=(k - h) {
        for i in 0..h {
            let sign = if j % 2 == 0 { qi(1) } else { qi(-1) };
            t1 += binom_i(n - 1, 2 * i) * pow2(-j - 2 * i) * sign / (qi(2 * j + 2 * i + 1) * fact(j) * fact(k - h - j));
        }
    }
    t1 *= pow2(h - k) * &f2k / &gh;
    let mut t2 = Rational::zero();
    for j in 0..h {
        for i in 0..=j {
            t2 += fact(h - i - 1) * binom_i(n - 1, n - 2 * i - 1) / (fact(j - i) * fact(k - j) * pow2(2 * (k - i)));
        }
    }
    t2 *= &f2k / &gh;
    tally(((k - h + 1) * h + h * (h + 1) / 2) as usize);
    Ok(ExactReal::rational(t1 + t2))
}

/// GOE moment of order `two_k` for weight e^{−x²/2}, n even.
pub fn goe_moment(two_k: i64, n: i64) -> Result<MomentResult> {
    check_even(n)?;
    if two_k < 0 {
        return Err(RmtError::invalid(format!("order must be nonnegative, got {two_k}")));
    }
    if two_k % 2 != 0 {
        return Ok(MomentResult::exact(ExactReal::zero()));
    }
    if two_k == 0 {
        return Ok(MomentResult::rational(qi(n)));
    }
    let v = gue_exact(two_k, n - 1)?
        .checked_sub(&goe_o(two_k, n)?)?
        .checked_add(&goe_phi(two_k, n)?)?;
    Ok(MomentResult::exact(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(m: &MomentResult) -> Rational {
        m.rational_value().cloned().expect("exact rational")
    }

    #[test]
    fn goe_examples() {
        assert_eq!(r(&goe_moment(2, 4).unwrap()), qi(10));
        assert_eq!(goe_phi(2, 4).unwrap().as_rational().unwrap(), &qi(7));
        assert!(goe_o(4, 2).unwrap().is_zero());
        // ⟨tr H²⟩ = n(n+1)/2 with this weight
        for n in [2, 4, 6, 8, 10] {
            assert_eq!(r(&goe_moment(2, n).unwrap()), q(n * (n + 1), 2));
        }
        assert_eq!(goe_moment(2, 3).unwrap_err(), RmtError::OddDimension(3));
    }

    #[test]
    fn goe_phi_branches_meet() {
        // the n ≤ 2k branch at n = 2k against the other branch one step away is not
        // an identity, but both must give the moment matching ⟨tr H⁴⟩ = n(2n²+5n+5)/4
        for n in [2, 4, 6] {
            assert_eq!(r(&goe_moment(4, n).unwrap()), q(n * (2 * n * n + 5 * n + 5), 4));
        }
    }

    #[test]
    fn laguerre_examples() {
        assert_eq!(r(&loe_moment(1, 4, &qi(1)).unwrap()), qi(20));
        assert_eq!(r(&loe_moment(-2, 4, &qi(7)).unwrap()), q(5, 21));
        // ⟨tr W⟩ = n·m for real Wishart with m = n+b
        for n in [2, 4, 6] {
            for b in 0..4 {
                assert_eq!(r(&loe_moment(1, n, &qi(b)).unwrap()), qi(n * (n + b)));
            }
        }
        assert!(!loe_moment(-2, 4, &qi(3)).unwrap().convergent);
    }

    #[test]
    fn phi_vanishes_for_large_n() {
        for k in 1..4 {
            for n in [2 * k + 2, 2 * k + 4] {
                let t = i_laguerre(k, n, &qi(1), Sign::Positive).unwrap();
                assert!(t.phi_vanishes && t.phi_value.is_zero());
                let t = i_jacobi(k, n, &qi(1), &qi(2)).unwrap();
                assert!(t.phi_vanishes && t.phi_value.is_zero());
            }
        }
        let t = i_laguerre(3, 2, &qi(1), Sign::Positive).unwrap();
        assert!(!t.phi_vanishes);
    }

    #[test]
    fn negative_phi_decays() {
        let mut prev = None;
        for n in (4..=20).step_by(2) {
            let t = i_laguerre(1, n, &qi(n + 1), Sign::Negative).unwrap();
            let v = t.phi_value.as_rational().unwrap().clone();
            assert!(v > Rational::zero());
            if let Some(p) = prev {
                assert!(v < p);
            }
            prev = Some(v);
        }
    }

    #[test]
    fn jacobi_first_moment_n2() {
        // a = b = 1 is the flat weight; by symmetry ⟨x₁+x₂⟩ = 1
        assert_eq!(r(&joe_moment(1, 2, &qi(1), &qi(1)).unwrap()), qi(1));
    }
}
