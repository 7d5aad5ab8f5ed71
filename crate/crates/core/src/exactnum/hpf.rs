//! Multi-precision floating point used where results are transcendental:
//! exact values that carry √π, and moments of non-integer order.

use std::fmt;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BSign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{factorial, qi, rat_to_f64, ExactReal, Rational};

pub(crate) const WORK_BITS: usize = 320;
const RM: RoundingMode = RoundingMode::ToEven;

fn consts() -> Consts {
    Consts::new().expect("astro-float constant cache")
}

pub(crate) fn bf_from_bigint(n: &BigInt, p: usize) -> BigFloat {
    if n.is_zero() {
        return BigFloat::from_word(0, p);
    }
    let (s, words) = n.to_u64_digits();
    let sign = if s == BSign::Minus { Sign::Neg } else { Sign::Pos };
    let e = (64 * words.len()) as i32;
    let mut x = BigFloat::from_words(&words, sign, e);
    x.set_precision(p, RM).expect("precision change");
    x
}

pub(crate) fn bf_from_rational(r: &Rational, p: usize) -> BigFloat {
    let n = bf_from_bigint(r.numer(), p);
    let d = bf_from_bigint(r.denom(), p);
    n.div(&d, p, RM)
}

/// Exact rational value of a finite float.
pub(crate) fn bf_to_rational(x: &BigFloat) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    let (words, _, sign, e, _) = x.as_raw_parts().expect("finite float");
    let mut m = BigInt::zero();
    for w in words.iter().rev() {
        m = (m << 64) + BigInt::from(*w);
    }
    if sign == Sign::Neg {
        m = -m;
    }
    let shift = e as i64 - 64 * words.len() as i64;
    if shift >= 0 {
        Rational::from_integer(m << shift as usize)
    } else {
        Rational::new(m, BigInt::one() << (-shift) as usize)
    }
}

/// Round `r` to `digits` significant decimal digits.
pub(crate) fn rational_to_decimal(r: &Rational, digits: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let neg = r.is_negative();
    let a = r.abs();
    let ten = BigInt::from(10);
    // 10^e10 ≤ a < 10^(e10+1)
    let est = ((a.numer().bits() as f64 - a.denom().bits() as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let pow10 = |e: i64| -> Rational {
        if e >= 0 {
            Rational::from_integer(num_traits::pow(ten.clone(), e as usize))
        } else {
            Rational::new(BigInt::one(), num_traits::pow(ten.clone(), (-e) as usize))
        }
    };
    let mut e10 = est;
    while pow10(e10) > a {
        e10 -= 1;
    }
    while pow10(e10 + 1) <= a {
        e10 += 1;
    }
    let scaled = &a * pow10(digits as i64 - 1 - e10);
    let (qt, rem) = scaled.numer().div_rem(scaled.denom());
    let mut n = qt;
    if rem * 2 >= *scaled.denom() {
        n += 1;
    }
    if n == num_traits::pow(ten.clone(), digits) {
        n /= 10;
        e10 += 1;
    }
    let ds = n.to_string();
    let body = if (-6..=20).contains(&e10) {
        if e10 >= 0 {
            let int_len = (e10 + 1) as usize;
            if ds.len() > int_len {
                format!("{}.{}", &ds[..int_len], &ds[int_len..])
            } else {
                format!("{}{}", ds, "0".repeat(int_len - ds.len()))
            }
        } else {
            format!("0.{}{}", "0".repeat((-e10 - 1) as usize), ds)
        }
    } else if ds.len() > 1 {
        format!("{}.{}e{}", &ds[..1], &ds[1..], e10)
    } else {
        format!("{}e{}", ds, e10)
    };
    let body = trim_fraction(&body);
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn trim_fraction(s: &str) -> String {
    let (mant, exp) = match s.split_once('e') {
        Some((m, e)) => (m, Some(e)),
        None => (s, None),
    };
    let mant = if mant.contains('.') {
        mant.trim_end_matches('0').trim_end_matches('.')
    } else {
        mant
    };
    match exp {
        Some(e) => format!("{mant}e{e}"),
        None => mant.to_string(),
    }
}

/// A float with at least 30 significant digits and an absolute error bound.
#[derive(Clone, Debug)]
pub struct HighPrecisionFloat {
    value: BigFloat,
    err: f64,
}

impl HighPrecisionFloat {
    pub(crate) fn from_parts(value: BigFloat, err: f64) -> Self {
        HighPrecisionFloat { value, err: err.abs() }
    }
    pub fn from_rational(r: &Rational, err: f64) -> Self {
        HighPrecisionFloat::from_parts(bf_from_rational(r, WORK_BITS), err)
    }
    pub fn from_f64(v: f64, err: f64) -> Self {
        HighPrecisionFloat::from_parts(BigFloat::from_f64(v, WORK_BITS), err)
    }
    pub fn value(&self) -> &BigFloat {
        &self.value
    }
    pub fn error_bound(&self) -> f64 {
        self.err
    }
    pub fn to_rational(&self) -> Rational {
        bf_to_rational(&self.value)
    }
    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.to_rational())
    }
    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        rational_to_decimal(&self.to_rational(), digits)
    }
}

impl fmt::Display for HighPrecisionFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:.1e}", self.to_decimal(30), self.err)
    }
}

/// Result value of a moment computation.
#[derive(Clone, Debug)]
pub enum NumericValue {
    Exact(ExactReal),
    Float(HighPrecisionFloat),
}

impl NumericValue {
    pub fn as_exact(&self) -> Option<&ExactReal> {
        match self {
            NumericValue::Exact(e) => Some(e),
            NumericValue::Float(_) => None,
        }
    }
    pub fn to_f64(&self) -> f64 {
        match self {
            NumericValue::Exact(e) => to_float(e, 20).to_f64(),
            NumericValue::Float(f) => f.to_f64(),
        }
    }
    pub fn to_decimal(&self, digits: usize) -> String {
        match self {
            NumericValue::Exact(e) => to_float(e, digits).to_decimal(digits),
            NumericValue::Float(f) => f.to_decimal(digits),
        }
    }
}

/// Decimal approximation of `v` good to one unit in the last of `digits` digits.
pub fn to_float(v: &ExactReal, digits: usize) -> HighPrecisionFloat {
    let digits = digits.max(15);
    if v.is_zero() {
        return HighPrecisionFloat::from_parts(BigFloat::from_word(0, WORK_BITS), 0.0);
    }
    let p = WORK_BITS.max(digits * 4 + 64);
    let mut x = bf_from_rational(v.coefficient(), p);
    let e = v.pi_half_exp();
    if e != 0 {
        let mut cc = consts();
        let pi = cc.pi(p, RM);
        let sqrt_pi = pi.sqrt(p, RM);
        let base = if e > 0 { sqrt_pi } else { BigFloat::from_word(1, p).div(&sqrt_pi, p, RM) };
        for _ in 0..e.unsigned_abs() {
            x = x.mul(&base, p, RM);
        }
    }
    // the float itself is far more accurate; the bound describes the requested rendering
    let mag = rat_to_f64(&bf_to_rational(&x)).abs();
    let err = if mag > 0.0 && mag.is_finite() {
        0.5 * 10f64.powi(mag.log10().floor() as i32 - digits as i32 + 1)
    } else {
        0.0
    };
    HighPrecisionFloat::from_parts(x, err)
}

fn bernoulli_even(m: usize) -> Vec<Rational> {
    // B_0..B_{2m} via the standard recurrence Σ_{j=0}^{n} C(n+1,j) B_j = 0
    let nmax = 2 * m;
    let mut b: Vec<Rational> = vec![Rational::one()];
    for n in 1..=nmax {
        let mut s = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            s += Rational::from_integer(super::binomial_u(n as u64 + 1, j as u64)) * bj;
        }
        b.push(-s / qi(n as i64 + 1));
    }
    (1..=m).map(|i| b[2 * i].clone()).collect()
}

/// ln Γ(x) for real x > 0, at `p` bits.
pub fn ln_gamma(x: &Rational, p: usize) -> BigFloat {
    assert!(x.is_positive(), "ln_gamma needs a positive argument");
    let mut cc = consts();
    let wp = p + 64;
    // integer arguments are exact factorials
    if x.is_integer() {
        if let Some(n) = x.to_integer().to_u64() {
            if n < 2000 {
                let f = bf_from_bigint(&factorial(n - 1), wp);
                return f.ln(wp, RM, &mut cc);
            }
        }
    }
    let shift_target = 80i64;
    let mut xs = x.clone();
    let mut prod = Rational::one();
    while xs < qi(shift_target) {
        prod *= &xs;
        xs += qi(1);
    }
    let z = bf_from_rational(&xs, wp);
    let half = BigFloat::from_f64(0.5, wp);
    let lnz = z.ln(wp, RM, &mut cc);
    let two_pi = cc.pi(wp, RM).mul(&BigFloat::from_word(2, wp), wp, RM);
    let mut s = z.sub(&half, wp, RM).mul(&lnz, wp, RM);
    s = s.sub(&z, wp, RM);
    s = s.add(&two_pi.ln(wp, RM, &mut cc).mul(&half, wp, RM), wp, RM);
    let bern = bernoulli_even(30);
    let zinv = BigFloat::from_word(1, wp).div(&z, wp, RM);
    let zinv2 = zinv.mul(&zinv, wp, RM);
    let mut zpow = zinv.clone();
    for (i, b) in bern.iter().enumerate() {
        let m = (i + 1) as i64;
        let c = b / qi(2 * m * (2 * m - 1));
        let term = bf_from_rational(&c, wp).mul(&zpow, wp, RM);
        s = s.add(&term, wp, RM);
        zpow = zpow.mul(&zinv2, wp, RM);
    }
    if !prod.is_one() {
        let lp = bf_from_rational(&prod, wp).ln(wp, RM, &mut cc);
        s = s.sub(&lp, wp, RM);
    }
    let mut out = s;
    out.set_precision(p, RM).expect("precision change");
    out
}

/// ln Γ(x) rounded to f64.
pub fn ln_gamma_f64(x: &Rational) -> f64 {
    rat_to_f64(&bf_to_rational(&ln_gamma(x, 128)))
}

/// `r · 2^t · Γ(x)/Γ(y)` for rational `r`, `t` and positive `x`, `y`.
pub fn scaled_gamma_ratio(r: &Rational, t: &Rational, x: &Rational, y: &Rational) -> HighPrecisionFloat {
    let p = WORK_BITS;
    let wp = p + 64;
    let mut cc = consts();
    let mut l = ln_gamma(x, wp).sub(&ln_gamma(y, wp), wp, RM);
    if !t.is_zero() {
        let ln2 = cc.ln_2(wp, RM);
        l = l.add(&bf_from_rational(t, wp).mul(&ln2, wp, RM), wp, RM);
    }
    let g = l.exp(wp, RM, &mut cc);
    let mut v = bf_from_rational(r, wp).mul(&g, wp, RM);
    v.set_precision(p, RM).expect("precision change");
    let mag = rat_to_f64(&bf_to_rational(&v)).abs();
    // Stirling with 30 terms past 80 is good to well beyond 60 digits
    let err = if mag.is_finite() { mag * 1e-60 } else { f64::INFINITY };
    HighPrecisionFloat::from_parts(v, err)
}
