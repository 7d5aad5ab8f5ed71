//! Exact arithmetic: rationals, half-integers, values of the form `r·π^(e/2)`,
//! Pochhammer symbols and generalized binomials.

mod hpf;
mod series;

pub use hpf::{ln_gamma, ln_gamma_f64, scaled_gamma_ratio, to_float, HighPrecisionFloat, NumericValue};
pub use series::Series;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::MathError;

pub type Rational = BigRational;

/// `n/d` as a rational.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    match r.to_f64() {
        Some(v) if v.is_finite() => v,
        _ => {
            // numerator or denominator overflow f64; scale through logs of the integers
            let (n, d) = (r.numer(), r.denom());
            let sign = if n.is_negative() { -1.0 } else { 1.0 };
            let shift = n.bits() as i64 - d.bits() as i64;
            let scaled = if shift >= 0 {
                Rational::new(n.abs(), d << shift as usize)
            } else {
                Rational::new(n.abs() << (-shift) as usize, d.clone())
            };
            sign * scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
        }
    }
}

/// Parse "p/q", an integer, or a finite decimal such as "-1.25".
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(n, d);
        return Some(if neg { -r } else { r });
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

pub fn binomial_u(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// A number equal to `twice / 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfInt {
    twice: BigInt,
}

impl HalfInt {
    pub fn from_twice(twice: impl Into<BigInt>) -> Self {
        HalfInt { twice: twice.into() }
    }
    pub fn from_int(v: impl Into<BigInt>) -> Self {
        HalfInt { twice: v.into() * 2 }
    }
    pub fn from_rational(r: &Rational) -> Option<Self> {
        let t = r * qi(2);
        t.is_integer().then(|| HalfInt { twice: t.to_integer() })
    }
    pub fn twice(&self) -> &BigInt {
        &self.twice
    }
    pub fn value(&self) -> Rational {
        Rational::new(self.twice.clone(), BigInt::from(2))
    }
    pub fn is_integer(&self) -> bool {
        self.twice.is_even()
    }
    pub fn floor(&self) -> BigInt {
        self.twice.div_floor(&BigInt::from(2))
    }
    pub fn to_f64(&self) -> f64 {
        self.twice.to_f64().unwrap_or(f64::NAN) / 2.0
    }
}

impl PartialOrd for HalfInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HalfInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.twice.cmp(&other.twice)
    }
}
impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + o.twice }
    }
}
impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - o.twice }
    }
}
impl Add<i64> for HalfInt {
    type Output = HalfInt;
    fn add(self, o: i64) -> HalfInt {
        HalfInt { twice: self.twice + 2 * o }
    }
}
impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", &self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// `rational · π^(pi_half_exp/2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactReal {
    rational: Rational,
    pi_half_exp: i32,
}

impl ExactReal {
    pub fn new(rational: Rational, pi_half_exp: i32) -> Self {
        if rational.is_zero() {
            ExactReal { rational, pi_half_exp: 0 }
        } else {
            ExactReal { rational, pi_half_exp }
        }
    }
    pub fn rational(r: Rational) -> Self {
        ExactReal::new(r, 0)
    }
    pub fn zero() -> Self {
        ExactReal::rational(Rational::zero())
    }
    pub fn one() -> Self {
        ExactReal::rational(Rational::one())
    }
    pub fn sqrt_pi() -> Self {
        ExactReal::new(Rational::one(), 1)
    }
    pub fn coefficient(&self) -> &Rational {
        &self.rational
    }
    pub fn pi_half_exp(&self) -> i32 {
        self.pi_half_exp
    }
    pub fn is_zero(&self) -> bool {
        self.rational.is_zero()
    }
    /// The rational value, if no power of π remains.
    pub fn as_rational(&self) -> Option<&Rational> {
        (self.pi_half_exp == 0).then_some(&self.rational)
    }
    pub fn checked_add(&self, o: &ExactReal) -> Result<ExactReal, MathError> {
        if self.is_zero() {
            return Ok(o.clone());
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_half_exp != o.pi_half_exp {
            return Err(MathError::MixedPi);
        }
        Ok(ExactReal::new(&self.rational + &o.rational, self.pi_half_exp))
    }
    pub fn checked_sub(&self, o: &ExactReal) -> Result<ExactReal, MathError> {
        self.checked_add(&-o.clone())
    }
    pub fn checked_div(&self, o: &ExactReal) -> Result<ExactReal, MathError> {
        if o.is_zero() {
            return Err(MathError::Pole("division by zero".into()));
        }
        Ok(ExactReal::new(
            &self.rational / &o.rational,
            self.pi_half_exp - o.pi_half_exp,
        ))
    }
    pub fn scale(&self, r: &Rational) -> ExactReal {
        ExactReal::new(&self.rational * r, self.pi_half_exp)
    }
    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.rational) * std::f64::consts::PI.powf(self.pi_half_exp as f64 / 2.0)
    }
}

impl Mul for ExactReal {
    type Output = ExactReal;
    fn mul(self, o: ExactReal) -> ExactReal {
        ExactReal::new(self.rational * o.rational, self.pi_half_exp + o.pi_half_exp)
    }
}
impl<'a> Mul<&'a ExactReal> for &'a ExactReal {
    type Output = ExactReal;
    fn mul(self, o: &ExactReal) -> ExactReal {
        ExactReal::new(&self.rational * &o.rational, self.pi_half_exp + o.pi_half_exp)
    }
}
impl Neg for ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        ExactReal::new(-self.rational, self.pi_half_exp)
    }
}
impl From<Rational> for ExactReal {
    fn from(r: Rational) -> Self {
        ExactReal::rational(r)
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_half_exp {
            0 => write!(f, "{}", self.rational),
            e => write!(f, "{}·π^({}/2)", self.rational, e),
        }
    }
}

/// Field operations shared by exact rationals and truncated Laurent series, so
/// that every moment formula is written once.
pub trait Scalar: Clone + fmt::Debug {
    fn from_q(q: Rational) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn inv(&self) -> Result<Self, MathError>;

    fn over(&self, o: &Self) -> Result<Self, MathError> {
        Ok(self.times(&o.inv()?))
    }
    fn scale(&self, r: &Rational) -> Self {
        self.times(&Self::from_q(r.clone()))
    }
    fn shift(&self, r: &Rational) -> Self {
        self.plus(&Self::from_q(r.clone()))
    }
    fn int(i: i64) -> Self {
        Self::from_q(qi(i))
    }
}

impl Scalar for Rational {
    fn from_q(q: Rational) -> Self {
        q
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Result<Self, MathError> {
        if self.is_zero() {
            Err(MathError::Pole("division by zero".into()))
        } else {
            Ok(Rational::recip(self))
        }
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn shift(&self, r: &Rational) -> Self {
        self + r
    }
}

/// `(x)_m = Γ(x+m)/Γ(x)` as a finite product, for any sign of `m`.
pub fn poch_s<S: Scalar>(x: &S, m: i64) -> Result<S, MathError> {
    let mut p = S::int(1);
    if m >= 0 {
        for i in 0..m {
            p = p.times(&x.shift(&qi(i)));
        }
        Ok(p)
    } else {
        for i in 1..=(-m) {
            p = p.times(&x.shift(&qi(-i)));
        }
        p.inv()
            .map_err(|_| MathError::Pole(format!("Pochhammer ({x:?})_({m})")))
    }
}

/// Pochhammer symbol of a rational or half-integer argument.
pub fn poch(x: &Rational, m: i64) -> Result<ExactReal, MathError> {
    poch_q(x, m).map(ExactReal::rational)
}

pub fn poch_q(x: &Rational, m: i64) -> Result<Rational, MathError> {
    poch_s::<Rational>(x, m).map_err(|_| MathError::Pole(format!("Pochhammer ({x})_({m})")))
}

/// Generalized binomial `Γ(k+1)/(Γ(k−j+1)Γ(j+1))`; a Γ-pole in the denominator gives 0,
/// and negative integer `k` uses the limiting form `(−1)^j·C(−k+j−1, −k−1)`.
pub fn binom_gen(k: &Rational, j: i64) -> Rational {
    if j < 0 {
        return Rational::zero();
    }
    if k.is_integer() && k.is_negative() {
        let kb = (-k.to_integer()).to_u64().expect("binomial top too large");
        let v = Rational::from_integer(binomial_u(kb + j as u64 - 1, kb - 1));
        return if j % 2 == 1 { -v } else { v };
    }
    let num = poch_q(&(k - qi(j) + qi(1)), j).expect("positive-length Pochhammer has no pole");
    num / Rational::from_integer(factorial(j as u64))
}

/// Generalized binomial with an integer top.
pub fn binom_i(k: i64, j: i64) -> Rational {
    if j < 0 {
        return Rational::zero();
    }
    if k >= 0 {
        return Rational::from_integer(binomial_u(k as u64, j as u64));
    }
    binom_gen(&qi(k), j)
}

/// Exact Γ at an integer or half-integer.
pub fn gamma_half(x: &HalfInt) -> Result<ExactReal, MathError> {
    if x.is_integer() {
        let v = x.floor();
        if !v.is_positive() {
            return Err(MathError::Pole(format!("Γ({x})")));
        }
        let n = v.to_u64().expect("Γ argument too large");
        return Ok(ExactReal::rational(Rational::from_integer(factorial(n - 1))));
    }
    // Γ(x) = Γ(1/2)·(1/2)_(x−1/2)
    let m = (x.value() - q(1, 2)).to_integer().to_i64().expect("Γ argument too large");
    Ok(ExactReal::new(poch_q(&q(1, 2), m)?, 1))
}

/// Γ of a rational that must be an integer or half-integer.
pub fn gamma_q(x: &Rational) -> Result<ExactReal, MathError> {
    let h = HalfInt::from_rational(x)
        .ok_or_else(|| MathError::Pole(format!("Γ({x}) is not at a half-integer")))?;
    gamma_half(&h)
}

/// `Γ(x)/Γ(y)` for half-integers.
pub fn gamma_ratio(x: &Rational, y: &Rational) -> Result<ExactReal, MathError> {
    gamma_q(x)?.checked_div(&gamma_q(y)?)
}

pub fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << e as usize)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_examples() {
        assert_eq!(poch_q(&qi(3), 2).unwrap(), qi(12));
        assert_eq!(poch_q(&qi(5), -2).unwrap(), q(1, 12));
        assert_eq!(poch(&q(1, 2), 1).unwrap(), ExactReal::rational(q(1, 2)));
        assert!(poch_q(&qi(2), -3).is_err());
        assert_eq!(poch_q(&qi(-3), 2).unwrap(), qi(6));
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binom_gen(&qi(3), 1), qi(3));
        assert_eq!(binom_gen(&qi(-2), 3), qi(-4));
        assert_eq!(binom_gen(&qi(1), 2), qi(0));
        assert_eq!(binom_gen(&q(1, 2), 2), q(-1, 8));
        assert_eq!(binom_i(-1, 4), qi(1));
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_half(&HalfInt::from_int(4)).unwrap(), ExactReal::rational(qi(6)));
        assert_eq!(gamma_half(&HalfInt::from_twice(1)).unwrap(), ExactReal::sqrt_pi());
        assert_eq!(
            gamma_half(&HalfInt::from_twice(5)).unwrap(),
            ExactReal::new(q(3, 4), 1)
        );
        assert_eq!(
            gamma_half(&HalfInt::from_twice(-1)).unwrap(),
            ExactReal::new(qi(-2), 1)
        );
        assert!(gamma_half(&HalfInt::from_int(0)).is_err());
    }

    #[test]
    fn exact_real_arithmetic() {
        let a = ExactReal::new(q(1, 3), 1);
        let b = ExactReal::new(q(2, 3), 1);
        assert_eq!(a.checked_add(&b).unwrap(), ExactReal::sqrt_pi());
        assert_eq!(a.checked_add(&ExactReal::one()), Err(MathError::MixedPi));
        let c = a.checked_div(&b).unwrap();
        assert_eq!(c, ExactReal::rational(q(1, 2)));
        assert_eq!((ExactReal::zero() * ExactReal::sqrt_pi()).pi_half_exp(), 0);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/4"), Some(q(3, 4)));
        assert_eq!(parse_rational("-1.25"), Some(q(-5, 4)));
        assert_eq!(parse_rational("7"), Some(qi(7)));
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn huge_rational_to_f64() {
        let big = Rational::new(factorial(400), factorial(398));
        assert!((rat_to_f64(&big) - 400.0 * 399.0).abs() < 1e-9);
        let r = Rational::new(factorial(300) * 3, factorial(300) * 4);
        assert_eq!(rat_to_f64(&r), 0.75);
    }
}
