//! Truncated Laurent series in a formal parameter ε with rational coefficients.
//!
//! Moment formulas are rational functions of the ensemble parameters, but their
//! individual terms can have removable poles at physically meaningful points.
//! Evaluating with the parameters shifted by multiples of ε and reading off the
//! ε⁰ coefficient gives the limit. Absolute precision is tracked, so a result
//! whose constant term is not determined is reported instead of guessed.

use num_traits::{One, Zero};

use super::{Rational, Scalar};
use crate::error::MathError;

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    /// exponent of `coeffs[0]`; `coeffs[0] != 0` whenever `coeffs` is non-empty
    val: i64,
    coeffs: Vec<Rational>,
    /// the value is known modulo `O(ε^abs)`; `None` means exact
    abs: Option<i64>,
    /// relative precision kept when a result has to be truncated
    cap: usize,
}

impl Series {
    /// The exact polynomial `c0 + c1·ε`.
    pub fn linear(c0: Rational, c1: Rational, cap: usize) -> Series {
        let mut s = Series { val: 0, coeffs: vec![c0, c1], abs: None, cap };
        s.normalize();
        s
    }

    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.val)
    }

    pub fn abs_precision(&self) -> Option<i64> {
        self.abs
    }

    /// Coefficient of ε^i if it is determined.
    pub fn coeff(&self, i: i64) -> Option<Rational> {
        if let Some(a) = self.abs {
            if i >= a {
                return None;
            }
        }
        if self.coeffs.is_empty() || i < self.val {
            return Some(Rational::zero());
        }
        let idx = (i - self.val) as usize;
        Some(self.coeffs.get(idx).cloned().unwrap_or_else(Rational::zero))
    }

    /// The ε⁰ coefficient. A nonzero negative power means a genuine pole.
    pub fn constant_term(&self) -> Result<Rational, MathError> {
        if !self.coeffs.is_empty() && self.val < 0 {
            return Err(MathError::Pole(format!("series has valuation {}", self.val)));
        }
        self.coeff(0).ok_or(MathError::Precision)
    }

    fn lower_valuation_bound(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            self.abs
        } else {
            Some(self.val)
        }
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64;
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if let Some(a) = self.abs {
            let keep = (a - self.val).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        if self.coeffs.is_empty() {
            self.val = self.abs.unwrap_or(0);
        }
    }

    fn truncate_to_cap(&mut self) {
        let cap = self.cap.max(1);
        if self.coeffs.len() > cap {
            self.coeffs.truncate(cap);
            let a = self.val + cap as i64;
            self.abs = Some(self.abs.map_or(a, |x| x.min(a)));
        }
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Scalar for Series {
    fn from_q(q: Rational) -> Self {
        let mut s = Series { val: 0, coeffs: vec![q], abs: None, cap: 0 };
        s.normalize();
        s
    }

    fn plus(&self, o: &Self) -> Self {
        let abs = min_opt(self.abs, o.abs);
        let lo = match (self.coeffs.is_empty(), o.coeffs.is_empty()) {
            (true, true) => abs.unwrap_or(0),
            (true, false) => o.val,
            (false, true) => self.val,
            (false, false) => self.val.min(o.val),
        };
        let hi = [self, o]
            .iter()
            .filter(|s| !s.coeffs.is_empty())
            .map(|s| s.val + s.coeffs.len() as i64)
            .max()
            .unwrap_or(lo);
        let mut coeffs = vec![Rational::zero(); (hi - lo).max(0) as usize];
        for s in [self, o] {
            for (i, c) in s.coeffs.iter().enumerate() {
                coeffs[(s.val - lo) as usize + i] += c;
            }
        }
        let mut r = Series { val: lo, coeffs, abs, cap: self.cap.max(o.cap) };
        r.normalize();
        r
    }

    fn minus(&self, o: &Self) -> Self {
        let neg = Series {
            val: o.val,
            coeffs: o.coeffs.iter().map(|c| -c).collect(),
            abs: o.abs,
            cap: o.cap,
        };
        self.plus(&neg)
    }

    fn times(&self, o: &Self) -> Self {
        let cap = self.cap.max(o.cap);
        let exact_zero = |s: &Series| s.coeffs.is_empty() && s.abs.is_none();
        if exact_zero(self) || exact_zero(o) {
            return Series { val: 0, coeffs: vec![], abs: None, cap };
        }
        let a1 = match (self.abs, o.lower_valuation_bound()) {
            (Some(a), Some(v)) => Some(a + v),
            _ => None,
        };
        let a2 = match (o.abs, self.lower_valuation_bound()) {
            (Some(a), Some(v)) => Some(a + v),
            _ => None,
        };
        let abs = min_opt(a1, a2);
        let mut coeffs = vec![Rational::zero(); (self.coeffs.len() + o.coeffs.len()).saturating_sub(1)];
        let limit = abs.map(|a| (a - self.val - o.val).max(0) as usize);
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in o.coeffs.iter().enumerate() {
                if limit.is_some_and(|l| i + j >= l) {
                    break;
                }
                coeffs[i + j] += x * y;
            }
        }
        let mut r = Series { val: self.val + o.val, coeffs, abs, cap };
        r.normalize();
        r.truncate_to_cap();
        r
    }

    fn inv(&self) -> Result<Self, MathError> {
        if self.coeffs.is_empty() {
            return Err(match self.abs {
                None => MathError::Pole("division by an exact zero series".into()),
                Some(_) => MathError::Precision,
            });
        }
        let cap = self.cap.max(1);
        let rel = match self.abs {
            Some(a) => ((a - self.val) as usize).min(cap),
            None => {
                if self.coeffs.len() == 1 {
                    // a monomial has an exact inverse
                    return Ok(Series {
                        val: -self.val,
                        coeffs: vec![Rational::recip(&self.coeffs[0])],
                        abs: None,
                        cap: self.cap,
                    });
                }
                cap
            }
        };
        let c0inv = Rational::recip(&self.coeffs[0]);
        let mut inv: Vec<Rational> = Vec::with_capacity(rel);
        inv.push(c0inv.clone());
        for m in 1..rel {
            let mut s = Rational::zero();
            for i in 1..=m.min(self.coeffs.len() - 1) {
                s += &self.coeffs[i] * &inv[m - i];
            }
            inv.push(-s * &c0inv);
        }
        let mut r = Series { val: -self.val, coeffs: inv, abs: Some(-self.val + rel as i64), cap: self.cap };
        r.normalize();
        Ok(r)
    }
}

impl Series {
    pub fn is_exact(&self) -> bool {
        self.abs.is_none()
    }
    pub fn one_exact() -> Series {
        Series::from_q(Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{poch_s, q, qi};

    fn eps(cap: usize) -> Series {
        Series::linear(qi(0), qi(1), cap)
    }

    #[test]
    fn removable_pole_cancels() {
        // (1+ε)/ε − 1/ε = 1
        let e = eps(6);
        let a = Series::linear(qi(1), qi(1), 6).over(&e).unwrap();
        let b = e.inv().unwrap();
        let d = a.minus(&b);
        assert_eq!(d.constant_term().unwrap(), qi(1));
    }

    #[test]
    fn genuine_pole_is_reported() {
        let e = eps(6);
        let x = Series::one_exact().over(&e).unwrap();
        assert!(matches!(x.constant_term(), Err(MathError::Pole(_))));
    }

    #[test]
    fn inverse_of_binomial() {
        // 1/(1−ε) = 1 + ε + ε² + ...
        let s = Series::linear(qi(1), qi(-1), 5).inv().unwrap();
        for i in 0..5 {
            assert_eq!(s.coeff(i).unwrap(), qi(1));
        }
        assert_eq!(s.coeff(5), None);
    }

    #[test]
    fn pochhammer_limit_through_pole() {
        // Γ(ε)/Γ(ε−1)... use (x)_(-1) = 1/(x−1) at x = 1+ε times ε → 1
        let x = Series::linear(qi(1), qi(1), 6);
        let p = poch_s(&x, -1).unwrap().times(&eps(6));
        assert_eq!(p.constant_term().unwrap(), qi(1));
        let y = Series::linear(q(1, 2), qi(3), 6);
        assert_eq!(poch_s(&y, 2).unwrap().constant_term().unwrap(), q(3, 4));
    }

    #[test]
    fn precision_exhaustion_is_detected() {
        // 1/ε² computed with one coefficient of relative precision, then times ε²
        let e = eps(1);
        let inv = e.times(&e).inv().unwrap();
        let back = inv.times(&e).times(&e);
        assert_eq!(back.constant_term().unwrap(), qi(1));
        let noisy = Series::linear(qi(1), qi(1), 1).inv().unwrap();
        let z = noisy.minus(&Series::one_exact()).over(&e).unwrap();
        assert_eq!(z.constant_term(), Err(MathError::Precision));
    }
}
