//! Ensemble descriptions and the moment dispatcher.
//!
//! Public weights per β:
//!
//! | family   | β = 2            | β = 4                          | β = 1                            |
//! |----------|------------------|--------------------------------|----------------------------------|
//! | Gaussian | e^{−x²}          | e^{−2x²}                       | e^{−x²/2}                        |
//! | Laguerre | x^b e^{−x}       | x^{2b+1} e^{−2x}               | x^{(b−1)/2} e^{−x/2}             |
//! | Jacobi   | x^b (1−x)^a      | x^{2b+1}(1−x)^{2a+1}           | x^{(b−1)/2}(1−x)^{(a−1)/2}       |

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Result, RmtError};
use crate::exactnum::{qi, HalfInt, Rational};
use crate::moments::{self, MomentResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Beta {
    One,
    Two,
    Four,
}

impl Beta {
    pub fn value(self) -> u8 {
        match self {
            Beta::One => 1,
            Beta::Two => 2,
            Beta::Four => 4,
        }
    }

    pub fn from_u8(v: u8) -> Result<Beta> {
        match v {
            1 => Ok(Beta::One),
            2 => Ok(Beta::Two),
            4 => Ok(Beta::Four),
            _ => Err(RmtError::invalid(format!("beta must be 1, 2 or 4, got {v}"))),
        }
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Gaussian,
    Laguerre { b: Rational },
    Jacobi { a: Rational, b: Rational },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Gaussian => "gaussian",
            Family::Laguerre { .. } => "laguerre",
            Family::Jacobi { .. } => "jacobi",
        }
    }
}

impl FromStr for Family {
    type Err = RmtError;
    /// Parses the bare family name; parameters default to zero.
    fn from_str(s: &str) -> Result<Family> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "hermite" => Ok(Family::Gaussian),
            "laguerre" => Ok(Family::Laguerre { b: qi(0) }),
            "jacobi" => Ok(Family::Jacobi { a: qi(0), b: qi(0) }),
            other => Err(RmtError::invalid(format!("unknown ensemble family '{other}'"))),
        }
    }
}

/// Family, symmetry class and matrix size. `n` may be a half-integer for the
/// β = 4 Laguerre and Jacobi ensembles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EnsembleSpec {
    pub family: Family,
    pub beta: Beta,
    pub n: Rational,
}

impl EnsembleSpec {
    pub fn new(family: Family, beta: Beta, n: impl Into<Rational>) -> Self {
        EnsembleSpec { family, beta, n: n.into() }
    }

    pub fn gaussian(beta: Beta, n: i64) -> Self {
        Self::new(Family::Gaussian, beta, qi(n))
    }

    pub fn laguerre(beta: Beta, n: i64, b: Rational) -> Self {
        Self::new(Family::Laguerre { b }, beta, qi(n))
    }

    pub fn jacobi(beta: Beta, n: i64, a: Rational, b: Rational) -> Self {
        Self::new(Family::Jacobi { a, b }, beta, qi(n))
    }

    /// n as an integer, if it is one.
    pub fn n_int(&self) -> Option<i64> {
        if self.n.is_integer() {
            self.n.to_integer().to_i64()
        } else {
            None
        }
    }

    pub(crate) fn require_int_n(&self) -> Result<i64> {
        let n = self
            .n_int()
            .ok_or_else(|| RmtError::invalid(format!("n = {} must be an integer here", self.n)))?;
        if n < 1 {
            return Err(RmtError::invalid(format!("n must be at least 1, got {n}")));
        }
        Ok(n)
    }

    pub fn validate(&self) -> Result<()> {
        let half = HalfInt::from_rational(&self.n)
            .ok_or_else(|| RmtError::invalid(format!("n = {} must be an integer or half-integer", self.n)))?;
        if !half.value().is_positive() {
            return Err(RmtError::invalid(format!("n must be positive, got {}", self.n)));
        }
        let half_ok = self.beta == Beta::Four && !matches!(self.family, Family::Gaussian);
        if !half.is_integer() && !half_ok {
            return Err(RmtError::invalid(format!(
                "half-integer n = {} is only defined for beta = 4 Laguerre and Jacobi",
                self.n
            )));
        }
        if self.beta == Beta::One && half.is_integer() {
            let n = self.require_int_n()?;
            if n % 2 != 0 {
                return Err(RmtError::OddDimension(n));
            }
        }
        let bad = |v: &Rational| v <= &qi(-1);
        match &self.family {
            Family::Gaussian => Ok(()),
            Family::Laguerre { b } if bad(b) => Err(RmtError::invalid(format!("b = {b} must exceed -1"))),
            Family::Jacobi { a, .. } if bad(a) => Err(RmtError::invalid(format!("a = {a} must exceed -1"))),
            Family::Jacobi { b, .. } if bad(b) => Err(RmtError::invalid(format!("b = {b} must exceed -1"))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for EnsembleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match (&self.family, self.beta) {
            (Family::Gaussian, Beta::One) => "GOE",
            (Family::Gaussian, Beta::Two) => "GUE",
            (Family::Gaussian, Beta::Four) => "GSE",
            (Family::Laguerre { .. }, Beta::One) => "LOE",
            (Family::Laguerre { .. }, Beta::Two) => "LUE",
            (Family::Laguerre { .. }, Beta::Four) => "LSE",
            (Family::Jacobi { .. }, Beta::One) => "JOE",
            (Family::Jacobi { .. }, Beta::Two) => "JUE",
            (Family::Jacobi { .. }, Beta::Four) => "JSE",
        };
        write!(f, "{tag}(n={}", self.n)?;
        match &self.family {
            Family::Gaussian => {}
            Family::Laguerre { b } => write!(f, ", b={b}")?,
            Family::Jacobi { a, b } => write!(f, ", a={a}, b={b}")?,
        }
        write!(f, ")")
    }
}

/// ⟨Σᵢ xᵢᵏ⟩ for the given ensemble. Integer k takes the exact path.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentQuery {
    pub ensemble: EnsembleSpec,
    pub k: Rational,
}

impl MomentQuery {
    pub fn new(ensemble: EnsembleSpec, k: impl Into<Rational>) -> Self {
        MomentQuery { ensemble, k: k.into() }
    }
}

/// True if the moment of order k is finite.
pub fn converges(e: &EnsembleSpec, k: &Rational) -> bool {
    match &e.family {
        Family::Laguerre { b } => moments::laguerre_converges(k, e.beta.value(), b),
        // x^k on (0,1) with x^{β(b+1)/2−1} near zero
        Family::Jacobi { b, .. } => {
            !k.is_negative() || -k < Rational::from_integer(e.beta.value().into()) * (b + qi(1)) / qi(2)
        }
        Family::Gaussian => !k.is_negative(),
    }
}

/// Dispatches to the closed-form engine for the ensemble.
pub fn moment(q: &MomentQuery) -> Result<MomentResult> {
    let e = &q.ensemble;
    e.validate()?;
    if !converges(e, &q.k) {
        return Ok(MomentResult::divergent());
    }
    let k_int = if q.k.is_integer() { q.k.to_integer().to_i64() } else { None };
    let real_only = || {
        RmtError::invalid(format!(
            "non-integer order k = {} is supported for the LUE and LSE only",
            q.k
        ))
    };
    let negative_only_laguerre = |k: i64| -> Result<()> {
        if k < 0 {
            return Err(RmtError::invalid(format!(
                "negative order k = {k} is supported for the Laguerre ensembles only"
            )));
        }
        Ok(())
    };
    match (&e.family, e.beta) {
        (Family::Laguerre { b }, Beta::Two) => match k_int {
            Some(k) => moments::lue_moment(k, e.require_int_n()?, b),
            None => moments::lue_moment_real(&q.k, e.require_int_n()?, b),
        },
        (Family::Laguerre { b }, Beta::Four) => match k_int {
            Some(k) => moments::lse_moment(k, &e.n, b),
            None => moments::lse_moment_real(&q.k, &e.n, b),
        },
        (Family::Laguerre { b }, Beta::One) => {
            let k = k_int.ok_or_else(real_only)?;
            moments::loe_moment(k, e.require_int_n()?, b)
        }
        (Family::Jacobi { a, b }, beta) => {
            let k = k_int.ok_or_else(real_only)?;
            negative_only_laguerre(k)?;
            match beta {
                Beta::Two => moments::jue_moment(k, e.require_int_n()?, a, b),
                Beta::Four => moments::jse_moment(k, &e.n, a, b),
                Beta::One => moments::joe_moment(k, e.require_int_n()?, a, b),
            }
        }
        (Family::Gaussian, beta) => {
            let k = k_int.ok_or_else(real_only)?;
            negative_only_laguerre(k)?;
            let n = e.require_int_n()?;
            match beta {
                Beta::Two => moments::gue_moment(k, n),
                Beta::Four => moments::gse_moment(k, n),
                Beta::One => moments::goe_moment(k, n),
            }
        }
    }
}
