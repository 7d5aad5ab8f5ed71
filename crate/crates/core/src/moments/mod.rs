//! Closed-form moment engines for β = 2, 4, 1.
//!
//! Every formula is written once, generically over [`Scalar`], and evaluated
//! first in exact rationals. If a Pochhammer factor hits a removable pole the
//! evaluation is repeated with the ensemble parameters perturbed by ε and the
//! ε⁰ coefficient is taken.

pub mod orthogonal;
pub mod symplectic;
pub mod unitary;

use std::cell::Cell;

use num_traits::{Signed, Zero};

use crate::error::{MathError, Result, RmtError};
use crate::exactnum::{q, qi, ExactReal, NumericValue, Rational, Scalar, Series};

pub use orthogonal::{
    goe_moment, goe_o, goe_phi, i_jacobi, i_laguerre, joe_moment, loe_moment, IncompleteTerm, Sign,
};
pub use symplectic::{
    gse_moment, jse_moment, lse_moment, lse_moment_real, s_gauss, s_jacobi, s_laguerre,
    SymplecticCorrection,
};
pub use unitary::{gue_moment, jue_moment, jue_moment_diff, lue_moment, lue_moment_f64, lue_moment_real};

thread_local! {
    static TERMS: Cell<usize> = const { Cell::new(0) };
}

pub(crate) fn tally(n: usize) {
    TERMS.with(|t| t.set(t.get() + n));
}

pub(crate) fn take_tally() -> usize {
    TERMS.with(|t| t.replace(0))
}

/// Outcome of a moment computation.
#[derive(Clone, Debug)]
pub struct MomentResult {
    pub value: Option<NumericValue>,
    pub convergent: bool,
    pub terms_summed: usize,
}

impl MomentResult {
    pub(crate) fn exact(v: ExactReal) -> Self {
        MomentResult { value: Some(NumericValue::Exact(v)), convergent: true, terms_summed: take_tally() }
    }
    pub(crate) fn rational(r: Rational) -> Self {
        MomentResult::exact(ExactReal::rational(r))
    }
    pub(crate) fn divergent() -> Self {
        take_tally();
        MomentResult { value: None, convergent: false, terms_summed: 0 }
    }
    /// The exact value, if the moment converged on the exact path.
    pub fn exact_value(&self) -> Option<&ExactReal> {
        self.value.as_ref().and_then(|v| v.as_exact())
    }
    /// The exact rational value; `None` if divergent, transcendental, or a float.
    pub fn rational_value(&self) -> Option<&Rational> {
        self.exact_value().and_then(|e| e.as_rational())
    }
    pub fn to_f64(&self) -> Option<f64> {
        self.value.as_ref().map(|v| v.to_f64())
    }
}

/// Maps arithmetic failures of a convergent-by-bound query to the public error.
pub(crate) fn wrap(r: std::result::Result<Rational, MathError>) -> Result<MomentResult> {
    match r {
        Ok(v) => Ok(MomentResult::rational(v)),
        Err(MathError::Pole(p)) => Err(RmtError::Divergent(p)),
        Err(e) => Err(e.into()),
    }
}

/// Perturbation slopes for the parameters, distinct so that sums such as a+b
/// stay perturbed.
pub(crate) fn pert(v: &Rational, slot: usize, cap: usize) -> Series {
    let slopes = [q(1, 1), q(7, 3), q(11, 5)];
    Series::linear(v.clone(), slopes[slot % slopes.len()].clone(), cap)
}

/// Exact evaluation with ε-regularization of removable poles.
pub(crate) fn regularized<FQ, FS>(exact: FQ, series: FS) -> std::result::Result<Rational, MathError>
where
    FQ: FnOnce() -> std::result::Result<Rational, MathError>,
    FS: Fn(usize) -> std::result::Result<Series, MathError>,
{
    match exact() {
        Err(MathError::Pole(_)) => {}
        other => return other,
    }
    let mut last = MathError::Precision;
    for cap in [6usize, 12, 24, 48] {
        take_tally();
        match series(cap).and_then(|s| s.constant_term()) {
            Ok(v) => return Ok(v),
            Err(MathError::Precision) => last = MathError::Precision,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

pub(crate) fn check_n(n: i64) -> Result<()> {
    if n < 1 {
        return Err(RmtError::invalid(format!("n must be at least 1, got {n}")));
    }
    Ok(())
}

/// Weight exponents must be integrable: a, b > −1 in the public parametrization.
pub(crate) fn check_exponent(name: &str, v: &Rational) -> Result<()> {
    if v <= &qi(-1) {
        return Err(RmtError::invalid(format!("{name} = {v} must exceed -1")));
    }
    Ok(())
}

/// Order −k of a Laguerre moment converges iff k < β(b+1)/2 (public b).
pub(crate) fn laguerre_converges(k: &Rational, beta: u8, b: &Rational) -> bool {
    if !k.is_negative() {
        return true;
    }
    let bound = Rational::from_integer(beta.into()) * (b + qi(1)) / qi(2);
    -k < bound
}

pub(crate) fn sum_s<S: Scalar>(terms: impl IntoIterator<Item = std::result::Result<S, MathError>>) -> std::result::Result<S, MathError> {
    let mut acc = S::from_q(Rational::zero());
    let mut count = 0;
    for t in terms {
        acc = acc.plus(&t?);
        count += 1;
    }
    tally(count);
    Ok(acc)
}
