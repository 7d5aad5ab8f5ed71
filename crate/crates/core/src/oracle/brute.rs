//! ⟨Σxᵢᵏ⟩ as a literal ratio of n-fold integrals of the joint density.

use std::cell::RefCell;

use super::Weight;
use crate::ensemble::{converges, EnsembleSpec};
use crate::error::{Result, RmtError};
use crate::exactnum::{HighPrecisionFloat, Rational};
use crate::quadrature::{integrate_with_complement, QuadOptions};

const INNER_REL: f64 = 1e-10;
const OUTER_REL: f64 = 1e-9;

struct Nested {
    w: Weight,
    beta: f64,
    n: usize,
    scale: f64,
    failure: RefCell<Option<RmtError>>,
}

impl Nested {
    /// ∫ over the coordinates after `fixed`, with xᵏ on the first one when
    /// `fixed` is empty.
    fn level(&self, fixed: &[f64], k: f64, abs_tol: f64) -> f64 {
        let (lo, hi) = self.w.support();
        let (elo, ehi) = self.w.edges();
        let outer = fixed.is_empty();
        let mut cuts: Vec<f64> = fixed.iter().copied().filter(|p| *p > lo && *p < hi).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut knots = vec![lo];
        knots.extend(cuts);
        knots.push(hi);
        let last = fixed.len() + 1 == self.n;
        let rel = if outer { OUTER_REL } else { INNER_REL };
        let mut total = 0.0;
        for (s, seg) in knots.windows(2).enumerate() {
            let (a, b) = (seg[0], seg[1]);
            let first = s == 0;
            let top = s + 2 == knots.len();
            let e_lo = if first { elo.map(|e| if outer { e + k } else { e }) } else { None };
            let e_hi = if top { ehi } else { None };
            let strict = outer;
            let max_intervals = if outer { 4000 } else { 400 };
            let opts = QuadOptions { rel_tol: rel, abs_tol, strict, max_intervals, ..QuadOptions::default() }
                .with_exponents(e_lo, e_hi)
                .with_scale(self.scale);
            let g = |x: f64, dd: f64| {
                // complement to 1 (Jacobi); exact only on the top segment
                let d = if top { dd } else { 1.0 - x };
                let mut v = self.w.eval(x, d);
                if v == 0.0 {
                    return 0.0;
                }
                for &p in fixed {
                    v *= (x - p).abs().powf(self.beta);
                }
                if outer && k != 0.0 {
                    v *= x.powf(k);
                }
                if !last {
                    let mut f = fixed.to_vec();
                    f.push(x);
                    v *= self.level(&f, 0.0, 0.0);
                }
                v
            };
            match integrate_with_complement(g, a, b, &opts) {
                Ok(r) => total += r.value,
                Err(e) => {
                    self.failure.borrow_mut().get_or_insert(e);
                }
            }
        }
        total
    }
}

/// Nested adaptive quadrature of the joint density for n ≤ 3.
pub fn bruteforce_jpdf_moment(ensemble: &EnsembleSpec, k: f64) -> Result<HighPrecisionFloat> {
    ensemble.validate()?;
    let n = ensemble
        .n_int()
        .filter(|n| (1..=3).contains(n))
        .ok_or_else(|| RmtError::invalid(format!("nested quadrature needs n in 1..=3, got {}", ensemble.n)))?
        as usize;
    let kq = Rational::from_float(k).ok_or_else(|| RmtError::invalid("k must be finite"))?;
    if !converges(ensemble, &kq) {
        return Err(RmtError::Divergent(format!("order {k} for {ensemble}")));
    }
    let w = Weight::of(ensemble);
    let nest = Nested {
        w,
        beta: f64::from(ensemble.beta.value()),
        n,
        scale: w.length_scale(n),
        failure: RefCell::new(None),
    };
    let z = nest.level(&[], 0.0, 0.0);
    let tol = 1e-11 * z * nest.scale.powf(k).max(1.0);
    let num = if k == 0.0 { z } else { nest.level(&[], k, tol) };
    if let Some(e) = nest.failure.into_inner() {
        return Err(e);
    }
    let v = n as f64 * num / z;
    Ok(HighPrecisionFloat::from_f64(v, 1e-9 * v.abs().max(1e-12)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{moment, Beta, MomentQuery};
    use crate::exactnum::{q, qi};

    #[test]
    fn agrees_with_closed_forms() {
        let cases = [
            (EnsembleSpec::jacobi(Beta::One, 2, qi(0), qi(0)), 1),
            (EnsembleSpec::gaussian(Beta::Two, 2), 2),
            (EnsembleSpec::laguerre(Beta::Four, 1, qi(0)), -1),
            (EnsembleSpec::laguerre(Beta::One, 2, qi(1)), 2),
            (EnsembleSpec::jacobi(Beta::Four, 2, q(1, 2), qi(1)), 3),
        ];
        for (e, k) in cases {
            let exact = moment(&MomentQuery::new(e.clone(), qi(k))).unwrap().to_f64().unwrap();
            let b = bruteforce_jpdf_moment(&e, k as f64).unwrap().to_f64();
            assert!((b - exact).abs() < 1e-8 * exact.abs(), "{e} k={k}: {b} vs {exact}");
        }
    }

    #[test]
    fn n_limits() {
        assert!(bruteforce_jpdf_moment(&EnsembleSpec::gaussian(Beta::Two, 4), 2.0).is_err());
    }
}
