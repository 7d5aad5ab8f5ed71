//! Verification suites comparing the closed forms with the oracles.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::densities::{quad_moment_f64, DensityModel};
use crate::ensemble::{moment, Beta, EnsembleSpec, Family, MomentQuery};
use crate::error::{Result, RmtError};
use crate::exactnum::{pow2, q, qi, Rational};
use crate::moments::{i_jacobi, i_laguerre, jse_moment, lse_moment, Sign};
use crate::oracle::{bruteforce_jpdf_moment, mc_moment, vandermonde_moment, SamplerConfig};
use crate::orthopoly::{closed, PolyFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Quad,
    Mc,
    Brute,
    Duality,
    All,
}

impl FromStr for Suite {
    type Err = RmtError;
    fn from_str(s: &str) -> Result<Suite> {
        match s {
            "quad" => Ok(Suite::Quad),
            "mc" => Ok(Suite::Mc),
            "brute" => Ok(Suite::Brute),
            "duality" => Ok(Suite::Duality),
            "all" => Ok(Suite::All),
            other => Err(RmtError::invalid(format!("unknown suite '{other}'"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Quad => "quad",
            Suite::Mc => "mc",
            Suite::Brute => "brute",
            Suite::Duality => "duality",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

/// Outcome of one comparison.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(suite: Suite, name: String, passed: bool, detail: String) -> Check {
        Check { suite, name, passed, detail }
    }
}

fn exact_f64(e: &EnsembleSpec, k: i64) -> Result<f64> {
    moment(&MomentQuery::new(e.clone(), qi(k)))?
        .to_f64()
        .ok_or_else(|| RmtError::Divergent(format!("{e} k={k}")))
}

fn rel_check(suite: Suite, name: String, got: Result<f64>, want: Result<f64>, tol: f64) -> Check {
    match (got, want) {
        (Ok(g), Ok(w)) => {
            let err = (g - w).abs() / w.abs().max(1e-300);
            let ok = err <= tol || (w == 0.0 && g.abs() <= tol);
            Check::new(suite, name, ok, format!("oracle {g:.15e} closed form {w:.15e} rel {err:.1e}"))
        }
        (Err(e), _) | (_, Err(e)) => Check::new(suite, name, false, format!("error: {e}")),
    }
}

/// Small grids of (ensemble, orders) shared by the suites.
fn quad_grid() -> Vec<(EnsembleSpec, Vec<i64>)> {
    let mut v = Vec::new();
    for n in 1..=3 {
        v.push((EnsembleSpec::gaussian(Beta::Two, n), vec![1, 2, 4]));
        v.push((EnsembleSpec::laguerre(Beta::Two, n, qi(1)), vec![-1, 1, 2, 3]));
        v.push((EnsembleSpec::jacobi(Beta::Two, n, qi(1), qi(2)), vec![1, 2, 3]));
        v.push((EnsembleSpec::laguerre(Beta::Four, n, q(1, 2)), vec![-1, 1, 2]));
        v.push((EnsembleSpec::jacobi(Beta::Four, n, q(-1, 4), qi(0)), vec![1, 2]));
        v.push((EnsembleSpec::gaussian(Beta::Four, n), vec![2, 4]));
    }
    for n in [2, 4] {
        v.push((EnsembleSpec::gaussian(Beta::One, n), vec![2, 4]));
        v.push((EnsembleSpec::laguerre(Beta::One, n, qi(2)), vec![-1, 1, 2]));
        v.push((EnsembleSpec::jacobi(Beta::One, n, qi(1), qi(0)), vec![1, 2, 3]));
    }
    v
}

pub fn quad_suite() -> Vec<Check> {
    let mut out = Vec::new();
    for (e, ks) in quad_grid() {
        let model = DensityModel::new(&e);
        for k in ks {
            let got = model.as_ref().map_err(Clone::clone).and_then(|m| quad_moment_f64(m, k as f64));
            out.push(rel_check(Suite::Quad, format!("{e} k={k}"), got, exact_f64(&e, k), 1e-8));
        }
    }
    out
}

pub fn brute_suite() -> Vec<Check> {
    let mut cases: Vec<(EnsembleSpec, Vec<i64>)> = Vec::new();
    for n in 1..=3 {
        cases.push((EnsembleSpec::laguerre(Beta::Four, n, qi(0)), vec![-1, 1, 2, 3]));
        cases.push((EnsembleSpec::jacobi(Beta::Four, n, q(1, 2), qi(1)), vec![1, 2, 3]));
        cases.push((EnsembleSpec::gaussian(Beta::Four, n), vec![2]));
    }
    cases.push((EnsembleSpec::gaussian(Beta::Two, 2), vec![2, 4]));
    cases.push((EnsembleSpec::gaussian(Beta::One, 2), vec![2, 4]));
    cases.push((EnsembleSpec::laguerre(Beta::One, 2, qi(2)), vec![-1, 1, 2, 3]));
    cases.push((EnsembleSpec::jacobi(Beta::One, 2, qi(0), qi(0)), vec![1, 2, 3]));
    let mut out = Vec::new();
    for (e, ks) in cases {
        for k in ks {
            let got = bruteforce_jpdf_moment(&e, k as f64).map(|v| v.to_f64());
            out.push(rel_check(Suite::Brute, format!("{e} k={k}"), got, exact_f64(&e, k), 1e-8));
        }
    }
    out
}

/// One Monte Carlo case: ensemble and order.
pub fn mc_grid() -> Vec<(EnsembleSpec, i64)> {
    vec![
        (EnsembleSpec::gaussian(Beta::Two, 3), 4),
        (EnsembleSpec::gaussian(Beta::One, 2), 2),
        (EnsembleSpec::gaussian(Beta::Four, 2), 4),
        (EnsembleSpec::laguerre(Beta::Two, 3, qi(1)), 2),
        (EnsembleSpec::laguerre(Beta::One, 4, qi(5)), 1),
        (EnsembleSpec::laguerre(Beta::One, 4, qi(5)), -1),
        (EnsembleSpec::laguerre(Beta::Four, 2, qi(1)), -1),
        (EnsembleSpec::jacobi(Beta::Two, 2, qi(1), qi(0)), 3),
        (EnsembleSpec::jacobi(Beta::One, 2, qi(1), qi(2)), 2),
        (EnsembleSpec::jacobi(Beta::Four, 2, qi(0), qi(1)), 2),
        (EnsembleSpec::jacobi(Beta::Four, 2, q(-1, 2), qi(0)), 1),
        (EnsembleSpec::jacobi(Beta::One, 4, qi(1), qi(0)), 1),
    ]
}

pub fn mc_suite(seed: u64, samples: usize) -> Vec<Check> {
    mc_grid()
        .into_iter()
        .map(|(e, k)| {
            let name = format!("{e} k={k}");
            let cfg = SamplerConfig::new(e.clone(), seed, samples);
            match (mc_moment(&cfg, k as f64), exact_f64(&e, k)) {
                (Ok(est), Ok(w)) => {
                    let z = est.z_score(w);
                    let detail = format!(
                        "estimate {:.6e} ± {:.1e} closed form {w:.6e} z {z:.2} ({:?})",
                        est.mean, est.std_error, est.method
                    );
                    Check::new(Suite::Mc, name, z <= 4.0, detail)
                }
                (Err(e), _) | (_, Err(e)) => Check::new(Suite::Mc, name, false, format!("error: {e}")),
            }
        })
        .collect()
}

/// β = 1 moments assembled from the β = 4 moment at half size plus the
/// incomplete-integral term.
pub fn duality_assembly(e: &EnsembleSpec, k: i64) -> Result<Rational> {
    let n = e.require_int_n()?;
    let half_n = q(n - 1, 2);
    let val = |m: crate::moments::MomentResult| {
        m.rational_value().cloned().ok_or_else(|| RmtError::invalid("rational value expected"))
    };
    match &e.family {
        Family::Laguerre { b } => {
            let dual = val(lse_moment(k, &half_n, &(b / qi(2)))?)? * pow2(1 + k);
            let sign = if k > 0 { Sign::Positive } else { Sign::Negative };
            let i = i_laguerre(k.abs(), n, b, sign)?;
            Ok(dual + i.i_value.as_rational().cloned().ok_or_else(|| RmtError::invalid("rational I expected"))?)
        }
        Family::Jacobi { a, b } => {
            let dual = val(jse_moment(k, &half_n, &(a / qi(2)), &(b / qi(2)))?)? * qi(2);
            let i = i_jacobi(k, n, a, b)?;
            Ok(dual + i.i_value.as_rational().cloned().ok_or_else(|| RmtError::invalid("rational I expected"))?)
        }
        Family::Gaussian => Err(RmtError::invalid("the duality covers Laguerre and Jacobi")),
    }
}

/// Half-shift identity e⁽⁴⁾_{n/2−1/2−j, n/2−3/2} = e⁽¹⁾_{n/2−1−j, n/2−2}, exactly.
pub fn half_shift_holds(b: &Rational, n: i64) -> Result<bool> {
    let fam = PolyFamily::Laguerre { b: b.clone() };
    for j in 1..n / 2 {
        let e4 = closed::e4_at(&fam, &(q(n - 1, 2) - qi(j)), &q(n - 3, 2))?;
        let e1 = closed::e1_at(&fam, &qi(n / 2 - 1 - j), &qi(n / 2 - 2))?;
        if e4 != e1 {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn duality_suite() -> Vec<Check> {
    let mut out = Vec::new();
    let cases = [
        EnsembleSpec::laguerre(Beta::One, 2, qi(2)),
        EnsembleSpec::laguerre(Beta::One, 4, qi(3)),
        EnsembleSpec::jacobi(Beta::One, 2, qi(1), qi(2)),
        EnsembleSpec::jacobi(Beta::One, 4, qi(0), qi(1)),
    ];
    for e in &cases {
        let n = e.n_int().unwrap_or(0);
        let ks: Vec<i64> = match e.family {
            Family::Laguerre { .. } => vec![-1, 1, 2, 3],
            _ => vec![1, 2, 3],
        };
        for k in ks {
            let dual = duality_assembly(e, k).map(|r| crate::exactnum::rat_to_f64(&r));
            let oracle = if n <= 3 {
                bruteforce_jpdf_moment(e, k as f64).map(|v| v.to_f64())
            } else {
                DensityModel::new(e).and_then(|m| quad_moment_f64(&m, k as f64))
            };
            out.push(rel_check(Suite::Duality, format!("{e} k={k} duality vs oracle"), oracle, dual, 1e-8));
        }
    }
    for n in [4, 6, 8] {
        for b in [qi(0), qi(1), q(3, 2)] {
            let name = format!("half-shift identity n={n} b={b}");
            let c = match half_shift_holds(&b, n) {
                Ok(ok) => Check::new(Suite::Duality, name, ok, "exact".into()),
                Err(e) => Check::new(Suite::Duality, name, false, format!("error: {e}")),
            };
            out.push(c);
        }
    }
    for e in [
        EnsembleSpec::gaussian(Beta::Four, 3),
        EnsembleSpec::laguerre(Beta::Four, 2, q(1, 2)),
        EnsembleSpec::jacobi(Beta::Two, 3, qi(2), q(1, 2)),
    ] {
        for k in 1..=3 {
            let name = format!("{e} k={k} monomial expansion");
            let want = moment(&MomentQuery::new(e.clone(), qi(k))).ok().and_then(|m| m.rational_value().cloned());
            let c = match vandermonde_moment(&e, k) {
                Ok(v) => Check::new(Suite::Duality, name, Some(&v) == want.as_ref(), format!("{v}")),
                Err(err) => Check::new(Suite::Duality, name, false, format!("error: {err}")),
            };
            out.push(c);
        }
    }
    out
}

/// Runs one suite (or all of them).
pub fn run_suite(suite: Suite, seed: u64, samples: usize) -> Vec<Check> {
    match suite {
        Suite::Quad => quad_suite(),
        Suite::Mc => mc_suite(seed, samples),
        Suite::Brute => brute_suite(),
        Suite::Duality => duality_suite(),
        Suite::All => {
            let mut v = quad_suite();
            v.extend(brute_suite());
            v.extend(duality_suite());
            v.extend(mc_suite(seed, samples));
            v
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_shift() {
        assert!(half_shift_holds(&q(1, 2), 6).unwrap());
    }

    #[test]
    fn duality_matches_engine() {
        let e = EnsembleSpec::laguerre(Beta::One, 4, qi(2));
        for k in [-1, 1, 2] {
            let engine = moment(&MomentQuery::new(e.clone(), qi(k))).unwrap();
            assert_eq!(engine.rational_value(), Some(&duality_assembly(&e, k).unwrap()));
        }
    }

    #[test]
    fn quad_and_duality_suites_pass() {
        for c in quad_suite().into_iter().chain(duality_suite()) {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
