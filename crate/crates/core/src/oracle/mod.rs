//! Independent checks on the closed forms: Monte Carlo sampling of the
//! eigenvalues, nested quadrature of the joint density for n ≤ 3, and exact
//! expansion of |Δ|^β for even β.

mod brute;
mod matrix;
mod metropolis;
mod vandermonde;

pub use brute::bruteforce_jpdf_moment;
pub use metropolis::integrated_autocorrelation;
pub use vandermonde::vandermonde_moment;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ensemble::{converges, EnsembleSpec, Family};
use crate::error::{Result, RmtError};
use crate::exactnum::{rat_to_f64, Rational};

/// Joint density Π w(xᵢ)·|Δ(x)|^β with the public one-point weight
/// w(x) = x^{e_b}(1−x)^{e_a}e^{−r x} (Laguerre/Jacobi) or e^{−c x²} (Gaussian).
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Weight {
    Gaussian { c: f64 },
    Laguerre { e: f64, rate: f64 },
    Jacobi { eb: f64, ea: f64 },
}

impl Weight {
    pub(crate) fn of(e: &EnsembleSpec) -> Weight {
        let beta = f64::from(e.beta.value());
        let edge = |p: &Rational| beta * (rat_to_f64(p) + 1.0) / 2.0 - 1.0;
        match &e.family {
            Family::Gaussian => Weight::Gaussian { c: beta / 2.0 },
            Family::Laguerre { b } => Weight::Laguerre { e: edge(b), rate: beta / 2.0 },
            Family::Jacobi { a, b } => Weight::Jacobi { eb: edge(b), ea: edge(a) },
        }
    }

    /// log w(x), with d = 1 − x supplied separately for Jacobi.
    pub(crate) fn ln(&self, x: f64, d: f64) -> f64 {
        match *self {
            Weight::Gaussian { c } => -c * x * x,
            Weight::Laguerre { e, rate } if x > 0.0 => e * x.ln() - rate * x,
            Weight::Jacobi { eb, ea } if x > 0.0 && d > 0.0 => eb * x.ln() + ea * d.ln(),
            _ => f64::NEG_INFINITY,
        }
    }

    pub(crate) fn eval(&self, x: f64, d: f64) -> f64 {
        match *self {
            Weight::Gaussian { c } => (-c * x * x).exp(),
            Weight::Laguerre { e, rate } if x >= 0.0 => x.powf(e) * (-rate * x).exp(),
            Weight::Jacobi { eb, ea } if x >= 0.0 && d >= 0.0 => x.powf(eb) * d.powf(ea),
            _ => 0.0,
        }
    }

    pub(crate) fn support(&self) -> (f64, f64) {
        match self {
            Weight::Gaussian { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Weight::Laguerre { .. } => (0.0, f64::INFINITY),
            Weight::Jacobi { .. } => (0.0, 1.0),
        }
    }

    /// Exponents of the algebraic edge behaviour at (lo, hi).
    pub(crate) fn edges(&self) -> (Option<f64>, Option<f64>) {
        match *self {
            Weight::Gaussian { .. } => (None, None),
            Weight::Laguerre { e, .. } => (Some(e), None),
            Weight::Jacobi { eb, ea } => (Some(eb), Some(ea)),
        }
    }

    /// Rough width of the spectrum of n eigenvalues.
    pub(crate) fn length_scale(&self, n: usize) -> f64 {
        let n = n as f64;
        match *self {
            Weight::Gaussian { c } => (2.0 * n / c).sqrt() + 1.0,
            Weight::Laguerre { e, rate } => (e.abs() + 1.0 + 4.0 * n) / rate,
            Weight::Jacobi { .. } => 1.0,
        }
    }
}

/// Configuration of a Monte Carlo run. Estimates are a deterministic
/// function of (ensemble, seed, streams, samples).
#[derive(Clone, Debug)]
pub struct SamplerConfig {
    pub ensemble: EnsembleSpec,
    pub seed: u64,
    pub streams: usize,
    /// total number of spectra over all streams
    pub samples: usize,
    /// skip the matrix model even when it is available
    pub force_metropolis: bool,
}

impl SamplerConfig {
    pub fn new(ensemble: EnsembleSpec, seed: u64, samples: usize) -> Self {
        SamplerConfig { ensemble, seed, streams: 8, samples, force_metropolis: false }
    }

    pub fn with_streams(mut self, streams: usize) -> Self {
        self.streams = streams.max(1);
        self
    }

    fn per_stream(&self, s: usize) -> usize {
        let base = self.samples / self.streams;
        base + usize::from(s < self.samples % self.streams)
    }
}

/// How spectra are produced.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum SamplingMethod {
    MatrixModel,
    /// random-walk Metropolis on the joint density; `thin` sweeps between
    /// recorded samples, chosen from the integrated autocorrelation `tau`
    Metropolis { tau: f64, thin: usize },
}

/// A stream of eigenvalue tuples, each sorted ascending.
pub struct SpectrumStream {
    inner: Inner,
    remaining: usize,
}

enum Inner {
    Matrix(matrix::MatrixSampler),
    Metropolis(metropolis::Chain),
}

impl SpectrumStream {
    pub fn method(&self) -> SamplingMethod {
        match &self.inner {
            Inner::Matrix(_) => SamplingMethod::MatrixModel,
            Inner::Metropolis(c) => SamplingMethod::Metropolis { tau: c.tau(), thin: c.thin() },
        }
    }

    /// True when the matrix model was not available for these parameters.
    pub fn fell_back(&self) -> bool {
        matches!(self.inner, Inner::Metropolis(_))
    }
}

impl Iterator for SpectrumStream {
    type Item = Vec<f64>;
    fn next(&mut self) -> Option<Vec<f64>> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        Some(match &mut self.inner {
            Inner::Matrix(m) => m.sample(),
            Inner::Metropolis(c) => c.sample(),
        })
    }
}

fn stream_rng(seed: u64, stream: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

fn open_stream(cfg: &SamplerConfig, stream: usize) -> Result<SpectrumStream> {
    let e = &cfg.ensemble;
    e.validate()?;
    let n = e.n_int().ok_or_else(|| RmtError::invalid("sampling needs integer n"))? as usize;
    let rng = stream_rng(cfg.seed, stream);
    if !cfg.force_metropolis {
        match matrix::MatrixSampler::new(e, n, rng.clone()) {
            Ok(m) => return Ok(SpectrumStream { inner: Inner::Matrix(m), remaining: usize::MAX }),
            Err(RmtError::Unrealizable(_)) => {}
            Err(other) => return Err(other),
        }
    }
    let beta = f64::from(e.beta.value());
    Ok(SpectrumStream {
        inner: Inner::Metropolis(metropolis::Chain::new(Weight::of(e), beta, n, rng)),
        remaining: usize::MAX,
    })
}

/// `cfg.samples` spectra from the first stream of `cfg`.
pub fn sample_spectrum(cfg: &SamplerConfig) -> Result<SpectrumStream> {
    let mut s = open_stream(cfg, 0)?;
    s.remaining = cfg.samples;
    Ok(s)
}

/// Sample mean of Σᵢxᵢᵏ with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MCEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub method: SamplingMethod,
}

impl MCEstimate {
    /// |mean − exact| in units of the standard error.
    pub fn z_score(&self, exact: f64) -> f64 {
        if self.std_error == 0.0 {
            if self.mean == exact {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean - exact).abs() / self.std_error
        }
    }
}

struct Partial {
    values: Vec<f64>,
    method: SamplingMethod,
}

/// Monte Carlo estimate of ⟨Σxᵢᵏ⟩.
pub fn mc_moment(cfg: &SamplerConfig, k: f64) -> Result<MCEstimate> {
    mc_moments(cfg, &[k]).map(|mut v| v.remove(0))
}

/// Several orders from the same spectra.
pub fn mc_moments(cfg: &SamplerConfig, ks: &[f64]) -> Result<Vec<MCEstimate>> {
    if cfg.samples < 2 {
        return Err(RmtError::invalid("at least two samples are needed"));
    }
    for &k in ks {
        let kq = Rational::from_float(k).ok_or_else(|| RmtError::invalid("k must be finite"))?;
        if !converges(&cfg.ensemble, &kq) {
            return Err(RmtError::Divergent(format!("order {k} for {}", cfg.ensemble)));
        }
    }
    let parts: Vec<Result<Vec<Partial>>> = (0..cfg.streams)
        .into_par_iter()
        .map(|s| {
            let mut st = open_stream(cfg, s)?;
            let m = cfg.per_stream(s);
            let mut acc: Vec<Vec<f64>> = vec![Vec::with_capacity(m); ks.len()];
            for _ in 0..m {
                let x = st.next().expect("infinite stream");
                for (a, &k) in acc.iter_mut().zip(ks) {
                    a.push(power_sum(&x, k));
                }
            }
            let method = st.method();
            Ok(acc.into_iter().map(|values| Partial { values, method }).collect())
        })
        .collect();
    let mut per_k: Vec<Vec<Partial>> = (0..ks.len()).map(|_| Vec::new()).collect();
    for p in parts {
        for (slot, part) in per_k.iter_mut().zip(p?) {
            slot.push(part);
        }
    }
    Ok(per_k.into_iter().map(|parts| merge(&parts)).collect())
}

fn power_sum(x: &[f64], k: f64) -> f64 {
    if k == 0.0 {
        return x.len() as f64;
    }
    let ki = k as i32;
    if f64::from(ki) == k {
        x.iter().map(|v| v.powi(ki)).sum()
    } else {
        x.iter().map(|v| v.powf(k)).sum()
    }
}

/// Combines per-stream samples in stream order. For Metropolis chains the
/// variance is inflated by the remaining autocorrelation of each stream.
fn merge(parts: &[Partial]) -> MCEstimate {
    let n: usize = parts.iter().map(|p| p.values.len()).sum();
    let mean = parts.iter().flat_map(|p| p.values.iter()).sum::<f64>() / n as f64;
    let var = parts.iter().flat_map(|p| p.values.iter()).map(|v| (v - mean).powi(2)).sum::<f64>()
        / (n - 1) as f64;
    let mut inflation = 1.0;
    if matches!(parts[0].method, SamplingMethod::Metropolis { .. }) {
        let taus: Vec<f64> = parts.iter().map(|p| integrated_autocorrelation(&p.values)).collect();
        inflation = (2.0 * taus.iter().sum::<f64>() / taus.len() as f64).max(1.0);
    }
    MCEstimate { mean, std_error: (var * inflation / n as f64).sqrt(), samples: n, method: parts[0].method }
}

/// True if the matrix model can realize the ensemble parameters.
pub fn realizable(e: &EnsembleSpec) -> bool {
    let nonneg_int = |r: &Rational| r.is_integer() && *r >= Rational::from_integer(0.into());
    match &e.family {
        Family::Gaussian => true,
        Family::Laguerre { b } => nonneg_int(b),
        Family::Jacobi { a, b } => nonneg_int(a) && nonneg_int(b),
    }
}
