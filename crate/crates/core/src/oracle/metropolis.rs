//! Single-site random-walk Metropolis on Π w(xᵢ)|Δ(x)|^β.
//!
//! Coordinates are moved in an unconstrained variable: x itself (Gaussian),
//! log x (Laguerre) or logit x (Jacobi).

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::Weight;

const BURN_IN: usize = 2000;
const PILOT: usize = 4000;

pub(crate) struct Chain {
    weight: Weight,
    beta: f64,
    y: Vec<f64>,
    x: Vec<f64>,
    d: Vec<f64>,
    step: f64,
    rng: ChaCha8Rng,
    tau: f64,
    thin: usize,
}

impl Chain {
    pub(crate) fn new(weight: Weight, beta: f64, n: usize, rng: ChaCha8Rng) -> Chain {
        let y: Vec<f64> = (0..n)
            .map(|i| {
                let t = (i as f64 + 1.0) / (n as f64 + 1.0);
                match weight {
                    Weight::Gaussian { c } => (t - 0.5) * (2.0 * n as f64 / c).sqrt(),
                    Weight::Laguerre { e, rate } => (t * (e.abs() + 1.0 + 2.0 * n as f64) / rate).ln(),
                    Weight::Jacobi { .. } => (t / (1.0 - t)).ln(),
                }
            })
            .collect();
        let mut c = Chain { weight, beta, x: vec![0.0; n], d: vec![0.0; n], y, step: 0.5, rng, tau: 0.5, thin: 1 };
        for i in 0..n {
            c.sync(i);
        }
        for sweep in 0..BURN_IN {
            let acc = c.sweep();
            if sweep % 20 == 19 || sweep < 200 {
                c.step *= (2.0 * (acc - 0.4)).exp();
                c.step = c.step.clamp(1e-4, 20.0);
            }
        }
        let mut s1 = Vec::with_capacity(PILOT);
        let mut s2 = Vec::with_capacity(PILOT);
        let mut sm = Vec::with_capacity(PILOT);
        for _ in 0..PILOT {
            c.sweep();
            s1.push(c.x.iter().sum::<f64>());
            s2.push(c.x.iter().map(|v| v * v).sum::<f64>());
            sm.push(c.x.iter().cloned().fold(f64::INFINITY, f64::min));
        }
        c.tau = [&s1, &s2, &sm].iter().map(|s| integrated_autocorrelation(s)).fold(0.5, f64::max);
        c.thin = (2.0 * c.tau).ceil().max(1.0) as usize;
        c
    }

    pub(crate) fn tau(&self) -> f64 {
        self.tau
    }

    pub(crate) fn thin(&self) -> usize {
        self.thin
    }

    fn map(&self, y: f64) -> (f64, f64, f64) {
        match self.weight {
            Weight::Gaussian { .. } => (y, f64::INFINITY, 0.0),
            Weight::Laguerre { .. } => {
                let x = y.exp();
                (x, f64::INFINITY, y)
            }
            Weight::Jacobi { .. } => {
                // x = 1/(1+e^{−y}), 1 − x = 1/(1+e^{y})
                let x = 1.0 / (1.0 + (-y).exp());
                let d = 1.0 / (1.0 + y.exp());
                (x, d, x.ln() + d.ln())
            }
        }
    }

    fn sync(&mut self, i: usize) {
        let (x, d, _) = self.map(self.y[i]);
        self.x[i] = x;
        self.d[i] = d;
    }

    fn local(&self, i: usize, x: f64, d: f64, log_jac: f64) -> f64 {
        let mut s = self.weight.ln(x, d) + log_jac;
        for (j, &xj) in self.x.iter().enumerate() {
            if j != i {
                s += self.beta * (x - xj).abs().ln();
            }
        }
        s
    }

    /// One pass over all coordinates; returns the acceptance rate.
    fn sweep(&mut self) -> f64 {
        let n = self.y.len();
        let mut accepted = 0;
        for i in 0..n {
            let (x0, d0, j0) = self.map(self.y[i]);
            let z: f64 = self.rng.sample(StandardNormal);
            let y1 = self.y[i] + self.step * z;
            let (x1, d1, j1) = self.map(y1);
            let delta = self.local(i, x1, d1, j1) - self.local(i, x0, d0, j0);
            let u: f64 = self.rng.random();
            if delta.is_finite() && (delta >= 0.0 || u.ln() < delta) {
                self.y[i] = y1;
                self.x[i] = x1;
                self.d[i] = d1;
                accepted += 1;
            }
        }
        accepted as f64 / n as f64
    }

    pub(crate) fn sample(&mut self) -> Vec<f64> {
        for _ in 0..self.thin {
            self.sweep();
        }
        let mut v = self.x.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Integrated autocorrelation time τ = ½ + Σₜρ(t), with the self-consistent
/// window W ≥ 5τ. Uncorrelated data give τ ≈ ½.
pub fn integrated_autocorrelation(series: &[f64]) -> f64 {
    let n = series.len();
    if n < 4 {
        return 0.5;
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let c: Vec<f64> = series.iter().map(|v| v - mean).collect();
    let c0 = c.iter().map(|v| v * v).sum::<f64>() / n as f64;
    if c0 == 0.0 {
        return 0.5;
    }
    let mut tau = 0.5;
    for t in 1..n / 2 {
        let ct = c[..n - t].iter().zip(&c[t..]).map(|(a, b)| a * b).sum::<f64>() / n as f64;
        tau += ct / c0;
        if t as f64 >= 5.0 * tau {
            break;
        }
    }
    tau.max(0.5)
}
