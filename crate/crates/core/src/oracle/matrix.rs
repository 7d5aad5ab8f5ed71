//! Matrix models whose eigenvalues follow the public joint densities.
//!
//! Gaussian: self-adjoint matrices scaled so each eigenvalue carries
//! e^{−βx²/2}. Laguerre: W = XX† with X of size
//! n × (n+b). Jacobi: (W₁+W₂)⁻¹W₁ with W₁, W₂ of widths n+b and n+a.
//! Quaternion matrices use the 2n × 2n complex embedding; every eigenvalue
//! then appears twice.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::ensemble::{Beta, EnsembleSpec, Family};
use crate::error::{Result, RmtError};
use crate::exactnum::Rational;

#[derive(Clone, Copy, Debug)]
enum Model {
    Gaussian,
    Wishart { m: usize },
    Manova { m1: usize, m2: usize },
}

pub(crate) struct MatrixSampler {
    beta: Beta,
    n: usize,
    model: Model,
    rng: ChaCha8Rng,
}

fn width(n: usize, p: &Rational, name: &str) -> Result<usize> {
    if p.is_integer() && *p >= Rational::from_integer(0.into()) {
        if let Some(v) = p.to_integer().to_usize() {
            return Ok(n + v);
        }
    }
    Err(RmtError::Unrealizable(format!("{name} = {p} is not a nonnegative integer")))
}

impl MatrixSampler {
    pub(crate) fn new(e: &EnsembleSpec, n: usize, rng: ChaCha8Rng) -> Result<Self> {
        let model = match &e.family {
            Family::Gaussian => Model::Gaussian,
            Family::Laguerre { b } => Model::Wishart { m: width(n, b, "b")? },
            Family::Jacobi { a, b } => Model::Manova { m1: width(n, b, "b")?, m2: width(n, a, "a")? },
        };
        Ok(MatrixSampler { beta: e.beta, n, model, rng })
    }

    fn normal(&mut self, sd: f64) -> f64 {
        let z: f64 = self.rng.sample(StandardNormal);
        z * sd
    }

    fn complex(&mut self, sd: f64) -> Complex64 {
        Complex64::new(self.normal(sd), self.normal(sd))
    }

    /// Entries with density ∝ e^{−|z|²}-type scaling: real sd for β = 1,
    /// complex per-component sd for β = 2 and the quaternion embedding.
    fn rectangular(&mut self, rows: usize, cols: usize) -> DMatrix<Complex64> {
        match self.beta {
            Beta::One => DMatrix::from_fn(rows, cols, |_, _| Complex64::new(self.normal(1.0), 0.0)),
            Beta::Two => DMatrix::from_fn(rows, cols, |_, _| self.complex(0.5f64.sqrt())),
            Beta::Four => {
                let a = DMatrix::from_fn(rows, cols, |_, _| self.complex(0.5));
                let b = DMatrix::from_fn(rows, cols, |_, _| self.complex(0.5));
                quaternion_embed(&a, &b)
            }
        }
    }

    fn gaussian(&mut self) -> DMatrix<Complex64> {
        let n = self.n;
        match self.beta {
            // e^{−tr H²/2}
            Beta::One => {
                let mut h = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
                for i in 0..n {
                    h[(i, i)] = Complex64::new(self.normal(1.0), 0.0);
                    for j in 0..i {
                        let v = Complex64::new(self.normal(0.5f64.sqrt()), 0.0);
                        h[(i, j)] = v;
                        h[(j, i)] = v;
                    }
                }
                h
            }
            // e^{−tr H²}
            Beta::Two => {
                let mut h = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
                for i in 0..n {
                    h[(i, i)] = Complex64::new(self.normal(0.5f64.sqrt()), 0.0);
                    for j in 0..i {
                        let v = self.complex(0.5);
                        h[(i, j)] = v;
                        h[(j, i)] = v.conj();
                    }
                }
                h
            }
            // e^{−tr M²} on the 2n × 2n embedding, i.e. e^{−2Σx²}
            Beta::Four => {
                let sd = (1.0f64 / 8.0).sqrt();
                let mut a = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
                let mut b = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
                for i in 0..n {
                    a[(i, i)] = Complex64::new(self.normal(0.5), 0.0);
                    for j in 0..i {
                        let v = self.complex(sd);
                        a[(i, j)] = v;
                        a[(j, i)] = v.conj();
                        let w = self.complex(sd);
                        b[(i, j)] = w;
                        b[(j, i)] = -w;
                    }
                }
                quaternion_embed(&a, &b)
            }
        }
    }

    /// One spectrum, ascending.
    pub(crate) fn sample(&mut self) -> Vec<f64> {
        let n = self.n;
        let m = match self.model {
            Model::Gaussian => self.gaussian(),
            Model::Wishart { m } => {
                let x = self.rectangular(n, m);
                &x * x.adjoint()
            }
            Model::Manova { m1, m2 } => {
                let x = self.rectangular(n, m1);
                let y = self.rectangular(n, m2);
                let w1 = &x * x.adjoint();
                let s = &w1 + &y * y.adjoint();
                let l = s.cholesky().expect("Wishart sum is positive definite").l();
                let dim = l.nrows();
                let li = l
                    .solve_lower_triangular(&DMatrix::identity(dim, dim))
                    .expect("triangular factor is invertible");
                &li * w1 * li.adjoint()
            }
        };
        spectrum(m, self.beta == Beta::Four)
    }
}

fn quaternion_embed(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (r, c) = a.shape();
    let mut m = DMatrix::from_element(2 * r, 2 * c, Complex64::new(0.0, 0.0));
    m.view_mut((0, 0), (r, c)).copy_from(a);
    m.view_mut((0, c), (r, c)).copy_from(b);
    m.view_mut((r, 0), (r, c)).copy_from(&(-b.map(|z| z.conj())));
    m.view_mut((r, c), (r, c)).copy_from(&a.map(|z| z.conj()));
    m
}

fn spectrum(m: DMatrix<Complex64>, doubled: bool) -> Vec<f64> {
    let h = (&m + m.adjoint()).map(|z| z * 0.5);
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    if doubled {
        ev.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
    } else {
        ev
    }
}
