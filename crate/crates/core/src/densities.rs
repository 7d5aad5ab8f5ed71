//! Eigenvalue densities ρ (normalized to n) and moments by quadrature.
//!
//! β = 2 uses the Christoffel–Darboux form
//! ρ₂ = w₂·(P′ₙPₙ₋₁ − PₙP′ₙ₋₁)/hₙ₋₁. β = 4 and β = 1 are built from ρ₂ plus
//! skew-orthogonal corrections in the "tilde" variables, with polynomials
//! orthogonal for w₂:
//!
//! ρ̃₄ = ½ρ₂[2n] − ½γ₂ₙ₋₁ w₂ Σⱼ e⁽⁴⁾ⱼ,ₙ₋₁ P₂ⱼP₂ₙ
//!
//! ρ̃₁ = ρ₂[n−1] − γₙ₋₂ w₂ Σⱼ e⁽¹⁾ⱼ,ₙ/₂₋₂ P₂ⱼ₊₁Pₙ₋₁ + γₙ₋₂ η⁽¹⁾ₙ/₂₋₂ w₁ Pₙ₋₁ ε[w₁]
//!
//! where w₁ = w₂/√f, f = 1, x, x(1−x) and ε[g](x) = ½∫sgn(x−t)g(t)dt. The β = 1
//! tilde weight is the public one; for β = 4 the public variable is x̃/2
//! (Laguerre) or x̃/√2 (Gaussian) with parameters halved.

use crate::ensemble::{Beta, EnsembleSpec, Family};
use crate::error::{Result, RmtError};
use crate::exactnum::{ln_gamma_f64, qi, rat_to_f64, HighPrecisionFloat, Rational};
use crate::orthopoly::{h_gamma, OrthoPolySystem, PolyFamily};
use crate::quadrature::{integrate, integrate_with_complement, QuadOptions, QuadResult};

const INNER_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
enum Shape {
    Unitary,
    Symplectic { gamma: f64, e4: Vec<f64> },
    Orthogonal { gamma: f64, e1: Vec<f64>, eta: f64, w1_total: f64 },
}

/// Pointwise density of one ensemble, immutable after construction.
#[derive(Clone, Debug)]
pub struct DensityModel {
    ensemble: EnsembleSpec,
    sys: OrthoPolySystem,
    /// degree of the β = 2 kernel entering the representation
    deg: usize,
    shape: Shape,
    /// public x = x̃ / scale
    scale: f64,
    b: f64,
    a: f64,
}

fn tilde_family(e: &EnsembleSpec) -> PolyFamily {
    let two = |r: &Rational| if e.beta == Beta::Four { r * qi(2) } else { r.clone() };
    match &e.family {
        Family::Gaussian => PolyFamily::Hermite,
        Family::Laguerre { b } => PolyFamily::Laguerre { b: two(b) },
        Family::Jacobi { a, b } => PolyFamily::Jacobi { a: two(a), b: two(b) },
    }
}

fn params(f: &PolyFamily) -> (f64, f64) {
    match f {
        PolyFamily::Hermite => (0.0, 0.0),
        PolyFamily::Laguerre { b } => (0.0, rat_to_f64(b)),
        PolyFamily::Jacobi { a, b } => (rat_to_f64(a), rat_to_f64(b)),
    }
}

/// c_j = h_{j+1}·h_jγ_j in floating point (any rational parameters).
fn c_f64(sys: &OrthoPolySystem, j: usize) -> f64 {
    sys.norm_h_f64(j + 1) * rat_to_f64(&h_gamma(sys.family(), j))
}

fn skew_gamma_f64(sys: &OrthoPolySystem, j: usize) -> f64 {
    rat_to_f64(&h_gamma(sys.family(), j)) / sys.norm_h_f64(j)
}

impl DensityModel {
    pub fn new(ensemble: &EnsembleSpec) -> Result<Self> {
        ensemble.validate()?;
        let n = ensemble.n_int().ok_or_else(|| {
            RmtError::invalid(format!("density needs integer n, got {}", ensemble.n))
        })? as usize;
        let fam = tilde_family(ensemble);
        let (a, b) = params(&fam);
        let scale = match (ensemble.beta, &ensemble.family) {
            (Beta::Four, Family::Gaussian) => std::f64::consts::SQRT_2,
            (Beta::Four, Family::Laguerre { .. }) => 2.0,
            _ => 1.0,
        };
        let (deg, max_degree) = match ensemble.beta {
            Beta::Two => (n, n),
            Beta::Four => (2 * n, 2 * n + 1),
            Beta::One => (n - 1, n + 1),
        };
        let sys = OrthoPolySystem::new(fam, max_degree + 1)?;
        let shape = match ensemble.beta {
            Beta::Two => Shape::Unitary,
            Beta::Four => {
                // e⁽⁴⁾_{j,n−1} = h_{2n−1}/c_{2n−2}·Π_{i=j}^{n−2} c_{2i+1}/c_{2i}
                let m = n - 1;
                let lead = sys.norm_h_f64(2 * m + 1) / c_f64(&sys, 2 * m);
                let e4 = (0..n)
                    .map(|j| (j..m).fold(lead, |v, i| v * c_f64(&sys, 2 * i + 1) / c_f64(&sys, 2 * i)))
                    .collect();
                Shape::Symplectic { gamma: skew_gamma_f64(&sys, 2 * n - 1), e4 }
            }
            Beta::One => {
                let half = n as i64 / 2 - 2;
                let e1 = if half < 0 {
                    Vec::new()
                } else {
                    let m = half as usize;
                    (0..=m)
                        .map(|j| {
                            let lead = sys.norm_h_f64(2 * m + 2) / c_f64(&sys, 2 * j + 1);
                            (j + 1..=m).fold(lead, |v, i| v * c_f64(&sys, 2 * i) / c_f64(&sys, 2 * i + 1))
                        })
                        .collect()
                };
                let eta = (0..=half.max(-1))
                    .filter(|&j| j >= 0)
                    .map(|j| j as usize)
                    .fold(1.0, |v, j| {
                        v * c_f64(&sys, 2 * j) * sys.norm_h_f64(2 * j + 2)
                            / (c_f64(&sys, 2 * j + 1) * sys.norm_h_f64(2 * j))
                    });
                let w1_total = match sys.family() {
                    PolyFamily::Hermite => (2.0 * std::f64::consts::PI).sqrt(),
                    PolyFamily::Laguerre { b } => {
                        let s = (b + qi(1)) / qi(2);
                        (rat_to_f64(&s) * std::f64::consts::LN_2 + ln_gamma_f64(&s)).exp()
                    }
                    PolyFamily::Jacobi { a, b } => {
                        let (sa, sb) = ((a + qi(1)) / qi(2), (b + qi(1)) / qi(2));
                        (ln_gamma_f64(&sa) + ln_gamma_f64(&sb) - ln_gamma_f64(&(sa + sb))).exp()
                    }
                };
                Shape::Orthogonal { gamma: skew_gamma_f64(&sys, n - 2), e1, eta, w1_total }
            }
        };
        Ok(DensityModel { ensemble: ensemble.clone(), sys, deg, shape, scale, a, b })
    }

    pub fn ensemble(&self) -> &EnsembleSpec {
        &self.ensemble
    }

    pub fn beta(&self) -> Beta {
        self.ensemble.beta
    }

    /// Support interval in public coordinates.
    pub fn support(&self) -> (f64, f64) {
        let (lo, hi) = self.sys.family().support();
        (lo / self.scale, hi / self.scale)
    }

    /// w₂(x) with the Jacobi factor (1−x)^a taken from the complement `d`.
    fn w2(&self, x: f64, d: f64) -> f64 {
        match self.sys.family() {
            PolyFamily::Hermite => (-x * x).exp(),
            PolyFamily::Laguerre { .. } if x < 0.0 => 0.0,
            PolyFamily::Laguerre { .. } => x.powf(self.b) * (-x).exp(),
            PolyFamily::Jacobi { .. } if x < 0.0 || d < 0.0 => 0.0,
            PolyFamily::Jacobi { .. } => x.powf(self.b) * d.powf(self.a),
        }
    }

    fn w1(&self, x: f64, d: f64) -> f64 {
        let (hb, ha) = (0.5 * (self.b - 1.0), 0.5 * (self.a - 1.0));
        match self.sys.family() {
            PolyFamily::Hermite => (-0.5 * x * x).exp(),
            PolyFamily::Laguerre { .. } if x <= 0.0 => 0.0,
            PolyFamily::Laguerre { .. } => x.powf(hb) * (-0.5 * x).exp(),
            PolyFamily::Jacobi { .. } if x <= 0.0 || d <= 0.0 => 0.0,
            PolyFamily::Jacobi { .. } => x.powf(hb) * d.powf(ha),
        }
    }

    /// ρ₂ of size `m` by the two-polynomial form, without the weight.
    fn cd_kernel(&self, m: usize, x: f64) -> f64 {
        if m == 0 {
            return 0.0;
        }
        let (pn, dn) = self.sys.eval_with_derivative(m, x);
        let (pm, dm) = self.sys.eval_with_derivative(m - 1, x);
        (dn * pm - pn * dm) / self.sys.norm_h_f64(m - 1)
    }

    /// ε[w₁](x) = ½(∫_{lo}^x w₁ − ∫_x^{hi} w₁).
    fn epsilon_w1(&self, x: f64, d: f64, total: f64) -> Result<f64> {
        let o = QuadOptions::default().with_rel_tol(INNER_TOL);
        match self.sys.family() {
            PolyFamily::Hermite => {
                let ax = x.abs();
                if ax > 40.0 {
                    return Ok(0.5 * total * x.signum());
                }
                let v = integrate(|t: f64| (-0.5 * t * t).exp(), 0.0, ax, &o)?.value;
                Ok(v * x.signum())
            }
            PolyFamily::Laguerre { .. } => {
                if x <= 0.0 {
                    return Ok(-0.5 * total);
                }
                let e = 0.5 * (self.b - 1.0);
                if x <= self.b.max(0.0) + 1.0 {
                    let v = integrate(|t| self.w1(t, 0.0), 0.0, x, &o.with_exponents(Some(e), None))?.value;
                    Ok(v - 0.5 * total)
                } else {
                    let v = integrate(|t| self.w1(t, 0.0), x, f64::INFINITY, &o.with_scale(4.0))?.value;
                    Ok(0.5 * total - v)
                }
            }
            PolyFamily::Jacobi { .. } => {
                if x <= 0.0 {
                    return Ok(-0.5 * total);
                }
                if d <= 0.0 {
                    return Ok(0.5 * total);
                }
                if x <= 0.5 {
                    let e = 0.5 * (self.b - 1.0);
                    let o = o.with_exponents(Some(e), None);
                    let v = integrate_with_complement(|t, _| self.w1(t, 1.0 - t), 0.0, x, &o)?.value;
                    Ok(v - 0.5 * total)
                } else {
                    // ∫_x^1 w₁ = ∫_0^d w₁(1−u) du with u the distance to 1
                    let e = 0.5 * (self.a - 1.0);
                    let o = o.with_exponents(Some(e), None);
                    let v = integrate_with_complement(|u, _| self.w1(1.0 - u, u), 0.0, d, &o)?.value;
                    Ok(0.5 * total - v)
                }
            }
        }
    }

    /// Tilde-variable density ρ̃(x̃); `d` is 1 − x̃ for Jacobi (ignored otherwise).
    pub fn eval_tilde_with_complement(&self, x: f64, d: f64) -> Result<f64> {
        let w2 = self.w2(x, d);
        match &self.shape {
            Shape::Unitary => Ok(w2 * self.cd_kernel(self.deg, x)),
            Shape::Symplectic { gamma, e4 } => {
                if w2 == 0.0 {
                    return Ok(0.0);
                }
                let two_n = self.deg;
                let p = self.sys.eval_all(two_n, x);
                let s: f64 = e4.iter().enumerate().map(|(j, c)| c * p[2 * j]).sum();
                Ok(0.5 * w2 * self.cd_kernel(two_n, x) - 0.5 * gamma * w2 * s * p[two_n])
            }
            Shape::Orthogonal { gamma, e1, eta, w1_total } => {
                let w1 = self.w1(x, d);
                if w1 == 0.0 {
                    return Ok(0.0);
                }
                let m = self.deg;
                let p = self.sys.eval_all(m, x);
                let s: f64 = e1.iter().enumerate().map(|(j, c)| c * p[2 * j + 1]).sum();
                let eps = self.epsilon_w1(x, d, *w1_total)?;
                Ok(w2 * self.cd_kernel(m, x) - gamma * w2 * s * p[m] + gamma * eta * w1 * p[m] * eps)
            }
        }
    }

    pub fn eval_tilde(&self, x: f64) -> Result<f64> {
        self.eval_tilde_with_complement(x, 1.0 - x)
    }

    /// ρ(x) in public coordinates.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (_, hi) = self.support();
        self.eval_with_complement(x, hi - x)
    }

    /// ρ(x) with d = hi − x passed separately (finite upper end).
    pub fn eval_with_complement(&self, x: f64, d: f64) -> Result<f64> {
        let s = self.scale;
        Ok(s * self.eval_tilde_with_complement(s * x, s * d)?)
    }

    /// ρ₂ as the sum w₂Σ_{j<n}P_j²/h_j (β = 2 models only).
    pub fn eval_sum_form(&self, x: f64) -> Result<f64> {
        if !matches!(self.shape, Shape::Unitary) {
            return Err(RmtError::invalid("sum form is defined for beta = 2 only"));
        }
        let p = self.sys.eval_all(self.deg, x);
        let s: f64 = (0..self.deg).map(|j| p[j] * p[j] / self.sys.norm_h_f64(j)).sum();
        Ok(self.w2(x, 1.0 - x) * s)
    }

    /// Exponent e with ρ ~ x^e at the lower end (and (hi−x)^e at a finite upper end).
    fn edge_exponents(&self) -> (Option<f64>, Option<f64>) {
        let beta = f64::from(self.ensemble.beta.value());
        let edge = |p: &Rational| beta * (rat_to_f64(p) + 1.0) / 2.0 - 1.0;
        match &self.ensemble.family {
            Family::Gaussian => (None, None),
            Family::Laguerre { b } => (Some(edge(b)), None),
            Family::Jacobi { a, b } => (Some(edge(b)), Some(edge(a))),
        }
    }

    fn length_scale(&self) -> f64 {
        let n = rat_to_f64(&self.ensemble.n);
        match &self.ensemble.family {
            Family::Gaussian => (4.0 * n).sqrt() + 3.0,
            Family::Laguerre { b } => {
                let s = 4.0 * n + 2.0 * rat_to_f64(b).abs() + 4.0;
                if self.ensemble.beta == Beta::One {
                    2.0 * s
                } else {
                    s
                }
            }
            Family::Jacobi { .. } => 1.0,
        }
    }

    /// ∫ g(x)ρ(x) dx with the given extra endpoint exponent shift at the lower end.
    fn integrate_against<G: Fn(f64) -> f64>(&self, g: G, lo_shift: f64, opts: QuadOptions) -> Result<QuadResult> {
        let (lo, hi) = self.support();
        let (el, eh) = self.edge_exponents();
        let o = opts.with_exponents(el.map(|e| e + lo_shift), eh).with_scale(self.length_scale());
        let err = std::cell::RefCell::new(None);
        let r = integrate_with_complement(
            |x, d| match self.eval_with_complement(x, d) {
                Ok(v) => g(x) * v,
                Err(e) => {
                    err.borrow_mut().get_or_insert(e);
                    0.0
                }
            },
            lo,
            hi,
            &o,
        )?;
        match err.into_inner() {
            Some(e) => Err(e),
            None => Ok(r),
        }
    }

    /// ∫ρ, which should equal n.
    pub fn normalization(&self) -> Result<f64> {
        Ok(self.integrate_against(|_| 1.0, 0.0, default_opts())?.value)
    }
}

fn default_opts() -> QuadOptions {
    QuadOptions { rel_tol: 1e-13, abs_tol: 1e-13, ..QuadOptions::default() }
}

pub fn density_beta2(ensemble: &EnsembleSpec) -> Result<DensityModel> {
    require(ensemble, Beta::Two)?;
    DensityModel::new(ensemble)
}

pub fn density_beta4(ensemble: &EnsembleSpec) -> Result<DensityModel> {
    require(ensemble, Beta::Four)?;
    DensityModel::new(ensemble)
}

pub fn density_beta1(ensemble: &EnsembleSpec) -> Result<DensityModel> {
    require(ensemble, Beta::One)?;
    DensityModel::new(ensemble)
}

fn require(e: &EnsembleSpec, beta: Beta) -> Result<()> {
    if e.beta != beta {
        return Err(RmtError::invalid(format!("expected beta = {beta}, got {}", e.beta)));
    }
    Ok(())
}

/// ⟨Σxᵢᵏ⟩ = ∫xᵏρ(x)dx by adaptive quadrature, with the achieved error estimate.
pub fn quad_moment(model: &DensityModel, k: f64) -> Result<HighPrecisionFloat> {
    if !k.is_finite() {
        return Err(RmtError::invalid("k must be finite"));
    }
    let (lo, _) = model.support();
    if k < 0.0 {
        if lo.is_infinite() {
            return Err(RmtError::invalid("negative orders need a support bounded below"));
        }
        let (el, _) = model.edge_exponents();
        if el.is_some_and(|e| e + k <= -1.0) {
            return Err(RmtError::Divergent(format!("order {k} is not integrable at the lower edge")));
        }
    }
    let ki = k.round();
    let pow = move |x: f64| {
        if k == ki && ki.abs() < 64.0 {
            x.powi(ki as i32)
        } else {
            x.powf(k)
        }
    };
    let r = model.integrate_against(pow, k, default_opts())?;
    Ok(HighPrecisionFloat::from_f64(r.value, r.error))
}

/// Convenience: the density moment as a plain float.
pub fn quad_moment_f64(model: &DensityModel, k: f64) -> Result<f64> {
    Ok(quad_moment(model, k)?.to_f64())
}
