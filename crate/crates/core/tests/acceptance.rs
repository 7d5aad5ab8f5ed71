//! Acceptance criteria, one PASS/FAIL line each.

use std::time::{Duration, Instant};

use rmtm::densities::{quad_moment_f64, DensityModel};
use rmtm::exactnum::{ln_gamma_f64, q, qi, rat_to_f64, Rational};
use rmtm::moments::{i_jacobi, i_laguerre, Sign};
use rmtm::oracle::{bruteforce_jpdf_moment, mc_moment, SamplerConfig};
use rmtm::orthopoly::{connect_jacobi, connect_laguerre, differential_d, OrthoPolySystem, PolyFamily};
use rmtm::physics::{
    charge_cumulants, delay_limit, delay_moment, kappa2_closed, kappa3_ratio_closed, limit_catalan,
    schroeder_series, transmission_moment, unitary_delay_moment_f64, DelayQuery, TransportQuery,
};
use rmtm::verify::{duality_suite, mc_grid, mc_suite};
use rmtm::{ensemble::moment, Beta, EnsembleSpec, Family, MomentQuery, MomentResult, RmtError};

struct Tally {
    checks: usize,
    failures: Vec<String>,
    worst: f64,
}

impl Tally {
    fn new() -> Tally {
        Tally { checks: 0, failures: Vec::new(), worst: 0.0 }
    }
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
    fn rel(&mut self, got: f64, want: f64, tol: f64, what: impl FnOnce() -> String) {
        let err = (got - want).abs() / want.abs();
        self.worst = self.worst.max(err);
        self.check(err <= tol, || format!("{}: {got:e} vs {want:e}", what()));
    }
}

fn exact(e: &EnsembleSpec, k: i64) -> MomentResult {
    moment(&MomentQuery::new(e.clone(), qi(k))).expect("engine")
}

fn exact_f64(e: &EnsembleSpec, k: i64) -> f64 {
    exact(e, k).to_f64().expect("convergent")
}

fn report(id: u32, title: &str, budget: Duration, run: impl FnOnce() -> (Tally, String)) -> bool {
    let t0 = Instant::now();
    let (tally, extra) = run();
    let dt = t0.elapsed();
    let in_time = dt <= budget;
    let ok = tally.failures.is_empty() && in_time;
    println!(
        "{} {id}: {title} [{} checks, {:.1}s of {}s{}{}]",
        if ok { "PASS" } else { "FAIL" },
        tally.checks,
        dt.as_secs_f64(),
        budget.as_secs(),
        if tally.worst > 0.0 { format!(", worst rel err {:.1e}", tally.worst) } else { String::new() },
        if extra.is_empty() { String::new() } else { format!(", {extra}") },
    );
    for f in tally.failures.iter().take(10) {
        println!("    {f}");
    }
    ok
}

fn criterion_1() -> (Tally, String) {
    let mut t = Tally::new();
    let mut specs = Vec::new();
    for n in 1..=6 {
        specs.push(EnsembleSpec::gaussian(Beta::Two, n));
        for b in 0..=2 {
            specs.push(EnsembleSpec::laguerre(Beta::Two, n, qi(b)));
            for a in 0..=2 {
                specs.push(EnsembleSpec::jacobi(Beta::Two, n, qi(a), qi(b)));
            }
        }
    }
    let mut divergent = 0;
    for e in &specs {
        let model = DensityModel::new(e).expect("density");
        let n = e.n_int().unwrap();
        let mut ks: Vec<i64> = (1..=6).collect();
        if let Family::Laguerre { .. } = e.family {
            ks.extend((1..=n).map(|j| -j));
        }
        for k in ks {
            let m = exact(e, k);
            let quad = quad_moment_f64(&model, k as f64);
            match m.to_f64() {
                None => {
                    divergent += 1;
                    t.check(matches!(quad, Err(RmtError::Divergent(_))), || format!("{e} k={k}: divergence not mirrored"));
                }
                Some(0.0) => {
                    let scale = exact_f64(e, k + 1);
                    let g = quad.unwrap_or(f64::NAN);
                    t.check(g.abs() <= 1e-10 * scale, || format!("{e} k={k}: {g:e} should vanish"));
                }
                Some(w) => t.rel(quad.unwrap_or(f64::NAN), w, 1e-10, || format!("{e} k={k}")),
            }
        }
    }
    (t, format!("{divergent} divergent negative orders mirrored"))
}

fn criterion_2() -> (Tally, String) {
    let mut t = Tally::new();
    let mut brute: Vec<EnsembleSpec> = Vec::new();
    for n in 1..=3 {
        brute.push(EnsembleSpec::gaussian(Beta::Four, n));
        brute.push(EnsembleSpec::laguerre(Beta::Four, n, qi(0)));
        brute.push(EnsembleSpec::laguerre(Beta::Four, n, q(1, 2)));
        brute.push(EnsembleSpec::jacobi(Beta::Four, n, q(1, 2), qi(1)));
    }
    brute.push(EnsembleSpec::gaussian(Beta::One, 2));
    brute.push(EnsembleSpec::laguerre(Beta::One, 2, qi(2)));
    brute.push(EnsembleSpec::jacobi(Beta::One, 2, qi(0), qi(0)));
    brute.push(EnsembleSpec::jacobi(Beta::One, 2, qi(1), qi(2)));
    for e in &brute {
        let mut ks = vec![1, 2, 3];
        if let Family::Laguerre { .. } = e.family {
            ks.push(-1);
        }
        for k in ks {
            let b = bruteforce_jpdf_moment(e, k as f64).map(|v| v.to_f64()).unwrap_or(f64::NAN);
            let w = exact_f64(e, k);
            if w == 0.0 {
                let scale = exact_f64(e, k + 1);
                t.check(b.abs() <= 1e-8 * scale, || format!("{e} k={k}: {b:e} should vanish"));
            } else {
                t.rel(b, w, 1e-8, || format!("{e} k={k}"));
            }
        }
    }
    let mut zmax: f64 = 0.0;
    let mc = [
        (EnsembleSpec::gaussian(Beta::One, 4), vec![2]),
        (EnsembleSpec::laguerre(Beta::One, 4, qi(2)), vec![-1, 1, 2, 3]),
        (EnsembleSpec::jacobi(Beta::One, 4, qi(1), qi(0)), vec![1, 2, 3]),
    ];
    for (e, ks) in mc {
        let cfg = SamplerConfig::new(e.clone(), 2024, 100_000);
        for k in ks {
            let w = exact_f64(&e, k);
            let z = mc_moment(&cfg, k as f64).map(|m| m.z_score(w)).unwrap_or(f64::INFINITY);
            zmax = zmax.max(z);
            t.check(z <= 4.0, || format!("{e} k={k}: z = {z:.2}"));
        }
    }
    (t, format!("n = 4 Monte Carlo max z {zmax:.2}"))
}

fn criterion_3() -> (Tally, String) {
    let mut t = Tally::new();
    for beta in [Beta::One, Beta::Two, Beta::Four] {
        for delta in [qi(0), qi(2)] {
            for (m, n) in [(1, 1), (2, 2), (4, 2), (5, 3)] {
                if beta == Beta::One && n % 2 == 1 {
                    continue;
                }
                let s = charge_cumulants(&TransportQuery::new(beta, delta.clone(), m, n, 1), 3).expect("cumulants");
                let k2 = s.kappa(2).unwrap();
                let k3 = s.kappa(3).unwrap();
                t.check(*k2 == kappa2_closed(beta, &delta, m, n), || format!("κ₂ β={beta} δ={delta} m={m} n={n}"));
                let (num, den) = kappa3_ratio_closed(beta, &delta, m, n);
                t.check(k3 * &den == num * k2, || format!("κ₃/κ₂ β={beta} δ={delta} m={m} n={n}"));
            }
        }
    }
    (t, "exact equality".into())
}

fn criterion_4() -> (Tally, String) {
    let mut t = Tally::new();
    for n in 1..=5i64 {
        for m in n..n + 4 {
            let v = transmission_moment(&TransportQuery::dyson(Beta::Two, m, n, 1)).unwrap();
            t.check(v.rational_value() == Some(&q(n * m, n + m)), || format!("⟨T₁⟩ m={m} n={n}"));
        }
    }
    for n in 1..=10 {
        let v = delay_moment(&DelayQuery::new(Beta::Two, n, 1)).unwrap();
        t.check(v.rational_value() == Some(&qi(1)), || format!("⟨D₁⟩ n={n}"));
    }
    for n in 1..=6i64 {
        for a in [qi(0), q(1, 2), qi(1), qi(3)] {
            for b in [qi(0), q(3, 2), qi(2)] {
                let e = EnsembleSpec::jacobi(Beta::Two, n, a.clone(), b.clone());
                let want = qi(n) * (&b + qi(n)) / (&a + &b + qi(2 * n));
                t.check(exact(&e, 1).rational_value() == Some(&want), || format!("{e} k=1"));
            }
        }
    }
    (t, "exact equality".into())
}

fn criterion_5() -> (Tally, String) {
    let mut t = Tally::new();
    let mut ratios = Vec::new();
    for beta in [Beta::One, Beta::Two, Beta::Four] {
        for k in 1..=5 {
            let lim = rat_to_f64(limit_catalan(k, &qi(1)).unwrap().coefficient());
            let res: Vec<f64> = [20i64, 40, 80]
                .iter()
                .map(|&n| transmission_moment(&TransportQuery::dyson(beta, n, n, k)).unwrap().to_f64().unwrap() / n as f64 - lim)
                .collect();
            if res.iter().all(|r| *r == 0.0) {
                ratios.push(format!("β={beta} k={k} exact"));
                continue;
            }
            for w in res.windows(2) {
                let r = w[0] / w[1];
                // β = 2 corrections start at 1/n², so halving the residual is the floor there
                let ok = match beta {
                    Beta::Two => (3.6..=4.4).contains(&r),
                    _ => (1.8..=2.2).contains(&r),
                };
                t.check(ok, || format!("β={beta} k={k}: residual ratio {r:.3}"));
            }
            ratios.push(format!("β={beta} k={k} {:.3}", res[1] / res[2]));
        }
    }
    println!("    residual ratios at n = 40 → 80: {}", ratios.join("; "));
    let seq: Vec<f64> = (1..=4).map(|k| unitary_delay_moment_f64(3200, k).unwrap().round()).collect();
    t.check(seq == [1.0, 2.0, 6.0, 22.0], || format!("n = 3200 sequence {seq:?}"));
    let mut worst: f64 = 0.0;
    for (k, s) in (1..=4).zip(&seq) {
        let v = delay_moment(&DelayQuery::new(Beta::Two, 200, k)).unwrap().to_f64().unwrap();
        worst = worst.max((v - s).abs());
        t.check((v - s).abs() <= 5e-2, || format!("n = 200 k={k}: {v}"));
        t.check(rat_to_f64(delay_limit(k).unwrap().coefficient()) == *s, || format!("delay limit k={k}"));
    }
    let displayed: Vec<f64> = (1..=4).map(|k| rat_to_f64(schroeder_series(k).unwrap().coefficient())).collect();
    let shifted = displayed[..3] == seq[1..];
    t.check(shifted, || format!("displayed sequence {displayed:?} not a shift of {seq:?}"));
    (t, format!("delay n=200 max dev {worst:.1e}, displayed formula gives {displayed:?} (offset by one order)"))
}

fn ln_gamma(x: f64) -> f64 {
    ln_gamma_f64(&Rational::from_float(x).unwrap())
}

/// Γ(n)/(Γ(n/2)Γ(2n))·Σ_{j<k} Γ(k+j+n)Γ(1+n−k−j)/(Γ(n/2+1−j)Γ(k+j+1))·2ʲ at b = n+1.
fn phi_delay_reference(k: i64, n: i64) -> f64 {
    let nf = n as f64;
    let pre = ln_gamma(nf) - ln_gamma(nf / 2.0) - ln_gamma(2.0 * nf);
    (0..k)
        .map(|j| {
            let (j, kf) = (j as f64, k as f64);
            (pre + ln_gamma(kf + j + nf) + ln_gamma(1.0 + nf - kf - j) - ln_gamma(nf / 2.0 + 1.0 - j) - ln_gamma(kf + j + 1.0))
                .exp()
                * 2f64.powf(j)
        })
        .sum()
}

fn criterion_6() -> (Tally, String) {
    let mut t = Tally::new();
    let params = [(qi(0), qi(0)), (qi(1), qi(2)), (q(1, 2), qi(0)), (q(-1, 2), q(3, 2)), (qi(3), q(1, 2))];
    for k in 1..=3 {
        for n in [2 * k + 2, 2 * k + 4] {
            for (a, b) in &params {
                let j = i_jacobi(k, n, a, b).unwrap();
                let l = i_laguerre(k, n, b, Sign::Positive).unwrap();
                t.check(j.phi_value.is_zero() && j.phi_vanishes, || format!("φᴶ k={k} n={n} a={a} b={b}"));
                t.check(l.phi_value.is_zero() && l.phi_vanishes, || format!("φ̃ᴸ k={k} n={n} b={b}"));
            }
        }
    }
    let mut worst_ratio: f64 = 0.0;
    for k in 1..=3i64 {
        let mut prev: Option<f64> = None;
        for n in (4..=20i64).step_by(2) {
            // delay-time parameters b = n + 1; the order must satisfy k < n/2 + 1
            let term = match i_laguerre(k, n, &qi(n + 1), Sign::Negative) {
                Err(RmtError::Divergent(_)) => continue,
                other => other.unwrap(),
            };
            let phi = rat_to_f64(term.phi_value.as_rational().unwrap());
            t.check(phi > 0.0 && !term.phi_vanishes, || format!("φᴸ₋ₖ k={k} n={n} = {phi}"));
            t.rel(phi, phi_delay_reference(k, n), 1e-10, || format!("φᴸ₋ₖ k={k} n={n} vs Γ form"));
            if let Some(p) = prev {
                let r = phi / p;
                worst_ratio = worst_ratio.max(r);
                t.check(r <= 0.5, || format!("φᴸ₋ₖ k={k} n={n}: step ratio {r:.3}"));
            }
            prev = Some(phi);
        }
    }
    (t, format!("largest φᴸ₋ₖ step ratio {worst_ratio:.3}"))
}

fn criterion_7() -> (Tally, String) {
    let mut t = Tally::new();
    let models = [
        EnsembleSpec::gaussian(Beta::Two, 4),
        EnsembleSpec::laguerre(Beta::Two, 4, q(1, 2)),
        EnsembleSpec::jacobi(Beta::Two, 3, qi(1), qi(2)),
        EnsembleSpec::gaussian(Beta::Four, 3),
        EnsembleSpec::laguerre(Beta::Four, 3, qi(0)),
        EnsembleSpec::jacobi(Beta::Four, 2, q(1, 2), qi(1)),
        EnsembleSpec::gaussian(Beta::One, 4),
        EnsembleSpec::laguerre(Beta::One, 4, qi(1)),
        EnsembleSpec::jacobi(Beta::One, 2, qi(1), qi(0)),
    ];
    for e in &models {
        let z = DensityModel::new(e).and_then(|m| m.normalization()).unwrap_or(f64::NAN);
        let n = rat_to_f64(&e.n);
        t.rel(z, n, 1e-8, || format!("∫ρ {e}"));
    }
    for beta in [Beta::One, Beta::Two, Beta::Four] {
        for n in 1..=4 {
            if beta == Beta::One && n % 2 == 1 {
                continue;
            }
            for m in n..=n + 2 {
                for delta in [qi(0), qi(1), qi(2)] {
                    for k in 1..=4 {
                        let v = transmission_moment(&TransportQuery::new(beta, delta.clone(), m, n, k)).unwrap();
                        t.check(v.exact_value().is_some_and(|x| x.pi_half_exp() == 0), || format!("π power T β={beta} m={m} n={n} k={k}"));
                    }
                }
            }
            for k in 1..=3 {
                match delay_moment(&DelayQuery::new(beta, n, k)) {
                    Ok(v) => t.check(v.exact_value().is_some_and(|x| x.pi_half_exp() == 0), || format!("π power D β={beta} n={n} k={k}")),
                    Err(RmtError::Divergent(_)) => {}
                    Err(e) => t.check(false, || format!("delay β={beta} n={n} k={k}: {e}")),
                }
            }
        }
    }
    for (beta, ns) in [(Beta::Two, vec![1, 2, 3, 4, 5, 6]), (Beta::Four, vec![1, 2, 3, 4]), (Beta::One, vec![2, 4, 6])] {
        for n in ns {
            for k in [1, 3, 5, 7] {
                let e = EnsembleSpec::gaussian(beta, n);
                t.check(exact(&e, k).rational_value().is_some_and(|v| *v == qi(0)), || format!("{e} k={k} odd"));
            }
        }
    }
    for n in 0..=6usize {
        for k in [qi(1), qi(2), q(1, 2), q(-1, 2)] {
            for b in [qi(0), q(1, 2), qi(2)] {
                let lag = |bb: Rational| OrthoPolySystem::new(PolyFamily::Laguerre { b: bb }, n).unwrap();
                let (p, qs) = (lag(b.clone()), lag(&b + &k));
                let c = connect_laguerre(&k, n);
                for x in [0.3, 1.7, 4.2] {
                    let terms: Vec<f64> = (0..=n).map(|j| rat_to_f64(&c[j]) * qs.eval_monic(n - j, x)).collect();
                    let mag = terms.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
                    let lhs = p.eval_monic(n, x);
                    let rhs: f64 = terms.iter().sum();
                    t.check((lhs - rhs).abs() <= 1e-10 * mag, || format!("Laguerre connection n={n} k={k} b={b} x={x}"));
                }
                for a in [qi(0), qi(1), q(3, 2)] {
                    let jac = |bb: Rational| OrthoPolySystem::new(PolyFamily::Jacobi { a: a.clone(), b: bb }, n).unwrap();
                    let (p, qs) = (jac(b.clone()), jac(&b + &k));
                    let c = connect_jacobi(&k, n, &a, &b).unwrap();
                    for x in [0.1, 0.45, 0.9] {
                        let terms: Vec<f64> = (0..=n).map(|j| rat_to_f64(&c[j]) * qs.eval_monic(n - j, x)).collect();
                        let mag = terms.iter().map(|v| v.abs()).sum::<f64>().max(1e-3);
                        let lhs = p.eval_monic(n, x);
                        let rhs: f64 = terms.iter().sum();
                        t.check((lhs - rhs).abs() <= 1e-10 * mag, || format!("Jacobi connection n={n} k={k} a={a} b={b} x={x}"));
                    }
                }
            }
        }
    }
    let fams = [
        PolyFamily::Hermite,
        PolyFamily::Laguerre { b: qi(0) },
        PolyFamily::Laguerre { b: q(3, 2) },
        PolyFamily::Jacobi { a: qi(0), b: qi(0) },
        PolyFamily::Jacobi { a: q(1, 2), b: qi(2) },
    ];
    for f in &fams {
        let s = OrthoPolySystem::new(f.clone(), 7).unwrap();
        for n in 1..=6usize {
            let rho = |x: f64| {
                let p = s.eval_all(n, x);
                s.weight(x) * (0..n).map(|j| p[j] * p[j] / s.norm_h_f64(j)).sum::<f64>()
            };
            let fx = |x: f64| match f {
                PolyFamily::Hermite => 1.0,
                PolyFamily::Laguerre { .. } => x,
                PolyFamily::Jacobi { .. } => x * (1.0 - x),
            };
            let d = differential_d(f, n);
            for x in [0.2, 0.45, 0.8] {
                let h = 1e-5;
                let lhs = (fx(x + h) * rho(x + h) - fx(x - h) * rho(x - h)) / (2.0 * h);
                let p = s.eval_all(n, x);
                let rhs = -d * s.weight(x) * p[n] * p[n - 1];
                t.check((lhs - rhs).abs() <= 1e-6 * lhs.abs().max(rhs.abs()).max(1e-3), || format!("differential {f:?} n={n} x={x}"));
            }
        }
    }
    for c in duality_suite() {
        t.check(c.passed, || format!("{}: {}", c.name, c.detail));
    }
    (t, String::new())
}

fn criterion_8() -> (Tally, String) {
    let mut t = Tally::new();
    let mut zmax: f64 = 0.0;
    for c in mc_suite(1, 100_000) {
        if let Some(z) = c.detail.split(" z ").nth(1).and_then(|s| s.split(' ').next()).and_then(|s| s.parse::<f64>().ok()) {
            zmax = zmax.max(z);
        }
        t.check(c.passed, || format!("{}: {}", c.name, c.detail));
    }
    for (e, k) in mc_grid().into_iter().take(3) {
        let cfg = SamplerConfig::new(e.clone(), 1, 100_000);
        let a = mc_moment(&cfg, k as f64).unwrap();
        let b = mc_moment(&cfg, k as f64).unwrap();
        t.check(
            a.mean.to_bits() == b.mean.to_bits() && a.std_error.to_bits() == b.std_error.to_bits(),
            || format!("{e} k={k}: rerun differs"),
        );
    }
    (t, format!("max z {zmax:.2}, reruns bit-identical"))
}

fn main() {
    // optional criterion numbers restrict the run, e.g. `cargo test --test acceptance -- 2 5`
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let secs = Duration::from_secs;
    type Criterion = (u32, &'static str, u64, fn() -> (Tally, String));
    let all: [Criterion; 8] = [
        (1, "β=2 closed forms vs density quadrature (1e-10)", 30, criterion_1),
        (2, "β=4 and β=1 vs nested jpdf quadrature (1e-8), n=4 β=1 Monte Carlo (4σ)", 300, criterion_2),
        (3, "cumulant identities κ₂ and κ₃/κ₂ (exact)", 60, criterion_3),
        (4, "known values ⟨T₁⟩, ⟨D₁⟩, JUE M(1,n) (exact)", 60, criterion_4),
        (5, "large-n limits: Catalan residual ratios and delay sequence", 120, criterion_5),
        (6, "vanishing of φᴶ, φ̃ᴸ for n > 2k and decay of φᴸ₋ₖ", 60, criterion_6),
        (7, "structural invariants", 120, criterion_7),
        (8, "Monte Carlo 12-case grid (4σ at 10⁵ samples)", 300, criterion_8),
    ];
    let results: Vec<bool> = all
        .iter()
        .filter(|c| only.is_empty() || only.contains(&c.0))
        .map(|&(id, title, budget, f)| report(id, title, secs(budget), f))
        .collect();
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
