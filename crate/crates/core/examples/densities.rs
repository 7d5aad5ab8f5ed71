// Finite-n eigenvalue densities and their moments by quadrature.

use rmtm::densities::{quad_moment_f64, DensityModel};
use rmtm::exactnum::qi;
use rmtm::{Beta, EnsembleSpec};

fn run_example() {
    for e in [
        EnsembleSpec::gaussian(Beta::Two, 3),
        EnsembleSpec::laguerre(Beta::Four, 2, qi(1)),
        EnsembleSpec::jacobi(Beta::One, 2, qi(0), qi(1)),
    ] {
        let model = DensityModel::new(&e).unwrap();
        let (lo, hi) = model.support();
        let (lo, hi) = (lo.max(-3.0), hi.min(4.0));
        let grid: Vec<String> = (0..=4)
            .map(|i| {
                let x = lo + (hi - lo) * (0.05 + 0.225 * i as f64);
                format!("ρ({x:.2}) = {:.5}", model.eval(x).unwrap())
            })
            .collect();
        println!("{e}: {}", grid.join(", "));
        println!("  ∫ρ = {:.12}, ∫x²ρ = {:.12}", model.normalization().unwrap(), quad_moment_f64(&model, 2.0).unwrap());
    }
}

fn main() {
    run_example();
}
