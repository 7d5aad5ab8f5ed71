// Sampling spectra from matrix models, with the Metropolis fallback for
// non-integer parameters.

use rmtm::ensemble::moment;
use rmtm::exactnum::{q, qi};
use rmtm::oracle::{mc_moment, sample_spectrum, SamplerConfig};
use rmtm::{Beta, EnsembleSpec, MomentQuery};

fn run_example() {
    let cfg = SamplerConfig::new(EnsembleSpec::gaussian(Beta::Four, 3), 7, 3);
    for spectrum in sample_spectrum(&cfg).unwrap() {
        println!("GSE spectrum {spectrum:.3?}");
    }

    for (e, k) in [
        (EnsembleSpec::laguerre(Beta::One, 4, qi(3)), -1),
        (EnsembleSpec::jacobi(Beta::Four, 2, q(-1, 2), qi(0)), 2),
    ] {
        let est = mc_moment(&SamplerConfig::new(e.clone(), 11, 20_000), k as f64).unwrap();
        let exact = moment(&MomentQuery::new(e.clone(), qi(k))).unwrap().to_f64().unwrap();
        println!(
            "{e} k={k}: {:.5} ± {:.5} ({:?}), exact {exact:.5}, z = {:.2}",
            est.mean,
            est.std_error,
            est.method,
            est.z_score(exact)
        );
    }
}

fn main() {
    run_example();
}
