// Exact moments ⟨Σ xᵢᵏ⟩ across the three symmetry classes.

use rmtm::ensemble::moment;
use rmtm::exactnum::{q, qi};
use rmtm::{Beta, EnsembleSpec, Family, MomentQuery};

fn run_example() {
    let cases = [
        (EnsembleSpec::gaussian(Beta::Two, 3), qi(4)),
        (EnsembleSpec::gaussian(Beta::One, 4), qi(4)),
        (EnsembleSpec::laguerre(Beta::Two, 4, qi(2)), qi(-2)),
        (EnsembleSpec::new(Family::Laguerre { b: q(1, 2) }, Beta::Four, q(5, 2)), qi(3)),
        (EnsembleSpec::jacobi(Beta::One, 2, qi(1), qi(2)), qi(2)),
        (EnsembleSpec::laguerre(Beta::Two, 3, qi(1)), q(1, 2)),
        (EnsembleSpec::laguerre(Beta::Two, 2, qi(0)), qi(-3)),
    ];
    for (e, k) in cases {
        let m = moment(&MomentQuery::new(e.clone(), k.clone())).expect("valid query");
        match (&m.value, m.exact_value()) {
            (None, _) => println!("{e} k={k}: diverges"),
            (Some(_), Some(x)) => println!("{e} k={k}: {x} ≈ {}", m.to_f64().unwrap()),
            (Some(v), None) => println!("{e} k={k}: {}", v.to_decimal(25)),
        }
    }
}

fn main() {
    run_example();
}
