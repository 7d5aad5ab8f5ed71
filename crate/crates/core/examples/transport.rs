// Transmission and delay-time moments of a chaotic cavity, charge cumulants
// and the large-n limits.

use rmtm::exactnum::qi;
use rmtm::physics::{
    charge_cumulants, delay_limit, delay_moment, limit_catalan, transmission_moment, DelayQuery, TransportQuery,
};
use rmtm::Beta;

fn run_example() {
    for beta in [Beta::One, Beta::Two, Beta::Four] {
        let t = transmission_moment(&TransportQuery::dyson(beta, 4, 2, 2)).unwrap();
        let d = delay_moment(&DelayQuery::new(beta, 4, 2)).unwrap();
        println!("β={beta}: ⟨tr (tt†)²⟩ = {}, ⟨tr Q²⟩ = {}", t.exact_value().unwrap(), d.exact_value().unwrap());
    }

    let s = charge_cumulants(&TransportQuery::new(Beta::Two, qi(0), 3, 2, 1), 4).unwrap();
    for (j, kappa) in s.kappas.iter().enumerate() {
        println!("κ{} = {kappa}", j + 1);
    }

    for k in 1..=4 {
        let n = 40;
        let finite = transmission_moment(&TransportQuery::dyson(Beta::Two, n, n, k)).unwrap().to_f64().unwrap();
        println!(
            "k={k}: ⟨T_k⟩/n at n={n} is {:.6}, limit {}, delay limit {}",
            finite / n as f64,
            limit_catalan(k, &qi(1)).unwrap(),
            delay_limit(k).unwrap()
        );
    }
}

fn main() {
    run_example();
}
