use proptest::prelude::*;

use rmtm::cli::{run, OutputRecord};
use rmtm::densities::DensityModel;
use rmtm::ensemble::moment;
use rmtm::exactnum::{poch_q, q, qi, Rational};
use rmtm::physics::{charge_cumulants, delay_moment, transmission_moment, DelayQuery, TransportQuery};
use rmtm::verify::half_shift_holds;
use rmtm::{Beta, EnsembleSpec, MomentQuery};

fn beta() -> impl Strategy<Value = Beta> {
    prop_oneof![Just(Beta::One), Just(Beta::Two), Just(Beta::Four)]
}

/// Rationals p/q in (−1, 4] with small denominators.
fn exponent() -> impl Strategy<Value = Rational> {
    (-1i64..8, 1i64..3).prop_map(|(p, d)| q(p, 2 * d) + q(1, 4))
}

fn exact(e: &EnsembleSpec, k: i64) -> Rational {
    moment(&MomentQuery::new(e.clone(), qi(k))).unwrap().rational_value().cloned().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pochhammer_splits(p in -20i64..20, d in 1i64..6, m in 0i64..6, j in 0i64..6) {
        let x = q(p, d) + q(1, 7);
        let lhs = poch_q(&x, m).unwrap() * poch_q(&(&x + qi(m)), j).unwrap();
        prop_assert_eq!(lhs, poch_q(&x, m + j).unwrap());
    }

    #[test]
    fn gaussian_odd_moments_vanish(b in beta(), half in 1i64..5, k in 0i64..5) {
        let e = EnsembleSpec::gaussian(b, 2 * half);
        prop_assert_eq!(exact(&e, 2 * k + 1), qi(0));
    }

    #[test]
    fn lue_first_moment(n in 1i64..10, b in exponent()) {
        let e = EnsembleSpec::laguerre(Beta::Two, n, b.clone());
        prop_assert_eq!(exact(&e, 1), qi(n) * (qi(n) + b));
        prop_assert_eq!(exact(&e, 0), qi(n));
    }

    #[test]
    fn jacobi_moments_decrease(bt in beta(), half in 1i64..4, a in exponent(), b in exponent(), k in 0i64..4) {
        let e = EnsembleSpec::jacobi(bt, 2 * half, a, b);
        let (m0, m1) = (exact(&e, k), exact(&e, k + 1));
        prop_assert!(m1 > qi(0) && m1 < m0);
    }

    #[test]
    fn mean_transmission(m_extra in 0i64..6, n in 1i64..7) {
        let m = n + m_extra;
        let v = transmission_moment(&TransportQuery::dyson(Beta::Two, m, n, 1)).unwrap();
        prop_assert_eq!(v.rational_value().cloned(), Some(q(n * m, n + m)));
    }

    #[test]
    fn mean_delay_is_one(b in beta(), half in 1i64..6) {
        let v = delay_moment(&DelayQuery::new(b, 2 * half, 1)).unwrap();
        prop_assert_eq!(v.rational_value().cloned(), Some(qi(1)));
    }

    #[test]
    fn first_cumulant_is_mean(b in beta(), half in 1i64..3, m_extra in 0i64..3, delta in 0i64..3) {
        let n = 2 * half;
        let query = TransportQuery::new(b, qi(delta), n + m_extra, n, 1);
        let s = charge_cumulants(&query, 2).unwrap();
        let t1 = transmission_moment(&query).unwrap();
        prop_assert_eq!(s.kappa(1), t1.rational_value());
        prop_assert!(*s.kappa(2).unwrap() > qi(0));
    }

    #[test]
    fn half_shift_identity(p in 0i64..9, d in 1i64..4, half in 2i64..5) {
        prop_assert!(half_shift_holds(&q(p, d), 2 * half).unwrap());
    }

    #[test]
    fn densities_are_nonnegative(bt in beta(), half in 1i64..3, b in exponent(), t in 0.01f64..0.99) {
        let e = EnsembleSpec::jacobi(bt, 2 * half, qi(1), b);
        let model = DensityModel::new(&e).unwrap();
        prop_assert!(model.eval(t).unwrap() >= -1e-12);
    }

    #[test]
    fn json_round_trip(bt in beta(), half in 1i64..4, b in exponent(), k in -1i64..5, fam in 0usize..3) {
        let n = 2 * half;
        let (name, e) = match fam {
            0 => ("gaussian", EnsembleSpec::gaussian(bt, n)),
            1 => ("laguerre", EnsembleSpec::laguerre(bt, n, b.clone())),
            _ => ("jacobi", EnsembleSpec::jacobi(bt, n, q(1, 2), b.clone())),
        };
        let k = if fam == 1 { k } else { k.abs() };
        let internal = moment(&MomentQuery::new(e, qi(k))).unwrap();
        let mut argv = vec!["rmtm".to_string(), "moment".into(), "--ensemble".into(), name.into(), "--beta".into(), bt.to_string(), "--n".into(), n.to_string(), "--k".into(), k.to_string()];
        if fam > 0 {
            argv.extend(["--b".to_string(), b.to_string()]);
        }
        if fam == 2 {
            argv.extend(["--a".to_string(), "1/2".to_string()]);
        }
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(argv, &mut out, &mut err);
        let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
        match internal.exact_value() {
            Some(x) => {
                prop_assert_eq!(code, 0);
                let parsed = OutputRecord::exact_from_json(&v);
                prop_assert_eq!(parsed.as_ref(), Some(x));
            }
            None => {
                prop_assert_eq!(code, 2);
                prop_assert_eq!(&v["diverges"], &serde_json::Value::Bool(true));
            }
        }
    }
}
