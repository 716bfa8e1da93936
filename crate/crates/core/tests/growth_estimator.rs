use catdyn::exact_linalg::ExactMatrix;
use catdyn::growth_estimator::{
    entropy_from_ext_sequence, entry_sum_sequence, eval_ext_distance, fit_growth, ln_ext_distance, pairing_sequence,
    ExtTable, FitOptions, PositiveSequence, DEFAULT_T_GRID,
};
use catdyn::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn model(rho: f64, s: f64, c: f64, n_max: usize) -> PositiveSequence {
    let logs = (1..=n_max).map(|n| n as f64 * rho.ln() + s * (n as f64).ln() + c.ln()).collect();
    PositiveSequence::from_logs(1, logs).unwrap()
}

#[test]
fn recovers_the_model_grid() {
    for rho in [1.0, 1.5, 2.618] {
        for s in 0..=3 {
            for c in [0.5, 1.0, 10.0] {
                let fit = fit_growth(&model(rho, s as f64, c, 400), &FitOptions::default()).unwrap();
                assert!((fit.rho_hat - rho).abs() <= 1e-3 * rho, "rho {rho} s {s} c {c}: {fit:?}");
                assert!((fit.s_hat - s as f64).abs() <= 0.15, "rho {rho} s {s} c {c}: {fit:?}");
                assert!(!fit.limit_doubtful());
            }
        }
    }
}

#[test]
fn binomial_counts_fit_degree_two() {
    let vals: Vec<f64> = (1..=400).map(|n| ((n + 1) * (n + 2) / 2) as f64).collect();
    let fit = fit_growth(&PositiveSequence::new(1, &vals).unwrap(), &FitOptions::default()).unwrap();
    assert!((fit.rho_hat - 1.0).abs() < 1e-3);
    assert!((fit.s_hat - 2.0).abs() < 0.15);
}

#[test]
fn short_and_nonpositive_sequences_are_rejected() {
    assert!(PositiveSequence::new(1, &[1.0, 0.0, 2.0]).is_err());
    assert!(PositiveSequence::new(1, &[1.0, f64::NAN]).is_err());
    assert!(matches!(PositiveSequence::new(1, &[1.0; 5]), Err(Error::WindowTooShort { .. })));
    let seq = PositiveSequence::new(1, &[1.0; 40]).unwrap();
    let narrow = FitOptions { n_lo: Some(10), n_hi: Some(14), ..FitOptions::default() };
    assert!(matches!(fit_growth(&seq, &narrow), Err(Error::WindowTooShort { .. })));
}

#[test]
fn entry_sums_of_fibonacci() {
    let m = ExactMatrix::from_i64(&[&[1, 1], &[1, 0]]);
    let fit = fit_growth(&entry_sum_sequence(&m, 200).unwrap(), &FitOptions::default()).unwrap();
    assert!((fit.rho_hat - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-6);
    assert!(fit.s_hat.abs() < 0.15);
}

#[test]
fn pairing_hits_zero() {
    // rotation by 90 degrees: <e1, R e1> = 0 at n = 1
    let r = ExactMatrix::from_i64(&[&[0, -1], &[1, 0]]);
    let one = BigRational::from_integer(BigInt::from(1));
    let zero = BigRational::from_integer(BigInt::from(0));
    let e1 = vec![one, zero];
    let res = pairing_sequence(&ExactMatrix::identity(2), &r, &e1, &e1, 10);
    assert!(matches!(res, Err(Error::ZeroPairingAt(1))));
}

#[test]
fn ext_distance_of_a_shift_sequence() {
    // Hom(G, S^n G) concentrated in degree -n: ε_t = e^{nt}
    let tables: Vec<ExtTable> = (1..=100).map(|n| ExtTable::new([(-(n as i64), 1)])).collect();
    let est = entropy_from_ext_sequence(&tables, &DEFAULT_T_GRID, &FitOptions::default()).unwrap();
    for e in est {
        assert!((e.h_t_hat - e.t).abs() < 1e-9, "{e:?}");
        assert!(e.h_pol_t_hat.abs() < 1e-6);
    }
}

fn table() -> impl Strategy<Value = ExtTable> {
    prop::collection::vec((-6i64..=6, 0u64..=5), 0..6).prop_map(ExtTable::new)
}

proptest! {
    #[test]
    fn ext_distance_is_additive(a in table(), b in table(), t in -2.0f64..2.0) {
        let sum = eval_ext_distance(&a.direct_sum(&b), t);
        let parts = eval_ext_distance(&a, t) + eval_ext_distance(&b, t);
        prop_assert!((sum - parts).abs() <= 1e-12 * parts.max(1.0));
    }

    #[test]
    fn ext_distance_log_agrees(a in table(), t in -2.0f64..2.0) {
        prop_assume!(!a.is_empty());
        let direct = eval_ext_distance(&a, t).ln();
        prop_assert!((ln_ext_distance(&a, t) - direct).abs() <= 1e-12 * direct.abs().max(1.0));
    }

    #[test]
    fn scaling_moves_only_the_intercept(
        rho in 1.0f64..3.0, s in 0.0f64..3.0, c in 0.1f64..10.0, k in 0.01f64..100.0,
    ) {
        let seq = model(rho, s, c, 120);
        let a = fit_growth(&seq, &FitOptions::default()).unwrap();
        let b = fit_growth(&seq.scaled(k).unwrap(), &FitOptions::default()).unwrap();
        prop_assert!((a.log_rho_hat - b.log_rho_hat).abs() < 1e-9);
        prop_assert!((a.s_hat - b.s_hat).abs() < 1e-7);
        prop_assert!((b.intercept - a.intercept - k.ln()).abs() < 1e-6);
    }
}
