use elliptika::{theta, theta_product, EllipticContext, SeriesTruncation, TauParameter, ThetaIndex};
use num_complex::Complex64;
use proptest::prelude::*;
use statrs::function::gamma::gamma;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn taus() -> [Complex64; 3] {
    [c(0.0, 1.0), c(0.0, 2.0), c(0.3, 1.5)]
}

/// 5x5 grid with |Im z| < Im tau / 2.
fn grid(tau: Complex64) -> Vec<Complex64> {
    let h = 0.45 * tau.im;
    let mut pts = Vec::new();
    for r in 0..5 {
        for s in 0..5 {
            let x = -0.8 + 0.4 * r as f64 + 0.013;
            let y = -h + 2.0 * h * s as f64 / 4.0;
            pts.push(c(x, y));
        }
    }
    pts
}

fn series(idx: ThetaIndex, z: Complex64, tau: &TauParameter) -> Complex64 {
    theta(idx, z, tau, &SeriesTruncation::default()).unwrap().value
}

#[test]
fn product_and_series_agree_on_grid() {
    let trunc = SeriesTruncation::default();
    for t in taus() {
        let tau = TauParameter::new(t).unwrap();
        for z in grid(t) {
            for idx in ThetaIndex::ALL {
                let s = series(idx, z, &tau);
                let p = theta_product(idx, z, &tau, &trunc).unwrap().value;
                assert!((s - p).norm() < 1e-13 * s.norm().max(1.0), "{idx:?} z={z} tau={t}: {s} vs {p}");
            }
        }
    }
}

#[test]
fn theta_parity_on_grid() {
    for t in taus() {
        let tau = TauParameter::new(t).unwrap();
        for z in grid(t) {
            let one = series(ThetaIndex::One, z, &tau) + series(ThetaIndex::One, -z, &tau);
            assert!(one.norm() < 1e-14 * series(ThetaIndex::One, z, &tau).norm().max(1.0));
            for idx in [ThetaIndex::Two, ThetaIndex::Three, ThetaIndex::Four] {
                let d = series(idx, z, &tau) - series(idx, -z, &tau);
                assert!(d.norm() < 1e-14 * series(idx, z, &tau).norm().max(1.0));
            }
        }
    }
}

#[test]
fn theta_one_zero_is_exact() {
    for t in taus() {
        let tau = TauParameter::new(t).unwrap();
        assert_eq!(series(ThetaIndex::One, c(0.0, 0.0), &tau), c(0.0, 0.0));
    }
}

#[test]
fn product_examples() {
    let trunc = SeriesTruncation::default();
    let tau = TauParameter::new(c(0.0, 2.0)).unwrap();
    let p4 = theta_product(ThetaIndex::Four, c(0.0, 0.0), &tau, &trunc).unwrap().value;
    assert!((p4 - series(ThetaIndex::Four, c(0.0, 0.0), &tau)).norm() < 1e-14);
    let shifted = theta_product(ThetaIndex::One, c(0.5, 0.0), &tau, &trunc).unwrap().value;
    assert!((shifted - series(ThetaIndex::Two, c(0.0, 0.0), &tau)).norm() < 1e-13);
    assert_eq!(theta_product(ThetaIndex::One, c(0.0, 0.0), &tau, &trunc).unwrap().value.norm(), 0.0);
    let tau_i = TauParameter::new(c(0.0, 1.0)).unwrap();
    let p2 = theta_product(ThetaIndex::Two, c(0.0, 0.0), &tau_i, &trunc).unwrap().value;
    assert!((p2 - series(ThetaIndex::Two, c(0.0, 0.0), &tau_i)).norm() < 1e-14);
}

#[test]
fn jacobi_quartic_identity() {
    // theta_3(0)^4 = theta_2(0)^4 + theta_4(0)^4
    for t in taus() {
        let tau = TauParameter::new(t).unwrap();
        let z = c(0.0, 0.0);
        let [t2, t3, t4] = [ThetaIndex::Two, ThetaIndex::Three, ThetaIndex::Four].map(|i| series(i, z, &tau));
        assert!((t3.powi(4) - t2.powi(4) - t4.powi(4)).norm() < 1e-14 * t3.norm().powi(4));
    }
}

#[test]
fn period_at_i_matches_gamma_closed_form() {
    let oracle = gamma(0.25).powi(2) / (2.0 * std::f64::consts::PI.sqrt());
    let ctx = EllipticContext::new(c(0.0, 1.0)).unwrap();
    assert!((ctx.two_k() - oracle).norm() < 1e-9, "{} vs {oracle}", ctx.two_k());
    assert!((oracle - 3.708149354602744).abs() < 1e-12);
    assert!((ctx.lambda() - 0.5).norm() < 1e-12);
    let far = EllipticContext::new(c(0.0, 10.0)).unwrap();
    assert!((far.two_k() - std::f64::consts::PI).norm() < 1e-12);
}

proptest! {
    #[test]
    fn unit_shift_signs(x in -1.0f64..1.0, y in -0.5f64..0.5, tr in -0.5f64..0.5, ti in 0.8f64..3.0) {
        let tau = TauParameter::new(c(tr, ti)).unwrap();
        let z = c(x, y);
        let shift = c(1.0, 0.0);
        for (idx, sign) in [(ThetaIndex::One, -1.0), (ThetaIndex::Two, -1.0), (ThetaIndex::Three, 1.0), (ThetaIndex::Four, 1.0)] {
            let a = series(idx, z + shift, &tau);
            let b = series(idx, z, &tau);
            prop_assert!((a - sign * b).norm() < 1e-12 * b.norm().max(1.0));
        }
    }

    #[test]
    fn quasi_period_of_theta_three(x in -1.0f64..1.0, y in -0.3f64..0.3, ti in 0.8f64..3.0) {
        // theta_3(z + tau) = e(-tau/2 - z) theta_3(z)
        let tau_c = c(0.0, ti);
        let tau = TauParameter::new(tau_c).unwrap();
        let z = c(x, y);
        let a = series(ThetaIndex::Three, z + tau_c, &tau);
        let factor = elliptika::exponential_e(-tau_c / 2.0 - z);
        let b = factor * series(ThetaIndex::Three, z, &tau);
        prop_assert!((a - b).norm() < 1e-11 * b.norm().max(1.0));
    }

    #[test]
    fn product_series_random(x in -1.0f64..1.0, y in -0.4f64..0.4, tr in -1.0f64..1.0, ti in 0.9f64..2.5) {
        let tau = TauParameter::new(c(tr, ti)).unwrap();
        let z = c(x, y * ti);
        for idx in ThetaIndex::ALL {
            let s = series(idx, z, &tau);
            let p = theta_product(idx, z, &tau, &SeriesTruncation::default()).unwrap().value;
            prop_assert!((s - p).norm() < 1e-12 * s.norm().max(1.0));
        }
    }
}
