use elliptika::{
    f_ij, f_ij_derivative, weierstrass_p, EllipticContext, Error, EvalMethod, ParityIndex, WeierstrassMode,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ctx(tau: Complex64) -> EllipticContext {
    EllipticContext::new(tau).unwrap()
}

fn grid(tau: Complex64) -> Vec<Complex64> {
    let h = 0.45 * tau.im;
    (0..25)
        .map(|k| c(-0.43 + 0.19 * (k % 5) as f64, -h + 2.0 * h * (k / 5) as f64 / 4.0 + 0.017))
        .collect()
}

#[test]
fn oddness_on_grid() {
    for tau in [c(0.0, 2.0), c(0.3, 1.5)] {
        let cx = ctx(tau);
        for z in grid(tau) {
            for idx in ParityIndex::FUNCTIONS {
                let s = cx.f(idx, z).unwrap() + cx.f(idx, -z).unwrap();
                assert!(s.norm() < 1e-12 * cx.f(idx, z).unwrap().norm().max(1.0));
            }
        }
    }
}

#[test]
fn periodicity_character() {
    for tau in [c(0.0, 2.0), c(0.3, 1.5)] {
        let cx = ctx(tau);
        for z in grid(tau).into_iter().step_by(3) {
            for idx in ParityIndex::FUNCTIONS {
                let base = cx.f(idx, z).unwrap();
                for mu in -1i64..=1 {
                    for nu in -1i64..=1 {
                        let shifted = cx.f(idx, z + tau * mu as f64 + nu as f64).unwrap();
                        let expect = idx.character(mu, nu) * base;
                        assert!((shifted - expect).norm() < 1e-11 * base.norm().max(1.0), "{idx} {mu} {nu}");
                    }
                }
            }
        }
    }
}

#[test]
fn residues_at_scaled_poles() {
    let tau = c(0.0, 2.0);
    let cx = ctx(tau);
    for a in 1..=3u32 {
        let af = f64::from(a);
        for idx in ParityIndex::FUNCTIONS {
            for (mu, nu) in [(0i64, 1i64), (1, 0), (1, 1)] {
                let pole = -(tau * mu as f64 + nu as f64) / af;
                let h = c(1e-5, 0.0);
                let v = h * cx.f(idx, af * (pole + h)).unwrap();
                let expect = idx.character(mu, nu) / af;
                assert!((v - expect).norm() < 1e-4 * expect.abs(), "{idx} A={a} ({mu},{nu}): {v}");
            }
        }
    }
}

#[test]
fn fourier_route_agrees() {
    for tau in [c(0.0, 2.0), c(0.3, 1.5), c(0.0, 1.0)] {
        let cx = ctx(tau);
        for z in grid(tau) {
            for idx in ParityIndex::FUNCTIONS {
                let a = f_ij(idx, z, &cx, EvalMethod::ThetaQuotient).unwrap();
                let b = f_ij(idx, z, &cx, EvalMethod::Fourier).unwrap();
                assert!((a - b).norm() < 1e-10, "{idx} z={z} tau={tau}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn characteristic_theta_route_agrees() {
    for tau in [c(0.0, 2.0), c(0.3, 1.5)] {
        let cx = ctx(tau);
        for z in grid(tau) {
            for idx in ParityIndex::FUNCTIONS {
                let a = f_ij(idx, z, &cx, EvalMethod::ThetaQuotient).unwrap();
                let b = f_ij(idx, z, &cx, EvalMethod::Mumford).unwrap();
                assert!((a - b).norm() < 1e-12 * a.norm().max(1.0), "{idx} z={z}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn lattice_sum_route_agrees_loosely() {
    let tau = c(0.0, 2.0);
    let cx = ctx(tau);
    for z in [c(0.21, 0.13), c(-0.3, 0.4), c(0.37, -0.22), c(0.05, 0.61)] {
        for idx in ParityIndex::FUNCTIONS {
            let a = f_ij(idx, z, &cx, EvalMethod::ThetaQuotient).unwrap();
            let b = f_ij(idx, z, &cx, EvalMethod::EISENSTEIN_DEFAULT).unwrap();
            assert!((a - b).norm() < 1e-3, "{idx}: {a} vs {b}");
        }
    }
}

#[test]
fn weierstrass_modes_and_derivative() {
    let tau = c(0.0, 2.0);
    let cx = ctx(tau);
    let z = c(0.29, 0.21);
    let from_f = weierstrass_p(z, &cx, WeierstrassMode::FromF).unwrap();
    let lattice = weierstrass_p(z, &cx, WeierstrassMode::LATTICE_DEFAULT).unwrap();
    assert!((from_f - lattice).norm() < 2e-3);

    let p = |w: Complex64| weierstrass_p(w, &cx, WeierstrassMode::FromF).unwrap();
    let h = 1e-3;
    let numeric = (p(z - 2.0 * h) - 8.0 * p(z - h) + 8.0 * p(z + h) - p(z + 2.0 * h)) / (12.0 * h);
    let f = |idx| cx.f(idx, z).unwrap();
    let closed = -2.0 * f(ParityIndex::CS) * f(ParityIndex::DS) * f(ParityIndex::NS);
    assert!((numeric - closed).norm() < 1e-6, "{numeric} vs {closed}");
}

#[test]
fn difference_of_squares_is_constant() {
    let cx = ctx(c(0.3, 1.5));
    let vals: Vec<Complex64> = (0..10)
        .map(|k| {
            let z = c(0.11 + 0.07 * k as f64, 0.05 + 0.04 * k as f64);
            cx.f(ParityIndex::CS, z).unwrap().powi(2) - cx.f(ParityIndex::NS, z).unwrap().powi(2)
        })
        .collect();
    let mean = vals.iter().sum::<Complex64>() / vals.len() as f64;
    let var = vals.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / vals.len() as f64;
    assert!(var < 1e-18, "{var}");
    let tau = cx.tau();
    let wp = |w| weierstrass_p(w, &cx, WeierstrassMode::FromF).unwrap();
    assert!((mean - (wp(tau / 2.0) - wp(c(0.5, 0.0)))).norm() < 1e-10);
}

#[test]
fn invalid_index_rejected() {
    let cx = ctx(c(0.0, 2.0));
    assert!(matches!(
        f_ij(ParityIndex::new(0, 0), c(0.2, 0.1), &cx, EvalMethod::ThetaQuotient),
        Err(Error::InvalidIndex { i: 0, j: 0 })
    ));
}

proptest! {
    #[test]
    fn odd_and_periodic(x in -1.0f64..1.0, y in -0.6f64..0.6, tr in -0.5f64..0.5, ti in 1.0f64..3.0,
                        mu in -2i64..=2, nu in -2i64..=2) {
        let tau = c(tr, ti);
        let cx = ctx(tau);
        let z = c(x, y);
        prop_assume!(elliptika::lattice::nearest_lattice_point(z, tau, c(0.0, 0.0)).1 > 1e-2);
        for idx in ParityIndex::FUNCTIONS {
            let v = cx.f(idx, z).unwrap();
            let scale = v.norm().max(1.0);
            prop_assert!((cx.f(idx, -z).unwrap() + v).norm() < 1e-11 * scale);
            let w = cx.f(idx, z + tau * mu as f64 + nu as f64).unwrap();
            prop_assert!((w - idx.character(mu, nu) * v).norm() < 1e-10 * scale);
        }
    }

    #[test]
    fn derivative_matches_difference(x in 0.05f64..0.45, y in 0.05f64..0.45, ti in 1.0f64..3.0) {
        let cx = ctx(c(0.0, ti));
        let z = c(x, y);
        let h = 1e-5;
        for idx in ParityIndex::FUNCTIONS {
            let fd = (cx.f(idx, z + h).unwrap() - cx.f(idx, z - h).unwrap()) / (2.0 * h);
            let d = f_ij_derivative(idx, z, &cx).unwrap();
            prop_assert!((fd - d).norm() < 1e-6 * d.norm().max(1.0));
        }
    }

    #[test]
    fn index_arithmetic_is_mod_two(i in -5i64..5, j in -5i64..5, di in -5i64..5, dj in -5i64..5) {
        let a = ParityIndex::new(i, j).shifted(di, dj);
        prop_assert_eq!(a, ParityIndex::new(i + di, j + dj));
        prop_assert!(a.i() <= 1 && a.j() <= 1);
    }
}
