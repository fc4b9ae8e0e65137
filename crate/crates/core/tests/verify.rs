mod common;

use proptest::prelude::*;

use ckdv::error::Error;
use ckdv::lattice::{Lattice, Window};
use ckdv::verify::{
    complex_reduction, complex_residual_at, decoupling_residual, fd_system_residual_at, galileo, potential_residual,
    rescale, system_residual, system_residual_at, ResidualReport,
};

use common::*;

fn small_lattice() -> Lattice {
    Lattice {
        x: Window::new(-20.0, 20.0, 41).unwrap(),
        t: vec![-4.0, 0.0, 3.0],
    }
}

fn worst(r: &[ResidualReport]) -> f64 {
    r.iter().map(|r| r.max_abs).fold(0.0, f64::max)
}

#[test]
fn reductions_hold_on_the_matching_sign() {
    let l = small_lattice();
    for (name, pair) in representatives() {
        if pair.lambda() < 0.0 {
            let r = complex_reduction(&pair, &l).unwrap();
            assert!(r.max_abs < 1e-12, "{name}: {}", r.max_abs);
            assert!(matches!(decoupling_residual(&pair, &l), Err(Error::WrongLambda { .. })));
        } else {
            assert!(worst(&decoupling_residual(&pair, &l).unwrap()) < 1e-12, "{name}");
            assert!(matches!(complex_reduction(&pair, &l), Err(Error::WrongLambda { .. })));
        }
    }
}

#[test]
fn complex_residual_is_the_system_residual() {
    let pair = reference_soliton();
    for (x, t) in small_lattice().points() {
        let c = complex_residual_at(&pair, x, t).unwrap();
        let [e1, e2] = system_residual_at(&pair, x, t, -1.0).unwrap();
        assert!((f64::from(c.re) - f64::from(e1)).abs() < 1e-25);
        assert!((f64::from(c.im) - f64::from(e2)).abs() < 1e-25);
    }
}

#[test]
fn wrong_coupling_sign_leaves_an_order_one_residual() {
    let l = small_lattice();
    let pair = soliton(0.5, 3.0, 0.0);
    assert!(worst(&system_residual(&pair, &l, -1.0).unwrap()) < 1e-12);
    assert!(worst(&system_residual(&pair, &l, 1.0).unwrap()) > 1e-2);
}

#[test]
fn finite_differences_agree_with_jets() {
    for (name, pair) in representatives() {
        for (x, t) in [(-2.5, 0.0), (1.25, 1.5)] {
            let fd = fd_system_residual_at(&pair, x, t, pair.lambda()).unwrap();
            assert!(fd[0].abs() < 1e-4 && fd[1].abs() < 1e-4, "{name} at ({x}, {t}): {fd:?}");
        }
    }
}

#[test]
fn transforms_invert() {
    let l = small_lattice();
    for (name, pair) in representatives() {
        let round_trips = [
            galileo(&galileo(&pair, 0.7), -0.7),
            rescale(&rescale(&pair, 0.5).unwrap(), 2.0).unwrap(),
        ];
        for back in round_trips {
            for (x, t) in l.points() {
                let (a, b) = (pair.values(x, t).unwrap(), back.values(x, t).unwrap());
                let tol = 1e-12 * (1.0 + a.0.abs().max(a.1.abs()));
                assert!(
                    (a.0 - b.0).abs() < tol && (a.1 - b.1).abs() < tol,
                    "{name} at ({x}, {t})"
                );
            }
        }
    }
    assert!(rescale(&reference_soliton(), 0.0).is_err());
    assert!(rescale(&reference_soliton(), -2.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn boosted_and_rescaled_solitons_solve_the_system(
        eta in 0.05f64..0.6,
        rho in 0.5f64..4.0,
        c in -1.0f64..1.0,
        boost in -2.0f64..2.0,
        b in 0.3f64..3.0,
    ) {
        let pair = soliton(eta, rho, c);
        let l = small_lattice();
        for moved in [galileo(&pair, boost), rescale(&pair, b).unwrap()] {
            let scale = 1.0 + moved.fields(0.0, 0.0).unwrap().0.abs();
            prop_assert!(worst(&system_residual(&moved, &l, -1.0).unwrap()) < 1e-9 * scale);
            prop_assert!(worst(&potential_residual(&moved, &l, -1.0).unwrap()) < 1e-9 * scale);
        }
    }
}
