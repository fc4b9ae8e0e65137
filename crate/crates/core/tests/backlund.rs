mod common;

use proptest::prelude::*;

use ckdv::backlund::{eq50_holds, regularity_scan, superpose, BacklundParams, SuperposedPair, Verdict};
use ckdv::error::Error;
use ckdv::families::{make_decoupled, AnalyticPair, KdvFactor};
use ckdv::lattice::{Lattice, Window};
use ckdv::verify::{bt_report, potential_residual, system_residual};

use common::*;

fn small_lattice() -> Lattice {
    Lattice {
        x: Window::new(-30.0, 30.0, 41).unwrap(),
        t: vec![-10.0, 0.0, 10.0],
    }
}

fn worst(r: &[ckdv::verify::ResidualReport]) -> f64 {
    r.iter().map(|r| r.max_abs).fold(0.0, f64::max)
}

#[test]
fn two_soliton_is_swap_symmetric_and_regular() {
    let s = two_soliton_pair();
    assert!(eq50_holds(&s));
    let (p, q) = (superpose(&s).unwrap(), superpose(&s.swapped()).unwrap());
    for (x, t) in Lattice::standard().points() {
        assert_eq!(p.values(x, t).unwrap(), q.values(x, t).unwrap());
    }
    let scan = regularity_scan(
        &s,
        Window::new(-60.0, 60.0, 601).unwrap(),
        Window::new(-20.0, 20.0, 201).unwrap(),
        1e-12,
    )
    .unwrap();
    assert_eq!(scan.verdict, Verdict::Regular);
    assert!(scan.eq50_holds);
    assert!(scan.min_abs_d > 1e-3);
}

#[test]
fn background_superposition_solves_the_system() {
    let pair = superpose(&background_pair()).unwrap();
    let lattice = Lattice {
        x: Window::new(-40.0, 40.0, 81).unwrap(),
        t: vec![-75.0, 5.0, 350.0],
    };
    assert!(worst(&system_residual(&pair, &lattice, -1.0).unwrap()) < 1e-8);
    assert!(worst(&potential_residual(&pair, &lattice, -1.0).unwrap()) < 1e-8);
}

#[test]
fn unbalanced_parameters_are_flagged_but_may_still_be_regular() {
    let s = SuperposedPair::over_zero(reference_soliton(), soliton(1.0 / 6.0, 2.0, 1.0)).unwrap();
    assert!(!eq50_holds(&s));
    let scan = regularity_scan(&s, Window::new(-40.0, 40.0, 81).unwrap(), Window::single(0.0), 1e-12).unwrap();
    assert!(!scan.eq50_holds);
}

#[test]
fn misuse_is_rejected() {
    let a = reference_soliton();
    assert!(matches!(
        SuperposedPair::new(AnalyticPair::zero(-1.0), a.clone(), 0.1, a.clone(), 0.1).and_then(|s| superpose(&s)),
        Err(Error::EqualParameters(_))
    ));
    let plus = make_decoupled(KdvFactor::soliton(0.5, 0.0).unwrap(), KdvFactor::Zero);
    assert!(matches!(
        SuperposedPair::new(AnalyticPair::zero(-1.0), a, 0.1, plus, 0.2),
        Err(Error::LambdaMismatch(..))
    ));
}

#[test]
fn plus_one_can_be_singular() {
    // at λ = +1 the denominator is a difference of squares
    let branch = |k| make_decoupled(KdvFactor::soliton(k, 0.0).unwrap(), KdvFactor::Zero);
    let s = SuperposedPair::new(AnalyticPair::zero(1.0), branch(0.3), 0.1, branch(0.5), 0.2).unwrap();
    let scan = regularity_scan(&s, Window::new(-5.0, 5.0, 11).unwrap(), Window::single(0.0), 1e-12).unwrap();
    assert_eq!(scan.verdict, Verdict::Singular);
    let p = superpose(&s).unwrap();
    assert!(matches!(p.fields(1.0, 0.0), Err(Error::SingularDenominator { .. })));
}

/// `(η₁, η₂, ρ₁, ρ₂, k)` with `𝒞ᵢ = k ηᵢ ρᵢ`. For `|k| ≫ 1` the denominator
/// stays positive but can drop below the absolute floor.
fn balanced() -> impl Strategy<Value = (f64, f64, f64, f64, f64)> {
    (0.02f64..0.5, 0.02f64..0.5, 0.2f64..4.0, 0.2f64..4.0, -2.0f64..2.0)
        .prop_filter("distinct η", |(e1, e2, ..)| (e1 - e2).abs() > 0.01)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solitons_descend_from_zero(eta in 0.02f64..1.0, rho in 0.2f64..5.0, c in -3.0f64..3.0) {
        let pair = soliton(eta, rho, c);
        let r = bt_report(&pair, &AnalyticPair::zero(-1.0), &BacklundParams::new(eta, -1.0), &small_lattice()).unwrap();
        let scale = 1.0 + pair.fields(0.0, 0.0).unwrap().0.abs();
        prop_assert!(worst(&r) < 1e-12 * scale, "{}", worst(&r));
    }

    #[test]
    fn balanced_superpositions_are_regular_symmetric_solutions((e1, e2, r1, r2, k) in balanced()) {
        let s = SuperposedPair::over_zero(soliton(e1, r1, k * e1 * r1), soliton(e2, r2, k * e2 * r2)).unwrap();
        prop_assert!(eq50_holds(&s));
        let (p, q) = (superpose(&s).unwrap(), superpose(&s.swapped()).unwrap());
        for (x, t) in small_lattice().points() {
            let (a, b) = (p.values(x, t).unwrap(), q.values(x, t).unwrap());
            prop_assert!((a.0 - b.0).abs() <= 1e-12 * (1.0 + a.0.abs()));
            prop_assert!((a.1 - b.1).abs() <= 1e-12 * (1.0 + a.1.abs()));
            prop_assert!(s.denominator(x, t).unwrap() > 0.0);
        }
        let r = worst(&system_residual(&p, &small_lattice(), -1.0).unwrap());
        prop_assert!(r < 1e-8, "{r}");
    }

    #[test]
    fn minus_one_denominator_is_a_sum_of_squares(
        (e1, e2, r1, r2, c1) in balanced(),
        c2 in -2.0f64..2.0,
        x in -30.0f64..30.0,
        t in -10.0f64..10.0,
    ) {
        let s = SuperposedPair::over_zero(soliton(e1, r1, c1), soliton(e2, r2, c2)).unwrap();
        let (w1, y1) = s.branch1.values(x, t).unwrap();
        let (w2, y2) = s.branch2.values(x, t).unwrap();
        let d = s.denominator(x, t).unwrap();
        prop_assert!(d >= 0.0);
        prop_assert!((d - ((w1 - w2).powi(2) + (y1 - y2).powi(2))).abs() <= 1e-14 * (1.0 + d));
    }
}
