//! Family representatives shared by the integration tests.
#![allow(dead_code)]

use ckdv::backlund::{superpose, SuperposedPair};
use ckdv::families::{
    make_decoupled, make_periodic, make_rational, make_soliton, AnalyticPair, KdvFactor, PeriodicParams,
    RationalParams, SolitonParams,
};

pub fn soliton(eta: f64, rho: f64, c: f64) -> AnalyticPair {
    make_soliton(SolitonParams::new(eta, rho, c, 0.0).unwrap())
}

pub fn periodic(eta_abs: f64, rho: f64, c: f64) -> AnalyticPair {
    make_periodic(PeriodicParams::new(eta_abs, rho, c, 0.0, 1).unwrap())
}

pub fn rational(c: f64, rho: f64, h: f64) -> AnalyticPair {
    make_rational(RationalParams::new(c, rho, h).unwrap())
}

/// η = 1/12, ρ = 2, 𝒞 = 1.
pub fn reference_soliton() -> AnalyticPair {
    soliton(1.0 / 12.0, 2.0, 1.0)
}

/// |η| = 1/12, ρ = 1, 𝒞 = 1.
pub fn reference_periodic() -> AnalyticPair {
    periodic(1.0 / 12.0, 1.0, 1.0)
}

/// C = −1, ρ = 12, H = 0.
pub fn reference_rational() -> AnalyticPair {
    rational(-1.0, 12.0, 0.0)
}

pub fn reference_decoupled() -> AnalyticPair {
    make_decoupled(
        KdvFactor::soliton(0.5, 0.0).unwrap(),
        KdvFactor::soliton(1.0 / 3.0, 1.0).unwrap(),
    )
}

/// Two solitons with equal `𝒞/(ηρ)` over the zero germ.
pub fn two_soliton_pair() -> SuperposedPair {
    SuperposedPair::over_zero(reference_soliton(), soliton(1.0 / 6.0, 2.0, 2.0)).unwrap()
}

/// The rational background and the reference soliton over the zero germ.
pub fn background_pair() -> SuperposedPair {
    SuperposedPair::over_zero(reference_rational(), reference_soliton()).unwrap()
}

pub fn representatives() -> Vec<(&'static str, AnalyticPair)> {
    vec![
        ("soliton", reference_soliton()),
        ("periodic", reference_periodic()),
        ("rational", reference_rational()),
        ("decoupled", reference_decoupled()),
        ("two-soliton", superpose(&two_soliton_pair()).unwrap()),
    ]
}
