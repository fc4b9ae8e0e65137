//! Exact solution families of the coupled system
//!
//! ```text
//! u_t + u u_x + u_xxx + λ v v_x = 0
//! v_t + u_x v + v_x u + v_xxx = 0
//! ```
//!
//! Every family is expressed through its potentials `w`, `y` (`u = w_x`,
//! `v = y_x`) and evaluated as jets, so the fields and all the derivatives the
//! residual checks need come out of exact truncated-Taylor arithmetic.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::{Dd, Jet, MAX_T, MAX_X};

/// A source of potential jets `(w, y)` at a point.
pub trait PotentialSource: Send + Sync + fmt::Debug {
    /// Jets of `w` and `y` with x-order `kx` and t-order `kt`.
    fn potentials(&self, x: f64, t: f64, kx: usize, kt: usize) -> Result<(Jet, Jet)>;

    /// Plain values of `w` and `y`.
    fn values(&self, x: f64, t: f64) -> Result<(f64, f64)> {
        let (w, y) = self.potentials(x, t, 0, 0)?;
        Ok((w.value(), y.value()))
    }

    fn family(&self) -> Family;
}

/// Serializable description of how a pair was built.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Zero,
    Soliton(SolitonParams),
    Periodic(PeriodicParams),
    Rational(RationalParams),
    Decoupled(DecoupledParams),
    Superposed {
        germ: Box<Family>,
        branch1: Box<Family>,
        eta1: f64,
        branch2: Box<Family>,
        eta2: f64,
    },
    Galileo {
        inner: Box<Family>,
        c: f64,
    },
    Rescaled {
        inner: Box<Family>,
        b: f64,
    },
}

impl Family {
    /// The Bäcklund parameter `η` (with `μ = 0`) relating this family to the
    /// trivial germ, when there is one.
    pub fn bt_eta(&self) -> Option<f64> {
        match self {
            Family::Soliton(p) => Some(p.eta),
            Family::Periodic(p) => Some(-p.eta_abs),
            Family::Rational(_) => Some(0.0),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Zero => "zero",
            Family::Soliton(_) => "soliton",
            Family::Periodic(_) => "periodic",
            Family::Rational(_) => "rational",
            Family::Decoupled(_) => "decoupled",
            Family::Superposed { .. } => "superposed",
            Family::Galileo { .. } => "galileo",
            Family::Rescaled { .. } => "rescaled",
        }
    }
}

/// Jets of the potentials and fields at one point; `u`, `v` carry one x-order
/// less than `w`, `y`.
#[derive(Clone, Copy, Debug)]
pub struct PairJets {
    pub w: Jet,
    pub y: Jet,
    pub u: Jet,
    pub v: Jet,
}

/// An exactly evaluable solution `(w, y, u, v)` of the coupled system for a
/// fixed coupling `λ`.
#[derive(Clone)]
pub struct AnalyticPair {
    lambda: f64,
    source: Arc<dyn PotentialSource>,
}

impl fmt::Debug for AnalyticPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticPair")
            .field("lambda", &self.lambda)
            .field("source", &self.source)
            .finish()
    }
}

impl AnalyticPair {
    pub fn new(lambda: f64, source: impl PotentialSource + 'static) -> Self {
        AnalyticPair {
            lambda,
            source: Arc::new(source),
        }
    }

    pub fn zero(lambda: f64) -> Self {
        AnalyticPair::new(lambda, ZeroPair)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn family(&self) -> Family {
        self.source.family()
    }

    pub fn source(&self) -> &Arc<dyn PotentialSource> {
        &self.source
    }

    pub fn potentials(&self, x: f64, t: f64, kx: usize, kt: usize) -> Result<(Jet, Jet)> {
        check_request(kx, kt)?;
        self.source.potentials(x, t, kx, kt)
    }

    /// Jets of `w`, `y` (order `kx + 1`) and `u`, `v` (order `kx`).
    pub fn eval(&self, x: f64, t: f64, kx: usize, kt: usize) -> Result<PairJets> {
        let (w, y) = self.potentials(x, t, kx + 1, kt)?;
        Ok(PairJets {
            w,
            y,
            u: w.d_x(),
            v: y.d_x(),
        })
    }

    /// Plain values of the potentials `(w, y)`.
    pub fn values(&self, x: f64, t: f64) -> Result<(f64, f64)> {
        self.source.values(x, t)
    }

    /// Plain values of the fields `(u, v)`.
    pub fn fields(&self, x: f64, t: f64) -> Result<(f64, f64)> {
        let j = self.eval(x, t, 0, 0)?;
        Ok((j.u.value(), j.v.value()))
    }
}

pub(crate) fn check_request(kx: usize, kt: usize) -> Result<()> {
    if kx >= MAX_X {
        return Err(Error::OrderTooHigh {
            requested: kx,
            max: MAX_X - 1,
        });
    }
    if kt >= MAX_T {
        return Err(Error::OrderTooHigh {
            requested: kt,
            max: MAX_T - 1,
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug)]
pub struct ZeroPair;

impl PotentialSource for ZeroPair {
    fn potentials(&self, _x: f64, _t: f64, kx: usize, kt: usize) -> Result<(Jet, Jet)> {
        Ok((Jet::zero(kx, kt), Jet::zero(kx, kt)))
    }

    fn values(&self, _x: f64, _t: f64) -> Result<(f64, f64)> {
        Ok((0.0, 0.0))
    }

    fn family(&self) -> Family {
        Family::Zero
    }
}

fn nonzero_finite(v: f64) -> bool {
    v.is_finite() && v != 0.0
}

// ---------------------------------------------------------------------------
// λ = −1 soliton, η > 0
// ---------------------------------------------------------------------------

/// Parameters of the hyperbolic (solitonic) family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolitonParams {
    eta: f64,
    rho: f64,
    big_c: f64,
    phase0: f64,
}

impl SolitonParams {
    pub fn new(eta: f64, rho: f64, big_c: f64, phase0: f64) -> Result<Self> {
        if !(eta.is_finite() && eta > 0.0) {
            return Err(Error::domain("soliton", "η>0", format!("eta = {eta}")));
        }
        if !nonzero_finite(rho) {
            return Err(Error::domain("soliton", "ρ≠0", format!("rho = {rho}")));
        }
        if !big_c.is_finite() || !phase0.is_finite() {
            return Err(Error::domain("soliton", "finite", "C and phase0 must be finite"));
        }
        Ok(SolitonParams {
            eta,
            rho,
            big_c,
            phase0,
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn big_c(&self) -> f64 {
        self.big_c
    }

    pub fn phase0(&self) -> f64 {
        self.phase0
    }

    /// Wavenumber `a = 2√(η/6)`; the profile travels at speed `a²`.
    pub fn a(&self) -> f64 {
        self.a_dd().into()
    }

    /// `A = √((3𝒞/η)² + (6/η)(ρ/12)²)`.
    pub fn amp(&self) -> f64 {
        self.amp_dd().into()
    }

    /// Offset `3𝒞/(ηA)` in the denominator `cosh(ax + b) − 3𝒞/(ηA)`.
    pub fn offset(&self) -> f64 {
        (self.p_dd() / self.amp_dd()).into()
    }

    /// `1 − 3𝒞/(ηA)`, formed without cancellation. Always positive.
    pub fn gap(&self) -> f64 {
        self.gap_dd().into()
    }

    /// Phase `b(t) = −a³t + phase0`.
    pub fn phase(&self, t: f64) -> f64 {
        self.phase_dd(t).into()
    }

    fn a_dd(&self) -> Dd {
        (Dd::from(self.eta) / 6.0).sqrt() * 2.0
    }

    /// `3𝒞/η`
    fn p_dd(&self) -> Dd {
        Dd::from(self.big_c) * 3.0 / self.eta
    }

    /// `(6/η)(ρ/12)²`
    fn rho_term(&self) -> Dd {
        let r = Dd::from(self.rho) / 12.0;
        r * r * 6.0 / self.eta
    }

    fn amp_dd(&self) -> Dd {
        let p = self.p_dd();
        (p * p + self.rho_term()).sqrt()
    }

    fn gap_dd(&self) -> Dd {
        let p = self.p_dd();
        let amp = self.amp_dd();
        if p > 0.0 {
            self.rho_term() / (amp * (amp + p))
        } else {
            1.0 - p / amp
        }
    }

    fn phase_dd(&self, t: f64) -> Dd {
        let a = self.a_dd();
        -(a * a * a * t) + self.phase0
    }
}

/// Soliton source with the `f64` constants of the fast path cached.
#[derive(Clone, Copy, Debug)]
struct SolitonPair {
    p: SolitonParams,
    a: f64,
    a3: f64,
    gap: f64,
    y_amp: f64,
}

impl From<SolitonParams> for SolitonPair {
    fn from(p: SolitonParams) -> Self {
        let a = p.a_dd();
        SolitonPair {
            p,
            a: a.into(),
            a3: (a * a * a).into(),
            gap: p.gap(),
            y_amp: (Dd::from(p.rho) * 2.0 / p.amp_dd()).into(),
        }
    }
}

impl SolitonPair {
    /// Writes `sinh θ/(cosh θ − c)` and `1/(cosh θ − c)` through `q = e^{−sθ}`
    /// and `m = 1 − q`,
    /// `s = sign θ`, so neither overflows and the denominator
    /// `(1 − q)² + 2q(1 − c)` is a sum of nonnegative terms.
    fn jets(&self, x: f64, t: f64, kx: usize, kt: usize) -> (Jet, Jet) {
        let p = &self.p;
        let a = p.a_dd();
        let theta0 = a * x + p.phase_dd(t);
        let s = if theta0 >= 0.0 { 1.0 } else { -1.0 };
        let arg = Jet::affine(theta0 * -s, a * -s, a * a * a * s, kx, kt);
        let q0 = if arg.value() < -1.0 {
            Dd::from(arg.value().exp())
        } else {
            Dd::from(arg.value().exp_m1()) + 1.0
        };
        let q = arg.compose(&vec![q0; kx + kt + 1]);
        let m = Jet::constant(1.0, kx, kt) - q;
        let den = m.square() + q * (p.gap_dd() * 2.0);
        let w = (m * (Jet::constant(2.0, kx, kt) - m)) / den * (a * 6.0 * s);
        let y = q / den * (Dd::from(p.rho) * 2.0 / p.amp_dd());
        (w, y)
    }
}

impl PotentialSource for SolitonPair {
    fn potentials(&self, x: f64, t: f64, kx: usize, kt: usize) -> Result<(Jet, Jet)> {
        Ok(self.jets(x, t, kx, kt))
    }

    fn values(&self, x: f64, t: f64) -> Result<(f64, f64)> {
        let theta = self.a * x + (self.p.phase0 - self.a3 * t);
        let s = if theta >= 0.0 { 1.0 } else { -1.0 };
        let m = -(-s * theta).exp_m1();
        let q = (-s * theta).exp();
        let den = m * m + 2.0 * self.gap * q;
        Ok((6.0 * self.a * s * m * (2.0 - m) / den, self.y_amp * q / den))
    }

    fn family(&self) -> Family {
        Family::Soliton(self.p)
    }
}

/// Solitonic λ = −1 pair:
/// `w = 12√(η/6) sinh(ax+b)/[cosh(ax+b) − 3𝒞/(ηA)]`,
/// `y = (ρ/A)/[cosh(ax+b) − 3𝒞/(ηA)]`, `b = −a³t + phase0`.
pub fn make_soliton(p: SolitonParams) -> AnalyticPair {
    AnalyticPair::new(-1.0, SolitonPair::from(p))
}

// ---------------------------------------------------------------------------
// λ = −1 periodic family, η < 0
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PeriodicParams {
    eta_abs: f64,
    rho: f64,
    big_c: f64,
    phase0: f64,
    epsilon: f64,
}

impl PeriodicParams {
    /// Checks, in order, `|η|>0`, `ρ≠0`, `𝒞>0` and `δ>0`.
    pub fn new(eta_abs: f64, rho: f64, big_c: f64, phase0: f64, epsilon_sign: i8) -> Result<Self> {
        if !(eta_abs.is_finite() && eta_abs > 0.0) {
            return Err(Error::domain("periodic", "|η|>0", format!("etaAbs = {eta_abs}")));
        }
        if !nonzero_finite(rho) {
            return Err(Error::domain("periodic", "ρ≠0", format!("rho = {rho}")));
        }
        if !(big_c.is_finite() && big_c > 0.0) {
            return Err(Error::domain("periodic", "𝒞>0", format!("C = {big_c}")));
        }
        if epsilon_sign != 1 && epsilon_sign != -1 {
            return Err(Error::domain("periodic", "ε=±1", format!("epsilon = {epsilon_sign}")));
        }
        if !phase0.is_finite() {
            return Err(Error::domain("periodic", "finite", "phase0 must be finite"));
        }
        let p = PeriodicParams {
            eta_abs,
            rho,
            big_c,
            phase0,
            epsilon: epsilon_sign as f64,
        };
        // δ within a few ulps of the leading term is zero at the precision the
        // inputs carry.
        let delta = p.delta();
        let scale = 1.5 * big_c * big_c / eta_abs;
        if !(delta > 8.0 * f64::EPSILON * scale) {
            return Err(Error::domain(
                "periodic",
                "δ>0",
                format!("delta = 3C²/(2|η|) − (ρ/12)² = {delta:e}"),
            ));
        }
        Ok(p)
    }

    pub fn eta_abs(&self) -> f64 {
        self.eta_abs
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn big_c(&self) -> f64 {
        self.big_c
    }

    pub fn phase0(&self) -> f64 {
        self.phase0
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `δ = (3/2)𝒞²/|η| − (ρ/12)²`
    pub fn delta(&self) -> f64 {
        self.delta_dd().into()
    }

    pub fn a(&self) -> f64 {
        self.a_dd().into()
    }

    /// `Â = √(6δ/|η|)`
    pub fn amp(&self) -> f64 {
        self.amp_dd().into()
    }

    /// `K = 3𝒞/(|η|Â) > 1`.
    pub fn offset(&self) -> f64 {
        self.offset_dd().into()
    }

    /// `K − 1`, formed from `K² − 1 = 6(ρ/12)²/(|η|Â²)` without cancellation.
    pub fn gap(&self) -> f64 {
        let r = Dd::from(self.rho) / 12.0;
        let amp = self.amp_dd();
        let k2m1 = r * r * 6.0 / (amp * amp * self.eta_abs);
        (k2m1 / (self.offset_dd() + 1.0)).into()
    }

    /// Phase `b(t) = +a³t + phase0`. The trigonometric profile moves left.
    pub fn phase(&self, t: f64) -> f64 {
        self.phase_dd(t).into()
    }

    fn delta_dd(&self) -> Dd {
        let r = Dd::from(self.rho) / 12.0;
        Dd::from(self.big_c) * self.big_c * 1.5 / self.eta_abs - r * r
    }

    fn a_dd(&self) -> Dd {
        (Dd::from(self.eta_abs) / 6.0).sqrt() * 2.0
    }

    fn amp_dd(&self) -> Dd {
        (self.delta_dd() * 6.0 / self.eta_abs).sqrt()
    }

    fn offset_dd(&self) -> Dd {
        Dd::from(self.big_c) * 3.0 / (self.amp_dd() * self.eta_abs)
    }

    fn phase_dd(&self, t: f64) -> Dd {
        let a = self.a_dd();
        a * a * a * t + self.phase0
    }
}

#[derive(Clone, Copy, Debug)]
struct PeriodicPair {
    p: PeriodicParams,
    a: f64,
    a3: f64,
    gap: f64,
    y_amp: f64,
}

impl From<PeriodicParams> for PeriodicPair {
    fn from(p: PeriodicParams) -> Self {
        let a = p.a_dd();
        PeriodicPair {
            p,
            a: a.into(),
            a3: (a * a * a).into(),
            gap: p.gap(),
            y_amp: (Dd::from(p.rho) / p.amp_dd()).into(),
        }
    }
}

impl PotentialSource for PeriodicPair {
    fn potentials(&self, x: f64, t: f64, kx: usize, kt: usize) -> Result<(Jet, Jet)> {
        let p = &self.p;
        let a = p.a_dd();
        let theta = Jet::affine(a * x + p.phase_dd(t), a, a * a * a, kx, kt);
        let (sin, cos) = theta.sin_cos();
        let den = cos * p.epsilon + p.offset_dd();
        let w = sin / den * (a * (-p.epsilon * 6.0));
        let y = den.recip() * (Dd::from(p.rho) / p.amp_dd());
        Ok((w, y))
    }

    fn values(&self, x: f64, t: f64) -> Result<(f64, f64)> {
        let eps = self.p.epsilon;
        let theta = self.a * x + (self.a3 * t + self.p.phase0);
        // ε cos θ + K = (1 + ε cos θ) + (K − 1), with 1 ± cos θ by half angles
        let (hs, hc) = (0.5 * theta).sin_cos();
        let half = if eps > 0.0 { hc } else { hs };
        let den = 2.0 * half * half + self.gap;
        Ok((-eps * 12.0 * self.a * hs * hc / den, self.y_amp / den))
    }

    fn family(&self) -> Family {
        Family::Periodic(self.p)
    }
}

/// Periodic λ = −1 pair:
/// `w = −6εa sin(ax+b)/(ε cos(ax+b) + K)`, `y = (ρ/Â)/(ε cos(ax+b) + K)`.
pub fn make_periodic(p: PeriodicParams) -> AnalyticPair {
    AnalyticPair::new(-1.0, PeriodicPair::from(p))
}

// ---------------------------------------------------------------------------
// λ = −1 stationary rational family, η = 0
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RationalParams {
    big_c: f64,
    rho: f64,
    shift_h: f64,
}

impl RationalParams {
    pub fn new(big_c: f64, rho: f64, shift_h: f64) -> Result<Self> {
        if !nonzero_finite(rho) {
            return Err(Error::domain("rational", "ρ≠0", format!("rho = {rho}")));
        }
        if !nonzero_finite(big_c) {
            return Err(Error::domain("rational", "C≠0", format!("C = {big_c}")));
        }
        if !shift_h.is_finite() {
            return Err(Error::domain("rational", "finite", "H must be finite"));
        }
        Ok(RationalParams { big_c, rho, shift_h })
    }

    pub fn big_c(&self) -> f64 {
        self.big_c
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn shift_h(&self) -> f64 {
        self.shift_h
    }

    /// `(ρ/12)²`, the lower bound of the shared denominator.
    pub fn floor(&self) -> f64 {
        (self.rho / 12.0).powi(2)
    }
}

#[derive(Clone, Copy, Debug)]
struct RationalPair(RationalParams);

impl PotentialSource for RationalPair {
    fn potentials(&self, x: f64, _t: f64, kx: usize, kt: usize) -> Result<(Jet, Jet)> {
        let p = &self.0;
        let c2 = Dd::from(p.big_c) * p.big_c;
        let shifted = Jet::affine(Dd::from(x) + p.shift_h, 1.0, 0.0, kx, kt);
        let r = Dd::from(p.rho) / 12.0;
        let den = shifted.square() * c2 + r * r;
        let w = shifted / den * (c2 * 12.0);
        let y = den.recip() * (Dd::from(p.big_c) * p.rho);
        Ok((w, y))
    }

    fn values(&self, x: f64, _t: f64) -> Result<(f64, f64)> {
        let p = &self.0;
        let c2 = p.big_c * p.big_c;
        let s = x + p.shift_h;
        let den = p.floor() + c2 * s * s;
        Ok((12.0 * c2 * s / den, p.big_c * p.rho / den))
    }

    fn family(&self) -> Family {
        Family::Rational(self.0)
    }
}

/// Stationary λ = −1 pair:
/// `w = 12C²(x+H)/[(ρ/12)² + C²(x+H)²]`, `y = Cρ/[(ρ/12)² + C²(x+H)²]`.
pub fn make_rational(p: RationalParams) -> AnalyticPair {
    AnalyticPair::new(-1.0, RationalPair(p))
}

// ---------------------------------------------------------------------------
// λ = +1 decoupled composition
// ---------------------------------------------------------------------------

/// One scalar factor `z` of `z_t + z z_x + z_xxx = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KdvFactor {
    Zero,
    /// `z = 12k² sech²(kx − 4k³t + phase)`, potential `12k tanh(...)`.
    Soliton {
        k: f64,
        phase: f64,
    },
}

impl KdvFactor {
    pub fn soliton(k: f64, phase: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::domain(
                "decoupled",
                "k>0",
                format!("solitonic speed 4k² must be positive with k > 0, got k = {k}"),
            ));
        }
        if !phase.is_finite() {
            return Err(Error::domain("decoupled", "finite", "phase must be finite"));
        }
        Ok(KdvFactor::Soliton { k, phase })
    }

    pub fn speed(&self) -> f64 {
        match *self {
            KdvFactor::Zero => 0.0,
            KdvFactor::Soliton { k, .. } => 4.0 * k * k,
        }
    }

    /// Jet of the potential `Z` with `z = Z_x`.
    pub fn potential(&self, x: f64, t: f64, kx: usize, kt: usize) -> Jet {
        match *self {
            KdvFactor::Zero => Jet::zero(kx, kt),
            KdvFactor::Soliton { k, phase } => {
                let k = Dd::from(k);
                let speed = k * k * k * -4.0;
                let theta = Jet::affine(k * x + speed * t + phase, k, speed, kx, kt);
                theta.tanh() * (k * 12.0)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecoupledParams {
    pub left: KdvFactor,
    pub right: KdvFactor,
}

#[derive(Clone, Copy, Debug)]
struct DecoupledPair(DecoupledParams);

impl PotentialSource for DecoupledPair {
    fn potentials(&self, x: f64, t: f64, kx: usize, kt: usize) -> Result<(Jet, Jet)> {
        let z1 = self.0.left.potential(x, t, kx, kt);
        let z2 = self.0.right.potential(x, t, kx, kt);
        Ok(((z1 + z2) * 0.5, (z1 - z2) * 0.5))
    }

    fn family(&self) -> Family {
        Family::Decoupled(self.0)
    }
}

/// λ = +1 pair with `u + v = z₁` and `u − v = z₂` for two scalar KdV solitons.
pub fn make_decoupled(left: KdvFactor, right: KdvFactor) -> AnalyticPair {
    AnalyticPair::new(1.0, DecoupledPair(DecoupledParams { left, right }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn soliton_reference_constants() {
        let p = SolitonParams::new(1.0 / 12.0, 2.0, 1.0, 0.0).unwrap();
        assert!((p.a() - 1.0 / (3.0 * 2f64.sqrt())).abs() < 1e-15);
        assert!((p.amp() - 1298f64.sqrt()).abs() < 1e-12);
        assert!((p.offset() - 36.0 / 1298f64.sqrt()).abs() < 1e-15);
        assert!((p.offset() - 0.99922929).abs() < 1e-8);
        assert!((p.gap() - (1.0 - p.offset())).abs() < 1e-15);
    }

    #[test]
    fn soliton_rejects_bad_parameters() {
        let e = SolitonParams::new(0.0, 2.0, 1.0, 0.0).unwrap_err();
        assert!(matches!(e, Error::ParameterDomain { condition: "η>0", .. }));
        let e = SolitonParams::new(0.1, 0.0, 1.0, 0.0).unwrap_err();
        assert!(matches!(
            e,
            Error::ParameterDomain {
                condition: "ρ≠0", ..
            }
        ));
        assert!(SolitonParams::new(0.1, 1.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn soliton_values_match_jets_far_out() {
        let pair = make_soliton(SolitonParams::new(1.0 / 12.0, 2.0, 1.0, 0.0).unwrap());
        for &x in &[-5000.0, -30.0, -0.1, 0.0, 0.2, 17.0, 4000.0] {
            let (w, y) = pair.values(x, 3.0).unwrap();
            let (wj, yj) = pair.potentials(x, 3.0, 2, 1).unwrap();
            assert!(w.is_finite() && y.is_finite());
            assert!((w - wj.value()).abs() <= 1e-14 * (1.0 + w.abs()));
            assert!((y - yj.value()).abs() <= 1e-14 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn periodic_condition_order() {
        let e = PeriodicParams::new(1.0 / 12.0, 1.0, 0.0, 0.0, 1).unwrap_err();
        assert!(matches!(
            e,
            Error::ParameterDomain {
                condition: "𝒞>0", ..
            }
        ));
        let e = PeriodicParams::new(1.0 / 12.0, 12.0 * 18f64.sqrt(), 1.0, 0.0, 1).unwrap_err();
        assert!(matches!(e, Error::ParameterDomain { condition: "δ>0", .. }));
        let e = PeriodicParams::new(1.0 / 12.0, 0.0, 1.0, 0.0, 1).unwrap_err();
        assert!(matches!(
            e,
            Error::ParameterDomain {
                condition: "ρ≠0", ..
            }
        ));
    }

    #[test]
    fn periodic_offset_exceeds_one() {
        let p = PeriodicParams::new(1.0 / 12.0, 1.0, 1.0, 0.0, 1).unwrap();
        assert!((p.delta() - (18.0 - 1.0 / 144.0)).abs() < 1e-13);
        assert!(p.offset() > 1.0);
        assert!((p.gap() - (p.offset() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn rational_rejects_zero_c() {
        let e = RationalParams::new(0.0, 12.0, 0.0).unwrap_err();
        assert!(matches!(e, Error::ParameterDomain { condition: "C≠0", .. }));
    }

    #[test]
    fn decoupled_requires_positive_k() {
        assert!(KdvFactor::soliton(0.0, 0.0).is_err());
        assert!(KdvFactor::soliton(-0.3, 0.0).is_err());
        assert_eq!(KdvFactor::soliton(0.5, 0.0).unwrap().speed(), 1.0);
    }

    #[test]
    fn order_requests_are_capped() {
        let pair = AnalyticPair::zero(-1.0);
        assert!(matches!(pair.eval(0.0, 0.0, MAX_X, 0), Err(Error::OrderTooHigh { .. })));
        assert!(pair.eval(0.0, 0.0, 5, 1).is_ok());
    }
}
