//! Bäcklund residuals, the permutability superposition and the regularity
//! gate for superposed pairs.
//!
//! In potential variables the transformation between `(w, y)` and
//! `(w', y')` with parameters `(η, μ)` reads
//!
//! ```text
//! w_x + w'_x = 2η − (w−w')²/12 − λ(y−y')²/12
//! w_t + w'_t = (w−w')(w−w')_xx/6 + λ(y−y')(y−y')_xx/6
//!              − (w_x² + w'_x² + w_x w'_x)/3 − λ(y_x² + y'_x² + y_x y'_x)/3
//! y_x + y'_x = 2μ − (w−w')(y−y')/6
//! y_t + y'_t = (w−w')(y−y')_xx/6 + (w−w')_xx(y−y')/6
//!              − (2w_x y_x + 2w'_x y'_x + w_x y'_x + w'_x y_x)/3
//! ```
//!
//! and two descendants `(w₁, y₁)`, `(w₂, y₂)` of a germ `(w₀, y₀)` with
//! parameters `η₁ ≠ η₂` (and `μ = 0`) combine into
//!
//! ```text
//! w₁₂ = w₀ + 24(η₁−η₂)(w₁−w₂)/D,  y₁₂ = y₀ − 24(η₁−η₂)(y₁−y₂)/D,
//! D = (w₁−w₂)² − λ(y₁−y₂)².
//! ```

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{AnalyticPair, Family, PotentialSource};
use crate::jet::{Dd, Jet};
use crate::lattice::Window;

/// Default floor below which `|D|` counts as a pole.
pub const DEFAULT_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BacklundParams {
    pub eta: f64,
    pub mu: f64,
    pub lambda: f64,
}

impl BacklundParams {
    pub fn new(eta: f64, lambda: f64) -> Self {
        BacklundParams { eta, mu: 0.0, lambda }
    }

    pub fn with_mu(self, mu: f64) -> Self {
        BacklundParams { mu, ..self }
    }
}

/// Left-minus-right values of the four transformation equations at `(x, t)`.
pub fn bt_residuals(
    candidate: &AnalyticPair,
    base: &AnalyticPair,
    p: &BacklundParams,
    x: f64,
    t: f64,
) -> Result<[f64; 4]> {
    let (w, y) = candidate.potentials(x, t, 2, 1)?;
    let (wb, yb) = base.potentials(x, t, 2, 1)?;
    let d = |j: &Jet, i: usize, k: usize| j.deriv_dd(i, k);
    let lam = Dd::from(p.lambda);

    let (dw, dy) = (w.value_dd() - wb.value_dd(), y.value_dd() - yb.value_dd());
    let (wx, wbx, yx, ybx) = (d(&w, 1, 0), d(&wb, 1, 0), d(&y, 1, 0), d(&yb, 1, 0));
    let dwxx = d(&w, 2, 0) - d(&wb, 2, 0);
    let dyxx = d(&y, 2, 0) - d(&yb, 2, 0);

    let r15 = wx + wbx - p.eta * 2.0 + dw * dw / 12.0 + lam * dy * dy / 12.0;
    let r16 = d(&w, 0, 1) + d(&wb, 0, 1)
        - (dw * dwxx / 6.0 + lam * dy * dyxx / 6.0
            - (wx * wx + wbx * wbx + wx * wbx) / 3.0
            - lam * (yx * yx + ybx * ybx + yx * ybx) / 3.0);
    let r17 = yx + ybx - p.mu * 2.0 + dw * dy / 6.0;
    let r18 = d(&y, 0, 1) + d(&yb, 0, 1)
        - (dw * dyxx / 6.0 + dwxx * dy / 6.0 - (wx * yx * 2.0 + wbx * ybx * 2.0 + wx * ybx + wbx * yx) / 3.0);
    Ok([r15.into(), r16.into(), r17.into(), r18.into()])
}

/// Inputs of the permutability formula.
#[derive(Clone, Debug)]
pub struct SuperposedPair {
    pub germ: AnalyticPair,
    pub branch1: AnalyticPair,
    pub eta1: f64,
    pub branch2: AnalyticPair,
    pub eta2: f64,
    pub floor: f64,
}

impl SuperposedPair {
    /// Fails with [`Error::LambdaMismatch`] unless all three pairs share `λ`.
    pub fn new(germ: AnalyticPair, branch1: AnalyticPair, eta1: f64, branch2: AnalyticPair, eta2: f64) -> Result<Self> {
        for other in [&branch1, &branch2] {
            if other.lambda() != germ.lambda() {
                return Err(Error::LambdaMismatch(germ.lambda(), other.lambda()));
            }
        }
        Ok(SuperposedPair {
            germ,
            branch1,
            eta1,
            branch2,
            eta2,
            floor: DEFAULT_FLOOR,
        })
    }

    /// Superposition over the trivial germ, taking each branch's parameter
    /// from its family.
    pub fn over_zero(branch1: AnalyticPair, branch2: AnalyticPair) -> Result<Self> {
        let eta = |p: &AnalyticPair| {
            p.family().bt_eta().ok_or_else(|| {
                Error::Config(format!(
                    "{} pair has no Bäcklund parameter over the zero germ",
                    p.family().name()
                ))
            })
        };
        let (e1, e2) = (eta(&branch1)?, eta(&branch2)?);
        SuperposedPair::new(AnalyticPair::zero(branch1.lambda()), branch1, e1, branch2, e2)
    }

    pub fn with_floor(self, floor: f64) -> Self {
        SuperposedPair { floor, ..self }
    }

    pub fn lambda(&self) -> f64 {
        self.germ.lambda()
    }

    /// The same superposition with the two branches interchanged.
    pub fn swapped(&self) -> Self {
        SuperposedPair {
            germ: self.germ.clone(),
            branch1: self.branch2.clone(),
            eta1: self.eta2,
            branch2: self.branch1.clone(),
            eta2: self.eta1,
            floor: self.floor,
        }
    }

    /// `D = (w₁−w₂)² − λ(y₁−y₂)²` from plain values.
    pub fn denominator(&self, x: f64, t: f64) -> Result<f64> {
        let (w1, y1) = self.branch1.values(x, t)?;
        let (w2, y2) = self.branch2.values(x, t)?;
        let (dw, dy) = (w1 - w2, y1 - y2);
        Ok(dw * dw - self.lambda() * dy * dy)
    }
}

/// The pair `(w₁₂, y₁₂)`; fails with [`Error::EqualParameters`] when `η₁ = η₂`.
pub fn superpose(s: &SuperposedPair) -> Result<AnalyticPair> {
    if s.eta1 == s.eta2 {
        return Err(Error::EqualParameters(s.eta1));
    }
    Ok(AnalyticPair::new(s.lambda(), Superposed(s.clone())))
}

struct Superposed(SuperposedPair);

impl fmt::Debug for Superposed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Superposed").field("family", &self.family()).finish()
    }
}

impl Superposed {
    fn singular(&self, x: f64, t: f64, d: f64) -> Result<()> {
        if !(d.abs() >= self.0.floor) {
            return Err(Error::SingularDenominator { x, t, value: d });
        }
        Ok(())
    }
}

impl PotentialSource for Superposed {
    fn potentials(&self, x: f64, t: f64, kx: usize, kt: usize) -> Result<(Jet, Jet)> {
        let s = &self.0;
        let (w0, y0) = s.germ.potentials(x, t, kx, kt)?;
        let (w1, y1) = s.branch1.potentials(x, t, kx, kt)?;
        let (w2, y2) = s.branch2.potentials(x, t, kx, kt)?;
        let (dw, dy) = (w1 - w2, y1 - y2);
        let den = dw.square() - dy.square() * s.lambda();
        self.singular(x, t, den.value())?;
        let k = (Dd::from(s.eta1) - s.eta2) * 24.0;
        Ok((w0 + dw * k / den, y0 - dy * k / den))
    }

    fn values(&self, x: f64, t: f64) -> Result<(f64, f64)> {
        let s = &self.0;
        let (w0, y0) = s.germ.values(x, t)?;
        let (w1, y1) = s.branch1.values(x, t)?;
        let (w2, y2) = s.branch2.values(x, t)?;
        let (dw, dy) = (w1 - w2, y1 - y2);
        let den = dw * dw - s.lambda() * dy * dy;
        self.singular(x, t, den)?;
        let k = 24.0 * (s.eta1 - s.eta2);
        Ok((w0 + k * dw / den, y0 - k * dy / den))
    }

    fn family(&self) -> Family {
        let s = &self.0;
        Family::Superposed {
            germ: Box::new(s.germ.family()),
            branch1: Box::new(s.branch1.family()),
            eta1: s.eta1,
            branch2: Box::new(s.branch2.family()),
            eta2: s.eta2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Regular,
    Singular,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Regular => "REGULAR",
            Verdict::Singular => "SINGULAR",
            Verdict::NotApplicable => "NOT_APPLICABLE",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularityReport {
    pub x: Window,
    pub t: Window,
    pub threshold: f64,
    pub min_abs_d: f64,
    pub worst: (f64, f64),
    /// Both branches are solitons with `𝒞₁/(η₁ρ₁) = 𝒞₂/(η₂ρ₂)` and `η₁ ≠ η₂`.
    pub eq50_holds: bool,
    pub verdict: Verdict,
}

/// Whether two soliton branches satisfy the analytic regularity condition.
pub fn eq50_holds(s: &SuperposedPair) -> bool {
    if s.eta1 == s.eta2 {
        return false;
    }
    match (s.branch1.family(), s.branch2.family()) {
        (Family::Soliton(p1), Family::Soliton(p2)) => {
            let r1 = p1.big_c() / (s.eta1 * p1.rho());
            let r2 = p2.big_c() / (s.eta2 * p2.rho());
            (r1 - r2).abs() <= 1e-12 * r1.abs().max(r2.abs())
        }
        _ => false,
    }
}

/// Minimum of `|D|` over the product lattice `x × t`, evaluated in parallel
/// over time rows and reduced in lattice order.
pub fn regularity_scan(s: &SuperposedPair, x: Window, t: Window, threshold: f64) -> Result<RegularityReport> {
    let rows: Vec<Result<(f64, f64)>> = (0..t.count)
        .into_par_iter()
        .map(|j| {
            let tj = t.point(j);
            let mut best = (f64::INFINITY, f64::NAN);
            for xi in x.points() {
                let d = s.denominator(xi, tj)?.abs();
                if d < best.0 || d.is_nan() {
                    best = (d, xi);
                }
            }
            Ok(best)
        })
        .collect();
    let mut min_abs_d = f64::INFINITY;
    let mut worst = (f64::NAN, f64::NAN);
    for (j, row) in rows.into_iter().enumerate() {
        let (d, xi) = row?;
        if d < min_abs_d || d.is_nan() {
            min_abs_d = d;
            worst = (xi, t.point(j));
        }
    }
    let verdict = if s.eta1 == s.eta2 {
        Verdict::NotApplicable
    } else if min_abs_d > threshold {
        Verdict::Regular
    } else {
        Verdict::Singular
    };
    Ok(RegularityReport {
        x,
        t,
        threshold,
        min_abs_d,
        worst,
        eq50_holds: eq50_holds(s),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_decoupled, make_rational, make_soliton, KdvFactor, RationalParams, SolitonParams};

    fn soliton(eta: f64, rho: f64, c: f64) -> AnalyticPair {
        make_soliton(SolitonParams::new(eta, rho, c, 0.0).unwrap())
    }

    #[test]
    fn zero_pairs_have_identically_zero_residuals() {
        let z = AnalyticPair::zero(-1.0);
        let p = BacklundParams::new(0.0, -1.0);
        for &(x, t) in &[(0.0, 0.0), (3.5, -2.0)] {
            assert_eq!(bt_residuals(&z, &z, &p, x, t).unwrap(), [0.0; 4]);
        }
    }

    #[test]
    fn soliton_descends_from_the_zero_germ() {
        let s = soliton(0.1, 1.5, -0.4);
        let p = BacklundParams::new(0.1, -1.0);
        let z = AnalyticPair::zero(-1.0);
        for &(x, t) in &[(-3.0, 1.0), (0.0, 0.0), (2.2, -4.0)] {
            for r in bt_residuals(&s, &z, &p, x, t).unwrap() {
                assert!(r.abs() < 1e-14, "{r:e}");
            }
        }
        let off = BacklundParams::new(0.2, -1.0);
        let r = bt_residuals(&s, &z, &off, 0.0, 0.0).unwrap();
        assert!((r[0] + 0.2).abs() < 1e-14);
    }

    #[test]
    fn rational_descends_with_zero_parameter() {
        let r = make_rational(RationalParams::new(-1.0, 12.0, 0.0).unwrap());
        let z = AnalyticPair::zero(-1.0);
        let p = BacklundParams::new(0.0, -1.0);
        for r in bt_residuals(&r, &z, &p, 0.7, 3.0).unwrap() {
            assert!(r.abs() < 1e-13);
        }
    }

    #[test]
    fn superpose_rejects_equal_parameters_and_mixed_lambda() {
        let a = soliton(0.1, 1.0, 0.0);
        let s = SuperposedPair::over_zero(a.clone(), a.clone()).unwrap();
        assert!(matches!(superpose(&s), Err(Error::EqualParameters(_))));
        let plus = AnalyticPair::zero(1.0);
        assert!(matches!(
            SuperposedPair::new(AnalyticPair::zero(-1.0), a, 0.1, plus, 0.2),
            Err(Error::LambdaMismatch(..))
        ));
    }

    #[test]
    fn singular_denominator_is_reported_with_location() {
        // at λ = +1 branches with w = y make D = (w₁−w₂)² − (y₁−y₂)² vanish
        let branch = |k| make_decoupled(KdvFactor::soliton(k, 0.0).unwrap(), KdvFactor::Zero);
        let s = SuperposedPair::new(AnalyticPair::zero(1.0), branch(0.3), 0.1, branch(0.5), 0.2).unwrap();
        let p = superpose(&s).unwrap();
        let e = p.values(0.5, 1.0).unwrap_err();
        assert!(matches!(e, Error::SingularDenominator { x, t, .. } if x == 0.5 && t == 1.0));
        assert!(matches!(p.eval(0.5, 1.0, 3, 1), Err(Error::SingularDenominator { .. })));
        let scan = regularity_scan(&s, Window::new(-1.0, 1.0, 5).unwrap(), Window::single(0.0), 1e-12).unwrap();
        assert_eq!(scan.verdict, Verdict::Singular);
    }

    #[test]
    fn balance_condition_detection() {
        let s = SuperposedPair::over_zero(soliton(1.0 / 12.0, 2.0, 1.0), soliton(1.0 / 6.0, 2.0, 2.0)).unwrap();
        assert!(eq50_holds(&s));
        let s = SuperposedPair::over_zero(soliton(1.0 / 12.0, 2.0, 1.0), soliton(1.0 / 6.0, 2.0, 1.0)).unwrap();
        assert!(!eq50_holds(&s));
    }
}
