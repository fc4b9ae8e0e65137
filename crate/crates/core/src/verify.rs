//! Residuals of the governing equations, symmetry transforms and the λ = ±1
//! structural reductions.
//!
//! Pointwise residuals are assembled from jet derivatives in double-double
//! arithmetic and rounded once at the end. A central-difference oracle is
//! available through [`Derivatives::FiniteDifference`] for cross-validation.

use std::fmt;

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::backlund::{bt_residuals, BacklundParams};
use crate::error::{Error, Result};
use crate::families::{AnalyticPair, Family, PotentialSource};
use crate::jet::{Dd, Jet};
use crate::lattice::Lattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Equation {
    Eq1,
    Eq2,
    Q1,
    Q2,
    #[serde(rename = "BT15")]
    Bt15,
    #[serde(rename = "BT16")]
    Bt16,
    #[serde(rename = "BT17")]
    Bt17,
    #[serde(rename = "BT18")]
    Bt18,
    #[serde(rename = "KdV+")]
    KdvPlus,
    #[serde(rename = "KdV-")]
    KdvMinus,
    #[serde(rename = "ComplexKdV")]
    ComplexKdv,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equation::Eq1 => "Eq1",
            Equation::Eq2 => "Eq2",
            Equation::Q1 => "Q1",
            Equation::Q2 => "Q2",
            Equation::Bt15 => "BT15",
            Equation::Bt16 => "BT16",
            Equation::Bt17 => "BT17",
            Equation::Bt18 => "BT18",
            Equation::KdvPlus => "KdV+",
            Equation::KdvMinus => "KdV-",
            Equation::ComplexKdv => "ComplexKdV",
        })
    }
}

/// Summary of one residual over a lattice.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub tag: Equation,
    pub lattice: Lattice,
    pub max_abs: f64,
    pub rms: f64,
    pub worst: (f64, f64),
}

impl ResidualReport {
    /// Max and rms accumulated in lattice order; NaN counts as worst.
    pub fn from_samples(tag: Equation, lattice: &Lattice, samples: &[((f64, f64), f64)]) -> Self {
        let mut max_abs = 0.0f64;
        let mut worst = samples.first().map(|s| s.0).unwrap_or((f64::NAN, f64::NAN));
        let mut sum_sq = 0.0;
        for &(pt, r) in samples {
            let a = r.abs();
            if a > max_abs || a.is_nan() && !max_abs.is_nan() {
                max_abs = a;
                worst = pt;
            }
            sum_sq += r * r;
        }
        let rms = if samples.is_empty() {
            0.0
        } else {
            (sum_sq / samples.len() as f64).sqrt()
        };
        ResidualReport {
            tag,
            lattice: lattice.clone(),
            max_abs,
            rms,
            worst,
        }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_abs < tol
    }
}

/// Where residual derivatives come from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Derivatives {
    #[default]
    Jet,
    /// Central differences of plain field values, Richardson-extrapolated.
    FiniteDifference,
}

/// Evaluate `f` at every lattice point in parallel, keeping lattice order.
fn sample<const N: usize>(
    lattice: &Lattice,
    f: impl Fn(f64, f64) -> Result<[f64; N]> + Sync,
) -> Result<Vec<((f64, f64), [f64; N])>> {
    lattice
        .points()
        .into_par_iter()
        .map(|(x, t)| f(x, t).map(|r| ((x, t), r)))
        .collect()
}

fn reports<const N: usize>(
    tags: [Equation; N],
    lattice: &Lattice,
    samples: &[((f64, f64), [f64; N])],
) -> [ResidualReport; N] {
    std::array::from_fn(|k| {
        let col: Vec<_> = samples.iter().map(|(p, r)| (*p, r[k])).collect();
        ResidualReport::from_samples(tags[k], lattice, &col)
    })
}

/// `u_t + u u_x + u_xxx + λ v v_x` and `v_t + u_x v + v_x u + v_xxx` at one
/// point, in double-double.
pub fn system_residual_at(pair: &AnalyticPair, x: f64, t: f64, lambda: f64) -> Result<[Dd; 2]> {
    let j = pair.eval(x, t, 3, 1)?;
    let (u, v) = (&j.u, &j.v);
    let d = |f: &Jet, i, k| f.deriv_dd(i, k);
    let (u0, v0) = (u.value_dd(), v.value_dd());
    let eq1 = d(u, 0, 1) + (u0 * d(u, 1, 0) + v0 * d(v, 1, 0) * lambda) + d(u, 3, 0);
    let eq2 = d(v, 0, 1) + (d(u, 1, 0) * v0 + d(v, 1, 0) * u0) + d(v, 3, 0);
    Ok([eq1, eq2])
}

/// Sum of the absolute values of the terms entering each system residual.
pub fn system_term_scale(pair: &AnalyticPair, x: f64, t: f64, lambda: f64) -> Result<[f64; 2]> {
    let j = pair.eval(x, t, 3, 1)?;
    let (u, v) = (&j.u, &j.v);
    let d = |f: &Jet, i, k| f.deriv(i, k).abs();
    let (u0, v0) = (u.value().abs(), v.value().abs());
    Ok([
        d(u, 0, 1) + u0 * d(u, 1, 0) + lambda.abs() * v0 * d(v, 1, 0) + d(u, 3, 0),
        d(v, 0, 1) + d(u, 1, 0) * v0 + d(v, 1, 0) * u0 + d(v, 3, 0),
    ])
}

/// Central-difference estimate of the system residual at one point.
pub fn fd_system_residual_at(pair: &AnalyticPair, x: f64, t: f64, lambda: f64) -> Result<[f64; 2]> {
    let f = |x: f64, t: f64| pair.fields(x, t);
    let first = |g: &dyn Fn(f64) -> Result<(f64, f64)>, h: f64| -> Result<(f64, f64)> {
        let c = |h: f64| -> Result<(f64, f64)> {
            let (p, m) = (g(h)?, g(-h)?);
            Ok(((p.0 - m.0) / (2.0 * h), (p.1 - m.1) / (2.0 * h)))
        };
        let (a, b) = (c(h)?, c(h / 2.0)?);
        Ok(((4.0 * b.0 - a.0) / 3.0, (4.0 * b.1 - a.1) / 3.0))
    };
    let third = |h: f64| -> Result<(f64, f64)> {
        let c = |h: f64| -> Result<(f64, f64)> {
            let (p2, p1, m1, m2) = (f(x + 2.0 * h, t)?, f(x + h, t)?, f(x - h, t)?, f(x - 2.0 * h, t)?);
            let s = 2.0 * h * h * h;
            Ok((
                (p2.0 - 2.0 * p1.0 + 2.0 * m1.0 - m2.0) / s,
                (p2.1 - 2.0 * p1.1 + 2.0 * m1.1 - m2.1) / s,
            ))
        };
        let (a, b) = (c(h)?, c(h / 2.0)?);
        Ok(((4.0 * b.0 - a.0) / 3.0, (4.0 * b.1 - a.1) / 3.0))
    };
    let (u, v) = f(x, t)?;
    let (ux, vx) = first(&|h| f(x + h, t), 1e-4)?;
    let (ut, vt) = first(&|h| f(x, t + h), 1e-4)?;
    let (uxxx, vxxx) = third(1e-2)?;
    Ok([ut + u * ux + uxxx + lambda * v * vx, vt + ux * v + vx * u + vxxx])
}

/// System residuals over a lattice, tagged `Eq1`, `Eq2`.
pub fn system_residual(pair: &AnalyticPair, lattice: &Lattice, lambda: f64) -> Result<[ResidualReport; 2]> {
    system_residual_with(pair, lattice, lambda, Derivatives::Jet)
}

pub fn system_residual_with(
    pair: &AnalyticPair,
    lattice: &Lattice,
    lambda: f64,
    how: Derivatives,
) -> Result<[ResidualReport; 2]> {
    let samples = sample(lattice, |x, t| match how {
        Derivatives::Jet => system_residual_at(pair, x, t, lambda).map(|r| r.map(f64::from)),
        Derivatives::FiniteDifference => fd_system_residual_at(pair, x, t, lambda),
    })?;
    Ok(reports([Equation::Eq1, Equation::Eq2], lattice, &samples))
}

/// `Q₁ = w_t + w_x²/2 + w_xxx + (λ/2)y_x²` and `Q₂ = y_t + w_x y_x + y_xxx`.
pub fn potential_residual_at(pair: &AnalyticPair, x: f64, t: f64, lambda: f64) -> Result<[Dd; 2]> {
    let (w, y) = pair.potentials(x, t, 3, 1)?;
    let d = |f: &Jet, i, k| f.deriv_dd(i, k);
    let (wx, yx) = (d(&w, 1, 0), d(&y, 1, 0));
    let q1 = d(&w, 0, 1) + wx * wx / 2.0 + d(&w, 3, 0) + yx * yx * lambda / 2.0;
    let q2 = d(&y, 0, 1) + wx * yx + d(&y, 3, 0);
    Ok([q1, q2])
}

pub fn potential_residual(pair: &AnalyticPair, lattice: &Lattice, lambda: f64) -> Result<[ResidualReport; 2]> {
    let samples = sample(lattice, |x, t| {
        potential_residual_at(pair, x, t, lambda).map(|r| r.map(f64::from))
    })?;
    Ok(reports([Equation::Q1, Equation::Q2], lattice, &samples))
}

/// The four transformation residuals of `candidate` against `base`.
pub fn bt_report(
    candidate: &AnalyticPair,
    base: &AnalyticPair,
    p: &BacklundParams,
    lattice: &Lattice,
) -> Result<[ResidualReport; 4]> {
    let samples = sample(lattice, |x, t| bt_residuals(candidate, base, p, x, t))?;
    Ok(reports(
        [Equation::Bt15, Equation::Bt16, Equation::Bt17, Equation::Bt18],
        lattice,
        &samples,
    ))
}

fn require_lambda(pair: &AnalyticPair, expected: f64) -> Result<()> {
    if pair.lambda() != expected {
        return Err(Error::WrongLambda {
            expected,
            found: pair.lambda(),
        });
    }
    Ok(())
}

/// `U_t + U U_x + U_xxx` for `U = u + iv`, in complex double-double.
pub fn complex_residual_at(pair: &AnalyticPair, x: f64, t: f64) -> Result<Complex<Dd>> {
    require_lambda(pair, -1.0)?;
    let j = pair.eval(x, t, 3, 1)?;
    let z = |i, k| Complex::new(j.u.deriv_dd(i, k), j.v.deriv_dd(i, k));
    Ok(z(0, 1) + z(0, 0) * z(1, 0) + z(3, 0))
}

/// Modulus of the complex KdV residual; requires `λ = −1`.
pub fn complex_reduction(pair: &AnalyticPair, lattice: &Lattice) -> Result<ResidualReport> {
    require_lambda(pair, -1.0)?;
    let samples = sample(lattice, |x, t| {
        let r = complex_residual_at(pair, x, t)?;
        Ok([f64::from(r.re).hypot(f64::from(r.im))])
    })?;
    let [r] = reports([Equation::ComplexKdv], lattice, &samples);
    Ok(r)
}

/// Scalar KdV residuals of `z± = u ± v`; requires `λ = +1`.
pub fn decoupling_residual_at(pair: &AnalyticPair, x: f64, t: f64) -> Result<[Dd; 2]> {
    require_lambda(pair, 1.0)?;
    let j = pair.eval(x, t, 3, 1)?;
    let kdv = |z: Jet| z.deriv_dd(0, 1) + z.value_dd() * z.deriv_dd(1, 0) + z.deriv_dd(3, 0);
    Ok([kdv(j.u + j.v), kdv(j.u - j.v)])
}

pub fn decoupling_residual(pair: &AnalyticPair, lattice: &Lattice) -> Result<[ResidualReport; 2]> {
    require_lambda(pair, 1.0)?;
    let samples = sample(lattice, |x, t| {
        decoupling_residual_at(pair, x, t).map(|r| r.map(f64::from))
    })?;
    Ok(reports([Equation::KdvPlus, Equation::KdvMinus], lattice, &samples))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Boost by speed `c`: `û(X, T) = u(X − cT, T) + c`, `v̂(X, T) = v(X − cT, T)`,
/// with potentials `ŵ = w(X − cT, T) + cX − c²T/2`, `ŷ = y(X − cT, T)`.
pub fn galileo(pair: &AnalyticPair, c: f64) -> AnalyticPair {
    AnalyticPair::new(pair.lambda(), Galileo { inner: pair.clone(), c })
}

#[derive(Debug)]
struct Galileo {
    inner: AnalyticPair,
    c: f64,
}

impl PotentialSource for Galileo {
    fn potentials(&self, x: f64, t: f64, kx: usize, kt: usize) -> Result<(Jet, Jet)> {
        let (w, y) = self.inner.potentials(x - self.c * t, t, kx + kt, kt)?;
        let c = Dd::from(self.c);
        // ∂X^i ∂T^j f(X − cT, T) = Σₘ C(j, m) (−c)^(j−m) ∂x^(i+j−m) ∂t^m f
        let boost = |f: &Jet| {
            Jet::from_derivatives_dd(kx, kt, |i, j| {
                (0..=j).fold(Dd::ZERO, |acc, m| {
                    let mut w = Dd::from(binomial(j, m));
                    for _ in m..j {
                        w = -w * c;
                    }
                    acc + w * f.deriv_dd(i + j - m, m)
                })
            })
        };
        let drift = Jet::affine(c * x - c * c * t / 2.0, c, -c * c / 2.0, kx, kt);
        Ok((boost(&w) + drift, boost(&y)))
    }

    fn values(&self, x: f64, t: f64) -> Result<(f64, f64)> {
        let (w, y) = self.inner.values(x - self.c * t, t)?;
        Ok((w + self.c * x - 0.5 * self.c * self.c * t, y))
    }

    fn family(&self) -> Family {
        Family::Galileo {
            inner: Box::new(self.inner.family()),
            c: self.c,
        }
    }
}

/// Anisotropic rescaling `x → bx`, `t → b³t`, `u → b⁻²u`, `v → b⁻²v`:
/// `ŵ(X, T) = b⁻¹ w(X/b, T/b³)`.
pub fn rescale(pair: &AnalyticPair, b: f64) -> Result<AnalyticPair> {
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::domain("rescale", "b>0", format!("b = {b}")));
    }
    Ok(AnalyticPair::new(pair.lambda(), Rescaled { inner: pair.clone(), b }))
}

#[derive(Debug)]
struct Rescaled {
    inner: AnalyticPair,
    b: f64,
}

impl PotentialSource for Rescaled {
    fn potentials(&self, x: f64, t: f64, kx: usize, kt: usize) -> Result<(Jet, Jet)> {
        let b = self.b;
        let (w, y) = self.inner.potentials(x / b, t / (b * b * b), kx, kt)?;
        let inv = Dd::ONE / b;
        let pow = |n: usize| (0..n).fold(Dd::ONE, |acc, _| acc * inv);
        let scaled = |f: &Jet| Jet::from_derivatives_dd(kx, kt, |i, j| f.deriv_dd(i, j) * pow(1 + i + 3 * j));
        Ok((scaled(&w), scaled(&y)))
    }

    fn values(&self, x: f64, t: f64) -> Result<(f64, f64)> {
        let b = self.b;
        let (w, y) = self.inner.values(x / b, t / (b * b * b))?;
        Ok((w / b, y / b))
    }

    fn family(&self) -> Family {
        Family::Rescaled {
            inner: Box::new(self.inner.family()),
            b: self.b,
        }
    }
}
