//! Periodic pseudo-spectral evolution of the coupled system with invariant
//! telemetry.
//!
//! The linear part `−∂ₓ³` is integrated exactly through the factor
//! `exp(i k³ t)`; the nonlinear fluxes `(u² + λv²)/2` and `uv` are stepped by
//! classical RK4 (integrating-factor RK4).

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::diffpoly::{classical_densities, DiffPoly, Field, CLASSICAL_NAMES};
use crate::error::{Error, Result};
use crate::families::AnalyticPair;

/// Advective stability constant of RK4 on the imaginary axis.
pub const CFL_CONSTANT: f64 = 2.8;

/// Default blow-up ceiling on `max |u|`, `max |v|`.
pub const DEFAULT_CEILING: f64 = 1e6;

/// `N` nodes on `[−L/2, L/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub length: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(length: f64, points: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Config(format!("grid length must be positive, got {length}")));
        }
        if points < 16 || !points.is_power_of_two() {
            return Err(Error::Config(format!(
                "grid points must be a power of two ≥ 16, got {points}"
            )));
        }
        Ok(Grid { length, points })
    }

    pub fn dx(&self) -> f64 {
        self.length / self.points as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -0.5 * self.length + i as f64 * self.dx()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.x(i)).collect()
    }

    /// Signed mode index of FFT slot `i`, in `[−N/2, N/2)`.
    pub fn mode(&self, i: usize) -> i64 {
        let n = self.points as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// `2π j / L` for FFT slot `i`.
    pub fn wavenumber(&self, i: usize) -> f64 {
        2.0 * std::f64::consts::PI * self.mode(i) as f64 / self.length
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldState {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub t: f64,
}

impl FieldState {
    pub fn zero(g: &Grid, t: f64) -> Self {
        FieldState {
            u: vec![0.0; g.points],
            v: vec![0.0; g.points],
            t,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.u.iter().chain(&self.v).fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().chain(&self.v).all(|x| x.is_finite())
    }

    /// Largest pointwise difference over both fields.
    pub fn distance(&self, other: &FieldState) -> f64 {
        self.u
            .iter()
            .zip(&other.u)
            .chain(self.v.iter().zip(&other.v))
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// How far the sampled data is from periodic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WrapInfo {
    /// `max |f(L/2) − f(−L/2)|` over `u`, `v`.
    pub mismatch: f64,
    /// `max |f(±L/2)|` over `u`, `v`.
    pub boundary: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sampled {
    pub state: FieldState,
    pub wrap: WrapInfo,
}

/// `(u, v)` of `pair` at the grid nodes at time `t`.
pub fn sample(pair: &AnalyticPair, g: &Grid, t: f64) -> Result<Sampled> {
    let mut u = Vec::with_capacity(g.points);
    let mut v = Vec::with_capacity(g.points);
    for x in g.xs() {
        let (a, b) = pair.fields(x, t)?;
        u.push(a);
        v.push(b);
    }
    let (ul, vl) = pair.fields(-0.5 * g.length, t)?;
    let (ur, vr) = pair.fields(0.5 * g.length, t)?;
    let wrap = WrapInfo {
        mismatch: (ur - ul).abs().max((vr - vl).abs()),
        boundary: [ul, vl, ur, vr].iter().fold(0.0_f64, |m, x| m.max(x.abs())),
    };
    Ok(Sampled {
        state: FieldState { u, v, t },
        wrap,
    })
}

/// FFT plans and wavenumbers for one grid.
#[derive(Clone)]
pub struct Spectral {
    grid: Grid,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    k: Vec<f64>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("grid", &self.grid).finish()
    }
}

impl Spectral {
    pub fn new(grid: Grid) -> Self {
        let mut planner = FftPlanner::new();
        Spectral {
            grid,
            fwd: planner.plan_fft_forward(grid.points),
            inv: planner.plan_fft_inverse(grid.points),
            k: (0..grid.points).map(|i| grid.wavenumber(i)).collect(),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn forward(&self, f: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.fwd.process(&mut buf);
        buf
    }

    pub fn inverse(&self, mut coeffs: Vec<Complex64>) -> Vec<f64> {
        self.inv.process(&mut coeffs);
        let scale = 1.0 / self.grid.points as f64;
        coeffs.into_iter().map(|z| z.re * scale).collect()
    }

    fn is_nyquist(&self, i: usize) -> bool {
        i == self.grid.points / 2
    }

    /// `∂ₓᵐ f` by the multiplier `(ik)ᵐ`; the Nyquist mode is dropped for odd `m`.
    pub fn deriv(&self, f: &[f64], m: u32) -> Vec<f64> {
        if m == 0 {
            return f.to_vec();
        }
        let mut coeffs = self.forward(f);
        for (i, z) in coeffs.iter_mut().enumerate() {
            if m % 2 == 1 && self.is_nyquist(i) {
                *z = Complex64::new(0.0, 0.0);
            } else {
                *z *= Complex64::new(0.0, self.k[i]).powu(m);
            }
        }
        self.inverse(coeffs)
    }

    /// `f(x − s)` by phase rotation.
    pub fn shift(&self, f: &[f64], s: f64) -> Vec<f64> {
        let mut coeffs = self.forward(f);
        for (i, z) in coeffs.iter_mut().enumerate() {
            if self.is_nyquist(i) {
                *z = Complex64::new(z.re * (self.k[i] * s).cos(), 0.0);
            } else {
                *z *= Complex64::from_polar(1.0, -self.k[i] * s);
            }
        }
        self.inverse(coeffs)
    }

    /// Periodic trapezoid rule `dx · Σ f`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        self.grid.dx() * f.iter().sum::<f64>()
    }

    /// The density at every node, with spectral derivatives.
    pub fn density_values(&self, state: &FieldState, density: &DiffPoly, lambda: f64) -> Vec<f64> {
        let ladder = |field: Field, data: &[f64]| -> Vec<Vec<f64>> {
            let top = density.max_order(field).unwrap_or(0);
            (0..=top).map(|m| self.deriv(data, m)).collect()
        };
        let du = ladder(Field::U, &state.u);
        let dv = ladder(Field::V, &state.v);
        (0..self.grid.points)
            .map(|i| {
                density.eval(lambda, |f, k| match f {
                    Field::U => du[k as usize][i],
                    Field::V => dv[k as usize][i],
                })
            })
            .collect()
    }

    /// `∫ density dx` with `λ = lambda`.
    pub fn quadrature(&self, state: &FieldState, density: &DiffPoly, lambda: f64) -> f64 {
        self.integrate(&self.density_values(state, density, lambda))
    }

    /// `∫ |density| dx`, the scale against which drifts are measured.
    fn magnitude(&self, state: &FieldState, density: &DiffPoly, lambda: f64) -> f64 {
        let values: Vec<f64> = self
            .density_values(state, density, lambda)
            .iter()
            .map(|x| x.abs())
            .collect();
        self.integrate(&values)
    }
}

/// `∂ₓᵐ f` on `g`.
pub fn deriv(f: &[f64], g: &Grid, m: u32) -> Vec<f64> {
    Spectral::new(*g).deriv(f, m)
}

/// `∫ density dx` over `state` on `g`.
pub fn quadrature(state: &FieldState, g: &Grid, density: &DiffPoly, lambda: f64) -> f64 {
    Spectral::new(*g).quadrature(state, density, lambda)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolveConfig {
    pub lambda: f64,
    /// Signed step; its sign must agree with `t_end − t₀`.
    pub dt: f64,
    pub t_end: f64,
    pub dealias: bool,
    /// Time between recorded snapshots and invariant samples.
    pub record_every: f64,
    pub ceiling: f64,
    /// Refuse steps above the advective bound instead of attempting them.
    pub enforce_cfl: bool,
}

impl EvolveConfig {
    pub fn new(lambda: f64, dt: f64, t_end: f64) -> Self {
        EvolveConfig {
            lambda,
            dt,
            t_end,
            dealias: true,
            record_every: t_end.abs().max(dt.abs()),
            ceiling: DEFAULT_CEILING,
            enforce_cfl: true,
        }
    }
}

/// `C·dx / max(|u| + √|λ|·|v|)`; infinite for the zero state.
pub fn cfl_bound(state: &FieldState, g: &Grid, lambda: f64) -> f64 {
    let speed = state
        .u
        .iter()
        .zip(&state.v)
        .fold(0.0_f64, |m, (u, v)| m.max(u.abs() + lambda.abs().sqrt() * v.abs()));
    if speed == 0.0 {
        f64::INFINITY
    } else {
        CFL_CONSTANT * g.dx() / speed
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantReport {
    pub names: Vec<String>,
    pub times: Vec<f64>,
    /// `values[i][j]`: invariant `j` at `times[i]`.
    pub values: Vec<Vec<f64>>,
    /// `∫|ρⱼ| dx` at the first record.
    pub scales: Vec<f64>,
    /// `max_i |I_j(t_i) − I_j(t_0)| / scale_j`.
    pub max_drift: Vec<f64>,
}

impl InvariantReport {
    fn new(names: Vec<String>, scales: Vec<f64>) -> Self {
        let n = names.len();
        InvariantReport {
            names,
            times: Vec::new(),
            values: Vec::new(),
            scales,
            max_drift: vec![0.0; n],
        }
    }

    fn push(&mut self, t: f64, row: Vec<f64>) {
        if let Some(first) = self.values.first() {
            for (j, (v, v0)) in row.iter().zip(first).enumerate() {
                let d = if self.scales[j] > 0.0 {
                    (v - v0).abs() / self.scales[j]
                } else {
                    (v - v0).abs()
                };
                self.max_drift[j] = self.max_drift[j].max(d);
            }
        }
        self.times.push(t);
        self.values.push(row);
    }

    pub fn worst_drift(&self) -> f64 {
        self.max_drift.iter().fold(0.0_f64, |m, &d| m.max(d))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlowUpEvent {
    pub time: f64,
    pub max_abs: f64,
    pub ceiling: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evolution {
    pub snapshots: Vec<FieldState>,
    pub invariants: InvariantReport,
    pub steps: usize,
    pub cfl_bound: f64,
    pub blow_up: Option<BlowUpEvent>,
}

impl Evolution {
    pub fn last(&self) -> &FieldState {
        self.snapshots.last().expect("initial state is always recorded")
    }
}

struct Stepper<'a> {
    sp: &'a Spectral,
    lambda: f64,
    /// `−ik`, dealiased and Nyquist-free.
    flux_k: Vec<Complex64>,
    half: Vec<Complex64>,
    full: Vec<Complex64>,
}

impl<'a> Stepper<'a> {
    fn new(sp: &'a Spectral, cfg: &EvolveConfig) -> Self {
        let g = sp.grid;
        let cutoff = g.points as i64 / 3;
        let flux_k = (0..g.points)
            .map(|i| {
                if sp.is_nyquist(i) || (cfg.dealias && g.mode(i).abs() > cutoff) {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.0, -sp.k[i])
                }
            })
            .collect();
        let phase = |h: f64| -> Vec<Complex64> {
            sp.k.iter()
                .map(|&k| Complex64::from_polar(1.0, k * k * k * h))
                .collect()
        };
        Stepper {
            sp,
            lambda: cfg.lambda,
            flux_k,
            half: phase(0.5 * cfg.dt),
            full: phase(cfg.dt),
        }
    }

    /// Nonlinear right-hand side in Fourier space, plus the physical max.
    fn rhs(&self, uh: &[Complex64], vh: &[Complex64], dt: f64) -> (Vec<Complex64>, Vec<Complex64>, f64) {
        let u = self.sp.inverse(uh.to_vec());
        let v = self.sp.inverse(vh.to_vec());
        let max = u.iter().chain(&v).fold(
            0.0_f64,
            |m, x| if x.is_finite() { m.max(x.abs()) } else { f64::INFINITY },
        );
        let fu: Vec<f64> = u
            .iter()
            .zip(&v)
            .map(|(a, b)| 0.5 * (a * a + self.lambda * b * b))
            .collect();
        let fv: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a * b).collect();
        let fuh = self.sp.forward(&fu);
        let fvh = self.sp.forward(&fv);
        let nu = fuh.iter().zip(&self.flux_k).map(|(f, k)| f * k * dt).collect();
        let nv = fvh.iter().zip(&self.flux_k).map(|(f, k)| f * k * dt).collect();
        (nu, nv, max)
    }

    /// One step; returns the max of the fields at the start of the step.
    fn step(&self, uh: &mut [Complex64], vh: &mut [Complex64], dt: f64) -> f64 {
        let (e, e2) = (&self.half, &self.full);
        let comb = |a: &[Complex64], b: &[Complex64], w: f64, m: &[Complex64]| -> Vec<Complex64> {
            a.iter().zip(b).zip(m).map(|((x, y), mm)| mm * (x + y * w)).collect()
        };
        let (k1u, k1v, max) = self.rhs(uh, vh, dt);
        let (k2u, k2v, _) = self.rhs(&comb(uh, &k1u, 0.5, e), &comb(vh, &k1v, 0.5, e), dt);
        let eu: Vec<Complex64> = uh.iter().zip(e).map(|(x, m)| x * m).collect();
        let ev: Vec<Complex64> = vh.iter().zip(e).map(|(x, m)| x * m).collect();
        let (k3u, k3v, _) = self.rhs(
            &eu.iter().zip(&k2u).map(|(a, b)| a + b * 0.5).collect::<Vec<_>>(),
            &ev.iter().zip(&k2v).map(|(a, b)| a + b * 0.5).collect::<Vec<_>>(),
            dt,
        );
        let e2u: Vec<Complex64> = uh.iter().zip(e2).map(|(x, m)| x * m).collect();
        let e2v: Vec<Complex64> = vh.iter().zip(e2).map(|(x, m)| x * m).collect();
        let (k4u, k4v, _) = self.rhs(
            &e2u.iter()
                .zip(&k3u)
                .zip(e)
                .map(|((a, b), m)| a + b * m)
                .collect::<Vec<_>>(),
            &e2v.iter()
                .zip(&k3v)
                .zip(e)
                .map(|((a, b), m)| a + b * m)
                .collect::<Vec<_>>(),
            dt,
        );
        for i in 0..uh.len() {
            uh[i] = e2u[i] + (e2[i] * k1u[i] + 2.0 * e[i] * (k2u[i] + k3u[i]) + k4u[i]) / 6.0;
            vh[i] = e2v[i] + (e2[i] * k1v[i] + 2.0 * e[i] * (k2v[i] + k3v[i]) + k4v[i]) / 6.0;
        }
        max
    }
}

fn step_count(span: f64, dt: f64, what: &str) -> Result<usize> {
    let n = span / dt;
    let r = n.round();
    if !(r >= 0.0) || (n - r).abs() > 1e-6 * r.max(1.0) {
        return Err(Error::Config(format!(
            "{what} {span} is not a whole number of steps dt = {dt}"
        )));
    }
    Ok(r as usize)
}

/// Advances `initial` to `cfg.t_end`, recording snapshots and the six
/// classical invariants every `cfg.record_every`. A ceiling crossing stops the
/// run and is reported in [`Evolution::blow_up`]; configuration problems are
/// errors.
pub fn run(initial: &FieldState, g: &Grid, cfg: &EvolveConfig) -> Result<Evolution> {
    if initial.u.len() != g.points || initial.v.len() != g.points {
        return Err(Error::Config(format!(
            "state has {} nodes, grid has {}",
            initial.u.len(),
            g.points
        )));
    }
    if !initial.is_finite() {
        return Err(Error::Config("initial state is not finite".into()));
    }
    if !(cfg.dt.is_finite() && cfg.dt != 0.0 && cfg.lambda.is_finite() && cfg.t_end.is_finite()) {
        return Err(Error::Config(format!(
            "bad evolution parameters dt = {}, tEnd = {}",
            cfg.dt, cfg.t_end
        )));
    }
    if !(cfg.ceiling > 0.0) {
        return Err(Error::Config(format!("ceiling must be positive, got {}", cfg.ceiling)));
    }
    let steps = step_count(cfg.t_end - initial.t, cfg.dt, "span")?;
    let cadence = if cfg.record_every > 0.0 {
        step_count(cfg.record_every, cfg.dt.abs(), "record interval")?.max(1)
    } else {
        return Err(Error::Config(format!(
            "record interval must be positive, got {}",
            cfg.record_every
        )));
    };
    let bound = cfl_bound(initial, g, cfg.lambda);
    if cfg.enforce_cfl && cfg.dt.abs() > bound {
        return Err(Error::StepTooLarge {
            dt: cfg.dt.abs(),
            bound,
        });
    }

    let sp = Spectral::new(*g);
    let stepper = Stepper::new(&sp, cfg);
    let densities = classical_densities();
    let names: Vec<String> = CLASSICAL_NAMES.iter().map(|s| s.to_string()).collect();
    let scales = densities.iter().map(|d| sp.magnitude(initial, d, cfg.lambda)).collect();
    let mut report = InvariantReport::new(names, scales);
    let record = |state: &FieldState, report: &mut InvariantReport| {
        let row = densities.iter().map(|d| sp.quadrature(state, d, cfg.lambda)).collect();
        report.push(state.t, row);
    };

    let mut snapshots = vec![initial.clone()];
    record(initial, &mut report);
    let mut uh = sp.forward(&initial.u);
    let mut vh = sp.forward(&initial.v);
    let mut blow_up = None;
    let t0 = initial.t;
    for n in 1..=steps {
        let max = stepper.step(&mut uh, &mut vh, cfg.dt);
        let t_prev = t0 + (n - 1) as f64 * cfg.dt;
        if !(max <= cfg.ceiling) {
            blow_up = Some(BlowUpEvent {
                time: t_prev,
                max_abs: max,
                ceiling: cfg.ceiling,
            });
            break;
        }
        if n % cadence == 0 || n == steps {
            let state = FieldState {
                u: sp.inverse(uh.clone()),
                v: sp.inverse(vh.clone()),
                t: if n == steps { cfg.t_end } else { t0 + n as f64 * cfg.dt },
            };
            let max = state.max_abs();
            if !(max <= cfg.ceiling) {
                blow_up = Some(BlowUpEvent {
                    time: state.t,
                    max_abs: max,
                    ceiling: cfg.ceiling,
                });
                break;
            }
            record(&state, &mut report);
            snapshots.push(state);
        }
    }
    Ok(Evolution {
        snapshots,
        invariants: report,
        steps,
        cfl_bound: bound,
        blow_up,
    })
}

/// [`run`], with a ceiling crossing turned into [`Error::BlowUp`].
pub fn evolve(initial: &FieldState, g: &Grid, cfg: &EvolveConfig) -> Result<Evolution> {
    let e = run(initial, g, cfg)?;
    match e.blow_up {
        Some(b) => Err(Error::BlowUp {
            time: b.time,
            max_abs: b.max_abs,
            ceiling: b.ceiling,
        }),
        None => Ok(e),
    }
}

/// `U = u + iv = −A/(x + iα)²` at `λ = −1`: a complex pole datum whose
/// evolution leaves the real line in finite time for large enough `A`.
pub fn pole_datum(g: &Grid, amplitude: f64, alpha: f64) -> FieldState {
    let (u, v) = g
        .xs()
        .into_iter()
        .map(|x| {
            let z = Complex64::new(x, alpha);
            let w = -amplitude / (z * z);
            (w.re, w.im)
        })
        .unzip();
    FieldState { u, v, t: 0.0 }
}
