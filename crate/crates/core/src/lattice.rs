//! Evaluation windows and lattices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `count` equispaced points from `lo` to `hi` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Window {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || count == 0 || (count > 1 && hi < lo) {
            return Err(Error::Config(format!("bad window {lo}:{hi}:{count}")));
        }
        if count == 1 && lo != hi {
            return Err(Error::Config(format!(
                "single-point window needs lo = hi, got {lo}:{hi}"
            )));
        }
        Ok(Window { lo, hi, count })
    }

    /// The window from `lo` to `hi` at spacing `step` (rounded to the nearest
    /// whole number of intervals).
    pub fn with_step(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) {
            return Err(Error::Config(format!("window step must be positive, got {step}")));
        }
        let n = ((hi - lo) / step).round() as usize;
        Window::new(lo, hi, n + 1)
    }

    pub fn single(at: f64) -> Self {
        Window {
            lo: at,
            hi: at,
            count: 1,
        }
    }

    pub fn step(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.hi - self.lo) / (self.count - 1) as f64
        }
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.hi
        } else {
            self.lo + i as f64 * self.step()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.point(i))
    }
}

/// A product lattice of x points and a list of times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub x: Window,
    pub t: Vec<f64>,
}

impl Lattice {
    /// 201 points over `[−40, 40]` at `t ∈ {−16, −8, 0, 8, 16}`.
    pub fn standard() -> Self {
        Lattice {
            x: Window {
                lo: -40.0,
                hi: 40.0,
                count: 201,
            },
            t: vec![-16.0, -8.0, 0.0, 8.0, 16.0],
        }
    }

    pub fn len(&self) -> usize {
        self.x.count * self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All `(x, t)` pairs, time-major.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.t
            .iter()
            .flat_map(|&t| self.x.points().map(move |x| (x, t)))
            .collect()
    }
}
