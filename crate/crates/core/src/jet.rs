//! Truncated bivariate Taylor arithmetic in `(x, t)`.
//!
//! A [`Jet`] carries the normalized Taylor coefficients
//! `c[i][j] = ∂ₓⁱ∂ₜʲ f / (i! j!)` of a smooth function at a point, for
//! `i ≤ kx`, `j ≤ kt`. Coefficients are double-double numbers ([`Dd`]), and
//! sums, products, quotients and compositions are exact on truncated series,
//! so every derivative recovered from a jet is the derivative of the
//! represented closed form, not a numerical approximation.
//!
//! Elementary functions take their base value from `f64` libm at the
//! expansion point and treat it as exact. The jet is then the exact expansion
//! at a point displaced by at most a rounding error, and the identities tying
//! the function to its derivatives (`cosh² − sinh² = 1`, `tanh' = 1 − tanh²`)
//! hold to double-double precision.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

pub use crate::dd::Dd;

/// Largest supported x-order plus one.
pub const MAX_X: usize = 12;
/// Largest supported t-order plus one.
pub const MAX_T: usize = 3;

const DD_ZERO: Dd = Dd::ZERO;

#[derive(Clone, Copy, PartialEq)]
pub struct Jet {
    kx: usize,
    kt: usize,
    c: [[Dd; MAX_T]; MAX_X],
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn check_orders(kx: usize, kt: usize) {
    assert!(
        kx < MAX_X && kt < MAX_T,
        "jet orders ({kx}, {kt}) exceed capacity ({}, {})",
        MAX_X - 1,
        MAX_T - 1
    );
}

impl Jet {
    pub fn zero(kx: usize, kt: usize) -> Self {
        check_orders(kx, kt);
        Jet {
            kx,
            kt,
            c: [[DD_ZERO; MAX_T]; MAX_X],
        }
    }

    pub fn constant(value: impl Into<Dd>, kx: usize, kt: usize) -> Self {
        let mut j = Jet::zero(kx, kt);
        j.c[0][0] = value.into();
        j
    }

    /// The affine function `value + sx·(x − x₀) + st·(t − t₀)`.
    pub fn affine(value: impl Into<Dd>, sx: impl Into<Dd>, st: impl Into<Dd>, kx: usize, kt: usize) -> Self {
        let mut j = Jet::constant(value, kx, kt);
        if kx >= 1 {
            j.c[1][0] = sx.into();
        }
        if kt >= 1 {
            j.c[0][1] = st.into();
        }
        j
    }

    /// Build a jet from mixed partial derivatives `d(i, j) = ∂ₓⁱ∂ₜʲ f`.
    pub fn from_derivatives(kx: usize, kt: usize, mut d: impl FnMut(usize, usize) -> f64) -> Self {
        let mut j = Jet::zero(kx, kt);
        for i in 0..=kx {
            for k in 0..=kt {
                j.c[i][k] = Dd::from(d(i, k)) / (factorial(i) * factorial(k));
            }
        }
        j
    }

    pub fn from_derivatives_dd(kx: usize, kt: usize, mut d: impl FnMut(usize, usize) -> Dd) -> Self {
        let mut j = Jet::zero(kx, kt);
        for i in 0..=kx {
            for k in 0..=kt {
                j.c[i][k] = d(i, k) / (factorial(i) * factorial(k));
            }
        }
        j
    }

    pub fn kx(&self) -> usize {
        self.kx
    }

    pub fn kt(&self) -> usize {
        self.kt
    }

    pub fn value(&self) -> f64 {
        self.c[0][0].into()
    }

    pub fn value_dd(&self) -> Dd {
        self.c[0][0]
    }

    /// Normalized Taylor coefficient of `dxⁱ dtʲ`.
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        self.coeff_dd(i, j).into()
    }

    pub fn coeff_dd(&self, i: usize, j: usize) -> Dd {
        if i > self.kx || j > self.kt {
            DD_ZERO
        } else {
            self.c[i][j]
        }
    }

    /// The mixed partial derivative `∂ₓⁱ∂ₜʲ f`.
    pub fn deriv(&self, i: usize, j: usize) -> f64 {
        self.deriv_dd(i, j).into()
    }

    pub fn deriv_dd(&self, i: usize, j: usize) -> Dd {
        assert!(
            i <= self.kx && j <= self.kt,
            "derivative ({i}, {j}) not carried by a jet of order ({}, {})",
            self.kx,
            self.kt
        );
        self.c[i][j] * (factorial(i) * factorial(j))
    }

    pub fn truncate(&self, kx: usize, kt: usize) -> Self {
        let kx = kx.min(self.kx);
        let kt = kt.min(self.kt);
        let mut j = Jet::zero(kx, kt);
        for i in 0..=kx {
            for k in 0..=kt {
                j.c[i][k] = self.c[i][k];
            }
        }
        j
    }

    /// `∂ₓ` of the jet; the x-order drops by one.
    pub fn d_x(&self) -> Self {
        assert!(self.kx >= 1, "cannot differentiate an order-0 jet in x");
        let mut j = Jet::zero(self.kx - 1, self.kt);
        for i in 0..self.kx {
            for k in 0..=self.kt {
                j.c[i][k] = self.c[i + 1][k] * (i + 1) as f64;
            }
        }
        j
    }

    /// `∂ₜ` of the jet; the t-order drops by one.
    pub fn d_t(&self) -> Self {
        assert!(self.kt >= 1, "cannot differentiate an order-0 jet in t");
        let mut j = Jet::zero(self.kx, self.kt - 1);
        for i in 0..=self.kx {
            for k in 0..self.kt {
                j.c[i][k] = self.c[i][k + 1] * (k + 1) as f64;
            }
        }
        j
    }

    pub fn scale(&self, s: impl Into<Dd>) -> Self {
        let s = s.into();
        let mut j = *self;
        j.for_each_mut(|c| *c *= s);
        j
    }

    fn for_each_mut(&mut self, mut f: impl FnMut(&mut Dd)) {
        for i in 0..=self.kx {
            for k in 0..=self.kt {
                f(&mut self.c[i][k]);
            }
        }
    }

    fn common(&self, other: &Jet) -> (usize, usize) {
        (self.kx.min(other.kx), self.kt.min(other.kt))
    }

    pub fn square(&self) -> Self {
        *self * *self
    }

    pub fn recip(&self) -> Self {
        Jet::constant(1.0, self.kx, self.kt) / *self
    }

    /// Composition `f(g)` given the derivatives `f⁽ⁿ⁾(g₀)` for `n = 0, 1, ...`.
    ///
    /// `derivs` must hold at least `kx + kt + 1` entries; the nilpotent part of
    /// `g` vanishes beyond that power.
    pub fn compose(&self, derivs: &[Dd]) -> Self {
        let depth = self.kx + self.kt;
        assert!(
            derivs.len() > depth,
            "composition needs {} derivatives, got {}",
            depth + 1,
            derivs.len()
        );
        let mut h = *self;
        h.c[0][0] = DD_ZERO;
        // Horner in the nilpotent part: Σ f⁽ⁿ⁾/n! hⁿ
        let mut acc = Jet::constant(derivs[depth] / factorial(depth), self.kx, self.kt);
        for n in (0..depth).rev() {
            acc = acc * h;
            acc.c[0][0] += derivs[n] / factorial(n);
        }
        acc
    }

    fn depth(&self) -> usize {
        self.kx + self.kt + 1
    }

    pub fn exp(&self) -> Self {
        let e = Dd::from(self.value().exp());
        self.compose(&vec![e; self.depth()])
    }

    /// `(sinh g, cosh g − 1, cosh g)` from a single `expm1`, so the values are
    /// accurate near `g = 0` and mutually consistent.
    fn hyperbolic(&self) -> (Dd, Dd, Dd) {
        let em1 = Dd::from(self.value().exp_m1());
        let e = em1 + 1.0;
        let sinh = em1 * (em1 + 2.0) / (e * 2.0);
        let cosh_m1 = em1 * em1 / (e * 2.0);
        (sinh, cosh_m1, cosh_m1 + 1.0)
    }

    pub fn sinh(&self) -> Self {
        let (s, _, c) = self.hyperbolic();
        self.compose(&alternating(s, c, self.depth()))
    }

    pub fn cosh(&self) -> Self {
        let (s, _, c) = self.hyperbolic();
        self.compose(&alternating(c, s, self.depth()))
    }

    /// `cosh(g) − 1` without cancellation near `g = 0`.
    pub fn cosh_m1(&self) -> Self {
        let (s, cm1, c) = self.hyperbolic();
        let mut d = alternating(c, s, self.depth());
        d[0] = cm1;
        self.compose(&d)
    }

    /// `(sin g, cos g)`, with the base pair projected onto the unit circle.
    pub fn sin_cos(&self) -> (Self, Self) {
        let g = self.value();
        let (s, c) = (Dd::from(g.sin()), Dd::from(g.cos()));
        let r = (s * s + c * c).sqrt();
        let (s, c) = (s / r, c / r);
        let n = self.depth();
        (
            self.compose(&cyclic([s, c, -s, -c], n)),
            self.compose(&cyclic([c, -s, -c, s], n)),
        )
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    pub fn tanh(&self) -> Self {
        // dⁿ/dgⁿ tanh g = Pₙ(T) with P₀ = T, Pₙ₊₁ = Pₙ'(T)(1 − T²)
        let tv = Dd::from(self.value().tanh());
        let n = self.depth();
        let mut poly = vec![0.0, 1.0];
        let mut derivs = Vec::with_capacity(n);
        for _ in 0..n {
            derivs.push(poly.iter().rev().fold(DD_ZERO, |acc, &c| acc * tv + c));
            let dp: Vec<f64> = poly.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
            let mut next = vec![0.0; dp.len() + 2];
            for (k, c) in dp.iter().enumerate() {
                next[k] += c;
                next[k + 2] -= c;
            }
            poly = next;
        }
        self.compose(&derivs)
    }
}

fn alternating(even: Dd, odd: Dd, n: usize) -> Vec<Dd> {
    (0..n).map(|k| if k % 2 == 0 { even } else { odd }).collect()
}

fn cyclic(period: [Dd; 4], n: usize) -> Vec<Dd> {
    (0..n).map(|k| period[k % 4]).collect()
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet(kx={}, kt={}) [", self.kx, self.kt)?;
        for k in 0..=self.kt {
            if k > 0 {
                write!(f, "; ")?;
            }
            for i in 0..=self.kx {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:e}", self.c[i][k].hi())?;
            }
        }
        write!(f, "]")
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let (kx, kt) = self.common(&rhs);
        let mut j = Jet::zero(kx, kt);
        for i in 0..=kx {
            for k in 0..=kt {
                j.c[i][k] = self.c[i][k] + rhs.c[i][k];
            }
        }
        j
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self = *self + rhs;
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        let (kx, kt) = self.common(&rhs);
        let mut j = Jet::zero(kx, kt);
        for i in 0..=kx {
            for k in 0..=kt {
                j.c[i][k] = self.c[i][k] - rhs.c[i][k];
            }
        }
        j
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        let mut j = self;
        j.for_each_mut(|c| *c = -*c);
        j
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let (kx, kt) = self.common(&rhs);
        let mut j = Jet::zero(kx, kt);
        for i in 0..=kx {
            for k in 0..=kt {
                let mut s = DD_ZERO;
                for p in 0..=i {
                    for q in 0..=k {
                        s += self.c[p][q] * rhs.c[i - p][k - q];
                    }
                }
                j.c[i][k] = s;
            }
        }
        j
    }
}

impl Div for Jet {
    type Output = Jet;
    /// Truncated series quotient; the caller guarantees a nonzero constant term.
    fn div(self, rhs: Jet) -> Jet {
        let (kx, kt) = self.common(&rhs);
        let g0 = rhs.c[0][0];
        let mut h = Jet::zero(kx, kt);
        // (i, k) only depends on indices that are componentwise smaller.
        for k in 0..=kt {
            for i in 0..=kx {
                let mut s = self.c[i][k];
                for p in 0..=i {
                    for q in 0..=k {
                        if p == 0 && q == 0 {
                            continue;
                        }
                        s -= rhs.c[p][q] * h.c[i - p][k - q];
                    }
                }
                h.c[i][k] = s / g0;
            }
        }
        h
    }
}

macro_rules! scalar_ops {
    ($($s:ty),*) => {$(
        impl Add<$s> for Jet {
            type Output = Jet;
            fn add(self, rhs: $s) -> Jet {
                let mut j = self;
                j.c[0][0] += rhs;
                j
            }
        }

        impl Sub<$s> for Jet {
            type Output = Jet;
            fn sub(self, rhs: $s) -> Jet {
                let mut j = self;
                j.c[0][0] -= rhs;
                j
            }
        }

        impl Mul<$s> for Jet {
            type Output = Jet;
            fn mul(self, rhs: $s) -> Jet {
                self.scale(rhs)
            }
        }

        impl Mul<Jet> for $s {
            type Output = Jet;
            fn mul(self, rhs: Jet) -> Jet {
                rhs.scale(self)
            }
        }

        impl Div<$s> for Jet {
            type Output = Jet;
            fn div(self, rhs: $s) -> Jet {
                let mut j = self;
                j.for_each_mut(|c| *c = *c / rhs);
                j
            }
        }
    )*};
}

scalar_ops!(f64, Dd);

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn product_of_affine_jets_is_a_quadratic() {
        // f = (x + 2t)(3x − t) around (x, t) = (1, 2)
        let x = Jet::affine(1.0, 1.0, 0.0, 3, 2);
        let t = Jet::affine(2.0, 0.0, 1.0, 3, 2);
        let f = (x + t * 2.0) * (x * 3.0 - t);
        assert_eq!(f.value(), 5.0);
        assert_eq!(f.deriv(1, 0), 1.0 * 1.0 + 3.0 * 5.0);
        assert_eq!(f.deriv(2, 0), 6.0);
        assert_eq!(f.deriv(1, 1), -1.0 + 6.0);
        assert_eq!(f.deriv(0, 2), -4.0);
        assert_eq!(f.deriv(3, 0), 0.0);
    }

    #[test]
    fn quotient_inverts_product() {
        let x = Jet::affine(0.3, 1.0, 0.0, 5, 1);
        let t = Jet::affine(-0.7, 0.0, 1.0, 5, 1);
        let g = (x * t).cosh() + x.sin();
        let f = x.sinh() * t + 2.0;
        let back = (f / g) * g;
        for i in 0..=5 {
            for k in 0..=1 {
                let d: f64 = (back.deriv_dd(i, k) - f.deriv_dd(i, k)).into();
                assert!(d.abs() <= 1e-28 * (1.0 + f.deriv(i, k).abs()), "({i},{k})");
            }
        }
    }

    #[test]
    fn composition_matches_closed_form_derivatives() {
        // sinh(a x + b t) has ∂ₓⁱ∂ₜʲ = aⁱ bʲ sinh⁽ⁱ⁺ʲ⁾
        let (a, b, x0, t0) = (0.7, -0.3, 0.4, 1.1);
        let th = Jet::affine(a * x0 + b * t0, a, b, 5, 2);
        let s = th.sinh();
        let arg: f64 = a * x0 + b * t0;
        for i in 0..=5 {
            for k in 0..=2 {
                let base = if (i + k) % 2 == 0 { arg.sinh() } else { arg.cosh() };
                let expect = a.powi(i as i32) * b.powi(k as i32) * base;
                assert!(close(s.deriv(i, k), expect, 1e-14), "({i},{k})");
            }
        }
    }

    #[test]
    fn hyperbolic_identity_holds_to_double_double() {
        for &g in &[-3.0, -1e-7, 0.0, 0.25, 5.5] {
            let th = Jet::affine(g, 1.0, 0.0, 3, 0);
            let id = th.cosh().square() - th.sinh().square();
            let off: f64 = (id.value_dd() - 1.0).into();
            assert!(off.abs() < 1e-28, "g = {g}: {off:e}");
            assert!(id.deriv(1, 0).abs() < 1e-27);
        }
    }

    #[test]
    fn cosh_m1_is_accurate_near_zero() {
        let th = Jet::affine(1e-9, 1.0, 0.0, 2, 0);
        let j = th.cosh_m1();
        assert!(close(j.value(), 5e-19, 1e-12));
        assert!(close(j.deriv(1, 0), 1e-9, 1e-12));
        assert!(close(j.deriv(2, 0), 1.0, 1e-15));
    }

    #[test]
    fn sin_cos_lie_on_the_unit_circle() {
        let th = Jet::affine(2.0, 0.5, 0.25, 4, 1);
        let (s, c) = th.sin_cos();
        let id = s.square() + c.square();
        let off: f64 = (id.value_dd() - 1.0).into();
        assert!(off.abs() < 1e-30);
        assert!(close(s.deriv(1, 1), -0.5 * 0.25 * 2f64.sin(), 1e-15));
        assert!(close(c.deriv(2, 0), -0.25 * 2f64.cos(), 1e-15));
    }

    #[test]
    fn d_x_shifts_orders() {
        let x = Jet::affine(0.5, 1.0, 0.0, 4, 1);
        let f = x * x * x;
        let fx = f.d_x();
        assert_eq!(fx.kx(), 3);
        assert_eq!(fx.value(), 0.75);
        assert_eq!(fx.deriv(1, 0), 3.0);
        assert_eq!(fx.deriv(2, 0), 6.0);
    }

    #[test]
    fn tanh_derivatives_and_saturation() {
        let th = Jet::affine(0.4, 1.0, 0.0, 4, 0);
        let q = th.sinh() / th.cosh();
        let t = th.tanh();
        for i in 0..=4 {
            assert!(close(t.deriv(i, 0), q.deriv(i, 0), 1e-14));
        }
        let far = Jet::affine(900.0, 1.0, 0.0, 3, 0).tanh();
        assert_eq!(far.value(), 1.0);
        assert_eq!(far.deriv(1, 0), 0.0);
    }

    #[test]
    fn from_derivatives_round_trips() {
        let j = Jet::from_derivatives(4, 2, |i, k| (i * 10 + k) as f64 - 3.5);
        for i in 0..=4 {
            for k in 0..=2 {
                assert_eq!(j.deriv(i, k), (i * 10 + k) as f64 - 3.5);
            }
        }
    }

    #[test]
    #[should_panic]
    fn order_capacity_is_enforced() {
        let _ = Jet::zero(MAX_X, 0);
    }
}
