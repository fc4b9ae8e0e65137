//! Double-double scalar used by the jet algebra.
//!
//! Sums, products and square roots delegate to [`twofloat::TwoFloat`]. The
//! quotient is formed here by long division with residual correction, since
//! the upstream `TwoFloat / TwoFloat` only reaches `f64` accuracy.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{Num, One, Zero};
use twofloat::TwoFloat;

#[derive(Clone, Copy, Default, PartialEq)]
pub struct Dd(TwoFloat);

impl Dd {
    pub const ZERO: Dd = Dd(TwoFloat::from_f64(0.0));
    pub const ONE: Dd = Dd(TwoFloat::from_f64(1.0));

    pub const fn from_f64(v: f64) -> Self {
        Dd(TwoFloat::from_f64(v))
    }

    pub fn hi(&self) -> f64 {
        self.0.hi()
    }

    pub fn lo(&self) -> f64 {
        self.0.lo()
    }

    pub fn to_f64(self) -> f64 {
        self.0.hi() + self.0.lo()
    }

    pub fn sqrt(self) -> Self {
        Dd(self.0.sqrt())
    }

    pub fn abs(self) -> Self {
        if self.hi() < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn recip(self) -> Self {
        Dd::ONE / self
    }

    pub fn is_finite(&self) -> bool {
        self.hi().is_finite() && self.lo().is_finite()
    }
}

impl From<f64> for Dd {
    fn from(v: f64) -> Self {
        Dd::from_f64(v)
    }
}

impl From<Dd> for f64 {
    fn from(v: Dd) -> f64 {
        v.to_f64()
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi(), self.lo())
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_f64(), f)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl PartialEq<f64> for Dd {
    fn eq(&self, other: &f64) -> bool {
        self.hi() == *other && self.lo() == 0.0
    }
}

impl PartialOrd<f64> for Dd {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.partial_cmp(&Dd::from(*other))
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd(-self.0)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi() / rhs.hi();
        let r = self.0 - rhs.0 * q1;
        let q2 = r.hi() / rhs.hi();
        let r = r - rhs.0 * q2;
        let q3 = r.hi() / rhs.hi();
        Dd(TwoFloat::new_add(q1, q2) + q3)
    }
}

impl Div<f64> for Dd {
    type Output = Dd;
    fn div(self, rhs: f64) -> Dd {
        Dd(self.0 / rhs)
    }
}

impl Div<Dd> for f64 {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        Dd::from(self) / rhs
    }
}

macro_rules! delegate {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr for Dd {
            type Output = Dd;
            fn $m(self, rhs: Dd) -> Dd {
                Dd(self.0.$m(rhs.0))
            }
        }

        impl $tr<f64> for Dd {
            type Output = Dd;
            fn $m(self, rhs: f64) -> Dd {
                Dd(self.0.$m(rhs))
            }
        }

        impl $tr<Dd> for f64 {
            type Output = Dd;
            fn $m(self, rhs: Dd) -> Dd {
                Dd(self.$m(rhs.0))
            }
        }

        impl $atr for Dd {
            fn $am(&mut self, rhs: Dd) {
                *self = (*self).$m(rhs);
            }
        }

        impl $atr<f64> for Dd {
            fn $am(&mut self, rhs: f64) {
                *self = (*self).$m(rhs);
            }
        }
    };
}

delegate!(Add, add, AddAssign, add_assign);
delegate!(Sub, sub, SubAssign, sub_assign);
delegate!(Mul, mul, MulAssign, mul_assign);

impl std::ops::Rem for Dd {
    type Output = Dd;
    fn rem(self, rhs: Dd) -> Dd {
        Dd(self.0 % rhs.0)
    }
}

impl Zero for Dd {
    fn zero() -> Self {
        Dd::ZERO
    }

    fn is_zero(&self) -> bool {
        self.hi() == 0.0 && self.lo() == 0.0
    }
}

impl One for Dd {
    fn one() -> Self {
        Dd::ONE
    }
}

impl Num for Dd {
    type FromStrRadixErr = <f64 as Num>::FromStrRadixErr;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        f64::from_str_radix(s, radix).map(Dd::from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(a: Dd, b: Dd) -> f64 {
        (a - b).to_f64().abs()
    }

    #[test]
    fn quotient_is_double_double_accurate() {
        let third = Dd::from(1.0) / Dd::from(3.0);
        assert!(err(third * 3.0, Dd::ONE) < 1e-32);
        let a = Dd::from(2.0).sqrt();
        let b = Dd::from(7.0) / Dd::from(3.0);
        assert!(err(a / b * b, a) < 1e-31);
        assert!(err(1.0 / b * b, Dd::ONE) < 1e-31);
    }

    #[test]
    fn sqrt_and_ordering() {
        let r = Dd::from(2.0).sqrt();
        assert!(err(r * r, Dd::from(2.0)) < 1e-31);
        assert!(r > 1.414 && r < 1.415);
        assert!(-r < Dd::ZERO);
        assert_eq!(Dd::from(1.5), 1.5);
    }
}
