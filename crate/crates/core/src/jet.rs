//! Second-order forward-mode differentiation.

use core::ops::{Add, Div, Mul, Neg, Sub};
#[allow(unused_imports)]
use num_traits::Float;

/// A value with its first and second derivatives in one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    pub const fn new(v: f64, d1: f64, d2: f64) -> Self {
        Jet2 { v, d1, d2 }
    }

    pub const fn constant(v: f64) -> Self {
        Jet2 {
            v,
            d1: 0.0,
            d2: 0.0,
        }
    }

    /// `g(self)` given `g`, `g'` and `g''` at `self.v`.
    fn chain(self, g: f64, g1: f64, g2: f64) -> Self {
        Jet2 {
            v: g,
            d1: g1 * self.d1,
            d2: g2 * self.d1 * self.d1 + g1 * self.d2,
        }
    }

    pub fn sin_cos(self) -> (Self, Self) {
        let (s, c) = self.v.sin_cos();
        (self.chain(s, c, -s), self.chain(c, -s, -c))
    }

    pub fn sqrt(self) -> Self {
        let w = self.v.sqrt();
        let d1 = self.d1 / (2.0 * w);
        Jet2 {
            v: w,
            d1,
            d2: (self.d2 - 2.0 * d1 * d1) / (2.0 * w),
        }
    }

    pub fn acos(self) -> Self {
        let w2 = 1.0 - self.v * self.v;
        let w = w2.sqrt();
        self.chain(self.v.acos(), -1.0 / w, -self.v / (w * w2))
    }

    /// Angle of the vector `(x, y)` as in `f64::atan2`.
    pub fn atan2(y: Self, x: Self) -> Self {
        let r2 = x.v * x.v + y.v * y.v;
        let num = x.v * y.d1 - y.v * x.d1;
        let num1 = x.v * y.d2 - y.v * x.d2;
        let r2_1 = 2.0 * (x.v * x.d1 + y.v * y.d1);
        Jet2 {
            v: y.v.atan2(x.v),
            d1: num / r2,
            d2: (num1 * r2 - num * r2_1) / (r2 * r2),
        }
    }

    pub fn scale(self, k: f64) -> Self {
        Jet2::new(k * self.v, k * self.d1, k * self.d2)
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2::new(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2::new(self.v - o.v, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2::new(-self.v, -self.d1, -self.d2)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2::new(
            self.v * o.v,
            self.d1 * o.v + self.v * o.d1,
            self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        )
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, o: Jet2) -> Jet2 {
        let w = self.v / o.v;
        let w1 = (self.d1 - w * o.d1) / o.v;
        Jet2::new(w, w1, (self.d2 - 2.0 * w1 * o.d1 - w * o.d2) / o.v)
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(self, k: f64) -> Jet2 {
        Jet2::new(self.v + k, self.d1, self.d2)
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(self, k: f64) -> Jet2 {
        Jet2::new(self.v - k, self.d1, self.d2)
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, k: f64) -> Jet2 {
        self.scale(k)
    }
}

impl Div<f64> for Jet2 {
    type Output = Jet2;
    fn div(self, k: f64) -> Jet2 {
        self.scale(1.0 / k)
    }
}
