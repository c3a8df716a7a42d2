//! Complex numbers carried as `m * exp(e)` so that Airy-type growth factors
//! like `exp(2/3 z^{3/2})` survive products and sums without overflow.

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub m: Complex64,
    pub e: f64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { m: Complex64 { re: 0.0, im: 0.0 }, e: 0.0 };
    pub const ONE: Scaled = Scaled { m: Complex64 { re: 1.0, im: 0.0 }, e: 0.0 };

    pub fn new(m: Complex64, e: f64) -> Self {
        Scaled { m, e }.normalized()
    }

    pub fn from_c(z: Complex64) -> Self {
        Scaled { m: z, e: 0.0 }.normalized()
    }

    /// `exp(w)` for complex `w`, keeping the real part in the exponent.
    pub fn exp(w: Complex64) -> Self {
        Scaled { m: Complex64::from_polar(1.0, w.im), e: w.re }
    }

    pub fn is_zero(&self) -> bool {
        self.m.re == 0.0 && self.m.im == 0.0
    }

    /// Moves the magnitude of the mantissa into the exponent.
    pub fn normalized(self) -> Self {
        let a = self.m.norm();
        if a == 0.0 || !a.is_finite() {
            return if a == 0.0 { Scaled::ZERO } else { self };
        }
        if (1e-8..=1e8).contains(&a) {
            return self;
        }
        Scaled { m: self.m / a, e: self.e + a.ln() }
    }

    /// Natural log of the modulus; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.m.norm().ln() + self.e
        }
    }

    pub fn abs(&self) -> f64 {
        self.ln_abs().exp()
    }

    /// Unit phase factor (1 for zero).
    pub fn phase(&self) -> Complex64 {
        let a = self.m.norm();
        if a == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            self.m / a
        }
    }

    /// Plain complex value; overflows to infinity and underflows to zero.
    pub fn to_c(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        if self.e > 700.0 || self.e < -700.0 {
            let a = self.m.norm();
            let l = a.ln() + self.e;
            return self.m / a * l.exp();
        }
        self.m * self.e.exp()
    }

    /// Value times `exp(-shift)`, as a plain complex number.
    pub fn to_c_shifted(&self, shift: f64) -> Complex64 {
        Scaled { m: self.m, e: self.e - shift }.to_c()
    }

    pub fn scale_c(self, k: Complex64) -> Self {
        Scaled { m: self.m * k, e: self.e }.normalized()
    }

    pub fn is_finite(&self) -> bool {
        self.m.re.is_finite() && self.m.im.is_finite() && self.e.is_finite()
    }
}

impl From<Complex64> for Scaled {
    fn from(z: Complex64) -> Self {
        Scaled::from_c(z)
    }
}

impl From<f64> for Scaled {
    fn from(x: f64) -> Self {
        Scaled::from_c(Complex64::new(x, 0.0))
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, o: Scaled) -> Scaled {
        Scaled { m: self.m * o.m, e: self.e + o.e }.normalized()
    }
}

impl Mul<Complex64> for Scaled {
    type Output = Scaled;
    fn mul(self, k: Complex64) -> Scaled {
        self.scale_c(k)
    }
}

impl Mul<f64> for Scaled {
    type Output = Scaled;
    fn mul(self, k: f64) -> Scaled {
        Scaled { m: self.m * k, e: self.e }.normalized()
    }
}

impl Div for Scaled {
    type Output = Scaled;
    fn div(self, o: Scaled) -> Scaled {
        Scaled { m: self.m / o.m, e: self.e - o.e }.normalized()
    }
}

impl Neg for Scaled {
    type Output = Scaled;
    fn neg(self) -> Scaled {
        Scaled { m: -self.m, e: self.e }
    }
}

impl Add for Scaled {
    type Output = Scaled;
    fn add(self, o: Scaled) -> Scaled {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (big, small) = if self.e >= o.e { (self, o) } else { (o, self) };
        let d = small.e - big.e;
        if d < -745.0 {
            return big;
        }
        Scaled { m: big.m + small.m * d.exp(), e: big.e }.normalized()
    }
}

impl Sub for Scaled {
    type Output = Scaled;
    fn sub(self, o: Scaled) -> Scaled {
        self + (-o)
    }
}
