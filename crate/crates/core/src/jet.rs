//! Derivative jets `(f, f', f'', f''', f'''')` at a point, sharing one
//! exponential scale so Airy-type factors can be combined without overflow.

use crate::airy::AiryValues;
use crate::scaled::Scaled;
use num_complex::Complex64;

type C = Complex64;

const BINOM: [[f64; 5]; 5] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0, 0.0],
    [1.0, 3.0, 3.0, 1.0, 0.0],
    [1.0, 4.0, 6.0, 4.0, 1.0],
];

/// True derivatives are `v[k] * exp(e)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: [C; 5],
    pub e: f64,
}

impl Jet {
    pub fn new(v: [C; 5], e: f64) -> Self {
        Jet { v, e }
    }

    pub fn plain(v: [C; 5]) -> Self {
        Jet { v, e: 0.0 }
    }

    pub fn constant(c: C) -> Self {
        let z = C::new(0.0, 0.0);
        Jet { v: [c, z, z, z, z], e: 0.0 }
    }

    /// Jet whose value is `value` and whose derivatives are `k * tail` shifted by one
    /// order, as for a primitive `F' = k * tail`.
    pub fn primitive(value: Scaled, tail: &Jet, k: C) -> Self {
        let e = if value.is_zero() { tail.e } else { value.e.max(tail.e) };
        let ft = (tail.e - e).exp();
        let mut v = [C::new(0.0, 0.0); 5];
        v[0] = value.to_c_shifted(e);
        for j in 1..5 {
            v[j] = tail.v[j - 1] * k * ft;
        }
        Jet { v, e }
    }

    pub fn get(&self, k: usize) -> Scaled {
        Scaled::new(self.v[k], self.e)
    }

    pub fn to_c(&self, k: usize) -> C {
        self.v[k] * self.e.exp()
    }

    /// Plain derivatives with the scale folded in.
    pub fn to_plain(&self) -> [C; 5] {
        let f = self.e.exp();
        self.v.map(|x| x * f)
    }

    pub fn scale(&self, k: C) -> Jet {
        Jet { v: self.v.map(|x| x * k), e: self.e }
    }

    /// Leibniz rule.
    pub fn mul(&self, o: &Jet) -> Jet {
        let mut v = [C::new(0.0, 0.0); 5];
        for (n, slot) in v.iter_mut().enumerate() {
            for j in 0..=n {
                *slot += self.v[j] * o.v[n - j] * BINOM[n][j];
            }
        }
        Jet { v, e: self.e + o.e }
    }

    pub fn add(&self, o: &Jet) -> Jet {
        self.lin(o, 1.0)
    }

    pub fn sub(&self, o: &Jet) -> Jet {
        self.lin(o, -1.0)
    }

    fn lin(&self, o: &Jet, sign: f64) -> Jet {
        let e = self.e.max(o.e);
        let fa = (self.e - e).exp();
        let fb = sign * (o.e - e).exp();
        let mut v = [C::new(0.0, 0.0); 5];
        for k in 0..5 {
            v[k] = self.v[k] * fa + o.v[k] * fb;
        }
        Jet { v, e }
    }

    /// Faa di Bruno: derivatives of `F(g(x))` from `F^{(k)}(g)` (scale `e`) and the
    /// plain derivatives of `g`.
    pub fn compose(outer: [C; 5], e: f64, g: &[C; 5]) -> Jet {
        let (g1, g2, g3, g4) = (g[1], g[2], g[3], g[4]);
        let [f0, f1, f2, f3, f4] = outer;
        let v = [
            f0,
            f1 * g1,
            f2 * g1 * g1 + f1 * g2,
            f3 * g1 * g1 * g1 + f2 * g1 * g2 * 3.0 + f1 * g3,
            f4 * g1 * g1 * g1 * g1
                + f3 * g1 * g1 * g2 * 6.0
                + f2 * (g2 * g2 * 3.0 + g1 * g3 * 4.0)
                + f1 * g4,
        ];
        Jet { v, e }
    }
}

/// `(F, F', F'', F''', F'''')` at `x` for `F = Ai` or `Ci`, using `F'' = x F`.
pub fn airy_outer(a: &AiryValues, x: C) -> [C; 5] {
    [a.f, a.d, x * a.f, a.f + x * a.d, a.d * 2.0 + x * x * a.f]
}

/// The same for the second primitive `F(2, x)`.
pub fn airy2_outer(a: &AiryValues, x: C) -> [C; 5] {
    [a.p2, a.p1, a.f, a.d, x * a.f]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_matches_exp_of_square() {
        // exp(x^2) at x = 0.3: derivatives via outer exp and inner x^2
        let x = 0.3;
        let g = [C::new(x * x, 0.0), C::new(2.0 * x, 0.0), C::new(2.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)];
        let ex = (x * x).exp();
        let j = Jet::compose([C::new(ex, 0.0); 5], 0.0, &g);
        let p = |a: f64, b: f64, c: f64, d: f64, e: f64| a + b * x + c * x * x + d * x.powi(3) + e * x.powi(4);
        let expect = [
            1.0,
            2.0 * x,
            p(2.0, 0.0, 4.0, 0.0, 0.0),
            p(0.0, 12.0, 0.0, 8.0, 0.0),
            p(12.0, 0.0, 48.0, 0.0, 16.0),
        ];
        for k in 0..5 {
            assert!((j.v[k].re - expect[k] * ex).abs() < 1e-12 * (1.0 + expect[k].abs()), "order {k}");
        }
    }

    #[test]
    fn leibniz_product() {
        // x * x = x^2 at x = 2
        let a = Jet::plain([C::new(2.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)]);
        let b = a.mul(&a);
        assert_eq!(b.v[0].re, 4.0);
        assert_eq!(b.v[1].re, 4.0);
        assert_eq!(b.v[2].re, 2.0);
        assert_eq!(b.v[3].re, 0.0);
    }
}
