//! Analytic shear profiles on the half channel `[0, 1]`.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

type C = Complex64;

/// Velocity profile `U(z)`, analytic in a neighbourhood of `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ShearProfile {
    /// Plane Poiseuille flow `1 - (z - 1)^2`.
    Poiseuille,
    /// `sin(pi z / 2)`.
    Sin,
    /// Plane Couette flow `U = z`.
    Linear,
    /// `sum a_i z^i`.
    Poly(Vec<f64>),
}

/// Root of `U(z) = c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub c: C,
    pub z_c: C,
    pub residual: f64,
}

impl ShearProfile {
    pub fn poiseuille() -> Self {
        ShearProfile::Poiseuille
    }

    pub fn sin_profile() -> Self {
        ShearProfile::Sin
    }

    /// Looks up a built-in profile by name.
    pub fn from_name(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "poiseuille" => Ok(ShearProfile::Poiseuille),
            "sin" => Ok(ShearProfile::Sin),
            "couette" | "linear" => Ok(ShearProfile::Linear),
            other => {
                let spec = other.strip_prefix("poly:").ok_or_else(|| {
                    Error::UsageError(format!("unknown profile '{name}'"))
                })?;
                Self::parse_poly(spec)
            }
        }
    }

    /// Parses the coefficient list of `poly: [a0, a1, ...]`.
    pub fn parse_poly(spec: &str) -> Result<Self> {
        let body = spec.trim().trim_start_matches('[').trim_end_matches(']');
        let coeffs: std::result::Result<Vec<f64>, _> =
            body.split(',').map(|t| t.trim().parse::<f64>()).collect();
        match coeffs {
            Ok(c) if !c.is_empty() => Ok(ShearProfile::Poly(c)),
            _ => Err(Error::UsageError(format!("bad polynomial profile '{spec}'"))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            ShearProfile::Poiseuille => "poiseuille".into(),
            ShearProfile::Sin => "sin".into(),
            ShearProfile::Linear => "couette".into(),
            ShearProfile::Poly(c) => {
                let parts: Vec<String> = c.iter().map(|a| format!("{a}")).collect();
                format!("poly: [{}]", parts.join(", "))
            }
        }
    }

    /// Radius of the complex neighbourhood of `[0, 1]` where the profile is trusted.
    pub fn domain_radius(&self) -> f64 {
        0.5
    }

    /// Taylor coefficients `U^(k)(z0) / k!` for `k < n`.
    pub fn taylor(&self, z0: C, n: usize) -> Vec<C> {
        let zero = C::new(0.0, 0.0);
        match self {
            ShearProfile::Poiseuille => {
                // 1 - (z - 1)^2 = 2z - z^2
                let mut t = shift_poly(&[zero, C::new(2.0, 0.0), C::new(-1.0, 0.0)], z0);
                t.resize(n, zero);
                t
            }
            ShearProfile::Linear => {
                let mut t = vec![z0, C::new(1.0, 0.0)];
                t.resize(n, zero);
                t
            }
            ShearProfile::Poly(a) => {
                let ac: Vec<C> = a.iter().map(|&x| C::new(x, 0.0)).collect();
                let mut t = shift_poly(&ac, z0);
                t.resize(n, zero);
                t
            }
            ShearProfile::Sin => {
                let th = z0 * FRAC_PI_2;
                let (s, c) = (th.sin(), th.cos());
                let mut out = Vec::with_capacity(n);
                let mut f = 1.0;
                for k in 0..n {
                    if k > 0 {
                        f *= FRAC_PI_2 / k as f64;
                    }
                    let v = match k % 4 {
                        0 => s,
                        1 => c,
                        2 => -s,
                        _ => -c,
                    };
                    out.push(v * f);
                }
                out
            }
        }
    }

    /// `U, U', ..., U^(order)` at complex `z`.
    pub fn derivs(&self, z: C, order: usize) -> Vec<C> {
        let t = self.taylor(z, order + 1);
        let mut f = 1.0;
        t.into_iter()
            .enumerate()
            .map(|(k, a)| {
                if k > 0 {
                    f *= k as f64;
                }
                a * f
            })
            .collect()
    }

    /// `(U, U', U'', U''')` at complex `z`.
    pub fn eval(&self, z: C) -> [C; 4] {
        let d = self.derivs(z, 3);
        [d[0], d[1], d[2], d[3]]
    }

    pub fn u(&self, z: C) -> C {
        self.derivs(z, 0)[0]
    }

    /// `U(0)`.
    pub fn u0(&self) -> f64 {
        self.u(C::new(0.0, 0.0)).re
    }

    /// Real wall slope `U'(0)`.
    pub fn du0(&self) -> f64 {
        self.derivs(C::new(0.0, 0.0), 1)[1].re
    }

    /// Newton iteration on `U(z) - c` started at `guess`.
    pub fn find_critical_point(&self, c: C, guess: C) -> Result<CriticalPoint> {
        let tol = 1e-12 * c.norm().max(1.0);
        let mut z = guess;
        let radius = self.domain_radius();
        for it in 0..50 {
            let d = self.derivs(z, 1);
            let f = d[0] - c;
            if f.norm() == 0.0 {
                return Ok(CriticalPoint { c, z_c: z, residual: 0.0 });
            }
            if d[1].norm() < 1e-10 {
                return Err(Error::DerivativeVanishes { re: z.re, im: z.im });
            }
            let step = f / d[1];
            z -= step;
            if distance_to_unit(z) > radius {
                return Err(Error::NoConvergence { iterations: it + 1, residual: f.norm() });
            }
            if step.norm() <= 1e-14 * z.norm().max(1.0) {
                let r = (self.u(z) - c).norm();
                if r <= tol {
                    return Ok(CriticalPoint { c, z_c: z, residual: r });
                }
            }
        }
        let r = (self.u(z) - c).norm();
        if r <= tol {
            Ok(CriticalPoint { c, z_c: z, residual: r })
        } else {
            Err(Error::NoConvergence { iterations: 50, residual: r })
        }
    }
}

/// Distance from `z` to the segment `[0, 1]`.
pub fn distance_to_unit(z: C) -> f64 {
    let x = z.re.clamp(0.0, 1.0);
    (z - C::new(x, 0.0)).norm()
}

/// Coefficients of `p(z0 + s)` in powers of `s` (repeated synthetic division).
fn shift_poly(a: &[C], z0: C) -> Vec<C> {
    let mut b = a.to_vec();
    let n = b.len();
    for k in 0..n {
        for j in (k..n - 1).rev() {
            let t = b[j + 1] * z0;
            b[j] += t;
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn poiseuille_values() {
        let p = ShearProfile::poiseuille();
        let v = p.eval(c(0.0, 0.0));
        assert_eq!((v[0], v[1], v[2]), (c(0.0, 0.0), c(2.0, 0.0), c(-2.0, 0.0)));
        let v = p.eval(c(1.0, 0.0));
        assert_eq!((v[0], v[1], v[2]), (c(1.0, 0.0), c(0.0, 0.0), c(-2.0, 0.0)));
        let u = p.u(c(0.5, 0.1));
        assert!((u - c(0.76, 0.1)).norm() < 1e-15);
    }

    #[test]
    fn sin_values() {
        let p = ShearProfile::sin_profile();
        let q = std::f64::consts::PI;
        let v = p.eval(c(1.0, 0.0));
        assert!((v[0] - 1.0).norm() < 1e-15 && v[1].norm() < 1e-15);
        assert!((v[2] + q * q / 4.0).norm() < 1e-14);
        let v = p.eval(c(0.0, 0.0));
        assert!(v[0].norm() < 1e-15 && (v[1] - q / 2.0).norm() < 1e-15 && v[2].norm() < 1e-15);
        let v = p.eval(c(0.5, 0.0));
        let s = (q / 4.0).sin();
        assert!((v[0] - s).norm() < 1e-15);
        assert!((v[1] - q / 2.0 * (q / 4.0).cos()).norm() < 1e-15);
        assert!((v[2] + q * q / 4.0 * s).norm() < 1e-14);
    }

    #[test]
    fn critical_points() {
        let p = ShearProfile::poiseuille();
        let cp = p.find_critical_point(c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(cp.z_c.norm() < 1e-15);
        let cp = p.find_critical_point(c(0.19, 0.0), c(0.1, 0.0)).unwrap();
        assert!((cp.z_c - c(0.1, 0.0)).norm() < 1e-14);
        let cp = p.find_critical_point(c(0.0, 0.01), c(0.0, 0.0)).unwrap();
        let exact = c(1.0, 0.0) - (c(1.0, 0.0) - c(0.0, 0.01)).sqrt();
        assert!((cp.z_c - exact).norm() < 1e-15);
        assert!((cp.z_c.im - 0.005).abs() / 0.005 < 0.2);
    }

    #[test]
    fn vanishing_derivative_near_wall_centre() {
        let p = ShearProfile::poiseuille();
        let e = p.find_critical_point(c(1.0 - 1e-6, 0.0), c(1.0, 0.0)).unwrap_err();
        assert_eq!(e.kind(), "DerivativeVanishes");
    }

    #[test]
    fn poly_parse_and_shift() {
        let p = ShearProfile::from_name("poly: [0, 2, -1]").unwrap();
        let q = ShearProfile::poiseuille();
        let z = c(0.3, -0.2);
        let a = p.derivs(z, 3);
        let b = q.derivs(z, 3);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-14);
        }
    }
}
