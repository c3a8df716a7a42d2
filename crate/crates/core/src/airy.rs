//! Complex Airy functions `Ai`, `Ci` with derivatives and primitives.
//!
//! `Ci = i pi (Ai - i Bi) = 2 pi e^{i pi/6} Ai(omega z)` with `omega = e^{2 pi i/3}`.
//! It satisfies `W(Ai, Ci) = 1` and decays along `-e^{i pi/6} R_+`.
//! Primitives of `Ai` are anchored at `+infinity`. Primitives of `Ci` are the
//! matching rotations `Ci(k, z) = 2 pi e^{i pi/6} omega^{-k} Ai(k, omega z)`, so they
//! vanish at the end of the ray where `Ci` decays.
//!
//! Internally every evaluation produces the triple `(Ai(1,z), Ai(z), Ai'(z))`
//! with a shared exponential scale.

use crate::error::{Error, Result};
use crate::scaled::Scaled;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI};
use std::sync::OnceLock;

type C = Complex64;

const AI0: f64 = 0.355_028_053_887_817_239_26;
const AIP0: f64 = -0.258_819_403_792_806_798_40;
/// Maclaurin region radius.
const R_SERIES: f64 = 3.0;
/// Asymptotic region radius.
const R_ASYMP: f64 = 14.0;
const STEP: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum AiryKind {
    Ai,
    Ci,
}

impl AiryKind {
    pub fn label(self) -> &'static str {
        match self {
            AiryKind::Ai => "Ai",
            AiryKind::Ci => "Ci",
        }
    }
}

/// Second primitive, first primitive, value and derivative sharing one scale:
/// the true values are `x * exp(e)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValues {
    pub p2: C,
    pub p1: C,
    pub f: C,
    pub d: C,
    pub e: f64,
}

impl AiryValues {
    /// Value of order `k` (negative orders are derivatives) as a scaled number.
    pub fn order(&self, k: i32, z: C) -> Result<Scaled> {
        let m = match k {
            -2 => z * self.f,
            -1 => self.d,
            0 => self.f,
            1 => self.p1,
            2 => self.p2,
            _ => return Err(Error::UnsupportedOrder(k)),
        };
        Ok(Scaled::new(m, self.e))
    }
}

fn omega() -> C {
    C::new(-0.5, 0.75f64.sqrt())
}

fn ci_prefactor() -> C {
    C::from_polar(2.0 * PI, FRAC_PI_6)
}

struct AsymptoticCoeffs {
    u: Vec<f64>,
    v: Vec<f64>,
    tau: Vec<f64>,
}

fn coeffs() -> &'static AsymptoticCoeffs {
    static CELL: OnceLock<AsymptoticCoeffs> = OnceLock::new();
    CELL.get_or_init(|| {
        let n = 80;
        let mut u = vec![1.0];
        let mut v = vec![1.0];
        let mut tau = vec![1.0];
        for k in 1..n {
            let kf = k as f64;
            let uk = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / (216.0 * kf * (2.0 * kf - 1.0));
            u.push(uk);
            v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            tau.push(sign * uk - (kf - 0.5) * tau[k - 1]);
        }
        AsymptoticCoeffs { u, v, tau }
    })
}

/// Taylor expansion of the triple at `z0` evaluated at `z0 + h`.
fn taylor_step(z0: C, p1: C, f: C, d: C, h: C) -> (C, C, C) {
    // a_n: coefficients of Ai(z0 + h) in powers of h.
    let mut a_nm1 = d; // a_1
    let mut a_n = z0 * f / 2.0; // a_2
    let mut a_nm2 = f; // a_0
    let mut hp = h; // h^n for current n (starting at n = 1)
    let mut sf = f + d * h;
    let mut sd = d;
    let mut sp = p1 + f * h + d * h * h / 2.0;
    let mut n = 2usize;
    let mut small = 0;
    loop {
        // contribution of a_n
        let dprev = hp; // h^{n-1}
        hp *= h; // h^n
        let tf = a_n * hp;
        let td = a_n * dprev * n as f64;
        let tp = a_n * hp * h / (n as f64 + 1.0);
        sf += tf;
        sd += td;
        sp += tp;
        let scale = sf.norm() + sd.norm() + sp.norm();
        if tf.norm() + td.norm() + tp.norm() <= 1e-17 * scale {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        if n > 200 {
            break;
        }
        // a_{n+1} = (z0 a_{n-1} + a_{n-2}) / (n (n+1))
        let next = (z0 * a_nm1 + a_nm2) / ((n * (n + 1)) as f64);
        a_nm2 = a_nm1;
        a_nm1 = a_n;
        a_n = next;
        n += 1;
    }
    (sp, sf, sd)
}

fn maclaurin(z: C) -> (C, C, C) {
    taylor_step(
        C::new(0.0, 0.0),
        C::new(-1.0 / 3.0, 0.0),
        C::new(AI0, 0.0),
        C::new(AIP0, 0.0),
        z,
    )
}

/// Large-`|z|` expansion, valid for `|arg z| <= 2 pi / 3`.
fn asymptotic(z: C) -> (C, C, C, f64) {
    let k = coeffs();
    let zeta = z.powf(1.5) * (2.0 / 3.0);
    let iz = 1.0 / zeta;
    let mut su = C::new(0.0, 0.0);
    let mut sv = C::new(0.0, 0.0);
    let mut st = C::new(0.0, 0.0);
    let mut p = C::new(1.0, 0.0);
    let mut prev = f64::INFINITY;
    for j in 0..k.u.len() {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let tu = p * (sign * k.u[j]);
        let tv = p * (sign * k.v[j]);
        let tt = p * k.tau[j];
        let mag = tu.norm() + tv.norm() + tt.norm();
        if mag > prev {
            break;
        }
        su += tu;
        sv += tv;
        st += tt;
        if mag < 1e-17 {
            break;
        }
        prev = mag;
        p *= iz;
    }
    let c0 = 0.5 / PI.sqrt();
    let z14 = z.powf(0.25);
    let phase = C::from_polar(1.0, -zeta.im);
    let f = phase * su * c0 / z14;
    let d = -phase * sv * c0 * z14;
    let p1 = -phase * st * c0 / (z14 * z14 * z14);
    (p1, f, d, -zeta.re)
}

fn normalise(p1: C, f: C, d: C, e: f64) -> (C, C, C, f64) {
    let m = p1.norm().max(f.norm()).max(d.norm());
    if m == 0.0 || !m.is_finite() {
        return (p1, f, d, e);
    }
    (p1 / m, f / m, d / m, e + m.ln())
}

fn large(z: C) -> (C, C, C, f64) {
    if z.arg().abs() <= 2.0 * PI / 3.0 + 1e-12 {
        return asymptotic(z);
    }
    let w = omega();
    let w2 = w * w;
    let (a1, af, ad, ae) = asymptotic(w * z);
    let (b1, bf, bd, be) = asymptotic(w2 * z);
    let a = Scaled { m: af, e: ae };
    let b = Scaled { m: bf, e: be };
    let f = -(a * w) - b * w2;
    let ap = Scaled { m: ad, e: ae };
    let bp = Scaled { m: bd, e: be };
    let d = -(ap * w2) - bp * w;
    let p = -Scaled { m: a1, e: ae } - Scaled { m: b1, e: be } - Scaled::ONE;
    let e = f.e.max(d.e).max(p.e);
    normalise(p.to_c_shifted(e), f.to_c_shifted(e), d.to_c_shifted(e), e)
}

/// `(Ai(1,z), Ai(z), Ai'(z))` scaled by `exp(e)`.
fn triple(z: C) -> (C, C, C, f64) {
    let r = z.norm();
    if r <= R_SERIES {
        let (p, f, d) = maclaurin(z);
        return (p, f, d, 0.0);
    }
    if r >= R_ASYMP {
        return large(z);
    }
    let th = z.arg();
    let unit = C::from_polar(1.0, th);
    let start_r = if th.abs() <= FRAC_PI_3 { R_ASYMP } else { R_SERIES };
    let z0 = unit * start_r;
    let (mut p, mut f, mut d, mut e) = if start_r == R_ASYMP {
        large(z0)
    } else {
        let (p, f, d) = maclaurin(z0);
        (p, f, d, 0.0)
    };
    let dist = z - z0;
    let n = (dist.norm() / STEP).ceil().max(1.0) as usize;
    let h = dist / n as f64;
    let mut zc = z0;
    for _ in 0..n {
        let (np, nf, nd) = taylor_step(zc, p, f, d, h);
        let (a, b, c, ee) = normalise(np, nf, nd, e);
        p = a;
        f = b;
        d = c;
        e = ee;
        zc += h;
    }
    (p, f, d, e)
}

/// All orders of `kind` at `z` with a shared scale.
pub fn airy_values(kind: AiryKind, z: C) -> AiryValues {
    match kind {
        AiryKind::Ai => {
            let (p1, f, d, e) = triple(z);
            AiryValues { p2: z * p1 - d, p1, f, d, e }
        }
        AiryKind::Ci => {
            let w = omega();
            let wz = w * z;
            let (p1, f, d, e) = triple(wz);
            let p2 = wz * p1 - d;
            let k = ci_prefactor();
            // omega^{-1} = omega^2, omega^{-2} = omega
            AiryValues { p2: k * w * p2, p1: k * w * w * p1, f: k * f, d: k * w * d, e }
        }
    }
}

/// `Ai(k, z)` or `Ci(k, z)` as a scaled number; order `-k` is the k-th derivative.
pub fn airy_scaled(kind: AiryKind, order: i32, z: C) -> Result<Scaled> {
    if !(-2..=2).contains(&order) {
        return Err(Error::UnsupportedOrder(order));
    }
    airy_values(kind, z).order(order, z)
}

/// Plain complex value; `Overflow` when it exceeds the floating range.
pub fn airy_eval(kind: AiryKind, order: i32, z: C) -> Result<C> {
    let s = airy_scaled(kind, order, z)?;
    if s.ln_abs() > 709.0 {
        return Err(Error::Overflow);
    }
    Ok(s.to_c())
}

/// `(log|value|, value/|value|)`.
pub fn airy_log_eval(kind: AiryKind, order: i32, z: C) -> Result<(f64, C)> {
    let s = airy_scaled(kind, order, z)?;
    Ok((s.ln_abs(), s.phase()))
}

/// `C_Ai(Y) = Ai(2, Y) / Ai(1, Y)`.
pub fn c_ai_ratio(y: C) -> Result<C> {
    let v = airy_values(AiryKind::Ai, y);
    let size = v.p2.norm() + v.f.norm() + v.d.norm();
    if v.p1.norm() <= 1e-13 * size {
        return Err(Error::NearZeroDenominator(v.p1.norm() * v.e.exp()));
    }
    Ok(v.p2 / v.p1)
}

/// Handle type mirroring the free functions.
#[derive(Debug, Clone, Copy, Default)]
pub struct AiryFamily;

impl AiryFamily {
    pub fn eval(&self, kind: AiryKind, order: i32, z: C) -> Result<C> {
        airy_eval(kind, order, z)
    }

    pub fn log_eval(&self, kind: AiryKind, order: i32, z: C) -> Result<(f64, C)> {
        airy_log_eval(kind, order, z)
    }
}
