//! The differential operators of the Orr-Sommerfeld problem evaluated on mesh
//! functions carrying derivatives up to order four.
//!
//! `Orr = Ray_alpha + Diff = -Airy + Reg`.

use crate::flow::Flow;
use crate::mesh::MeshFunction;
use num_complex::Complex64;

type C = Complex64;

fn pointwise(flow: &Flow, f: &MeshFunction, op: impl Fn(&Flow, usize, [C; 5]) -> C) -> MeshFunction {
    let n = f.len();
    let mut out = vec![C::new(0.0, 0.0); n];
    for (i, slot) in out.iter_mut().enumerate() {
        let v = [f.d[0][i], f.d[1][i], f.d[2][i], f.d[3][i], f.d[4][i]];
        *slot = op(flow, i, v);
    }
    MeshFunction { d: vec![out], log_scale: f.log_scale }
}

/// `(U - c)(phi'' - a^2 phi) - U'' phi`.
pub fn ray(flow: &Flow, f: &MeshFunction) -> MeshFunction {
    let a2 = flow.alpha * flow.alpha;
    pointwise(flow, f, |fl, i, v| fl.umc(i) * (v[2] - v[0] * a2) - fl.u[i][2] * v[0])
}

/// `-eps (phi'''' - 2 a^2 phi'' + a^4 phi)`.
pub fn diff(flow: &Flow, f: &MeshFunction) -> MeshFunction {
    let a2 = flow.alpha * flow.alpha;
    pointwise(flow, f, |fl, _, v| -fl.eps * (v[4] - v[2] * (2.0 * a2) + v[0] * (a2 * a2)))
}

/// `eps phi'''' - (U - c + 2 eps a^2) phi''`.
pub fn airy(flow: &Flow, f: &MeshFunction) -> MeshFunction {
    let a2 = flow.alpha * flow.alpha;
    pointwise(flow, f, |fl, i, v| fl.eps * v[4] - (fl.umc(i) + fl.eps * (2.0 * a2)) * v[2])
}

/// `-(eps a^4 + U'' + a^2 (U - c)) phi`.
pub fn reg(flow: &Flow, f: &MeshFunction) -> MeshFunction {
    let a2 = flow.alpha * flow.alpha;
    pointwise(flow, f, |fl, i, v| -(fl.eps * (a2 * a2) + fl.u[i][2] + fl.umc(i) * a2) * v[0])
}

/// `Ray_alpha + Diff`.
pub fn orr(flow: &Flow, f: &MeshFunction) -> MeshFunction {
    ray(flow, f).add(&diff(flow, f))
}

/// `-Airy + Reg`.
pub fn orr_split(flow: &Flow, f: &MeshFunction) -> MeshFunction {
    reg(flow, f).sub(&airy(flow, f))
}

/// `Reg(phi)` with derivatives up to order two (needs `phi` to order two).
pub fn reg_with_derivs(flow: &Flow, f: &MeshFunction) -> MeshFunction {
    let a2 = flow.alpha * flow.alpha;
    let n = f.len();
    let mut d = vec![vec![C::new(0.0, 0.0); n]; 3];
    for i in 0..n {
        let u = &flow.u[i];
        let r0 = -(flow.eps * (a2 * a2) + u[2] + (u[0] - flow.c) * a2);
        let r1 = -(u[3] + u[1] * a2);
        let r2 = -(u[4] + u[2] * a2);
        let (p0, p1, p2) = (f.d[0][i], f.d[1][i], f.d[2][i]);
        d[0][i] = r0 * p0;
        d[1][i] = r1 * p0 + r0 * p1;
        d[2][i] = r2 * p0 + r1 * p1 * 2.0 + r0 * p2;
    }
    MeshFunction { d, log_scale: f.log_scale }
}
