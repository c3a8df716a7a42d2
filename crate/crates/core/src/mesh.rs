//! Composite Chebyshev-Lobatto panels along a polygonal contour from 0 to 1.
//!
//! The contour runs along `[0, 1]` unless the critical point sits within `gap`
//! above it (or anywhere below it), in which case it dips to
//! `Re z_c + i (Im z_c - gap)` so that it always passes below `z_c`.

use crate::error::{Error, Result};
use crate::scaled::Scaled;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

type C = Complex64;

/// Polynomial degree per panel.
pub const DEGREE: usize = 16;
pub const NPP: usize = DEGREE + 1;

struct Reference {
    x: [f64; NPP],
    /// `int_{-1}^{x_i}` as a matrix acting on node values.
    q: Vec<[f64; NPP]>,
    /// `d/dx` at the nodes.
    d: Vec<[f64; NPP]>,
    /// Barycentric weights.
    bw: [f64; NPP],
}

fn reference() -> &'static Reference {
    static CELL: OnceLock<Reference> = OnceLock::new();
    CELL.get_or_init(build_reference)
}

fn cheb_t(n: usize, x: f64) -> f64 {
    (n as f64 * x.clamp(-1.0, 1.0).acos()).cos()
}

fn build_reference() -> Reference {
    let p = DEGREE;
    let mut x = [0.0; NPP];
    for (j, xj) in x.iter_mut().enumerate() {
        *xj = -(PI * j as f64 / p as f64).cos();
    }
    // Coefficient transform: a_k = (2/p) sum'' f_j T_k(x_j), first and last halved.
    let mut to_coef = vec![[0.0; NPP]; NPP];
    for (k, row) in to_coef.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let mut w = 2.0 / p as f64;
            if j == 0 || j == p {
                w *= 0.5;
            }
            if k == 0 || k == p {
                w *= 0.5;
            }
            *slot = w * cheb_t(k, x[j]);
        }
    }
    let mut q = vec![[0.0; NPP]; NPP];
    let mut d = vec![[0.0; NPP]; NPP];
    for j in 0..NPP {
        let a: Vec<f64> = (0..NPP).map(|k| to_coef[k][j]).collect();
        // integral coefficients (degree p + 1)
        let mut b = [0.0; NPP + 1];
        for (k, &ak) in a.iter().enumerate() {
            match k {
                0 => b[1] += ak,
                1 => b[2] += ak / 4.0,
                _ => {
                    b[k + 1] += ak / (2.0 * (k as f64 + 1.0));
                    b[k - 1] -= ak / (2.0 * (k as f64 - 1.0));
                }
            }
        }
        let eval_b = |t: f64| -> f64 { b.iter().enumerate().map(|(n, c)| c * cheb_t(n, t)).sum() };
        let base = eval_b(-1.0);
        for i in 0..NPP {
            q[i][j] = eval_b(x[i]) - base;
        }
        // derivative coefficients
        let mut c = [0.0; NPP + 1];
        for k in (0..p).rev() {
            c[k] = c[k + 2] + 2.0 * (k as f64 + 1.0) * a[k + 1];
        }
        c[0] *= 0.5;
        for i in 0..NPP {
            d[i][j] = (0..NPP).map(|n| c[n] * cheb_t(n, x[i])).sum();
        }
    }
    let mut bw = [0.0; NPP];
    for (j, w) in bw.iter_mut().enumerate() {
        *w = if j % 2 == 0 { 1.0 } else { -1.0 };
        if j == 0 || j == p {
            *w *= 0.5;
        }
    }
    Reference { x, q, d, bw }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    pub a: C,
    pub b: C,
}

impl Panel {
    pub fn jac(&self) -> C {
        (self.b - self.a) * 0.5
    }

    pub fn point(&self, t: f64) -> C {
        self.a + (self.b - self.a) * ((t + 1.0) * 0.5)
    }

    /// Distance from `z` to the segment.
    pub fn distance(&self, z: C) -> f64 {
        let d = self.b - self.a;
        let t = ((z - self.a) * d.conj()).re / d.norm_sqr();
        let t = t.clamp(0.0, 1.0);
        (self.a + d * t - z).norm()
    }
}

/// Mesh construction knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshOptions {
    /// Largest panel length.
    pub max_len: f64,
    /// Panel length relative to its distance from `z_c`.
    pub grading: f64,
    /// Panel length in units of the local Airy scale `|delta| / |Z|^{1/2}`.
    pub airy_len: f64,
    /// Extra uniform refinement factor (1 = none).
    pub refine: usize,
}

impl Default for MeshOptions {
    fn default() -> Self {
        MeshOptions { max_len: 0.1, grading: 0.4, airy_len: 1.5, refine: 1 }
    }
}

/// Contour mesh carrying panel nodes (shared endpoints are duplicated).
#[derive(Debug, Clone)]
pub struct ComplexMesh {
    pub z_c: C,
    pub delta: Option<C>,
    pub vertices: Vec<C>,
    pub panels: Vec<Panel>,
    pub nodes: Vec<C>,
    /// Clenshaw-Curtis weights including the complex `dz`.
    pub weights: Vec<C>,
}

impl ComplexMesh {
    /// Builds the contour and panels around `z_c` with critical-layer scale `delta`.
    pub fn new(z_c: C, delta: Option<C>, opts: MeshOptions) -> Result<Self> {
        let scale = delta.map(|d| d.norm()).unwrap_or(0.0);
        let gap = if scale > 0.0 { scale.min(0.2) } else { 0.02 };
        let mut vertices = vec![C::new(0.0, 0.0)];
        if z_c.re >= 0.0 && z_c.re < 1.0 && z_c.im < gap {
            vertices.push(C::new(z_c.re, z_c.im - gap));
        }
        vertices.push(C::new(1.0, 0.0));
        let mut panels = Vec::new();
        for w in vertices.windows(2) {
            if (w[1] - w[0]).norm() > 0.0 {
                split(Panel { a: w[0], b: w[1] }, z_c, scale, &opts, 0, &mut panels)?;
            }
        }
        if opts.refine > 1 {
            let r = opts.refine;
            panels = panels
                .iter()
                .flat_map(|p| {
                    (0..r).map(move |k| Panel {
                        a: p.a + (p.b - p.a) * (k as f64 / r as f64),
                        b: p.a + (p.b - p.a) * ((k + 1) as f64 / r as f64),
                    })
                })
                .collect();
        }
        let r = reference();
        let mut nodes = Vec::with_capacity(panels.len() * NPP);
        let mut weights = Vec::with_capacity(panels.len() * NPP);
        for p in &panels {
            let jac = p.jac();
            for j in 0..NPP {
                nodes.push(p.point(r.x[j]));
                weights.push(jac * r.q[NPP - 1][j]);
            }
        }
        Ok(ComplexMesh { z_c, delta, vertices, panels, nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn first(&self) -> usize {
        0
    }

    pub fn last(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Whether the contour coincides with the real segment.
    pub fn is_real(&self) -> bool {
        self.vertices.len() == 2
    }

    /// `int_0^{z_i} f` at every node.
    pub fn cumulative_left(&self, f: &[C]) -> Vec<C> {
        let r = reference();
        let mut out = vec![C::new(0.0, 0.0); f.len()];
        let mut run = C::new(0.0, 0.0);
        for (k, p) in self.panels.iter().enumerate() {
            let jac = p.jac();
            let off = k * NPP;
            for i in 0..NPP {
                let mut s = C::new(0.0, 0.0);
                for j in 0..NPP {
                    s += f[off + j] * r.q[i][j];
                }
                out[off + i] = run + s * jac;
            }
            run = out[off + NPP - 1];
        }
        out
    }

    /// `int_{z_i}^1 f` at every node.
    pub fn cumulative_right(&self, f: &[C]) -> Vec<C> {
        let r = reference();
        let mut out = vec![C::new(0.0, 0.0); f.len()];
        let mut run = C::new(0.0, 0.0);
        for (k, p) in self.panels.iter().enumerate().rev() {
            let jac = p.jac();
            let off = k * NPP;
            for i in 0..NPP {
                let mut s = C::new(0.0, 0.0);
                for j in 0..NPP {
                    s += f[off + j] * (r.q[NPP - 1][j] - r.q[i][j]);
                }
                out[off + i] = run + s * jac;
            }
            run = out[off];
        }
        out
    }

    /// Scaled variant of [`cumulative_left`](Self::cumulative_left).
    pub fn cumulative_left_scaled(&self, f: &[Scaled]) -> Vec<Scaled> {
        self.cumulative_scaled(f, false)
    }

    /// Scaled variant of [`cumulative_right`](Self::cumulative_right).
    pub fn cumulative_right_scaled(&self, f: &[Scaled]) -> Vec<Scaled> {
        self.cumulative_scaled(f, true)
    }

    fn cumulative_scaled(&self, f: &[Scaled], right: bool) -> Vec<Scaled> {
        let r = reference();
        let mut out = vec![Scaled::ZERO; f.len()];
        let mut run = Scaled::ZERO;
        let order: Vec<usize> = if right {
            (0..self.panels.len()).rev().collect()
        } else {
            (0..self.panels.len()).collect()
        };
        let mut m = [C::new(0.0, 0.0); NPP];
        for k in order {
            let p = &self.panels[k];
            let jac = p.jac();
            let off = k * NPP;
            let e_ref = f[off..off + NPP]
                .iter()
                .filter(|s| !s.is_zero())
                .map(|s| s.e + s.m.norm().ln())
                .fold(f64::NEG_INFINITY, f64::max);
            if e_ref == f64::NEG_INFINITY {
                for i in 0..NPP {
                    out[off + i] = run;
                }
                continue;
            }
            for j in 0..NPP {
                m[j] = f[off + j].to_c_shifted(e_ref);
            }
            for i in 0..NPP {
                let mut s = C::new(0.0, 0.0);
                for (j, mj) in m.iter().enumerate() {
                    let w = if right { r.q[NPP - 1][j] - r.q[i][j] } else { r.q[i][j] };
                    s += mj * w;
                }
                out[off + i] = run + Scaled::new(s * jac, e_ref);
            }
            run = if right { out[off] } else { out[off + NPP - 1] };
        }
        out
    }

    /// `int_0^1 f`.
    pub fn integrate(&self, f: &[C]) -> C {
        f.iter().zip(&self.weights).map(|(a, w)| a * w).sum()
    }

    /// Panel-wise spectral derivative.
    pub fn differentiate(&self, f: &[C]) -> Vec<C> {
        let r = reference();
        let mut out = vec![C::new(0.0, 0.0); f.len()];
        for (k, p) in self.panels.iter().enumerate() {
            let inv = 1.0 / p.jac();
            let off = k * NPP;
            for i in 0..NPP {
                let mut s = C::new(0.0, 0.0);
                for j in 0..NPP {
                    s += f[off + j] * r.d[i][j];
                }
                out[off + i] = s * inv;
            }
        }
        out
    }

    /// Panel index and reference coordinate of a point on the contour.
    pub fn locate(&self, z: C) -> Result<(usize, f64)> {
        let mut best = (usize::MAX, 0.0, f64::INFINITY);
        for (k, p) in self.panels.iter().enumerate() {
            let d = p.b - p.a;
            let t = (((z - p.a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
            let dist = (p.a + d * t - z).norm();
            if dist < best.2 {
                best = (k, 2.0 * t - 1.0, dist);
            }
        }
        if best.2 > 1e-9 * (1.0 + z.norm()) {
            return Err(Error::QuadratureFailure(format!(
                "point {z} is not on the integration contour"
            )));
        }
        Ok((best.0, best.1))
    }

    /// Barycentric interpolation of node data at a contour point.
    pub fn interpolate(&self, f: &[C], z: C) -> Result<C> {
        let (k, t) = self.locate(z)?;
        let r = reference();
        let off = k * NPP;
        let mut num = C::new(0.0, 0.0);
        let mut den = 0.0;
        for j in 0..NPP {
            let dx = t - r.x[j];
            if dx.abs() < 1e-15 {
                return Ok(f[off + j]);
            }
            let w = r.bw[j] / dx;
            num += f[off + j] * w;
            den += w;
        }
        Ok(num / den)
    }

    /// Point on the contour at normalised arclength `s` in `[0, 1]`.
    pub fn point_at(&self, s: f64) -> C {
        let lens: Vec<f64> = self.vertices.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
        let total: f64 = lens.iter().sum();
        let mut target = s.clamp(0.0, 1.0) * total;
        for (i, l) in lens.iter().enumerate() {
            if target <= *l || i + 1 == lens.len() {
                let w = &self.vertices[i..i + 2];
                return w[0] + (w[1] - w[0]) * (target / l).min(1.0);
            }
            target -= l;
        }
        self.vertices[self.vertices.len() - 1]
    }

    /// Number of nodes within `radius` of `Re z_c` (grading diagnostic).
    pub fn nodes_near(&self, radius: f64) -> usize {
        let x = C::new(self.z_c.re, 0.0);
        self.nodes.iter().filter(|z| (*z - x).norm() <= radius).count()
    }
}

fn split(p: Panel, z_c: C, scale: f64, o: &MeshOptions, depth: usize, out: &mut Vec<Panel>) -> Result<()> {
    let len = (p.b - p.a).norm();
    let dist = p.distance(z_c);
    let mut limit = o.max_len.min(o.grading * dist.max(1e-12));
    if scale > 0.0 {
        let zabs = (dist / scale).max(1.0);
        limit = limit.min(o.airy_len * scale / zabs.sqrt());
    }
    if len <= limit {
        out.push(p);
        return Ok(());
    }
    if depth > 60 {
        return Err(Error::QuadratureFailure("panel refinement exceeded depth budget".into()));
    }
    let m = (p.a + p.b) * 0.5;
    split(Panel { a: p.a, b: m }, z_c, scale, o, depth + 1, out)?;
    split(Panel { a: m, b: p.b }, z_c, scale, o, depth + 1, out)
}

/// `int f` along a polyline, with panels graded toward `z_c`.
pub fn path_integral(vertices: &[C], z_c: C, f: impl Fn(C) -> C) -> Result<C> {
    let r = reference();
    let opts = MeshOptions::default();
    let mut panels = Vec::new();
    for w in vertices.windows(2) {
        if (w[1] - w[0]).norm() > 0.0 {
            split(Panel { a: w[0], b: w[1] }, z_c, 0.0, &opts, 0, &mut panels)?;
        }
    }
    let mut total = C::new(0.0, 0.0);
    for p in &panels {
        let jac = p.jac();
        for j in 0..NPP {
            total += f(p.point(r.x[j])) * r.q[NPP - 1][j] * jac;
        }
    }
    Ok(total)
}

/// Complex samples of a function and its derivatives on a mesh; the represented
/// values are `d[k][i] * exp(log_scale)`.
#[derive(Debug, Clone)]
pub struct MeshFunction {
    pub d: Vec<Vec<C>>,
    pub log_scale: f64,
}

impl MeshFunction {
    pub fn zeros(n: usize, order: usize) -> Self {
        MeshFunction { d: vec![vec![C::new(0.0, 0.0); n]; order + 1], log_scale: 0.0 }
    }

    pub fn from_orders(d: Vec<Vec<C>>) -> Self {
        MeshFunction { d, log_scale: 0.0 }
    }

    pub fn max_order(&self) -> usize {
        self.d.len() - 1
    }

    pub fn len(&self) -> usize {
        self.d[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.d[0].is_empty()
    }

    /// Derivative of order `k` at node `i` including the global scale.
    pub fn at(&self, k: usize, i: usize) -> C {
        self.d[k][i] * self.log_scale.exp()
    }

    /// Same function expressed with a different global scale.
    pub fn rescaled(&self, log_scale: f64) -> MeshFunction {
        let f = (self.log_scale - log_scale).exp();
        MeshFunction {
            d: self.d.iter().map(|v| v.iter().map(|x| x * f).collect()).collect(),
            log_scale,
        }
    }

    /// Keeps orders `0..=order`.
    pub fn truncated(&self, order: usize) -> MeshFunction {
        MeshFunction { d: self.d[..=order.min(self.max_order())].to_vec(), log_scale: self.log_scale }
    }

    pub fn scale(&self, k: C) -> MeshFunction {
        MeshFunction {
            d: self.d.iter().map(|v| v.iter().map(|x| x * k).collect()).collect(),
            log_scale: self.log_scale,
        }
    }

    /// `a * self + b * other` over their common orders.
    pub fn combine(&self, a: C, other: &MeshFunction, b: C) -> MeshFunction {
        let ls = self.log_scale.max(other.log_scale);
        let fa = a * (self.log_scale - ls).exp();
        let fb = b * (other.log_scale - ls).exp();
        let n = self.max_order().min(other.max_order());
        let d = (0..=n)
            .map(|k| self.d[k].iter().zip(&other.d[k]).map(|(x, y)| x * fa + y * fb).collect())
            .collect();
        MeshFunction { d, log_scale: ls }
    }

    pub fn add(&self, other: &MeshFunction) -> MeshFunction {
        self.combine(C::new(1.0, 0.0), other, C::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &MeshFunction) -> MeshFunction {
        self.combine(C::new(1.0, 0.0), other, C::new(-1.0, 0.0))
    }

    /// Largest modulus of order `k` over the nodes (scale included).
    pub fn sup(&self, k: usize) -> f64 {
        self.d[k].iter().map(|x| x.norm()).fold(0.0, f64::max) * self.log_scale.exp()
    }

    /// Largest modulus of order `k` without the global scale factor.
    pub fn sup_mantissa(&self, k: usize) -> f64 {
        self.d[k].iter().map(|x| x.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn reference_integrates_polynomials() {
        let mesh = ComplexMesh::new(c(0.3, 0.01), None, MeshOptions::default()).unwrap();
        let f: Vec<C> = mesh.nodes.iter().map(|z| z * z * 3.0).collect();
        let i = mesh.cumulative_left(&f);
        for (z, v) in mesh.nodes.iter().zip(&i) {
            assert!((z * z * z - v).norm() < 1e-13);
        }
        let r = mesh.cumulative_right(&f);
        for (z, v) in mesh.nodes.iter().zip(&r) {
            assert!((1.0 - z * z * z - v).norm() < 1e-13);
        }
        let d = mesh.differentiate(&f);
        for (z, v) in mesh.nodes.iter().zip(&d) {
            assert!((z * 6.0 - v).norm() < 1e-9);
        }
    }

    #[test]
    fn contour_passes_below_critical_point() {
        let zc = c(0.2, -0.003);
        let mesh = ComplexMesh::new(zc, Some(c(0.01, -0.005)), MeshOptions::default()).unwrap();
        assert_eq!(mesh.vertices.len(), 3);
        assert!(mesh.vertices[1].im < zc.im);
        assert!(mesh.nodes.windows(2).all(|w| (w[1] - w[0]).norm() < 0.1 + 1e-12));
        assert_eq!(mesh.nodes[0], c(0.0, 0.0));
        assert_eq!(*mesh.nodes.last().unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn scaled_cumulative_matches_plain() {
        let mesh = ComplexMesh::new(c(0.3, 0.05), None, MeshOptions::default()).unwrap();
        let f: Vec<C> = mesh.nodes.iter().map(|z| (z * 40.0).exp()).collect();
        let fs: Vec<Scaled> = f.iter().map(|&x| Scaled::from_c(x)).collect();
        let a = mesh.cumulative_right(&f);
        let b = mesh.cumulative_right_scaled(&fs);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y.to_c()).norm() <= 1e-12 * x.norm());
        }
    }
}
