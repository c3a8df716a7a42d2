//! Inviscid layer: the Rayleigh solutions `phi_{1,0} = U - c` and `phi_{2,0}`,
//! the Green function of `Ray_0`, the solvers `RaySolver_0`, `RaySolver_alpha`
//! and the weighted norms `X_p`, `Y_p`.

use crate::error::{Error, Result};
use crate::flow::Flow;
use crate::mesh::{path_integral, MeshFunction};
use num_complex::Complex64;
use serde::Serialize;

type C = Complex64;

/// Rayleigh fundamental pair on the contour of a [`Flow`].
#[derive(Debug, Clone)]
pub struct Rayleigh<'a> {
    pub flow: &'a Flow,
    pub phi1: MeshFunction,
    pub phi2: MeshFunction,
    /// `J(z) = int_{1/2}^z (U - c)^{-2}` along the contour.
    pub j: Vec<C>,
}

/// `phi_{1,0} = U - c` with derivatives to order four.
pub fn phi_1_0(flow: &Flow) -> MeshFunction {
    let mut d = (0..5).map(|_| Vec::with_capacity(flow.n())).collect::<Vec<_>>();
    for u in &flow.u {
        d[0].push(u[0] - flow.c);
        for k in 1..5 {
            d[k].push(u[k]);
        }
    }
    MeshFunction::from_orders(d)
}

/// `int_{1/2}^z (U - c)^{-2}` at the nodes, continued along the contour (below `z_c`).
fn j_integral(flow: &Flow) -> Result<Vec<C>> {
    let n = flow.n();
    let mut inv2 = Vec::with_capacity(n);
    let mut min_gap = f64::INFINITY;
    for i in 0..n {
        let d = flow.umc(i);
        min_gap = min_gap.min(d.norm());
        inv2.push(1.0 / (d * d));
    }
    if min_gap < 1e-12 {
        return Err(Error::BranchAmbiguity(
            "the critical point lies on the integration contour".into(),
        ));
    }
    let left = flow.mesh.cumulative_left(&inv2);
    let z_c = flow.z_c;
    let half = C::new(0.5, 0.0);
    let one = C::new(1.0, 0.0);
    // Path from 1/2 to 1 on the same side of z_c as the contour.
    let path = if z_c.re > 0.45 && z_c.im < 0.05 {
        let depth = z_c.im.min(0.0) - 0.05;
        vec![half, C::new(0.5, depth), C::new(1.0, depth), one]
    } else {
        vec![half, one]
    };
    let p = flow.profile.clone();
    let c = flow.c;
    let anchor = path_integral(&path, z_c, |z| {
        let d = p.u(z) - c;
        1.0 / (d * d)
    })?;
    let shift = anchor - left[n - 1];
    Ok(left.into_iter().map(|v| v + shift).collect())
}

impl<'a> Rayleigh<'a> {
    pub fn new(flow: &'a Flow) -> Result<Self> {
        let j = j_integral(flow)?;
        let phi1 = phi_1_0(flow);
        let n = flow.n();
        let mut d = (0..5).map(|_| Vec::with_capacity(n)).collect::<Vec<_>>();
        for i in 0..n {
            let u = &flow.u[i];
            let w = u[0] - flow.c;
            let ji = j[i];
            d[0].push(w * ji);
            d[1].push(u[1] * ji + 1.0 / w);
            d[2].push(u[2] * ji);
            d[3].push(u[3] * ji + u[2] / (w * w));
            d[4].push(u[4] * ji + u[3] * 2.0 / (w * w) - u[2] * u[1] * 2.0 / (w * w * w));
        }
        Ok(Rayleigh { flow, phi1, phi2: MeshFunction::from_orders(d), j })
    }

    /// `phi_{2,0}` at an arbitrary contour point.
    pub fn phi2_at(&self, z: C) -> Result<C> {
        let jz = self.flow.mesh.interpolate(&self.j, z)?;
        Ok((self.flow.profile.u(z) - self.flow.c) * jz)
    }

    /// `G_{R,0}(x, z)`, normalised so that `Ray_0 int G f = f`.
    pub fn green(&self, x: C, z: C, z_after_x: bool) -> Result<C> {
        let p = &self.flow.profile;
        let c = self.flow.c;
        let ux = p.u(x) - c;
        let v = if z_after_x {
            (p.u(z) - c) * self.phi2_at(x)? / ux
        } else {
            self.phi2_at(z)? * ux / ux
        };
        Ok(-v)
    }

    /// `RaySolver_0(f)`: solves `Ray_0 phi = f` with `phi'(1) = 0`.
    ///
    /// Orders three and four of the result need `f'` and `f''`.
    pub fn solve0(&self, f: &MeshFunction) -> MeshFunction {
        let flow = self.flow;
        let n = flow.n();
        let w1: Vec<C> = (0..n).map(|i| self.phi2.d[0][i] * f.d[0][i] / flow.umc(i)).collect();
        let p = flow.mesh.cumulative_left(&w1);
        let q = flow.mesh.cumulative_right(&f.d[0]);
        let fo = f.max_order().min(2);
        let order = 2 + fo;
        let mut d = vec![vec![C::new(0.0, 0.0); n]; order + 1];
        for i in 0..n {
            let u = &flow.u[i];
            let w = u[0] - flow.c;
            let phi = -(self.phi1.d[0][i] * p[i] + self.phi2.d[0][i] * q[i]);
            let d1 = -(self.phi1.d[1][i] * p[i] + self.phi2.d[1][i] * q[i]);
            let d2 = (u[2] * phi + f.d[0][i]) / w;
            d[0][i] = phi;
            d[1][i] = d1;
            d[2][i] = d2;
            if fo >= 1 {
                let d3 = (u[3] * phi + u[2] * d1 + f.d[1][i] - u[1] * d2) / w;
                d[3][i] = d3;
                if fo >= 2 {
                    d[4][i] = (u[4] * phi + u[3] * d1 * 2.0 + f.d[2][i] - u[1] * d3 * 2.0) / w;
                }
            }
        }
        MeshFunction { d, log_scale: f.log_scale }
    }

    /// `alpha^2 (U - c) g` with derivatives up to order two.
    fn shifted_source(&self, g: &MeshFunction) -> MeshFunction {
        let flow = self.flow;
        let a2 = flow.alpha * flow.alpha;
        let n = flow.n();
        let ord = g.max_order().min(2);
        let mut d = vec![vec![C::new(0.0, 0.0); n]; ord + 1];
        for i in 0..n {
            let u = &flow.u[i];
            let w = u[0] - flow.c;
            d[0][i] = w * g.d[0][i] * a2;
            if ord >= 1 {
                d[1][i] = (u[1] * g.d[0][i] + w * g.d[1][i]) * a2;
            }
            if ord >= 2 {
                d[2][i] = (u[2] * g.d[0][i] + u[1] * g.d[1][i] * 2.0 + w * g.d[2][i]) * a2;
            }
        }
        MeshFunction { d, log_scale: g.log_scale }
    }

    /// `RaySolver_alpha(f) = sum_j S_j(f)` with the term norms.
    pub fn solve_alpha_history(&self, f: &MeshFunction, tol: f64) -> Result<(MeshFunction, Vec<f64>)> {
        let mut term = self.solve0(f);
        let mut norms = vec![term.sup_mantissa(0)];
        let mut sum = term.clone();
        if self.flow.alpha == 0.0 || norms[0] == 0.0 {
            return Ok((sum, norms));
        }
        let mut rising = 0;
        for j in 1..40 {
            term = self.solve0(&self.shifted_source(&term));
            let nj = term.sup_mantissa(0);
            sum = sum.add(&term);
            if nj >= norms[j - 1] {
                rising += 1;
                if rising >= 3 {
                    return Err(Error::SeriesDiverging { terms: j + 1 });
                }
            } else {
                rising = 0;
            }
            norms.push(nj);
            if nj <= tol * norms[0] {
                return Ok((sum, norms));
            }
        }
        Err(Error::SeriesDiverging { terms: 40 })
    }

    /// `RaySolver_alpha(f)`: solves `Ray_alpha phi = f` with `phi'(1) = 0`.
    pub fn solve_alpha(&self, f: &MeshFunction, tol: f64) -> Result<MeshFunction> {
        Ok(self.solve_alpha_history(f, tol)?.0)
    }

    /// Exact Rayleigh solutions `phi_{j,alpha}` seeded by `phi_{j,0}`.
    pub fn phi_alpha(&self, j: usize, tol: f64) -> Result<MeshFunction> {
        if self.flow.alpha > 0.3 {
            return Err(Error::HypothesisViolated(format!(
                "alpha = {} exceeds the long-wave limit 0.3",
                self.flow.alpha
            )));
        }
        let seed = match j {
            1 => &self.phi1,
            2 => &self.phi2,
            _ => return Err(Error::UsageError(format!("no Rayleigh solution {j}"))),
        };
        if self.flow.alpha == 0.0 {
            return Ok(seed.clone());
        }
        let corr = self.solve_alpha(&self.shifted_source(seed), tol)?;
        Ok(seed.add(&corr))
    }
}

/// Weighted sup norms `X_p`, `Y_p` of a mesh function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormReport {
    pub x_p: Vec<f64>,
    pub y_p: Vec<f64>,
    pub p_max: usize,
}

/// `X_p = sup sum_k |(z - z_c)^k f^(k)|` and `Y_p` (best constant of the
/// `1`, `1 + |log(z - z_c)|`, `1 + |z - z_c|^{1-l}` envelope) over the nodes.
pub fn norm_report(f: &MeshFunction, nodes: &[C], z_c: C, p_max: usize) -> NormReport {
    let p_max = p_max.min(f.max_order());
    let s = f.log_scale.exp();
    let mut x_p = vec![0.0f64; p_max.min(2) + 1];
    let mut y_p = vec![0.0f64; p_max + 1];
    for (i, z) in nodes.iter().enumerate() {
        let r = *z - z_c;
        let mut acc = 0.0;
        let mut ymax: f64 = 0.0;
        for k in 0..=p_max {
            let v = f.d[k][i].norm() * s;
            acc += v * r.norm().powi(k as i32);
            if k < x_p.len() {
                x_p[k] = x_p[k].max(acc);
            }
            let w = match k {
                0 => 1.0,
                1 => 1.0 + r.ln().norm(),
                l => 1.0 + r.norm().powi(1 - l as i32),
            };
            ymax = ymax.max(v / w);
            y_p[k] = y_p[k].max(ymax);
        }
    }
    NormReport { x_p, y_p, p_max }
}
