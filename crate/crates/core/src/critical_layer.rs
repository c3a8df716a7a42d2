//! Langer transformation and the approximate Green function of the modified
//! Airy operator `eps d^4 - (U - c + 2 eps a^2) d^2`.
//!
//! With `X = eta(x)/delta`, `Z = eta(z)/delta`, `w = zdot^{1/2}` and
//! `kappa = delta^3/eps = 1/U'_c`,
//!
//! ```text
//! G(x,z) = -kappa w(x) { Ai(X) Ct(2,z) + a1(x) (z - z_c)/delta            x > z
//!                      { Ci(X) At(2,z) + a2(x) + a1(x) (x - z_c)/delta    x < z
//! ```
//!
//! where `Ct`, `At` are the `w`-weighted primitives. The overall sign makes
//! `eps d_z^3 G` jump by `+1` across `x = z` (limit from `z > x` minus limit
//! from `z < x`).

use crate::airy::{airy_values, AiryKind, AiryValues};
use crate::error::{Error, Result};
use crate::flow::Flow;
use crate::jet::{airy_outer, Jet};
use crate::mesh::MeshFunction;
use crate::scaled::Scaled;
use crate::series;
use num_complex::Complex64;

type C = Complex64;

const LANGER_TERMS: usize = 96;
const LANGER_TAIL: usize = 8;
const LANGER_TOL: f64 = 1e-13;
/// `airy_solver_inf` refuses to iterate when the probed error-operator norm reaches this.
pub const CONTRACTION_LIMIT: f64 = 0.5;
const NEUMANN_MAX: usize = 60;

/// `eta(z)` with `(U - c) zdot^2 = U'_c eta` and `eta ~ z - z_c`, as a power
/// series in `s = z - z_c`, sampled at the mesh nodes.
#[derive(Debug, Clone)]
pub struct LangerMap {
    pub z_c: C,
    pub delta: C,
    pub du_c: C,
    pub eta_coeffs: Vec<C>,
    /// Coefficients of `w = zdot^{1/2} = (eta')^{-1/2}`.
    pub w_coeffs: Vec<C>,
    /// `eta` and four derivatives at each node.
    pub eta: Vec<[C; 5]>,
    /// `w` and four derivatives at each node.
    pub w: Vec<[C; 5]>,
    pub zdot: Vec<C>,
}

/// Builds the Langer map on the flow's contour.
///
/// `eta = s g(s)` with `g = (3/2 h)^{2/3}`, `h = s^{-3/2} int_0^s t^{1/2} r(t) dt` and
/// `r = ((U - c)/(U'_c s))^{1/2}`; every power is taken on a series with unit
/// constant term, so the branch is fixed by `eta'(z_c) = 1`.
pub fn build_langer(flow: &Flow) -> Result<LangerMap> {
    let n = LANGER_TERMS;
    let u = flow.profile.taylor(flow.z_c, n + 2);
    let u1 = u[1];
    if u1.norm() < 1e-10 {
        return Err(Error::DerivativeVanishes { re: flow.z_c.re, im: flow.z_c.im });
    }
    let q: Vec<C> = (0..n).map(|k| u[k + 1] / u1).collect();
    let r = series::pow(&q, 0.5, n);
    let h: Vec<C> = r.iter().enumerate().map(|(k, &x)| x * (1.5 / (k as f64 + 1.5))).collect();
    let g = series::pow(&h, 2.0 / 3.0, n);
    let mut eta_coeffs = vec![C::new(0.0, 0.0); n + 1];
    eta_coeffs[1..].copy_from_slice(&g);
    let deta: Vec<C> = (0..n).map(|k| eta_coeffs[k + 1] * (k + 1) as f64).collect();
    let w_coeffs = series::pow(&deta, -0.5, n);

    let radius = flow.mesh.nodes.iter().map(|z| (z - flow.z_c).norm()).fold(0.0, f64::max);
    let tail = series::tail_ratio(&eta_coeffs, radius, LANGER_TAIL)
        .max(series::tail_ratio(&w_coeffs, radius, LANGER_TAIL));
    if !(tail <= LANGER_TOL) {
        return Err(Error::BranchFailure(format!(
            "Langer series does not converge on the contour (tail ratio {tail:.2e} at radius {radius:.3})"
        )));
    }
    let mut eta = Vec::with_capacity(flow.n());
    let mut w = Vec::with_capacity(flow.n());
    let mut zdot = Vec::with_capacity(flow.n());
    for &z in &flow.mesh.nodes {
        let s = z - flow.z_c;
        let e = series::eval_derivs(&eta_coeffs, s, 4);
        let ww = series::eval_derivs(&w_coeffs, s, 4);
        if e[1].norm() < 1e-12 {
            return Err(Error::BranchFailure(format!("eta' vanishes at z = {z}")));
        }
        zdot.push(1.0 / e[1]);
        eta.push([e[0], e[1], e[2], e[3], e[4]]);
        w.push([ww[0], ww[1], ww[2], ww[3], ww[4]]);
    }
    Ok(LangerMap { z_c: flow.z_c, delta: flow.delta, du_c: u1, eta_coeffs, w_coeffs, eta, w, zdot })
}

impl LangerMap {
    /// `eta` and `w` with four derivatives at an arbitrary point.
    pub fn eval(&self, z: C) -> ([C; 5], [C; 5]) {
        let s = z - self.z_c;
        let e = series::eval_derivs(&self.eta_coeffs, s, 4);
        let w = series::eval_derivs(&self.w_coeffs, s, 4);
        ([e[0], e[1], e[2], e[3], e[4]], [w[0], w[1], w[2], w[3], w[4]])
    }

    /// Largest relative defect of `(U - c) zdot^2 = U'_c eta` over the nodes.
    pub fn identity_residual(&self, flow: &Flow) -> f64 {
        (0..flow.n())
            .map(|i| {
                let l = flow.umc(i) * self.zdot[i] * self.zdot[i];
                let r = self.du_c * self.eta[i][0];
                (l - r).norm() / r.norm().max(1e-300)
            })
            .filter(|x| x.is_finite())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum GreenPart {
    Localized,
    Nonlocalized,
    Full,
}

/// The approximate Airy Green function sampled on the contour nodes, with the
/// weighted primitives and matching coefficients it needs.
pub struct AiryGreen<'a> {
    pub flow: &'a Flow,
    pub langer: LangerMap,
    /// `1 / U'_c`.
    pub kappa: C,
    /// `eta / delta` at the nodes.
    pub big_z: Vec<C>,
    pub ai: Vec<AiryValues>,
    pub ci: Vec<AiryValues>,
    pub ct1: Vec<Scaled>,
    pub ct2: Vec<Scaled>,
    pub at1: Vec<Scaled>,
    pub at2: Vec<Scaled>,
    pub a1: Vec<C>,
    pub a2: Vec<C>,
    /// `m = eps w''/w - 2 eps a^2` and two derivatives: `AiryErr(f) = m A''`.
    pub m: Vec<[C; 3]>,
    k_a: Vec<Jet>,
    k_c: Vec<Jet>,
    k_1: Vec<[C; 5]>,
    k_2: Vec<[C; 5]>,
}

fn val(a: &AiryValues) -> Scaled {
    Scaled::new(a.f, a.e)
}

fn der(a: &AiryValues) -> Scaled {
    Scaled::new(a.d, a.e)
}

impl<'a> AiryGreen<'a> {
    pub fn new(flow: &'a Flow) -> Result<Self> {
        if flow.reynolds.is_none() {
            return Err(Error::UsageError("the Airy Green function needs a finite Reynolds number".into()));
        }
        let langer = build_langer(flow)?;
        let n = flow.n();
        let delta = flow.delta;
        let inv_d = 1.0 / delta;
        let kappa = 1.0 / flow.du_c;
        let big_z: Vec<C> = langer.eta.iter().map(|e| e[0] * inv_d).collect();
        let ai: Vec<AiryValues> = big_z.iter().map(|&z| airy_values(AiryKind::Ai, z)).collect();
        let ci: Vec<AiryValues> = big_z.iter().map(|&z| airy_values(AiryKind::Ci, z)).collect();

        let mesh = &flow.mesh;
        let wa: Vec<Scaled> = (0..n).map(|i| val(&ai[i]) * langer.w[i][0]).collect();
        let wc: Vec<Scaled> = (0..n).map(|i| val(&ci[i]) * langer.w[i][0]).collect();
        let ct1: Vec<Scaled> = mesh.cumulative_left_scaled(&wc).into_iter().map(|s| s * inv_d).collect();
        let ct2: Vec<Scaled> = mesh.cumulative_left_scaled(&ct1).into_iter().map(|s| s * inv_d).collect();
        // Beyond z = 1 the map is continued linearly, which turns the tails of the
        // primitives into plain Airy primitives at Z(1).
        let last = n - 1;
        let w1 = langer.w[last][0];
        let a_end = &ai[last];
        let anchor1 = Scaled::new(a_end.p1, a_end.e) * (w1 * w1 * w1);
        let anchor2 = Scaled::new(a_end.p2, a_end.e) * (w1 * w1 * w1 * w1 * w1);
        let at1: Vec<Scaled> =
            mesh.cumulative_right_scaled(&wa).into_iter().map(|s| anchor1 - s * inv_d).collect();
        let at2: Vec<Scaled> =
            mesh.cumulative_right_scaled(&at1).into_iter().map(|s| anchor2 - s * inv_d).collect();

        let mut a1 = Vec::with_capacity(n);
        let mut a2 = Vec::with_capacity(n);
        let mut k_a = Vec::with_capacity(n);
        let mut k_c = Vec::with_capacity(n);
        let mut k_1 = Vec::with_capacity(n);
        let mut k_2 = Vec::with_capacity(n);
        let mut m = Vec::with_capacity(n);
        let eps = flow.eps;
        let a2c = flow.alpha * flow.alpha;
        for i in 0..n {
            let xj = langer.eta[i].map(|e| e * inv_d);
            let ai_x = Jet::compose(airy_outer(&ai[i], big_z[i]), ai[i].e, &xj);
            let ci_x = Jet::compose(airy_outer(&ci[i], big_z[i]), ci[i].e, &xj);
            let wj = Jet::plain(langer.w[i]);
            let ka = wj.mul(&ai_x);
            let kc = wj.mul(&ci_x);
            let at1j = Jet::primitive(at1[i], &ka, inv_d);
            let ct1j = Jet::primitive(ct1[i], &kc, inv_d);
            let at2j = Jet::primitive(at2[i], &at1j, inv_d);
            let ct2j = Jet::primitive(ct2[i], &ct1j, inv_d);
            let a1j = ci_x.mul(&at1j).sub(&ai_x.mul(&ct1j)).to_plain();
            let a2j = ai_x.mul(&ct2j).sub(&ci_x.mul(&at2j)).to_plain();
            let s = Jet::plain([
                (mesh.nodes[i] - flow.z_c) * inv_d,
                inv_d,
                C::new(0.0, 0.0),
                C::new(0.0, 0.0),
                C::new(0.0, 0.0),
            ]);
            let a1p = Jet::plain(a1j);
            let k1 = wj.mul(&a1p);
            let k2 = wj.mul(&Jet::plain(a2j).add(&a1p.mul(&s)));
            a1.push(a1j[0]);
            a2.push(a2j[0]);
            k_a.push(ka);
            k_c.push(kc);
            k_1.push(k1.v);
            k_2.push(k2.v);

            let w = langer.w[i];
            let (w0, w1, w2, w3, w4) = (w[0], w[1], w[2], w[3], w[4]);
            let m0 = eps * w2 / w0 - eps * (2.0 * a2c);
            let m1 = eps * (w3 / w0 - w2 * w1 / (w0 * w0));
            let m2 = eps
                * (w4 / w0 - w3 * w1 * 2.0 / (w0 * w0) - w2 * w2 / (w0 * w0)
                    + w2 * w1 * w1 * 2.0 / (w0 * w0 * w0));
            m.push([m0, m1, m2]);
        }
        Ok(AiryGreen { flow, langer, kappa, big_z, ai, ci, ct1, ct2, at1, at2, a1, a2, m, k_a, k_c, k_1, k_2 })
    }

    pub fn delta(&self) -> C {
        self.flow.delta
    }

    /// `Ct(k, z_i)` or `At(k, z_i)` for `k` in `{1, 2}`.
    pub fn weighted_primitive(&self, kind: AiryKind, order: u8, i: usize) -> Result<Scaled> {
        match (kind, order) {
            (AiryKind::Ai, 1) => Ok(self.at1[i]),
            (AiryKind::Ai, 2) => Ok(self.at2[i]),
            (AiryKind::Ci, 1) => Ok(self.ct1[i]),
            (AiryKind::Ci, 2) => Ok(self.ct2[i]),
            _ => Err(Error::UnsupportedOrder(order as i32)),
        }
    }

    /// `d_z^k G(x_i, z_j)` for `k <= 3` on one explicit branch: `z_above` selects
    /// the `x < z` formula.
    pub fn green_branch(&self, i: usize, j: usize, z_above: bool, k: usize, part: GreenPart) -> C {
        let inv_d = 1.0 / self.delta();
        let zj = self.flow.mesh.nodes[j];
        let w = &self.langer.w;
        let xj = self.langer.eta[j];
        let loc = !matches!(part, GreenPart::Nonlocalized);
        let non = !matches!(part, GreenPart::Localized);
        // d_z^k of the z-dependent primitive
        let prim = |p2: Scaled, p1: Scaled, f: &AiryValues| -> Scaled {
            match k {
                0 => p2,
                1 => p1 * inv_d,
                2 => val(f) * (w[j][0] * inv_d * inv_d),
                _ => {
                    (val(f) * w[j][1] + der(f) * (w[j][0] * xj[1] * inv_d)) * (inv_d * inv_d)
                }
            }
        };
        let mut v = C::new(0.0, 0.0);
        if z_above {
            if loc {
                v += (val(&self.ci[i]) * prim(self.at2[j], self.at1[j], &self.ai[j])).to_c();
            }
            if non && k == 0 {
                let xi = self.flow.mesh.nodes[i];
                v += self.a2[i] + self.a1[i] * (xi - self.flow.z_c) * inv_d;
            }
        } else {
            if loc {
                v += (val(&self.ai[i]) * prim(self.ct2[j], self.ct1[j], &self.ci[j])).to_c();
            }
            if non {
                match k {
                    0 => v += self.a1[i] * (zj - self.flow.z_c) * inv_d,
                    1 => v += self.a1[i] * inv_d,
                    _ => {}
                }
            }
        }
        -self.kappa * w[i][0] * v
    }

    /// `G(x_i, z_j)` (or one of its parts), branch chosen by node order.
    pub fn green(&self, i: usize, j: usize, part: GreenPart) -> C {
        self.green_branch(i, j, j > i, 0, part)
    }

    /// Jumps `[G], [d G], [d^2 G], [eps d^3 G]` across `x = z = z_i`.
    pub fn jumps(&self, i: usize) -> [C; 4] {
        let mut out = [C::new(0.0, 0.0); 4];
        for (k, slot) in out.iter_mut().enumerate() {
            let d = self.green_branch(i, i, true, k, GreenPart::Full)
                - self.green_branch(i, i, false, k, GreenPart::Full);
            *slot = if k == 3 { d * self.flow.eps } else { d };
        }
        out
    }

    /// `AirySolver(g)` with derivatives of orders `0..=4`, followed by
    /// `AiryErr(g)` with orders `0..=2`.
    pub fn solve_with_err(&self, g: &MeshFunction) -> (MeshFunction, MeshFunction) {
        let flow = self.flow;
        let mesh = &flow.mesh;
        let n = flow.n();
        let g0 = &g.d[0];
        let inv_d = 1.0 / self.delta();
        let w = &self.langer.w;
        let ia_src: Vec<Scaled> = (0..n).map(|i| self.k_a[i].get(0) * g0[i]).collect();
        let ic_src: Vec<Scaled> = (0..n).map(|i| self.k_c[i].get(0) * g0[i]).collect();
        let i1_src: Vec<C> = (0..n).map(|i| self.k_1[i][0] * g0[i]).collect();
        let i2_src: Vec<C> = (0..n).map(|i| self.k_2[i][0] * g0[i]).collect();
        let ia = mesh.cumulative_right_scaled(&ia_src);
        let ic = mesh.cumulative_left_scaled(&ic_src);
        let i1 = mesh.cumulative_right(&i1_src);
        let i2 = mesh.cumulative_left(&i2_src);
        let mut d = vec![vec![C::new(0.0, 0.0); n]; 5];
        let mut e = vec![vec![C::new(0.0, 0.0); n]; 3];
        let k = -self.kappa;
        let inv_eps = 1.0 / flow.eps;
        for i in 0..n {
            let s = (mesh.nodes[i] - flow.z_c) * inv_d;
            d[0][i] = k * ((self.ct2[i] * ia[i]).to_c() + s * i1[i] + (self.at2[i] * ic[i]).to_c() + i2[i]);
            d[1][i] = k * inv_d * ((self.ct1[i] * ia[i]).to_c() + i1[i] + (self.at1[i] * ic[i]).to_c());
            let sv = (val(&self.ci[i]) * ia[i] + val(&self.ai[i]) * ic[i]).to_c();
            let tv = (der(&self.ci[i]) * ia[i] + der(&self.ai[i]) * ic[i]).to_c();
            let [_, w1, w2, _, _] = w[i];
            let w0 = w[i][0];
            let e1 = self.langer.eta[i][1] * inv_d;
            let e2 = self.langer.eta[i][2] * inv_d;
            let kd = k * inv_d * inv_d;
            d[2][i] = kd * w0 * sv;
            d[3][i] = kd * (w1 * sv + w0 * e1 * tv);
            d[4][i] = kd * (w2 * sv + w1 * e1 * tv * 2.0 + w0 * e2 * tv + w0 * e1 * e1 * self.big_z[i] * sv)
                + g0[i] * inv_eps;
            let [m0, m1, m2] = self.m[i];
            e[0][i] = m0 * d[2][i];
            e[1][i] = m1 * d[2][i] + m0 * d[3][i];
            e[2][i] = m2 * d[2][i] + m1 * d[3][i] * 2.0 + m0 * d[4][i];
        }
        (MeshFunction { d, log_scale: g.log_scale }, MeshFunction { d: e, log_scale: g.log_scale })
    }

    /// `AirySolver(g) = int_0^1 G(x, z) g(x) dx`.
    pub fn solve(&self, g: &MeshFunction) -> MeshFunction {
        self.solve_with_err(g).0
    }

    /// `AiryErr(g)`, so that `Airy(AirySolver(g)) = g + AiryErr(g)`.
    pub fn err(&self, g: &MeshFunction) -> MeshFunction {
        self.solve_with_err(g).1
    }

    /// Largest ratio `sup|AiryErr(f)| / sup|f|` over a small probe basis.
    pub fn contraction_ratio(&self) -> f64 {
        let flow = self.flow;
        let zc = flow.z_c;
        let d = self.delta();
        let probes: Vec<Box<dyn Fn(C) -> C>> = vec![
            Box::new(|_| C::new(1.0, 0.0)),
            Box::new(|z| z),
            Box::new(|z| z * z),
            Box::new(move |z| {
                let x = (z - zc) / d;
                (-(x * x) * 0.5).exp()
            }),
        ];
        probes
            .iter()
            .map(|p| {
                let f = MeshFunction::from_orders(vec![flow.mesh.nodes.iter().map(|&z| p(z)).collect()]);
                let e = self.err(&f);
                e.sup(0) / f.sup(0).max(1e-300)
            })
            .fold(0.0, f64::max)
    }

    /// Fails with `ContractionNotCertified` when the probed ratio reaches the limit.
    pub fn certify(&self) -> Result<f64> {
        let r = self.contraction_ratio();
        if !(r < CONTRACTION_LIMIT) {
            return Err(Error::ContractionNotCertified(r));
        }
        Ok(r)
    }

    /// `AirySolver_inf(g) = sum_n AirySolver(E_n)`, `E_0 = g`, `E_n = -AiryErr(E_{n-1})`,
    /// together with the relative sizes `|E_n| / |g|`.
    pub fn solve_inf_history(&self, g: &MeshFunction, tol: f64) -> Result<(MeshFunction, Vec<f64>)> {
        let n = self.flow.n();
        let norm0 = g.sup_mantissa(0);
        let mut total = MeshFunction { d: vec![vec![C::new(0.0, 0.0); n]; 5], log_scale: g.log_scale };
        if norm0 == 0.0 {
            return Ok((total, vec![]));
        }
        let mut hist = Vec::new();
        let mut src = g.truncated(0);
        let mut rising = 0;
        let mut prev = f64::INFINITY;
        for _ in 0..NEUMANN_MAX {
            let (a, e) = self.solve_with_err(&src);
            total = total.add(&a);
            src = e.truncated(0).scale(C::new(-1.0, 0.0));
            let r = src.sup_mantissa(0) / norm0 * (src.log_scale - g.log_scale).exp();
            hist.push(r);
            if r < tol {
                return Ok((total, hist));
            }
            if r >= prev {
                rising += 1;
                if rising >= 3 {
                    return Err(Error::SeriesDiverging { terms: hist.len() });
                }
            } else {
                rising = 0;
            }
            prev = r;
        }
        Err(Error::NoConvergence { iterations: NEUMANN_MAX, residual: prev })
    }

    /// Exact inverse of `Airy` with the Green-function boundary behaviour.
    pub fn solve_inf(&self, g: &MeshFunction, tol: f64) -> Result<MeshFunction> {
        self.certify()?;
        Ok(self.solve_inf_history(g, tol)?.0)
    }

    /// `AirySolver(eps f'''')` with orders `0..=2`, computed after moving three
    /// `x`-derivatives onto the kernel:
    ///
    /// `int G eps f'''' = eps [G f''' - G_x f'' + G_xx f']_0^1 - eps int G_xxx f'`.
    ///
    /// `f` needs orders `0..=3`; only `f'` and `f''` are used in the interior.
    pub fn solve_singular(&self, f: &MeshFunction) -> Result<MeshFunction> {
        let flow = self.flow;
        let n = flow.n();
        if f.max_order() < 3 {
            return Err(Error::UsageError("singular source needs derivatives up to order 3".into()));
        }
        let last = n - 1;
        let f1s = f.sup_mantissa(1).max(f.sup_mantissa(0));
        if f.d[1][last].norm() > 1e-8 * f1s.max(1.0) {
            return Err(Error::HypothesisViolated(format!(
                "f'(1) = {} must vanish for the singular-source representation",
                f.at(1, last)
            )));
        }
        let mesh = &flow.mesh;
        let eps = flow.eps;
        let inv_d = 1.0 / self.delta();
        let fd = |k: usize, i: usize| f.d[k][i];
        // eps sum_k (-1)^k K^(k) f^(3-k) at a node
        let bnd_s = |jet: &Jet, i: usize| -> Scaled {
            let s = jet.v[0] * fd(3, i) - jet.v[1] * fd(2, i) + jet.v[2] * fd(1, i);
            Scaled::new(s * eps, jet.e)
        };
        let bnd_c = |k: &[C; 5], i: usize| -> C { (k[0] * fd(3, i) - k[1] * fd(2, i) + k[2] * fd(1, i)) * eps };

        let sa: Vec<Scaled> = (0..n).map(|i| self.k_a[i].get(3) * (fd(1, i) * -eps)).collect();
        let sc: Vec<Scaled> = (0..n).map(|i| self.k_c[i].get(3) * (fd(1, i) * -eps)).collect();
        let s1: Vec<C> = (0..n).map(|i| self.k_1[i][3] * fd(1, i) * -eps).collect();
        let s2: Vec<C> = (0..n).map(|i| self.k_2[i][3] * fd(1, i) * -eps).collect();
        let ba = bnd_s(&self.k_a[last], last);
        let b1 = bnd_c(&self.k_1[last], last);
        let bc = bnd_s(&self.k_c[0], 0);
        let b2 = bnd_c(&self.k_2[0], 0);
        let ja: Vec<Scaled> = mesh.cumulative_right_scaled(&sa).into_iter().map(|v| v + ba).collect();
        let jc: Vec<Scaled> = mesh.cumulative_left_scaled(&sc).into_iter().map(|v| v - bc).collect();
        let j1: Vec<C> = mesh.cumulative_right(&s1).into_iter().map(|v| v + b1).collect();
        let j2: Vec<C> = mesh.cumulative_left(&s2).into_iter().map(|v| v - b2).collect();

        let k = -self.kappa;
        let mut d = vec![vec![C::new(0.0, 0.0); n]; 3];
        for i in 0..n {
            let s = (mesh.nodes[i] - flow.z_c) * inv_d;
            let q = |o: usize| -> C {
                (self.ct2[i] * self.k_a[i].get(o)).to_c() + s * self.k_1[i][o]
                    - (self.at2[i] * self.k_c[i].get(o)).to_c()
                    - self.k_2[i][o]
            };
            let q3 = q(3);
            let q4 = q(4);
            let p3 = (self.ct1[i] * self.k_a[i].get(3)).to_c() + self.k_1[i][3]
                - (self.at1[i] * self.k_c[i].get(3)).to_c();
            let w0 = self.langer.w[i][0];
            let (f1, f2) = (fd(1, i), fd(2, i));
            d[0][i] = k * ((self.ct2[i] * ja[i]).to_c() + s * j1[i] + (self.at2[i] * jc[i]).to_c() + j2[i]);
            d[1][i] = k * inv_d * ((self.ct1[i] * ja[i]).to_c() + j1[i] + (self.at1[i] * jc[i]).to_c())
                + k * eps * f1 * q3;
            let sv = (val(&self.ci[i]) * ja[i] + val(&self.ai[i]) * jc[i]).to_c();
            d[2][i] = k * inv_d * inv_d * w0 * sv + k * eps * (f2 * q3 + f1 * (p3 * inv_d * 2.0 + q4));
        }
        Ok(MeshFunction { d, log_scale: f.log_scale })
    }
}
