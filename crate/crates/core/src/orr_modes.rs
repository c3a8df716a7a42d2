//! The four exact Orr-Sommerfeld solutions and their boundary ratios.
//!
//! Every construction starts from a seed `phi` with known error `O = Orr(phi)`
//! and removes it with the shared step
//!
//! ```text
//! F = RaySolver_alpha(-O),  phi += F + AirySolver(Diff F),  O <- Iter(O)
//! ```
//!
//! which relies on `Orr = Ray_alpha + Diff = -Airy + Reg`. Slow modes start
//! from the Rayleigh solutions, fast modes from `Ai(2, Z)` and `Ci(2, Z)` after
//! one exact Airy inversion.

use crate::airy::{airy_values, AiryKind};
use crate::critical_layer::AiryGreen;
use crate::error::{Error, Result};
use crate::flow::Flow;
use crate::jet::{airy2_outer, Jet};
use crate::mesh::MeshFunction;
use crate::operators;
use crate::rayleigh::Rayleigh;
use crate::scaled::Scaled;
use num_complex::Complex64;

type C = Complex64;

const ITER_MAX: usize = 40;
/// Relative tolerance for the inner Rayleigh and Airy Neumann series.
const INNER_TOL: f64 = 1e-14;

/// One constructed solution with its convergence record.
#[derive(Debug, Clone)]
pub struct Mode {
    /// Derivatives of orders `0..=4`.
    pub phi: MeshFunction,
    /// `|O_n| / |O_0|` for the errors removed by each step.
    pub history: Vec<f64>,
    /// `sup |Orr(phi)|` relative to the size of its individual terms.
    pub residual: f64,
    /// Largest relative gap between the two operator factorizations.
    pub identity_gap: f64,
}

impl Mode {
    /// `phi^(k)` at node `i` as a scaled number.
    pub fn trace(&self, k: usize, i: usize) -> Scaled {
        Scaled::new(self.phi.d[k][i], self.phi.log_scale)
    }
}

/// Modes `phi_1..phi_4`, their boundary traces and the ratios `K_1..K_4`.
#[derive(Debug, Clone)]
pub struct OrrModeSet {
    pub modes: Vec<Mode>,
    /// `[mode][end][order]` with `end` 0 for `z = 0` and 1 for `z = 1`.
    pub traces: Vec<[[Scaled; 4]; 2]>,
    pub k: [C; 4],
}

/// `sum_{k<=2} sup |(z - z_c)^k f^(k)|` on mantissas (scale excluded).
pub fn x2_mantissa(f: &MeshFunction, flow: &Flow) -> f64 {
    let p = f.max_order().min(2);
    let mut best: f64 = 0.0;
    for (i, z) in flow.mesh.nodes.iter().enumerate() {
        let r = (z - flow.z_c).norm();
        let mut acc = 0.0;
        for k in 0..=p {
            acc += f.d[k][i].norm() * r.powi(k as i32);
        }
        best = best.max(acc);
    }
    best
}

/// Residual of `Orr(phi)` relative to the magnitude of its terms, and the gap
/// between `Ray_alpha + Diff` and `-Airy + Reg`.
pub fn orr_residual(flow: &Flow, phi: &MeshFunction) -> (f64, f64) {
    let a = operators::orr_split(flow, phi);
    let b = operators::orr(flow, phi);
    let a2 = flow.alpha * flow.alpha;
    let mut scale: f64 = 0.0;
    let mut r: f64 = 0.0;
    let mut gap: f64 = 0.0;
    for i in 0..flow.n() {
        let u = &flow.u[i];
        let w = u[0] - flow.c;
        let t = w.norm() * (phi.d[2][i].norm() + a2 * phi.d[0][i].norm())
            + flow.eps.norm() * (phi.d[4][i].norm() + 2.0 * a2 * phi.d[2][i].norm() + a2 * a2 * phi.d[0][i].norm())
            + u[2].norm() * phi.d[0][i].norm();
        scale = scale.max(t);
        r = r.max(a.d[0][i].norm());
        gap = gap.max((a.d[0][i] - b.d[0][i]).norm());
    }
    if scale == 0.0 {
        return (0.0, 0.0);
    }
    (r / scale, gap / scale)
}

/// Shared engine for the mode series on one `(c, alpha, R)`.
pub struct ModeBuilder<'a> {
    pub flow: &'a Flow,
    pub ray: Rayleigh<'a>,
    pub green: AiryGreen<'a>,
    pub tol: f64,
}

impl<'a> ModeBuilder<'a> {
    /// Builds the solvers and certifies the Airy contraction.
    pub fn new(flow: &'a Flow, tol: f64) -> Result<Self> {
        let ray = Rayleigh::new(flow)?;
        let green = AiryGreen::new(flow)?;
        green.certify()?;
        Ok(ModeBuilder { flow, ray, green, tol })
    }

    /// `AirySolver(D)` and the error `-AiryErr(D) + Reg(AirySolver(D))` it leaves.
    fn airy_step(&self, d: &MeshFunction) -> (MeshFunction, MeshFunction) {
        let (a, e) = self.green.solve_with_err(d);
        let o = operators::reg_with_derivs(self.flow, &a).sub(&e);
        (a, o)
    }

    /// `Iter(f) = AiryErr(Diff F) - Reg(AirySolver(Diff F))`, `F = RaySolver_alpha(f)`.
    pub fn iter_operator(&self, f: &MeshFunction) -> Result<MeshFunction> {
        let big_f = self.ray.solve_alpha(f, INNER_TOL)?;
        let d = operators::diff(self.flow, &big_f);
        let (_, o) = self.airy_step(&d);
        Ok(o.scale(C::new(-1.0, 0.0)))
    }

    /// Largest `|Iter f|_X2 / |f|_X2` over twelve probes: low-order polynomials and
    /// exponentials spread over the channel, and Gaussians centred on `z_c` at
    /// several multiples of the critical-layer width.
    pub fn iter_norm(&self) -> Result<f64> {
        let flow = self.flow;
        let zc = flow.z_c;
        let d = flow.delta;
        let one = C::new(1.0, 0.0);
        let zero = C::new(0.0, 0.0);
        type Probe = Box<dyn Fn(C) -> [C; 3]>;
        let gauss = move |w: f64, moment: bool| -> Probe {
            Box::new(move |z: C| {
                let l = d * w;
                let s = z - zc;
                let x = s / l;
                let g = (-(x * x) * 0.5).exp();
                let g1 = -x / l * g;
                let g2 = (x * x - 1.0) / (l * l) * g;
                if moment {
                    [s * g, g + s * g1, g1 * 2.0 + s * g2]
                } else {
                    [g, g1, g2]
                }
            })
        };
        let probes: Vec<Probe> = vec![
            Box::new(move |_| [one, zero, zero]),
            Box::new(move |z| [z, one, zero]),
            Box::new(move |z| [z * z, z * 2.0, one * 2.0]),
            Box::new(move |z| [z * z * z, z * z * 3.0, z * 6.0]),
            Box::new(move |z| [(one - z) * (one - z), (z - one) * 2.0, one * 2.0]),
            Box::new(|z: C| [z.exp(), z.exp(), z.exp()]),
            Box::new(|z: C| [(-z).exp(), -(-z).exp(), (-z).exp()]),
            Box::new(|z: C| {
                let k = std::f64::consts::FRAC_PI_2;
                [(z * k).sin(), (z * k).cos() * k, -(z * k).sin() * k * k]
            }),
            gauss(1.0, false),
            gauss(3.0, false),
            gauss(10.0, false),
            gauss(3.0, true),
        ];
        let mut worst: f64 = 0.0;
        for p in &probes {
            let vals: Vec<[C; 3]> = flow.mesh.nodes.iter().map(|&z| p(z)).collect();
            let f = MeshFunction::from_orders((0..3).map(|k| vals.iter().map(|v| v[k]).collect()).collect());
            let g = self.iter_operator(&f)?;
            let num = x2_mantissa(&g, flow) * g.log_scale.exp();
            let den = x2_mantissa(&f, flow) * f.log_scale.exp();
            worst = worst.max(num / den.max(1e-300));
        }
        Ok(worst)
    }

    /// Removes the error `o` of `phi` by repeated Rayleigh-Airy steps.
    fn run_series(&self, mut phi: MeshFunction, mut o: MeshFunction, mut hist: Vec<f64>) -> Result<Mode> {
        let ls = phi.log_scale;
        let norm0 = x2_mantissa(&o, self.flow) * (o.log_scale - ls).exp();
        let rel = |o: &MeshFunction| {
            if norm0 == 0.0 {
                0.0
            } else {
                x2_mantissa(o, self.flow) * (o.log_scale - ls).exp() / norm0
            }
        };
        let mut prev = hist.last().copied().unwrap_or(1.0);
        let mut rising = 0;
        let mut steps = 0;
        loop {
            let r = rel(&o);
            hist.push(r);
            if r <= self.tol {
                break;
            }
            if r >= prev && steps > 0 {
                rising += 1;
                if rising >= 3 {
                    return Err(Error::SeriesDiverging { terms: hist.len() });
                }
            } else {
                rising = 0;
            }
            prev = r;
            steps += 1;
            if steps > ITER_MAX {
                return Err(Error::NoConvergence { iterations: ITER_MAX, residual: r });
            }
            let src = o.scale(C::new(-1.0, 0.0));
            let big_f = self.ray.solve_alpha(&src, INNER_TOL)?;
            let d = operators::diff(self.flow, &big_f);
            let (a, next) = self.airy_step(&d);
            phi = phi.add(&big_f).add(&a);
            o = next;
        }
        let (residual, identity_gap) = orr_residual(self.flow, &phi);
        Ok(Mode { phi, history: hist, residual, identity_gap })
    }

    /// `phi_j = phi_{j,alpha} + AirySolver(Diff phi_{j,alpha}) + ...` for `j` in `{1, 2}`.
    pub fn slow_mode(&self, j: usize) -> Result<Mode> {
        let seed = self.ray.phi_alpha(j, INNER_TOL)?;
        let d = operators::diff(self.flow, &seed);
        let (a, o) = self.airy_step(&d);
        let phi = seed.add(&a);
        self.run_series(phi, o, vec![1.0])
    }

    /// `F(2, Z(z))` with four derivatives, sharing one global scale.
    pub fn fast_seed(&self, kind: AiryKind) -> MeshFunction {
        let g = &self.green;
        let n = self.flow.n();
        let inv_d = 1.0 / self.flow.delta;
        let jets: Vec<Jet> = (0..n)
            .map(|i| {
                let v = match kind {
                    AiryKind::Ai => g.ai[i],
                    AiryKind::Ci => g.ci[i],
                };
                let xj = g.langer.eta[i].map(|e| e * inv_d);
                Jet::compose(airy2_outer(&v, g.big_z[i]), v.e, &xj)
            })
            .collect();
        let top = jets
            .iter()
            .map(|j| j.e + j.v.iter().map(|x| x.norm()).fold(0.0, f64::max).max(1e-300).ln())
            .fold(f64::NEG_INFINITY, f64::max);
        let mut d = vec![vec![C::new(0.0, 0.0); n]; 5];
        for (i, j) in jets.iter().enumerate() {
            let f = (j.e - top).exp();
            for k in 0..5 {
                d[k][i] = j.v[k] * f;
            }
        }
        MeshFunction { d, log_scale: top }
    }

    /// Fast modes `phi_3` (normalized to `phi_3(0) = 1`) and `phi_4` (log-scaled).
    pub fn fast_mode(&self, kind: AiryKind) -> Result<Mode> {
        let seed = self.fast_seed(kind);
        let o0 = operators::orr_split(self.flow, &seed);
        let ainf = self.green.solve_inf(&o0, INNER_TOL)?;
        let phi = seed.add(&ainf);
        let o = operators::reg_with_derivs(self.flow, &ainf);
        let mut mode = self.run_series(phi, o, vec![1.0])?;
        if kind == AiryKind::Ai {
            let v0 = mode.phi.d[0][0];
            if v0.norm() == 0.0 {
                return Err(Error::DegenerateDenominator("phi_3(0)"));
            }
            // phi / phi(0) is the mantissa over its value at the wall
            mode.phi = mode.phi.scale(1.0 / v0);
            mode.phi.log_scale = 0.0;
        }
        Ok(mode)
    }

    /// All four modes with traces and ratios.
    pub fn build_all(&self) -> Result<OrrModeSet> {
        let wrap = |r: Result<Mode>, j: usize| {
            r.map_err(|e| Error::ModeConstructionFailed(format!("phi_{j}: {e}")))
        };
        let modes = vec![
            wrap(self.slow_mode(1), 1)?,
            wrap(self.slow_mode(2), 2)?,
            wrap(self.fast_mode(AiryKind::Ai), 3)?,
            wrap(self.fast_mode(AiryKind::Ci), 4)?,
        ];
        assemble(self.flow, modes)
    }
}

/// Collects boundary traces and ratios.
pub fn assemble(flow: &Flow, modes: Vec<Mode>) -> Result<OrrModeSet> {
    let last = flow.n() - 1;
    let traces: Vec<[[Scaled; 4]; 2]> = modes
        .iter()
        .map(|m| {
            let t = |i: usize| [m.trace(0, i), m.trace(1, i), m.trace(2, i), m.trace(3, i)];
            [t(0), t(last)]
        })
        .collect();
    let k = compute_ratios(&traces)?;
    Ok(OrrModeSet { modes, traces, k })
}

fn ratio(a: Scaled, b: Scaled, what: &'static str) -> Result<C> {
    if b.is_zero() || !b.is_finite() {
        return Err(Error::DegenerateDenominator(what));
    }
    Ok((a / b).to_c())
}

/// `K_1 = phi_1(0)/phi_1'(0)`, `K_2 = phi_1'(1)/phi_2'(1)`, `K_3 = phi_3(0)/phi_3'(0)`,
/// `K_4 = phi_4'(1)/phi_4'''(1)`.
pub fn compute_ratios(traces: &[[[Scaled; 4]; 2]]) -> Result<[C; 4]> {
    Ok([
        ratio(traces[0][0][0], traces[0][0][1], "phi_1'(0)")?,
        ratio(traces[0][1][1], traces[1][1][1], "phi_2'(1)")?,
        ratio(traces[2][0][0], traces[2][0][1], "phi_3'(0)")?,
        ratio(traces[3][1][1], traces[3][1][3], "phi_4'''(1)")?,
    ])
}

/// `delta * C_Ai(Z(0))` with `C_Ai = Ai(2, .)/Ai(1, .)`: leading term of `K_3`.
pub fn k3_leading(green: &AiryGreen) -> C {
    let z0 = green.big_z[0];
    let v = airy_values(AiryKind::Ai, z0);
    let e1 = green.langer.eta[0][1];
    green.flow.delta * v.p2 / (v.p1 * e1)
}

/// Convenience wrapper: all modes for one `(c, alpha, R)`.
pub fn build_modes(flow: &Flow, tol: f64) -> Result<OrrModeSet> {
    ModeBuilder::new(flow, tol)?.build_all()
}
