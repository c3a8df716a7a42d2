//! Dispersion relation, eigenvalue solver and branch scans.
//!
//! The boundary matrix has rows `phi(0), phi'(0), phi'(1), phi'''(1)` and
//! columns `phi_1..phi_4`; the column of `phi_4` is divided by `phi_4'''(1)` so
//! every entry is of moderate size. Roots are found by a complex secant
//! iteration finished with finite-difference Newton steps.

use crate::error::{Error, Result};
use crate::flow::Flow;
use crate::mesh::MeshOptions;
use crate::orr_modes::{build_modes, OrrModeSet};
use crate::profiles::ShearProfile;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

type C = Complex64;

/// Scaling exponent of the lower marginal branch, `alpha = A R^{-1/7}`.
pub const BETA_LOWER: f64 = 1.0 / 7.0;
/// Scaling exponent of the upper marginal branch, `alpha = A R^{-1/11}`.
pub const BETA_UPPER: f64 = 1.0 / 11.0;
/// Largest admissible `|c - U(0)|`.
pub const VALIDITY_RADIUS: f64 = 0.3;
/// Largest secant step in units of `|delta|`.
const MAX_STEP: f64 = 0.5;
/// Relative bisection tolerance on `A`.
pub const BISECT_TOL: f64 = 1e-3;

/// Which function the root finder drives to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootForm {
    /// The 4x4 determinant.
    Full,
    /// `K_3 - K_1 + K_2 / |U'(0)|^2`.
    Reduced,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub tol: f64,
    /// Relative residual required at the accepted root.
    pub residual_tol: f64,
    pub max_iter: usize,
    /// Stopping tolerance of the mode series.
    pub mode_tol: f64,
    pub form: RootForm,
    pub mesh: MeshOptions,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-10,
            residual_tol: 1e-8,
            max_iter: 40,
            mode_tol: 1e-12,
            form: RootForm::Full,
            mesh: MeshOptions::default(),
        }
    }
}

/// Everything computed at one trial `c`.
#[derive(Debug, Clone)]
pub struct DispersionEval {
    pub c: C,
    pub z_c: C,
    pub delta: C,
    pub matrix: [[C; 4]; 4],
    pub det: C,
    /// `|det|` over the product of the column norms.
    pub det_rel: f64,
    pub reduced: C,
    /// `|reduced|` over `|K_1| + |K_3|`.
    pub reduced_rel: f64,
    pub modes: OrrModeSet,
}

impl DispersionEval {
    fn value(&self, form: RootForm) -> C {
        match form {
            RootForm::Full => self.det,
            RootForm::Reduced => self.reduced,
        }
    }

    fn residual(&self, form: RootForm) -> f64 {
        match form {
            RootForm::Full => self.det_rel,
            RootForm::Reduced => self.reduced_rel,
        }
    }
}

/// `alpha = A R^{-beta}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchParams {
    pub beta: f64,
    pub a: f64,
}

#[derive(Debug, Clone)]
pub struct DispersionResult {
    pub alpha: f64,
    pub reynolds: f64,
    pub c: C,
    pub im_c: f64,
    /// `alpha Im c`.
    pub growth_rate: f64,
    /// Relative residual of the form that was solved.
    pub residual: f64,
    pub det_rel: f64,
    pub reduced_rel: f64,
    pub form: RootForm,
    pub branch_params: Option<BranchParams>,
    pub newton_iterations: usize,
    pub z_c_over_delta: C,
    pub mode_set: OrrModeSet,
}

/// Boundary matrix from the mode traces, `phi_4` column divided by `phi_4'''(1)`.
pub fn boundary_matrix(modes: &OrrModeSet) -> Result<[[C; 4]; 4]> {
    let t = &modes.traces;
    let norm4 = t[3][1][3];
    if norm4.is_zero() || !norm4.is_finite() {
        return Err(Error::DegenerateDenominator("phi_4'''(1)"));
    }
    let rows = [(0usize, 0usize), (0, 1), (1, 1), (1, 3)];
    let mut m = [[C::new(0.0, 0.0); 4]; 4];
    for (r, &(end, order)) in rows.iter().enumerate() {
        for j in 0..4 {
            let v = t[j][end][order];
            m[r][j] = if j == 3 { (v / norm4).to_c() } else { v.to_c() };
        }
    }
    Ok(m)
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det4(m: &[[C; 4]; 4]) -> C {
    let mut a = *m;
    let mut det = C::new(1.0, 0.0);
    for k in 0..4 {
        let p = (k..4).max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm())).unwrap_or(k);
        if a[p][k].norm() == 0.0 {
            return C::new(0.0, 0.0);
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..4 {
            let f = a[i][k] / a[k][k];
            for j in k..4 {
                let v = a[k][j];
                a[i][j] -= f * v;
            }
        }
    }
    det
}

fn column_norm_product(m: &[[C; 4]; 4]) -> f64 {
    (0..4)
        .map(|j| (0..4).map(|i| m[i][j].norm_sqr()).sum::<f64>().sqrt())
        .product()
}

/// `K_3 - K_1 + K_2 / |U'(0)|^2`.
pub fn reduced_from_ratios(k: &[C; 4], du0: f64) -> C {
    k[2] - k[0] + k[1] / (du0 * du0)
}

/// Builds the modes at `c` and evaluates both forms of the relation.
pub fn evaluate(c: C, alpha: f64, reynolds: f64, profile: &ShearProfile, opts: &SolveOptions) -> Result<DispersionEval> {
    let du1 = profile.derivs(C::new(1.0, 0.0), 1)[1];
    if du1.norm() > 1e-12 {
        return Err(Error::HypothesisViolated(format!(
            "the mode construction needs U'(1) = 0, profile '{}' has U'(1) = {:e}",
            profile.name(),
            du1.re
        )));
    }
    let flow = Flow::new(profile, c, alpha, Some(reynolds), opts.mesh)?;
    let modes = build_modes(&flow, opts.mode_tol)?;
    let matrix = boundary_matrix(&modes)?;
    let det = det4(&matrix);
    let det_rel = det.norm() / column_norm_product(&matrix);
    let reduced = reduced_from_ratios(&modes.k, profile.du0());
    let reduced_rel = reduced.norm() / (modes.k[0].norm() + modes.k[2].norm());
    Ok(DispersionEval { c, z_c: flow.z_c, delta: flow.delta, matrix, det, det_rel, reduced, reduced_rel, modes })
}

/// The 4x4 determinant at `c`.
pub fn dispersion_det(c: C, alpha: f64, reynolds: f64, profile: &ShearProfile) -> Result<C> {
    Ok(evaluate(c, alpha, reynolds, profile, &SolveOptions::default())?.det)
}

/// `K_3 - K_1 + K_2 / |U'(0)|^2` at `c`.
pub fn reduced_dispersion(c: C, alpha: f64, reynolds: f64, profile: &ShearProfile) -> Result<C> {
    Ok(evaluate(c, alpha, reynolds, profile, &SolveOptions::default())?.reduced)
}

/// `|delta|` evaluated with the wall slope.
pub fn wall_delta(alpha: f64, reynolds: f64, profile: &ShearProfile) -> f64 {
    (alpha * reynolds * profile.du0()).powf(-1.0 / 3.0)
}

/// Rayleigh prediction `U(0) + i |delta| / 2`.
pub fn default_seed(alpha: f64, reynolds: f64, profile: &ShearProfile) -> C {
    C::new(profile.u0(), 0.5 * wall_delta(alpha, reynolds, profile))
}

/// `U(0) + U'(0) z_c` with the critical point one wall-layer thickness out,
/// `z_c = 1.2 delta`, `delta = |delta| e^{-i pi / 6}`.
pub fn critical_layer_seed(alpha: f64, reynolds: f64, profile: &ShearProfile) -> C {
    let delta = C::from_polar(wall_delta(alpha, reynolds, profile), -std::f64::consts::FRAC_PI_6);
    profile.u0() + delta * (1.2 * profile.du0())
}

/// Secant iteration from `seed`, finished by Newton steps.
pub fn solve_from(seed: C, alpha: f64, reynolds: f64, profile: &ShearProfile, opts: &SolveOptions) -> Result<DispersionResult> {
    let form = opts.form;
    let u0 = profile.u0();
    let dl = wall_delta(alpha, reynolds, profile);
    let check = |c: C| -> Result<()> {
        if !c.is_finite() || (c - u0).norm() > VALIDITY_RADIUS {
            return Err(Error::LeftHalfPlaneExit { re: c.re, im: c.im });
        }
        Ok(())
    };
    check(seed)?;
    let eval = |c: C| evaluate(c, alpha, reynolds, profile, opts);
    let mut prev = eval(seed)?;
    let mut cur = eval(seed + C::new(0.1, 0.05) * dl)?;
    let newton_h = 1e-6 * dl;
    let mut step = f64::INFINITY;
    for it in 1..=opts.max_iter {
        let (fp, fc) = (prev.value(form), cur.value(form));
        let near = step <= 1e3 * opts.tol;
        let next = if near {
            let probe = eval(cur.c + newton_h)?;
            let deriv = (probe.value(form) - fc) / newton_h;
            cur.c - fc / deriv
        } else {
            let den = fc - fp;
            if den.norm() == 0.0 {
                return Err(Error::NoConvergence { iterations: it, residual: cur.residual(form) });
            }
            cur.c - fc * (cur.c - prev.c) / den
        };
        // the modes are only constructible within a few |delta| of the wall, so
        // long secant jumps are shortened
        let raw = next - cur.c;
        let next = if raw.norm() > MAX_STEP * dl { cur.c + raw * (MAX_STEP * dl / raw.norm()) } else { next };
        check(next)?;
        step = (next - cur.c).norm();
        prev = cur;
        cur = eval(next)?;
        if step <= opts.tol && cur.residual(form) <= opts.residual_tol {
            return Ok(finish(cur, alpha, reynolds, form, it));
        }
    }
    Err(Error::NoConvergence { iterations: opts.max_iter, residual: cur.residual(form) })
}

fn finish(e: DispersionEval, alpha: f64, reynolds: f64, form: RootForm, iterations: usize) -> DispersionResult {
    DispersionResult {
        alpha,
        reynolds,
        c: e.c,
        im_c: e.c.im,
        growth_rate: alpha * e.c.im,
        residual: e.residual(form),
        det_rel: e.det_rel,
        reduced_rel: e.reduced_rel,
        form,
        branch_params: None,
        newton_iterations: iterations,
        z_c_over_delta: e.z_c / e.delta,
        mode_set: e.modes,
    }
}

/// Solves for `c(alpha, R)`, trying `c_init`, the critical-layer seed and the
/// Rayleigh prediction in turn.
pub fn solve_eigenvalue(
    alpha: f64,
    reynolds: f64,
    profile: &ShearProfile,
    c_init: Option<C>,
    opts: &SolveOptions,
) -> Result<DispersionResult> {
    let mut seeds: Vec<C> = c_init.into_iter().collect();
    seeds.push(critical_layer_seed(alpha, reynolds, profile));
    seeds.push(default_seed(alpha, reynolds, profile));
    let mut last = Error::NoConvergence { iterations: 0, residual: f64::NAN };
    for s in seeds {
        match solve_from(s, alpha, reynolds, profile, opts) {
            Ok(r) => return Ok(r),
            Err(e @ Error::HypothesisViolated(_)) => return Err(e),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// One sample of a branch sweep.
#[derive(Debug, Clone, Serialize)]
pub struct BranchPoint {
    pub a: f64,
    pub alpha: f64,
    pub c: Option<(f64, f64)>,
    pub z_c_over_delta: Option<(f64, f64)>,
    /// `|K_3|` at the root.
    pub k3_abs: Option<f64>,
    pub error: Option<String>,
}

impl BranchPoint {
    pub fn im_c(&self) -> Option<f64> {
        self.c.map(|c| c.1)
    }
}

/// Bisected change of sign of `Im c`.
#[derive(Debug, Clone, Serialize)]
pub struct Crossing {
    pub a: f64,
    pub alpha: f64,
    pub bracket: (f64, f64),
    pub c: (f64, f64),
    /// Stable to unstable as `A` increases.
    pub rising: bool,
    pub k3_abs: f64,
    /// `alpha^4 |log alpha|`.
    pub alpha4_log: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchScan {
    pub reynolds: f64,
    pub beta: f64,
    pub points: Vec<BranchPoint>,
    pub crossings: Vec<Crossing>,
}

impl BranchScan {
    pub fn first_crossing(&self) -> Result<&Crossing> {
        self.crossings.first().ok_or(Error::CrossingNotFound)
    }

    /// `|Im c| A^{1/3} R^{2/7}` for every converged point.
    pub fn lower_magnitudes(&self) -> Vec<f64> {
        self.points
            .iter()
            .filter_map(|p| p.im_c().map(|im| im.abs() * p.a.powf(1.0 / 3.0) * self.reynolds.powf(2.0 / 7.0)))
            .collect()
    }

    /// Least-squares slope of `log |z_c / delta|` against `log A`.
    pub fn zc_delta_exponent(&self) -> Option<f64> {
        let (xs, ys): (Vec<f64>, Vec<f64>) = self
            .points
            .iter()
            .filter_map(|p| p.z_c_over_delta.map(|(re, im)| (p.a.ln(), C::new(re, im).norm().ln())))
            .unzip();
        fit_slope(&xs, &ys)
    }
}

/// Least-squares slope of `ys` against `xs`; `None` with fewer than two finite pairs.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs.iter().zip(ys).map(|(&x, &y)| (x, y)).filter(|(x, y)| x.is_finite() && y.is_finite()).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

fn point_from(a: f64, alpha: f64, r: &Result<DispersionResult>) -> BranchPoint {
    match r {
        Ok(d) => BranchPoint {
            a,
            alpha,
            c: Some((d.c.re, d.c.im)),
            z_c_over_delta: Some((d.z_c_over_delta.re, d.z_c_over_delta.im)),
            k3_abs: Some(d.mode_set.k[2].norm()),
            error: None,
        },
        Err(e) => BranchPoint { a, alpha, c: None, z_c_over_delta: None, k3_abs: None, error: Some(e.to_string()) },
    }
}

/// Sweeps `alpha = A R^{-beta}` over `a_values` in order, continuing each solve
/// from the previous root, and bisects every sign change of `Im c`.
pub fn scan_branch(
    profile: &ShearProfile,
    reynolds: f64,
    beta: f64,
    a_values: &[f64],
    opts: &SolveOptions,
) -> Result<BranchScan> {
    if a_values.windows(2).any(|w| !(w[1] > w[0])) || a_values.iter().any(|&a| !(a > 0.0)) {
        return Err(Error::UsageError("A values must be positive and increasing".into()));
    }
    let alpha_of = |a: f64| a * reynolds.powf(-beta);
    let mut points = Vec::with_capacity(a_values.len());
    let mut roots: Vec<Option<C>> = Vec::with_capacity(a_values.len());
    let mut seed: Option<C> = None;
    for &a in a_values {
        let alpha = alpha_of(a);
        let r = solve_eigenvalue(alpha, reynolds, profile, seed, opts);
        if let Err(e @ Error::HypothesisViolated(_)) = &r {
            return Err(e.clone());
        }
        points.push(point_from(a, alpha, &r));
        let c = r.ok().map(|d| d.c);
        if c.is_some() {
            seed = c;
        }
        roots.push(c);
    }

    let mut crossings = Vec::new();
    for i in 0..points.len().saturating_sub(1) {
        let (Some(c0), Some(c1)) = (roots[i], roots[i + 1]) else { continue };
        if (c0.im > 0.0) == (c1.im > 0.0) {
            continue;
        }
        if let Some(x) = bisect(profile, reynolds, beta, (points[i].a, c0), (points[i + 1].a, c1), opts) {
            crossings.push(x);
        }
    }
    Ok(BranchScan { reynolds, beta, points, crossings })
}

fn bisect(
    profile: &ShearProfile,
    reynolds: f64,
    beta: f64,
    lo: (f64, C),
    hi: (f64, C),
    opts: &SolveOptions,
) -> Option<Crossing> {
    let rising = hi.1.im > 0.0;
    let (mut lo, mut hi) = (lo, hi);
    let mut k3 = f64::NAN;
    while (hi.0 - lo.0) / (0.5 * (hi.0 + lo.0)) > BISECT_TOL {
        let a = (lo.0 * hi.0).sqrt();
        let seed = lo.1 + (hi.1 - lo.1) * ((a - lo.0) / (hi.0 - lo.0));
        let r = solve_eigenvalue(a * reynolds.powf(-beta), reynolds, profile, Some(seed), opts).ok()?;
        k3 = r.mode_set.k[2].norm();
        if (r.c.im > 0.0) == rising {
            hi = (a, r.c);
        } else {
            lo = (a, r.c);
        }
    }
    // linear interpolation of Im c inside the final bracket
    let t = lo.1.im / (lo.1.im - hi.1.im);
    let a = lo.0 + t * (hi.0 - lo.0);
    let c = lo.1 + (hi.1 - lo.1) * t;
    let alpha = a * reynolds.powf(-beta);
    Some(Crossing {
        a,
        alpha,
        bracket: (lo.0, hi.0),
        c: (c.re, c.im),
        rising,
        k3_abs: k3,
        alpha4_log: alpha.powi(4) * alpha.ln().abs(),
    })
}

/// Lower branch `alpha = A R^{-1/7}`.
pub fn scan_lower_branch(reynolds: f64, a_values: &[f64], profile: &ShearProfile, opts: &SolveOptions) -> Result<BranchScan> {
    scan_branch(profile, reynolds, BETA_LOWER, a_values, opts)
}

/// Upper branch `alpha = A R^{-1/11}`.
pub fn scan_upper_branch(reynolds: f64, a_values: &[f64], profile: &ShearProfile, opts: &SolveOptions) -> Result<BranchScan> {
    scan_branch(profile, reynolds, BETA_UPPER, a_values, opts)
}

/// `n` values from `lo` to `hi` evenly spaced in `log`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..n).map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp()).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthRow {
    pub beta: f64,
    pub reynolds: f64,
    pub alpha: f64,
    pub c: Option<(f64, f64)>,
    pub im_c: Option<f64>,
    pub growth_rate: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthSlope {
    pub beta: f64,
    /// Slope of `log Im c` against `log R`, over rows with `Im c > 0`.
    pub im_c: Option<f64>,
    /// Slope of `log(alpha Im c)` against `log R`.
    pub growth_rate: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthTable {
    pub a: f64,
    pub rows: Vec<GrowthRow>,
    pub slopes: Vec<GrowthSlope>,
}

/// `alpha = A R^{-beta}` for every `beta` and `R`; one continuation chain per `beta`
/// in increasing `R`, chains run in parallel.
pub fn scan_growth_rates(
    profile: &ShearProfile,
    betas: &[f64],
    reynolds: &[f64],
    a: f64,
    opts: &SolveOptions,
) -> Result<GrowthTable> {
    let mut rs = reynolds.to_vec();
    rs.sort_by(f64::total_cmp);
    let chains: Vec<Result<Vec<GrowthRow>>> = betas
        .par_iter()
        .map(|&beta| {
            let mut prev: Option<(C, f64)> = None;
            let mut rows = Vec::new();
            for &r in &rs {
                let alpha = a * r.powf(-beta);
                let dl = wall_delta(alpha, r, profile);
                // the wall mode scales with |delta|, so the previous root is carried
                // over in units of the wall-layer thickness
                let seed = prev.map(|(c, dl0)| profile.u0() + (c - profile.u0()) * (dl / dl0));
                let res = solve_eigenvalue(alpha, r, profile, seed, opts);
                if let Err(e @ Error::HypothesisViolated(_)) = &res {
                    return Err(e.clone());
                }
                let row = match &res {
                    Ok(d) => {
                        prev = Some((d.c, dl));
                        GrowthRow {
                            beta,
                            reynolds: r,
                            alpha,
                            c: Some((d.c.re, d.c.im)),
                            im_c: Some(d.im_c),
                            growth_rate: Some(alpha * d.im_c),
                            error: None,
                        }
                    }
                    Err(e) => GrowthRow { beta, reynolds: r, alpha, c: None, im_c: None, growth_rate: None, error: Some(e.to_string()) },
                };
                rows.push(row);
            }
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::new();
    for c in chains {
        rows.extend(c?);
    }
    rows.sort_by(|x, y| x.beta.total_cmp(&y.beta).then(x.reynolds.total_cmp(&y.reynolds)));
    let slopes = betas
        .iter()
        .map(|&beta| {
            let sel: Vec<&GrowthRow> = rows.iter().filter(|r| r.beta == beta && r.im_c.is_some_and(|v| v > 0.0)).collect();
            let lr: Vec<f64> = sel.iter().map(|r| r.reynolds.ln()).collect();
            let li: Vec<f64> = sel.iter().map(|r| r.im_c.unwrap_or(f64::NAN).ln()).collect();
            let lg: Vec<f64> = sel.iter().map(|r| r.growth_rate.unwrap_or(f64::NAN).ln()).collect();
            GrowthSlope { beta, im_c: fit_slope(&lr, &li), growth_rate: fit_slope(&lr, &lg) }
        })
        .collect();
    Ok(GrowthTable { a, rows, slopes })
}
