//! Dense Chebyshev collocation for the half-channel Orr-Sommerfeld problem.
//!
//! The fourth-order equation is split into the pair
//!
//! ```text
//! omega = (D^2 - alpha^2) phi
//! eps (D^2 - alpha^2) omega - U omega + U'' phi = -c omega
//! ```
//!
//! on Chebyshev extrema mapped to `[0, 1]`. The boundary conditions
//! `phi(0) = phi'(0) = 0` and `phi'(1) = phi'''(1) = 0` are bordered into four
//! rows whose right-hand side is zero. With `phi'(1) = 0` the condition on
//! `phi'''(1)` is the same as `omega'(1) = 0`.

use crate::error::{Error, Result};
use crate::profiles::ShearProfile;
use faer::linalg::solvers::Solve;
use faer::Mat;
use num_complex::Complex64;

type C = Complex64;

/// Accepted polynomial degrees.
pub const N_MIN: usize = 40;
pub const N_MAX: usize = 400;
/// Resolution increment of the spurious-mode filter.
pub const N_STEP: usize = 40;
/// Eigenvalues from the two resolutions closer than this are the same mode.
pub const PAIR_TOL: f64 = 1e-4;
/// Two-resolution gap below which an eigenvalue counts as converged.
pub const CONVERGED_TOL: f64 = 1e-6;
const COND_LIMIT: f64 = 1e14;
/// Eigenvalues outside this disc are discarded as spurious.
const C_MAX: f64 = 5.0;
/// Spectral shift `sigma`, outside the semicircle `|c - 1/2| <= 1/2` that holds the spectrum
/// of monotone profiles on `[0, 1]`.
const SHIFT: C = C::new(0.5, 1.0);

/// An assembled generalized eigenproblem `A x = c B x` with `x = (phi, omega)`.
#[derive(Debug, Clone)]
pub struct CollocationProblem {
    pub profile: ShearProfile,
    pub alpha: f64,
    pub reynolds: f64,
    pub n: usize,
    /// `z_j = (1 + cos(pi j / N)) / 2`, so node 0 is `z = 1` and node `N` is `z = 0`.
    pub nodes: Vec<f64>,
    /// `d[k]` is the matrix of `d^{k+1}/dz^{k+1}`.
    pub d: [Mat<f64>; 4],
    pub a: Mat<C>,
    pub b: Mat<C>,
    /// Ratio of extreme singular values of the bordered `A - sigma B`.
    pub condition: f64,
}

/// One eigenvalue with the data used to accept or reject it.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub c: C,
    /// Distance to the nearest eigenvalue at resolution `N + 40`.
    pub gap: f64,
    /// `|phi'(1)|` and `|phi'''(1)|`, each relative to the sup of that derivative.
    pub boundary_residual: [f64; 2],
    /// `phi` at the nodes, normalized so the largest entry is 1.
    pub phi: Vec<C>,
}

impl Eigenpair {
    pub fn converged(&self) -> bool {
        self.gap <= CONVERGED_TOL
    }
}

/// Chebyshev extrema on `[-1, 1]` and the first-derivative matrix.
pub fn cheb(n: usize) -> (Vec<f64>, Mat<f64>) {
    let x: Vec<f64> = (0..=n)
        .map(|j| (std::f64::consts::PI * j as f64 / n as f64).cos())
        .collect();
    let w = |j: usize| {
        let c = if j == 0 || j == n { 2.0 } else { 1.0 };
        if j % 2 == 0 { c } else { -c }
    };
    let mut d = Mat::<f64>::zeros(n + 1, n + 1);
    for i in 0..=n {
        let mut row = 0.0;
        for j in 0..=n {
            if i != j {
                let v = w(i) / w(j) / (x[i] - x[j]);
                d[(i, j)] = v;
                row += v;
            }
        }
        // negative-sum trick keeps D * 1 = 0 exactly
        d[(i, i)] = -row;
    }
    (x, d)
}

pub fn assemble(profile: &ShearProfile, alpha: f64, reynolds: f64, n: usize) -> Result<CollocationProblem> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::UsageError(format!("alpha must be positive, got {alpha}")));
    }
    if !(reynolds > 0.0) || !reynolds.is_finite() {
        return Err(Error::UsageError(format!("R must be positive, got {reynolds}")));
    }
    if !(N_MIN..=N_MAX).contains(&n) {
        return Err(Error::UsageError(format!("N must lie in [{N_MIN}, {N_MAX}], got {n}")));
    }
    build(profile, alpha, reynolds, n)
}

fn build(profile: &ShearProfile, alpha: f64, reynolds: f64, n: usize) -> Result<CollocationProblem> {
    let (x, dx) = cheb(n);
    let nodes: Vec<f64> = x.iter().map(|&v| 0.5 * (v + 1.0)).collect();
    let d1 = &dx * 2.0;
    let d2 = &d1 * &d1;
    let d3 = &d2 * &d1;
    let d4 = &d3 * &d1;

    let m = n + 1;
    let eps = C::new(0.0, -1.0 / (alpha * reynolds));
    let a2 = alpha * alpha;
    let us: Vec<[C; 4]> = nodes.iter().map(|&z| profile.eval(C::new(z, 0.0))).collect();
    let lap = |i: usize, j: usize| d2[(i, j)] - if i == j { a2 } else { 0.0 };

    let mut a = Mat::<C>::zeros(2 * m, 2 * m);
    let mut b = Mat::<C>::zeros(2 * m, 2 * m);
    for i in 0..m {
        for j in 0..m {
            a[(i, j)] = C::from(lap(i, j));
            a[(m + i, m + j)] = eps * lap(i, j);
        }
        a[(i, m + i)] = C::from(-1.0);
        a[(m + i, i)] = us[i][2];
        a[(m + i, m + i)] -= us[i][0];
        b[(m + i, m + i)] = C::from(-1.0);
    }

    let border = |a: &mut Mat<C>, b: &mut Mat<C>, row: usize, col0: usize, coeffs: &dyn Fn(usize) -> f64| {
        for j in 0..2 * m {
            a[(row, j)] = C::from(0.0);
            b[(row, j)] = C::from(0.0);
        }
        for j in 0..m {
            a[(row, col0 + j)] = C::from(coeffs(j));
        }
    };
    // phi'(1) = 0
    border(&mut a, &mut b, 0, 0, &|j| d1[(0, j)]);
    // phi(0) = 0
    border(&mut a, &mut b, n, 0, &|j| if j == n { 1.0 } else { 0.0 });
    // omega'(1) = 0, equivalent to phi'''(1) = 0
    border(&mut a, &mut b, m, m, &|j| d1[(0, j)]);
    // phi'(0) = 0
    border(&mut a, &mut b, m + n, 0, &|j| d1[(n, j)]);

    let mut problem = CollocationProblem {
        profile: profile.clone(),
        alpha,
        reynolds,
        n,
        nodes,
        d: [d1, d2, d3, d4],
        a,
        b,
        condition: 0.0,
    };
    let sv = problem
        .shifted()
        .singular_values()
        .map_err(|e| Error::IllConditioned(format!("singular values failed: {e:?}")))?;
    let smax = sv.first().copied().unwrap_or(0.0);
    let smin = sv.last().copied().unwrap_or(0.0);
    problem.condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(problem.condition <= COND_LIMIT) {
        return Err(Error::IllConditioned(format!(
            "condition estimate {:e} exceeds {COND_LIMIT:e}",
            problem.condition
        )));
    }
    Ok(problem)
}

impl CollocationProblem {
    /// `A - sigma B`, nonsingular because `sigma` lies off the spectrum.
    fn shifted(&self) -> Mat<C> {
        Mat::from_fn(self.a.nrows(), self.a.ncols(), |i, j| self.a[(i, j)] - self.b[(i, j)] * SHIFT)
    }

    /// Finite eigenvalues with `|c| < 5`, sorted by decreasing `Im c`, with their `phi`.
    ///
    /// Solved as the standard problem for `(A - sigma B)^{-1} B`, whose eigenvalues
    /// are `1 / (c - sigma)`; the infinite eigenvalues of the singular pencil map to
    /// zero. Handing the pencil to QZ directly can stall on them.
    pub fn spectrum(&self) -> Result<Vec<(C, Vec<C>)>> {
        let m = self.n + 1;
        let reduced = self.shifted().partial_piv_lu().solve(&self.b);
        if !reduced.norm_max().is_finite() {
            return Err(Error::EigenSolveFailed("singular shifted operator".into()));
        }
        let ev = reduced.eigen().map_err(|e| Error::EigenSolveFailed(format!("{e:?}")))?;
        let (vals, vecs) = (ev.S(), ev.U());
        let mut out = Vec::new();
        for k in 0..vals.dim() {
            let mu = vals[k];
            if mu.norm() < 1.0 / (C_MAX + SHIFT.norm()) {
                continue;
            }
            let c = SHIFT + mu.inv();
            if !c.is_finite() || c.norm() >= C_MAX {
                continue;
            }
            let phi: Vec<C> = (0..m).map(|i| vecs[(i, k)]).collect();
            out.push((c, phi));
        }
        if out.is_empty() {
            return Err(Error::EigenSolveFailed("no finite eigenvalues".into()));
        }
        out.sort_by(|x, y| y.0.im.total_cmp(&x.0.im).then(x.0.re.total_cmp(&y.0.re)));
        Ok(out)
    }

    /// `|phi'(1)|` and `|phi'''(1)|` relative to the sup of the same derivative.
    pub fn boundary_residual(&self, phi: &[C]) -> [f64; 2] {
        let m = self.n + 1;
        let mut out = [0.0; 2];
        for (slot, d) in [&self.d[0], &self.d[2]].into_iter().enumerate() {
            let vals: Vec<C> = (0..m)
                .map(|i| (0..m).map(|j| phi[j] * d[(i, j)]).sum())
                .collect();
            let sup = vals.iter().fold(0.0f64, |s, v| s.max(v.norm()));
            out[slot] = if sup > 0.0 { vals[0].norm() / sup } else { 0.0 };
        }
        out
    }

    /// Eigenvalues that reappear within `PAIR_TOL` at resolution `N + 40`.
    pub fn filtered_spectrum(&self) -> Result<Vec<Eigenpair>> {
        let fine = build(&self.profile, self.alpha, self.reynolds, self.n + N_STEP)?;
        let coarse = self.spectrum()?;
        let fine = fine.spectrum()?;
        let mut out = Vec::new();
        for (c, phi) in coarse {
            let gap = fine.iter().map(|f| (f.0 - c).norm()).fold(f64::INFINITY, f64::min);
            if gap > PAIR_TOL {
                continue;
            }
            let scale = phi.iter().fold(0.0f64, |s, v| s.max(v.norm()));
            let pivot = phi.iter().copied().find(|v| v.norm() == scale).unwrap_or(C::from(1.0));
            let phi: Vec<C> = phi.iter().map(|v| v / pivot).collect();
            let boundary_residual = self.boundary_residual(&phi);
            out.push(Eigenpair { c, gap, boundary_residual, phi });
        }
        Ok(out)
    }

    /// The physical eigenvalue nearest to `target`.
    pub fn nearest(&self, target: C) -> Result<Option<Eigenpair>> {
        let spec = self.filtered_spectrum()?;
        Ok(spec.into_iter().min_by(|x, y| (x.c - target).norm().total_cmp(&(y.c - target).norm())))
    }
}

/// Physical eigenvalue with the largest `Im c`, or `None` when every one is stable.
pub fn leading_unstable(problem: &CollocationProblem) -> Result<Option<Eigenpair>> {
    let spec = problem.filtered_spectrum()?;
    Ok(spec.into_iter().next().filter(|e| e.c.im > 0.0))
}

/// Physical eigenvalue with the largest `Im c`, stable or not.
pub fn leading(problem: &CollocationProblem) -> Result<Eigenpair> {
    problem
        .filtered_spectrum()?
        .into_iter()
        .next()
        .ok_or_else(|| Error::EigenSolveFailed("no eigenvalue survived the two-resolution filter".into()))
}
