//! Per-`(c, alpha, R)` context: critical point, contour mesh and profile samples.

use crate::error::{Error, Result};
use crate::mesh::{ComplexMesh, MeshOptions};
use crate::profiles::ShearProfile;
use num_complex::Complex64;

type C = Complex64;

/// Everything the solvers share for one wave speed.
#[derive(Debug, Clone)]
pub struct Flow {
    pub profile: ShearProfile,
    pub c: C,
    pub alpha: f64,
    /// `None` for the inviscid problem.
    pub reynolds: Option<f64>,
    pub z_c: C,
    /// `U'(z_c)`.
    pub du_c: C,
    /// `1 / (i alpha R)`, zero when inviscid.
    pub eps: C,
    /// `(eps / U'_c)^{1/3}`, zero when inviscid.
    pub delta: C,
    pub mesh: ComplexMesh,
    /// `U, U', U'', U''', U''''` at each node.
    pub u: Vec<[C; 5]>,
}

impl Flow {
    pub fn new(
        profile: &ShearProfile,
        c: C,
        alpha: f64,
        reynolds: Option<f64>,
        opts: MeshOptions,
    ) -> Result<Self> {
        let du0 = profile.du0();
        if du0 == 0.0 {
            return Err(Error::DerivativeVanishes { re: 0.0, im: 0.0 });
        }
        let guess = (c - profile.u0()) / du0;
        let cp = profile.find_critical_point(c, guess)?;
        Self::with_critical_point(profile, c, cp.z_c, alpha, reynolds, opts)
    }

    pub fn with_critical_point(
        profile: &ShearProfile,
        c: C,
        z_c: C,
        alpha: f64,
        reynolds: Option<f64>,
        opts: MeshOptions,
    ) -> Result<Self> {
        let du_c = profile.derivs(z_c, 1)[1];
        let (eps, delta) = match reynolds {
            Some(r) => {
                if !(alpha > 0.0 && r > 0.0) {
                    return Err(Error::UsageError("alpha and R must be positive".into()));
                }
                let eps = C::new(0.0, -1.0 / (alpha * r));
                (eps, (eps / du_c).powf(1.0 / 3.0))
            }
            None => (C::new(0.0, 0.0), C::new(0.0, 0.0)),
        };
        let mesh = ComplexMesh::new(z_c, reynolds.map(|_| delta), opts)?;
        let u = mesh
            .nodes
            .iter()
            .map(|&z| {
                let d = profile.derivs(z, 4);
                [d[0], d[1], d[2], d[3], d[4]]
            })
            .collect();
        Ok(Flow { profile: profile.clone(), c, alpha, reynolds, z_c, du_c, eps, delta, mesh, u })
    }

    pub fn n(&self) -> usize {
        self.mesh.len()
    }

    /// `U - c` at node `i`.
    pub fn umc(&self, i: usize) -> C {
        self.u[i][0] - self.c
    }
}
