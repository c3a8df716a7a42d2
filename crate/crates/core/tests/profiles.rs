use num_complex::Complex64 as C;
use orrsom::profiles::ShearProfile;
use proptest::prelude::*;
use std::f64::consts::PI;

fn builtins() -> Vec<ShearProfile> {
    vec![ShearProfile::poiseuille(), ShearProfile::sin_profile()]
}

fn close(a: C, b: C, tol: f64) -> bool {
    (a - b).norm() <= tol
}

#[test]
fn poiseuille_values() {
    let p = ShearProfile::poiseuille();
    let v = p.eval(C::new(0.0, 0.0));
    assert_eq!([v[0].re, v[1].re, v[2].re], [0.0, 2.0, -2.0]);
    let v = p.eval(C::new(1.0, 0.0));
    assert_eq!([v[0].re, v[1].re, v[2].re], [1.0, 0.0, -2.0]);
    assert!(close(p.u(C::new(0.5, 0.1)), C::new(0.76, 0.1), 1e-15));
}

#[test]
fn sin_values() {
    let p = ShearProfile::sin_profile();
    let v = p.eval(C::new(1.0, 0.0));
    assert!(close(v[0], C::new(1.0, 0.0), 1e-15));
    assert!(v[1].norm() < 1e-15);
    assert!(close(v[2], C::new(-PI * PI / 4.0, 0.0), 1e-14));
    let v = p.eval(C::new(0.0, 0.0));
    assert!(close(v[1], C::new(PI / 2.0, 0.0), 1e-15) && v[0].norm() < 1e-15 && v[2].norm() < 1e-15);
    let s = (PI / 4.0).sin();
    let v = p.eval(C::new(0.5, 0.0));
    assert!(close(v[0], C::new(s, 0.0), 1e-15));
    assert!(close(v[1], C::new(PI / 2.0 * s, 0.0), 1e-15));
    assert!(close(v[2], C::new(-PI * PI / 4.0 * s, 0.0), 1e-14));
}

#[test]
fn symmetric_half_channel() {
    for p in builtins() {
        assert!(p.du0() > 0.0);
        assert!(p.eval(C::new(1.0, 0.0))[1].norm() < 1e-15);
    }
}

#[test]
fn critical_point_examples() {
    let p = ShearProfile::poiseuille();
    let cp = p.find_critical_point(C::new(0.0, 0.0), C::new(0.0, 0.0)).unwrap();
    assert_eq!(cp.z_c, C::new(0.0, 0.0));
    let cp = p.find_critical_point(C::new(0.19, 0.0), C::new(0.1, 0.0)).unwrap();
    assert!(close(cp.z_c, C::new(0.1, 0.0), 1e-14));

    let c = C::new(0.0, 0.01);
    let cp = p.find_critical_point(c, C::new(0.0, 0.0)).unwrap();
    let exact = 1.0 - (1.0 - c).sqrt();
    assert!(close(cp.z_c, exact, 1e-14));
    assert!((cp.z_c.im - 0.005).abs() < 0.005 * 0.01);
}

#[test]
fn derivative_vanishes_at_the_centreline() {
    let p = ShearProfile::poiseuille();
    assert!(p.find_critical_point(C::new(0.99, 0.0), C::new(1.0, 0.0)).is_err());
}

#[test]
fn polynomial_profile_from_config_grammar() {
    let p = ShearProfile::from_name("poly: [0, 2, -1]").unwrap();
    for &z in &[C::new(0.3, 0.2), C::new(0.9, -0.1)] {
        let a = p.eval(z);
        let b = ShearProfile::poiseuille().eval(z);
        for k in 0..4 {
            assert!(close(a[k], b[k], 1e-14));
        }
    }
    assert!(ShearProfile::from_name("blasius").is_err());
}

proptest! {
    #[test]
    fn complex_step_matches_slope_on_the_real_axis(x in 0.0f64..1.0) {
        let h = 1e-20;
        for p in builtins() {
            let cs = p.u(C::new(x, h)).im / h;
            let d = p.eval(C::new(x, 0.0))[1].re;
            prop_assert!((cs - d).abs() <= 1e-8 * d.abs().max(1.0));
        }
    }

    #[test]
    fn derivatives_are_analytic_in_the_neighbourhood(
        x in -0.5f64..1.5, y in -0.5f64..0.5
    ) {
        let z = C::new(x, y);
        let h = 1e-5;
        for p in builtins() {
            if orrsom::profiles::distance_to_unit(z) > p.domain_radius() {
                continue;
            }
            let v = p.eval(z);
            for k in 0..3 {
                let fd_re = (p.eval(z + h)[k] - p.eval(z - h)[k]) / (2.0 * h);
                let ih = C::new(0.0, h);
                let fd_im = (p.eval(z + ih)[k] - p.eval(z - ih)[k]) / (2.0 * ih);
                let scale = v[k + 1].norm().max(1.0);
                prop_assert!((fd_re - v[k + 1]).norm() <= 1e-8 * scale);
                prop_assert!((fd_im - v[k + 1]).norm() <= 1e-8 * scale);
            }
        }
    }

    #[test]
    fn critical_point_is_idempotent(cr in 0.02f64..0.6, ci in -0.05f64..0.05) {
        let c = C::new(cr, ci);
        for p in builtins() {
            let guess = C::new(cr / p.du0(), 0.0);
            let a = p.find_critical_point(c, guess).unwrap();
            prop_assert!((p.u(a.z_c) - c).norm() <= 1e-12);
            let b = p.find_critical_point(c, a.z_c).unwrap();
            prop_assert!((a.z_c - b.z_c).norm() <= 1e-14);
        }
    }

    #[test]
    fn critical_layer_offset_follows_the_slope(cr in 0.02f64..0.5, ci in -0.01f64..0.01) {
        prop_assume!(ci.abs() > 1e-4);
        let c = C::new(cr, ci);
        for p in builtins() {
            let z0 = p.find_critical_point(C::new(cr, 0.0), C::new(cr / p.du0(), 0.0)).unwrap().z_c;
            let slope = p.eval(z0)[1].re;
            let zc = p.find_critical_point(c, z0).unwrap().z_c;
            let lin = ci / slope;
            prop_assert!((zc.im - lin).abs() <= 0.2 * lin.abs());
        }
    }
}
