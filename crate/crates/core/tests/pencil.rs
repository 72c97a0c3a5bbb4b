use approx::assert_relative_eq;
use conepencil::pencil::{
    assemble_pencil, min_singular_value, phi_eval, phi_excess, pressure_from_ur, strip_report, strip_scan_with, t_of_m,
    MaterialParams, PencilOperator, PhiContext, SampledProfile, ScanOptions, StripReport,
};
use conepencil::{CapDomain, ConeError, DiscretizationConfig};
use num_complex::Complex64;

fn cfg(grid: usize, modes: usize) -> DiscretizationConfig {
    DiscretizationConfig { max_azimuthal_mode: modes, ..DiscretizationConfig::with_grid(grid) }
}

/// Root of t^3 + 7t^2 + 6t - 2 in (0, 1) by plain bisection.
fn cubic_root() -> f64 {
    let f = |t: f64| t * t * t + 7.0 * t * t + 6.0 * t - 2.0;
    let (mut a, mut b) = (0.0, 1.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if f(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[test]
fn stokes_hemisphere_root_matches_cubic() {
    let ctx = PhiContext::new(3, 0.5, 1.0).unwrap();
    let t = t_of_m(&ctx).unwrap();
    let oracle = cubic_root();
    assert!((t - oracle).abs() < 1e-10);
    let strip = strip_report(&ctx).unwrap();
    assert!((strip.p_min - 2.0 / (1.0 + oracle)).abs() < 1e-9);
    assert_relative_eq!(strip.halfwidth, oracle + 0.5, max_relative = 1e-10);
}

#[test]
fn phi_sign_properties_on_lattice() {
    let mut violations = 0;
    for n in 3..=6 {
        for nu in [0.0, 0.25, 0.5] {
            for m in [0.25, 0.5, 1.0, 2.0, 4.0] {
                let ctx = PhiContext::new(n, nu, m).unwrap();
                let lo = -(n as f64 - 2.0) / 2.0;
                for k in 0..=2000 {
                    let t = lo * (1.0 - k as f64 / 2000.0);
                    if phi_excess(t, &ctx) >= 0.0 {
                        violations += 1;
                    }
                }
                if phi_excess(m, &ctx) <= 0.0 {
                    violations += 1;
                }
                let t = t_of_m(&ctx).unwrap();
                assert!(t > 0.0 && t < m);
                assert!(phi_excess(t, &ctx).abs() < 1e-8 * (1.0 + phi_eval(t, &ctx).abs()));
            }
        }
    }
    assert_eq!(violations, 0);
}

#[test]
fn root_is_increasing_in_exponent() {
    let mut previous = 0.0;
    for m in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let t = t_of_m(&PhiContext::new(3, 0.5, m).unwrap()).unwrap();
        assert!(t > previous);
        previous = t;
    }
}

#[test]
fn invalid_phi_contexts_rejected() {
    assert!(matches!(PhiContext::new(2, 0.5, 1.0), Err(ConeError::Domain(_))));
    assert!(matches!(PhiContext::new(3, 0.7, 1.0), Err(ConeError::Domain(_))));
    assert!(matches!(PhiContext::new(3, 0.5, 0.0), Err(ConeError::Domain(_))));
    assert!(StripReport::from_root(3, 0.0).is_err());
}

/// Profiles of U = (x3, 0, 0) on the unit sphere in the mode-1 (cos φ) frame.
fn shear_velocity(theta: f64) -> [Complex64; 3] {
    let (s, c) = theta.sin_cos();
    [Complex64::new(s * c, 0.0), Complex64::new(c * c, 0.0), Complex64::new(c, 0.0)]
}

fn shear_residual(cells: usize) -> f64 {
    let cap = CapDomain::hemisphere(3).unwrap();
    let op = PencilOperator::from_config(&cap, &MaterialParams::stokes(), 1, &cfg(cells, 1)).unwrap();
    let x = op.interpolate(shear_velocity, |_| Complex64::new(0.0, 0.0));
    let a = op.at(Complex64::new(1.0, 0.0)).dense_matrix();
    let v = nalgebra::DVector::from_vec(x);
    (&a * &v).norm() / (a.norm() * v.norm())
}

#[test]
fn shear_flow_lies_in_discrete_kernel_under_refinement() {
    let (r1, r2, r3) = (shear_residual(32), shear_residual(64), shear_residual(128));
    assert!(r2 < r1 / 2.0 && r3 < r2 / 2.0, "{r1:e} {r2:e} {r3:e}");
}

#[test]
fn shear_flow_singular_value_decreases_with_refinement() {
    let cap = CapDomain::hemisphere(3).unwrap();
    let mat = MaterialParams::stokes();
    let s = |g: usize| {
        min_singular_value(&assemble_pencil(&cap, &mat, Complex64::new(1.0, 0.0), 1, &cfg(g, 1)).unwrap()).unwrap()
    };
    let (s64, s128) = (s(64), s(128));
    assert!(s64 < 1e-4 && s128 < s64 / 2.0, "{s64:e} {s128:e}");
}

#[test]
fn strip_center_is_uniformly_nonsingular() {
    let cap = CapDomain::hemisphere(3).unwrap();
    for nu in [0.5, 0.25] {
        let mat = MaterialParams::new(nu).unwrap();
        for g in [32, 64, 128] {
            for mode in 0..3 {
                let asm = assemble_pencil(&cap, &mat, Complex64::new(-0.5, 0.0), mode, &cfg(g, mode)).unwrap();
                assert!(min_singular_value(&asm).unwrap() > 1e-3);
            }
        }
    }
}

#[test]
fn pencil_is_hermitian_on_the_symmetry_line() {
    let cap = CapDomain::new(3, 2.0).unwrap();
    for nu in [0.5, 0.3] {
        let mat = MaterialParams::new(nu).unwrap();
        for g in [16, 32, 64] {
            for mode in 0..3 {
                let asm = assemble_pencil(&cap, &mat, Complex64::new(-0.5, 1.3), mode, &cfg(g, mode)).unwrap();
                assert!(asm.hermitian_defect() < 1e-12, "defect {}", asm.hermitian_defect());
            }
        }
        let off = assemble_pencil(&cap, &mat, Complex64::new(0.4, 1.3), 1, &cfg(32, 1)).unwrap();
        assert!(off.hermitian_defect() > 1e-6);
    }
}

#[test]
fn shear_flow_pressure_vanishes() {
    // U = (x3, 0, 0) is harmonic and solenoidal, so it solves the Lamé system with
    // zero pressure for every nu; at nu = 1/2 the formula itself is singular at l = 1.
    let lambda = Complex64::new(1.0, 0.0);
    let max_p = |nodes: usize, nu: f64| {
        let ur = SampledProfile::from_fn(3, std::f64::consts::FRAC_PI_2, 1, nodes, |t| shear_velocity(t)[0]);
        let p = pressure_from_ur(&ur, lambda, nu).unwrap();
        p.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    };
    for nu in [0.0, 0.25] {
        let (coarse, fine) = (max_p(101, nu), max_p(401, nu));
        assert!(fine < 1e-5 && fine < coarse / 8.0, "{coarse:e} {fine:e}");
    }
    let ur = SampledProfile::from_fn(3, std::f64::consts::FRAC_PI_2, 1, 101, |t| shear_velocity(t)[0]);
    assert!(matches!(pressure_from_ur(&ur, lambda, 0.5), Err(ConeError::Singular(_))));
}

#[test]
fn pressure_of_harmonic_profile_is_scalar_multiple() {
    // Y_2^1 profile sin θ cos θ has Laplace–Beltrami eigenvalue -6.
    let lambda = Complex64::new(0.3, 0.2);
    let nu = 0.1;
    let ur = SampledProfile::from_fn(3, 1.2, 1, 801, |t| Complex64::new((2.0 * t).sin() / 2.0, 0.0));
    let p = pressure_from_ur(&ur, lambda, nu).unwrap();
    let factor = -((lambda + 1.0) * (lambda + 2.0) - 6.0) / (Complex64::new(3.0 - 4.0 * nu, 0.0) - lambda);
    for (k, (pv, uv)) in p.values.iter().zip(&ur.values).enumerate() {
        assert!((pv - factor * uv).norm() < 1e-6, "node {k}");
    }
    // mode-0 profile cos θ has eigenvalue -2, including at the pole
    let ur0 = SampledProfile::from_fn(3, 1.2, 0, 801, |t| Complex64::new(t.cos(), 0.0));
    let p0 = pressure_from_ur(&ur0, lambda, nu).unwrap();
    let factor0 = -((lambda + 1.0) * (lambda + 2.0) - 2.0) / (Complex64::new(3.0 - 4.0 * nu, 0.0) - lambda);
    for (pv, uv) in p0.values.iter().zip(&ur0.values) {
        assert!((pv - factor0 * uv).norm() < 1e-6);
    }
    let zero = SampledProfile::from_fn(3, 1.2, 0, 11, |_| Complex64::new(0.0, 0.0));
    assert!(pressure_from_ur(&zero, lambda, nu).unwrap().values.iter().all(|v| v.norm() == 0.0));
}

#[test]
fn coarse_scan_certifies_strip_and_flags_control() {
    let cap = CapDomain::hemisphere(3).unwrap();
    let report = strip_scan_with(&cap, &MaterialParams::stokes(), 5, 5, &cfg(32, 2), &ScanOptions::default()).unwrap();
    assert_eq!(report.grid.len(), 25);
    assert!(report.flagged.is_empty());
    assert!(report.grid.iter().all(|p| report.strip.contains(p.re)));
    let control = report.control.unwrap();
    assert!(control.below_threshold);

    let again = strip_scan_with(&cap, &MaterialParams::stokes(), 5, 5, &cfg(32, 2), &ScanOptions::default()).unwrap();
    assert_eq!(report, again);
}

#[test]
fn single_point_scan_and_infinite_threshold() {
    let cap = CapDomain::hemisphere(3).unwrap();
    let mat = MaterialParams::stokes();
    let one = strip_scan_with(&cap, &mat, 1, 1, &cfg(16, 1), &ScanOptions::default()).unwrap();
    assert_eq!(one.grid.len(), 1);
    assert_relative_eq!(one.grid[0].re, -0.5);
    assert_eq!(one.grid[0].im, 0.0);
    let all = ScanOptions { threshold: f64::INFINITY, control: None, ..ScanOptions::default() };
    let r = strip_scan_with(&cap, &mat, 3, 2, &cfg(16, 1), &all).unwrap();
    assert_eq!(r.flagged.len(), 6);
    assert!(r.control.is_none());
    assert!(strip_scan_with(&cap, &mat, 0, 2, &cfg(16, 1), &all).is_err());
}
