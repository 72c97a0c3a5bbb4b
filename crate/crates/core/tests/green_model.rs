use approx::assert_relative_eq;
use conepencil::green_model::{
    adjacent_zone_constant, classify_zone, homogeneity_identity_check, kernel_gradient_bound,
};
use conepencil::pencil::StripReport;
use conepencil::{ConeError, KernelBoundModel, MiddleZoneBound, Zone};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn model() -> KernelBoundModel {
    KernelBoundModel::new(3, 0.25, 1.0, 1.0).unwrap()
}

fn random_point(rng: &mut ChaCha8Rng, radius: f64) -> [f64; 3] {
    loop {
        let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0f64..1.0)];
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if r > 1e-3 && r <= 1.0 {
            return v.map(|c| c * radius / r);
        }
    }
}

#[test]
fn zone_examples() {
    assert_eq!(classify_zone(1.0, 3.0), Zone::E1);
    assert_eq!(classify_zone(1.0, 0.4), Zone::E3);
    assert_eq!(classify_zone(1.0, 2.0), Zone::E2);
    assert_eq!(classify_zone(1.0, 0.5), Zone::E2);
}

#[test]
fn zone_partition_is_exact_and_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..10_000 {
        let a: f64 = 10f64.powf(rng.gen_range(-3.0..3.0));
        let b: f64 = if rng.gen_bool(0.1) { 2.0 * a } else { 10f64.powf(rng.gen_range(-3.0..3.0)) };
        let conditions = [2.0 * a < b, 2.0 * b < a, a / 2.0 <= b && b <= 2.0 * a];
        assert_eq!(conditions.iter().filter(|&&c| c).count(), 1);
        let zone = classify_zone(a, b);
        let expected = if conditions[0] {
            Zone::E1
        } else if conditions[1] {
            Zone::E3
        } else {
            Zone::E2
        };
        assert_eq!(zone, expected);
        assert_eq!(zone == Zone::E1, classify_zone(b, a) == Zone::E3);
        assert_eq!(zone == Zone::E2, classify_zone(b, a) == Zone::E2);
    }
}

#[test]
fn far_zone_example() {
    let b = kernel_gradient_bound(&[1.0, 0.0, 0.0], &[0.0, 4.0, 0.0], 0.5, &model()).unwrap();
    assert_relative_eq!(b, 4f64.powf(-2.25), max_relative = 1e-14);
    assert_relative_eq!(b, 0.0442, epsilon = 5e-5);
}

#[test]
fn middle_zone_variants() {
    let x = [1.0, 0.0, 0.0];
    let xi = [1.5, 0.0, 0.0];
    let normal = kernel_gradient_bound(&x, &xi, 0.2, &model()).unwrap();
    assert_relative_eq!(normal, 0.2 / 0.125, max_relative = 1e-14);
    let raw = kernel_gradient_bound(&x, &xi, 0.2, &model().with_middle(MiddleZoneBound::RawGradient)).unwrap();
    assert_relative_eq!(raw, 4.0, max_relative = 1e-14);
}

#[test]
fn near_zone_diverges_at_vertex() {
    let x = [1.0, 0.0, 0.0];
    let mut previous = 0.0;
    for k in 2..10 {
        let r = 10f64.powi(-k);
        let b = kernel_gradient_bound(&x, &[0.0, r, 0.0], 0.5, &model()).unwrap();
        assert_relative_eq!(b, r.powf(-0.75), max_relative = 1e-12);
        assert!(b > previous);
        previous = b;
    }
}

#[test]
fn coincident_points_are_singular() {
    assert!(matches!(
        kernel_gradient_bound(&[1.0, 1.0, 0.0], &[1.0, 1.0, 0.0], 0.1, &model()),
        Err(ConeError::Singular(_))
    ));
}

#[test]
fn homogeneity_holds_on_random_triples_and_fails_when_tampered() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let m = model();
    let tampered = m.tampered();
    let mut far_checked = 0;
    for _ in 0..1000 {
        let (rx, rxi) = (10f64.powf(rng.gen_range(-2.0..1.0)), 10f64.powf(rng.gen_range(-2.0..1.0)));
        let x = random_point(&mut rng, rx);
        let xi = random_point(&mut rng, rxi);
        let s = 10f64.powf(rng.gen_range(-3.0..3.0));
        assert!(homogeneity_identity_check(&x, &xi, s, &m));
        let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let nxi = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        if classify_zone(nx, nxi) == Zone::E1 && (s - 1.0).abs() > 1e-3 {
            assert!(!homogeneity_identity_check(&x, &xi, s, &tampered));
            far_checked += 1;
        }
    }
    assert!(far_checked > 100);
    assert!(!homogeneity_identity_check(&[1.0, 0.0, 0.0], &[0.0, 3.0, 0.0], 0.0, &m));
}

#[test]
fn adjacent_zone_ratio_is_bounded_on_band_boundaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (n, alpha) in [(3, 0.25), (3, 1.0), (4, 0.5)] {
        let c = adjacent_zone_constant(n, alpha);
        let m = KernelBoundModel::new(n, alpha, 1.0, 1.0).unwrap().with_middle(MiddleZoneBound::RawGradient);
        for _ in 0..500 {
            let r = 10f64.powf(rng.gen_range(-2.0..1.0));
            let mut x = vec![0.0; n];
            let mut xi = vec![0.0; n];
            let dir: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let dn = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
            x[0] = r;
            for (k, d) in dir.iter().enumerate() {
                xi[k] = 2.0 * r * d / dn;
            }
            // on |ξ| = 2|x| the pair is E2; just beyond it, E1
            let mid = kernel_gradient_bound(&x, &xi, 0.0, &m).unwrap();
            let beyond: Vec<f64> = xi.iter().map(|v| v * (1.0 + 1e-12)).collect();
            let far = kernel_gradient_bound(&x, &beyond, 0.0, &m).unwrap();
            assert!(far / mid <= c * (1.0 + 1e-9) && mid / far <= c * (1.0 + 1e-9));
            // on |x| = 2|ξ| with the roles reversed
            let (x2, xi2): (Vec<f64>, Vec<f64>) = (xi.clone(), x.iter().map(|v| v * (1.0 - 1e-12)).collect());
            let mid2 = kernel_gradient_bound(&x2, &x, 0.0, &m).unwrap();
            let near = kernel_gradient_bound(&x2, &xi2, 0.0, &m).unwrap();
            assert!(near / mid2 <= c * (1.0 + 1e-9) && mid2 / near <= c * (1.0 + 1e-9));
        }
    }
}

#[test]
fn model_validation_and_strip_construction() {
    assert!(KernelBoundModel::new(2, 0.5, 1.0, 1.0).is_err());
    assert!(KernelBoundModel::new(3, 0.0, 1.0, 1.0).is_err());
    assert!(KernelBoundModel::new(3, 1.5, 1.0, 1.0).is_err());
    assert!(KernelBoundModel::new(3, 0.5, 0.0, 1.0).is_err());
    assert!(KernelBoundModel::new(3, 0.5, 1.0, -1.0).is_err());
    let strip = StripReport::from_root(3, 0.3).unwrap();
    let m = KernelBoundModel::from_strip(&strip, 2.0, 1.0).unwrap();
    assert_eq!(m.alpha, strip.alpha);
    assert_eq!(m.e1_decay(), 0.3 + 2.0);
    assert_eq!(m.tampered().e1_decay(), 3.3);
}

proptest! {
    #[test]
    fn bound_is_homogeneous_of_degree_one_minus_n(
        x in prop::array::uniform3(-5.0f64..5.0),
        xi in prop::array::uniform3(-5.0f64..5.0),
        r in 0.0f64..2.0,
        s in 0.01f64..100.0,
    ) {
        prop_assume!(x.iter().any(|v| v.abs() > 1e-3) && xi.iter().any(|v| v.abs() > 1e-3));
        prop_assume!(x.iter().zip(&xi).any(|(a, b)| (a - b).abs() > 1e-6));
        for m in [model(), model().with_middle(MiddleZoneBound::RawGradient)] {
            let b = kernel_gradient_bound(&x, &xi, r, &m).unwrap();
            let sx = x.map(|v| v * s);
            let sxi = xi.map(|v| v * s);
            let sb = kernel_gradient_bound(&sx, &sxi, s * r, &m).unwrap();
            prop_assert!((sb - s.powi(-2) * b).abs() <= 1e-11 * sb.abs().max(1e-300));
        }
    }
}
