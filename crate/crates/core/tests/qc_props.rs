use confdyn::conjugacy::catalog_pair;
use confdyn::qc::{default_levels, lift_to_line, sample_grid, DavidTail, FnHomeo, LineHomeo};
use confdyn::C64 as C;
use proptest::prelude::*;
use std::f64::consts::TAU;
use std::sync::{Arc, OnceLock};

const AMP: f64 = 0.1;

fn wobble(x: f64) -> f64 {
    x + AMP * (TAU * x).sin()
}

/// Closed form of the extension of `wobble`.
fn wobble_extension(x: f64, y: f64) -> C {
    let c0 = (TAU * x).cos();
    let a = (c0 - (TAU * (x + y)).cos()) / (TAU * y);
    let b = ((TAU * (x - y)).cos() - c0) / (TAU * y);
    C::new(x + 0.5 * AMP * (a + b), y + AMP * (a - b))
}

fn table() -> &'static LineHomeo {
    static T: OnceLock<LineHomeo> = OnceLock::new();
    T.get_or_init(|| lift_to_line(&FnHomeo(wobble), 4096).unwrap())
}

#[test]
fn extension_matches_closed_form() {
    let func = LineHomeo::Func(Arc::new(wobble));
    for &(x, y) in &[(0.1, 0.05), (0.37, 0.2), (0.8, 0.6), (-0.3, 1.5)] {
        let e = wobble_extension(x, y);
        assert!((func.ba_extend(x, y).unwrap() - e).norm() < 1e-8);
        assert!((table().ba_extend(x, y).unwrap() - e).norm() < 1e-6);
    }
}

#[test]
fn affine_extension_is_conformal() {
    let h = LineHomeo::Affine { a: 2.0, b: 0.3 };
    let s = h.beltrami_half_plane(0.2, 0.5, 1e-4).unwrap();
    assert!(s.mu.norm() < 1e-9 && (s.k - 1.0).abs() < 1e-8);
    let z = h.ba_extend(0.2, 0.5).unwrap();
    assert!((z - C::new(0.7, 1.0)).norm() < 1e-14);
}

#[test]
fn tail_areas_do_not_increase() {
    let h = lift_to_line(&catalog_pair("rho2").unwrap(), 4096).unwrap();
    let ks: Vec<f64> = sample_grid(&h, 128).unwrap().iter().map(|s| s.k).collect();
    assert!(ks.iter().all(|&k| k >= 1.0));
    let t = DavidTail::from_samples(&ks, &default_levels(20.0, 0.5));
    assert_eq!(t.areas[0], 1.0);
    assert!(t.areas.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn default_levels_include_max() {
    let l = default_levels(3.0, 0.25);
    assert_eq!(l.len(), 9);
    assert_eq!(l[0], 1.0);
    assert!((l[8] - 3.0).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lift_advances_by_one(x in -3.0f64..3.0) {
        let h = table();
        prop_assert!((h.eval(x + 1.0) - h.eval(x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn extension_is_translation_equivariant(x in -1.0f64..1.0, y in 0.01f64..2.0) {
        let h = table();
        let d = h.ba_extend(x + 1.0, y).unwrap() - h.ba_extend(x, y).unwrap();
        prop_assert!((d - C::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn odd_lift_gives_symmetric_extension(x in -1.0f64..1.0, y in 0.01f64..2.0) {
        // wobble is odd, so F(-x, y) = -conj F(x, y)
        let h = table();
        let a = h.ba_extend(-x, y).unwrap();
        let b = h.ba_extend(x, y).unwrap();
        prop_assert!((a + b.conj()).norm() < 1e-10);
    }

    #[test]
    fn distortion_is_at_least_one(r in 0.0f64..0.95, t in 0.0f64..1.0) {
        let s = table().beltrami_at(C::from_polar(r, TAU * t), None).unwrap();
        prop_assert!(s.k >= 1.0 && s.mu.norm() < 1.0);
    }

    #[test]
    fn disk_extension_preserves_orientation(r in 0.05f64..0.9, t in 0.0f64..1.0) {
        let h = table();
        let c = C::from_polar(r, TAU * t);
        let e = 0.01 * (1.0 - r);
        let square = [c + C::new(-e, -e), c + C::new(e, -e), c + C::new(e, e), c + C::new(-e, e)];
        let img: Vec<C> = square.iter().map(|&z| h.disk_extend(z).unwrap()).collect();
        let area: f64 = (0..4).map(|i| {
            let (p, q) = (img[i], img[(i + 1) % 4]);
            p.re * q.im - q.re * p.im
        }).sum();
        prop_assert!(area > 0.0);
    }
}
