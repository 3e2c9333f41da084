use confdyn::circle::{
    orthogonal_circle, reflection_extension, CoveringMap, MarkovPartition, Orientation, SideClass,
};
use confdyn::numeric::{turn, wrap, wrap_signed};
use confdyn::C64 as C;
use proptest::prelude::*;
use std::f64::consts::PI;

fn anti_power(d: usize) -> CoveringMap {
    CoveringMap::power(d, Orientation::Reversing).unwrap()
}

#[test]
fn power_lift_has_degree_winding() {
    for (d, o, w) in [
        (2, Orientation::Reversing, -2.0),
        (3, Orientation::Reversing, -3.0),
        (3, Orientation::Preserving, 3.0),
    ] {
        let f = CoveringMap::power(d, o).unwrap();
        let mut prev = f.lift(0.0);
        for i in 1..=1000 {
            let t = i as f64 / 1000.0;
            let x = f.lift(t);
            assert!((x - prev) * w > 0.0, "lift not monotone at {t}");
            prev = x;
        }
        assert!((f.lift(1.0) - f.lift(0.0) - w).abs() < 1e-12);
    }
}

#[test]
fn reflection_map_winding_and_break_images() {
    let b = [0.0, 0.2, 0.45, 0.7];
    let f = CoveringMap::reflection(&b).unwrap();
    assert!((f.lift(1.0) - f.lift(0.0) + 3.0).abs() < 1e-9);
    for &x in &b {
        assert!(wrap_signed(f.eval(x) - x).abs() < 1e-12);
    }
}

#[test]
fn reflection_map_agrees_with_inversion_oracle() {
    let b = [0.0, 0.25, 0.5, 0.75];
    let f = CoveringMap::reflection(&b).unwrap();
    for i in 0..4 {
        let (a, e) = (b[i], b[(i + 1) % 4]);
        let len = wrap(e - a);
        let center = turn(a + len / 2.0) / (PI * len).cos();
        let r = (PI * len).tan();
        for s in [0.1, 0.37, 0.8] {
            let t = a + s * len;
            let z = turn(t);
            let w = center + r * r / (z - center).conj();
            let expect = wrap(w.arg() / (2.0 * PI));
            assert!(
                wrap_signed(f.eval(t) - expect).abs() < 1e-12,
                "arc {i} at {t}"
            );
        }
    }
}

#[test]
fn break_images_are_exact_for_anti_power() {
    for d in 2..=5 {
        let f = anti_power(d);
        for j in 0..=d {
            let x = j as f64 / (d + 1) as f64;
            assert!(wrap_signed(f.eval(x) - x).abs() < 1e-15);
        }
    }
}

#[test]
fn anti_power_fixed_points_have_multiplier_d_squared() {
    for d in 2..=4 {
        let f = anti_power(d);
        for j in 0..=d {
            let c = f.classify_fixed(j as f64 / (d + 1) as f64).unwrap();
            let l = (d * d) as f64;
            assert!(
                (c.lambda_plus - l).abs() < 1e-6,
                "{d} {j}: {}",
                c.lambda_plus
            );
            assert!((c.lambda_minus - l).abs() < 1e-6);
            assert_eq!(c.class_plus, SideClass::Hyperbolic);
        }
    }
}

#[test]
fn refinement_tiles_and_nests() {
    let f = anti_power(2);
    let p = MarkovPartition::new(&f, &[0.0, 1.0 / 3.0, 2.0 / 3.0]).unwrap();
    let mut prev = p.refine(1);
    for n in 2..=6 {
        let arcs = p.refine(n);
        let total: f64 = arcs.iter().map(|a| a.len).sum();
        assert!((total - 1.0).abs() < 1e-12);
        for a in &arcs {
            let parent = prev
                .iter()
                .find(|q| q.word[..] == a.word[..n - 1])
                .expect("parent word");
            let off = wrap(a.start - parent.start);
            assert!(
                off + a.len <= parent.len + 1e-12,
                "level {n} arc escapes its parent"
            );
        }
        prev = arcs;
    }
    assert_eq!(prev.len(), 3 * 2usize.pow(5));
}

#[test]
fn orthogonal_circle_meets_unit_circle_at_right_angles() {
    for (a, b) in [(0.0, 0.1), (0.3, 0.55), (0.9, 0.2)] {
        let c = orthogonal_circle(a, b).unwrap();
        assert!((c.center.norm_sqr() - c.radius * c.radius - 1.0).abs() < 1e-12);
        let len = wrap(b - a);
        let expect = turn(a + len / 2.0) / (PI * len).cos();
        assert!((c.center - expect).norm() < 1e-12);
        assert!((c.radius - (PI * len).tan()).abs() < 1e-12);
    }
}

proptest! {
    #[test]
    fn orthogonal_circle_passes_through_endpoints(a in 0.0f64..1.0, len in 0.01f64..0.49) {
        let b = a + len;
        let c = orthogonal_circle(a, b).unwrap();
        prop_assert!(((turn(a) - c.center).norm() - c.radius).abs() < 1e-9 * c.radius.max(1.0));
        prop_assert!(((turn(b) - c.center).norm() - c.radius).abs() < 1e-9 * c.radius.max(1.0));
        prop_assert!((c.center.norm_sqr() - c.radius * c.radius - 1.0).abs() < 1e-8 * c.center.norm_sqr());
    }

    #[test]
    fn reflection_extension_is_an_involution(a in 0.0f64..1.0, len in 0.02f64..0.48, re in -0.9f64..0.9, im in -0.9f64..0.9) {
        let e = reflection_extension(a, a + len);
        let z = C::new(re, im);
        let w = e.eval(e.eval(z));
        prop_assert!((w - z).norm() < 1e-9 * (1.0 + z.norm()));
    }

    #[test]
    fn anti_power_lift_is_additive(t in 0.0f64..1.0, d in 2usize..6) {
        let f = anti_power(d);
        let x = f.lift(t);
        prop_assert!(wrap_signed(x - f.eval(t)).abs() < 1e-12);
        prop_assert!((x - f.lift(0.0) + d as f64 * t).abs() < 1e-12);
    }
}
