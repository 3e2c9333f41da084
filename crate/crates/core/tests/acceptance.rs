//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero on failure.

use confdyn::circle::{CoveringMap, MarkovPartition, Orientation, ScalingLaw, Side};
use confdyn::conjugacy::{catalog_pair, DistortionModel};
use confdyn::holo::{self, RationalMap};
use confdyn::numeric::{is_inf, Poly};
use confdyn::qc::{self, FnHomeo};
use confdyn::raster::{RasterSpec, Viewport, UNDECIDED};
use confdyn::reflection::{self, NielsenStep};
use confdyn::schwarz::{self, SystemStep};
use confdyn::suffridge::{self, BiAngledTree, PolyCurve};
use num_complex::Complex64 as C;
use std::process::ExitCode;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn multiplier_check() -> Outcome {
    let b = RationalMap::new(
        Poly::real(&[1.0, 0.0, 0.0, 2.0]),
        Poly::real(&[2.0, 0.0, 0.0, 1.0]),
        false,
    )
    .map_err(err)?;
    let fps = b.fixed_points().map_err(err)?;
    let at = |p: C| {
        fps.iter()
            .find(|f| (f.point - p).norm() < 1e-6)
            .map(|f| f.multiplier)
            .ok_or(format!("no fixed point at {p}"))
    };
    let (m1, m9) = (at(C::new(1.0, 0.0))?, at(C::new(-1.0, 0.0))?);
    ensure((m1 - 1.0).norm() < 1e-9, format!("multiplier at 1 is {m1}"))?;
    ensure(
        (m9 - 9.0).norm() < 1e-9,
        format!("multiplier at -1 is {m9}"),
    )?;
    Ok(format!(
        "λ(1) = {:.3e} off 1, λ(-1) = {:.3e} off 9",
        (m1 - 1.0).norm(),
        (m9 - 9.0).norm()
    ))
}

fn alpha_recovery() -> Outcome {
    let closed = 0.5 * ((1.0 + 5f64.sqrt()) - (2.0 + 2.0 * 5f64.sqrt()).sqrt());
    let a = schwarz::solve_alpha();
    ensure((a - closed).abs() < 1e-10, format!("alpha {a} vs {closed}"))?;
    let s = schwarz::ellipse_two_disks().map_err(err)?;
    let p = C::new(1.0 / a + a * a * a, 0.0);
    let w = match s.step(p) {
        SystemStep::Reflected { w, .. } => w,
        other => return Err(format!("1/α + α³ not reflected: {other:?}")),
    };
    ensure((w - 2.0 * a).norm() < 1e-9, format!("σ(1/α + α³) = {w}"))?;
    let back = match s.step(w) {
        SystemStep::Reflected { w, .. } => w,
        other => return Err(format!("2α not reflected: {other:?}")),
    };
    ensure((back - p).norm() < 1e-9, format!("σ(2α) = {back}"))?;
    Ok(format!(
        "α = {a:.12}, cycle error {:.2e}",
        (back - p).norm()
    ))
}

fn cauliflower_constants() -> Outcome {
    let f = schwarz::parabolic_fit();
    ensure(
        (f.r_at_one + 4.0 / 3.0).abs() < 1e-12,
        format!("R(1) = {}", f.r_at_one),
    )?;
    let rel = (f.epsilon5_coefficient / (5.0 / 36.0) - 1.0).abs();
    ensure(
        rel < 0.01,
        format!("ε⁵ coefficient {}", f.epsilon5_coefficient),
    )?;
    ensure(
        (f.cusp_exponent - 2.5).abs() <= 0.05,
        format!("cusp exponent {}", f.cusp_exponent),
    )?;
    Ok(format!(
        "R(1) = {}, ε⁵ coefficient {:.6} ({:.2e} rel), exponent {:.5}",
        f.r_at_one, f.epsilon5_coefficient, rel, f.cusp_exponent
    ))
}

fn cubic_domain() -> Outcome {
    let v = schwarz::cubic_uniformizer().eval(C::new(1.0, 0.0));
    let expect = 4.0 / 3.0 + 2.0 * 2f64.sqrt() / 3.0;
    ensure(
        (v.re - expect).abs() < 1e-12 && v.im.abs() < 1e-12,
        format!("f2(1) = {v}"),
    )?;
    let curve = PolyCurve::new(Poly::real(&[0.0, 1.0, 2.0 * 2f64.sqrt() / 3.0, 1.0 / 3.0]));
    let dps = suffridge::curve_double_points(&curve, suffridge::DEFAULT_SAMPLES);
    ensure(dps.len() == 1, format!("{} double points", dps.len()))?;
    let s = schwarz::cubic_circle().map_err(err)?;
    let inf = match s.step(C::new(0.0, 0.0)) {
        SystemStep::Reflected { w, .. } => w,
        other => return Err(format!("0 not reflected: {other:?}")),
    };
    ensure(is_inf(inf), format!("σ(0) = {inf}"))?;
    let zero = match s.step(inf) {
        SystemStep::Reflected { w, .. } => w,
        other => return Err(format!("∞ not reflected: {other:?}")),
    };
    ensure(zero == C::new(0.0, 0.0), format!("σ(∞) = {zero}"))?;
    Ok(format!(
        "f2(1) error {:.1e}, double point at {:?}, 0 ↔ ∞",
        (v.re - expect).abs(),
        dps[0].params
    ))
}

fn power_exponents(m: &MarkovPartition, a: f64) -> Result<(f64, f64), String> {
    let p = m
        .arc_scaling_profile(a, Side::Plus, 3, 50, 500)
        .map_err(err)?;
    match p.law {
        ScalingLaw::Power {
            first_exponent,
            second_exponent,
            ..
        } => Ok((first_exponent, second_exponent)),
        other => Err(format!("expected power law, got {other:?}")),
    }
}

fn arc_scaling() -> Outcome {
    let p3 = CoveringMap::power(3, Orientation::Reversing).map_err(err)?;
    let m = MarkovPartition::new(&p3, &[0.0, 0.25, 0.5, 0.75]).map_err(err)?;
    let prof = m
        .arc_scaling_profile(0.0, Side::Plus, 2, 10, 40)
        .map_err(err)?;
    let ratio = match prof.law {
        ScalingLaw::Geometric {
            ratio_per_return, ..
        } => ratio_per_return,
        other => return Err(format!("expected geometric law, got {other:?}")),
    };
    ensure((ratio * 9.0 - 1.0).abs() < 0.02, format!("ratio {ratio}"))?;
    let thirds = [0.0, 1.0 / 3.0, 2.0 / 3.0];
    let rho = CoveringMap::reflection(&thirds).map_err(err)?;
    let (r1, r2) = power_exponents(&MarkovPartition::new(&rho, &thirds).map_err(err)?, 0.0)?;
    ensure(
        (r1 + 1.0).abs() <= 0.05 && (r2 + 2.0).abs() <= 0.1,
        format!("ρ₂ exponents {r1}, {r2}"),
    )?;
    let b2 = CoveringMap::blaschke_parabolic(2).map_err(err)?;
    let (b1, b2e) = power_exponents(&MarkovPartition::new(&b2, &[0.0, 0.5]).map_err(err)?, 0.0)?;
    ensure(
        (b1 + 0.5).abs() <= 0.05 && (b2e + 1.5).abs() <= 0.1,
        format!("B₂ exponents {b1}, {b2e}"),
    )?;
    Ok(format!(
        "z̄³ ratio·9 = {:.4}; ρ₂ {r1:.3}, {r2:.3}; B₂ {b1:.3}, {b2e:.3}",
        ratio * 9.0
    ))
}

fn distortion_growth() -> Outcome {
    let samples = 1 << 14;
    let rho = catalog_pair("rho2")
        .map_err(err)?
        .distortion_profile(4, 14, samples)
        .map_err(err)?;
    let per_k = rho
        .ks
        .iter()
        .zip(&rho.values)
        .map(|(&k, &v)| v / k as f64)
        .fold(0.0, f64::max);
    ensure(
        rho.model == DistortionModel::LinearInK,
        format!("ρ₂ model {:?}", rho.model),
    )?;
    ensure(per_k <= 2.0, format!("max ρ/k = {per_k}"))?;
    let hyp = catalog_pair("anti_blaschke3")
        .map_err(err)?
        .distortion_profile(4, 14, samples)
        .map_err(err)?;
    ensure(
        hyp.model == DistortionModel::Bounded,
        format!("hyperbolic model {:?}", hyp.model),
    )?;
    ensure(
        hyp.max_value() <= 4.0,
        format!("hyperbolic max ρ = {}", hyp.max_value()),
    )?;
    Ok(format!(
        "ρ₂: slope {:.3}, max ρ/k {:.3}; hyperbolic: max ρ {:.3}",
        rho.slope,
        per_k,
        hyp.max_value()
    ))
}

fn extension_properties() -> Outcome {
    let id = qc::lift_to_line(&FnHomeo(|t: f64| t), 4096).map_err(err)?;
    let mut worst: f64 = 0.0;
    for j in 0..64 {
        for i in 0..64 {
            let w = C::new(
                -1.0 + (i as f64 + 0.5) / 32.0,
                -1.0 + (j as f64 + 0.5) / 32.0,
            );
            if w.norm() < 1.0 {
                worst = worst.max((id.disk_extend(w).map_err(err)? - w).norm());
            }
        }
    }
    ensure(worst < 1e-12, format!("identity extension error {worst}"))?;
    let rho = qc::lift_to_line(&catalog_pair("rho2").map_err(err)?, 1 << 16).map_err(err)?;
    let mut sym: f64 = 0.0;
    for j in 0..32 {
        for i in 0..32 {
            let w = C::new(
                -1.0 + (i as f64 + 0.5) / 16.0,
                -1.0 + (j as f64 + 0.5) / 16.0,
            );
            if w.norm() < 0.99 {
                let a = rho.disk_extend(w).map_err(err)?;
                let b = rho.disk_extend(w.conj()).map_err(err)?;
                sym = sym.max((a.conj() - b).norm());
            }
        }
    }
    ensure(sym < 1e-9, format!("real-symmetry defect {sym}"))?;
    let levels = qc::default_levels(30.0, 0.25);
    let tail = qc::david_tail(&rho, 256, &levels).map_err(err)?;
    let fit = tail.fit.clone().ok_or("no exponential fit for ρ₂")?;
    ensure(fit.r2 >= 0.9, format!("ρ₂ tail R² = {}", fit.r2))?;
    let hyp =
        qc::lift_to_line(&catalog_pair("anti_blaschke3").map_err(err)?, 1 << 14).map_err(err)?;
    let htail = qc::david_tail(&hyp, 256, &levels).map_err(err)?;
    ensure(
        htail.reaches_zero(),
        format!("hyperbolic max K = {}", htail.max_k),
    )?;
    Ok(format!(
        "identity {worst:.1e}, symmetry {sym:.1e}, ρ₂ tail R² {:.4} α {:.3} (K ≤ {:.1}), hyperbolic K ≤ {:.3}",
        fit.r2, fit.alpha, tail.max_k, htail.max_k
    ))
}

fn group_dynamics() -> Outcome {
    for n in 3..=9 {
        let p = reflection::regular_ideal_polygon(n).map_err(err)?;
        ensure(
            p.is_necklace().is_necklace,
            format!("ideal {n}-gon rejected"),
        )?;
    }
    let p = reflection::regular_ideal_polygon(3).map_err(err)?;
    let mut bases = Vec::new();
    for j in 0..40 {
        let w = C::new(
            0.6 * ((j as f64) * 0.37).sin(),
            0.6 * ((j as f64) * 0.91).cos(),
        ) * ((j % 5) as f64 / 5.0);
        let far = p
            .circles()
            .iter()
            .all(|c| (w - c.center).norm() > c.radius + 0.02);
        if far && p.nielsen_step(w) == NielsenStep::InFundamentalDomain {
            bases.push(w);
        }
    }
    bases.extend([C::new(2.5, 0.3), C::new(-1.0, -2.0)]);
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    for len in 1..=3 {
        let prev: Vec<Vec<usize>> = words
            .iter()
            .filter(|w| w.len() == len - 1)
            .cloned()
            .collect();
        for w in prev {
            for k in 0..3 {
                let mut v = w.clone();
                v.push(k);
                words.push(v);
            }
        }
    }
    let mut checked = 0;
    for &w in &bases {
        for word in &words {
            let z = p.apply_word(word, w).map_err(err)?;
            let expect = reflection::reduce_word(word).len();
            let got = p.escape_time(z, 50).steps();
            ensure(
                got == Some(expect),
                format!("word {word:?} at {w}: {got:?} vs {expect}"),
            )?;
            checked += 1;
        }
    }
    let spec = RasterSpec::new(512, 512, Viewport::square(4.0), 200).map_err(err)?;
    let frac = p.render_limit(spec).fraction(UNDECIDED);
    ensure(frac < 0.05, format!("undecided fraction {frac}"))?;
    Ok(format!(
        "necklaces 3..9, {checked} word checks, undecided {frac:.2e}"
    ))
}

fn suffridge_combinatorics() -> Outcome {
    let g = suffridge::claw_map().map_err(err)?;
    let s = suffridge::curve_singularities(&g);
    let tiles = suffridge::tiles_from(5, &s).map_err(err)?;
    let counts = (s.cusps.len(), s.double_points.len(), tiles.len());
    ensure(counts == (6, 3, 4), format!("g counts {counts:?}"))?;
    let tg = suffridge::tree_from_tiles(&tiles);
    ensure(
        tg.check_axioms() && suffridge::trees_isomorphic(&tg, &BiAngledTree::claw()),
        "g tree is not the claw",
    )?;
    let f = suffridge::path_map_approx().map_err(err)?;
    let sf = suffridge::curve_singularities(&f);
    let tf = suffridge::tiles_from(5, &sf).map_err(err)?;
    let cf = (sf.cusps.len(), sf.double_points.len(), tf.len());
    ensure(cf == (6, 3, 4), format!("f counts {cf:?}"))?;
    let pf = suffridge::tree_from_tiles(&tf);
    ensure(
        pf.check_axioms() && pf.is_path() && pf.vertices == 4,
        "f tree is not a path",
    )?;
    for j in 1..6 {
        let r = g.rotated(j).map_err(err)?;
        let t = suffridge::bi_angled_tree(&r).map_err(err)?;
        ensure(
            suffridge::trees_isomorphic(&tg, &t),
            format!("rotation {j} changes the tree"),
        )?;
    }
    Ok(format!(
        "g {counts:?} claw; f {cf:?} path {:?}; 5 rotations isomorphic",
        pf.path_angles().unwrap_or_default()
    ))
}

fn critical_orbits() -> Outcome {
    let mut worst_fixed: f64 = 0.0;
    let pg = holo::catalog("P_gamma").map_err(err)?;
    for c in pg
        .critical_points()
        .map_err(err)?
        .iter()
        .filter(|c| !is_inf(c.point))
    {
        worst_fixed = worst_fixed.max((pg.eval(c.point) - c.point).norm());
    }
    ensure(
        worst_fixed < 1e-10,
        format!("P_Γ critical displacement {worst_fixed}"),
    )?;
    let mut worst_two: f64 = 0.0;
    for name in ["P1", "P2"] {
        let m = holo::catalog(name).map_err(err)?;
        let crit: Vec<C> = m
            .critical_points()
            .map_err(err)?
            .iter()
            .map(|c| c.point)
            .filter(|z| !is_inf(*z))
            .collect();
        ensure(
            !crit.is_empty(),
            format!("{name} has no finite critical point"),
        )?;
        for c in crit {
            let e = (m.eval(m.eval(c)) - c).norm();
            ensure(e < 1e-9, format!("{name}: |P²(c) − c| = {e}"))?;
            worst_two = worst_two.max(e);
        }
    }
    Ok(format!(
        "P_Γ fixed {worst_fixed:.1e}, P₁/P₂ 2-periodic {worst_two:.1e}"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 10] = [
        ("multiplier check", Duration::from_secs(1), multiplier_check),
        ("alpha recovery", Duration::from_secs(1), alpha_recovery),
        (
            "cauliflower constants",
            Duration::from_secs(5),
            cauliflower_constants,
        ),
        ("cubic domain", Duration::from_secs(10), cubic_domain),
        ("arc scaling laws", Duration::from_secs(60), arc_scaling),
        (
            "distortion growth",
            Duration::from_secs(120),
            distortion_growth,
        ),
        (
            "extension properties",
            Duration::from_secs(600),
            extension_properties,
        ),
        ("group dynamics", Duration::from_secs(30), group_dynamics),
        (
            "suffridge combinatorics",
            Duration::from_secs(60),
            suffridge_combinatorics,
        ),
        (
            "critical-orbit facts",
            Duration::from_secs(1),
            critical_orbits,
        ),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(d) if took > *limit => Err(format!("{d}; over the {}s budget", limit.as_secs())),
            o => o,
        };
        match outcome {
            Ok(d) => println!("PASS {:>2} {name} ({:.2}s): {d}", i + 1, took.as_secs_f64()),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({:.2}s): {d}", i + 1, took.as_secs_f64());
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
