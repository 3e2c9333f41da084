//! Quadrature domains, Schwarz reflections and piecewise Schwarz systems.
//!
//! A simply connected quadrature domain is `f(𝔻)` or `f(𝔻*)` for a rational
//! `f` univalent on that side; its Schwarz reflection is
//! `σ = f ∘ (1/z̄) ∘ f⁻¹`. Round disks and their exteriors use the closed-form
//! inversion instead.

use crate::holo;
use crate::numeric::dd::{horner, Dd};
use crate::numeric::{fit::line_fit, is_inf, turn, Poly, Rational, INF};
use crate::raster::{Pixel, Raster, RasterSpec, ESCAPED, UNDECIDED};
use crate::{Error, Result};
use num_complex::Complex64 as C;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainSide {
    /// `f(𝔻)`.
    Disk,
    /// `f(𝔻*)`, `𝔻* = Ĉ \ closed disk`.
    Exterior,
}

/// Roots closer than this to the unit circle count as boundary roots.
const SIDE_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum QuadratureDomain {
    Rational { f: Rational, side: DomainSide },
    Disk { center: C, radius: f64 },
    DiskExterior { center: C, radius: f64 },
}

/// Validate univalence of `f` on `side` and build the domain. Every sampled
/// value `f(z₀)` must have exactly one preimage on the open side, and `f'` may
/// not vanish there.
pub fn make_quadrature_domain(f: Rational, side: DomainSide) -> Result<QuadratureDomain> {
    let on_side = |z: C| match side {
        DomainSide::Disk => z.norm() < 1.0 - SIDE_MARGIN,
        DomainSide::Exterior => z.norm() > 1.0 + SIDE_MARGIN,
    };
    let crit = f.derivative().num.trimmed(1e-14).roots()?;
    if let Some(c) = crit.iter().find(|&&c| on_side(c)) {
        return Err(Error::NotUnivalent(format!(
            "critical point {c} lies on the domain side"
        )));
    }
    let radii: &[f64] = match side {
        DomainSide::Disk => &[0.0, 0.3, 0.6, 0.9, 0.99],
        DomainSide::Exterior => &[1.01, 1.1, 1.5, 3.0, 10.0],
    };
    for &r in radii {
        for k in 0..16 {
            let z0 = r * turn(k as f64 / 16.0 + 0.013);
            let w = f.eval(z0);
            if is_inf(w) {
                continue;
            }
            let n = preimages(&f, w)?
                .into_iter()
                .filter(|&z| {
                    z.is_some_and(on_side) || (z.is_none() && side == DomainSide::Exterior)
                })
                .count();
            if n != 1 {
                return Err(Error::NotUnivalent(format!(
                    "f({z0}) has {n} preimages on the domain side"
                )));
            }
        }
    }
    Ok(QuadratureDomain::Rational { f, side })
}

/// Solutions of `f(z) = w` with multiplicity; `None` stands for `z = ∞`.
fn preimages(f: &Rational, w: C) -> Result<Vec<Option<C>>> {
    let full = f.num.degree().max(f.den.degree());
    let p = if is_inf(w) {
        f.den.clone()
    } else {
        f.num.sub(&f.den.scale(w))
    };
    let p = p.trimmed(1e-14);
    let mut out: Vec<Option<C>> = if p.is_zero() {
        vec![]
    } else {
        p.roots()?.into_iter().map(Some).collect()
    };
    let deficit = full.saturating_sub(if p.is_zero() { 0 } else { p.degree() });
    out.extend(std::iter::repeat_n(None, deficit));
    Ok(out)
}

impl QuadratureDomain {
    pub fn disk(center: C, radius: f64) -> Result<QuadratureDomain> {
        if !(radius > 0.0) {
            return Err(Error::InvalidInput("radius must be positive".into()));
        }
        Ok(QuadratureDomain::Disk { center, radius })
    }

    pub fn disk_exterior(center: C, radius: f64) -> Result<QuadratureDomain> {
        if !(radius > 0.0) {
            return Err(Error::InvalidInput("radius must be positive".into()));
        }
        Ok(QuadratureDomain::DiskExterior { center, radius })
    }

    /// Schwarz reflection of `w ∈ closure(Ω)`.
    pub fn reflect(&self, w: C) -> Result<C> {
        match self {
            QuadratureDomain::Disk { center, radius } => {
                if is_inf(w) || (w - center).norm() > radius * (1.0 + SIDE_MARGIN) {
                    return Err(Error::OutsideDomain);
                }
                let d = w - center;
                if d.norm() == 0.0 {
                    return Ok(INF);
                }
                Ok(center + radius * radius / d.conj())
            }
            QuadratureDomain::DiskExterior { center, radius } => {
                if is_inf(w) {
                    return Ok(*center);
                }
                let d = w - center;
                if d.norm() < radius * (1.0 - SIDE_MARGIN) {
                    return Err(Error::OutsideDomain);
                }
                Ok(center + radius * radius / d.conj())
            }
            QuadratureDomain::Rational { f, side } => {
                let closed = |z: &Option<C>| match (side, z) {
                    (DomainSide::Disk, Some(z)) => z.norm() <= 1.0 + SIDE_MARGIN,
                    (DomainSide::Disk, None) => false,
                    (DomainSide::Exterior, Some(z)) => z.norm() >= 1.0 - SIDE_MARGIN,
                    (DomainSide::Exterior, None) => true,
                };
                let mut cands: Vec<Option<C>> =
                    preimages(f, w)?.into_iter().filter(closed).collect();
                cands.dedup_by(|a, b| match (a, b) {
                    (Some(x), Some(y)) => (*x - *y).norm() < 1e-6,
                    (None, None) => true,
                    _ => false,
                });
                let distinct = cands_distinct(&cands);
                match distinct.len() {
                    0 => Err(Error::OutsideDomain),
                    1 => Ok(match distinct[0] {
                        None => f.eval_sphere(C::new(0.0, 0.0)),
                        Some(z) if z.norm() == 0.0 => f.at_infinity(),
                        Some(z) => f.eval_sphere(C::new(1.0, 0.0) / z.conj()),
                    }),
                    _ => Err(Error::AmbiguousRoot),
                }
            }
        }
    }

    /// Whether `w` lies in the open domain, `margin` away from the boundary
    /// in the uniformising coordinate.
    pub fn contains_open(&self, w: C, margin: f64) -> bool {
        match self {
            QuadratureDomain::Disk { center, radius } => {
                !is_inf(w) && (w - center).norm() < radius * (1.0 - margin)
            }
            QuadratureDomain::DiskExterior { center, radius } => {
                is_inf(w) || (w - center).norm() > radius * (1.0 + margin)
            }
            QuadratureDomain::Rational { f, side } => preimages(f, w).is_ok_and(|zs| {
                zs.iter().any(|z| match (side, z) {
                    (DomainSide::Disk, Some(z)) => z.norm() < 1.0 - margin,
                    (DomainSide::Exterior, Some(z)) => z.norm() > 1.0 + margin,
                    (DomainSide::Exterior, None) => true,
                    _ => false,
                })
            }),
        }
    }

    /// Boundary point at angle `t` turns.
    pub fn boundary_point(&self, t: f64) -> C {
        match self {
            QuadratureDomain::Disk { center, radius }
            | QuadratureDomain::DiskExterior { center, radius } => center + radius * turn(t),
            QuadratureDomain::Rational { f, .. } => f.eval(turn(t)),
        }
    }

    /// Images of the critical points of `f` on the unit circle.
    pub fn cusps(&self) -> Vec<C> {
        match self {
            QuadratureDomain::Rational { f, .. } => f
                .derivative()
                .num
                .trimmed(1e-14)
                .roots()
                .unwrap_or_default()
                .into_iter()
                .filter(|c| (c.norm() - 1.0).abs() < 1e-7)
                .map(|c| f.eval(c / c.norm()))
                .collect(),
            _ => vec![],
        }
    }
}

fn cands_distinct(c: &[Option<C>]) -> Vec<Option<C>> {
    let mut out: Vec<Option<C>> = Vec::new();
    for &z in c {
        let dup = out.iter().any(|o| match (o, z) {
            (Some(a), Some(b)) => (*a - b).norm() < 1e-6,
            (None, None) => true,
            _ => false,
        });
        if !dup {
            out.push(z);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactPoint {
    pub domains: (usize, usize),
    pub point: C,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchwarzSystem {
    domains: Vec<QuadratureDomain>,
    contacts: Vec<ContactPoint>,
    cusps: Vec<C>,
}

const BOUNDARY_SAMPLES: usize = 2048;

pub fn make_system(domains: Vec<QuadratureDomain>) -> Result<SchwarzSystem> {
    if domains.is_empty() {
        return Err(Error::InvalidInput(
            "a system needs at least one domain".into(),
        ));
    }
    let n = BOUNDARY_SAMPLES;
    let samples: Vec<Vec<C>> = domains
        .iter()
        .map(|d| {
            (0..n)
                .map(|i| d.boundary_point(i as f64 / n as f64))
                .collect()
        })
        .collect();
    for (k, dk) in domains.iter().enumerate() {
        for (j, sj) in samples.iter().enumerate() {
            if j != k && sj.iter().any(|&w| !is_inf(w) && dk.contains_open(w, 1e-6)) {
                return Err(Error::OverlappingDomains(k.min(j), k.max(j)));
            }
        }
    }
    let mut contacts = Vec::new();
    for k in 0..domains.len() {
        for j in k + 1..domains.len() {
            for p in boundary_contacts(&domains[k], &domains[j], &samples[k], &samples[j]) {
                contacts.push(ContactPoint {
                    domains: (k, j),
                    point: p,
                });
            }
        }
    }
    let cusps = domains.iter().flat_map(|d| d.cusps()).collect();
    Ok(SchwarzSystem {
        domains,
        contacts,
        cusps,
    })
}

/// Touching points of two boundaries: close sample pairs refined by nested
/// golden-section minimisation of the distance.
fn boundary_contacts(a: &QuadratureDomain, b: &QuadratureDomain, sa: &[C], sb: &[C]) -> Vec<C> {
    let n = sa.len();
    let spacing = sa
        .windows(2)
        .chain(sb.windows(2))
        .map(|w| (w[1] - w[0]).norm())
        .filter(|d| d.is_finite())
        .fold(0.0, f64::max);
    let mut cand: Vec<(f64, usize, usize)> = Vec::new();
    for (i, &p) in sa.iter().enumerate() {
        for (j, &q) in sb.iter().enumerate() {
            let d = (p - q).norm();
            if d < 2.0 * spacing {
                cand.push((d, i, j));
            }
        }
    }
    cand.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut out: Vec<C> = Vec::new();
    for (_, i, j) in cand {
        let p = sa[i];
        if out.iter().any(|&c| (c - p).norm() < 20.0 * spacing) {
            continue;
        }
        let h = 2.0 / n as f64;
        let dist_at = |s: f64| {
            let ps = a.boundary_point(s);
            let t = golden(
                |t| (ps - b.boundary_point(t)).norm(),
                j as f64 / n as f64 - h,
                j as f64 / n as f64 + h,
            );
            ((ps - b.boundary_point(t)).norm(), ps)
        };
        let s = golden(
            |s| dist_at(s).0,
            i as f64 / n as f64 - h,
            i as f64 / n as f64 + h,
        );
        let (d, ps) = dist_at(s);
        if d < 1e-7 {
            out.push(ps);
        }
    }
    out
}

fn golden(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SystemStep {
    Reflected { domain: usize, w: C },
    EscapedToTiles,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchwarzOrbitClass {
    EscapedToTiles { steps: usize },
    NonEscaping { budget: usize, last: C },
    ConvergedToPoint { point: C, steps: usize },
}

impl SchwarzSystem {
    pub fn domains(&self) -> &[QuadratureDomain] {
        &self.domains
    }

    pub fn contacts(&self) -> &[ContactPoint] {
        &self.contacts
    }

    /// Boundary cusps of all domains.
    pub fn cusps(&self) -> &[C] {
        &self.cusps
    }

    /// The reflection of the first domain whose closure contains `w`.
    /// Boundary double points are fixed.
    pub fn step(&self, w: C) -> SystemStep {
        for (k, d) in self.domains.iter().enumerate() {
            match d.reflect(w) {
                Ok(v) => return SystemStep::Reflected { domain: k, w: v },
                Err(Error::OutsideDomain) => continue,
                Err(_) => return SystemStep::Reflected { domain: k, w },
            }
        }
        SystemStep::EscapedToTiles
    }

    /// Iterate until escape, convergence or `budget` steps. Convergence to a
    /// cusp is declared when the orbit has moved monotonically towards it with
    /// shrinking displacement for 50 consecutive steps inside distance `0.05`.
    pub fn classify_orbit(&self, w: C, budget: usize) -> SchwarzOrbitClass {
        const WINDOW: usize = 50;
        let mut w = w;
        let mut streak = 0usize;
        let mut last: Option<(usize, f64, f64)> = None;
        for n in 0..budget.max(1) {
            let next = match self.step(w) {
                SystemStep::EscapedToTiles => {
                    return SchwarzOrbitClass::EscapedToTiles { steps: n }
                }
                SystemStep::Reflected { w, .. } => w,
            };
            if !is_inf(next) && !is_inf(w) {
                let disp = (next - w).norm();
                if disp <= 1e-13 * w.norm().max(1.0) {
                    return SchwarzOrbitClass::ConvergedToPoint {
                        point: next,
                        steps: n + 1,
                    };
                }
                let near = self
                    .cusps
                    .iter()
                    .enumerate()
                    .map(|(k, c)| (k, (next - c).norm()))
                    .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
                match (near, last) {
                    (Some((k, d)), Some((k0, d0, disp0)))
                        if k == k0 && d < d0 && disp < disp0 && d < 0.05 =>
                    {
                        streak += 1;
                        if streak >= WINDOW {
                            return SchwarzOrbitClass::ConvergedToPoint {
                                point: self.cusps[k],
                                steps: n + 1,
                            };
                        }
                    }
                    _ => streak = 0,
                }
                last = near.map(|(k, d)| (k, d, disp));
            } else {
                streak = 0;
                last = None;
            }
            w = next;
        }
        SchwarzOrbitClass::NonEscaping { budget, last: w }
    }

    /// Tiles are `ESCAPED`, non-escaping points `UNDECIDED`, points converging
    /// to a fixed point or cusp class `2`.
    pub fn render(&self, spec: RasterSpec, budget: usize) -> Raster {
        Raster::render(spec, |z| match self.classify_orbit(z, budget) {
            SchwarzOrbitClass::EscapedToTiles { steps } => Pixel {
                class: ESCAPED,
                steps: steps as u32,
            },
            SchwarzOrbitClass::NonEscaping { budget, .. } => Pixel {
                class: UNDECIDED,
                steps: budget as u32,
            },
            SchwarzOrbitClass::ConvergedToPoint { steps, .. } => Pixel {
                class: 2,
                steps: steps as u32,
            },
        })
    }
}

pub fn system_step(s: &SchwarzSystem, w: C) -> SystemStep {
    s.step(w)
}

pub fn classify_schwarz_orbit(s: &SchwarzSystem, w: C, budget: usize) -> SchwarzOrbitClass {
    s.classify_orbit(w, budget)
}

pub fn render_system(s: &SchwarzSystem, spec: RasterSpec, budget: usize) -> Raster {
    s.render(spec, budget)
}

/// Root on `(0, 1)` of `σ(2α) = 1/α + α³`, where `σ` is inversion in the circle
/// with centre and radius `(1 + α²)/2`.
pub fn solve_alpha() -> f64 {
    let g = |a: f64| {
        let c = 0.5 * (1.0 + a * a);
        c + c * c / (2.0 * a - c) - (1.0 / a + a * a * a)
    };
    let n = 2000;
    let mut root = f64::NAN;
    for i in 1..n {
        let (a, b) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
        let (ga, gb) = (g(a), g(b));
        if ga * gb < 0.0 && ga.abs() < 10.0 && gb.abs() < 10.0 {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..60 {
                let m = 0.5 * (lo + hi);
                if (g(m) < 0.0) == (ga < 0.0) {
                    lo = m;
                } else {
                    hi = m;
                }
            }
            root = 0.5 * (lo + hi);
            break;
        }
    }
    for _ in 0..4 {
        let h = 1e-7;
        let d = (g(root + h) - g(root - h)) / (2.0 * h);
        if d != 0.0 {
            root -= g(root) / d;
        }
    }
    root
}

/// `½((1+√5) − √(2+2√5))`.
pub fn alpha_closed_form() -> f64 {
    let s5 = 5f64.sqrt();
    0.5 * ((1.0 + s5) - (2.0 + 2.0 * s5).sqrt())
}

/// Exterior of the ellipse `f₁(𝔻*)`, `f₁(z) = z + α²/z`, and the two disks
/// `|z ∓ (1+α²)/2| < (1+α²)/2`.
pub fn ellipse_two_disks() -> Result<SchwarzSystem> {
    let a = solve_alpha();
    let f1 = Rational::new(Poly::real(&[a * a, 0.0, 1.0]), Poly::real(&[0.0, 1.0]));
    let c = 0.5 * (1.0 + a * a);
    make_system(vec![
        make_quadrature_domain(f1, DomainSide::Exterior)?,
        QuadratureDomain::disk(C::new(c, 0.0), c)?,
        QuadratureDomain::disk(C::new(-c, 0.0), c)?,
    ])
}

/// `f₂(z) = z + (2√2/3) z² + z³/3`.
pub fn cubic_uniformizer() -> Rational {
    Rational::poly(Poly::real(&[0.0, 1.0, 2.0 * 2f64.sqrt() / 3.0, 1.0 / 3.0]))
}

/// `{|z| > 4/3 + 2√2/3}` and `f₂(𝔻)`.
pub fn cubic_circle() -> Result<SchwarzSystem> {
    let r = 4.0 / 3.0 + 2.0 * 2f64.sqrt() / 3.0;
    make_system(vec![
        QuadratureDomain::disk_exterior(C::new(0.0, 0.0), r)?,
        make_quadrature_domain(cubic_uniformizer(), DomainSide::Disk)?,
    ])
}

/// `R(z) = (10z³ − 30z² + 2z + 2)/(10z² + z + 1)`.
pub fn cauliflower_uniformizer() -> Rational {
    Rational::new(
        Poly::real(&[2.0, 2.0, -30.0, 10.0]),
        Poly::real(&[1.0, 1.0, 10.0]),
    )
}

/// The single quadrature domain `R(𝔻*)`.
pub fn cauliflower_system() -> Result<SchwarzSystem> {
    make_system(vec![make_quadrature_domain(
        cauliflower_uniformizer(),
        DomainSide::Exterior,
    )?])
}

pub fn catalog_system(name: &str) -> Result<SchwarzSystem> {
    match name {
        "ellipse_two_disks" => ellipse_two_disks(),
        "cubic_circle" => cubic_circle(),
        "cauliflower_system" | "cauliflower" => cauliflower_system(),
        _ => Err(Error::UnknownName(name.into())),
    }
}

pub const SYSTEM_CATALOG: &[&str] = &["ellipse_two_disks", "cubic_circle", "cauliflower_system"];

#[derive(Debug, Clone, PartialEq)]
pub struct ParabolicFit {
    pub r_at_one: f64,
    pub epsilon5_coefficient: f64,
    pub cusp_exponent: f64,
    pub cusp_coefficient: f64,
}

const R_NUM: [f64; 4] = [2.0, 2.0, -30.0, 10.0];
const R_DEN: [f64; 3] = [1.0, 1.0, 10.0];

fn r_dd(x: Dd) -> Dd {
    let num: Vec<Dd> = R_NUM.iter().map(|&c| Dd::new(c)).collect();
    let den: Vec<Dd> = R_DEN.iter().map(|&c| Dd::new(c)).collect();
    horner(&num, x) / horner(&den, x)
}

fn r_prime_dd(x: Dd) -> Dd {
    let dn: Vec<Dd> = R_NUM
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| Dd::new(k as f64 * c))
        .collect();
    let dd: Vec<Dd> = R_DEN
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| Dd::new(k as f64 * c))
        .collect();
    let num: Vec<Dd> = R_NUM.iter().map(|&c| Dd::new(c)).collect();
    let den: Vec<Dd> = R_DEN.iter().map(|&c| Dd::new(c)).collect();
    let (n, d) = (horner(&num, x), horner(&den, x));
    (horner(&dn, x) * d - n * horner(&dd, x)) / (d * d)
}

/// `σ(−4/3 + δ)` on the real axis: the preimage `x > 1` of `w` under `R`
/// reflected to `1/x`, all in double-double.
fn cauliflower_sigma_real(delta: f64) -> Dd {
    let w = Dd::ratio(-4.0, 3.0) + Dd::new(delta);
    let g = |x: f64| r_dd(Dd::new(x)).to_f64() - w.to_f64();
    let (mut lo, mut hi) = (1.0, 1.0 + delta.sqrt());
    while g(hi) < 0.0 {
        hi = 1.0 + 2.0 * (hi - 1.0);
    }
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if g(m) < 0.0 {
            lo = m;
        } else {
            hi = m;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let mut x = Dd::new(0.5 * (lo + hi));
    for _ in 0..4 {
        x = x - (r_dd(x) - w) / r_prime_dd(x);
    }
    r_dd(Dd::ONE / x)
}

/// The `5/36 ε⁵` coefficient and the `δ^{5/2}` cusp exponent of the
/// cauliflower reflection at `R(1) = −4/3`.
pub fn parabolic_fit() -> ParabolicFit {
    let r_at_one = r_dd(Dd::ONE).to_f64();
    let eps: Vec<f64> = (0..10).map(|j| 10f64.powf(-3.0 + j as f64 / 9.0)).collect();
    let vals: Vec<f64> = eps
        .iter()
        .map(|&e| {
            let x = Dd::ONE + Dd::new(e);
            ((r_dd(x) - r_dd(Dd::ONE / x)) / Dd::new(e.powi(5))).to_f64()
        })
        .collect();
    let coef = line_fit(&eps, &vals)
        .map(|f| f.intercept)
        .unwrap_or(f64::NAN);
    let deltas: Vec<f64> = (0..10)
        .map(|j| 10f64.powf(-5.0 + 2.0 * j as f64 / 9.0))
        .collect();
    let ys: Vec<f64> = deltas
        .iter()
        .map(|&d| {
            let s = cauliflower_sigma_real(d);
            (Dd::new(d) - (s + Dd::ratio(4.0, 3.0))).to_f64().ln()
        })
        .collect();
    let xs: Vec<f64> = deltas.iter().map(|d| d.ln()).collect();
    let f = line_fit(&xs, &ys);
    ParabolicFit {
        r_at_one,
        epsilon5_coefficient: coef,
        cusp_exponent: f.map(|f| f.slope).unwrap_or(f64::NAN),
        cusp_coefficient: f.map(|f| f.intercept.exp()).unwrap_or(f64::NAN),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstantCheck {
    pub name: &'static str,
    pub expected: f64,
    pub computed: f64,
    /// Absolute tolerance on `computed − expected`.
    pub tolerance: f64,
}

impl ConstantCheck {
    pub fn abs_error(&self) -> f64 {
        (self.computed - self.expected).abs()
    }

    pub fn passes(&self) -> bool {
        self.abs_error() <= self.tolerance
    }
}

/// The closed-form constants of the catalog systems against computed values.
pub fn verify_constants() -> Result<Vec<ConstantCheck>> {
    let fit = parabolic_fit();
    let s2 = 2f64.sqrt();
    let welding = holo::catalog("welding")?;
    let fixed = welding.fixed_points()?;
    let m9 = fixed
        .iter()
        .find(|p| (p.point - C::new(-1.0, 0.0)).norm() < 1e-8)
        .map(|p| p.multiplier.norm())
        .unwrap_or(f64::NAN);
    Ok(vec![
        ConstantCheck {
            name: "alpha",
            expected: alpha_closed_form(),
            computed: solve_alpha(),
            tolerance: 1e-10,
        },
        ConstantCheck {
            name: "R(1)",
            expected: -4.0 / 3.0,
            computed: fit.r_at_one,
            tolerance: 1e-12,
        },
        ConstantCheck {
            name: "epsilon5_coefficient",
            expected: 5.0 / 36.0,
            computed: fit.epsilon5_coefficient,
            tolerance: 0.01 * 5.0 / 36.0,
        },
        ConstantCheck {
            name: "cusp_exponent",
            expected: 2.5,
            computed: fit.cusp_exponent,
            tolerance: 0.05,
        },
        ConstantCheck {
            name: "f2(1)",
            expected: 4.0 / 3.0 + 2.0 * s2 / 3.0,
            computed: cubic_uniformizer().eval(C::new(1.0, 0.0)).re,
            tolerance: 1e-12,
        },
        ConstantCheck {
            name: "multiplier_9",
            expected: 9.0,
            computed: m9,
            tolerance: 1e-9,
        },
    ])
}
