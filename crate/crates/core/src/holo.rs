//! Rational and anti-rational maps of the sphere: evaluation, critical and
//! fixed points, attracting and parabolic cycles, and Julia-set rendering.

use crate::numeric::{is_inf, Poly, Rational, INF};
use crate::raster::{Pixel, Raster, RasterSpec, ESCAPED, UNDECIDED};
use crate::{Error, Result};
use num_complex::Complex64 as C;

/// `z ↦ f(z)` or, for anti maps, `z ↦ f(conj z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMap {
    pub f: Rational,
    pub anti: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    /// `INF` for the point at infinity.
    pub point: C,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub point: C,
    pub multiplicity: usize,
    /// Holomorphic maps: `R'(p)`. Anti maps: `|∂R/∂z̄|` at `p` (real).
    pub multiplier: C,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AttractorKind {
    Attracting {
        multiplier: f64,
    },
    /// Attracting directions of the second iterate at each cycle point.
    Parabolic {
        directions: Vec<Vec<C>>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Attractor {
    pub id: usize,
    /// Cycle points in dynamical order; `INF` allowed.
    pub cycle: Vec<C>,
    pub kind: AttractorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitClass {
    ConvergedToCycle { cycle: usize, steps: usize },
    Diverged { steps: usize },
    Undecided,
}

const ONE: C = C::new(1.0, 0.0);
const ZERO: C = C::new(0.0, 0.0);

impl RationalMap {
    /// Rejects maps whose numerator and denominator share a root.
    pub fn new(num: Poly, den: Poly, anti: bool) -> Result<RationalMap> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        if den.degree() > 0 && !num.is_zero() {
            for r in den.roots()? {
                let scale = num.eval_abs(r).max(1e-300);
                if num.eval(r).norm() / scale < 1e-10 {
                    return Err(Error::InvalidInput(format!(
                        "numerator and denominator share the root {r}"
                    )));
                }
            }
        }
        Ok(RationalMap {
            f: Rational::new(num, den),
            anti,
        })
    }

    pub fn polynomial(p: Poly, anti: bool) -> RationalMap {
        RationalMap {
            f: Rational::poly(p),
            anti,
        }
    }

    pub fn degree(&self) -> usize {
        self.f.degree()
    }

    /// Value on the sphere.
    pub fn eval(&self, z: C) -> C {
        let w = if self.anti { z.conj() } else { z };
        self.f.eval_sphere(w)
    }

    /// The holomorphic second iterate `R∘R`.
    pub fn second_iterate(&self) -> Rational {
        if self.anti {
            self.f.compose(&self.f.conj())
        } else {
            self.f.compose(&self.f)
        }
    }

    /// Critical points of the underlying holomorphic function `f`.
    pub fn holomorphic_critical_points(&self) -> Result<Vec<CriticalPoint>> {
        critical_points_of(&self.f)
    }

    /// Critical points of the map itself. For anti maps these are the
    /// conjugates of the critical points of `f`.
    pub fn critical_points(&self) -> Result<Vec<CriticalPoint>> {
        let mut cps = critical_points_of(&self.f)?;
        if self.anti {
            for c in &mut cps {
                if !is_inf(c.point) {
                    c.point = c.point.conj();
                }
            }
        }
        Ok(cps)
    }

    /// Fixed points on the sphere. Multiplicities of anti maps are those of
    /// the second iterate.
    pub fn fixed_points(&self) -> Result<Vec<FixedPoint>> {
        if !self.anti {
            return Ok(fixed_points_of(&self.f)?
                .into_iter()
                .map(|(p, m)| FixedPoint {
                    point: p,
                    multiplicity: m,
                    multiplier: multiplier_at(&self.f, p),
                })
                .collect());
        }
        let g = self.second_iterate();
        let mut out = Vec::new();
        for (p, m) in fixed_points_of(&g)? {
            let q = self.eval(p);
            let fixed = if is_inf(p) {
                is_inf(q)
            } else {
                !is_inf(q) && (q - p).norm() <= 1e-8 * p.norm().max(1.0)
            };
            if fixed {
                let w = if is_inf(p) { INF } else { p.conj() };
                let lam = multiplier_at(&self.f, w).norm();
                out.push(FixedPoint {
                    point: p,
                    multiplicity: m,
                    multiplier: C::new(lam, 0.0),
                });
            }
        }
        Ok(out)
    }

    /// Attracting and parabolic cycles of period one or two.
    pub fn attractors(&self) -> Result<Vec<Attractor>> {
        let g = self.second_iterate();
        let mut cycles: Vec<Attractor> = Vec::new();
        for (p, _) in fixed_points_of(&g)? {
            if cycles
                .iter()
                .any(|a| a.cycle.iter().any(|&q| same_point(p, q)))
            {
                continue;
            }
            let m = multiplier_at(&g, p);
            let kind = if m.norm() < 1.0 - 1e-9 {
                AttractorKind::Attracting {
                    multiplier: m.norm(),
                }
            } else if (m - ONE).norm() < 1e-6 && !is_inf(p) {
                AttractorKind::Parabolic { directions: vec![] }
            } else {
                continue;
            };
            let q = self.eval(p);
            let cycle = if same_point(p, q) {
                vec![p]
            } else {
                vec![p, q]
            };
            let kind = match kind {
                AttractorKind::Parabolic { .. } => {
                    let dirs = cycle.iter().map(|&c| parabolic_directions(&g, c)).collect();
                    AttractorKind::Parabolic { directions: dirs }
                }
                k => k,
            };
            cycles.push(Attractor {
                id: cycles.len(),
                cycle,
                kind,
            });
        }
        Ok(cycles)
    }

    /// Iterate from `z` until it is captured by one of `attractors`.
    pub fn classify_orbit(&self, z0: C, attractors: &[Attractor], budget: usize) -> OrbitClass {
        let mut z = z0;
        for step in 0..=budget {
            if let Some(id) = self.captured(z, attractors) {
                return OrbitClass::ConvergedToCycle {
                    cycle: id,
                    steps: step,
                };
            }
            if is_inf(z) {
                return OrbitClass::Diverged { steps: step };
            }
            if step < budget {
                z = self.eval(z);
            }
        }
        OrbitClass::Undecided
    }

    fn captured(&self, z: C, attractors: &[Attractor]) -> Option<usize> {
        for a in attractors {
            for (k, &q) in a.cycle.iter().enumerate() {
                if is_inf(q) {
                    if is_inf(z) || z.norm() > 1e8 {
                        return Some(a.id);
                    }
                    continue;
                }
                if is_inf(z) {
                    continue;
                }
                let d = (z - q).norm();
                match &a.kind {
                    AttractorKind::Attracting { .. } => {
                        if d < 1e-4 * q.norm().max(1.0) {
                            return Some(a.id);
                        }
                    }
                    AttractorKind::Parabolic { directions } => {
                        if d < 0.05
                            && d > 0.0
                            && directions[k]
                                .iter()
                                .any(|v| ((z - q) * v.conj()).re > 0.9 * d)
                            && self.parabolic_confirm(z, q)
                        {
                            return Some(a.id);
                        }
                        if d == 0.0 {
                            return Some(a.id);
                        }
                    }
                }
            }
        }
        None
    }

    /// Fifty iterates of the second iterate with shrinking displacement.
    fn parabolic_confirm(&self, z0: C, q: C) -> bool {
        let mut z = z0;
        let mut last = f64::INFINITY;
        for _ in 0..50 {
            let w = self.eval(self.eval(z));
            if is_inf(w) {
                return false;
            }
            let disp = (w - z).norm();
            if disp > last || (w - q).norm() >= 0.05 {
                return false;
            }
            last = disp;
            z = w;
        }
        true
    }

    /// Julia-set raster: class `2 + id` for basins, `ESCAPED` for orbits that
    /// reach a non-attracting infinity, `UNDECIDED` otherwise.
    pub fn render_julia(&self, spec: RasterSpec, attractors: &[Attractor]) -> Raster {
        Raster::render(spec, |z| {
            match self.classify_orbit(z, attractors, spec.max_iter) {
                OrbitClass::ConvergedToCycle { cycle, steps } => Pixel {
                    class: 2 + cycle as u16,
                    steps: steps as u32,
                },
                OrbitClass::Diverged { steps } => Pixel {
                    class: ESCAPED,
                    steps: steps as u32,
                },
                OrbitClass::Undecided => Pixel {
                    class: UNDECIDED,
                    steps: spec.max_iter as u32,
                },
            }
        })
    }
}

fn same_point(a: C, b: C) -> bool {
    match (is_inf(a), is_inf(b)) {
        (true, true) => true,
        (false, false) => (a - b).norm() <= 1e-7 * a.norm().max(1.0),
        _ => false,
    }
}

fn critical_points_of(f: &Rational) -> Result<Vec<CriticalPoint>> {
    let d = f.degree();
    if d < 2 {
        return Err(Error::InvalidInput(
            "critical points need degree at least 2".into(),
        ));
    }
    let w = f
        .num
        .derivative()
        .mul(&f.den)
        .sub(&f.num.mul(&f.den.derivative()))
        .trimmed(1e-14);
    let mut out: Vec<CriticalPoint> = w
        .roots_with_multiplicity()?
        .into_iter()
        .map(|(p, m)| CriticalPoint {
            point: p,
            multiplicity: m,
        })
        .collect();
    let finite: usize = out.iter().map(|c| c.multiplicity).sum();
    if finite < 2 * d - 2 {
        out.push(CriticalPoint {
            point: INF,
            multiplicity: 2 * d - 2 - finite,
        });
    }
    Ok(out)
}

fn fixed_points_of(f: &Rational) -> Result<Vec<(C, usize)>> {
    let d = f.degree();
    let z = Poly::real(&[0.0, 1.0]);
    let e = f.num.sub(&z.mul(&f.den)).trimmed(1e-13);
    if e.is_zero() {
        return Err(Error::InvalidInput(
            "identity map has no isolated fixed points".into(),
        ));
    }
    let mut out = Vec::new();
    let mut at_inf = 0;
    for (p, m) in e.roots_with_multiplicity()? {
        if p.norm() > 1e10 {
            at_inf += m;
        } else {
            out.push((p, m));
        }
    }
    let finite: usize = out.iter().map(|x| x.1).sum();
    at_inf = at_inf.max((d + 1).saturating_sub(finite));
    if at_inf > 0 {
        out.push((INF, at_inf));
    }
    Ok(out)
}

/// `R'(p)`; at infinity the derivative of `1/R(1/w)` at `0`.
fn multiplier_at(f: &Rational, p: C) -> C {
    if is_inf(p) {
        let d = f.degree();
        let s = Rational::new(f.den.reversed(d), f.num.reversed(d));
        return s.deriv_at(ZERO);
    }
    f.deriv_at(p)
}

/// Coefficients of `f(p + h)` as a power series in `h`, up to `h^order`.
pub fn taylor_series(f: &Rational, p: C, order: usize) -> Vec<C> {
    let a = f.num.taylor_at(p);
    let b = f.den.taylor_at(p);
    let get = |v: &[C], k: usize| v.get(k).copied().unwrap_or(ZERO);
    let mut c = vec![ZERO; order + 1];
    for k in 0..=order {
        let mut s = get(&a, k);
        for j in 1..=k {
            s -= get(&b, j) * c[k - j];
        }
        c[k] = s / b[0];
    }
    c
}

/// Attracting directions at a parabolic fixed point `p` of `g` (multiplier 1):
/// with `g(p+h) = p + h + a h^{N+1} + …`, the directions `v` with `a v^N < 0`.
fn parabolic_directions(g: &Rational, p: C) -> Vec<C> {
    let c = taylor_series(g, p, 12);
    let scale = p.norm().max(1.0);
    for k in 2..c.len() {
        let a = c[k];
        if a.norm() * scale.powi(k as i32 - 1) > 1e-6 {
            let n = k - 1;
            let base = (std::f64::consts::PI - a.arg()) / n as f64;
            return (0..n)
                .map(|j| C::from_polar(1.0, base + std::f64::consts::TAU * j as f64 / n as f64))
                .collect();
        }
    }
    vec![]
}

/// Named maps.
pub const CATALOG: [&str; 9] = [
    "pine_tree",
    "welding",
    "blaschke_family",
    "P1",
    "P_gamma",
    "P2",
    "cauliflower_poly",
    "cauliflower_model_blaschke",
    "cauliflower_rational",
];

/// Named maps. `blaschke_family` is degree 2; `blaschke_family_<d>` selects `d`.
pub fn catalog(name: &str) -> Result<RationalMap> {
    let s2 = std::f64::consts::SQRT_2;
    let s3 = 3f64.sqrt();
    let r = |c: &[f64]| Poly::real(c);
    let cx = |c: &[(f64, f64)]| Poly::new(c.iter().map(|&(a, b)| C::new(a, b)).collect());
    let map = match name {
        "pine_tree" => RationalMap::new(
            r(&[8.0 - 3.0 * (1.0 - s3), 0.0, 0.0, 4.0]),
            r(&[8.0 + 4.0 * s3, 0.0, 0.0, 1.0 - s3]),
            false,
        )?,
        "welding" => RationalMap::new(r(&[1.0, 0.0, 0.0, 2.0]), r(&[2.0, 0.0, 0.0, 1.0]), false)?,
        "P1" => RationalMap::polynomial(
            cx(&[(0.0, 0.0), (0.0, -3.0 / s2), (0.0, 0.0), (1.0, 0.0)]),
            true,
        ),
        "P_gamma" => {
            RationalMap::polynomial(cx(&[(0.0, 0.0), (0.0, -1.5), (0.0, 0.0), (1.0, 0.0)]), true)
        }
        "P2" => RationalMap::polynomial(
            cx(&[(1.0 / s2, 1.0 / s2), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]),
            true,
        ),
        "cauliflower_poly" => RationalMap::polynomial(r(&[0.25, 0.0, 1.0]), true),
        "cauliflower_model_blaschke" => {
            RationalMap::new(r(&[1.0, 0.0, 3.0]), r(&[3.0, 0.0, 1.0]), true)?
        }
        "cauliflower_rational" => {
            RationalMap::new(r(&[2.0, 2.0, -30.0, 10.0]), r(&[1.0, 1.0, 10.0]), false)?
        }
        _ => {
            if let Some(d) = name.strip_prefix("blaschke_family") {
                let d = match d.strip_prefix('_') {
                    None if d.is_empty() => 2,
                    Some(k) => k
                        .parse::<usize>()
                        .map_err(|_| Error::UnknownName(name.into()))?,
                    None => return Err(Error::UnknownName(name.into())),
                };
                return blaschke_family(d);
            }
            return Err(Error::UnknownName(name.into()));
        }
    };
    Ok(map)
}

/// `((d+1) z^d + (d-1)) / ((d-1) z^d + (d+1))`: 1 is a parabolic fixed point.
pub fn blaschke_family(d: usize) -> Result<RationalMap> {
    if d < 2 {
        return Err(Error::InvalidInput("blaschke_family needs d >= 2".into()));
    }
    let df = d as f64;
    let mut n = vec![0.0; d + 1];
    let mut m = vec![0.0; d + 1];
    n[0] = df - 1.0;
    n[d] = df + 1.0;
    m[0] = df + 1.0;
    m[d] = df - 1.0;
    RationalMap::new(Poly::real(&n), Poly::real(&m), false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn near(a: C, b: C, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn catalog_evaluations() {
        let cr = catalog("cauliflower_rational").unwrap();
        assert!(near(cr.eval(ONE), C::new(-4.0 / 3.0, 0.0), 1e-14));
        let pt = catalog("pine_tree").unwrap();
        let expect = 4.0 / (1.0 - 3f64.sqrt());
        assert!(near(pt.eval(INF), C::new(expect, 0.0), 1e-12));
        assert_eq!(catalog("P_gamma").unwrap().eval(ZERO), ZERO);
        assert!(matches!(catalog("nope"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn squaring_fixed_points() {
        let sq = RationalMap::polynomial(Poly::real(&[0.0, 0.0, 1.0]), false);
        let fps = sq.fixed_points().unwrap();
        assert_eq!(fps.iter().map(|f| f.multiplicity).sum::<usize>(), 3);
        let one = fps.iter().find(|f| near(f.point, ONE, 1e-12)).unwrap();
        assert!(near(one.multiplier, C::new(2.0, 0.0), 1e-12));
        let inf = fps.iter().find(|f| is_inf(f.point)).unwrap();
        assert!(inf.multiplier.norm() < 1e-12);
    }

    #[test]
    fn welding_multipliers() {
        let b = catalog("welding").unwrap();
        let fps = b.fixed_points().unwrap();
        let at = |p: C| {
            fps.iter()
                .find(|f| near(f.point, p, 1e-6))
                .unwrap()
                .multiplier
        };
        assert!(near(at(ONE), ONE, 1e-9));
        assert!(near(at(-ONE), C::new(9.0, 0.0), 1e-9));
    }

    #[test]
    fn fixed_point_counts_of_holomorphic_catalog_maps() {
        for name in [
            "pine_tree",
            "welding",
            "blaschke_family",
            "cauliflower_rational",
        ] {
            let m = catalog(name).unwrap();
            let total: usize = m
                .fixed_points()
                .unwrap()
                .iter()
                .map(|f| f.multiplicity)
                .sum();
            assert_eq!(total, m.degree() + 1, "{name}");
        }
    }

    #[test]
    fn critical_points_of_quadratic_and_joukowski() {
        let p = catalog("cauliflower_poly").unwrap();
        let cps = p.critical_points().unwrap();
        assert!(cps.iter().any(|c| c.point == ZERO && c.multiplicity == 1));
        let a = 0.3;
        let j = RationalMap::new(
            Poly::real(&[a * a, 0.0, 1.0]),
            Poly::real(&[0.0, 1.0]),
            false,
        )
        .unwrap();
        let cps = j.critical_points().unwrap();
        assert_eq!(cps.len(), 2);
        assert!(cps.iter().any(|c| near(c.point, C::new(a, 0.0), 1e-12)));
        assert!(cps.iter().any(|c| near(c.point, C::new(-a, 0.0), 1e-12)));
    }

    #[test]
    fn common_factor_is_rejected() {
        let n = Poly::real(&[-1.0, 0.0, 1.0]);
        let d = Poly::real(&[-1.0, 1.0]);
        assert!(RationalMap::new(n, d, false).is_err());
    }

    #[test]
    fn orbit_classes_for_squaring() {
        let sq = RationalMap::polynomial(Poly::real(&[0.0, 0.0, 1.0]), false);
        let att = sq.attractors().unwrap();
        assert_eq!(att.len(), 2);
        let zero = att.iter().find(|a| a.cycle[0] == ZERO).unwrap().id;
        assert_eq!(
            sq.classify_orbit(C::new(0.5, 0.0), &att, 100),
            OrbitClass::ConvergedToCycle {
                cycle: zero,
                steps: sq_steps(0.5)
            }
        );
        assert_eq!(
            sq.classify_orbit(C::new(0.0, 1.0), &att, 100),
            OrbitClass::Undecided
        );
    }

    fn sq_steps(mut x: f64) -> usize {
        let mut n = 0;
        while x >= 1e-4 {
            x *= x;
            n += 1;
        }
        n
    }

    #[test]
    fn anti_parabolic_basin_captures_the_critical_point() {
        let p = catalog("cauliflower_poly").unwrap();
        let att = p.attractors().unwrap();
        let half = att
            .iter()
            .find(|a| near(a.cycle[0], C::new(0.5, 0.0), 1e-6))
            .expect("parabolic point 1/2");
        assert!(matches!(half.kind, AttractorKind::Parabolic { .. }));
        let r = p.classify_orbit(ZERO, &att, 100_000);
        assert!(matches!(r, OrbitClass::ConvergedToCycle { cycle, .. } if cycle == half.id));
    }

    #[test]
    fn anti_map_matches_underlying_function() {
        let p = catalog("P1").unwrap();
        let z = C::new(0.3, 0.7);
        assert!(near(p.eval(z.conj()), p.f.eval(z), 1e-15));
    }
}
