//! Maps in `Σ_d*`, the singular points of their boundary curves, fundamental
//! tiles and bi-angled trees.
//!
//! `f(z) = z + a₁/z + … + a_{d−1}/z^{d−1} − 1/(d z^d)`. Angles of the tree are
//! stored as multiples `k ∈ {0, 1, 2}` of `2π/3`.

use crate::numeric::{angle_of, par, turn, wrap, wrap_signed, Poly};
use crate::{Error, Result};
use num_complex::Complex64 as C;
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::TAU;

/// A closed curve `γ: ℝ/ℤ → ℂ`.
pub trait ClosedCurve: Sync {
    fn point(&self, t: f64) -> C;
    /// `dγ/dt`.
    fn tangent(&self, t: f64) -> C;
    /// Parameters of the cusps, sorted in `[0, 1)`.
    fn cusp_params(&self) -> Vec<f64>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaStarMap {
    d: usize,
    /// `a₁ … a_d`.
    a: Vec<C>,
    crit: Vec<f64>,
}

/// Critical points must lie this close to the unit circle.
pub const CRIT_TOL: f64 = 1e-8;

/// Validates the critical points and univalence on the exterior disk.
/// `coeffs` holds `a₁ … a_{d−1}`, optionally followed by `a_d = −1/d`.
pub fn make_sigma_star(d: usize, coeffs: &[C]) -> Result<SigmaStarMap> {
    SigmaStarMap::with_tolerance(d, coeffs, CRIT_TOL)
}

impl SigmaStarMap {
    pub fn with_tolerance(d: usize, coeffs: &[C], crit_tol: f64) -> Result<SigmaStarMap> {
        if d < 2 {
            return Err(Error::InvalidInput("degree must be at least 2".into()));
        }
        let ad = C::new(-1.0 / d as f64, 0.0);
        let mut a: Vec<C> = match coeffs.len() {
            n if n == d - 1 => coeffs.to_vec(),
            n if n == d => {
                if (coeffs[d - 1] - ad).norm() > 1e-12 {
                    return Err(Error::InvalidInput(format!("a_{d} must equal -1/{d}")));
                }
                coeffs[..d - 1].to_vec()
            }
            n => {
                return Err(Error::InvalidInput(format!(
                    "expected {} coefficients, got {n}",
                    d - 1
                )))
            }
        };
        if a.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("coefficients must be finite".into()));
        }
        a.push(ad);
        let map = SigmaStarMap { d, a, crit: vec![] };
        let roots = map.crit_poly().roots()?;
        let mut crit = Vec::with_capacity(d + 1);
        for (k, z) in roots.iter().enumerate() {
            if (z.norm() - 1.0).abs() > crit_tol {
                return Err(Error::CriticalPointsOffCircle(k, z.norm()));
            }
            crit.push(angle_of(*z));
        }
        crit.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let gaps = (0..crit.len()).map(|k| wrap(crit[(k + 1) % crit.len()] - crit[k]));
        if gaps.into_iter().any(|g| g < 1e-7) {
            return Err(Error::NotUnivalent(
                "critical points on the circle are not simple".into(),
            ));
        }
        let map = SigmaStarMap { crit, ..map };
        map.check_univalent()?;
        Ok(map)
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// `a₁ … a_d`.
    pub fn coefficients(&self) -> &[C] {
        &self.a
    }

    /// `z^{d+1} f'(z) = z^{d+1} − Σ k a_k z^{d−k}`.
    fn crit_poly(&self) -> Poly {
        let d = self.d;
        let mut c = vec![C::new(0.0, 0.0); d + 2];
        c[d + 1] = C::new(1.0, 0.0);
        for (k, &ak) in self.a.iter().enumerate() {
            c[d - (k + 1)] -= (k + 1) as f64 * ak;
        }
        Poly::new(c)
    }

    pub fn eval(&self, z: C) -> C {
        let w = C::new(1.0, 0.0) / z;
        let mut s = C::new(0.0, 0.0);
        for &ak in self.a.iter().rev() {
            s = (s + ak) * w;
        }
        z + s
    }

    pub fn derivative(&self, z: C) -> C {
        let w = C::new(1.0, 0.0) / z;
        let mut s = C::new(1.0, 0.0);
        let mut p = w;
        for (k, &ak) in self.a.iter().enumerate() {
            p *= w;
            s -= (k + 1) as f64 * ak * p;
        }
        s
    }

    /// Each value `f(z₀)` sampled on the exterior has exactly one preimage
    /// there; tangential self-contacts of the boundary are allowed.
    fn check_univalent(&self) -> Result<()> {
        let d = self.d;
        for &r in &[1.02, 1.1, 1.5, 3.0] {
            for k in 0..24 {
                let z0 = r * turn(k as f64 / 24.0 + 0.007);
                let w = self.eval(z0);
                // z^d (f(z) − w) = z^{d+1} − w z^d + Σ a_k z^{d−k}
                let mut c = vec![C::new(0.0, 0.0); d + 2];
                c[d + 1] = C::new(1.0, 0.0);
                c[d] = -w;
                for (j, &aj) in self.a.iter().enumerate() {
                    c[d - (j + 1)] += aj;
                }
                let n = Poly::new(c)
                    .roots()?
                    .iter()
                    .filter(|z| z.norm() > 1.0 + 1e-9)
                    .count();
                if n != 1 {
                    return Err(Error::NotUnivalent(format!(
                        "f({z0}) has {n} preimages outside the disk"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `ω^{-j} f(ω^j z)` for `ω = e^{2πi/(d+1)}`.
    pub fn rotated(&self, j: usize) -> Result<SigmaStarMap> {
        let w = turn(j as f64 / (self.d + 1) as f64);
        let a: Vec<C> = self.a[..self.d - 1]
            .iter()
            .enumerate()
            .map(|(k, &ak)| ak * w.powi(-(k as i32) - 2))
            .collect();
        SigmaStarMap::with_tolerance(self.d, &a, 1e-6)
    }
}

impl ClosedCurve for SigmaStarMap {
    fn point(&self, t: f64) -> C {
        self.eval(turn(t))
    }

    fn tangent(&self, t: f64) -> C {
        let z = turn(t);
        self.derivative(z) * C::new(0.0, TAU) * z
    }

    fn cusp_params(&self) -> Vec<f64> {
        self.crit.clone()
    }
}

/// `t ↦ p(e^{2πit})` for a polynomial `p` univalent on the disk.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCurve {
    pub p: Poly,
    dp: Poly,
}

impl PolyCurve {
    pub fn new(p: Poly) -> PolyCurve {
        let dp = p.derivative();
        PolyCurve { p, dp }
    }
}

impl ClosedCurve for PolyCurve {
    fn point(&self, t: f64) -> C {
        self.p.eval(turn(t))
    }

    fn tangent(&self, t: f64) -> C {
        let z = turn(t);
        self.dp.eval(z) * C::new(0.0, TAU) * z
    }

    fn cusp_params(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .dp
            .roots()
            .unwrap_or_default()
            .into_iter()
            .filter(|z| (z.norm() - 1.0).abs() < 1e-7)
            .map(angle_of)
            .collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cusp {
    pub param: f64,
    pub point: C,
}

pub fn curve_cusps(c: &dyn ClosedCurve) -> Vec<Cusp> {
    c.cusp_params()
        .into_iter()
        .map(|t| Cusp {
            param: t,
            point: c.point(t),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoublePoint {
    pub point: C,
    /// `t1 < t2` in `[0, 1)`.
    pub params: (f64, f64),
    pub residual: f64,
}

pub const DEFAULT_SAMPLES: usize = 1 << 16;
const MIN_SEPARATION: f64 = 0.02;

fn separation(a: f64, b: f64) -> f64 {
    wrap_signed(a - b).abs()
}

/// Parameter pairs with `γ(t₁) = γ(t₂)`, `t₁ ≠ t₂`: near-coincident samples
/// found by spatial hashing, refined by damped Gauss–Newton.
pub fn curve_double_points(c: &dyn ClosedCurve, samples: usize) -> Vec<DoublePoint> {
    let n = samples.max(1024);
    let pts: Vec<C> = par::map_collect(n, |i| c.point(i as f64 / n as f64));
    let h = (0..n)
        .map(|i| (pts[(i + 1) % n] - pts[i]).norm())
        .fold(0.0, f64::max);
    let thresh = 2.0 * h;
    let key = |z: C| {
        (
            (z.re / thresh).floor() as i64,
            (z.im / thresh).floor() as i64,
        )
    };
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, &z) in pts.iter().enumerate() {
        grid.entry(key(z)).or_default().push(i);
    }
    let mut cand: Vec<(f64, usize, usize)> = Vec::new();
    for (i, &z) in pts.iter().enumerate() {
        let (kx, ky) = key(z);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(v) = grid.get(&(kx + dx, ky + dy)) {
                    for &j in v {
                        if j > i
                            && separation(i as f64 / n as f64, j as f64 / n as f64)
                                >= MIN_SEPARATION
                        {
                            let d = (pts[j] - z).norm();
                            if d < thresh {
                                cand.push((d, i, j));
                            }
                        }
                    }
                }
            }
        }
    }
    cand.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let near = |a: (f64, f64), b: (f64, f64)| {
        (separation(a.0, b.0) < MIN_SEPARATION && separation(a.1, b.1) < MIN_SEPARATION)
            || (separation(a.0, b.1) < MIN_SEPARATION && separation(a.1, b.0) < MIN_SEPARATION)
    };
    let mut seeds: Vec<(f64, f64)> = Vec::new();
    for (_, i, j) in cand {
        let s = (i as f64 / n as f64, j as f64 / n as f64);
        if !seeds.iter().any(|&q| near(q, s)) {
            seeds.push(s);
        }
    }
    let mut out: Vec<DoublePoint> = Vec::new();
    for s in seeds {
        let (t1, t2, res) = refine_pair(c, s.0, s.1);
        if res < 1e-10 && separation(t1, t2) >= 0.5 * MIN_SEPARATION {
            let (a, b) = if wrap(t1) < wrap(t2) {
                (wrap(t1), wrap(t2))
            } else {
                (wrap(t2), wrap(t1))
            };
            if !out.iter().any(|o| near(o.params, (a, b))) {
                out.push(DoublePoint {
                    point: 0.5 * (c.point(a) + c.point(b)),
                    params: (a, b),
                    residual: res,
                });
            }
        }
    }
    out.sort_by(|x, y| x.params.0.partial_cmp(&y.params.0).unwrap());
    out
}

/// Levenberg–Marquardt on `γ(t₁) − γ(t₂) = 0`; the Jacobian is singular at a
/// tangential contact, so the damping never drops below `1e-8`.
fn refine_pair(c: &dyn ClosedCurve, mut t1: f64, mut t2: f64) -> (f64, f64, f64) {
    let resid = |a: f64, b: f64| c.point(a) - c.point(b);
    let mut f = resid(t1, t2);
    let mut lambda: f64 = 1e-3;
    for _ in 0..400 {
        if f.norm() < 1e-14 {
            break;
        }
        let (g1, g2) = (c.tangent(t1), -c.tangent(t2));
        let (a11, a12, a22) = (g1.norm_sqr(), g1.re * g2.re + g1.im * g2.im, g2.norm_sqr());
        let (b1, b2) = (
            -(g1.re * f.re + g1.im * f.im),
            -(g2.re * f.re + g2.im * f.im),
        );
        let scale = a11 + a22;
        let mut improved = false;
        for _ in 0..30 {
            let l = lambda.max(1e-8) * scale;
            let det = (a11 + l) * (a22 + l) - a12 * a12;
            let d1 = ((a22 + l) * b1 - a12 * b2) / det;
            let d2 = ((a11 + l) * b2 - a12 * b1) / det;
            let g = resid(t1 + d1, t2 + d2);
            if g.norm() < f.norm() {
                t1 += d1;
                t2 += d2;
                f = g;
                lambda /= 10.0;
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (t1, t2, f.norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Singular {
    Cusp(usize),
    Double(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tile {
    /// Parameter intervals `(start, end)` of the boundary, counter-clockwise.
    pub arcs: Vec<(f64, f64)>,
    /// Singular points met along the boundary, counter-clockwise.
    pub boundary: Vec<Singular>,
}

impl Tile {
    pub fn double_points(&self) -> Vec<usize> {
        self.boundary
            .iter()
            .filter_map(|s| {
                if let Singular::Double(j) = s {
                    Some(*j)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn cusps(&self) -> Vec<usize> {
        self.boundary
            .iter()
            .filter_map(|s| {
                if let Singular::Cusp(j) = s {
                    Some(*j)
                } else {
                    None
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSingularities {
    pub cusps: Vec<Cusp>,
    pub double_points: Vec<DoublePoint>,
}

pub fn curve_singularities(c: &dyn ClosedCurve) -> CurveSingularities {
    CurveSingularities {
        cusps: curve_cusps(c),
        double_points: curve_double_points(c, DEFAULT_SAMPLES),
    }
}

/// Tiles of a Suffridge map: the faces of the chord diagram formed by the
/// double-point parameter pairs.
pub fn fundamental_tiles(f: &SigmaStarMap) -> Result<Vec<Tile>> {
    let s = curve_singularities(f);
    tiles_from(f.degree(), &s)
}

pub fn tiles_from(d: usize, s: &CurveSingularities) -> Result<Vec<Tile>> {
    let m = s.double_points.len();
    if m + 2 != d {
        return Err(Error::NotSuffridge {
            expected: d.saturating_sub(2),
            found: m,
        });
    }
    // chord endpoints in circular order: (param, double point index)
    let mut ends: Vec<(f64, usize)> = s
        .double_points
        .iter()
        .enumerate()
        .flat_map(|(j, p)| [(p.params.0, j), (p.params.1, j)])
        .collect();
    ends.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let cusps_in = |a: f64, b: f64| -> Vec<usize> {
        let len = wrap(b - a);
        let mut v: Vec<(f64, usize)> = s
            .cusps
            .iter()
            .enumerate()
            .map(|(k, c)| (wrap(c.param - a), k))
            .filter(|&(x, _)| x > 0.0 && (x < len || m == 0))
            .collect();
        v.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        v.into_iter().map(|x| x.1).collect()
    };
    if m == 0 {
        let boundary = cusps_in(0.0, 0.0).into_iter().map(Singular::Cusp).collect();
        return Ok(vec![Tile {
            arcs: vec![(0.0, 1.0)],
            boundary,
        }]);
    }
    // chords must not cross
    for (x, p) in s.double_points.iter().enumerate() {
        for q in &s.double_points[x + 1..] {
            let inside = |t: f64| p.params.0 < t && t < p.params.1;
            if inside(q.params.0) != inside(q.params.1) {
                return Err(Error::InvalidInput(
                    "double-point parameter pairs cross".into(),
                ));
            }
        }
    }
    let n = ends.len();
    let partner: Vec<usize> = (0..n)
        .map(|k| (0..n).find(|&l| l != k && ends[l].1 == ends[k].1).unwrap())
        .collect();
    let mut used = vec![false; n];
    let mut tiles = Vec::new();
    for start in 0..n {
        if used[start] {
            continue;
        }
        let mut arcs = Vec::new();
        let mut boundary = Vec::new();
        let mut k = start;
        while !used[k] {
            used[k] = true;
            let next = (k + 1) % n;
            boundary.push(Singular::Double(ends[k].1));
            boundary.extend(
                cusps_in(ends[k].0, ends[next].0)
                    .into_iter()
                    .map(Singular::Cusp),
            );
            arcs.push((ends[k].0, ends[next].0));
            k = partner[next];
        }
        tiles.push(Tile { arcs, boundary });
    }
    Ok(tiles)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiAngledTree {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    /// `(v, e, e') ↦ k` with `∠_v(e, e') = 2πk/3`.
    angles: BTreeMap<(usize, usize, usize), u8>,
}

impl BiAngledTree {
    pub fn new(
        vertices: usize,
        edges: Vec<(usize, usize)>,
        angles: BTreeMap<(usize, usize, usize), u8>,
    ) -> BiAngledTree {
        BiAngledTree {
            vertices,
            edges,
            angles,
        }
    }

    pub fn angle(&self, v: usize, e: usize, f: usize) -> Option<u8> {
        if e == f && self.incident(v).contains(&e) {
            return Some(0);
        }
        self.angles.get(&(v, e, f)).copied()
    }

    /// Edge indices at `v`.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].0 == v || self.edges[e].1 == v)
            .collect()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.incident(v).len()
    }

    /// The path `0 − 1 − … − n`, with `∠_i(e_{i−1,i}, e_{i,i+1}) = 2π k_i/3`.
    pub fn path(internal: &[u8]) -> BiAngledTree {
        let n = internal.len() + 2;
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let mut angles = BTreeMap::new();
        for (i, &k) in internal.iter().enumerate() {
            let v = i + 1;
            angles.insert((v, i, i + 1), k % 3);
            angles.insert((v, i + 1, i), (3 - k % 3) % 3);
        }
        BiAngledTree {
            vertices: n,
            edges,
            angles,
        }
    }

    /// A centre `0` with leaves `1, 2, 3` at consecutive angles `2π/3`.
    pub fn claw() -> BiAngledTree {
        let edges = vec![(0, 1), (0, 2), (0, 3)];
        let mut angles = BTreeMap::new();
        for e in 0..3 {
            for f in 0..3 {
                if e != f {
                    angles.insert((0, e, f), ((f + 3 - e) % 3) as u8);
                }
            }
        }
        BiAngledTree {
            vertices: 4,
            edges,
            angles,
        }
    }

    /// Tree shape, valence bound and the angle-function axioms.
    pub fn check_axioms(&self) -> bool {
        if self.edges.len() + 1 != self.vertices {
            return false;
        }
        for v in 0..self.vertices {
            let inc = self.incident(v);
            if inc.len() > 3 {
                return false;
            }
            for &e in &inc {
                for &f in &inc {
                    let Some(a) = self.angle(v, e, f) else {
                        return false;
                    };
                    let b = self.angle(v, f, e).unwrap_or(9);
                    if (e == f) != (a == 0) || (a + b) % 3 != 0 {
                        return false;
                    }
                    for &g in &inc {
                        let (Some(x), Some(y)) = (self.angle(v, f, g), self.angle(v, e, g)) else {
                            return false;
                        };
                        if (a + x) % 3 != y {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn is_path(&self) -> bool {
        (0..self.vertices).all(|v| self.valence(v) <= 2) && self.edges.len() + 1 == self.vertices
    }

    pub fn is_claw(&self) -> bool {
        self.vertices == 4 && (0..4).filter(|&v| self.valence(v) == 3).count() == 1
    }

    /// Angles at the internal vertices of a path, walking from one end.
    pub fn path_angles(&self) -> Option<Vec<u8>> {
        if !self.is_path() {
            return None;
        }
        let start = (0..self.vertices).find(|&v| self.valence(v) <= 1)?;
        let mut out = Vec::new();
        let (mut v, mut prev_edge) = (start, None::<usize>);
        loop {
            let next = self.incident(v).into_iter().find(|&e| Some(e) != prev_edge);
            match (prev_edge, next) {
                (Some(p), Some(n)) => out.push(self.angle(v, p, n)?),
                (_, None) => break,
                _ => {}
            }
            let e = next.unwrap();
            v = if self.edges[e].0 == v {
                self.edges[e].1
            } else {
                self.edges[e].0
            };
            prev_edge = Some(e);
        }
        Some(out)
    }
}

/// One vertex per tile, one edge per double point, angles from the
/// counter-clockwise order of singular points on each tile boundary.
pub fn bi_angled_tree(f: &SigmaStarMap) -> Result<BiAngledTree> {
    let tiles = fundamental_tiles(f)?;
    Ok(tree_from_tiles(&tiles))
}

pub fn tree_from_tiles(tiles: &[Tile]) -> BiAngledTree {
    let mut owners: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, t) in tiles.iter().enumerate() {
        for j in t.double_points() {
            owners.entry(j).or_default().push(i);
        }
    }
    let dps: Vec<usize> = owners.keys().copied().collect();
    let edges: Vec<(usize, usize)> = dps.iter().map(|j| (owners[j][0], owners[j][1])).collect();
    let edge_of = |j: usize| dps.iter().position(|&x| x == j).unwrap();
    let mut angles = BTreeMap::new();
    for (v, t) in tiles.iter().enumerate() {
        let ds = t.double_points();
        let k = ds.len();
        for (p, &a) in ds.iter().enumerate() {
            for (q, &b) in ds.iter().enumerate() {
                if p == q {
                    continue;
                }
                let ang = if k == 3 {
                    ((q + 3 - p) % 3) as u8
                } else {
                    let pos = t
                        .boundary
                        .iter()
                        .position(|&s| s == Singular::Double(a))
                        .unwrap();
                    let after = t.boundary[(pos + 1) % t.boundary.len()];
                    if after == Singular::Double(b) {
                        1
                    } else {
                        2
                    }
                };
                angles.insert((v, edge_of(a), edge_of(b)), ang);
            }
        }
    }
    BiAngledTree {
        vertices: tiles.len(),
        edges,
        angles,
    }
}

/// Angle-preserving isomorphism by backtracking over vertex assignments.
pub fn trees_isomorphic(a: &BiAngledTree, b: &BiAngledTree) -> bool {
    if a.vertices != b.vertices || a.edges.len() != b.edges.len() {
        return false;
    }
    let n = a.vertices;
    if n == 0 {
        return true;
    }
    let mut va: Vec<usize> = (0..n).map(|v| a.valence(v)).collect();
    let mut vb: Vec<usize> = (0..n).map(|v| b.valence(v)).collect();
    va.sort_unstable();
    vb.sort_unstable();
    if va != vb {
        return false;
    }
    let edge_b: HashMap<(usize, usize), usize> = b
        .edges
        .iter()
        .enumerate()
        .flat_map(|(e, &(x, y))| [((x, y), e), ((y, x), e)])
        .collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn consistent(
        a: &BiAngledTree,
        edge_b: &HashMap<(usize, usize), usize>,
        map: &[usize],
    ) -> bool {
        for &(x, y) in &a.edges {
            if map[x] != usize::MAX
                && map[y] != usize::MAX
                && !edge_b.contains_key(&(map[x], map[y]))
            {
                return false;
            }
        }
        true
    }
    fn angles_match(
        a: &BiAngledTree,
        b: &BiAngledTree,
        edge_b: &HashMap<(usize, usize), usize>,
        map: &[usize],
    ) -> bool {
        for v in 0..a.vertices {
            let inc = a.incident(v);
            for &e in &inc {
                for &f in &inc {
                    let img = |e: usize| edge_b[&(map[a.edges[e].0], map[a.edges[e].1])];
                    if a.angle(v, e, f) != b.angle(map[v], img(e), img(f)) {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn go(
        k: usize,
        a: &BiAngledTree,
        b: &BiAngledTree,
        edge_b: &HashMap<(usize, usize), usize>,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == a.vertices {
            return angles_match(a, b, edge_b, map);
        }
        for w in 0..b.vertices {
            if used[w] || a.valence(k) != b.valence(w) {
                continue;
            }
            map[k] = w;
            used[w] = true;
            if consistent(a, edge_b, map) && go(k + 1, a, b, edge_b, map, used) {
                return true;
            }
            used[w] = false;
            map[k] = usize::MAX;
        }
        false
    }
    go(0, a, b, &edge_b, &mut map, &mut used)
}

/// `g(z) = z + 2√2/(5z²) − 1/(5z⁵)`.
pub fn claw_map() -> Result<SigmaStarMap> {
    let z = C::new(0.0, 0.0);
    make_sigma_star(5, &[z, C::new(2.0 * 2f64.sqrt() / 5.0, 0.0), z, z])
}

/// `f(z) ≈ z − 0.71i/z + 0.71i/(3z³) − 1/(5z⁵)` with two-digit
/// coefficients; its critical points sit within `1e-2` of the circle.
pub fn path_map_approx() -> Result<SigmaStarMap> {
    let z = C::new(0.0, 0.0);
    SigmaStarMap::with_tolerance(
        5,
        &[C::new(0.0, -0.71), z, C::new(0.0, 0.71 / 3.0), z],
        1e-2,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrong_trailing_coefficient_rejected() {
        let r = make_sigma_star(2, &[C::new(1.0, 0.0), C::new(0.5, 0.0)]);
        assert!(matches!(r, Err(Error::InvalidInput(_))));
        assert!(make_sigma_star(2, &[C::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn claw_map_counts() {
        let g = claw_map().unwrap();
        let s = curve_singularities(&g);
        assert_eq!(s.cusps.len(), 6);
        assert_eq!(s.double_points.len(), 3);
        for p in &s.double_points {
            assert!(p.residual < 1e-10);
        }
        let tiles = tiles_from(5, &s).unwrap();
        assert_eq!(tiles.len(), 4);
        let t = tree_from_tiles(&tiles);
        assert!(t.check_axioms());
        assert!(t.is_claw());
        assert!(trees_isomorphic(&t, &BiAngledTree::claw()));
    }

    #[test]
    fn tree_comparisons() {
        let p = BiAngledTree::path(&[1, 1]);
        assert!(p.check_axioms());
        assert!(trees_isomorphic(&p, &p));
        assert!(!trees_isomorphic(&p, &BiAngledTree::claw()));
        assert!(!trees_isomorphic(&p, &BiAngledTree::path(&[1, 2])));
        assert!(trees_isomorphic(&p, &BiAngledTree::path(&[2, 2])));
    }

    #[test]
    fn rotations_give_isomorphic_trees() {
        let g = claw_map().unwrap();
        let t = bi_angled_tree(&g).unwrap();
        for j in 1..6 {
            let r = g.rotated(j).unwrap();
            assert!(
                trees_isomorphic(&t, &bi_angled_tree(&r).unwrap()),
                "rotation {j}"
            );
        }
    }

    #[test]
    fn approximate_f_is_a_path() {
        let t = bi_angled_tree(&path_map_approx().unwrap()).unwrap();
        assert!(t.check_axioms());
        assert!(t.is_path() && t.vertices == 4);
    }

    #[test]
    fn cubic_polynomial_curve_has_one_double_point() {
        let r = 2.0 * 2f64.sqrt() / 3.0;
        let c = PolyCurve::new(Poly::real(&[0.0, 1.0, r, 1.0 / 3.0]));
        let d = curve_double_points(&c, DEFAULT_SAMPLES);
        assert_eq!(d.len(), 1);
        assert!((d[0].params.0 - 0.375).abs() < 1e-6 && (d[0].params.1 - 0.625).abs() < 1e-6);
    }

    #[test]
    fn no_double_points_is_not_suffridge() {
        let z = C::new(0.0, 0.0);
        let f = make_sigma_star(5, &[z, z, z, z]).unwrap();
        assert!(matches!(
            fundamental_tiles(&f),
            Err(Error::NotSuffridge {
                expected: 3,
                found: 0
            })
        ));
    }
}
