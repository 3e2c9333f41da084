//! Expansive covering maps of the unit circle.
//!
//! A [`CoveringMap`] is a finite list of pieces. Each piece is a closed arc
//! together with a holomorphic rational function `E` that maps the unit
//! circle to itself and agrees with the map on that arc. Orientation-reversing
//! maps such as `z̄^d` are represented by their conformal extensions: on the
//! circle `z̄ = 1/z`, so `z̄^d` has extension `1/z^d`, and the reflection in a
//! circle orthogonal to the unit circle becomes the Möbius involution fixing
//! its two contact points.
//!
//! Positions near a periodic point are handled in offset coordinates: the
//! map is applied to the distance from the point, which stays accurate when
//! the distance is far below the spacing of doubles near the point.

use crate::numeric::{
    angle_of, chord, fit::line_fit, turn, turn_minus_one, wrap, wrap_signed, Poly, Rational,
};
use crate::{Error, Result};
use num_complex::Complex64 as C;

const ONE: C = C::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Preserving,
    Reversing,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Preserving => 1.0,
            Orientation::Reversing => -1.0,
        }
    }

    pub fn pow(self, n: usize) -> Orientation {
        if self == Orientation::Reversing && n % 2 == 1 {
            Orientation::Reversing
        } else {
            Orientation::Preserving
        }
    }
}

/// One side of a point on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }

    fn after(self, o: Orientation) -> Side {
        match o {
            Orientation::Preserving => self,
            Orientation::Reversing => self.flip(),
        }
    }
}

/// Positively oriented arc from `a` to `b` (turns).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub a: f64,
    pub b: f64,
}

impl Arc {
    pub fn new(a: f64, b: f64) -> Result<Arc> {
        if wrap(b - a) == 0.0 {
            return Err(Error::DegenerateArc(format!(
                "arc from {a} to {b} is empty or full"
            )));
        }
        Ok(Arc {
            a: wrap(a),
            b: wrap(b),
        })
    }

    pub fn length(&self) -> f64 {
        wrap(self.b - self.a)
    }

    /// Euclidean diameter of the point set `{e^{2πit} : t ∈ arc}`.
    pub fn diameter(&self) -> f64 {
        let l = self.length();
        if l >= 0.5 {
            2.0
        } else {
            chord(l)
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        wrap(t - self.a) <= self.length()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanCircle {
    pub center: C,
    pub radius: f64,
}

impl EuclideanCircle {
    pub fn new(center: C, radius: f64) -> Result<EuclideanCircle> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidInput(format!(
                "radius {radius} must be positive"
            )));
        }
        Ok(EuclideanCircle { center, radius })
    }

    /// Inversion `c + r² / conj(z - c)`.
    pub fn invert(&self, z: C) -> Result<C> {
        let w = z - self.center;
        if w.norm() == 0.0 {
            return Err(Error::PoleAtCenter);
        }
        Ok(self.center + self.radius * self.radius / w.conj())
    }
}

/// Circle through `e^{2πia}`, `e^{2πib}` meeting the unit circle at right angles.
pub fn orthogonal_circle(a: f64, b: f64) -> Result<EuclideanCircle> {
    let len = wrap(b - a);
    if len == 0.0 || len >= 0.5 {
        return Err(Error::DegenerateArc(format!(
            "arc from {a} to {b} has length {len} turns; an orthogonal circle needs less than 1/2"
        )));
    }
    let pi = std::f64::consts::PI;
    let mid = a + len / 2.0;
    let center = turn(mid) / (pi * len).cos();
    EuclideanCircle::new(center, (pi * len).tan())
}

/// The conformal involution fixing `e^{2πia}` and `e^{2πib}`:
/// on the circle it is the reflection in the orthogonal circle through them.
pub fn reflection_extension(a: f64, b: f64) -> Rational {
    let (p, q) = (turn(a), turn(b));
    let s = p + q;
    Rational::mobius(s, -(p * q) * 2.0, C::new(2.0, 0.0), -s)
}

/// Map families.
#[derive(Debug, Clone, PartialEq)]
pub enum MapKind {
    Power {
        d: usize,
        orientation: Orientation,
    },
    BlaschkeParabolic {
        d: usize,
    },
    Blaschke {
        theta: f64,
        zeros: Vec<C>,
        anti: bool,
    },
    Reflection {
        breaks: Vec<f64>,
    },
    Hybrid {
        d: usize,
        pairs: Vec<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Fast {
    /// `E = z^e`.
    Power(i32),
    /// `E ∘ E = id`.
    Involution,
    General,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub start: f64,
    pub len: f64,
    pub ext: Rational,
    fast: Fast,
}

impl Piece {
    /// Whether the piece covers the whole circle.
    pub fn is_global(&self) -> bool {
        self.len >= 1.0
    }
}

/// Disk automorphism `z ↦ e^{2πiθ} (z - a) / (1 - ā z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskMobius {
    pub a: C,
    pub theta: f64,
}

impl DiskMobius {
    pub fn apply(&self, z: C) -> C {
        turn(self.theta) * (z - self.a) / (ONE - self.a.conj() * z)
    }

    pub fn rational(&self) -> Rational {
        let r = turn(self.theta);
        Rational::mobius(r, -r * self.a, -self.a.conj(), ONE)
    }

    pub fn inverse(&self) -> DiskMobius {
        DiskMobius {
            a: -self.a * turn(self.theta),
            theta: -self.theta,
        }
    }

    pub fn apply_angle(&self, t: f64) -> f64 {
        angle_of(self.apply(turn(t)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoveringMap {
    pub kind: MapKind,
    pub degree: usize,
    pub orientation: Orientation,
    pieces: Vec<Piece>,
}

impl CoveringMap {
    /// `z^d` or `z̄^d`.
    pub fn power(d: usize, orientation: Orientation) -> Result<CoveringMap> {
        if d < 2 {
            return Err(Error::InvalidInput("degree must be at least 2".into()));
        }
        let e = match orientation {
            Orientation::Preserving => d as i32,
            Orientation::Reversing => -(d as i32),
        };
        Ok(CoveringMap {
            kind: MapKind::Power { d, orientation },
            degree: d,
            orientation,
            pieces: vec![Piece {
                start: 0.0,
                len: 1.0,
                ext: power_rational(e),
                fast: Fast::Power(e),
            }],
        })
    }

    /// `((d+1)z^d + (d-1)) / ((d-1)z^d + (d+1))`, parabolic at 1.
    pub fn blaschke_parabolic(d: usize) -> Result<CoveringMap> {
        let m = crate::holo::blaschke_family(d)?;
        Ok(CoveringMap {
            kind: MapKind::BlaschkeParabolic { d },
            degree: d,
            orientation: Orientation::Preserving,
            pieces: vec![Piece {
                start: 0.0,
                len: 1.0,
                ext: m.f,
                fast: Fast::General,
            }],
        })
    }

    /// `e^{2πiθ} ∏ (z - c_i)/(1 - c̄_i z)`, or its complex conjugate when `anti`.
    pub fn blaschke(theta: f64, zeros: &[C], anti: bool) -> Result<CoveringMap> {
        if zeros.len() < 2 {
            return Err(Error::InvalidInput(
                "a Blaschke covering needs at least two zeros".into(),
            ));
        }
        if let Some(c) = zeros.iter().find(|c| !(c.norm() < 1.0)) {
            return Err(Error::InvalidInput(format!(
                "zero {c} is not in the unit disk"
            )));
        }
        let num = Poly::from_roots(zeros);
        let den = zeros.iter().fold(Poly::real(&[1.0]), |p, c| {
            p.mul(&Poly::new(vec![ONE, -c.conj()]))
        });
        // on the circle conj(B) = 1/B
        let ext = if anti {
            Rational::new(den.scale(turn(-theta)), num)
        } else {
            Rational::new(num.scale(turn(theta)), den)
        };
        let orientation = if anti {
            Orientation::Reversing
        } else {
            Orientation::Preserving
        };
        Ok(CoveringMap {
            kind: MapKind::Blaschke {
                theta,
                zeros: zeros.to_vec(),
                anti,
            },
            degree: zeros.len(),
            orientation,
            pieces: vec![Piece {
                start: 0.0,
                len: 1.0,
                ext,
                fast: Fast::General,
            }],
        })
    }

    /// Piecewise reflection in the circles orthogonal to the unit circle at
    /// consecutive break points.
    pub fn reflection(breaks: &[f64]) -> Result<CoveringMap> {
        let b = sorted_breaks(breaks)?;
        if b.len() < 3 {
            return Err(Error::InvalidInput(
                "a reflection map needs at least three break points".into(),
            ));
        }
        let n = b.len();
        let pieces = (0..n)
            .map(|k| {
                let (s, e) = (b[k], b[(k + 1) % n]);
                Piece {
                    start: s,
                    len: wrap(e - s),
                    ext: reflection_extension(s, e),
                    fast: Fast::Involution,
                }
            })
            .collect();
        Ok(CoveringMap {
            kind: MapKind::Reflection { breaks: b },
            degree: n - 1,
            orientation: Orientation::Reversing,
            pieces,
        })
    }

    /// `z̄^d` on most arcs between the fixed points `j/(d+1)`, and reflection
    /// on the arcs `[j/(d+1), (j+1)/(d+1)]` for `j` in `pairs`.
    pub fn hybrid(d: usize, pairs: &[usize]) -> Result<CoveringMap> {
        if d < 2 {
            return Err(Error::InvalidInput("degree must be at least 2".into()));
        }
        let n = d + 1;
        if let Some(&j) = pairs.iter().find(|&&j| j >= n) {
            return Err(Error::InvalidInput(format!(
                "pair index {j} out of range for d={d}"
            )));
        }
        let e = -(d as i32);
        let pieces = (0..n)
            .map(|j| {
                let s = j as f64 / n as f64;
                let t = (j + 1) as f64 / n as f64;
                if pairs.contains(&j) {
                    Piece {
                        start: s,
                        len: 1.0 / n as f64,
                        ext: reflection_extension(s, t),
                        fast: Fast::Involution,
                    }
                } else {
                    Piece {
                        start: s,
                        len: 1.0 / n as f64,
                        ext: power_rational(e),
                        fast: Fast::Power(e),
                    }
                }
            })
            .collect();
        let mut p = pairs.to_vec();
        p.sort_unstable();
        p.dedup();
        Ok(CoveringMap {
            kind: MapKind::Hybrid { d, pairs: p },
            degree: d,
            orientation: Orientation::Reversing,
            pieces,
        })
    }

    /// `M ∘ f ∘ M⁻¹` for a disk automorphism `M`.
    pub fn conjugated(&self, m: &DiskMobius) -> CoveringMap {
        let mr = m.rational();
        let mi = m.inverse().rational();
        let mut pieces: Vec<Piece> = self
            .pieces
            .iter()
            .map(|p| {
                let ext = mr.compose(&p.ext.compose(&mi)).normalized();
                let fast = if p.fast == Fast::Involution {
                    Fast::Involution
                } else {
                    Fast::General
                };
                if p.is_global() {
                    Piece {
                        start: 0.0,
                        len: 1.0,
                        ext,
                        fast,
                    }
                } else {
                    let s = m.apply_angle(p.start);
                    let e = m.apply_angle(p.start + p.len);
                    Piece {
                        start: s,
                        len: wrap(e - s),
                        ext,
                        fast,
                    }
                }
            })
            .collect();
        pieces.sort_by(|a, b| a.start.partial_cmp(&b.start).unwrap());
        CoveringMap {
            kind: self.kind.clone(),
            degree: self.degree,
            orientation: self.orientation,
            pieces,
        }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Boundaries between pieces (empty for a single global piece).
    pub fn piece_boundaries(&self) -> Vec<f64> {
        if self.pieces.len() == 1 && self.pieces[0].is_global() {
            return vec![];
        }
        self.pieces.iter().map(|p| p.start).collect()
    }

    /// Piece containing `t`; at a boundary the piece starting there.
    pub fn piece_at(&self, t: f64) -> usize {
        self.piece_at_side(t, Side::Plus)
    }

    /// Piece containing points just to the given side of `t`.
    pub fn piece_at_side(&self, t: f64, side: Side) -> usize {
        if self.pieces.len() == 1 {
            return 0;
        }
        let t = wrap(t);
        for (i, p) in self.pieces.iter().enumerate() {
            let off = wrap(t - p.start);
            let inside = match side {
                Side::Plus => off < p.len,
                Side::Minus => off > 0.0 && off <= p.len,
            };
            if inside {
                return i;
            }
        }
        // only reachable through rounding at a boundary
        let nearest = |i: usize| {
            let p = &self.pieces[i];
            let b = if side == Side::Plus {
                p.start
            } else {
                p.start + p.len
            };
            wrap_signed(t - b).abs()
        };
        (0..self.pieces.len())
            .min_by(|&a, &b| nearest(a).partial_cmp(&nearest(b)).unwrap())
            .unwrap()
    }

    /// Angle of `f(e^{2πit})`.
    pub fn eval(&self, t: f64) -> f64 {
        let p = &self.pieces[self.piece_at(t)];
        match p.fast {
            Fast::Power(e) => wrap(e as f64 * wrap(t)),
            _ => angle_of(p.ext.eval(turn(t))),
        }
    }

    /// The conformal extension of piece `k` at `z`.
    pub fn eval_extension(&self, z: C, k: usize) -> Result<C> {
        let p = self.pieces.get(k).ok_or(Error::OutsidePieceDomain(k))?;
        let r = z.norm();
        let inner = match p.fast {
            Fast::Involution if !p.is_global() => {
                let pole = (0.5 * (turn(p.start) + turn(p.start + p.len))).norm();
                0.5f64.max((1.0 + pole) / 2.0)
            }
            _ => self.annulus_inner(),
        };
        if !(r > inner && r < 1.0 / inner) {
            return Err(Error::OutsidePieceDomain(k));
        }
        if !p.is_global() {
            let off = wrap(angle_of(z) - p.start);
            let margin = 1e-12;
            if !(off <= p.len + margin || off >= 1.0 - margin) {
                return Err(Error::OutsidePieceDomain(k));
            }
        }
        Ok(p.ext.eval(z))
    }

    fn annulus_inner(&self) -> f64 {
        let mut inner: f64 = 0.5;
        if let MapKind::Blaschke { zeros, .. } = &self.kind {
            for c in zeros {
                inner = inner.max((1.0 + c.norm()) / 2.0);
            }
        }
        inner
    }

    /// Signed lifted change of the angle from `t0` to `t0 + x`, computed on
    /// the piece to the side of `t0` indicated by the sign of `x`. Accurate
    /// for tiny `x`.
    pub fn lifted_delta(&self, t0: f64, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        let side = if x > 0.0 { Side::Plus } else { Side::Minus };
        let p = &self.pieces[self.piece_at_side(t0, side)];
        lifted_delta_on(p, t0, x, self.degree)
    }

    /// One-sided derivative in turns per turn.
    pub fn derivative_side(&self, t: f64, side: Side) -> f64 {
        let p = &self.pieces[self.piece_at_side(t, side)];
        piece_derivative(p, t)
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.derivative_side(t, Side::Plus)
    }

    /// Continuous lift of the map on `[0, t]`, starting from `eval(0)`.
    pub fn lift(&self, t: f64) -> f64 {
        let mut acc = self.eval(0.0);
        let mut pos = 0.0;
        let mut cuts: Vec<f64> = self
            .piece_boundaries()
            .into_iter()
            .filter(|&b| b > 0.0 && b < t)
            .collect();
        cuts.push(t);
        for c in cuts {
            if c > pos {
                acc += self.lifted_delta(pos, c - pos);
                pos = c;
            }
        }
        acc
    }

    /// Fixed points, from sign changes of `f(t) - t` on a grid refined by
    /// bisection; break points that are fixed are returned exactly.
    pub fn fixed_points(&self, samples: usize) -> Vec<f64> {
        let n = samples.max(64);
        let g = |t: f64| wrap_signed(self.eval(t) - t);
        let mut out: Vec<f64> = Vec::new();
        for b in self.piece_boundaries() {
            if g(b).abs() < 1e-12 {
                out.push(b);
            }
        }
        if self.pieces.len() == 1 || self.piece_boundaries().is_empty() {
            if g(0.0).abs() < 1e-12 {
                out.push(0.0);
            }
        }
        let vals: Vec<f64> = (0..=n).map(|i| g(i as f64 / n as f64)).collect();
        for i in 0..n {
            let (a, b) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
            let (ga, gb) = (vals[i], vals[i + 1]);
            if ga == 0.0 {
                push_unique(&mut out, a);
                continue;
            }
            if ga * gb < 0.0 && ga.abs() < 0.25 && gb.abs() < 0.25 {
                let (mut lo, mut hi, mut glo) = (a, b, ga);
                for _ in 0..80 {
                    let m = 0.5 * (lo + hi);
                    let gm = g(m);
                    if gm == 0.0 {
                        lo = m;
                        hi = m;
                        break;
                    }
                    if (gm < 0.0) == (glo < 0.0) {
                        lo = m;
                        glo = gm;
                    } else {
                        hi = m;
                    }
                }
                push_unique(&mut out, wrap(0.5 * (lo + hi)));
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }

    /// Snap `t` onto a piece boundary (or 0) when within `1e-12`.
    fn snap(&self, t: f64) -> f64 {
        let t = wrap(t);
        for b in self
            .piece_boundaries()
            .into_iter()
            .chain(std::iter::once(0.0))
        {
            if wrap_signed(t - b).abs() < 1e-12 {
                return b;
            }
        }
        t
    }

    /// Apply the map `|·|`-wise to an offset `δ` on `side` of `t`; returns the
    /// image point, side and offset.
    pub fn step_offset(&self, t: f64, side: Side, delta: f64) -> (f64, Side, f64) {
        let d = self.lifted_delta(t, side.sign() * delta).abs();
        (self.snap(self.eval(t)), side.after(self.orientation), d)
    }

    /// First orientation-preserving return to a periodic point.
    pub fn first_return(&self, a: f64) -> Result<FirstReturn> {
        let a = self.snap(a);
        let mut orbit = vec![a];
        let mut t = a;
        for _ in 0..4096 {
            t = self.snap(self.eval(t));
            if wrap_signed(t - a).abs() < 1e-11 {
                let p = orbit.len();
                let q = if self.orientation.pow(p) == Orientation::Preserving {
                    p
                } else {
                    2 * p
                };
                return Ok(FirstReturn {
                    map: self.clone(),
                    period: p,
                    q,
                    orbit,
                });
            }
            orbit.push(t);
        }
        Err(Error::NotPeriodic(a))
    }

    /// One-sided multipliers and parabolic multiplicities at a periodic point.
    pub fn classify_fixed(&self, a: f64) -> Result<FixedPointClass> {
        let fr = self.first_return(a)?;
        let plus = classify_side(&fr, Side::Plus)?;
        let minus = classify_side(&fr, Side::Minus)?;
        Ok(FixedPointClass {
            point: fr.orbit[0],
            period: fr.period,
            op_period: fr.q,
            lambda_plus: plus.0,
            lambda_minus: minus.0,
            class_plus: plus.1,
            class_minus: minus.1,
        })
    }

    /// Numerical check of the hypotheses of the expansivity criterion
    /// (finitely many fixed points, `|f'| ≥ 1`, `|f'| > 1` off fixed points).
    pub fn check_expansive(&self, sample_count: usize) -> ExpansivityReport {
        let n = sample_count.max(64);
        let fixed = self.fixed_points(n.max(4096));
        let tol = 1e-9;
        let exclusion = 0.01;
        let mut min_all = f64::INFINITY;
        let mut min_off = f64::INFINITY;
        let mut kinks_fixed = true;
        for b in self.piece_boundaries() {
            if !fixed.iter().any(|&x| wrap_signed(x - b).abs() < 1e-10) {
                kinks_fixed = false;
            }
            for s in [Side::Plus, Side::Minus] {
                min_all = min_all.min(self.derivative_side(b, s).abs());
            }
        }
        for i in 0..n {
            let t = i as f64 / n as f64;
            let dv = self.derivative(t).abs();
            min_all = min_all.min(dv);
            let near = fixed.iter().any(|&x| wrap_signed(t - x).abs() < exclusion);
            if !near {
                min_off = min_off.min(dv);
            }
        }
        let verdict = if !kinks_fixed || min_all < 1.0 - tol {
            Verdict::NotExpansive
        } else if min_off <= 1.0 + tol {
            Verdict::Inconclusive
        } else {
            Verdict::Expansive
        };
        ExpansivityReport {
            fixed_points: fixed,
            min_derivative: min_all,
            min_derivative_off_fixed: min_off,
            verdict,
        }
    }

    /// Disk automorphism moving the break points so every arc is shorter
    /// than half a turn, when one exists on the symmetric search line.
    pub fn normalizing_mobius(breaks: &[f64]) -> Result<Option<DiskMobius>> {
        let b = sorted_breaks(breaks)?;
        let n = b.len();
        let longest = (0..n)
            .max_by(|&i, &j| {
                wrap(b[(i + 1) % n] - b[i])
                    .partial_cmp(&wrap(b[(j + 1) % n] - b[j]))
                    .unwrap()
            })
            .unwrap();
        let len_max = wrap(b[(longest + 1) % n] - b[longest]);
        if len_max < 0.5 || n < 3 {
            return Ok(None);
        }
        let dir = -turn(b[longest] + len_max / 2.0);
        let ok = |r: f64| {
            let m = DiskMobius {
                a: dir * r,
                theta: 0.0,
            };
            let img: Vec<f64> = b.iter().map(|&t| m.apply_angle(t)).collect();
            (0..n).all(|k| wrap(img[(k + 1) % n] - img[k]) < 0.5 - 1e-6)
        };
        let mut r = 0.0;
        for i in 1..1000 {
            r = i as f64 / 1000.0;
            if ok(r) {
                return Ok(Some(DiskMobius {
                    a: dir * r,
                    theta: 0.0,
                }));
            }
        }
        Err(Error::DegenerateArc(format!(
            "no normalising automorphism found up to |a| = {r}"
        )))
    }
}

fn push_unique(v: &mut Vec<f64>, t: f64) {
    if !v.iter().any(|&x| wrap_signed(x - t).abs() < 1e-9) {
        v.push(t);
    }
}

fn sorted_breaks(breaks: &[f64]) -> Result<Vec<f64>> {
    let mut b: Vec<f64> = breaks.iter().map(|&t| wrap(t)).collect();
    if b.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidInput("break points must be finite".into()));
    }
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    for i in 1..b.len() {
        if b[i] - b[i - 1] <= 0.0 {
            return Err(Error::DegenerateArc(format!(
                "repeated break point {}",
                b[i]
            )));
        }
    }
    Ok(b)
}

fn power_rational(e: i32) -> Rational {
    let d = e.unsigned_abs() as usize;
    let mono = Poly::monomial(ONE, d);
    if e > 0 {
        Rational::poly(mono)
    } else {
        Rational::new(Poly::real(&[1.0]), mono)
    }
}

fn lifted_delta_on(p: &Piece, t0: f64, x: f64, degree: usize) -> f64 {
    if let Fast::Power(e) = p.fast {
        return e as f64 * x;
    }
    let max_step = 1.0 / (8.0 * degree as f64);
    let steps = (x.abs() / max_step).ceil().max(1.0) as usize;
    let h = x / steps as f64;
    let mut acc = 0.0;
    for i in 0..steps {
        let t = t0 + h * i as f64;
        let z0 = turn(t);
        let e0 = p.ext.eval(z0);
        let rho = p.ext.delta(z0, z0 * turn_minus_one(h)) / e0;
        acc += rho.im.atan2(1.0 + rho.re) / std::f64::consts::TAU;
    }
    acc
}

fn piece_derivative(p: &Piece, t: f64) -> f64 {
    if let Fast::Power(e) = p.fast {
        return e as f64;
    }
    p.ext.log_deriv(turn(t)).re
}

/// First-return data of a periodic point.
#[derive(Debug, Clone)]
pub struct FirstReturn {
    map: CoveringMap,
    pub period: usize,
    /// Orientation-preserving period.
    pub q: usize,
    pub orbit: Vec<f64>,
}

impl FirstReturn {
    /// `f^q(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        (0..self.q).fold(t, |x, _| self.map.eval(x))
    }

    /// Offset of `f^q(a ± δ)` from `a`, on the same side.
    pub fn offset(&self, side: Side, delta: f64) -> f64 {
        let mut t = self.orbit[0];
        let mut s = side;
        let mut d = delta;
        for _ in 0..self.q {
            let r = self.map.step_offset(t, s, d);
            t = r.0;
            s = r.1;
            d = r.2;
        }
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SideClass {
    Hyperbolic,
    /// `f_a(z) = z + c (z - a)^{N+1} + …`.
    Parabolic(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointClass {
    pub point: f64,
    pub period: usize,
    pub op_period: usize,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub class_plus: SideClass,
    pub class_minus: SideClass,
}

fn classify_side(fr: &FirstReturn, side: Side) -> Result<(f64, SideClass)> {
    let ks: Vec<i32> = (8..=20).collect();
    let s: Vec<f64> = ks.iter().map(|&k| 2f64.powi(-k)).collect();
    let off: Vec<f64> = s.iter().map(|&x| fr.offset(side, x)).collect();
    let quot: Vec<f64> = off.iter().zip(&s).map(|(o, x)| o / x).collect();
    let lambda = richardson(&quot);
    if (lambda - 1.0).abs() >= 1e-6 {
        return Ok((lambda, SideClass::Hyperbolic));
    }
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (o, x) in off.iter().zip(&s) {
        let d = (o - x).abs();
        if d > 1e-11 * x {
            xs.push(x.ln());
            ys.push(d.ln());
        }
    }
    let fit = line_fit(&xs, &ys).ok_or_else(|| {
        Error::ClassificationUnstable("too few usable offsets for a Taylor fit".into())
    })?;
    let n1 = fit.slope.round();
    if (fit.slope - n1).abs() > 0.05 || n1 < 2.0 {
        return Err(Error::ClassificationUnstable(format!(
            "Taylor-law slope {:.4} is not an integer",
            fit.slope
        )));
    }
    Ok((lambda, SideClass::Parabolic(n1 as usize - 1)))
}

/// Richardson extrapolation of `D(s_k)` with `s_{k+1} = s_k / 2`, assuming an
/// error expansion in integer powers of `s`.
fn richardson(d: &[f64]) -> f64 {
    let mut t: Vec<f64> = d.to_vec();
    let mut best = *d.last().unwrap();
    let mut best_gap = f64::INFINITY;
    for j in 1..d.len() {
        let f = 2f64.powi(j as i32);
        let next: Vec<f64> = (1..t.len())
            .map(|i| (f * t[i] - t[i - 1]) / (f - 1.0))
            .collect();
        for i in 1..next.len() {
            let gap = (next[i] - next[i - 1]).abs();
            if gap < best_gap {
                best_gap = gap;
                best = next[i];
            }
        }
        if next.len() < 2 {
            break;
        }
        t = next;
    }
    if best_gap == f64::INFINITY {
        return *d.last().unwrap();
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Expansive,
    NotExpansive,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansivityReport {
    pub fixed_points: Vec<f64>,
    pub min_derivative: f64,
    pub min_derivative_off_fixed: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkovArc {
    pub start: f64,
    pub len: f64,
    pub piece: usize,
    /// Index of the first arc covered by the image (counter-clockwise).
    pub image_start: usize,
    pub image_count: usize,
    pub image_len: f64,
    /// `(ξ, τ)` samples of the position map on the arc.
    table: Vec<(f64, f64)>,
}

/// Markov partition: arcs between consecutive break points, each mapped
/// injectively onto a union of consecutive arcs.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovPartition {
    map: CoveringMap,
    breaks: Vec<f64>,
    arcs: Vec<MarkovArc>,
    break_images: Vec<usize>,
    transition: Vec<Vec<u8>>,
}

const TABLE: usize = 256;

impl MarkovPartition {
    pub fn new(map: &CoveringMap, breaks: &[f64]) -> Result<MarkovPartition> {
        let b = sorted_breaks(breaks)?;
        if b.is_empty() {
            return Err(Error::InvalidInput("no break points".into()));
        }
        let n = b.len();
        for pb in map.piece_boundaries() {
            if !b.iter().any(|&x| wrap_signed(x - pb).abs() < 1e-12) {
                return Err(Error::InvalidInput(format!(
                    "piece boundary {pb} must be a break point of the partition"
                )));
            }
        }
        let mut break_images = Vec::with_capacity(n);
        for &a in &b {
            let y = map.eval(a);
            match b.iter().position(|&x| wrap_signed(x - y).abs() < 1e-10) {
                Some(j) => break_images.push(j),
                None => return Err(Error::NotInvariant(a, y)),
            }
        }
        let lens: Vec<f64> = (0..n)
            .map(|k| {
                if n == 1 {
                    1.0
                } else {
                    wrap(b[(k + 1) % n] - b[k])
                }
            })
            .collect();
        let mut arcs = Vec::with_capacity(n);
        for k in 0..n {
            let piece = map.piece_at_side(b[k], Side::Plus);
            let p = &map.pieces[piece];
            let len = lens[k];
            let mut table = Vec::with_capacity(TABLE + 1);
            let mut acc = 0.0;
            table.push((0.0, 0.0));
            for i in 1..=TABLE {
                let x0 = len * (i - 1) as f64 / TABLE as f64;
                let x1 = len * i as f64 / TABLE as f64;
                acc += lifted_delta_on(p, b[k] + x0, x1 - x0, map.degree);
                table.push((x1, acc));
            }
            let image_len = acc.abs();
            if image_len > 1.0 + 1e-9 {
                return Err(Error::NotInjectiveOnPiece(k));
            }
            if map.orientation == Orientation::Reversing {
                for e in &mut table {
                    e.1 += image_len;
                }
            }
            let image_start = match map.orientation {
                Orientation::Preserving => break_images[k],
                Orientation::Reversing => break_images[(k + 1) % n],
            };
            let mut sum = 0.0;
            let mut count = 0;
            while sum < image_len - 1e-8 && count < n {
                sum += lens[(image_start + count) % n];
                count += 1;
            }
            if (sum - image_len).abs() > 1e-8 {
                return Err(Error::NotInvariant(b[k], image_len));
            }
            arcs.push(MarkovArc {
                start: b[k],
                len,
                piece,
                image_start,
                image_count: count,
                image_len,
                table,
            });
        }
        let mut transition = vec![vec![0u8; n]; n];
        for (k, a) in arcs.iter().enumerate() {
            for m in 0..a.image_count {
                transition[k][(a.image_start + m) % n] = 1;
            }
        }
        Ok(MarkovPartition {
            map: map.clone(),
            breaks: b,
            arcs,
            break_images,
            transition,
        })
    }

    pub fn map(&self) -> &CoveringMap {
        &self.map
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn arcs(&self) -> &[MarkovArc] {
        &self.arcs
    }

    pub fn transition(&self) -> &[Vec<u8>] {
        &self.transition
    }

    /// Index of the break point `f(a_k)`.
    pub fn image_of_break(&self, k: usize) -> usize {
        self.break_images[k]
    }

    pub fn len(&self) -> usize {
        self.breaks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.breaks.is_empty()
    }

    /// Position (from the image start, counter-clockwise) of `f(a_k + ξ)`.
    pub fn forward_offset(&self, k: usize, xi: f64) -> f64 {
        let a = &self.arcs[k];
        let p = &self.map.pieces[a.piece];
        if let Fast::Power(e) = p.fast {
            return if e > 0 {
                e as f64 * xi
            } else {
                -(e as f64) * (a.len - xi)
            };
        }
        let i = ((xi / a.len * TABLE as f64).round() as usize).min(TABLE);
        let (x0, t0) = a.table[i];
        t0 + lifted_delta_on(p, a.start + x0, xi - x0, self.map.degree)
    }

    /// Offset `ξ ∈ [0, len_k]` with `forward_offset(k, ξ) = τ`.
    pub fn inverse_offset(&self, k: usize, tau: f64) -> f64 {
        let a = &self.arcs[k];
        let tau = tau.clamp(0.0, a.image_len);
        let p = &self.map.pieces[a.piece];
        let rev = self.map.orientation == Orientation::Reversing;
        match p.fast {
            Fast::Power(e) => {
                let d = e.unsigned_abs() as f64;
                if rev {
                    (a.len - tau / d).clamp(0.0, a.len)
                } else {
                    (tau / d).clamp(0.0, a.len)
                }
            }
            Fast::Involution => {
                let w = turn(self.breaks[a.image_start] + tau);
                let xi = wrap(angle_of(p.ext.eval(w)) - a.start);
                if xi > 0.5 * (1.0 + a.len) {
                    0.0
                } else {
                    xi.min(a.len)
                }
            }
            Fast::General => self.inverse_generic(k, tau),
        }
    }

    fn inverse_generic(&self, k: usize, tau: f64) -> f64 {
        let a = &self.arcs[k];
        let rev = self.map.orientation == Orientation::Reversing;
        // table is monotone in ξ: increasing (preserving) or decreasing
        let idx = a
            .table
            .partition_point(|e| if rev { e.1 > tau } else { e.1 < tau });
        let (mut lo, mut hi) = if idx == 0 {
            (0.0, 0.0)
        } else if idx > TABLE {
            (a.len, a.len)
        } else {
            (a.table[idx - 1].0, a.table[idx].0)
        };
        if lo == hi {
            return lo;
        }
        let g = |x: f64| {
            let v = self.forward_offset(k, x) - tau;
            if rev {
                -v
            } else {
                v
            }
        };
        let mut x = 0.5 * (lo + hi);
        for _ in 0..100 {
            let gx = g(x);
            if gx == 0.0 {
                return x;
            }
            if gx > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let d = self.map.derivative(a.start + x).abs();
            let nx = x - gx / d;
            x = if nx > lo && nx < hi && d > 0.0 {
                nx
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo < 1e-16 * (1.0 + x.abs()) || (gx / d).abs() < 1e-17 {
                break;
            }
        }
        x
    }

    /// Cumulative lengths of the image arcs of arc `k`.
    pub fn image_cumulative(&self, k: usize) -> Vec<f64> {
        let a = &self.arcs[k];
        let n = self.len();
        let mut cum = Vec::with_capacity(a.image_count + 1);
        cum.push(0.0);
        for m in 0..a.image_count {
            let l = self.arcs[(a.image_start + m) % n].len;
            cum.push(cum[m] + l);
        }
        cum
    }

    /// Arcs of level `n`: `A_{kw} = f_k^{-1}(A_w)`, in counter-clockwise order.
    pub fn refine(&self, n: usize) -> Vec<RefinedArc> {
        let mut level = self.level_one();
        for _ in 1..n.max(1) {
            level = self.next_level(&level);
        }
        level
            .into_iter()
            .flat_map(|(k, arcs)| {
                let start = self.breaks[k];
                arcs.into_iter().map(move |(lo, hi, w)| RefinedArc {
                    word: w,
                    start: wrap(start + lo),
                    len: hi - lo,
                    base: k,
                    offset: lo,
                })
            })
            .collect()
    }

    pub(crate) fn level_one(&self) -> Vec<(usize, Vec<(f64, f64, Vec<usize>)>)> {
        (0..self.len())
            .map(|k| (k, vec![(0.0, self.arcs[k].len, vec![k])]))
            .collect()
    }

    pub(crate) fn next_level(
        &self,
        level: &[(usize, Vec<(f64, f64, Vec<usize>)>)],
    ) -> Vec<(usize, Vec<(f64, f64, Vec<usize>)>)> {
        let n = self.len();
        let rev = self.map.orientation == Orientation::Reversing;
        (0..n)
            .map(|k| {
                let a = &self.arcs[k];
                let cum = self.image_cumulative(k);
                let mut children = Vec::new();
                for m in 0..a.image_count {
                    let j = (a.image_start + m) % n;
                    for (lo, hi, w) in &level[j].1 {
                        let x0 = self.inverse_offset(k, cum[m] + lo);
                        let x1 = self.inverse_offset(k, cum[m] + hi);
                        let (x0, x1) = if rev { (x1, x0) } else { (x0, x1) };
                        let mut word = Vec::with_capacity(w.len() + 1);
                        word.push(k);
                        word.extend_from_slice(w);
                        children.push((x0, x1, word));
                    }
                }
                if rev {
                    children.reverse();
                }
                // make shared endpoints identical
                for i in 1..children.len() {
                    children[i].0 = children[i - 1].1;
                }
                if let Some(f) = children.first_mut() {
                    f.0 = 0.0;
                }
                if let Some(l) = children.last_mut() {
                    l.1 = a.len;
                }
                (k, children)
            })
            .collect()
    }

    fn break_index(&self, a: f64) -> Option<usize> {
        self.breaks
            .iter()
            .position(|&x| wrap_signed(x - a).abs() < 1e-12)
    }

    /// Diameters of the first `p` level-`n` arcs abutting the break point
    /// `a` on `side`, for each `n` in `n_min..=n_max`, and the fitted decay law.
    pub fn arc_scaling_profile(
        &self,
        a: f64,
        side: Side,
        p: usize,
        n_min: usize,
        n_max: usize,
    ) -> Result<ScalingProfile> {
        let k0 = self.break_index(a).ok_or(Error::NotBreakPoint(a))?;
        if p < 2 || n_min < 1 || n_max < n_min {
            return Err(Error::InvalidInput(
                "need p >= 2 and 1 <= n_min <= n_max".into(),
            ));
        }
        let nb = self.len();
        let class = self.map.classify_fixed(self.breaks[k0])?;
        let keep = p + 2;
        let state = |k: usize, s: Side| 2 * k + if s == Side::Plus { 0 } else { 1 };
        // adjacent arc length and image data for every (break, side)
        let mut adj = vec![(0.0f64, 0.0f64, 0usize); 2 * nb];
        for k in 0..nb {
            for s in [Side::Plus, Side::Minus] {
                let arc = match s {
                    Side::Plus => k,
                    Side::Minus => (k + nb - 1) % nb,
                };
                let j = self.break_images[k];
                let s2 = s.after(self.map.orientation);
                adj[state(k, s)] = (self.arcs[arc].len, self.arcs[arc].image_len, state(j, s2));
            }
        }
        let mut r: Vec<Vec<f64>> = (0..2 * nb).map(|i| vec![adj[i].0]).collect();
        let mut diams = Vec::new();
        let mut ns = Vec::new();
        for n in 1..=n_max {
            if n >= n_min {
                let cur = &r[state(k0, side)];
                let mut d = Vec::with_capacity(p);
                let mut prev = 0.0;
                for &x in cur.iter().take(p) {
                    d.push(chord(x - prev));
                    prev = x;
                }
                ns.push(n);
                diams.push(d);
            }
            let mut next = Vec::with_capacity(2 * nb);
            for st in 0..2 * nb {
                let (len, img, target) = adj[st];
                let (k, s) = (st / 2, if st % 2 == 0 { Side::Plus } else { Side::Minus });
                let mut v: Vec<f64> = r[target]
                    .iter()
                    .filter(|&&x| x < img * (1.0 - 1e-12))
                    .map(|&x| self.local_inverse(self.breaks[k], s, x, len))
                    .collect();
                v.push(len);
                v.sort_by(|a, b| a.partial_cmp(b).unwrap());
                v.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs());
                v.truncate(keep);
                next.push(v);
            }
            r = next;
        }
        let lambda = match side {
            Side::Plus => class.lambda_plus,
            Side::Minus => class.lambda_minus,
        };
        let sc = match side {
            Side::Plus => class.class_plus,
            Side::Minus => class.class_minus,
        };
        let fit = |i: usize, logx: bool| {
            let (xs, ys): (Vec<f64>, Vec<f64>) = ns
                .iter()
                .zip(&diams)
                .filter(|(_, d)| d.len() > i && d[i] > 0.0)
                .map(|(&n, d)| (if logx { (n as f64).ln() } else { n as f64 }, d[i].ln()))
                .unzip();
            line_fit(&xs, &ys).map(|f| f.slope)
        };
        let law = match sc {
            SideClass::Hyperbolic => {
                let slope = fit(0, false).unwrap_or(f64::NAN);
                ScalingLaw::Geometric {
                    ratio_per_return: (slope * class.op_period as f64).exp(),
                    expected: 1.0 / lambda,
                }
            }
            SideClass::Parabolic(nn) => {
                let first = fit(0, true).unwrap_or(f64::NAN);
                let rest: Vec<f64> = (1..p).filter_map(|i| fit(i, true)).collect();
                let sub = rest.iter().sum::<f64>() / rest.len().max(1) as f64;
                ScalingLaw::Power {
                    n: nn,
                    first_exponent: first,
                    subsequent_exponent: sub,
                    second_exponent: rest.first().copied().unwrap_or(f64::NAN),
                }
            }
        };
        Ok(ScalingProfile {
            point: self.breaks[k0],
            side,
            q: class.op_period,
            n: ns,
            diameters: diams,
            law,
        })
    }

    /// Offset `δ ∈ [0, len]` on `side` of `t` with `|Δf| = target`.
    fn local_inverse(&self, t: f64, side: Side, target: f64, len: f64) -> f64 {
        let m = &self.map;
        let s = side.sign();
        let g = |x: f64| m.lifted_delta(t, s * x).abs() - target;
        let d0 = m.derivative_side(t, side).abs();
        let (mut lo, mut hi) = (0.0, len);
        let mut x = (target / d0).clamp(0.0, len);
        for _ in 0..200 {
            let gx = g(x);
            if gx == 0.0 {
                return x;
            }
            if gx > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let d = m.derivative_side(t + s * x, side).abs();
            let step = gx / d;
            let nx = x - step;
            x = if nx > lo && nx < hi {
                nx
            } else {
                0.5 * (lo + hi)
            };
            if step.abs() <= 1e-16 * x || hi - lo <= 1e-16 * x {
                break;
            }
        }
        x
    }
}

/// A level-`n` arc and its admissible word.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedArc {
    pub word: Vec<usize>,
    pub start: f64,
    pub len: f64,
    /// Level-one arc containing this arc, and the offset of the start in it.
    pub base: usize,
    pub offset: f64,
}

impl RefinedArc {
    pub fn diameter(&self) -> f64 {
        if self.len >= 0.5 {
            2.0
        } else {
            chord(self.len)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScalingLaw {
    /// `diam(n + q) / diam(n)` against `1/λ`.
    Geometric {
        ratio_per_return: f64,
        expected: f64,
    },
    /// Exponents of `diam I_1(n) ~ n^{-1/N}` and `diam I_i(n) ~ n^{-1/N - 1}`.
    Power {
        n: usize,
        first_exponent: f64,
        second_exponent: f64,
        subsequent_exponent: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingProfile {
    pub point: f64,
    pub side: Side,
    pub q: usize,
    pub n: Vec<usize>,
    pub diameters: Vec<Vec<f64>>,
    pub law: ScalingLaw,
}

/// Regular points `j/(d+1)`, the fixed points of `z̄^d`.
pub fn roots_of_unity_turns(n: usize) -> Vec<f64> {
    (0..n).map(|j| j as f64 / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        wrap_signed(a - b).abs() < tol
    }

    #[test]
    fn orthogonal_circle_examples() {
        let c = orthogonal_circle(0.0, 0.25).unwrap();
        assert!((c.center - C::new(1.0, 1.0)).norm() < 1e-14);
        assert!((c.radius - 1.0).abs() < 1e-14);
        assert!(matches!(
            orthogonal_circle(0.0, 0.5),
            Err(Error::DegenerateArc(_))
        ));
        let c = orthogonal_circle(0.125, 0.375).unwrap();
        assert!((c.center - C::new(0.0, 2f64.sqrt())).norm() < 1e-14);
        assert!((c.radius - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reflection_extension_matches_circle_inversion() {
        let (a, b) = (0.1, 0.3);
        let c = orthogonal_circle(a, b).unwrap();
        let e = reflection_extension(a, b);
        for t in [0.12, 0.2, 0.29] {
            let z = turn(t);
            let refl = c.invert(z).unwrap();
            assert!((e.eval(z) - refl).norm() < 1e-13);
        }
    }

    #[test]
    fn eval_examples() {
        let p = CoveringMap::power(2, Orientation::Reversing).unwrap();
        assert!(close(p.eval(0.25), 0.5, 1e-15));
        let r = CoveringMap::reflection(&[0.0, 0.2, 0.5, 0.7]).unwrap();
        for a in [0.0, 0.2, 0.5, 0.7] {
            assert!(close(r.eval(a), a, 1e-14));
        }
        let b = CoveringMap::blaschke_parabolic(3).unwrap();
        assert!(close(b.eval(0.0), 0.0, 1e-15));
    }

    #[test]
    fn eval_extension_examples() {
        let p = CoveringMap::power(3, Orientation::Reversing).unwrap();
        let v = p.eval_extension(C::new(1.1, 0.0), 0).unwrap();
        assert!((v.re - 1.0 / 1.331).abs() < 1e-14);
        let q = CoveringMap::power(2, Orientation::Preserving).unwrap();
        let v = q.eval_extension(C::new(0.5, 0.5), 0).unwrap();
        assert!((v - C::new(0.0, 0.5)).norm() < 1e-15);
        let r = CoveringMap::reflection(&[0.0, 1.0 / 3.0, 2.0 / 3.0]).unwrap();
        let z = turn(1.0 / 3.0);
        assert!((r.eval_extension(z, 1).unwrap() - z).norm() < 1e-14);
        assert!(matches!(
            r.eval_extension(C::new(0.0, 0.0), 0),
            Err(Error::OutsidePieceDomain(0))
        ));
    }

    #[test]
    fn power_partition_transitions() {
        let p = CoveringMap::power(2, Orientation::Reversing).unwrap();
        let m = MarkovPartition::new(&p, &[0.0, 1.0 / 3.0, 2.0 / 3.0]).unwrap();
        for k in 0..3 {
            for j in 0..3 {
                assert_eq!(m.transition()[k][j], u8::from(j != k));
            }
        }
        assert!(matches!(
            MarkovPartition::new(&p, &[0.0, 0.2]),
            Err(Error::NotInvariant(..))
        ));
    }

    #[test]
    fn reflection_partition_transitions() {
        let r = CoveringMap::reflection(&[0.0, 0.3, 0.55, 0.8]).unwrap();
        let m = MarkovPartition::new(&r, &[0.0, 0.3, 0.55, 0.8]).unwrap();
        for k in 0..4 {
            for j in 0..4 {
                assert_eq!(m.transition()[k][j], u8::from(j != k));
            }
        }
    }

    #[test]
    fn refinement_counts() {
        let p = CoveringMap::power(2, Orientation::Reversing).unwrap();
        let m = MarkovPartition::new(&p, &[0.0, 1.0 / 3.0, 2.0 / 3.0]).unwrap();
        assert_eq!(m.refine(1).len(), 3);
        assert_eq!(m.refine(2).len(), 6);
        let r = CoveringMap::reflection(&[0.0, 0.25, 0.5, 0.75]).unwrap();
        let mr = MarkovPartition::new(&r, &[0.0, 0.25, 0.5, 0.75]).unwrap();
        let l2 = mr.refine(2);
        assert_eq!(l2.len(), 12);
        let total: f64 = l2.iter().map(|a| a.len).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn first_return_periods() {
        let p3 = CoveringMap::power(3, Orientation::Reversing).unwrap();
        assert_eq!(p3.first_return(0.0).unwrap().q, 2);
        let p2 = CoveringMap::power(2, Orientation::Preserving).unwrap();
        assert_eq!(p2.first_return(0.0).unwrap().q, 1);
        let r = CoveringMap::reflection(&[0.0, 1.0 / 3.0, 2.0 / 3.0]).unwrap();
        assert_eq!(r.first_return(1.0 / 3.0).unwrap().q, 2);
        assert!(matches!(
            p2.first_return(0.1234567),
            Err(Error::NotPeriodic(_))
        ));
    }

    #[test]
    fn classify_examples() {
        let p3 = CoveringMap::power(3, Orientation::Reversing).unwrap();
        let c = p3.classify_fixed(0.0).unwrap();
        assert!((c.lambda_plus - 9.0).abs() < 1e-9 && (c.lambda_minus - 9.0).abs() < 1e-9);
        assert_eq!(c.class_plus, SideClass::Hyperbolic);
        let r = CoveringMap::reflection(&[0.0, 1.0 / 3.0, 2.0 / 3.0]).unwrap();
        let c = r.classify_fixed(1.0 / 3.0).unwrap();
        assert!((c.lambda_plus - 1.0).abs() < 1e-6);
        assert_eq!(c.class_plus, SideClass::Parabolic(1));
        assert_eq!(c.class_minus, SideClass::Parabolic(1));
        let b = CoveringMap::blaschke_parabolic(3).unwrap();
        let c = b.classify_fixed(0.0).unwrap();
        assert_eq!(c.class_plus, SideClass::Parabolic(2));
        assert_eq!(c.class_minus, SideClass::Parabolic(2));
    }

    #[test]
    fn expansivity_verdicts() {
        let r = CoveringMap::reflection(&[0.0, 0.3, 0.6]).unwrap();
        assert_eq!(r.check_expansive(4096).verdict, Verdict::Expansive);
        let h = CoveringMap::hybrid(3, &[0, 2]).unwrap();
        assert_eq!(h.check_expansive(4096).verdict, Verdict::Expansive);
        let p = CoveringMap::power(2, Orientation::Preserving).unwrap();
        let rep = p.check_expansive(1024);
        assert_eq!(rep.verdict, Verdict::Expansive);
        assert!((rep.min_derivative - 2.0).abs() < 1e-12);
    }

    #[test]
    fn lift_winds_by_degree() {
        let h = CoveringMap::hybrid(2, &[1]).unwrap();
        assert!((h.lift(1.0) - h.lift(0.0) + 2.0).abs() < 1e-12);
        let b = CoveringMap::blaschke(
            0.1,
            &[C::new(0.2, 0.1), C::new(-0.3, 0.0), C::new(0.0, 0.5)],
            false,
        )
        .unwrap();
        assert!((b.lift(1.0) - b.lift(0.0) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_scaling_ratio() {
        let p3 = CoveringMap::power(3, Orientation::Reversing).unwrap();
        let m = MarkovPartition::new(&p3, &[0.0, 0.25, 0.5, 0.75]).unwrap();
        let prof = m.arc_scaling_profile(0.0, Side::Plus, 2, 10, 40).unwrap();
        match prof.law {
            ScalingLaw::Geometric {
                ratio_per_return, ..
            } => assert!((ratio_per_return - 1.0 / 9.0).abs() < 1e-3),
            _ => panic!("expected geometric law"),
        }
    }

    #[test]
    fn mobius_normalisation_shortens_arcs() {
        let m = CoveringMap::normalizing_mobius(&[0.0, 0.1, 0.2])
            .unwrap()
            .unwrap();
        let img: Vec<f64> = [0.0, 0.1, 0.2].iter().map(|&t| m.apply_angle(t)).collect();
        for k in 0..3 {
            assert!(wrap(img[(k + 1) % 3] - img[k]) < 0.5);
        }
        let z = C::new(0.3, -0.2);
        assert!((m.inverse().apply(m.apply(z)) - z).norm() < 1e-14);
    }
}
