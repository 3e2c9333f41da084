//! Beurling–Ahlfors extension of circle homeomorphisms, Beltrami sampling and
//! David tails.
//!
//! A circle homeomorphism `h` is lifted to `H: ℝ → ℝ` with `H(x + 1) = H(x) + 1`.
//! The extension to the upper half plane is
//!
//! ```text
//! H̃(x + iy) = u + 2iv,  u = ½∫₀¹ H(x+ty) + H(x−ty) dt,  v = ½∫₀¹ H(x+ty) − H(x−ty) dt
//! ```
//!
//! and descends to the disk through `w = e^{2πi(x+iy)}`.

use crate::conjugacy::ConjugacyMap;
use crate::numeric::{fit::line_fit, par, quad::adaptive_simpson, wrap};
use crate::{Error, Result};
use num_complex::Complex64 as C;
use std::f64::consts::TAU;
use std::sync::Arc;

/// An orientation-preserving circle homeomorphism, angles in turns.
pub trait CircleHomeo: Sync {
    fn eval_circle(&self, t: f64) -> Result<f64>;
}

/// Conjugacies evaluate at a fixed tolerance of `1e-12`.
impl CircleHomeo for ConjugacyMap {
    fn eval_circle(&self, t: f64) -> Result<f64> {
        self.eval(t, 1e-12)
    }
}

/// Adapter for plain closures.
pub struct FnHomeo<F>(pub F);

impl<F: Fn(f64) -> f64 + Sync> CircleHomeo for FnHomeo<F> {
    fn eval_circle(&self, t: f64) -> Result<f64> {
        Ok(wrap((self.0)(t)))
    }
}

/// A lift `H` of a circle homeomorphism, or an increasing line map.
#[derive(Clone)]
pub enum LineHomeo {
    /// `H(x) = a x + b`.
    Affine { a: f64, b: f64 },
    /// Piecewise linear through `(i/n, values[i])`, `values[n] = values[0] + 1`,
    /// extended by `H(x + 1) = H(x) + 1`.
    Table(LiftTable),
    /// Arbitrary lift; extended with adaptive quadrature.
    Func(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for LineHomeo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LineHomeo::Affine { a, b } => write!(f, "Affine({a}, {b})"),
            LineHomeo::Table(t) => write!(f, "Table({} nodes)", t.values.len() - 1),
            LineHomeo::Func(_) => write!(f, "Func"),
        }
    }
}

/// Tabulated lift plus the running integral of its periodic part `H(x) − x`.
#[derive(Debug, Clone)]
pub struct LiftTable {
    values: Vec<f64>,
    cum: Vec<f64>,
}

impl LiftTable {
    pub fn new(values: Vec<f64>) -> Result<LiftTable> {
        let n = values.len().saturating_sub(1);
        if n < 2 {
            return Err(Error::InvalidInput(
                "lift table needs at least two cells".into(),
            ));
        }
        if ((values[n] - values[0]) - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput(
                "lift table must advance by exactly one turn".into(),
            ));
        }
        if values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput(
                "lift table is not strictly increasing".into(),
            ));
        }
        let h = 1.0 / n as f64;
        let p = |i: usize| values[i] - i as f64 * h;
        let mut cum = Vec::with_capacity(n + 1);
        cum.push(0.0);
        for i in 0..n {
            cum.push(cum[i] + 0.5 * h * (p(i) + p(i + 1)));
        }
        Ok(LiftTable { values, cum })
    }

    pub fn nodes(&self) -> usize {
        self.values.len() - 1
    }

    fn cell(&self, s: f64) -> (usize, f64) {
        let n = self.nodes();
        let f = s * n as f64;
        let i = (f.floor() as usize).min(n - 1);
        (i, f - i as f64)
    }

    fn periodic(&self, i: usize) -> f64 {
        self.values[i] - i as f64 / self.nodes() as f64
    }

    pub fn eval(&self, x: f64) -> f64 {
        let m = x.floor();
        let (i, f) = self.cell(x - m);
        m + self.values[i] + f * (self.values[i + 1] - self.values[i])
    }

    /// `∫₀ˣ (H(s) − s) ds`.
    fn q(&self, x: f64) -> f64 {
        let n = self.nodes();
        let m = x.floor();
        let (i, f) = self.cell(x - m);
        let h = 1.0 / n as f64;
        let (p0, p1) = (self.periodic(i), self.periodic(i + 1));
        m * self.cum[n] + self.cum[i] + h * f * (p0 + 0.5 * f * (p1 - p0))
    }
}

impl LineHomeo {
    pub fn identity() -> LineHomeo {
        LineHomeo::Affine { a: 1.0, b: 0.0 }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            LineHomeo::Affine { a, b } => a * x + b,
            LineHomeo::Table(t) => t.eval(x),
            LineHomeo::Func(f) => f(x),
        }
    }

    /// Beurling–Ahlfors extension at `x + iy`, `y > 0`.
    pub fn ba_extend(&self, x: f64, y: f64) -> Result<C> {
        if !(y > 0.0) {
            return Err(Error::InvalidInput(format!("y = {y} must be positive")));
        }
        let (u, v) = match self {
            LineHomeo::Affine { a, b } => (a * x + b, 0.5 * a * y),
            LineHomeo::Table(t) => {
                let (qp, q0, qm) = (t.q(x + y), t.q(x), t.q(x - y));
                (
                    x + (qp - qm) / (2.0 * y),
                    0.5 * y + (qp - 2.0 * q0 + qm) / (2.0 * y),
                )
            }
            LineHomeo::Func(f) => {
                let plus = adaptive_simpson(&|t: f64| f(x + t * y), 0.0, 1.0, 1e-10);
                let minus = adaptive_simpson(&|t: f64| f(x - t * y), 0.0, 1.0, 1e-10);
                (0.5 * (plus + minus), 0.5 * (plus - minus))
            }
        };
        Ok(C::new(u, 2.0 * v))
    }

    /// Extension descended to the disk, `h̃(0) = 0`.
    pub fn disk_extend(&self, w: C) -> Result<C> {
        let r = w.norm();
        if !(r < 1.0) {
            return Err(Error::OutsideDomain);
        }
        if r == 0.0 {
            return Ok(C::new(0.0, 0.0));
        }
        let y = -r.ln() / TAU;
        let x = w.im.atan2(w.re) / TAU;
        let z = self.ba_extend(x, y)?;
        Ok(C::from_polar((-TAU * z.im).exp(), TAU * z.re))
    }

    /// Beltrami coefficient of the disk extension by central differences.
    /// The default step is `min(1e-4, (1 − |z|)/8)`.
    pub fn beltrami_at(&self, z: C, step: Option<f64>) -> Result<DistortionSample> {
        let r = z.norm();
        let s = step.unwrap_or_else(|| (1e-4f64).min((1.0 - r) / 8.0));
        if !(s > 0.0) || r + s >= 1.0 {
            return Err(Error::StencilOutOfDomain);
        }
        let f = |w: C| self.disk_extend(w);
        let fx = (f(z + s)? - f(z - s)?) / (2.0 * s);
        let i = C::new(0.0, s);
        let fy = (f(z + i)? - f(z - i)?) / (2.0 * s);
        Ok(DistortionSample::from_derivatives(z, fx, fy))
    }

    /// Beltrami coefficient of the half-plane extension at `x + iy`.
    pub fn beltrami_half_plane(&self, x: f64, y: f64, step: f64) -> Result<DistortionSample> {
        if !(step > 0.0) || y - step <= 0.0 {
            return Err(Error::StencilOutOfDomain);
        }
        let fx = (self.ba_extend(x + step, y)? - self.ba_extend(x - step, y)?) / (2.0 * step);
        let fy = (self.ba_extend(x, y + step)? - self.ba_extend(x, y - step)?) / (2.0 * step);
        Ok(DistortionSample::from_derivatives(C::new(x, y), fx, fy))
    }
}

/// Continuous lift of `h` tabulated on `samples` equispaced angles, with
/// `H(0)` the representative of `h(0)` in `[0, 1)`.
pub fn lift_to_line(h: &dyn CircleHomeo, samples: usize) -> Result<LineHomeo> {
    let n = samples.max(2);
    let raw = par::try_map_collect(n, |i| h.eval_circle(i as f64 / n as f64))?;
    let h0 = wrap(raw[0]);
    let mut values: Vec<f64> = raw.iter().map(|&v| h0 + wrap(v - h0)).collect();
    values[0] = h0;
    values.push(h0 + 1.0);
    Ok(LineHomeo::Table(LiftTable::new(values)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistortionSample {
    pub z: C,
    pub mu: C,
    pub k: f64,
}

impl DistortionSample {
    fn from_derivatives(z: C, fx: C, fy: C) -> DistortionSample {
        let i = C::new(0.0, 1.0);
        let dz = 0.5 * (fx - i * fy);
        let dzb = 0.5 * (fx + i * fy);
        let mu = if dz.norm() > 0.0 {
            dzb / dz
        } else {
            C::new(0.0, 0.0)
        };
        let m = mu.norm();
        let k = if m < 1.0 {
            (1.0 + m) / (1.0 - m)
        } else {
            f64::INFINITY
        };
        DistortionSample { z, mu, k }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DavidTail {
    pub levels: Vec<f64>,
    /// Fraction of disk grid points with `K ≥ level`.
    pub areas: Vec<f64>,
    pub max_k: f64,
    pub fit: Option<TailFit>,
}

/// `area ≈ C e^{−αK}` over the levels in `window`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailFit {
    pub c: f64,
    pub alpha: f64,
    pub r2: f64,
    pub window: (usize, usize),
}

impl DavidTail {
    /// Whether the tail vanishes at some sampled level.
    pub fn reaches_zero(&self) -> bool {
        self.areas.last().is_some_and(|&a| a == 0.0)
    }

    /// The exponential fit uses the top decade of sampled distortion,
    /// the levels in `[K_max / 10, K_max]` with positive area, when that
    /// range holds at least three levels.
    pub fn from_samples(ks: &[f64], levels: &[f64]) -> DavidTail {
        let total = ks.len().max(1) as f64;
        let areas: Vec<f64> = levels
            .iter()
            .map(|&l| ks.iter().filter(|&&k| k >= l).count() as f64 / total)
            .collect();
        let max_k = ks.iter().copied().fold(1.0, f64::max);
        let win: Vec<usize> = (0..areas.len())
            .filter(|&j| areas[j] > 0.0 && levels[j] >= max_k / 10.0)
            .collect();
        let fit = (win.len() >= 3).then_some(()).and_then(|_| {
            let xs: Vec<f64> = win.iter().map(|&j| levels[j]).collect();
            let ys: Vec<f64> = win.iter().map(|&j| areas[j].ln()).collect();
            let f = line_fit(&xs, &ys)?;
            Some(TailFit {
                c: f.intercept.exp(),
                alpha: -f.slope,
                r2: f.r2,
                window: (win[0], win[win.len() - 1]),
            })
        });
        DavidTail {
            levels: levels.to_vec(),
            areas,
            max_k,
            fit,
        }
    }
}

/// Distortion samples on the centres of an `n × n` grid over `[−1, 1]²`
/// restricted to the disk, row by row from the top.
pub fn sample_grid(h: &LineHomeo, n: usize) -> Result<Vec<DistortionSample>> {
    let rows = par::try_map_collect(n, |j| {
        let y = 1.0 - (j as f64 + 0.5) * 2.0 / n as f64;
        let mut row = Vec::new();
        for i in 0..n {
            let x = -1.0 + (i as f64 + 0.5) * 2.0 / n as f64;
            let z = C::new(x, y);
            if z.norm() < 1.0 {
                row.push(h.beltrami_at(z, None)?);
            }
        }
        Ok::<_, Error>(row)
    })?;
    Ok(rows.into_iter().flatten().collect())
}

pub fn david_tail(h: &LineHomeo, grid_resolution: usize, levels: &[f64]) -> Result<DavidTail> {
    if grid_resolution < 128 {
        return Err(Error::InvalidInput(
            "grid resolution must be at least 128".into(),
        ));
    }
    let ks: Vec<f64> = sample_grid(h, grid_resolution)?
        .iter()
        .map(|s| s.k)
        .collect();
    Ok(DavidTail::from_samples(&ks, levels))
}

/// `1, 1 + step, …` up to and including `max`.
pub fn default_levels(max: f64, step: f64) -> Vec<f64> {
    let n = ((max - 1.0) / step).floor() as usize;
    (0..=n).map(|j| 1.0 + j as f64 * step).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_table(n: usize) -> LineHomeo {
        LineHomeo::Table(LiftTable::new((0..=n).map(|i| i as f64 / n as f64).collect()).unwrap())
    }

    #[test]
    fn identity_extends_to_identity() {
        for h in [LineHomeo::identity(), identity_table(64)] {
            let z = h.ba_extend(0.3, 0.2).unwrap();
            assert!((z - C::new(0.3, 0.2)).norm() < 1e-13);
            let w = h.disk_extend(C::new(0.5, 0.0)).unwrap();
            assert!((w - C::new(0.5, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn translation_equivariance() {
        let h = LineHomeo::Affine { a: 1.0, b: 0.25 };
        let z = h.ba_extend(0.1, 0.4).unwrap();
        assert!((z - C::new(0.35, 0.4)).norm() < 1e-14);
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let f = LineHomeo::Func(Arc::new(|x: f64| x + 0.05 * (TAU * x).sin()));
        let n = 4096;
        let t = LineHomeo::Table(
            LiftTable::new((0..=n).map(|i| f.eval(i as f64 / n as f64)).collect()).unwrap(),
        );
        let (a, b) = (
            f.ba_extend(0.2, 0.1).unwrap(),
            t.ba_extend(0.2, 0.1).unwrap(),
        );
        assert!((a - b).norm() < 1e-7, "{a} {b}");
    }

    #[test]
    fn linear_map_is_conformal_in_half_plane() {
        let h = LineHomeo::Affine { a: 2.0, b: 0.0 };
        let s = h.beltrami_half_plane(0.3, 0.5, 1e-4).unwrap();
        assert!(s.mu.norm() < 1e-8);
        assert!((s.k - 1.0).abs() < 1e-7);
    }

    #[test]
    fn stencil_must_stay_in_disk() {
        let h = LineHomeo::identity();
        assert_eq!(
            h.beltrami_at(C::new(0.99, 0.0), Some(0.02)),
            Err(Error::StencilOutOfDomain)
        );
    }

    #[test]
    fn tail_of_identity_is_empty() {
        let t = david_tail(&LineHomeo::identity(), 128, &[1.0, 1.5, 2.0]).unwrap();
        assert_eq!(t.areas[1], 0.0);
        assert!(t.reaches_zero());
    }
}
