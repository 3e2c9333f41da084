//! Conjugacies between covering maps with equivalent Markov partitions.
//!
//! `h` is determined by `h(A_w) = B_w` for every admissible word `w`. A point
//! is located by its forward itinerary under the source map; the matching
//! target arc is then pulled back through the inverse branches of the target
//! map. Inside the deepest arc reached, `h` is interpolated linearly.

use crate::circle::{CoveringMap, MarkovPartition, Orientation};
use crate::numeric::{chord, fit::line_fit, par, wrap, wrap_signed};
use crate::{Error, Result};
use num_complex::Complex64 as C;
use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

/// Deepest itinerary examined by [`ConjugacyMap::eval`].
pub const MAX_DEPTH: usize = 10_000;

/// A level-`n` source arc and its target partner.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchedArc {
    pub word: Vec<usize>,
    pub source_start: f64,
    pub source_len: f64,
    pub target_start: f64,
    pub target_len: f64,
}

#[derive(Debug)]
pub struct ConjugacyMap {
    source: MarkovPartition,
    target: MarkovPartition,
    /// Target index of the source arc/break `k`.
    sigma: Vec<usize>,
    cache: RwLock<BTreeMap<usize, Arc<Vec<MatchedArc>>>>,
}

impl Clone for ConjugacyMap {
    fn clone(&self) -> Self {
        ConjugacyMap {
            source: self.source.clone(),
            target: self.target.clone(),
            sigma: self.sigma.clone(),
            cache: RwLock::new(self.cache.read().unwrap().clone()),
        }
    }
}

impl ConjugacyMap {
    /// Conjugacy with `a_k ↦ b_k`.
    pub fn new(source: &MarkovPartition, target: &MarkovPartition) -> Result<ConjugacyMap> {
        let n = source.len();
        ConjugacyMap::with_correspondence(source, target, &(0..n).collect::<Vec<_>>())
    }

    /// Conjugacy with `a_k ↦ b_{sigma[k]}`; `sigma` must be a cyclic rotation.
    pub fn with_correspondence(
        source: &MarkovPartition,
        target: &MarkovPartition,
        sigma: &[usize],
    ) -> Result<ConjugacyMap> {
        let (f, g) = (source.map(), target.map());
        let n = source.len();
        let bad = |m: String| Err(Error::IncompatiblePartitions(m));
        if f.orientation != g.orientation {
            return bad("maps have opposite orientations".into());
        }
        if f.degree != g.degree {
            return bad(format!("degrees differ ({} vs {})", f.degree, g.degree));
        }
        if target.len() != n || sigma.len() != n {
            return bad(format!("break counts differ ({n} vs {})", target.len()));
        }
        let shift = sigma[0];
        if (0..n).any(|k| sigma[k] != (k + shift) % n) {
            return bad("correspondence does not preserve the cyclic order".into());
        }
        for k in 0..n {
            if sigma[source.image_of_break(k)] != target.image_of_break(sigma[k]) {
                return bad(format!("h∘f = g∘h fails at break point {k}"));
            }
            let (a, b) = (&source.arcs()[k], &target.arcs()[sigma[k]]);
            if b.image_count != a.image_count || b.image_start != sigma[a.image_start] {
                return bad(format!("transition rows differ at arc {k}"));
            }
        }
        Ok(ConjugacyMap {
            source: source.clone(),
            target: target.clone(),
            sigma: sigma.to_vec(),
            cache: RwLock::new(BTreeMap::new()),
        })
    }

    pub fn source(&self) -> &MarkovPartition {
        &self.source
    }

    pub fn target(&self) -> &MarkovPartition {
        &self.target
    }

    /// `h(t)` to within `tol` (chord length of the bracketing target arc).
    pub fn eval(&self, t: f64, tol: f64) -> Result<f64> {
        if !(tol > 0.0) {
            return Err(Error::InvalidInput("tolerance must be positive".into()));
        }
        let t = wrap(t);
        let src = &self.source;
        let n = src.len();
        let breaks = src.breaks();
        let k0 = match breaks.iter().rposition(|&b| b <= t) {
            Some(k) => k,
            None => n - 1,
        };
        let xi0 = wrap(t - breaks[k0]);
        if xi0 == 0.0 {
            return Ok(self.target.breaks()[self.sigma[k0]]);
        }
        // itinerary: (arc, sub-index of the next arc in the image)
        let mut path: Vec<(usize, usize)> = Vec::new();
        let (mut k, mut xi) = (k0, xi0);
        let mut hit: Option<(usize, bool)> = None;
        let mut depth = 8;
        // forward bound on the rounding error of the offset
        let mut err = 4e-16;
        loop {
            while path.len() < depth && hit.is_none() {
                err = err * src.map().derivative(breaks[k] + xi).abs() + 4e-16;
                let a = &src.arcs()[k];
                let tau = src.forward_offset(k, xi);
                let cum = src.image_cumulative(k);
                let mut m = cum.partition_point(|&c| c <= tau).saturating_sub(1);
                m = m.min(a.image_count - 1);
                let next = (a.image_start + m) % n;
                let x = (tau - cum[m]).clamp(0.0, src.arcs()[next].len);
                path.push((k, m));
                k = next;
                xi = x;
                let len = src.arcs()[k].len;
                let thr = if err < 1e-8 { err.max(2e-15) } else { 2e-15 };
                if xi < thr {
                    hit = Some((k, false));
                } else if len - xi < thr {
                    hit = Some((k, true));
                }
            }
            if let Some((kh, at_end)) = hit {
                let tj = self.sigma[kh];
                let x = if at_end {
                    self.target.arcs()[tj].len
                } else {
                    0.0
                };
                let p = self.pull_back(&path, x, x).0;
                return Ok(wrap(self.target.breaks()[self.sigma[k0]] + p));
            }
            let (lo, hi) = self.pull_back(&path, 0.0, self.target.arcs()[self.sigma[k]].len);
            if chord(hi - lo) < tol {
                let (alo, ahi) = self.pull_back_source(&path, 0.0, src.arcs()[k].len);
                let frac = if ahi > alo {
                    ((xi0 - alo) / (ahi - alo)).clamp(0.0, 1.0)
                } else {
                    0.5
                };
                return Ok(wrap(
                    self.target.breaks()[self.sigma[k0]] + lo + frac * (hi - lo),
                ));
            }
            if depth >= MAX_DEPTH {
                return Err(Error::RefinementBudgetExceeded(MAX_DEPTH));
            }
            depth = (depth * 2).min(MAX_DEPTH);
        }
    }

    /// Pull the target interval `[lo, hi]` of the last arc of `path` back to
    /// offsets in the first target arc.
    fn pull_back(&self, path: &[(usize, usize)], lo: f64, hi: f64) -> (f64, f64) {
        let tg = &self.target;
        let rev = tg.map().orientation == Orientation::Reversing;
        let (mut lo, mut hi) = (lo, hi);
        for &(k, m) in path.iter().rev() {
            let j = self.sigma[k];
            let c = tg.image_cumulative(j)[m];
            let x0 = tg.inverse_offset(j, c + lo);
            let x1 = if hi == lo {
                x0
            } else {
                tg.inverse_offset(j, c + hi)
            };
            (lo, hi) = if rev { (x1, x0) } else { (x0, x1) };
        }
        (lo, hi)
    }

    fn pull_back_source(&self, path: &[(usize, usize)], lo: f64, hi: f64) -> (f64, f64) {
        let s = &self.source;
        let rev = s.map().orientation == Orientation::Reversing;
        let (mut lo, mut hi) = (lo, hi);
        for &(k, m) in path.iter().rev() {
            let c = s.image_cumulative(k)[m];
            let x0 = s.inverse_offset(k, c + lo);
            let x1 = s.inverse_offset(k, c + hi);
            (lo, hi) = if rev { (x1, x0) } else { (x0, x1) };
        }
        (lo, hi)
    }

    /// Every level-`n` arc pair `(A_w, B_w)`, cached per level.
    pub fn level(&self, n: usize) -> Arc<Vec<MatchedArc>> {
        if let Some(v) = self.cache.read().unwrap().get(&n) {
            return v.clone();
        }
        let sa = self.source.refine(n);
        let ta = self.target.refine(n);
        let nb = self.source.len();
        let mut by_base: Vec<Vec<&crate::circle::RefinedArc>> = vec![Vec::new(); nb];
        for a in &ta {
            by_base[a.base].push(a);
        }
        let mut pos = vec![0usize; nb];
        let mut out = Vec::with_capacity(sa.len());
        for a in &sa {
            let j = self.sigma[a.base];
            let b = by_base[j][pos[j]];
            pos[j] += 1;
            out.push(MatchedArc {
                word: a.word.clone(),
                source_start: a.start,
                source_len: a.len,
                target_start: b.start,
                target_len: b.len,
            });
        }
        let v = Arc::new(out);
        self.cache
            .write()
            .unwrap()
            .entry(n)
            .or_insert_with(|| v.clone())
            .clone()
    }

    /// `h` on `samples` equispaced points `i / samples`.
    pub fn eval_grid(&self, samples: usize, tol: f64) -> Result<Vec<f64>> {
        par::try_map_collect(samples, |i| self.eval(i as f64 / samples as f64, tol))
    }

    /// `ρ_h(t)` maximised over `sample_count` equispaced base points.
    pub fn scalewise_distortion(&self, t: f64, sample_count: usize) -> Result<f64> {
        if !(t > 0.0 && t < 0.5) {
            return Err(Error::InvalidInput(format!(
                "scale {t} must lie in (0, 1/2)"
            )));
        }
        let n = sample_count.max(1);
        let tol = (t * 1e-6).max(1e-13);
        let shift = t * n as f64;
        if (shift - shift.round()).abs() < 1e-9 && shift.round() >= 1.0 {
            let grid = self.eval_grid(n, tol)?;
            return Ok(grid_distortion(&grid, shift.round() as usize));
        }
        let vals = par::try_map_collect(n, |i| {
            let z = i as f64 / n as f64;
            Ok::<_, Error>((
                self.eval(z - t, tol)?,
                self.eval(z, tol)?,
                self.eval(z + t, tol)?,
            ))
        })?;
        Ok(vals
            .iter()
            .map(|&(a, b, c)| ratio(a, b, c))
            .fold(1.0, f64::max))
    }

    /// `ρ_h(2^{-k})` for `k_min..=k_max` and the bounded/linear model fits.
    pub fn distortion_profile(
        &self,
        k_min: usize,
        k_max: usize,
        sample_count: usize,
    ) -> Result<DistortionProfile> {
        if !(2 <= k_min && k_min < k_max) {
            return Err(Error::InvalidInput("need 2 <= k_min < k_max".into()));
        }
        let n = sample_count.max(1);
        let tol = (2f64.powi(-(k_max as i32)) * 1e-6).max(1e-13);
        let ks: Vec<usize> = (k_min..=k_max).collect();
        let on_grid = ks.iter().all(|&k| n % (1usize << k) == 0);
        let rhos: Vec<f64> = if on_grid {
            let grid = self.eval_grid(n, tol)?;
            ks.iter().map(|&k| grid_distortion(&grid, n >> k)).collect()
        } else {
            ks.iter()
                .map(|&k| self.scalewise_distortion(2f64.powi(-(k as i32)), n))
                .collect::<Result<_>>()?
        };
        Ok(DistortionProfile::from_values(ks, rhos))
    }
}

fn ratio(hm: f64, h0: f64, hp: f64) -> f64 {
    let a = chord(wrap(hp - h0));
    let b = chord(wrap(h0 - hm));
    if a == 0.0 || b == 0.0 {
        return f64::INFINITY;
    }
    (a / b).max(b / a)
}

fn grid_distortion(grid: &[f64], shift: usize) -> f64 {
    let n = grid.len();
    (0..n)
        .map(|i| {
            ratio(
                grid[(i + n - shift % n) % n],
                grid[i],
                grid[(i + shift) % n],
            )
        })
        .fold(1.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistortionModel {
    Bounded,
    LinearInK,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistortionProfile {
    pub ks: Vec<usize>,
    pub scales: Vec<f64>,
    pub values: Vec<f64>,
    pub mean: f64,
    pub rss_bounded: f64,
    pub slope: f64,
    pub intercept: f64,
    pub rss_linear: f64,
    pub model: DistortionModel,
}

impl DistortionProfile {
    /// The linear model wins when it explains the data significantly better
    /// (F statistic at least 9) and the fitted growth over the range is at
    /// least a quarter of the mean value.
    pub fn from_values(ks: Vec<usize>, values: Vec<f64>) -> DistortionProfile {
        let xs: Vec<f64> = ks.iter().map(|&k| k as f64).collect();
        let m = values.len() as f64;
        let mean = values.iter().sum::<f64>() / m;
        let rss_b: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
        let fit = line_fit(&xs, &values);
        let (slope, intercept, rss_l) = fit
            .map(|f| (f.slope, f.intercept, f.rss))
            .unwrap_or((0.0, mean, rss_b));
        let span = xs.last().unwrap_or(&0.0) - xs.first().unwrap_or(&0.0);
        let f_stat = if rss_l > 0.0 && m > 2.0 {
            (rss_b - rss_l) / (rss_l / (m - 2.0))
        } else {
            f64::INFINITY
        };
        let growth = slope * span / mean;
        let model = if rss_b > 0.0 && f_stat >= 9.0 && growth >= 0.25 {
            DistortionModel::LinearInK
        } else {
            DistortionModel::Bounded
        };
        DistortionProfile {
            scales: ks.iter().map(|&k| 2f64.powi(-(k as i32))).collect(),
            ks,
            values,
            mean,
            rss_bounded: rss_b,
            slope,
            intercept,
            rss_linear: rss_l,
            model,
        }
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(1.0, f64::max)
    }
}

/// Conjugacy from `map` to the power map of the same degree and orientation,
/// normalised so that `h(0) = 0`. Break points are the fixed points of a
/// reversing map, or the preimages of the fixed points of a preserving one.
pub fn canonical_power_conjugacy(map: &CoveringMap) -> Result<ConjugacyMap> {
    let d = map.degree;
    let fixed = map.fixed_points(4096);
    if !fixed.iter().any(|&x| wrap_signed(x).abs() < 1e-12) {
        return Err(Error::NormalizationImpossible(
            "0 is not a fixed point".into(),
        ));
    }
    let power = CoveringMap::power(d, map.orientation)?;
    let (mb, pb) = match map.orientation {
        Orientation::Reversing => {
            let pb: Vec<f64> = (0..=d).map(|j| j as f64 / (d + 1) as f64).collect();
            (fixed.clone(), pb)
        }
        Orientation::Preserving => {
            let mut mb = Vec::new();
            for &x in &fixed {
                mb.extend(preimages(map, x));
            }
            let mut pb = Vec::new();
            for j in 0..d - 1 {
                for m in 0..d {
                    pb.push((j as f64 / (d - 1) as f64 + m as f64) / d as f64);
                }
            }
            (mb, pb)
        }
    };
    let mut mb: Vec<f64> = mb
        .into_iter()
        .map(|t| {
            if wrap_signed(t).abs() < 1e-12 {
                0.0
            } else {
                wrap(t)
            }
        })
        .collect();
    mb.sort_by(|a, b| a.partial_cmp(b).unwrap());
    mb.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    if mb.len() != pb.len() {
        return Err(Error::IncompatiblePartitions(format!(
            "map has {} break points, the power map {}",
            mb.len(),
            pb.len()
        )));
    }
    let pm = MarkovPartition::new(map, &mb)?;
    let pp = MarkovPartition::new(&power, &pb)?;
    ConjugacyMap::new(&pm, &pp)
}

pub const PAIR_CATALOG: &[&str] = &["rho2", "anti_blaschke3"];

/// `rho2`: `z̄²` to the Nielsen map of the ideal triangle, on the partition by
/// the thirds. `anti_blaschke3`: the hyperbolic anti-Blaschke product
/// `conj(z²(z − 0.3)/(1 − 0.3z))` to `z̄³`.
pub fn catalog_pair(name: &str) -> Result<ConjugacyMap> {
    match name {
        "rho2" => {
            let thirds = [0.0, 1.0 / 3.0, 2.0 / 3.0];
            let f = CoveringMap::power(2, Orientation::Reversing)?;
            let g = CoveringMap::reflection(&thirds)?;
            ConjugacyMap::new(
                &MarkovPartition::new(&f, &thirds)?,
                &MarkovPartition::new(&g, &thirds)?,
            )
        }
        "anti_blaschke3" => {
            let z = C::new(0.0, 0.0);
            canonical_power_conjugacy(&CoveringMap::blaschke(
                0.0,
                &[z, z, C::new(0.3, 0.0)],
                true,
            )?)
        }
        _ => Err(Error::UnknownName(name.into())),
    }
}

/// Solutions of `f(t) = x`, by sign changes on a grid and bisection.
pub fn preimages(map: &CoveringMap, x: f64) -> Vec<f64> {
    let n = 4096 * map.degree;
    let g = |t: f64| wrap_signed(map.eval(t) - x);
    let mut out: Vec<f64> = Vec::new();
    let vals: Vec<f64> = (0..=n).map(|i| g(i as f64 / n as f64)).collect();
    for i in 0..n {
        let (a, b) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
        if vals[i] == 0.0 {
            out.push(a);
            continue;
        }
        if vals[i] * vals[i + 1] < 0.0 && vals[i].abs() < 0.25 && vals[i + 1].abs() < 0.25 {
            let (mut lo, mut hi, glo) = (a, b, vals[i]);
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
                } else {
                    hi = m;
                }
            }
            out.push(wrap(0.5 * (lo + hi)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::Orientation;

    fn thirds() -> Vec<f64> {
        vec![0.0, 1.0 / 3.0, 2.0 / 3.0]
    }

    fn power_rho2() -> ConjugacyMap {
        let f = CoveringMap::power(2, Orientation::Reversing).unwrap();
        let g = CoveringMap::reflection(&thirds()).unwrap();
        let pf = MarkovPartition::new(&f, &thirds()).unwrap();
        let pg = MarkovPartition::new(&g, &thirds()).unwrap();
        ConjugacyMap::new(&pf, &pg).unwrap()
    }

    #[test]
    fn identity_conjugacy() {
        let f = CoveringMap::power(2, Orientation::Reversing).unwrap();
        let pf = MarkovPartition::new(&f, &thirds()).unwrap();
        let h = ConjugacyMap::new(&pf, &pf).unwrap();
        assert!((h.eval(0.123, 1e-10).unwrap() - 0.123).abs() < 1e-10);
        for a in h.level(4).iter() {
            assert_eq!(a.source_start, a.target_start);
            assert_eq!(a.source_len, a.target_len);
        }
    }

    #[test]
    fn break_points_map_exactly() {
        let h = power_rho2();
        for (k, &a) in thirds().iter().enumerate() {
            assert_eq!(h.eval(a, 1e-8).unwrap(), h.target().breaks()[k]);
        }
    }

    #[test]
    fn odd_symmetry() {
        let h = power_rho2();
        for t in [0.05, 1.0 / 6.0, 0.2, 0.41] {
            let a = h.eval(t, 1e-9).unwrap();
            let b = h.eval(1.0 - t, 1e-9).unwrap();
            assert!(wrap_signed(a + b).abs() < 1e-8, "t={t}");
        }
    }

    #[test]
    fn permuted_labels_are_rejected() {
        let f = CoveringMap::power(2, Orientation::Reversing).unwrap();
        let pf = MarkovPartition::new(&f, &thirds()).unwrap();
        let r = ConjugacyMap::with_correspondence(&pf, &pf, &[0, 2, 1]);
        assert!(matches!(r, Err(Error::IncompatiblePartitions(_))));
    }

    #[test]
    fn canonical_conjugacy_of_power_map_is_identity() {
        let f = CoveringMap::power(3, Orientation::Reversing).unwrap();
        let h = canonical_power_conjugacy(&f).unwrap();
        for t in [0.1, 0.37, 0.8] {
            assert!((h.eval(t, 1e-10).unwrap() - t).abs() < 1e-9);
        }
        let g = CoveringMap::power(2, Orientation::Preserving).unwrap();
        let h = canonical_power_conjugacy(&g).unwrap();
        assert!((h.eval(0.3, 1e-10).unwrap() - 0.3).abs() < 1e-9);
    }

    #[test]
    fn normalisation_needs_a_fixed_zero() {
        let r = CoveringMap::reflection(&[0.1, 0.4, 0.7]).unwrap();
        assert!(matches!(
            canonical_power_conjugacy(&r),
            Err(Error::NormalizationImpossible(_))
        ));
    }

    #[test]
    fn identity_has_unit_distortion() {
        let f = CoveringMap::power(2, Orientation::Reversing).unwrap();
        let pf = MarkovPartition::new(&f, &thirds()).unwrap();
        let h = ConjugacyMap::new(&pf, &pf).unwrap();
        let r = h.scalewise_distortion(1.0 / 16.0, 256).unwrap();
        assert!((r - 1.0).abs() < 1e-9);
    }
}
