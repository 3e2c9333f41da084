//! Dense complex polynomials and their roots.
//!
//! Roots come from the eigenvalues of the companion matrix (complex Schur
//! form), followed by Newton polishing. Clusters produced by a multiple root
//! are collapsed onto their centroid and re-polished on the appropriate
//! derivative, which recovers multiple roots to near machine precision.

use crate::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64 as C;

#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    /// Ascending coefficients; the last one is non-zero unless the
    /// polynomial is zero.
    c: Vec<C>,
}

impl Poly {
    pub fn new(mut c: Vec<C>) -> Poly {
        while c.len() > 1 && c.last() == Some(&C::new(0.0, 0.0)) {
            c.pop();
        }
        if c.is_empty() {
            c.push(C::new(0.0, 0.0));
        }
        Poly { c }
    }

    pub fn real(c: &[f64]) -> Poly {
        Poly::new(c.iter().map(|&x| C::new(x, 0.0)).collect())
    }

    pub fn constant(a: C) -> Poly {
        Poly::new(vec![a])
    }

    pub fn monomial(a: C, k: usize) -> Poly {
        let mut c = vec![C::new(0.0, 0.0); k + 1];
        c[k] = a;
        Poly::new(c)
    }

    /// `∏ (z - r)`.
    pub fn from_roots(roots: &[C]) -> Poly {
        roots.iter().fold(Poly::real(&[1.0]), |p, &r| {
            p.mul(&Poly::new(vec![-r, C::new(1.0, 0.0)]))
        })
    }

    pub fn coeffs(&self) -> &[C] {
        &self.c
    }

    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.c.len() == 1 && self.c[0] == C::new(0.0, 0.0)
    }

    pub fn leading(&self) -> C {
        *self.c.last().unwrap()
    }

    /// Coefficient of `z^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> C {
        self.c.get(k).copied().unwrap_or(C::new(0.0, 0.0))
    }

    pub fn eval(&self, z: C) -> C {
        self.c
            .iter()
            .rev()
            .fold(C::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// `Σ |a_k| |z|^k`, the natural scale for residuals at `z`.
    pub fn eval_abs(&self, z: C) -> f64 {
        let r = z.norm();
        self.c.iter().rev().fold(0.0, |acc, a| acc * r + a.norm())
    }

    pub fn derivative(&self) -> Poly {
        if self.c.len() == 1 {
            return Poly::real(&[0.0]);
        }
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &a)| a * k as f64)
                .collect(),
        )
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn scale(&self, a: C) -> Poly {
        Poly::new(self.c.iter().map(|&x| x * a).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = vec![C::new(0.0, 0.0); self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, k: usize) -> Poly {
        (0..k).fold(Poly::real(&[1.0]), |acc, _| acc.mul(self))
    }

    /// Polynomial with conjugated coefficients.
    pub fn conj(&self) -> Poly {
        Poly::new(self.c.iter().map(|a| a.conj()).collect())
    }

    /// `z^n p(1/z)` for `n = degree`.
    pub fn reversed(&self, n: usize) -> Poly {
        let mut c: Vec<C> = (0..=n).map(|k| self.coeff(n - k)).collect();
        c.truncate(n + 1);
        Poly::new(c)
    }

    /// Coefficients of `p(z0 + h)` as a polynomial in `h`.
    pub fn taylor_at(&self, z0: C) -> Vec<C> {
        let mut c = self.c.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let next = c[j + 1];
                c[j] += z0 * next;
            }
        }
        c
    }

    /// `p(z0 + h) - p(z0)` with relative accuracy for small `h`.
    pub fn delta(&self, z0: C, h: C) -> C {
        let t = self.taylor_at(z0);
        t.iter()
            .skip(1)
            .rev()
            .fold(C::new(0.0, 0.0), |acc, &a| acc * h + a)
            * h
    }

    /// Drop leading coefficients that are negligible relative to the largest.
    pub fn trimmed(&self, rel: f64) -> Poly {
        let big = self.c.iter().map(|a| a.norm()).fold(0.0, f64::max);
        let mut c = self.c.clone();
        while c.len() > 1 && c.last().unwrap().norm() <= rel * big {
            c.pop();
        }
        Poly::new(c)
    }

    /// All roots, repeated by multiplicity.
    pub fn roots(&self) -> Result<Vec<C>> {
        Ok(self
            .roots_with_multiplicity()?
            .into_iter()
            .flat_map(|(z, m)| std::iter::repeat_n(z, m))
            .collect())
    }

    /// Distinct roots with multiplicities; `Σ m = degree`.
    pub fn roots_with_multiplicity(&self) -> Result<Vec<(C, usize)>> {
        let n = self.degree();
        if n == 0 {
            return Ok(vec![]);
        }
        let zeros = self.c.iter().take_while(|a| a.norm() == 0.0).count();
        let reduced = Poly::new(self.c[zeros..].to_vec());
        let mut out = Vec::new();
        if zeros > 0 {
            out.push((C::new(0.0, 0.0), zeros));
        }
        let m = reduced.degree();
        if m == 0 {
            return Ok(out);
        }
        let raw = companion_eigenvalues(&reduced);
        let polished: Vec<C> = raw
            .into_iter()
            .map(|z| newton_polish(&reduced, z))
            .collect();
        out.extend(cluster(&reduced, polished));
        for &(z, _) in &out {
            let scale = self.eval_abs(z).max(f64::MIN_POSITIVE);
            let res = self.eval(z).norm() / scale;
            if !res.is_finite() || res > 1e-8 {
                return Err(Error::IllConditioned(res));
            }
        }
        Ok(out)
    }
}

fn companion_eigenvalues(p: &Poly) -> Vec<C> {
    let n = p.degree();
    let lead = p.leading();
    if n == 1 {
        return vec![-p.c[0] / lead];
    }
    let mut m = DMatrix::<C>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = C::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -p.c[i] / lead;
    }
    match nalgebra::Schur::try_new(m, 1e-15, 20_000) {
        Some(s) => {
            let (_, t) = s.unpack();
            (0..n).map(|i| t[(i, i)]).collect()
        }
        None => aberth(p),
    }
}

/// Aberth–Ehrlich iteration; fallback when the Schur iteration stalls.
fn aberth(p: &Poly) -> Vec<C> {
    let n = p.degree();
    let dp = p.derivative();
    let lead = p.leading().norm();
    let radius = 1.0 + p.c[..n].iter().map(|a| a.norm() / lead).fold(0.0, f64::max);
    let mut z: Vec<C> = (0..n)
        .map(|k| {
            C::from_polar(
                radius * 0.5,
                std::f64::consts::TAU * (k as f64 + 0.25) / n as f64,
            )
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let ratio = p.eval(z[i]) / dp.eval(z[i]);
            let s: C = (0..n)
                .filter(|&j| j != i)
                .map(|j| C::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (C::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn newton_polish(p: &Poly, z0: C) -> C {
    let dp = p.derivative();
    let mut z = z0;
    let mut best = p.eval(z).norm();
    for _ in 0..60 {
        let d = dp.eval(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = p.eval(z) / d;
        let cand = z - step;
        let r = p.eval(cand).norm();
        if !(r < best) {
            break;
        }
        z = cand;
        best = r;
        if step.norm() <= 1e-16 * z.norm().max(1e-300) {
            break;
        }
    }
    z
}

/// Collapse groups of nearby roots that represent one multiple root.
fn cluster(p: &Poly, roots: Vec<C>) -> Vec<(C, usize)> {
    let n = roots.len();
    let mut group: Vec<usize> = (0..n).collect();
    fn find(g: &mut Vec<usize>, i: usize) -> usize {
        let mut r = i;
        while g[r] != r {
            r = g[r];
        }
        let mut j = i;
        while g[j] != r {
            let nx = g[j];
            g[j] = r;
            j = nx;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let tol = 1e-4 * roots[i].norm().max(roots[j].norm()).max(1.0);
            if (roots[i] - roots[j]).norm() < tol {
                let (a, b) = (find(&mut group, i), find(&mut group, j));
                if a != b {
                    group[b] = a;
                }
            }
        }
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut group, i);
        members[r].push(i);
    }
    let mut out = Vec::new();
    for m in members.into_iter().filter(|m| !m.is_empty()) {
        if m.len() == 1 {
            out.push((roots[m[0]], 1));
            continue;
        }
        let k = m.len();
        let centroid = m.iter().map(|&i| roots[i]).sum::<C>() / k as f64;
        let dk = (1..k).fold(p.clone(), |q, _| q.derivative());
        let c = newton_polish(&dk, centroid);
        // accept the merge only if the lower derivatives vanish there too
        let mut q = p.clone();
        let mut ok = true;
        for _ in 0..k - 1 {
            let scale = q.eval_abs(c).max(f64::MIN_POSITIVE);
            if q.eval(c).norm() / scale > 1e-6 {
                ok = false;
                break;
            }
            q = q.derivative();
        }
        if ok {
            out.push((c, k));
        } else {
            out.extend(m.iter().map(|&i| (roots[i], 1)));
        }
    }
    out.sort_by(|a, b| {
        a.0.re
            .partial_cmp(&b.0.re)
            .unwrap()
            .then(a.0.im.partial_cmp(&b.0.im).unwrap())
    });
    out
}
