//! Kissing circle packings, necklace groups and their Nielsen maps.

use crate::circle::{orthogonal_circle, EuclideanCircle};
use crate::raster::{Pixel, Raster, RasterSpec, ESCAPED, UNDECIDED};
use crate::{Error, Result};
use num_complex::Complex64 as C;

/// `c + r² / conj(z − c)`.
pub fn circle_inversion(c: &EuclideanCircle, z: C) -> Result<C> {
    c.invert(z)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contact {
    Disjoint,
    Tangent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CirclePacking {
    /// Sorted by label.
    circles: Vec<EuclideanCircle>,
    labels: Vec<usize>,
    adjacency: Vec<Vec<bool>>,
    tol: f64,
}

/// Default relative tangency tolerance.
pub const TANGENCY_TOL: f64 = 1e-9;

/// Relative overlaps up to this size are reported as transversal crossings of
/// nearly tangent circles rather than as overlapping interiors.
const NEAR_TANGENT: f64 = 1e-6;

impl CirclePacking {
    pub fn new(circles: &[(usize, EuclideanCircle)], tol: f64) -> Result<CirclePacking> {
        if circles.len() < 3 {
            return Err(Error::InvalidInput(
                "a packing needs at least three circles".into(),
            ));
        }
        let mut cs = circles.to_vec();
        cs.sort_by_key(|c| c.0);
        if cs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidInput("circle labels must be distinct".into()));
        }
        let n = cs.len();
        let mut adjacency = vec![vec![false; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (&cs[i].1, &cs[j].1);
                let d = (a.center - b.center).norm();
                let sum = a.radius + b.radius;
                let names = || (format!("C{}", cs[i].0), format!("C{}", cs[j].0));
                if (d - sum).abs() <= tol * sum {
                    adjacency[i][j] = true;
                    adjacency[j][i] = true;
                } else if d < sum {
                    let (x, y) = names();
                    if d > (a.radius - b.radius).abs() && sum - d <= NEAR_TANGENT * sum {
                        return Err(Error::TransversalIntersection(x, y));
                    }
                    return Err(Error::OverlappingInteriors(x, y));
                }
            }
        }
        Ok(CirclePacking {
            circles: cs.iter().map(|c| c.1).collect(),
            labels: cs.iter().map(|c| c.0).collect(),
            adjacency,
            tol,
        })
    }

    pub fn circles(&self) -> &[EuclideanCircle] {
        &self.circles
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }

    pub fn contact(&self, i: usize, j: usize) -> Contact {
        if self.adjacency[i][j] {
            Contact::Tangent
        } else {
            Contact::Disjoint
        }
    }

    pub fn adjacency(&self) -> &[Vec<bool>] {
        &self.adjacency
    }

    /// Edges `(i, j)`, `i < j`, of the contact graph by position.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.adjacency[i][j])
            .collect()
    }

    fn in_closed(&self, k: usize, z: C) -> bool {
        let c = &self.circles[k];
        (z - c.center).norm() <= c.radius * (1.0 + self.tol)
    }

    /// One step of the Nielsen map; the lowest label wins on overlaps of
    /// closed disks.
    pub fn nielsen_step(&self, z: C) -> NielsenStep {
        for k in 0..self.len() {
            if self.in_closed(k, z) {
                let w = self.circles[k].invert(z).unwrap_or(crate::numeric::INF);
                return NielsenStep::Reflected { circle: k, z: w };
            }
        }
        NielsenStep::InFundamentalDomain
    }

    pub fn escape_time(&self, z: C, max_steps: usize) -> NielsenOrbitClass {
        let mut z = z;
        for steps in 0..=max_steps {
            match self.nielsen_step(z) {
                NielsenStep::InFundamentalDomain => {
                    return NielsenOrbitClass::ReachedFundamentalDomain { steps, z }
                }
                NielsenStep::Reflected { z: w, .. } => {
                    if steps == max_steps {
                        break;
                    }
                    z = w;
                }
            }
        }
        NielsenOrbitClass::Undecided { max_steps, z }
    }

    /// `r_{w_0} ∘ … ∘ r_{w_last}` applied to `z`; letters are positions.
    pub fn apply_word(&self, word: &[usize], z: C) -> Result<C> {
        word.iter()
            .rev()
            .try_fold(z, |z, &k| self.circles[k].invert(z))
    }

    pub fn render_limit(&self, spec: RasterSpec) -> Raster {
        let max = spec.max_iter;
        Raster::render(spec, |z| match self.escape_time(z, max) {
            NielsenOrbitClass::ReachedFundamentalDomain { steps, .. } => Pixel {
                class: ESCAPED,
                steps: steps as u32,
            },
            NielsenOrbitClass::Undecided { .. } => Pixel {
                class: UNDECIDED,
                steps: max as u32,
            },
        })
    }

    pub fn is_necklace(&self) -> NecklaceReport {
        let n = self.len();
        let cyclic = (0..n).all(|i| self.adjacency[i][(i + 1) % n]);
        let centroid = self.circles.iter().map(|c| c.center).sum::<C>() / n as f64;
        let mut unbounded = Vec::with_capacity(n);
        let mut near = Vec::new();
        for (k, c) in self.circles.iter().enumerate() {
            let d = c.center - centroid;
            let u = if d.norm() > 0.0 {
                d / d.norm()
            } else {
                C::new(1.0, 0.0)
            };
            let p = c.center + u * c.radius;
            let mut clear = true;
            for (j, o) in self.circles.iter().enumerate() {
                if j == k {
                    continue;
                }
                let s = ((o.center - p) * u.conj()).re.max(0.0);
                let gap = (p + u * s - o.center).norm() - o.radius;
                if gap < 0.0 {
                    clear = false;
                } else if gap < 1e-6 * o.radius.min(c.radius) {
                    near.push(self.labels[k]);
                }
            }
            unbounded.push(clear);
        }
        let g = Graph::new(&self.adjacency);
        let two_connected = g.is_two_connected();
        let outerplanar = g.is_outerplanar();
        NecklaceReport {
            is_necklace: cyclic && unbounded.iter().all(|&b| b) && two_connected && outerplanar,
            cyclic_tangency: cyclic,
            meets_unbounded_face: unbounded,
            near_tangent_witness: near,
            two_connected,
            outerplanar,
        }
    }
}

pub fn build_packing(circles: &[(usize, EuclideanCircle)], tol: f64) -> Result<CirclePacking> {
    CirclePacking::new(circles, tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NecklaceReport {
    pub is_necklace: bool,
    pub cyclic_tangency: bool,
    /// Ray test from each circle's farthest point from the centroid.
    pub meets_unbounded_face: Vec<bool>,
    /// Labels whose witness ray passes within `1e-6` of another circle.
    pub near_tangent_witness: Vec<usize>,
    pub two_connected: bool,
    pub outerplanar: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NielsenStep {
    Reflected { circle: usize, z: C },
    InFundamentalDomain,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NielsenOrbitClass {
    ReachedFundamentalDomain { steps: usize, z: C },
    Undecided { max_steps: usize, z: C },
}

impl NielsenOrbitClass {
    pub fn steps(&self) -> Option<usize> {
        match self {
            NielsenOrbitClass::ReachedFundamentalDomain { steps, .. } => Some(*steps),
            NielsenOrbitClass::Undecided { .. } => None,
        }
    }
}

/// Circles orthogonal to the unit circle through consecutive `n`-th roots of
/// unity, labelled `1..=n`.
pub fn regular_ideal_polygon(n: usize) -> Result<CirclePacking> {
    if n < 3 {
        return Err(Error::InvalidInput(
            "an ideal polygon needs at least three vertices".into(),
        ));
    }
    let cs = (0..n)
        .map(|j| {
            Ok((
                j + 1,
                orthogonal_circle(j as f64 / n as f64, (j + 1) as f64 / n as f64)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    CirclePacking::new(&cs, TANGENCY_TOL)
}

/// Remove adjacent repeated letters (`r_i ∘ r_i = id`).
pub fn reduce_word(word: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for &k in word {
        if out.last() == Some(&k) {
            out.pop();
        } else {
            out.push(k);
        }
    }
    out
}

/// Small undirected graph given by an adjacency matrix.
struct Graph<'a> {
    adj: &'a [Vec<bool>],
}

impl<'a> Graph<'a> {
    fn new(adj: &'a [Vec<bool>]) -> Self {
        Graph { adj }
    }

    fn n(&self) -> usize {
        self.adj.len()
    }

    fn connected_without(&self, removed: Option<usize>) -> bool {
        let n = self.n();
        let Some(start) = (0..n).find(|&v| Some(v) != removed) else {
            return true;
        };
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if self.adj[v][w] && !seen[w] && Some(w) != removed {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        (0..n).all(|v| seen[v] || Some(v) == removed)
    }

    fn is_two_connected(&self) -> bool {
        self.n() >= 3
            && self.connected_without(None)
            && (0..self.n()).all(|v| self.connected_without(Some(v)))
    }

    /// Vertex sets of the biconnected components.
    fn blocks(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut time = 0;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut out = Vec::new();
        fn dfs(
            g: &Graph,
            v: usize,
            parent: Option<usize>,
            disc: &mut [usize],
            low: &mut [usize],
            time: &mut usize,
            edges: &mut Vec<(usize, usize)>,
            out: &mut Vec<Vec<usize>>,
        ) {
            disc[v] = *time;
            low[v] = *time;
            *time += 1;
            for w in 0..g.n() {
                if !g.adj[v][w] || Some(w) == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    edges.push((v, w));
                    dfs(g, w, Some(v), disc, low, time, edges, out);
                    low[v] = low[v].min(low[w]);
                    if low[w] >= disc[v] {
                        let mut block = Vec::new();
                        while let Some((a, b)) = edges.pop() {
                            block.push(a);
                            block.push(b);
                            if (a, b) == (v, w) {
                                break;
                            }
                        }
                        block.sort_unstable();
                        block.dedup();
                        out.push(block);
                    }
                } else if disc[w] < disc[v] {
                    edges.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            }
        }
        for v in 0..n {
            if disc[v] == usize::MAX {
                dfs(
                    self, v, None, &mut disc, &mut low, &mut time, &mut edges, &mut out,
                );
            }
        }
        out
    }

    fn is_outerplanar(&self) -> bool {
        self.blocks()
            .iter()
            .all(|b| b.len() <= 2 || self.block_outerplanar(b))
    }

    /// A 2-connected graph is outerplanar iff some Hamiltonian cycle leaves
    /// all remaining edges as pairwise non-crossing chords.
    fn block_outerplanar(&self, verts: &[usize]) -> bool {
        let m = verts.len();
        let adj = |i: usize, j: usize| self.adj[verts[i]][verts[j]];
        let mut path = vec![0usize];
        let mut used = vec![false; m];
        used[0] = true;
        fn search(
            m: usize,
            adj: &dyn Fn(usize, usize) -> bool,
            path: &mut Vec<usize>,
            used: &mut [bool],
        ) -> bool {
            if path.len() == m {
                if !adj(path[m - 1], path[0]) {
                    return false;
                }
                let mut pos = vec![0; m];
                for (p, &v) in path.iter().enumerate() {
                    pos[v] = p;
                }
                let chords: Vec<(usize, usize)> = (0..m)
                    .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
                    .filter(|&(i, j)| {
                        adj(i, j)
                            && (pos[i] as isize - pos[j] as isize).rem_euclid(m as isize) != 1
                            && (pos[j] as isize - pos[i] as isize).rem_euclid(m as isize) != 1
                    })
                    .map(|(i, j)| (pos[i].min(pos[j]), pos[i].max(pos[j])))
                    .collect();
                return chords.iter().enumerate().all(|(x, &(a, b))| {
                    chords[x + 1..].iter().all(|&(c, d)| {
                        let inside = |p: usize| a < p && p < b;
                        a == c || a == d || b == c || b == d || inside(c) == inside(d)
                    })
                });
            }
            let last = *path.last().unwrap();
            for w in 1..m {
                if !used[w] && adj(last, w) {
                    used[w] = true;
                    path.push(w);
                    if search(m, adj, path, used) {
                        return true;
                    }
                    path.pop();
                    used[w] = false;
                }
            }
            false
        }
        search(m, &adj, &mut path, &mut used)
    }
}
