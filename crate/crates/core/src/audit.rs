//! Pseudorandomness audits on sparse samples.
//!
//! The four event-R properties are checked per property: the triangle
//! budget and the local edge/codegree bounds exhaustively, the
//! neighbourhood-expansion bounds exhaustively for |T| <= 2 (via degree
//! histograms with corrections for the pairs that share an edge or a
//! common neighbour) and by uniform sampling over a geometric size grid for
//! larger T. Verdicts are violation rates, never a single pass/fail: the
//! constants in the asymptotic statements are not sharp at desk scale.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::triangles::enumerate_triangles;
use rand::Rng;
use serde::Serialize;

/// The slowly-growing pseudorandomness scale, chosen as the largest value
/// satisfying both `nq >= w^3 log n` and `n^2 q^3 <= e^-w`, floored at 1.
#[derive(Debug, Clone, Serialize)]
pub struct Omega0Choice {
    pub value: f64,
    pub n: usize,
    pub q: f64,
    /// Set when n^2 q^3 >= 1 makes the second constraint unsatisfiable; the
    /// value falls back to the first constraint alone.
    pub regime_warning: bool,
}

pub fn choose_omega0(n: usize, q: f64) -> Result<Omega0Choice> {
    if n < 3 {
        return Err(Error::invalid("omega0 selection needs n >= 3"));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::invalid("omega0 selection needs 0 < q < 1"));
    }
    let nf = n as f64;
    let first = (nf * q / nf.ln()).cbrt();
    let n2q3 = nf * nf * q * q * q;
    let (value, regime_warning) = if n2q3 >= 1.0 {
        (first.max(1.0), true)
    } else {
        (first.min((1.0 / n2q3).ln()).max(1.0), false)
    };
    Ok(Omega0Choice {
        value,
        n,
        q,
        regime_warning,
    })
}

/// How T-sets are drawn for the sampled neighbourhood properties.
#[derive(Debug, Clone, Serialize)]
pub struct SamplingPlan {
    pub samples_per_size: usize,
    /// Geometric grid 4, 8, ... capped at floor(1/q), for the degree-range
    /// property.
    pub expansion_sizes: Vec<usize>,
    /// Sizes ceil(k/q) for k = 1, 2, 4, ... while k <= omega0, for the
    /// almost-spanning property (its hypothesis needs q|T| >= 1).
    pub spanning_sizes: Vec<usize>,
}

impl SamplingPlan {
    pub fn for_regime(n: usize, q: f64, omega0: f64, samples_per_size: usize) -> Self {
        let mut expansion_sizes = Vec::new();
        if q > 0.0 {
            let cap = ((1.0 / q).floor() as usize).min(n / 2).max(1);
            let mut size = 4usize;
            while size < cap {
                expansion_sizes.push(size);
                size *= 2;
            }
            if cap >= 4 {
                expansion_sizes.push(cap);
            }
            expansion_sizes.dedup();
        }
        let mut spanning_sizes = Vec::new();
        if q > 0.0 {
            let mut k = 1.0f64;
            while k <= omega0 {
                let size = (k / q).ceil() as usize;
                if size > n / 2 {
                    break;
                }
                spanning_sizes.push(size);
                k *= 2.0;
            }
            spanning_sizes.dedup();
        }
        SamplingPlan {
            samples_per_size,
            expansion_sizes,
            spanning_sizes,
        }
    }
}

/// Violation tally for one T-size bucket.
#[derive(Debug, Clone, Serialize)]
pub struct SizeBucket {
    pub size: usize,
    pub checked: u64,
    pub violations: u64,
    pub exhaustive: bool,
    /// False when the property's hypothesis excludes this size entirely.
    pub applicable: bool,
}

impl SizeBucket {
    pub fn rate(&self) -> f64 {
        if self.checked == 0 {
            0.0
        } else {
            self.violations as f64 / self.checked as f64
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PropTriangles {
    pub x3: usize,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropLocal {
    pub max_edges_in_neighborhood: usize,
    pub edge_bound: f64,
    pub edges_hold: bool,
    pub max_codegree: usize,
    pub codegree_bound: f64,
    pub codegree_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RAuditReport {
    pub n: usize,
    pub q: f64,
    pub omega0: f64,
    pub prop_i: PropTriangles,
    pub prop_ii: PropLocal,
    pub prop_iii: Vec<SizeBucket>,
    pub prop_iv: Vec<SizeBucket>,
    pub sampling_plan: SamplingPlan,
}

/// Per-vertex data reused by the exhaustive pair counts.
struct PairAudit {
    n: usize,
    deg: Vec<u32>,
    /// Histograms over "special" pairs (sharing an edge or a common
    /// neighbour): raw degree sums and corrected neighbourhood sizes.
    special_base: Vec<u64>,
    special_true: Vec<u64>,
}

impl PairAudit {
    fn build(g: &Graph) -> Self {
        let n = g.n();
        let deg: Vec<u32> = (0..n as u32).map(|v| g.degree(v) as u32).collect();
        let maxval = 2 * g.max_degree() + 1;
        let mut special_base = vec![0u64; maxval + 1];
        let mut special_true = vec![0u64; maxval + 1];
        let mut codeg = vec![0u32; n];
        let mut touched: Vec<u32> = Vec::new();
        for x in 0..n as u32 {
            for &w in g.neighbors(x) {
                for &y in g.neighbors(w) {
                    if y > x {
                        if codeg[y as usize] == 0 {
                            touched.push(y);
                        }
                        codeg[y as usize] += 1;
                    }
                }
            }
            for &y in &touched {
                let edge = g.has_edge(x, y) as u32;
                let base = deg[x as usize] + deg[y as usize];
                let tru = base - codeg[y as usize] - 2 * edge;
                special_base[base as usize] += 1;
                special_true[tru as usize] += 1;
            }
            // adjacent pairs with no common neighbour are special too
            for &y in g.neighbors(x) {
                if y > x && codeg[y as usize] == 0 {
                    let base = deg[x as usize] + deg[y as usize];
                    special_base[base as usize] += 1;
                    special_true[(base - 2) as usize] += 1;
                }
            }
            for &y in &touched {
                codeg[y as usize] = 0;
            }
            touched.clear();
        }
        PairAudit {
            n,
            deg,
            special_base,
            special_true,
        }
    }

    /// Number of unordered vertex pairs {x,y} with |N({x,y})| outside
    /// [lo, hi] (inclusive bounds).
    fn pairs_outside(&self, lo: f64, hi: f64) -> u64 {
        let outside = |v: f64| v < lo || v > hi;
        // Degree-sum histogram convolution counts every pair as if
        // |N({x,y})| = deg(x) + deg(y)...
        let maxdeg = *self.deg.iter().max().unwrap_or(&0) as usize;
        let mut hist = vec![0u64; maxdeg + 1];
        for &d in &self.deg {
            hist[d as usize] += 1;
        }
        let mut base_outside = 0u64;
        for a in 0..=maxdeg {
            if hist[a] == 0 {
                continue;
            }
            for b in a..=maxdeg {
                if hist[b] == 0 || !outside((a + b) as f64) {
                    continue;
                }
                base_outside += if a == b {
                    hist[a] * (hist[a] - 1) / 2
                } else {
                    hist[a] * hist[b]
                };
            }
        }
        // ...then corrections swap each special pair's base value for its
        // true one.
        let mut total = base_outside;
        for (v, &count) in self.special_base.iter().enumerate() {
            if count > 0 && outside(v as f64) {
                total -= count;
            }
        }
        for (v, &count) in self.special_true.iter().enumerate() {
            if count > 0 && outside(v as f64) {
                total += count;
            }
        }
        total
    }

    fn pair_count(&self) -> u64 {
        let n = self.n as u64;
        n * (n - 1) / 2
    }
}

/// Draws a uniform random size-k vertex set and returns |N(T)|.
fn sampled_neighborhood_size<R: Rng + ?Sized>(
    g: &Graph,
    size: usize,
    scratch: &mut Vec<u32>,
    rng: &mut R,
) -> usize {
    let n = g.n();
    // partial Fisher-Yates over the scratch identity permutation
    for i in 0..size {
        let j = i + rng.random_range(0..n - i);
        scratch.swap(i, j);
    }
    let t = &scratch[..size];
    let mut in_t = vec![false; n];
    for &v in t {
        in_t[v as usize] = true;
    }
    let mut seen = vec![false; n];
    let mut count = 0usize;
    for &v in t {
        for &u in g.neighbors(v) {
            if !in_t[u as usize] && !seen[u as usize] {
                seen[u as usize] = true;
                count += 1;
            }
        }
    }
    count
}

/// Audits the four pseudorandomness properties of one sample.
pub fn audit_r<R: Rng + ?Sized>(
    g: &Graph,
    q: f64,
    omega0: f64,
    rng: &mut R,
    samples_per_size: usize,
) -> RAuditReport {
    let n = g.n();
    let nf = n as f64;
    let tris = enumerate_triangles(g);

    let bound_i = nf.powi(3) * q.powi(3);
    let prop_i = PropTriangles {
        x3: tris.len(),
        bound: bound_i,
        holds: (tris.len() as f64) <= bound_i,
    };

    // e(N(x)) equals the number of triangles through x.
    let mut tri_at = vec![0usize; n];
    for t in &tris {
        for v in t.0 {
            tri_at[v as usize] += 1;
        }
    }
    let max_e_nx = tri_at.iter().copied().max().unwrap_or(0);
    let max_codeg = max_codegree(g);
    let edge_bound = omega0 * nf.ln();
    let prop_ii = PropLocal {
        max_edges_in_neighborhood: max_e_nx,
        edge_bound,
        edges_hold: (max_e_nx as f64) <= edge_bound,
        max_codegree: max_codeg,
        codegree_bound: omega0,
        codegree_holds: (max_codeg as f64) <= omega0,
    };

    let plan = SamplingPlan::for_regime(n, q, omega0, samples_per_size);
    let pair_audit = PairAudit::build(g);

    let mut prop_iii = Vec::new();
    let mut prop_iv = Vec::new();

    // |T| = 1 exhaustively: |N(T)| is just the degree.
    let lo1 = nf * q / 2.0;
    let hi1 = 3.0 * nf * q / 2.0;
    let size1_applicable = q > 0.0 && 1.0 <= 1.0 / q;
    let viol1 = pair_audit
        .deg
        .iter()
        .filter(|&&d| (d as f64) < lo1 || (d as f64) > hi1)
        .count() as u64;
    prop_iii.push(SizeBucket {
        size: 1,
        checked: if size1_applicable { n as u64 } else { 0 },
        violations: if size1_applicable { viol1 } else { 0 },
        exhaustive: true,
        applicable: size1_applicable,
    });
    // |T| = 1 never satisfies 1 <= q|T| for q < 1.
    prop_iv.push(SizeBucket {
        size: 1,
        checked: 0,
        violations: 0,
        exhaustive: true,
        applicable: q >= 1.0,
    });

    // |T| = 2 exhaustively via the histogram machinery.
    if n >= 2 {
        let applicable = q > 0.0 && 2.0 <= 1.0 / q;
        let (lo2, hi2) = (nf * q, 3.0 * nf * q);
        prop_iii.push(SizeBucket {
            size: 2,
            checked: if applicable { pair_audit.pair_count() } else { 0 },
            violations: if applicable {
                pair_audit.pairs_outside(lo2, hi2)
            } else {
                0
            },
            exhaustive: true,
            applicable,
        });
        let iv_applicable = (1.0..=omega0).contains(&(2.0 * q));
        let lo_iv = (1.0 - (-q).exp()) * nf;
        prop_iv.push(SizeBucket {
            size: 2,
            checked: if iv_applicable { pair_audit.pair_count() } else { 0 },
            violations: if iv_applicable {
                pair_audit.pairs_outside(lo_iv, f64::INFINITY)
            } else {
                0
            },
            exhaustive: true,
            applicable: iv_applicable,
        });
    }

    // Larger sizes by uniform sampling.
    let mut scratch: Vec<u32> = (0..n as u32).collect();
    for &size in &plan.expansion_sizes {
        let lo = nf * q * size as f64 / 2.0;
        let hi = 3.0 * nf * q * size as f64 / 2.0;
        let mut violations = 0u64;
        for _ in 0..plan.samples_per_size {
            let nt = sampled_neighborhood_size(g, size, &mut scratch, rng) as f64;
            if nt < lo || nt > hi {
                violations += 1;
            }
        }
        prop_iii.push(SizeBucket {
            size,
            checked: plan.samples_per_size as u64,
            violations,
            exhaustive: false,
            applicable: true,
        });
    }
    for &size in &plan.spanning_sizes {
        let lo = (1.0 - (-q * size as f64 / 2.0).exp()) * nf;
        let mut violations = 0u64;
        for _ in 0..plan.samples_per_size {
            let nt = sampled_neighborhood_size(g, size, &mut scratch, rng) as f64;
            if nt < lo {
                violations += 1;
            }
        }
        prop_iv.push(SizeBucket {
            size,
            checked: plan.samples_per_size as u64,
            violations,
            exhaustive: false,
            applicable: true,
        });
    }

    RAuditReport {
        n,
        q,
        omega0,
        prop_i,
        prop_ii,
        prop_iii,
        prop_iv,
        sampling_plan: plan,
    }
}

/// Maximum codegree over all vertex pairs, via neighbour-of-neighbour
/// counting (only pairs with a common neighbour can have positive
/// codegree).
fn max_codegree(g: &Graph) -> usize {
    let n = g.n();
    let mut counter = vec![0u32; n];
    let mut touched: Vec<u32> = Vec::new();
    let mut best = 0u32;
    for x in 0..n as u32 {
        for &w in g.neighbors(x) {
            for &y in g.neighbors(w) {
                if y > x {
                    if counter[y as usize] == 0 {
                        touched.push(y);
                    }
                    counter[y as usize] += 1;
                    best = best.max(counter[y as usize]);
                }
            }
        }
        for &y in &touched {
            counter[y as usize] = 0;
        }
        touched.clear();
    }
    best as usize
}

/// Vertices of N(T) contained in a triangle that intersects T.
pub fn lambda1_vertices(g: &Graph, t: &VertexSet) -> Result<VertexSet> {
    lambda_split(g, t).map(|(l1, _)| l1)
}

/// Vertices of N(T) contained in a triangle that avoids T.
pub fn lambda2_vertices(g: &Graph, t: &VertexSet) -> Result<VertexSet> {
    lambda_split(g, t).map(|(_, l2)| l2)
}

fn lambda_split(g: &Graph, t: &VertexSet) -> Result<(VertexSet, VertexSet)> {
    let n = g.n();
    for v in t.iter() {
        if v as usize >= n {
            return Err(Error::invalid(format!("vertex {v} out of range for n = {n}")));
        }
    }
    let nt = crate::graph::neighborhood(g, t)?;
    let mut in_nt = vec![false; n];
    for v in nt.iter() {
        in_nt[v as usize] = true;
    }
    let mut in_l1 = vec![false; n];
    let mut in_l2 = vec![false; n];
    for tri in enumerate_triangles(g) {
        let hits_t = tri.0.iter().any(|&v| t.contains(v));
        let target = if hits_t { &mut in_l1 } else { &mut in_l2 };
        for v in tri.0 {
            if in_nt[v as usize] {
                target[v as usize] = true;
            }
        }
    }
    let l1 = (0..n as u32).filter(|&v| in_l1[v as usize]).collect();
    let l2 = (0..n as u32).filter(|&v| in_l2[v as usize]).collect();
    Ok((l1, l2))
}

/// |Z(T,A)|: triangles with a vertex in A and no vertex in T, each counted
/// once.
pub fn count_z_triangles(g: &Graph, t: &VertexSet, a: &VertexSet) -> Result<usize> {
    if t.iter().any(|v| a.contains(v)) {
        return Err(Error::invalid("Z(T,A) needs disjoint T and A"));
    }
    let count = enumerate_triangles(g)
        .iter()
        .filter(|tri| {
            tri.0.iter().any(|&v| a.contains(v)) && tri.0.iter().all(|&v| !t.contains(v))
        })
        .count();
    Ok(count)
}

#[derive(Debug, Clone, Serialize)]
pub struct DAuditReport {
    pub n: usize,
    pub delta: f64,
    pub s_size: usize,
    pub buckets: Vec<SizeBucket>,
    pub sampling_plan: SamplingPlan,
}

/// Audits the event "more than a delta fraction of N(T) lies in S" by
/// |T|-size bucket: exhaustively for |T| <= 2, sampled on the plan's grid
/// beyond.
pub fn audit_d<R: Rng + ?Sized>(
    g: &Graph,
    s: &VertexSet,
    delta: f64,
    rng: &mut R,
    plan: &SamplingPlan,
) -> DAuditReport {
    let n = g.n();
    let in_s: Vec<bool> = {
        let mut mask = vec![false; n];
        for v in s.iter() {
            mask[v as usize] = true;
        }
        mask
    };
    let deg: Vec<u32> = (0..n as u32).map(|v| g.degree(v) as u32).collect();
    let sdeg: Vec<u32> = (0..n as u32)
        .map(|v| {
            g.neighbors(v)
                .iter()
                .filter(|&&u| in_s[u as usize])
                .count() as u32
        })
        .collect();

    let mut buckets = Vec::new();

    // |T| = 1: N(T) = N(x).
    let viol1 = (0..n)
        .filter(|&x| sdeg[x] as f64 > delta * deg[x] as f64)
        .count() as u64;
    buckets.push(SizeBucket {
        size: 1,
        checked: n as u64,
        violations: viol1,
        exhaustive: true,
        applicable: true,
    });

    // |T| = 2: joint (degree, S-degree) histogram for pairs sharing nothing,
    // direct corrections for pairs sharing an edge or a common neighbour.
    if n >= 2 {
        buckets.push(exhaustive_pairs_d(g, &in_s, &deg, &sdeg, delta));
    }

    // Sampled larger sizes on the expansion grid.
    let mut scratch: Vec<u32> = (0..n as u32).collect();
    for &size in &plan.expansion_sizes {
        if size <= 2 || size > n {
            continue;
        }
        let mut violations = 0u64;
        for _ in 0..plan.samples_per_size {
            for i in 0..size {
                let j = i + rng.random_range(0..n - i);
                scratch.swap(i, j);
            }
            let t = &scratch[..size];
            let mut in_t = vec![false; n];
            for &v in t {
                in_t[v as usize] = true;
            }
            let mut seen = vec![false; n];
            let (mut nt, mut nts) = (0u64, 0u64);
            for &v in t {
                for &u in g.neighbors(v) {
                    if !in_t[u as usize] && !seen[u as usize] {
                        seen[u as usize] = true;
                        nt += 1;
                        nts += in_s[u as usize] as u64;
                    }
                }
            }
            if nts as f64 > delta * nt as f64 {
                violations += 1;
            }
        }
        buckets.push(SizeBucket {
            size,
            checked: plan.samples_per_size as u64,
            violations,
            exhaustive: false,
            applicable: true,
        });
    }

    DAuditReport {
        n,
        delta,
        s_size: s.len(),
        buckets,
        sampling_plan: plan.clone(),
    }
}

fn exhaustive_pairs_d(
    g: &Graph,
    in_s: &[bool],
    deg: &[u32],
    sdeg: &[u32],
    delta: f64,
) -> SizeBucket {
    let n = g.n();
    let violates = |nt: i64, nts: i64| nts as f64 > delta * nt as f64;

    // Joint histogram cells.
    let mut cells: std::collections::BTreeMap<(u32, u32), u64> = std::collections::BTreeMap::new();
    for x in 0..n {
        *cells.entry((deg[x], sdeg[x])).or_insert(0) += 1;
    }
    let cells: Vec<((u32, u32), u64)> = cells.into_iter().collect();
    let mut violations = 0u64;
    for (i, &((d1, s1), c1)) in cells.iter().enumerate() {
        if violates((d1 + d1) as i64, (s1 + s1) as i64) {
            violations += c1 * (c1 - 1) / 2;
        }
        for &((d2, s2), c2) in &cells[i + 1..] {
            if violates((d1 + d2) as i64, (s1 + s2) as i64) {
                violations += c1 * c2;
            }
        }
    }

    // Corrections for special pairs.
    let mut codeg = vec![0u32; n];
    let mut codeg_s = vec![0u32; n];
    let mut touched: Vec<u32> = Vec::new();
    for x in 0..n as u32 {
        for &w in g.neighbors(x) {
            let w_in_s = in_s[w as usize] as u32;
            for &y in g.neighbors(w) {
                if y > x {
                    if codeg[y as usize] == 0 {
                        touched.push(y);
                    }
                    codeg[y as usize] += 1;
                    codeg_s[y as usize] += w_in_s;
                }
            }
        }
        let handle = |y: u32,
                      codeg_xy: u32,
                      codeg_s_xy: u32,
                      violations: &mut u64| {
            let edge = g.has_edge(x, y) as i64;
            let base_nt = (deg[x as usize] + deg[y as usize]) as i64;
            let base_ns = (sdeg[x as usize] + sdeg[y as usize]) as i64;
            let true_nt = base_nt - codeg_xy as i64 - 2 * edge;
            let true_ns = base_ns
                - codeg_s_xy as i64
                - edge * (in_s[x as usize] as i64 + in_s[y as usize] as i64);
            if violates(base_nt, base_ns) {
                *violations -= 1;
            }
            if violates(true_nt, true_ns) {
                *violations += 1;
            }
        };
        for &y in &touched {
            handle(y, codeg[y as usize], codeg_s[y as usize], &mut violations);
        }
        for &y in g.neighbors(x) {
            if y > x && codeg[y as usize] == 0 {
                handle(y, 0, 0, &mut violations);
            }
        }
        for &y in &touched {
            codeg[y as usize] = 0;
            codeg_s[y as usize] = 0;
        }
        touched.clear();
    }

    SizeBucket {
        size: 2,
        checked: (n as u64) * (n as u64 - 1) / 2,
        violations,
        exhaustive: true,
        applicable: true,
    }
}

/// The deletion-method tail: exp(-rt / (k (2 E[X] + t))).
pub fn deletion_bound(r: f64, t: f64, k: f64, ex: f64) -> Result<f64> {
    if r <= 0.0 || t <= 0.0 || k <= 0.0 || ex <= 0.0 {
        return Err(Error::invalid("deletion bound needs positive arguments"));
    }
    Ok((-(r * t) / (k * (2.0 * ex + t))).exp())
}

/// The upper-tail bound for triangle counts: exp(-c n^2 q^2), with the
/// caller supplying the (abstract) constant c.
pub fn kimvu_bound(n: usize, q: f64, c: f64) -> f64 {
    (-c * (n as f64).powi(2) * q.powi(2)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::sample_gnq;
    use crate::rng::RandomSource;

    fn bowtie() -> Graph {
        Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]).unwrap()
    }

    #[test]
    fn omega0_examples() {
        let c = choose_omega0(50_000, 4.5e-4).unwrap();
        assert!(!c.regime_warning);
        assert!((c.value - 1.2766).abs() < 5e-4, "value {}", c.value);

        // boundary n^2 q^3 = 1 by construction
        let n = 1000usize;
        let q = (1.0 / (n as f64 * n as f64)).cbrt();
        let c = choose_omega0(n, q).unwrap();
        assert!(c.regime_warning);
        let first = (n as f64 * q / (n as f64).ln()).cbrt();
        assert!((c.value - first.max(1.0)).abs() < 1e-12);

        // tiny first term floors at 1
        let c = choose_omega0(3, 1e-6).unwrap();
        assert_eq!(c.value, 1.0);

        assert!(choose_omega0(2, 0.5).is_err());
        assert!(choose_omega0(10, 0.0).is_err());
    }

    #[test]
    fn audit_r_prop_i_examples() {
        let mut rng = RandomSource::new(4, 0).rng();
        // triangle-free graph: x3 = 0 always holds
        let p = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let rep = audit_r(&p, 0.3, 1.0, &mut rng, 10);
        assert_eq!(rep.prop_i.x3, 0);
        assert!(rep.prop_i.holds);

        // K4 with n^3 q^3 < 4
        let rep = audit_r(&Graph::complete(4), 0.2, 1.0, &mut rng, 10);
        assert_eq!(rep.prop_i.x3, 4);
        assert!(!rep.prop_i.holds);
    }

    #[test]
    fn audit_r_star_degree_bucket() {
        // star K_{1,6} at q = 0.25, n = 7: bounds are [0.875, 2.625], so the
        // centre (degree 6) violates and the six leaves (degree 1) hold.
        let star = Graph::from_edges(7, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6)]).unwrap();
        let mut rng = RandomSource::new(4, 1).rng();
        let rep = audit_r(&star, 0.25, 1.0, &mut rng, 10);
        let bucket1 = &rep.prop_iii[0];
        assert_eq!(bucket1.size, 1);
        assert!(bucket1.applicable);
        assert_eq!(bucket1.violations, 1);
    }

    #[test]
    fn exhaustive_pair_bucket_matches_direct_enumeration() {
        for t in 0..20 {
            let n = 14;
            let q = 0.25;
            let g = sample_gnq(n, q, &mut RandomSource::new(600, t).rng()).unwrap();
            let audit = PairAudit::build(&g);
            let (lo, hi) = (n as f64 * q, 3.0 * n as f64 * q);
            let mut direct = 0u64;
            for x in 0..n as u32 {
                for y in (x + 1)..n as u32 {
                    let t_set = VertexSet::from_unsorted(vec![x, y]);
                    let nt = crate::graph::neighborhood(&g, &t_set).unwrap().len() as f64;
                    if nt < lo || nt > hi {
                        direct += 1;
                    }
                }
            }
            assert_eq!(audit.pairs_outside(lo, hi), direct, "trial {t}");
        }
    }

    #[test]
    fn lambda_examples() {
        let g = bowtie();
        let t = VertexSet::from_unsorted(vec![1]);
        assert_eq!(lambda1_vertices(&g, &t).unwrap().members(), &[0, 2]);
        assert_eq!(lambda2_vertices(&g, &t).unwrap().members(), &[0]);

        // single triangle, t = {a}
        let tri = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let t = VertexSet::from_unsorted(vec![0]);
        assert_eq!(lambda1_vertices(&tri, &t).unwrap().members(), &[1, 2]);
        assert!(lambda2_vertices(&tri, &t).unwrap().is_empty());

        // triangle-free graph: both empty
        let p = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let t = VertexSet::from_unsorted(vec![1]);
        assert!(lambda1_vertices(&p, &t).unwrap().is_empty());
        assert!(lambda2_vertices(&p, &t).unwrap().is_empty());

        // two disjoint triangles, t = one full triangle: N(T) misses the
        // other triangle entirely
        let two =
            Graph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]).unwrap();
        let t = VertexSet::from_unsorted(vec![0, 1, 2]);
        assert!(lambda2_vertices(&two, &t).unwrap().is_empty());
    }

    #[test]
    fn z_count_examples() {
        let g = bowtie();
        let t = VertexSet::from_unsorted(vec![1]);
        let a = VertexSet::from_unsorted(vec![0]);
        assert_eq!(count_z_triangles(&g, &t, &a).unwrap(), 1);

        let p = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(
            count_z_triangles(&p, &VertexSet::from_unsorted(vec![0]), &VertexSet::from_unsorted(vec![2]))
                .unwrap(),
            0
        );

        let tri = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(
            count_z_triangles(&tri, &VertexSet::new(), &VertexSet::from_unsorted(vec![1])).unwrap(),
            1
        );

        assert!(count_z_triangles(
            &g,
            &VertexSet::from_unsorted(vec![0]),
            &VertexSet::from_unsorted(vec![0])
        )
        .is_err());
    }

    #[test]
    fn d_audit_examples() {
        let plan = SamplingPlan::for_regime(5, 0.3, 1.0, 5);
        let mut rng = RandomSource::new(8, 0).rng();
        // S empty: all rates zero
        let rep = audit_d(&bowtie(), &VertexSet::new(), 0.1, &mut rng, &plan);
        assert!(rep.buckets.iter().all(|b| b.violations == 0));

        // triangle with pendant vertex: S = {0,1,2}, T = {3} has N(T) = {0}
        // fully inside S
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (0, 3)]).unwrap();
        let s = VertexSet::from_unsorted(vec![0, 1, 2]);
        let mut rng = RandomSource::new(8, 1).rng();
        let rep = audit_d(&g, &s, 0.1, &mut rng, &plan);
        assert!(rep.buckets[0].violations >= 1);

        // delta = 1: the event can never hold
        let mut rng = RandomSource::new(8, 2).rng();
        let rep = audit_d(&g, &s, 1.0, &mut rng, &plan);
        assert!(rep.buckets.iter().all(|b| b.violations == 0));
    }

    #[test]
    fn d_audit_pairs_match_direct_enumeration() {
        for t in 0..20 {
            let n = 13;
            let g = sample_gnq(n, 0.3, &mut RandomSource::new(601, t).rng()).unwrap();
            let s_verts: Vec<u32> = (0..n as u32).filter(|v| v % 3 == 0).collect();
            let s = VertexSet::from_unsorted(s_verts);
            let delta = 0.4;
            let plan = SamplingPlan::for_regime(n, 0.3, 1.0, 0);
            let mut rng = RandomSource::new(602, t).rng();
            let rep = audit_d(&g, &s, delta, &mut rng, &plan);
            let bucket2 = rep.buckets.iter().find(|b| b.size == 2).unwrap();
            let mut direct = 0u64;
            for x in 0..n as u32 {
                for y in (x + 1)..n as u32 {
                    let t_set = VertexSet::from_unsorted(vec![x, y]);
                    let nt = crate::graph::neighborhood(&g, &t_set).unwrap();
                    let nts = nt.iter().filter(|&v| s.contains(v)).count();
                    if nts as f64 > delta * nt.len() as f64 {
                        direct += 1;
                    }
                }
            }
            assert_eq!(bucket2.violations, direct, "trial {t}");
        }
    }

    #[test]
    fn deletion_bound_examples() {
        let v = deletion_bound(8.0, 4.0, 3.0, 1.0).unwrap();
        assert!((v - (-32.0f64 / 18.0).exp()).abs() < 1e-15);
        assert!((v - 0.16901).abs() < 1e-5);

        // t -> 0+ drives the bound to 1
        let v = deletion_bound(8.0, 1e-12, 3.0, 1.0).unwrap();
        assert!((v - 1.0).abs() < 1e-9);

        // rt = k(2 ex + t) gives e^-1
        let v = deletion_bound(6.0, 2.0, 3.0, 1.0).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);

        assert!(deletion_bound(0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn kimvu_examples() {
        // c n^2 q^2 = 1
        let v = kimvu_bound(100, 0.1, 0.01);
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(kimvu_bound(100, 0.0, 0.5), 1.0);
    }
}
