//! Vertex-exposure martingale instrumentation for s(G).
//!
//! X_i is the conditional expectation of s(G) given the subgraph induced by
//! the first i vertices. At tiny scale the conditional expectations are
//! computed exactly by enumerating every completion; at desk scale they are
//! estimated by Monte Carlo, and the quadratic-variation estimator debiases
//! squared increment estimates by the two estimators' own variances.

use crate::error::{Error, Result};
use crate::graph::{sample_gnq, Graph};
use crate::triangles::max_triangle_matching;
use rand::Rng;
use serde::Serialize;

/// Number of unexposed edge slots the exact enumerator will tolerate
/// (2^25 completions is the seconds-scale ceiling).
pub const EXACT_SLOT_CAP: usize = 25;

/// The first i vertices of an exposure path, as the graph they induce.
#[derive(Debug, Clone)]
pub struct ExposurePrefix {
    graph: Graph,
}

impl ExposurePrefix {
    pub fn new(graph: Graph) -> Self {
        ExposurePrefix { graph }
    }

    /// The prefix of `g` after exposing the first `i` vertices in natural
    /// order.
    pub fn of(g: &Graph, i: usize) -> Self {
        let edges: Vec<(u32, u32)> = g
            .edges()
            .into_iter()
            .filter(|&(_, v)| (v as usize) < i)
            .collect();
        ExposurePrefix {
            graph: Graph::from_edges(i, &edges).expect("prefix edges valid"),
        }
    }

    pub fn exposed(&self) -> usize {
        self.graph.n()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrefixClass {
    /// All backward degrees <= 3qn and the last vertex closes a triangle.
    TriangleStep,
    /// All backward degrees <= 3qn, last vertex in no triangle.
    Regular,
    /// Some backward degree exceeds 3qn.
    Outside,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PrefixClassification {
    pub in_n: bool,
    pub in_n_star: bool,
}

/// Classifies a prefix: `in_n` iff every exposed vertex has backward degree
/// at most 3qn (n = host size); `in_n_star` additionally requires the last
/// exposed vertex to lie in a triangle of the prefix.
pub fn classify_prefix(prefix: &ExposurePrefix, n: usize, q: f64) -> PrefixClassification {
    let g = prefix.graph();
    let bound = 3.0 * q * n as f64;
    let in_n = (0..g.n() as u32).all(|v| {
        let backward = g.neighbors(v).iter().filter(|&&u| u < v).count();
        backward as f64 <= bound
    });
    let in_n_star = in_n && last_vertex_in_triangle(g);
    PrefixClassification { in_n, in_n_star }
}

fn last_vertex_in_triangle(g: &Graph) -> bool {
    if g.n() == 0 {
        return false;
    }
    let v = (g.n() - 1) as u32;
    let neigh = g.neighbors(v);
    for (i, &a) in neigh.iter().enumerate() {
        for &b in &neigh[i + 1..] {
            if g.has_edge(a, b) {
                return true;
            }
        }
    }
    false
}

pub fn class_of(c: PrefixClassification) -> PrefixClass {
    match (c.in_n, c.in_n_star) {
        (true, true) => PrefixClass::TriangleStep,
        (true, false) => PrefixClass::Regular,
        (false, _) => PrefixClass::Outside,
    }
}

/// Unexposed edge slots of a prefix inside a host of size n, in
/// lexicographic order: every pair with at least one endpoint >= i.
fn unexposed_slots(i: usize, n: usize) -> Vec<(u32, u32)> {
    let mut slots = Vec::new();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            if v as usize >= i {
                slots.push((u, v));
            }
        }
    }
    slots
}

/// Maximum triangle-matching size of a bitmask graph, by include/exclude
/// branch and bound over its triangle list.
pub(crate) fn s_bitmask(adj: &[u32]) -> u32 {
    let n = adj.len();
    let mut tris: Vec<u32> = Vec::new();
    for a in 0..n {
        let mut bs = adj[a] & !((1u32 << (a + 1)) - 1);
        while bs != 0 {
            let b = bs.trailing_zeros() as usize;
            bs &= bs - 1;
            let mut cs = adj[a] & adj[b] & !((1u32 << (b + 1)) - 1);
            while cs != 0 {
                let c = cs.trailing_zeros() as usize;
                cs &= cs - 1;
                tris.push((1 << a) | (1 << b) | (1 << c));
            }
        }
    }
    fn go(tris: &[u32], idx: usize, used: u32, chosen: u32, best: &mut u32) {
        if chosen + (tris.len() - idx) as u32 <= *best {
            return;
        }
        if idx == tris.len() {
            *best = (*best).max(chosen);
            return;
        }
        if tris[idx] & used == 0 {
            go(tris, idx + 1, used | tris[idx], chosen + 1, best);
        }
        go(tris, idx + 1, used, chosen, best);
    }
    let mut best = 0;
    go(&tris, 0, 0, 0, &mut best);
    best
}

fn s_bitmask_excluding(adj: &[u32], excluded: u32) -> u32 {
    let masked: Vec<u32> = adj
        .iter()
        .enumerate()
        .map(|(v, &row)| {
            if excluded & (1 << v) != 0 {
                0
            } else {
                row & !excluded
            }
        })
        .collect();
    s_bitmask(&masked)
}

/// Exact X_i = E[s(G) | G_i] by enumerating all completions over the
/// unexposed slots, walking them in Gray-code order so each step flips one
/// edge.
pub fn exact_x(prefix: &ExposurePrefix, n: usize, q: f64) -> Result<f64> {
    let i = prefix.exposed();
    if i > n {
        return Err(Error::invalid(format!("prefix has {i} vertices, host only {n}")));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::invalid(format!("q = {q} not in [0, 1]")));
    }
    let slots = unexposed_slots(i, n);
    let m = slots.len();
    if m > EXACT_SLOT_CAP {
        return Err(Error::invalid(format!(
            "{m} unexposed edge slots exceed the exact cap of {EXACT_SLOT_CAP}"
        )));
    }
    debug_assert!(n <= 32 || m == 0);
    if m == 0 {
        // fully exposed
        return Ok(max_triangle_matching(prefix.graph())
            .expect("tiny instance within budget")
            .size() as f64);
    }

    let mut adj = vec![0u32; n];
    for (u, v) in prefix.graph().edges() {
        adj[u as usize] |= 1 << v;
        adj[v as usize] |= 1 << u;
    }

    // weight[k] = q^k (1-q)^(m-k)
    let mut weight = vec![0.0f64; m + 1];
    for (k, w) in weight.iter_mut().enumerate() {
        *w = q.powi(k as i32) * (1.0 - q).powi((m - k) as i32);
    }

    let mut total = s_bitmask(&adj) as f64 * weight[0];
    let mut prev_gray = 0u32;
    let mut bits = 0usize;
    for step in 1u32..(1u32 << m) {
        let gray = step ^ (step >> 1);
        let flipped = (gray ^ prev_gray).trailing_zeros() as usize;
        let (u, v) = slots[flipped];
        if gray & (1 << flipped) != 0 {
            adj[u as usize] |= 1 << v;
            adj[v as usize] |= 1 << u;
            bits += 1;
        } else {
            adj[u as usize] &= !(1 << v);
            adj[v as usize] &= !(1 << u);
            bits -= 1;
        }
        prev_gray = gray;
        total += s_bitmask(&adj) as f64 * weight[bits];
    }
    Ok(total)
}

#[derive(Debug, Clone, Serialize)]
pub struct MartingaleEstimate {
    pub value: f64,
    pub std_error: f64,
    pub inner_samples: usize,
}

/// Unbiased Monte Carlo estimate of X_i: the sample mean of s over random
/// completions of the prefix.
pub fn estimate_x<R: Rng + ?Sized>(
    prefix: &ExposurePrefix,
    n: usize,
    q: f64,
    inner_samples: usize,
    rng: &mut R,
) -> MartingaleEstimate {
    let i = prefix.exposed();
    let slots = unexposed_slots(i, n);
    let use_bitmask = n <= 32;
    let base_edges = prefix.graph().edges();
    let mut base_adj = vec![0u32; n];
    if use_bitmask {
        for &(u, v) in &base_edges {
            base_adj[u as usize] |= 1 << v;
            base_adj[v as usize] |= 1 << u;
        }
    }

    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..inner_samples.max(1) {
        let s = if use_bitmask {
            let mut adj = base_adj.clone();
            for &(u, v) in &slots {
                if rng.random::<f64>() < q {
                    adj[u as usize] |= 1 << v;
                    adj[v as usize] |= 1 << u;
                }
            }
            s_bitmask(&adj) as f64
        } else {
            let mut edges = base_edges.clone();
            for &(u, v) in &slots {
                if rng.random::<f64>() < q {
                    edges.push((u, v));
                }
            }
            let g = Graph::from_edges(n, &edges).expect("completion edges valid");
            max_triangle_matching(&g).expect("martingale-scale instance within budget").size()
                as f64
        };
        sum += s;
        sum_sq += s * s;
    }
    let k = inner_samples.max(1) as f64;
    let mean = sum / k;
    let var = if inner_samples > 1 {
        ((sum_sq - sum * sum / k) / (k - 1.0)).max(0.0)
    } else {
        0.0
    };
    MartingaleEstimate {
        value: mean,
        std_error: (var / k).sqrt(),
        inner_samples: inner_samples.max(1),
    }
}

/// One record of the martingale experiment output.
#[derive(Debug, Clone, Serialize)]
pub struct IncrementRecord {
    pub i: usize,
    pub increment_estimate: f64,
    pub std_error: f64,
    pub class: PrefixClass,
}

/// Estimated increments X_i - X_{i-1} along one sampled exposure path.
pub fn estimate_increments<R: Rng + ?Sized>(
    n: usize,
    q: f64,
    inner_samples: usize,
    rng: &mut R,
) -> Result<Vec<IncrementRecord>> {
    let g = sample_gnq(n, q, rng)?;
    let mut records = Vec::with_capacity(n);
    let mut prev = estimate_x(&ExposurePrefix::of(&g, 0), n, q, inner_samples, rng);
    for i in 1..=n {
        let prefix = ExposurePrefix::of(&g, i);
        let cur = if i == n {
            MartingaleEstimate {
                value: max_triangle_matching(&g)?.size() as f64,
                std_error: 0.0,
                inner_samples: 0,
            }
        } else {
            estimate_x(&prefix, n, q, inner_samples, rng)
        };
        let class = class_of(classify_prefix(&prefix, n, q));
        records.push(IncrementRecord {
            i,
            increment_estimate: cur.value - prev.value,
            std_error: (cur.std_error.powi(2) + prev.std_error.powi(2)).sqrt(),
            class,
        });
        prev = cur;
    }
    Ok(records)
}

/// Plug-in estimate of the predictable quadratic variation along one
/// sampled exposure path: sum over i of (X^_i - X^_{i-1})^2 minus the two
/// estimator variances (the squared difference of independent estimators
/// inflates by exactly those variances).
pub fn estimate_qv_path<R: Rng + ?Sized>(
    n: usize,
    q: f64,
    inner_samples: usize,
    rng: &mut R,
) -> Result<f64> {
    let g = sample_gnq(n, q, rng)?;
    let mut total = 0.0;
    let mut prev = estimate_x(&ExposurePrefix::of(&g, 0), n, q, inner_samples, rng);
    for i in 1..=n {
        let cur = if i == n {
            MartingaleEstimate {
                value: max_triangle_matching(&g)?.size() as f64,
                std_error: 0.0,
                inner_samples: 0,
            }
        } else {
            estimate_x(&ExposurePrefix::of(&g, i), n, q, inner_samples, rng)
        };
        let diff = cur.value - prev.value;
        total += diff * diff - cur.std_error.powi(2) - prev.std_error.powi(2);
        prev = cur;
    }
    Ok(total)
}

/// Mean of the per-path quadratic-variation estimates over several paths.
pub fn estimate_quadratic_variation<R: Rng + ?Sized>(
    n: usize,
    q: f64,
    outer_trials: usize,
    inner_samples: usize,
    rng: &mut R,
) -> Result<f64> {
    let mut total = 0.0;
    for _ in 0..outer_trials.max(1) {
        total += estimate_qv_path(n, q, inner_samples, rng)?;
    }
    Ok(total / outer_trials.max(1) as f64)
}

/// Exact (X_{n-1}, X_n) for the last exposure step of `g`, by enumerating
/// all 2^(n-1) backward neighbourhoods of the final vertex.
///
/// s can only exceed the value of the graph with the final vertex isolated
/// when some exposed edge (a, b) joins two sampled neighbours and removing
/// {a, b} keeps a maximum matching elsewhere, so each neighbourhood costs a
/// scan over precomputed "keep" edges.
pub fn exact_last_step(g: &Graph, q: f64) -> Result<(f64, f64)> {
    let n = g.n();
    if n == 0 || n > 25 {
        return Err(Error::invalid("last-step enumeration needs 1 <= n <= 25"));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::invalid(format!("q = {q} not in [0, 1]")));
    }
    let v = (n - 1) as u32;
    let mut adj = vec![0u32; n];
    for (a, b) in g.edges() {
        adj[a as usize] |= 1 << b;
        adj[b as usize] |= 1 << a;
    }
    let x_n = s_bitmask(&adj) as f64;

    // isolate the final vertex
    let mut hat = adj.clone();
    for u in 0..n {
        hat[u] &= !(1 << v);
    }
    hat[v as usize] = 0;
    let s_hat = s_bitmask(&hat);

    // edges whose removal keeps the matching value: sampled neighbourhoods
    // covering one of these gain exactly +1
    let mut keep_edges: Vec<u32> = Vec::new();
    for a in 0..(n - 1) {
        let mut bs = hat[a] & !((1u32 << (a + 1)) - 1);
        while bs != 0 {
            let b = bs.trailing_zeros() as usize;
            bs &= bs - 1;
            if s_bitmask_excluding(&hat, (1 << a) | (1 << b)) == s_hat {
                keep_edges.push((1 << a) | (1 << b));
            }
        }
    }

    let m = n - 1;
    let mut gain_prob = 0.0f64;
    let mut weight = vec![0.0f64; m + 1];
    for (k, w) in weight.iter_mut().enumerate() {
        *w = q.powi(k as i32) * (1.0 - q).powi((m - k) as i32);
    }
    for mask in 0u32..(1u32 << m) {
        if keep_edges.iter().any(|&em| em & mask == em) {
            gain_prob += weight[mask.count_ones() as usize];
        }
    }
    Ok((s_hat as f64 + gain_prob, x_n))
}

/// Freedman's tail: exp(-t^2 / (2 sigma^2 + r t)).
pub fn freedman_bound(t: f64, sigma2: f64, r: f64) -> Result<f64> {
    if t <= 0.0 || sigma2 <= 0.0 || r <= 0.0 {
        return Err(Error::invalid("freedman bound needs positive arguments"));
    }
    Ok((-t * t / (2.0 * sigma2 + r * t)).exp())
}
