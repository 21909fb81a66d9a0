//! Graph representation and G(n,q) sampling.
//!
//! Graphs are undirected and simple, with vertices `0..n` and adjacency
//! stored as sorted arrays of `u32` indices — cache-friendly for the
//! sorted-intersection work the triangle code does. A `Graph` is immutable
//! after construction and safe to share across worker threads.

use crate::error::{Error, Result};
use rand::Rng;
use std::fmt::Write as _;

/// A sorted set of vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexSet {
    members: Vec<u32>,
}

impl VertexSet {
    pub fn new() -> Self {
        VertexSet { members: Vec::new() }
    }

    /// Builds a set from arbitrary input, sorting and deduplicating.
    pub fn from_unsorted(mut members: Vec<u32>) -> Self {
        members.sort_unstable();
        members.dedup();
        VertexSet { members }
    }

    /// Builds a set from input that is already sorted and duplicate-free.
    pub fn from_sorted(members: Vec<u32>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        VertexSet { members }
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.members.iter().copied()
    }
}

impl FromIterator<u32> for VertexSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        VertexSet::from_unsorted(iter.into_iter().collect())
    }
}

/// An undirected simple graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<u32>>,
    edge_count: usize,
}

impl Graph {
    /// The empty graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list. Self-loops are rejected, duplicate
    /// edges collapse to one.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        let mut edge_count = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Graph {
            n,
            adj,
            edge_count: edge_count / 2,
        })
    }

    /// The complete graph K_n.
    pub fn complete(n: usize) -> Self {
        let mut adj = Vec::with_capacity(n);
        for v in 0..n as u32 {
            adj.push((0..n as u32).filter(|&u| u != v).collect());
        }
        Graph {
            n,
            adj,
            edge_count: n * n.saturating_sub(1) / 2,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        let (a, b) = if self.adj[u as usize].len() <= self.adj[v as usize].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a as usize].binary_search(&b).is_ok()
    }

    /// Edges as `(u, v)` pairs with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.n as u32 {
            for &v in &self.adj[u as usize] {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// A copy of this graph with the given edges inserted.
    pub fn with_edges_added(&self, extra: &[(u32, u32)]) -> Result<Self> {
        let mut g = self.clone();
        for &(u, v) in extra {
            if u as usize >= g.n || v as usize >= g.n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) out of range for n = {}",
                    g.n
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            if !g.has_edge(u, v) {
                let pos_u = g.adj[u as usize].binary_search(&v).unwrap_err();
                g.adj[u as usize].insert(pos_u, v);
                let pos_v = g.adj[v as usize].binary_search(&u).unwrap_err();
                g.adj[v as usize].insert(pos_v, u);
                g.edge_count += 1;
            }
        }
        Ok(g)
    }

    /// Serializes as edge-list text: header `n m`, then one `u v` line per
    /// edge in lexicographic order. Round-trips bit-exactly via [`Graph::parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.edge_count);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::invalid("empty edge-list input"))?;
        let mut parts = header.split_whitespace();
        let n: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::invalid("bad header: expected `n m`"))?;
        let m: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::invalid("bad header: expected `n m`"))?;
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let u: u32 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::invalid(format!("bad edge line: {line}")))?;
            let v: u32 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::invalid(format!("bad edge line: {line}")))?;
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::invalid(format!(
                "header promised {m} edges, found {}",
                edges.len()
            )));
        }
        Graph::from_edges(n, &edges)
    }
}

/// Samples G(n,q): each of the C(n,2) vertex pairs is an edge independently
/// with probability `q`.
///
/// For q <= 0.1 the sampler walks the lexicographic pair order with
/// geometric skips, so the work is O(q n^2) expected rather than O(n^2).
pub fn sample_gnq<R: Rng + ?Sized>(n: usize, q: f64, rng: &mut R) -> Result<Graph> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::invalid(format!("edge probability q = {q} not in [0, 1]")));
    }
    if n == 0 {
        return Ok(Graph::empty(0));
    }
    if q == 0.0 {
        return Ok(Graph::empty(n));
    }
    if q == 1.0 {
        return Ok(Graph::complete(n));
    }
    let edges = if q <= 0.1 {
        sample_pairs_geometric(n, q, rng)
    } else {
        sample_pairs_bernoulli(n, q, rng)
    };
    Graph::from_edges(n, &edges)
}

fn sample_pairs_bernoulli<R: Rng + ?Sized>(n: usize, q: f64, rng: &mut R) -> Vec<(u32, u32)> {
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            if rng.random::<f64>() < q {
                edges.push((u, v));
            }
        }
    }
    edges
}

fn sample_pairs_geometric<R: Rng + ?Sized>(n: usize, q: f64, rng: &mut R) -> Vec<(u32, u32)> {
    let total = n as u64 * (n as u64 - 1) / 2;
    let log_1mq = (-q).ln_1p();
    let mut edges = Vec::new();
    let mut cursor: u64 = 0;
    loop {
        // Geometric skip: failures before the next success.
        let u: f64 = rng.random();
        let skip = ((1.0 - u).ln() / log_1mq).floor();
        if !skip.is_finite() || cursor as f64 + skip >= total as f64 {
            break;
        }
        cursor += skip as u64;
        if cursor >= total {
            break;
        }
        edges.push(pair_from_index(n as u64, cursor));
        cursor += 1;
    }
    edges
}

/// Decodes the k-th pair (0-based) in the lexicographic order of pairs
/// (u, v) with u < v on n vertices.
fn pair_from_index(n: u64, k: u64) -> (u32, u32) {
    // Solve for the block: pairs with first coordinate < u occupy
    // offset(u) = u*n - u*(u+1)/2 positions.
    let nf = n as f64;
    let mut u = (nf - 0.5 - ((nf - 0.5) * (nf - 0.5) - 2.0 * k as f64).max(0.0).sqrt()).floor();
    if u < 0.0 {
        u = 0.0;
    }
    let mut u = u as u64;
    // Float guess can be off by one near block boundaries.
    while offset(n, u + 1) <= k {
        u += 1;
    }
    while offset(n, u) > k {
        u -= 1;
    }
    let v = u + 1 + (k - offset(n, u));
    (u as u32, v as u32)
}

fn offset(n: u64, u: u64) -> u64 {
    u * n - u * (u + 1) / 2
}

/// Complement: uv is an edge of the output iff uv is a non-edge of the
/// input (u != v).
pub fn complement(g: &Graph) -> Graph {
    let n = g.n();
    let mut adj = Vec::with_capacity(n);
    let mut edge_count = 0;
    for v in 0..n as u32 {
        let neigh = g.neighbors(v);
        let mut row = Vec::with_capacity(n - 1 - neigh.len());
        let mut it = neigh.iter().copied().peekable();
        for u in 0..n as u32 {
            if u == v {
                continue;
            }
            while let Some(&w) = it.peek() {
                if w < u {
                    it.next();
                } else {
                    break;
                }
            }
            if it.peek() == Some(&u) {
                it.next();
            } else {
                row.push(u);
            }
        }
        edge_count += row.len();
        adj.push(row);
    }
    Graph {
        n,
        adj,
        edge_count: edge_count / 2,
    }
}

/// N_g(T): vertices outside `t` with a neighbour in `t`.
pub fn neighborhood(g: &Graph, t: &VertexSet) -> Result<VertexSet> {
    let n = g.n();
    for v in t.iter() {
        if v as usize >= n {
            return Err(Error::invalid(format!("vertex {v} out of range for n = {n}")));
        }
    }
    let mut seen = vec![false; n];
    for v in t.iter() {
        for &u in g.neighbors(v) {
            seen[u as usize] = true;
        }
    }
    for v in t.iter() {
        seen[v as usize] = false;
    }
    let members = (0..n as u32).filter(|&v| seen[v as usize]).collect();
    Ok(VertexSet::from_sorted(members))
}

/// Removes `s`, relabelling the remaining vertices `0..n-|s|` in order.
/// Returns the new graph together with the map new index -> old index.
pub fn induced_remove(g: &Graph, s: &VertexSet) -> (Graph, Vec<u32>) {
    let n = g.n();
    let mut old_to_new = vec![u32::MAX; n];
    let mut new_to_old = Vec::with_capacity(n - s.len());
    for v in 0..n as u32 {
        if !s.contains(v) {
            old_to_new[v as usize] = new_to_old.len() as u32;
            new_to_old.push(v);
        }
    }
    let mut adj = Vec::with_capacity(new_to_old.len());
    let mut edge_count = 0;
    for &old in &new_to_old {
        let row: Vec<u32> = g
            .neighbors(old)
            .iter()
            .filter_map(|&u| {
                let nu = old_to_new[u as usize];
                (nu != u32::MAX).then_some(nu)
            })
            .collect();
        edge_count += row.len();
        adj.push(row);
    }
    (
        Graph {
            n: new_to_old.len(),
            adj,
            edge_count: edge_count / 2,
        },
        new_to_old,
    )
}

/// Edge-wise union of two graphs on the same vertex set.
pub fn union_graphs(g1: &Graph, g2: &Graph) -> Result<Graph> {
    if g1.n() != g2.n() {
        return Err(Error::invalid(format!(
            "union of graphs with different vertex counts ({} vs {})",
            g1.n(),
            g2.n()
        )));
    }
    let n = g1.n();
    let mut adj = Vec::with_capacity(n);
    let mut edge_count = 0;
    for v in 0..n as u32 {
        let a = g1.neighbors(v);
        let b = g2.neighbors(v);
        let mut row = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    row.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    row.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    row.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        row.extend_from_slice(&a[i..]);
        row.extend_from_slice(&b[j..]);
        edge_count += row.len();
        adj.push(row);
    }
    Ok(Graph {
        n,
        adj,
        edge_count: edge_count / 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomSource;

    fn path(n: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (0..n as u32 - 1).map(|v| (v, v + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    /// Two triangles sharing the centre vertex 0.
    pub(crate) fn bowtie() -> Graph {
        Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]).unwrap()
    }

    #[test]
    fn q_one_gives_complete_graph() {
        let mut rng = RandomSource::new(1, 0).rng();
        let g = sample_gnq(4, 1.0, &mut rng).unwrap();
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn q_zero_gives_empty_graph() {
        let mut rng = RandomSource::new(1, 0).rng();
        let g = sample_gnq(4, 0.0, &mut rng).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn q_out_of_range_is_rejected() {
        let mut rng = RandomSource::new(1, 0).rng();
        assert!(sample_gnq(4, 1.5, &mut rng).is_err());
        assert!(sample_gnq(4, -0.1, &mut rng).is_err());
    }

    #[test]
    fn edge_count_matches_binomial_moments() {
        // n = 1000, q = 0.01: mean C(1000,2) q = 4995, per-sample sd
        // sqrt(C(1000,2) q (1-q)) = 70.32.
        let trials = 200;
        let mut total = 0.0;
        for t in 0..trials {
            let mut rng = RandomSource::new(99, t).rng();
            let g = sample_gnq(1000, 0.01, &mut rng).unwrap();
            total += g.edge_count() as f64;
        }
        let mean = total / trials as f64;
        let se = 70.3216 / (trials as f64).sqrt();
        assert!(
            (mean - 4995.0).abs() <= 3.0 * se,
            "mean {mean} out of range (se {se})"
        );
    }

    #[test]
    fn sampling_is_deterministic_per_stream() {
        let g1 = sample_gnq(300, 0.02, &mut RandomSource::new(7, 3).rng()).unwrap();
        let g2 = sample_gnq(300, 0.02, &mut RandomSource::new(7, 3).rng()).unwrap();
        assert_eq!(g1, g2);
        let g3 = sample_gnq(300, 0.02, &mut RandomSource::new(7, 4).rng()).unwrap();
        assert_ne!(g1, g3);
    }

    #[test]
    fn geometric_and_bernoulli_paths_agree_on_moments() {
        // Same q on both sides of the strategy threshold would change the
        // stream layout, so only sanity-check the sparse path's density.
        let mut total = 0usize;
        let trials = 100;
        for t in 0..trials {
            let mut rng = RandomSource::new(5, t).rng();
            total += sample_gnq(500, 0.01, &mut rng).unwrap().edge_count();
        }
        let mean = total as f64 / trials as f64;
        let expected = 0.01 * (500.0 * 499.0 / 2.0);
        assert!((mean - expected).abs() < 0.05 * expected, "mean {mean} vs {expected}");
    }

    #[test]
    fn pair_index_decoding_is_exact() {
        let n = 137u64;
        let mut k = 0u64;
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                assert_eq!(pair_from_index(n, k), (u, v));
                k += 1;
            }
        }
    }

    #[test]
    fn complement_of_k4_is_empty() {
        let g = complement(&Graph::complete(4));
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn complement_of_empty_is_complete() {
        let g = complement(&Graph::empty(6));
        assert_eq!(g.edge_count(), 15);
    }

    #[test]
    fn complement_of_c5_is_a_5_cycle() {
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        let g = complement(&c5);
        assert_eq!(g.edge_count(), 5);
        assert!((0..5).all(|v| g.degree(v) == 2));
        // Connected 2-regular on 5 vertices is a 5-cycle.
        let mut seen = vec![false; 5];
        let mut stack = vec![0u32];
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v as usize], true) {
                continue;
            }
            stack.extend_from_slice(g.neighbors(v));
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn neighborhood_on_path_and_bowtie() {
        let p3 = path(3);
        let nb = neighborhood(&p3, &VertexSet::from_sorted(vec![1])).unwrap();
        assert_eq!(nb.members(), &[0, 2]);
        let nb = neighborhood(&p3, &VertexSet::from_sorted(vec![0, 2])).unwrap();
        assert_eq!(nb.members(), &[1]);
        // bowtie: t = {u1} = {1} has neighbourhood {centre, u2} = {0, 2}
        let nb = neighborhood(&bowtie(), &VertexSet::from_sorted(vec![1])).unwrap();
        assert_eq!(nb.members(), &[0, 2]);
    }

    #[test]
    fn neighborhood_rejects_out_of_range() {
        let p3 = path(3);
        assert!(neighborhood(&p3, &VertexSet::from_sorted(vec![5])).is_err());
    }

    #[test]
    fn induced_remove_examples() {
        let (k3, map) = induced_remove(&Graph::complete(4), &VertexSet::from_sorted(vec![1]));
        assert_eq!(k3.n(), 3);
        assert_eq!(k3.edge_count(), 3);
        assert_eq!(map, vec![0, 2, 3]);

        let (rest, map) = induced_remove(&bowtie(), &VertexSet::from_sorted(vec![0]));
        assert_eq!(rest.n(), 4);
        assert_eq!(rest.edge_count(), 2);
        // old 1-2 and 3-4 survive as 0-1 and 2-3
        assert!(rest.has_edge(0, 1) && rest.has_edge(2, 3));
        assert_eq!(map, vec![1, 2, 3, 4]);

        let g = bowtie();
        let (same, map) = induced_remove(&g, &VertexSet::new());
        assert_eq!(same, g);
        assert_eq!(map, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn union_examples() {
        let g1 = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let g2 = Graph::from_edges(3, &[(1, 2)]).unwrap();
        let u = union_graphs(&g1, &g2).unwrap();
        assert_eq!(u.edge_count(), 2);
        assert!(u.has_edge(0, 1) && u.has_edge(1, 2));

        let empty = Graph::empty(3);
        assert_eq!(union_graphs(&g1, &empty).unwrap(), g1);

        // two disjoint triangles + cross matching = prism, 9 edges
        let tris = Graph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]).unwrap();
        let matching = Graph::from_edges(6, &[(0, 3), (1, 4), (2, 5)]).unwrap();
        assert_eq!(union_graphs(&tris, &matching).unwrap().edge_count(), 9);

        assert!(union_graphs(&g1, &Graph::empty(4)).is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = sample_gnq(50, 0.2, &mut RandomSource::new(11, 0).rng()).unwrap();
        let text = g.to_edge_list();
        let back = Graph::parse_edge_list(&text).unwrap();
        assert_eq!(g, back);
        assert_eq!(text, back.to_edge_list());
    }
}
