//! Independent brute-force oracles for cross-validation.
//!
//! Everything here recomputes a quantity from its definition by exhaustive
//! enumeration, sharing no code path with the production solvers it checks.
//! All functions are limited to small vertex counts (masks are `u32`).

use crate::graph::{Graph, VertexSet};
use crate::triangles::Triangle;

const MASK_LIMIT: usize = 25;

fn adjacency_masks(g: &Graph) -> Vec<u32> {
    assert!(g.n() <= MASK_LIMIT, "brute force limited to {MASK_LIMIT} vertices");
    let mut adj = vec![0u32; g.n()];
    for (u, v) in g.edges() {
        adj[u as usize] |= 1 << v;
        adj[v as usize] |= 1 << u;
    }
    adj
}

fn triangles_as_masks(g: &Graph) -> Vec<u32> {
    let adj = adjacency_masks(g);
    let n = g.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if adj[a] & (1 << b) == 0 {
                continue;
            }
            let mut common = adj[a] & adj[b] & !((1u32 << (b + 1)) - 1);
            while common != 0 {
                let c = common.trailing_zeros();
                out.push((1 << a) | (1 << b) | (1 << c));
                common &= common - 1;
            }
        }
    }
    out
}

/// Maximum number of vertex-disjoint triangles, by dynamic programming over
/// vertex subsets.
pub fn max_triangle_matching_size(g: &Graph) -> usize {
    let tris = triangles_as_masks(g);
    let n = g.n();
    // tri_at[v]: triangles whose lowest vertex is v
    let mut tri_at: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &t in &tris {
        tri_at[t.trailing_zeros() as usize].push(t);
    }
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut memo = vec![u8::MAX; full as usize + 1];
    fn go(mask: u32, tri_at: &[Vec<u32>], memo: &mut [u8]) -> u8 {
        if mask == 0 {
            return 0;
        }
        if memo[mask as usize] != u8::MAX {
            return memo[mask as usize];
        }
        let v = mask.trailing_zeros() as usize;
        let mut best = go(mask & !(1 << v), tri_at, memo);
        for &t in &tri_at[v] {
            if t & mask == t {
                best = best.max(1 + go(mask & !t, tri_at, memo));
            }
        }
        memo[mask as usize] = best;
        best
    }
    go(full, &tri_at, &mut memo) as usize
}

/// Maximum matching size, by dynamic programming over vertex subsets.
pub fn max_matching_size(g: &Graph) -> usize {
    let adj = adjacency_masks(g);
    let n = g.n();
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut memo = vec![u8::MAX; full as usize + 1];
    fn go(mask: u32, adj: &[u32], memo: &mut [u8]) -> u8 {
        if mask == 0 {
            return 0;
        }
        if memo[mask as usize] != u8::MAX {
            return memo[mask as usize];
        }
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        let mut best = go(rest, adj, memo);
        let mut cand = adj[v] & rest;
        while cand != 0 {
            let u = cand.trailing_zeros() as usize;
            best = best.max(1 + go(rest & !(1 << u), adj, memo));
            cand &= cand - 1;
        }
        memo[mask as usize] = best;
        best
    }
    go(full, &adj, &mut memo) as usize
}

/// Maximum bipartite matching between `a` and `b`, over subsets of `a`:
/// by Koenig duality this also certifies the maximum deficiency.
pub fn bipartite_matching_size_and_max_deficiency(
    g: &Graph,
    a: &VertexSet,
    b: &VertexSet,
) -> (usize, usize) {
    assert!(a.len() <= 20, "brute force limited to |A| <= 20");
    let b_set: Vec<u32> = b.members().to_vec();
    let a_list: Vec<u32> = a.members().to_vec();
    // max deficiency over all T subset A: |T| - |N(T) cap B|
    let mut max_def: i64 = 0;
    for mask in 0u32..(1 << a_list.len()) {
        let mut nb = std::collections::BTreeSet::new();
        let mut t_size = 0i64;
        for (i, &v) in a_list.iter().enumerate() {
            if mask & (1 << i) != 0 {
                t_size += 1;
                for &u in g.neighbors(v) {
                    if b_set.binary_search(&u).is_ok() {
                        nb.insert(u);
                    }
                }
            }
        }
        max_def = max_def.max(t_size - nb.len() as i64);
    }
    (
        (a.len() as i64 - max_def) as usize,
        max_def as usize,
    )
}

/// Exact chromatic number by exhaustive colour assignment with symmetry
/// pruning on the first use of each colour.
pub fn chromatic_number(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    assert!(n <= 12, "brute-force chromatic limited to 12 vertices");
    let adj = adjacency_masks(g);
    fn colorable(adj: &[u32], colors: &mut [usize], v: usize, k: usize, used: usize) -> bool {
        if v == adj.len() {
            return true;
        }
        let limit = (used + 1).min(k);
        for c in 0..limit {
            let conflict = (0..v).any(|u| adj[v] & (1 << u) != 0 && colors[u] == c);
            if conflict {
                continue;
            }
            colors[v] = c;
            if colorable(adj, colors, v + 1, k, used.max(c + 1)) {
                return true;
            }
        }
        false
    }
    for k in 1..=n {
        let mut colors = vec![usize::MAX; n];
        if colorable(&adj, &mut colors, 0, k, 0) {
            return k;
        }
    }
    n
}

/// Lambda_1(T) straight from the definition: vertices of N(T) lying in a
/// triangle that intersects T.
pub fn lambda1(g: &Graph, t: &VertexSet) -> VertexSet {
    let nt = crate::graph::neighborhood(g, t).expect("t within range");
    let tris = all_triangles(g);
    nt.iter()
        .filter(|&x| {
            tris.iter()
                .any(|tri| tri.contains(x) && tri.0.iter().any(|&v| t.contains(v)))
        })
        .collect()
}

/// Lambda_2(T) straight from the definition: vertices of N(T) lying in a
/// triangle that avoids T.
pub fn lambda2(g: &Graph, t: &VertexSet) -> VertexSet {
    let nt = crate::graph::neighborhood(g, t).expect("t within range");
    let tris = all_triangles(g);
    nt.iter()
        .filter(|&x| {
            tris.iter()
                .any(|tri| tri.contains(x) && tri.0.iter().all(|&v| !t.contains(v)))
        })
        .collect()
}

/// |Z(T,A)|: triangles meeting A and avoiding T, counted once each.
pub fn count_z(g: &Graph, t: &VertexSet, a: &VertexSet) -> usize {
    all_triangles(g)
        .iter()
        .filter(|tri| {
            tri.0.iter().any(|&v| a.contains(v)) && tri.0.iter().all(|&v| !t.contains(v))
        })
        .count()
}

fn all_triangles(g: &Graph) -> Vec<Triangle> {
    // Definition-level enumeration over all vertex triples.
    let n = g.n() as u32;
    let mut out = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                if g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c) {
                    out.push(Triangle([a, b, c]));
                }
            }
        }
    }
    out
}

/// Exact mean and variance of the triangle count of G(n,q) by enumerating
/// every graph on n vertices, in rational arithmetic. `q` is a rational
/// p/r with p <= r.
pub fn triangle_count_moments_exact(
    n: usize,
    q_num: u64,
    q_den: u64,
) -> (num::BigRational, num::BigRational) {
    use num::{BigInt, BigRational, Zero};
    assert!(n <= 5, "exhaustive moments limited to 5 vertices");
    let pairs: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|u| ((u + 1)..n as u32).map(move |v| (u, v)))
        .collect();
    let m = pairs.len();
    let q = BigRational::new(BigInt::from(q_num), BigInt::from(q_den));
    let one = BigRational::from_integer(BigInt::from(1));
    let mut mean = BigRational::zero();
    let mut second = BigRational::zero();
    for mask in 0u64..(1 << m) {
        let edges: Vec<(u32, u32)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::from_edges(n, &edges).unwrap();
        let x = BigInt::from(all_triangles(&g).len());
        let k = mask.count_ones() as i64;
        let mut w = one.clone();
        for _ in 0..k {
            w *= &q;
        }
        for _ in 0..(m as i64 - k) {
            w *= &one - &q;
        }
        mean += BigRational::from_integer(x.clone()) * &w;
        second += BigRational::from_integer(&x * &x) * &w;
    }
    let var = second - &mean * &mean;
    (mean, var)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_matching_on_known_graphs() {
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        assert_eq!(max_matching_size(&c5), 2);
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(max_matching_size(&star), 1);
    }

    #[test]
    fn brute_triangle_matching_on_known_graphs() {
        assert_eq!(max_triangle_matching_size(&Graph::complete(6)), 2);
        let bowtie =
            Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]).unwrap();
        assert_eq!(max_triangle_matching_size(&bowtie), 1);
    }

    #[test]
    fn brute_chromatic_on_known_graphs() {
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        assert_eq!(chromatic_number(&c5), 3);
        assert_eq!(chromatic_number(&Graph::complete(4)), 4);
    }
}
