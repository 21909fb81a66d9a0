//! Triangle enumeration and exact maximum triangle-matchings.
//!
//! `max_triangle_matching` is the workhorse behind s(G) and S(G). It splits
//! the triangle set into conflict components (triangles sharing a vertex)
//! and solves each component by branch-and-bound. In the sparse regimes this
//! tool targets, components carry O(1) triangles, so the exponential worst
//! case never bites; a branch-node budget guards against surprises instead
//! of ever returning a non-maximum answer.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// An ordered triple `a < b < c` whose three pairs are all edges of the
/// host graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Triangle(pub [u32; 3]);

impl Triangle {
    pub fn vertices(&self) -> [u32; 3] {
        self.0
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.contains(&v)
    }

    pub fn intersects(&self, other: &Triangle) -> bool {
        self.0.iter().any(|v| other.0.contains(v))
    }
}

/// A vertex-disjoint set of triangles in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleMatching {
    triangles: Vec<Triangle>,
    covered: VertexSet,
    exact: bool,
}

impl TriangleMatching {
    fn new(mut triangles: Vec<Triangle>, exact: bool) -> Self {
        triangles.sort_unstable();
        let covered = triangles.iter().flat_map(|t| t.0).collect();
        TriangleMatching {
            triangles,
            covered,
            exact,
        }
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    /// s(G): the number of triangles in the matching.
    pub fn size(&self) -> usize {
        self.triangles.len()
    }

    /// S(G): the vertices covered by the matching.
    pub fn covered(&self) -> &VertexSet {
        &self.covered
    }

    /// True only when produced by the exact solver.
    pub fn is_exact_maximum(&self) -> bool {
        self.exact
    }

    /// One `a b c` line per triangle, canonical order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.triangles {
            out.push_str(&format!("{} {} {}\n", t.0[0], t.0[1], t.0[2]));
        }
        out
    }
}

/// Enumerates all triangles, each once, lexicographically sorted.
pub fn enumerate_triangles(g: &Graph) -> Vec<Triangle> {
    let mut out = Vec::new();
    for u in 0..g.n() as u32 {
        let nu = g.neighbors(u);
        for &v in nu {
            if v <= u {
                continue;
            }
            let nv = g.neighbors(v);
            // sorted intersection of N(u) and N(v), restricted to w > v
            let (mut i, mut j) = (0usize, 0usize);
            while i < nu.len() && j < nv.len() {
                match nu[i].cmp(&nv[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        let w = nu[i];
                        if w > v {
                            out.push(Triangle([u, v, w]));
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    out
}

/// x(G): the number of triangles.
pub fn count_x(g: &Graph) -> usize {
    enumerate_triangles(g).len()
}

/// y(G): the number of triangles sharing at least one vertex with another
/// triangle.
pub fn count_y(g: &Graph) -> usize {
    let tris = enumerate_triangles(g);
    count_y_from(g.n(), &tris)
}

pub(crate) fn count_y_from(n: usize, tris: &[Triangle]) -> usize {
    // A triangle meets another iff one of its vertices lies in >= 2 triangles.
    let mut membership = vec![0u32; n];
    for t in tris {
        for v in t.0 {
            membership[v as usize] += 1;
        }
    }
    tris.iter()
        .filter(|t| t.0.iter().any(|&v| membership[v as usize] >= 2))
        .count()
}

/// Maximal (not necessarily maximum) disjoint triangle set, scanning the
/// canonical triangle order.
pub fn greedy_triangle_matching(g: &Graph) -> TriangleMatching {
    let tris = enumerate_triangles(g);
    let mut used = vec![false; g.n()];
    let mut chosen = Vec::new();
    for t in &tris {
        if t.0.iter().all(|&v| !used[v as usize]) {
            for v in t.0 {
                used[v as usize] = true;
            }
            chosen.push(*t);
        }
    }
    TriangleMatching::new(chosen, false)
}

pub const DEFAULT_BRANCH_BUDGET: u64 = 1_000_000;

/// Exact maximum triangle-matching with the default branch budget.
pub fn max_triangle_matching(g: &Graph) -> Result<TriangleMatching> {
    max_triangle_matching_with_budget(g, DEFAULT_BRANCH_BUDGET)
}

/// Exact maximum triangle-matching.
///
/// Among maximum solutions, returns the one whose canonically sorted
/// triangle list is lexicographically smallest, so S(G) is well-defined and
/// reproducible. Errors with `BudgetExceeded` if any conflict component
/// needs more than `budget` branch nodes.
pub fn max_triangle_matching_with_budget(g: &Graph, budget: u64) -> Result<TriangleMatching> {
    let tris = enumerate_triangles(g);
    let comps = conflict_components(g.n(), &tris);
    let mut chosen = Vec::new();
    for comp in &comps {
        let comp_tris: Vec<Triangle> = comp.iter().map(|&i| tris[i]).collect();
        let best = solve_component(&comp_tris, budget)?;
        chosen.extend(best);
    }
    Ok(TriangleMatching::new(chosen, true))
}

/// Groups triangle indices into conflict components (triangles sharing a
/// vertex are in conflict). Components are ordered by their first triangle,
/// and triangles stay in canonical order within each component.
pub(crate) fn conflict_components(n: usize, tris: &[Triangle]) -> Vec<Vec<usize>> {
    let mut dsu = Dsu::new(tris.len());
    let mut vertex_owner = vec![usize::MAX; n];
    for (i, t) in tris.iter().enumerate() {
        for v in t.0 {
            let owner = &mut vertex_owner[v as usize];
            if *owner == usize::MAX {
                *owner = i;
            } else {
                dsu.union(*owner, i);
            }
        }
    }
    let mut comp_of_root = vec![usize::MAX; tris.len()];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for i in 0..tris.len() {
        let root = dsu.find(i);
        let slot = if comp_of_root[root] == usize::MAX {
            comp_of_root[root] = comps.len();
            comps.push(Vec::new());
            comps.len() - 1
        } else {
            comp_of_root[root]
        };
        comps[slot].push(i);
    }
    comps
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Keep the smaller root so component order follows triangle order.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Branch-and-bound over one conflict component.
///
/// Branches on the lowest vertex still available: either one of the
/// triangles through it joins the packing (tried in canonical order) or the
/// vertex stays uncovered for good. Every triangle through the branch
/// vertex has it as its minimum available vertex, so this enumerates
/// packings in lexicographic order of their sorted triangle lists and the
/// first maximum found is the canonical one.
pub(crate) fn solve_component(tris: &[Triangle], budget: u64) -> Result<Vec<Triangle>> {
    // Local vertex ids keep the state arrays small.
    let mut verts: Vec<u32> = tris.iter().flat_map(|t| t.0).collect();
    verts.sort_unstable();
    verts.dedup();
    let local = |v: u32| verts.binary_search(&v).unwrap();
    let local_tris: Vec<[usize; 3]> = tris
        .iter()
        .map(|t| [local(t.0[0]), local(t.0[1]), local(t.0[2])])
        .collect();
    let nv = verts.len();
    let mut tris_at: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (i, t) in local_tris.iter().enumerate() {
        for &v in t {
            tris_at[v].push(i);
        }
    }

    struct Ctx<'a> {
        tris: &'a [[usize; 3]],
        tris_at: &'a [Vec<usize>],
        budget: u64,
    }

    struct State {
        blocked: Vec<bool>,
        alive: Vec<bool>,
        /// Per vertex: alive triangles through it.
        cover: Vec<u32>,
        /// Unblocked vertices with at least one alive triangle; the bound
        /// is current + live/3, since every future pick burns three of
        /// them.
        live: usize,
        current: Vec<usize>,
        best: Vec<usize>,
        nodes: u64,
    }

    impl State {
        fn block(&mut self, ctx: &Ctx, u: usize) -> Vec<usize> {
            self.blocked[u] = true;
            if self.cover[u] > 0 {
                self.live -= 1;
            }
            let mut killed = Vec::new();
            for &ti in &ctx.tris_at[u] {
                if !self.alive[ti] {
                    continue;
                }
                self.alive[ti] = false;
                killed.push(ti);
                for &w in &ctx.tris[ti] {
                    self.cover[w] -= 1;
                    if self.cover[w] == 0 && !self.blocked[w] {
                        self.live -= 1;
                    }
                }
            }
            killed
        }

        fn unblock(&mut self, ctx: &Ctx, u: usize, killed: Vec<usize>) {
            for &ti in killed.iter().rev() {
                for &w in &ctx.tris[ti] {
                    if self.cover[w] == 0 && !self.blocked[w] {
                        self.live += 1;
                    }
                    self.cover[w] += 1;
                }
                self.alive[ti] = true;
            }
            self.blocked[u] = false;
            if self.cover[u] > 0 {
                self.live += 1;
            }
        }
    }

    fn dfs(ctx: &Ctx, lowest: usize, st: &mut State) -> Result<()> {
        st.nodes += 1;
        if st.nodes > ctx.budget {
            return Err(Error::BudgetExceeded {
                nodes: st.nodes,
                budget: ctx.budget,
            });
        }
        // Vertices with no alive triangle can never be covered; pass them by.
        let mut v = lowest;
        while v < st.blocked.len() && (st.blocked[v] || st.cover[v] == 0) {
            v += 1;
        }
        if v == st.blocked.len() {
            if st.current.len() > st.best.len() {
                st.best = st.current.clone();
            }
            return Ok(());
        }
        if !st.best.is_empty() && st.current.len() + st.live / 3 <= st.best.len() {
            return Ok(());
        }
        for i in 0..ctx.tris_at[v].len() {
            let ti = ctx.tris_at[v][i];
            if !st.alive[ti] {
                continue;
            }
            let t = ctx.tris[ti];
            let undo_a = st.block(ctx, t[0]);
            let undo_b = st.block(ctx, t[1]);
            let undo_c = st.block(ctx, t[2]);
            st.current.push(ti);
            dfs(ctx, v + 1, st)?;
            st.current.pop();
            st.unblock(ctx, t[2], undo_c);
            st.unblock(ctx, t[1], undo_b);
            st.unblock(ctx, t[0], undo_a);
        }
        // leave v uncovered for good
        let undo = st.block(ctx, v);
        dfs(ctx, v + 1, st)?;
        st.unblock(ctx, v, undo);
        Ok(())
    }

    let ctx = Ctx {
        tris: &local_tris,
        tris_at: &tris_at,
        budget,
    };
    let mut cover = vec![0u32; nv];
    for t in &local_tris {
        for &v in t {
            cover[v] += 1;
        }
    }
    let live = cover.iter().filter(|&&c| c > 0).count();
    let mut st = State {
        blocked: vec![false; nv],
        alive: vec![true; local_tris.len()],
        cover,
        live,
        current: Vec::new(),
        best: Vec::new(),
        nodes: 0,
    };
    dfs(&ctx, 0, &mut st)?;
    Ok(st.best.iter().map(|&i| tris[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complement, sample_gnq};
    use crate::rng::RandomSource;

    fn bowtie() -> Graph {
        Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]).unwrap()
    }

    fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i, (i + 1) % 5)); // outer cycle
            edges.push((i, i + 5)); // spokes
            edges.push((i + 5, (i + 2) % 5 + 5)); // inner pentagram
        }
        Graph::from_edges(10, &edges).unwrap()
    }

    fn prism() -> Graph {
        Graph::from_edges(
            6,
            &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (0, 3), (1, 4), (2, 5)],
        )
        .unwrap()
    }

    #[test]
    fn k4_has_four_triangles() {
        assert_eq!(enumerate_triangles(&Graph::complete(4)).len(), 4);
    }

    #[test]
    fn petersen_is_triangle_free() {
        assert_eq!(count_x(&petersen()), 0);
    }

    #[test]
    fn bowtie_has_two_triangles() {
        let tris = enumerate_triangles(&bowtie());
        assert_eq!(tris, vec![Triangle([0, 1, 2]), Triangle([0, 3, 4])]);
    }

    #[test]
    fn count_x_examples() {
        assert_eq!(count_x(&Graph::complete(5)), 10);
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        assert_eq!(count_x(&c5), 0);
        let two = Graph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]).unwrap();
        assert_eq!(count_x(&two), 2);
    }

    #[test]
    fn count_y_examples() {
        let two = Graph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]).unwrap();
        assert_eq!(count_y(&two), 0);
        assert_eq!(count_y(&bowtie()), 2);
        assert_eq!(count_y(&Graph::complete(4)), 4);
    }

    #[test]
    fn max_matching_examples() {
        assert_eq!(max_triangle_matching(&Graph::complete(6)).unwrap().size(), 2);

        let m = max_triangle_matching(&bowtie()).unwrap();
        assert_eq!(m.size(), 1);
        assert_eq!(m.triangles(), &[Triangle([0, 1, 2])]);
        assert_eq!(m.covered().members(), &[0, 1, 2]);

        assert_eq!(max_triangle_matching(&prism()).unwrap().size(), 2);
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(greedy_triangle_matching(&Graph::complete(6)).size(), 2);
        assert_eq!(greedy_triangle_matching(&bowtie()).size(), 1);
        assert_eq!(greedy_triangle_matching(&petersen()).size(), 0);
    }

    #[test]
    fn sandwich_and_greedy_bounds_on_random_graphs() {
        for t in 0..60 {
            let q = 0.1 + 0.08 * (t % 10) as f64;
            let g = sample_gnq(11, q, &mut RandomSource::new(42, t).rng()).unwrap();
            let s = max_triangle_matching(&g).unwrap().size();
            let x = count_x(&g);
            let y = count_y(&g);
            assert!(s <= x && x <= s + y, "sandwich failed: s={s} x={x} y={y}");
            let greedy = greedy_triangle_matching(&g).size();
            if s == 0 {
                assert_eq!(greedy, 0);
            } else {
                assert!(greedy <= s && s <= 3 * greedy, "greedy bounds: greedy={greedy} s={s}");
            }
        }
    }

    #[test]
    fn solver_is_deterministic() {
        let g = sample_gnq(60, 0.12, &mut RandomSource::new(3, 1).rng()).unwrap();
        let a = max_triangle_matching(&g).unwrap();
        let b = max_triangle_matching(&g).unwrap();
        assert_eq!(a, b);
        assert!(a.is_exact_maximum());
    }

    #[test]
    fn budget_exceeded_is_reported() {
        let g = Graph::complete(12);
        match max_triangle_matching_with_budget(&g, 3) {
            Err(Error::BudgetExceeded { .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn matching_serialization_is_sorted() {
        let m = max_triangle_matching(&prism()).unwrap();
        assert_eq!(m.to_text(), "0 1 2\n3 4 5\n");
    }

    #[test]
    fn complement_of_two_triangles_is_triangle_free() {
        let two = Graph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]).unwrap();
        // complement is K_{3,3}, which has no triangles
        assert_eq!(count_x(&complement(&two)), 0);
    }
}
