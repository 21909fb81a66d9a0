//! Chromatic numbers of the dense graph, three ways.
//!
//! * `structural_chi` — the closed form ceil((n - s)/2) driven by the
//!   complement's maximum triangle-matching.
//! * `packing_chi` — exact: when the complement is K4-free, colour classes
//!   are complement cliques of size <= 3, so chi = n - (maximum weight of a
//!   vertex-disjoint packing of complement triangles, weight 2, and
//!   complement edges, weight 1). Solved by branching on triangle usage per
//!   conflict component with a maximum matching on the uncovered rest.
//! * `generic_exact_chi` — an independent small-graph oracle (DSATUR-seeded
//!   branch and bound), used to cross-check the packing route.

use crate::error::{Error, Result};
use crate::graph::{complement, Graph};
use crate::matching::blossom_matching;
use crate::triangles::{
    conflict_components, enumerate_triangles, solve_component, Triangle, DEFAULT_BRANCH_BUDGET,
};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChiMethod {
    Structural,
    PackingExact,
    GenericExact,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChiResult {
    pub chi: usize,
    pub method: ChiMethod,
    /// Vertex -> colour, verified proper before being returned.
    pub certificate: Option<Vec<u32>>,
}

/// ceil((n - s)/2): s triangle classes plus a near-perfect matching's worth
/// of pair classes on the other n - 3s vertices.
pub fn structural_chi(n: usize, s: usize) -> Result<usize> {
    if 3 * s > n {
        return Err(Error::invalid(format!(
            "triangle matching of size {s} cannot fit in {n} vertices"
        )));
    }
    Ok((n - s).div_ceil(2))
}

/// Finds a K4 in `g`, if any.
pub fn find_k4(g: &Graph) -> Option<[u32; 4]> {
    for (u, v) in g.edges() {
        let nu = g.neighbors(u);
        let nv = g.neighbors(v);
        let mut common = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < nu.len() && j < nv.len() {
            match nu[i].cmp(&nv[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if nu[i] != u && nu[i] != v {
                        common.push(nu[i]);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        for (ai, &a) in common.iter().enumerate() {
            for &b in &common[ai + 1..] {
                if g.has_edge(a, b) {
                    let mut k4 = [u, v, a, b];
                    k4.sort_unstable();
                    return Some(k4);
                }
            }
        }
    }
    None
}

/// Exact chromatic number of the dense graph via complement packing.
pub fn packing_chi(g_dense: &Graph) -> Result<ChiResult> {
    packing_chi_with_budget(g_dense, DEFAULT_BRANCH_BUDGET)
}

pub fn packing_chi_with_budget(g_dense: &Graph, budget: u64) -> Result<ChiResult> {
    let comp = complement(g_dense);
    let result = packing_chi_from_complement(&comp, budget)?;
    verify_certificate(g_dense, &result);
    Ok(result)
}

/// Same computation, taking the sparse complement directly so callers in
/// the sparse regime never materialise the dense graph. The certificate is
/// checked against the complement (pairs inside a class must be complement
/// edges).
pub fn packing_chi_from_complement(comp: &Graph, budget: u64) -> Result<ChiResult> {
    if let Some(_k4) = find_k4(comp) {
        return Err(Error::K4Present);
    }
    let n = comp.n();
    if n == 0 {
        return Ok(ChiResult {
            chi: 0,
            method: ChiMethod::PackingExact,
            certificate: Some(Vec::new()),
        });
    }

    let (selection, mate) = best_packing(comp, budget)?;

    // Assemble colour classes: chosen complement triangles, matched
    // complement edges, singletons.
    let mut colors = vec![u32::MAX; n];
    let mut next_color: u32 = 0;
    for t in &selection {
        for v in t.0 {
            colors[v as usize] = next_color;
        }
        next_color += 1;
    }
    for v in 0..n {
        if colors[v] != u32::MAX {
            continue;
        }
        let m = mate[v];
        if m != u32::MAX && colors[m as usize] == u32::MAX && (m as usize) > v {
            colors[v] = next_color;
            colors[m as usize] = next_color;
        } else {
            colors[v] = next_color;
        }
        next_color += 1;
    }
    let result = ChiResult {
        chi: next_color as usize,
        method: ChiMethod::PackingExact,
        certificate: Some(colors),
    };
    verify_certificate_against_complement(comp, &result);
    Ok(result)
}

/// Branch and bound over triangle-conflict components, include-first in
/// canonical order; leaves are scored by a maximum matching on the
/// uncovered vertices. Returns the best triangle selection and the mate
/// array of the accompanying matching.
///
/// Writing w = 2t + m and def = (n - 3t) - 2m, the weight satisfies
/// w = (n + t - def)/2, so the search maximises f = t - def with the bound
/// f <= t_max - parity(n - 3 t_max). In the regime where G - S has a
/// near-perfect matching this prunes every skip branch immediately.
fn best_packing(comp: &Graph, budget: u64) -> Result<(Vec<Triangle>, Vec<u32>)> {
    let n = comp.n();
    let tris = enumerate_triangles(comp);
    let comps = conflict_components(n, &tris);

    // Per-component maxima for the bound (these are cheap: components are
    // small in every regime this tool targets).
    let mut comp_tris: Vec<Vec<Triangle>> = Vec::with_capacity(comps.len());
    let mut comp_smax: Vec<usize> = Vec::with_capacity(comps.len());
    for comp_idx in &comps {
        let list: Vec<Triangle> = comp_idx.iter().map(|&i| tris[i]).collect();
        let s = solve_component(&list, budget)?.len();
        comp_tris.push(list);
        comp_smax.push(s);
    }
    let mut suffix_smax = vec![0usize; comps.len() + 1];
    for c in (0..comps.len()).rev() {
        suffix_smax[c] = suffix_smax[c + 1] + comp_smax[c];
    }

    struct Search<'a> {
        comp: &'a Graph,
        comp_tris: &'a [Vec<Triangle>],
        comp_smax: &'a [usize],
        suffix_smax: &'a [usize],
        n: usize,
        budget: u64,
        nodes: u64,
        covered: Vec<bool>,
        active: Vec<bool>,
        current: Vec<Triangle>,
        best: Option<(i64, Vec<Triangle>, Vec<u32>)>,
        seed_mate: Option<Vec<u32>>,
    }

    impl Search<'_> {
        fn leaf(&mut self) {
            for v in 0..self.n {
                self.active[v] = !self.covered[v];
            }
            let mate = blossom_matching(self.comp, &self.active, self.seed_mate.as_deref());
            let matched = mate.iter().filter(|&&m| m != u32::MAX).count() / 2;
            let pool = self.n - 3 * self.current.len();
            let deficiency = pool - 2 * matched;
            let f = self.current.len() as i64 - deficiency as i64;
            if self.seed_mate.is_none() {
                self.seed_mate = Some(mate.clone());
            }
            let improved = match &self.best {
                None => true,
                Some((best_f, _, _)) => f > *best_f,
            };
            if improved {
                self.best = Some((f, self.current.clone(), mate));
            }
        }

        fn bound_allows(&self, c: usize, idx: usize, chosen_in_c: usize) -> bool {
            let best_f = match &self.best {
                None => return true,
                Some((f, _, _)) => *f,
            };
            let from_c = (self.comp_tris[c].len() - idx).min(self.comp_smax[c] - chosen_in_c);
            let t_max = self.current.len() + from_c + self.suffix_smax[c + 1];
            let f_ub = t_max as i64 - ((self.n - 3 * t_max) % 2) as i64;
            f_ub > best_f
        }

        fn dfs(&mut self, c: usize, idx: usize, chosen_in_c: usize) -> Result<()> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded {
                    nodes: self.nodes,
                    budget: self.budget,
                });
            }
            if c == self.comp_tris.len() {
                self.leaf();
                return Ok(());
            }
            if !self.bound_allows(c, idx, chosen_in_c) {
                return Ok(());
            }
            if idx == self.comp_tris[c].len() {
                return self.dfs(c + 1, 0, 0);
            }
            let t = self.comp_tris[c][idx];
            if t.0.iter().all(|&v| !self.covered[v as usize]) {
                for v in t.0 {
                    self.covered[v as usize] = true;
                }
                self.current.push(t);
                self.dfs(c, idx + 1, chosen_in_c + 1)?;
                self.current.pop();
                for v in t.0 {
                    self.covered[v as usize] = false;
                }
            }
            self.dfs(c, idx + 1, chosen_in_c)
        }
    }

    let mut search = Search {
        comp,
        comp_tris: &comp_tris,
        comp_smax: &comp_smax,
        suffix_smax: &suffix_smax,
        n,
        budget,
        nodes: 0,
        covered: vec![false; n],
        active: vec![false; n],
        current: Vec::new(),
        best: None,
        seed_mate: None,
    };
    search.dfs(0, 0, 0)?;
    let (_, selection, mate) = search.best.expect("at least one leaf");
    Ok((selection, mate))
}

fn verify_certificate(g_dense: &Graph, result: &ChiResult) {
    let colors = result.certificate.as_ref().expect("certificate present");
    assert_eq!(colors.len(), g_dense.n());
    for (u, v) in g_dense.edges() {
        assert_ne!(
            colors[u as usize], colors[v as usize],
            "certificate colours adjacent vertices {u} and {v} alike"
        );
    }
    let distinct = distinct_colors(colors);
    assert_eq!(distinct, result.chi, "certificate uses {distinct} colours");
}

fn verify_certificate_against_complement(comp: &Graph, result: &ChiResult) {
    let colors = result.certificate.as_ref().expect("certificate present");
    // A class is independent in the dense graph iff all its pairs are
    // complement edges.
    let mut by_color: std::collections::BTreeMap<u32, Vec<u32>> = std::collections::BTreeMap::new();
    for (v, &c) in colors.iter().enumerate() {
        by_color.entry(c).or_default().push(v as u32);
    }
    assert_eq!(by_color.len(), result.chi);
    for class in by_color.values() {
        for (i, &u) in class.iter().enumerate() {
            for &v in &class[i + 1..] {
                assert!(
                    comp.has_edge(u, v),
                    "class pair ({u}, {v}) is not a complement edge"
                );
            }
        }
    }
}

fn distinct_colors(colors: &[u32]) -> usize {
    let mut sorted: Vec<u32> = colors.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len()
}

pub const DEFAULT_EXACT_CHI_CAP: usize = 20;

/// Exact chromatic number with certificate for small graphs, independent
/// of the packing route: DSATUR greedy for the upper bound, a greedy clique
/// for the lower bound, then branch and bound on colourability.
pub fn generic_exact_chi(g: &Graph) -> Result<ChiResult> {
    generic_exact_chi_with_cap(g, DEFAULT_EXACT_CHI_CAP)
}

pub fn generic_exact_chi_with_cap(g: &Graph, cap: usize) -> Result<ChiResult> {
    let n = g.n();
    if n > cap {
        return Err(Error::invalid(format!(
            "generic exact chi limited to {cap} vertices, got {n}"
        )));
    }
    if n == 0 {
        return Ok(ChiResult {
            chi: 0,
            method: ChiMethod::GenericExact,
            certificate: Some(Vec::new()),
        });
    }
    let (ub, mut certificate) = dsatur_greedy(g);
    let lb = greedy_clique(g).len().max(1);
    let mut chi = ub;
    if lb < ub {
        for k in lb..ub {
            if let Some(colors) = colorable(g, k) {
                chi = k;
                certificate = colors;
                break;
            }
        }
    }
    let result = ChiResult {
        chi,
        method: ChiMethod::GenericExact,
        certificate: Some(certificate),
    };
    verify_certificate(g, &result);
    Ok(result)
}

/// DSATUR greedy colouring: highest saturation first, ties by degree then
/// index. Returns (colour count, certificate).
fn dsatur_greedy(g: &Graph) -> (usize, Vec<u32>) {
    let n = g.n();
    let mut colors = vec![u32::MAX; n];
    let mut neighbour_colors: Vec<std::collections::BTreeSet<u32>> =
        vec![std::collections::BTreeSet::new(); n];
    let mut max_used = 0u32;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| colors[v] == u32::MAX)
            .max_by_key(|&v| (neighbour_colors[v].len(), g.degree(v as u32), std::cmp::Reverse(v)))
            .expect("uncoloured vertex remains");
        let mut c = 0u32;
        while neighbour_colors[v].contains(&c) {
            c += 1;
        }
        colors[v] = c;
        max_used = max_used.max(c + 1);
        for &u in g.neighbors(v as u32) {
            neighbour_colors[u as usize].insert(c);
        }
    }
    (max_used as usize, colors)
}

fn greedy_clique(g: &Graph) -> Vec<u32> {
    let n = g.n();
    let mut best: Vec<u32> = Vec::new();
    for start in 0..n as u32 {
        let mut clique = vec![start];
        let mut candidates: Vec<u32> = g.neighbors(start).to_vec();
        while !candidates.is_empty() {
            // pick the candidate with most neighbours among candidates
            let &next = candidates
                .iter()
                .max_by_key(|&&v| {
                    (
                        candidates.iter().filter(|&&u| g.has_edge(u, v)).count(),
                        std::cmp::Reverse(v),
                    )
                })
                .unwrap();
            clique.push(next);
            candidates.retain(|&u| u != next && g.has_edge(u, next));
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best.sort_unstable();
    best
}

/// Exhaustive k-colourability with dynamic saturation ordering.
fn colorable(g: &Graph, k: usize) -> Option<Vec<u32>> {
    let n = g.n();
    let mut colors = vec![u32::MAX; n];

    fn go(g: &Graph, k: usize, colors: &mut Vec<u32>, colored: usize, used: u32) -> bool {
        let n = g.n();
        if colored == n {
            return true;
        }
        // most saturated uncoloured vertex, ties by degree then index
        let v = (0..n)
            .filter(|&v| colors[v] == u32::MAX)
            .max_by_key(|&v| {
                let sat = {
                    let mut seen = 0u32;
                    for &u in g.neighbors(v as u32) {
                        if colors[u as usize] != u32::MAX {
                            seen |= 1 << colors[u as usize];
                        }
                    }
                    seen.count_ones()
                };
                (sat, g.degree(v as u32), std::cmp::Reverse(v))
            })
            .unwrap();
        let mut forbidden = 0u32;
        for &u in g.neighbors(v as u32) {
            if colors[u as usize] != u32::MAX {
                forbidden |= 1 << colors[u as usize];
            }
        }
        let limit = (used + 1).min(k as u32);
        for c in 0..limit {
            if forbidden & (1 << c) != 0 {
                continue;
            }
            colors[v] = c;
            if go(g, k, colors, colored + 1, used.max(c + 1)) {
                return true;
            }
            colors[v] = u32::MAX;
        }
        false
    }

    go(g, k, &mut colors, 0, 0).then_some(colors)
}

/// Checks Eq.-level agreement between the structural formula and the exact
/// packing value on one complement sample.
#[derive(Debug, Clone, Serialize)]
pub struct FormulaCheck {
    pub s: usize,
    pub chi_structural: usize,
    pub chi_exact: usize,
    pub agree: bool,
}

pub fn verify_structural_formula(g_complement: &Graph, budget: u64) -> Result<FormulaCheck> {
    let matching = crate::triangles::max_triangle_matching_with_budget(g_complement, budget)?;
    let s = matching.size();
    let chi_structural = structural_chi(g_complement.n(), s)?;
    let exact = packing_chi_from_complement(g_complement, budget)?;
    Ok(FormulaCheck {
        s,
        chi_structural,
        chi_exact: exact.chi,
        agree: chi_structural == exact.chi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::sample_gnq;
    use crate::rng::RandomSource;

    fn c5() -> Graph {
        Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap()
    }

    #[test]
    fn structural_chi_examples() {
        assert_eq!(structural_chi(10, 2).unwrap(), 4);
        assert_eq!(structural_chi(7, 0).unwrap(), 4);
        assert_eq!(structural_chi(9, 3).unwrap(), 3);
        assert!(structural_chi(5, 2).is_err());
    }

    #[test]
    fn packing_chi_examples() {
        // complement = two disjoint triangles on 6 vertices
        let comp =
            Graph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]).unwrap();
        let res = packing_chi_from_complement(&comp, DEFAULT_BRANCH_BUDGET).unwrap();
        assert_eq!(res.chi, 2);

        // C5 is self-complementary: chi(C5) = 3
        let res = packing_chi(&c5()).unwrap();
        assert_eq!(res.chi, 3);

        // dense K4, complement empty
        let res = packing_chi(&Graph::complete(4)).unwrap();
        assert_eq!(res.chi, 4);
    }

    #[test]
    fn packing_chi_rejects_k4_complement() {
        // dense graph = empty on 4 vertices, complement K4
        match packing_chi(&Graph::empty(4)) {
            Err(Error::K4Present) => {}
            other => panic!("expected K4 error, got {other:?}"),
        }
    }

    #[test]
    fn skipping_a_triangle_can_beat_the_greedy_packing() {
        // The net graph: triangle {0,1,2} with pendant leaves 3,4,5. Taking
        // the triangle yields weight 2; three matching edges yield 3.
        let comp = Graph::from_edges(
            6,
            &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 4), (2, 5)],
        )
        .unwrap();
        let res = packing_chi_from_complement(&comp, DEFAULT_BRANCH_BUDGET).unwrap();
        assert_eq!(res.chi, 3);
    }

    #[test]
    fn generic_exact_chi_examples() {
        assert_eq!(generic_exact_chi(&c5()).unwrap().chi, 3);
        assert_eq!(generic_exact_chi(&Graph::complete(4)).unwrap().chi, 4);
        assert_eq!(generic_exact_chi(&crate::testutil::petersen()).unwrap().chi, 3);
        assert!(generic_exact_chi(&Graph::empty(25)).is_err());
    }

    #[test]
    fn verify_formula_examples() {
        // complement = one triangle on 3 vertices
        let tri = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let check = verify_structural_formula(&tri, DEFAULT_BRANCH_BUDGET).unwrap();
        assert_eq!((check.chi_structural, check.chi_exact), (1, 1));
        assert!(check.agree);

        // complement = bowtie on 5 vertices
        let bowtie =
            Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]).unwrap();
        let check = verify_structural_formula(&bowtie, DEFAULT_BRANCH_BUDGET).unwrap();
        assert_eq!((check.chi_structural, check.chi_exact), (2, 2));
        assert!(check.agree);

        // complement = K_{1,3}: no near-perfect matching after S = {} so
        // the whp formula fails here, by design
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let check = verify_structural_formula(&star, DEFAULT_BRANCH_BUDGET).unwrap();
        assert_eq!((check.chi_structural, check.chi_exact), (2, 3));
        assert!(!check.agree);
    }

    #[test]
    fn packing_agrees_with_generic_on_random_k4_free_complements() {
        let mut checked = 0;
        let mut t = 0u64;
        while checked < 150 {
            t += 1;
            let n = 5 + (t as usize % 8);
            let q = 0.15 + 0.05 * (t % 8) as f64;
            let comp = sample_gnq(n, q, &mut RandomSource::new(500, t).rng()).unwrap();
            if find_k4(&comp).is_some() {
                continue;
            }
            let dense = complement(&comp);
            let packing = packing_chi_from_complement(&comp, DEFAULT_BRANCH_BUDGET).unwrap();
            let generic = generic_exact_chi(&dense).unwrap();
            assert_eq!(packing.chi, generic.chi, "n={n} q={q} t={t}");
            checked += 1;
        }
    }

    #[test]
    fn exact_chi_never_exceeds_structural_when_near_perfect() {
        let opts = crate::matching::StructureOptions::default();
        for t in 0..80 {
            let comp = sample_gnq(12, 0.18, &mut RandomSource::new(71, t).rng()).unwrap();
            if find_k4(&comp).is_some() {
                continue;
            }
            let mut rng = RandomSource::new(72, t).rng();
            let rep = crate::matching::structure_check(&comp, 0.18, t, &mut rng, &opts).unwrap();
            let check = verify_structural_formula(&comp, DEFAULT_BRANCH_BUDGET).unwrap();
            if rep.near_perfect {
                assert!(
                    check.chi_exact <= check.chi_structural,
                    "exact {} > structural {} with near-perfect matching",
                    check.chi_exact,
                    check.chi_structural
                );
            }
        }
    }
}
