//! A laboratory for the structure of colourings of very dense random
//! graphs.
//!
//! The dense graph G(n,p) with q = 1 - p small is studied through its
//! sparse complement G(n,q): the optimal colouring is governed by the
//! maximum triangle-matching S(G) of the complement plus a near-perfect
//! matching on what remains, and the chromatic number collapses to
//! ceil((n - s)/2). This crate provides the exact solvers (triangle
//! matching, {edge, triangle} packing, small exact colouring, bipartite and
//! general matchings), the pseudorandomness/martingale/coupling
//! instrumentation around them, and streaming statistics for the Monte
//! Carlo campaigns driven by the companion CLI.

pub mod audit;
pub mod bruteforce;
pub mod chromatic;
pub mod coupling;
pub mod error;
pub mod graph;
pub mod martingale;
pub mod matching;
pub mod rng;
pub mod stats;
pub mod triangles;

pub use error::{Error, Result};
pub use graph::{complement, induced_remove, neighborhood, sample_gnq, union_graphs, Graph, VertexSet};
pub use rng::RandomSource;
pub use triangles::{
    count_x, count_y, enumerate_triangles, greedy_triangle_matching, max_triangle_matching,
    max_triangle_matching_with_budget, Triangle, TriangleMatching,
};

#[cfg(test)]
pub(crate) mod testutil {
    use crate::graph::Graph;

    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(10, &edges).unwrap()
    }
}
