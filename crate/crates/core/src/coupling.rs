//! Couplings for the non-concentration experiments.
//!
//! Two couplings are exercised: planting one uniformly random triangle on
//! top of G(n+3,q) (whose law reweights the plain law by the normalised
//! triangle count), and sprinkling G(n',x) on top of G(n',q(n')) to realise
//! G(n',q(n)) as an edge union. Both come with the quantities the chain
//! argument consumes: alpha(n), the schedule n_k, and smoothness scores for
//! power-law q families.

use crate::error::{Error, Result};
use crate::graph::{induced_remove, sample_gnq, union_graphs, Graph, VertexSet};
use crate::rng::RandomSource;
use crate::triangles::{count_x, count_y, max_triangle_matching_with_budget};
use num::{BigInt, BigRational, FromPrimitive, One};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

/// A power-law edge-probability family q(n) = coeff * n^(-exponent).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QFamily {
    pub coeff: f64,
    pub exponent: f64,
}

impl QFamily {
    pub fn new(coeff: f64, exponent: f64) -> Result<Self> {
        if coeff <= 0.0 || exponent <= 0.0 {
            return Err(Error::invalid("q family needs positive coefficient and exponent"));
        }
        Ok(QFamily { coeff, exponent })
    }

    pub fn q(&self, n: usize) -> f64 {
        self.coeff * (n as f64).powf(-self.exponent)
    }

    /// Errors unless 0 < q(n) < 1.
    pub fn q_checked(&self, n: usize) -> Result<f64> {
        let q = self.q(n);
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::invalid(format!(
                "q({n}) = {q} leaves (0, 1) for family {} * n^-{}",
                self.coeff, self.exponent
            )));
        }
        Ok(q)
    }
}

/// r(n) = |q(n+1) - q(n)| q(n)^2 n^3. The family is smooth iff r(n) -> 0;
/// for power laws this happens exactly when the exponent exceeds 2/3.
pub fn smoothness_score(q_at: impl Fn(usize) -> f64, n: usize) -> f64 {
    let qn = q_at(n);
    let qn1 = q_at(n + 1);
    (qn1 - qn).abs() * qn * qn * (n as f64).powi(3)
}

/// The coupling step size alpha(n) = 3 floor(eps n^(3/2) q^(3/2)).
pub fn alpha(n: usize, eps: f64, q: f64) -> usize {
    let x = eps * (n as f64).powf(1.5) * q.powf(1.5);
    // guard the floor against float dust on exactly-representable targets
    3 * ((x + 1e-9).floor() as usize)
}

fn choose3(n: usize) -> f64 {
    if n < 3 {
        0.0
    } else {
        let n = n as u128;
        (n * (n - 1) * (n - 2) / 6) as f64
    }
}

/// Adds the three edges on a uniformly random 3-subset of V(g); returns the
/// new graph and the subset.
pub fn plant_triangle<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<(Graph, VertexSet)> {
    let n = g.n();
    if n < 3 {
        return Err(Error::invalid("planting a triangle needs at least 3 vertices"));
    }
    let picked = rand::seq::index::sample(rng, n, 3);
    let mut verts: Vec<u32> = picked.iter().map(|v| v as u32).collect();
    verts.sort_unstable();
    let edges = [
        (verts[0], verts[1]),
        (verts[0], verts[2]),
        (verts[1], verts[2]),
    ];
    Ok((g.with_edges_added(&edges)?, VertexSet::from_sorted(verts)))
}

/// The likelihood ratio of the planted law against the plain law at sample
/// `h`: triangle count over its expectation.
pub fn planted_density_ratio(h: &Graph, n_plus_3: usize, q: f64) -> Result<f64> {
    let expectation = choose3(n_plus_3) * q.powi(3);
    if expectation <= 0.0 {
        return Err(Error::invalid("planted density ratio needs E[triangles] > 0"));
    }
    Ok(count_x(h) as f64 / expectation)
}

/// The total-variation bound for the planted coupling: E[triangles]^(-1/2).
pub fn tv_bound_planted(n: usize, q: f64) -> Result<f64> {
    let expectation = choose3(n + 3) * q.powi(3);
    if expectation <= 0.0 {
        return Err(Error::invalid("tv bound needs E[triangles] > 0"));
    }
    Ok(expectation.powf(-0.5))
}

#[derive(Debug, Clone, Serialize)]
pub struct PlantedTrial {
    pub trial: u64,
    pub s_planted: usize,
    pub s_without_plant: usize,
    pub x_planted: usize,
    pub x_plain: usize,
    pub density_ratio: f64,
    pub gain_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlantedReport {
    pub n: usize,
    pub q: f64,
    pub trials: usize,
    /// Frequency of s(Q) >= s(Q - T) + 1; equals 1 by construction.
    pub gain_frequency: f64,
    pub mean_x_planted: f64,
    pub se_x_planted: f64,
    pub mean_x_reweighted: f64,
    pub se_x_reweighted: f64,
    /// Paired difference x(Q) - x(G) * ratio(G); its mean estimates 0.
    pub paired_diff_mean: f64,
    pub paired_diff_se: f64,
    pub tv_bound: f64,
    #[serde(skip)]
    pub rows: Vec<PlantedTrial>,
}

/// One coupled draw: sample G(n+3,q), record the reweighted observable,
/// plant a triangle, and compare s on both sides of the plant.
pub fn planted_trial(n: usize, q: f64, source: RandomSource, budget: u64) -> Result<PlantedTrial> {
    let mut rng = source.rng();
    let g = sample_gnq(n + 3, q, &mut rng)?;
    let x_plain = count_x(&g);
    let ratio = planted_density_ratio(&g, n + 3, q)?;
    let (planted, t) = plant_triangle(&g, &mut rng)?;
    let x_planted = count_x(&planted);
    let s_planted = max_triangle_matching_with_budget(&planted, budget)?.size();
    let (without, _) = induced_remove(&planted, &t);
    let s_without = max_triangle_matching_with_budget(&without, budget)?.size();
    // The planted triangle is disjoint from Q - T, so the gain is
    // structural, not statistical.
    let gain_holds = s_planted >= s_without + 1;
    assert!(gain_holds, "planted triangle failed to extend the matching");
    Ok(PlantedTrial {
        trial: source.stream_id,
        s_planted,
        s_without_plant: s_without,
        x_planted,
        x_plain,
        density_ratio: ratio,
        gain_holds,
    })
}

pub fn run_planted_coupling(
    n: usize,
    q: f64,
    trials: usize,
    master_seed: u64,
    budget: u64,
) -> Result<PlantedReport> {
    let rows: Vec<PlantedTrial> = (0..trials as u64)
        .into_par_iter()
        .map(|t| planted_trial(n, q, RandomSource::new(master_seed, t), budget))
        .collect::<Result<Vec<_>>>()?;
    let k = trials.max(1) as f64;
    let gains = rows.iter().filter(|r| r.gain_holds).count();
    let mean_se = |vals: &mut dyn Iterator<Item = f64>| {
        let vals: Vec<f64> = vals.collect();
        let mean = vals.iter().sum::<f64>() / k;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0).max(1.0);
        (mean, (var / k).sqrt())
    };
    let (mean_planted, se_planted) = mean_se(&mut rows.iter().map(|r| r.x_planted as f64));
    let (mean_rw, se_rw) =
        mean_se(&mut rows.iter().map(|r| r.x_plain as f64 * r.density_ratio));
    let (diff_mean, diff_se) = mean_se(
        &mut rows
            .iter()
            .map(|r| r.x_planted as f64 - r.x_plain as f64 * r.density_ratio),
    );
    Ok(PlantedReport {
        n,
        q,
        trials,
        gain_frequency: gains as f64 / k,
        mean_x_planted: mean_planted,
        se_x_planted: se_planted,
        mean_x_reweighted: mean_rw,
        se_x_reweighted: se_rw,
        paired_diff_mean: diff_mean,
        paired_diff_se: diff_se,
        tv_bound: tv_bound_planted(n, q)?,
        rows,
    })
}

/// The sprinkling rate x = (q_hi - q_lo)/(1 - q_lo), zero when the rates
/// are already ordered the easy way.
pub fn sprinkle_x(q_hi: f64, q_lo: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&q_hi) || !(0.0..1.0).contains(&q_lo) {
        return Err(Error::invalid("sprinkle rates must lie in [0, 1)"));
    }
    if q_hi <= q_lo {
        return Ok(0.0);
    }
    Ok((q_hi - q_lo) / (1.0 - q_lo))
}

/// Verifies the union law q_lo + x (1 - q_lo) = q_hi exactly in rational
/// arithmetic, with x formed from the same rationals.
pub fn sprinkle_union_law_exact(q_hi: f64, q_lo: f64) -> bool {
    let (Some(hi), Some(lo)) = (BigRational::from_f64(q_hi), BigRational::from_f64(q_lo)) else {
        return false;
    };
    if hi <= lo {
        return true; // x = 0 and the union is trivially H itself
    }
    let one = BigRational::from_integer(BigInt::one());
    let x = (&hi - &lo) / (&one - &lo);
    &lo + &x * (&one - &lo) == hi
}

#[derive(Debug, Clone, Serialize)]
pub struct SprinkleTrial {
    pub trial: u64,
    pub max_degree_base: usize,
    pub edges_base: usize,
    pub x_base: usize,
    pub s_base: usize,
    pub x_union: usize,
    pub s_union: usize,
    pub new_triangles: usize,
    /// E[new triangles | H] for the sampled base graph H.
    pub conditional_expectation: f64,
    pub new_triangle_bound_holds: bool,
    pub degree_bound_holds: bool,
    pub s_growth_within_new: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SprinkleReport {
    pub n_prime: usize,
    pub q_hi: f64,
    pub q_lo: f64,
    pub x: f64,
    pub eps: f64,
    pub trials: usize,
    pub union_law_exact: bool,
    /// alpha evaluated at (n', q_hi); an upper bound for alpha at the base
    /// scale the chain argument uses.
    pub alpha_ref: usize,
    pub freq_new_triangle_bound: f64,
    pub freq_degree_bound: f64,
    pub freq_s_growth_within_new: f64,
    /// Paired mean/se of new-triangle count minus its per-trial
    /// conditional expectation.
    pub paired_diff_mean: f64,
    pub paired_diff_se: f64,
    #[serde(skip)]
    pub rows: Vec<SprinkleTrial>,
}

/// The exact conditional expectation of the number of fresh triangles when
/// sprinkling rate-x edges on top of `h`: triples with 3 - j missing edges
/// appear with probability x^(3-j).
fn expected_new_triangles(h: &Graph, x: f64) -> f64 {
    let n = h.n() as i128;
    let e = h.edge_count() as i128;
    let x3 = count_x(h) as i128;
    let wedges: i128 = (0..h.n() as u32)
        .map(|v| {
            let d = h.degree(v) as i128;
            d * (d - 1) / 2
        })
        .sum();
    let t3 = x3;
    let t2 = wedges - 3 * t3;
    let t1 = e * (n - 2) - 2 * t2 - 3 * t3;
    let t0 = n * (n - 1) * (n - 2) / 6 - t1 - t2 - t3;
    t0 as f64 * x.powi(3) + t1 as f64 * x.powi(2) + t2 as f64 * x
}

/// One sprinkling draw: H ~ G(n', q_lo), union with G(n', x), and the
/// lemma-level events on the pair.
pub fn sprinkle_trial(
    n_prime: usize,
    q_hi: f64,
    q_lo: f64,
    eps: f64,
    source: RandomSource,
    budget: u64,
) -> Result<SprinkleTrial> {
    let mut rng = source.rng();
    let x = sprinkle_x(q_hi, q_lo)?;
    let base = sample_gnq(n_prime, q_lo, &mut rng)?;
    let sprinkle = sample_gnq(n_prime, x, &mut rng)?;
    let union = union_graphs(&base, &sprinkle)?;

    let x_base = count_x(&base);
    let x_union = count_x(&union);
    let new_triangles = x_union - x_base;
    let s_base = max_triangle_matching_with_budget(&base, budget)?.size();
    let s_union = max_triangle_matching_with_budget(&union, budget)?.size();

    // sandwich sanity on both coupled samples
    debug_assert!(s_base <= x_base && x_base <= s_base + count_y(&base));
    debug_assert!(s_union <= x_union && x_union <= s_union + count_y(&union));

    let d = 2.0 * n_prime as f64 * q_hi;
    let max_degree_base = base.max_degree();
    Ok(SprinkleTrial {
        trial: source.stream_id,
        max_degree_base,
        edges_base: base.edge_count(),
        x_base,
        s_base,
        x_union,
        s_union,
        new_triangles,
        conditional_expectation: expected_new_triangles(&base, x),
        new_triangle_bound_holds: (new_triangles as f64) <= eps.powi(3) * d.powf(1.5),
        degree_bound_holds: (max_degree_base as f64) <= d,
        s_growth_within_new: s_union - s_base <= new_triangles,
    })
}

pub fn run_sprinkle_coupling(
    n_prime: usize,
    q_hi: f64,
    q_lo: f64,
    trials: usize,
    eps: f64,
    master_seed: u64,
    budget: u64,
) -> Result<SprinkleReport> {
    let rows: Vec<SprinkleTrial> = (0..trials as u64)
        .into_par_iter()
        .map(|t| sprinkle_trial(n_prime, q_hi, q_lo, eps, RandomSource::new(master_seed, t), budget))
        .collect::<Result<Vec<_>>>()?;
    let k = trials.max(1) as f64;
    let freq = |f: &dyn Fn(&SprinkleTrial) -> bool| rows.iter().filter(|r| f(r)).count() as f64 / k;
    let diffs: Vec<f64> = rows
        .iter()
        .map(|r| r.new_triangles as f64 - r.conditional_expectation)
        .collect();
    let diff_mean = diffs.iter().sum::<f64>() / k;
    let diff_var = diffs.iter().map(|d| (d - diff_mean).powi(2)).sum::<f64>() / (k - 1.0).max(1.0);
    Ok(SprinkleReport {
        n_prime,
        q_hi,
        q_lo,
        x: sprinkle_x(q_hi, q_lo)?,
        eps,
        trials,
        union_law_exact: sprinkle_union_law_exact(q_hi, q_lo),
        alpha_ref: alpha(n_prime, eps, q_hi),
        freq_new_triangle_bound: freq(&|r| r.new_triangle_bound_holds),
        freq_degree_bound: freq(&|r| r.degree_bound_holds),
        freq_s_growth_within_new: freq(&|r| r.s_growth_within_new),
        paired_diff_mean: diff_mean,
        paired_diff_se: (diff_var / k).sqrt(),
        rows,
    })
}

/// The chain schedule n_0 < n_1 < ... <= 2 n_0 with n_k = n_{k-1} +
/// alpha(n_{k-1}).
pub fn chain_schedule(n0: usize, family: &QFamily, eps: f64) -> Result<Vec<usize>> {
    let mut schedule = vec![n0];
    let mut n = n0;
    loop {
        let q = family.q_checked(n)?;
        let a = alpha(n, eps, q);
        if a == 0 {
            return Err(Error::invalid(format!(
                "alpha({n}) = 0: the chain schedule cannot advance"
            )));
        }
        let next = n + a;
        if next > 2 * n0 {
            break;
        }
        schedule.push(next);
        n = next;
    }
    Ok(schedule)
}

/// Materialised planting chain for small n: repeatedly couple G(m,q) into
/// the planted law on m+3 vertices by embedding the current graph as
/// Q - T, so every step gains at least one triangle deterministically.
/// Behind the cost flag of the single-step route.
pub fn run_planting_chain(
    n: usize,
    q: f64,
    steps: usize,
    source: RandomSource,
    budget: u64,
) -> Result<Vec<usize>> {
    let mut rng = source.rng();
    let mut g = sample_gnq(n, q, &mut rng)?;
    let mut s_values = vec![max_triangle_matching_with_budget(&g, budget)?.size()];
    for _ in 0..steps {
        let m = g.n();
        let picked = rand::seq::index::sample(&mut rng, m + 3, 3);
        let mut t: Vec<u32> = picked.iter().map(|v| v as u32).collect();
        t.sort_unstable();
        // old vertices occupy the new index space minus T, in order
        let mut old_to_new = Vec::with_capacity(m);
        for v in 0..(m + 3) as u32 {
            if !t.contains(&v) {
                old_to_new.push(v);
            }
        }
        let mut edges: Vec<(u32, u32)> = g
            .edges()
            .into_iter()
            .map(|(u, v)| (old_to_new[u as usize], old_to_new[v as usize]))
            .collect();
        edges.extend_from_slice(&[(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]);
        for &tv in &t {
            for u in 0..(m + 3) as u32 {
                if !t.contains(&u) && rng.random::<f64>() < q {
                    edges.push((tv.min(u), tv.max(u)));
                }
            }
        }
        let planted = Graph::from_edges(m + 3, &edges)?;
        s_values.push(max_triangle_matching_with_budget(&planted, budget)?.size());
        g = planted;
    }
    Ok(s_values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangles::DEFAULT_BRANCH_BUDGET;

    #[test]
    fn smoothness_verdicts_on_power_families() {
        let grid = [1_000usize, 10_000, 100_000, 1_000_000];
        let score = |a: f64, n: usize| smoothness_score(|m| (m as f64).powf(-a), n);
        // a = 0.7: decreasing scores
        let s: Vec<f64> = grid.iter().map(|&n| score(0.7, n)).collect();
        assert!(s.windows(2).all(|w| w[1] < w[0]), "scores {s:?}");
        // a = 0.6: increasing scores
        let s: Vec<f64> = grid.iter().map(|&n| score(0.6, n)).collect();
        assert!(s.windows(2).all(|w| w[1] > w[0]), "scores {s:?}");
        // a = 2/3: flat near 2/3 c^3
        let s: Vec<f64> = grid.iter().map(|&n| score(2.0 / 3.0, n)).collect();
        for v in &s {
            assert!((v - 2.0 / 3.0).abs() < 0.01, "boundary score {v}");
        }
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(10_000, 0.1, 1e-3), 9);
        assert_eq!(alpha(1_000_000, 0.1, 1e-4), 300);
        assert_eq!(alpha(100, 1e-6, 1e-3), 0);
    }

    #[test]
    fn plant_examples() {
        let mut rng = RandomSource::new(1, 0).rng();
        let (q, t) = plant_triangle(&Graph::empty(3), &mut rng).unwrap();
        assert_eq!(q.edge_count(), 3);
        assert_eq!(t.len(), 3);

        let k5 = Graph::complete(5);
        let (q, _) = plant_triangle(&k5, &mut rng).unwrap();
        assert_eq!(q, k5);

        assert!(plant_triangle(&Graph::empty(2), &mut rng).is_err());
    }

    #[test]
    fn plant_subset_frequencies_are_uniform() {
        let n = 5;
        let g = Graph::empty(n);
        let draws = 10_000usize;
        let mut counts = std::collections::BTreeMap::new();
        for t in 0..draws as u64 {
            let mut rng = RandomSource::new(33, t).rng();
            let (_, set) = plant_triangle(&g, &mut rng).unwrap();
            *counts.entry(set.members().to_vec()).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 10); // C(5,3)
        let p = 0.1;
        let se = (p * (1.0 - p) / draws as f64).sqrt();
        for (set, c) in counts {
            let freq = c as f64 / draws as f64;
            assert!((freq - p).abs() <= 4.0 * se, "subset {set:?} frequency {freq}");
        }
    }

    #[test]
    fn density_ratio_examples() {
        // h = K3 on exactly 3 vertices: ratio * P(K3) = 1
        let k3 = Graph::complete(3);
        let q = 0.37;
        let ratio = planted_density_ratio(&k3, 3, q).unwrap();
        assert!((ratio * q.powi(3) - 1.0).abs() < 1e-12);

        // triangle-free sample can never be a planted outcome
        let path = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(planted_density_ratio(&path, 4, 0.3).unwrap(), 0.0);

        assert!(planted_density_ratio(&k3, 3, 0.0).is_err());
    }

    #[test]
    fn density_ratio_has_unit_mean() {
        let (n, q) = (30usize, 0.1);
        let trials = 4000u64;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for t in 0..trials {
            let mut rng = RandomSource::new(44, t).rng();
            let g = sample_gnq(n + 3, q, &mut rng).unwrap();
            let r = planted_density_ratio(&g, n + 3, q).unwrap();
            sum += r;
            sumsq += r * r;
        }
        let mean = sum / trials as f64;
        let var = (sumsq - sum * sum / trials as f64) / (trials as f64 - 1.0);
        let se = (var / trials as f64).sqrt();
        assert!((mean - 1.0).abs() <= 3.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn tv_bound_examples() {
        // parameters tuned so E[triangles] = 100 exactly
        let n = 17usize; // C(20,3) = 1140
        let q = (100.0f64 / 1140.0).cbrt();
        assert!((tv_bound_planted(n, q).unwrap() - 0.1).abs() < 1e-12);

        let q1 = (1.0f64 / 1140.0).cbrt();
        assert!((tv_bound_planted(n, q1).unwrap() - 1.0).abs() < 1e-12);

        assert!(tv_bound_planted(10, 0.0).is_err());
    }

    #[test]
    fn planted_coupling_small_run() {
        let report = run_planted_coupling(40, 0.05, 300, 99, DEFAULT_BRANCH_BUDGET).unwrap();
        assert_eq!(report.gain_frequency, 1.0);
        // importance-sampling identity within 4 paired standard errors
        assert!(
            report.paired_diff_mean.abs() <= 4.0 * report.paired_diff_se.max(1e-12),
            "paired diff {} se {}",
            report.paired_diff_mean,
            report.paired_diff_se
        );
    }

    #[test]
    fn planted_coupling_q_one_is_degenerate_and_monotone() {
        // q = 1 is outside the ratio's domain (its expectation formula still
        // works) but the structural gain must hold: use q close to 1.
        let report = run_planted_coupling(9, 0.9, 50, 7, DEFAULT_BRANCH_BUDGET).unwrap();
        assert_eq!(report.gain_frequency, 1.0);
    }

    #[test]
    fn sprinkle_x_examples() {
        let x = sprinkle_x(0.01, 0.009).unwrap();
        assert!((x - 0.001 / 0.991).abs() < 1e-15);
        assert_eq!(sprinkle_x(0.01, 0.01).unwrap(), 0.0);
        assert_eq!(sprinkle_x(0.25, 0.0).unwrap(), 0.25);
        assert!(sprinkle_x(1.0, 0.5).is_err());
    }

    #[test]
    fn union_law_is_exact_in_rationals() {
        assert!(sprinkle_union_law_exact(0.01, 0.009));
        assert!(sprinkle_union_law_exact(4.5e-4, 4.4e-4));
        assert!(sprinkle_union_law_exact(0.5, 0.5));
    }

    #[test]
    fn expected_new_triangles_tiny_cases() {
        // H = single edge on 3 vertices: only the one triple, with one
        // H-edge, so E = x^2.
        let h = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let x = 0.2;
        assert!((expected_new_triangles(&h, x) - x * x).abs() < 1e-15);
        // H = wedge on 3 vertices: E = x.
        let h = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!((expected_new_triangles(&h, x) - x).abs() < 1e-15);
        // H empty on 4 vertices: E = 4 x^3.
        let h = Graph::empty(4);
        assert!((expected_new_triangles(&h, x) - 4.0 * x.powi(3)).abs() < 1e-12);
    }

    #[test]
    fn sprinkle_zero_rate_changes_nothing() {
        let report =
            run_sprinkle_coupling(60, 0.02, 0.02, 20, 0.1, 5, DEFAULT_BRANCH_BUDGET).unwrap();
        assert!(report.union_law_exact);
        for row in &report.rows {
            assert_eq!(row.new_triangles, 0);
            assert_eq!(row.s_base, row.s_union);
            assert!(row.s_growth_within_new);
        }
    }

    #[test]
    fn sprinkle_conditional_expectation_is_calibrated() {
        let report =
            run_sprinkle_coupling(120, 0.03, 0.028, 400, 0.1, 6, DEFAULT_BRANCH_BUDGET).unwrap();
        assert!(report.union_law_exact);
        assert_eq!(report.freq_s_growth_within_new, 1.0);
        assert!(
            report.paired_diff_mean.abs() <= 4.0 * report.paired_diff_se.max(1e-12),
            "paired diff {} se {}",
            report.paired_diff_mean,
            report.paired_diff_se
        );
    }

    #[test]
    fn chain_schedule_examples() {
        // q(n) = 1/n makes n^(3/2) q^(3/2) = 1, so eps = 3.5 pins alpha = 9.
        let family = QFamily::new(1.0, 1.0).unwrap();
        let schedule = chain_schedule(100, &family, 3.5).unwrap();
        let expected: Vec<usize> = (0..12).map(|k| 100 + 9 * k).collect();
        assert_eq!(schedule, expected);
        assert!(schedule.windows(2).all(|w| w[1] > w[0]));
        let last = *schedule.last().unwrap();
        assert!(last >= 200 - alpha(200, 3.5, family.q(200)));

        // eps too small to advance
        assert!(chain_schedule(100, &family, 1e-3).is_err());
    }

    #[test]
    fn planting_chain_grows_s() {
        let s = run_planting_chain(30, 0.05, 10, RandomSource::new(8, 0), DEFAULT_BRANCH_BUDGET)
            .unwrap();
        assert_eq!(s.len(), 11);
        // each planted step adds a triangle on three fresh vertices
        assert!(s.windows(2).all(|w| w[1] >= w[0] + 1));
    }
}
