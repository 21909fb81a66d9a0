//! Streaming statistics and the exact triangle-count moment oracle.

use crate::error::{Error, Result};
use num::{BigInt, BigRational, FromPrimitive, ToPrimitive, Zero};
use serde::Serialize;

/// Streaming moments (up to the third), minimum/maximum, and optionally the
/// raw samples for quantile/KS work. Merging two accumulators is
/// associative and order-independent up to floating rounding.
#[derive(Debug, Clone, Serialize)]
pub struct SampleStats {
    pub count: u64,
    pub mean: f64,
    /// Sum of squared deviations from the mean.
    pub m2: f64,
    /// Sum of cubed deviations from the mean.
    pub m3: f64,
    pub min: f64,
    pub max: f64,
    #[serde(skip)]
    retained: Option<Vec<f64>>,
}

impl SampleStats {
    pub fn new() -> Self {
        SampleStats {
            count: 0,
            mean: 0.0,
            m2: 0.0,
            m3: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            retained: None,
        }
    }

    /// Retains raw samples for quantiles and KS distances. Meant for runs
    /// of at most ~10^6 samples; beyond that run moments-only.
    pub fn retaining() -> Self {
        let mut s = SampleStats::new();
        s.retained = Some(Vec::new());
        s
    }

    pub fn push(&mut self, x: f64) {
        let n1 = self.count as f64;
        self.count += 1;
        let n = self.count as f64;
        let delta = x - self.mean;
        let delta_n = delta / n;
        let term1 = delta * delta_n * n1;
        self.m3 += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * self.m2;
        self.m2 += term1;
        self.mean += delta_n;
        self.min = self.min.min(x);
        self.max = self.max.max(x);
        if let Some(samples) = &mut self.retained {
            samples.push(x);
        }
    }

    pub fn merge(&self, other: &SampleStats) -> SampleStats {
        if self.count == 0 {
            return other.clone();
        }
        if other.count == 0 {
            return self.clone();
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * nb / n;
        let m2 = self.m2 + other.m2 + delta * delta * na * nb / n;
        let m3 = self.m3
            + other.m3
            + delta.powi(3) * na * nb * (na - nb) / (n * n)
            + 3.0 * delta * (na * other.m2 - nb * self.m2) / n;
        let retained = match (&self.retained, &other.retained) {
            (Some(a), Some(b)) => {
                let mut merged = a.clone();
                merged.extend_from_slice(b);
                Some(merged)
            }
            _ => None,
        };
        SampleStats {
            count: self.count + other.count,
            mean,
            m2,
            m3,
            min: self.min.min(other.min),
            max: self.max.max(other.max),
            retained,
        }
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count as f64 - 1.0)
        }
    }

    pub fn sd(&self) -> f64 {
        self.variance().sqrt()
    }

    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.sd() / (self.count as f64).sqrt()
        }
    }

    /// Standardised third moment g1 = (m3/n) / (m2/n)^(3/2).
    pub fn skewness(&self) -> Result<f64> {
        if self.count < 3 {
            return Err(Error::invalid("skewness needs at least 3 samples"));
        }
        if self.m2 <= 0.0 {
            return Err(Error::invalid("skewness undefined for zero variance"));
        }
        let n = self.count as f64;
        Ok(n.sqrt() * self.m3 / self.m2.powf(1.5))
    }

    pub fn retained_sorted(&self) -> Option<Vec<f64>> {
        self.retained.as_ref().map(|s| {
            let mut sorted = s.clone();
            sorted.sort_by(|a, b| a.total_cmp(b));
            sorted
        })
    }

    pub fn quantile(&self, p: f64) -> Option<f64> {
        let sorted = self.retained_sorted()?;
        if sorted.is_empty() {
            return None;
        }
        let idx = ((sorted.len() - 1) as f64 * p).round() as usize;
        Some(sorted[idx])
    }
}

impl Default for SampleStats {
    fn default() -> Self {
        SampleStats::new()
    }
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Sample skewness of a slice.
pub fn skewness(samples: &[f64]) -> Result<f64> {
    let mut stats = SampleStats::new();
    for &x in samples {
        stats.push(x);
    }
    stats.skewness()
}

/// Kolmogorov-Smirnov distance between the empirical CDF of `samples` and
/// the standard normal CDF.
pub fn ks_distance(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::invalid("KS distance needs at least one sample"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let phi = normal_cdf(x);
        let hi = (i as f64 + 1.0) / n - phi;
        let lo = phi - i as f64 / n;
        d = d.max(hi).max(lo);
    }
    Ok(d)
}

/// Affine standardisation (x - mean)/sd.
pub fn standardize(samples: &[f64], mean: f64, sd: f64) -> Result<Vec<f64>> {
    if sd <= 0.0 {
        return Err(Error::invalid("standardise needs sd > 0"));
    }
    Ok(samples.iter().map(|&x| (x - mean) / sd).collect())
}

/// Exact mean and variance of the triangle count of G(n,q), computed in
/// rational arithmetic and emitted as floats.
///
/// mean = C(n,3) q^3. For the variance, only pairs of triangles sharing an
/// edge are correlated (disjoint edge sets are independent), each
/// contributing covariance q^5 - q^6; there are n(n-1)(n-2)(n-3)/2 ordered-
/// apex pairs, i.e. C(n,3)*3(n-3) with both orders counted once each.
pub fn exact_triangle_moments(n: usize, q: f64) -> (f64, f64) {
    let q = BigRational::from_f64(q).expect("finite q");
    let one = BigRational::from_integer(BigInt::from(1));
    let n_big = BigInt::from(n);
    let c3 = if n >= 3 {
        BigRational::from_integer(
            &n_big * (&n_big - BigInt::from(1)) * (&n_big - BigInt::from(2)) / BigInt::from(6),
        )
    } else {
        BigRational::zero()
    };
    let q3 = &q * &q * &q;
    let q5 = &q3 * &q * &q;
    let q6 = &q3 * &q3;
    let mean = &c3 * &q3;
    let edge_pairs = if n >= 4 {
        &c3 * BigRational::from_integer(BigInt::from(3 * (n - 3)))
    } else {
        BigRational::zero()
    };
    let var = &c3 * &q3 * (&one - &q3) + edge_pairs * (&q5 - &q6);
    (
        mean.to_f64().expect("mean fits in f64"),
        var.to_f64().expect("variance fits in f64"),
    )
}

/// First- and second-moment bounds for y(G), straight from the triangle
/// pair/triple/quadruple case counts.
pub fn y_moment_bounds(n: usize, q: f64) -> (f64, f64) {
    let nf = n as f64;
    let bound1 = nf.powi(5) * q.powi(6) + nf.powi(4) * q.powi(5);
    let bound2 = bound1
        + nf.powi(6) * q.powi(8)
        + nf.powi(7) * q.powi(9)
        + nf.powi(8) * q.powi(10)
        + nf.powi(9) * q.powi(11)
        + nf.powi(10) * q.powi(12);
    (bound1, bound2)
}
