//! Seeded, thread-count independent Monte Carlo.
//!
//! Samples are generated in fixed-size chunks; chunk `c` draws from the
//! ChaCha8 stream `c` of the master seed, so the output depends only on the
//! seed and the sample count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub const CHUNK: usize = 1 << 14;

pub fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// Calls `draw` `n` times in parallel and returns the draws in a fixed order.
pub fn sample<T, F>(n: usize, seed: u64, draw: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = chunk_rng(seed, c);
            let len = CHUNK.min(n - c * CHUNK);
            (0..len).map(|_| draw(&mut rng)).collect::<Vec<_>>()
        })
        .collect()
}

/// Cumulative digit distribution for i.i.d. digit draws.
#[derive(Clone, Debug)]
pub struct DigitLaw {
    cumulative: Vec<f64>,
}

impl DigitLaw {
    pub fn new(weights: &[f64]) -> Self {
        let total: f64 = weights.iter().sum();
        let mut acc = 0.0;
        let cumulative = weights
            .iter()
            .map(|w| {
                acc += w / total;
                acc
            })
            .collect();
        Self { cumulative }
    }

    pub fn len(&self) -> usize {
        self.cumulative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumulative.is_empty()
    }

    pub fn draw<R: Rng>(&self, rng: &mut R) -> u8 {
        let u: f64 = rng.random();
        let k = self.cumulative.partition_point(|&c| c <= u);
        // zero-weight digits are never returned, even at the top end
        k.min(self.last_positive()) as u8
    }

    fn last_positive(&self) -> usize {
        let mut k = self.cumulative.len() - 1;
        while k > 0 && self.cumulative[k] == self.cumulative[k - 1] {
            k -= 1;
        }
        k
    }
}

/// A Monte Carlo probability estimate.
///
/// `band_mass` is the fraction of samples whose membership could not be
/// decided because the sample lies within the truncation band of the set's
/// boundary; those samples are counted as outside.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub sigma: f64,
    pub band_mass: f64,
    pub n_samples: usize,
}

impl McEstimate {
    pub fn from_counts(inside: usize, uncertain: usize, n: usize) -> Self {
        let nf = n as f64;
        let p = inside as f64 / nf;
        Self { estimate: p, sigma: (p * (1.0 - p) / nf).sqrt(), band_mass: uncertain as f64 / nf, n_samples: n }
    }

    /// Whether `exact` lies within `k·σ` plus the band mass of the estimate;
    /// undecided samples may belong to the set, so the band only widens the
    /// interval upward.
    pub fn agrees_with(&self, exact: f64, k: f64) -> bool {
        let lo = self.estimate - k * self.sigma;
        let hi = self.estimate + self.band_mass + k * self.sigma;
        exact >= lo - 1e-12 && exact <= hi + 1e-12
    }

    pub fn deviation(&self, exact: f64) -> f64 {
        let lo = self.estimate;
        let hi = self.estimate + self.band_mass;
        if exact < lo {
            lo - exact
        } else if exact > hi {
            exact - hi
        } else {
            0.0
        }
    }
}

/// Kolmogorov–Smirnov distance between the empirical law of `sorted` and the
/// continuous CDF `cdf`.
pub fn ks_distance(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov–Smirnov distance of two sorted samples.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Number of samples of the sorted slice in `[lo, hi)`.
pub fn count_in(sorted: &[f64], lo: f64, hi: f64) -> usize {
    if hi <= lo {
        return 0;
    }
    sorted.partition_point(|&x| x < hi) - sorted.partition_point(|&x| x < lo)
}

/// Empirical `q`-quantile of a sorted nonempty sample.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let idx = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[idx.min(sorted.len() - 1)]
}

pub fn sort_floats(v: &mut [f64]) {
    v.par_sort_unstable_by(f64::total_cmp);
}
