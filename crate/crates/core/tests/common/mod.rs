#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use symapprox::series::{normalize, NormalizedTimeSeries, TimeSeries};

/// Segment means of the two worked example series (W = 4, T = 16).
pub const EXAMPLE_PAA_BLUE: [f64; 4] = [-0.70, -0.81, 0.08, 1.50];
pub const EXAMPLE_PAA_ORANGE: [f64; 4] = [1.72, 0.34, 1.55, 0.49];
pub const EXAMPLE_ED: f64 = 6.71;

/// Two length-16 series with the printed segment means and Euclidean distance.
/// The second is piecewise constant; the first adds a zero-mean `+a, -a` wiggle
/// inside every segment, sized so the within-segment part contributes exactly
/// `ED^2 - T/W * |dPAA|^2`.
pub fn example_series() -> (Vec<f64>, Vec<f64>) {
    let paa_sq: f64 = EXAMPLE_PAA_BLUE
        .iter()
        .zip(EXAMPLE_PAA_ORANGE)
        .map(|(a, b)| 4.0 * (a - b) * (a - b))
        .sum();
    let a = ((EXAMPLE_ED * EXAMPLE_ED - paa_sq) / 16.0).sqrt();
    let blue = EXAMPLE_PAA_BLUE
        .iter()
        .flat_map(|&m| [m + a, m - a, m + a, m - a])
        .collect();
    let orange = EXAMPLE_PAA_ORANGE.iter().flat_map(|&m| [m; 4]).collect();
    (blue, orange)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A normalized series of one of four shapes: white noise, random walk, walk
/// plus season of length `season`, walk plus linear trend.
pub fn random_series(len: usize, season: usize, rng: &mut ChaCha8Rng) -> NormalizedTimeSeries {
    loop {
        let kind = rng.random_range(0..4);
        let mut walk = 0.0;
        let mask: Vec<f64> = (0..season.max(1))
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        let scale: f64 = rng.random_range(0.0..3.0);
        let slope: f64 = rng.random_range(-0.05..0.05);
        let values: Vec<f64> = (0..len)
            .map(|t| {
                let e: f64 = rng.sample(StandardNormal);
                walk += e;
                match kind {
                    0 => e,
                    1 => walk,
                    2 => walk / (len as f64).sqrt() + scale * mask[t % mask.len()],
                    _ => walk + slope * len as f64 * t as f64 / 10.0,
                }
            })
            .collect();
        if let Ok(x) = normalize(&TimeSeries::new(values).unwrap()) {
            return x;
        }
    }
}

/// Points from `lo` to `hi` inclusive with spacing at most `step`.
pub fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect()
}

/// Smallest `|a_i - b_j|` between two ascending sequences.
pub fn min_gap(a: &[f64], b: &[f64]) -> f64 {
    let (mut i, mut j) = (0, 0);
    let mut best = f64::INFINITY;
    while i < a.len() && j < b.len() {
        best = best.min((a[i] - b[j]).abs());
        if a[i] < b[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    best
}

pub fn relative_le(low: f64, high: f64, tol: f64) -> bool {
    low <= high * (1.0 + tol) + 1e-12
}
