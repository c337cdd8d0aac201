//! Synthetic random-walk datasets overlaid with a season mask or linear trend
//! of controlled strength.
//!
//! Every series `i` draws from its own ChaCha8 stream seeded with
//! `splitmix64(seed ^ i)`, so output is independent of thread count. Normal
//! variates come from `rand_distr::StandardNormal` (ziggurat over the uniform
//! stream).

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{mean, normalize, variance, Dataset, DatasetMeta, NormalizedTimeSeries, TimeSeries};
use crate::ssax::{extract_season, season_strength};
use crate::storage::{SeriesMeta, SeriesStore};
use crate::tsax::{fit_trend, trend_strength};

pub const DEFAULT_SEASON_LENGTH: usize = 10;
pub const DEFAULT_TOLERANCE: f64 = 0.005;
pub const MAX_SCALE: f64 = 1e4;
pub const BISECTION_STEPS: usize = 200;
pub const MAX_WALKS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Season,
    Trend,
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "season" => Ok(Kind::Season),
            "trend" => Ok(Kind::Trend),
            _ => Err(Error::InvalidSpec(format!("unknown kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub kind: Kind,
    pub count: usize,
    pub length: usize,
    pub season_length: usize,
    pub target_strength: f64,
    pub tolerance: f64,
    pub seed: u64,
    /// Half-width of the per-series target interval around `target_strength`;
    /// zero gives every series the same target.
    pub spread: f64,
}

impl GenSpec {
    pub fn season(count: usize, length: usize, target_strength: f64, seed: u64) -> Self {
        GenSpec {
            kind: Kind::Season,
            count,
            length,
            season_length: DEFAULT_SEASON_LENGTH,
            target_strength,
            tolerance: DEFAULT_TOLERANCE,
            seed,
            spread: 0.0,
        }
    }

    pub fn trend(count: usize, length: usize, target_strength: f64, seed: u64) -> Self {
        GenSpec {
            kind: Kind::Trend,
            ..Self::season(count, length, target_strength, seed)
        }
    }

    /// Per-series strengths vary uniformly around the mean target, which is
    /// how the large efficiency datasets are built.
    pub fn large(count: usize, length: usize, mean_strength: f64, seed: u64) -> Self {
        let spread = 0.09f64.min(mean_strength - 0.01).min(0.99 - mean_strength).max(0.0);
        GenSpec {
            spread,
            ..Self::season(count, length, mean_strength, seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if self.count == 0 {
            return bad("count must be at least 1".into());
        }
        if self.length < 2 {
            return bad(format!("length {} is below 2", self.length));
        }
        if self.kind == Kind::Season
            && (self.season_length == 0 || !self.length.is_multiple_of(self.season_length))
        {
            return bad(format!(
                "season length {} does not divide length {}",
                self.season_length, self.length
            ));
        }
        if !(0.0..=1.0).contains(&self.target_strength) {
            return bad(format!("strength {} outside [0, 1]", self.target_strength));
        }
        if !(self.tolerance > 0.0 && self.tolerance <= 0.5) {
            return bad(format!("tolerance {} outside (0, 0.5]", self.tolerance));
        }
        if self.target_strength + self.tolerance >= 1.0 {
            return bad(format!(
                "strength {} leaves no room below 1 for tolerance {}",
                self.target_strength, self.tolerance
            ));
        }
        if !(self.spread >= 0.0
            && self.target_strength - self.spread >= 0.0
            && self.target_strength + self.spread + self.tolerance < 1.0)
        {
            return bad(format!("spread {} leaves [0, 1)", self.spread));
        }
        Ok(())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Random stream for series `index` of a dataset seeded with `seed`.
pub fn series_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ index as u64))
}

/// Cumulative sum of i.i.d. standard normal steps; `x_1` is the first step.
pub fn random_walk(len: usize, rng: &mut impl Rng) -> TimeSeries {
    let mut acc = 0.0;
    let values = (0..len)
        .map(|_| {
            acc += rng.sample::<f64, _>(StandardNormal);
            acc
        })
        .collect();
    TimeSeries::new(values).expect("normal draws are finite")
}

#[derive(Debug, Clone)]
pub struct GeneratedSeries {
    pub series: NormalizedTimeSeries,
    /// Strength measured on the normalized output.
    pub strength: f64,
    pub target: f64,
    /// Signed factor applied to the component.
    pub scale: f64,
    pub walks: usize,
}

fn measure(kind: Kind, x: &[f64], season_length: usize) -> Result<f64> {
    match kind {
        Kind::Season => season_strength(x, season_length),
        Kind::Trend => trend_strength(x),
    }
}

/// Strength of `w + s c` as a function of `s`.
///
/// The component is removed exactly by the extractor, so the residual of
/// `w + s c` equals the residual of `w` and only the total variance moves:
/// `R2(s) = 1 - var(r) / (var(w) + 2 s cov(w, c) + s^2 var(c))`.
struct StrengthCurve {
    var_res: f64,
    var_w: f64,
    cov: f64,
    var_c: f64,
}

impl StrengthCurve {
    fn at(&self, s: f64) -> f64 {
        let total = self.var_w + 2.0 * s * self.cov + s * s * self.var_c;
        1.0 - self.var_res / total
    }

    /// Scale at which the strength is smallest.
    fn turning_point(&self) -> f64 {
        -self.cov / self.var_c
    }
}

fn bisect(curve: &StrengthCurve, mut lo: f64, mut hi: f64, target: f64, increasing: bool) -> f64 {
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (curve.at(mid) < target) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let pick = |s: f64| (curve.at(s) - target).abs();
    if pick(lo) <= pick(hi) {
        lo
    } else {
        hi
    }
}

/// Scale in `[0, MAX_SCALE]` on one monotone branch of the curve reaching
/// `target`, or `None` when the target is out of reach for this walk.
fn solve_scale(curve: &StrengthCurve, target: f64) -> Option<f64> {
    let turn = curve.turning_point();
    let base = curve.at(0.0);
    if target >= base {
        let lo = turn.max(0.0);
        if curve.at(MAX_SCALE) < target {
            return None;
        }
        Some(bisect(curve, lo, MAX_SCALE, target, true))
    } else {
        if turn <= 0.0 || curve.at(turn) > target {
            return None;
        }
        Some(bisect(curve, 0.0, turn.min(MAX_SCALE), target, false))
    }
}

fn component(kind: Kind, len: usize, season_length: usize, rng: &mut impl Rng) -> Vec<f64> {
    match kind {
        Kind::Season => {
            let mut mask: Vec<f64> = (0..season_length)
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect();
            let m = mean(&mask);
            mask.iter_mut().for_each(|v| *v -= m);
            (0..len).map(|t| mask[t % season_length]).collect()
        }
        Kind::Trend => {
            let centre = (len as f64 + 1.0) / 2.0;
            (1..=len).map(|t| t as f64 - centre).collect()
        }
    }
}

fn residuals(kind: Kind, x: &[f64], season_length: usize) -> Result<Vec<f64>> {
    Ok(match kind {
        Kind::Season => extract_season(x, season_length)?.1,
        Kind::Trend => fit_trend(x)?.residuals,
    })
}

fn covariance(a: &[f64], b: &[f64]) -> f64 {
    let (ma, mb) = (mean(a), mean(b));
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - ma) * (y - mb))
        .sum::<f64>()
        / a.len() as f64
}

/// Draws one series whose measured strength is within the tolerance of `target`.
pub fn gen_series_with_target(spec: &GenSpec, target: f64, rng: &mut impl Rng) -> Result<GeneratedSeries> {
    let len = spec.length;
    let l = spec.season_length;
    for walk_no in 1..=MAX_WALKS {
        let walk = random_walk(len, rng);
        let comp = component(spec.kind, len, l, rng);
        let base = match normalize(&walk) {
            Ok(b) => b,
            Err(_) => continue,
        };
        let base_strength = measure(spec.kind, &base, l)?;
        if (base_strength - target).abs() <= spec.tolerance {
            return Ok(GeneratedSeries {
                series: base,
                strength: base_strength,
                target,
                scale: 0.0,
                walks: walk_no,
            });
        }
        let var_c = variance(&comp);
        if var_c <= 0.0 {
            return Err(Error::InvalidSpec("degenerate component".into()));
        }
        let res = residuals(spec.kind, &walk, l)?;
        for sign in [1.0, -1.0] {
            let signed: Vec<f64> = comp.iter().map(|v| sign * v).collect();
            let curve = StrengthCurve {
                var_res: variance(&res),
                var_w: variance(&walk),
                cov: covariance(&walk, &signed),
                var_c,
            };
            let Some(scale) = solve_scale(&curve, target) else {
                continue;
            };
            let x: Vec<f64> = walk.iter().zip(&signed).map(|(w, c)| w + scale * c).collect();
            let Ok(series) = normalize(&TimeSeries::new(x)?) else {
                continue;
            };
            let strength = measure(spec.kind, &series, l)?;
            if (strength - target).abs() <= spec.tolerance {
                return Ok(GeneratedSeries {
                    series,
                    strength,
                    target,
                    scale: sign * scale,
                    walks: walk_no,
                });
            }
        }
    }
    Err(Error::ConvergenceFailure {
        target,
        attempts: MAX_WALKS,
    })
}

/// Series `index` of the dataset described by `spec`.
pub fn gen_series(spec: &GenSpec, index: usize) -> Result<GeneratedSeries> {
    let mut rng = series_rng(spec.seed, index);
    let target = if spec.spread > 0.0 {
        let u: f64 = rng.random();
        spec.target_strength - spec.spread + 2.0 * spec.spread * u
    } else {
        spec.target_strength
    };
    gen_series_with_target(spec, target, &mut rng)
}

fn gen_range(spec: &GenSpec, range: std::ops::Range<usize>) -> Result<Vec<GeneratedSeries>> {
    range.into_par_iter().map(|i| gen_series(spec, i)).collect()
}

fn series_meta(spec: &GenSpec, strength: f64) -> SeriesMeta {
    match spec.kind {
        Kind::Season => SeriesMeta {
            season_strength: Some(strength),
            trend_strength: None,
            season_length: Some(spec.season_length),
        },
        Kind::Trend => SeriesMeta {
            season_strength: None,
            trend_strength: Some(strength),
            season_length: None,
        },
    }
}

/// In-memory dataset plus the measured strength of each member.
pub fn gen_dataset(spec: &GenSpec) -> Result<(Dataset, Vec<f64>)> {
    spec.validate()?;
    let generated = gen_range(spec, 0..spec.count)?;
    let strengths: Vec<f64> = generated.iter().map(|g| g.strength).collect();
    let mean_strength = Some(mean(&strengths));
    let meta = match spec.kind {
        Kind::Season => DatasetMeta {
            season_length: Some(spec.season_length),
            season_strength: mean_strength,
            trend_strength: None,
        },
        Kind::Trend => DatasetMeta {
            season_length: None,
            season_strength: None,
            trend_strength: mean_strength,
        },
    };
    let series = generated.into_iter().map(|g| g.series).collect();
    Ok((Dataset::new(series, meta)?, strengths))
}

/// Generates straight into a store at `root`, in bounded-memory batches.
pub fn gen_to_store(spec: &GenSpec, root: &Path) -> Result<SeriesStore> {
    spec.validate()?;
    let mut store = SeriesStore::create(root)?;
    let batch = 4096;
    let mut start = 0;
    while start < spec.count {
        let end = (start + batch).min(spec.count);
        for (offset, g) in gen_range(spec, start..end)?.into_iter().enumerate() {
            store.write_series(start + offset, &g.series, series_meta(spec, g.strength))?;
        }
        log::debug!("generated {end}/{} series", spec.count);
        start = end;
    }
    store.finish()
}
