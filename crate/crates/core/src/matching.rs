//! Exact and approximate 1-NN matching over a representation index.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{squared_distance, Dataset};
use crate::technique::{Codec, Representation, TechniqueConfig};

/// Random access to the raw series of a dataset.
pub trait SeriesSource: Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn series_len(&self) -> usize;

    /// Replaces the contents of `buf` with series `index`.
    fn read_into(&self, index: usize, buf: &mut Vec<f64>) -> Result<()>;
}

impl SeriesSource for Dataset {
    fn len(&self) -> usize {
        Dataset::len(self)
    }

    fn series_len(&self) -> usize {
        Dataset::series_len(self)
    }

    fn read_into(&self, index: usize, buf: &mut Vec<f64>) -> Result<()> {
        let s = self.get(index).ok_or(Error::StoreRead {
            index,
            len: Dataset::len(self),
        })?;
        buf.clear();
        buf.extend_from_slice(s);
        Ok(())
    }
}

/// One representation per dataset member, all under one configuration.
#[derive(Debug, Clone)]
pub struct RepresentationIndex {
    config: TechniqueConfig,
    codec: Codec,
    representations: Vec<Representation>,
}

impl RepresentationIndex {
    /// Encodes every series of `source`, in parallel when rayon has threads.
    pub fn build(config: TechniqueConfig, source: &dyn SeriesSource) -> Result<Self> {
        let codec = Codec::new(&config, source.series_len())?;
        let representations = (0..source.len())
            .into_par_iter()
            .map_init(Vec::new, |buf, i| {
                source.read_into(i, buf)?;
                codec.encode(buf)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RepresentationIndex {
            config,
            codec,
            representations,
        })
    }

    pub fn from_parts(
        config: TechniqueConfig,
        series_len: usize,
        representations: Vec<Representation>,
    ) -> Result<Self> {
        let codec = Codec::new(&config, series_len)?;
        let technique = config.technique();
        if representations
            .iter()
            .any(|r| r.technique() != technique || r.residual_symbols().len() != config.segments())
        {
            return Err(Error::ConfigMismatch(format!(
                "representations do not match {config}"
            )));
        }
        Ok(RepresentationIndex {
            config,
            codec,
            representations,
        })
    }

    pub fn config(&self) -> &TechniqueConfig {
        &self.config
    }

    pub fn codec(&self) -> &Codec {
        &self.codec
    }

    pub fn series_len(&self) -> usize {
        self.codec.series_len()
    }

    pub fn len(&self) -> usize {
        self.representations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representations.is_empty()
    }

    pub fn representations(&self) -> &[Representation] {
        &self.representations
    }

    pub fn get(&self, index: usize) -> Option<&Representation> {
        self.representations.get(index)
    }

    pub fn encode(&self, x: &[f64]) -> Result<Representation> {
        self.codec.encode(x)
    }

    pub fn distance(&self, a: &Representation, b: &Representation) -> Result<f64> {
        self.codec.distance(a, b)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MatchOptions {
    /// Candidate removed from the search, typically the query itself.
    pub exclude: Option<usize>,
    /// Compute representation distances with rayon.
    pub parallel: bool,
    /// Stop a raw distance computation once it exceeds the best so far.
    pub early_abandon: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    pub match_id: usize,
    pub euclidean: f64,
    pub repr_distance: f64,
    pub candidates_evaluated: usize,
    pub candidates_pruned: usize,
    pub time_repr: f64,
    pub time_raw: f64,
}

impl MatchResult {
    pub fn candidates(&self) -> usize {
        self.candidates_evaluated + self.candidates_pruned
    }
}

/// Wall-clock accumulator for the two matching phases.
#[derive(Debug, Clone, Copy, Default)]
pub struct PhaseTimer {
    repr: Duration,
    raw: Duration,
}

impl PhaseTimer {
    pub fn repr<T>(&mut self, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.repr += start.elapsed();
        out
    }

    pub fn raw<T>(&mut self, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.raw += start.elapsed();
        out
    }

    pub fn seconds(&self) -> (f64, f64) {
        (self.repr.as_secs_f64(), self.raw.as_secs_f64())
    }
}

fn check_query(query: &[f64], index: &RepresentationIndex, source: &dyn SeriesSource) -> Result<()> {
    if query.len() != index.series_len() || source.series_len() != index.series_len() {
        return Err(Error::ShapeMismatch);
    }
    if source.len() != index.len() {
        return Err(Error::ConfigMismatch(format!(
            "index holds {} series, store holds {}",
            index.len(),
            source.len()
        )));
    }
    Ok(())
}

fn representation_distances(
    query: &Representation,
    index: &RepresentationIndex,
    opts: &MatchOptions,
) -> Result<Vec<(f64, usize)>> {
    let one = |(i, r): (usize, &Representation)| index.distance(query, r).map(|d| (d, i));
    let keep = |&(i, _): &(usize, &Representation)| Some(i) != opts.exclude;
    let reps = index.representations();
    if opts.parallel {
        reps.par_iter().enumerate().filter(keep).map(one).collect()
    } else {
        reps.iter().enumerate().filter(keep).map(one).collect()
    }
}

/// Orders by distance, then index. Candidates arrive in index order and the
/// radix sort is stable; its cost does not depend on the key distribution.
fn sort_candidates(d: &mut [(f64, usize)]) {
    radsort::sort_by_key(d, |c| c.0);
    debug_assert!(d.windows(2).all(|w| w[0].0.total_cmp(&w[1].0).then(w[0].1.cmp(&w[1].1)).is_le()));
}

/// Squared distance, or any value above `limit` once the running sum passes it.
/// Summation order matches `squared_distance`, so completed sums are identical.
fn abandoning_squared_distance(x: &[f64], y: &[f64], limit: f64) -> f64 {
    let mut acc = 0.0;
    for (xc, yc) in x.chunks(16).zip(y.chunks(16)) {
        for (a, b) in xc.iter().zip(yc) {
            let d = a - b;
            acc += d * d;
        }
        if acc > limit {
            break;
        }
    }
    acc
}

fn raw_distance(query: &[f64], candidate: &[f64], best: f64, opts: &MatchOptions) -> f64 {
    if opts.early_abandon && best.is_finite() {
        // Slack keeps abandoned values strictly above `best` after rounding.
        abandoning_squared_distance(query, candidate, best * best * (1.0 + 1e-9)).sqrt()
    } else {
        squared_distance(query, candidate).sqrt()
    }
}

/// Exact nearest neighbour of `query` with lower-bound pruning.
pub fn exact_match(
    query: &[f64],
    index: &RepresentationIndex,
    source: &dyn SeriesSource,
    opts: &MatchOptions,
) -> Result<MatchResult> {
    check_query(query, index, source)?;
    let repr = index.encode(query)?;
    exact_match_encoded(query, &repr, index, source, opts)
}

/// As [`exact_match`] with the query representation supplied by the caller.
pub fn exact_match_encoded(
    query: &[f64],
    query_repr: &Representation,
    index: &RepresentationIndex,
    source: &dyn SeriesSource,
    opts: &MatchOptions,
) -> Result<MatchResult> {
    check_query(query, index, source)?;
    let mut timer = PhaseTimer::default();
    let order = timer.repr(|| -> Result<_> {
        let mut d = representation_distances(query_repr, index, opts)?;
        sort_candidates(&mut d);
        Ok(d)
    })?;
    if order.is_empty() {
        return Err(Error::EmptyInput);
    }

    let mut best = f64::INFINITY;
    let mut best_id = usize::MAX;
    let mut best_repr = f64::NAN;
    let mut evaluated = 0;
    let mut buf = Vec::with_capacity(query.len());
    timer.raw(|| -> Result<()> {
        for &(lb, i) in &order {
            // Strict comparison keeps equal-distance members with lower
            // indices reachable, so ties resolve exactly as a full scan.
            if best < lb {
                break;
            }
            source.read_into(i, &mut buf)?;
            evaluated += 1;
            let d = raw_distance(query, &buf, best, opts);
            if d < best || (d == best && i < best_id) {
                best = d;
                best_id = i;
                best_repr = lb;
            }
        }
        Ok(())
    })?;

    if cfg!(debug_assertions) {
        for &(lb, _) in &order[evaluated..] {
            assert!(lb > best, "pruned candidate with bound {lb} <= best {best}");
        }
    }

    let (time_repr, time_raw) = timer.seconds();
    Ok(MatchResult {
        match_id: best_id,
        euclidean: best,
        repr_distance: best_repr,
        candidates_evaluated: evaluated,
        candidates_pruned: order.len() - evaluated,
        time_repr,
        time_raw,
    })
}

/// Member with minimum representation distance; exact-equality ties are
/// resolved by Euclidean distance, then by index.
pub fn approximate_match(
    query: &[f64],
    index: &RepresentationIndex,
    source: &dyn SeriesSource,
    opts: &MatchOptions,
) -> Result<MatchResult> {
    check_query(query, index, source)?;
    let repr = index.encode(query)?;
    approximate_match_encoded(query, &repr, index, source, opts)
}

pub fn approximate_match_encoded(
    query: &[f64],
    query_repr: &Representation,
    index: &RepresentationIndex,
    source: &dyn SeriesSource,
    opts: &MatchOptions,
) -> Result<MatchResult> {
    check_query(query, index, source)?;
    let mut timer = PhaseTimer::default();
    let ties = timer.repr(|| -> Result<_> {
        let d = representation_distances(query_repr, index, opts)?;
        let min = d.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let total = d.len();
        let ties: Vec<(f64, usize)> = d.into_iter().filter(|p| p.0 == min).collect();
        Ok((ties, total))
    })?;
    let (ties, total) = ties;
    if ties.is_empty() {
        return Err(Error::EmptyInput);
    }

    let mut best = f64::INFINITY;
    let mut best_id = usize::MAX;
    let mut buf = Vec::with_capacity(query.len());
    if ties.len() == 1 {
        best_id = ties[0].1;
    }
    timer.raw(|| -> Result<()> {
        for &(_, i) in &ties {
            source.read_into(i, &mut buf)?;
            let d = raw_distance(query, &buf, best, opts);
            if d < best || (d == best && i < best_id) {
                best = d;
                best_id = i;
            }
        }
        Ok(())
    })?;

    let (time_repr, time_raw) = timer.seconds();
    Ok(MatchResult {
        match_id: best_id,
        euclidean: best,
        repr_distance: ties[0].0,
        candidates_evaluated: ties.len(),
        candidates_pruned: total - ties.len(),
        time_repr,
        time_raw,
    })
}

/// Mean fraction of candidates skipped by exact matching.
pub fn pruning_power(results: &[MatchResult]) -> Result<f64> {
    if results.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sum: f64 = results
        .iter()
        .map(|r| r.candidates_pruned as f64 / r.candidates() as f64)
        .sum();
    Ok(sum / results.len() as f64)
}

/// `d_ED(query, exact) / d_ED(query, approx)`.
pub fn approximate_accuracy(exact: &MatchResult, approx: &MatchResult) -> Result<f64> {
    let (e, a) = (exact.euclidean, approx.euclidean);
    if a < e * (1.0 - 1e-12) {
        return Err(Error::InconsistentResults { exact: e, approx: a });
    }
    if a == 0.0 {
        return Ok(1.0);
    }
    Ok((e / a).min(1.0))
}
