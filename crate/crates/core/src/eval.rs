//! Output variables (entropy, TLB, pruning power, approximate accuracy,
//! runtime), bit-budget configuration and experiment drivers.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::{
    approximate_accuracy, approximate_match_encoded, exact_match, exact_match_encoded,
    pruning_power, MatchOptions, MatchResult, RepresentationIndex, SeriesSource,
};
use crate::quantization::{Symbol, MAX_ALPHABET};
use crate::series::{squared_distance, Dataset};
use crate::technique::{Technique, TechniqueConfig};

/// Smallest residual or primary alphabet the resolver accepts.
pub const MIN_ALPHABET: usize = 5;
/// Pair count above which TLB switches from all pairs to a sample.
pub const FULL_PAIR_LIMIT: usize = 2000;
pub const SAMPLED_PAIRS: usize = 1_000_000;
/// Bits per raw value in the reported original size.
pub const VALUE_BITS: usize = 32;

/// Neumaier-compensated mean.
pub fn compensated_mean(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut n = 0usize;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
        n += 1;
    }
    if n == 0 {
        f64::NAN
    } else {
        (sum + comp) / n as f64
    }
}

/// Shannon entropy in bits of the observed symbol frequencies.
pub fn entropy(symbols: &[Symbol], alphabet: usize) -> Result<f64> {
    if symbols.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut counts = vec![0usize; alphabet];
    for &s in symbols {
        let slot = counts
            .get_mut(s as usize)
            .ok_or(Error::OutOfRange(s as f64))?;
        *slot += 1;
    }
    let n = symbols.len() as f64;
    let h = -counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            p * p.log2()
        })
        .sum::<f64>();
    Ok(h.max(0.0))
}

/// Tightness of lower bound of one pair.
pub fn tlb(repr_distance: f64, euclidean: f64) -> Result<f64> {
    if euclidean == 0.0 {
        return Err(Error::ZeroEuclidean);
    }
    Ok(repr_distance / euclidean)
}

/// Series pairs with their Euclidean distances, shared across configurations.
#[derive(Debug, Clone)]
pub struct PairSet {
    pairs: Vec<(u32, u32, f64)>,
    pub excluded: usize,
    pub sampled: bool,
}

impl PairSet {
    /// All unordered pairs up to [`FULL_PAIR_LIMIT`] series, otherwise a
    /// seeded uniform sample of [`SAMPLED_PAIRS`] pairs. Identical pairs are
    /// dropped and counted in `excluded`.
    pub fn new(dataset: &Dataset, seed: u64) -> Result<Self> {
        let n = dataset.len();
        if n < 2 {
            return Err(Error::EmptyInput);
        }
        let sampled = n > FULL_PAIR_LIMIT;
        let raw: Vec<(u32, u32)> = if sampled {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..SAMPLED_PAIRS)
                .map(|_| {
                    let i = rng.random_range(0..n);
                    let mut j = rng.random_range(0..n - 1);
                    if j >= i {
                        j += 1;
                    }
                    (i.min(j) as u32, i.max(j) as u32)
                })
                .collect()
        } else {
            (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i as u32, j as u32)))
                .collect()
        };
        let series = dataset.series();
        let with_d: Vec<(u32, u32, f64)> = raw
            .into_par_iter()
            .map(|(i, j)| {
                let d = squared_distance(&series[i as usize], &series[j as usize]).sqrt();
                (i, j, d)
            })
            .collect();
        let total = with_d.len();
        let pairs: Vec<_> = with_d.into_iter().filter(|p| p.2 > 0.0).collect();
        let excluded = total - pairs.len();
        if excluded > 0 {
            log::warn!("{excluded} identical pairs excluded from TLB");
        }
        Ok(PairSet {
            pairs,
            excluded,
            sampled,
        })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TlbSummary {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub pairs: usize,
    pub excluded: usize,
    pub sampled: bool,
}

/// Mean TLB of `index` over a precomputed pair set.
pub fn mean_tlb_pairs(pairs: &PairSet, index: &RepresentationIndex) -> Result<TlbSummary> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let reps = index.representations();
    let ratios: Vec<f64> = pairs
        .pairs
        .par_iter()
        .map(|&(i, j, d)| {
            index
                .distance(&reps[i as usize], &reps[j as usize])
                .and_then(|r| tlb(r, d))
        })
        .collect::<Result<_>>()?;
    Ok(TlbSummary {
        mean: compensated_mean(ratios.iter().copied()),
        min: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        max: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        pairs: ratios.len(),
        excluded: pairs.excluded,
        sampled: pairs.sampled,
    })
}

/// Mean TLB of `config` on `dataset`.
pub fn mean_tlb(dataset: &Dataset, config: &TechniqueConfig, seed: u64) -> Result<TlbSummary> {
    let index = RepresentationIndex::build(config.clone(), dataset)?;
    mean_tlb_pairs(&PairSet::new(dataset, seed)?, &index)
}

const FLOOR_EPS: f64 = 1e-9;

fn alphabet_for_bits(bits_per_segment: f64) -> usize {
    let a = (bits_per_segment + FLOOR_EPS).exp2().floor();
    if a.is_finite() {
        (a as usize).min(MAX_ALPHABET)
    } else {
        MAX_ALPHABET
    }
}

/// Fills in the per-segment alphabet so the representation fits in
/// `budget_bits`, following `A = floor(2^((budget - component bits) / W))`.
///
/// `component_alphabet` is the season (sSAX) or trend (tSAX) alphabet and is
/// ignored for SAX. `strength` is the dataset mean component strength.
pub fn config_resolver(
    technique: Technique,
    budget_bits: f64,
    segments: usize,
    component_alphabet: Option<usize>,
    season_length: usize,
    strength: f64,
) -> Result<TechniqueConfig> {
    let infeasible = |reason: String| Error::InfeasibleBudget {
        budget: budget_bits,
        reason,
    };
    if segments == 0 {
        return Err(infeasible("zero segments".into()));
    }
    let component = match technique {
        Technique::Sax => None,
        _ => {
            let a = component_alphabet
                .ok_or_else(|| infeasible(format!("{technique} needs a component alphabet")))?;
            if !(2..=MAX_ALPHABET).contains(&a) {
                return Err(Error::InvalidAlphabet(a));
            }
            Some(a)
        }
    };
    let component_bits = match (technique, component) {
        (Technique::Ssax, Some(a)) => season_length as f64 * (a as f64).log2(),
        (Technique::Tsax, Some(a)) => (a as f64).log2(),
        _ => 0.0,
    };
    let remaining = budget_bits - component_bits;
    if remaining <= 0.0 {
        return Err(infeasible(format!(
            "component uses {component_bits:.2} of {budget_bits} bits"
        )));
    }
    let alphabet = alphabet_for_bits(remaining / segments as f64);
    if alphabet < MIN_ALPHABET {
        return Err(infeasible(format!(
            "per-segment alphabet {alphabet} is below {MIN_ALPHABET}"
        )));
    }
    Ok(match technique {
        Technique::Sax => TechniqueConfig::Sax { segments, alphabet },
        Technique::Ssax => TechniqueConfig::Ssax {
            season_length,
            segments,
            season_alphabet: component.unwrap(),
            residual_alphabet: alphabet,
            strength,
        },
        Technique::Tsax => TechniqueConfig::Tsax {
            segments,
            trend_alphabet: component.unwrap(),
            residual_alphabet: alphabet,
            strength,
        },
    })
}

/// Mean representation-phase and raw-phase seconds.
pub fn measure_runtime(results: &[MatchResult]) -> (f64, f64) {
    if results.is_empty() {
        return (0.0, 0.0);
    }
    (
        compensated_mean(results.iter().map(|r| r.time_repr)),
        compensated_mean(results.iter().map(|r| r.time_raw)),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigRecord {
    pub technique: Technique,
    pub label: String,
    pub config: TechniqueConfig,
    pub segments: usize,
    pub residual_alphabet: usize,
    pub component_alphabet: Option<usize>,
    pub bits: f64,
    /// Entropy of the per-segment (residual) symbols.
    pub entropy: f64,
    /// Entropy of the season or trend symbols, for diagnostics.
    pub component_entropy: Option<f64>,
    pub tlb: TlbSummary,
    pub pruning_power: f64,
    pub approximate_accuracy: f64,
    pub mean_reads: f64,
    pub time_repr: f64,
    pub time_raw: f64,
    pub queries: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub dataset_size: usize,
    pub series_len: usize,
    /// Size of one raw series at 32 bits per value.
    pub original_bits: usize,
    pub records: Vec<ConfigRecord>,
}

const TSV_HEADER: &str = "technique\tconfig\tW\tA_res\tA_comp\tbits\tentropy\tentropy_comp\t\
mean_tlb\ttlb_pairs\ttlb_excluded\ttlb_sampled\tpruning_power\tapprox_accuracy\tmean_reads\t\
time_repr\ttime_raw\tqueries";

impl ExperimentReport {
    pub fn to_tsv(&self) -> String {
        let mut out = format!("{TSV_HEADER}\n");
        for r in &self.records {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{:.4}\t{:.6}\t{}\t{:.6}\t{}\t{}\t{}\t{:.6}\t{:.6}\t{:.3}\t{:.6e}\t{:.6e}\t{}",
                r.technique,
                r.label,
                r.segments,
                r.residual_alphabet,
                r.component_alphabet.map_or("-".into(), |a| a.to_string()),
                r.bits,
                r.entropy,
                r.component_entropy.map_or("-".into(), |h| format!("{h:.6}")),
                r.tlb.mean,
                r.tlb.pairs,
                r.tlb.excluded,
                r.tlb.sampled,
                r.pruning_power,
                r.approximate_accuracy,
                r.mean_reads,
                r.time_repr,
                r.time_raw,
                r.queries
            )
            .unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write(&self, tsv: &Path, json: &Path) -> Result<()> {
        std::fs::write(tsv, self.to_tsv()).map_err(|e| Error::io(tsv, e))?;
        std::fs::write(json, self.to_json()).map_err(|e| Error::io(json, e))
    }

    pub fn record(&self, label: &str) -> Option<&ConfigRecord> {
        self.records.iter().find(|r| r.label == label)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExperimentOptions {
    pub seed: u64,
    pub parallel: bool,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        ExperimentOptions {
            seed: 0,
            parallel: true,
        }
    }
}

/// Leave-one-out matching of every member against the rest, per configuration.
pub fn run_accuracy_experiment(
    dataset: &Dataset,
    configs: &[TechniqueConfig],
    opts: &ExperimentOptions,
) -> Result<ExperimentReport> {
    if dataset.len() < 2 {
        return Err(Error::EmptyInput);
    }
    let pairs = PairSet::new(dataset, opts.seed)?;
    let mut records = Vec::with_capacity(configs.len());
    for config in configs {
        records.push(evaluate_config(dataset, &pairs, config, opts)?);
    }
    Ok(ExperimentReport {
        dataset_size: dataset.len(),
        series_len: dataset.series_len(),
        original_bits: VALUE_BITS * dataset.series_len(),
        records,
    })
}

fn evaluate_config(
    dataset: &Dataset,
    pairs: &PairSet,
    config: &TechniqueConfig,
    opts: &ExperimentOptions,
) -> Result<ConfigRecord> {
    let index = RepresentationIndex::build(config.clone(), dataset)?;
    let residual: Vec<Symbol> = index
        .representations()
        .iter()
        .flat_map(|r| r.residual_symbols().iter().copied())
        .collect();
    let component_entropy = match config.component_alphabet() {
        Some(a) => {
            let s: Vec<Symbol> = index
                .representations()
                .iter()
                .flat_map(|r| r.component_symbols().iter().copied())
                .collect();
            Some(entropy(&s, a)?)
        }
        None => None,
    };
    let tlb = mean_tlb_pairs(pairs, &index)?;

    let run_query = |q: usize| -> Result<(MatchResult, MatchResult)> {
        let query = &dataset.series()[q];
        let repr = &index.representations()[q];
        let mopts = MatchOptions {
            exclude: Some(q),
            ..Default::default()
        };
        let exact = exact_match_encoded(query, repr, &index, dataset, &mopts)?;
        let approx = approximate_match_encoded(query, repr, &index, dataset, &mopts)?;
        Ok((exact, approx))
    };
    let results: Vec<(MatchResult, MatchResult)> = if opts.parallel {
        (0..dataset.len()).into_par_iter().map(run_query).collect::<Result<_>>()?
    } else {
        (0..dataset.len()).map(run_query).collect::<Result<_>>()?
    };
    let exact: Vec<MatchResult> = results.iter().map(|r| r.0.clone()).collect();
    let accuracies = results
        .iter()
        .map(|(e, a)| approximate_accuracy(e, a))
        .collect::<Result<Vec<_>>>()?;
    let (time_repr, time_raw) = measure_runtime(&exact);
    Ok(ConfigRecord {
        technique: config.technique(),
        label: config.label(),
        config: config.clone(),
        segments: config.segments(),
        residual_alphabet: config.residual_alphabet(),
        component_alphabet: config.component_alphabet(),
        bits: config.bits(),
        entropy: entropy(&residual, config.residual_alphabet())?,
        component_entropy,
        tlb,
        pruning_power: pruning_power(&exact)?,
        approximate_accuracy: compensated_mean(accuracies),
        mean_reads: compensated_mean(exact.iter().map(|r| r.candidates_evaluated as f64)),
        time_repr,
        time_raw,
        queries: exact.len(),
    })
}

/// Seeded sample of up to `count` distinct query indices, ascending.
pub fn select_queries(dataset_size: usize, count: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = sample(&mut rng, dataset_size, count.min(dataset_size)).into_vec();
    q.sort_unstable();
    q
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub label: String,
    pub technique: Technique,
    pub queries: usize,
    pub truncated: bool,
    /// Mean raw-series reads per query.
    pub mean_reads: f64,
    pub pruning_power: f64,
    pub time_repr: f64,
    pub time_raw: f64,
    pub match_ids: Vec<usize>,
}

impl BenchRecord {
    pub fn time_sum(&self) -> f64 {
        self.time_repr + self.time_raw
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchOptions {
    pub queries: usize,
    pub seed: u64,
    /// Remove each query's own index from its candidates.
    pub exclude_self: bool,
    pub time_limit: Option<Duration>,
    pub parallel: bool,
}

/// Exact matching of sampled queries against `source` for each index.
pub fn run_efficiency_experiment(
    source: &dyn SeriesSource,
    indexes: &[RepresentationIndex],
    opts: &BenchOptions,
) -> Result<Vec<BenchRecord>> {
    let queries = select_queries(source.len(), opts.queries, opts.seed);
    if queries.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut records = Vec::with_capacity(indexes.len());
    let mut query = Vec::with_capacity(source.series_len());
    for index in indexes {
        let started = Instant::now();
        let mut results = Vec::with_capacity(queries.len());
        let mut truncated = false;
        for &q in &queries {
            if opts.time_limit.is_some_and(|l| started.elapsed() >= l) {
                truncated = true;
                break;
            }
            source.read_into(q, &mut query)?;
            let mopts = MatchOptions {
                exclude: opts.exclude_self.then_some(q),
                parallel: opts.parallel,
                early_abandon: false,
            };
            results.push(exact_match(&query, index, source, &mopts)?);
        }
        let (time_repr, time_raw) = measure_runtime(&results);
        records.push(BenchRecord {
            label: index.config().label(),
            technique: index.config().technique(),
            queries: results.len(),
            truncated,
            mean_reads: compensated_mean(results.iter().map(|r| r.candidates_evaluated as f64)),
            pruning_power: if results.is_empty() {
                0.0
            } else {
                pruning_power(&results)?
            },
            time_repr,
            time_raw,
            match_ids: results.iter().map(|r| r.match_id).collect(),
        });
    }
    Ok(records)
}
