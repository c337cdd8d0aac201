use std::path::{Path, PathBuf};
use std::time::Duration;

use symapprox::datagen::{gen_to_store, GenSpec, Kind};
use symapprox::eval::{run_accuracy_experiment, run_efficiency_experiment, BenchOptions, ExperimentOptions};
use symapprox::matching::{
    approximate_match_encoded, exact_match_encoded, MatchOptions, MatchResult, RepresentationIndex,
    SeriesSource,
};
use symapprox::series::{normalize, NormalizedTimeSeries, TimeSeries};
use symapprox::storage::{load_index, persist_index, SeriesStore};
use symapprox::technique::{Technique, TechniqueConfig};

use crate::config::{default_grid, resolve, ConfigArg};
use crate::error::CliError;
use crate::table::Table;
use crate::{BenchArgs, EncodeArgs, EvalArgs, GenerateArgs, KindArg, MatchArgs, Mode};

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn opt(v: Option<f64>) -> String {
    v.map_or("-".into(), |s| format!("{s:.4}"))
}

pub fn generate(a: &GenerateArgs) -> Result<(), CliError> {
    let kind = match a.kind {
        KindArg::Season => Kind::Season,
        KindArg::Trend => Kind::Trend,
    };
    let base = if a.large {
        GenSpec::large(a.count, a.length, a.strength, a.seed)
    } else {
        GenSpec::season(a.count, a.length, a.strength, a.seed)
    };
    let spec = GenSpec {
        kind,
        season_length: a.season_length,
        tolerance: a.tolerance,
        ..base
    };
    spec.validate()?;
    let store = gen_to_store(&spec, &a.out)?;
    let m = store.manifest();
    let mut t = Table::new(&["dataset", "I", "T", "mean_season", "mean_trend"]);
    t.row(vec![
        a.out.display().to_string(),
        m.len().to_string(),
        m.series_len().to_string(),
        opt(m.mean_season_strength),
        opt(m.mean_trend_strength),
    ]);
    print!("{}", t.render());
    Ok(())
}

fn open_store(path: &Path, uncached: bool) -> Result<SeriesStore, CliError> {
    let mut store = SeriesStore::open(path)?;
    if store.is_empty() {
        return Err(CliError::Validation(format!("{} holds no series", path.display())));
    }
    store.set_uncached(uncached);
    Ok(store)
}

/// The persisted index for `config`, or a fresh in-memory build.
fn index_for(store: &SeriesStore, config: &TechniqueConfig) -> Result<RepresentationIndex, CliError> {
    match load_index(store, config) {
        Ok(index) => {
            log::info!("using persisted index for {}", config.label());
            Ok(index)
        }
        Err(e) => {
            log::info!("building index for {} ({e})", config.label());
            Ok(RepresentationIndex::build(config.clone(), store)?)
        }
    }
}

pub fn encode(a: &EncodeArgs) -> Result<(), CliError> {
    let store = open_store(&a.data, false)?;
    let config = resolve(&a.config.to_arg()?, a.config.budget, &store)?;
    let index = RepresentationIndex::build(config.clone(), &store)?;
    let path = persist_index(&store, &index)?;
    let mut t = Table::new(&["config", "W", "A_res", "A_comp", "strength", "bits", "budget", "index"]);
    t.row(vec![
        config.label(),
        config.segments().to_string(),
        config.residual_alphabet().to_string(),
        config.component_alphabet().map_or("-".into(), |c| c.to_string()),
        opt(config.strength()),
        format!("{:.4}", config.bits()),
        format!("{}", a.config.budget),
        path.display().to_string(),
    ]);
    print!("{}", t.render());
    Ok(())
}

fn read_query(path: &Path, data: &Path, series_len: usize) -> Result<NormalizedTimeSeries, CliError> {
    let resolved: PathBuf = if path.is_relative() && !path.exists() {
        data.join(path)
    } else {
        path.to_path_buf()
    };
    let bytes = std::fs::read(&resolved).map_err(|e| CliError::io(&resolved, e))?;
    if bytes.len() != series_len * 8 {
        return Err(CliError::Validation(format!(
            "{}: {} bytes, expected {} values of 8 bytes",
            resolved.display(),
            bytes.len(),
            series_len
        )));
    }
    let values: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    // Already-normalized queries are used bit for bit.
    match NormalizedTimeSeries::new(values.clone()) {
        Ok(x) => Ok(x),
        Err(_) => Ok(normalize(&TimeSeries::new(values)?)?),
    }
}

pub fn matching(a: &MatchArgs, parallel: bool) -> Result<(), CliError> {
    if a.query.is_empty() && a.query_index.is_empty() {
        return Err(CliError::Validation("give --query or --query-index".into()));
    }
    let store = open_store(&a.data, a.uncached)?;
    let config = resolve(&a.config.to_arg()?, a.config.budget, &store)?;
    for &i in &a.query_index {
        if i >= store.len() {
            return Err(CliError::Validation(format!("query index {i} outside 0..{}", store.len())));
        }
    }
    let mut queries = Vec::new();
    for p in &a.query {
        queries.push((p.display().to_string(), None, read_query(p, &a.data, store.series_len())?));
    }
    for &i in &a.query_index {
        queries.push((format!("#{i}"), Some(i), store.read_series(i)?));
    }

    let index = index_for(&store, &config)?;
    let mut t = Table::new(&[
        "query", "mode", "match_id", "euclidean", "repr_dist", "evaluated", "pruned", "time_repr", "time_raw",
    ]);
    for (name, member, x) in &queries {
        let opts = MatchOptions {
            exclude: if a.exclude_self { *member } else { None },
            parallel,
            early_abandon: a.early_abandon,
        };
        let repr = index.encode(x)?;
        let mut results: Vec<(&str, MatchResult)> = Vec::new();
        if a.mode != Mode::Approx {
            results.push(("exact", exact_match_encoded(x, &repr, &index, &store, &opts)?));
        }
        if a.mode != Mode::Exact {
            results.push(("approx", approximate_match_encoded(x, &repr, &index, &store, &opts)?));
        }
        for (mode, r) in results {
            t.row(vec![
                name.clone(),
                mode.into(),
                r.match_id.to_string(),
                format!("{:.6}", r.euclidean),
                format!("{:.6}", r.repr_distance),
                r.candidates_evaluated.to_string(),
                r.candidates_pruned.to_string(),
                format!("{:.6}", r.time_repr),
                format!("{:.6}", r.time_raw),
            ]);
        }
    }
    println!("{}", config.label());
    print!("{}", t.render());
    if let Some(out) = &a.out {
        write_file(out, &t.to_tsv())?;
    }
    Ok(())
}

fn resolve_all(args: &[ConfigArg], budget: f64, store: &SeriesStore) -> Result<Vec<TechniqueConfig>, CliError> {
    let grid;
    let args = if args.is_empty() {
        grid = default_grid();
        &grid[..]
    } else {
        args
    };
    args.iter().map(|c| resolve(c, budget, store)).collect()
}

pub fn eval(a: &EvalArgs, parallel: bool) -> Result<(), CliError> {
    let store = open_store(&a.data, false)?;
    let configs = resolve_all(&a.configs, a.budget, &store)?;
    if store.len() < 2 {
        return Err(CliError::Validation("leave-one-out needs at least 2 series".into()));
    }
    let dataset = store.load_dataset()?;
    let report = run_accuracy_experiment(&dataset, &configs, &ExperimentOptions { seed: a.seed, parallel })?;

    let mut t = Table::new(&[
        "config", "bits", "entropy", "tlb", "pruning", "approx_acc", "reads", "time_repr", "time_raw",
    ]);
    for r in &report.records {
        t.row(vec![
            r.label.clone(),
            format!("{:.1}", r.bits),
            format!("{:.4}", r.entropy),
            format!("{:.4}", r.tlb.mean),
            format!("{:.4}", r.pruning_power),
            format!("{:.4}", r.approximate_accuracy),
            format!("{:.1}", r.mean_reads),
            format!("{:.6}", r.time_repr),
            format!("{:.6}", r.time_raw),
        ]);
    }
    println!("I={} T={} original_bits={}", report.dataset_size, report.series_len, report.original_bits);
    print!("{}", t.render());
    if let Some(out) = &a.out {
        write_file(out, &report.to_tsv())?;
    }
    if let Some(json) = &a.json {
        write_file(json, &report.to_json())?;
    }
    Ok(())
}

pub fn bench(a: &BenchArgs, parallel: bool) -> Result<(), CliError> {
    if let Some(l) = a.time_limit {
        if !(l > 0.0 && l.is_finite()) {
            return Err(CliError::Validation(format!("time limit {l} must be positive")));
        }
    }
    // Resolve everything up front so bad flags fail before any matching.
    let mut plans = Vec::new();
    for path in &a.data {
        let store = open_store(path, a.uncached)?;
        let configs = resolve_all(&a.configs, a.budget, &store)?;
        plans.push((path, store, configs));
    }

    let mut t = Table::new(&[
        "dataset", "strength", "config", "queries", "truncated", "reads", "pruning", "repr", "raw", "sum",
    ]);
    for (path, store, configs) in &plans {
        let indexes = configs
            .iter()
            .map(|c| index_for(store, c))
            .collect::<Result<Vec<_>, _>>()?;
        let opts = BenchOptions {
            queries: a.queries,
            seed: a.seed,
            exclude_self: !a.include_self,
            time_limit: a.time_limit.map(Duration::from_secs_f64),
            parallel,
        };
        let records = run_efficiency_experiment(store, &indexes, &opts)?;
        for (r, c) in records.iter().zip(configs) {
            let m = store.manifest();
            let strength = match c.technique() {
                Technique::Tsax => m.mean_trend_strength,
                _ => m.mean_season_strength.or(m.mean_trend_strength),
            };
            t.row(vec![
                path.display().to_string(),
                opt(strength),
                r.label.clone(),
                r.queries.to_string(),
                r.truncated.to_string(),
                format!("{:.1}", r.mean_reads),
                format!("{:.4}", r.pruning_power),
                format!("{:.6}", r.time_repr),
                format!("{:.6}", r.time_raw),
                format!("{:.6}", r.time_sum()),
            ]);
        }
    }
    print!("{}", t.render());
    if let Some(out) = &a.out {
        write_file(out, &t.to_tsv())?;
    }
    Ok(())
}
