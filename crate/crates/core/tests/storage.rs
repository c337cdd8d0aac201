mod common;

use sha2::{Digest, Sha256};
use symapprox::datagen::{gen_dataset, gen_to_store, GenSpec};
use symapprox::matching::{exact_match, MatchOptions, RepresentationIndex, SeriesSource};
use symapprox::storage::{load_index, persist_index, read_index, SeriesMeta, SeriesStore};
use symapprox::technique::TechniqueConfig;
use symapprox::Error;

fn digest(values: &[f64]) -> [u8; 32] {
    let mut h = Sha256::new();
    for v in values {
        h.update(v.to_bits().to_le_bytes());
    }
    h.finalize().into()
}

#[test]
fn thousand_series_round_trip_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = common::rng(3);
    let mut store = SeriesStore::create(dir.path()).unwrap();
    let mut sums = Vec::new();
    for i in 0..1000 {
        let x = common::random_series(64, 8, &mut rng);
        sums.push(digest(&x));
        let meta = SeriesMeta {
            season_strength: Some(i as f64 / 1000.0),
            trend_strength: None,
            season_length: Some(8),
        };
        store.write_series(i, &x, meta).unwrap();
    }
    store.finish().unwrap();

    let reopened = SeriesStore::open(dir.path()).unwrap();
    assert_eq!(reopened.len(), 1000);
    assert_eq!(reopened.series_len(), 64);
    let m = reopened.manifest().mean_season_strength.unwrap();
    assert!((m - 0.4995).abs() < 1e-12);
    assert!(reopened.manifest().mean_trend_strength.is_none());
    let mut buf = Vec::new();
    for (i, want) in sums.iter().enumerate() {
        reopened.read_into(i, &mut buf).unwrap();
        assert_eq!(&digest(&buf), want, "series {i}");
    }
    let mut uncached = reopened.clone();
    uncached.set_uncached(true);
    assert_eq!(digest(&uncached.read_series(999).unwrap()), sums[999]);
    let ds = reopened.load_dataset().unwrap();
    assert_eq!(digest(&ds.series()[500]), sums[500]);
}

#[test]
fn truncated_or_missing_files_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let store = gen_to_store(&GenSpec::season(5, 40, 0.5, 1), dir.path()).unwrap();
    let victim = store.series_path(2).unwrap();
    let bytes = std::fs::read(&victim).unwrap();
    std::fs::write(&victim, &bytes[..bytes.len() - 8]).unwrap();
    let mut buf = Vec::new();
    assert!(matches!(store.read_into(2, &mut buf), Err(Error::SizeMismatch { found: 312, .. })));
    assert!(matches!(SeriesStore::open(dir.path()), Err(Error::SizeMismatch { .. })));

    std::fs::remove_file(&victim).unwrap();
    assert!(matches!(SeriesStore::open(dir.path()), Err(Error::Io { .. })));
    assert!(matches!(store.read_into(9, &mut buf), Err(Error::StoreRead { index: 9, len: 5 })));
}

#[test]
fn persisted_index_matches_fresh_build_and_answers_identically() {
    let dir = tempfile::tempdir().unwrap();
    let spec = GenSpec::season(60, 120, 0.7, 11);
    let store = gen_to_store(&spec, dir.path()).unwrap();
    let (ds, _) = gen_dataset(&spec).unwrap();
    let strength = store.manifest().mean_season_strength.unwrap();
    let configs = [
        TechniqueConfig::Sax { segments: 12, alphabet: 300 },
        TechniqueConfig::Ssax {
            season_length: 10,
            segments: 6,
            season_alphabet: 64,
            residual_alphabet: 1024,
            strength,
        },
        TechniqueConfig::Tsax {
            segments: 8,
            trend_alphabet: 16,
            residual_alphabet: 128,
            strength: 0.2,
        },
    ];
    for config in configs {
        let built = RepresentationIndex::build(config.clone(), &store).unwrap();
        let path = persist_index(&store, &built).unwrap();
        let loaded = load_index(&store, &config).unwrap();
        assert_eq!(loaded.representations(), built.representations());
        assert_eq!(loaded.config(), built.config());
        let other = TechniqueConfig::Sax { segments: 6, alphabet: 9 };
        assert!(matches!(read_index(&path, Some((&other, 120))), Err(Error::ConfigMismatch(_))));

        let in_memory = RepresentationIndex::build(config, &ds).unwrap();
        for q in [0, 17, 59] {
            let opts = MatchOptions { exclude: Some(q), ..Default::default() };
            let a = exact_match(&ds.series()[q], &loaded, &store, &opts).unwrap();
            let b = exact_match(&ds.series()[q], &in_memory, &ds, &opts).unwrap();
            assert_eq!((a.match_id, a.euclidean), (b.match_id, b.euclidean));
            assert_eq!(a.candidates_evaluated, b.candidates_evaluated);
        }
    }
}

#[test]
fn generated_store_equals_in_memory_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let spec = GenSpec::trend(25, 96, 0.3, 5);
    let store = gen_to_store(&spec, dir.path()).unwrap();
    let (ds, strengths) = gen_dataset(&spec).unwrap();
    for (i, (x, &s)) in ds.series().iter().zip(&strengths).enumerate() {
        assert_eq!(digest(&store.read_series(i).unwrap()), digest(x));
        assert_eq!(store.manifest().records[i].trend_strength, Some(s));
    }
}
