mod common;

use proptest::prelude::*;
use symapprox::matching::{approximate_match, exact_match, MatchOptions, RepresentationIndex};
use symapprox::sax::{d_paa, paa};
use symapprox::series::{
    euclidean_distance, normalize, Dataset, DatasetMeta, NormalizedTimeSeries, TimeSeries,
};
use symapprox::ssax::{d_spaa, spaa};
use symapprox::technique::{Codec, TechniqueConfig};
use symapprox::tsax::{d_tpaa, tpaa};

fn series(len: usize) -> impl Strategy<Value = NormalizedTimeSeries> {
    prop::collection::vec(-100.0f64..100.0, len)
        .prop_filter_map("constant", |v| normalize(&TimeSeries::new(v).ok()?).ok())
}

fn config() -> impl Strategy<Value = TechniqueConfig> {
    let w = prop::sample::select(vec![1usize, 2, 3, 4, 6, 12]);
    let a = 2usize..=1024;
    let s = 0.0f64..=0.99;
    prop_oneof![
        (w.clone(), a.clone()).prop_map(|(segments, alphabet)| TechniqueConfig::Sax { segments, alphabet }),
        (prop::sample::select(vec![1usize, 2, 3, 6]), a.clone(), a.clone(), s.clone()).prop_map(
            |(segments, season_alphabet, residual_alphabet, strength)| TechniqueConfig::Ssax {
                season_length: 4,
                segments,
                season_alphabet,
                residual_alphabet,
                strength,
            }
        ),
        (w, a.clone(), a, s).prop_map(|(segments, trend_alphabet, residual_alphabet, strength)| {
            TechniqueConfig::Tsax { segments, trend_alphabet, residual_alphabet, strength }
        }),
    ]
}

fn le(low: f64, high: f64) -> bool {
    common::relative_le(low, high, 1e-9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn distances_form_lower_bound_chain(x in series(24), y in series(24), config in config()) {
        let codec = Codec::new(&config, 24).unwrap();
        let w = config.segments();
        let mid = match &config {
            TechniqueConfig::Sax { .. } => d_paa(&paa(&x, w).unwrap(), &paa(&y, w).unwrap()),
            TechniqueConfig::Ssax { .. } => d_spaa(&spaa(&x, 4, w).unwrap(), &spaa(&y, 4, w).unwrap()),
            TechniqueConfig::Tsax { .. } => d_tpaa(&tpaa(&x, w).unwrap(), &tpaa(&y, w).unwrap()),
        }.unwrap();
        let (rx, ry) = (codec.encode(&x).unwrap(), codec.encode(&y).unwrap());
        let low = codec.distance(&rx, &ry).unwrap();
        let ed = euclidean_distance(&x, &y).unwrap();
        prop_assert!(low >= 0.0);
        prop_assert!(le(low, mid), "{low} > {mid}");
        prop_assert!(le(mid, ed), "{mid} > {ed}");
        prop_assert_eq!(low, codec.distance(&ry, &rx).unwrap());
        prop_assert_eq!(codec.distance(&rx, &rx).unwrap(), 0.0);
    }

    #[test]
    fn normalize_is_idempotent(v in prop::collection::vec(-1e3f64..1e3, 2..64)) {
        if let Ok(x) = normalize(&TimeSeries::new(v).unwrap()) {
            let again = normalize(&TimeSeries::new(x.to_vec()).unwrap()).unwrap();
            for (a, b) in x.iter().zip(again.iter()) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn config_bytes_round_trip(config in config()) {
        let bytes = config.to_bytes();
        prop_assert_eq!(TechniqueConfig::from_bytes(&bytes).unwrap(), config.clone());
        let json = serde_json::to_string(&config).unwrap();
        prop_assert_eq!(serde_json::from_str::<TechniqueConfig>(&json).unwrap(), config);
    }

    #[test]
    fn exact_match_equals_linear_scan(
        data in prop::collection::vec(series(24), 2..40),
        query in series(24),
        config in config(),
    ) {
        let ds = Dataset::new(data, DatasetMeta::default()).unwrap();
        let index = RepresentationIndex::build(config, &ds).unwrap();
        let opts = MatchOptions::default();
        let exact = exact_match(&query, &index, &ds, &opts).unwrap();
        let mut best = (f64::INFINITY, usize::MAX);
        for (i, x) in ds.series().iter().enumerate() {
            let d = euclidean_distance(&query, x).unwrap();
            if d < best.0 {
                best = (d, i);
            }
        }
        prop_assert_eq!((exact.match_id, exact.euclidean), (best.1, best.0));
        prop_assert_eq!(exact.candidates_evaluated + exact.candidates_pruned, ds.len());

        let approx = approximate_match(&query, &index, &ds, &opts).unwrap();
        prop_assert!(approx.euclidean >= exact.euclidean);
        let min_repr = index
            .representations()
            .iter()
            .map(|r| index.distance(&index.encode(&query).unwrap(), r).unwrap())
            .fold(f64::INFINITY, f64::min);
        prop_assert_eq!(approx.repr_distance, min_repr);
    }
}
