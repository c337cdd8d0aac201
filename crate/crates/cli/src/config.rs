use std::str::FromStr;

use clap::Args;
use symapprox::eval::config_resolver;
use symapprox::matching::SeriesSource;
use symapprox::ssax::season_strength;
use symapprox::storage::SeriesStore;
use symapprox::technique::{Codec, Technique, TechniqueConfig};
use symapprox::tsax::trend_strength;

use crate::error::CliError;

pub const DEFAULT_BUDGET: f64 = 320.0;
pub const DEFAULT_SEASON_LENGTH: usize = 10;

/// A technique configuration as given on the command line. Missing residual
/// alphabets are resolved from the bit budget, missing strengths from the data.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigArg {
    pub technique: Technique,
    pub segments: usize,
    pub season_length: Option<usize>,
    pub alphabet: Option<usize>,
    pub component_alphabet: Option<usize>,
    pub strength: Option<f64>,
}

impl FromStr for ConfigArg {
    type Err = String;

    /// Parses `technique:key=value,...`, e.g. `ssax:w=24,a_seas=256` or
    /// `sax:w=32,a=1024`.
    fn from_str(s: &str) -> Result<Self, String> {
        let (tech, rest) = s.split_once(':').unwrap_or((s, ""));
        let technique = Technique::from_str(tech).map_err(|e| e.to_string())?;
        let mut arg = ConfigArg {
            technique,
            segments: 0,
            season_length: None,
            alphabet: None,
            component_alphabet: None,
            strength: None,
        };
        for kv in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, found {kv:?}"))?;
            let int = || v.parse::<usize>().map_err(|e| format!("{k}: {e}"));
            match k {
                "w" => arg.segments = int()?,
                "l" => arg.season_length = Some(int()?),
                "a" | "a_res" => arg.alphabet = Some(int()?),
                "a_seas" | "a_tr" | "a_comp" => arg.component_alphabet = Some(int()?),
                "strength" => {
                    arg.strength = Some(v.parse().map_err(|e| format!("{k}: {e}"))?)
                }
                _ => return Err(format!("unknown key {k:?}")),
            }
        }
        if arg.segments == 0 {
            return Err("w must be given and positive".into());
        }
        Ok(arg)
    }
}

/// Single-configuration flags shared by `encode` and `match`.
#[derive(Debug, Clone, Args)]
pub struct ConfigFlags {
    /// sax, ssax or tsax.
    #[arg(long)]
    pub technique: Technique,
    /// Number of segments W.
    #[arg(long)]
    pub w: usize,
    /// Season length L (sSAX).
    #[arg(long)]
    pub l: Option<usize>,
    /// Per-segment alphabet; resolved from --budget when omitted.
    #[arg(long, alias = "a-res")]
    pub a: Option<usize>,
    /// Season alphabet (sSAX).
    #[arg(long)]
    pub a_seas: Option<usize>,
    /// Trend alphabet (tSAX).
    #[arg(long)]
    pub a_tr: Option<usize>,
    /// Mean component strength; defaults to the dataset's.
    #[arg(long)]
    pub strength: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: f64,
}

impl ConfigFlags {
    pub fn to_arg(&self) -> Result<ConfigArg, CliError> {
        let component = match self.technique {
            Technique::Sax => None,
            Technique::Ssax => self.a_seas,
            Technique::Tsax => self.a_tr,
        };
        let stray = match self.technique {
            Technique::Sax => self.a_seas.or(self.a_tr).map(|_| "--a-seas/--a-tr"),
            Technique::Ssax => self.a_tr.map(|_| "--a-tr"),
            Technique::Tsax => self.a_seas.map(|_| "--a-seas"),
        };
        if let Some(flag) = stray {
            return Err(CliError::Validation(format!("{flag} does not apply to {}", self.technique)));
        }
        Ok(ConfigArg {
            technique: self.technique,
            segments: self.w,
            season_length: self.l,
            alphabet: self.a,
            component_alphabet: component,
            strength: self.strength,
        })
    }
}

/// Mean component strength of the store: from the manifest when recorded,
/// otherwise measured.
pub fn store_strength(store: &SeriesStore, technique: Technique, season_length: usize) -> Result<f64, CliError> {
    let m = store.manifest();
    let recorded = match technique {
        Technique::Sax => return Ok(0.0),
        Technique::Ssax => m.mean_season_strength,
        Technique::Tsax => m.mean_trend_strength,
    };
    if let Some(s) = recorded {
        return Ok(s);
    }
    log::info!("strength not recorded in manifest; measuring {} series", store.len());
    let mut buf = Vec::new();
    let mut sum = 0.0;
    for i in 0..store.len() {
        store.read_into(i, &mut buf)?;
        sum += match technique {
            Technique::Ssax => season_strength(&buf, season_length)?,
            _ => trend_strength(&buf)?,
        };
    }
    Ok(sum / store.len().max(1) as f64)
}

pub fn resolve(arg: &ConfigArg, budget: f64, store: &SeriesStore) -> Result<TechniqueConfig, CliError> {
    let l = arg.season_length.unwrap_or(DEFAULT_SEASON_LENGTH);
    if arg.technique != Technique::Ssax && arg.season_length.is_some() {
        return Err(CliError::Validation(format!("l does not apply to {}", arg.technique)));
    }
    if arg.technique != Technique::Sax && arg.component_alphabet.is_none() {
        return Err(CliError::Validation(format!(
            "{} needs a component alphabet (a_seas or a_tr)",
            arg.technique
        )));
    }
    if let Some(s) = arg.strength {
        if !(0.0..=1.0).contains(&s) {
            return Err(CliError::Validation(format!("strength {s} outside [0, 1]")));
        }
    }
    let strength = match arg.strength {
        Some(s) => s,
        None => store_strength(store, arg.technique, l)?,
    };
    let config = match (arg.alphabet, arg.technique) {
        (None, t) => config_resolver(t, budget, arg.segments, arg.component_alphabet, l, strength)?,
        (Some(alphabet), Technique::Sax) => TechniqueConfig::Sax {
            segments: arg.segments,
            alphabet,
        },
        (Some(a), Technique::Ssax) => TechniqueConfig::Ssax {
            season_length: l,
            segments: arg.segments,
            season_alphabet: arg.component_alphabet.unwrap(),
            residual_alphabet: a,
            strength,
        },
        (Some(a), Technique::Tsax) => TechniqueConfig::Tsax {
            segments: arg.segments,
            trend_alphabet: arg.component_alphabet.unwrap(),
            residual_alphabet: a,
            strength,
        },
    };
    // Rejects shapes that do not fit the series length before any work.
    Codec::new(&config, store.series_len())?;
    Ok(config)
}

/// The 320-bit grid: SAX and tSAX at W in {32, 40, 48, 96}, sSAX at
/// (24, 256), (48, 256), (48, 9), tSAX trend alphabets {32, 128, 1024}.
pub fn default_grid() -> Vec<ConfigArg> {
    let mut out = Vec::new();
    let arg = |technique, segments, component_alphabet| ConfigArg {
        technique,
        segments,
        season_length: None,
        alphabet: None,
        component_alphabet,
        strength: None,
    };
    for w in [32, 40, 48, 96] {
        out.push(arg(Technique::Sax, w, None));
    }
    for (w, a) in [(24, 256), (48, 256), (48, 9)] {
        out.push(arg(Technique::Ssax, w, Some(a)));
    }
    for w in [32, 40, 48, 96] {
        for a in [32, 128, 1024] {
            out.push(arg(Technique::Tsax, w, Some(a)));
        }
    }
    out
}
