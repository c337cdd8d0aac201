//! Technique-agnostic configuration, encoding and distance dispatch.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantization::Symbol;
use crate::sax::{SaxCodec, SaxRepresentation};
use crate::ssax::{SsaxCodec, SsaxRepresentation};
use crate::tsax::{TsaxCodec, TsaxRepresentation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Technique {
    Sax,
    Ssax,
    Tsax,
}

impl Technique {
    pub fn tag(self) -> &'static str {
        match self {
            Technique::Sax => "sax",
            Technique::Ssax => "ssax",
            Technique::Tsax => "tsax",
        }
    }

    fn code(self) -> u8 {
        match self {
            Technique::Sax => 0,
            Technique::Ssax => 1,
            Technique::Tsax => 2,
        }
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Technique::Sax => "SAX",
            Technique::Ssax => "sSAX",
            Technique::Tsax => "tSAX",
        })
    }
}

impl FromStr for Technique {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sax" => Ok(Technique::Sax),
            "ssax" => Ok(Technique::Ssax),
            "tsax" => Ok(Technique::Tsax),
            _ => Err(Error::InvalidSpec(format!("unknown technique {s:?}"))),
        }
    }
}

/// Full parameterization of one representation technique.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "technique", rename_all = "lowercase")]
pub enum TechniqueConfig {
    Sax {
        segments: usize,
        alphabet: usize,
    },
    Ssax {
        season_length: usize,
        segments: usize,
        season_alphabet: usize,
        residual_alphabet: usize,
        /// Mean season strength driving the breakpoint standard deviations.
        strength: f64,
    },
    Tsax {
        segments: usize,
        trend_alphabet: usize,
        residual_alphabet: usize,
        /// Mean trend strength driving the residual standard deviation.
        strength: f64,
    },
}

impl TechniqueConfig {
    pub fn technique(&self) -> Technique {
        match self {
            TechniqueConfig::Sax { .. } => Technique::Sax,
            TechniqueConfig::Ssax { .. } => Technique::Ssax,
            TechniqueConfig::Tsax { .. } => Technique::Tsax,
        }
    }

    pub fn segments(&self) -> usize {
        match *self {
            TechniqueConfig::Sax { segments, .. }
            | TechniqueConfig::Ssax { segments, .. }
            | TechniqueConfig::Tsax { segments, .. } => segments,
        }
    }

    /// Alphabet of the per-segment symbols (SAX alphabet or residual alphabet).
    pub fn residual_alphabet(&self) -> usize {
        match *self {
            TechniqueConfig::Sax { alphabet, .. } => alphabet,
            TechniqueConfig::Ssax {
                residual_alphabet, ..
            }
            | TechniqueConfig::Tsax {
                residual_alphabet, ..
            } => residual_alphabet,
        }
    }

    /// Season or trend alphabet; `None` for SAX.
    pub fn component_alphabet(&self) -> Option<usize> {
        match *self {
            TechniqueConfig::Sax { .. } => None,
            TechniqueConfig::Ssax {
                season_alphabet, ..
            } => Some(season_alphabet),
            TechniqueConfig::Tsax { trend_alphabet, .. } => Some(trend_alphabet),
        }
    }

    pub fn season_length(&self) -> Option<usize> {
        match *self {
            TechniqueConfig::Ssax { season_length, .. } => Some(season_length),
            _ => None,
        }
    }

    pub fn strength(&self) -> Option<f64> {
        match *self {
            TechniqueConfig::Sax { .. } => None,
            TechniqueConfig::Ssax { strength, .. } | TechniqueConfig::Tsax { strength, .. } => {
                Some(strength)
            }
        }
    }

    /// Representation size in bits with fractional `log2` accounting.
    pub fn bits(&self) -> f64 {
        let ld = |a: usize| (a as f64).log2();
        match *self {
            TechniqueConfig::Sax { segments, alphabet } => segments as f64 * ld(alphabet),
            TechniqueConfig::Ssax {
                season_length,
                segments,
                season_alphabet,
                residual_alphabet,
                ..
            } => season_length as f64 * ld(season_alphabet) + segments as f64 * ld(residual_alphabet),
            TechniqueConfig::Tsax {
                segments,
                trend_alphabet,
                residual_alphabet,
                ..
            } => ld(trend_alphabet) + segments as f64 * ld(residual_alphabet),
        }
    }

    /// Short human-readable label such as `sSAX W=24 L=10 A=256/1024`.
    pub fn label(&self) -> String {
        match *self {
            TechniqueConfig::Sax { segments, alphabet } => format!("SAX W={segments} A={alphabet}"),
            TechniqueConfig::Ssax {
                season_length,
                segments,
                season_alphabet,
                residual_alphabet,
                ..
            } => format!(
                "sSAX W={segments} L={season_length} A={season_alphabet}/{residual_alphabet}"
            ),
            TechniqueConfig::Tsax {
                segments,
                trend_alphabet,
                residual_alphabet,
                ..
            } => format!("tSAX W={segments} A={trend_alphabet}/{residual_alphabet}"),
        }
    }

    /// Canonical byte encoding used for index headers and config hashes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![self.technique().code()];
        let mut push = |v: u64| out.extend_from_slice(&v.to_le_bytes());
        match *self {
            TechniqueConfig::Sax { segments, alphabet } => {
                push(segments as u64);
                push(alphabet as u64);
            }
            TechniqueConfig::Ssax {
                season_length,
                segments,
                season_alphabet,
                residual_alphabet,
                strength,
            } => {
                push(season_length as u64);
                push(segments as u64);
                push(season_alphabet as u64);
                push(residual_alphabet as u64);
                push(strength.to_bits());
            }
            TechniqueConfig::Tsax {
                segments,
                trend_alphabet,
                residual_alphabet,
                strength,
            } => {
                push(segments as u64);
                push(trend_alphabet as u64);
                push(residual_alphabet as u64);
                push(strength.to_bits());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = || Error::ConfigMismatch("malformed configuration header".into());
        let (&code, rest) = bytes.split_first().ok_or_else(bad)?;
        if rest.len() % 8 != 0 {
            return Err(bad());
        }
        let v: Vec<u64> = rest
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let n = |i: usize| v[i] as usize;
        match (code, v.len()) {
            (0, 2) => Ok(TechniqueConfig::Sax {
                segments: n(0),
                alphabet: n(1),
            }),
            (1, 5) => Ok(TechniqueConfig::Ssax {
                season_length: n(0),
                segments: n(1),
                season_alphabet: n(2),
                residual_alphabet: n(3),
                strength: f64::from_bits(v[4]),
            }),
            (2, 4) => Ok(TechniqueConfig::Tsax {
                segments: n(0),
                trend_alphabet: n(1),
                residual_alphabet: n(2),
                strength: f64::from_bits(v[3]),
            }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for TechniqueConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Encoded form of one series under any technique.
#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    Sax(SaxRepresentation),
    Ssax(SsaxRepresentation),
    Tsax(TsaxRepresentation),
}

impl Representation {
    /// Per-segment symbols (SAX symbols or residual symbols).
    pub fn residual_symbols(&self) -> &[Symbol] {
        match self {
            Representation::Sax(r) => &r.symbols,
            Representation::Ssax(r) => &r.residual_symbols,
            Representation::Tsax(r) => &r.residual_symbols,
        }
    }

    /// Season symbols, the trend symbol as a one-element slice, or nothing.
    pub fn component_symbols(&self) -> &[Symbol] {
        match self {
            Representation::Sax(_) => &[],
            Representation::Ssax(r) => &r.season_symbols,
            Representation::Tsax(r) => std::slice::from_ref(&r.trend_symbol),
        }
    }

    pub fn technique(&self) -> Technique {
        match self {
            Representation::Sax(_) => Technique::Sax,
            Representation::Ssax(_) => Technique::Ssax,
            Representation::Tsax(_) => Technique::Tsax,
        }
    }
}

/// Encoder plus lookup tables for one configuration and series length.
#[derive(Debug, Clone)]
pub enum Codec {
    Sax(SaxCodec),
    Ssax(SsaxCodec),
    Tsax(TsaxCodec),
}

impl Codec {
    pub fn new(config: &TechniqueConfig, series_len: usize) -> Result<Self> {
        Ok(match *config {
            TechniqueConfig::Sax { segments, alphabet } => {
                Codec::Sax(SaxCodec::new(series_len, segments, alphabet)?)
            }
            TechniqueConfig::Ssax {
                season_length,
                segments,
                season_alphabet,
                residual_alphabet,
                strength,
            } => Codec::Ssax(SsaxCodec::new(
                series_len,
                season_length,
                segments,
                season_alphabet,
                residual_alphabet,
                strength,
            )?),
            TechniqueConfig::Tsax {
                segments,
                trend_alphabet,
                residual_alphabet,
                strength,
            } => Codec::Tsax(TsaxCodec::new(
                series_len,
                segments,
                trend_alphabet,
                residual_alphabet,
                strength,
            )?),
        })
    }

    pub fn series_len(&self) -> usize {
        match self {
            Codec::Sax(c) => c.series_len,
            Codec::Ssax(c) => c.series_len,
            Codec::Tsax(c) => c.series_len,
        }
    }

    pub fn encode(&self, x: &[f64]) -> Result<Representation> {
        Ok(match self {
            Codec::Sax(c) => Representation::Sax(c.encode(x)?),
            Codec::Ssax(c) => Representation::Ssax(c.encode(x)?),
            Codec::Tsax(c) => Representation::Tsax(c.encode(x)?),
        })
    }

    /// Lower-bounding representation distance.
    ///
    /// Both representations must come from this codec; mixing techniques is an
    /// `Err(ShapeMismatch)`.
    pub fn distance(&self, a: &Representation, b: &Representation) -> Result<f64> {
        match (self, a, b) {
            (Codec::Sax(c), Representation::Sax(a), Representation::Sax(b)) => Ok(c.distance(a, b)),
            (Codec::Ssax(c), Representation::Ssax(a), Representation::Ssax(b)) => {
                Ok(c.distance(a, b))
            }
            (Codec::Tsax(c), Representation::Tsax(a), Representation::Tsax(b)) => {
                Ok(c.distance(a, b))
            }
            _ => Err(Error::ShapeMismatch),
        }
    }
}
