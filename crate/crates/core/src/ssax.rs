//! Season-aware PAA/SAX.
//!
//! A series is split into a season mask (the mean of every seasonal position)
//! and residuals. The residuals are segmented like PAA, and the two feature
//! vectors are discretized with their own breakpoints. The distance combines
//! every (season position, residual segment) pair, bounding
//! `|(sigma + res) - (sigma' + res')|` from below with two signed-bound tables
//! instead of one four-dimensional table.

use crate::error::{Error, Result};
use crate::quantization::{gaussian_breakpoints, BreakpointVector, SignedBoundTable, Symbol};
use crate::sax::segment_means;
use crate::series::component_strength;

/// Seasonal features `sigma_1 .. sigma_L`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeasonMask {
    pub sigma: Vec<f64>,
}

impl SeasonMask {
    pub fn season_length(&self) -> usize {
        self.sigma.len()
    }

    /// Value of the mask at 0-based time index `t`.
    pub fn at(&self, t: usize) -> f64 {
        self.sigma[t % self.sigma.len()]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaaRepresentation {
    pub sigma: Vec<f64>,
    pub res_means: Vec<f64>,
    pub series_len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SsaxRepresentation {
    pub season_symbols: Vec<Symbol>,
    pub residual_symbols: Vec<Symbol>,
    pub season_alphabet: usize,
    pub residual_alphabet: usize,
    pub series_len: usize,
}

impl SsaxRepresentation {
    pub fn bits(&self) -> f64 {
        self.season_symbols.len() as f64 * (self.season_alphabet as f64).log2()
            + self.residual_symbols.len() as f64 * (self.residual_alphabet as f64).log2()
    }
}

fn check_season(len: usize, season: usize, segments: usize) -> Result<()> {
    let block = season.checked_mul(segments).unwrap_or(0);
    if block == 0 || !len.is_multiple_of(block) {
        return Err(Error::SeasonMismatch {
            len,
            season,
            segments,
        });
    }
    Ok(())
}

/// Averages all values at the same seasonal position and returns the mask
/// together with the residuals `x_t - sigma_{t mod L}`.
pub fn extract_season(x: &[f64], season_length: usize) -> Result<(SeasonMask, Vec<f64>)> {
    check_season(x.len(), season_length, 1)?;
    let periods = (x.len() / season_length) as f64;
    let mut sigma = vec![0.0; season_length];
    for period in x.chunks_exact(season_length) {
        for (acc, v) in sigma.iter_mut().zip(period) {
            *acc += v;
        }
    }
    for s in &mut sigma {
        *s /= periods;
    }
    let residuals = x
        .iter()
        .enumerate()
        .map(|(t, v)| v - sigma[t % season_length])
        .collect();
    Ok((SeasonMask { sigma }, residuals))
}

/// Season strength of a single series.
pub fn season_strength(x: &[f64], season_length: usize) -> Result<f64> {
    let (_, residuals) = extract_season(x, season_length)?;
    component_strength(x, &residuals)
}

/// Standard deviations `(sd_res, sd_seas)` implied by a mean season strength.
pub fn season_sd_heuristics(mean_strength: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&mean_strength) {
        return Err(Error::OutOfRange(mean_strength));
    }
    let sd_res = (1.0 - mean_strength).sqrt();
    let sd_seas = (1.0 - sd_res * sd_res).max(0.0).sqrt();
    Ok((sd_res, sd_seas))
}

pub fn spaa(x: &[f64], season_length: usize, segments: usize) -> Result<SpaaRepresentation> {
    check_season(x.len(), season_length, segments)?;
    let (mask, residuals) = extract_season(x, season_length)?;
    Ok(SpaaRepresentation {
        sigma: mask.sigma,
        res_means: segment_means(&residuals, segments)?,
        series_len: x.len(),
    })
}

pub fn ssax_encode(
    x: &[f64],
    season_length: usize,
    segments: usize,
    season_breakpoints: &BreakpointVector,
    residual_breakpoints: &BreakpointVector,
) -> Result<SsaxRepresentation> {
    let r = spaa(x, season_length, segments)?;
    Ok(SsaxRepresentation {
        season_symbols: r.sigma.iter().map(|&v| season_breakpoints.symbol(v)).collect(),
        residual_symbols: r
            .res_means
            .iter()
            .map(|&v| residual_breakpoints.symbol(v))
            .collect(),
        season_alphabet: season_breakpoints.alphabet_size(),
        residual_alphabet: residual_breakpoints.alphabet_size(),
        series_len: x.len(),
    })
}

/// Lower bound of `|(sigma + res) - (sigma' + res')|` given the four symbols.
#[inline]
pub fn cell4(
    season: Symbol,
    season_other: Symbol,
    residual: Symbol,
    residual_other: Symbol,
    season_table: &SignedBoundTable,
    residual_table: &SignedBoundTable,
) -> f64 {
    combine_signed_bounds(
        season_table.get(season, season_other),
        season_table.get(season_other, season),
        residual_table,
        residual,
        residual_other,
    )
}

/// `max(0, fwd, bwd)` over the two signed lower bounds. At most one of them
/// can be non-negative (intervals have positive width), so this equals taking
/// whichever case applies and 0 otherwise.
#[inline]
fn combine_signed_bounds(
    season_fwd: f64,
    season_bwd: f64,
    residual_table: &SignedBoundTable,
    residual: Symbol,
    residual_other: Symbol,
) -> f64 {
    combine(
        season_fwd,
        season_bwd,
        residual_table.get(residual, residual_other),
        residual_table.get(residual_other, residual),
    )
}

#[inline(always)]
fn combine(season_fwd: f64, season_bwd: f64, res_fwd: f64, res_bwd: f64) -> f64 {
    (season_fwd + res_fwd).max(season_bwd + res_bwd).max(0.0)
}

pub fn d_spaa(a: &SpaaRepresentation, b: &SpaaRepresentation) -> Result<f64> {
    if a.series_len != b.series_len
        || a.sigma.len() != b.sigma.len()
        || a.res_means.len() != b.res_means.len()
    {
        return Err(Error::ShapeMismatch);
    }
    let mut sum = 0.0;
    for (s, s2) in a.sigma.iter().zip(&b.sigma) {
        for (r, r2) in a.res_means.iter().zip(&b.res_means) {
            let d = s - s2 + r - r2;
            sum += d * d;
        }
    }
    let scale = a.series_len as f64 / (a.sigma.len() * a.res_means.len()) as f64;
    Ok(scale.sqrt() * sum.sqrt())
}

pub fn d_ssax(
    a: &SsaxRepresentation,
    b: &SsaxRepresentation,
    season_table: &SignedBoundTable,
    residual_table: &SignedBoundTable,
) -> Result<f64> {
    if a.series_len != b.series_len
        || a.season_symbols.len() != b.season_symbols.len()
        || a.residual_symbols.len() != b.residual_symbols.len()
    {
        return Err(Error::ShapeMismatch);
    }
    for (left, right) in [
        (a.season_alphabet, b.season_alphabet),
        (a.season_alphabet, season_table.alphabet_size()),
        (a.residual_alphabet, b.residual_alphabet),
        (a.residual_alphabet, residual_table.alphabet_size()),
    ] {
        if left != right {
            return Err(Error::AlphabetMismatch { left, right });
        }
    }
    Ok(ssax_distance_unchecked(a, b, season_table, residual_table))
}

#[inline]
pub(crate) fn ssax_distance_unchecked(
    a: &SsaxRepresentation,
    b: &SsaxRepresentation,
    season_table: &SignedBoundTable,
    residual_table: &SignedBoundTable,
) -> f64 {
    const CHUNK: usize = 64;
    let mut sum = 0.0;
    let mut fwd = [0.0; CHUNK];
    let mut bwd = [0.0; CHUNK];
    // Residual lookups do not depend on the season position, so they are
    // fetched once per segment rather than once per (position, segment).
    for (rc, rc2) in a
        .residual_symbols
        .chunks(CHUNK)
        .zip(b.residual_symbols.chunks(CHUNK))
    {
        let n = rc.len();
        for k in 0..n {
            fwd[k] = residual_table.get(rc[k], rc2[k]);
            bwd[k] = residual_table.get(rc2[k], rc[k]);
        }
        for (&s, &s2) in a.season_symbols.iter().zip(&b.season_symbols) {
            let sf = season_table.get(s, s2);
            let sb = season_table.get(s2, s);
            for k in 0..n {
                let c = combine(sf, sb, fwd[k], bwd[k]);
                sum += c * c;
            }
        }
    }
    let pairs = a.season_symbols.len() * a.residual_symbols.len();
    (a.series_len as f64 / pairs as f64).sqrt() * sum.sqrt()
}

/// Season-aware encoder with breakpoints derived from a mean season strength.
#[derive(Debug, Clone)]
pub struct SsaxCodec {
    pub season_length: usize,
    pub segments: usize,
    pub series_len: usize,
    pub season_breakpoints: BreakpointVector,
    pub residual_breakpoints: BreakpointVector,
    season_table: SignedBoundTable,
    residual_table: SignedBoundTable,
}

impl SsaxCodec {
    pub fn new(
        series_len: usize,
        season_length: usize,
        segments: usize,
        season_alphabet: usize,
        residual_alphabet: usize,
        mean_strength: f64,
    ) -> Result<Self> {
        check_season(series_len, season_length, segments)?;
        let (sd_res, sd_seas) = season_sd_heuristics(mean_strength)?;
        let season_breakpoints = gaussian_breakpoints(season_alphabet, sd_seas)?;
        let residual_breakpoints = gaussian_breakpoints(residual_alphabet, sd_res)?;
        Ok(Self::with_breakpoints(
            series_len,
            season_length,
            segments,
            season_breakpoints,
            residual_breakpoints,
        ))
    }

    pub fn with_breakpoints(
        series_len: usize,
        season_length: usize,
        segments: usize,
        season_breakpoints: BreakpointVector,
        residual_breakpoints: BreakpointVector,
    ) -> Self {
        SsaxCodec {
            season_length,
            segments,
            series_len,
            season_table: SignedBoundTable::new(&season_breakpoints),
            residual_table: SignedBoundTable::new(&residual_breakpoints),
            season_breakpoints,
            residual_breakpoints,
        }
    }

    pub fn encode(&self, x: &[f64]) -> Result<SsaxRepresentation> {
        if x.len() != self.series_len {
            return Err(Error::LengthMismatch {
                left: self.series_len,
                right: x.len(),
            });
        }
        ssax_encode(
            x,
            self.season_length,
            self.segments,
            &self.season_breakpoints,
            &self.residual_breakpoints,
        )
    }

    pub fn distance(&self, a: &SsaxRepresentation, b: &SsaxRepresentation) -> f64 {
        ssax_distance_unchecked(a, b, &self.season_table, &self.residual_table)
    }

    pub fn season_table(&self) -> &SignedBoundTable {
        &self.season_table
    }

    pub fn residual_table(&self) -> &SignedBoundTable {
        &self.residual_table
    }
}
