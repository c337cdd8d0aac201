//! Trend-aware PAA/SAX.
//!
//! A linear regression on the time index splits a normalized series into a
//! trend and residuals. Because the series has zero mean, the intercept is
//! tied to the slope (`theta1 = -theta2 (T - 1) / 2`), so the angle
//! `phi = atan(theta2)` alone describes the trend. The residuals are
//! segmented and discretized like SAX.

use crate::error::{Error, Result};
use crate::quantization::{
    gaussian_breakpoints, uniform_breakpoints, BreakpointVector, CellTable, Symbol,
    TrendCellTable,
};
use crate::sax::{sax_distance_unchecked, segment_means};
use crate::series::component_strength;

/// Regression output for one series.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendFeatures {
    /// Intercept at `t = 1`.
    pub base: f64,
    /// Increase per time step.
    pub slope: f64,
    /// `atan(slope)` in radians.
    pub angle: f64,
    pub residuals: Vec<f64>,
}

impl TrendFeatures {
    pub fn trend_at(&self, t: usize) -> f64 {
        self.base + self.slope * t as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TpaaRepresentation {
    pub angle: f64,
    pub res_means: Vec<f64>,
    pub series_len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TsaxRepresentation {
    pub trend_symbol: Symbol,
    pub residual_symbols: Vec<Symbol>,
    pub trend_alphabet: usize,
    pub residual_alphabet: usize,
    pub series_len: usize,
}

impl TsaxRepresentation {
    pub fn bits(&self) -> f64 {
        (self.trend_alphabet as f64).log2()
            + self.residual_symbols.len() as f64 * (self.residual_alphabet as f64).log2()
    }
}

/// Variance of the time index `1..=T` with divisor `T`.
pub fn time_variance(series_len: usize) -> f64 {
    let t = series_len as f64;
    (t * t - 1.0) / 12.0
}

/// Largest trend angle a normalized series of this length can reach.
pub fn phi_max(series_len: usize) -> Result<f64> {
    if series_len < 2 {
        return Err(Error::DegenerateLength(series_len));
    }
    Ok((1.0 / time_variance(series_len)).sqrt().atan())
}

/// Euclidean norm of a trend component with unit slope, `sqrt(T (T^2 - 1) / 12)`.
pub(crate) fn trend_scale(series_len: usize) -> f64 {
    (series_len as f64 * time_variance(series_len)).sqrt()
}

pub fn fit_trend(x: &[f64]) -> Result<TrendFeatures> {
    let len = x.len();
    if len < 2 {
        return Err(Error::DegenerateLength(len));
    }
    let n = len as f64;
    let center = (n - 1.0) / 2.0;
    let mean = x.iter().sum::<f64>() / n;
    let cross: f64 = x
        .iter()
        .enumerate()
        .map(|(t, v)| (t as f64 - center) * (v - mean))
        .sum();
    let slope = cross / (n * time_variance(len));
    let base = mean - slope * center;
    let residuals = x
        .iter()
        .enumerate()
        .map(|(t, v)| v - (base + slope * t as f64))
        .collect();
    Ok(TrendFeatures {
        base,
        slope,
        angle: slope.atan(),
        residuals,
    })
}

/// Trend strength of a single series.
pub fn trend_strength(x: &[f64]) -> Result<f64> {
    let fit = fit_trend(x)?;
    component_strength(x, &fit.residuals)
}

/// Residual standard deviation implied by a mean trend strength.
pub fn trend_residual_sd(mean_strength: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&mean_strength) {
        return Err(Error::OutOfRange(mean_strength));
    }
    Ok((1.0 - mean_strength).sqrt())
}

pub fn tpaa(x: &[f64], segments: usize) -> Result<TpaaRepresentation> {
    let fit = fit_trend(x)?;
    Ok(TpaaRepresentation {
        angle: fit.angle,
        res_means: segment_means(&fit.residuals, segments)?,
        series_len: x.len(),
    })
}

pub fn tsax_encode(
    x: &[f64],
    segments: usize,
    trend_breakpoints: &BreakpointVector,
    residual_breakpoints: &BreakpointVector,
) -> Result<TsaxRepresentation> {
    let r = tpaa(x, segments)?;
    Ok(TsaxRepresentation {
        trend_symbol: trend_breakpoints.symbol(r.angle),
        residual_symbols: r
            .res_means
            .iter()
            .map(|&v| residual_breakpoints.symbol(v))
            .collect(),
        trend_alphabet: trend_breakpoints.alphabet_size(),
        residual_alphabet: residual_breakpoints.alphabet_size(),
        series_len: x.len(),
    })
}

/// tPAA distance `sqrt(|d trend|^2 + (T / W) * sum (d res_mean)^2)`.
///
/// The trend and the residuals of a least-squares fit are orthogonal, so
/// `d_ED^2 = |d trend|^2 + |d res|^2` and both terms bound their raw
/// counterparts from below. The trend and the segment-mean residuals are not
/// orthogonal in general, so the distance between the two reconstructions
/// `trend + segment means` is not used: it can exceed the Euclidean distance.
pub fn d_tpaa(a: &TpaaRepresentation, b: &TpaaRepresentation) -> Result<f64> {
    if a.series_len != b.series_len || a.res_means.len() != b.res_means.len() {
        return Err(Error::ShapeMismatch);
    }
    let trend = trend_distance(a.angle, b.angle, a.series_len);
    let residual: f64 = a
        .res_means
        .iter()
        .zip(&b.res_means)
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    let width = (a.series_len / a.res_means.len()) as f64;
    Ok((trend * trend + width * residual).sqrt())
}

/// Euclidean distance between the trend components of two normalized series
/// of length `series_len` with the given angles.
pub fn trend_distance(angle: f64, other: f64, series_len: usize) -> f64 {
    (angle.tan() - other.tan()).abs() * trend_scale(series_len)
}

pub fn d_tsax(
    a: &TsaxRepresentation,
    b: &TsaxRepresentation,
    trend_table: &TrendCellTable,
    residual_table: &CellTable,
) -> Result<f64> {
    if a.series_len != b.series_len
        || a.residual_symbols.len() != b.residual_symbols.len()
        || trend_table.series_len() != a.series_len
    {
        return Err(Error::ShapeMismatch);
    }
    for (left, right) in [
        (a.trend_alphabet, b.trend_alphabet),
        (a.trend_alphabet, trend_table.alphabet_size()),
        (a.residual_alphabet, b.residual_alphabet),
        (a.residual_alphabet, residual_table.alphabet_size()),
    ] {
        if left != right {
            return Err(Error::AlphabetMismatch { left, right });
        }
    }
    Ok(tsax_distance_unchecked(a, b, trend_table, residual_table))
}

#[inline]
pub(crate) fn tsax_distance_unchecked(
    a: &TsaxRepresentation,
    b: &TsaxRepresentation,
    trend_table: &TrendCellTable,
    residual_table: &CellTable,
) -> f64 {
    let trend = trend_table.get(a.trend_symbol, b.trend_symbol);
    let residual = sax_distance_unchecked(
        &a.residual_symbols,
        &b.residual_symbols,
        a.series_len,
        residual_table,
    );
    (trend * trend + residual * residual).sqrt()
}

/// Trend-aware encoder: uniform angle breakpoints on `[-phi_max, phi_max]` and
/// Gaussian residual breakpoints scaled by the mean trend strength.
#[derive(Debug, Clone)]
pub struct TsaxCodec {
    pub segments: usize,
    pub series_len: usize,
    pub trend_breakpoints: BreakpointVector,
    pub residual_breakpoints: BreakpointVector,
    trend_table: TrendCellTable,
    residual_table: CellTable,
}

impl TsaxCodec {
    pub fn new(
        series_len: usize,
        segments: usize,
        trend_alphabet: usize,
        residual_alphabet: usize,
        mean_strength: f64,
    ) -> Result<Self> {
        crate::sax::check_segments(series_len, segments)?;
        let limit = phi_max(series_len)?;
        let trend_breakpoints = uniform_breakpoints(trend_alphabet, -limit, limit)?;
        let residual_breakpoints =
            gaussian_breakpoints(residual_alphabet, trend_residual_sd(mean_strength)?)?;
        Self::with_breakpoints(series_len, segments, trend_breakpoints, residual_breakpoints)
    }

    pub fn with_breakpoints(
        series_len: usize,
        segments: usize,
        trend_breakpoints: BreakpointVector,
        residual_breakpoints: BreakpointVector,
    ) -> Result<Self> {
        crate::sax::check_segments(series_len, segments)?;
        Ok(TsaxCodec {
            segments,
            series_len,
            trend_table: TrendCellTable::new(&trend_breakpoints, series_len)?,
            residual_table: CellTable::new(&residual_breakpoints),
            trend_breakpoints,
            residual_breakpoints,
        })
    }

    pub fn encode(&self, x: &[f64]) -> Result<TsaxRepresentation> {
        if x.len() != self.series_len {
            return Err(Error::LengthMismatch {
                left: self.series_len,
                right: x.len(),
            });
        }
        tsax_encode(
            x,
            self.segments,
            &self.trend_breakpoints,
            &self.residual_breakpoints,
        )
    }

    pub fn distance(&self, a: &TsaxRepresentation, b: &TsaxRepresentation) -> f64 {
        tsax_distance_unchecked(a, b, &self.trend_table, &self.residual_table)
    }

    pub fn trend_table(&self) -> &TrendCellTable {
        &self.trend_table
    }

    pub fn residual_table(&self) -> &CellTable {
        &self.residual_table
    }
}
