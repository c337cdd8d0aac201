//! Time series types, z-normalization, Euclidean distance and component
//! strength.
//!
//! Variance uses divisor `T` (population form) everywhere in the crate: in
//! normalization, in component strengths and in the time-index variance that
//! bounds the trend angle.

use std::ops::Deref;

use crate::error::{Error, Result};

/// Tolerance on the mean and variance of a [`NormalizedTimeSeries`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// A finite, non-empty real-valued series.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries(Vec<f64>);

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        Ok(TimeSeries(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for TimeSeries {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// A series with mean 0 and (population) variance 1.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedTimeSeries(Vec<f64>);

impl NormalizedTimeSeries {
    /// Wraps values that are already normalized, checking the moments.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let series = TimeSeries::new(values)?;
        let (m, v) = moments(&series);
        if m.abs() > NORMALIZATION_TOLERANCE || (v - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized {
                mean: m,
                variance: v,
            });
        }
        Ok(NormalizedTimeSeries(series.into_inner()))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for NormalizedTimeSeries {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for NormalizedTimeSeries {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Population variance (divisor `T`).
pub fn variance(x: &[f64]) -> f64 {
    moments(x).1
}

fn moments(x: &[f64]) -> (f64, f64) {
    let m = mean(x);
    let v = x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / x.len() as f64;
    (m, v)
}

/// Z-normalizes a series to mean 0 and variance 1.
pub fn normalize(x: &TimeSeries) -> Result<NormalizedTimeSeries> {
    if x.len() < 2 {
        return Err(Error::DegenerateLength(x.len()));
    }
    let (m, v) = moments(x);
    let sd = v.sqrt();
    // Relative threshold: a constant series can leave rounding noise behind.
    let scale = x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if sd <= scale * 1e-12 {
        return Err(Error::ZeroVariance);
    }
    let mut out: Vec<f64> = x.iter().map(|v| (v - m) / sd).collect();
    // One correction pass removes the residual rounding drift of large offsets.
    let (m2, v2) = moments(&out);
    let sd2 = v2.sqrt();
    if (m2.abs() > 1e-15) || ((v2 - 1.0).abs() > 1e-15) {
        for v in &mut out {
            *v = (*v - m2) / sd2;
        }
    }
    NormalizedTimeSeries::new(out)
}

/// Euclidean distance between two equal-length series.
pub fn euclidean_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(squared_distance(x, y).sqrt())
}

pub(crate) fn squared_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let d = a - b;
            d * d
        })
        .sum()
}

/// Coefficient of determination `1 - var(res) / var(x)`, clamped to `[0, 1]`.
pub fn component_strength(x: &[f64], residuals: &[f64]) -> Result<f64> {
    if x.len() != residuals.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: residuals.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::Empty);
    }
    let vx = variance(x);
    if vx == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let r2 = 1.0 - variance(residuals) / vx;
    let clamped = r2.clamp(0.0, 1.0);
    if (r2 - clamped).abs() > 1e-9 {
        log::warn!("component strength {r2} clamped to {clamped}");
    }
    Ok(clamped)
}

/// Dataset-level metadata feeding the breakpoint heuristics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DatasetMeta {
    pub season_length: Option<usize>,
    pub season_strength: Option<f64>,
    pub trend_strength: Option<f64>,
}

/// An ordered collection of normalized series of identical length.
#[derive(Debug, Clone)]
pub struct Dataset {
    series: Vec<NormalizedTimeSeries>,
    pub meta: DatasetMeta,
}

impl Dataset {
    pub fn new(series: Vec<NormalizedTimeSeries>, meta: DatasetMeta) -> Result<Self> {
        let first = series.first().ok_or(Error::EmptyInput)?.len();
        if let Some(bad) = series.iter().find(|s| s.len() != first) {
            return Err(Error::LengthMismatch {
                left: first,
                right: bad.len(),
            });
        }
        Ok(Dataset { series, meta })
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    /// Length `T` shared by every member.
    pub fn series_len(&self) -> usize {
        self.series[0].len()
    }

    pub fn series(&self) -> &[NormalizedTimeSeries] {
        &self.series
    }

    pub fn get(&self, index: usize) -> Option<&NormalizedTimeSeries> {
        self.series.get(index)
    }
}
