//! Piecewise aggregate approximation and classic SAX.

use crate::error::{Error, Result};
use crate::quantization::{gaussian_breakpoints, BreakpointVector, CellTable, Symbol};

/// Per-segment means of a series.
#[derive(Debug, Clone, PartialEq)]
pub struct PaaRepresentation {
    pub means: Vec<f64>,
    pub series_len: usize,
}

impl PaaRepresentation {
    pub fn segments(&self) -> usize {
        self.means.len()
    }
}

/// Discretized PAA.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SaxRepresentation {
    pub symbols: Vec<Symbol>,
    pub alphabet_size: usize,
    pub series_len: usize,
}

impl SaxRepresentation {
    pub fn segments(&self) -> usize {
        self.symbols.len()
    }

    /// `W * log2(A)`, fractional when `A` is not a power of two.
    pub fn bits(&self) -> f64 {
        self.symbols.len() as f64 * (self.alphabet_size as f64).log2()
    }
}

pub(crate) fn check_segments(len: usize, segments: usize) -> Result<usize> {
    if segments == 0 || !len.is_multiple_of(segments) {
        return Err(Error::SegmentMismatch { len, segments });
    }
    Ok(len / segments)
}

pub(crate) fn segment_means(x: &[f64], segments: usize) -> Result<Vec<f64>> {
    let width = check_segments(x.len(), segments)?;
    Ok(x.chunks_exact(width)
        .map(|seg| seg.iter().sum::<f64>() / width as f64)
        .collect())
}

pub fn paa(x: &[f64], segments: usize) -> Result<PaaRepresentation> {
    Ok(PaaRepresentation {
        means: segment_means(x, segments)?,
        series_len: x.len(),
    })
}

pub fn sax_encode(
    x: &[f64],
    segments: usize,
    breakpoints: &BreakpointVector,
) -> Result<SaxRepresentation> {
    let means = segment_means(x, segments)?;
    Ok(SaxRepresentation {
        symbols: means.iter().map(|&m| breakpoints.symbol(m)).collect(),
        alphabet_size: breakpoints.alphabet_size(),
        series_len: x.len(),
    })
}

pub fn d_paa(a: &PaaRepresentation, b: &PaaRepresentation) -> Result<f64> {
    if a.series_len != b.series_len || a.means.len() != b.means.len() {
        return Err(Error::ShapeMismatch);
    }
    let sum: f64 = a
        .means
        .iter()
        .zip(&b.means)
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok((a.series_len as f64 / a.means.len() as f64).sqrt() * sum.sqrt())
}

pub fn d_sax(a: &SaxRepresentation, b: &SaxRepresentation, cell: &CellTable) -> Result<f64> {
    if a.series_len != b.series_len || a.symbols.len() != b.symbols.len() {
        return Err(Error::ShapeMismatch);
    }
    for alphabet in [b.alphabet_size, cell.alphabet_size()] {
        if a.alphabet_size != alphabet {
            return Err(Error::AlphabetMismatch {
                left: a.alphabet_size,
                right: alphabet,
            });
        }
    }
    Ok(sax_distance_unchecked(&a.symbols, &b.symbols, a.series_len, cell))
}

#[inline]
pub(crate) fn sax_distance_unchecked(
    a: &[Symbol],
    b: &[Symbol],
    series_len: usize,
    cell: &CellTable,
) -> f64 {
    let sum: f64 = a
        .iter()
        .zip(b)
        .map(|(&s, &t)| {
            let c = cell.get(s, t);
            c * c
        })
        .sum();
    (series_len as f64 / a.len() as f64).sqrt() * sum.sqrt()
}

/// SAX encoder over `N(0, 1)` breakpoints.
#[derive(Debug, Clone)]
pub struct SaxCodec {
    pub segments: usize,
    pub series_len: usize,
    pub breakpoints: BreakpointVector,
    cell: CellTable,
}

impl SaxCodec {
    pub fn new(series_len: usize, segments: usize, alphabet: usize) -> Result<Self> {
        Self::with_breakpoints(series_len, segments, gaussian_breakpoints(alphabet, 1.0)?)
    }

    pub fn with_breakpoints(
        series_len: usize,
        segments: usize,
        breakpoints: BreakpointVector,
    ) -> Result<Self> {
        check_segments(series_len, segments)?;
        Ok(SaxCodec {
            segments,
            series_len,
            cell: CellTable::new(&breakpoints),
            breakpoints,
        })
    }

    pub fn encode(&self, x: &[f64]) -> Result<SaxRepresentation> {
        if x.len() != self.series_len {
            return Err(Error::LengthMismatch {
                left: self.series_len,
                right: x.len(),
            });
        }
        sax_encode(x, self.segments, &self.breakpoints)
    }

    pub fn distance(&self, a: &SaxRepresentation, b: &SaxRepresentation) -> f64 {
        sax_distance_unchecked(&a.symbols, &b.symbols, self.series_len, &self.cell)
    }

    pub fn cell_table(&self) -> &CellTable {
        &self.cell
    }
}
