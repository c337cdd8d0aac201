//! On-disk dataset layout and index persistence.
//!
//! ```text
//! <root>/manifest.tsv
//! <root>/series/<index>.f64                  raw little-endian f64, no header
//! <root>/index/<technique>-<confighash>.bin
//! ```

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use byteorder::{ByteOrder, LittleEndian, ReadBytesExt, WriteBytesExt};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matching::{RepresentationIndex, SeriesSource};
use crate::quantization::Symbol;
use crate::sax::SaxRepresentation;
use crate::series::{Dataset, DatasetMeta, NormalizedTimeSeries};
use crate::ssax::SsaxRepresentation;
use crate::technique::{Representation, TechniqueConfig};
use crate::tsax::TsaxRepresentation;

pub const MANIFEST_FILE: &str = "manifest.tsv";
pub const MANIFEST_VERSION: u32 = 1;
pub const INDEX_VERSION: u32 = 1;
const MANIFEST_MAGIC: &str = "#symapprox-manifest";
const INDEX_MAGIC: &[u8; 8] = b"SYMXIDX\0";
const VALUE_BYTES: u64 = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestRecord {
    pub index: usize,
    /// Path relative to the store root.
    pub path: String,
    pub series_len: usize,
    pub season_strength: Option<f64>,
    pub trend_strength: Option<f64>,
    pub season_length: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Manifest {
    pub records: Vec<ManifestRecord>,
    pub mean_season_strength: Option<f64>,
    pub mean_trend_strength: Option<f64>,
}

fn mean_of(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for v in values {
        sum += v?;
        n += 1;
    }
    (n > 0).then(|| sum / n as f64)
}

fn fmt_opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

impl Manifest {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn series_len(&self) -> usize {
        self.records.first().map_or(0, |r| r.series_len)
    }

    /// Recomputes the dataset mean strengths from the records.
    pub fn refresh_means(&mut self) {
        self.mean_season_strength = mean_of(self.records.iter().map(|r| r.season_strength));
        self.mean_trend_strength = mean_of(self.records.iter().map(|r| r.trend_strength));
    }

    pub fn meta(&self) -> DatasetMeta {
        DatasetMeta {
            season_length: self.records.first().and_then(|r| r.season_length),
            season_strength: self.mean_season_strength,
            trend_strength: self.mean_trend_strength,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{MANIFEST_MAGIC}\t{MANIFEST_VERSION}").unwrap();
        writeln!(out, "#mean_season_strength\t{}", fmt_opt(self.mean_season_strength)).unwrap();
        writeln!(out, "#mean_trend_strength\t{}", fmt_opt(self.mean_trend_strength)).unwrap();
        writeln!(
            out,
            "#index\tpath\tlength\tseason_strength\ttrend_strength\tseason_length"
        )
        .unwrap();
        for r in &self.records {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                r.index,
                r.path,
                r.series_len,
                fmt_opt(r.season_strength),
                fmt_opt(r.trend_strength),
                fmt_opt(r.season_length)
            )
            .unwrap();
        }
        out
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut lines = text.lines().enumerate();
        let header = lines
            .next()
            .map(|(_, l)| l)
            .ok_or_else(|| err(1, "missing header".into()))?;
        let version = header
            .strip_prefix(MANIFEST_MAGIC)
            .and_then(|v| v.trim().parse::<u32>().ok())
            .ok_or_else(|| err(1, format!("bad header {header:?}")))?;
        if version != MANIFEST_VERSION {
            return Err(Error::VersionMismatch {
                expected: MANIFEST_VERSION,
                found: version,
            });
        }

        fn opt<T: std::str::FromStr>(s: &str) -> std::result::Result<Option<T>, String> {
            if s == "-" {
                return Ok(None);
            }
            s.parse().map(Some).map_err(|_| format!("bad value {s:?}"))
        }

        let mut manifest = Manifest::default();
        for (n, line) in lines {
            let line_no = n + 1;
            if let Some(comment) = line.strip_prefix('#') {
                let mut kv = comment.split('\t');
                let value = kv.nth(1).unwrap_or("-");
                match comment.split('\t').next() {
                    Some("mean_season_strength") => {
                        manifest.mean_season_strength = opt(value).map_err(|m| err(line_no, m))?
                    }
                    Some("mean_trend_strength") => {
                        manifest.mean_trend_strength = opt(value).map_err(|m| err(line_no, m))?
                    }
                    _ => {}
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 6 {
                return Err(err(line_no, format!("expected 6 fields, found {}", fields.len())));
            }
            let parse = || -> std::result::Result<ManifestRecord, String> {
                Ok(ManifestRecord {
                    index: fields[0].parse().map_err(|_| "bad index".to_string())?,
                    path: fields[1].to_string(),
                    series_len: fields[2].parse().map_err(|_| "bad length".to_string())?,
                    season_strength: opt(fields[3])?,
                    trend_strength: opt(fields[4])?,
                    season_length: opt(fields[5])?,
                })
            };
            let record = parse().map_err(|m| err(line_no, m))?;
            if record.index != manifest.records.len() {
                return Err(err(
                    line_no,
                    format!("expected index {}, found {}", manifest.records.len(), record.index),
                ));
            }
            if record.series_len != manifest.series_len() && !manifest.records.is_empty() {
                return Err(err(line_no, "series lengths differ".into()));
            }
            manifest.records.push(record);
        }
        Ok(manifest)
    }
}

pub fn load_manifest(root: &Path) -> Result<Manifest> {
    let path = root.join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    Manifest::parse(&text, &path)
}

pub fn save_manifest(root: &Path, manifest: &Manifest) -> Result<()> {
    let path = root.join(MANIFEST_FILE);
    fs::write(&path, manifest.to_text()).map_err(|e| Error::io(&path, e))
}

/// Per-series metadata written alongside the values.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SeriesMeta {
    pub season_strength: Option<f64>,
    pub trend_strength: Option<f64>,
    pub season_length: Option<usize>,
}

/// A directory of one binary file per series plus a manifest.
#[derive(Debug, Clone)]
pub struct SeriesStore {
    root: PathBuf,
    manifest: Manifest,
    uncached: bool,
}

impl SeriesStore {
    /// Creates an empty store, replacing any manifest already at `root`.
    pub fn create(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        let series = root.join("series");
        fs::create_dir_all(&series).map_err(|e| Error::io(&series, e))?;
        let store = SeriesStore {
            root,
            manifest: Manifest::default(),
            uncached: false,
        };
        store.save_manifest()?;
        Ok(store)
    }

    /// Opens an existing store and checks that every series file is present
    /// with the expected size.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        let manifest = load_manifest(&root)?;
        let store = SeriesStore {
            root,
            manifest,
            uncached: false,
        };
        for r in &store.manifest.records {
            let path = store.root.join(&r.path);
            let meta = fs::metadata(&path).map_err(|e| Error::io(&path, e))?;
            store.check_size(&path, meta.len())?;
        }
        Ok(store)
    }

    /// Best-effort request to bypass the OS page cache on reads.
    pub fn set_uncached(&mut self, uncached: bool) {
        self.uncached = uncached;
    }

    pub fn uncached(&self) -> bool {
        self.uncached
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }

    pub fn series_path(&self, index: usize) -> Result<PathBuf> {
        self.manifest
            .records
            .get(index)
            .map(|r| self.root.join(&r.path))
            .ok_or(Error::StoreRead {
                index,
                len: self.manifest.len(),
            })
    }

    fn check_size(&self, path: &Path, found: u64) -> Result<()> {
        let expected = self.manifest.series_len() as u64 * VALUE_BYTES;
        if found != expected {
            return Err(Error::SizeMismatch {
                path: path.to_path_buf(),
                expected,
                found,
            });
        }
        Ok(())
    }

    /// Writes series `index`, which must either exist or be the next slot.
    /// The manifest is updated in memory; call [`Self::save_manifest`] after.
    pub fn write_series(
        &mut self,
        index: usize,
        x: &NormalizedTimeSeries,
        meta: SeriesMeta,
    ) -> Result<()> {
        let n = self.manifest.len();
        if index > n {
            return Err(Error::StoreRead { index, len: n });
        }
        if n > 0 && !(n == 1 && index == 0) && x.len() != self.manifest.series_len() {
            return Err(Error::LengthMismatch {
                left: self.manifest.series_len(),
                right: x.len(),
            });
        }
        let rel = format!("series/{index}.f64");
        let path = self.root.join(&rel);
        let mut bytes = vec![0u8; x.len() * VALUE_BYTES as usize];
        LittleEndian::write_f64_into(x, &mut bytes);
        fs::write(&path, &bytes).map_err(|e| Error::io(&path, e))?;
        let record = ManifestRecord {
            index,
            path: rel,
            series_len: x.len(),
            season_strength: meta.season_strength,
            trend_strength: meta.trend_strength,
            season_length: meta.season_length,
        };
        if index == n {
            self.manifest.records.push(record);
        } else {
            self.manifest.records[index] = record;
        }
        Ok(())
    }

    /// Recomputes the mean strengths and writes `manifest.tsv`.
    pub fn save_manifest(&self) -> Result<()> {
        let mut manifest = self.manifest.clone();
        manifest.refresh_means();
        save_manifest(&self.root, &manifest)
    }

    pub fn finish(mut self) -> Result<Self> {
        self.manifest.refresh_means();
        save_manifest(&self.root, &self.manifest)?;
        Ok(self)
    }

    pub fn read_series(&self, index: usize) -> Result<NormalizedTimeSeries> {
        let mut buf = Vec::new();
        self.read_into(index, &mut buf)?;
        NormalizedTimeSeries::new(buf)
    }

    /// Reads every series into memory.
    pub fn load_dataset(&self) -> Result<Dataset> {
        let series = (0..self.manifest.len())
            .map(|i| self.read_series(i))
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(series, self.manifest.meta())
    }
}

#[cfg(target_os = "linux")]
fn drop_cache(file: &File) {
    use std::os::unix::io::AsRawFd;
    // SAFETY: the descriptor is valid for the lifetime of `file`; the call only
    // advises the kernel and does not touch memory.
    unsafe {
        libc::posix_fadvise(file.as_raw_fd(), 0, 0, libc::POSIX_FADV_DONTNEED);
    }
}

#[cfg(not(target_os = "linux"))]
fn drop_cache(_file: &File) {}

impl SeriesSource for SeriesStore {
    fn len(&self) -> usize {
        self.manifest.len()
    }

    fn series_len(&self) -> usize {
        self.manifest.series_len()
    }

    fn read_into(&self, index: usize, buf: &mut Vec<f64>) -> Result<()> {
        let path = self.series_path(index)?;
        let mut file = File::open(&path).map_err(|e| Error::io(&path, e))?;
        if self.uncached {
            drop_cache(&file);
        }
        let mut bytes = Vec::with_capacity(self.manifest.series_len() * VALUE_BYTES as usize + 1);
        file.read_to_end(&mut bytes)
            .map_err(|e| Error::io(&path, e))?;
        self.check_size(&path, bytes.len() as u64)?;
        buf.clear();
        buf.resize(bytes.len() / VALUE_BYTES as usize, 0.0);
        LittleEndian::read_f64_into(&bytes, buf);
        Ok(())
    }
}

/// Stable short hash of a configuration for a given series length.
pub fn config_hash(config: &TechniqueConfig, series_len: usize) -> String {
    let mut h = Sha256::new();
    h.update(config.to_bytes());
    h.update((series_len as u64).to_le_bytes());
    hex::encode(&h.finalize()[..8])
}

pub fn index_path(root: &Path, config: &TechniqueConfig, series_len: usize) -> PathBuf {
    root.join("index").join(format!(
        "{}-{}.bin",
        config.technique().tag(),
        config_hash(config, series_len)
    ))
}

fn symbol_width(alphabet: usize) -> usize {
    if alphabet <= 256 {
        1
    } else {
        2
    }
}

fn write_symbols(w: &mut impl Write, symbols: &[Symbol], alphabet: usize) -> std::io::Result<()> {
    if symbol_width(alphabet) == 1 {
        let bytes: Vec<u8> = symbols.iter().map(|&s| s as u8).collect();
        w.write_all(&bytes)
    } else {
        for &s in symbols {
            w.write_u16::<LittleEndian>(s)?;
        }
        Ok(())
    }
}

fn read_symbols(r: &mut impl Read, n: usize, alphabet: usize) -> std::io::Result<Vec<Symbol>> {
    let symbols = if symbol_width(alphabet) == 1 {
        let mut bytes = vec![0u8; n];
        r.read_exact(&mut bytes)?;
        bytes.into_iter().map(Symbol::from).collect::<Vec<_>>()
    } else {
        let mut out = vec![0; n];
        r.read_u16_into::<LittleEndian>(&mut out)?;
        out
    };
    if symbols.iter().any(|&s| s as usize >= alphabet) {
        return Err(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            "symbol outside alphabet",
        ));
    }
    Ok(symbols)
}

/// Writes a versioned index file: magic, version, configuration header, then
/// packed symbols (one byte per symbol when `A <= 256`, else two).
pub fn write_index(path: &Path, index: &RepresentationIndex) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let io = |e| Error::io(path, e);
    let file = File::create(path).map_err(io)?;
    let mut w = BufWriter::new(file);
    let config = index.config();
    let header = config.to_bytes();
    (|| -> std::io::Result<()> {
        w.write_all(INDEX_MAGIC)?;
        w.write_u32::<LittleEndian>(INDEX_VERSION)?;
        w.write_u32::<LittleEndian>(header.len() as u32)?;
        w.write_all(&header)?;
        w.write_u64::<LittleEndian>(index.series_len() as u64)?;
        w.write_u64::<LittleEndian>(index.len() as u64)?;
        let residual = config.residual_alphabet();
        let component = config.component_alphabet().unwrap_or(0);
        for r in index.representations() {
            write_symbols(&mut w, r.component_symbols(), component)?;
            write_symbols(&mut w, r.residual_symbols(), residual)?;
        }
        w.flush()
    })()
    .map_err(io)
}

/// Reads an index file. When `expected` is given, a different stored
/// configuration or series length is a `ConfigMismatch`.
pub fn read_index(
    path: &Path,
    expected: Option<(&TechniqueConfig, usize)>,
) -> Result<RepresentationIndex> {
    let io = |e| Error::io(path, e);
    let mut r = BufReader::new(File::open(path).map_err(io)?);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic).map_err(io)?;
    if &magic != INDEX_MAGIC {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: "not an index file".into(),
        });
    }
    let version = r.read_u32::<LittleEndian>().map_err(io)?;
    if version != INDEX_VERSION {
        return Err(Error::VersionMismatch {
            expected: INDEX_VERSION,
            found: version,
        });
    }
    let header_len = r.read_u32::<LittleEndian>().map_err(io)? as usize;
    if header_len > 4096 {
        return Err(Error::ConfigMismatch("oversized configuration header".into()));
    }
    let mut header = vec![0u8; header_len];
    r.read_exact(&mut header).map_err(io)?;
    let config = TechniqueConfig::from_bytes(&header)?;
    let series_len = r.read_u64::<LittleEndian>().map_err(io)? as usize;
    if let Some((want, want_len)) = expected {
        if *want != config || want_len != series_len {
            return Err(Error::ConfigMismatch(format!(
                "stored {config} (T={series_len}), requested {want} (T={want_len})"
            )));
        }
    }
    let count = r.read_u64::<LittleEndian>().map_err(io)? as usize;
    let w = config.segments();
    let mut reps = Vec::with_capacity(count.min(1 << 24));
    for _ in 0..count {
        let rep = match config {
            TechniqueConfig::Sax { alphabet, .. } => Representation::Sax(SaxRepresentation {
                symbols: read_symbols(&mut r, w, alphabet).map_err(io)?,
                alphabet_size: alphabet,
                series_len,
            }),
            TechniqueConfig::Ssax {
                season_length,
                season_alphabet,
                residual_alphabet,
                ..
            } => Representation::Ssax(SsaxRepresentation {
                season_symbols: read_symbols(&mut r, season_length, season_alphabet)
                    .map_err(io)?,
                residual_symbols: read_symbols(&mut r, w, residual_alphabet).map_err(io)?,
                season_alphabet,
                residual_alphabet,
                series_len,
            }),
            TechniqueConfig::Tsax {
                trend_alphabet,
                residual_alphabet,
                ..
            } => Representation::Tsax(TsaxRepresentation {
                trend_symbol: read_symbols(&mut r, 1, trend_alphabet).map_err(io)?[0],
                residual_symbols: read_symbols(&mut r, w, residual_alphabet).map_err(io)?,
                trend_alphabet,
                residual_alphabet,
                series_len,
            }),
        };
        reps.push(rep);
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest).map_err(io)? != 0 {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: "trailing bytes after index".into(),
        });
    }
    RepresentationIndex::from_parts(config, series_len, reps)
}

/// Writes `index` under the store's `index/` directory and returns its path.
pub fn persist_index(store: &SeriesStore, index: &RepresentationIndex) -> Result<PathBuf> {
    let path = index_path(store.root(), index.config(), index.series_len());
    write_index(&path, index)?;
    Ok(path)
}

/// Loads the index for `config` from the store's `index/` directory.
pub fn load_index(store: &SeriesStore, config: &TechniqueConfig) -> Result<RepresentationIndex> {
    let series_len = store.manifest().series_len();
    let path = index_path(store.root(), config, series_len);
    let index = read_index(&path, Some((config, series_len)))?;
    if index.len() != store.manifest().len() {
        return Err(Error::ConfigMismatch(format!(
            "index holds {} series, store holds {}",
            index.len(),
            store.manifest().len()
        )));
    }
    Ok(index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{normalize, TimeSeries};

    fn series(seed: usize, len: usize) -> NormalizedTimeSeries {
        let v: Vec<f64> = (0..len)
            .map(|t| ((t * 7 + seed * 13) % 17) as f64 + (t as f64 * 0.1 + seed as f64).sin())
            .collect();
        normalize(&TimeSeries::new(v).unwrap()).unwrap()
    }

    fn store_with(n: usize, len: usize) -> (tempfile::TempDir, SeriesStore) {
        let dir = tempfile::tempdir().unwrap();
        let mut store = SeriesStore::create(dir.path()).unwrap();
        for i in 0..n {
            let meta = SeriesMeta {
                season_strength: Some(0.1 * i as f64),
                trend_strength: None,
                season_length: Some(10),
            };
            store.write_series(i, &series(i, len), meta).unwrap();
        }
        let store = store.finish().unwrap();
        (dir, store)
    }

    #[test]
    fn series_round_trip_is_bit_exact() {
        let (_dir, store) = store_with(3, 40);
        let reopened = SeriesStore::open(store.root()).unwrap();
        for i in 0..3 {
            let back = reopened.read_series(i).unwrap();
            let orig = series(i, 40);
            assert!(back.iter().zip(orig.iter()).all(|(a, b)| a.to_bits() == b.to_bits()));
        }
    }

    #[test]
    fn size_mismatch_is_detected() {
        let (_dir, store) = store_with(2, 40);
        let path = store.series_path(1).unwrap();
        let mut bytes = fs::read(&path).unwrap();
        bytes.push(0);
        fs::write(&path, &bytes).unwrap();
        assert!(matches!(
            store.read_series(1),
            Err(Error::SizeMismatch { expected: 320, found: 321, .. })
        ));
        assert!(matches!(
            SeriesStore::open(store.root()),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn missing_file_names_path() {
        let (_dir, store) = store_with(2, 40);
        let path = store.series_path(0).unwrap();
        fs::remove_file(&path).unwrap();
        match SeriesStore::open(store.root()) {
            Err(Error::Io { path: p, .. }) => assert_eq!(p, path),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn manifest_round_trip_and_means() {
        let (_dir, store) = store_with(4, 20);
        let loaded = load_manifest(store.root()).unwrap();
        assert_eq!(&loaded, store.manifest());
        let expected = (0.0 + 0.1 + 0.2 + 0.30000000000000004) / 4.0;
        assert!((loaded.mean_season_strength.unwrap() - expected).abs() < 1e-12);
        assert_eq!(loaded.mean_trend_strength, None);
        assert_eq!(loaded.meta().season_length, Some(10));
    }

    #[test]
    fn empty_manifest_gives_empty_store() {
        let dir = tempfile::tempdir().unwrap();
        SeriesStore::create(dir.path()).unwrap();
        let store = SeriesStore::open(dir.path()).unwrap();
        assert!(store.manifest().is_empty());
        assert_eq!(SeriesSource::len(&store), 0);
    }

    #[test]
    fn manifest_parse_errors_carry_line_numbers() {
        let p = Path::new("m.tsv");
        let text = format!("{MANIFEST_MAGIC}\t1\n0\tseries/0.f64\t4\t-\t-\t-\n1\tx\tfour\t-\t-\t-\n");
        match Manifest::parse(&text, p) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            Manifest::parse(&format!("{MANIFEST_MAGIC}\t9\n"), p),
            Err(Error::VersionMismatch { found: 9, .. })
        ));
        assert!(matches!(
            Manifest::parse("garbage\n", p),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn index_round_trip_for_each_technique() {
        let (_dir, store) = store_with(12, 80);
        let configs = [
            TechniqueConfig::Sax {
                segments: 8,
                alphabet: 300,
            },
            TechniqueConfig::Ssax {
                season_length: 10,
                segments: 4,
                season_alphabet: 9,
                residual_alphabet: 1024,
                strength: 0.4,
            },
            TechniqueConfig::Tsax {
                segments: 16,
                trend_alphabet: 1024,
                residual_alphabet: 64,
                strength: 0.3,
            },
        ];
        for config in configs {
            let index = RepresentationIndex::build(config.clone(), &store).unwrap();
            let path = persist_index(&store, &index).unwrap();
            let loaded = load_index(&store, &config).unwrap();
            assert_eq!(loaded.representations(), index.representations());
            assert_eq!(loaded.config(), index.config());

            let other = match config.clone() {
                TechniqueConfig::Sax { alphabet, .. } => TechniqueConfig::Sax {
                    segments: 4,
                    alphabet,
                },
                c => c,
            };
            if other != config {
                assert!(matches!(
                    read_index(&path, Some((&other, 80))),
                    Err(Error::ConfigMismatch(_))
                ));
            }
        }
    }

    #[test]
    fn index_version_is_checked() {
        let (_dir, store) = store_with(2, 40);
        let config = TechniqueConfig::Sax {
            segments: 4,
            alphabet: 8,
        };
        let index = RepresentationIndex::build(config, &store).unwrap();
        let path = persist_index(&store, &index).unwrap();
        let mut bytes = fs::read(&path).unwrap();
        bytes[8] = 7;
        fs::write(&path, &bytes).unwrap();
        assert!(matches!(
            read_index(&path, None),
            Err(Error::VersionMismatch { found: 7, .. })
        ));
    }

    #[test]
    fn byte_packed_index_size() {
        let (_dir, store) = store_with(10, 96);
        let config = TechniqueConfig::Sax {
            segments: 48,
            alphabet: 64,
        };
        let index = RepresentationIndex::build(config, &store).unwrap();
        let path = persist_index(&store, &index).unwrap();
        let size = fs::metadata(&path).unwrap().len();
        assert!(size <= 10 * 48 + 64, "size {size}");
        assert!(size >= 10 * 48);
    }
}
