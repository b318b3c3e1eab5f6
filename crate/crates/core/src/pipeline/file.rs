//! Binary serialization of corpus analyses (`.sbfa`).
//!
//! Layout (integers big-endian):
//!
//! ```text
//! magic   4 bytes   "SBFA"
//! version u16       1
//! hlen    u64       byte length of the JSON header
//! header  hlen bytes  UTF-8 JSON: identity, m_set, per-scale summaries, fingerprint
//! blocks  one per pattern length, in m_set order:
//!   total_windows u64
//!   entry_count   u64
//!   entries       entry_count × (varint value_delta, varint count)
//! ```
//!
//! Profile entries are sorted by pattern value, so values are stored as deltas from the
//! previous value (the first entry's delta is the value itself) in LEB128 varints, which
//! keeps dense low-m blocks and sparse high-m blocks equally compact. Readers reject
//! wrong magic/version, malformed headers, non-increasing or out-of-range values,
//! zero counts, count sums that disagree with `total_windows`, window totals that
//! disagree with the header's corpus shape, truncation, and trailing bytes. Writing then
//! reading a file reproduces the analysis bit-for-bit.

use super::{CorpusAnalysis, CorpusIdentity, ScaleAnalysis};
use crate::error::{Error, Result};
use crate::extract::{PatternLength, PatternProfile};
use crate::fingerprint::Fingerprint;
use crate::metrics::{RecurrenceHistogram, StructuralMetrics};
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"SBFA";
const VERSION: u16 = 1;

/// JSON header carried inside an analysis file.
#[derive(Serialize, Deserialize)]
struct AnalysisHeader {
    identity: CorpusIdentity,
    m_set: Vec<u8>,
    scales: Vec<ScaleHeader>,
    fingerprint: Fingerprint,
}

#[derive(Serialize, Deserialize)]
struct ScaleHeader {
    m: u8,
    metrics: StructuralMetrics,
    recurrence_bins: [f64; 5],
    seq_entropy_mean: f64,
    seq_entropy_std: f64,
}

/// Write an analysis in the `.sbfa` format.
pub fn write_analysis<W: Write>(w: &mut W, analysis: &CorpusAnalysis) -> Result<()> {
    let header = AnalysisHeader {
        identity: analysis.identity,
        m_set: analysis.scales.iter().map(|s| u8::from(s.m)).collect(),
        scales: analysis
            .scales
            .iter()
            .map(|s| ScaleHeader {
                m: u8::from(s.m),
                metrics: s.metrics,
                recurrence_bins: s.recurrence.bins,
                seq_entropy_mean: s.seq_entropy_mean,
                seq_entropy_std: s.seq_entropy_std,
            })
            .collect(),
        fingerprint: analysis.fingerprint.clone(),
    };
    let header_bytes =
        serde_json::to_vec(&header).map_err(|e| Error::Format(format!("analysis header: {e}")))?;

    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_be_bytes())?;
    w.write_all(&(header_bytes.len() as u64).to_be_bytes())?;
    w.write_all(&header_bytes)?;

    for scale in &analysis.scales {
        let profile = &scale.profile;
        w.write_all(&profile.total_windows().to_be_bytes())?;
        w.write_all(&(profile.distinct_count()).to_be_bytes())?;
        let mut prev = 0u64;
        let mut first = true;
        for (v, c) in profile.iter() {
            let delta = if first { v } else { v - prev };
            first = false;
            prev = v;
            write_varint(w, delta)?;
            write_varint(w, c)?;
        }
    }
    Ok(())
}

/// Read an analysis in the `.sbfa` format, validating structure and integrity.
pub fn read_analysis<R: Read>(r: &mut R) -> Result<CorpusAnalysis> {
    let mut magic = [0u8; 4];
    read_exact(r, &mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format(format!(
            "not an analysis file: bad magic {magic:02x?}"
        )));
    }
    let version = u16::from_be_bytes(read_array(r)?);
    if version != VERSION {
        return Err(Error::Format(format!(
            "unsupported analysis format version {version} (expected {VERSION})"
        )));
    }
    let header_len = u64::from_be_bytes(read_array(r)?);
    // Headers are a few KB of JSON; anything larger is corruption.
    const MAX_HEADER: u64 = 1 << 24;
    if header_len == 0 || header_len > MAX_HEADER {
        return Err(Error::Format(format!(
            "implausible analysis header length {header_len}"
        )));
    }
    let mut header_bytes = vec![0u8; header_len as usize];
    read_exact(r, &mut header_bytes)?;
    let header: AnalysisHeader = serde_json::from_slice(&header_bytes)
        .map_err(|e| Error::Format(format!("analysis header: {e}")))?;

    let identity = header.identity;
    identity
        .spec
        .validate()
        .map_err(|e| Error::Format(format!("analysis header: {e}")))?;
    if identity.count == 0 || identity.length_bits == 0 {
        return Err(Error::Format(
            "analysis header: corpus shape must be nonempty".into(),
        ));
    }
    if header.m_set.len() != header.scales.len() || header.m_set.is_empty() {
        return Err(Error::Format(format!(
            "analysis header: {} pattern lengths but {} scale summaries",
            header.m_set.len(),
            header.scales.len()
        )));
    }

    let mut scales = Vec::with_capacity(header.scales.len());
    for (&m_raw, scale_header) in header.m_set.iter().zip(header.scales) {
        if scale_header.m != m_raw {
            return Err(Error::Format(format!(
                "analysis header: m_set entry {m_raw} does not match scale summary m = {}",
                scale_header.m
            )));
        }
        let m = PatternLength::new(m_raw as u32)
            .map_err(|e| Error::Format(format!("analysis header: {e}")))?;
        if m.get() as u64 > identity.length_bits {
            return Err(Error::Format(format!(
                "analysis header: pattern length {m} exceeds sequence length {}",
                identity.length_bits
            )));
        }
        let expected_windows =
            identity.count as u64 * (identity.length_bits - m.get() as u64 + 1);

        let total_windows = u64::from_be_bytes(read_array(r)?);
        if total_windows != expected_windows {
            return Err(Error::Format(format!(
                "block m = {m}: total_windows {total_windows} does not match corpus shape (expected {expected_windows})"
            )));
        }
        let entry_count = u64::from_be_bytes(read_array(r)?);
        if entry_count == 0 || entry_count > total_windows {
            return Err(Error::Format(format!(
                "block m = {m}: implausible entry count {entry_count} for {total_windows} windows"
            )));
        }

        let mut pairs: Vec<(u64, u64)> = Vec::with_capacity(entry_count as usize);
        let mut prev = 0u64;
        let mut sum = 0u64;
        for i in 0..entry_count {
            let delta = read_varint(r)?;
            let value = if i == 0 {
                delta
            } else {
                if delta == 0 {
                    return Err(Error::Format(format!(
                        "block m = {m}: pattern values not strictly increasing"
                    )));
                }
                prev.checked_add(delta).ok_or_else(|| {
                    Error::Format(format!("block m = {m}: pattern value overflow"))
                })?
            };
            if m.get() < 64 && value >= 1u64 << m.get() {
                return Err(Error::Format(format!(
                    "block m = {m}: pattern value {value} out of range"
                )));
            }
            let count = read_varint(r)?;
            if count == 0 {
                return Err(Error::Format(format!("block m = {m}: zero count entry")));
            }
            sum = sum.checked_add(count).ok_or_else(|| {
                Error::Format(format!("block m = {m}: count sum overflow"))
            })?;
            pairs.push((value, count));
            prev = value;
        }
        if sum != total_windows {
            return Err(Error::Format(format!(
                "block m = {m}: counts sum to {sum}, expected {total_windows}"
            )));
        }

        let profile = PatternProfile::from_sorted_pairs(m, pairs, total_windows);
        scales.push(ScaleAnalysis {
            m,
            profile,
            metrics: scale_header.metrics,
            recurrence: RecurrenceHistogram {
                m,
                bins: scale_header.recurrence_bins,
            },
            seq_entropy_mean: scale_header.seq_entropy_mean,
            seq_entropy_std: scale_header.seq_entropy_std,
        });
    }

    let mut trailing = [0u8; 1];
    match r.read(&mut trailing)? {
        0 => {}
        _ => return Err(Error::Format("trailing bytes after final block".into())),
    }

    Ok(CorpusAnalysis {
        identity,
        scales,
        fingerprint: header.fingerprint,
    })
}

/// Write an analysis file at `path`.
pub fn write_analysis_file(path: &Path, analysis: &CorpusAnalysis) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_analysis(&mut w, analysis)?;
    w.flush()?;
    Ok(())
}

/// Read an analysis file from `path`.
pub fn read_analysis_file(path: &Path) -> Result<CorpusAnalysis> {
    let mut r = BufReader::new(File::open(path)?);
    read_analysis(&mut r)
}

/// LEB128 unsigned varint.
fn write_varint<W: Write>(w: &mut W, mut v: u64) -> Result<()> {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            w.write_all(&[byte])?;
            return Ok(());
        }
        w.write_all(&[byte | 0x80])?;
    }
}

fn read_varint<R: Read>(r: &mut R) -> Result<u64> {
    let mut value = 0u64;
    let mut shift = 0u32;
    loop {
        let mut byte = [0u8; 1];
        read_exact(r, &mut byte)?;
        let b = byte[0];
        if shift == 63 && b > 1 {
            return Err(Error::Format("varint overflows 64 bits".into()));
        }
        value |= ((b & 0x7f) as u64) << shift;
        if b & 0x80 == 0 {
            return Ok(value);
        }
        shift += 7;
        if shift > 63 {
            return Err(Error::Format("varint longer than 10 bytes".into()));
        }
    }
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8]) -> Result<()> {
    r.read_exact(buf).map_err(|e| {
        if e.kind() == std::io::ErrorKind::UnexpectedEof {
            Error::Format("file truncated".into())
        } else {
            Error::Io(e)
        }
    })
}

fn read_array<R: Read, const N: usize>(r: &mut R) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    read_exact(r, &mut buf)?;
    Ok(buf)
}
