//! Fixed-layout structural fingerprint vectors.
//!
//! A fingerprint condenses the structural metrics of one sequence or corpus, across an
//! ordered set of pattern lengths, into a single flat feature vector of dimension
//! `5 × |m_set|`. Feature layout version 1 packs, per pattern length (in m_set order):
//!
//! | index | feature                                          | range  |
//! |-------|--------------------------------------------------|--------|
//! | 5k+0  | normalized entropy `H / H_max` (0 when H_max = 0) | [0, 1] |
//! | 5k+1  | max_prob                                         | (0, 1] |
//! | 5k+2  | distinct_fraction                                | (0, 1] |
//! | 5k+3  | repeated_window_fraction                         | [0, 1] |
//! | 5k+4  | mean_recurrence / total_windows                  | [0, 1) |
//!
//! The layout is versioned so serialized fingerprints stay comparable across releases;
//! any future layout change must bump [`LAYOUT_VERSION`].

use crate::error::{Error, Result};
use crate::extract::{PatternLength, PatternProfile};
use crate::metrics::concentration_stats;
use serde::{Deserialize, Serialize};

/// Current feature layout version.
pub const LAYOUT_VERSION: u16 = 1;

/// Number of features per pattern length.
pub const FEATURES_PER_SCALE: usize = 5;

/// Whether a fingerprint summarizes a single sequence or a pooled corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Sequence,
    Corpus,
}

/// A fixed-layout feature vector over an ordered set of pattern lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct Fingerprint {
    m_set: Vec<PatternLength>,
    provenance: Provenance,
    features: Vec<f64>,
}

impl Fingerprint {
    pub fn m_set(&self) -> &[PatternLength] {
        &self.m_set
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// The flat feature vector, `5 × |m_set|` values in layout order.
    pub fn features(&self) -> &[f64] {
        &self.features
    }

    /// Dimension d of the feature vector.
    pub fn d(&self) -> usize {
        self.features.len()
    }

    /// Serialize to the versioned JSON document format.
    pub fn to_json(&self) -> String {
        // Serialization of this plain document cannot fail.
        serde_json::to_string_pretty(self).expect("fingerprint serialization")
    }

    /// Parse the versioned JSON document format.
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Format(format!("fingerprint document: {e}")))
    }
}

/// On-disk / on-wire shape of a fingerprint.
#[derive(Serialize, Deserialize)]
struct FingerprintDoc {
    layout_version: u16,
    m_set: Vec<u8>,
    provenance: Provenance,
    d: usize,
    features: Vec<f64>,
}

impl Serialize for Fingerprint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FingerprintDoc {
            layout_version: LAYOUT_VERSION,
            m_set: self.m_set.iter().map(|m| u8::from(*m)).collect(),
            provenance: self.provenance,
            d: self.features.len(),
            features: self.features.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Fingerprint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let doc = FingerprintDoc::deserialize(d)?;
        if doc.layout_version != LAYOUT_VERSION {
            return Err(D::Error::custom(format!(
                "unsupported fingerprint layout version {} (expected {LAYOUT_VERSION})",
                doc.layout_version
            )));
        }
        let m_set: Result<Vec<PatternLength>> =
            doc.m_set.iter().map(|&m| PatternLength::new(m as u32)).collect();
        let m_set = m_set.map_err(|e| D::Error::custom(e.to_string()))?;
        if doc.features.len() != FEATURES_PER_SCALE * m_set.len() || doc.d != doc.features.len() {
            return Err(D::Error::custom(format!(
                "fingerprint dimension mismatch: d = {}, |features| = {}, |m_set| = {}",
                doc.d,
                doc.features.len(),
                m_set.len()
            )));
        }
        Ok(Fingerprint {
            m_set,
            provenance: doc.provenance,
            features: doc.features,
        })
    }
}

/// Build the fingerprint of one sequence or corpus from its per-scale profiles.
///
/// `profiles` supplies exactly one profile per pattern length, in the m_set order the
/// fingerprint will carry; duplicates are rejected.
pub fn compute_fingerprint(profiles: &[PatternProfile], provenance: Provenance) -> Result<Fingerprint> {
    if profiles.is_empty() {
        return Err(Error::InvalidArgument(
            "a fingerprint needs at least one pattern length".into(),
        ));
    }
    let mut m_set = Vec::with_capacity(profiles.len());
    for p in profiles {
        if m_set.contains(&p.m()) {
            return Err(Error::IncompatibleProfile(format!(
                "duplicate pattern length {} in fingerprint input",
                p.m()
            )));
        }
        m_set.push(p.m());
    }
    let mut features = Vec::with_capacity(FEATURES_PER_SCALE * profiles.len());
    for profile in profiles {
        let s = concentration_stats(profile)?;
        let normalized_entropy = if s.entropy_max_bits > 0.0 {
            (s.entropy_bits / s.entropy_max_bits).clamp(0.0, 1.0)
        } else {
            0.0
        };
        features.push(normalized_entropy);
        features.push(s.max_prob);
        features.push(s.distinct_fraction);
        features.push(s.repeated_window_fraction);
        features.push(s.mean_recurrence / profile.total_windows() as f64);
    }
    Ok(Fingerprint {
        m_set,
        provenance,
        features,
    })
}

/// Euclidean distance between two fingerprints of identical layout.
pub fn fingerprint_distance(a: &Fingerprint, b: &Fingerprint) -> Result<f64> {
    if a.m_set != b.m_set || a.features.len() != b.features.len() {
        return Err(Error::IncompatibleFingerprint(format!(
            "layouts differ: m_set {:?} (d = {}) vs {:?} (d = {})",
            a.m_set.iter().map(|m| m.get()).collect::<Vec<_>>(),
            a.d(),
            b.m_set.iter().map(|m| m.get()).collect::<Vec<_>>(),
            b.d()
        )));
    }
    let sum: f64 = a
        .features
        .iter()
        .zip(b.features.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum.sqrt())
}
