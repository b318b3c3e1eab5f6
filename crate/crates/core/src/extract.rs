//! Sliding-window substring occurrence counting.
//!
//! Every length-m window of a bit sequence (stride 1, overlaps counted) is read as an
//! unsigned integer, MSB-first; a [`PatternProfile`] maps each observed pattern value to
//! its exact occurrence count. Profiles from many sequences merge by plain count addition,
//! so corpus-level profiles are an order-independent integer reduction — the property that
//! makes parallel analysis bit-deterministic.
//!
//! Two counting strategies exist and must agree exactly: a dense table of `2^m` counters
//! (the natural choice for small m) and a sparse sorted map (the only sane choice for
//! large m, where a sequence of n bits can touch at most `n − m + 1` of the `2^m` possible
//! patterns). [`extract_profile`] picks by pattern length; [`extract_profile_with`] lets
//! callers and tests force either.

use crate::error::{Error, Result};
use crate::seqgen::BitSequence;
use serde::{Deserialize, Serialize};

/// Largest pattern length the dense strategy will allocate a table for (`2^16` counters).
pub const DENSE_LIMIT: u32 = 16;

/// A pattern length m in [1, 64]; pattern values fit in a `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct PatternLength(u8);

impl PatternLength {
    pub fn new(m: u32) -> Result<Self> {
        if !(1..=64).contains(&m) {
            return Err(Error::InvalidArgument(format!(
                "pattern length must lie in [1, 64], got {m}"
            )));
        }
        Ok(PatternLength(m as u8))
    }

    pub fn get(&self) -> u32 {
        self.0 as u32
    }

    /// Bit mask selecting the low m bits of a window accumulator.
    #[inline]
    pub(crate) fn mask(&self) -> u64 {
        if self.0 == 64 {
            u64::MAX
        } else {
            (1u64 << self.0) - 1
        }
    }
}

impl TryFrom<u8> for PatternLength {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        PatternLength::new(v as u32)
    }
}

impl From<PatternLength> for u8 {
    fn from(m: PatternLength) -> u8 {
        m.0
    }
}

impl std::fmt::Display for PatternLength {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Number of length-m windows in an n-bit sequence, or an error when none exist.
pub(crate) fn window_count(n: u64, m: PatternLength) -> Result<u64> {
    let m64 = m.get() as u64;
    if m64 > n {
        return Err(Error::EmptyWindow { m: m.get(), n });
    }
    Ok(n - m64 + 1)
}

/// Run `f` on every window value of `seq` at length `m`, front to back.
#[inline]
pub(crate) fn for_each_window<F: FnMut(u64)>(seq: &BitSequence, m: PatternLength, mut f: F) {
    let n = seq.length_bits();
    let m64 = m.get() as u64;
    debug_assert!(m64 <= n);
    let mask = m.mask();
    let mut acc = 0u64;
    let mut index = 0u64;
    for &byte in seq.as_bytes() {
        for shift in (0..8).rev() {
            if index == n {
                return;
            }
            acc = ((acc << 1) | ((byte >> shift) & 1) as u64) & mask;
            index += 1;
            if index >= m64 {
                f(acc);
            }
        }
    }
}

/// How window values are tallied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountingStrategy {
    /// A `2^m` table of counters, indexed directly by pattern value (m ≤ [`DENSE_LIMIT`]).
    DenseTable,
    /// A sorted value → count map holding only observed patterns (any m).
    SparseMap,
}

#[derive(Debug, Clone)]
enum CountStore {
    /// `counts[value]`, length `2^m`.
    Dense(Vec<u64>),
    /// `(value, count)` pairs with strictly increasing values and nonzero counts.
    Sparse(Vec<(u64, u64)>),
}

/// Occurrence counts for every observed length-m pattern of a sequence or corpus.
///
/// Immutable after construction. Iteration order is always ascending by pattern value,
/// regardless of the backing representation, so downstream floating-point summations are
/// reproducible. Equality is semantic: a dense and a sparse profile with the same counts
/// compare equal.
#[derive(Debug, Clone)]
pub struct PatternProfile {
    m: PatternLength,
    total_windows: u64,
    store: CountStore,
}

impl PatternProfile {
    pub(crate) fn from_dense(m: PatternLength, counts: Vec<u64>, total_windows: u64) -> Self {
        debug_assert_eq!(counts.len() as u64, 1u64 << m.get());
        debug_assert_eq!(counts.iter().sum::<u64>(), total_windows);
        PatternProfile {
            m,
            total_windows,
            store: CountStore::Dense(counts),
        }
    }

    pub(crate) fn from_sorted_pairs(m: PatternLength, pairs: Vec<(u64, u64)>, total_windows: u64) -> Self {
        debug_assert!(pairs.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(pairs.iter().all(|&(v, c)| c > 0 && (m.get() == 64 || v < (1u64 << m.get()))));
        debug_assert_eq!(pairs.iter().map(|&(_, c)| c).sum::<u64>(), total_windows);
        PatternProfile {
            m,
            total_windows,
            store: CountStore::Sparse(pairs),
        }
    }

    pub fn m(&self) -> PatternLength {
        self.m
    }

    /// Sum of all counts; for a single n-bit sequence this is `n − m + 1`.
    pub fn total_windows(&self) -> u64 {
        self.total_windows
    }

    /// Number of distinct patterns observed.
    pub fn distinct_count(&self) -> u64 {
        match &self.store {
            CountStore::Dense(counts) => counts.iter().filter(|&&c| c > 0).count() as u64,
            CountStore::Sparse(pairs) => pairs.len() as u64,
        }
    }

    /// Occurrence count of one pattern value (0 when absent).
    pub fn count_of(&self, value: u64) -> u64 {
        match &self.store {
            CountStore::Dense(counts) => counts.get(value as usize).copied().unwrap_or(0),
            CountStore::Sparse(pairs) => match pairs.binary_search_by_key(&value, |&(v, _)| v) {
                Ok(i) => pairs[i].1,
                Err(_) => 0,
            },
        }
    }

    /// `(value, count)` pairs of every observed pattern, ascending by value.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        let (dense, sparse) = match &self.store {
            CountStore::Dense(counts) => (Some(counts), None),
            CountStore::Sparse(pairs) => (None, Some(pairs)),
        };
        dense
            .into_iter()
            .flat_map(|counts| {
                counts
                    .iter()
                    .enumerate()
                    .filter(|&(_, &c)| c > 0)
                    .map(|(v, &c)| (v as u64, c))
            })
            .chain(sparse.into_iter().flat_map(|pairs| pairs.iter().copied()))
    }

    /// Largest single-pattern count.
    pub fn max_count(&self) -> u64 {
        self.iter().map(|(_, c)| c).max().unwrap_or(0)
    }
}

impl PartialEq for PatternProfile {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
            && self.total_windows == other.total_windows
            && self.iter().eq(other.iter())
    }
}

impl Eq for PatternProfile {}

/// A normalized pattern profile: probabilities over observed patterns.
///
/// Entries are ascending by pattern value; zero-count patterns are omitted, so every
/// probability is strictly positive and the entries sum to 1 (up to rounding).
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    m: PatternLength,
    entries: Vec<(u64, f64)>,
}

impl Distribution {
    #[cfg(test)]
    pub(crate) fn from_entries(m: PatternLength, entries: Vec<(u64, f64)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        Distribution { m, entries }
    }

    pub fn m(&self) -> PatternLength {
        self.m
    }

    /// `(value, probability)` pairs, ascending by value, all probabilities > 0.
    pub fn entries(&self) -> &[(u64, f64)] {
        &self.entries
    }
}

/// Count occurrences of one pattern over all `n − m + 1` windows of a sequence.
pub fn count_occurrences(pattern: &BitSequence, sequence: &BitSequence) -> Result<u64> {
    let m = PatternLength::new(u32::try_from(pattern.length_bits()).unwrap_or(u32::MAX))?;
    window_count(sequence.length_bits(), m)?;
    let mut target = 0u64;
    for i in 0..pattern.length_bits() {
        target = (target << 1) | pattern.bit(i) as u64;
    }
    let mut hits = 0u64;
    for_each_window(sequence, m, |v| {
        if v == target {
            hits += 1;
        }
    });
    Ok(hits)
}

/// Extract the pattern profile of a sequence, choosing the counting strategy by m.
pub fn extract_profile(sequence: &BitSequence, m: PatternLength) -> Result<PatternProfile> {
    let strategy = if m.get() <= DENSE_LIMIT {
        CountingStrategy::DenseTable
    } else {
        CountingStrategy::SparseMap
    };
    extract_profile_with(sequence, m, strategy)
}

/// Extract the pattern profile of a sequence with an explicit counting strategy.
pub fn extract_profile_with(
    sequence: &BitSequence,
    m: PatternLength,
    strategy: CountingStrategy,
) -> Result<PatternProfile> {
    let total = window_count(sequence.length_bits(), m)?;
    match strategy {
        CountingStrategy::DenseTable => {
            if m.get() > DENSE_LIMIT {
                return Err(Error::InvalidArgument(format!(
                    "dense counting is limited to m ≤ {DENSE_LIMIT} (2^m table); got m = {m}"
                )));
            }
            let mut counts = vec![0u64; 1usize << m.get()];
            for_each_window(sequence, m, |v| counts[v as usize] += 1);
            Ok(PatternProfile::from_dense(m, counts, total))
        }
        CountingStrategy::SparseMap => {
            let mut values = Vec::with_capacity(total as usize);
            for_each_window(sequence, m, |v| values.push(v));
            values.sort_unstable();
            let mut pairs: Vec<(u64, u64)> = Vec::new();
            for v in values {
                match pairs.last_mut() {
                    Some(last) if last.0 == v => last.1 += 1,
                    _ => pairs.push((v, 1)),
                }
            }
            Ok(PatternProfile::from_sorted_pairs(m, pairs, total))
        }
    }
}

/// Sum sorted `(value, count)` pairs with duplicate values, in place.
pub(crate) fn aggregate_sorted_pairs(pairs: &mut Vec<(u64, u64)>) {
    if pairs.is_empty() {
        return;
    }
    let mut write = 0usize;
    for read in 1..pairs.len() {
        if pairs[read].0 == pairs[write].0 {
            pairs[write].1 += pairs[read].1;
        } else {
            write += 1;
            pairs[write] = pairs[read];
        }
    }
    pairs.truncate(write + 1);
}

/// Merge profiles of equal m by summing counts pattern-wise.
///
/// The result is independent of input order (integer addition), which is what lets
/// corpus pooling run under any parallel schedule.
pub fn merge_profiles(profiles: &[PatternProfile]) -> Result<PatternProfile> {
    merge_profile_refs(profiles.iter())
}

/// Merge by reference; the workhorse behind [`merge_profiles`] and corpus pooling.
pub(crate) fn merge_profile_refs<'a, I>(profiles: I) -> Result<PatternProfile>
where
    I: Iterator<Item = &'a PatternProfile> + Clone,
{
    let first = profiles
        .clone()
        .next()
        .ok_or_else(|| Error::InvalidArgument("cannot merge an empty profile list".into()))?;
    let m = first.m();
    for p in profiles.clone() {
        if p.m() != m {
            return Err(Error::IncompatibleProfile(format!(
                "cannot merge profiles with different pattern lengths {} and {}",
                m,
                p.m()
            )));
        }
    }
    let total: u64 = profiles.clone().map(|p| p.total_windows()).sum();
    if m.get() <= DENSE_LIMIT {
        let mut counts = vec![0u64; 1usize << m.get()];
        for p in profiles {
            for (v, c) in p.iter() {
                counts[v as usize] += c;
            }
        }
        Ok(PatternProfile::from_dense(m, counts, total))
    } else {
        let len: usize = profiles.clone().map(|p| p.distinct_count() as usize).sum();
        let mut pairs = Vec::with_capacity(len);
        for p in profiles {
            pairs.extend(p.iter());
        }
        pairs.sort_unstable_by_key(|&(v, _)| v);
        aggregate_sorted_pairs(&mut pairs);
        Ok(PatternProfile::from_sorted_pairs(m, pairs, total))
    }
}

/// Normalize a profile into a probability distribution over observed patterns.
pub fn normalize(profile: &PatternProfile) -> Result<Distribution> {
    if profile.total_windows() == 0 {
        return Err(Error::EmptyWindow {
            m: profile.m().get(),
            n: 0,
        });
    }
    let total = profile.total_windows() as f64;
    let entries = profile.iter().map(|(v, c)| (v, c as f64 / total)).collect();
    Ok(Distribution {
        m: profile.m(),
        entries,
    })
}
