//! End-to-end experiment pipeline: corpus analysis, permutation null baselines, and
//! two-corpus comparison reports.
//!
//! The aggregation semantics are pooled-counts: per-sequence profiles are summed into one
//! corpus profile per pattern length, and deviation/concentration/recurrence are computed
//! on the pooled counts. Because pooling is an integer reduction, the analysis is
//! bit-identical under any parallel schedule. Entropy is additionally summarized
//! per sequence (mean and standard deviation across sequences), since both views answer
//! different questions and reports carry both.
//!
//! Significance of a cross-corpus deviation is judged against a permutation null: shuffle
//! a reference corpus's sequences (seeded, deterministic), split into halves, pool each
//! half, and record the deviation between the halves; the mean/std of that population
//! turn an observed deviation into a z-score.

mod file;
mod report;

pub use file::{read_analysis, read_analysis_file, write_analysis, write_analysis_file};
pub use report::{
    deviation_csv, entropy_csv, human_tables, recurrence_csv, report_json, write_report_files,
};

use crate::error::{Error, Result};
use crate::extract::{
    aggregate_sorted_pairs, for_each_window, window_count, PatternLength, PatternProfile,
    DENSE_LIMIT,
};
use crate::fingerprint::{compute_fingerprint, Fingerprint, Provenance};
use crate::metrics::{
    concentration_stats, entropy_of_counts, l1_merge_walk, recurrence_histogram,
    RecurrenceHistogram, StructuralMetrics,
};
use crate::mix::MixStream;
use crate::seqgen::{Corpus, GeneratorSpec, Seed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Sequences per parallel work unit during corpus pooling.
const POOL_CHUNK: usize = 256;

/// What a corpus is, without its bits: enough to cite and regenerate it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorpusIdentity {
    pub spec: GeneratorSpec,
    pub master_seed: Seed,
    pub count: u32,
    pub length_bits: u64,
}

impl CorpusIdentity {
    pub fn of(corpus: &Corpus) -> Self {
        CorpusIdentity {
            spec: corpus.spec(),
            master_seed: corpus.master_seed(),
            count: corpus.count(),
            length_bits: corpus.length_bits(),
        }
    }

    /// One-line description for summaries and table headers.
    pub fn describe(&self) -> String {
        format!(
            "{} seed={} count={} length_bits={}",
            self.spec.describe(),
            self.master_seed.value,
            self.count,
            self.length_bits
        )
    }
}

/// Everything the pipeline knows about one corpus at one pattern length.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleAnalysis {
    pub m: PatternLength,
    /// Pooled occurrence counts across all sequences.
    pub profile: PatternProfile,
    /// Concentration/entropy summary of the pooled profile.
    pub metrics: StructuralMetrics,
    /// Recurrence histogram of the pooled profile.
    pub recurrence: RecurrenceHistogram,
    /// Mean of per-sequence plug-in entropies.
    pub seq_entropy_mean: f64,
    /// Population standard deviation of per-sequence plug-in entropies.
    pub seq_entropy_std: f64,
}

/// Full structural analysis of one corpus across a set of pattern lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusAnalysis {
    pub identity: CorpusIdentity,
    pub scales: Vec<ScaleAnalysis>,
    /// Corpus-level fingerprint over the pooled profiles.
    pub fingerprint: Fingerprint,
}

impl CorpusAnalysis {
    pub fn m_set(&self) -> Vec<PatternLength> {
        self.scales.iter().map(|s| s.m).collect()
    }

    pub fn scale(&self, m: PatternLength) -> Option<&ScaleAnalysis> {
        self.scales.iter().find(|s| s.m == m)
    }
}

/// Moments of the deviation score under random re-partition of a reference corpus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NullBaseline {
    pub m: PatternLength,
    pub shuffle_count: u32,
    pub d_mean: f64,
    pub d_std: f64,
    /// Seed the shuffles were drawn from.
    pub seed: Seed,
}

/// A deviation z-score against a null baseline.
///
/// The degenerate null (zero spread) is mapped explicitly: a positive deviation over a
/// zero-spread null is reported as `PlusInfinity`; a zero deviation over it is 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZScore {
    Finite(f64),
    PlusInfinity,
}

impl ZScore {
    /// CSV cell form: the number, or the `+inf` marker.
    pub fn to_cell(self) -> String {
        match self {
            ZScore::Finite(v) => format!("{v}"),
            ZScore::PlusInfinity => "+inf".to_string(),
        }
    }
}

impl Serialize for ZScore {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ZScore::Finite(v) => s.serialize_f64(*v),
            ZScore::PlusInfinity => s.serialize_str("+inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ZScore {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Marker(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(ZScore::Finite(v)),
            Repr::Marker(s) if s == "+inf" => Ok(ZScore::PlusInfinity),
            Repr::Marker(s) => Err(serde::de::Error::custom(format!("unknown z marker {s:?}"))),
        }
    }
}

/// Side-by-side entropy view for one pattern length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyComparison {
    pub pooled_a: f64,
    pub pooled_b: f64,
    pub per_seq_mean_a: f64,
    pub per_seq_std_a: f64,
    pub per_seq_mean_b: f64,
    pub per_seq_std_b: f64,
}

/// One row of a comparison report: everything about one pattern length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleComparison {
    pub m: PatternLength,
    /// L1 deviation between the corpora's pooled distributions.
    pub deviation: f64,
    /// z-score against the null baseline, when one was supplied for this m.
    pub z: Option<ZScore>,
    pub null: Option<NullBaseline>,
    pub entropy: EntropyComparison,
    pub concentration_a: StructuralMetrics,
    pub concentration_b: StructuralMetrics,
    pub recurrence_a: [f64; 5],
    pub recurrence_b: [f64; 5],
}

/// Two-corpus comparison across all shared pattern lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub schema_version: u16,
    pub a: CorpusIdentity,
    pub b: CorpusIdentity,
    pub scales: Vec<ScaleComparison>,
}

/// Analyze a corpus across a set of pattern lengths.
///
/// Pooled profiles equal `merge_profiles` over per-sequence extraction; per-sequence
/// entropies are computed sequence by sequence and summarized. The result is
/// bit-identical regardless of thread count.
pub fn analyze_corpus(corpus: &Corpus, m_set: &[PatternLength]) -> Result<CorpusAnalysis> {
    if m_set.is_empty() {
        return Err(Error::InvalidArgument("m_set must contain at least one pattern length".into()));
    }
    for (i, m) in m_set.iter().enumerate() {
        if m_set[..i].contains(m) {
            return Err(Error::InvalidArgument(format!("duplicate pattern length {m} in m_set")));
        }
        window_count(corpus.length_bits(), *m)?;
    }

    let mut profiles = Vec::with_capacity(m_set.len());
    let mut entropy_summaries = Vec::with_capacity(m_set.len());
    for &m in m_set {
        let (profile, entropies) = pooled_scale(corpus, m);
        let (mean, std) = mean_and_population_std(&entropies);
        profiles.push(profile);
        entropy_summaries.push((mean, std));
    }

    let fingerprint = compute_fingerprint(&profiles, Provenance::Corpus)?;

    let mut scales = Vec::with_capacity(m_set.len());
    for (profile, (seq_entropy_mean, seq_entropy_std)) in
        profiles.into_iter().zip(entropy_summaries)
    {
        let metrics = concentration_stats(&profile)?;
        let recurrence = recurrence_histogram(&profile)?;
        scales.push(ScaleAnalysis {
            m: profile.m(),
            profile,
            metrics,
            recurrence,
            seq_entropy_mean,
            seq_entropy_std,
        });
    }

    Ok(CorpusAnalysis {
        identity: CorpusIdentity::of(corpus),
        scales,
        fingerprint,
    })
}

/// Pool one pattern length across a corpus; returns the pooled profile and the
/// per-sequence entropies in sequence order.
fn pooled_scale(corpus: &Corpus, m: PatternLength) -> (PatternProfile, Vec<f64>) {
    let w_seq = corpus.length_bits() - m.get() as u64 + 1;
    let total = corpus.count() as u64 * w_seq;
    let seqs = corpus.sequences();

    if m.get() <= DENSE_LIMIT {
        let chunks: Vec<(Vec<f64>, Vec<u64>)> = seqs
            .par_chunks(POOL_CHUNK)
            .map(|chunk| {
                let mut dense = vec![0u64; 1usize << m.get()];
                let mut entropies = Vec::with_capacity(chunk.len());
                let mut scratch: Vec<u64> = Vec::with_capacity(w_seq as usize);
                let mut runs: Vec<(u64, u64)> = Vec::new();
                for seq in chunk {
                    sequence_runs(seq, m, &mut scratch, &mut runs);
                    entropies.push(entropy_of_counts(runs.iter().map(|&(_, c)| c), w_seq));
                    for &(v, c) in &runs {
                        dense[v as usize] += c;
                    }
                }
                (entropies, dense)
            })
            .collect();

        let mut entropies = Vec::with_capacity(seqs.len());
        let mut pooled = vec![0u64; 1usize << m.get()];
        for (chunk_entropies, chunk_dense) in chunks {
            entropies.extend(chunk_entropies);
            for (slot, add) in pooled.iter_mut().zip(chunk_dense) {
                *slot += add;
            }
        }
        (PatternProfile::from_dense(m, pooled, total), entropies)
    } else {
        let chunks: Vec<(Vec<f64>, Vec<(u64, u64)>)> = seqs
            .par_chunks(POOL_CHUNK)
            .map(|chunk| {
                let mut pairs: Vec<(u64, u64)> = Vec::new();
                let mut entropies = Vec::with_capacity(chunk.len());
                let mut scratch: Vec<u64> = Vec::with_capacity(w_seq as usize);
                let mut runs: Vec<(u64, u64)> = Vec::new();
                for seq in chunk {
                    sequence_runs(seq, m, &mut scratch, &mut runs);
                    entropies.push(entropy_of_counts(runs.iter().map(|&(_, c)| c), w_seq));
                    pairs.extend_from_slice(&runs);
                }
                (entropies, pairs)
            })
            .collect();

        let mut entropies = Vec::with_capacity(seqs.len());
        let pair_total: usize = chunks.iter().map(|(_, p)| p.len()).sum();
        let mut pairs: Vec<(u64, u64)> = Vec::with_capacity(pair_total);
        for (chunk_entropies, chunk_pairs) in chunks {
            entropies.extend(chunk_entropies);
            pairs.extend(chunk_pairs);
        }
        pairs.sort_unstable_by_key(|&(v, _)| v);
        aggregate_sorted_pairs(&mut pairs);
        (PatternProfile::from_sorted_pairs(m, pairs, total), entropies)
    }
}

/// Collect one sequence's sorted `(value, count)` runs into `runs`, reusing scratch space.
fn sequence_runs(
    seq: &crate::seqgen::BitSequence,
    m: PatternLength,
    scratch: &mut Vec<u64>,
    runs: &mut Vec<(u64, u64)>,
) {
    scratch.clear();
    for_each_window(seq, m, |v| scratch.push(v));
    scratch.sort_unstable();
    runs.clear();
    for &v in scratch.iter() {
        match runs.last_mut() {
            Some(last) if last.0 == v => last.1 += 1,
            _ => runs.push((v, 1)),
        }
    }
}

fn mean_and_population_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// L1 deviation between two pooled profiles' normalized distributions.
///
/// Identical arithmetic to `deviation_score(normalize(a), normalize(b))` without
/// materializing the distributions.
pub fn profile_deviation(a: &PatternProfile, b: &PatternProfile) -> Result<f64> {
    if a.m() != b.m() {
        return Err(Error::IncompatibleProfile(format!(
            "cannot compare profiles with different pattern lengths {} and {}",
            a.m(),
            b.m()
        )));
    }
    let wa = a.total_windows() as f64;
    let wb = b.total_windows() as f64;
    Ok(l1_merge_walk(
        a.iter().map(|(v, c)| (v, c as f64 / wa)),
        b.iter().map(|(v, c)| (v, c as f64 / wb)),
    ))
}

/// Permutation null: moments of the deviation between pooled halves of a shuffled
/// reference corpus.
///
/// Each shuffle seeds its own splitmix64 stream from `seed` and the shuffle index, so the
/// result is independent of evaluation order. For odd-count corpora the halves use the
/// first `2·⌊count/2⌋` sequences of each shuffled order.
pub fn null_baseline(
    reference: &Corpus,
    m: PatternLength,
    shuffle_count: u32,
    seed: Seed,
) -> Result<NullBaseline> {
    if reference.count() < 4 {
        return Err(Error::InvalidArgument(format!(
            "reference corpus too small to bipartition: need at least 4 sequences, have {}",
            reference.count()
        )));
    }
    if shuffle_count < 2 {
        return Err(Error::InvalidArgument(format!(
            "shuffle_count must be at least 2, got {shuffle_count}"
        )));
    }
    let w_seq = window_count(reference.length_bits(), m)?;

    // Per-sequence runs, extracted once and shared across shuffles.
    let per_seq: Vec<Vec<(u64, u64)>> = reference
        .sequences()
        .par_iter()
        .map(|seq| {
            let mut scratch = Vec::with_capacity(w_seq as usize);
            let mut runs = Vec::new();
            sequence_runs(seq, m, &mut scratch, &mut runs);
            runs
        })
        .collect();

    let half = per_seq.len() / 2;
    let w_half = half as u64 * w_seq;

    let deviations: Vec<f64> = (0..shuffle_count)
        .into_par_iter()
        .map(|s| {
            let mut rng = MixStream::new(
                seed.value
                    .wrapping_add((s as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
            );
            let mut order: Vec<u32> = (0..per_seq.len() as u32).collect();
            // Fisher–Yates, back to front.
            for i in (1..order.len()).rev() {
                let j = rng.next_below(i as u64 + 1) as usize;
                order.swap(i, j);
            }
            half_pool_deviation(&per_seq, &order[..half], &order[half..2 * half], m, w_half)
        })
        .collect();

    let (d_mean, d_std) = mean_and_population_std(&deviations);
    Ok(NullBaseline {
        m,
        shuffle_count,
        d_mean,
        d_std,
        seed,
    })
}

/// Deviation between the pooled distributions of two index sets of per-sequence runs.
fn half_pool_deviation(
    per_seq: &[Vec<(u64, u64)>],
    ia: &[u32],
    ib: &[u32],
    m: PatternLength,
    w_half: u64,
) -> f64 {
    let w = w_half as f64;
    if m.get() <= DENSE_LIMIT {
        let size = 1usize << m.get();
        let mut a = vec![0u64; size];
        let mut b = vec![0u64; size];
        for &i in ia {
            for &(v, c) in &per_seq[i as usize] {
                a[v as usize] += c;
            }
        }
        for &i in ib {
            for &(v, c) in &per_seq[i as usize] {
                b[v as usize] += c;
            }
        }
        let mut sum = 0.0f64;
        for (&ca, &cb) in a.iter().zip(b.iter()) {
            if ca != 0 || cb != 0 {
                sum += (ca as f64 / w - cb as f64 / w).abs();
            }
        }
        sum
    } else {
        let pool = |idx: &[u32]| {
            let len: usize = idx.iter().map(|&i| per_seq[i as usize].len()).sum();
            let mut pairs = Vec::with_capacity(len);
            for &i in idx {
                pairs.extend_from_slice(&per_seq[i as usize]);
            }
            pairs.sort_unstable_by_key(|&(v, _)| v);
            aggregate_sorted_pairs(&mut pairs);
            pairs
        };
        let a = pool(ia);
        let b = pool(ib);
        l1_merge_walk(
            a.iter().map(|&(v, c)| (v, c as f64 / w)),
            b.iter().map(|&(v, c)| (v, c as f64 / w)),
        )
    }
}

/// Compare two corpus analyses, optionally judging deviations against per-m null
/// baselines.
///
/// `nulls` may cover any subset of the shared m_set (at most one baseline per pattern
/// length); rows without a baseline carry no z-score.
pub fn compare(
    a: &CorpusAnalysis,
    b: &CorpusAnalysis,
    nulls: &[NullBaseline],
) -> Result<ComparisonReport> {
    if a.m_set() != b.m_set() {
        return Err(Error::IncompatibleAnalysis(format!(
            "pattern length sets differ: {:?} vs {:?}",
            a.m_set().iter().map(|m| m.get()).collect::<Vec<_>>(),
            b.m_set().iter().map(|m| m.get()).collect::<Vec<_>>()
        )));
    }
    if a.identity.length_bits != b.identity.length_bits {
        return Err(Error::IncompatibleAnalysis(format!(
            "sequence lengths differ: {} vs {}",
            a.identity.length_bits, b.identity.length_bits
        )));
    }
    for (i, null) in nulls.iter().enumerate() {
        if !a.m_set().contains(&null.m) {
            return Err(Error::InvalidArgument(format!(
                "null baseline for m = {} does not match any analyzed pattern length",
                null.m
            )));
        }
        if nulls[..i].iter().any(|other| other.m == null.m) {
            return Err(Error::InvalidArgument(format!(
                "duplicate null baseline for m = {}",
                null.m
            )));
        }
    }

    let mut rows = Vec::with_capacity(a.scales.len());
    for (sa, sb) in a.scales.iter().zip(b.scales.iter()) {
        let deviation = profile_deviation(&sa.profile, &sb.profile)?;
        let null = nulls.iter().find(|n| n.m == sa.m).copied();
        let z = null.map(|n| {
            if n.d_std > 0.0 {
                ZScore::Finite((deviation - n.d_mean) / n.d_std)
            } else if deviation > 0.0 {
                ZScore::PlusInfinity
            } else {
                ZScore::Finite(0.0)
            }
        });
        rows.push(ScaleComparison {
            m: sa.m,
            deviation,
            z,
            null,
            entropy: EntropyComparison {
                pooled_a: sa.metrics.entropy_bits,
                pooled_b: sb.metrics.entropy_bits,
                per_seq_mean_a: sa.seq_entropy_mean,
                per_seq_std_a: sa.seq_entropy_std,
                per_seq_mean_b: sb.seq_entropy_mean,
                per_seq_std_b: sb.seq_entropy_std,
            },
            concentration_a: sa.metrics,
            concentration_b: sb.metrics,
            recurrence_a: sa.recurrence.bins,
            recurrence_b: sb.recurrence.bins,
        });
    }

    Ok(ComparisonReport {
        schema_version: 1,
        a: a.identity,
        b: b.identity,
        scales: rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::{extract_profile, merge_profiles, normalize};
    use crate::metrics::deviation_score;
    use crate::seqgen::{generate_corpus, BitSequence};
    use approx::assert_relative_eq;

    fn m(v: u32) -> PatternLength {
        PatternLength::new(v).unwrap()
    }

    fn uniform(seed: u64, count: u32, n: u64) -> Corpus {
        generate_corpus(GeneratorSpec::UniformRef, Seed::new(seed), count, n).unwrap()
    }

    #[test]
    fn pooled_profile_equals_merge_of_per_sequence_profiles() {
        let corpus = generate_corpus(GeneratorSpec::Lcg { bits_per_step: 3 }, Seed::new(5), 20, 256).unwrap();
        for mv in [3u32, 8, 17] {
            let analysis = analyze_corpus(&corpus, &[m(mv)]).unwrap();
            let per_seq: Vec<_> = corpus
                .sequences()
                .iter()
                .map(|s| extract_profile(s, m(mv)).unwrap())
                .collect();
            let merged = merge_profiles(&per_seq).unwrap();
            assert_eq!(analysis.scales[0].profile, merged, "m = {mv}");
        }
    }

    #[test]
    fn singleton_corpus_analysis_matches_sequence_profile() {
        let corpus = uniform(3, 1, 512);
        let analysis = analyze_corpus(&corpus, &[m(8)]).unwrap();
        let expected = extract_profile(&corpus.sequences()[0], m(8)).unwrap();
        assert_eq!(analysis.scales[0].profile, expected);
        // With one sequence the per-sequence mean is that sequence's entropy and the
        // spread is zero.
        assert_relative_eq!(
            analysis.scales[0].seq_entropy_mean,
            analysis.scales[0].metrics.entropy_bits,
            epsilon = 1e-12
        );
        assert_eq!(analysis.scales[0].seq_entropy_std, 0.0);
    }

    #[test]
    fn pooled_window_total_follows_window_arithmetic() {
        let corpus = uniform(9, 100, 512);
        let analysis = analyze_corpus(&corpus, &[m(8)]).unwrap();
        assert_eq!(analysis.scales[0].profile.total_windows(), 100 * 505);
    }

    #[test]
    fn copies_of_one_sequence_pool_to_its_distribution() {
        // Corpus whose sequences are all identical: pooled distribution equals the
        // single-sequence distribution.
        let seq = crate::seqgen::generate_sequence(GeneratorSpec::UniformRef, Seed::new(1), 0, 300).unwrap();
        let corpus = Corpus::new(
            GeneratorSpec::UniformRef,
            Seed::new(1),
            300,
            vec![seq.clone(); 7],
        )
        .unwrap();
        let analysis = analyze_corpus(&corpus, &[m(6)]).unwrap();
        let single = normalize(&extract_profile(&seq, m(6)).unwrap()).unwrap();
        let pooled = normalize(&analysis.scales[0].profile).unwrap();
        assert_relative_eq!(deviation_score(&single, &pooled).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn analyze_rejects_bad_m_sets() {
        let corpus = uniform(2, 2, 64);
        assert!(matches!(analyze_corpus(&corpus, &[]), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            analyze_corpus(&corpus, &[m(4), m(4)]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(analyze_corpus(&corpus, &[m(4), m(64)]).is_ok());
        let tiny = uniform(2, 2, 16);
        assert!(matches!(
            analyze_corpus(&tiny, &[m(17)]),
            Err(Error::EmptyWindow { m: 17, n: 16 })
        ));
    }

    #[test]
    fn profile_deviation_matches_normalized_deviation_score() {
        let ca = uniform(1, 5, 256);
        let cb = generate_corpus(GeneratorSpec::Lcg { bits_per_step: 2 }, Seed::new(2), 5, 256).unwrap();
        for mv in [4u32, 12, 18] {
            let pa = analyze_corpus(&ca, &[m(mv)]).unwrap().scales.remove(0).profile;
            let pb = analyze_corpus(&cb, &[m(mv)]).unwrap().scales.remove(0).profile;
            let direct = profile_deviation(&pa, &pb).unwrap();
            let via_dist = deviation_score(&normalize(&pa).unwrap(), &normalize(&pb).unwrap()).unwrap();
            assert_eq!(direct, via_dist, "m = {mv}");
        }
    }

    #[test]
    fn null_baseline_is_deterministic() {
        let corpus = uniform(7, 16, 256);
        let a = null_baseline(&corpus, m(6), 10, Seed::new(3)).unwrap();
        let b = null_baseline(&corpus, m(6), 10, Seed::new(3)).unwrap();
        assert_eq!(a, b);
        let c = null_baseline(&corpus, m(6), 10, Seed::new(4)).unwrap();
        // A different shuffle seed virtually always moves the moments.
        assert_ne!(a, c);
    }

    #[test]
    fn null_baseline_of_identical_sequences_is_degenerate_zero() {
        let seq = crate::seqgen::generate_sequence(GeneratorSpec::UniformRef, Seed::new(8), 0, 200).unwrap();
        let corpus = Corpus::new(GeneratorSpec::UniformRef, Seed::new(8), 200, vec![seq; 10]).unwrap();
        let null = null_baseline(&corpus, m(5), 12, Seed::new(1)).unwrap();
        assert_eq!(null.d_mean, 0.0);
        assert_eq!(null.d_std, 0.0);
    }

    #[test]
    fn null_baseline_rejects_tiny_corpora_and_shuffle_counts() {
        let corpus = uniform(7, 3, 64);
        assert!(matches!(
            null_baseline(&corpus, m(4), 10, Seed::new(0)),
            Err(Error::InvalidArgument(_))
        ));
        let corpus = uniform(7, 8, 64);
        assert!(matches!(
            null_baseline(&corpus, m(4), 1, Seed::new(0)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn self_comparison_is_null_at_every_scale() {
        let corpus = uniform(11, 10, 512);
        let analysis = analyze_corpus(&corpus, &[m(4), m(8), m(20)]).unwrap();
        let null = null_baseline(&corpus, m(8), 10, Seed::new(5)).unwrap();
        let report = compare(&analysis, &analysis, &[null]).unwrap();
        for row in &report.scales {
            assert_eq!(row.deviation, 0.0, "m = {}", row.m);
        }
        // Against a real (positive-spread) null, a zero deviation sits at or below the mean.
        match report.scales[1].z.unwrap() {
            ZScore::Finite(z) => assert!(z <= 0.0),
            ZScore::PlusInfinity => panic!("self-comparison cannot be infinitely significant"),
        }
    }

    #[test]
    fn degenerate_null_maps_to_explicit_markers() {
        let seq = crate::seqgen::generate_sequence(GeneratorSpec::UniformRef, Seed::new(8), 0, 128).unwrap();
        let same = Corpus::new(GeneratorSpec::UniformRef, Seed::new(8), 128, vec![seq; 8]).unwrap();
        let null = null_baseline(&same, m(4), 5, Seed::new(2)).unwrap();
        assert_eq!(null.d_std, 0.0);

        let analysis_same = analyze_corpus(&same, &[m(4)]).unwrap();
        let report = compare(&analysis_same, &analysis_same, &[null]).unwrap();
        // D = 0 over a zero-spread null: z = 0.
        assert_eq!(report.scales[0].z.unwrap(), ZScore::Finite(0.0));

        let other = uniform(99, 8, 128);
        let analysis_other = analyze_corpus(&other, &[m(4)]).unwrap();
        let report = compare(&analysis_same, &analysis_other, &[null]).unwrap();
        // D > 0 over a zero-spread null: the +inf marker.
        assert_eq!(report.scales[0].z.unwrap(), ZScore::PlusInfinity);
    }

    #[test]
    fn compare_rejects_shape_mismatches() {
        let a = analyze_corpus(&uniform(1, 4, 128), &[m(4)]).unwrap();
        let b = analyze_corpus(&uniform(2, 4, 128), &[m(5)]).unwrap();
        assert!(matches!(compare(&a, &b, &[]), Err(Error::IncompatibleAnalysis(_))));

        let c = analyze_corpus(&uniform(3, 4, 256), &[m(4)]).unwrap();
        assert!(matches!(compare(&a, &c, &[]), Err(Error::IncompatibleAnalysis(_))));
    }

    #[test]
    fn compare_rejects_misplaced_or_duplicate_nulls() {
        let a = analyze_corpus(&uniform(1, 8, 128), &[m(4)]).unwrap();
        let b = analyze_corpus(&uniform(2, 8, 128), &[m(4)]).unwrap();
        let ref_corpus = uniform(3, 8, 128);
        let null4 = null_baseline(&ref_corpus, m(4), 5, Seed::new(0)).unwrap();
        let null5 = null_baseline(&ref_corpus, m(5), 5, Seed::new(0)).unwrap();
        assert!(matches!(
            compare(&a, &b, &[null5]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            compare(&a, &b, &[null4, null4]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(compare(&a, &b, &[null4]).is_ok());
    }

    #[test]
    fn cross_uniform_deviation_sits_inside_the_null_band() {
        // Two independent reference corpora against a matched-size null: the observed
        // deviation should land within a few null standard deviations.
        let a = analyze_corpus(&uniform(100, 40, 512), &[m(8)]).unwrap();
        let b = analyze_corpus(&uniform(200, 40, 512), &[m(8)]).unwrap();
        let reference = uniform(300, 80, 512);
        let null = null_baseline(&reference, m(8), 60, Seed::new(17)).unwrap();
        let report = compare(&a, &b, &[null]).unwrap();
        match report.scales[0].z.unwrap() {
            ZScore::Finite(z) => assert!(z.abs() < 6.0, "z = {z} suspiciously large"),
            ZScore::PlusInfinity => panic!("null spread vanished"),
        }
    }

    #[test]
    fn analysis_is_identical_across_thread_counts() {
        let corpus = generate_corpus(GeneratorSpec::ArxKeystream { rounds: 4 }, Seed::new(6), 600, 512).unwrap();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| analyze_corpus(&corpus, &[m(8), m(18)]).unwrap())
        };
        let one = run(1);
        let eight = run(8);
        assert_eq!(one, eight);
        let n1 = {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
            pool.install(|| null_baseline(&corpus, m(8), 16, Seed::new(9)).unwrap())
        };
        let n8 = {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap();
            pool.install(|| null_baseline(&corpus, m(8), 16, Seed::new(9)).unwrap())
        };
        assert_eq!(n1, n8);
    }

    #[test]
    fn odd_count_corpora_use_floor_halves() {
        let corpus = uniform(13, 9, 128);
        let null = null_baseline(&corpus, m(4), 6, Seed::new(2)).unwrap();
        assert!(null.d_mean >= 0.0);

        let seq = BitSequence::from_bit_str(&"01".repeat(64)).unwrap();
        let same = Corpus::new(GeneratorSpec::UniformRef, Seed::new(0), 128, vec![seq; 9]).unwrap();
        let null = null_baseline(&same, m(4), 6, Seed::new(2)).unwrap();
        assert_eq!((null.d_mean, null.d_std), (0.0, 0.0));
    }
}
