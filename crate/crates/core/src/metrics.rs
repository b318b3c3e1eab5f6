//! Structural metrics over pattern profiles and distributions.
//!
//! Four views of how pattern mass is arranged at one pattern length:
//!
//! - [`deviation_score`] — the L1 distance between two normalized pattern distributions,
//!   summed over the union of their supports; range [0, 2].
//! - [`pattern_entropy`] — the plug-in entropy `−Σ p·log₂ p` of the empirical window
//!   distribution, in bits. No bias correction: the estimator is used as written, and is
//!   therefore capped by both m and log₂(window count).
//! - [`recurrence_histogram`] — how often patterns recur: for each distinct pattern,
//!   recurrence = occurrences − 1, binned as {0, 1, 2, 3, 4+} and normalized over
//!   distinct patterns.
//! - [`concentration_stats`] — scalar concentration summary ([`StructuralMetrics`]):
//!   entropy with its cap, the largest single-pattern probability, and how much window
//!   mass sits on repeated patterns.

use crate::error::{Error, Result};
use crate::extract::{Distribution, PatternLength, PatternProfile};
use serde::{Deserialize, Serialize};

/// Scalar structural summary of one profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructuralMetrics {
    pub m: PatternLength,
    /// Plug-in pattern entropy in bits.
    pub entropy_bits: f64,
    /// Upper bound on the plug-in entropy: min(m, log₂(total_windows)).
    pub entropy_max_bits: f64,
    /// Probability of the most frequent pattern.
    pub max_prob: f64,
    /// Distinct patterns / total windows.
    pub distinct_fraction: f64,
    /// Fraction of windows whose pattern occurs at least twice.
    pub repeated_window_fraction: f64,
    /// Mean over distinct patterns of (occurrences − 1).
    pub mean_recurrence: f64,
}

/// Normalized recurrence histogram with bins {0, 1, 2, 3, 4+}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceHistogram {
    pub m: PatternLength,
    /// Bin frequencies over distinct patterns; index r holds recurrence r, index 4
    /// pools every recurrence ≥ 4. Sums to 1.
    pub bins: [f64; 5],
}

/// L1 deviation between two distributions over the union of their supports.
///
/// Patterns absent from one side contribute the other side's full probability, so the
/// score is the L1 distance between the distributions as measures: symmetric, zero
/// exactly on equal distributions, bounded by 2 (attained on disjoint supports).
pub fn deviation_score(a: &Distribution, b: &Distribution) -> Result<f64> {
    if a.m() != b.m() {
        return Err(Error::IncompatibleProfile(format!(
            "cannot compare distributions with different pattern lengths {} and {}",
            a.m(),
            b.m()
        )));
    }
    Ok(l1_merge_walk(
        a.entries().iter().copied(),
        b.entries().iter().copied(),
    ))
}

/// L1 distance between two ascending `(value, weight)` streams.
pub(crate) fn l1_merge_walk<I, J>(a: I, b: J) -> f64
where
    I: Iterator<Item = (u64, f64)>,
    J: Iterator<Item = (u64, f64)>,
{
    let mut a = a.peekable();
    let mut b = b.peekable();
    let mut sum = 0.0f64;
    loop {
        match (a.peek().copied(), b.peek().copied()) {
            (Some((va, pa)), Some((vb, pb))) => {
                if va == vb {
                    sum += (pa - pb).abs();
                    a.next();
                    b.next();
                } else if va < vb {
                    sum += pa;
                    a.next();
                } else {
                    sum += pb;
                    b.next();
                }
            }
            (Some((_, pa)), None) => {
                sum += pa;
                a.next();
            }
            (None, Some((_, pb))) => {
                sum += pb;
                b.next();
            }
            (None, None) => return sum,
        }
    }
}

/// Plug-in pattern entropy of a distribution, in bits.
pub fn pattern_entropy(p: &Distribution) -> f64 {
    entropy_of_probs(p.entries().iter().map(|&(_, prob)| prob))
}

/// `−Σ p·log₂ p` over strictly positive probabilities, accumulated in stream order.
pub(crate) fn entropy_of_probs<I: Iterator<Item = f64>>(probs: I) -> f64 {
    let mut h = 0.0f64;
    for p in probs {
        debug_assert!(p > 0.0);
        h -= p * p.log2();
    }
    h
}

/// Entropy straight from integer counts (probability = count / total), accumulated in
/// the iterator's order. Matches [`pattern_entropy`] bit-for-bit on the same data.
pub(crate) fn entropy_of_counts<I: Iterator<Item = u64>>(counts: I, total_windows: u64) -> f64 {
    let total = total_windows as f64;
    entropy_of_probs(counts.map(|c| c as f64 / total))
}

/// Recurrence histogram of a profile; errors on zero windows.
pub fn recurrence_histogram(profile: &PatternProfile) -> Result<RecurrenceHistogram> {
    if profile.total_windows() == 0 {
        return Err(Error::EmptyWindow {
            m: profile.m().get(),
            n: 0,
        });
    }
    let mut tallies = [0u64; 5];
    for (_, c) in profile.iter() {
        let recurrence = (c - 1).min(4) as usize;
        tallies[recurrence] += 1;
    }
    let distinct = profile.distinct_count() as f64;
    let mut bins = [0.0f64; 5];
    for (bin, &t) in bins.iter_mut().zip(tallies.iter()) {
        *bin = t as f64 / distinct;
    }
    Ok(RecurrenceHistogram { m: profile.m(), bins })
}

/// Fill a [`StructuralMetrics`] from a profile.
pub fn concentration_stats(profile: &PatternProfile) -> Result<StructuralMetrics> {
    let windows = profile.total_windows();
    if windows == 0 {
        return Err(Error::EmptyWindow {
            m: profile.m().get(),
            n: 0,
        });
    }
    let total = windows as f64;
    let distinct = profile.distinct_count();
    let mut max_count = 0u64;
    let mut repeated_windows = 0u64;
    for (_, c) in profile.iter() {
        max_count = max_count.max(c);
        if c >= 2 {
            repeated_windows += c;
        }
    }
    Ok(StructuralMetrics {
        m: profile.m(),
        entropy_bits: entropy_of_counts(profile.iter().map(|(_, c)| c), windows),
        entropy_max_bits: (profile.m().get() as f64).min(total.log2()),
        max_prob: max_count as f64 / total,
        distinct_fraction: distinct as f64 / total,
        repeated_window_fraction: repeated_windows as f64 / total,
        mean_recurrence: (windows - distinct) as f64 / distinct as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::{extract_profile, merge_profiles, normalize};
    use crate::seqgen::BitSequence;
    use approx::assert_relative_eq;

    fn seq(s: &str) -> BitSequence {
        BitSequence::from_bit_str(s).unwrap()
    }

    fn m(v: u32) -> PatternLength {
        PatternLength::new(v).unwrap()
    }

    fn dist_of(s: &str, mlen: u32) -> Distribution {
        normalize(&extract_profile(&seq(s), m(mlen)).unwrap()).unwrap()
    }

    /// An order-3 de Bruijn cycle linearized by appending its first two bits: all eight
    /// 3-bit patterns appear exactly once among its 8 windows.
    const DE_BRUIJN_3: &str = "0001011100";

    #[test]
    fn deviation_is_zero_on_identical_distributions() {
        let d = dist_of("011010010110", 3);
        assert_eq!(deviation_score(&d, &d).unwrap(), 0.0);
    }

    #[test]
    fn deviation_is_two_on_disjoint_supports() {
        let a = dist_of("0000", 2); // support {00}
        let b = dist_of("1111", 2); // support {11}
        assert_eq!(deviation_score(&a, &b).unwrap(), 2.0);
    }

    #[test]
    fn deviation_hand_computed_case() {
        // a = {00: 1/2, 01: 1/2}, b = {00: 1/4, 01: 1/4, 10: 1/2}
        // D = |1/2−1/4| + |1/2−1/4| + 1/2 = 1.0
        let a = Distribution::from_entries(m(2), vec![(0b00, 0.5), (0b01, 0.5)]);
        let b = Distribution::from_entries(m(2), vec![(0b00, 0.25), (0b01, 0.25), (0b10, 0.5)]);
        assert_relative_eq!(deviation_score(&a, &b).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(deviation_score(&b, &a).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn deviation_rejects_mismatched_lengths() {
        let a = dist_of("0101", 2);
        let b = dist_of("0101", 3);
        assert!(matches!(
            deviation_score(&a, &b),
            Err(Error::IncompatibleProfile(_))
        ));
    }

    #[test]
    fn entropy_of_constant_sequence_is_zero() {
        let d = dist_of("00000000", 3);
        assert_eq!(pattern_entropy(&d), 0.0);
    }

    #[test]
    fn entropy_of_de_bruijn_sequence_is_m() {
        let d = dist_of(DE_BRUIJN_3, 3);
        assert_relative_eq!(pattern_entropy(&d), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn entropy_hand_computed_case() {
        // p = {01: 2/3, 10: 1/3} → H = log₂3 − 2/3 ≈ 0.9182958340544896
        let d = dist_of("0101", 2);
        assert_relative_eq!(pattern_entropy(&d), 0.918_295_834_054_489_6, epsilon = 1e-12);
    }

    #[test]
    fn recurrence_of_de_bruijn_is_all_in_bin_zero() {
        let p = extract_profile(&seq(DE_BRUIJN_3), m(3)).unwrap();
        let h = recurrence_histogram(&p).unwrap();
        assert_eq!(h.bins, [1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn recurrence_of_constant_sequence_pools_into_four_plus() {
        let p = extract_profile(&seq("0000000000"), m(3)).unwrap();
        let h = recurrence_histogram(&p).unwrap();
        assert_eq!(h.bins, [0.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn recurrence_unpooled_bins_match_counts() {
        // "01010": {01: 2, 10: 2} → both patterns recur once → bin 1 = 1.0
        let p = extract_profile(&seq("01010"), m(2)).unwrap();
        let h = recurrence_histogram(&p).unwrap();
        assert_eq!(h.bins, [0.0, 1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn concentration_of_constant_sequence() {
        let p = extract_profile(&BitSequence::from_bits(&vec![false; 16]).unwrap(), m(8)).unwrap();
        let s = concentration_stats(&p).unwrap();
        assert_eq!(s.max_prob, 1.0);
        assert_relative_eq!(s.distinct_fraction, 1.0 / 9.0, epsilon = 1e-15);
        assert_eq!(s.repeated_window_fraction, 1.0);
        assert_eq!(s.mean_recurrence, 8.0);
        assert_eq!(s.entropy_bits, 0.0);
        assert_relative_eq!(s.entropy_max_bits, 9.0f64.log2(), epsilon = 1e-15);
    }

    #[test]
    fn concentration_of_de_bruijn_sequence() {
        let p = extract_profile(&seq(DE_BRUIJN_3), m(3)).unwrap();
        let s = concentration_stats(&p).unwrap();
        assert_eq!(s.max_prob, 0.125);
        assert_eq!(s.repeated_window_fraction, 0.0);
        assert_eq!(s.mean_recurrence, 0.0);
        assert_eq!(s.distinct_fraction, 1.0);
        assert_eq!(s.entropy_max_bits, 3.0);
    }

    #[test]
    fn entropy_max_uses_window_count_when_binding() {
        // n = 4096, m = 16: the window count (4081) binds, not m.
        let seq = crate::seqgen::generate_sequence(
            crate::seqgen::GeneratorSpec::UniformRef,
            crate::seqgen::Seed::new(1),
            0,
            4096,
        )
        .unwrap();
        let p = extract_profile(&seq, m(16)).unwrap();
        let s = concentration_stats(&p).unwrap();
        assert_relative_eq!(s.entropy_max_bits, 4081.0f64.log2(), epsilon = 1e-12);
        assert!(s.entropy_max_bits < 12.0);
        assert!(s.entropy_bits <= s.entropy_max_bits + 1e-9);
    }

    #[test]
    fn metrics_are_scale_invariant_under_self_merge() {
        let p = extract_profile(&seq("01101001011010011100"), m(3)).unwrap();
        let doubled = merge_profiles(&[p.clone(), p.clone()]).unwrap();
        let s1 = concentration_stats(&p).unwrap();
        let s2 = concentration_stats(&doubled).unwrap();
        // Ratios depend only on the normalized distribution; entropy too. The cap moves
        // (more windows) and mean_recurrence is count-based, so compare the rest.
        assert_relative_eq!(s1.entropy_bits, s2.entropy_bits, epsilon = 1e-12);
        assert_relative_eq!(s1.max_prob, s2.max_prob, epsilon = 1e-15);
        let d1 = normalize(&p).unwrap();
        let d2 = normalize(&doubled).unwrap();
        assert_relative_eq!(deviation_score(&d1, &d2).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn mean_recurrence_matches_histogram_on_unpooled_input() {
        // All recurrences ≤ 3, so the histogram loses nothing to the 4+ bin and
        // mean_recurrence must equal Σ r · bins[r].
        let p = extract_profile(&seq("010101110010"), m(2)).unwrap();
        let s = concentration_stats(&p).unwrap();
        let h = recurrence_histogram(&p).unwrap();
        assert_eq!(h.bins[4], 0.0);
        let from_bins: f64 = h.bins.iter().enumerate().map(|(r, &f)| r as f64 * f).sum();
        assert_relative_eq!(s.mean_recurrence, from_bins, epsilon = 1e-12);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn prop_deviation_axioms(
                seq_a in proptest::collection::vec(any::<bool>(), 8..128),
                seq_b in proptest::collection::vec(any::<bool>(), 8..128),
                seq_c in proptest::collection::vec(any::<bool>(), 8..128),
            ) {
                let mk = |bits: &[bool]| {
                    normalize(&extract_profile(&BitSequence::from_bits(bits).unwrap(), m(4)).unwrap()).unwrap()
                };
                let (a, b, c) = (mk(&seq_a), mk(&seq_b), mk(&seq_c));
                let dab = deviation_score(&a, &b).unwrap();
                let dba = deviation_score(&b, &a).unwrap();
                let dac = deviation_score(&a, &c).unwrap();
                let dcb = deviation_score(&c, &b).unwrap();
                prop_assert!(dab >= 0.0 && dab <= 2.0 + 1e-12);
                prop_assert_eq!(dab, dba);
                prop_assert_eq!(deviation_score(&a, &a).unwrap(), 0.0);
                prop_assert!(dab <= dac + dcb + 1e-9);
            }

            #[test]
            fn prop_entropy_bounds(
                bits in proptest::collection::vec(any::<bool>(), 4..256),
                mlen in 1u32..=10,
            ) {
                prop_assume!(mlen as usize <= bits.len());
                let p = extract_profile(&BitSequence::from_bits(&bits).unwrap(), m(mlen)).unwrap();
                let h = pattern_entropy(&normalize(&p).unwrap());
                let cap = (mlen as f64).min((p.total_windows() as f64).log2());
                prop_assert!(h >= -1e-12);
                prop_assert!(h <= cap + 1e-9);
            }

            #[test]
            fn prop_recurrence_bins_sum_to_one(
                bits in proptest::collection::vec(any::<bool>(), 4..256),
                mlen in 1u32..=8,
            ) {
                prop_assume!(mlen as usize <= bits.len());
                let p = extract_profile(&BitSequence::from_bits(&bits).unwrap(), m(mlen)).unwrap();
                let h = recurrence_histogram(&p).unwrap();
                let sum: f64 = h.bins.iter().sum();
                prop_assert!((sum - 1.0).abs() < 1e-12);
            }

            #[test]
            fn prop_mean_recurrence_identity(
                bits in proptest::collection::vec(any::<bool>(), 4..256),
                mlen in 1u32..=8,
            ) {
                prop_assume!(mlen as usize <= bits.len());
                let p = extract_profile(&BitSequence::from_bits(&bits).unwrap(), m(mlen)).unwrap();
                let s = concentration_stats(&p).unwrap();
                let expected = (p.total_windows() - p.distinct_count()) as f64 / p.distinct_count() as f64;
                prop_assert_eq!(s.mean_recurrence, expected);
            }
        }
    }
}
