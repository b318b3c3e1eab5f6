//! Deterministic, seed-reproducible generation of bit sequences and corpora.
//!
//! Four generator families produce the raw material for structural analysis:
//!
//! - [`GeneratorSpec::ArxKeystream`] — an ARX block keystream with a configurable (even)
//!   round count; reduced rounds leave measurable structure, 20 rounds is the full-strength
//!   construction (see [`arx`]).
//! - [`GeneratorSpec::UniformRef`] — the reference-random source: an alias for the ARX
//!   keystream at 20 rounds, kept as a distinct label so corpora carry their role.
//! - [`GeneratorSpec::Lcg`] — a classic linear congruential generator emitting a
//!   configurable number of low state bits per step: a deliberately weak control source.
//! - [`GeneratorSpec::BiasedBits`] — independent bits with a configurable probability of
//!   one: the bluntest possible control source.
//!
//! Everything is a pure function of `(spec, master_seed, index, length_bits)`. Per-sequence
//! keys, nonces, and initial states are derived from the master seed and the sequence index
//! through [`crate::mix::mix64`], so a corpus of any size is reproducible from one `u64`.
//!
//! Bit order is MSB-first within each octet, everywhere: bit `i` of a sequence is bit
//! `7 - (i % 8)` of octet `i / 8`. Window extraction depends on this bit-exactly.

pub mod arx;
mod file;

pub use arx::arx_block;
pub use file::{read_corpus, read_corpus_file, write_corpus, write_corpus_file};

use crate::error::{Error, Result};
use crate::mix::mix64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Master seed for corpus generation; all per-sequence randomness derives from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed {
    pub value: u64,
}

impl Seed {
    pub fn new(value: u64) -> Self {
        Seed { value }
    }
}

/// Fixed LCG constants (the classic `2^31` modulus family).
pub const LCG_MODULUS: u64 = 1 << 31;
pub const LCG_MULTIPLIER: u64 = 1_103_515_245;
pub const LCG_INCREMENT: u64 = 12_345;

/// Which generator produces a corpus, with its tunable parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    /// ARX keystream with an even round count in [2, 20].
    ArxKeystream { rounds: u16 },
    /// Linear congruential generator emitting `bits_per_step` low bits (MSB-first) of
    /// each successive state; `bits_per_step` in [1, 16].
    Lcg { bits_per_step: u8 },
    /// Independent bits, each one with probability `p_one` in [0, 1].
    BiasedBits { p_one: f64 },
    /// Reference-random source: the ARX keystream at 20 rounds under a distinct label.
    UniformRef,
}

impl GeneratorSpec {
    /// Check parameter constraints.
    pub fn validate(&self) -> Result<()> {
        match *self {
            GeneratorSpec::ArxKeystream { rounds } => arx::validate_rounds(rounds),
            GeneratorSpec::Lcg { bits_per_step } => {
                if bits_per_step < 1 || bits_per_step > 16 {
                    return Err(Error::InvalidSpec(format!(
                        "LCG bits_per_step must be in [1, 16], got {bits_per_step}"
                    )));
                }
                Ok(())
            }
            GeneratorSpec::BiasedBits { p_one } => {
                if !(p_one.is_finite() && (0.0..=1.0).contains(&p_one)) {
                    return Err(Error::InvalidSpec(format!(
                        "biased-bit probability must lie in [0, 1], got {p_one}"
                    )));
                }
                Ok(())
            }
            GeneratorSpec::UniformRef => Ok(()),
        }
    }

    /// Short human-readable description for summaries and reports.
    pub fn describe(&self) -> String {
        match *self {
            GeneratorSpec::ArxKeystream { rounds } => format!("arx(rounds={rounds})"),
            GeneratorSpec::Lcg { bits_per_step } => format!("lcg(bits_per_step={bits_per_step})"),
            GeneratorSpec::BiasedBits { p_one } => format!("biased(p_one={p_one})"),
            GeneratorSpec::UniformRef => "uniform-ref".to_string(),
        }
    }
}

/// A finite binary string, packed MSB-first into octets with zero pad bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSequence {
    length_bits: u64,
    bits: Vec<u8>,
}

impl BitSequence {
    /// Wrap a packed buffer. The buffer must hold exactly `ceil(length_bits / 8)` octets;
    /// pad bits in the final octet are forced to zero.
    pub fn from_bytes(mut bits: Vec<u8>, length_bits: u64) -> Result<Self> {
        if length_bits == 0 {
            return Err(Error::InvalidArgument("a bit sequence must contain at least one bit".into()));
        }
        let expected = length_bits.div_ceil(8) as usize;
        if bits.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "buffer of {} octets cannot hold exactly {} bits (need {})",
                bits.len(),
                length_bits,
                expected
            )));
        }
        let tail = (length_bits % 8) as u32;
        if tail != 0 {
            *bits.last_mut().unwrap() &= 0xFFu8 << (8 - tail);
        }
        Ok(BitSequence { length_bits, bits })
    }

    /// Pack a bit vector (index 0 becomes the MSB of the first octet).
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidArgument("a bit sequence must contain at least one bit".into()));
        }
        let mut packer = BitPacker::with_capacity(bits.len() as u64);
        for &b in bits {
            packer.push(b);
        }
        Ok(packer.finish())
    }

    /// Parse a string of `'0'` / `'1'` characters.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let bits: Result<Vec<bool>> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidArgument(format!(
                    "bit strings may only contain '0' and '1', found {other:?}"
                ))),
            })
            .collect();
        BitSequence::from_bits(&bits?)
    }

    pub fn length_bits(&self) -> u64 {
        self.length_bits
    }

    /// The packed octet buffer (`ceil(length_bits / 8)` octets, MSB-first, zero padding).
    pub fn as_bytes(&self) -> &[u8] {
        &self.bits
    }

    /// Bit at position `i` (0-based from the front).
    #[inline]
    pub fn bit(&self, i: u64) -> bool {
        debug_assert!(i < self.length_bits);
        (self.bits[(i / 8) as usize] >> (7 - (i % 8))) & 1 == 1
    }

    /// Unpack into a bit vector; the inverse of [`BitSequence::from_bits`].
    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.length_bits).map(|i| self.bit(i)).collect()
    }

    /// Count of one-bits.
    pub fn count_ones(&self) -> u64 {
        // Pad bits are zero by construction, so a plain popcount is exact.
        self.bits.iter().map(|&b| b.count_ones() as u64).sum()
    }
}

/// Incremental MSB-first bit packer.
struct BitPacker {
    bytes: Vec<u8>,
    length_bits: u64,
}

impl BitPacker {
    fn with_capacity(bits: u64) -> Self {
        BitPacker {
            bytes: Vec::with_capacity(bits.div_ceil(8) as usize),
            length_bits: 0,
        }
    }

    #[inline]
    fn push(&mut self, bit: bool) {
        let offset = (self.length_bits % 8) as u32;
        if offset == 0 {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().unwrap() |= 1 << (7 - offset);
        }
        self.length_bits += 1;
    }

    fn finish(self) -> BitSequence {
        debug_assert!(self.length_bits > 0);
        BitSequence {
            length_bits: self.length_bits,
            bits: self.bytes,
        }
    }
}

/// An ordered collection of equal-length sequences from one generator and master seed.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    spec: GeneratorSpec,
    master_seed: Seed,
    length_bits: u64,
    sequences: Vec<BitSequence>,
}

impl Corpus {
    /// Assemble a corpus from parts, checking the shape invariants.
    pub fn new(
        spec: GeneratorSpec,
        master_seed: Seed,
        length_bits: u64,
        sequences: Vec<BitSequence>,
    ) -> Result<Self> {
        if sequences.is_empty() {
            return Err(Error::InvalidSpec("a corpus must contain at least one sequence".into()));
        }
        if sequences.len() > u32::MAX as usize {
            return Err(Error::InvalidArgument("corpus count exceeds u32 range".into()));
        }
        if let Some(bad) = sequences.iter().find(|s| s.length_bits() != length_bits) {
            return Err(Error::InvalidArgument(format!(
                "all sequences must share length_bits = {length_bits}, found one of {}",
                bad.length_bits()
            )));
        }
        Ok(Corpus {
            spec,
            master_seed,
            length_bits,
            sequences,
        })
    }

    pub fn spec(&self) -> GeneratorSpec {
        self.spec
    }

    pub fn master_seed(&self) -> Seed {
        self.master_seed
    }

    pub fn length_bits(&self) -> u64 {
        self.length_bits
    }

    /// Number of sequences.
    pub fn count(&self) -> u32 {
        self.sequences.len() as u32
    }

    pub fn sequences(&self) -> &[BitSequence] {
        &self.sequences
    }
}

/// Advance an LCG state one step under the fixed constants.
#[inline]
pub(crate) fn lcg_next(state: u64) -> u64 {
    (LCG_MULTIPLIER.wrapping_mul(state) + LCG_INCREMENT) % LCG_MODULUS
}

/// Generate the `index`-th sequence of a corpus.
///
/// Deterministic in all four arguments. Key material is derived per sequence:
/// for the ARX generators, key word `j` is the low half of
/// `mix64(master_seed XOR (index*8 + j))` and all three nonce words are the low half of
/// `mix64(master_seed + index)`, with the block counter starting at 0; the LCG state is
/// seeded from `mix64(master_seed + index) mod 2^31`; biased bits compare successive
/// 53-bit uniforms from a `mix64` counter stream against `p_one`.
pub fn generate_sequence(
    spec: GeneratorSpec,
    master_seed: Seed,
    index: u32,
    length_bits: u64,
) -> Result<BitSequence> {
    spec.validate()?;
    if length_bits == 0 {
        return Err(Error::InvalidSpec("length_bits must be at least 1".into()));
    }
    let seed = master_seed.value;
    let idx = index as u64;
    match spec {
        GeneratorSpec::ArxKeystream { rounds } => arx_sequence(seed, idx, length_bits, rounds),
        GeneratorSpec::UniformRef => arx_sequence(seed, idx, length_bits, 20),
        GeneratorSpec::Lcg { bits_per_step } => {
            let mut state = mix64(seed.wrapping_add(idx)) % LCG_MODULUS;
            let mut packer = BitPacker::with_capacity(length_bits);
            'outer: loop {
                state = lcg_next(state);
                for b in (0..bits_per_step as u32).rev() {
                    packer.push((state >> b) & 1 == 1);
                    if packer.length_bits == length_bits {
                        break 'outer;
                    }
                }
            }
            Ok(packer.finish())
        }
        GeneratorSpec::BiasedBits { p_one } => {
            let base = mix64(seed.wrapping_add(idx));
            let mut packer = BitPacker::with_capacity(length_bits);
            for t in 0..length_bits {
                let draw = mix64(base.wrapping_add(t));
                let unit = (draw >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                packer.push(unit < p_one);
            }
            Ok(packer.finish())
        }
    }
}

fn arx_sequence(seed: u64, idx: u64, length_bits: u64, rounds: u16) -> Result<BitSequence> {
    let mut key = [0u32; 8];
    for (j, word) in key.iter_mut().enumerate() {
        *word = mix64(seed ^ (idx.wrapping_mul(8).wrapping_add(j as u64))) as u32;
    }
    let nonce_word = mix64(seed.wrapping_add(idx)) as u32;
    let nonce = [nonce_word; 3];

    let needed = length_bits.div_ceil(8) as usize;
    let mut bytes = Vec::with_capacity(needed);
    let mut counter = 0u32;
    while bytes.len() < needed {
        let block = arx::arx_block(&key, &nonce, counter, rounds)?;
        let take = (needed - bytes.len()).min(arx::BLOCK_BYTES);
        bytes.extend_from_slice(&block[..take]);
        counter = counter.wrapping_add(1);
    }
    BitSequence::from_bytes(bytes, length_bits)
}

/// Generate a corpus: sequence `i` is `generate_sequence(spec, master_seed, i, length_bits)`.
///
/// Sequences are computed in parallel; the result is identical to sequential generation.
pub fn generate_corpus(
    spec: GeneratorSpec,
    master_seed: Seed,
    count: u32,
    length_bits: u64,
) -> Result<Corpus> {
    spec.validate()?;
    if count == 0 {
        return Err(Error::InvalidSpec("count must be at least 1".into()));
    }
    if length_bits == 0 {
        return Err(Error::InvalidSpec("length_bits must be at least 1".into()));
    }
    let sequences: Result<Vec<BitSequence>> = (0..count)
        .into_par_iter()
        .map(|i| generate_sequence(spec, master_seed, i, length_bits))
        .collect();
    Corpus::new(spec, master_seed, length_bits, sequences?)
}
