//! Python bindings over the seqprint library: sequence generation, pattern entropy,
//! L1 deviation, and fingerprints, all operating on `'0'`/`'1'` bit strings.
//!
//! The surface is deliberately small — enough to drive the library from Python for
//! experiments and sanity checks. Heavy corpus work should use the `seqprint` CLI and its
//! file formats.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use seqprint::extract::{extract_profile, normalize, PatternLength, PatternProfile};
use seqprint::fingerprint::{compute_fingerprint, Provenance};
use seqprint::metrics::{deviation_score, pattern_entropy};
use seqprint::seqgen::{generate_sequence, BitSequence, GeneratorSpec, Seed};

fn to_py_err(e: seqprint::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_bits(bits: &str) -> PyResult<BitSequence> {
    BitSequence::from_bit_str(bits).map_err(to_py_err)
}

fn profile_of(bits: &str, m: u32) -> PyResult<PatternProfile> {
    let seq = parse_bits(bits)?;
    let m = PatternLength::new(m).map_err(to_py_err)?;
    extract_profile(&seq, m).map_err(to_py_err)
}

fn spec_from_args(kind: &str, param: f64) -> PyResult<GeneratorSpec> {
    let spec = match kind {
        "arx" => GeneratorSpec::ArxKeystream {
            rounds: param as u16,
        },
        "lcg" => GeneratorSpec::Lcg {
            bits_per_step: param as u8,
        },
        "biased" => GeneratorSpec::BiasedBits { p_one: param },
        "uniform-ref" => GeneratorSpec::UniformRef,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown generator kind {other:?} (expected arx | lcg | biased | uniform-ref)"
            )))
        }
    };
    spec.validate().map_err(to_py_err)?;
    Ok(spec)
}

/// Plug-in entropy (bits) of the length-`m` window distribution of a bit string.
#[pyfunction]
fn entropy(bits: &str, m: u32) -> PyResult<f64> {
    let profile = profile_of(bits, m)?;
    let dist = normalize(&profile).map_err(to_py_err)?;
    Ok(pattern_entropy(&dist))
}

/// L1 deviation between the length-`m` window distributions of two bit strings.
#[pyfunction]
fn deviation(bits_a: &str, bits_b: &str, m: u32) -> PyResult<f64> {
    let da = normalize(&profile_of(bits_a, m)?).map_err(to_py_err)?;
    let db = normalize(&profile_of(bits_b, m)?).map_err(to_py_err)?;
    deviation_score(&da, &db).map_err(to_py_err)
}

/// Structural fingerprint of a bit string over `m_set`, as the versioned JSON document.
#[pyfunction]
fn fingerprint_json(bits: &str, m_set: Vec<u32>) -> PyResult<String> {
    let profiles: PyResult<Vec<PatternProfile>> =
        m_set.iter().map(|&m| profile_of(bits, m)).collect();
    let fp = compute_fingerprint(&profiles?, Provenance::Sequence).map_err(to_py_err)?;
    Ok(fp.to_json())
}

/// Generate the `index`-th sequence of the corpus `(kind, param, seed)` as a bit string.
///
/// `param` is the family parameter: rounds for `arx`, bits-per-step for `lcg`, the
/// probability of a one for `biased`; it is ignored for `uniform-ref`.
#[pyfunction]
#[pyo3(signature = (kind, param, seed, index, length_bits))]
fn generate_bits(kind: &str, param: f64, seed: u64, index: u32, length_bits: u64) -> PyResult<String> {
    let spec = spec_from_args(kind, param)?;
    let seq = generate_sequence(spec, Seed::new(seed), index, length_bits).map_err(to_py_err)?;
    let mut out = String::with_capacity(length_bits as usize);
    for i in 0..seq.length_bits() {
        out.push(if seq.bit(i) { '1' } else { '0' });
    }
    Ok(out)
}

#[pymodule]
fn seqprint_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(deviation, m)?)?;
    m.add_function(wrap_pyfunction!(fingerprint_json, m)?)?;
    m.add_function(wrap_pyfunction!(generate_bits, m)?)?;
    Ok(())
}
