//! Binary corpus file format (SBFC).
//!
//! Layout, all integers big-endian:
//!
//! ```text
//! magic            4 octets   "SBFC"
//! version          u16        1
//! generator tag    u8         1 = ArxKeystream, 2 = Lcg, 3 = BiasedBits, 4 = UniformRef
//! tag parameters   fixed per tag:
//!                    ArxKeystream → u16 rounds
//!                    Lcg          → u16 bits_per_step
//!                    BiasedBits   → f64 p_one as its IEEE-754 bit pattern
//!                    UniformRef   → (none)
//! master seed      u64
//! count            u32
//! length_bits      u64
//! sequences        count × ceil(length_bits / 8) octets, packed MSB-first
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::seqgen::{BitSequence, Corpus, GeneratorSpec, Seed};

const MAGIC: &[u8; 4] = b"SBFC";
const VERSION: u16 = 1;

/// Serialize a corpus to a writer.
pub fn write_corpus<W: Write>(w: &mut W, corpus: &Corpus) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_be_bytes())?;
    match corpus.spec() {
        GeneratorSpec::ArxKeystream { rounds } => {
            w.write_all(&[1u8])?;
            w.write_all(&rounds.to_be_bytes())?;
        }
        GeneratorSpec::Lcg { bits_per_step } => {
            w.write_all(&[2u8])?;
            w.write_all(&(bits_per_step as u16).to_be_bytes())?;
        }
        GeneratorSpec::BiasedBits { p_one } => {
            w.write_all(&[3u8])?;
            w.write_all(&p_one.to_bits().to_be_bytes())?;
        }
        GeneratorSpec::UniformRef => {
            w.write_all(&[4u8])?;
        }
    }
    w.write_all(&corpus.master_seed().value.to_be_bytes())?;
    w.write_all(&corpus.count().to_be_bytes())?;
    w.write_all(&corpus.length_bits().to_be_bytes())?;
    for seq in corpus.sequences() {
        w.write_all(seq.as_bytes())?;
    }
    Ok(())
}

/// Deserialize a corpus from a reader, validating magic, version, and parameters.
pub fn read_corpus<R: Read>(r: &mut R) -> Result<Corpus> {
    let mut magic = [0u8; 4];
    read_exact(r, &mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format(format!(
            "bad corpus magic {:02x?} (expected \"SBFC\")",
            magic
        )));
    }
    let version = read_u16(r)?;
    if version != VERSION {
        return Err(Error::Format(format!(
            "unsupported corpus format version {version} (expected {VERSION})"
        )));
    }
    let tag = read_u8(r)?;
    let spec = match tag {
        1 => GeneratorSpec::ArxKeystream { rounds: read_u16(r)? },
        2 => {
            let bits = read_u16(r)?;
            if bits > u8::MAX as u16 {
                return Err(Error::Format(format!("LCG bits_per_step {bits} out of range")));
            }
            GeneratorSpec::Lcg { bits_per_step: bits as u8 }
        }
        3 => GeneratorSpec::BiasedBits { p_one: f64::from_bits(read_u64(r)?) },
        4 => GeneratorSpec::UniformRef,
        other => return Err(Error::Format(format!("unknown generator tag {other}"))),
    };
    // Parameters embedded in a file get the same scrutiny as fresh ones.
    spec.validate().map_err(|e| Error::Format(e.to_string()))?;

    let master_seed = Seed::new(read_u64(r)?);
    let count = read_u32(r)?;
    let length_bits = read_u64(r)?;
    if count == 0 {
        return Err(Error::Format("corpus file declares zero sequences".into()));
    }
    if length_bits == 0 {
        return Err(Error::Format("corpus file declares zero-length sequences".into()));
    }
    let bytes_per_seq = length_bits.div_ceil(8) as usize;
    let mut sequences = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let mut buf = vec![0u8; bytes_per_seq];
        read_exact(r, &mut buf)?;
        sequences.push(BitSequence::from_bytes(buf, length_bits).map_err(|e| Error::Format(e.to_string()))?);
    }
    // A well-formed file ends exactly after the last sequence.
    let mut probe = [0u8; 1];
    if r.read(&mut probe)? != 0 {
        return Err(Error::Format("trailing bytes after final sequence".into()));
    }
    Corpus::new(spec, master_seed, length_bits, sequences).map_err(|e| Error::Format(e.to_string()))
}

/// Write a corpus to a file path.
pub fn write_corpus_file<P: AsRef<Path>>(path: P, corpus: &Corpus) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_corpus(&mut w, corpus)?;
    w.flush()?;
    Ok(())
}

/// Read a corpus from a file path.
pub fn read_corpus_file<P: AsRef<Path>>(path: P) -> Result<Corpus> {
    let mut r = BufReader::new(File::open(path)?);
    read_corpus(&mut r)
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

fn read_u8<R: Read>(r: &mut R) -> Result<u8> {
    let mut b = [0u8; 1];
    read_exact(r, &mut b)?;
    Ok(b[0])
}

fn read_u16<R: Read>(r: &mut R) -> Result<u16> {
    let mut b = [0u8; 2];
    read_exact(r, &mut b)?;
    Ok(u16::from_be_bytes(b))
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b)?;
    Ok(u32::from_be_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(u64::from_be_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqgen::generate_corpus;

    fn sample(spec: GeneratorSpec) -> Corpus {
        generate_corpus(spec, Seed::new(123), 3, 100).unwrap()
    }

    #[test]
    fn round_trips_every_generator_tag() {
        let specs = [
            GeneratorSpec::ArxKeystream { rounds: 8 },
            GeneratorSpec::Lcg { bits_per_step: 7 },
            GeneratorSpec::BiasedBits { p_one: 0.25 },
            GeneratorSpec::UniformRef,
        ];
        for spec in specs {
            let corpus = sample(spec);
            let mut buf = Vec::new();
            write_corpus(&mut buf, &corpus).unwrap();
            let back = read_corpus(&mut buf.as_slice()).unwrap();
            assert_eq!(back, corpus, "{}", spec.describe());
        }
    }

    #[test]
    fn serialization_is_byte_stable() {
        let corpus = sample(GeneratorSpec::UniformRef);
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_corpus(&mut a, &corpus).unwrap();
        write_corpus(&mut b, &corpus).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_magic() {
        let corpus = sample(GeneratorSpec::UniformRef);
        let mut buf = Vec::new();
        write_corpus(&mut buf, &corpus).unwrap();
        buf[0] = b'X';
        assert!(matches!(read_corpus(&mut buf.as_slice()), Err(Error::Format(_))));
    }

    #[test]
    fn rejects_bad_version() {
        let corpus = sample(GeneratorSpec::UniformRef);
        let mut buf = Vec::new();
        write_corpus(&mut buf, &corpus).unwrap();
        buf[5] = 9;
        assert!(matches!(read_corpus(&mut buf.as_slice()), Err(Error::Format(_))));
    }

    #[test]
    fn rejects_truncation_and_trailing_garbage() {
        let corpus = sample(GeneratorSpec::UniformRef);
        let mut buf = Vec::new();
        write_corpus(&mut buf, &corpus).unwrap();

        let truncated = &buf[..buf.len() - 1];
        assert!(matches!(read_corpus(&mut &truncated[..]), Err(Error::Format(_))));

        let mut extended = buf.clone();
        extended.push(0);
        assert!(matches!(read_corpus(&mut extended.as_slice()), Err(Error::Format(_))));
    }

    #[test]
    fn rejects_invalid_embedded_parameters() {
        let corpus = sample(GeneratorSpec::ArxKeystream { rounds: 8 });
        let mut buf = Vec::new();
        write_corpus(&mut buf, &corpus).unwrap();
        // Rounds live right after magic+version+tag; corrupt them to an odd value.
        buf[7] = 0;
        buf[8] = 9;
        assert!(matches!(read_corpus(&mut buf.as_slice()), Err(Error::Format(_))));
    }

    #[test]
    fn file_helpers_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.sbfc");
        let corpus = sample(GeneratorSpec::Lcg { bits_per_step: 3 });
        write_corpus_file(&path, &corpus).unwrap();
        let back = read_corpus_file(&path).unwrap();
        assert_eq!(back, corpus);
    }
}
