//! Command-line surface: `generate`, `analyze`, `compare`, and `fingerprint`
//! subcommands over the library pipeline.
//!
//! Every subcommand is deterministic given its flags: all randomness is seed-derived,
//! and parallel execution never changes observable output. Exit status contract:
//! 0 success, 1 usage/validation error, 2 data/format/I/O error, 3 internal error
//! (the mapping lives in [`exit_code`]; the binary's entry point applies it).

use crate::error::{Error, Result};
use crate::extract::PatternLength;
use crate::pipeline::{
    analyze_corpus, compare, deviation_csv, human_tables, null_baseline, read_analysis_file,
    report_json, write_analysis_file, write_report_files,
};
use crate::seqgen::{generate_corpus, read_corpus_file, write_corpus, GeneratorSpec, Seed};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

/// Top-level invocation: one subcommand plus its flags.
#[derive(Debug, Parser)]
#[command(
    name = "seqprint",
    version,
    about = "Structural pattern statistics for cipher-style bit sequence corpora"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a seeded corpus of bit sequences.
    Generate(GenerateArgs),
    /// Analyze a corpus file across a set of pattern lengths.
    Analyze(AnalyzeArgs),
    /// Compare two analysis files, optionally against a permutation null baseline.
    Compare(CompareArgs),
    /// Compute the structural fingerprint of a corpus file.
    Fingerprint(FingerprintArgs),
}

/// Generator family selector for `generate --gen`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    /// ARX keystream with a tunable round count.
    Arx,
    /// Truncated linear congruential generator.
    Lcg,
    /// Independent biased bits.
    Biased,
    /// Reference-random source (full-strength keystream).
    UniformRef,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Generator family.
    #[arg(long, value_enum)]
    gen: GenKind,
    /// ARX round count, even, in [2, 20] (arx only).
    #[arg(long)]
    rounds: Option<u16>,
    /// Bits emitted per generator step, in [1, 16] (lcg only).
    #[arg(long)]
    bits_per_step: Option<u8>,
    /// Probability of a one bit, in [0, 1] (biased only).
    #[arg(long)]
    p_one: Option<f64>,
    /// Master seed; every sequence is derived from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of sequences.
    #[arg(long, default_value_t = 10_000)]
    count: u32,
    /// Bits per sequence.
    #[arg(long, default_value_t = 4096)]
    length: u64,
    /// Output corpus file (.sbfc).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Input corpus file (.sbfc).
    #[arg(long = "in")]
    input: PathBuf,
    /// Pattern lengths to analyze, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
    m: Vec<u32>,
    /// Output analysis file (.sbfa).
    #[arg(long)]
    out: PathBuf,
}

/// Stdout rendering for `compare`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    /// Aligned tables.
    Human,
    /// The full report document.
    Json,
    /// The deviation table as CSV (the full CSV set always lands in --out-dir).
    Csv,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// First analysis file (.sbfa).
    #[arg(long)]
    a: PathBuf,
    /// Second analysis file (.sbfa).
    #[arg(long)]
    b: PathBuf,
    /// Directory for report.json, deviation.csv, entropy.csv, recurrence.csv.
    #[arg(long)]
    out_dir: PathBuf,
    /// Reference corpus (.sbfc) for the permutation null baseline.
    #[arg(long)]
    null_corpus: Option<PathBuf>,
    /// Shuffles per null baseline (requires --null-corpus; default 100).
    #[arg(long)]
    shuffles: Option<u32>,
    /// Seed for the null shuffles (requires --null-corpus; default 0).
    #[arg(long)]
    null_seed: Option<u64>,
    /// What to print on stdout.
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct FingerprintArgs {
    /// Input corpus file (.sbfc).
    #[arg(long = "in")]
    input: PathBuf,
    /// Pattern lengths the fingerprint covers, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
    m: Vec<u32>,
    /// Output fingerprint file (JSON).
    #[arg(long)]
    out: PathBuf,
}

/// Map an error to the process exit status: validation problems are 1, data/format/I/O
/// problems are 2. (3 is reserved for panics and set by the binary.)
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidSpec(_)
        | Error::InvalidArgument(_)
        | Error::EmptyWindow { .. }
        | Error::IncompatibleProfile(_)
        | Error::IncompatibleFingerprint(_)
        | Error::IncompatibleAnalysis(_) => 1,
        Error::Format(_) | Error::Io(_) => 2,
    }
}

/// Execute a parsed invocation.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Fingerprint(args) => cmd_fingerprint(args),
    }
}

/// Resolve the generator flags into a spec, rejecting flag combinations that mix
/// families.
fn build_spec(args: &GenerateArgs) -> Result<GeneratorSpec> {
    let forbid = |flag: Option<()>, name: &str, family: &str| -> Result<()> {
        if flag.is_some() {
            return Err(Error::InvalidArgument(format!(
                "--{name} applies only to --gen {family}"
            )));
        }
        Ok(())
    };
    let rounds_flag = args.rounds.map(|_| ());
    let bits_flag = args.bits_per_step.map(|_| ());
    let p_one_flag = args.p_one.map(|_| ());
    match args.gen {
        GenKind::Arx => {
            forbid(bits_flag, "bits-per-step", "lcg")?;
            forbid(p_one_flag, "p-one", "biased")?;
            let rounds = args.rounds.ok_or_else(|| {
                Error::InvalidArgument("--rounds is required with --gen arx".into())
            })?;
            Ok(GeneratorSpec::ArxKeystream { rounds })
        }
        GenKind::Lcg => {
            forbid(rounds_flag, "rounds", "arx")?;
            forbid(p_one_flag, "p-one", "biased")?;
            let bits_per_step = args.bits_per_step.ok_or_else(|| {
                Error::InvalidArgument("--bits-per-step is required with --gen lcg".into())
            })?;
            Ok(GeneratorSpec::Lcg { bits_per_step })
        }
        GenKind::Biased => {
            forbid(rounds_flag, "rounds", "arx")?;
            forbid(bits_flag, "bits-per-step", "lcg")?;
            let p_one = args.p_one.ok_or_else(|| {
                Error::InvalidArgument("--p-one is required with --gen biased".into())
            })?;
            Ok(GeneratorSpec::BiasedBits { p_one })
        }
        GenKind::UniformRef => {
            forbid(rounds_flag, "rounds", "arx")?;
            forbid(bits_flag, "bits-per-step", "lcg")?;
            forbid(p_one_flag, "p-one", "biased")?;
            Ok(GeneratorSpec::UniformRef)
        }
    }
}

fn parse_m_set(raw: &[u32]) -> Result<Vec<PatternLength>> {
    raw.iter().map(|&m| PatternLength::new(m)).collect()
}

fn join_m_set(m_set: &[PatternLength]) -> String {
    let mut s = String::new();
    for (i, m) in m_set.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        write!(s, "{m}").unwrap();
    }
    s
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let spec = build_spec(&args)?;
    let corpus = generate_corpus(spec, Seed::new(args.seed), args.count, args.length)?;
    let file = File::create(&args.out)?;
    let mut writer = HashingWriter::new(BufWriter::new(file));
    write_corpus(&mut writer, &corpus)?;
    let digest = writer.finish()?;
    println!(
        "wrote {}: {} seed={} count={} length_bits={} sha256={}",
        args.out.display(),
        spec.describe(),
        args.seed,
        args.count,
        args.length,
        digest
    );
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let m_set = parse_m_set(&args.m)?;
    let corpus = read_corpus_file(&args.input)?;
    let analysis = analyze_corpus(&corpus, &m_set)?;
    write_analysis_file(&args.out, &analysis)?;
    println!(
        "wrote {}: analysis of {} at m = [{}]",
        args.out.display(),
        analysis.identity.describe(),
        join_m_set(&m_set)
    );
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> Result<()> {
    if args.null_corpus.is_none() {
        if args.shuffles.is_some() {
            return Err(Error::InvalidArgument("--shuffles requires --null-corpus".into()));
        }
        if args.null_seed.is_some() {
            return Err(Error::InvalidArgument("--null-seed requires --null-corpus".into()));
        }
    }
    let a = read_analysis_file(&args.a)?;
    let b = read_analysis_file(&args.b)?;

    let nulls = match &args.null_corpus {
        Some(path) => {
            let reference = read_corpus_file(path)?;
            if reference.length_bits() != a.identity.length_bits {
                return Err(Error::InvalidArgument(format!(
                    "null reference sequence length {} does not match the compared corpora ({})",
                    reference.length_bits(),
                    a.identity.length_bits
                )));
            }
            let shuffles = args.shuffles.unwrap_or(100);
            let seed = Seed::new(args.null_seed.unwrap_or(0));
            a.m_set()
                .iter()
                .map(|&m| null_baseline(&reference, m, shuffles, seed))
                .collect::<Result<Vec<_>>>()?
        }
        None => Vec::new(),
    };

    let report = compare(&a, &b, &nulls)?;
    write_report_files(&report, &args.out_dir)?;
    match args.format {
        OutputFormat::Human => print!("{}", human_tables(&report)),
        OutputFormat::Json => print!("{}", report_json(&report)),
        OutputFormat::Csv => print!("{}", deviation_csv(&report)),
    }
    Ok(())
}

fn cmd_fingerprint(args: FingerprintArgs) -> Result<()> {
    let m_set = parse_m_set(&args.m)?;
    let corpus = read_corpus_file(&args.input)?;
    let analysis = analyze_corpus(&corpus, &m_set)?;
    let mut json = analysis.fingerprint.to_json();
    json.push('\n');
    std::fs::write(&args.out, json)?;
    println!(
        "wrote {}: fingerprint d={} over m = [{}]",
        args.out.display(),
        analysis.fingerprint.d(),
        join_m_set(&m_set)
    );
    Ok(())
}

/// Writer adapter that maintains a SHA-256 digest of everything written through it.
struct HashingWriter<W: Write> {
    inner: W,
    hasher: Sha256,
}

impl<W: Write> HashingWriter<W> {
    fn new(inner: W) -> Self {
        HashingWriter {
            inner,
            hasher: Sha256::new(),
        }
    }

    /// Flush the underlying writer and return the hex digest.
    fn finish(mut self) -> std::io::Result<String> {
        self.inner.flush()?;
        let digest = self.hasher.finalize();
        let mut hex = String::with_capacity(64);
        for byte in digest {
            write!(hex, "{byte:02x}").unwrap();
        }
        Ok(hex)
    }
}

impl<W: Write> Write for HashingWriter<W> {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.hasher.update(&buf[..n]);
        Ok(n)
    }

    fn flush(&mut self) -> std::io::Result<()> {
        self.inner.flush()
    }
}
