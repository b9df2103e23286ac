use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use fsig_core::codec::{
    decode, encode, metrics, read_container, read_csv, read_pgm, write_container, write_csv, write_pgm, EncodeOptions,
    Policy, RawSignal, Shape,
};
use fsig_core::laws::SUITES;
use fsig_core::rational::int;
use fsig_core::signal::{
    fixed_breakpoints, prototype_demo, redundancy_report, ArrowKind, DetectorConfig, LawCount, Segment,
};

#[derive(Parser)]
#[command(name = "fsig", version, about = "Functorial signal representation: law checks, redundancy analysis and a lossless differential codec")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every law suite on random finite instances.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        /// Run only the named suites (comma separated).
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
    /// Report the redundancy arrows between fixed-width segments.
    Analyze {
        input: PathBuf,
        /// Segment width; defaults to 1 for sequences and the row width for images.
        #[arg(long)]
        segment_len: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
        #[arg(long, value_delimiter = ',', default_value = "translation,affine,amp")]
        detectors: Vec<String>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "-2,-1,1,2")]
        strides: Vec<i64>,
        /// Search only this many preceding segments.
        #[arg(long)]
        lookback: Option<usize>,
    },
    /// Encode a CSV sequence or PGM image into an FSG1 container.
    Encode {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value = "predecessor")]
        policy: Policy,
        /// Segment width for sequences.
        #[arg(long, default_value_t = 1)]
        segment_len: usize,
        #[arg(long, default_value_t = 32)]
        lookback: usize,
    },
    /// Decode an FSG1 container to CSV (sequences) or binary PGM (images).
    Decode {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Write images as ASCII P2.
        #[arg(long)]
        ascii: bool,
    },
    /// Decompose the sequence 1,2,3,4,5 into a seed, arrows and deltas.
    DemoPrototype {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "1,2,3,4,5")]
        samples: Vec<i64>,
    },
    /// Sparsity and entropy of an encoding against its raw input.
    Stats { raw: PathBuf, encoded: PathBuf },
}

/// Failure classes mapped to exit codes.
enum Failure {
    Laws,
    Io(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Laws) => ExitCode::from(1),
        Err(Failure::Io(e)) => {
            eprintln!("fsig: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Verify { seed, instances, only } => verify(seed, instances, &only),
        Command::Analyze { input, segment_len, tol, detectors, strides, lookback } => {
            analyze(&input, segment_len, tol, &detectors, strides, lookback).map_err(Into::into)
        }
        Command::Encode { input, output, policy, segment_len, lookback } => {
            let signal = read_signal(&input)?;
            let opts = EncodeOptions { policy, segment_len, lookback, ..EncodeOptions::default() };
            let enc = encode(&signal, &opts).context("encoding")?;
            write_file(&output, &write_container(&enc))?;
            Ok(())
        }
        Command::Decode { input, output, ascii } => {
            let enc = read_container(&read_file(&input)?).with_context(|| format!("reading {}", input.display()))?;
            let signal = decode(&enc).context("decoding")?;
            let bytes = match signal.shape() {
                Shape::Line { origin, .. } => write_csv(origin, signal.samples()).into_bytes(),
                Shape::Grid { rows, cols } => write_pgm(rows, cols, signal.samples(), !ascii).context("writing PGM")?,
            };
            write_file(&output, &bytes)?;
            Ok(())
        }
        Command::DemoPrototype { samples } => demo(&samples),
        Command::Stats { raw, encoded } => {
            let signal = read_signal(&raw)?;
            let enc = read_container(&read_file(&encoded)?).with_context(|| format!("reading {}", encoded.display()))?;
            let m = metrics(&signal, &enc).context("comparing")?;
            println!("[stats]");
            println!("policy = {}", enc.policy);
            println!("samples = {}", m.samples);
            println!("deltas = {}", m.deltas);
            println!("nonzero_deltas = {}", m.nonzero_deltas);
            println!("nonzero_delta_fraction = {}", m.nonzero_delta_fraction);
            println!("raw_entropy_bits = {}", m.raw_entropy);
            println!("delta_entropy_bits = {}", m.delta_entropy);
            println!("encoded_bytes = {}", m.encoded_bytes);
            Ok(())
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn is_pgm(bytes: &[u8]) -> bool {
    bytes.starts_with(b"P2") || bytes.starts_with(b"P5")
}

fn read_signal(path: &Path) -> Result<RawSignal> {
    let bytes = read_file(path)?;
    let what = || format!("parsing {}", path.display());
    if is_pgm(&bytes) {
        return Ok(read_pgm(&bytes).with_context(what)?.into_signal()?);
    }
    let text = String::from_utf8(bytes).with_context(what)?;
    read_csv(&text).with_context(what)?.into_signal().with_context(what)
}

fn verify(seed: u64, instances: usize, only: &[String]) -> Result<(), Failure> {
    for name in only {
        if !SUITES.iter().any(|(n, _)| n == name) {
            let known: Vec<&str> = SUITES.iter().map(|(n, _)| *n).collect();
            return Err(anyhow::anyhow!("unknown suite {name:?}; known: {}", known.join(", ")).into());
        }
    }
    let mut failed = 0;
    for (name, suite) in SUITES {
        if !only.is_empty() && !only.iter().any(|n| n == name) {
            continue;
        }
        let report = suite(seed, instances);
        print!("{report}");
        failed += report.failed();
    }
    println!("seed={seed} instances={instances} failures={failed}");
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Laws)
    }
}

fn parse_detector(name: &str) -> Result<ArrowKind> {
    Ok(match name.trim() {
        "translation" => ArrowKind::Translation,
        "affine" => ArrowKind::Affine,
        "amp" | "amp-affine" => ArrowKind::AmpAffine,
        other => bail!("unknown detector {other:?}; expected translation, affine or amp"),
    })
}

fn analyze(
    input: &Path,
    segment_len: Option<usize>,
    tol: f64,
    detectors: &[String],
    strides: Vec<i64>,
    lookback: Option<usize>,
) -> Result<()> {
    let bytes = read_file(input)?;
    let what = || format!("parsing {}", input.display());
    let (signal, default_len) = if is_pgm(&bytes) {
        let img = read_pgm(&bytes).with_context(what)?;
        let samples = img.pixels.iter().map(|&p| int(p)).collect();
        (Segment::new(0, samples)?, img.cols)
    } else {
        let csv = read_csv(&String::from_utf8(bytes).with_context(what)?).with_context(what)?;
        if csv.samples.is_empty() {
            bail!("{} has no samples", input.display());
        }
        (Segment::new(csv.origin, csv.samples)?, 1)
    };
    if tol.is_nan() || tol < 0.0 {
        bail!("--tol must be a non-negative number");
    }
    if strides.contains(&0) {
        bail!("--strides must be nonzero");
    }
    let len = segment_len.unwrap_or(default_len);
    if len == 0 {
        bail!("--segment-len must be positive");
    }
    let config = DetectorConfig {
        detectors: detectors.iter().map(|d| parse_detector(d)).collect::<Result<_>>()?,
        strides,
        tol,
        lookback,
    };
    let report = redundancy_report(&signal, &fixed_breakpoints(signal.interval(), len), &config)?;
    print!("{}", report.to_key_value());
    Ok(())
}

fn law_line(name: &str, c: &LawCount) -> String {
    format!("{name} = checked {} failed {}", c.checked, c.failed.len())
}

fn demo(samples: &[i64]) -> Result<(), Failure> {
    if samples.is_empty() {
        return Err(anyhow::anyhow!("--samples must not be empty").into());
    }
    let demo = prototype_demo(samples, 0).map_err(anyhow::Error::from)?;
    println!("[signal]");
    println!("samples = {}", join(samples));
    println!("segments = {}", demo.segments.iter().map(|s| s.interval().to_string()).collect::<Vec<_>>().join(" "));
    println!();
    println!("[decomposition]");
    println!("seed = {}", demo.seed);
    println!("deltas = {}", join(&demo.deltas));
    println!("second_deltas = {}", join(&demo.second_deltas));
    println!("second_deltas_vanish = {}", demo.second_deltas_vanish());
    let mut reconstruction = demo.seed.clone();
    let mut rebuilt = vec![reconstruction.clone()];
    for d in &demo.deltas {
        reconstruction += d;
        rebuilt.push(reconstruction.clone());
    }
    println!("reconstruction = {}", join(&rebuilt));
    for a in demo.graph.arrows() {
        println!();
        println!("[arrow.{}]", a.name);
        println!("source = {}", a.source);
        println!("target = {}", a.target);
        println!("map = {}", a.arrow.map());
        println!("scale = {}", a.arrow.scale());
        println!("residual = {}", join(a.arrow.residual()));
        println!("invertible = {}", a.iso);
    }
    println!();
    println!("[laws]");
    let laws = &demo.laws;
    println!("{}", law_line("reconstruction", &laws.reconstruction));
    println!("{}", law_line("identity", &laws.identity));
    println!("{}", law_line("associativity", &laws.associativity));
    println!("{}", law_line("groupoid", &laws.groupoid));
    println!("category = {}", laws.category_ok());
    println!("groupoid = {}", laws.groupoid_ok());
    for (a, b) in &laws.faithfulness_warnings {
        println!("warning = parallel arrows {a} and {b} act identically");
    }
    if laws.groupoid_ok() {
        Ok(())
    } else {
        Err(Failure::Laws)
    }
}

fn join<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}
