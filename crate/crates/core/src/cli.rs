//! Command-line front end: `compress`, `reconstruct`, `evaluate`, `sweep`,
//! `coherence`, `sparsity` and `synth`.
//!
//! Any flag may also come from a `--config` file of `key = value` lines
//! (keys are the long flag names without dashes, `#` starts a comment).
//! Flags given on the command line win over the file.

use std::collections::HashMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::io::{self, Signal, SignalFormat};
use crate::measure::MatrixKind;
use crate::parallel::Execution;
use crate::pipeline::{self, CompressParams, SweepConfig};
use crate::recover::{MaxAtoms, OmpConfig};
use crate::synth::{self, Impulse, SynthSpec, Tone};
use crate::transforms::BasisKind;

#[derive(Debug, Parser)]
#[command(name = "vibcs", version, about = "Compressive sensing for machinery vibration signals")]
pub struct Cli {
    /// Flat key = value file supplying defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Run sweep cells and segments on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Measure a signal block by block and write a CSVB container.
    Compress(CompressArgs),
    /// Recover a signal from a container with OMP and write it as CSV.
    Reconstruct(ReconstructArgs),
    /// SNR, RMS and kurtosis of a reconstruction against the original.
    Evaluate(EvaluateArgs),
    /// SNR versus compression ratio over bases, matrices and seeds.
    Sweep(SweepArgs),
    /// Mutual coherence of matrix/basis pairs.
    Coherence(CoherenceArgs),
    /// Fraction of negligible coefficients per basis.
    Sparsity(SparsityArgs),
    /// Generate a synthetic vibration signal.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct InputArgs {
    /// Input signal file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// csv, wav, raw-f32 or raw-f64 (default: from the extension).
    #[arg(long)]
    pub format: Option<String>,
    /// Sample rate override in Hz (required for raw input).
    #[arg(long)]
    pub sample_rate: Option<f64>,
    /// Channel (CSV column or WAV channel), zero-based.
    #[arg(long)]
    pub channel: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OmpArgs {
    /// Atom budget per block (default floor(m/2)).
    #[arg(long)]
    pub omp_max_atoms: Option<usize>,
    /// Relative residual tolerance (default 1e-6).
    #[arg(long)]
    pub omp_tol: Option<f64>,
    /// Relative improvement below which the solver stops (default 1e-8).
    #[arg(long)]
    pub omp_min_improvement: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SynthFlags {
    /// Tones as `freq:amp[:phase]`, comma-separated.
    #[arg(long)]
    pub tones: Option<String>,
    /// Sample rate in Hz.
    #[arg(long)]
    pub fs: Option<f64>,
    /// Number of samples.
    #[arg(long)]
    pub len: Option<usize>,
    /// Noise power relative to the strongest tone, in dB.
    #[arg(long, allow_hyphen_values = true)]
    pub noise_db: Option<f64>,
    /// Impulses as `position:amp:decay`, comma-separated.
    #[arg(long)]
    pub impulses: Option<String>,
    /// Noise seed.
    #[arg(long)]
    pub synth_seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CompressArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub basis: Option<String>,
    #[arg(long)]
    pub matrix: Option<String>,
    /// Compression ratio in percent.
    #[arg(long)]
    pub cr: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Block length.
    #[arg(long)]
    pub n: Option<usize>,
    /// Output container path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ReconstructArgs {
    /// Container file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub omp: OmpArgs,
    /// Output CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub original: Option<PathBuf>,
    #[arg(long)]
    pub reconstructed: Option<PathBuf>,
    /// Format of both inputs (default: from the extension).
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub channel: Option<usize>,
    /// Also emit one row per block of this length.
    #[arg(long)]
    pub n: Option<usize>,
    /// Report path (default stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub synth: SynthFlags,
    /// Comma-separated bases.
    #[arg(long)]
    pub basis: Option<String>,
    /// Comma-separated matrix kinds.
    #[arg(long)]
    pub matrix: Option<String>,
    /// Comma-separated CR percentages.
    #[arg(long)]
    pub cr: Option<String>,
    /// Seeds as a list `1,2,3` or a range `0..10`.
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub omp: OmpArgs,
    /// Fill the wall_ms column (makes reports non-reproducible).
    #[arg(long)]
    pub timing: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CoherenceArgs {
    #[arg(long)]
    pub basis: Option<String>,
    #[arg(long)]
    pub matrix: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Measurement count (alternatively give --cr).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub cr: Option<f64>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SparsityArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub synth: SynthFlags,
    #[arg(long)]
    pub basis: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Relative threshold (default 0.01).
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub synth: SynthFlags,
    /// csv (default), raw-f32 or raw-f64.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parsed `key = value` configuration.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("expected key = value, got '{line}'"),
            })?;
            let key = key.trim().trim_start_matches("--").replace('_', "-");
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| Error::param(format!("config value for '{key}' is invalid: '{raw}'"))),
        }
    }

    /// Fill `slot` from the file when the flag was not given.
    fn fill<T: FromStr>(&self, slot: &mut Option<T>, key: &str) -> Result<()> {
        if slot.is_none() {
            *slot = self.get(key)?;
        }
        Ok(())
    }

    fn flag(&self, key: &str) -> Result<bool> {
        Ok(self.get::<bool>(key)?.unwrap_or(false))
    }
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::param(format!("--{flag} is required")))
}

fn parse_list<T: FromStr<Err = Error>>(text: &str) -> Result<Vec<T>> {
    text.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}

fn parse_f64(text: &str, what: &str) -> Result<f64> {
    text.trim()
        .parse()
        .map_err(|_| Error::param(format!("invalid {what} '{}'", text.trim())))
}

/// `a..b` (half-open) or a comma-separated list.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    if let Some((a, b)) = text.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| Error::param(format!("invalid seed range '{text}'")))?;
        let b: u64 = b.trim().parse().map_err(|_| Error::param(format!("invalid seed range '{text}'")))?;
        if b <= a {
            return Err(Error::param(format!("empty seed range '{text}'")));
        }
        return Ok((a..b).collect());
    }
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| Error::param(format!("invalid seed '{}'", s.trim()))))
        .collect()
}

pub fn parse_tones(text: &str) -> Result<Vec<Tone>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let parts: Vec<&str> = item.split(':').collect();
            if !(2..=3).contains(&parts.len()) {
                return Err(Error::param(format!("tone '{item}' is not freq:amp[:phase]")));
            }
            Ok(Tone {
                frequency_hz: parse_f64(parts[0], "tone frequency")?,
                amplitude: parse_f64(parts[1], "tone amplitude")?,
                phase_rad: parts.get(2).map_or(Ok(0.0), |p| parse_f64(p, "tone phase"))?,
            })
        })
        .collect()
}

pub fn parse_impulses(text: &str) -> Result<Vec<Impulse>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let parts: Vec<&str> = item.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::param(format!("impulse '{item}' is not position:amp:decay")));
            }
            Ok(Impulse {
                position: parts[0]
                    .trim()
                    .parse()
                    .map_err(|_| Error::param(format!("invalid impulse position '{}'", parts[0])))?,
                amplitude: parse_f64(parts[1], "impulse amplitude")?,
                decay_per_sample: parse_f64(parts[2], "impulse decay")?,
            })
        })
        .collect()
}

impl SynthFlags {
    fn merge(&mut self, cfg: &ConfigFile) -> Result<()> {
        cfg.fill(&mut self.tones, "tones")?;
        cfg.fill(&mut self.fs, "fs")?;
        cfg.fill(&mut self.len, "len")?;
        cfg.fill(&mut self.noise_db, "noise-db")?;
        cfg.fill(&mut self.impulses, "impulses")?;
        cfg.fill(&mut self.synth_seed, "synth-seed")
    }

    fn is_set(&self) -> bool {
        self.tones.is_some() || self.len.is_some() || self.noise_db.is_some() || self.impulses.is_some()
    }

    pub fn to_spec(&self) -> Result<SynthSpec> {
        let mut spec = SynthSpec::new(require(self.len, "len")?, require(self.fs, "fs")?);
        if let Some(t) = &self.tones {
            spec.tones = parse_tones(t)?;
        }
        if let Some(i) = &self.impulses {
            spec.impulses = parse_impulses(i)?;
        }
        spec.noise_db = self.noise_db.unwrap_or(f64::NEG_INFINITY);
        spec.seed = self.synth_seed.unwrap_or(0);
        Ok(spec)
    }
}

impl InputArgs {
    fn merge(&mut self, cfg: &ConfigFile) -> Result<()> {
        cfg.fill(&mut self.input, "input")?;
        cfg.fill(&mut self.format, "format")?;
        cfg.fill(&mut self.sample_rate, "sample-rate")?;
        cfg.fill(&mut self.channel, "channel")
    }

    fn read(&self) -> Result<Signal> {
        let path = require(self.input.as_ref(), "input")?;
        read_input(path, self.format.as_deref(), self.sample_rate, self.channel.unwrap_or(0))
    }
}

fn read_input(path: &Path, format: Option<&str>, rate: Option<f64>, channel: usize) -> Result<Signal> {
    let format = match format {
        Some(f) => f.parse()?,
        None => SignalFormat::from_path(path),
    };
    let signal = io::read_signal_channel(path, format, rate, channel)?;
    if signal.is_empty() {
        eprintln!("warning: {} contains no samples", path.display());
    }
    Ok(signal)
}

impl OmpArgs {
    fn merge(&mut self, cfg: &ConfigFile) -> Result<()> {
        cfg.fill(&mut self.omp_max_atoms, "omp-max-atoms")?;
        cfg.fill(&mut self.omp_tol, "omp-tol")?;
        cfg.fill(&mut self.omp_min_improvement, "omp-min-improvement")
    }

    pub fn to_config(&self) -> OmpConfig {
        let defaults = OmpConfig::default();
        OmpConfig {
            max_atoms: self.omp_max_atoms.map_or(MaxAtoms::Auto, MaxAtoms::Fixed),
            residual_tol_rel: self.omp_tol.unwrap_or(defaults.residual_tol_rel),
            min_improvement_rel: self.omp_min_improvement.unwrap_or(defaults.min_improvement_rel),
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Run a parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let exec = if cli.sequential || cfg.flag("sequential")? {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match cli.command {
        Command::Compress(mut a) => {
            a.input.merge(&cfg)?;
            cfg.fill(&mut a.basis, "basis")?;
            cfg.fill(&mut a.matrix, "matrix")?;
            cfg.fill(&mut a.cr, "cr")?;
            cfg.fill(&mut a.seed, "seed")?;
            cfg.fill(&mut a.n, "n")?;
            cfg.fill(&mut a.out, "out")?;
            cmd_compress(&a)
        }
        Command::Reconstruct(mut a) => {
            cfg.fill(&mut a.input, "input")?;
            cfg.fill(&mut a.out, "out")?;
            a.omp.merge(&cfg)?;
            cmd_reconstruct(&a, exec)
        }
        Command::Evaluate(mut a) => {
            cfg.fill(&mut a.original, "original")?;
            cfg.fill(&mut a.reconstructed, "reconstructed")?;
            cfg.fill(&mut a.format, "format")?;
            cfg.fill(&mut a.channel, "channel")?;
            cfg.fill(&mut a.n, "n")?;
            cfg.fill(&mut a.out, "out")?;
            cmd_evaluate(&a)
        }
        Command::Sweep(mut a) => {
            a.input.merge(&cfg)?;
            a.synth.merge(&cfg)?;
            a.omp.merge(&cfg)?;
            cfg.fill(&mut a.basis, "basis")?;
            cfg.fill(&mut a.matrix, "matrix")?;
            cfg.fill(&mut a.cr, "cr")?;
            cfg.fill(&mut a.seed, "seed")?;
            cfg.fill(&mut a.n, "n")?;
            cfg.fill(&mut a.out, "out")?;
            a.timing |= cfg.flag("timing")?;
            cmd_sweep(&a, exec)
        }
        Command::Coherence(mut a) => {
            cfg.fill(&mut a.basis, "basis")?;
            cfg.fill(&mut a.matrix, "matrix")?;
            cfg.fill(&mut a.n, "n")?;
            cfg.fill(&mut a.m, "m")?;
            cfg.fill(&mut a.cr, "cr")?;
            cfg.fill(&mut a.seed, "seed")?;
            cfg.fill(&mut a.out, "out")?;
            cmd_coherence(&a, exec)
        }
        Command::Sparsity(mut a) => {
            a.input.merge(&cfg)?;
            a.synth.merge(&cfg)?;
            cfg.fill(&mut a.basis, "basis")?;
            cfg.fill(&mut a.n, "n")?;
            cfg.fill(&mut a.threshold, "threshold")?;
            cfg.fill(&mut a.out, "out")?;
            cmd_sparsity(&a)
        }
        Command::Synth(mut a) => {
            a.synth.merge(&cfg)?;
            cfg.fill(&mut a.format, "format")?;
            cfg.fill(&mut a.out, "out")?;
            cmd_synth(&a)
        }
    }
}

pub fn cmd_compress(a: &CompressArgs) -> Result<()> {
    let signal = a.input.read()?;
    let params = CompressParams {
        basis: require(a.basis.as_deref(), "basis")?.parse()?,
        matrix: require(a.matrix.as_deref(), "matrix")?.parse()?,
        cr_percent: require(a.cr, "cr")?,
        seed: a.seed.unwrap_or(0),
        n: a.n.unwrap_or(io::DEFAULT_BLOCK_LEN),
    };
    let out = require(a.out.as_ref(), "out")?;
    let container = pipeline::compress(&signal, &params)?;
    io::write_container(out, &container)?;
    let m = container.matrix.m();
    println!(
        "m={m} n={} cr={}% segments={}",
        params.n,
        crate::metrics::compression_ratio(m, params.n)?,
        container.segments.len()
    );
    Ok(())
}

pub fn cmd_reconstruct(a: &ReconstructArgs, exec: Execution) -> Result<()> {
    let container = io::read_container(require(a.input.as_ref(), "input")?)?;
    let out = require(a.out.as_ref(), "out")?;
    let recon = pipeline::reconstruct(&container, &a.omp.to_config(), exec)?;
    io::write_signal_csv(out, &recon.signal)?;
    for (i, seg) in recon.segments.iter().enumerate() {
        println!(
            "segment {i}: iterations={} atoms={} residual={:.6e}{}",
            seg.iterations,
            seg.support_size,
            seg.residual_norm,
            if seg.degenerate { " degenerate" } else { "" }
        );
    }
    Ok(())
}

pub fn cmd_evaluate(a: &EvaluateArgs) -> Result<()> {
    let channel = a.channel.unwrap_or(0);
    let original = read_input(require(a.original.as_ref(), "original")?, a.format.as_deref(), None, channel)?;
    let recon = read_input(
        require(a.reconstructed.as_ref(), "reconstructed")?,
        a.format.as_deref(),
        None,
        channel,
    )?;
    let rows = pipeline::evaluate(&original.samples, &recon.samples, a.n)?;
    emit(a.out.as_deref(), &pipeline::evaluation_csv(&rows))
}

fn sweep_signal(input: &InputArgs, synth_flags: &SynthFlags) -> Result<Signal> {
    match (&input.input, synth_flags.is_set()) {
        (Some(_), false) => input.read(),
        (None, true) => synth::generate(&synth_flags.to_spec()?),
        (Some(_), true) => Err(Error::param("give either --input or synthetic-signal flags, not both")),
        (None, false) => Err(Error::param("--input or synthetic-signal flags are required")),
    }
}

pub fn cmd_sweep(a: &SweepArgs, exec: Execution) -> Result<()> {
    let signal = sweep_signal(&a.input, &a.synth)?;
    let cfg = SweepConfig {
        bases: parse_list(a.basis.as_deref().unwrap_or("dft"))?,
        matrices: parse_list(a.matrix.as_deref().unwrap_or("gaussian,bernoulli,wang"))?,
        cr_percents: require(a.cr.as_deref(), "cr")?
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| parse_f64(s, "CR"))
            .collect::<Result<_>>()?,
        seeds: parse_seeds(a.seed.as_deref().unwrap_or("0"))?,
        n: a.n.unwrap_or(io::DEFAULT_BLOCK_LEN),
        omp: a.omp.to_config(),
        timing: a.timing,
    };
    let rows = pipeline::sweep(&signal, &cfg, exec)?;
    emit(a.out.as_deref(), &pipeline::sweep_csv(&rows))
}

pub fn cmd_coherence(a: &CoherenceArgs, exec: Execution) -> Result<()> {
    let n = a.n.unwrap_or(io::DEFAULT_BLOCK_LEN);
    let m = match (a.m, a.cr) {
        (Some(m), _) => m,
        (None, Some(cr)) => pipeline::measurement_count(cr, n)?,
        (None, None) => return Err(Error::param("--m or --cr is required")),
    };
    let bases: Vec<BasisKind> = parse_list(a.basis.as_deref().unwrap_or("dct,dft"))?;
    let matrices: Vec<MatrixKind> = parse_list(a.matrix.as_deref().unwrap_or("gaussian,bernoulli,wang"))?;
    let seeds = parse_seeds(a.seed.as_deref().unwrap_or("0"))?;
    let rows = pipeline::coherence_study(&bases, &matrices, n, m, &seeds, exec)?;
    emit(a.out.as_deref(), &pipeline::coherence_csv(&rows))
}

pub fn cmd_sparsity(a: &SparsityArgs) -> Result<()> {
    let signal = sweep_signal(&a.input, &a.synth)?;
    let bases: Vec<BasisKind> = parse_list(a.basis.as_deref().unwrap_or("dct,dft,db2,db8"))?;
    let rows = pipeline::sparsity_study(
        &signal.samples,
        &bases,
        a.n.unwrap_or(io::DEFAULT_BLOCK_LEN),
        a.threshold.unwrap_or(0.01),
    )?;
    emit(a.out.as_deref(), &pipeline::sparsity_csv(&rows))
}

pub fn cmd_synth(a: &SynthArgs) -> Result<()> {
    let signal = synth::generate(&a.synth.to_spec()?)?;
    let out = require(a.out.as_ref(), "out")?;
    match a.format.as_deref().map(str::parse).transpose()?.unwrap_or(SignalFormat::Csv) {
        SignalFormat::Csv => io::write_signal_csv(out, &signal)?,
        f @ (SignalFormat::RawF32 | SignalFormat::RawF64) => io::write_signal_raw(out, &signal, f)?,
        SignalFormat::Wav => return Err(Error::param("synth writes csv or raw output")),
    }
    println!(
        "wrote {} samples at {} Hz to {}",
        signal.len(),
        signal.sample_rate_hz,
        out.display()
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let cfg = ConfigFile::parse("# comment\nbasis = dft\ncr=10 # trailing\n\n--omp_tol = 1e-4\n").unwrap();
        assert_eq!(cfg.get::<String>("basis").unwrap().as_deref(), Some("dft"));
        assert_eq!(cfg.get::<f64>("cr").unwrap(), Some(10.0));
        assert_eq!(cfg.get::<f64>("omp-tol").unwrap(), Some(1e-4));
        assert!(cfg.get::<f64>("basis").is_err());
        assert!(matches!(ConfigFile::parse("oops"), Err(Error::Parse { line: 1, .. })));

        let mut slot = Some(5.0);
        cfg.fill(&mut slot, "cr").unwrap();
        assert_eq!(slot, Some(5.0));
    }

    #[test]
    fn list_parsing() {
        assert_eq!(parse_seeds("0..3").unwrap(), vec![0, 1, 2]);
        assert_eq!(parse_seeds("4, 9").unwrap(), vec![4, 9]);
        assert!(parse_seeds("3..3").is_err());
        let tones = parse_tones("330:1:0,346:0.5").unwrap();
        assert_eq!(tones.len(), 2);
        assert_eq!(tones[1].amplitude, 0.5);
        assert_eq!(tones[1].phase_rad, 0.0);
        assert!(parse_tones("330").is_err());
        let imps = parse_impulses("10:5:0.3").unwrap();
        assert_eq!(imps[0].position, 10);
        let bases: Vec<BasisKind> = parse_list("dct,DFT").unwrap();
        assert_eq!(bases, vec![BasisKind::Dct, BasisKind::Dft]);
    }

    #[test]
    fn command_line_parses() {
        let cli = Cli::try_parse_from([
            "vibcs", "sweep", "--tones", "330:1:0", "--fs", "20000", "--len", "4096", "--noise-db", "-30",
            "--cr", "3,10", "--seed", "0..2",
        ])
        .unwrap();
        match cli.command {
            Command::Sweep(a) => {
                assert_eq!(a.synth.noise_db, Some(-30.0));
                assert_eq!(a.cr.as_deref(), Some("3,10"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
