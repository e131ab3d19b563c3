use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use tepwp::noise::NoiseMode;
use tepwp::pipeline::enhance_signal;
use tepwp::synth::SignalKind;
use tepwp::threshold::ThresholdMapping;

use crate::analyze::cmd_analyze;
use crate::config::{Method, Overrides, RunConfig};
use crate::error::{CliError, CliResult, EXIT_FORMAT, EXIT_PARTIAL};
use crate::evaluate::{cmd_evaluate, Manifest};
use crate::source::{Source, GEN_SAMPLE_RATE, GEN_SECONDS, GEN_SEED};
use crate::wav::{read_wav, write_wav};

#[derive(Debug, Parser)]
#[command(name = "tepwp", version, about = "Wavelet packet speech enhancement")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enhance a 16-bit mono WAV file.
    Enhance {
        input: PathBuf,
        output: PathBuf,
        /// Known noise WAV, required with `--noise-mode oracle`.
        #[arg(long)]
        noise: Option<PathBuf>,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Score methods over clean inputs, noise types and SNRs.
    Evaluate {
        /// Clean inputs: WAV paths or gen:vowel, gen:chirp[:SECONDS].
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        clean: Vec<String>,
        /// Noise inputs: WAV paths or gen:white.
        #[arg(long, default_value = "gen:white", value_delimiter = ',')]
        noise: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "0,5,10", allow_hyphen_values = true)]
        snr: Vec<f64>,
        /// Methods to compare, comma separated.
        #[arg(long = "methods", value_delimiter = ',', default_value = "proposed")]
        methods: Vec<Method>,
        /// Segmental SNR frame length in samples.
        #[arg(long, default_value_t = tepwp::metrics::SEGSNR_DEFAULT_FRAME)]
        score_frame: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Export TE histograms, AIC table, threshold curve and spectrogram.
    Analyze {
        /// Clean input: WAV path or gen: spec.
        input: String,
        #[arg(long, default_value = "gen:white")]
        noise: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        snr: f64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Write a synthetic test signal as WAV.
    Gen {
        /// vowel, chirp or silence.
        kind: SignalKind,
        output: PathBuf,
        #[arg(long, default_value_t = GEN_SECONDS)]
        duration: f64,
        #[arg(long, default_value_t = GEN_SAMPLE_RATE)]
        rate: u32,
        #[arg(long, default_value_t = GEN_SEED)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CommonOpts {
    /// key = value config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Enhancement method (ignored by `evaluate`, which takes `--methods`).
    #[arg(long)]
    pub method: Option<Method>,
    #[arg(long)]
    pub noise_mode: Option<NoiseMode>,
    #[arg(long)]
    pub threshold_mapping: Option<ThresholdMapping>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
}

impl CommonOpts {
    pub fn run_config(&self) -> CliResult<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        cfg.apply(&Overrides {
            method: self.method,
            noise_mode: self.noise_mode,
            threshold_mapping: self.threshold_mapping,
            alpha: self.alpha,
            mu: self.mu,
        });
        Ok(cfg)
    }
}

pub fn cmd_enhance(input: &Path, output: &Path, noise: Option<&Path>, cfg: &RunConfig) -> CliResult<()> {
    let noisy = read_wav(input)?;
    let ecfg = cfg.resolve(noisy.sample_rate())?;
    let reference = match (ecfg.noise_mode, noise) {
        (NoiseMode::Oracle, Some(p)) => Some(read_wav(p)?),
        (NoiseMode::Oracle, None) => return Err(CliError::format("oracle noise mode needs --noise")),
        (NoiseMode::Tracking, _) => None,
    };
    let out = enhance_signal(&noisy, reference.as_ref(), &ecfg)?;
    write_wav(output, &out)
}

fn dispatch(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Enhance { input, output, noise, opts } => {
            cmd_enhance(&input, &output, noise.as_deref(), &opts.run_config()?)?;
        }
        Command::Evaluate { clean, noise, snr, methods, score_frame, out, opts } => {
            let mut m = Manifest::new(clean, noise, snr, methods, out);
            m.config = opts.run_config()?;
            m.score_frame = score_frame;
            let report = cmd_evaluate(&m)?;
            for row in report.rows.iter().filter(|r| r.outcome.is_err()) {
                if let Err(e) = &row.outcome {
                    eprintln!("{} / {} / {} dB / {}: {e}", row.clean, row.noise, row.snr_db, row.method);
                }
            }
            println!("wrote {}", report.path.display());
            if report.failures() > 0 {
                return Ok(EXIT_PARTIAL);
            }
        }
        Command::Analyze { input, noise, snr, out, opts } => {
            let clean = Source::parse(&input)?.load()?;
            let noise = Source::parse(&noise)?.load_noise(&clean)?;
            let cfg = opts.run_config()?.resolve(clean.sample_rate())?;
            let a = cmd_analyze(&clean, &noise, snr, &cfg, &out)?;
            println!("wrote analysis to {}", a.out_dir.display());
        }
        Command::Gen { kind, output, duration, rate, seed } => {
            let buf = tepwp::synth::gen_test_signal(kind, duration, rate, seed)?;
            write_wav(&output, &buf)?;
        }
    }
    Ok(0)
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_FORMAT } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
