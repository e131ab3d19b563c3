//! Signal sources: WAV paths or `gen:` generator specs.
//!
//! Clean inputs accept `gen:vowel`, `gen:chirp` or `gen:silence`, optionally
//! followed by `:SECONDS` (default 2). Noise inputs also accept `gen:white`,
//! which draws seeded white noise matching the clean signal's length and
//! rate. A noise file longer than the clean signal is truncated.

use std::path::PathBuf;

use tepwp::synth::{gen_test_signal, white_noise, SignalKind};
use tepwp::AudioBuffer;

use crate::error::{CliError, CliResult};
use crate::wav::read_wav;

pub const GEN_SAMPLE_RATE: u32 = 8000;
pub const GEN_SECONDS: f64 = 2.0;
pub const GEN_SEED: u64 = 0;
pub const WHITE_STD: f64 = 0.1;
pub const WHITE_SEED: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    File(PathBuf),
    Signal { kind: SignalKind, seconds: f64 },
    White,
}

impl Source {
    pub fn parse(spec: &str) -> CliResult<Self> {
        let Some(rest) = spec.strip_prefix("gen:") else {
            return Ok(Self::File(PathBuf::from(spec)));
        };
        let (name, seconds) = match rest.split_once(':') {
            Some((n, s)) => {
                let secs = s
                    .parse::<f64>()
                    .ok()
                    .filter(|v| *v > 0.0 && v.is_finite())
                    .ok_or_else(|| CliError::format(format!("bad duration in `{spec}`")))?;
                (n, secs)
            }
            None => (rest, GEN_SECONDS),
        };
        if name == "white" {
            return Ok(Self::White);
        }
        let kind = name.parse().map_err(|_| CliError::format(format!("unknown generator `{spec}`")))?;
        Ok(Self::Signal { kind, seconds })
    }

    pub fn load(&self) -> CliResult<AudioBuffer> {
        match self {
            Self::File(p) => read_wav(p),
            Self::Signal { kind, seconds } => Ok(gen_test_signal(*kind, *seconds, GEN_SAMPLE_RATE, GEN_SEED)?),
            Self::White => Err(CliError::format("`gen:white` is only valid as a noise source")),
        }
    }

    /// Noise for mixing into `clean`: same rate, same length.
    pub fn load_noise(&self, clean: &AudioBuffer) -> CliResult<AudioBuffer> {
        let noise = match self {
            Self::White => {
                let secs = clean.len() as f64 / clean.sample_rate() as f64;
                white_noise(secs, clean.sample_rate(), WHITE_STD, WHITE_SEED)?
            }
            other => other.load()?,
        };
        if noise.sample_rate() != clean.sample_rate() {
            return Err(CliError::format(format!(
                "noise is {} Hz, signal is {} Hz",
                noise.sample_rate(),
                clean.sample_rate()
            )));
        }
        if noise.len() < clean.len() {
            return Err(CliError::format(format!(
                "noise has {} samples, signal needs {}",
                noise.len(),
                clean.len()
            )));
        }
        let mut s = noise.into_samples();
        s.truncate(clean.len());
        Ok(AudioBuffer::new(s, clean.sample_rate())?)
    }
}
