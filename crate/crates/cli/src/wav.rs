//! 16-bit PCM mono WAV files. Samples map to `[-1, 1)` by a factor of 1/32768.

use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};
use tepwp::AudioBuffer;

use crate::error::{CliError, CliResult};

const SCALE: f64 = 32768.0;

fn hound_err(path: &Path, e: hound::Error) -> CliError {
    match e {
        hound::Error::IoError(io) => CliError::io(path, io),
        other => CliError::format(format!("{}: {other}", path.display())),
    }
}

pub fn read_wav(path: &Path) -> CliResult<AudioBuffer> {
    let reader = WavReader::open(path).map_err(|e| hound_err(path, e))?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(CliError::format(format!(
            "{}: expected mono, found {} channels",
            path.display(),
            spec.channels
        )));
    }
    if spec.sample_format != SampleFormat::Int || spec.bits_per_sample != 16 {
        return Err(CliError::format(format!(
            "{}: expected 16-bit PCM, found {} bit {:?}",
            path.display(),
            spec.bits_per_sample,
            spec.sample_format
        )));
    }
    let samples = reader
        .into_samples::<i16>()
        .map(|s| s.map(|v| v as f64 / SCALE))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| hound_err(path, e))?;
    Ok(AudioBuffer::new(samples, spec.sample_rate)?)
}

/// Quantizes to 16 bits, clipping anything outside the representable range.
pub fn quantize(x: f64) -> i16 {
    (x * SCALE).round().clamp(i16::MIN as f64, i16::MAX as f64) as i16
}

pub fn write_wav(path: &Path, buf: &AudioBuffer) -> CliResult<()> {
    let spec = WavSpec {
        channels: 1,
        sample_rate: buf.sample_rate(),
        bits_per_sample: 16,
        sample_format: SampleFormat::Int,
    };
    let mut w = WavWriter::create(path, spec).map_err(|e| hound_err(path, e))?;
    for &s in buf.samples() {
        w.write_sample(quantize(s)).map_err(|e| hound_err(path, e))?;
    }
    w.finalize().map_err(|e| hound_err(path, e))
}
