//! Deterministic synthetic test signals.
//!
//! These stand in for recorded speech corpora in tests and demos: a
//! harmonic "vowel" with formant shaping and slow amplitude modulation, a
//! linear chirp, silence, and seeded white Gaussian noise.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::audio::AudioBuffer;
use crate::error::{invalid, Result};

pub const VOWEL_F0: f64 = 120.0;
const VOWEL_PEAK: f64 = 0.9;
// (centre Hz, bandwidth Hz, gain) of an /a/-like formant pattern
const FORMANTS: [(f64, f64, f64); 3] = [(700.0, 90.0, 1.0), (1220.0, 110.0, 0.6), (2600.0, 160.0, 0.3)];
const AM_RATE: f64 = 1.5;
const CHIRP_START: f64 = 100.0;
const CHIRP_END: f64 = 3500.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignalKind {
    Vowel,
    Chirp,
    Silence,
}

impl std::str::FromStr for SignalKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vowel" => Ok(Self::Vowel),
            "chirp" => Ok(Self::Chirp),
            "silence" => Ok(Self::Silence),
            other => invalid(format!("unknown signal kind `{other}`")),
        }
    }
}

fn sample_count(duration: f64, sample_rate: u32) -> Result<usize> {
    if !(duration > 0.0 && duration.is_finite()) {
        return invalid(format!("duration must be positive, got {duration}"));
    }
    if sample_rate == 0 {
        return invalid("sample rate must be positive");
    }
    Ok((duration * sample_rate as f64).round().max(1.0) as usize)
}

fn harmonic_gain(f: f64, h: usize) -> f64 {
    let resonance: f64 = FORMANTS
        .iter()
        .map(|&(fc, bw, g)| g / (1.0 + ((f - fc) / bw).powi(2)))
        .sum();
    (1.0 + resonance) / h as f64
}

pub fn gen_test_signal(
    kind: SignalKind,
    duration: f64,
    sample_rate: u32,
    seed: u64,
) -> Result<AudioBuffer> {
    let n = sample_count(duration, sample_rate)?;
    let fs = sample_rate as f64;
    let samples = match kind {
        SignalKind::Silence => vec![0.0; n],
        SignalKind::Chirp => {
            let span = n as f64 / fs;
            let end = CHIRP_END.min(0.45 * fs);
            (0..n)
                .map(|i| {
                    let t = i as f64 / fs;
                    let phase = CHIRP_START * t + (end - CHIRP_START) * t * t / (2.0 * span);
                    0.5 * (2.0 * PI * phase).sin()
                })
                .collect()
        }
        SignalKind::Vowel => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let harmonics: Vec<(f64, f64, f64)> = (1..)
                .map(|h| (h, VOWEL_F0 * h as f64))
                .take_while(|&(_, f)| f < 0.475 * fs)
                .map(|(h, f)| (f, harmonic_gain(f, h), rng.random_range(0.0..2.0 * PI)))
                .collect();
            let mut x: Vec<f64> = (0..n)
                .map(|i| {
                    let t = i as f64 / fs;
                    let env = 0.2 + 0.8 * (PI * AM_RATE * t).sin().powi(2);
                    env * harmonics
                        .iter()
                        .map(|&(f, a, ph)| a * (2.0 * PI * f * t + ph).cos())
                        .sum::<f64>()
                })
                .collect();
            let peak = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if peak > 0.0 {
                x.iter_mut().for_each(|v| *v *= VOWEL_PEAK / peak);
            }
            x
        }
    };
    AudioBuffer::new(samples, sample_rate)
}

/// Zero-mean white Gaussian noise with standard deviation `std_dev`.
pub fn white_noise(duration: f64, sample_rate: u32, std_dev: f64, seed: u64) -> Result<AudioBuffer> {
    let n = sample_count(duration, sample_rate)?;
    let normal = match Normal::new(0.0, std_dev) {
        Ok(d) if std_dev >= 0.0 => d,
        _ => return invalid(format!("invalid noise standard deviation {std_dev}")),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    AudioBuffer::new((0..n).map(|_| normal.sample(&mut rng)).collect(), sample_rate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rustfft::{num_complex::Complex, FftPlanner};

    #[test]
    fn silence_is_zero() {
        let s = gen_test_signal(SignalKind::Silence, 0.5, 8000, 0).unwrap();
        assert_eq!(s.len(), 4000);
        assert!(s.samples().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn vowel_length_and_peak() {
        let v = gen_test_signal(SignalKind::Vowel, 1.0, 8000, 3).unwrap();
        assert_eq!(v.len(), 8000);
        assert!(v.samples().iter().all(|s| s.abs() <= 1.0));
    }

    #[test]
    fn vowel_fundamental_dominates() {
        let v = gen_test_signal(SignalKind::Vowel, 1.0, 8000, 3).unwrap();
        let mut buf: Vec<Complex<f64>> = v.samples().iter().map(|&s| Complex::new(s, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
        let peak = (1..4000).max_by(|&a, &b| buf[a].norm().total_cmp(&buf[b].norm())).unwrap();
        // 1 Hz bins for a 1 s signal
        assert!((119..=121).contains(&peak), "{peak}");
    }

    #[test]
    fn deterministic() {
        let a = gen_test_signal(SignalKind::Vowel, 0.25, 8000, 9).unwrap();
        let b = gen_test_signal(SignalKind::Vowel, 0.25, 8000, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(white_noise(0.1, 8000, 0.1, 4).unwrap(), white_noise(0.1, 8000, 0.1, 4).unwrap());
        assert_ne!(white_noise(0.1, 8000, 0.1, 4).unwrap(), white_noise(0.1, 8000, 0.1, 5).unwrap());
    }

    #[test]
    fn chirp_bounded() {
        let c = gen_test_signal(SignalKind::Chirp, 0.5, 8000, 0).unwrap();
        assert!(c.samples().iter().all(|s| s.abs() <= 0.5));
    }

    #[test]
    fn bad_duration() {
        assert!(gen_test_signal(SignalKind::Vowel, 0.0, 8000, 0).is_err());
        assert!(gen_test_signal(SignalKind::Vowel, 1.0, 0, 0).is_err());
        assert!(white_noise(1.0, 8000, -1.0, 0).is_err());
    }
}
