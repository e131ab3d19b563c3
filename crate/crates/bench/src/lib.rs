//! Shared fixtures for the criterion benchmarks.

use tepwp::synth::{white_noise, SignalKind};
use tepwp::AudioBuffer;

pub const SAMPLE_RATE: u32 = 8000;

/// A deterministic frame of white noise.
pub fn noise_frame(len: usize, seed: u64) -> Vec<f64> {
    white_noise(len as f64 / SAMPLE_RATE as f64, SAMPLE_RATE, 0.1, seed)
        .expect("valid noise parameters")
        .into_samples()
}

/// Synthetic vowel with additive white noise at 5 dB SNR, plus the scaled noise.
pub fn noisy_vowel(seconds: f64) -> (AudioBuffer, AudioBuffer, AudioBuffer) {
    let clean = tepwp::synth::gen_test_signal(SignalKind::Vowel, seconds, SAMPLE_RATE, 1)
        .expect("valid vowel parameters");
    let noise = white_noise(seconds, SAMPLE_RATE, 0.1, 2).expect("valid noise parameters");
    let mix = tepwp::metrics::mix_at_snr(&clean, &noise, 5.0).expect("nonzero power inputs");
    (clean, mix.noisy, mix.scaled_noise)
}
