use crate::audio::AudioBuffer;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MixedSignal {
    pub noisy: AudioBuffer,
    /// The noise exactly as added, for oracle noise estimation.
    pub scaled_noise: AudioBuffer,
    pub gain: f64,
}

/// Adds `noise` to `clean`, scaled so the mixture has the requested SNR.
pub fn mix_at_snr(clean: &AudioBuffer, noise: &AudioBuffer, snr_db: f64) -> Result<MixedSignal> {
    clean.check_compatible(noise)?;
    let (pc, pn) = (clean.power(), noise.power());
    if !(pc > 0.0) || !(pn > 0.0) {
        return invalid("mixing needs clean and noise signals with positive power");
    }
    if !snr_db.is_finite() {
        return invalid("target SNR must be finite");
    }
    let gain = (pc / (pn * 10f64.powf(snr_db / 10.0))).sqrt();
    let scaled: Vec<f64> = noise.samples().iter().map(|n| gain * n).collect();
    let noisy: Vec<f64> = clean.samples().iter().zip(&scaled).map(|(c, n)| c + n).collect();
    Ok(MixedSignal {
        noisy: AudioBuffer::new(noisy, clean.sample_rate())?,
        scaled_noise: AudioBuffer::new(scaled, clean.sample_rate())?,
        gain,
    })
}

/// Global SNR in dB of `clean` against the difference `noisy - clean`.
pub fn measured_snr_db(clean: &AudioBuffer, noisy: &AudioBuffer) -> Result<f64> {
    clean.check_compatible(noisy)?;
    let err: f64 = clean
        .samples()
        .iter()
        .zip(noisy.samples())
        .map(|(c, n)| (n - c).powi(2))
        .sum();
    Ok(10.0 * (clean.energy() / err).log10())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{gen_test_signal, white_noise, SignalKind};

    fn alt(len: usize, amp: f64) -> AudioBuffer {
        AudioBuffer::new((0..len).map(|i| if i % 2 == 0 { amp } else { -amp }).collect(), 8000).unwrap()
    }

    #[test]
    fn gains() {
        let c = alt(100, 0.5);
        let n = AudioBuffer::new(vec![0.5; 100], 8000).unwrap();
        assert!((mix_at_snr(&c, &n, 0.0).unwrap().gain - 1.0).abs() < 1e-15);
        assert!((mix_at_snr(&c, &n, 20.0).unwrap().gain - 0.1).abs() < 1e-15);
    }

    #[test]
    fn requested_snr_is_met() {
        let c = gen_test_signal(SignalKind::Vowel, 0.5, 8000, 1).unwrap();
        let n = white_noise(0.5, 8000, 0.3, 2).unwrap();
        for db in -15..=15 {
            let m = mix_at_snr(&c, &n, db as f64).unwrap();
            let got = measured_snr_db(&c, &m.noisy).unwrap();
            assert!((got - db as f64).abs() < 1e-9, "{db}: {got}");
        }
    }

    #[test]
    fn rejects_silence_and_mismatch() {
        let c = alt(100, 0.5);
        assert!(mix_at_snr(&c, &AudioBuffer::silence(100, 8000).unwrap(), 0.0).is_err());
        assert!(mix_at_snr(&AudioBuffer::silence(100, 8000).unwrap(), &c, 0.0).is_err());
        assert!(mix_at_snr(&c, &alt(99, 0.5), 0.0).is_err());
    }
}
