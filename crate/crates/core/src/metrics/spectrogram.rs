use std::fmt::Write as _;

use rustfft::{num_complex::Complex, FftPlanner};

use crate::audio::AudioBuffer;
use crate::error::{invalid, Result};
use crate::framing::frame_signal;

/// Short-time DFT magnitudes: `magnitudes[bin][frame]`, bins spanning `[0, fs/2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    pub times: Vec<f64>,
    pub freqs: Vec<f64>,
    pub magnitudes: Vec<Vec<f64>>,
}

impl Spectrogram {
    /// Header row of frame start times, first column of bin frequencies.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("freq_hz");
        for t in &self.times {
            let _ = write!(out, ",{t}");
        }
        out.push('\n');
        for (f, row) in self.freqs.iter().zip(&self.magnitudes) {
            let _ = write!(out, "{f}");
            for m in row {
                let _ = write!(out, ",{m}");
            }
            out.push('\n');
        }
        out
    }

    pub fn column(&self, frame: usize) -> Vec<f64> {
        self.magnitudes.iter().map(|row| row[frame]).collect()
    }
}

/// Hamming-windowed STFT magnitude of `buf`.
pub fn spectrogram(buf: &AudioBuffer, frame_len: usize, hop: usize) -> Result<Spectrogram> {
    if frame_len < 2 || !frame_len.is_power_of_two() {
        return invalid(format!("spectrogram frame length {frame_len} is not a power of two"));
    }
    let frames = frame_signal(buf, frame_len, hop)?;
    let fft = FftPlanner::new().plan_fft_forward(frame_len);
    let bins = frame_len / 2 + 1;
    let mut magnitudes = vec![Vec::with_capacity(frames.len()); bins];
    let mut scratch = vec![Complex::new(0.0, 0.0); frame_len];
    for frame in frames.frames() {
        for (s, &x) in scratch.iter_mut().zip(frame) {
            *s = Complex::new(x, 0.0);
        }
        fft.process(&mut scratch);
        for (row, c) in magnitudes.iter_mut().zip(&scratch) {
            row.push(c.norm());
        }
    }
    let fs = buf.sample_rate() as f64;
    Ok(Spectrogram {
        times: (0..frames.len()).map(|i| (i * hop) as f64 / fs).collect(),
        freqs: (0..bins).map(|k| k as f64 * fs / frame_len as f64).collect(),
        magnitudes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framing::make_window;

    #[test]
    fn tone_peak_bin() {
        let x: Vec<f64> = (0..4000)
            .map(|n| (2.0 * std::f64::consts::PI * 1000.0 * n as f64 / 8000.0).sin())
            .collect();
        let s = spectrogram(&AudioBuffer::new(x, 8000).unwrap(), 256, 128).unwrap();
        assert_eq!(s.freqs.len(), 129);
        for f in 0..s.times.len() - 2 {
            let col = s.column(f);
            let peak = (0..col.len()).max_by(|&a, &b| col[a].total_cmp(&col[b])).unwrap();
            assert_eq!(peak, 32);
        }
    }

    #[test]
    fn zero_signal() {
        let s = spectrogram(&AudioBuffer::silence(1000, 8000).unwrap(), 128, 64).unwrap();
        assert!(s.magnitudes.iter().flatten().all(|&m| m == 0.0));
        assert!(spectrogram(&AudioBuffer::silence(1000, 8000).unwrap(), 100, 50).is_err());
    }

    #[test]
    fn parseval_per_column() {
        let x: Vec<f64> = (0..2048).map(|n| ((n * n) as f64 * 1e-3).sin() + 0.1).collect();
        let buf = AudioBuffer::new(x.clone(), 8000).unwrap();
        let s = spectrogram(&buf, 256, 128).unwrap();
        let w = make_window(256).unwrap();
        for f in 0..s.times.len() {
            let col = s.column(f);
            let onesided: f64 = col
                .iter()
                .enumerate()
                .map(|(k, m)| if k == 0 || k == 128 { m * m } else { 2.0 * m * m })
                .sum();
            let start = f * 128;
            let direct: f64 = (0..256)
                .map(|n| x.get(start + n).copied().unwrap_or(0.0) * w[n])
                .map(|v| v * v)
                .sum();
            assert!((onesided / 256.0 - direct).abs() < 1e-6 * direct.max(1.0));
        }
    }

    #[test]
    fn csv_layout() {
        let s = spectrogram(&AudioBuffer::silence(512, 8000).unwrap(), 256, 256).unwrap();
        let csv = s.to_csv();
        let first = csv.lines().next().unwrap();
        assert_eq!(first, "freq_hz,0,0.032");
        assert_eq!(csv.lines().count(), 1 + 129);
    }
}
