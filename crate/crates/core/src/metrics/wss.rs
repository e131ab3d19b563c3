//! Weighted spectral slope distance.
//!
//! Each frame's power spectrum is pooled into 25 Gaussian-shaped critical
//! bands; the distance compares adjacent-band log-energy slopes of the clean
//! and processed signals, weighting each band by how close it is to the
//! frame's global spectral peak and to its nearest local peak (Klatt).

use rustfft::{num_complex::Complex, FftPlanner};

use crate::audio::AudioBuffer;
use crate::error::{invalid, Result};

const BANDS: usize = 25;
const CENTER_HZ: [f64; BANDS] = [
    50.0, 120.0, 190.0, 260.0, 330.0, 400.0, 470.0, 540.0, 617.372, 703.378, 798.717, 904.128,
    1020.38, 1148.30, 1288.72, 1442.54, 1610.70, 1794.16, 1993.93, 2211.08, 2446.71, 2701.97,
    2978.04, 3276.17, 3597.63,
];
const BANDWIDTH_HZ: [f64; BANDS] = [
    70.0, 70.0, 70.0, 70.0, 70.0, 70.0, 70.0, 77.3724, 86.0056, 95.3398, 105.411, 116.256,
    127.914, 140.423, 153.823, 168.154, 183.457, 199.776, 217.153, 235.631, 255.255, 276.072,
    298.126, 321.465, 346.136,
];
/// Global-peak weighting constant.
const K_MAX: f64 = 20.0;
/// Local-peak weighting constant.
const K_LOC_MAX: f64 = 1.0;
const ENERGY_FLOOR: f64 = 1e-10;
const FRAME_MS: f64 = 16.0;

struct CriticalBands {
    filters: Vec<Vec<f64>>,
}

impl CriticalBands {
    fn new(n_fft: usize, sample_rate: u32) -> Self {
        let half = n_fft / 2;
        let nyquist = sample_rate as f64 / 2.0;
        // response below -30 dB is cut to zero
        let min_factor = (-30.0 / (2.0 * 2.303f64)).exp();
        let filters = (0..BANDS)
            .map(|i| {
                let f0 = (CENTER_HZ[i] / nyquist * half as f64).floor();
                let bw = BANDWIDTH_HZ[i] / nyquist * half as f64;
                let norm = BANDWIDTH_HZ[0].ln() - BANDWIDTH_HZ[i].ln();
                (0..half)
                    .map(|j| {
                        let v = (-11.0 * (j as f64 - f0).powi(2) / (bw * bw) + norm).exp();
                        if v > min_factor {
                            v
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        Self { filters }
    }

    fn log_energies(&self, power: &[f64]) -> [f64; BANDS] {
        let mut out = [0.0; BANDS];
        for (o, f) in out.iter_mut().zip(&self.filters) {
            let e: f64 = f.iter().zip(power).map(|(w, p)| w * p).sum();
            *o = 10.0 * e.max(ENERGY_FLOOR).log10();
        }
        out
    }
}

fn slopes(e: &[f64; BANDS]) -> [f64; BANDS - 1] {
    let mut s = [0.0; BANDS - 1];
    for i in 0..BANDS - 1 {
        s[i] = e[i + 1] - e[i];
    }
    s
}

/// Klatt weights for the first `BANDS - 1` bands.
fn weights(e: &[f64; BANDS], s: &[f64; BANDS - 1]) -> [f64; BANDS - 1] {
    let global = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut w = [0.0; BANDS - 1];
    for i in 0..BANDS - 1 {
        // climb to the nearest local maximum
        let mut n = i;
        if s[i] > 0.0 {
            while n < BANDS - 1 && s[n] > 0.0 {
                n += 1;
            }
        } else {
            while n > 0 && s[n - 1] <= 0.0 {
                n -= 1;
            }
        }
        let local = e[n];
        w[i] = K_MAX / (K_MAX + global - e[i]) * K_LOC_MAX / (K_LOC_MAX + local - e[i]);
    }
    w
}

/// WSS with the default 16 ms frame.
pub fn wss(clean: &AudioBuffer, processed: &AudioBuffer) -> Result<f64> {
    let frame_len = (FRAME_MS * 1e-3 * clean.sample_rate() as f64).round() as usize;
    wss_with_frame_len(clean, processed, frame_len)
}

/// Mean per-frame weighted spectral slope distance. Lower is better.
///
/// Frames are Hann-windowed, hop a quarter frame, and zero-padded to the
/// next power of two at least twice the frame length.
pub fn wss_with_frame_len(clean: &AudioBuffer, processed: &AudioBuffer, frame_len: usize) -> Result<f64> {
    clean.check_compatible(processed)?;
    if frame_len < 8 {
        return invalid(format!("WSS frame of {frame_len} samples is too short"));
    }
    if clean.len() < frame_len {
        return invalid(format!(
            "signal of {} samples is shorter than one {frame_len}-sample WSS frame",
            clean.len()
        ));
    }
    let hop = frame_len / 4;
    let n_fft = (2 * frame_len).next_power_of_two();
    let bands = CriticalBands::new(n_fft, clean.sample_rate());
    let window: Vec<f64> = (1..=frame_len)
        .map(|i| 0.5 * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / (frame_len + 1) as f64).cos()))
        .collect();
    let fft = FftPlanner::new().plan_fft_forward(n_fft);
    let mut buf = vec![Complex::new(0.0, 0.0); n_fft];
    let mut spectrum = |frame: &[f64]| -> [f64; BANDS] {
        buf.iter_mut().for_each(|c| *c = Complex::new(0.0, 0.0));
        for ((b, &x), &w) in buf.iter_mut().zip(frame).zip(&window) {
            b.re = x * w;
        }
        fft.process(&mut buf);
        let power: Vec<f64> = buf[..n_fft / 2].iter().map(|c| c.norm_sqr()).collect();
        bands.log_energies(&power)
    };

    let (c, p) = (clean.samples(), processed.samples());
    let mut total = 0.0;
    let mut frames = 0usize;
    let mut start = 0;
    while start + frame_len <= c.len() {
        let ec = spectrum(&c[start..start + frame_len]);
        let ep = spectrum(&p[start..start + frame_len]);
        let (sc, sp) = (slopes(&ec), slopes(&ep));
        let (wc, wp) = (weights(&ec, &sc), weights(&ep, &sp));
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..BANDS - 1 {
            let w = 0.5 * (wc[i] + wp[i]);
            num += w * (sc[i] - sp[i]).powi(2);
            den += w;
        }
        total += num / den;
        frames += 1;
        start += hop;
    }
    Ok(total / frames as f64)
}
