use crate::audio::AudioBuffer;
use crate::error::{invalid, Error, Result};

pub const SEGSNR_FLOOR_DB: f64 = -10.0;
pub const SEGSNR_CEIL_DB: f64 = 35.0;
/// 32 ms at 8 kHz.
pub const SEGSNR_DEFAULT_FRAME: usize = 256;
const SILENT_FRAME_ENERGY: f64 = 1e-12;

/// Clamped SNR of every full non-overlapping frame; `None` where the clean frame is silent.
pub fn segsnr_frames(
    clean: &AudioBuffer,
    processed: &AudioBuffer,
    frame_len: usize,
) -> Result<Vec<Option<f64>>> {
    clean.check_compatible(processed)?;
    if frame_len < 16 {
        return invalid(format!("segmental SNR frame must be at least 16 samples, got {frame_len}"));
    }
    Ok(clean
        .samples()
        .chunks_exact(frame_len)
        .zip(processed.samples().chunks_exact(frame_len))
        .map(|(c, p)| {
            let signal: f64 = c.iter().map(|v| v * v).sum();
            if signal < SILENT_FRAME_ENERGY {
                return None;
            }
            let err: f64 = c.iter().zip(p).map(|(a, b)| (a - b).powi(2)).sum();
            let db = if err > 0.0 { 10.0 * (signal / err).log10() } else { f64::INFINITY };
            Some(db.clamp(SEGSNR_FLOOR_DB, SEGSNR_CEIL_DB))
        })
        .collect())
}

/// Mean clamped per-frame SNR in dB over non-silent frames.
pub fn segsnr(clean: &AudioBuffer, processed: &AudioBuffer, frame_len: usize) -> Result<f64> {
    let frames = segsnr_frames(clean, processed, frame_len)?;
    let counted: Vec<f64> = frames.into_iter().flatten().collect();
    if counted.is_empty() {
        return Err(Error::UndefinedMetric(
            "segmental SNR: no non-silent clean frames".into(),
        ));
    }
    Ok(counted.iter().sum::<f64>() / counted.len() as f64)
}

/// `segsnr(clean, enhanced) - segsnr(clean, noisy)`.
pub fn segsnr_improvement(
    clean: &AudioBuffer,
    noisy: &AudioBuffer,
    enhanced: &AudioBuffer,
    frame_len: usize,
) -> Result<f64> {
    Ok(segsnr(clean, enhanced, frame_len)? - segsnr(clean, noisy, frame_len)?)
}
