//! Noise mixing and objective quality measures.

mod mix;
mod segsnr;
mod spectrogram;
mod wss;

pub use mix::{measured_snr_db, mix_at_snr, MixedSignal};
pub use segsnr::{
    segsnr, segsnr_frames, segsnr_improvement, SEGSNR_CEIL_DB, SEGSNR_DEFAULT_FRAME, SEGSNR_FLOOR_DB,
};
pub use spectrogram::{spectrogram, Spectrogram};
pub use wss::{wss, wss_with_frame_len};

use crate::audio::AudioBuffer;
use crate::error::Result;

/// Segmental SNR before and after enhancement, plus weighted spectral slope.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub snr_seg_noisy: f64,
    pub snr_seg_enhanced: f64,
    pub snr_seg_improvement: f64,
    pub wss: f64,
    /// Clamped per-frame `(noisy, enhanced)` SNRs; `None` for skipped silent frames.
    pub per_frame: Option<Vec<Option<(f64, f64)>>>,
}

impl MetricsReport {
    pub fn compute(
        clean: &AudioBuffer,
        noisy: &AudioBuffer,
        enhanced: &AudioBuffer,
        frame_len: usize,
        with_frames: bool,
    ) -> Result<Self> {
        let snr_seg_noisy = segsnr(clean, noisy, frame_len)?;
        let snr_seg_enhanced = segsnr(clean, enhanced, frame_len)?;
        let per_frame = if with_frames {
            let a = segsnr_frames(clean, noisy, frame_len)?;
            let b = segsnr_frames(clean, enhanced, frame_len)?;
            Some(a.into_iter().zip(b).map(|(x, y)| x.zip(y)).collect())
        } else {
            None
        };
        Ok(Self {
            snr_seg_noisy,
            snr_seg_enhanced,
            snr_seg_improvement: snr_seg_enhanced - snr_seg_noisy,
            wss: wss(clean, enhanced)?,
            per_frame,
        })
    }
}
