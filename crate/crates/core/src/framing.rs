//! Frame segmentation, analysis windowing and overlap-add synthesis.
//!
//! The analysis window is applied once. Synthesis sums the (possibly
//! modified) frames and divides each output sample by the sum of the window
//! weights that covered it, so an unmodified round trip is exact everywhere,
//! including the partially covered edges.

use std::f64::consts::PI;

use crate::audio::AudioBuffer;
use crate::error::{invalid, Result};

/// Constant overlap-add sum of a periodic Hamming window at 50% overlap.
pub const HAMMING_COLA_SUM: f64 = 1.08;

/// Periodic (DFT-even) Hamming window: `0.54 - 0.46 cos(2 pi n / N)`.
pub fn make_window(frame_len: usize) -> Result<Vec<f64>> {
    if frame_len < 2 {
        return invalid(format!("window length must be at least 2, got {frame_len}"));
    }
    let n = frame_len as f64;
    Ok((0..frame_len)
        .map(|i| 0.54 - 0.46 * (2.0 * PI * i as f64 / n).cos())
        .collect())
}

/// All-ones window, for tests and for callers that window elsewhere.
pub fn rectangular_window(frame_len: usize) -> Vec<f64> {
    vec![1.0; frame_len]
}

/// Equal-length windowed frames cut from one signal.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSequence {
    frames: Vec<Vec<f64>>,
    frame_len: usize,
    hop: usize,
    window: Vec<f64>,
}

impl FrameSequence {
    /// Assembles a sequence from already-computed frames, checking the geometry.
    pub fn from_parts(
        frames: Vec<Vec<f64>>,
        frame_len: usize,
        hop: usize,
        window: Vec<f64>,
    ) -> Result<Self> {
        check_geometry(frame_len, hop, &window)?;
        if let Some(i) = frames.iter().position(|f| f.len() != frame_len) {
            return invalid(format!(
                "frame {i} has {} samples, expected {frame_len}",
                frames[i].len()
            ));
        }
        Ok(Self { frames, frame_len, hop, window })
    }

    pub fn frames(&self) -> &[Vec<f64>] {
        &self.frames
    }

    /// Mutable access for in-place processing; frame lengths must be preserved.
    pub fn frames_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.frames
    }

    pub fn frame_len(&self) -> usize {
        self.frame_len
    }

    pub fn hop(&self) -> usize {
        self.hop
    }

    pub fn window(&self) -> &[f64] {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Replaces the frames, keeping geometry. Used to carry processed frames to synthesis.
    pub fn with_frames(&self, frames: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_parts(frames, self.frame_len, self.hop, self.window.clone())
    }
}

fn check_geometry(frame_len: usize, hop: usize, window: &[f64]) -> Result<()> {
    if hop == 0 || hop > frame_len {
        return invalid(format!("hop {hop} must satisfy 0 < hop <= frame_len ({frame_len})"));
    }
    if window.len() != frame_len {
        return invalid(format!(
            "window has {} weights, expected {frame_len}",
            window.len()
        ));
    }
    if window.iter().any(|&w| !(w > 0.0 && w <= HAMMING_COLA_SUM)) {
        return invalid("window weights must lie in (0, 1.08]");
    }
    Ok(())
}

/// Cuts `buf` into Hamming-windowed frames of `frame_len` samples every `hop` samples.
pub fn frame_signal(buf: &AudioBuffer, frame_len: usize, hop: usize) -> Result<FrameSequence> {
    let window = make_window(frame_len)?;
    frame_signal_with_window(buf.samples(), frame_len, hop, window)
}

/// Frames `samples` with an explicit window.
///
/// Frame `i` covers `[i*hop, i*hop + frame_len)`; the tail is zero-padded and
/// there are `ceil(len / hop)` frames.
pub fn frame_signal_with_window(
    samples: &[f64],
    frame_len: usize,
    hop: usize,
    window: Vec<f64>,
) -> Result<FrameSequence> {
    if samples.is_empty() {
        return invalid("cannot frame an empty signal");
    }
    check_geometry(frame_len, hop, &window)?;
    let count = samples.len().div_ceil(hop);
    let frames = (0..count)
        .map(|i| {
            let start = i * hop;
            let mut frame = vec![0.0; frame_len];
            let end = (start + frame_len).min(samples.len());
            for (j, (out, &s)) in frame.iter_mut().zip(&samples[start..end]).enumerate() {
                *out = s * window[j];
            }
            frame
        })
        .collect();
    Ok(FrameSequence { frames, frame_len, hop, window })
}

/// Per-sample sum of the analysis windows covering each output position.
pub fn window_overlap_sum(frames: &FrameSequence, len: usize) -> Vec<f64> {
    let mut sum = vec![0.0; len];
    for i in 0..frames.len() {
        let start = i * frames.hop;
        for (j, &w) in frames.window.iter().enumerate() {
            if let Some(s) = sum.get_mut(start + j) {
                *s += w;
            }
        }
    }
    sum
}

/// Overlap-adds `frames` and normalizes by the window overlap sum.
///
/// The result is truncated to `original_len` samples, which must not exceed
/// the span covered by the frames.
pub fn overlap_add(frames: &FrameSequence, original_len: usize) -> Result<Vec<f64>> {
    check_geometry(frames.frame_len, frames.hop, &frames.window)?;
    if let Some(i) = frames.frames.iter().position(|f| f.len() != frames.frame_len) {
        return invalid(format!("frame {i} does not have frame_len samples"));
    }
    let span = match frames.len() {
        0 => 0,
        n => (n - 1) * frames.hop + frames.frame_len,
    };
    if original_len > span {
        return invalid(format!(
            "frames cover {span} samples but {original_len} were requested"
        ));
    }
    let mut out = vec![0.0; span];
    for (i, frame) in frames.frames.iter().enumerate() {
        let start = i * frames.hop;
        for (o, &v) in out[start..start + frames.frame_len].iter_mut().zip(frame) {
            *o += v;
        }
    }
    let norm = window_overlap_sum(frames, span);
    out.truncate(original_len);
    for (o, &w) in out.iter_mut().zip(&norm) {
        *o /= w;
    }
    Ok(out)
}

/// Convenience wrapper returning an [`AudioBuffer`].
pub fn overlap_add_buffer(
    frames: &FrameSequence,
    original_len: usize,
    sample_rate: u32,
) -> Result<AudioBuffer> {
    AudioBuffer::new(overlap_add(frames, original_len)?, sample_rate)
}
