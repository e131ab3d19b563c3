//! Frame-by-frame enhancement.
//!
//! Each windowed frame goes through the wavelet packet tree, the Teager
//! energy of every subband gives the noisy and noise levels, those set a
//! per-subband threshold, and the shrunk coefficients are inverted and
//! overlap-added.

use crate::audio::AudioBuffer;
use crate::error::{invalid, Result};
use crate::framing::{frame_signal, overlap_add, FrameSequence};
use crate::noise::{NoiseMode, NoiseTracker, TrackerParams};
use crate::pwpt::{db10_filters, default_tree, PerceptualTree, PwpTransform, SubbandFrame};
use crate::shrink::{shrink_in_place, ShrinkageKind, ShrinkageSpec};
use crate::teager::{teager, TeagerSubband};
use crate::threshold::{subband_snr, SubbandStats, ThresholdMapping, ThresholdPair, ThresholdRule};

pub const DEFAULT_FRAME_LEN: usize = 512;
pub const DEFAULT_HOP: usize = 256;
pub const DEFAULT_HISTOGRAM_BINS: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct EnhanceConfig {
    pub frame_len: usize,
    pub hop: usize,
    /// `None` selects the default 24-band tree for the signal's sample rate.
    pub tree: Option<PerceptualTree>,
    pub shrinkage: ShrinkageSpec,
    pub threshold_rule: ThresholdRule,
    pub threshold_mapping: ThresholdMapping,
    pub noise_mode: NoiseMode,
    /// Bin count for subband TE histograms in analysis runs.
    pub histogram_bins: usize,
    pub tracker: TrackerParams,
}

impl Default for EnhanceConfig {
    fn default() -> Self {
        Self {
            frame_len: DEFAULT_FRAME_LEN,
            hop: DEFAULT_HOP,
            tree: None,
            shrinkage: ShrinkageSpec::default(),
            threshold_rule: ThresholdRule::Exponential,
            threshold_mapping: ThresholdMapping::Sqrt,
            noise_mode: NoiseMode::Tracking,
            histogram_bins: DEFAULT_HISTOGRAM_BINS,
            tracker: TrackerParams::default(),
        }
    }
}

impl EnhanceConfig {
    /// The classical baseline: universal threshold with hard shrinkage.
    pub fn universal_baseline() -> Self {
        Self {
            threshold_rule: ThresholdRule::Universal,
            shrinkage: ShrinkageSpec::of_kind(ShrinkageKind::Hard),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.hop == 0 || self.hop > self.frame_len {
            return invalid(format!("hop {} must be in 1..={}", self.hop, self.frame_len));
        }
        if self.histogram_bins == 0 {
            return invalid("histogram needs at least one bin");
        }
        ShrinkageSpec::new(self.shrinkage.kind, self.shrinkage.alpha, self.shrinkage.mu)?;
        self.tracker.validate()
    }

    /// Tree used for a signal at `sample_rate`.
    pub fn tree_for(&self, sample_rate: u32) -> Result<PerceptualTree> {
        match &self.tree {
            Some(t) if t.sample_rate() != sample_rate => invalid(format!(
                "tree was built for {} Hz, signal is {sample_rate} Hz",
                t.sample_rate()
            )),
            Some(t) => Ok(t.clone()),
            None => default_tree(sample_rate),
        }
    }
}

/// Per-subband diagnostics of one enhanced frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubbandTrace {
    pub stats: SubbandStats,
    /// Threshold as produced by the rule, before the amplitude mapping.
    pub lambda: f64,
    /// Thresholds applied to the coefficients.
    pub thresholds: ThresholdPair,
    pub energy_in: f64,
    pub energy_out: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameOutput {
    pub samples: Vec<f64>,
    pub subbands: Vec<SubbandTrace>,
}

/// Stateful per-signal enhancer: the transform plus the noise tracker.
#[derive(Debug, Clone)]
pub struct Enhancer {
    cfg: EnhanceConfig,
    transform: PwpTransform,
    tracker: NoiseTracker,
}

impl Enhancer {
    pub fn new(cfg: EnhanceConfig, sample_rate: u32) -> Result<Self> {
        cfg.validate()?;
        let tree = cfg.tree_for(sample_rate)?;
        let transform = PwpTransform::new(tree, db10_filters());
        transform.check_frame_len(cfg.frame_len)?;
        let tracker = NoiseTracker::new(transform.tree().leaf_count(), cfg.noise_mode, cfg.tracker)?;
        Ok(Self { cfg, transform, tracker })
    }

    pub fn config(&self) -> &EnhanceConfig {
        &self.cfg
    }

    pub fn transform(&self) -> &PwpTransform {
        &self.transform
    }

    pub fn tracker(&self) -> &NoiseTracker {
        &self.tracker
    }

    /// Enhances one windowed frame and advances the tracker.
    ///
    /// In oracle mode `noise_frame` is the identically windowed frame of the
    /// known noise.
    pub fn enhance_frame(&mut self, frame: &[f64], noise_frame: Option<&[f64]>) -> Result<FrameOutput> {
        if frame.len() != self.cfg.frame_len {
            return invalid(format!(
                "frame has {} samples, config expects {}",
                frame.len(),
                self.cfg.frame_len
            ));
        }
        let mut sub = self.transform.forward(frame)?;
        let te = teager_subbands(&sub)?;
        let noise_te = match (self.cfg.noise_mode, noise_frame) {
            (NoiseMode::Oracle, Some(n)) => {
                if n.len() != frame.len() {
                    return invalid("noise frame length differs from the signal frame");
                }
                Some(teager_subbands(&self.transform.forward(n)?)?)
            }
            (NoiseMode::Oracle, None) => return invalid("oracle noise mode needs the noise frame"),
            (NoiseMode::Tracking, _) => None,
        };
        let noise_levels = self.tracker.update(&te, noise_te.as_deref())?;

        let mut traces = Vec::with_capacity(sub.subband_count());
        for (k, coeffs) in sub.coeffs.iter_mut().enumerate() {
            let stats = subband_snr(te[k].mean(), noise_levels[k]);
            let lambda = self.cfg.threshold_rule.threshold(&stats, coeffs.len());
            let thresholds = ThresholdPair::new(self.cfg.threshold_mapping.to_amplitude(lambda));
            let energy_in = energy(coeffs);
            shrink_in_place(coeffs, &thresholds, &self.cfg.shrinkage);
            traces.push(SubbandTrace { stats, lambda, thresholds, energy_in, energy_out: energy(coeffs) });
        }
        Ok(FrameOutput { samples: self.transform.inverse(&sub)?, subbands: traces })
    }
}

fn energy(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Rectified Teager energy of every subband of a frame.
pub fn teager_subbands(sub: &SubbandFrame) -> Result<Vec<TeagerSubband>> {
    sub.coeffs.iter().map(|c| teager(c)).collect()
}

/// Enhanced signal plus the per-frame diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Enhanced {
    pub audio: AudioBuffer,
    pub frames: Vec<Vec<SubbandTrace>>,
}

/// Enhances a whole signal. `noise_ref` is required in oracle mode and
/// ignored otherwise.
pub fn enhance_signal(
    noisy: &AudioBuffer,
    noise_ref: Option<&AudioBuffer>,
    cfg: &EnhanceConfig,
) -> Result<AudioBuffer> {
    Ok(enhance_signal_traced(noisy, noise_ref, cfg)?.audio)
}

pub fn enhance_signal_traced(
    noisy: &AudioBuffer,
    noise_ref: Option<&AudioBuffer>,
    cfg: &EnhanceConfig,
) -> Result<Enhanced> {
    let noise_frames: Option<FrameSequence> = match (cfg.noise_mode, noise_ref) {
        (NoiseMode::Oracle, None) => return invalid("oracle noise mode needs a noise reference"),
        (NoiseMode::Oracle, Some(n)) => {
            noisy.check_compatible(n)?;
            Some(frame_signal(n, cfg.frame_len, cfg.hop)?)
        }
        (NoiseMode::Tracking, _) => None,
    };
    let mut enhancer = Enhancer::new(cfg.clone(), noisy.sample_rate())?;
    let frames = frame_signal(noisy, cfg.frame_len, cfg.hop)?;
    let mut out = Vec::with_capacity(frames.len());
    let mut traces = Vec::with_capacity(frames.len());
    for (i, frame) in frames.frames().iter().enumerate() {
        let noise = noise_frames.as_ref().map(|n| n.frames()[i].as_slice());
        let r = enhancer.enhance_frame(frame, noise)?;
        out.push(r.samples);
        traces.push(r.subbands);
    }
    let samples = overlap_add(&frames.with_frames(out)?, noisy.len())?;
    Ok(Enhanced { audio: AudioBuffer::new(samples, noisy.sample_rate())?, frames: traces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framing::make_window;
    use crate::synth::white_noise;

    fn oracle() -> EnhanceConfig {
        EnhanceConfig { noise_mode: NoiseMode::Oracle, ..EnhanceConfig::default() }
    }

    #[test]
    fn zero_frame() {
        let mut e = Enhancer::new(EnhanceConfig::default(), 8000).unwrap();
        let out = e.enhance_frame(&[0.0; 512], None).unwrap();
        assert!(out.samples.iter().all(|&v| v == 0.0));
        assert!(out.subbands.iter().all(|t| t.stats.sigma_n2 == 0.0));
    }

    #[test]
    fn zero_noise_is_identity() {
        let w = make_window(512).unwrap();
        let x = white_noise(0.064, 8000, 0.3, 3).unwrap();
        let frame: Vec<f64> = x.samples().iter().zip(&w).map(|(a, b)| a * b).collect();
        let mut e = Enhancer::new(oracle(), 8000).unwrap();
        let out = e.enhance_frame(&frame, Some(&[0.0; 512])).unwrap();
        let err = out.samples.iter().zip(&frame).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn pure_noise_frame_is_suppressed() {
        let w = make_window(512).unwrap();
        let x = white_noise(0.064, 8000, 0.1, 4).unwrap();
        let frame: Vec<f64> = x.samples().iter().zip(&w).map(|(a, b)| a * b).collect();
        let mut e = Enhancer::new(oracle(), 8000).unwrap();
        let out = e.enhance_frame(&frame, Some(&frame)).unwrap();
        assert!(energy(&out.samples) <= 0.1 * energy(&frame));
    }

    #[test]
    fn oracle_requires_reference() {
        let x = AudioBuffer::silence(2000, 8000).unwrap();
        assert!(enhance_signal(&x, None, &oracle()).is_err());
        let short = AudioBuffer::silence(1000, 8000).unwrap();
        assert!(enhance_signal(&x, Some(&short), &oracle()).is_err());
    }

    #[test]
    fn silence_and_length() {
        for len in [1, 300, 512, 2000, 4097] {
            let x = AudioBuffer::silence(len, 8000).unwrap();
            let y = enhance_signal(&x, None, &EnhanceConfig::default()).unwrap();
            assert_eq!(y, x);
        }
    }

    #[test]
    fn subband_energy_never_grows() {
        let x = white_noise(0.5, 8000, 0.2, 8).unwrap();
        let r = enhance_signal_traced(&x, None, &EnhanceConfig::default()).unwrap();
        for t in r.frames.iter().flatten() {
            assert!(t.energy_out <= t.energy_in);
            assert_eq!(t.thresholds.lambda2, 2.0 * t.thresholds.lambda1);
        }
    }

    #[test]
    fn baseline_differs_in_two_fields() {
        let b = EnhanceConfig::universal_baseline();
        let d = EnhanceConfig::default();
        assert_ne!(b, d);
        let back = EnhanceConfig { threshold_rule: d.threshold_rule, shrinkage: d.shrinkage, ..b };
        assert_eq!(back, d);
    }

    #[test]
    fn bad_config() {
        let c = EnhanceConfig { frame_len: 500, ..EnhanceConfig::default() };
        assert!(Enhancer::new(c, 8000).is_err());
        let c = EnhanceConfig { hop: 0, ..EnhanceConfig::default() };
        assert!(Enhancer::new(c, 8000).is_err());
        let mut e = Enhancer::new(EnhanceConfig::default(), 8000).unwrap();
        assert!(e.enhance_frame(&[0.0; 256], None).is_err());
    }
}
