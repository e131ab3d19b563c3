//! Per-subband noise level tracking in the Teager-energy domain.
//!
//! A minima-controlled recursive average: each subband's mean TE is smoothed
//! over frames, the minimum of the smoothed value over a sliding window is
//! taken as the noise floor and scaled by a bias factor. The first frames
//! are assumed noise-dominated and seed the estimate with a plain running
//! mean. An oracle mode returns the true noise level when the added noise is
//! known, for evaluation.

use std::collections::VecDeque;

use crate::error::{invalid, Result};
use crate::teager::TeagerSubband;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseMode {
    Tracking,
    Oracle,
}

impl NoiseMode {
    pub fn name(self) -> &'static str {
        match self {
            Self::Tracking => "tracking",
            Self::Oracle => "oracle",
        }
    }
}

impl std::str::FromStr for NoiseMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tracking" => Ok(Self::Tracking),
            "oracle" => Ok(Self::Oracle),
            other => invalid(format!("unknown noise mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackerParams {
    /// Recursive smoothing constant.
    pub beta: f64,
    /// Minimum-search window, in frames.
    pub window: usize,
    /// Multiplier compensating the downward bias of a minimum.
    pub bias: f64,
    /// Leading frames treated as noise only.
    pub bootstrap_frames: usize,
}

impl Default for TrackerParams {
    fn default() -> Self {
        Self { beta: 0.9, window: 40, bias: 1.5, bootstrap_frames: 5 }
    }
}

impl TrackerParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.beta) {
            return invalid(format!("smoothing constant must be in [0, 1), got {}", self.beta));
        }
        if self.window == 0 {
            return invalid("minimum window must hold at least one frame");
        }
        if !(self.bias > 0.0 && self.bias.is_finite()) {
            return invalid(format!("bias factor must be positive, got {}", self.bias));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseTracker {
    params: TrackerParams,
    mode: NoiseMode,
    smoothed: Vec<f64>,
    minima: Vec<VecDeque<f64>>,
    frames_seen: usize,
}

impl NoiseTracker {
    pub fn new(subbands: usize, mode: NoiseMode, params: TrackerParams) -> Result<Self> {
        params.validate()?;
        if subbands == 0 {
            return invalid("tracker needs at least one subband");
        }
        Ok(Self {
            params,
            mode,
            smoothed: vec![0.0; subbands],
            minima: vec![VecDeque::with_capacity(params.window); subbands],
            frames_seen: 0,
        })
    }

    pub fn mode(&self) -> NoiseMode {
        self.mode
    }

    pub fn params(&self) -> &TrackerParams {
        &self.params
    }

    pub fn subband_count(&self) -> usize {
        self.smoothed.len()
    }

    pub fn frames_seen(&self) -> usize {
        self.frames_seen
    }

    /// Smoothed TE level per subband.
    pub fn smoothed(&self) -> &[f64] {
        &self.smoothed
    }

    /// Number of values currently held in a subband's minimum window.
    pub fn window_fill(&self, subband: usize) -> usize {
        self.minima[subband].len()
    }

    /// Advances one frame and returns the noise TE level of every subband.
    ///
    /// `observed` holds the noisy frame's TE subbands. In oracle mode `noise`
    /// must hold the TE subbands of the known noise for the same frame.
    pub fn update(
        &mut self,
        observed: &[TeagerSubband],
        noise: Option<&[TeagerSubband]>,
    ) -> Result<Vec<f64>> {
        let k = self.smoothed.len();
        if observed.len() != k {
            return invalid(format!("tracker has {k} subbands, frame has {}", observed.len()));
        }
        self.frames_seen += 1;
        match self.mode {
            NoiseMode::Oracle => {
                let Some(noise) = noise else {
                    return invalid("oracle noise mode needs the noise reference");
                };
                if noise.len() != k {
                    return invalid(format!("tracker has {k} subbands, noise has {}", noise.len()));
                }
                Ok(noise.iter().map(TeagerSubband::mean).collect())
            }
            NoiseMode::Tracking => Ok(self.track(observed)),
        }
    }

    fn track(&mut self, observed: &[TeagerSubband]) -> Vec<f64> {
        let p = self.params;
        let bootstrapping = self.frames_seen <= p.bootstrap_frames;
        let n = self.frames_seen as f64;
        observed
            .iter()
            .enumerate()
            .map(|(i, te)| {
                let level = te.mean();
                let s = &mut self.smoothed[i];
                *s = if bootstrapping || self.frames_seen == 1 {
                    *s + (level - *s) / n
                } else {
                    p.beta * *s + (1.0 - p.beta) * level
                };
                let window = &mut self.minima[i];
                if window.len() == p.window {
                    window.pop_front();
                }
                window.push_back(*s);
                if bootstrapping {
                    *s
                } else {
                    p.bias * window.iter().copied().fold(f64::INFINITY, f64::min)
                }
            })
            .collect()
    }
}
