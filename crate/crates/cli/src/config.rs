//! Flat `key = value` configuration files and enhancement methods.
//!
//! ```text
//! # comments start with '#'
//! frame_len = 512
//! hop = 256
//! shrinkage = proposed_custom
//! alpha = 0.5
//! mu = 255
//! threshold_rule = exponential
//! threshold_mapping = sqrt
//! noise_mode = tracking
//! histogram_bins = 50
//! tracker_beta = 0.9
//! tracker_window = 40
//! tracker_bias = 1.5
//! tracker_bootstrap = 5
//! tree_file = bands.tree
//! ```
//!
//! `tree_file` is resolved relative to the config file.

use std::path::Path;
use std::str::FromStr;

use tepwp::noise::NoiseMode;
use tepwp::pipeline::EnhanceConfig;
use tepwp::pwpt::PerceptualTree;
use tepwp::shrink::{ShrinkageKind, ShrinkageSpec};
use tepwp::threshold::{ThresholdMapping, ThresholdRule};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub enhance: EnhanceConfig,
    /// Contents of a tree spec file; parsed once the sample rate is known.
    pub tree_spec: Option<String>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, |name| {
            let p = base.join(name);
            std::fs::read_to_string(&p).map_err(|e| CliError::io(&p, e))
        })
    }

    /// Parses config text. `read_tree` loads the file named by `tree_file`.
    pub fn parse(text: &str, read_tree: impl Fn(&str) -> CliResult<String>) -> CliResult<Self> {
        let mut cfg = Self::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::format(format!("config line {}: expected key = value", n + 1)));
            };
            cfg.set(key.trim(), value.trim(), &read_tree)
                .map_err(|e| CliError::format(format!("config line {}: {e}", n + 1)))?;
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str, read_tree: &dyn Fn(&str) -> CliResult<String>) -> CliResult<()> {
        let e = &mut self.enhance;
        match key {
            "frame_len" => e.frame_len = parse(key, value)?,
            "hop" => e.hop = parse(key, value)?,
            "shrinkage" => e.shrinkage.kind = parse(key, value)?,
            "alpha" => e.shrinkage.alpha = parse(key, value)?,
            "mu" => e.shrinkage.mu = parse(key, value)?,
            "threshold_rule" => e.threshold_rule = parse(key, value)?,
            "threshold_mapping" => e.threshold_mapping = parse(key, value)?,
            "noise_mode" => e.noise_mode = parse(key, value)?,
            "histogram_bins" => e.histogram_bins = parse(key, value)?,
            "tracker_beta" => e.tracker.beta = parse(key, value)?,
            "tracker_window" => e.tracker.window = parse(key, value)?,
            "tracker_bias" => e.tracker.bias = parse(key, value)?,
            "tracker_bootstrap" => e.tracker.bootstrap_frames = parse(key, value)?,
            "tree_file" => self.tree_spec = Some(read_tree(value)?),
            other => return Err(CliError::format(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn apply(&mut self, o: &Overrides) {
        let e = &mut self.enhance;
        if let Some(m) = o.method {
            *e = m.configure(e);
        }
        if let Some(v) = o.noise_mode {
            e.noise_mode = v;
        }
        if let Some(v) = o.threshold_mapping {
            e.threshold_mapping = v;
        }
        if let Some(v) = o.alpha {
            e.shrinkage.alpha = v;
        }
        if let Some(v) = o.mu {
            e.shrinkage.mu = v;
        }
    }

    /// Validated enhancement config with the tree resolved for `sample_rate`.
    pub fn resolve(&self, sample_rate: u32) -> CliResult<EnhanceConfig> {
        let mut cfg = self.enhance.clone();
        if let Some(spec) = &self.tree_spec {
            cfg.tree = Some(PerceptualTree::from_spec_str(spec, sample_rate)?);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> CliResult<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| CliError::format(format!("bad value `{value}` for {key}: {e}")))
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub method: Option<Method>,
    pub noise_mode: Option<NoiseMode>,
    pub threshold_mapping: Option<ThresholdMapping>,
    pub alpha: Option<f64>,
    pub mu: Option<f64>,
}

/// Named combinations of threshold rule and shrinkage function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Proposed,
    Universal,
    GaussianThreshold,
    Soft,
    Hard,
    Semisoft,
    MuLaw,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Self::Proposed,
        Self::Universal,
        Self::GaussianThreshold,
        Self::Soft,
        Self::Hard,
        Self::Semisoft,
        Self::MuLaw,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Proposed => "proposed",
            Self::Universal => "universal",
            Self::GaussianThreshold => "gaussian_threshold",
            Self::Soft => "soft",
            Self::Hard => "hard",
            Self::Semisoft => "semisoft",
            Self::MuLaw => "mu_law",
        }
    }

    fn parts(self) -> (ThresholdRule, ShrinkageKind) {
        use ShrinkageKind as K;
        use ThresholdRule as R;
        match self {
            Self::Proposed => (R::Exponential, K::ProposedCustom),
            Self::Universal => (R::Universal, K::Hard),
            Self::GaussianThreshold => (R::Gaussian, K::ProposedCustom),
            Self::Soft => (R::Exponential, K::Soft),
            Self::Hard => (R::Exponential, K::Hard),
            Self::Semisoft => (R::Exponential, K::Semisoft),
            Self::MuLaw => (R::Exponential, K::MuLaw),
        }
    }

    /// `base` with this method's rule and shrinkage kind; alpha and mu are kept.
    pub fn configure(self, base: &EnhanceConfig) -> EnhanceConfig {
        let (rule, kind) = self.parts();
        EnhanceConfig {
            threshold_rule: rule,
            shrinkage: ShrinkageSpec { kind, ..base.shrinkage },
            ..base.clone()
        }
    }
}

impl FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| CliError::format(format!("unknown method `{s}`")))
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
