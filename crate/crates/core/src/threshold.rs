//! Subband SNR and threshold rules.
//!
//! All quantities here live in the Teager-energy domain: `sigma_*2` are
//! powers of the TE-operated coefficients and the returned thresholds are
//! TE-domain values. [`ThresholdMapping`] converts them to the coefficient
//! amplitude domain before shrinkage.

use crate::error::{invalid, Result};

/// Denominator floor for the subband SNR.
pub const SNR_FLOOR: f64 = 1e-12;
/// Below this SNR the exponential threshold uses its analytic limit.
pub const GAMMA_EPS: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubbandStats {
    /// Noisy-signal power.
    pub sigma_s2: f64,
    /// Noise power.
    pub sigma_n2: f64,
    /// Clean-signal power, `max(sigma_s2 - sigma_n2, 0)`.
    pub sigma_r2: f64,
    /// Subband SNR, `sigma_r2 / max(sigma_n2, SNR_FLOOR)`.
    pub gamma: f64,
}

pub fn subband_snr(sigma_s2: f64, sigma_n2: f64) -> SubbandStats {
    let sigma_s2 = sigma_s2.max(0.0);
    let sigma_n2 = sigma_n2.max(0.0);
    let sigma_r2 = (sigma_s2 - sigma_n2).max(0.0);
    SubbandStats {
        sigma_s2,
        sigma_n2,
        sigma_r2,
        gamma: sigma_r2 / sigma_n2.max(SNR_FLOOR),
    }
}

/// Lower and upper thresholds of the two-threshold shrinkage functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdPair {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl ThresholdPair {
    /// `lambda2 = 2 * lambda1`; negative or NaN inputs collapse to zero.
    pub fn new(lambda1: f64) -> Self {
        let lambda1 = if lambda1 > 0.0 { lambda1 } else { 0.0 };
        Self { lambda1, lambda2: 2.0 * lambda1 }
    }
}

/// Threshold from the exponential model of TE-operated coefficients:
///
/// `sqrt(sigma_n2) (1 + g) ln(sqrt(1 + g)) / (sqrt(1 + g) - 1)`
///
/// evaluated in a cancellation-free form. It tends to `sqrt(sigma_n2)` as the
/// SNR goes to zero, so noise-only subbands keep a positive threshold.
pub fn exp_threshold(sigma_n2: f64, gamma: f64) -> f64 {
    if !(sigma_n2 > 0.0) {
        return 0.0;
    }
    let scale = sigma_n2.sqrt();
    if !(gamma > GAMMA_EPS) {
        return scale;
    }
    // ln(sqrt(1+g)) = ln_1p(g)/2 and 1/(sqrt(1+g) - 1) = (sqrt(1+g) + 1)/g
    let root = (1.0 + gamma).sqrt();
    scale * (1.0 + gamma) * 0.5 * gamma.ln_1p() * (root + 1.0) / gamma
}

/// Threshold under a Gaussian model:
/// `sqrt(sigma_n2) sqrt(2 (g + g^2)) ln(sqrt(1 + 1/g))`.
pub fn gauss_threshold(sigma_n2: f64, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return invalid(format!("Gaussian threshold needs a positive SNR, got {gamma}"));
    }
    let scale = sigma_n2.max(0.0).sqrt();
    Ok(scale * (2.0 * (gamma + gamma * gamma)).sqrt() * 0.5 * gamma.recip().ln_1p())
}

/// Donoho's universal threshold `sqrt(sigma_n2) sqrt(2 ln m)`.
pub fn universal_threshold(sigma_n2: f64, m: usize) -> f64 {
    let m = m.max(1) as f64;
    sigma_n2.max(0.0).sqrt() * (2.0 * m.ln()).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThresholdRule {
    Exponential,
    Gaussian,
    Universal,
}

impl ThresholdRule {
    /// Threshold for a subband of `m` coefficients.
    ///
    /// The Gaussian rule is undefined at zero SNR; there the SNR is floored at
    /// [`GAMMA_EPS`], which drives the threshold to (nearly) zero.
    pub fn threshold(self, stats: &SubbandStats, m: usize) -> f64 {
        match self {
            Self::Exponential => exp_threshold(stats.sigma_n2, stats.gamma),
            Self::Gaussian => gauss_threshold(stats.sigma_n2, stats.gamma.max(GAMMA_EPS))
                .expect("floored SNR is positive"),
            Self::Universal => universal_threshold(stats.sigma_n2, m),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Exponential => "exponential",
            Self::Gaussian => "gaussian",
            Self::Universal => "universal",
        }
    }
}

impl std::str::FromStr for ThresholdRule {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exponential" | "exp" => Ok(Self::Exponential),
            "gaussian" | "gauss" => Ok(Self::Gaussian),
            "universal" => Ok(Self::Universal),
            other => invalid(format!("unknown threshold rule `{other}`")),
        }
    }
}

/// How a TE-domain threshold is compared with raw coefficient magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThresholdMapping {
    /// TE values are quadratic in amplitude, so use `sqrt(lambda)`.
    Sqrt,
    /// Use `lambda` unchanged.
    Direct,
}

impl ThresholdMapping {
    pub fn to_amplitude(self, lambda: f64) -> f64 {
        match self {
            Self::Sqrt => lambda.max(0.0).sqrt(),
            Self::Direct => lambda.max(0.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Sqrt => "sqrt",
            Self::Direct => "direct",
        }
    }
}

impl std::str::FromStr for ThresholdMapping {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sqrt" => Ok(Self::Sqrt),
            "direct" => Ok(Self::Direct),
            other => invalid(format!("unknown threshold mapping `{other}`")),
        }
    }
}

/// Exponential and Gaussian thresholds against SNR in dB for unit noise power.
///
/// Returns `(snr_db, lambda_exponential, lambda_gaussian)` rows.
pub fn threshold_curve(snr_db: impl IntoIterator<Item = f64>) -> Vec<(f64, f64, f64)> {
    snr_db
        .into_iter()
        .map(|db| {
            let gamma = 10f64.powf(db / 10.0);
            let gauss = gauss_threshold(1.0, gamma).expect("10^(x/10) is positive");
            (db, exp_threshold(1.0, gamma), gauss)
        })
        .collect()
}
