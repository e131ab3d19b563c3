//! Coefficient shrinkage functions.

use crate::error::{invalid, Result};
use crate::threshold::ThresholdPair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShrinkageKind {
    /// Blend of mu-law and semisoft shrinkage controlled by `alpha`.
    ProposedCustom,
    MuLaw,
    Semisoft,
    Soft,
    Hard,
}

impl ShrinkageKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::ProposedCustom => "proposed_custom",
            Self::MuLaw => "mu_law",
            Self::Semisoft => "semisoft",
            Self::Soft => "soft",
            Self::Hard => "hard",
        }
    }
}

impl std::str::FromStr for ShrinkageKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "proposed_custom" | "custom" | "proposed" => Ok(Self::ProposedCustom),
            "mu_law" => Ok(Self::MuLaw),
            "semisoft" => Ok(Self::Semisoft),
            "soft" => Ok(Self::Soft),
            "hard" => Ok(Self::Hard),
            other => invalid(format!("unknown shrinkage kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShrinkageSpec {
    pub kind: ShrinkageKind,
    /// Weight of the mu-law/identity part, in `[0, 1]`.
    pub alpha: f64,
    /// Companding constant, positive.
    pub mu: f64,
}

pub const DEFAULT_ALPHA: f64 = 0.5;
pub const DEFAULT_MU: f64 = 255.0;

impl ShrinkageSpec {
    pub fn new(kind: ShrinkageKind, alpha: f64, mu: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return invalid(format!("alpha must lie in [0, 1], got {alpha}"));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return invalid(format!("mu must be positive, got {mu}"));
        }
        Ok(Self { kind, alpha, mu })
    }

    pub fn of_kind(kind: ShrinkageKind) -> Self {
        Self { kind, alpha: DEFAULT_ALPHA, mu: DEFAULT_MU }
    }
}

impl Default for ShrinkageSpec {
    fn default() -> Self {
        Self::of_kind(ShrinkageKind::ProposedCustom)
    }
}

/// mu-law companding curve on `[0, lambda]`: `lambda ((1 + mu)^(a / lambda) - 1) / mu`.
///
/// Equals `lambda` at `a = lambda`, which keeps the piecewise functions continuous.
fn mu_law_curve(a: f64, lambda: f64, mu: f64) -> f64 {
    lambda * ((a / lambda) * mu.ln_1p()).exp_m1() / mu
}

/// Linear ramp of semisoft shrinkage between the two thresholds.
fn semisoft_ramp(a: f64, thr: &ThresholdPair) -> f64 {
    thr.lambda2 * (a - thr.lambda1) / (thr.lambda2 - thr.lambda1)
}

/// Shrinks one coefficient. A zero lower threshold leaves `y` unchanged for every kind.
pub fn apply_shrinkage(y: f64, thr: &ThresholdPair, spec: &ShrinkageSpec) -> f64 {
    if !(thr.lambda1 > 0.0) {
        return y;
    }
    let a = y.abs();
    let (l1, l2) = (thr.lambda1, thr.lambda2);
    let mag = match spec.kind {
        ShrinkageKind::ProposedCustom => {
            if a < l1 {
                spec.alpha * mu_law_curve(a, l1, spec.mu)
            } else if a > l2 {
                a
            } else {
                (1.0 - spec.alpha) * semisoft_ramp(a, thr) + spec.alpha * a
            }
        }
        ShrinkageKind::MuLaw => {
            if a < l1 {
                mu_law_curve(a, l1, spec.mu)
            } else {
                a
            }
        }
        ShrinkageKind::Semisoft => {
            if a < l1 {
                0.0
            } else if a > l2 {
                a
            } else {
                semisoft_ramp(a, thr)
            }
        }
        ShrinkageKind::Soft => (a - l1).max(0.0),
        ShrinkageKind::Hard => {
            if a <= l1 {
                0.0
            } else {
                a
            }
        }
    };
    if y < 0.0 {
        -mag
    } else {
        mag
    }
}

/// Applies [`apply_shrinkage`] to every coefficient in place.
pub fn shrink_in_place(coeffs: &mut [f64], thr: &ThresholdPair, spec: &ShrinkageSpec) {
    for c in coeffs {
        *c = apply_shrinkage(*c, thr, spec);
    }
}
