//! Discrete Teager energy operator on subband coefficients.

use crate::error::{invalid, Result};

/// Half-wave rectified Teager energy of one subband.
#[derive(Debug, Clone, PartialEq)]
pub struct TeagerSubband {
    pub values: Vec<f64>,
    pub source_len: usize,
}

impl TeagerSubband {
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Unrectified operator `x[m]^2 - x[m+1] x[m-1]` with replicated edge neighbours.
pub fn teager_raw(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|m| {
            let prev = x[m.saturating_sub(1)];
            let next = x[(m + 1).min(n - 1)];
            x[m] * x[m] - next * prev
        })
        .collect()
}

/// Teager energy of `coeffs`, clamped at zero.
pub fn teager(coeffs: &[f64]) -> Result<TeagerSubband> {
    if coeffs.is_empty() {
        return invalid("Teager energy of an empty subband");
    }
    let values = teager_raw(coeffs).into_iter().map(|t| t.max(0.0)).collect();
    Ok(TeagerSubband { values, source_len: coeffs.len() })
}
