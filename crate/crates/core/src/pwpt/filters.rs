//! Orthonormal Daubechies-10 two-channel filter bank.

use crate::error::{invalid, Result};

/// Daubechies-10 scaling (synthesis low-pass) filter, 20 taps.
const DB10_SCALING: [f64; 20] = [
    0.026670057900555554,
    0.1881768000776915,
    0.5272011889317256,
    0.6884590394536035,
    0.2811723436605775,
    -0.24984642432731538,
    -0.19594627437737705,
    0.12736934033579325,
    0.09305736460357235,
    -0.07139414716639708,
    -0.029457536821875813,
    0.033212674059341,
    0.0036065535669561697,
    -0.010733175483330575,
    0.001395351747052901,
    0.001992405295185056,
    -0.0006858566949597116,
    -0.00011646685512928545,
    9.358867032006959e-05,
    -1.3264202894521244e-05,
];

/// Analysis and synthesis filter pairs of an orthonormal two-channel bank.
///
/// Synthesis filters are the time reverses of the analysis filters and the
/// high-pass filters are alternating-sign mirrors of the low-pass ones.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterQuad {
    pub analysis_lo: Vec<f64>,
    pub analysis_hi: Vec<f64>,
    pub synthesis_lo: Vec<f64>,
    pub synthesis_hi: Vec<f64>,
}

impl FilterQuad {
    /// Builds the full quadruple from an orthonormal scaling filter of even length.
    pub fn from_scaling(scaling: &[f64]) -> Result<Self> {
        let len = scaling.len();
        if len < 2 || len % 2 != 0 {
            return invalid(format!("scaling filter length must be even and >= 2, got {len}"));
        }
        let synthesis_lo = scaling.to_vec();
        let synthesis_hi: Vec<f64> = (0..len)
            .map(|n| {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                sign * scaling[len - 1 - n]
            })
            .collect();
        let analysis_lo = synthesis_lo.iter().rev().copied().collect();
        let analysis_hi = synthesis_hi.iter().rev().copied().collect();
        let quad = Self { analysis_lo, analysis_hi, synthesis_lo, synthesis_hi };
        quad.validate(1e-12)?;
        Ok(quad)
    }

    pub fn len(&self) -> usize {
        self.synthesis_lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.synthesis_lo.is_empty()
    }

    /// Checks unit norm, even-shift orthogonality and the time-reversal relation.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let len = self.len();
        let all = [
            &self.analysis_lo,
            &self.analysis_hi,
            &self.synthesis_lo,
            &self.synthesis_hi,
        ];
        if all.iter().any(|f| f.len() != len) {
            return invalid("filters in a bank must share one length");
        }
        for f in all {
            let norm: f64 = f.iter().map(|c| c * c).sum();
            if (norm - 1.0).abs() > tol {
                return invalid(format!("filter norm {norm} is not 1"));
            }
        }
        let lo = &self.synthesis_lo;
        let hi = &self.synthesis_hi;
        for shift in (2..len).step_by(2) {
            let ll = even_shift_product(lo, lo, shift);
            let hh = even_shift_product(hi, hi, shift);
            if ll.abs() > tol || hh.abs() > tol {
                return invalid(format!("filters are not orthogonal to shift {shift}"));
            }
        }
        for shift in (0..len).step_by(2) {
            if even_shift_product(lo, hi, shift).abs() > tol
                || even_shift_product(hi, lo, shift).abs() > tol
            {
                return invalid(format!("low/high pair not orthogonal at shift {shift}"));
            }
        }
        let reversed = |a: &[f64], b: &[f64]| a.iter().rev().zip(b).all(|(x, y)| x == y);
        if !reversed(&self.analysis_lo, lo) || !reversed(&self.analysis_hi, hi) {
            return invalid("analysis filters must be time reverses of synthesis filters");
        }
        Ok(())
    }
}

fn even_shift_product(a: &[f64], b: &[f64], shift: usize) -> f64 {
    a.iter().skip(shift).zip(b).map(|(x, y)| x * y).sum()
}

/// The standard orthonormal Daubechies-10 (20-tap) bank.
pub fn db10_filters() -> FilterQuad {
    FilterQuad::from_scaling(&DB10_SCALING).expect("embedded db10 coefficients are orthonormal")
}
