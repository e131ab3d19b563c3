//! Forward and inverse perceptual wavelet packet transforms.
//!
//! Each tree node is split with periodic convolution and decimation by two,
//! which keeps the transform critically sampled and orthonormal.

use crate::error::{invalid, Result};

use super::filters::FilterQuad;
use super::tree::PerceptualTree;

/// Subband coefficients of one frame, ordered by leaf frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct SubbandFrame {
    pub coeffs: Vec<Vec<f64>>,
    pub frame_len: usize,
}

impl SubbandFrame {
    pub fn zeros_like(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| vec![0.0; c.len()]).collect(),
            frame_len: self.frame_len,
        }
    }

    pub fn subband_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().flatten().map(|c| c * c).sum()
    }

    pub fn subband_energy(&self, k: usize) -> f64 {
        self.coeffs[k].iter().map(|c| c * c).sum()
    }
}

/// One analysis stage: periodic convolution with the analysis pair, keep even outputs.
pub fn analysis_step(x: &[f64], filters: &FilterQuad) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let half = n / 2;
    let taps = filters.len();
    let mut lo = vec![0.0; half];
    let mut hi = vec![0.0; half];
    for k in 0..half {
        let (mut a, mut d) = (0.0, 0.0);
        for j in 0..taps {
            // output sample 2k + taps - 1 of the circular convolution
            let s = x[(2 * k + taps - 1 - j) % n];
            a += filters.analysis_lo[j] * s;
            d += filters.analysis_hi[j] * s;
        }
        lo[k] = a;
        hi[k] = d;
    }
    (lo, hi)
}

/// Inverse of [`analysis_step`]: upsample, filter with the synthesis pair, sum.
pub fn synthesis_step(lo: &[f64], hi: &[f64], filters: &FilterQuad) -> Vec<f64> {
    let n = 2 * lo.len();
    let mut out = vec![0.0; n];
    for (k, (&a, &d)) in lo.iter().zip(hi).enumerate() {
        for i in 0..filters.len() {
            out[(2 * k + i) % n] += a * filters.synthesis_lo[i] + d * filters.synthesis_hi[i];
        }
    }
    out
}

/// A tree plus filter bank, ready to transform frames.
#[derive(Debug, Clone)]
pub struct PwpTransform {
    tree: PerceptualTree,
    filters: FilterQuad,
}

impl PwpTransform {
    pub fn new(tree: PerceptualTree, filters: FilterQuad) -> Self {
        Self { tree, filters }
    }

    pub fn tree(&self) -> &PerceptualTree {
        &self.tree
    }

    pub fn filters(&self) -> &FilterQuad {
        &self.filters
    }

    pub fn check_frame_len(&self, frame_len: usize) -> Result<()> {
        let block = 1usize << self.tree.max_depth();
        if frame_len == 0 || frame_len % block != 0 {
            return invalid(format!(
                "frame length {frame_len} is not a positive multiple of 2^{} = {block}",
                self.tree.max_depth()
            ));
        }
        Ok(())
    }

    pub fn forward(&self, frame: &[f64]) -> Result<SubbandFrame> {
        self.check_frame_len(frame.len())?;
        let mut coeffs = vec![Vec::new(); self.tree.leaf_count()];
        let mut stack = vec![(0usize, frame.to_vec())];
        while let Some((idx, signal)) = stack.pop() {
            let node = &self.tree.nodes()[idx];
            match node.children {
                Some([lo_child, hi_child]) => {
                    let (lo, hi) = analysis_step(&signal, &self.filters);
                    stack.push((lo_child, lo));
                    stack.push((hi_child, hi));
                }
                None => {
                    let k = node.leaf.expect("childless nodes are leaves");
                    coeffs[k] = signal;
                }
            }
        }
        Ok(SubbandFrame { coeffs, frame_len: frame.len() })
    }

    pub fn inverse(&self, sub: &SubbandFrame) -> Result<Vec<f64>> {
        self.check_frame_len(sub.frame_len)?;
        if sub.coeffs.len() != self.tree.leaf_count() {
            return invalid(format!(
                "expected {} subbands, got {}",
                self.tree.leaf_count(),
                sub.coeffs.len()
            ));
        }
        for (k, c) in sub.coeffs.iter().enumerate() {
            let expected = self.tree.leaf_len(k, sub.frame_len);
            if c.len() != expected {
                return invalid(format!(
                    "subband {k} has {} coefficients, expected {expected}",
                    c.len()
                ));
            }
        }
        Ok(self.synthesize(0, sub))
    }

    fn synthesize(&self, idx: usize, sub: &SubbandFrame) -> Vec<f64> {
        let node = &self.tree.nodes()[idx];
        match node.children {
            Some([lo, hi]) => {
                let lo = self.synthesize(lo, sub);
                let hi = self.synthesize(hi, sub);
                synthesis_step(&lo, &hi, &self.filters)
            }
            None => sub.coeffs[node.leaf.expect("childless nodes are leaves")].clone(),
        }
    }
}

pub fn pwpt_forward(
    frame: &[f64],
    tree: &PerceptualTree,
    filters: &FilterQuad,
) -> Result<SubbandFrame> {
    PwpTransform::new(tree.clone(), filters.clone()).forward(frame)
}

pub fn pwpt_inverse(
    sub: &SubbandFrame,
    tree: &PerceptualTree,
    filters: &FilterQuad,
) -> Result<Vec<f64>> {
    PwpTransform::new(tree.clone(), filters.clone()).inverse(sub)
}
