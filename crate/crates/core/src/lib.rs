//! Speech enhancement by thresholding perceptual wavelet packet coefficients.
//!
//! A noisy signal is cut into Hamming-windowed frames, each frame is
//! decomposed by a Daubechies-10 wavelet packet tree whose 24 leaves follow
//! the mel scale, and the Teager energy of every subband drives an
//! exponential-model threshold. Coefficients are shrunk with a blend of
//! mu-law and semisoft thresholding, then inverted and overlap-added.
//!
//! The crate also carries the evaluation side: noise mixing, segmental SNR,
//! weighted spectral slope, spectrograms, histogram/PDF fitting with AIC and
//! Kullback-Leibler divergences.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audio;
pub mod error;
pub mod framing;
pub mod metrics;
pub mod noise;
pub mod pipeline;
pub mod pwpt;
pub mod shrink;
pub mod stats;
pub mod synth;
pub mod teager;
pub mod threshold;

pub use audio::AudioBuffer;
pub use error::{Error, Result};
