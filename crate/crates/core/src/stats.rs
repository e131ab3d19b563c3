//! Histograms, maximum-likelihood PDF fits, AIC and Kullback-Leibler divergences.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

/// Probabilities below this are floored inside the KL logarithm.
pub const KL_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub probs: Vec<f64>,
}

impl Histogram {
    pub fn bin_count(&self) -> usize {
        self.probs.len()
    }

    pub fn bin_width(&self, i: usize) -> f64 {
        self.bin_edges[i + 1] - self.bin_edges[i]
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        0.5 * (self.bin_edges[i] + self.bin_edges[i + 1])
    }

    /// Probability per unit of the binned variable, for overlaying PDFs.
    pub fn density(&self, i: usize) -> f64 {
        self.probs[i] / self.bin_width(i)
    }

    fn same_edges(&self, other: &Histogram) -> bool {
        self.bin_edges.len() == other.bin_edges.len()
            && self
                .bin_edges
                .iter()
                .zip(&other.bin_edges)
                .all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0))
    }
}

/// Equal-width histogram of non-negative values over `[0, max]`.
///
/// All-zero input spans `[0, 1]`. A value equal to the upper edge falls in the last bin.
pub fn histogram(values: &[f64], n_bins: usize) -> Result<Histogram> {
    if values.is_empty() {
        return invalid("histogram of no values");
    }
    if n_bins < 2 {
        return invalid(format!("need at least 2 bins, got {n_bins}"));
    }
    if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return invalid("histogram values must be finite and non-negative");
    }
    let max = values.iter().copied().fold(0.0, f64::max);
    let top = if max > 0.0 { max } else { 1.0 };
    let edges: Vec<f64> = (0..=n_bins).map(|i| top * i as f64 / n_bins as f64).collect();
    histogram_with_edges(values, &edges)
}

/// Histogram over caller-supplied ascending edges; values outside are clamped to the end bins.
pub fn histogram_with_edges(values: &[f64], edges: &[f64]) -> Result<Histogram> {
    if values.is_empty() {
        return invalid("histogram of no values");
    }
    if edges.len() < 3 || edges.windows(2).any(|w| !(w[1] > w[0])) {
        return invalid("bin edges must be strictly ascending with at least 2 bins");
    }
    let n_bins = edges.len() - 1;
    let lo = edges[0];
    let hi = edges[n_bins];
    let uniform_width = (hi - lo) / n_bins as f64;
    let uniform = edges
        .iter()
        .enumerate()
        .all(|(i, &e)| (e - (lo + uniform_width * i as f64)).abs() <= 1e-9 * uniform_width);
    let mut counts = vec![0usize; n_bins];
    for &v in values {
        let bin = if uniform {
            (((v - lo) / uniform_width).floor().max(0.0) as usize).min(n_bins - 1)
        } else {
            edges[1..n_bins].partition_point(|&e| e <= v)
        };
        counts[bin] += 1;
    }
    let total = values.len() as f64;
    Ok(Histogram {
        bin_edges: edges.to_vec(),
        probs: counts.iter().map(|&c| c as f64 / total).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PdfFamily {
    Exponential { scale: f64 },
    Gaussian { mean: f64, variance: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FittedPdf {
    pub family: PdfFamily,
    pub log_likelihood: f64,
    pub sample_count: usize,
}

impl FittedPdf {
    /// Number of free parameters.
    pub fn param_count(&self) -> usize {
        match self.family {
            PdfFamily::Exponential { .. } => 1,
            PdfFamily::Gaussian { .. } => 2,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            PdfFamily::Exponential { .. } => "exponential",
            PdfFamily::Gaussian { .. } => "gaussian",
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match self.family {
            PdfFamily::Exponential { scale } => {
                if x < 0.0 {
                    0.0
                } else {
                    (-x / scale).exp() / scale
                }
            }
            PdfFamily::Gaussian { mean, variance } => {
                (-(x - mean).powi(2) / (2.0 * variance)).exp() / (2.0 * PI * variance).sqrt()
            }
        }
    }

    /// Probability mass of each histogram bin under this PDF, renormalized over the bins.
    pub fn discretize(&self, edges: &[f64]) -> Result<Histogram> {
        if edges.len() < 3 || edges.windows(2).any(|w| !(w[1] > w[0])) {
            return invalid("bin edges must be strictly ascending with at least 2 bins");
        }
        let mass: Vec<f64> = edges
            .windows(2)
            .map(|w| match self.family {
                PdfFamily::Exponential { scale } => {
                    let cdf = |x: f64| if x <= 0.0 { 0.0 } else { -(-x / scale).exp_m1() };
                    cdf(w[1]) - cdf(w[0])
                }
                PdfFamily::Gaussian { .. } => simpson(|x| self.pdf(x), w[0], w[1], 32),
            })
            .collect();
        let total: f64 = mass.iter().sum();
        if !(total > 0.0) {
            return Err(Error::DegenerateFit("PDF has no mass over the bins".into()));
        }
        Ok(Histogram {
            bin_edges: edges.to_vec(),
            probs: mass.iter().map(|m| m / total).collect(),
        })
    }
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels + panels % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        acc += f(a + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// Maximum-likelihood exponential fit: the scale is the sample mean.
pub fn fit_exponential(values: &[f64]) -> Result<FittedPdf> {
    if values.is_empty() {
        return invalid("exponential fit of no values");
    }
    if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return invalid("exponential fit needs finite non-negative values");
    }
    let n = values.len() as f64;
    let scale = values.iter().sum::<f64>() / n;
    if !(scale > 0.0) {
        return Err(Error::DegenerateFit("exponential fit of all-zero data".into()));
    }
    Ok(FittedPdf {
        family: PdfFamily::Exponential { scale },
        log_likelihood: -n * (scale.ln() + 1.0),
        sample_count: values.len(),
    })
}

/// Maximum-likelihood Gaussian fit with the biased (1/n) variance.
pub fn fit_gaussian(values: &[f64]) -> Result<FittedPdf> {
    if values.len() < 2 {
        return invalid("Gaussian fit needs at least 2 values");
    }
    if values.iter().any(|v| !v.is_finite()) {
        return invalid("Gaussian fit needs finite values");
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    if !(variance > 0.0) {
        return Err(Error::DegenerateFit("Gaussian fit of zero-variance data".into()));
    }
    Ok(FittedPdf {
        family: PdfFamily::Gaussian { mean, variance },
        log_likelihood: -0.5 * n * ((2.0 * PI * variance).ln() + 1.0),
        sample_count: values.len(),
    })
}

/// Akaike information criterion, `2k - 2 ln L`. Lower is a better fit.
pub fn aic(fit: &FittedPdf) -> f64 {
    2.0 * fit.param_count() as f64 - 2.0 * fit.log_likelihood
}

/// `sum p_i ln(p_i / q_i)` over bins with `p_i > 0`, with `q_i` floored at [`KL_FLOOR`].
pub fn kl_divergence(p: &Histogram, q: &Histogram) -> Result<f64> {
    if !p.same_edges(q) {
        return invalid("KL divergence needs histograms with identical bin edges");
    }
    Ok(p.probs
        .iter()
        .zip(&q.probs)
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(&pi, &qi)| pi * (pi / qi.max(KL_FLOOR)).ln())
        .sum())
}

/// Symmetric KL divergence, `(KL(p, q) + KL(q, p)) / 2`.
pub fn symmetric_kl(p: &Histogram, q: &Histogram) -> Result<f64> {
    Ok((kl_divergence(p, q)? + kl_divergence(q, p)?) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Exp, Normal};

    fn hist(probs: &[f64]) -> Histogram {
        Histogram {
            bin_edges: (0..=probs.len()).map(|i| i as f64).collect(),
            probs: probs.to_vec(),
        }
    }

    #[test]
    fn histogram_examples() {
        let h = histogram(&[1.0, 1.0, 3.0, 3.0], 2).unwrap();
        assert_eq!(h.probs, vec![0.5, 0.5]);
        let h = histogram(&[0.0, 0.0, 0.0, 9.0], 3).unwrap();
        assert_eq!(h.bin_edges, vec![0.0, 3.0, 6.0, 9.0]);
        assert_eq!(h.probs, vec![0.75, 0.0, 0.25]);
        let h = histogram(&[0.0; 5], 4).unwrap();
        assert_eq!(h.bin_edges[4], 1.0);
        assert_eq!(h.probs[0], 1.0);
        assert!(histogram(&[], 4).is_err());
        assert!(histogram(&[1.0], 1).is_err());
        assert!(histogram(&[-1.0], 3).is_err());
    }

    #[test]
    fn non_uniform_edges() {
        let h = histogram_with_edges(&[0.5, 1.5, 2.5, 9.0], &[0.0, 1.0, 2.0, 10.0]).unwrap();
        assert_eq!(h.probs, vec![0.25, 0.25, 0.5]);
    }

    #[test]
    fn exponential_fit() {
        let f = fit_exponential(&[1.0, 3.0]).unwrap();
        assert_eq!(f.family, PdfFamily::Exponential { scale: 2.0 });
        let f = fit_exponential(&[5.0]).unwrap();
        assert!((f.log_likelihood + (5f64.ln() + 1.0)).abs() < 1e-15);
        assert!(matches!(fit_exponential(&[0.0, 0.0]), Err(Error::DegenerateFit(_))));
        assert!(fit_exponential(&[]).is_err());
    }

    #[test]
    fn exponential_log_likelihood_matches_density_sum() {
        let xs = [0.2, 1.7, 0.01, 3.3, 0.9];
        let f = fit_exponential(&xs).unwrap();
        let direct: f64 = xs.iter().map(|&x| f.pdf(x).ln()).sum();
        assert!((direct - f.log_likelihood).abs() < 1e-12);
        let g = fit_gaussian(&xs).unwrap();
        let direct: f64 = xs.iter().map(|&x| g.pdf(x).ln()).sum();
        assert!((direct - g.log_likelihood).abs() < 1e-12);
    }

    #[test]
    fn gaussian_fit() {
        let g = fit_gaussian(&[-1.0, 1.0]).unwrap();
        assert_eq!(g.family, PdfFamily::Gaussian { mean: 0.0, variance: 1.0 });
        assert!(matches!(fit_gaussian(&[2.0, 2.0, 2.0]), Err(Error::DegenerateFit(_))));
        assert!(fit_gaussian(&[1.0]).is_err());
    }

    #[test]
    fn monte_carlo_fits() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let exp = Exp::new(1.0).unwrap();
        let xs: Vec<f64> = (0..10_000).map(|_| exp.sample(&mut rng)).collect();
        let PdfFamily::Exponential { scale } = fit_exponential(&xs).unwrap().family else {
            unreachable!()
        };
        assert!((0.97..=1.03).contains(&scale), "{scale}");

        let normal = Normal::new(0.0, 1.0).unwrap();
        let ys: Vec<f64> = (0..10_000).map(|_| normal.sample(&mut rng)).collect();
        let PdfFamily::Gaussian { mean, .. } = fit_gaussian(&ys).unwrap().family else {
            unreachable!()
        };
        assert!(mean.abs() <= 0.05, "{mean}");
    }

    #[test]
    fn aic_formula() {
        let e = FittedPdf {
            family: PdfFamily::Exponential { scale: 1.0 },
            log_likelihood: -10.0,
            sample_count: 1,
        };
        assert_eq!(aic(&e), 22.0);
        let g = FittedPdf {
            family: PdfFamily::Gaussian { mean: 0.0, variance: 1.0 },
            log_likelihood: -10.0,
            sample_count: 1,
        };
        assert_eq!(aic(&g), 24.0);
    }

    #[test]
    fn aic_prefers_exponential_on_exponential_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let exp = Exp::new(1.0).unwrap();
        let wins = (0..100)
            .filter(|_| {
                let xs: Vec<f64> = (0..1000).map(|_| exp.sample(&mut rng)).collect();
                aic(&fit_exponential(&xs).unwrap()) < aic(&fit_gaussian(&xs).unwrap())
            })
            .count();
        assert!(wins >= 95, "{wins}");
    }

    #[test]
    fn aic_prefers_gaussian_on_gaussian_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let normal = Normal::new(10.0, 1.0).unwrap();
        let xs: Vec<f64> = (0..1000).map(|_| normal.sample(&mut rng)).collect();
        assert!(aic(&fit_gaussian(&xs).unwrap()) < aic(&fit_exponential(&xs).unwrap()));
    }

    #[test]
    fn kl_examples() {
        let p = hist(&[0.5, 0.5]);
        let q = hist(&[0.9, 0.1]);
        assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        let expected = 0.5 * (5.0f64 / 9.0).ln() + 0.5 * 5f64.ln();
        assert!((kl_divergence(&p, &q).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.510_825_623_765_990_7).abs() < 1e-12);
        let rev = 0.9 * (0.9f64 / 0.5).ln() + 0.1 * (0.1f64 / 0.5).ln();
        assert!((kl_divergence(&q, &p).unwrap() - rev).abs() < 1e-12);
        let skl = symmetric_kl(&p, &q).unwrap();
        assert!((skl - (expected + rev) / 2.0).abs() < 1e-12);
        assert!((skl - 0.4394).abs() < 1e-4);
        let one = hist(&[1.0, 0.0]);
        assert!((kl_divergence(&one, &p).unwrap() - 2f64.ln()).abs() < 1e-12);
        let other = Histogram { bin_edges: vec![0.0, 1.0, 3.0], probs: vec![0.5, 0.5] };
        assert!(kl_divergence(&p, &other).is_err());
    }

    #[test]
    fn kl_zero_q_is_floored() {
        let p = hist(&[0.5, 0.5]);
        let q = hist(&[1.0, 0.0]);
        let v = kl_divergence(&p, &q).unwrap();
        assert!(v.is_finite() && v > 10.0);
    }

    #[test]
    fn discretized_exponential_sums_to_one() {
        let f = fit_exponential(&[1.0, 2.0, 3.0]).unwrap();
        let h = f.discretize(&[0.0, 1.0, 2.0, 4.0, 8.0]).unwrap();
        assert!((h.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(h.probs.windows(2).all(|w| w[0] > 0.0 && w[1] > 0.0));
        let g = fit_gaussian(&[1.0, 2.0, 3.0]).unwrap();
        let h = g.discretize(&[-5.0, 0.0, 2.0, 9.0]).unwrap();
        assert!((h.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    fn positive_probs(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.01f64..1.0, n).prop_map(|v| {
            let s: f64 = v.iter().sum();
            v.into_iter().map(|x| x / s).collect()
        })
    }

    proptest! {
        #[test]
        fn kl_properties(p in positive_probs(6), q in positive_probs(6)) {
            let (p, q) = (hist(&p), hist(&q));
            prop_assert!(kl_divergence(&p, &q).unwrap() >= -1e-12);
            prop_assert_eq!(symmetric_kl(&p, &q).unwrap(), symmetric_kl(&q, &p).unwrap());
            prop_assert_eq!(symmetric_kl(&p, &p).unwrap(), 0.0);
        }

        #[test]
        fn histogram_sums_to_one(xs in prop::collection::vec(0.0f64..100.0, 1..200), bins in 2usize..60) {
            let h = histogram(&xs, bins).unwrap();
            prop_assert!((h.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!(h.probs.iter().all(|&p| p >= 0.0));
        }

        #[test]
        fn exponential_scale_is_mean(xs in prop::collection::vec(0.001f64..50.0, 1..100)) {
            let mean = xs.iter().sum::<f64>() / xs.len() as f64;
            prop_assert_eq!(fit_exponential(&xs).unwrap().family, PdfFamily::Exponential { scale: mean });
        }
    }
}
