//! Statistical exports: subband TE histograms with fitted PDFs, an AIC
//! table, the threshold-versus-SNR curve and a spectrogram of the mixture.
//!
//! TE values are pooled over all frames of a signal, per subband.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use tepwp::framing::frame_signal;
use tepwp::metrics::{mix_at_snr, spectrogram};
use tepwp::pipeline::{teager_subbands, EnhanceConfig};
use tepwp::pwpt::{db10_filters, PwpTransform};
use tepwp::stats::{aic, fit_exponential, fit_gaussian, histogram, symmetric_kl, FittedPdf, Histogram, PdfFamily};
use tepwp::threshold::threshold_curve;
use tepwp::AudioBuffer;

use crate::error::{CliError, CliResult};
use crate::evaluate::write_text;

pub const AIC_FILE: &str = "aic.csv";
pub const THRESHOLD_FILE: &str = "thresholds.csv";
pub const SPECTROGRAM_FILE: &str = "spectrogram_noisy.csv";
pub const HISTOGRAM_DIR: &str = "histograms";
const SPECTROGRAM_FRAME: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Noisy,
    Noise,
    Clean,
}

impl Role {
    pub const ALL: [Role; 3] = [Role::Noisy, Role::Noise, Role::Clean];

    pub fn name(self) -> &'static str {
        match self {
            Self::Noisy => "noisy",
            Self::Noise => "noise",
            Self::Clean => "clean",
        }
    }
}

/// Fits of one role's pooled TE values in one subband.
#[derive(Debug, Clone, PartialEq)]
pub struct SubbandFit {
    pub role: Role,
    pub subband: usize,
    pub band_hz: (f64, f64),
    pub values: Vec<f64>,
    pub exponential: Option<FittedPdf>,
    pub gaussian: Option<FittedPdf>,
}

impl SubbandFit {
    pub fn aic_exponential(&self) -> Option<f64> {
        self.exponential.as_ref().map(aic)
    }

    pub fn aic_gaussian(&self) -> Option<f64> {
        self.gaussian.as_ref().map(aic)
    }

    /// Family with the lower AIC, if both fits exist.
    pub fn better(&self) -> Option<&'static str> {
        match (self.aic_exponential(), self.aic_gaussian()) {
            (Some(e), Some(g)) => Some(if e < g { "exponential" } else { "gaussian" }),
            _ => None,
        }
    }

    pub fn exponential_wins(&self) -> bool {
        self.better() == Some("exponential")
    }
}

/// Pooled per-subband TE values of `signal` under the config's tree and framing.
pub fn pooled_teager(signal: &AudioBuffer, cfg: &EnhanceConfig) -> CliResult<Vec<Vec<f64>>> {
    let transform = PwpTransform::new(cfg.tree_for(signal.sample_rate())?, db10_filters());
    let frames = frame_signal(signal, cfg.frame_len, cfg.hop)?;
    let mut pooled = vec![Vec::new(); transform.tree().leaf_count()];
    for frame in frames.frames() {
        for (acc, te) in pooled.iter_mut().zip(teager_subbands(&transform.forward(frame)?)?) {
            acc.extend(te.values);
        }
    }
    Ok(pooled)
}

/// Exponential and Gaussian fits for every role and subband, role-major.
pub fn fit_roles(clean: &AudioBuffer, noise: &AudioBuffer, snr_db: f64, cfg: &EnhanceConfig) -> CliResult<Vec<SubbandFit>> {
    let mix = mix_at_snr(clean, noise, snr_db)?;
    let bands = cfg.tree_for(clean.sample_rate())?.leaf_bands();
    let mut out = Vec::new();
    for role in Role::ALL {
        let signal = match role {
            Role::Noisy => &mix.noisy,
            Role::Noise => &mix.scaled_noise,
            Role::Clean => clean,
        };
        for (k, values) in pooled_teager(signal, cfg)?.into_iter().enumerate() {
            out.push(SubbandFit {
                role,
                subband: k,
                band_hz: (bands[k].lo, bands[k].hi),
                exponential: fit_exponential(&values).ok(),
                gaussian: fit_gaussian(&values).ok(),
                values,
            });
        }
    }
    Ok(out)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

fn skl_to(h: &Histogram, fit: Option<&FittedPdf>) -> Option<f64> {
    symmetric_kl(h, &fit?.discretize(&h.bin_edges).ok()?).ok()
}

pub fn aic_csv(fits: &[SubbandFit], bins: usize) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "role", "subband", "band_lo_hz", "band_hi_hz", "count", "exp_scale", "aic_exponential", "gauss_mean",
        "gauss_var", "aic_gaussian", "skl_exponential", "skl_gaussian", "better",
    ])
    .expect("writing to memory");
    for f in fits {
        let (mean, var) = match f.gaussian.map(|g| g.family) {
            Some(PdfFamily::Gaussian { mean, variance }) => (Some(mean), Some(variance)),
            _ => (None, None),
        };
        let scale = match f.exponential.map(|e| e.family) {
            Some(PdfFamily::Exponential { scale }) => Some(scale),
            _ => None,
        };
        let hist = histogram(&f.values, bins).ok();
        let skl_e = hist.as_ref().and_then(|h| skl_to(h, f.exponential.as_ref()));
        let skl_g = hist.as_ref().and_then(|h| skl_to(h, f.gaussian.as_ref()));
        w.write_record([
            f.role.name().to_string(),
            f.subband.to_string(),
            f.band_hz.0.to_string(),
            f.band_hz.1.to_string(),
            f.values.len().to_string(),
            opt(scale),
            opt(f.aic_exponential()),
            opt(mean),
            opt(var),
            opt(f.aic_gaussian()),
            opt(skl_e),
            opt(skl_g),
            f.better().unwrap_or("").to_string(),
        ])
        .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("UTF-8")
}

/// Empirical density per bin next to both fitted PDFs at the bin centre.
pub fn histogram_csv(fit: &SubbandFit, bins: usize) -> CliResult<String> {
    let h = histogram(&fit.values, bins)?;
    let mut out = String::from("bin_lo,bin_hi,density,exponential_pdf,gaussian_pdf\n");
    for i in 0..h.bin_count() {
        let c = h.bin_center(i);
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            h.bin_edges[i],
            h.bin_edges[i + 1],
            h.density(i),
            fit.exponential.map(|e| e.pdf(c).to_string()).unwrap_or_default(),
            fit.gaussian.map(|g| g.pdf(c).to_string()).unwrap_or_default(),
        );
    }
    Ok(out)
}

pub fn threshold_csv() -> String {
    let mut out = String::from("snr_db,lambda_exponential,lambda_gaussian\n");
    for (db, e, g) in threshold_curve((-15..=15).map(f64::from)) {
        let _ = writeln!(out, "{db},{e},{g}");
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub fits: Vec<SubbandFit>,
    pub out_dir: PathBuf,
}

/// Writes all analysis exports for `clean` mixed with `noise` at `snr_db`.
pub fn cmd_analyze(
    clean: &AudioBuffer,
    noise: &AudioBuffer,
    snr_db: f64,
    cfg: &EnhanceConfig,
    out_dir: &Path,
) -> CliResult<Analysis> {
    cfg.validate()?;
    let hist_dir = out_dir.join(HISTOGRAM_DIR);
    std::fs::create_dir_all(&hist_dir).map_err(|e| CliError::io(&hist_dir, e))?;
    let fits = fit_roles(clean, noise, snr_db, cfg)?;
    write_text(&out_dir.join(AIC_FILE), &aic_csv(&fits, cfg.histogram_bins))?;
    for f in &fits {
        let name = format!("{}_{:02}.csv", f.role.name(), f.subband);
        write_text(&hist_dir.join(name), &histogram_csv(f, cfg.histogram_bins)?)?;
    }
    write_text(&out_dir.join(THRESHOLD_FILE), &threshold_csv())?;
    let mix = mix_at_snr(clean, noise, snr_db)?;
    let spec = spectrogram(&mix.noisy, SPECTROGRAM_FRAME, SPECTROGRAM_FRAME / 2)?;
    write_text(&out_dir.join(SPECTROGRAM_FILE), &spec.to_csv())?;
    Ok(Analysis { fits, out_dir: out_dir.to_path_buf() })
}
