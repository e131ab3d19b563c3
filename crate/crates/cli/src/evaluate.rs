//! Batch evaluation over a clean × noise × SNR × method grid.

use std::path::{Path, PathBuf};
use std::thread;

use tepwp::metrics::{mix_at_snr, segsnr, wss, SEGSNR_DEFAULT_FRAME};
use tepwp::noise::NoiseMode;
use tepwp::pipeline::enhance_signal;
use tepwp::AudioBuffer;

use crate::config::{Method, RunConfig};
use crate::error::{CliError, CliResult};
use crate::source::Source;

pub const REPORT_FILE: &str = "evaluation.csv";
pub const COLUMNS: [&str; 9] =
    ["clean", "noise", "snr_db", "method", "snrseg_noisy", "snrseg_enh", "improvement", "wss", "error"];

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub clean: Vec<String>,
    pub noise: Vec<String>,
    pub snrs: Vec<f64>,
    pub methods: Vec<Method>,
    pub out_dir: PathBuf,
    pub config: RunConfig,
    /// Frame length for segmental SNR scoring.
    pub score_frame: usize,
}

impl Manifest {
    pub fn new(clean: Vec<String>, noise: Vec<String>, snrs: Vec<f64>, methods: Vec<Method>, out_dir: PathBuf) -> Self {
        Self { clean, noise, snrs, methods, out_dir, config: RunConfig::default(), score_frame: SEGSNR_DEFAULT_FRAME }
    }

    pub fn validate(&self) -> CliResult<()> {
        let empty = [
            ("clean input", self.clean.is_empty()),
            ("noise input", self.noise.is_empty()),
            ("SNR", self.snrs.is_empty()),
            ("method", self.methods.is_empty()),
        ];
        if let Some((what, _)) = empty.iter().find(|(_, e)| *e) {
            return Err(CliError::format(format!("evaluation needs at least one {what}")));
        }
        if let Some(s) = self.snrs.iter().find(|s| !s.is_finite()) {
            return Err(CliError::format(format!("SNR {s} is not finite")));
        }
        Ok(())
    }

    pub fn cell_count(&self) -> usize {
        self.clean.len() * self.noise.len() * self.snrs.len() * self.methods.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scores {
    pub snrseg_noisy: f64,
    pub snrseg_enhanced: f64,
    pub wss: f64,
}

impl Scores {
    pub fn improvement(&self) -> f64 {
        self.snrseg_enhanced - self.snrseg_noisy
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub clean: String,
    pub noise: String,
    pub snr_db: f64,
    pub method: Method,
    pub outcome: Result<Scores, String>,
}

impl Row {
    fn record(&self) -> Vec<String> {
        let mut r = vec![self.clean.clone(), self.noise.clone(), self.snr_db.to_string(), self.method.to_string()];
        match &self.outcome {
            Ok(s) => {
                for v in [s.snrseg_noisy, s.snrseg_enhanced, s.improvement(), s.wss] {
                    r.push(format!("{v:.6}"));
                }
                r.push(String::new());
            }
            Err(e) => {
                r.extend(vec![String::new(); 4]);
                r.push(e.clone());
            }
        }
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub rows: Vec<Row>,
    pub path: PathBuf,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.outcome.is_err()).count()
    }
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COLUMNS).expect("writing to memory");
    for r in rows {
        w.write_record(r.record()).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("records are UTF-8")
}

fn score_cell(
    clean: &AudioBuffer,
    noise: &AudioBuffer,
    snr_db: f64,
    method: Method,
    cfg: &RunConfig,
    score_frame: usize,
) -> CliResult<Scores> {
    let mix = mix_at_snr(clean, noise, snr_db)?;
    let mut run = cfg.clone();
    run.enhance = method.configure(&run.enhance);
    let ecfg = run.resolve(clean.sample_rate())?;
    let reference = (ecfg.noise_mode == NoiseMode::Oracle).then_some(&mix.scaled_noise);
    let enhanced = enhance_signal(&mix.noisy, reference, &ecfg)?;
    Ok(Scores {
        snrseg_noisy: segsnr(clean, &mix.noisy, score_frame)?,
        snrseg_enhanced: segsnr(clean, &enhanced, score_frame)?,
        wss: wss(clean, &enhanced)?,
    })
}

/// Scores every grid cell. Cells run in parallel; rows come back in grid order.
pub fn evaluate_grid(m: &Manifest) -> CliResult<Vec<Row>> {
    m.validate()?;
    let clean: Vec<Result<AudioBuffer, String>> =
        m.clean.iter().map(|s| Source::parse(s).and_then(|src| src.load()).map_err(|e| e.to_string())).collect();
    let noise: Vec<Vec<Result<AudioBuffer, String>>> = clean
        .iter()
        .map(|c| {
            m.noise
                .iter()
                .map(|s| match c {
                    Ok(c) => Source::parse(s).and_then(|src| src.load_noise(c)).map_err(|e| e.to_string()),
                    Err(e) => Err(e.clone()),
                })
                .collect()
        })
        .collect();

    let mut cells = Vec::with_capacity(m.cell_count());
    for (ci, c) in m.clean.iter().enumerate() {
        for (ni, n) in m.noise.iter().enumerate() {
            for &snr in &m.snrs {
                for &method in &m.methods {
                    cells.push((ci, ni, c, n, snr, method));
                }
            }
        }
    }
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(cells.len()).max(1);
    let chunk = cells.len().div_ceil(workers);
    let rows = thread::scope(|scope| {
        let handles: Vec<_> = cells
            .chunks(chunk)
            .map(|part| {
                let (clean, noise) = (&clean, &noise);
                scope.spawn(move || {
                    part.iter()
                        .map(|&(ci, ni, c, n, snr, method)| {
                            let outcome = match (&clean[ci], &noise[ci][ni]) {
                                (Ok(cb), Ok(nb)) => score_cell(cb, nb, snr, method, &m.config, m.score_frame)
                                    .map_err(|e| e.to_string()),
                                (Err(e), _) | (_, Err(e)) => Err(e.clone()),
                            };
                            Row { clean: c.clone(), noise: n.clone(), snr_db: snr, method, outcome }
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("evaluation worker panicked")).collect()
    });
    Ok(rows)
}

/// Runs the grid and writes `evaluation.csv` into the output directory.
pub fn cmd_evaluate(m: &Manifest) -> CliResult<Report> {
    m.validate()?;
    std::fs::create_dir_all(&m.out_dir).map_err(|e| CliError::io(&m.out_dir, e))?;
    let rows = evaluate_grid(m)?;
    let path = m.out_dir.join(REPORT_FILE);
    write_text(&path, &to_csv(&rows))?;
    Ok(Report { rows, path })
}

pub(crate) fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}
