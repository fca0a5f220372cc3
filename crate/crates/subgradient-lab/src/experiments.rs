//! Experiment drivers behind the CLI subcommands and the runnable
//! examples: the closed-form-vs-numeric spectrum comparison, the
//! network-independence sweep on the two-cliques construction, and the
//! step-size sweep that exposes the inversion between centralized and
//! distributed termination times.
//!
//! Everything here is deterministic given its seed; parallel fan-out
//! aggregates by index so output does not depend on scheduling.

use crate::counterexample::{AdversarialSelector, CounterexampleConfig};
use crate::graph::{build_gn_prime, build_standard, mixing_matrix, MixingMatrix, Topology};
use crate::problem::{make_quartic_elasticnet, ConstraintSet, LocalFunction, ProblemInstance};
use crate::schedule::StepSchedule;
use crate::solver::{terminate_on_mapping, RunRecord, Solver, Termination, Variant, WindowRule};
use crate::{invalid, Result};
use nalgebra::{DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

/// Closed-form vs numerically computed two-cliques eigenvalues.
#[derive(Debug, Clone)]
pub struct SpectrumComparison {
    pub n: usize,
    pub eps: f64,
    pub closed: Vec<f64>,
    pub numeric: Vec<f64>,
}

impl SpectrumComparison {
    pub fn max_abs_diff(&self) -> f64 {
        self.closed
            .iter()
            .zip(self.numeric.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,closed_form,numeric,abs_diff\n");
        for (i, (c, m)) in self.closed.iter().zip(self.numeric.iter()).enumerate() {
            out.push_str(&format!("{},{},{},{}\n", i, c, m, (c - m).abs()));
        }
        out
    }
}

/// Eigenvalues of the two-cliques mixing matrix both ways: the closed-form
/// multiset and a dense symmetric eigensolve, each sorted descending.
pub fn spectrum_comparison(n: usize, eps: f64) -> Result<SpectrumComparison> {
    let closed = crate::graph::gn_prime_spectrum(n, eps)?;
    let w = mixing_matrix(&build_gn_prime(n)?, eps)?;
    let eig = SymmetricEigen::new(w.entries().clone());
    let mut numeric: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    numeric.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(SpectrumComparison {
        n,
        eps,
        closed,
        numeric,
    })
}

/// One curve of the network-(in)dependence experiment.
#[derive(Debug, Clone)]
pub struct IndependenceSeries {
    pub n: usize,
    pub eps: f64,
    pub beta: f64,
    /// First recorded `t` from which the rescaled gap stays at or below 1.
    pub first_below_one: Option<u64>,
    pub record: RunRecord,
}

impl IndependenceSeries {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,scaled_gap,below_one\n");
        for r in &self.record.rows {
            out.push_str(&format!(
                "{},{},{}\n",
                r.t,
                r.scaled_gap,
                r.scaled_gap <= 1.0
            ));
        }
        out
    }

    pub fn terminal_scaled_gap(&self) -> f64 {
        self.record.final_row().scaled_gap
    }
}

/// Runs the adversarial construction with weight `1/n` for each requested
/// clique size, rescaling the gap by `t^(1-beta)`. With `beta = 1/2` the
/// terminal values grow with `n`; with `beta` above 1/2 every curve
/// eventually drops below one.
pub fn fig_independence(
    n_list: &[usize],
    beta: f64,
    horizon: u64,
    gamma: f64,
    a: f64,
) -> Result<Vec<IndependenceSeries>> {
    let schedule = StepSchedule::polynomial(beta)?;
    n_list
        .par_iter()
        .map(|&n| {
            let eps = 1.0 / n as f64;
            let cfg = CounterexampleConfig::new(n, eps, gamma, a, horizon)?;
            let problem = cfg.problem()?;
            let w = cfg.mixing()?;
            let solver = Solver::new(&w, &problem, schedule, Variant::MixAfterProject)?;
            let mut selector = AdversarialSelector::new(&cfg, schedule)?;
            let record = solver.run(horizon, WindowRule::Half, None, Some(&mut selector))?;
            // last recorded excursion above 1 bounds the flag from below
            let mut first_below_one = None;
            for r in record.rows.iter().rev() {
                if r.scaled_gap <= 1.0 {
                    first_below_one = Some(r.t);
                } else {
                    break;
                }
            }
            Ok(IndependenceSeries {
                n,
                eps,
                beta,
                first_below_one,
                record,
            })
        })
        .collect()
}

/// Parameters of the step-size sweep. Defaults reproduce the qualitative
/// trends at desk scale: a single data row (so the quartic term is flat
/// along a line and the optimum occasionally sits on a kink), ten agents
/// on the line graph with weight 1/4, and the box `[0, 2]^2`.
#[derive(Debug, Clone)]
pub struct InversionConfig {
    pub beta_grid: Vec<f64>,
    pub runs: usize,
    pub seed: u64,
    pub threshold: f64,
    pub zero_band: f64,
    pub k: usize,
    pub dimension: usize,
    pub lambda1: f64,
    pub lambda2: f64,
    pub noise_std: f64,
    pub n_agents: usize,
    pub eps: f64,
    pub cap: u64,
    pub box_lo: f64,
    pub box_hi: f64,
}

impl Default for InversionConfig {
    fn default() -> Self {
        InversionConfig {
            beta_grid: (0..10).map(|i| (50 + 5 * i) as f64 / 100.0).collect(),
            runs: 500,
            seed: 0,
            threshold: 0.03,
            zero_band: 1e-6,
            k: 1,
            dimension: 2,
            lambda1: 1.0,
            lambda2: 0.05,
            noise_std: 0.2,
            n_agents: 10,
            eps: 0.25,
            cap: 1_000_000,
            box_lo: 0.0,
            box_hi: 2.0,
        }
    }
}

/// Aggregates for one step-size exponent.
#[derive(Debug, Clone, Copy)]
pub struct InversionRow {
    pub beta: f64,
    pub mean_iters_centralized: f64,
    pub se_c: f64,
    pub mean_iters_distributed: f64,
    pub se_d: f64,
    pub capped_runs: u64,
}

#[derive(Debug, Clone)]
pub struct InversionTable {
    pub rows: Vec<InversionRow>,
    pub runs: usize,
}

impl InversionTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "beta,mean_iters_centralized,se_c,mean_iters_distributed,se_d,capped_runs\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.beta,
                r.mean_iters_centralized,
                r.se_c,
                r.mean_iters_distributed,
                r.se_d,
                r.capped_runs
            ));
        }
        out
    }

    pub fn centralized_means(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.mean_iters_centralized).collect()
    }

    pub fn distributed_means(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.mean_iters_distributed).collect()
    }

    /// Share of (draw, method) runs that hit the cap at the worst exponent.
    pub fn worst_capped_fraction(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.capped_runs as f64 / (2 * self.runs) as f64)
            .fold(0.0, f64::max)
    }
}

/// For each exponent: the same `runs` problem draws solved centralized and
/// distributed, counting iterations until the minimal-choice gradient
/// mapping satisfies `||s||_1 < threshold`. Draws are paired across
/// exponents; capped runs enter the mean at the cap and are counted.
pub fn fig_inversion(cfg: &InversionConfig) -> Result<InversionTable> {
    if cfg.runs == 0 {
        return invalid("need at least one run per exponent");
    }
    if cfg.beta_grid.is_empty()
        || cfg
            .beta_grid
            .iter()
            .any(|b| !(b.is_finite() && *b > 0.0 && *b < 1.0))
    {
        return invalid("beta grid must be non-empty and lie inside (0, 1)");
    }
    let constraint = ConstraintSet::bounded_box(
        DVector::from_element(cfg.dimension, cfg.box_lo),
        DVector::from_element(cfg.dimension, cfg.box_hi),
    )?;
    let problems: Vec<ProblemInstance> = (0..cfg.runs)
        .map(|draw| {
            make_quartic_elasticnet(
                cfg.k,
                cfg.dimension,
                cfg.lambda1,
                cfg.lambda2,
                cfg.noise_std,
                cfg.seed.wrapping_add(draw as u64),
                cfg.n_agents,
            )?
            .with_constraint(constraint.clone())
        })
        .collect::<Result<_>>()?;
    let line = build_standard(Topology::Line, cfg.n_agents)?;
    let w_line = mixing_matrix(&line, cfg.eps)?;
    let w_single = MixingMatrix::identity_single();

    let tasks: Vec<(usize, usize)> = (0..cfg.beta_grid.len())
        .flat_map(|b| (0..cfg.runs).map(move |r| (b, r)))
        .collect();
    let outcomes: Vec<(Termination, Termination)> = tasks
        .par_iter()
        .map(|&(b, r)| -> Result<(Termination, Termination)> {
            let schedule = StepSchedule::polynomial(cfg.beta_grid[b])?;
            let problem = &problems[r];
            let centralized = Solver::new(&w_single, problem, schedule, Variant::Centralized)?;
            let c =
                terminate_on_mapping(&centralized, None, cfg.threshold, cfg.zero_band, cfg.cap)?;
            let distributed = Solver::new(&w_line, problem, schedule, Variant::MixAfterProject)?;
            let d =
                terminate_on_mapping(&distributed, None, cfg.threshold, cfg.zero_band, cfg.cap)?;
            Ok((c, d))
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(cfg.beta_grid.len());
    for (b, &beta) in cfg.beta_grid.iter().enumerate() {
        let slice = &outcomes[b * cfg.runs..(b + 1) * cfg.runs];
        let c: Vec<f64> = slice.iter().map(|(c, _)| c.iterations() as f64).collect();
        let d: Vec<f64> = slice.iter().map(|(_, d)| d.iterations() as f64).collect();
        let capped = slice
            .iter()
            .map(|(c, d)| u64::from(c.capped()) + u64::from(d.capped()))
            .sum();
        let (mean_c, se_c) = mean_and_se(&c);
        let (mean_d, se_d) = mean_and_se(&d);
        rows.push(InversionRow {
            beta,
            mean_iters_centralized: mean_c,
            se_c,
            mean_iters_distributed: mean_d,
            se_d,
            capped_runs: capped,
        });
    }
    Ok(InversionTable {
        rows,
        runs: cfg.runs,
    })
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Spearman rank correlation; ties get their first-occurrence rank, which
/// is enough for the strictly increasing grids used here.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let rank = |v: &[f64]| -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
        let mut r = vec![0.0; v.len()];
        for (pos, &i) in idx.iter().enumerate() {
            r[i] = pos as f64;
        }
        r
    };
    let rx = rank(x);
    let ry = rank(y);
    let mx = rx.iter().sum::<f64>() / rx.len() as f64;
    let my = ry.iter().sum::<f64>() / ry.len() as f64;
    let mut num = 0.0;
    let mut dx = 0.0;
    let mut dy = 0.0;
    for i in 0..rx.len() {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx).powi(2);
        dy += (ry[i] - my).powi(2);
    }
    num / (dx * dy).sqrt()
}

/// Whether the sequence has a strict decrease somewhere (an interior
/// maximum implies one).
pub fn has_decreasing_segment(values: &[f64]) -> bool {
    values.windows(2).any(|w| w[1] < w[0])
}

/// Sidecar metadata written next to every CSV artifact. Timestamps live
/// here and never in the CSV, so re-runs stay byte-identical.
#[derive(Debug, Clone, Serialize)]
pub struct RunMeta {
    pub command: String,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub rng_algorithm: &'static str,
    pub timestamp_unix: u64,
    pub tool_version: &'static str,
}

impl RunMeta {
    pub fn new(command: &str, params: serde_json::Value, seed: Option<u64>) -> Self {
        RunMeta {
            command: command.to_string(),
            params,
            seed,
            rng_algorithm: crate::problem::RNG_ALGORITHM,
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            tool_version: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// Writes a CSV and its `<stem>.meta.json` sidecar, creating parent
/// directories as needed. Returns the CSV path.
pub fn write_artifact(dir: &Path, stem: &str, csv: &str, meta: &RunMeta) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{stem}.csv"));
    std::fs::write(&csv_path, csv)?;
    let meta_path = dir.join(format!("{stem}.meta.json"));
    let text = serde_json::to_string_pretty(meta).expect("metadata serializes");
    std::fs::write(meta_path, text)?;
    Ok(csv_path)
}

/// Dump of the generated regression data for audit: one `a_1,...,a_d,b`
/// row per data point, concatenated over agents in order.
pub fn quartic_data_csv(problem: &ProblemInstance) -> String {
    let d = problem.dimension();
    let mut out = String::new();
    for c in 0..d {
        out.push_str(&format!("a{c},"));
    }
    out.push_str("b\n");
    for local in problem.locals() {
        if let LocalFunction::QuarticElasticNet { rows, .. } = local {
            for (a, b) in rows {
                for c in 0..d {
                    out.push_str(&format!("{},", a[c]));
                }
                out.push_str(&format!("{b}\n"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_comparison_matches() {
        let cmp = spectrum_comparison(4, 0.125).unwrap();
        assert_eq!(cmp.closed.len(), 8);
        assert!(cmp.max_abs_diff() < 1e-9);
        let csv = cmp.to_csv();
        assert!(csv.starts_with("index,closed_form,numeric,abs_diff\n"));
        assert_eq!(csv.lines().count(), 9);
        // n = 2 emits 4 eigenvalue rows
        let small = spectrum_comparison(2, 0.1).unwrap();
        assert_eq!(small.to_csv().lines().count(), 5);
    }

    #[test]
    fn spectrum_comparison_rejects_bad_eps() {
        assert!(spectrum_comparison(4, 0.5).is_err());
    }

    #[test]
    fn independence_smoke_ten_rows() {
        let series = fig_independence(&[4], 0.5, 10, 2.0, 5.0).unwrap();
        assert_eq!(series.len(), 1);
        assert_eq!(series[0].record.rows.len(), 10);
        let csv = series[0].to_csv();
        assert_eq!(csv.lines().count(), 11);
        assert!(csv.starts_with("t,scaled_gap,below_one\n"));
    }

    #[test]
    fn independence_terminal_gap_grows_with_n_at_half() {
        let series = fig_independence(&[4, 8], 0.5, 20_000, 2.0, 5.0).unwrap();
        let g4 = series[0].terminal_scaled_gap();
        let g8 = series[1].terminal_scaled_gap();
        assert!(g8 > g4 * 2.0, "{g8} vs {g4}");
    }

    #[test]
    fn inversion_single_deterministic_row() {
        let cfg = InversionConfig {
            beta_grid: vec![0.7],
            runs: 2,
            seed: 7,
            cap: 50_000,
            ..InversionConfig::default()
        };
        let a = fig_inversion(&cfg).unwrap();
        let b = fig_inversion(&cfg).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.rows.len(), 1);
        assert!(a.rows[0].mean_iters_centralized >= 1.0);
        assert!(a.rows[0].se_c >= 0.0);
    }

    #[test]
    fn spearman_basics() {
        assert!((spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]) - 1.0).abs() < 1e-12);
        assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) + 1.0).abs() < 1e-12);
        assert!(has_decreasing_segment(&[1.0, 3.0, 2.0]));
        assert!(!has_decreasing_segment(&[1.0, 2.0, 3.0]));
    }

    #[test]
    fn artifact_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let meta = RunMeta::new("spectrum", serde_json::json!({"n": 4}), Some(1));
        let path = write_artifact(dir.path(), "spectrum_n4", "a,b\n1,2\n", &meta).unwrap();
        assert!(path.exists());
        assert!(dir.path().join("spectrum_n4.meta.json").exists());
        let text = std::fs::read_to_string(dir.path().join("spectrum_n4.meta.json")).unwrap();
        assert!(text.contains("chacha8"));
    }

    #[test]
    fn data_dump_has_all_rows() {
        let p = make_quartic_elasticnet(5, 2, 1.0, 0.05, 0.2, 3, 3).unwrap();
        let csv = quartic_data_csv(&p);
        assert!(csv.starts_with("a0,a1,b\n"));
        assert_eq!(csv.lines().count(), 6);
    }
}
