//! The `sublab` command-line front end: a thin shell over the library's
//! experiment drivers.
//!
//! Exit codes: 0 on success, 1 when an invariant or verification fails,
//! 2 on invalid arguments. A flat `key=value` config file can seed any
//! flag (`--config lab.conf`); explicit flags win.

use crate::counterexample::{self, CounterexampleConfig};
use crate::experiments::{
    self, fig_independence, fig_inversion, spectrum_comparison, InversionConfig, RunMeta,
};
use crate::graph::{self, mixing_matrix, Graph, MixingMatrix, Topology};
use crate::plot::{line_chart, Series};
use crate::problem::{make_counterexample_problem, make_quartic_elasticnet, ConstraintSet};
use crate::schedule::StepSchedule;
use crate::solver::{Solver, Variant, WindowRule};
use crate::verify::{run_suite, Suite};
use crate::{Error, Result};
use clap::{CommandFactory, Parser, Subcommand};
use nalgebra::DVector;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "sublab",
    version,
    about = "Distributed and centralized projected subgradient simulation lab"
)]
struct Cli {
    /// Flat key=value file supplying defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every pseudo-random draw (ChaCha8).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory for CSV artifacts and their metadata sidecars.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads for experiment fan-out (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Tolerance for trajectory-equivalence checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form vs numeric eigenvalues of the two-cliques matrix.
    Spectrum {
        /// Clique size; the graph has 2n nodes.
        #[arg(long)]
        n: usize,
        /// Edge weight; needs eps * n < 1.
        #[arg(long)]
        eps: f64,
    },
    /// One solver run with full trajectory metrics.
    Run {
        /// Graph: gnprime:<n> | line:<n> | complete:<n> | star:<n> | ring:<n> | file:<path>.
        #[arg(long, default_value = "gnprime:4")]
        graph: String,
        /// Mixing weight on every edge.
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        /// Step schedule: poly:<beta> | const:<c>.
        #[arg(long, default_value = "poly:0.5")]
        schedule: String,
        /// premix | projected-premix | mix-after-project | centralized.
        #[arg(long, default_value = "mix-after-project")]
        variant: String,
        /// Iterations.
        #[arg(long, default_value_t = 10_000)]
        t: u64,
        /// Objective: counterexample | quartic.
        #[arg(long, default_value = "counterexample")]
        problem: String,
        #[arg(long, default_value_t = 2.0)]
        gamma: f64,
        #[arg(long, default_value_t = 5.0)]
        a: f64,
        /// Data points for the quartic problem.
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1.0)]
        lambda1: f64,
        #[arg(long, default_value_t = 0.05)]
        lambda2: f64,
        #[arg(long, default_value_t = 0.2)]
        noise_std: f64,
        /// Box constraint "lo,hi" for the quartic problem.
        #[arg(long = "box", default_value = "0,2")]
        box_spec: String,
        /// half | full | dyadic averaging window.
        #[arg(long, default_value = "half")]
        window: String,
        /// Drive the run with the worst-case adversarial subgradients.
        #[arg(long)]
        adversarial: bool,
        /// Also write the generated regression data for audit.
        #[arg(long)]
        dump_data: bool,
        /// Render a companion SVG chart.
        #[arg(long)]
        svg: bool,
    },
    /// Replay the worst-case construction and verify solver equivalence.
    Counterexample {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[arg(long, default_value_t = 2.0)]
        gamma: f64,
        #[arg(long, default_value_t = 5.0)]
        a: f64,
        #[arg(long, default_value_t = 100_000)]
        t: u64,
    },
    /// Rescaled-gap curves across clique sizes (weight 1/n).
    FigIndependence {
        #[arg(long = "n-list", default_value = "4,8,16")]
        n_list: String,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[arg(long, default_value_t = 100_000)]
        t: u64,
        #[arg(long, default_value_t = 2.0)]
        gamma: f64,
        #[arg(long, default_value_t = 5.0)]
        a: f64,
        #[arg(long)]
        svg: bool,
    },
    /// Mean iterations-to-small-mapping across step-size exponents.
    FigInversion {
        /// Grid as start:stop:step or a comma list.
        #[arg(long = "beta-grid", default_value = "0.5:0.95:0.05")]
        beta_grid: String,
        /// Problem draws per exponent.
        #[arg(long, default_value_t = 500)]
        runs: usize,
        #[arg(long, default_value_t = 0.03)]
        threshold: f64,
        #[arg(long = "zero-band", default_value_t = 1e-6)]
        zero_band: f64,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Line-graph mixing weight (max feasible is 1/2).
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
        #[arg(long = "box", default_value = "0,2")]
        box_spec: String,
        #[arg(long)]
        svg: bool,
    },
    /// Run a named invariant suite.
    Verify {
        /// schedule | spectral | lemmas | counterexample | all.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// Entry point for the binary; returns the process exit code.
pub fn main() -> i32 {
    let argv: Vec<String> = std::env::args().collect();
    run_args(argv)
}

/// Parses (after merging config-file defaults) and dispatches.
pub fn run_args(argv: Vec<String>) -> i32 {
    let argv = match merge_config_defaults(argv) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own message; usage errors exit 2, help/version 0
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(threads) = cli.threads {
        // ignore failure when a pool already exists (tests, repeat calls)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidArgument(_) | Error::UnsupportedSchedule(_) => 2,
                Error::InvalidAdversary { .. } | Error::Io(_) => 1,
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let out = cli.out.clone();
    match cli.command {
        Command::Spectrum { n, eps } => {
            let cmp = spectrum_comparison(n, eps)?;
            let meta = RunMeta::new("spectrum", serde_json::json!({"n": n, "eps": eps}), None);
            let path =
                experiments::write_artifact(&out, &format!("spectrum_n{n}"), &cmp.to_csv(), &meta)?;
            println!(
                "spectrum n={n} eps={eps}: max |closed - numeric| = {:.3e} ({} eigenvalues) -> {}",
                cmp.max_abs_diff(),
                cmp.closed.len(),
                path.display()
            );
            Ok(0)
        }
        Command::Run {
            graph,
            eps,
            schedule,
            variant,
            t,
            problem,
            gamma,
            a,
            k,
            dim,
            lambda1,
            lambda2,
            noise_std,
            box_spec,
            window,
            adversarial,
            dump_data,
            svg,
        } => {
            let schedule: StepSchedule = schedule.parse()?;
            let variant = parse_variant(&variant)?;
            let window = parse_window(&window)?;
            let g = parse_graph(&graph)?;
            let (instance, cfg) = match problem.as_str() {
                "counterexample" => {
                    let n = g.n_nodes() / 2;
                    let cfg = CounterexampleConfig::new(n, eps, gamma, a, t)?;
                    (make_counterexample_problem(n, gamma, a)?, Some(cfg))
                }
                "quartic" => {
                    let (lo, hi) = parse_box(&box_spec)?;
                    let constraint = ConstraintSet::bounded_box(
                        DVector::from_element(dim, lo),
                        DVector::from_element(dim, hi),
                    )?;
                    let p = make_quartic_elasticnet(
                        k,
                        dim,
                        lambda1,
                        lambda2,
                        noise_std,
                        cli.seed,
                        g.n_nodes(),
                    )?
                    .with_constraint(constraint)?;
                    (p, None)
                }
                other => return crate::invalid(format!("unknown problem '{other}'")),
            };
            let w = match variant {
                Variant::Centralized => MixingMatrix::identity_single(),
                _ => mixing_matrix(&g, eps)?,
            };
            let solver = Solver::new(&w, &instance, schedule, variant)?;
            let mut selector = match (adversarial, &cfg) {
                (true, Some(cfg)) => Some(counterexample::AdversarialSelector::new(cfg, schedule)?),
                (true, None) => {
                    return crate::invalid("--adversarial needs the counterexample problem")
                }
                _ => None,
            };
            let record = solver.run(
                t,
                window,
                None,
                selector
                    .as_mut()
                    .map(|s| s as &mut dyn crate::solver::SubgradientSelector),
            )?;
            let meta = RunMeta::new(
                "run",
                serde_json::json!({
                    "graph": graph, "eps": eps, "schedule": schedule.to_string(),
                    "variant": format!("{variant:?}"), "t": t, "problem": problem,
                    "adversarial": adversarial, "window": window_name(window),
                    "tolerance": cli.tolerance,
                }),
                Some(cli.seed),
            );
            let path = experiments::write_artifact(&out, "run", &record.to_csv(), &meta)?;
            if dump_data {
                experiments::write_artifact(
                    &out,
                    "run_data",
                    &experiments::quartic_data_csv(&instance),
                    &meta,
                )?;
            }
            if svg {
                let series = [Series {
                    label: "scaled gap",
                    points: record
                        .rows
                        .iter()
                        .map(|r| (r.t as f64, r.scaled_gap))
                        .collect(),
                }];
                let chart = line_chart(
                    "rescaled optimality gap",
                    "t",
                    "t^(1-b) (F - F*)",
                    &series,
                    true,
                );
                std::fs::write(out.join("run.svg"), chart)?;
            }
            let last = record.final_row();
            println!(
                "run finished at t={}: gap={:.6e}, disagreement={:.3e} -> {}",
                last.t,
                last.gap,
                last.disagreement,
                path.display()
            );
            Ok(0)
        }
        Command::Counterexample {
            n,
            eps,
            gamma,
            a,
            t,
        } => {
            let cfg = CounterexampleConfig::new(n, eps, gamma, a, t)?;
            let report = counterexample::verify_equivalence(&cfg, cli.tolerance)?;
            let mut csv = String::from("t,y,eps_sqrt_t_y,x_v_solver,abs_diff\n");
            for r in &report.rows {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.t, r.y, r.eps_sqrt_t_y, r.x_v_solver, r.abs_diff
                ));
            }
            let meta = RunMeta::new(
                "counterexample",
                serde_json::json!({
                    "n": n, "eps": eps, "gamma": gamma, "a": a, "t": t,
                    "tolerance": cli.tolerance,
                }),
                None,
            );
            experiments::write_artifact(&out, &format!("counterexample_n{n}"), &csv, &meta)?;
            if report.pass {
                println!(
                    "PASS: solver tracks the closed-form trajectory for {t} steps \
                     (max v deviation {:.3e}, max |g_u| = {:.4})",
                    report.max_v_deviation, report.max_abs_g_u
                );
                Ok(0)
            } else {
                let (at, kind) = report.first_violation.expect("failed report names a step");
                println!("FAIL: first violation at t={at}: {kind:?}");
                Ok(1)
            }
        }
        Command::FigIndependence {
            n_list,
            beta,
            t,
            gamma,
            a,
            svg,
        } => {
            let ns = parse_n_list(&n_list)?;
            let series = fig_independence(&ns, beta, t, gamma, a)?;
            for s in &series {
                let meta = RunMeta::new(
                    "fig-independence",
                    serde_json::json!({
                        "n": s.n, "eps": s.eps, "beta": beta, "t": t,
                        "gamma": gamma, "a": a,
                        "first_below_one": s.first_below_one,
                    }),
                    None,
                );
                let stem = format!("independence_beta{beta}_n{}", s.n);
                experiments::write_artifact(&out, &stem, &s.to_csv(), &meta)?;
                println!(
                    "n={} eps={:.4}: terminal t^(1-b) gap = {:.4}, below 1 from t = {:?}",
                    s.n,
                    s.eps,
                    s.terminal_scaled_gap(),
                    s.first_below_one
                );
            }
            if svg {
                let labels: Vec<String> = series.iter().map(|s| format!("n={}", s.n)).collect();
                let plotted: Vec<Series<'_>> = series
                    .iter()
                    .zip(labels.iter())
                    .map(|(s, label)| Series {
                        label,
                        points: s
                            .record
                            .rows
                            .iter()
                            .map(|r| (r.t as f64, r.scaled_gap))
                            .collect(),
                    })
                    .collect();
                let chart = line_chart(
                    &format!("rescaled gap, step 1/t^{beta}"),
                    "t",
                    "t^(1-b) (F - F*)",
                    &plotted,
                    true,
                );
                std::fs::write(out.join(format!("independence_beta{beta}.svg")), chart)?;
            }
            Ok(0)
        }
        Command::FigInversion {
            beta_grid,
            runs,
            threshold,
            zero_band,
            k,
            eps,
            cap,
            box_spec,
            svg,
        } => {
            let (lo, hi) = parse_box(&box_spec)?;
            let cfg = InversionConfig {
                beta_grid: parse_beta_grid(&beta_grid)?,
                runs,
                seed: cli.seed,
                threshold,
                zero_band,
                k,
                eps,
                cap,
                box_lo: lo,
                box_hi: hi,
                ..InversionConfig::default()
            };
            let table = fig_inversion(&cfg)?;
            let meta = RunMeta::new(
                "fig-inversion",
                serde_json::json!({
                    "beta_grid": cfg.beta_grid, "runs": runs, "threshold": threshold,
                    "zero_band": zero_band, "k": k, "eps": eps, "cap": cap,
                    "box": [lo, hi], "n_agents": cfg.n_agents,
                }),
                Some(cli.seed),
            );
            let path = experiments::write_artifact(&out, "inversion", &table.to_csv(), &meta)?;
            for r in &table.rows {
                println!(
                    "beta={:.2}: centralized {:.1} +- {:.1}, distributed {:.1} +- {:.1}, capped {}",
                    r.beta,
                    r.mean_iters_centralized,
                    r.se_c,
                    r.mean_iters_distributed,
                    r.se_d,
                    r.capped_runs
                );
                if r.capped_runs as f64 > runs as f64 {
                    eprintln!(
                        "warning: beta={:.2} capped in more than half of its runs",
                        r.beta
                    );
                }
            }
            if svg {
                let series = [
                    Series {
                        label: "centralized",
                        points: table
                            .rows
                            .iter()
                            .map(|r| (r.beta, r.mean_iters_centralized))
                            .collect(),
                    },
                    Series {
                        label: "distributed",
                        points: table
                            .rows
                            .iter()
                            .map(|r| (r.beta, r.mean_iters_distributed))
                            .collect(),
                    },
                ];
                let chart = line_chart(
                    "iterations until small mapping",
                    "beta",
                    "mean iterations",
                    &series,
                    false,
                );
                std::fs::write(out.join("inversion.svg"), chart)?;
            }
            println!("wrote {}", path.display());
            Ok(0)
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            let results = run_suite(suite)?;
            let mut failed = 0;
            for r in &results {
                println!(
                    "{} {} -- {}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                );
                if !r.pass {
                    failed += 1;
                }
            }
            println!("{} checks, {} failed", results.len(), failed);
            Ok(if failed == 0 { 0 } else { 1 })
        }
    }
}

/// Reads the `--config` file (if any) and appends `--key value` for every
/// entry whose flag the invoked subcommand (or the global set) accepts and
/// which is not already present on the command line.
fn merge_config_defaults(mut argv: Vec<String>) -> Result<Vec<String>> {
    let config_path = find_config_path(&argv);
    let Some(path) = config_path else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read config {path}: {e}")))?;
    let cmd = Cli::command();
    let sub = argv
        .iter()
        .skip(1)
        .find(|a| cmd.find_subcommand(a.as_str()).is_some())
        .cloned();
    let mut allowed: Vec<String> = cmd
        .get_arguments()
        .filter_map(|a| a.get_long().map(str::to_string))
        .collect();
    if let Some(name) = &sub {
        if let Some(s) = cmd.find_subcommand(name) {
            allowed.extend(
                s.get_arguments()
                    .filter_map(|a| a.get_long().map(str::to_string)),
            );
        }
    }
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return crate::invalid(format!(
                "config line {} is not key=value: '{line}'",
                lineno + 1
            ));
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if !allowed.contains(&key) {
            continue; // other subcommands' keys may share the file
        }
        let flag = format!("--{key}");
        let already = argv
            .iter()
            .any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if !already {
            argv.push(flag);
            argv.push(value.to_string());
        }
    }
    Ok(argv)
}

fn find_config_path(argv: &[String]) -> Option<String> {
    for (i, a) in argv.iter().enumerate() {
        if a == "--config" {
            return argv.get(i + 1).cloned();
        }
        if let Some(rest) = a.strip_prefix("--config=") {
            return Some(rest.to_string());
        }
    }
    None
}

fn parse_variant(s: &str) -> Result<Variant> {
    match s {
        "premix" => Ok(Variant::PreMix),
        "projected-premix" => Ok(Variant::ProjectedPreMix),
        "mix-after-project" => Ok(Variant::MixAfterProject),
        "centralized" => Ok(Variant::Centralized),
        _ => crate::invalid(format!(
            "unknown variant '{s}' (premix|projected-premix|mix-after-project|centralized)"
        )),
    }
}

fn parse_window(s: &str) -> Result<WindowRule> {
    match s {
        "half" => Ok(WindowRule::Half),
        "full" => Ok(WindowRule::Full),
        "dyadic" => Ok(WindowRule::Dyadic),
        _ => crate::invalid(format!("unknown window rule '{s}' (half|full|dyadic)")),
    }
}

fn window_name(w: WindowRule) -> &'static str {
    match w {
        WindowRule::Half => "half",
        WindowRule::Full => "full",
        WindowRule::Dyadic => "dyadic",
    }
}

fn parse_graph(spec: &str) -> Result<Graph> {
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| Error::InvalidArgument(format!("graph spec '{spec}' is not kind:arg")))?;
    if kind == "file" {
        let text = std::fs::read_to_string(arg)?;
        return Graph::from_edge_list_text(&text);
    }
    let n: usize = arg
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad node count in '{spec}'")))?;
    match kind {
        "gnprime" => graph::build_gn_prime(n),
        "line" => graph::build_standard(Topology::Line, n),
        "complete" => graph::build_standard(Topology::Complete, n),
        "star" => graph::build_standard(Topology::Star, n),
        "ring" => graph::build_standard(Topology::Ring, n),
        _ => crate::invalid(format!(
            "unknown graph kind '{kind}' (gnprime|line|complete|star|ring|file)"
        )),
    }
}

fn parse_n_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("bad n '{p}' in list")))
        })
        .collect()
}

fn parse_beta_grid(s: &str) -> Result<Vec<f64>> {
    if let Some((start, rest)) = s.split_once(':') {
        let (stop, step) = rest
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("grid '{s}' is not start:stop:step")))?;
        let (start, stop, step): (f64, f64, f64) = (
            start.parse().map_err(|_| bad_grid(s))?,
            stop.parse().map_err(|_| bad_grid(s))?,
            step.parse().map_err(|_| bad_grid(s))?,
        );
        if !step.is_finite() || step <= 0.0 || stop < start {
            return Err(bad_grid(s));
        }
        let count = ((stop - start) / step).round() as usize + 1;
        return Ok((0..count)
            .map(|i| round_clean(start + step * i as f64))
            .collect());
    }
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad_grid(s)))
        .collect()
}

fn bad_grid(s: &str) -> Error {
    Error::InvalidArgument(format!("bad beta grid '{s}'"))
}

// keep accumulated grid points tidy (0.85, not 0.8500000000000001)
fn round_clean(v: f64) -> f64 {
    (v * 1e10).round() / 1e10
}

fn parse_box(s: &str) -> Result<(f64, f64)> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| Error::InvalidArgument(format!("box '{s}' is not lo,hi")))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad box bound in '{s}'")))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad box bound in '{s}'")))?;
    if lo >= hi {
        return crate::invalid(format!("box '{s}' is empty"));
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = parse_beta_grid("0.5:0.95:0.05").unwrap();
        assert_eq!(g.len(), 10);
        assert!((g[0] - 0.5).abs() < 1e-12);
        assert!((g[9] - 0.95).abs() < 1e-12);
        let g = parse_beta_grid("0.5,0.9").unwrap();
        assert_eq!(g, vec![0.5, 0.9]);
        assert!(parse_beta_grid("0.9:0.5:0.1").is_err());
    }

    #[test]
    fn graph_and_box_parsing() {
        assert_eq!(parse_graph("line:5").unwrap().n_nodes(), 5);
        assert_eq!(parse_graph("gnprime:4").unwrap().n_nodes(), 8);
        assert!(parse_graph("torus:4").is_err());
        assert_eq!(parse_box("0,2").unwrap(), (0.0, 2.0));
        assert!(parse_box("2,0").is_err());
    }

    #[test]
    fn config_merge_respects_cli_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("lab.conf");
        std::fs::write(&path, "n=8\neps=0.1\nunrelated_key=zzz\n# comment\n").unwrap();
        let argv: Vec<String> = [
            "sublab",
            "spectrum",
            "--config",
            path.to_str().unwrap(),
            "--n",
            "4",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        let merged = merge_config_defaults(argv).unwrap();
        // --n stays as given, eps arrives from the file, unrelated key skipped
        assert!(merged.iter().any(|a| a == "--eps"));
        assert!(!merged.iter().any(|a| a == "--unrelated-key"));
        let n_pos = merged.iter().position(|a| a == "--n").unwrap();
        assert_eq!(merged[n_pos + 1], "4");
        assert_eq!(merged.iter().filter(|a| *a == "--n").count(), 1);
    }
}
