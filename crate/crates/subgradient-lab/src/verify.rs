//! Named invariant suites behind `sublab verify`: each check reports the
//! measured slack so a pass is auditable, and any failure flips the exit
//! code. The acceptance tests exercise the same machinery at full scale;
//! these suites are sized to finish in seconds.

use crate::counterexample::{self, CounterexampleConfig};
use crate::graph::{build_gn_prime, build_standard, mixing_matrix, Topology};
use crate::problem::{ConstraintSet, LocalFunction, ProblemInstance};
use crate::schedule::StepSchedule;
use crate::solver::{Solver, Variant, WindowRule};
use crate::Result;
use nalgebra::DVector;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        CheckResult {
            name: name.to_string(),
            pass,
            detail,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Schedule,
    Spectral,
    Lemmas,
    Counterexample,
    All,
}

impl std::str::FromStr for Suite {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "schedule" => Ok(Suite::Schedule),
            "spectral" => Ok(Suite::Spectral),
            "lemmas" => Ok(Suite::Lemmas),
            "counterexample" => Ok(Suite::Counterexample),
            "all" => Ok(Suite::All),
            _ => crate::invalid(format!(
                "unknown suite '{s}' (schedule|spectral|lemmas|counterexample|all)"
            )),
        }
    }
}

pub fn run_suite(suite: Suite) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    match suite {
        Suite::Schedule => out.extend(schedule_suite()?),
        Suite::Spectral => out.extend(spectral_suite()?),
        Suite::Lemmas => out.extend(lemma_suite()?),
        Suite::Counterexample => out.extend(counterexample_suite()?),
        Suite::All => {
            out.extend(schedule_suite()?);
            out.extend(spectral_suite()?);
            out.extend(lemma_suite()?);
            out.extend(counterexample_suite()?);
        }
    }
    Ok(out)
}

pub fn schedule_suite() -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    let t_max = 100_000;
    for beta in [0.5, 0.75, 0.9] {
        let s = StepSchedule::polynomial(beta)?;
        let v = s.estimate_c_alpha_prime(t_max);
        let target = 2f64.powf(beta);
        checks.push(CheckResult::new(
            &format!("halving constant, beta={beta}"),
            (v - target).abs() <= 1e-3,
            format!("measured {v:.9}, closed form {target:.9}"),
        ));
    }
    let s = StepSchedule::polynomial(0.75)?;
    let mut nondecreasing = true;
    let mut prev = 0.0;
    for t in [10u64, 100, 1_000, 10_000, 100_000] {
        let v = s.estimate_c_alpha(t);
        nondecreasing &= v >= prev;
        prev = v;
    }
    checks.push(CheckResult::new(
        "whole/half sum ratio nondecreasing in horizon",
        nondecreasing,
        format!("value at 10^5: {prev:.6}"),
    ));
    let early = s.tail_sum_squares(100)?;
    let late = s.tail_sum_squares(1_000_000)?;
    checks.push(CheckResult::new(
        "squared tail vanishes (beta=3/4)",
        late < early / 10.0,
        format!("tail(10^2) = {early:.6e}, tail(10^6) = {late:.6e}"),
    ));
    let half = StepSchedule::polynomial(0.5)?;
    let constant = StepSchedule::constant(0.1)?;
    let classify_ok = s.square_summable()
        && !s.summable()
        && !half.square_summable()
        && !constant.square_summable()
        && !constant.summable();
    checks.push(CheckResult::new(
        "summability classifier",
        classify_ok,
        "beta=3/4 square-summable not summable; beta=1/2 and constants neither".into(),
    ));
    Ok(checks)
}

pub fn spectral_suite() -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    for n in [2usize, 4, 8, 16] {
        for eps in [0.9 / (n as f64 + 2.0), 0.5 / n as f64] {
            let cmp = crate::experiments::spectrum_comparison(n, eps)?;
            checks.push(CheckResult::new(
                &format!("closed-form spectrum, n={n} eps={eps:.4}"),
                cmp.max_abs_diff() <= 1e-9,
                format!("max |closed - numeric| = {:.3e}", cmp.max_abs_diff()),
            ));
            let w = mixing_matrix(&build_gn_prime(n)?, eps)?;
            let expect = (1.0 - 2.0 * eps)
                .abs()
                .max((1.0 - (n as f64 + 2.0) * eps).abs());
            checks.push(CheckResult::new(
                &format!("sigma closed form, n={n} eps={eps:.4}"),
                (w.sigma() - expect).abs() <= 1e-10,
                format!("power iteration {:.12}, formula {expect:.12}", w.sigma()),
            ));
        }
    }
    // contraction and mean preservation on a mixed bag of matrices
    let mut rng = ChaCha8Rng::seed_from_u64(20_200_812);
    for (name, w) in [
        (
            "two-cliques n=4",
            mixing_matrix(&build_gn_prime(4)?, 0.125)?,
        ),
        (
            "line n=10",
            mixing_matrix(&build_standard(Topology::Line, 10)?, 0.25)?,
        ),
        (
            "ring n=7",
            mixing_matrix(&build_standard(Topology::Ring, 7)?, 0.2)?,
        ),
    ] {
        let n = w.n();
        let mut worst_contraction = f64::NEG_INFINITY;
        let mut worst_mean = 0.0f64;
        for _ in 0..1000 {
            let y = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
            let mean = y.mean();
            let centered = y.add_scalar(-mean);
            let mixed = w.entries() * &centered;
            worst_contraction = worst_contraction.max(mixed.norm() - w.sigma() * centered.norm());
            worst_mean = worst_mean.max(((w.entries() * &y).mean() - mean).abs());
        }
        checks.push(CheckResult::new(
            &format!("contraction on {name}"),
            worst_contraction <= 1e-10,
            format!("max ||W(y-mean)|| - sigma ||y-mean|| = {worst_contraction:.3e}"),
        ));
        checks.push(CheckResult::new(
            &format!("mean preservation on {name}"),
            worst_mean <= 1e-12,
            format!("max |mean(Wy) - mean(y)| = {worst_mean:.3e}"),
        ));
    }
    Ok(checks)
}

pub fn lemma_suite() -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();

    // distributed run with the worst-case construction at beta = 3/4
    let cfg = CounterexampleConfig::simulation(4, 0.25, 20_000)?;
    let schedule = StepSchedule::polynomial(0.75)?;
    let problem = cfg.problem()?;
    let w = cfg.mixing()?;
    let solver = Solver::new(&w, &problem, schedule, Variant::MixAfterProject)?;
    let mut selector = counterexample::AdversarialSelector::new(&cfg, schedule)?;
    let rec = solver.run(cfg.horizon, WindowRule::Half, None, Some(&mut selector))?;
    let inv = &rec.invariants;
    checks.push(CheckResult::new(
        "mapping norm bounded by L (distributed)",
        inv.mapping_bound_min_slack >= -1e-9,
        format!("min slack {:.3e}", inv.mapping_bound_min_slack),
    ));
    let descent = inv.descent_min_slack.unwrap_or(f64::INFINITY);
    checks.push(CheckResult::new(
        "descent inequality (proof form)",
        descent >= -1e-9,
        format!("min slack {descent:.3e}"),
    ));
    checks.push(CheckResult::new(
        "consensus mean identity",
        inv.consensus_mean_max_err <= 1e-12,
        format!("max error {:.3e}", inv.consensus_mean_max_err),
    ));
    checks.push(CheckResult::new(
        "projected vs gradient-mapping route",
        inv.mix_route_max_err <= 1e-12,
        format!("max route difference {:.3e}", inv.mix_route_max_err),
    ));
    let dist = inv.distance_check.expect("distributed run checks distance");
    checks.push(CheckResult::new(
        "disagreement bound beyond threshold",
        dist.max_ratio <= 1.0 && dist.checked_steps > 0,
        format!(
            "threshold t={}, max disagreement/bound = {:.4} over {} steps",
            dist.threshold, dist.max_ratio, dist.checked_steps
        ),
    ));

    // centralized telescoping on a box-constrained scalar problem
    let p = ProblemInstance::new(
        vec![LocalFunction::ScaledAbs {
            scale: 1.0,
            shift: 0.0,
        }],
        ConstraintSet::symmetric_box(1, 5.0)?,
        1,
    )?
    .with_known_optimum(DVector::zeros(1), 0.0)?;
    let w1 = crate::graph::MixingMatrix::identity_single();
    let central = Solver::new(
        &w1,
        &p,
        StepSchedule::polynomial(0.75)?,
        Variant::Centralized,
    )?;
    let init = DVector::from_element(1, 4.0);
    let rec = central.run(20_000, WindowRule::Half, Some(&init), None)?;
    let tel = rec
        .invariants
        .telescoping_min_slack
        .expect("centralized run with optimum records telescoping");
    checks.push(CheckResult::new(
        "centralized telescoping recurrence",
        tel >= -1e-9,
        format!("min slack {tel:.3e}"),
    ));
    Ok(checks)
}

pub fn counterexample_suite() -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    let horizon = 100_000;
    let cfg = CounterexampleConfig::simulation(4, 0.25, horizon)?;
    let report = counterexample::verify_equivalence(&cfg, 1e-9)?;
    checks.push(CheckResult::new(
        "solver matches closed-form trajectory (gamma=2, a=5)",
        report.pass,
        format!(
            "max u deviation {:.3e}, max v deviation {:.3e}, max |g_u| {:.4}",
            report.max_u_deviation, report.max_v_deviation, report.max_abs_g_u
        ),
    ));
    let strict = CounterexampleConfig::strict_proof(4, 0.25, horizon)?;
    let report = counterexample::verify_equivalence(&strict, 1e-9)?;
    checks.push(CheckResult::new(
        "solver matches closed-form trajectory (gamma=3, a=6)",
        report.pass && report.max_abs_g_u <= 17.0 / 6.0,
        format!(
            "max v deviation {:.3e}, max |g_u| {:.4} <= 17/6",
            report.max_v_deviation, report.max_abs_g_u
        ),
    ));
    for eps in [0.25, 0.125, 0.0625, 0.03125] {
        let traj = counterexample::y_trajectory(eps, horizon)?;
        let mut in_range = true;
        let mut max_scaled = 0.0f64;
        for t in 1..=traj.horizon() {
            let y = traj.value(t);
            in_range &= (0.0..=2.0).contains(&y);
            max_scaled = max_scaled.max(traj.scaled(t));
        }
        let t1 = traj.t1_observed;
        checks.push(CheckResult::new(
            &format!("trajectory bounds, eps={eps}"),
            in_range && max_scaled <= 2.0 && t1.is_some_and(|t| t <= 10_000),
            format!("max scaled value {max_scaled:.4}, lower bound holds from t={t1:?}"),
        ));
        let z = counterexample::z_bound_check(eps, horizon)?;
        checks.push(CheckResult::new(
            &format!("comparison sequence dominates, eps={eps}"),
            z.pass(),
            format!(
                "sqrt(t) z(t) <= {:.3} (budget {:.1})",
                z.max_scaled_z,
                2.0 / eps
            ),
        ));
    }
    Ok(checks)
}
