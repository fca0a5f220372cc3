//! Centralized and distributed projected subgradient iterations.
//!
//! One synchronous round per step: every agent queries one subgradient,
//! optionally projects, and mixes with its neighbors. The four variants:
//!
//! - `PreMix`: `x(t+1) = W x(t) - alpha(t) g(t)`, no projection;
//! - `ProjectedPreMix`: `x(t+1) = P[W x(t) - alpha(t) g'(t)]` with `g'`
//!   evaluated at the mixed iterates `W x(t)`;
//! - `MixAfterProject`: `x(t+1) = W P[x(t) - alpha(t) g(t)]`, the variant
//!   whose transient and worst-case behavior the experiments probe;
//! - `Centralized`: `y(t+1) = P[y(t) - alpha(t) g_F(t)]` on a single row.
//!
//! `MixAfterProject` is also evaluated through the gradient-mapping route
//! `x(t+1) = W [x(t) - alpha(t) s(t)]` with
//! `s(t) = (x(t) - P[x(t) - alpha(t) g(t)]) / alpha(t)` and the two routes
//! are asserted to agree to 1e-12 at every step.

use crate::graph::MixingMatrix;
use crate::problem::{ConstraintSet, ProblemInstance, TieRule};
use crate::schedule::StepSchedule;
use crate::{invalid, Result};
use nalgebra::DVector;

/// Which update rule a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    PreMix,
    ProjectedPreMix,
    MixAfterProject,
    Centralized,
}

impl Variant {
    pub fn is_distributed(&self) -> bool {
        !matches!(self, Variant::Centralized)
    }

    /// Whether every row of the state stays inside the constraint set
    /// (true when the variant's last operation before mixing projects).
    pub fn keeps_iterates_feasible(&self) -> bool {
        matches!(
            self,
            Variant::ProjectedPreMix | Variant::MixAfterProject | Variant::Centralized
        )
    }
}

/// Averaging-window policy for the weighted running average.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowRule {
    /// Window `[ceil(T/2), T]`; needs the horizon `T` declared up front.
    Half,
    /// Window `[1, T]`.
    Full,
    /// Restart the accumulator whenever `t` is a power of two, for runs of
    /// unknown length.
    Dyadic,
}

/// Per-agent subgradient override. Return `Ok(None)` to fall back to the
/// local oracle with the default tie rule.
pub trait SubgradientSelector {
    fn select(&mut self, t: u64, agent: usize, x: &DVector<f64>) -> Result<Option<DVector<f64>>>;
}

/// Iterates plus the weighted running-average accumulator.
#[derive(Debug, Clone)]
pub struct SolverState {
    iterates: Vec<DVector<f64>>,
    t: u64,
    weighted_sum: DVector<f64>,
    weight_total: f64,
    window_start: u64,
}

impl SolverState {
    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn iterates(&self) -> &[DVector<f64>] {
        &self.iterates
    }

    pub fn agent(&self, i: usize) -> &DVector<f64> {
        &self.iterates[i]
    }

    /// `xbar(t)`, the network average of the rows.
    pub fn average(&self) -> DVector<f64> {
        let mut avg = DVector::zeros(self.iterates[0].len());
        for x in &self.iterates {
            avg += x;
        }
        avg / self.iterates.len() as f64
    }

    /// Frobenius-norm deviation of the rows from their average.
    pub fn disagreement(&self) -> f64 {
        let avg = self.average();
        self.iterates
            .iter()
            .map(|x| (x - &avg).norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    pub fn window_start(&self) -> u64 {
        self.window_start
    }

    pub fn window_weight(&self) -> f64 {
        self.weight_total
    }

    /// The alpha-weighted average of `xbar(k)` over the active window, or
    /// `None` before the window opens.
    pub fn windowed_average(&self) -> Option<DVector<f64>> {
        (self.weight_total > 0.0).then(|| &self.weighted_sum / self.weight_total)
    }

    fn accumulate(&mut self, alpha: f64) {
        let avg = self.average();
        self.weighted_sum.axpy(alpha, &avg, 1.0);
        self.weight_total += alpha;
    }
}

/// What one measurement of the current state produced: the subgradients
/// used, the gradient mapping at the true iterates, and (for the pre-mix
/// variants) the mixed rows they were evaluated at.
pub struct Measurement {
    pub alpha: f64,
    pub subgradients: Vec<DVector<f64>>,
    pub mappings: Vec<DVector<f64>>,
    mixed: Option<Vec<DVector<f64>>>,
}

impl Measurement {
    /// Network average of the gradient-mapping rows.
    pub fn mean_mapping(&self) -> DVector<f64> {
        let mut m = DVector::zeros(self.mappings[0].len());
        for s in &self.mappings {
            m += s;
        }
        m / self.mappings.len() as f64
    }
}

/// A configured solver: mixing matrix, problem, schedule, and variant.
pub struct Solver<'a> {
    pub w: &'a MixingMatrix,
    pub problem: &'a ProblemInstance,
    pub schedule: StepSchedule,
    pub variant: Variant,
}

impl<'a> Solver<'a> {
    pub fn new(
        w: &'a MixingMatrix,
        problem: &'a ProblemInstance,
        schedule: StepSchedule,
        variant: Variant,
    ) -> Result<Self> {
        let rows = match variant {
            Variant::Centralized => 1,
            _ => problem.n_agents(),
        };
        if w.n() != rows {
            return invalid(format!(
                "mixing matrix is {}x{} but {:?} needs {} rows (centralized runs take the 1x1 identity)",
                w.n(),
                w.n(),
                variant,
                rows
            ));
        }
        Ok(Solver {
            w,
            problem,
            schedule,
            variant,
        })
    }

    fn row_count(&self) -> usize {
        self.w.n()
    }

    /// Fresh state at `t = 1`. The initial point defaults to the origin and
    /// must lie in the constraint set; every agent starts identically.
    pub fn init_state(
        &self,
        init: Option<&DVector<f64>>,
        horizon: u64,
        rule: WindowRule,
    ) -> Result<SolverState> {
        let d = self.problem.dimension();
        let x0 = match init {
            Some(x) => x.clone(),
            None => DVector::zeros(d),
        };
        if x0.len() != d {
            return invalid("initial point dimension mismatch");
        }
        if !self.problem.constraint().contains(&x0, 1e-12) {
            return invalid("initial point lies outside the constraint set");
        }
        let window_start = match rule {
            WindowRule::Half => horizon.div_ceil(2).max(1),
            WindowRule::Full | WindowRule::Dyadic => 1,
        };
        let mut state = SolverState {
            iterates: vec![x0; self.row_count()],
            t: 1,
            weighted_sum: DVector::zeros(d),
            weight_total: 0.0,
            window_start,
        };
        if state.t >= window_start {
            let a = self.schedule.alpha(state.t);
            state.accumulate(a);
        }
        Ok(state)
    }

    /// Subgradients and gradient mapping at the current time, without
    /// advancing. `ProjectedPreMix` evaluates subgradients at the mixed
    /// rows; the mapping is always taken at the true iterates.
    pub fn measure(
        &self,
        state: &SolverState,
        mut selector: Option<&mut dyn SubgradientSelector>,
    ) -> Result<Measurement> {
        let alpha = self.schedule.alpha(state.t);
        let mixed = matches!(self.variant, Variant::PreMix | Variant::ProjectedPreMix)
            .then(|| mix_rows(self.w, &state.iterates));
        let eval_rows: &[DVector<f64>] = match (self.variant, &mixed) {
            (Variant::ProjectedPreMix, Some(m)) => m,
            _ => &state.iterates,
        };
        let mut subgradients = Vec::with_capacity(self.row_count());
        for (i, x) in eval_rows.iter().enumerate() {
            let g = match selector.as_deref_mut() {
                Some(sel) => sel.select(state.t, i, x)?,
                None => None,
            };
            let g = match g {
                Some(g) => {
                    if g.len() != self.problem.dimension() {
                        return invalid("selector returned a subgradient of the wrong dimension");
                    }
                    g
                }
                None => match self.variant {
                    Variant::Centralized => {
                        self.problem.objective_subgradient(x, TieRule::SignPlus)
                    }
                    _ => self.problem.local(i).subgradient(x, TieRule::SignPlus),
                },
            };
            subgradients.push(g);
        }
        let mappings = state
            .iterates
            .iter()
            .zip(subgradients.iter())
            .map(|(x, g)| gradient_mapping(x, g, alpha, self.problem.constraint()))
            .collect();
        Ok(Measurement {
            alpha,
            subgradients,
            mappings,
            mixed,
        })
    }

    /// Applies the variant's update for the measured round and advances
    /// `t`. For `MixAfterProject` the gradient-mapping route is evaluated
    /// too and must agree to 1e-12; the observed discrepancy is returned.
    pub fn advance(&self, state: &mut SolverState, m: &Measurement) -> Result<f64> {
        let alpha = m.alpha;
        let mut route_err = 0.0f64;
        let next: Vec<DVector<f64>> = match self.variant {
            Variant::PreMix => {
                let mixed = m.mixed.as_ref().expect("premix measurement carries Wx");
                mixed
                    .iter()
                    .zip(m.subgradients.iter())
                    .map(|(z, g)| z - g * alpha)
                    .collect()
            }
            Variant::ProjectedPreMix => {
                let mixed = m.mixed.as_ref().expect("premix measurement carries Wx");
                mixed
                    .iter()
                    .zip(m.subgradients.iter())
                    .map(|(z, g)| {
                        let mut p = z - g * alpha;
                        self.problem.constraint().project_in_place(&mut p);
                        p
                    })
                    .collect()
            }
            Variant::MixAfterProject => {
                let projected: Vec<DVector<f64>> = state
                    .iterates
                    .iter()
                    .zip(m.subgradients.iter())
                    .map(|(x, g)| {
                        let mut p = x - g * alpha;
                        self.problem.constraint().project_in_place(&mut p);
                        p
                    })
                    .collect();
                let next = mix_rows(self.w, &projected);
                // same update through the gradient mapping
                let via_mapping: Vec<DVector<f64>> = state
                    .iterates
                    .iter()
                    .zip(m.mappings.iter())
                    .map(|(x, s)| x - s * alpha)
                    .collect();
                let next_mapping = mix_rows(self.w, &via_mapping);
                for (a, b) in next.iter().zip(next_mapping.iter()) {
                    route_err = route_err.max((a - b).amax());
                }
                assert!(
                    route_err <= 1e-12,
                    "projected and gradient-mapping routes disagree by {route_err}"
                );
                next
            }
            Variant::Centralized => {
                let mut p = &state.iterates[0] - &m.subgradients[0] * alpha;
                self.problem.constraint().project_in_place(&mut p);
                vec![p]
            }
        };
        state.iterates = next;
        state.t += 1;
        Ok(route_err)
    }

    /// One full step: measure, update, maintain the running average.
    pub fn step(
        &self,
        state: &mut SolverState,
        selector: Option<&mut dyn SubgradientSelector>,
        rule: WindowRule,
    ) -> Result<Measurement> {
        let m = self.measure(state, selector)?;
        self.advance(state, &m)?;
        if rule == WindowRule::Dyadic && state.t.is_power_of_two() {
            state.window_start = state.t;
            state.weighted_sum.fill(0.0);
            state.weight_total = 0.0;
        }
        if state.t >= state.window_start {
            let a = self.schedule.alpha(state.t);
            state.accumulate(a);
        }
        Ok(m)
    }

    /// Runs `horizon` iterations (states `t = 1..=horizon`), recording
    /// metrics and invariant slacks along the way. Records every step up to
    /// 10^5 states, then every `ceil(T/10^5)` steps plus the first, last,
    /// and power-of-two checkpoints.
    pub fn run(
        &self,
        horizon: u64,
        rule: WindowRule,
        init: Option<&DVector<f64>>,
        mut selector: Option<&mut dyn SubgradientSelector>,
    ) -> Result<RunRecord> {
        if horizon < 1 {
            return invalid("run needs at least one iteration");
        }
        let mut state = self.init_state(init, horizon, rule)?;
        let stride = horizon.div_ceil(100_000).max(1);
        let l = self.problem.lipschitz_bound();
        let optimum = self.problem.known_optimum().map(|(x, f)| (x.clone(), f));
        let mut monitor = InvariantMonitor::new(self, l);
        let mut rows = Vec::new();
        loop {
            let t = state.t;
            let reborrow: Option<&mut dyn SubgradientSelector> = match selector.as_mut() {
                Some(s) => Some(&mut **s),
                None => None,
            };
            let m = self.measure(&state, reborrow)?;
            monitor.observe_measurement(&state, &m, optimum.as_ref());
            if t == 1 || t == horizon || t % stride == 0 || t.is_power_of_two() {
                rows.push(self.record_row(&state, &m, optimum.as_ref()));
            }
            if t == horizon {
                break;
            }
            let before_avg = state.average();
            let f_before = match (self.variant, optimum.as_ref()) {
                (Variant::Centralized, Some((x_star, f_star))) => {
                    let y = &state.iterates[0];
                    Some((
                        (y - x_star).norm_squared(),
                        self.problem.objective(y) - f_star,
                    ))
                }
                _ => None,
            };
            let route_err = self.advance(&mut state, &m)?;
            if rule == WindowRule::Dyadic && state.t.is_power_of_two() {
                state.window_start = state.t;
                state.weighted_sum.fill(0.0);
                state.weight_total = 0.0;
            }
            if state.t >= state.window_start {
                let a = self.schedule.alpha(state.t);
                state.accumulate(a);
            }
            monitor.observe_transition(
                &state,
                &m,
                &before_avg,
                f_before,
                route_err,
                optimum.as_ref(),
            );
        }
        Ok(RunRecord {
            scaling_exponent: self.schedule.scaling_exponent(),
            rows,
            invariants: monitor.finish(),
            final_state: state,
        })
    }

    fn record_row(
        &self,
        state: &SolverState,
        m: &Measurement,
        optimum: Option<&(DVector<f64>, f64)>,
    ) -> RunRow {
        let t = state.t;
        let avg = state.average();
        let gap = optimum
            .map(|(_, f_star)| self.problem.objective(&avg) - f_star)
            .unwrap_or(f64::NAN);
        let scaled_gap = (t as f64).powf(self.schedule.scaling_exponent()) * gap;
        let avg_gap = match (state.windowed_average(), optimum) {
            (Some(xa), Some((_, f_star))) => self.problem.objective(&xa) - f_star,
            _ => f64::NAN,
        };
        RunRow {
            t,
            gap,
            scaled_gap,
            disagreement: state.disagreement(),
            s_norm1: m.mean_mapping().iter().map(|v| v.abs()).sum(),
            avg_gap,
        }
    }
}

/// `s = (x - P[x - alpha g]) / alpha`: coincides with the subgradient
/// wherever the projection is inactive, and inherits its norm bound.
pub fn gradient_mapping(
    x: &DVector<f64>,
    g: &DVector<f64>,
    alpha: f64,
    c: &ConstraintSet,
) -> DVector<f64> {
    assert!(alpha > 0.0, "gradient mapping needs a positive step");
    if matches!(c, ConstraintSet::Unconstrained { .. }) {
        return g.clone(); // identity projection: s = g with no rounding
    }
    let mut p = x - g * alpha;
    c.project_in_place(&mut p);
    (x - p) / alpha
}

fn mix_rows(w: &MixingMatrix, rows: &[DVector<f64>]) -> Vec<DVector<f64>> {
    let n = rows.len();
    let e = w.entries();
    let mut out = vec![DVector::zeros(rows[0].len()); n];
    for (i, out_i) in out.iter_mut().enumerate() {
        for (j, row_j) in rows.iter().enumerate() {
            let wij = e[(i, j)];
            if wij != 0.0 {
                out_i.axpy(wij, row_j, 1.0);
            }
        }
    }
    out
}

/// One recorded trajectory row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunRow {
    pub t: u64,
    /// `F(xbar(t)) - F*`; NaN when no optimum is attached.
    pub gap: f64,
    /// `t^(1-beta) * gap`.
    pub scaled_gap: f64,
    /// `||x(t) - 1 xbar(t)||_F`.
    pub disagreement: f64,
    /// l1 norm of the network-averaged gradient mapping actually applied.
    pub s_norm1: f64,
    /// `F(x'_alpha(t)) - F*` over the active window; NaN before it opens.
    pub avg_gap: f64,
}

/// Trajectory metrics plus the invariant slacks observed while running.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub scaling_exponent: f64,
    pub rows: Vec<RunRow>,
    pub invariants: InvariantReport,
    pub final_state: SolverState,
}

impl RunRecord {
    pub fn final_row(&self) -> &RunRow {
        self.rows.last().expect("a run records at least one row")
    }

    /// CSV with the documented header; floats use shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,gap,scaled_gap,disagreement,s_norm1,avg_gap\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.t, r.gap, r.scaled_gap, r.disagreement, r.s_norm1, r.avg_gap
            ));
        }
        out
    }
}

/// Worst observed slacks for the inequalities every run must satisfy.
/// Slacks are `bound - quantity`, so anything below zero is a violation.
#[derive(Debug, Clone)]
pub struct InvariantReport {
    /// `L - max_i ||s_i(t)||_2` minimized over steps.
    pub mapping_bound_min_slack: f64,
    /// Proof-form descent inequality
    /// `2 a s_i . (x_i - x*) >= 2 a (f_i(x_i) - f_i(x*)) - a^2 L^2`,
    /// minimized over steps and agents; present when the optimum is known
    /// and `L` is finite.
    pub descent_min_slack: Option<f64>,
    /// Centralized telescoping slack
    /// `||y(t) - x*||^2 - ||y(t+1) - x*||^2 + L^2 a^2 - 2 a (F(y(t)) - F*)`.
    pub telescoping_min_slack: Option<f64>,
    /// `max_t |xbar(t+1) - (xbar(t) - a(t) sbar(t))|` for MixAfterProject.
    pub consensus_mean_max_err: f64,
    /// Largest disagreement between the projected and gradient-mapping
    /// routes of MixAfterProject.
    pub mix_route_max_err: f64,
    /// Disagreement-bound check beyond the logarithmic threshold.
    pub distance_check: Option<DistanceCheck>,
}

#[derive(Debug, Clone, Copy)]
pub struct DistanceCheck {
    pub threshold: u64,
    /// max over checked steps of `disagreement / (2 C' a(t) L sqrt(n) / (1-sigma))`.
    pub max_ratio: f64,
    pub checked_steps: u64,
}

struct InvariantMonitor<'a, 'b> {
    solver: &'b Solver<'a>,
    l: f64,
    mapping_bound_min_slack: f64,
    descent_min_slack: Option<f64>,
    telescoping_min_slack: Option<f64>,
    consensus_mean_max_err: f64,
    mix_route_max_err: f64,
    distance_threshold: Option<u64>,
    distance_max_ratio: f64,
    distance_checked: u64,
}

impl<'a, 'b> InvariantMonitor<'a, 'b> {
    fn new(solver: &'b Solver<'a>, l: f64) -> Self {
        let distance_threshold = (solver.variant.is_distributed()
            && solver.variant.keeps_iterates_feasible()
            && l.is_finite()
            && solver.w.sigma() < 1.0)
            .then(|| solver.schedule.log_condition_threshold(solver.w.sigma()))
            .and_then(|r| r.ok());
        InvariantMonitor {
            solver,
            l,
            mapping_bound_min_slack: f64::INFINITY,
            descent_min_slack: None,
            telescoping_min_slack: None,
            consensus_mean_max_err: 0.0,
            mix_route_max_err: 0.0,
            distance_threshold,
            distance_max_ratio: 0.0,
            distance_checked: 0,
        }
    }

    fn observe_measurement(
        &mut self,
        state: &SolverState,
        m: &Measurement,
        optimum: Option<&(DVector<f64>, f64)>,
    ) {
        // mapping inherits the subgradient bound
        for s in &m.mappings {
            let slack = self.l - s.norm();
            self.mapping_bound_min_slack = self.mapping_bound_min_slack.min(slack);
            assert!(
                slack >= -1e-9,
                "gradient mapping norm {} exceeded the subgradient bound {}",
                s.norm(),
                self.l
            );
        }
        if let (Some((x_star, _)), true, true) = (
            optimum,
            self.l.is_finite(),
            self.solver.variant == Variant::MixAfterProject,
        ) {
            let a = m.alpha;
            for (i, (x, s)) in state.iterates.iter().zip(m.mappings.iter()).enumerate() {
                let f = self.solver.problem.local(i);
                let lhs = 2.0 * a * s.dot(&(x - x_star));
                let rhs = 2.0 * a * (f.eval(x) - f.eval(x_star)) - a * a * self.l * self.l;
                let slack = lhs - rhs;
                self.descent_min_slack =
                    Some(self.descent_min_slack.map_or(slack, |m: f64| m.min(slack)));
            }
        }
        if let (Some(threshold), true) = (self.distance_threshold, state.t >= 2) {
            if state.t >= threshold {
                let sigma = self.solver.w.sigma();
                let bound = 2.0
                    * self.solver.schedule.c_alpha_prime()
                    * m.alpha
                    * self.l
                    * (state.iterates.len() as f64).sqrt()
                    / (1.0 - sigma);
                self.distance_max_ratio = self.distance_max_ratio.max(state.disagreement() / bound);
                self.distance_checked += 1;
            }
        }
    }

    fn observe_transition(
        &mut self,
        state_after: &SolverState,
        m: &Measurement,
        before_avg: &DVector<f64>,
        f_before: Option<(f64, f64)>,
        route_err: f64,
        optimum: Option<&(DVector<f64>, f64)>,
    ) {
        self.mix_route_max_err = self.mix_route_max_err.max(route_err);
        if self.solver.variant == Variant::MixAfterProject {
            let predicted = before_avg - m.mean_mapping() * m.alpha;
            let err = (state_after.average() - predicted).amax();
            self.consensus_mean_max_err = self.consensus_mean_max_err.max(err);
        }
        if let (Variant::Centralized, Some((dist_sq_before, gap_before)), Some((x_star, _)), true) =
            (self.solver.variant, f_before, optimum, self.l.is_finite())
        {
            let dist_sq_after = (&state_after.iterates[0] - x_star).norm_squared();
            let a = m.alpha;
            let slack =
                dist_sq_before - dist_sq_after + self.l * self.l * a * a - 2.0 * a * gap_before;
            self.telescoping_min_slack = Some(
                self.telescoping_min_slack
                    .map_or(slack, |m: f64| m.min(slack)),
            );
        }
    }

    fn finish(self) -> InvariantReport {
        InvariantReport {
            mapping_bound_min_slack: self.mapping_bound_min_slack,
            descent_min_slack: self.descent_min_slack,
            telescoping_min_slack: self.telescoping_min_slack,
            consensus_mean_max_err: self.consensus_mean_max_err,
            mix_route_max_err: self.mix_route_max_err,
            distance_check: self.distance_threshold.map(|threshold| DistanceCheck {
                threshold,
                max_ratio: self.distance_max_ratio,
                checked_steps: self.distance_checked,
            }),
        }
    }
}

/// Outcome of running until the gradient-mapping norm falls below a
/// threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// First `t` (1-indexed state) at which the criterion held.
    Converged(u64),
    /// The criterion never held within the cap; carries the cap.
    CapExceeded(u64),
}

impl Termination {
    pub fn iterations(&self) -> u64 {
        match *self {
            Termination::Converged(t) | Termination::CapExceeded(t) => t,
        }
    }

    pub fn capped(&self) -> bool {
        matches!(self, Termination::CapExceeded(_))
    }
}

/// Runs until the l1 norm of the network-averaged gradient mapping --
/// computed with the norm-minimizing subgradient choice and with
/// components inside `zero_band` treated as zero -- first drops below
/// `threshold`. One centralized "iteration" is one full objective
/// subgradient step, cost-comparable to one distributed round (all n
/// local subgradients); under the alternative accounting of one local
/// subgradient per step, multiply the returned count by n.
pub fn terminate_on_mapping(
    solver: &Solver<'_>,
    init: Option<&DVector<f64>>,
    threshold: f64,
    zero_band: f64,
    cap: u64,
) -> Result<Termination> {
    if !threshold.is_finite() || threshold <= 0.0 {
        return invalid("termination threshold must be positive");
    }
    let mut state = solver.init_state(init, cap.max(1), WindowRule::Full)?;
    for t in 1..=cap {
        let alpha = solver.schedule.alpha(t);
        if minimal_mapping_l1(solver, &state, alpha, zero_band) < threshold {
            return Ok(Termination::Converged(t));
        }
        if t < cap {
            let m = solver.measure(&state, None)?;
            solver.advance(&mut state, &m)?;
        }
    }
    Ok(Termination::CapExceeded(cap))
}

/// l1 norm of the best-case network-averaged mapping. Componentwise the
/// mapping is monotone in the chosen subgradient for box or unconstrained
/// sets, so the admissible mean-mapping values per component form an
/// interval; the minimizing choice clamps zero into it. Ball constraints
/// couple components, so there the minimum-norm tie choice is evaluated
/// directly.
pub fn minimal_mapping_l1(
    solver: &Solver<'_>,
    state: &SolverState,
    alpha: f64,
    zero_band: f64,
) -> f64 {
    let problem = solver.problem;
    let d = problem.dimension();
    let constraint = problem.constraint();
    let interval_safe = !matches!(constraint, ConstraintSet::Ball { .. });
    let mut lo_sum = DVector::zeros(d);
    let mut hi_sum = DVector::zeros(d);
    let centralized = solver.variant == Variant::Centralized;
    let agents = if centralized { 1 } else { problem.n_agents() };
    for i in 0..agents {
        let x = &state.iterates()[i];
        if interval_safe {
            let (g_lo, g_hi) = if centralized {
                let mut lo = DVector::zeros(d);
                let mut hi = DVector::zeros(d);
                for f in problem.locals() {
                    let (l, h) = f.subgradient_interval(x);
                    lo += l;
                    hi += h;
                }
                let n = problem.n_agents() as f64;
                (lo / n, hi / n)
            } else {
                problem.local(i).subgradient_interval(x)
            };
            let s_lo = gradient_mapping(x, &g_lo, alpha, constraint);
            let s_hi = gradient_mapping(x, &g_hi, alpha, constraint);
            lo_sum += s_lo;
            hi_sum += s_hi;
        } else {
            let g = if centralized {
                problem.objective_subgradient(x, TieRule::MinimalNorm)
            } else {
                problem.local(i).subgradient(x, TieRule::MinimalNorm)
            };
            let s = gradient_mapping(x, &g, alpha, constraint);
            lo_sum += &s;
            hi_sum += s;
        }
    }
    let n = agents as f64;
    let mut norm = 0.0;
    for c in 0..d {
        let lo = lo_sum[c] / n;
        let hi = hi_sum[c] / n;
        let v = if lo > 0.0 {
            lo
        } else if hi < 0.0 {
            hi
        } else {
            0.0
        };
        if v.abs() >= zero_band {
            norm += v.abs();
        }
    }
    norm
}
