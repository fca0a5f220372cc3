//! Closed-form machinery of the worst-case construction on the two-cliques
//! graph: the scalar recursion `y(t)` the v-block follows, the adversarial
//! subgradient choice that pins the u-block at zero, the comparison
//! sequence `z(t)`, and the verifier that replays the whole thing through
//! the real solver and checks agreement at every step.
//!
//! `sign(0) = +1` throughout; the trajectories are exact sequences, so the
//! convention is load-bearing.

use crate::graph::{build_gn_prime, mixing_matrix, MixingMatrix};
use crate::problem::{make_counterexample_problem, sign, ProblemInstance};
use crate::schedule::StepSchedule;
use crate::solver::{Solver, SubgradientSelector, Variant, WindowRule};
use crate::{invalid, Error, Result};
use nalgebra::DVector;

/// Parameters of the construction. Agents `0..n` are the u-block (local
/// objective `gamma |x|`), agents `n..2n` the v-block (`(1/2) |x - 1|`),
/// the constraint is `[-a, a]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleConfig {
    pub n: usize,
    pub eps: f64,
    pub gamma: f64,
    pub a: f64,
    pub horizon: u64,
}

impl CounterexampleConfig {
    pub fn new(n: usize, eps: f64, gamma: f64, a: f64, horizon: u64) -> Result<Self> {
        if n < 4 {
            return invalid(format!("the construction needs n >= 4, got {n}"));
        }
        if !eps.is_finite() || eps <= 0.0 || eps > 0.25 {
            return invalid(format!("eps must lie in (0, 1/4], got {eps}"));
        }
        if eps > 1.0 / n as f64 + 1e-15 {
            return invalid(format!(
                "eps must not exceed 1/n = {}, got {eps}",
                1.0 / n as f64
            ));
        }
        if !gamma.is_finite() || gamma <= 1.0 {
            return invalid(format!("gamma must exceed 1, got {gamma}"));
        }
        if !a.is_finite() || a <= 0.0 {
            return invalid(format!("box half-width must be positive, got {a}"));
        }
        if horizon < 1 {
            return invalid("horizon must be at least 1");
        }
        Ok(CounterexampleConfig {
            n,
            eps,
            gamma,
            a,
            horizon,
        })
    }

    /// Proof-certified constants: `gamma = 3`, `a = 3 + gamma = 6`. The
    /// adversarial value is bounded by 17/6 < 3 a priori.
    pub fn strict_proof(n: usize, eps: f64, horizon: u64) -> Result<Self> {
        Self::new(n, eps, 3.0, 6.0, horizon)
    }

    /// The tighter empirical constants `gamma = 2`, `a = 5`; validity is
    /// certified at runtime by the adversary's bound check instead of a
    /// proof.
    pub fn simulation(n: usize, eps: f64, horizon: u64) -> Result<Self> {
        Self::new(n, eps, 2.0, 5.0, horizon)
    }

    pub fn problem(&self) -> Result<ProblemInstance> {
        make_counterexample_problem(self.n, self.gamma, self.a)
    }

    pub fn mixing(&self) -> Result<MixingMatrix> {
        mixing_matrix(&build_gn_prime(self.n)?, self.eps)
    }
}

/// One step of the v-block recursion with `alpha(t) = 1/sqrt(t)`:
/// `y(t+1) = (1-e) y - [(1/2)(1-e) sign(y-1) + e D(t)] / sqrt(t)` with
/// `D(t) = (e sqrt(t) y - (e/2) sign(y-1)) / (1-e)`.
pub fn y_next(y: f64, t: u64, eps: f64) -> f64 {
    let sq = (t as f64).sqrt();
    let s = sign(y - 1.0);
    let delta = (eps * sq * y - 0.5 * eps * s) / (1.0 - eps);
    (1.0 - eps) * y - (0.5 * (1.0 - eps) * s + eps * delta) / sq
}

/// The trajectory `y(1..=horizon)` with the first time after which the
/// scaled lower bound `eps sqrt(t) y(t) >= 1/16` holds through the horizon.
#[derive(Debug, Clone)]
pub struct YTrajectory {
    values: Vec<f64>,
    pub t1_observed: Option<u64>,
    pub eps: f64,
}

impl YTrajectory {
    pub fn value(&self, t: u64) -> f64 {
        self.values[(t - 1) as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn horizon(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn scaled(&self, t: u64) -> f64 {
        self.eps * (t as f64).sqrt() * self.value(t)
    }
}

/// Iterates [`y_next`] from `y(1) = 0`.
pub fn y_trajectory(eps: f64, horizon: u64) -> Result<YTrajectory> {
    if !eps.is_finite() || eps <= 0.0 || eps > 0.25 {
        return invalid(format!("eps must lie in (0, 1/4], got {eps}"));
    }
    if horizon < 1 {
        return invalid("horizon must be at least 1");
    }
    let mut values = Vec::with_capacity(horizon as usize);
    let mut y = 0.0;
    values.push(y);
    for t in 1..horizon {
        y = y_next(y, t, eps);
        values.push(y);
    }
    // smallest t* with eps sqrt(t) y(t) >= 1/16 for every t in [t*, horizon]
    let mut t1 = None;
    for t in (1..=horizon).rev() {
        if eps * (t as f64).sqrt() * values[(t - 1) as usize] >= 1.0 / 16.0 {
            t1 = Some(t);
        } else {
            break;
        }
    }
    Ok(YTrajectory {
        values,
        t1_observed: t1,
        eps,
    })
}

/// The subgradient pair that realizes the trajectory at time `t` under the
/// `1/sqrt(t)` schedule: `g_v = (1/2) sign(y - 1)` and the u-choice that
/// cancels the v-block's pull on the u-block. Errors when the u-choice is
/// not a valid subgradient of `gamma |x|` at zero.
pub fn adversarial_selector(t: u64, y_t: f64, eps: f64, gamma: f64) -> Result<(f64, f64)> {
    let g_v = 0.5 * sign(y_t - 1.0);
    let g_u = (eps * (t as f64).sqrt() * y_t - eps * g_v) / (1.0 - eps);
    if g_u.abs() > gamma {
        return Err(Error::InvalidAdversary { t, g_u, gamma });
    }
    Ok((g_u, g_v))
}

/// Result of running the comparison sequence `z(t+1) = (1-e) z(t) +
/// 1/(2 sqrt(t))`, `z(1) = 0` against the trajectory.
#[derive(Debug, Clone, Copy)]
pub struct ZBoundCheck {
    /// `y(t) <= z(t)` held at every step.
    pub dominates: bool,
    /// `sqrt(t) z(t) <= 2 / eps` held at every step.
    pub scaled_bound_holds: bool,
    pub max_scaled_z: f64,
    pub first_dominance_violation: Option<u64>,
}

impl ZBoundCheck {
    pub fn pass(&self) -> bool {
        self.dominates && self.scaled_bound_holds
    }
}

pub fn z_bound_check(eps: f64, horizon: u64) -> Result<ZBoundCheck> {
    if !eps.is_finite() || eps <= 0.0 || eps >= 1.0 {
        return invalid(format!("eps must lie in (0, 1), got {eps}"));
    }
    let traj = y_trajectory(eps.min(0.25), horizon)?;
    let mut z = 0.0f64;
    let mut max_scaled_z = 0.0f64;
    let mut first_violation = None;
    for t in 1..=horizon {
        if traj.value(t) > z && first_violation.is_none() {
            first_violation = Some(t);
        }
        max_scaled_z = max_scaled_z.max((t as f64).sqrt() * z);
        if t < horizon {
            z = (1.0 - eps) * z + 0.5 / (t as f64).sqrt();
        }
    }
    Ok(ZBoundCheck {
        dominates: first_violation.is_none(),
        scaled_bound_holds: max_scaled_z <= 2.0 / eps,
        max_scaled_z,
        first_dominance_violation: first_violation,
    })
}

/// Stateful adversary usable as a solver override on the two-cliques
/// layout, generalized to any step schedule: at each `t` it chooses
/// `g_v = (1/2) sign(y - 1)` and the u-subgradient
/// `g_u = (e y / alpha(t) - e g_v) / (1 - e)` that keeps the u-block at
/// zero, advancing its own closed-form v-value `y`.
pub struct AdversarialSelector {
    n: usize,
    eps: f64,
    gamma: f64,
    schedule: StepSchedule,
    t_cur: u64,
    y: f64,
    g_u: f64,
    g_v: f64,
    pub max_abs_g_u: f64,
}

impl AdversarialSelector {
    pub fn new(cfg: &CounterexampleConfig, schedule: StepSchedule) -> Result<Self> {
        let mut sel = AdversarialSelector {
            n: cfg.n,
            eps: cfg.eps,
            gamma: cfg.gamma,
            schedule,
            t_cur: 1,
            y: 0.0,
            g_u: 0.0,
            g_v: 0.0,
            max_abs_g_u: 0.0,
        };
        sel.refresh(1)?;
        Ok(sel)
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn current_pair(&self) -> (f64, f64) {
        (self.g_u, self.g_v)
    }

    fn refresh(&mut self, t: u64) -> Result<()> {
        let alpha = self.schedule.alpha(t);
        self.g_v = 0.5 * sign(self.y - 1.0);
        self.g_u = (self.eps * self.y / alpha - self.eps * self.g_v) / (1.0 - self.eps);
        self.max_abs_g_u = self.max_abs_g_u.max(self.g_u.abs());
        if self.g_u.abs() > self.gamma {
            return Err(Error::InvalidAdversary {
                t,
                g_u: self.g_u,
                gamma: self.gamma,
            });
        }
        Ok(())
    }

    /// Advances the closed-form recursion up to time `t`.
    pub fn advance_to(&mut self, t: u64) -> Result<()> {
        if t < self.t_cur {
            return invalid("adversary asked to move backwards in time");
        }
        while self.t_cur < t {
            let alpha = self.schedule.alpha(self.t_cur);
            self.y = (1.0 - self.eps) * self.y
                - alpha * ((1.0 - self.eps) * self.g_v + self.eps * self.g_u);
            self.t_cur += 1;
            self.refresh(self.t_cur)?;
        }
        Ok(())
    }
}

impl SubgradientSelector for AdversarialSelector {
    fn select(&mut self, t: u64, agent: usize, _x: &DVector<f64>) -> Result<Option<DVector<f64>>> {
        self.advance_to(t)?;
        let g = if agent < self.n { self.g_u } else { self.g_v };
        Ok(Some(DVector::from_element(1, g)))
    }
}

/// Per-timestep sample of the trajectory comparison (strided to bound
/// memory on long runs).
#[derive(Debug, Clone, Copy)]
pub struct EquivalenceRow {
    pub t: u64,
    pub y: f64,
    pub eps_sqrt_t_y: f64,
    pub x_v_solver: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    UBlockLeftZero,
    VBlockLeftTrajectory,
    ProjectionActivated,
}

/// Outcome of replaying the construction through the real solver.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub pass: bool,
    pub first_violation: Option<(u64, ViolationKind)>,
    pub max_u_deviation: f64,
    pub max_v_deviation: f64,
    pub max_abs_g_u: f64,
    pub rows: Vec<EquivalenceRow>,
}

/// Runs the mix-after-project solver on the two-cliques graph with the
/// adversarial override and checks, at every step: the u-rows stay within
/// `tol` of zero, the v-rows within `tol` of the closed-form `y(t)`, and no
/// pre-projection value ever leaves the open interval `(-a, a)`.
pub fn verify_equivalence(cfg: &CounterexampleConfig, tol: f64) -> Result<EquivalenceReport> {
    let problem = cfg.problem()?;
    let w = cfg.mixing()?;
    let schedule = StepSchedule::polynomial(0.5).expect("1/sqrt(t) is valid");
    let solver = Solver::new(&w, &problem, schedule, Variant::MixAfterProject)?;
    let mut selector = AdversarialSelector::new(cfg, schedule)?;
    let mut state = solver.init_state(None, cfg.horizon, WindowRule::Half)?;
    let mut reference = 0.0f64; // independent sqrt-form recursion
    let mut report = EquivalenceReport {
        pass: true,
        first_violation: None,
        max_u_deviation: 0.0,
        max_v_deviation: 0.0,
        max_abs_g_u: 0.0,
        rows: Vec::new(),
    };
    let stride = cfg.horizon.div_ceil(100_000).max(1);
    let violate = |report: &mut EquivalenceReport, t: u64, kind: ViolationKind| {
        report.pass = false;
        if report.first_violation.is_none() {
            report.first_violation = Some((t, kind));
        }
    };
    for t in 1..=cfg.horizon {
        selector.advance_to(t)?;
        let (g_u, g_v) = selector.current_pair();
        let alpha = schedule.alpha(t);
        let mut u_dev = 0.0f64;
        let mut v_dev = 0.0f64;
        for (i, x) in state.iterates().iter().enumerate() {
            let xi = x[0];
            let g = if i < cfg.n { g_u } else { g_v };
            let pre_projection = xi - alpha * g;
            if pre_projection <= -cfg.a || pre_projection >= cfg.a {
                violate(&mut report, t, ViolationKind::ProjectionActivated);
            }
            if i < cfg.n {
                u_dev = u_dev.max(xi.abs());
            } else {
                v_dev = v_dev.max((xi - reference).abs());
            }
        }
        report.max_u_deviation = report.max_u_deviation.max(u_dev);
        report.max_v_deviation = report.max_v_deviation.max(v_dev);
        if u_dev > tol {
            violate(&mut report, t, ViolationKind::UBlockLeftZero);
        }
        if v_dev > tol {
            violate(&mut report, t, ViolationKind::VBlockLeftTrajectory);
        }
        if t == 1 || t == cfg.horizon || t % stride == 0 {
            let x_v = state.agent(cfg.n)[0];
            report.rows.push(EquivalenceRow {
                t,
                y: reference,
                eps_sqrt_t_y: cfg.eps * (t as f64).sqrt() * reference,
                x_v_solver: x_v,
                abs_diff: (x_v - reference).abs(),
            });
        }
        if t < cfg.horizon {
            let m = solver.measure(&state, Some(&mut selector))?;
            solver.advance(&mut state, &m)?;
            reference = y_next(reference, t, cfg.eps);
        }
    }
    report.max_abs_g_u = selector.max_abs_g_u;
    Ok(report)
}
