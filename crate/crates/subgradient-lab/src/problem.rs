//! Convex local objectives with subgradient oracles, constraint sets with
//! projections, and the two concrete problem families used by the
//! experiments: scaled absolute values for the worst-case construction, and
//! a quartic regression with elastic-net regularization for the step-size
//! sweep.
//!
//! Sign convention at kinks: `sign(0) = +1`. The trajectory equivalence
//! checks reproduce exact sequences, so this choice is load-bearing.

use crate::{invalid, Result};
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Name of the pseudo-random generator used for data draws; recorded in
/// run metadata so experiments are replayable.
pub const RNG_ALGORITHM: &str = "chacha8";

pub(crate) fn sign(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// How to pick a subgradient where the subdifferential is not a singleton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieRule {
    /// `sign(0) = +1` on every absolute-value-type term.
    #[default]
    SignPlus,
    /// The minimum-norm element, term by term (the "best possible" choice
    /// used when measuring the gradient mapping for termination).
    MinimalNorm,
}

/// One agent's convex objective.
#[derive(Debug, Clone, PartialEq)]
pub enum LocalFunction {
    /// `f(x) = scale * |x - shift|` on scalars.
    ScaledAbs { scale: f64, shift: f64 },
    /// `f(x) = sum_j (a_j . x - b_j)^4 + l1 ||x||_2 + l2 ||x||_1`, where
    /// `l1`, `l2` already carry this agent's share of the regularizers.
    QuarticElasticNet {
        rows: Vec<(DVector<f64>, f64)>,
        l1: f64,
        l2: f64,
        /// Subgradient-norm bound valid on the constraint region the problem
        /// was built with; infinite when unconstrained.
        lipschitz: f64,
    },
}

impl LocalFunction {
    pub fn eval(&self, x: &DVector<f64>) -> f64 {
        match self {
            LocalFunction::ScaledAbs { scale, shift } => scale * (x[0] - shift).abs(),
            LocalFunction::QuarticElasticNet { rows, l1, l2, .. } => {
                let quartic: f64 = rows
                    .iter()
                    .map(|(a, b)| {
                        let r = a.dot(x) - b;
                        r * r * r * r
                    })
                    .sum();
                quartic + l1 * x.norm() + l2 * x.iter().map(|v| v.abs()).sum::<f64>()
            }
        }
    }

    pub fn subgradient(&self, x: &DVector<f64>, tie: TieRule) -> DVector<f64> {
        let mut g = DVector::zeros(x.len());
        self.subgradient_into(x, tie, &mut g);
        g
    }

    pub fn subgradient_into(&self, x: &DVector<f64>, tie: TieRule, out: &mut DVector<f64>) {
        match self {
            LocalFunction::ScaledAbs { scale, shift } => {
                let d = x[0] - shift;
                out[0] = if d == 0.0 && tie == TieRule::MinimalNorm {
                    0.0
                } else {
                    scale * sign(d)
                };
            }
            LocalFunction::QuarticElasticNet { rows, l1, l2, .. } => {
                out.fill(0.0);
                for (a, b) in rows {
                    let r = a.dot(x) - b;
                    out.axpy(4.0 * r * r * r, a, 1.0);
                }
                let norm = x.norm();
                if norm > 0.0 {
                    out.axpy(l1 / norm, x, 1.0);
                } else if tie == TieRule::SignPlus {
                    // boundary element of the l2 ball with +1 on every axis
                    let unit = l1 / (x.len() as f64).sqrt();
                    for v in out.iter_mut() {
                        *v += unit;
                    }
                }
                for (c, v) in x.iter().enumerate() {
                    if *v != 0.0 {
                        out[c] += l2 * sign(*v);
                    } else if tie == TieRule::SignPlus {
                        out[c] += l2;
                    }
                }
            }
        }
    }

    /// Per-component subgradient range `[lo, hi]` across every admissible
    /// tie choice. Singleton components have `lo = hi`.
    pub fn subgradient_interval(&self, x: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
        match self {
            LocalFunction::ScaledAbs { scale, shift } => {
                let d = x[0] - shift;
                if d == 0.0 {
                    (
                        DVector::from_element(1, -scale),
                        DVector::from_element(1, *scale),
                    )
                } else {
                    let g = scale * sign(d);
                    (DVector::from_element(1, g), DVector::from_element(1, g))
                }
            }
            LocalFunction::QuarticElasticNet { rows, l1, l2, .. } => {
                let mut base = DVector::zeros(x.len());
                for (a, b) in rows {
                    let r = a.dot(x) - b;
                    base.axpy(4.0 * r * r * r, a, 1.0);
                }
                let mut slack = DVector::zeros(x.len());
                let norm = x.norm();
                if norm > 0.0 {
                    base.axpy(l1 / norm, x, 1.0);
                } else {
                    // the l2 ball allows up to l1 per component
                    slack.add_scalar_mut(*l1);
                }
                for (c, v) in x.iter().enumerate() {
                    if *v != 0.0 {
                        base[c] += l2 * sign(*v);
                    } else {
                        slack[c] += l2;
                    }
                }
                (&base - &slack, base + slack)
            }
        }
    }

    /// Bound on the Euclidean norm of every subgradient this oracle returns
    /// over the region it was constructed for.
    pub fn lipschitz_bound(&self) -> f64 {
        match self {
            LocalFunction::ScaledAbs { scale, .. } => *scale,
            LocalFunction::QuarticElasticNet { lipschitz, .. } => *lipschitz,
        }
    }
}

/// Closed convex feasible set with Euclidean projection.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintSet {
    Unconstrained { dimension: usize },
    Box { lo: DVector<f64>, hi: DVector<f64> },
    Ball { center: DVector<f64>, radius: f64 },
}

impl ConstraintSet {
    pub fn unconstrained(dimension: usize) -> Self {
        ConstraintSet::Unconstrained { dimension }
    }

    pub fn symmetric_box(dimension: usize, a: f64) -> Result<Self> {
        Self::bounded_box(
            DVector::from_element(dimension, -a),
            DVector::from_element(dimension, a),
        )
    }

    pub fn bounded_box(lo: DVector<f64>, hi: DVector<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return invalid("box bounds must share a positive dimension");
        }
        if lo.iter().zip(hi.iter()).any(|(l, h)| l > h) {
            return invalid("box has an empty side (lo > hi)");
        }
        Ok(ConstraintSet::Box { lo, hi })
    }

    pub fn ball(center: DVector<f64>, radius: f64) -> Result<Self> {
        if !radius.is_finite() || radius <= 0.0 {
            return invalid(format!("ball radius must be positive, got {radius}"));
        }
        Ok(ConstraintSet::Ball { center, radius })
    }

    pub fn dimension(&self) -> usize {
        match self {
            ConstraintSet::Unconstrained { dimension } => *dimension,
            ConstraintSet::Box { lo, .. } => lo.len(),
            ConstraintSet::Ball { center, .. } => center.len(),
        }
    }

    /// Euclidean diameter; infinite when unconstrained.
    pub fn diameter(&self) -> f64 {
        match self {
            ConstraintSet::Unconstrained { .. } => f64::INFINITY,
            ConstraintSet::Box { lo, hi } => (hi - lo).norm(),
            ConstraintSet::Ball { radius, .. } => 2.0 * radius,
        }
    }

    /// Nearest point of the set in Euclidean norm.
    pub fn project(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut out = x.clone();
        self.project_in_place(&mut out);
        out
    }

    pub fn project_in_place(&self, x: &mut DVector<f64>) {
        match self {
            ConstraintSet::Unconstrained { .. } => {}
            ConstraintSet::Box { lo, hi } => {
                for c in 0..x.len() {
                    x[c] = x[c].clamp(lo[c], hi[c]);
                }
            }
            ConstraintSet::Ball { center, radius } => {
                let mut dist_sq = 0.0;
                for c in 0..x.len() {
                    let d = x[c] - center[c];
                    dist_sq += d * d;
                }
                let dist = dist_sq.sqrt();
                if dist > *radius {
                    let scale = radius / dist;
                    for c in 0..x.len() {
                        x[c] = center[c] + (x[c] - center[c]) * scale;
                    }
                }
            }
        }
    }

    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        (self.project(x) - x).norm() <= tol
    }
}

/// A distributed problem: one local objective per agent, a shared
/// constraint set, and (when known) the optimum used for gap metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    locals: Vec<LocalFunction>,
    constraint: ConstraintSet,
    dimension: usize,
    known_optimum: Option<(DVector<f64>, f64)>,
}

impl ProblemInstance {
    pub fn new(
        locals: Vec<LocalFunction>,
        constraint: ConstraintSet,
        dimension: usize,
    ) -> Result<Self> {
        if locals.is_empty() {
            return invalid("a problem needs at least one local function");
        }
        if constraint.dimension() != dimension {
            return invalid("constraint dimension does not match the problem dimension");
        }
        Ok(ProblemInstance {
            locals,
            constraint,
            dimension,
            known_optimum: None,
        })
    }

    /// Attaches a known optimum after checking `F(x*) = f*` to 1e-12.
    pub fn with_known_optimum(mut self, x_star: DVector<f64>, f_star: f64) -> Result<Self> {
        let value = self.objective(&x_star);
        if (value - f_star).abs() > 1e-12 {
            return invalid(format!(
                "claimed optimum value {f_star} but F(x*) evaluates to {value}"
            ));
        }
        self.known_optimum = Some((x_star, f_star));
        Ok(self)
    }

    /// Replaces the constraint set, refreshing each quartic local's
    /// Lipschitz bound so it is valid on the new region.
    pub fn with_constraint(mut self, constraint: ConstraintSet) -> Result<Self> {
        if constraint.dimension() != self.dimension {
            return invalid("constraint dimension does not match the problem dimension");
        }
        for local in &mut self.locals {
            if let LocalFunction::QuarticElasticNet {
                rows,
                l1,
                l2,
                lipschitz,
            } = local
            {
                *lipschitz = quartic_lipschitz(rows, *l1, *l2, &constraint);
            }
        }
        self.constraint = constraint;
        self.known_optimum = None;
        Ok(self)
    }

    pub fn n_agents(&self) -> usize {
        self.locals.len()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn locals(&self) -> &[LocalFunction] {
        &self.locals
    }

    pub fn local(&self, agent: usize) -> &LocalFunction {
        &self.locals[agent]
    }

    pub fn constraint(&self) -> &ConstraintSet {
        &self.constraint
    }

    pub fn known_optimum(&self) -> Option<(&DVector<f64>, f64)> {
        self.known_optimum.as_ref().map(|(x, f)| (x, *f))
    }

    /// `F(x) = (1/n) sum_i f_i(x)`.
    pub fn objective(&self, x: &DVector<f64>) -> f64 {
        self.locals.iter().map(|f| f.eval(x)).sum::<f64>() / self.locals.len() as f64
    }

    /// Subgradient of `F` at `x`: the average of per-agent subgradients.
    pub fn objective_subgradient(&self, x: &DVector<f64>, tie: TieRule) -> DVector<f64> {
        let mut g = DVector::zeros(self.dimension);
        let mut tmp = DVector::zeros(self.dimension);
        for f in &self.locals {
            f.subgradient_into(x, tie, &mut tmp);
            g += &tmp;
        }
        g / self.locals.len() as f64
    }

    /// Largest per-agent subgradient-norm bound; the `L` of the run.
    pub fn lipschitz_bound(&self) -> f64 {
        self.locals
            .iter()
            .map(|f| f.lipschitz_bound())
            .fold(0.0, f64::max)
    }
}

/// Worst-case instance on the two-cliques graph ordering: `n` u-agents with
/// `gamma |x|`, then `n` v-agents with `(1/2) |x - 1|`, constrained to
/// `[-a, a]`. Since `gamma > 1 > 1/2` the optimum is `x* = 0` with
/// `F* = 1/4`.
pub fn make_counterexample_problem(n: usize, gamma: f64, a: f64) -> Result<ProblemInstance> {
    if n < 2 {
        return invalid(format!("counterexample needs n >= 2, got {n}"));
    }
    if !gamma.is_finite() || gamma <= 1.0 {
        return invalid(format!(
            "counterexample needs gamma > 1 (got {gamma}); otherwise the optimum moves off zero"
        ));
    }
    if !a.is_finite() || a <= 0.0 {
        return invalid(format!("box half-width must be positive, got {a}"));
    }
    let mut locals = Vec::with_capacity(2 * n);
    for _ in 0..n {
        locals.push(LocalFunction::ScaledAbs {
            scale: gamma,
            shift: 0.0,
        });
    }
    for _ in 0..n {
        locals.push(LocalFunction::ScaledAbs {
            scale: 0.5,
            shift: 1.0,
        });
    }
    ProblemInstance::new(locals, ConstraintSet::symmetric_box(1, a)?, 1)?
        .with_known_optimum(DVector::from_element(1, 0.0), 0.25)
}

/// Quartic elastic-net regression from explicit data rows, split evenly
/// among `n_agents` (remainder to the first agents); each agent also takes
/// a `1/n` share of both regularizers so the averaged objective reproduces
/// the full regression loss up to the global `1/n` convention.
pub fn quartic_from_data(
    rows: Vec<(DVector<f64>, f64)>,
    n_agents: usize,
    lambda1: f64,
    lambda2: f64,
    constraint: ConstraintSet,
) -> Result<ProblemInstance> {
    if rows.is_empty() {
        return invalid("need at least one data row");
    }
    if n_agents == 0 {
        return invalid("need at least one agent");
    }
    let dimension = rows[0].0.len();
    if rows.iter().any(|(a, _)| a.len() != dimension) {
        return invalid("data rows disagree on dimension");
    }
    if constraint.dimension() != dimension {
        return invalid("constraint dimension does not match the data dimension");
    }
    let k = rows.len();
    let base = k / n_agents;
    let rem = k % n_agents;
    let nf = n_agents as f64;
    let mut iter = rows.into_iter();
    let mut locals = Vec::with_capacity(n_agents);
    for i in 0..n_agents {
        let share = base + usize::from(i < rem);
        let mine: Vec<(DVector<f64>, f64)> = iter.by_ref().take(share).collect();
        let (l1, l2) = (lambda1 / nf, lambda2 / nf);
        let lipschitz = quartic_lipschitz(&mine, l1, l2, &constraint);
        locals.push(LocalFunction::QuarticElasticNet {
            rows: mine,
            l1,
            l2,
            lipschitz,
        });
    }
    ProblemInstance::new(locals, constraint, dimension)
}

/// Random quartic elastic-net draw: `k` rows with standard normal entries,
/// responses `b_j = a_j . 1 + w_j` with `w_j ~ N(0, noise_std^2)`.
/// Deterministic in `seed` (ChaCha8). Unconstrained; attach a region with
/// [`ProblemInstance::with_constraint`] when a finite subgradient bound is
/// needed.
#[allow(clippy::too_many_arguments)]
pub fn make_quartic_elasticnet(
    k: usize,
    d: usize,
    lambda1: f64,
    lambda2: f64,
    noise_std: f64,
    seed: u64,
    n_agents: usize,
) -> Result<ProblemInstance> {
    if k == 0 || d == 0 {
        return invalid("need k >= 1 data points and d >= 1 dimensions");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let mut rows = Vec::with_capacity(k);
    for _ in 0..k {
        let a = DVector::from_fn(d, |_, _| normal.sample(&mut rng));
        let b =
            a.sum() + noise_std * <StandardNormal as Distribution<f64>>::sample(&normal, &mut rng);
        rows.push((a, b));
    }
    quartic_from_data(
        rows,
        n_agents,
        lambda1,
        lambda2,
        ConstraintSet::unconstrained(d),
    )
}

/// Subgradient-norm bound for one agent's quartic share over a region:
/// `sum_j 4 R_j^3 ||a_j|| + l1 + l2 sqrt(d)`, with `R_j` the largest
/// possible residual on the region.
fn quartic_lipschitz(rows: &[(DVector<f64>, f64)], l1: f64, l2: f64, c: &ConstraintSet) -> f64 {
    let d = c.dimension() as f64;
    let reg = l1 + l2 * d.sqrt();
    match c {
        ConstraintSet::Unconstrained { .. } => {
            if rows.is_empty() {
                reg
            } else {
                f64::INFINITY
            }
        }
        ConstraintSet::Box { lo, hi } => {
            let quartic: f64 = rows
                .iter()
                .map(|(a, b)| {
                    let mid = a
                        .iter()
                        .zip(lo.iter().zip(hi.iter()))
                        .map(|(ac, (l, h))| ac * 0.5 * (l + h))
                        .sum::<f64>();
                    let spread = a
                        .iter()
                        .zip(lo.iter().zip(hi.iter()))
                        .map(|(ac, (l, h))| ac.abs() * 0.5 * (h - l))
                        .sum::<f64>();
                    let r = (mid - b).abs() + spread;
                    4.0 * r * r * r * a.norm()
                })
                .sum();
            quartic + reg
        }
        ConstraintSet::Ball { center, radius } => {
            let quartic: f64 = rows
                .iter()
                .map(|(a, b)| {
                    let r = (a.dot(center) - b).abs() + a.norm() * radius;
                    4.0 * r * r * r * a.norm()
                })
                .sum();
            quartic + reg
        }
    }
}
