//! Test-side optimum oracle for the quartic elastic-net objective:
//! accelerated proximal gradient on the smooth quartic part with the exact
//! proximal map of `l2_w ||x||_2 + l1_w ||x||_1` (coordinate soft-threshold,
//! then radial shrink -- the two compose exactly for this pair). Fully
//! independent of the subgradient solver under test.

use nalgebra::DVector;
use subgradient_lab::problem::{LocalFunction, ProblemInstance};

pub struct Optimum {
    pub x: DVector<f64>,
    /// Norm of the minimum-norm subgradient of the (unnormalized)
    /// objective at `x`; certifies optimality when tiny.
    pub residual: f64,
}

/// Collects every data row owned by any agent.
pub fn all_rows(p: &ProblemInstance) -> Vec<(DVector<f64>, f64)> {
    let mut out = Vec::new();
    for local in p.locals() {
        if let LocalFunction::QuarticElasticNet { rows, .. } = local {
            out.extend(rows.iter().cloned());
        }
    }
    out
}

fn quartic_value(rows: &[(DVector<f64>, f64)], x: &DVector<f64>) -> f64 {
    rows.iter()
        .map(|(a, b)| {
            let r = a.dot(x) - b;
            r * r * r * r
        })
        .sum()
}

fn quartic_grad(rows: &[(DVector<f64>, f64)], x: &DVector<f64>) -> DVector<f64> {
    let mut g = DVector::zeros(x.len());
    for (a, b) in rows {
        let r = a.dot(x) - b;
        g.axpy(4.0 * r * r * r, a, 1.0);
    }
    g
}

/// prox of `step * (l1_w ||.||_1 + l2_w ||.||_2)`: soft-threshold each
/// coordinate by `step * l1_w`, then shrink the result radially by
/// `step * l2_w`.
fn prox(v: &DVector<f64>, step_l1: f64, step_l2: f64) -> DVector<f64> {
    let mut u = v.map(|c| c.signum() * (c.abs() - step_l1).max(0.0));
    let norm = u.norm();
    if norm > 0.0 {
        u *= (1.0 - step_l2 / norm).max(0.0);
    }
    u
}

/// Norm of the minimum-norm element of the subdifferential of
/// `quartic + l2_w ||.||_2 + l1_w ||.||_1` at `x`.
fn min_subgradient_norm(
    rows: &[(DVector<f64>, f64)],
    l2_w: f64,
    l1_w: f64,
    x: &DVector<f64>,
) -> f64 {
    let g = quartic_grad(rows, x);
    let norm_x = x.norm();
    if norm_x > 0.0 {
        let base = &g + x * (l2_w / norm_x);
        let best = base.map(|c| c.signum() * (c.abs() - l1_w).max(0.0));
        // components with x_j != 0 have no l1 freedom
        let mut v = DVector::zeros(x.len());
        for j in 0..x.len() {
            v[j] = if x[j] != 0.0 {
                base[j] + l1_w * x[j].signum()
            } else {
                best[j]
            };
        }
        v.norm()
    } else {
        // both regularizers have full freedom at the origin
        let shrunk = g.map(|c| c.signum() * (c.abs() - l1_w).max(0.0));
        (shrunk.norm() - l2_w).max(0.0)
    }
}

/// Minimizes `sum_j (a_j . x - b_j)^4 + l2_w ||x||_2 + l1_w ||x||_1` by
/// accelerated proximal gradient with backtracking and a monotone
/// safeguard, then certifies through the subgradient residual.
pub fn solve_unconstrained(rows: &[(DVector<f64>, f64)], l2_w: f64, l1_w: f64) -> Optimum {
    let d = rows[0].0.len();
    let total = |x: &DVector<f64>| {
        quartic_value(rows, x) + l2_w * x.norm() + l1_w * x.iter().map(|c| c.abs()).sum::<f64>()
    };
    let mut x = DVector::from_element(d, 1.0);
    let mut y = x.clone();
    let mut momentum = 1.0f64;
    let mut eta = 1e-2f64;
    let mut best = x.clone();
    let mut best_val = total(&x);
    for _ in 0..30_000 {
        let g = quartic_grad(rows, &y);
        let fy = quartic_value(rows, &y);
        let mut next;
        loop {
            next = prox(&(&y - &g * eta), eta * l1_w, eta * l2_w);
            let diff = &next - &y;
            let quad = fy + g.dot(&diff) + diff.norm_squared() / (2.0 * eta);
            if quartic_value(rows, &next) <= quad + 1e-18 {
                break;
            }
            eta *= 0.5;
            assert!(eta > 1e-18, "backtracking collapsed");
        }
        let val = total(&next);
        if val < best_val {
            best_val = val;
            best = next.clone();
        }
        let m_next = 0.5 * (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt());
        let mut accel = &next + (&next - &x) * ((momentum - 1.0) / m_next);
        // restart the momentum when it stops helping
        if total(&accel) > val {
            accel = next.clone();
            momentum = 1.0;
        } else {
            momentum = m_next;
        }
        x = next;
        y = accel;
        eta *= 1.25;
        if min_subgradient_norm(rows, l2_w, l1_w, &best) <= 1e-9 {
            break;
        }
    }
    let residual = min_subgradient_norm(rows, l2_w, l1_w, &best);
    Optimum { x: best, residual }
}
