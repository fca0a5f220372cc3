//! The worst-case construction, replayed end to end.
//!
//! Two cliques joined by a matching, `gamma |x|` on one side and
//! `(1/2)|x - 1|` on the other, step size `1/sqrt(t)`. An adversarial but
//! valid choice of subgradients pins the u-block at the optimum while the
//! v-block follows a closed-form recursion `y(t)` that decays no faster
//! than `1/(16 eps sqrt(t))` -- so the optimality gap keeps a factor
//! `1/eps` forever. This example replays the trajectory through the real
//! solver and checks they agree to 1e-9 at every step.
//!
//! ```text
//! cargo run --example counterexample_trajectory
//! ```

use subgradient_lab::counterexample::{verify_equivalence, y_trajectory, CounterexampleConfig};

fn main() {
    let horizon = 100_000;
    let cfg = CounterexampleConfig::simulation(4, 0.25, horizon).unwrap();
    println!(
        "two-cliques n={}, eps={}, gamma={}, a={}, {} steps",
        cfg.n, cfg.eps, cfg.gamma, cfg.a, cfg.horizon
    );

    let report = verify_equivalence(&cfg, 1e-9).expect("adversary stays valid");
    println!(
        "solver vs closed form: {} (max u deviation {:.2e}, max v deviation {:.2e})",
        if report.pass { "MATCH" } else { "MISMATCH" },
        report.max_u_deviation,
        report.max_v_deviation
    );
    println!(
        "largest adversarial u-subgradient: |g_u| = {:.4} <= gamma = {}",
        report.max_abs_g_u, cfg.gamma
    );

    let traj = y_trajectory(cfg.eps, horizon).unwrap();
    println!(
        "trajectory bounds: y in [0, 2], eps sqrt(t) y(t) <= 2, and >= 1/16 from t = {}",
        traj.t1_observed.unwrap()
    );
    for t in [1u64, 10, 100, 1_000, 10_000, 100_000] {
        println!(
            "  t = {t:>6}: y(t) = {:.6}, eps sqrt(t) y(t) = {:.4}",
            traj.value(t),
            traj.scaled(t)
        );
    }
}
