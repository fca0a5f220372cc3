//! Step-size inversion on random quartic elastic-net regressions.
//!
//! Counts iterations until the l1 norm of the (best-choice) gradient
//! mapping drops below 0.03, for ten agents on a line graph. The
//! centralized method prefers slowly decaying steps (small beta); the
//! distributed method's curve is not monotone -- over a range of
//! exponents, faster-decaying steps help it, because they also kill the
//! disagreement error faster.
//!
//! A reduced-scale run; raise `runs` toward 10^4 for smoother curves.
//!
//! ```text
//! cargo run --example step_size_inversion
//! ```

use subgradient_lab::experiments::{
    fig_inversion, has_decreasing_segment, spearman, InversionConfig,
};

fn main() {
    let cfg = InversionConfig {
        runs: 80,
        seed: 424_242,
        ..InversionConfig::default()
    };
    println!(
        "{} draws per exponent, termination ||s||_1 < {}, cap {}\n",
        cfg.runs, cfg.threshold, cfg.cap
    );
    let table = fig_inversion(&cfg).expect("sweep runs");
    println!("beta   centralized          distributed          capped");
    for r in &table.rows {
        println!(
            "{:.2}   {:>9.1} +- {:>6.1}   {:>9.1} +- {:>6.1}   {}",
            r.beta,
            r.mean_iters_centralized,
            r.se_c,
            r.mean_iters_distributed,
            r.se_d,
            r.capped_runs
        );
    }
    let betas: Vec<f64> = table.rows.iter().map(|r| r.beta).collect();
    println!(
        "\ncentralized Spearman(beta, iterations) = {:.3} (monotone-increasing trend)",
        spearman(&betas, &table.centralized_means())
    );
    println!(
        "distributed curve has a decreasing segment: {} (the inversion)",
        has_decreasing_segment(&table.distributed_means())
    );
}
