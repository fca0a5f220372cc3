//! Closed-form vs numeric spectrum of the two-cliques mixing matrix.
//!
//! The graph joins two complete graphs on `n` nodes by a perfect matching;
//! its equal-weight mixing matrix has eigenvalues
//! `{1, 1-2e, 1-ne (x n-1), 1-(n+2)e (x n-1)}`, so the spectral gap is
//! `2e` no matter how large the graph gets.
//!
//! ```text
//! cargo run --example spectrum
//! ```

use subgradient_lab::experiments::spectrum_comparison;
use subgradient_lab::graph::{build_gn_prime, mixing_matrix};

fn main() {
    for (n, eps) in [(4usize, 0.125), (8, 0.0625), (16, 0.03125)] {
        let cmp = spectrum_comparison(n, eps).expect("valid spectrum parameters");
        println!("two-cliques n={n}, eps={eps}:");
        println!("  closed form: {:?}", compact(&cmp.closed));
        println!("  numeric:     {:?}", compact(&cmp.numeric));
        println!("  max |diff| = {:.2e}", cmp.max_abs_diff());

        let w = mixing_matrix(&build_gn_prime(n).unwrap(), eps).unwrap();
        println!(
            "  second singular value (power iteration) = {:.12}, spectral gap = {:.4}\n",
            w.sigma(),
            w.spectral_gap()
        );
    }
}

fn compact(eigs: &[f64]) -> Vec<f64> {
    // collapse repeated eigenvalues for readable output
    let mut out: Vec<f64> = Vec::new();
    for &e in eigs {
        if out.last().is_none_or(|&l| (l - e).abs() > 1e-12) {
            out.push((e * 1e6).round() / 1e6);
        }
    }
    out
}
