//! Step-size constants and transient thresholds.
//!
//! For `alpha(t) = 1/t^beta` this prints the measured whole-sum/half-sum
//! ratio bound, the halving constant (exactly `2^beta`), the certified
//! squared-tail bounds, and the iteration count after which the
//! network-independent regime is guaranteed for a given spectral gap.
//!
//! ```text
//! cargo run --example schedule_constants
//! ```

use subgradient_lab::StepSchedule;

fn main() {
    for beta in [0.6, 0.75, 0.9] {
        let s = StepSchedule::polynomial(beta).unwrap();
        let constants = s.constants(1_000_000);
        println!("schedule {s}:");
        println!(
            "  whole/half sum ratio <= {:.4} (asymptote {:.4})",
            constants.c_alpha,
            1.0 / (1.0 - 2f64.powf(beta - 1.0))
        );
        println!(
            "  halving constant = {:.6} (= 2^beta)",
            constants.c_alpha_prime
        );
        println!(
            "  square-summable: {}, summable: {}",
            constants.square_summable, constants.summable
        );
        println!(
            "  tail of squares from t=1000: {:.6e}",
            s.tail_sum_squares(1000).unwrap()
        );
        // the transient until the network drops out of the bound; it blows
        // up quickly as beta approaches 1/2
        for sigma in [0.0, 0.75, 0.9375] {
            match s.transient_threshold(1.0, 1.0, sigma) {
                Ok(t) => println!("  transient threshold at sigma={sigma}: t = {t}"),
                Err(_) => println!("  transient threshold at sigma={sigma}: beyond 2^62 steps"),
            }
        }
        println!();
    }
}
