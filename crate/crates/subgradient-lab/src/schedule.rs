//! Step-size sequences `alpha(t)`, the constants they must satisfy, and the
//! transient thresholds after which the network-independent bound applies.
//!
//! Sequences are 1-indexed throughout: `alpha(1)` is the first step.

use crate::{invalid, Error, Result};
use std::fmt;
use std::str::FromStr;

/// A nonincreasing step-size sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSchedule {
    /// `alpha(t) = 1/t^beta` with `beta` in `(0, 1]`.
    Polynomial { beta: f64 },
    /// `alpha(t) = c` for all `t`.
    Constant { c: f64 },
}

impl StepSchedule {
    pub fn polynomial(beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta <= 0.0 || beta > 1.0 {
            return invalid(format!(
                "polynomial exponent must lie in (0, 1], got {beta}"
            ));
        }
        Ok(StepSchedule::Polynomial { beta })
    }

    pub fn constant(c: f64) -> Result<Self> {
        if !c.is_finite() || c <= 0.0 {
            return invalid(format!("constant step must be positive, got {c}"));
        }
        Ok(StepSchedule::Constant { c })
    }

    /// Step value at iteration `t >= 1`.
    ///
    /// Panics on `t = 0`; sequences are 1-indexed throughout.
    pub fn alpha(&self, t: u64) -> f64 {
        assert!(
            t >= 1,
            "step schedules are 1-indexed, alpha(0) is undefined"
        );
        match *self {
            StepSchedule::Polynomial { beta } => (t as f64).powf(-beta),
            StepSchedule::Constant { c } => c,
        }
    }

    /// `alpha(1)`, the largest step of the sequence.
    pub fn alpha_max(&self) -> f64 {
        self.alpha(1)
    }

    pub fn beta(&self) -> Option<f64> {
        match *self {
            StepSchedule::Polynomial { beta } => Some(beta),
            StepSchedule::Constant { .. } => None,
        }
    }

    /// Exponent of the gap rescaling `t^(1-beta) * (F - F*)` used when
    /// plotting; zero for constant schedules.
    pub fn scaling_exponent(&self) -> f64 {
        match *self {
            StepSchedule::Polynomial { beta } => 1.0 - beta,
            StepSchedule::Constant { .. } => 0.0,
        }
    }

    /// Whether the squared sequence has a finite sum.
    pub fn square_summable(&self) -> bool {
        matches!(*self, StepSchedule::Polynomial { beta } if beta > 0.5)
    }

    /// Whether the sequence itself has a finite sum. False for every
    /// schedule this crate admits (`beta <= 1` and constants both diverge).
    pub fn summable(&self) -> bool {
        false
    }

    /// Halving-ratio constant: the supremum of `alpha(t/2)/alpha(t)` over
    /// even `t`, in closed form. `2^beta` for polynomial schedules, 1 for
    /// constant ones.
    pub fn c_alpha_prime(&self) -> f64 {
        match *self {
            StepSchedule::Polynomial { beta } => 2f64.powf(beta),
            StepSchedule::Constant { .. } => 1.0,
        }
    }

    /// Largest observed ratio `sum_{k=1..t} alpha(k) / sum_{k=ceil(t/2)..t}
    /// alpha(k)` over `t` in `[2, t_max]`.
    ///
    /// This is a certified lower bound on any constant for which the
    /// whole-sum/half-sum inequality can hold at every `t`, and for
    /// polynomial schedules it is an accurate estimate of the supremum
    /// (the ratio increases towards `1/(1 - 2^(beta-1))`).
    pub fn estimate_c_alpha(&self, t_max: u64) -> f64 {
        assert!(t_max >= 2, "need t_max >= 2 to form a half-range sum");
        // prefix[t] = sum_{k=1..t} alpha(k), Kahan-compensated
        let m = t_max as usize;
        let mut prefix = vec![0.0f64; m + 1];
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for (t, slot) in prefix.iter_mut().enumerate().skip(1) {
            let y = self.alpha(t as u64) - comp;
            let s = sum + y;
            comp = (s - sum) - y;
            sum = s;
            *slot = sum;
        }
        let mut best = 0.0f64;
        for t in 2..=m {
            let lo = t.div_ceil(2); // ceil(t/2)
            let num = prefix[t];
            let den = prefix[t] - prefix[lo - 1];
            best = best.max(num / den);
        }
        best
    }

    /// Largest observed halving ratio `alpha(t/2)/alpha(t)` over even `t` in
    /// `[2, t_max]`.
    ///
    /// Sampling at even `t` keeps the halved index exact, so for polynomial
    /// schedules the estimate equals the asymptotic constant `2^beta` that
    /// the transient bounds rely on. (At small odd `t` the raw ratio
    /// `alpha(floor(t/2))/alpha(t)` overshoots: `t = 3` gives `3^beta`.)
    pub fn estimate_c_alpha_prime(&self, t_max: u64) -> f64 {
        assert!(t_max >= 2, "need t_max >= 2 to halve an index");
        let mut best = 1.0f64;
        let mut t = 2;
        while t <= t_max {
            best = best.max(self.alpha(t / 2) / self.alpha(t));
            t += 2;
        }
        best
    }

    /// Certified upper bound on the tail `sum_{k=floor(t/2)..inf} alpha(k)^2`.
    ///
    /// Exact partial sum up to `cutoff = max(t, 10^4)` plus the midpoint
    /// integral remainder `(cutoff + 1/2)^(1-2beta) / (2beta - 1)`, which
    /// dominates the remaining terms because `u^(-2beta)` is convex. The
    /// overestimate is below `1e-9` relative at the default cutoff.
    pub fn tail_sum_squares(&self, t: u64) -> Result<f64> {
        let beta = match *self {
            StepSchedule::Polynomial { beta } if beta > 0.5 => beta,
            _ => {
                return Err(Error::UnsupportedSchedule(format!(
                    "tail of squares diverges for {self}; need 1/t^beta with beta > 1/2"
                )))
            }
        };
        if t < 2 {
            return invalid("tail_sum_squares needs t >= 2");
        }
        let start = t / 2;
        let s = 2.0 * beta;
        // Far tails get the fully analytic certified bound
        // f(start) + integral from start + 1/2; summing 10^7+ terms buys
        // nothing at that scale.
        if start > 10_000_000 {
            let m = start as f64;
            return Ok(m.powf(-s) + (m + 0.5).powf(1.0 - s) / (s - 1.0));
        }
        let cutoff = t.clamp(10_000, 20_000_000);
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for k in start..=cutoff {
            let y = (k as f64).powf(-s) - comp;
            let tmp = sum + y;
            comp = (tmp - sum) - y;
            sum = tmp;
        }
        let remainder = (cutoff as f64 + 0.5).powf(1.0 - s) / (s - 1.0);
        Ok(sum + remainder)
    }

    /// Smallest `t` after which both transient conditions hold: the squared
    /// tail falls below `D^2 (1-sigma) / (10 C' L^2)`, and `t` clears the
    /// implicit logarithmic bound `t >= (2/(1-sigma)) log((1-sigma) t
    /// alpha_max / (C' alpha(t)))`.
    ///
    /// Passing `d = f64::INFINITY` disables the tail condition, leaving the
    /// logarithmic one (the disagreement lemma's own threshold).
    pub fn transient_threshold(&self, d: f64, l: f64, sigma: f64) -> Result<u64> {
        match *self {
            StepSchedule::Polynomial { beta } if beta > 0.5 => {}
            _ => {
                return Err(Error::UnsupportedSchedule(format!(
                    "transient threshold needs a square-summable polynomial schedule, got {self}"
                )))
            }
        }
        if !(l.is_finite() && l > 0.0) || d.is_nan() || d <= 0.0 {
            return invalid("transient threshold needs D > 0 and L > 0");
        }
        if !(0.0..1.0).contains(&sigma) {
            return invalid(format!("sigma must lie in [0, 1), got {sigma}"));
        }
        let tail_budget = d * d * (1.0 - sigma) / (10.0 * self.c_alpha_prime() * l * l);
        // The tail is nonincreasing in t, so bisect its crossing first.
        let t_tail = if tail_budget.is_infinite() {
            2
        } else {
            let mut hi = 2u64;
            while self.tail_sum_squares(hi)? > tail_budget {
                hi = hi.saturating_mul(2);
                if hi > 1 << 62 {
                    return invalid(format!(
                        "tail condition unreachable below 2^62 iterations for {self}"
                    ));
                }
            }
            let mut lo = (hi / 2).max(1);
            while lo + 1 < hi {
                let mid = lo + (hi - lo) / 2;
                if mid >= 2 && self.tail_sum_squares(mid)? <= tail_budget {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            hi
        };
        // Scan upward for the logarithmic condition; it is cheap per step
        // and its satisfied set may not be one interval at small t.
        let mut t = t_tail.max(2);
        while !self.log_condition_holds(t, sigma) {
            t += 1;
            if t > 1 << 62 {
                return invalid("log condition unreachable below 2^62 iterations");
            }
        }
        Ok(t)
    }

    /// Threshold of the logarithmic condition alone (smallest `t >= 2`).
    /// Valid for any nonincreasing schedule; the disagreement bound needs
    /// only this condition, the halving constant, and contraction.
    pub fn log_condition_threshold(&self, sigma: f64) -> Result<u64> {
        if !(0.0..1.0).contains(&sigma) {
            return invalid(format!("sigma must lie in [0, 1), got {sigma}"));
        }
        let mut t = 2u64;
        while !self.log_condition_holds(t, sigma) {
            t += 1;
            if t > 1 << 40 {
                return invalid("log condition unreachable below 2^40 iterations");
            }
        }
        Ok(t)
    }

    fn log_condition_holds(&self, t: u64, sigma: f64) -> bool {
        let gap = 1.0 - sigma;
        let arg = gap * t as f64 * self.alpha_max() / (self.c_alpha_prime() * self.alpha(t));
        t as f64 >= 2.0 / gap * arg.ln()
    }

    /// Measured constants plus the summability classification.
    pub fn constants(&self, t_max: u64) -> ScheduleConstants {
        ScheduleConstants {
            c_alpha: self.estimate_c_alpha(t_max),
            c_alpha_prime: self.estimate_c_alpha_prime(t_max),
            square_summable: self.square_summable(),
            summable: self.summable(),
        }
    }
}

/// Constants attached to a schedule: the whole-sum/half-sum ratio bound, the
/// halving ratio bound, and the summability classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleConstants {
    pub c_alpha: f64,
    pub c_alpha_prime: f64,
    pub square_summable: bool,
    pub summable: bool,
}

impl fmt::Display for StepSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            StepSchedule::Polynomial { beta } => write!(f, "poly:{beta}"),
            StepSchedule::Constant { c } => write!(f, "const:{c}"),
        }
    }
}

impl FromStr for StepSchedule {
    type Err = Error;

    /// Parses the CLI/config spelling: `poly:<beta>` or `const:<c>`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("schedule '{s}' is not kind:value")))?;
        let value: f64 = value
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad schedule parameter in '{s}'")))?;
        match kind {
            "poly" => StepSchedule::polynomial(value),
            "const" => StepSchedule::constant(value),
            _ => invalid(format!(
                "unknown schedule kind '{kind}' (expected poly|const)"
            )),
        }
    }
}
