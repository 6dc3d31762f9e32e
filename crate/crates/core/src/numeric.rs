//! Small floating-point helpers shared by the analytic modules.

/// `ln(n!)` via log-gamma.
pub fn ln_factorial(n: usize) -> f64 {
    libm::lgamma(n as f64 + 1.0)
}

/// `ln(1 - e^{-t})` for `t > 0`, switching formula at `ln 2` so neither
/// branch cancels.
pub fn log1mexp(t: f64) -> f64 {
    if t < std::f64::consts::LN_2 {
        (-(-t).exp_m1()).ln()
    } else {
        (-(-t).exp()).ln_1p()
    }
}

/// Log-sum-exp of `values` divided by their count, i.e. `ln(mean(exp(v)))`.
pub fn log_mean_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + (sum / values.len() as f64).ln()
}
