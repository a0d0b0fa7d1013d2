use crate::{Error, Result};

/// Anytime confidence radius for the sample mean of `n` conditionally
/// 1-sub-Gaussian observations:
///
/// `sqrt((2 / n) * (1 + 2 ln(sqrt(1 + n) / delta)))`
///
/// holds with probability at least `1 - delta` simultaneously for all `n`.
pub fn selfnormalized_bound(n: u64, delta: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("sample count must be at least 1"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("delta = {delta} is outside (0, 1)")));
    }
    let n = n as f64;
    let log_term = 0.5 * (1.0 + n).ln() - delta.ln();
    Ok((2.0 / n * (1.0 + 2.0 * log_term)).sqrt())
}
