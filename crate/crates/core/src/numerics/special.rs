use std::sync::OnceLock;

use crate::{Error, Result};

/// Largest argument served from the cached `ln n!` table.
const FACTORIAL_TABLE_MAX: usize = 1_000_000;

/// `ln Γ(x)` for real `x > 0`.
///
/// Backed by the fdlibm `lgamma` algorithm (via `libm`), which keeps full
/// relative accuracy near the zeros at 1 and 2.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(libm::lgamma(x))
}

/// `ln Γ` without the domain check, for hot loops whose arguments are
/// positive by construction.
#[inline]
pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    libm::lgamma(x)
}

fn factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| (0..=FACTORIAL_TABLE_MAX).map(|n| libm::lgamma(n as f64 + 1.0)).collect())
}

/// `ln n!`, read from a lazily built table for `n ≤ 10⁶`.
pub fn log_factorial(n: u64) -> f64 {
    match usize::try_from(n) {
        Ok(i) if i <= FACTORIAL_TABLE_MAX => factorial_table()[i],
        _ => libm::lgamma(n as f64 + 1.0),
    }
}

/// `ln B(x, y) = ln Γ(x) + ln Γ(y) − ln Γ(x + y)`.
pub fn log_beta(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::domain(format!("log_beta requires positive arguments, got ({x}, {y})")));
    }
    Ok(log_gamma(x)? + log_gamma(y)? - log_gamma(x + y)?)
}
