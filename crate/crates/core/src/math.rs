//! Floating point helpers routed through `libm` so the crate stays
//! `no_std`-clean.

/// Natural logarithm.
#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn atan(x: f64) -> f64 {
    libm::atan(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// Integer power of a float by repeated multiplication.
pub fn powi(x: f64, k: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// `ln(k!)` summed term by term; exact enough for the factorials that show
/// up here (k up to a few thousand).
pub fn ln_factorial(k: u64) -> f64 {
    let mut acc = 0.0;
    for i in 2..=k {
        acc += ln(i as f64);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_factorial_small() {
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
        assert!((ln_factorial(4) - ln(24.0)).abs() < 1e-12);
        assert!((ln_factorial(10) - ln(3628800.0)).abs() < 1e-9);
    }

    #[test]
    fn powi_matches_std() {
        assert_eq!(powi(2.0, 10), 1024.0);
        assert!((powi(0.5, 3) - 0.125).abs() < 1e-15);
    }
}
