//! Log-space factorials and binomials.
//!
//! Every constant built from factorials (norms, kernel prefactors, closed-form
//! integrals) goes through these so nothing overflows past 170!.

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln(n!)`. Exact table lookup for small `n`.
pub fn ln_factorial(n: u32) -> f64 {
    const SMALL: usize = 32;
    if (n as usize) < SMALL {
        let mut acc = 1.0f64;
        for k in 2..=n {
            acc *= f64::from(k);
        }
        libm::log(acc)
    } else {
        ln_gamma(f64::from(n) + 1.0)
    }
}

/// `ln C(n, k)`; `k > n` has no logarithm and returns `-inf`.
pub fn ln_binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}
