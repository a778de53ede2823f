//! Exact-arithmetic oracles shared by the integration tests. Nothing here
//! calls into the crate's recurrence or quadrature code.

#![allow(dead_code)]

use num::{BigInt, BigRational, One, ToPrimitive, Zero};

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().expect("finite rational")
}

/// `P_n^{(a,b)}(x)` from the explicit finite sum
/// `sum_s C(n+a, n-s) C(n+b, s) ((x-1)/2)^s ((x+1)/2)^(n-s)`.
pub fn jacobi_series(n: u32, a: u32, b: u32, x: &BigRational) -> BigRational {
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let lo = (x - &one) / &two;
    let hi = (x + &one) / &two;
    let mut acc = BigRational::zero();
    for s in 0..=n {
        let c = binomial(n + a, n - s) * binomial(n + b, s);
        let term = BigRational::from_integer(c) * pow(&lo, s) * pow(&hi, n - s);
        acc += term;
    }
    acc
}

pub fn pow(x: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Weighted moments `∫ (1-x)^a (1+x)^b x^d dx`, `d = 0..=max_degree`, from
/// `m_0 = 2^{a+b+1} a! b! / (a+b+1)!` and the integration-by-parts
/// recurrence `(a+b+d+2) m_{d+1} = (b-a) m_d + d m_{d-1}`.
pub fn weighted_moments(a: u32, b: u32, max_degree: usize) -> Vec<BigRational> {
    let fact = |n: u32| -> BigInt { (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k)) };
    let m0 = BigRational::new(
        BigInt::from(2).pow(a + b + 1) * fact(a) * fact(b),
        fact(a + b + 1),
    );
    let mut out = vec![m0];
    let diff = BigRational::from_integer(BigInt::from(i64::from(b) - i64::from(a)));
    for d in 0..max_degree {
        let prev = if d == 0 {
            BigRational::zero()
        } else {
            out[d - 1].clone() * BigRational::from_integer(BigInt::from(d))
        };
        let next = (diff.clone() * out[d].clone() + prev)
            / BigRational::from_integer(BigInt::from(u64::from(a + b) + d as u64 + 2));
        out.push(next);
    }
    out
}

/// Composite Simpson rule on `[lo, hi]` with `panels` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, panels: usize) -> f64 {
    assert!(panels.is_multiple_of(2));
    let h = (hi - lo) / panels as f64;
    let mut acc = f(lo) + f(hi);
    for i in 1..panels {
        let x = lo + h * i as f64;
        acc += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    acc * h / 3.0
}

pub fn rel(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs()
}

/// `P_n^{(a,b)}(k/den)` from the explicit sum, in integer arithmetic: with
/// `x = k/den` every term is an integer over `(2 den)^n`.
pub fn jacobi_series_at(n: u32, a: u32, b: u32, k: i64, den: i64) -> f64 {
    let lo = BigInt::from(k - den);
    let hi = BigInt::from(k + den);
    let mut lo_pow = vec![BigInt::one()];
    let mut hi_pow = vec![BigInt::one()];
    for i in 0..n as usize {
        lo_pow.push(&lo_pow[i] * &lo);
        hi_pow.push(&hi_pow[i] * &hi);
    }
    let mut acc = BigInt::zero();
    for s in 0..=n {
        acc += binomial(n + a, n - s)
            * binomial(n + b, s)
            * &lo_pow[s as usize]
            * &hi_pow[(n - s) as usize];
    }
    let scale = BigInt::from(2 * den).pow(n);
    to_f64(&BigRational::new(acc, scale))
}
