//! Jacobi polynomials `P_n^{(a,b)}` with integer parameters, their norms, and
//! the diagonal Christoffel–Darboux kernel in summed and closed form.
//!
//! Polynomials are evaluated by the three-term recurrence in the degree. The
//! closed form of the kernel uses the derivative rule
//! `d/dx P_n^{(a,b)} = (n+a+b+1)/2 · P_{n-1}^{(a+1,b+1)}`, so only values of
//! the `(a,b)` and `(a+1,b+1)` families are needed.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::special::ln_factorial;

/// Jacobi exponents and kernel degree of a channel: weight `(1-x)^a (1+x)^b`,
/// kernel summed over degrees `0..r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct JacobiParams {
    pub a: u32,
    pub b: u32,
    pub r: u32,
}

impl JacobiParams {
    pub fn new(a: u32, b: u32, r: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::Domain("kernel degree r must be at least 1"));
        }
        Ok(Self { a, b, r })
    }
}

/// Prefactor and ratio of the closed-form kernel
/// `M [P_{r-1}^{(a,b)} P_{r-1}^{(a+1,b+1)} - N P_r^{(a,b)} P_{r-2}^{(a+1,b+1)}]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConstants {
    pub prefactor: f64,
    pub ratio: f64,
}

/// `P_n^{(a,b)}(x)`.
///
/// Valid for any real `x`; the capacity code only asks for `x` in `[-1, 1]`.
pub fn jacobi_eval(n: u32, a: u32, b: u32, x: f64) -> f64 {
    jacobi_eval_pair(n, a, b, x).1
}

/// `(P_{n-1}^{(a,b)}(x), P_n^{(a,b)}(x))` from one recurrence pass, with
/// `P_{-1} = 0`.
pub fn jacobi_eval_pair(n: u32, a: u32, b: u32, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    if n == 0 {
        return (prev, cur);
    }
    let (af, bf) = (f64::from(a), f64::from(b));
    let ab = af + bf;
    prev = cur;
    cur = (af + 1.0) + 0.5 * (ab + 2.0) * (x - 1.0);
    for k in 1..n {
        let k = f64::from(k);
        let s = 2.0 * k + ab;
        let denom = 2.0 * (k + 1.0) * (k + ab + 1.0) * s;
        let lin = (s + 1.0) * (s * (s + 2.0) * x + af * af - bf * bf);
        let lag = 2.0 * (k + af) * (k + bf) * (s + 2.0);
        let next = (lin * cur - lag * prev) / denom;
        prev = cur;
        cur = next;
    }
    (prev, cur)
}

fn ln_norm_b(k: u32, a: u32, b: u32) -> f64 {
    // B = 1/(2k+a+b+1) · (k+a)! (k+b)! / (k! (k+a+b)!)
    let s = f64::from(2 * k + a + b + 1);
    ln_factorial(k + a) + ln_factorial(k + b)
        - ln_factorial(k)
        - ln_factorial(k + a + b)
        - libm::log(s)
}

/// `B_{k,a,b} = ||P_k^{(a,b)}||^2 / 2^{a+b+1}`.
pub fn jacobi_norm_b(k: u32, a: u32, b: u32) -> f64 {
    libm::exp(ln_norm_b(k, a, b))
}

/// `||P_k^{(a,b)}||^2` under the weight `(1-x)^a (1+x)^b` on `[-1, 1]`.
pub fn jacobi_norm_sq(k: u32, a: u32, b: u32) -> f64 {
    libm::exp(ln_norm_b(k, a, b) + f64::from(a + b + 1) * core::f64::consts::LN_2)
}

/// `M_r^{(a,b)}` and `N_r^{(a,b)}`.
pub fn kernel_constants(params: JacobiParams) -> Result<KernelConstants> {
    let JacobiParams { a, b, r } = params;
    if r == 0 {
        return Err(Error::Domain("kernel constants need r >= 1"));
    }
    let (af, bf, rf) = (f64::from(a), f64::from(b), f64::from(r));
    let ln_m = ln_factorial(r + a + b + 1) + ln_factorial(r)
        - (af + bf + 1.0) * core::f64::consts::LN_2
        - ln_factorial(r + a - 1)
        - ln_factorial(r + b - 1)
        - libm::log(2.0 * rf + af + bf);
    Ok(KernelConstants {
        prefactor: libm::exp(ln_m),
        ratio: (rf + af + bf) / (rf + af + bf + 1.0),
    })
}

/// `K(x) = sum_{k<r} [P_k^{(a,b)}(x)]^2 / ||P_k^{(a,b)}||^2`.
pub fn cd_kernel_sum(params: JacobiParams, x: f64) -> f64 {
    SumKernel::new(params).eval(x)
}

/// Closed form of [`cd_kernel_sum`]; equal to it pointwise.
pub fn cd_kernel_closed(params: JacobiParams, x: f64) -> f64 {
    // r = 0 is rejected by JacobiParams::new; a hand-built one gets an empty kernel.
    match ClosedKernel::new(params) {
        Ok(k) => k.eval(x),
        Err(_) => 0.0,
    }
}

/// Kernel evaluated term by term: every degree `k < r` gets its own
/// polynomial evaluation. This is the literal sum the closed form replaces.
#[derive(Debug, Clone)]
pub struct SumKernel {
    a: u32,
    b: u32,
    inv_norms: Vec<f64>,
}

impl SumKernel {
    pub fn new(params: JacobiParams) -> Self {
        let inv_norms = (0..params.r)
            .map(|k| jacobi_norm_sq(k, params.a, params.b).recip())
            .collect();
        Self {
            a: params.a,
            b: params.b,
            inv_norms,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.inv_norms
            .iter()
            .enumerate()
            .map(|(k, inv)| {
                let p = jacobi_eval(k as u32, self.a, self.b, x);
                p * p * inv
            })
            .sum()
    }
}

/// Closed-form kernel split into the two bracket products so the lower bound
/// and the Q term can reuse the same evaluations.
#[derive(Debug, Clone, Copy)]
pub struct ClosedKernel {
    params: JacobiParams,
    constants: KernelConstants,
}

/// The two products inside the closed-form bracket at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketTerms {
    /// `P_{r-1}^{(a,b)} P_{r-1}^{(a+1,b+1)}`
    pub leading: f64,
    /// `P_r^{(a,b)} P_{r-2}^{(a+1,b+1)}`
    pub trailing: f64,
}

impl ClosedKernel {
    pub fn new(params: JacobiParams) -> Result<Self> {
        Ok(Self {
            params,
            constants: kernel_constants(params)?,
        })
    }

    pub fn constants(&self) -> KernelConstants {
        self.constants
    }

    pub fn terms(&self, x: f64) -> BracketTerms {
        let JacobiParams { a, b, r } = self.params;
        let (p_rm1, p_r) = jacobi_eval_pair(r, a, b, x);
        // shifted family needs degrees r-1 and r-2
        let (q_rm2, q_rm1) = jacobi_eval_pair(r - 1, a + 1, b + 1, x);
        BracketTerms {
            leading: p_rm1 * q_rm1,
            trailing: p_r * q_rm2,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = self.terms(x);
        self.constants.prefactor * (t.leading - self.constants.ratio * t.trailing)
    }
}

/// Closed form of `∫ (1-x)^c (1+x)^b P_n^{(a,b)}(x) P_m^{(c,b)}(x) dx` over
/// `[-1, 1]`, valid for `a > c` and `n >= m`; `None` outside that range.
pub fn mixed_weight_integral(n: u32, m: u32, a: u32, b: u32, c: u32) -> Option<f64> {
    if a <= c || n < m {
        return None;
    }
    let ln = f64::from(b + c + 1) * core::f64::consts::LN_2
        + ln_factorial(a + b + m + n)
        + ln_factorial(b + n)
        + ln_factorial(c + m)
        + ln_factorial(a - c + n - m - 1)
        - ln_factorial(m)
        - ln_factorial(n - m)
        - ln_factorial(a + b + n)
        - ln_factorial(b + c + m + n + 1)
        - ln_factorial(a - c - 1);
    Some(libm::exp(ln))
}

/// `∫ (1-x)^a (1+x)^b dx` over `[-1, 1]`.
pub fn weight_mass(a: u32, b: u32) -> f64 {
    libm::exp(
        f64::from(a + b + 1) * core::f64::consts::LN_2 + ln_factorial(a) + ln_factorial(b)
            - ln_factorial(a + b + 1),
    )
}
