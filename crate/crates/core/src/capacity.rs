//! Ergodic capacity of the Jacobi MIMO channel.
//!
//! An `m_r x m_t` corner of an `m x m` Haar unitary gives `H^H H` Jacobi
//! distributed eigenvalues with weight exponents `a = |m_r - m_t|`,
//! `b = m - m_r - m_t` and `r = min(m_r, m_t)` nonzero eigenvalues. For
//! `m_t + m_r <= m` the capacity is the integral of `log2(1 + rho (1-x)/2)`
//! against the weighted Christoffel–Darboux kernel on `[-1, 1]`; the other
//! case is mapped back onto it by reflection.
//!
//! All integrals here are taken on the `x` domain with a Gauss–Jacobi rule
//! whose weight matches `(a, b)` exactly.

use alloc::vec::Vec;
use core::f64::consts::LN_2;
use core::fmt;

use crate::error::{Error, Result};
use crate::jacobi::{ClosedKernel, JacobiParams, SumKernel};
use crate::quadrature::{QuadratureRule, RuleSource};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChannelConfig {
    m: u32,
    m_t: u32,
    m_r: u32,
}

impl ChannelConfig {
    pub fn new(m: u32, m_t: u32, m_r: u32) -> Result<Self> {
        let invalid = |reason| Error::InvalidConfig {
            m,
            m_t,
            m_r,
            reason,
        };
        if m == 0 {
            return Err(invalid("m must be at least 1"));
        }
        if m_t == 0 || m_r == 0 {
            return Err(invalid("m_t and m_r must be at least 1"));
        }
        if m_t > m || m_r > m {
            return Err(invalid("m_t and m_r cannot exceed m"));
        }
        Ok(Self { m, m_t, m_r })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn m_t(&self) -> u32 {
        self.m_t
    }

    pub fn m_r(&self) -> u32 {
        self.m_r
    }

    pub fn a(&self) -> u32 {
        self.m_r.abs_diff(self.m_t)
    }

    /// `m - m_r - m_t`; negative when the reflection branch applies.
    pub fn b(&self) -> i64 {
        i64::from(self.m) - i64::from(self.m_r) - i64::from(self.m_t)
    }

    pub fn r(&self) -> u32 {
        self.m_r.min(self.m_t)
    }

    /// True when `m_t + m_r > m`.
    pub fn needs_reflection(&self) -> bool {
        self.b() < 0
    }

    /// Jacobi parameters of the direct branch.
    pub fn jacobi_params(&self) -> Result<JacobiParams> {
        if self.needs_reflection() {
            return Err(Error::NeedsReflection {
                m: self.m,
                m_t: self.m_t,
                m_r: self.m_r,
            });
        }
        JacobiParams::new(self.a(), self.b() as u32, self.r())
    }

    /// The configuration `(m - m_r, m - m_t)` and the number of deterministic
    /// unit singular values `m_t + m_r - m`. `None` for the inner part means
    /// it has no random eigenvalues left (`m_t = m` or `m_r = m`).
    pub fn reflect(&self) -> Option<Reflection> {
        if !self.needs_reflection() {
            return None;
        }
        let fixed = self.m_t + self.m_r - self.m;
        let inner = ChannelConfig::new(self.m, self.m - self.m_r, self.m - self.m_t).ok();
        Some(Reflection { fixed, inner })
    }

    /// The same channel with transmit and receive sides swapped.
    pub fn transposed(&self) -> Self {
        Self {
            m: self.m,
            m_t: self.m_r,
            m_r: self.m_t,
        }
    }
}

impl fmt::Display for ChannelConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m={}, m_t={}, m_r={})", self.m, self.m_t, self.m_r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reflection {
    /// Singular values pinned at 1, each worth `log2(1 + rho)`.
    pub fixed: u32,
    pub inner: Option<ChannelConfig>,
}

/// Linear-scale SNR.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Snr(f64);

impl Snr {
    pub fn from_linear(rho: f64) -> Result<Self> {
        if rho.is_finite() && rho >= 0.0 {
            Ok(Self(rho))
        } else {
            Err(Error::InvalidSnr(rho))
        }
    }

    pub fn from_db(db: f64) -> Result<Self> {
        Self::from_linear(libm::pow(10.0, db / 10.0))
    }

    pub fn linear(&self) -> f64 {
        self.0
    }

    pub fn db(&self) -> f64 {
        10.0 * libm::log10(self.0)
    }

    /// `log2(1 + rho (1 - x) / 2)`, the integrand factor on the `x` domain.
    #[inline]
    pub fn log_term(&self, x: f64) -> f64 {
        libm::log1p(0.5 * self.0 * (1.0 - x)) / LN_2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CapacityMethod {
    SumForm,
    CdForm,
    LowerBound,
    LowSnr,
    MonteCarlo,
}

impl CapacityMethod {
    pub const ALL: [CapacityMethod; 5] = [
        CapacityMethod::SumForm,
        CapacityMethod::CdForm,
        CapacityMethod::LowerBound,
        CapacityMethod::LowSnr,
        CapacityMethod::MonteCarlo,
    ];

    /// Short name used in CSV headers and on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            CapacityMethod::SumForm => "sum",
            CapacityMethod::CdForm => "cd",
            CapacityMethod::LowerBound => "lb",
            CapacityMethod::LowSnr => "lowsnr",
            CapacityMethod::MonteCarlo => "mc",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == name)
    }
}

impl fmt::Display for CapacityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub snr_db: f64,
    pub capacity_bits: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityCurve {
    pub config: ChannelConfig,
    pub method: CapacityMethod,
    pub points: Vec<CurvePoint>,
}

fn direct_rule<R: RuleSource>(
    config: &ChannelConfig,
    rules: &R,
) -> Result<(JacobiParams, alloc::sync::Arc<QuadratureRule>)> {
    let params = config.jacobi_params()?;
    let rule = rules.rule(params.a, params.b)?;
    rule.check_weight(params.a, params.b)?;
    Ok((params, rule))
}

/// Capacity from the kernel summed degree by degree. Requires
/// `m_t + m_r <= m`.
pub fn capacity_sum_form<R: RuleSource>(
    config: &ChannelConfig,
    snr: Snr,
    rules: &R,
) -> Result<f64> {
    let (params, rule) = direct_rule(config, rules)?;
    let kernel = SumKernel::new(params);
    rule.integrate(|x| snr.log_term(x) * kernel.eval(x))
}

/// Capacity from the closed-form kernel. Requires `m_t + m_r <= m`.
pub fn capacity_cd_form<R: RuleSource>(config: &ChannelConfig, snr: Snr, rules: &R) -> Result<f64> {
    let (params, rule) = direct_rule(config, rules)?;
    let kernel = ClosedKernel::new(params)?;
    rule.integrate(|x| snr.log_term(x) * kernel.eval(x))
}

/// Applies `direct` on the direct branch, or adds the pinned
/// `(m_t + m_r - m) log2(1 + rho)` to `direct` on the reflected config.
fn with_reflection<F>(config: &ChannelConfig, snr: Snr, direct: F) -> Result<f64>
where
    F: Fn(&ChannelConfig) -> Result<f64>,
{
    match config.reflect() {
        None => direct(config),
        Some(Reflection { fixed, inner }) => {
            let pinned = f64::from(fixed) * libm::log1p(snr.linear()) / LN_2;
            let rest = match inner {
                Some(inner) => direct(&inner)?,
                None => 0.0,
            };
            Ok(pinned + rest)
        }
    }
}

/// Capacity of any valid configuration: the closed form directly, or the
/// reflection `(m_t + m_r - m) log2(1 + rho) + C(m - m_r, m - m_t)`.
pub fn capacity<R: RuleSource>(config: &ChannelConfig, snr: Snr, rules: &R) -> Result<f64> {
    with_reflection(config, snr, |c| capacity_cd_form(c, snr, rules))
}

/// Lower bound obtained by dropping the trailing bracket product. Requires
/// `m_t + m_r <= m`.
pub fn capacity_lower_bound<R: RuleSource>(
    config: &ChannelConfig,
    snr: Snr,
    rules: &R,
) -> Result<f64> {
    let (params, rule) = direct_rule(config, rules)?;
    let kernel = ClosedKernel::new(params)?;
    let m = kernel.constants().prefactor;
    rule.integrate(|x| snr.log_term(x) * m * kernel.terms(x).leading)
}

/// `rho m_t m_r / (m ln 2)`, the first-order capacity at small SNR. Holds on
/// both sides of the reflection.
pub fn capacity_low_snr(config: &ChannelConfig, snr: Snr) -> f64 {
    snr.linear() * f64::from(config.m_t) * f64::from(config.m_r) / (f64::from(config.m) * LN_2)
}

/// `Q = ∫ w(x) log2(1 + rho (1-x)/2) P_r^{(a,b)} P_{r-2}^{(a+1,b+1)} dx`.
/// Zero for `r = 1`. Satisfies `C = LB - M N Q`.
pub fn q_term<R: RuleSource>(config: &ChannelConfig, snr: Snr, rules: &R) -> Result<f64> {
    let (params, rule) = direct_rule(config, rules)?;
    if params.r < 2 {
        return Ok(0.0);
    }
    let kernel = ClosedKernel::new(params)?;
    rule.integrate(|x| snr.log_term(x) * kernel.terms(x).trailing)
}

/// Evaluates one of the analytic methods on the direct or reflected branch
/// as appropriate. On the reflected branch the lower bound bounds only the
/// inner term, the pinned term being exact. Monte Carlo is not analytic and
/// is rejected.
pub fn evaluate<R: RuleSource>(
    method: CapacityMethod,
    config: &ChannelConfig,
    snr: Snr,
    rules: &R,
) -> Result<f64> {
    match method {
        CapacityMethod::SumForm => {
            with_reflection(config, snr, |c| capacity_sum_form(c, snr, rules))
        }
        CapacityMethod::CdForm => capacity(config, snr, rules),
        CapacityMethod::LowerBound => {
            with_reflection(config, snr, |c| capacity_lower_bound(c, snr, rules))
        }
        CapacityMethod::LowSnr => Ok(capacity_low_snr(config, snr)),
        CapacityMethod::MonteCarlo => Err(Error::Domain("Monte Carlo is not an analytic method")),
    }
}

/// Analytic capacity curve over an SNR grid given in dB.
pub fn capacity_curve<R: RuleSource>(
    method: CapacityMethod,
    config: ChannelConfig,
    snr_db: &[f64],
    rules: &R,
) -> Result<CapacityCurve> {
    let points = snr_db
        .iter()
        .map(|&db| {
            let value = evaluate(method, &config, Snr::from_db(db)?, rules)?;
            Ok(CurvePoint {
                snr_db: db,
                capacity_bits: value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CapacityCurve {
        config,
        method,
        points,
    })
}
