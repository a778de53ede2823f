use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid channel configuration m={m}, m_t={m_t}, m_r={m_r}: {reason}")]
    InvalidConfig {
        m: u32,
        m_t: u32,
        m_r: u32,
        reason: &'static str,
    },
    #[error("configuration m={m}, m_t={m_t}, m_r={m_r} needs m_t + m_r <= m for this form")]
    NeedsReflection { m: u32, m_t: u32, m_r: u32 },
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("snr must be finite and non-negative, got {0}")]
    InvalidSnr(f64),
    #[error("integrand is not finite at node {index} (x = {x})")]
    NonFiniteIntegrand { index: usize, x: f64 },
    #[error(
        "tridiagonal eigensolver did not converge for eigenvalue {index} after {iterations} sweeps"
    )]
    NoConvergence { index: usize, iterations: usize },
    #[error("quadrature rule for (a={rule_a}, b={rule_b}) cannot integrate weight (a={a}, b={b})")]
    RuleMismatch {
        rule_a: u32,
        rule_b: u32,
        a: u32,
        b: u32,
    },
    #[error("log-det of I + rho H^H H failed: eigenvalue {0} below zero")]
    Indefinite(f64),
}

pub type Result<T> = core::result::Result<T, Error>;
