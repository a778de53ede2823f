//! Monte Carlo oracle: Haar unitary sampling, corner-block eigenvalues and
//! capacity estimates.
//!
//! Every sample owns its own ChaCha stream, keyed by `(seed, sample index)`,
//! so an estimate does not depend on how samples are spread over workers.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, LN_2};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::capacity::{ChannelConfig, Snr};
use crate::error::{Error, Result};
use crate::jacobi::{JacobiParams, SumKernel};
use crate::linalg::{hermitian_eigenvalues, householder_qr, CMatrix};
use crate::quadrature::{QuadratureRule, RuleSource};

/// Default sample count for capacity estimates.
pub const DEFAULT_SAMPLES: usize = 100_000;

/// `|r_jj|` below this means the Gaussian draw was degenerate.
const DEGENERATE_PIVOT: f64 = 1e-300;

/// RNG for one sample.
pub fn sample_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// First `k` columns of an `m x m` Haar unitary.
///
/// Householder QR of an `m x k` complex Gaussian matrix, with `Q` multiplied
/// on the right by `diag(r_jj / |r_jj|)`. The columns of `Q` only depend on
/// the matching Gaussian columns, so this is the leading block of the full
/// sample drawn from the same stream.
pub fn sample_haar_columns<R: Rng + ?Sized>(m: usize, k: usize, rng: &mut R) -> CMatrix {
    assert!(m >= 1 && k >= 1 && k <= m, "need 1 <= k <= m");
    loop {
        let data = (0..m * k).map(|_| complex_gaussian(rng)).collect();
        let (mut q, r_diag) = householder_qr(CMatrix::from_column_major(m, k, data));
        if r_diag.iter().any(|r| r.norm() < DEGENERATE_PIVOT) {
            continue;
        }
        for (j, r) in r_diag.iter().enumerate() {
            let phase = r / r.norm();
            for i in 0..m {
                q[(i, j)] *= phase;
            }
        }
        return q;
    }
}

/// An `m x m` Haar-distributed unitary.
pub fn sample_haar_unitary<R: Rng + ?Sized>(m: usize, rng: &mut R) -> CMatrix {
    sample_haar_columns(m, m, rng)
}

/// Which `m_r x m_t` block of the unitary is used as the channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Corner {
    #[default]
    UpperLeft,
    LowerRight,
}

/// Channel matrix `H` for one draw.
pub fn sample_channel<R: Rng + ?Sized>(
    config: &ChannelConfig,
    corner: Corner,
    rng: &mut R,
) -> CMatrix {
    let (m, m_t, m_r) = (
        config.m() as usize,
        config.m_t() as usize,
        config.m_r() as usize,
    );
    match corner {
        Corner::UpperLeft => sample_haar_columns(m, m_t, rng).block(0, 0, m_r, m_t),
        Corner::LowerRight => sample_haar_unitary(m, rng).block(m - m_r, m - m_t, m_r, m_t),
    }
}

/// The `r = min(m_t, m_r)` eigenvalues of `H^H H` that can be nonzero,
/// ascending, taken from the smaller of the two Gram matrices.
pub fn channel_eigenvalues(h: &CMatrix) -> Result<Vec<f64>> {
    if h.cols() <= h.rows() {
        hermitian_eigenvalues(&h.gram())
    } else {
        hermitian_eigenvalues(&h.outer_gram())
    }
}

/// Eigenvalues for sample `index` of the stream `seed`.
pub fn sample_eigenvalues(
    config: &ChannelConfig,
    corner: Corner,
    seed: u64,
    index: u64,
) -> Result<Vec<f64>> {
    let mut rng = sample_stream(seed, index);
    channel_eigenvalues(&sample_channel(config, corner, &mut rng))
}

/// `log2 det(I + rho H^H H)` from the eigenvalues of `H^H H`.
pub fn log_det_bits(eigenvalues: &[f64], snr: Snr) -> Result<f64> {
    let rho = snr.linear();
    let mut acc = 0.0;
    for &lambda in eigenvalues {
        let t = rho * lambda;
        if t <= -1.0 {
            return Err(Error::Indefinite(lambda));
        }
        acc += libm::log1p(t);
    }
    Ok(acc / LN_2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl MonteCarloEstimate {
    /// Mean and standard error of `samples`, reduced in index order.
    pub fn from_samples(samples: &[f64], seed: u64) -> Result<Self> {
        let n = samples.len();
        if n < 2 {
            return Err(Error::Domain(
                "Monte Carlo estimate needs at least two samples",
            ));
        }
        let nf = n as f64;
        let mean = samples.iter().sum::<f64>() / nf;
        let ss: f64 = samples.iter().map(|v| (v - mean) * (v - mean)).sum();
        let sd = libm::sqrt(ss / (nf - 1.0));
        Ok(Self {
            mean,
            std_error: sd / libm::sqrt(nf),
            n_samples: n,
            seed,
        })
    }
}

/// Estimates for several SNRs from one set of draws, sequentially.
pub fn mc_capacity_grid(
    config: &ChannelConfig,
    snrs: &[Snr],
    n_samples: usize,
    seed: u64,
    corner: Corner,
) -> Result<Vec<MonteCarloEstimate>> {
    let mut per_snr = vec![Vec::with_capacity(n_samples); snrs.len()];
    for index in 0..n_samples as u64 {
        let eig = sample_eigenvalues(config, corner, seed, index)?;
        for (values, snr) in per_snr.iter_mut().zip(snrs) {
            values.push(log_det_bits(&eig, *snr)?);
        }
    }
    per_snr
        .iter()
        .map(|values| MonteCarloEstimate::from_samples(values, seed))
        .collect()
}

/// Estimate of `E log2 det(I + rho H^H H)` with `H` the upper-left corner.
pub fn mc_capacity(
    config: &ChannelConfig,
    snr: Snr,
    n_samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    let mut est = mc_capacity_grid(config, &[snr], n_samples, seed, Corner::UpperLeft)?;
    Ok(est.remove(0))
}

/// One-eigenvalue density of `H^H H` on `[0, 1]`.
///
/// `f(l) = l^a (1-l)^b sum_k [P_k(1-2l)]^2 / B_k / Z`, where `Z` is found by
/// integrating the unnormalized density (it comes out as `r`).
#[derive(Debug, Clone)]
pub struct EigenvalueDensity {
    params: JacobiParams,
    kernel: SumKernel,
    normalization: f64,
}

impl EigenvalueDensity {
    pub fn new<R: RuleSource>(config: &ChannelConfig, rules: &R) -> Result<Self> {
        let params = config.jacobi_params()?;
        let kernel = SumKernel::new(params);
        // with dl = dx/2 the unnormalized mass is ∫ w(x) K(x) dx
        let rule = rules.rule(params.a, params.b)?;
        rule.check_weight(params.a, params.b)?;
        let normalization = rule.integrate(|x| kernel.eval(x))?;
        Ok(Self {
            params,
            kernel,
            normalization,
        })
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Unnormalized density `l^a (1-l)^b sum_k [P_k(1-2l)]^2 / B_k`, which is
    /// `2 w(x) K(x)` at `x = 1 - 2l`.
    fn raw(&self, lambda: f64) -> f64 {
        let JacobiParams { a, b, .. } = self.params;
        let x = 1.0 - 2.0 * lambda;
        2.0 * libm::pow(1.0 - x, f64::from(a))
            * libm::pow(1.0 + x, f64::from(b))
            * self.kernel.eval(x)
    }

    pub fn pdf(&self, lambda: f64) -> f64 {
        self.raw(lambda) / self.normalization
    }

    /// Probability of `[lo, hi]`, exact up to rounding (the density is a
    /// polynomial).
    pub fn probability(&self, lo: f64, hi: f64) -> Result<f64> {
        let degree = (self.params.a + self.params.b + 2 * self.params.r) as usize;
        let rule = QuadratureRule::gauss_jacobi(0, 0, degree / 2 + 2)?;
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        Ok(half * rule.integrate(|t| self.pdf(mid + half * t))?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
    /// Empirical probability `count / total`.
    pub empirical: f64,
    /// Analytic probability of the bin.
    pub expected: f64,
    /// Multinomial standard deviation of `empirical`.
    pub sigma: f64,
}

impl DensityBin {
    pub fn z_score(&self) -> f64 {
        if self.sigma > 0.0 {
            (self.empirical - self.expected) / self.sigma
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityCheck {
    pub bins: Vec<DensityBin>,
    pub n_eigenvalues: usize,
    /// Normalizing constant found by integration (expected: `r`).
    pub normalization: f64,
    pub max_abs_deviation: f64,
    /// Largest `|z|` over bins with at least [`MIN_EXPECTED_COUNT`] expected
    /// hits.
    pub max_z: f64,
    /// Bins whose expected count is too small for the normal approximation.
    pub sparse_bins: Vec<usize>,
}

pub const MIN_EXPECTED_COUNT: f64 = 5.0;

/// Histograms pooled eigenvalues on `n_bins` equal bins of `[0, 1]` and
/// compares them with the analytic density.
pub fn density_check_from_eigenvalues<R: RuleSource>(
    config: &ChannelConfig,
    eigenvalues: &[f64],
    n_bins: usize,
    rules: &R,
) -> Result<DensityCheck> {
    if n_bins == 0 {
        return Err(Error::Domain("density check needs at least one bin"));
    }
    if eigenvalues.is_empty() {
        return Err(Error::Domain("density check needs eigenvalues"));
    }
    let density = EigenvalueDensity::new(config, rules)?;
    let mut counts = vec![0u64; n_bins];
    for &l in eigenvalues {
        let idx = libm::floor(l * n_bins as f64);
        let idx = if idx < 0.0 {
            0
        } else {
            (idx as usize).min(n_bins - 1)
        };
        counts[idx] += 1;
    }
    let total = eigenvalues.len() as f64;
    let width = 1.0 / n_bins as f64;
    let mut bins = Vec::with_capacity(n_bins);
    let mut sparse_bins = Vec::new();
    let (mut max_abs_deviation, mut max_z) = (0.0f64, 0.0f64);
    for (j, &count) in counts.iter().enumerate() {
        let lo = j as f64 * width;
        let hi = if j + 1 == n_bins {
            1.0
        } else {
            (j + 1) as f64 * width
        };
        let expected = density.probability(lo, hi)?;
        let empirical = count as f64 / total;
        let sigma = libm::sqrt((expected * (1.0 - expected)).max(0.0) / total);
        let bin = DensityBin {
            lo,
            hi,
            count,
            empirical,
            expected,
            sigma,
        };
        max_abs_deviation = max_abs_deviation.max((empirical - expected).abs());
        if expected * total < MIN_EXPECTED_COUNT {
            sparse_bins.push(j);
        } else {
            max_z = max_z.max(bin.z_score().abs());
        }
        bins.push(bin);
    }
    Ok(DensityCheck {
        bins,
        n_eigenvalues: eigenvalues.len(),
        normalization: density.normalization(),
        max_abs_deviation,
        max_z,
        sparse_bins,
    })
}

/// Sequential density check over `n_samples` upper-left draws.
pub fn eigenvalue_density_check<R: RuleSource>(
    config: &ChannelConfig,
    n_samples: usize,
    seed: u64,
    n_bins: usize,
    rules: &R,
) -> Result<DensityCheck> {
    config.jacobi_params()?;
    let mut pooled = Vec::with_capacity(n_samples * config.r() as usize);
    for index in 0..n_samples as u64 {
        pooled.extend(sample_eigenvalues(config, Corner::UpperLeft, seed, index)?);
    }
    density_check_from_eigenvalues(config, &pooled, n_bins, rules)
}
