//! Rayon versions of the Monte Carlo routines. Samples are drawn in parallel
//! but reduced in index order, so results are bit-identical to the
//! sequential ones in the core crate for any thread count.

use jacobi_mimo_core::haar::{
    density_check_from_eigenvalues, log_det_bits, sample_eigenvalues, DensityCheck,
};
use jacobi_mimo_core::{ChannelConfig, Corner, MonteCarloEstimate, Result, RuleSource, Snr};
use rayon::prelude::*;

/// Eigenvalues of `H^H H` for sample indices `0..n_samples`.
pub fn eigenvalue_samples(
    config: &ChannelConfig,
    corner: Corner,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    (0..n_samples as u64)
        .into_par_iter()
        .map(|index| sample_eigenvalues(config, corner, seed, index))
        .collect()
}

/// One estimate per SNR, all from the same draws.
pub fn mc_capacity_grid(
    config: &ChannelConfig,
    snrs: &[Snr],
    n_samples: usize,
    seed: u64,
    corner: Corner,
) -> Result<Vec<MonteCarloEstimate>> {
    let draws = eigenvalue_samples(config, corner, n_samples, seed)?;
    snrs.par_iter()
        .map(|&snr| {
            let values = draws
                .iter()
                .map(|eig| log_det_bits(eig, snr))
                .collect::<Result<Vec<_>>>()?;
            MonteCarloEstimate::from_samples(&values, seed)
        })
        .collect()
}

pub fn mc_capacity(
    config: &ChannelConfig,
    snr: Snr,
    n_samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    let mut est = mc_capacity_grid(config, &[snr], n_samples, seed, Corner::UpperLeft)?;
    Ok(est.remove(0))
}

pub fn eigenvalue_density_check<R: RuleSource>(
    config: &ChannelConfig,
    n_samples: usize,
    seed: u64,
    n_bins: usize,
    rules: &R,
) -> Result<DensityCheck> {
    config.jacobi_params()?;
    let pooled: Vec<f64> = eigenvalue_samples(config, Corner::UpperLeft, n_samples, seed)?
        .into_iter()
        .flatten()
        .collect();
    density_check_from_eigenvalues(config, &pooled, n_bins, rules)
}
