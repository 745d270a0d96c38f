//! Parallel execution of sweeps over a bounded worker pool.
//!
//! Per-game seeds depend only on (master seed, cell coordinates, replication
//! index), and cells are collected back in grid order, so the result is
//! bit-identical for every worker count.

use rayon::prelude::*;
use votesim_core::{
    grid_configs, run_replications, GameConfig, RngSeed, SweepError, SweepResult,
};

/// Runs the full cross-product sweep on `workers` threads. Equivalent to
/// [`votesim_core::sweep`] cell for cell.
pub fn sweep_parallel(
    base_config: &GameConfig,
    altruist_counts: &[u32],
    support_sizes: &[u32],
    replications: u32,
    master_seed: RngSeed,
    workers: usize,
) -> Result<SweepResult, SweepError> {
    let configs = grid_configs(base_config, altruist_counts, support_sizes)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("failed to build worker pool");
    let grid = pool.install(|| {
        configs
            .par_iter()
            .map(|config| run_replications(config, replications, master_seed))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(SweepResult {
        base_config: *base_config,
        grid,
        master_seed,
    })
}
