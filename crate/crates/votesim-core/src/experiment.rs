//! Monte Carlo replication of games and the (altruist count, n0) sweep.

use alloc::vec::Vec;
use core::fmt;

use crate::dynamics::run_game;
use crate::model::{ConfigError, GameConfig, RngSeed, Strategy};

/// Replication-averaged survivor counts per strategy.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StrategyMeans {
    pub egoist: f64,
    pub altruist: f64,
}

impl StrategyMeans {
    pub fn get(self, strategy: Strategy) -> f64 {
        match strategy {
            Strategy::Egoist => self.egoist,
            Strategy::Altruist => self.altruist,
        }
    }
}

/// Replication-averaged survival statistics of one grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellStats {
    pub altruist_count: u32,
    pub support_size: u32,
    pub replications: u32,
    pub mean_survival: f64,
    /// Sample standard deviation over replications divided by sqrt(replications);
    /// 0 for a single replication or when all replications agree.
    pub stderr_survival: f64,
    pub mean_survivors_by_strategy: StrategyMeans,
}

/// Full cross-product sweep over (altruist_count, support_size).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub base_config: GameConfig,
    pub grid: Vec<CellStats>,
    pub master_seed: RngSeed,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepError {
    AltruistCountsOutOfRange { offending: Vec<u32>, n: u32 },
    SupportSizesOutOfRange { offending: Vec<u32>, n: u32 },
    Config(ConfigError),
}

impl fmt::Display for SweepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepError::AltruistCountsOutOfRange { offending, n } => write!(
                f,
                "altruist_counts entries out of [0, {n}]: {offending:?}"
            ),
            SweepError::SupportSizesOutOfRange { offending, n } => write!(
                f,
                "support_sizes entries out of [1, {n}]: {offending:?}"
            ),
            SweepError::Config(e) => write!(f, "invalid config: {e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SweepError {}

impl From<ConfigError> for SweepError {
    fn from(e: ConfigError) -> Self {
        SweepError::Config(e)
    }
}

/// splitmix64 finalizer.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Derives a per-game seed from the master seed and a coordinate word list
/// (splitmix64 folded over the words). Depends only on the coordinates, never
/// on execution order, so sweeps are order- and worker-count-independent and
/// adding grid cells never perturbs existing ones.
pub fn derive_seed(master: u64, words: &[u64]) -> u64 {
    let mut state = splitmix64(master);
    for &w in words {
        state = splitmix64(state ^ w.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    }
    state
}

/// How per-game seeds are derived from cell coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeedMode {
    /// mix(master, altruist_count, support_size, replication).
    #[default]
    PerCell,
    /// Test hook: for altruist_count = 0 rows, omit support_size from the mix
    /// so all n0 cells of the degenerate row run bit-identical games.
    CollapseZeroAltruists,
}

fn game_seed(mode: SeedMode, master: RngSeed, config: &GameConfig, replication: u32) -> RngSeed {
    let a = u64::from(config.altruist_count);
    let n0 = u64::from(config.support_size);
    let rep = u64::from(replication);
    let seed = match mode {
        SeedMode::CollapseZeroAltruists if config.altruist_count == 0 => {
            derive_seed(master.0, &[a, rep])
        }
        _ => derive_seed(master.0, &[a, n0, rep]),
    };
    RngSeed(seed)
}

/// Runs `replications` independent games of `config` and aggregates survival.
pub fn run_replications(
    config: &GameConfig,
    replications: u32,
    master_seed: RngSeed,
) -> Result<CellStats, ConfigError> {
    run_replications_with_mode(config, replications, master_seed, SeedMode::PerCell)
}

#[doc(hidden)]
pub fn run_replications_with_mode(
    config: &GameConfig,
    replications: u32,
    master_seed: RngSeed,
    mode: SeedMode,
) -> Result<CellStats, ConfigError> {
    config.validate()?;
    assert!(replications >= 1, "replications must be at least 1");

    let mut fractions = Vec::with_capacity(replications as usize);
    let mut survivors = StrategyMeans::default();
    for rep in 0..replications {
        let seed = game_seed(mode, master_seed, config, rep);
        let result = run_game(config, seed, false)?;
        fractions.push(result.survival_fraction);
        survivors.egoist += f64::from(result.survivors_by_strategy.egoist);
        survivors.altruist += f64::from(result.survivors_by_strategy.altruist);
    }

    let reps = f64::from(replications);
    let mean = fractions.iter().sum::<f64>() / reps;
    let stderr = if replications > 1 {
        let var = fractions.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (reps - 1.0);
        libm::sqrt(var / reps)
    } else {
        0.0
    };

    Ok(CellStats {
        altruist_count: config.altruist_count,
        support_size: config.support_size,
        replications,
        mean_survival: mean,
        stderr_survival: stderr,
        mean_survivors_by_strategy: StrategyMeans {
            egoist: survivors.egoist / reps,
            altruist: survivors.altruist / reps,
        },
    })
}

/// Builds the per-cell configs of the cross product, in axes order.
pub fn grid_configs(
    base_config: &GameConfig,
    altruist_counts: &[u32],
    support_sizes: &[u32],
) -> Result<Vec<GameConfig>, SweepError> {
    let n = base_config.n;
    let bad_a: Vec<u32> = altruist_counts.iter().copied().filter(|&a| a > n).collect();
    if !bad_a.is_empty() {
        return Err(SweepError::AltruistCountsOutOfRange { offending: bad_a, n });
    }
    let bad_n0: Vec<u32> = support_sizes
        .iter()
        .copied()
        .filter(|&s| s == 0 || s > n)
        .collect();
    if !bad_n0.is_empty() {
        return Err(SweepError::SupportSizesOutOfRange { offending: bad_n0, n });
    }

    let mut configs = Vec::with_capacity(altruist_counts.len() * support_sizes.len());
    for &a in altruist_counts {
        for &n0 in support_sizes {
            let mut config = *base_config;
            config.altruist_count = a;
            config.support_size = n0;
            config.validate()?;
            configs.push(config);
        }
    }
    Ok(configs)
}

/// Full serial sweep: one [`CellStats`] per (altruist_count, support_size)
/// pair. Cell results depend only on (master_seed, coordinates), so this is
/// bit-identical to any parallel execution of the same grid.
pub fn sweep(
    base_config: &GameConfig,
    altruist_counts: &[u32],
    support_sizes: &[u32],
    replications: u32,
    master_seed: RngSeed,
) -> Result<SweepResult, SweepError> {
    sweep_with_mode(
        base_config,
        altruist_counts,
        support_sizes,
        replications,
        master_seed,
        SeedMode::PerCell,
    )
}

#[doc(hidden)]
pub fn sweep_with_mode(
    base_config: &GameConfig,
    altruist_counts: &[u32],
    support_sizes: &[u32],
    replications: u32,
    master_seed: RngSeed,
    mode: SeedMode,
) -> Result<SweepResult, SweepError> {
    let configs = grid_configs(base_config, altruist_counts, support_sizes)?;
    let grid = configs
        .iter()
        .map(|config| run_replications_with_mode(config, replications, master_seed, mode))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepResult {
        base_config: *base_config,
        grid,
        master_seed,
    })
}

/// Argmax cell plus the plateau of statistically indistinguishable cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub best: CellStats,
    /// Cells whose mean survival is within one combined standard error
    /// (sqrt of summed squared stderrs) of the best cell's mean. Always
    /// contains the best cell.
    pub plateau: Vec<CellStats>,
}

/// Finds the argmax cell by mean survival, ties broken by smaller altruist
/// count and then smaller support size, together with its plateau set.
pub fn find_optimum(sweep: &SweepResult) -> Optimum {
    assert!(!sweep.grid.is_empty(), "sweep grid must be nonempty");
    let best = *sweep
        .grid
        .iter()
        .max_by(|a, b| {
            a.mean_survival
                .total_cmp(&b.mean_survival)
                .then_with(|| b.altruist_count.cmp(&a.altruist_count))
                .then_with(|| b.support_size.cmp(&a.support_size))
        })
        .expect("nonempty grid");
    let plateau = sweep
        .grid
        .iter()
        .filter(|cell| {
            let combined = libm::sqrt(
                best.stderr_survival * best.stderr_survival
                    + cell.stderr_survival * cell.stderr_survival,
            );
            cell.mean_survival >= best.mean_survival - combined
        })
        .copied()
        .collect();
    Optimum { best, plateau }
}

/// Grid axes used by the headline experiments: altruist counts 10..=90 and
/// support sizes 10..=100, both in steps of 10.
pub fn default_altruist_counts() -> Vec<u32> {
    (1..=9).map(|i| i * 10).collect()
}

pub fn default_support_sizes() -> Vec<u32> {
    (1..=10).map(|i| i * 10).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EnvironmentParams;
    use alloc::vec;

    fn config(n: u32, altruist_count: u32, support_size: u32) -> GameConfig {
        GameConfig {
            n,
            initial_capital: 40.0,
            env: EnvironmentParams { mu: 0.0, sigma: 12.0 },
            steps: 50,
            altruist_count,
            support_size,
            accept_threshold: 0.5,
        }
    }

    #[test]
    fn lone_egoist_cell_is_certain() {
        let cfg = config(1, 0, 1);
        let stats = run_replications(&cfg, 20, RngSeed(1)).unwrap();
        assert_eq!(stats.mean_survival, 1.0);
        assert_eq!(stats.stderr_survival, 0.0);
        assert_eq!(stats.mean_survivors_by_strategy.egoist, 1.0);
    }

    #[test]
    fn single_replication_has_zero_stderr() {
        let cfg = config(10, 5, 5);
        let stats = run_replications(&cfg, 1, RngSeed(2)).unwrap();
        let game = run_game(
            &cfg,
            game_seed(SeedMode::PerCell, RngSeed(2), &cfg, 0),
            false,
        )
        .unwrap();
        assert_eq!(stats.mean_survival, game.survival_fraction);
        assert_eq!(stats.stderr_survival, 0.0);
    }

    #[test]
    fn replications_are_deterministic() {
        let cfg = config(10, 5, 5);
        let a = run_replications(&cfg, 10, RngSeed(3)).unwrap();
        let b = run_replications(&cfg, 10, RngSeed(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_covers_the_grid() {
        let result = sweep(&config(100, 0, 1), &[0, 50], &[50], 2, RngSeed(4)).unwrap();
        assert_eq!(result.grid.len(), 2);
        assert_eq!(result.grid[0].altruist_count, 0);
        assert_eq!(result.grid[1].altruist_count, 50);
    }

    #[test]
    fn zero_altruist_row_collapses_under_test_hook() {
        let base = config(20, 0, 1);
        let result = sweep_with_mode(
            &base,
            &[0],
            &[5, 10, 20],
            3,
            RngSeed(5),
            SeedMode::CollapseZeroAltruists,
        )
        .unwrap();
        assert_eq!(result.grid[0].mean_survival, result.grid[1].mean_survival);
        assert_eq!(result.grid[1].mean_survival, result.grid[2].mean_survival);
        assert_eq!(result.grid[0].stderr_survival, result.grid[2].stderr_survival);
    }

    #[test]
    fn sweep_rejects_out_of_range_axes() {
        let base = config(20, 0, 1);
        match sweep(&base, &[0, 25, 99], &[5], 1, RngSeed(0)) {
            Err(SweepError::AltruistCountsOutOfRange { offending, n }) => {
                assert_eq!(offending, vec![25, 99]);
                assert_eq!(n, 20);
            }
            other => panic!("expected altruist range error, got {other:?}"),
        }
        match sweep(&base, &[0], &[0, 21], 1, RngSeed(0)) {
            Err(SweepError::SupportSizesOutOfRange { offending, .. }) => {
                assert_eq!(offending, vec![0, 21]);
            }
            other => panic!("expected support range error, got {other:?}"),
        }
    }

    #[test]
    fn adding_cells_does_not_perturb_existing_ones() {
        let base = config(20, 0, 1);
        let small = sweep(&base, &[0, 10], &[5], 3, RngSeed(6)).unwrap();
        let large = sweep(&base, &[0, 10, 20], &[5, 10], 3, RngSeed(6)).unwrap();
        let find = |r: &SweepResult, a: u32, n0: u32| {
            r.grid
                .iter()
                .find(|c| c.altruist_count == a && c.support_size == n0)
                .copied()
                .unwrap()
        };
        assert_eq!(find(&small, 0, 5), find(&large, 0, 5));
        assert_eq!(find(&small, 10, 5), find(&large, 10, 5));
    }

    #[test]
    fn find_optimum_breaks_total_tie_by_coordinates() {
        let cell = |a: u32, n0: u32| CellStats {
            altruist_count: a,
            support_size: n0,
            replications: 1,
            mean_survival: 0.5,
            stderr_survival: 0.0,
            mean_survivors_by_strategy: StrategyMeans::default(),
        };
        let result = SweepResult {
            base_config: config(10, 0, 1),
            grid: vec![cell(20, 30), cell(10, 30), cell(10, 20)],
            master_seed: RngSeed(0),
        };
        let optimum = find_optimum(&result);
        assert_eq!((optimum.best.altruist_count, optimum.best.support_size), (10, 20));
        assert_eq!(optimum.plateau.len(), 3);
    }

    #[test]
    fn find_optimum_unique_max() {
        let mut cells = Vec::new();
        for (i, mean) in [0.2, 0.9, 0.4].iter().enumerate() {
            cells.push(CellStats {
                altruist_count: i as u32,
                support_size: 1,
                replications: 1,
                mean_survival: *mean,
                stderr_survival: 0.01,
                mean_survivors_by_strategy: StrategyMeans::default(),
            });
        }
        let result = SweepResult {
            base_config: config(10, 0, 1),
            grid: cells,
            master_seed: RngSeed(0),
        };
        let optimum = find_optimum(&result);
        assert_eq!(optimum.best.altruist_count, 1);
        assert_eq!(optimum.plateau.len(), 1);
    }

    #[test]
    fn derive_seed_separates_coordinates() {
        let s1 = derive_seed(1, &[0, 10, 0]);
        let s2 = derive_seed(1, &[0, 10, 1]);
        let s3 = derive_seed(1, &[10, 0, 0]);
        let s4 = derive_seed(2, &[0, 10, 0]);
        assert_ne!(s1, s2);
        assert_ne!(s1, s3);
        assert_ne!(s1, s4);
    }
}
