//! Simulator of capital dynamics driven by voting in a stochastic environment.
//!
//! A population of `n` agents starts with equal capital `K`. At every step the
//! environment proposes a vector of i.i.d. Gaussian capital increments, one per
//! agent, and the alive agents vote on it. Egoists vote for a proposal exactly
//! when their own increment is positive; altruists vote for it exactly when the
//! total increment of the `n0` currently poorest alive agents is positive.
//! Accepted proposals are applied, and agents whose capital turns negative are
//! ruined: they stop voting and stop receiving increments. The quantity of
//! interest is the fraction of the population still alive after `T` steps, and
//! how it depends on the altruist count and the support-screen size `n0`.
//!
//! # Reproducibility
//!
//! All randomness flows through [`rand_chacha::ChaCha8Rng`] seeded from a
//! 64-bit seed, with normal variates drawn via [`rand_distr::StandardNormal`]
//! (ziggurat method). Per-game seeds in a sweep are derived from the master
//! seed and the cell coordinates with [`experiment::derive_seed`], so cell
//! results do not depend on execution order or worker count. Identical seed
//! and configuration give bit-identical trajectories.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod ballots;
pub mod dynamics;
pub mod experiment;
pub mod model;

pub use ballots::{collect_ballots, decide, Decision, Tally, Vote};
pub use dynamics::{
    run_game, run_game_with_source, FixedSource, GaussianSource, GameResult, ProposalSource,
    RunOptions, StepRecord, StrategyCounts,
};
pub use experiment::{
    default_altruist_counts, default_support_sizes, derive_seed, find_optimum, grid_configs,
    run_replications, sweep, CellStats, Optimum, StrategyMeans, SweepError, SweepResult,
};
pub use model::{
    poorest_alive, sample_proposal, AgentId, AgentState, ConfigError, EnvironmentParams,
    GameConfig, Proposal, RngSeed, Strategy,
};
