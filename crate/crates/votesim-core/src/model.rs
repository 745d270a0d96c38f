//! Domain types, the stochastic proposal source, and capital-ranking helpers.

use alloc::vec::Vec;
use core::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

/// Stable index of an agent in `[0, n)`. Never reused or reassigned, even
/// after the agent is ruined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(pub u32);

impl AgentId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Voting strategy, fixed at game start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Egoist,
    Altruist,
}

/// One agent: identity, strategy, current capital, and whether it is still in
/// the game. Once `alive` turns false the capital is frozen and the agent
/// neither votes nor receives increments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentState {
    pub id: AgentId,
    pub strategy: Strategy,
    pub capital: f64,
    pub alive: bool,
}

/// Mean and standard deviation of the i.i.d. Gaussian capital increments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvironmentParams {
    pub mu: f64,
    pub sigma: f64,
}

/// A proposal of the environment: one capital increment per original agent
/// slot. Entries for ruined agents are drawn but never applied, so the RNG
/// stream depends only on the number of steps, not on the ruin history.
#[derive(Debug, Clone, PartialEq)]
pub struct Proposal {
    pub increments: Vec<f64>,
}

impl Proposal {
    pub fn new(increments: Vec<f64>) -> Self {
        Self { increments }
    }

    #[inline]
    pub fn increment_for(&self, id: AgentId) -> f64 {
        self.increments[id.index()]
    }

    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }
}

/// All model parameters of a single game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameConfig {
    /// Population size `n`.
    pub n: u32,
    /// Initial capital `K`, identical for every agent.
    pub initial_capital: f64,
    pub env: EnvironmentParams,
    /// Number of voting steps `T`.
    pub steps: u32,
    /// Number of altruists; they occupy ids `0..altruist_count`.
    pub altruist_count: u32,
    /// Support-screen size `n0`: how many of the poorest alive agents an
    /// altruist sums over.
    pub support_size: u32,
    /// A proposal is accepted iff yes-votes strictly exceed this fraction of
    /// the alive voters. 0.5 is simple majority.
    pub accept_threshold: f64,
}

impl GameConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n == 0 {
            return Err(ConfigError::EmptyPopulation);
        }
        if !self.initial_capital.is_finite() || self.initial_capital < 0.0 {
            return Err(ConfigError::InvalidInitialCapital(self.initial_capital));
        }
        if !self.env.mu.is_finite() {
            return Err(ConfigError::InvalidMu(self.env.mu));
        }
        if !(self.env.sigma.is_finite() && self.env.sigma > 0.0) {
            return Err(ConfigError::InvalidSigma(self.env.sigma));
        }
        if self.steps == 0 {
            return Err(ConfigError::ZeroSteps);
        }
        if self.altruist_count > self.n {
            return Err(ConfigError::AltruistCountOutOfRange {
                altruist_count: self.altruist_count,
                n: self.n,
            });
        }
        if self.support_size == 0 || self.support_size > self.n {
            return Err(ConfigError::SupportSizeOutOfRange {
                support_size: self.support_size,
                n: self.n,
            });
        }
        if !(self.accept_threshold.is_finite()
            && (0.0..1.0).contains(&self.accept_threshold))
        {
            return Err(ConfigError::InvalidAcceptThreshold(self.accept_threshold));
        }
        Ok(())
    }

    /// Fresh population: everyone alive at capital `K`, altruists first.
    pub fn initial_population(&self) -> Vec<AgentState> {
        (0..self.n)
            .map(|i| AgentState {
                id: AgentId(i),
                strategy: if i < self.altruist_count {
                    Strategy::Altruist
                } else {
                    Strategy::Egoist
                },
                capital: self.initial_capital,
                alive: true,
            })
            .collect()
    }
}

/// 64-bit seed; same seed plus same config means a bit-identical trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    EmptyPopulation,
    InvalidInitialCapital(f64),
    InvalidMu(f64),
    InvalidSigma(f64),
    ZeroSteps,
    AltruistCountOutOfRange { altruist_count: u32, n: u32 },
    SupportSizeOutOfRange { support_size: u32, n: u32 },
    InvalidAcceptThreshold(f64),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::EmptyPopulation => write!(f, "n must be at least 1"),
            ConfigError::InvalidInitialCapital(k) => {
                write!(f, "initial_capital must be finite and >= 0, got {k}")
            }
            ConfigError::InvalidMu(mu) => write!(f, "mu must be finite, got {mu}"),
            ConfigError::InvalidSigma(s) => {
                write!(f, "sigma must be finite and > 0, got {s}")
            }
            ConfigError::ZeroSteps => write!(f, "steps must be at least 1"),
            ConfigError::AltruistCountOutOfRange { altruist_count, n } => write!(
                f,
                "altruist_count must be in [0, n]: got {altruist_count} with n = {n}"
            ),
            ConfigError::SupportSizeOutOfRange { support_size, n } => write!(
                f,
                "support_size must be in [1, n]: got {support_size} with n = {n}"
            ),
            ConfigError::InvalidAcceptThreshold(a) => {
                write!(f, "accept_threshold must be in [0, 1), got {a}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ConfigError {}

/// Draws one proposal: `n` independent `N(mu, sigma)` increments.
pub fn sample_proposal<R: rand_core::RngCore>(
    env: EnvironmentParams,
    n: u32,
    rng: &mut R,
) -> Proposal {
    let increments = (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            env.mu + env.sigma * z
        })
        .collect();
    Proposal { increments }
}

/// The `min(k, alive count)` alive agents with smallest capital, ascending by
/// capital and then by id. Ruined agents never appear.
pub fn poorest_alive(population: &[AgentState], k: usize) -> Vec<AgentId> {
    let mut alive: Vec<&AgentState> = population.iter().filter(|a| a.alive).collect();
    alive.sort_unstable_by(|a, b| {
        a.capital
            .total_cmp(&b.capital)
            .then_with(|| a.id.cmp(&b.id))
    });
    alive.truncate(k);
    alive.into_iter().map(|a| a.id).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn agents(capitals: &[f64]) -> Vec<AgentState> {
        capitals
            .iter()
            .enumerate()
            .map(|(i, &c)| AgentState {
                id: AgentId(i as u32),
                strategy: Strategy::Egoist,
                capital: c,
                alive: true,
            })
            .collect()
    }

    #[test]
    fn poorest_orders_by_capital() {
        let pop = agents(&[5.0, 1.0, 3.0]);
        assert_eq!(poorest_alive(&pop, 2), vec![AgentId(1), AgentId(2)]);
    }

    #[test]
    fn poorest_breaks_ties_by_id() {
        let pop = agents(&[40.0, 40.0, 40.0]);
        assert_eq!(poorest_alive(&pop, 2), vec![AgentId(0), AgentId(1)]);
    }

    #[test]
    fn poorest_clamps_to_alive_count() {
        let mut pop = agents(&[1.0, 2.0, 3.0]);
        pop[0].alive = false;
        pop[1].alive = false;
        assert_eq!(poorest_alive(&pop, 5), vec![AgentId(2)]);
    }

    #[test]
    fn poorest_of_dead_population_is_empty() {
        let mut pop = agents(&[1.0]);
        pop[0].alive = false;
        assert!(poorest_alive(&pop, 3).is_empty());
    }

    #[test]
    fn sample_proposal_shape_and_determinism() {
        let env = EnvironmentParams { mu: 0.0, sigma: 12.0 };
        let a = sample_proposal(env, 100, &mut RngSeed(7).rng());
        let b = sample_proposal(env, 100, &mut RngSeed(7).rng());
        assert_eq!(a.len(), 100);
        assert!(a.increments.iter().all(|x| x.is_finite()));
        assert_eq!(a, b);
    }

    #[test]
    fn sample_mean_matches_mu_within_clt_bound() {
        // 3 sigma / sqrt(1e6) = 0.036 for sigma = 12.
        let env = EnvironmentParams { mu: 0.5, sigma: 12.0 };
        let mut rng = RngSeed(11).rng();
        let total: f64 = (0..1_000)
            .map(|_| sample_proposal(env, 1_000, &mut rng).increments.iter().sum::<f64>())
            .sum();
        let mean = total / 1.0e6;
        assert!((mean - 0.5).abs() < 0.036, "mean = {mean}");
    }

    #[test]
    fn validate_rejects_degenerate_configs() {
        let good = GameConfig {
            n: 100,
            initial_capital: 40.0,
            env: EnvironmentParams { mu: 0.0, sigma: 12.0 },
            steps: 500,
            altruist_count: 50,
            support_size: 50,
            accept_threshold: 0.5,
        };
        assert!(good.validate().is_ok());

        let mut c = good;
        c.env.sigma = 0.0;
        assert_eq!(c.validate(), Err(ConfigError::InvalidSigma(0.0)));
        let mut c = good;
        c.n = 0;
        assert_eq!(c.validate(), Err(ConfigError::EmptyPopulation));
        let mut c = good;
        c.support_size = 0;
        assert!(matches!(
            c.validate(),
            Err(ConfigError::SupportSizeOutOfRange { .. })
        ));
        let mut c = good;
        c.altruist_count = 101;
        assert!(matches!(
            c.validate(),
            Err(ConfigError::AltruistCountOutOfRange { .. })
        ));
        let mut c = good;
        c.accept_threshold = 1.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn initial_population_places_altruists_first() {
        let cfg = GameConfig {
            n: 4,
            initial_capital: 10.0,
            env: EnvironmentParams { mu: 0.0, sigma: 1.0 },
            steps: 1,
            altruist_count: 2,
            support_size: 1,
            accept_threshold: 0.5,
        };
        let pop = cfg.initial_population();
        assert_eq!(pop.len(), 4);
        assert_eq!(pop[0].strategy, Strategy::Altruist);
        assert_eq!(pop[1].strategy, Strategy::Altruist);
        assert_eq!(pop[2].strategy, Strategy::Egoist);
        assert!(pop.iter().all(|a| a.alive && a.capital == 10.0));
    }
}
