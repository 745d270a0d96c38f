//! Per-step state transition (vote, apply, ruin) and the full game loop.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;

use crate::ballots::{collect_ballots, decide, Decision};
use crate::model::{
    sample_proposal, AgentId, AgentState, ConfigError, EnvironmentParams, GameConfig, Proposal,
    RngSeed, Strategy,
};

/// Outcome of one voting step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub step_index: u32,
    pub decision: Decision,
    pub yes_count: u32,
    pub voters: u32,
    pub newly_ruined: Vec<AgentId>,
    pub alive_after: u32,
}

/// Survivor counts split by strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StrategyCounts {
    pub egoist: u32,
    pub altruist: u32,
}

impl StrategyCounts {
    pub fn get(self, strategy: Strategy) -> u32 {
        match strategy {
            Strategy::Egoist => self.egoist,
            Strategy::Altruist => self.altruist,
        }
    }

    pub fn total(self) -> u32 {
        self.egoist + self.altruist
    }
}

/// Terminal statistics of one game, with an optional per-step trace.
#[derive(Debug, Clone, PartialEq)]
pub struct GameResult {
    /// Survivors divided by the original population size.
    pub survival_fraction: f64,
    pub survivors_total: u32,
    pub survivors_by_strategy: StrategyCounts,
    pub final_capitals: Vec<f64>,
    pub accepted_count: u32,
    pub trace: Option<Vec<StepRecord>>,
}

/// Source of proposals for the game loop. Tests inject fixed sequences; the
/// default draws Gaussian increments from the game RNG.
pub trait ProposalSource {
    fn next_proposal(&mut self, n: u32) -> Proposal;
}

/// The default source: i.i.d. `N(mu, sigma)` increments from a seeded
/// ChaCha8 stream.
pub struct GaussianSource {
    env: EnvironmentParams,
    rng: ChaCha8Rng,
}

impl GaussianSource {
    pub fn new(env: EnvironmentParams, seed: RngSeed) -> Self {
        Self { env, rng: seed.rng() }
    }
}

impl ProposalSource for GaussianSource {
    fn next_proposal(&mut self, n: u32) -> Proposal {
        sample_proposal(self.env, n, &mut self.rng)
    }
}

/// A fixed sequence of proposals, cycled through in order. Panics if the game
/// asks for more proposals than provided.
pub struct FixedSource {
    proposals: Vec<Proposal>,
    next: usize,
}

impl FixedSource {
    pub fn new(proposals: Vec<Proposal>) -> Self {
        Self { proposals, next: 0 }
    }
}

impl ProposalSource for FixedSource {
    fn next_proposal(&mut self, _n: u32) -> Proposal {
        let p = self.proposals[self.next].clone();
        self.next += 1;
        p
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub record_trace: bool,
    /// Skip remaining steps once everyone is ruined. Off by default so RNG
    /// consumption is fixed by the config; changes no reported statistic.
    pub stop_when_extinct: bool,
}

/// Adds each alive agent's increment to its capital. Ruined agents are
/// untouched.
pub fn apply_proposal(population: &mut [AgentState], proposal: &Proposal) {
    for agent in population.iter_mut() {
        if agent.alive {
            agent.capital += proposal.increment_for(agent.id);
        }
    }
}

/// Marks every alive agent with strictly negative capital as ruined, freezing
/// its capital. Returns the newly ruined ids in ascending order.
pub fn ruin_sweep(population: &mut [AgentState]) -> Vec<AgentId> {
    let mut newly_ruined = Vec::new();
    for agent in population.iter_mut() {
        if agent.alive && agent.capital < 0.0 {
            agent.alive = false;
            newly_ruined.push(agent.id);
        }
    }
    newly_ruined
}

/// One voting step: collect ballots, decide, and on acceptance apply the
/// proposal and ruin-sweep.
pub fn step(
    population: &mut [AgentState],
    proposal: &Proposal,
    config: &GameConfig,
    step_index: u32,
) -> StepRecord {
    let tally = collect_ballots(population, proposal, config);
    let decision = decide(tally, config.accept_threshold);
    let newly_ruined = match decision {
        Decision::Accepted => {
            apply_proposal(population, proposal);
            ruin_sweep(population)
        }
        Decision::Rejected => Vec::new(),
    };
    let alive_after = population.iter().filter(|a| a.alive).count() as u32;
    StepRecord {
        step_index,
        decision,
        yes_count: tally.yes_count,
        voters: tally.voters,
        newly_ruined,
        alive_after,
    }
}

/// Runs a full game with proposals from the default Gaussian source.
pub fn run_game(config: &GameConfig, seed: RngSeed, record_trace: bool) -> Result<GameResult, ConfigError> {
    let mut source = GaussianSource::new(config.env, seed);
    run_game_with_source(
        config,
        &mut source,
        RunOptions { record_trace, stop_when_extinct: false },
    )
}

/// Runs a full game drawing every proposal from `source`. The game always
/// spans exactly `config.steps` steps (unless `stop_when_extinct` is set);
/// steps with no alive voters are Rejected no-ops.
pub fn run_game_with_source(
    config: &GameConfig,
    source: &mut dyn ProposalSource,
    options: RunOptions,
) -> Result<GameResult, ConfigError> {
    config.validate()?;
    let mut population = config.initial_population();
    let mut trace = options.record_trace.then(Vec::new);
    let mut accepted_count = 0;

    for step_index in 0..config.steps {
        if options.stop_when_extinct && population.iter().all(|a| !a.alive) {
            break;
        }
        let proposal = source.next_proposal(config.n);
        let record = step(&mut population, &proposal, config, step_index);
        if record.decision == Decision::Accepted {
            accepted_count += 1;
        }
        if let Some(trace) = trace.as_mut() {
            trace.push(record);
        }
    }

    let mut survivors_by_strategy = StrategyCounts::default();
    for agent in population.iter().filter(|a| a.alive) {
        match agent.strategy {
            Strategy::Egoist => survivors_by_strategy.egoist += 1,
            Strategy::Altruist => survivors_by_strategy.altruist += 1,
        }
    }
    let survivors_total = survivors_by_strategy.total();

    Ok(GameResult {
        survival_fraction: f64::from(survivors_total) / f64::from(config.n),
        survivors_total,
        survivors_by_strategy,
        final_capitals: population.iter().map(|a| a.capital).collect(),
        accepted_count,
        trace,
    })
}
