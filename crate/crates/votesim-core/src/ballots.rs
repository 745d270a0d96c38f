//! Individual voting rules and the collective decision rule.

use crate::model::{poorest_alive, AgentState, GameConfig, Proposal, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vote {
    Yes,
    No,
}

/// Yes-votes against the number of alive voters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tally {
    pub yes_count: u32,
    pub voters: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Accepted,
    Rejected,
}

/// An egoist votes Yes iff its own increment is strictly positive.
#[inline]
pub fn egoist_ballot(agent_increment: f64) -> Vote {
    if agent_increment > 0.0 {
        Vote::Yes
    } else {
        Vote::No
    }
}

/// An altruist votes Yes iff the total increment of the `support_size`
/// poorest alive agents is strictly positive. Its own increment plays no
/// special role; it counts only if the voter happens to be in the screen.
pub fn altruist_ballot(
    population: &[AgentState],
    proposal: &Proposal,
    support_size: usize,
) -> Vote {
    let screen = poorest_alive(population, support_size);
    let total: f64 = screen.iter().map(|&id| proposal.increment_for(id)).sum();
    if total > 0.0 {
        Vote::Yes
    } else {
        Vote::No
    }
}

/// One vote per alive agent. The altruist ballot is computed once per
/// proposal since every altruist sees the same population state.
pub fn collect_ballots(
    population: &[AgentState],
    proposal: &Proposal,
    config: &GameConfig,
) -> Tally {
    let any_altruist_alive = population
        .iter()
        .any(|a| a.alive && a.strategy == Strategy::Altruist);
    let altruist_vote = if any_altruist_alive {
        altruist_ballot(population, proposal, config.support_size as usize)
    } else {
        Vote::No
    };

    let mut yes_count = 0;
    let mut voters = 0;
    for agent in population.iter().filter(|a| a.alive) {
        voters += 1;
        let vote = match agent.strategy {
            Strategy::Egoist => egoist_ballot(proposal.increment_for(agent.id)),
            Strategy::Altruist => altruist_vote,
        };
        if vote == Vote::Yes {
            yes_count += 1;
        }
    }
    Tally { yes_count, voters }
}

/// Accepted iff yes-votes strictly exceed `accept_threshold` times the alive
/// voter count. With zero voters everything is rejected.
#[inline]
pub fn decide(tally: Tally, accept_threshold: f64) -> Decision {
    if f64::from(tally.yes_count) > accept_threshold * f64::from(tally.voters) {
        Decision::Accepted
    } else {
        Decision::Rejected
    }
}
