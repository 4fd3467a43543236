//! Agents' idea populations and the evolutionary operators acting on them.
//!
//! Every operator decides its outcome from the acting agent's own ideas and
//! perceived utilities only, then applies that outcome to the agent and to
//! each of its neighbours.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::draw_index;
use crate::error::{check_probability, invalid, Error, Result};
use crate::landscape::{check_bits, random_flip_mask, space_size, Idea, UtilityTable};

/// Multiset of ideas held by one agent.
///
/// Copies are kept in an ordered list so that copy-level sampling is O(1);
/// `counts` mirrors the list per idea index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdeaPopulation {
    bits: u32,
    counts: Vec<u32>,
    copies: Vec<u32>,
}

impl IdeaPopulation {
    pub fn new(bits: u32) -> Result<Self> {
        check_bits(bits)?;
        Ok(IdeaPopulation { bits, counts: vec![0; space_size(bits)], copies: Vec::new() })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn total(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    pub fn count(&self, idea: Idea) -> u32 {
        self.counts[idea.index() as usize]
    }

    /// Copy counts indexed by idea index.
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn add(&mut self, idea: Idea) {
        debug_assert_eq!(idea.len(), self.bits);
        self.counts[idea.index() as usize] += 1;
        self.copies.push(idea.index());
    }

    /// Removes one copy if present; returns whether anything was removed.
    pub fn remove_one(&mut self, idea: Idea) -> bool {
        let i = idea.index();
        if self.counts[i as usize] == 0 {
            return false;
        }
        self.counts[i as usize] -= 1;
        let pos = self.copies.iter().rposition(|&c| c == i).expect("count and copy list agree");
        self.copies.swap_remove(pos);
        true
    }

    /// One copy drawn uniformly, so popular ideas are proportionally likelier.
    pub fn sample_copy<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Idea> {
        if self.copies.is_empty() {
            return None;
        }
        let i = self.copies[draw_index(rng, self.copies.len())];
        Some(Idea::from_index_unchecked(i, self.bits))
    }

    pub fn distinct(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AgentState {
    pub id: usize,
    pub perceived: UtilityTable,
    pub ideas: IdeaPopulation,
}

impl AgentState {
    pub fn new(id: usize, perceived: UtilityTable) -> Self {
        let ideas = IdeaPopulation::new(perceived.bits()).expect("table has a valid bit length");
        AgentState { id, perceived, ideas }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum OperatorKind {
    Replication,
    SubtractiveSelection,
    RandomMutation,
    IntelligentMutation,
    Recombination,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 5] = [
        OperatorKind::Replication,
        OperatorKind::SubtractiveSelection,
        OperatorKind::RandomMutation,
        OperatorKind::IntelligentMutation,
        OperatorKind::Recombination,
    ];

    pub fn is_selection(self) -> bool {
        matches!(self, OperatorKind::Replication | OperatorKind::SubtractiveSelection)
    }

    /// Probability of this operator when selection-oriented behaviour has
    /// probability `p`.
    pub fn probability(self, p: f64) -> f64 {
        if self.is_selection() {
            p / 2.0
        } else {
            (1.0 - p) / 3.0
        }
    }
}

pub fn choose_action<R: Rng + ?Sized>(p: f64, rng: &mut R) -> Result<OperatorKind> {
    check_probability("selection probability", p)?;
    let u: f64 = rng.gen();
    let variation = (1.0 - p) / 3.0;
    let kind = if u < p / 2.0 {
        OperatorKind::Replication
    } else if u < p {
        OperatorKind::SubtractiveSelection
    } else if u < p + variation {
        OperatorKind::RandomMutation
    } else if u < p + 2.0 * variation {
        OperatorKind::IntelligentMutation
    } else {
        OperatorKind::Recombination
    };
    Ok(kind)
}

#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct OperatorParams {
    /// Copies sampled by preferential random search.
    pub sample_size: usize,
    /// Tentative offspring in intelligent mutation.
    pub offspring: usize,
    /// Per-bit mutation probability.
    pub mutation_rate: f64,
    /// Per-locus switching probability in recombination.
    pub switch_rate: f64,
}

impl Default for OperatorParams {
    fn default() -> Self {
        OperatorParams { sample_size: 5, offspring: 5, mutation_rate: 0.2, switch_rate: 0.4 }
    }
}

impl OperatorParams {
    pub fn validate(&self) -> Result<()> {
        check_probability("mutation rate", self.mutation_rate)?;
        check_probability("switch rate", self.switch_rate)?;
        if self.sample_size == 0 {
            return invalid("preferential sample size must be at least 1");
        }
        if self.offspring == 0 {
            return invalid("intelligent mutation needs at least 1 offspring");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Preference {
    Best,
    Worst,
}

/// Preferential random search: samples `min(sample_size, total)` copies
/// without replacement and returns the best or worst by perceived utility,
/// lower idea index winning ties.
pub fn preferential_pick<R: Rng + ?Sized>(
    pop: &IdeaPopulation,
    table: &UtilityTable,
    sample_size: usize,
    preference: Preference,
    rng: &mut R,
) -> Option<Idea> {
    if pop.is_empty() {
        return None;
    }
    let amount = sample_size.min(pop.total());
    let sampled = index::sample(rng, pop.total(), amount).into_iter().map(|i| pop.copies[i]);
    let chosen = match preference {
        Preference::Best => best_by(sampled, |i| table.at(i)),
        Preference::Worst => best_by(sampled, |i| -table.at(i)),
    }?;
    Some(Idea::from_index_unchecked(chosen, pop.bits))
}

/// Highest-scoring index, lowest index on ties.
fn best_by(candidates: impl Iterator<Item = u32>, score: impl Fn(u32) -> f64) -> Option<u32> {
    candidates
        .fold(None, |best: Option<(u32, f64)>, i| {
            let s = score(i);
            match best {
                Some((b, bs)) if bs > s || (bs == s && b <= i) => Some((b, bs)),
                _ => Some((i, s)),
            }
        })
        .map(|(i, _)| i)
}

pub fn mutate<R: Rng + ?Sized>(parent: Idea, rate: f64, rng: &mut R) -> Idea {
    parent.flip(random_flip_mask(rng, parent.len(), rate))
}

/// Multi-point crossover: each locus is swapped between the two parents with
/// probability `rate`.
pub fn crossover<R: Rng + ?Sized>(a: Idea, b: Idea, rate: f64, rng: &mut R) -> (Idea, Idea) {
    let swap = random_flip_mask(rng, a.len(), rate) & (a.index() ^ b.index());
    (a.flip(swap), b.flip(swap))
}

/// What an operator does to the acting agent and each neighbour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Add(Vec<Idea>),
    Remove(Idea),
}

/// Decides an operator's outcome from the actor's own state. The actor's
/// perceived table is the only utility information consulted.
pub fn decide<R: Rng + ?Sized>(
    kind: OperatorKind,
    actor: &AgentState,
    params: &OperatorParams,
    rng: &mut R,
) -> Result<Outcome> {
    let pop = &actor.ideas;
    let table = &actor.perceived;
    let empty = Error::EmptyPopulation(actor.id);
    let outcome = match kind {
        OperatorKind::Replication => {
            let idea = preferential_pick(pop, table, params.sample_size, Preference::Best, rng).ok_or(empty)?;
            Outcome::Add(vec![idea])
        }
        OperatorKind::SubtractiveSelection => {
            let idea = preferential_pick(pop, table, params.sample_size, Preference::Worst, rng).ok_or(empty)?;
            Outcome::Remove(idea)
        }
        OperatorKind::RandomMutation => {
            let parent = pop.sample_copy(rng).ok_or(empty)?;
            Outcome::Add(vec![mutate(parent, params.mutation_rate, rng)])
        }
        OperatorKind::IntelligentMutation => {
            let parent = pop.sample_copy(rng).ok_or(empty)?;
            let children: Vec<u32> =
                (0..params.offspring).map(|_| mutate(parent, params.mutation_rate, rng).index()).collect();
            let best = best_by(children.into_iter(), |i| table.at(i)).expect("at least one offspring");
            Outcome::Add(vec![Idea::from_index_unchecked(best, pop.bits)])
        }
        OperatorKind::Recombination => {
            let a = pop.sample_copy(rng).ok_or(empty.clone())?;
            let b = pop.sample_copy(rng).ok_or(empty)?;
            let (x, y) = crossover(a, b, params.switch_rate, rng);
            Outcome::Add(vec![x, y])
        }
    };
    Ok(outcome)
}

/// Applies an outcome to `actor` and its `neighbors`; returns the change in
/// the pooled copy count.
pub fn apply(outcome: &Outcome, agents: &mut [AgentState], actor: usize, neighbors: &[usize]) -> i64 {
    let mut delta = 0;
    for &j in std::iter::once(&actor).chain(neighbors) {
        let pop = &mut agents[j].ideas;
        match outcome {
            Outcome::Add(ideas) => {
                for &idea in ideas {
                    pop.add(idea);
                    delta += 1;
                }
            }
            Outcome::Remove(idea) => {
                if pop.remove_one(*idea) {
                    delta -= 1;
                }
            }
        }
    }
    delta
}

/// Runs one operator for `actor`, sharing its result with `neighbors`.
pub fn act<R: Rng + ?Sized>(
    kind: OperatorKind,
    agents: &mut [AgentState],
    actor: usize,
    neighbors: &[usize],
    params: &OperatorParams,
    rng: &mut R,
) -> Result<i64> {
    let outcome = decide(kind, &agents[actor], params, rng)?;
    Ok(apply(&outcome, agents, actor, neighbors))
}

pub fn op_replicate<R: Rng + ?Sized>(
    agents: &mut [AgentState],
    actor: usize,
    neighbors: &[usize],
    params: &OperatorParams,
    rng: &mut R,
) -> Result<i64> {
    act(OperatorKind::Replication, agents, actor, neighbors, params, rng)
}

pub fn op_subtract<R: Rng + ?Sized>(
    agents: &mut [AgentState],
    actor: usize,
    neighbors: &[usize],
    params: &OperatorParams,
    rng: &mut R,
) -> Result<i64> {
    act(OperatorKind::SubtractiveSelection, agents, actor, neighbors, params, rng)
}

pub fn op_random_mutation<R: Rng + ?Sized>(
    agents: &mut [AgentState],
    actor: usize,
    neighbors: &[usize],
    params: &OperatorParams,
    rng: &mut R,
) -> Result<i64> {
    act(OperatorKind::RandomMutation, agents, actor, neighbors, params, rng)
}

pub fn op_intelligent_mutation<R: Rng + ?Sized>(
    agents: &mut [AgentState],
    actor: usize,
    neighbors: &[usize],
    params: &OperatorParams,
    rng: &mut R,
) -> Result<i64> {
    act(OperatorKind::IntelligentMutation, agents, actor, neighbors, params, rng)
}

pub fn op_recombine<R: Rng + ?Sized>(
    agents: &mut [AgentState],
    actor: usize,
    neighbors: &[usize],
    params: &OperatorParams,
    rng: &mut R,
) -> Result<i64> {
    act(OperatorKind::Recombination, agents, actor, neighbors, params, rng)
}
