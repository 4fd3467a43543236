//! Group performance metrics computed on the pooled final population.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::landscape::{check_bits, space_size, Idea, UtilityTable};
use crate::population::IdeaPopulation;

/// Idea counts summed over every agent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PooledPopulation {
    bits: u32,
    counts: Vec<u64>,
    total: u64,
}

impl PooledPopulation {
    pub fn new(bits: u32) -> Result<Self> {
        check_bits(bits)?;
        Ok(PooledPopulation { bits, counts: vec![0; space_size(bits)], total: 0 })
    }

    /// Builds a pool from `(idea index, count)` pairs.
    pub fn from_counts(bits: u32, pairs: impl IntoIterator<Item = (u32, u64)>) -> Result<Self> {
        let mut pool = Self::new(bits)?;
        for (i, c) in pairs {
            let idea = Idea::new(i, bits)?;
            pool.add(idea, c);
        }
        Ok(pool)
    }

    pub fn pool<'a>(bits: u32, populations: impl IntoIterator<Item = &'a IdeaPopulation>) -> Result<Self> {
        let mut pool = Self::new(bits)?;
        for pop in populations {
            if pop.bits() != bits {
                return invalid("populations disagree on idea length");
            }
            for (slot, &c) in pool.counts.iter_mut().zip(pop.counts()) {
                *slot += u64::from(c);
            }
            pool.total += pop.total() as u64;
        }
        Ok(pool)
    }

    pub fn add(&mut self, idea: Idea, copies: u64) {
        self.counts[idea.index() as usize] += copies;
        self.total += copies;
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn distinct(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

/// Shannon entropy in bits of the idea-type frequencies.
pub fn entropy(pool: &PooledPopulation) -> Result<f64> {
    if pool.total == 0 {
        return invalid("entropy of an empty pool");
    }
    let total = pool.total as f64;
    let h = pool
        .counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum::<f64>();
    Ok(h.max(0.0))
}

/// `(M - H) / M`: 1 for a single surviving idea, 0 for a uniform spread over
/// the whole space.
pub fn convergence(h: f64, bits: u32) -> Result<f64> {
    let m = f64::from(bits);
    // summation error can push H of a uniform pool a hair past M
    let tol = 1e-9;
    if bits == 0 || !(-tol..=m + tol).contains(&h) {
        return invalid(format!("entropy {h} outside [0, {bits}]"));
    }
    Ok(((m - h) / m).clamp(0.0, 1.0))
}

/// Most supported idea, lowest index on ties.
pub fn mode_idea(pool: &PooledPopulation) -> Result<Idea> {
    if pool.total == 0 {
        return invalid("mode of an empty pool");
    }
    let (best, _) =
        pool.counts.iter().enumerate().fold((0, 0), |(bi, bc), (i, &c)| if c > bc { (i, c) } else { (bi, bc) });
    Idea::new(best as u32, pool.bits)
}

pub fn decision_quality(pool: &PooledPopulation, true_table: &UtilityTable) -> Result<f64> {
    if true_table.bits() != pool.bits {
        return invalid("pool and table disagree on idea length");
    }
    Ok(true_table.get(mode_idea(pool)?))
}
