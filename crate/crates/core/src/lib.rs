//! Agent-based simulation of collective decision making viewed as the
//! evolution of ideas.
//!
//! Agents sit on a social network and hold multisets of `M`-bit ideas. Each
//! iteration every agent, in a freshly shuffled order, applies one
//! evolutionary operator (replication, subtractive selection, random or
//! intelligent point mutation, recombination) whose outcome is shared with its
//! neighbours. Agents judge ideas through noisy personal copies of a possibly
//! biased master utility function; the hidden true utility function is only
//! used to score the final outcome.
//!
//! ```
//! use idea_evo_core::engine::{run, SimConfig};
//!
//! let cfg = SimConfig { seed: 7, ..SimConfig::default() };
//! let result = run(&cfg).unwrap();
//! assert!((0.0..=1.0).contains(&result.convergence));
//! ```

pub mod engine;
pub mod error;
pub mod landscape;
pub mod metrics;
pub mod network;
pub mod population;
pub mod stats;

pub use error::{Error, Result};

/// Generator used for every stochastic choice in a run.
pub type SimRng = rand_chacha::ChaCha8Rng;

/// Uniform index in `0..n`. `usize` ranges are sampled through a
/// platform-width integer, so drawing through `u64` keeps seeded runs identical
/// on 32-bit targets such as wasm.
pub(crate) fn draw_index<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> usize {
    rng.gen_range(0..n as u64) as usize
}
