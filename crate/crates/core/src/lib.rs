//! Contextual multi-armed bandits that learn which context and arm dimensions
//! matter.
//!
//! The crate is organised around a small round-loop contract:
//!
//! - [`bandit`] holds the shared value types ([`ContextVector`], [`ArmVector`],
//!   [`RoundRecord`]), the [`Policy`] and [`Environment`] traits, seeded RNG
//!   streams and the self-normalized confidence radius.
//! - [`partition`] builds dimension-tuple catalogs, uniform interval
//!   partitions, the discretized arm set and the lazily allocated statistics
//!   store.
//! - [`cmab_rl`] is the relevance-learning policy.
//! - [`baselines`] contains the comparison policies (uniform partitioning,
//!   contextual HOO, uniform random).
//! - [`environments`] provides the Gaussian-mixture Bernoulli environment, a
//!   sparse-relevance fixture environment, the glucose reward map and the grid
//!   oracle.
//! - [`harness`] runs seeded repetitions, grid searches and horizon sweeps and
//!   writes CSV/summary output.

pub mod bandit;
pub mod baselines;
pub mod cmab_rl;
pub mod environments;
mod error;
pub mod harness;
pub mod partition;

pub use bandit::{ArmVector, BanditRng, ContextVector, Environment, Policy, RoundRecord};
pub use error::{Error, Result};
