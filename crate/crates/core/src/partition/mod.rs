//! Dimension-tuple catalogs, uniform interval partitions and the statistics
//! store they index.

mod arms;
mod grid;
mod store;
mod tuples;

pub use arms::{generate_arms, ArmCell, DiscretizedArmSet};
pub use grid::{cell_index, cell_key, ceil_root, linear_cell_index, CellKey};
pub use store::{CellId, CellStats, StatsKey, StatsStore};
pub use tuples::{binomial, enumerate_tuples, merge_tuple, supertuples, DimensionTuple};
