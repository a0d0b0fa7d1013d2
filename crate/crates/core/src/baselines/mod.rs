//! Comparison policies that ignore the relevance structure.

mod choo;
mod iup;
mod uniform;

pub use choo::{choo_depth_cap, Choo, ChooConfig, ChooNode, Descent};
pub use iup::{iup_m, Iup, IupConfig};
pub use uniform::UniformRandom;
