//! Plain-text snapshot of the statistics store.
//!
//! ```text
//! # cmab-rl snapshot v1
//! # context_dim=5 arm_dim=5 relevant_context=1 relevant_arm=1 partitions=10 arms=50
//! # arm tuple_rank intervals count mean
//! 0 3 2,7 4 0.25
//! ```
//!
//! One line per allocated (arm, cell) entry, sorted by arm id, then tuple rank
//! (lexicographic rank among `2d̄x`-tuples), then interval indices. Means use
//! the shortest decimal form that round-trips to the same `f64`.

use std::fmt::Write;

use super::CmabRl;
use crate::partition::{linear_cell_index, CellId, CellStats, StatsKey};
use crate::{Error, Result};

pub const SNAPSHOT_MAGIC: &str = "# cmab-rl snapshot v1";

#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotEntry {
    pub arm: usize,
    pub tuple_rank: usize,
    pub intervals: Vec<usize>,
    pub count: u64,
    pub mean: f64,
}

fn decode_intervals(mut linear: u64, m: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = (linear % m as u64) as usize;
        linear /= m as u64;
    }
    out
}

impl CmabRl {
    pub fn snapshot(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        out.push_str(SNAPSHOT_MAGIC);
        out.push('\n');
        let _ = writeln!(
            out,
            "# context_dim={} arm_dim={} relevant_context={} relevant_arm={} partitions={} arms={}",
            c.context_dim,
            c.arm_dim,
            c.relevant_context,
            c.relevant_arm,
            self.m,
            self.arms.len()
        );
        out.push_str("# arm tuple_rank intervals count mean\n");
        let width = 2 * c.relevant_context;
        for (key, stats) in self.store.sorted_entries() {
            let intervals = decode_intervals(key.cell.cell, self.m, width)
                .iter()
                .map(|k| k.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let _ = writeln!(
                out,
                "{} {} {} {} {}",
                key.arm, key.cell.tuple, intervals, stats.count, stats.mean
            );
        }
        out
    }

    /// Replaces the statistics store with the entries of `text`.
    pub fn load_snapshot(&mut self, text: &str) -> Result<()> {
        let entries = parse_snapshot(text)?;
        let width = 2 * self.config.relevant_context;
        self.store.clear();
        for e in entries {
            if e.arm >= self.arms.len() || e.tuple_rank >= self.wide.len() {
                return Err(Error::Parse(format!(
                    "entry (arm {}, tuple {}) is outside the catalog",
                    e.arm, e.tuple_rank
                )));
            }
            if e.intervals.len() != width || e.intervals.iter().any(|&k| k >= self.m) {
                return Err(Error::Parse(format!(
                    "interval indices {:?} do not fit {width} dimensions with m = {}",
                    e.intervals, self.m
                )));
            }
            self.store.insert(
                StatsKey {
                    arm: e.arm as u32,
                    cell: CellId {
                        tuple: e.tuple_rank as u32,
                        cell: linear_cell_index(&e.intervals, self.m),
                    },
                },
                CellStats {
                    count: e.count,
                    mean: e.mean,
                },
            );
        }
        Ok(())
    }
}

pub fn parse_snapshot(text: &str) -> Result<Vec<SnapshotEntry>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first.trim() == SNAPSHOT_MAGIC => {}
        _ => return Err(Error::Parse("missing snapshot header".into())),
    }
    let mut entries = Vec::new();
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |what: &str| Error::Parse(format!("line {}: {what}: {line:?}", lineno + 1));
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [arm, tuple, intervals, count, mean] = fields[..] else {
            return Err(bad("expected 5 fields"));
        };
        entries.push(SnapshotEntry {
            arm: arm.parse().map_err(|_| bad("bad arm id"))?,
            tuple_rank: tuple.parse().map_err(|_| bad("bad tuple rank"))?,
            intervals: intervals
                .split(',')
                .map(|k| k.parse().map_err(|_| bad("bad interval index")))
                .collect::<Result<_>>()?,
            count: count.parse().map_err(|_| bad("bad count"))?,
            mean: mean.parse().map_err(|_| bad("bad mean"))?,
        });
    }
    Ok(entries)
}
