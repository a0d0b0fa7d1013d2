use crate::bandit::ArmVector;
use crate::Result;

use super::{cell_index, enumerate_tuples, DimensionTuple};

/// Which partition cell of `C(A)` an arm represents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArmCell {
    pub tuple: DimensionTuple,
    pub intervals: Vec<usize>,
}

impl ArmCell {
    pub fn contains(&self, arm: &ArmVector, m: usize) -> bool {
        self.tuple
            .dims()
            .iter()
            .zip(&self.intervals)
            .all(|(&d, &k)| cell_index(arm[d], m).is_ok_and(|j| j == k))
    }
}

/// The finite arm set `Y`: one arm per cell of every `d̄a`-tuple partition.
///
/// Arm ids are positions in [`DiscretizedArmSet::arms`]; generated sets are
/// ordered by tuple, then by interval tuple, both lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedArmSet {
    arms: Vec<ArmVector>,
    cells: Vec<ArmCell>,
    partitions: usize,
}

impl DiscretizedArmSet {
    pub fn arms(&self) -> &[ArmVector] {
        &self.arms
    }

    pub fn cells(&self) -> &[ArmCell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }

    pub fn partitions(&self) -> usize {
        self.partitions
    }

    pub fn arm(&self, id: usize) -> &ArmVector {
        &self.arms[id]
    }

    pub fn position(&self, arm: &ArmVector) -> Option<usize> {
        self.arms.iter().position(|a| a == arm)
    }

    /// Keeps, for each cell containing at least one of `finite`, the first
    /// such arm (in input order) as the cell's representative. Cells that
    /// contain none of them are dropped.
    pub(crate) fn restricted_to(&self, finite: &[ArmVector]) -> Self {
        let mut arms = Vec::new();
        let mut cells = Vec::new();
        for cell in &self.cells {
            if let Some(rep) = finite.iter().find(|a| cell.contains(a, self.partitions)) {
                arms.push(rep.clone());
                cells.push(cell.clone());
            }
        }
        Self {
            arms,
            cells,
            partitions: self.partitions,
        }
    }
}

/// Centers of every cell of `C(A)`; coordinates outside the cell's tuple are 0.5.
pub fn generate_arms(d_a: usize, relevant: usize, m: usize) -> Result<DiscretizedArmSet> {
    if m == 0 {
        return Err(crate::Error::domain("partition number must be at least 1"));
    }
    let tuples = enumerate_tuples(d_a, relevant)?;
    let mut arms = Vec::new();
    let mut cells = Vec::new();
    for tuple in tuples {
        let mut intervals = vec![0usize; relevant];
        loop {
            let mut values = vec![0.5; d_a];
            for (&d, &k) in tuple.dims().iter().zip(&intervals) {
                values[d] = (k as f64 + 0.5) / m as f64;
            }
            arms.push(ArmVector::from_unchecked(values));
            cells.push(ArmCell {
                tuple: tuple.clone(),
                intervals: intervals.clone(),
            });
            // odometer, last position fastest
            let Some(pos) = (0..relevant).rev().find(|&i| intervals[i] + 1 < m) else {
                break;
            };
            intervals[pos] += 1;
            for k in &mut intervals[pos + 1..] {
                *k = 0;
            }
        }
    }
    Ok(DiscretizedArmSet {
        arms,
        cells,
        partitions: m,
    })
}
