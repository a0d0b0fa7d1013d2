use crate::bandit::ContextVector;
use crate::{Error, Result};

use super::DimensionTuple;

/// Index of the interval of `{[0, 1/m], (1/m, 2/m], …, ((m-1)/m, 1]}` that
/// contains `value`.
pub fn cell_index(value: f64, m: usize) -> Result<usize> {
    if m == 0 {
        return Err(Error::domain("partition number must be at least 1"));
    }
    if !(value.is_finite() && (0.0..=1.0).contains(&value)) {
        return Err(Error::domain(format!("value {value} is outside [0, 1]")));
    }
    Ok(cell_index_unchecked(value, m))
}

/// [`cell_index`] without argument checks. Boundaries are the rounded
/// quotients `k / m`, so a value equal to `k / m` lands in interval `k - 1`.
#[inline]
pub(crate) fn cell_index_unchecked(value: f64, m: usize) -> usize {
    let mf = m as f64;
    let mut k = ((value * mf).ceil() as usize).saturating_sub(1).min(m - 1);
    while k > 0 && value <= k as f64 / mf {
        k -= 1;
    }
    while k + 1 < m && value > (k + 1) as f64 / mf {
        k += 1;
    }
    k
}

/// Mixed-radix index of `intervals` (first entry most significant), so the
/// order of linear indices is the lexicographic order of interval tuples.
pub fn linear_cell_index(intervals: &[usize], m: usize) -> u64 {
    intervals
        .iter()
        .fold(0u64, |acc, &k| acc * m as u64 + k as u64)
}

/// Smallest integer `k >= 1` with `k^exponent >= value`, i.e. `⌈value^{1/exponent}⌉`
/// computed without floating-point rounding at exact powers.
pub fn ceil_root(value: u64, exponent: u32) -> u64 {
    assert!(exponent >= 1, "exponent must be positive");
    if value <= 1 {
        return 1;
    }
    let reaches = |k: u64| -> bool {
        let mut acc: u128 = 1;
        for _ in 0..exponent {
            acc *= k as u128;
            if acc >= value as u128 {
                return true;
            }
        }
        acc >= value as u128
    };
    let mut k = ((value as f64).powf(1.0 / exponent as f64).ceil() as u64).max(1);
    while k > 1 && reaches(k - 1) {
        k -= 1;
    }
    while !reaches(k) {
        k += 1;
    }
    k
}

/// A cell of the uniform partition of the subspace spanned by `tuple`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellKey {
    pub tuple: DimensionTuple,
    pub intervals: Vec<usize>,
}

impl CellKey {
    pub fn new(tuple: DimensionTuple, intervals: Vec<usize>, m: usize) -> Result<Self> {
        if tuple.len() != intervals.len() {
            return Err(Error::domain(format!(
                "cell key for {tuple} needs {} interval indices, got {}",
                tuple.len(),
                intervals.len()
            )));
        }
        if let Some(k) = intervals.iter().find(|&&k| k >= m) {
            return Err(Error::domain(format!("interval index {k} >= m = {m}")));
        }
        Ok(Self { tuple, intervals })
    }

    pub fn linear_index(&self, m: usize) -> u64 {
        linear_cell_index(&self.intervals, m)
    }
}

/// The cell of `tuple`'s partition that `x` falls into.
pub fn cell_key(x: &ContextVector, tuple: &DimensionTuple, m: usize) -> Result<CellKey> {
    // Re-validate: callers may pass a tuple built for another ambient dimension.
    let tuple = DimensionTuple::new(tuple.dims().to_vec(), x.dim())?;
    let intervals = tuple
        .dims()
        .iter()
        .map(|&d| cell_index(x[d], m))
        .collect::<Result<Vec<_>>>()?;
    Ok(CellKey { tuple, intervals })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundaries() {
        assert_eq!(cell_index(0.0, 5).unwrap(), 0);
        assert_eq!(cell_index(0.2, 5).unwrap(), 0);
        assert_eq!(cell_index(0.2 + 1e-9, 5).unwrap(), 1);
        assert_eq!(cell_index(1.0, 5).unwrap(), 4);
        assert_eq!(cell_index(0.5, 1).unwrap(), 0);
        assert!(cell_index(1.5, 5).is_err());
        assert!(cell_index(-0.1, 5).is_err());
        assert!(cell_index(0.5, 0).is_err());
    }

    #[test]
    fn every_grid_point_is_a_right_endpoint() {
        for m in 1..40 {
            for k in 1..=m {
                let v = k as f64 / m as f64;
                assert_eq!(cell_index(v, m).unwrap(), k - 1, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn ceil_root_exact_powers() {
        assert_eq!(ceil_root(100_000, 5), 10);
        assert_eq!(ceil_root(100_001, 5), 11);
        assert_eq!(ceil_root(99_999, 5), 10);
        assert_eq!(ceil_root(1, 7), 1);
        assert_eq!(ceil_root(4096, 4), 8);
        assert_eq!(ceil_root(100_000, 7), 6);
        assert_eq!(ceil_root(100_000, 12), 3);
    }

    #[test]
    fn keys_are_componentwise() {
        let x = ContextVector::new(vec![0.0, 0.3, 0.6, 1.0]).unwrap();
        let w = DimensionTuple::new(vec![0, 3], 4).unwrap();
        assert_eq!(cell_key(&x, &w, 5).unwrap().intervals, vec![0, 4]);
        assert!(CellKey::new(w.clone(), vec![0, 5], 5).is_err());
        assert!(CellKey::new(w, vec![0], 5).is_err());
    }
}
