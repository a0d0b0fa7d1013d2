use std::fmt;

use crate::{Error, Result};

/// A strictly increasing set of 0-based dimension indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimensionTuple(Vec<usize>);

impl DimensionTuple {
    pub fn new(dims: Vec<usize>, ambient: usize) -> Result<Self> {
        if dims.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain(format!(
                "tuple {dims:?} is not strictly increasing"
            )));
        }
        if let Some(&last) = dims.last() {
            if last >= ambient {
                return Err(Error::domain(format!(
                    "tuple {dims:?} has an index outside 0..{ambient}"
                )));
            }
        }
        Ok(Self(dims))
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, dim: usize) -> bool {
        self.0.binary_search(&dim).is_ok()
    }

    pub fn is_subset_of(&self, other: &DimensionTuple) -> bool {
        self.0.iter().all(|&d| other.contains(d))
    }
}

impl fmt::Display for DimensionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// All `l`-subsets of `pool` in lexicographic order.
fn combinations(pool: &[usize], l: usize) -> Vec<Vec<usize>> {
    let n = pool.len();
    if l > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..l).collect();
    loop {
        out.push(idx.iter().map(|&i| pool[i]).collect());
        // rightmost position that can still advance
        let Some(pos) = (0..l).rev().find(|&i| idx[i] < n - l + i) else {
            break;
        };
        idx[pos] += 1;
        for j in pos + 1..l {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

/// All `l`-tuples of `0..d` in lexicographic order.
pub fn enumerate_tuples(d: usize, l: usize) -> Result<Vec<DimensionTuple>> {
    if l == 0 || l > d {
        return Err(Error::domain(format!(
            "tuple size {l} must satisfy 1 <= l <= d = {d}"
        )));
    }
    let pool: Vec<usize> = (0..d).collect();
    Ok(combinations(&pool, l).into_iter().map(DimensionTuple).collect())
}

/// All `l`-tuples of `0..d` that contain `v`, in lexicographic order.
pub fn supertuples(v: &DimensionTuple, l: usize, d: usize) -> Result<Vec<DimensionTuple>> {
    if v.len() > l || l > d || v.0.last().is_some_and(|&m| m >= d) {
        return Err(Error::domain(format!(
            "supertuples of {v} need |v| <= l <= d (l = {l}, d = {d})"
        )));
    }
    let rest: Vec<usize> = (0..d).filter(|&i| !v.contains(i)).collect();
    let mut out: Vec<DimensionTuple> = combinations(&rest, l - v.len())
        .into_iter()
        .map(|mut extra| {
            extra.extend_from_slice(&v.0);
            extra.sort_unstable();
            DimensionTuple(extra)
        })
        .collect();
    out.sort();
    Ok(out)
}

/// A `target`-tuple containing `v ∪ c`, padded with the smallest unused
/// dimension indices when the union is too small.
pub fn merge_tuple(
    v: &DimensionTuple,
    c: &DimensionTuple,
    target: usize,
    d: usize,
) -> Result<DimensionTuple> {
    let mut dims: Vec<usize> = v.0.iter().chain(&c.0).copied().collect();
    dims.sort_unstable();
    dims.dedup();
    if dims.len() > target || target > d || dims.last().is_some_and(|&m| m >= d) {
        return Err(Error::domain(format!(
            "cannot merge {v} and {c} into a {target}-tuple of 0..{d}"
        )));
    }
    let missing = target - dims.len();
    let pad: Vec<usize> = (0..d)
        .filter(|i| dims.binary_search(i).is_err())
        .take(missing)
        .collect();
    dims.extend(pad);
    dims.sort_unstable();
    Ok(DimensionTuple(dims))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(dims: &[usize], d: usize) -> DimensionTuple {
        DimensionTuple::new(dims.to_vec(), d).unwrap()
    }

    #[test]
    fn enumerate_small() {
        let got = enumerate_tuples(3, 2).unwrap();
        assert_eq!(got, vec![t(&[0, 1], 3), t(&[0, 2], 3), t(&[1, 2], 3)]);
        assert_eq!(enumerate_tuples(5, 2).unwrap().len(), 10);
        assert_eq!(enumerate_tuples(4, 4).unwrap(), vec![t(&[0, 1, 2, 3], 4)]);
        assert!(enumerate_tuples(3, 4).is_err());
        assert!(enumerate_tuples(3, 0).is_err());
    }

    #[test]
    fn supertuple_counts() {
        assert_eq!(supertuples(&t(&[0], 5), 2, 5).unwrap().len(), 4);
        assert_eq!(
            supertuples(&t(&[0, 1], 5), 2, 5).unwrap(),
            vec![t(&[0, 1], 5)]
        );
        assert_eq!(supertuples(&t(&[0], 4), 3, 4).unwrap().len(), 3);
        assert!(supertuples(&t(&[0, 1], 5), 1, 5).is_err());
        assert!(supertuples(&t(&[0], 5), 6, 5).is_err());
    }

    #[test]
    fn tuple_validation() {
        assert!(DimensionTuple::new(vec![3, 0], 5).is_err());
        assert!(DimensionTuple::new(vec![1, 1], 5).is_err());
        assert!(DimensionTuple::new(vec![0, 5], 5).is_err());
    }

    /// Padding oracle: the lexicographically smallest valid supertuple of
    /// `v ∪ c`, found by scanning every tuple of the target size.
    fn smallest_valid_supertuple(
        v: &DimensionTuple,
        c: &DimensionTuple,
        target: usize,
        d: usize,
    ) -> DimensionTuple {
        enumerate_tuples(d, target)
            .unwrap()
            .into_iter()
            .find(|w| v.is_subset_of(w) && c.is_subset_of(w))
            .unwrap()
    }

    #[test]
    fn merge_examples() {
        assert_eq!(merge_tuple(&t(&[0], 5), &t(&[3], 5), 2, 5).unwrap(), t(&[0, 3], 5));
        assert_eq!(merge_tuple(&t(&[2], 5), &t(&[2], 5), 2, 5).unwrap(), t(&[0, 2], 5));
        assert_eq!(
            merge_tuple(&t(&[0, 1], 6), &t(&[1, 2], 6), 4, 6).unwrap(),
            t(&[0, 1, 2, 3], 6)
        );
    }

    #[test]
    fn merge_matches_exhaustive_oracle() {
        for d in 2..=7 {
            for half in 1..=d / 2 {
                let narrow = enumerate_tuples(d, half).unwrap();
                for v in &narrow {
                    for c in &narrow {
                        let got = merge_tuple(v, c, 2 * half, d).unwrap();
                        assert_eq!(got, smallest_valid_supertuple(v, c, 2 * half, d));
                    }
                }
            }
        }
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(10, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
    }
}
