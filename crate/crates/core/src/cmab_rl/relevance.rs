//! Per-arm estimators evaluated on the cells the current context falls into.
//!
//! Every function takes the arm's estimates for all `2d̄x`-tuples (indexed by
//! tuple rank) plus the ranks of the supertuples of one `d̄x`-tuple.

use crate::partition::CellStats;

/// Sample mean, count and confidence radius of one (arm, cell) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellEstimate {
    pub mean: f64,
    pub count: u64,
    /// `+inf` for an unvisited cell.
    pub radius: f64,
}

impl CellEstimate {
    /// `radius = multiplier * sqrt(numerator / N)`.
    #[inline]
    pub fn from_stats(stats: CellStats, numerator: f64, multiplier: f64) -> Self {
        let radius = if stats.count == 0 {
            f64::INFINITY
        } else {
            multiplier * (numerator / stats.count as f64).sqrt()
        };
        Self {
            mean: stats.mean,
            count: stats.count,
            radius,
        }
    }
}

/// The uncertainty term
/// `multiplier * sqrt((2 + 4 ln(2 |Y| C̄ m^{2d̄x} T^{3/2})) / N)`, infinite for `N = 0`.
pub fn uncertainty(
    count: u64,
    arms: usize,
    cbar: u64,
    m: usize,
    relevant_context: usize,
    horizon: u64,
    multiplier: f64,
) -> f64 {
    let numerator = confidence_numerator(arms, cbar, m, relevant_context, horizon);
    CellEstimate::from_stats(
        CellStats {
            count,
            mean: 0.0,
        },
        numerator,
        multiplier,
    )
    .radius
}

/// `2 + 4 ln(2 |Y| C̄ m^{2d̄x} T^{3/2})`, evaluated as a sum of logarithms.
pub fn confidence_numerator(
    arms: usize,
    cbar: u64,
    m: usize,
    relevant_context: usize,
    horizon: u64,
) -> f64 {
    let log = std::f64::consts::LN_2
        + (arms as f64).ln()
        + (cbar as f64).ln()
        + 2.0 * relevant_context as f64 * (m as f64).ln()
        + 1.5 * (horizon as f64).ln();
    2.0 + 4.0 * log
}

/// Whether every supertuple pair agrees within `slack + u_w + u_w'`, and the
/// largest pairwise gap of sample means (the variation).
#[inline]
pub fn relevance_and_variation(
    cells: &[CellEstimate],
    supertuples: &[usize],
    slack: f64,
) -> (bool, f64) {
    let mut passes = true;
    let mut variation = 0.0f64;
    for (i, &a) in supertuples.iter().enumerate() {
        let ca = cells[a];
        for &b in &supertuples[i + 1..] {
            let cb = cells[b];
            let gap = (ca.mean - cb.mean).abs();
            variation = variation.max(gap);
            if gap > slack + ca.radius + cb.radius {
                passes = false;
            }
        }
    }
    (passes, variation)
}

pub fn passes_relevance_test(cells: &[CellEstimate], supertuples: &[usize], slack: f64) -> bool {
    relevance_and_variation(cells, supertuples, slack).0
}

/// Maximum pairwise gap of supertuple sample means; 0 with fewer than two.
pub fn variation(cells: &[CellEstimate], supertuples: &[usize]) -> f64 {
    relevance_and_variation(cells, supertuples, f64::INFINITY).1
}

/// Count-weighted mean over the supertuples; 0 when none has been visited.
#[inline]
pub fn aggregate_mean(cells: &[CellEstimate], supertuples: &[usize]) -> f64 {
    let (num, den) = supertuples.iter().fold((0.0, 0u64), |(num, den), &w| {
        let c = cells[w];
        (num + c.mean * c.count as f64, den + c.count)
    });
    if den == 0 {
        0.0
    } else {
        num / den as f64
    }
}
