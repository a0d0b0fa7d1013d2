use rand::Rng;

use super::BanditRng;

/// Streaming argmax with uniform random tie-breaking (reservoir sampling over
/// the tied maxima). Draws from the RNG only when a tie occurs.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ArgMax {
    best: f64,
    index: Option<usize>,
    ties: u32,
}

impl ArgMax {
    pub(crate) fn new() -> Self {
        Self {
            best: f64::NEG_INFINITY,
            index: None,
            ties: 0,
        }
    }

    #[inline]
    pub(crate) fn offer(&mut self, index: usize, value: f64, rng: &mut BanditRng) {
        if self.index.is_none() || value > self.best {
            self.best = value;
            self.index = Some(index);
            self.ties = 1;
        } else if value == self.best {
            self.ties += 1;
            if rng.random_range(0..self.ties) == 0 {
                self.index = Some(index);
            }
        }
    }

    pub(crate) fn index(&self) -> Option<usize> {
        self.index
    }
}
