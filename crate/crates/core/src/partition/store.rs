use rustc_hash::FxHashMap;

/// Visit count and sample-mean reward of one (arm, cell) pair.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CellStats {
    pub count: u64,
    pub mean: f64,
}

impl CellStats {
    /// Running-mean update: `mean <- (mean * N + r) / (N + 1)`, `N <- N + 1`.
    pub fn record(&mut self, reward: f64) {
        self.mean = (self.mean * self.count as f64 + reward) / (self.count + 1) as f64;
        self.count += 1;
    }
}

/// A cell of a tuple partition: the tuple's rank in its catalog and the cell's
/// linear interval index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellId {
    pub tuple: u32,
    pub cell: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StatsKey {
    pub arm: u32,
    pub cell: CellId,
}

/// Lazily allocated `(arm, cell) -> CellStats` map. Absent entries read as
/// `CellStats { count: 0, mean: 0.0 }`.
#[derive(Debug, Clone, Default)]
pub struct StatsStore {
    entries: FxHashMap<StatsKey, CellStats>,
    updates: u64,
}

impl StatsStore {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn get(&self, arm: usize, cell: CellId) -> CellStats {
        self.entries
            .get(&StatsKey {
                arm: arm as u32,
                cell,
            })
            .copied()
            .unwrap_or_default()
    }

    pub fn update(&mut self, arm: usize, cell: CellId, reward: f64) {
        self.entries
            .entry(StatsKey {
                arm: arm as u32,
                cell,
            })
            .or_default()
            .record(reward);
        self.updates += 1;
    }

    /// Number of allocated entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total number of [`StatsStore::update`] calls.
    pub fn updates(&self) -> u64 {
        self.updates
    }

    pub fn clear(&mut self) {
        self.entries.clear();
        self.updates = 0;
    }

    /// Entries sorted by key.
    pub fn sorted_entries(&self) -> Vec<(StatsKey, CellStats)> {
        let mut v: Vec<_> = self.entries.iter().map(|(k, s)| (*k, *s)).collect();
        v.sort_by_key(|(k, _)| *k);
        v
    }

    pub(crate) fn insert(&mut self, key: StatsKey, stats: CellStats) {
        self.entries.insert(key, stats);
    }
}
