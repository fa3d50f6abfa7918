//! Noisy running totals over a bounded stream of integer increments.
//!
//! The stream positions `1..=capacity` are covered by dyadic intervals; each
//! interval's subtotal gets one geometric noise draw, taken lazily when the
//! interval closes, and the query output is the sum of the noisy subtotals
//! covering the current prefix. One increment touches at most `levels`
//! intervals, so per-node noise `Geom(exp(eps / levels))` makes the whole
//! stream release satisfy the `eps` privacy bound; the output error stays
//! polylogarithmic in `capacity` with high probability.

use rand::Rng;

use crate::noise::GeomParam;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct NoisyPrefixSum {
    capacity: u64,
    levels: u32,
    node_noise: Option<GeomParam>,
    items: u64,
    exact: i64,
    level_true: Vec<i64>,
    level_noisy: Vec<i64>,
    output: i64,
    nodes_finalized: u64,
}

impl NoisyPrefixSum {
    /// A mechanism accepting up to `capacity` increments under privacy
    /// parameter `epsilon`.
    pub fn new(capacity: u64, epsilon: f64) -> Result<NoisyPrefixSum> {
        let levels = Self::level_count(capacity)?;
        let node_noise = GeomParam::from_epsilon(epsilon / levels as f64)?;
        Ok(Self::with_noise(capacity, levels, Some(node_noise)))
    }

    /// Same bookkeeping with every noise term zero: the output equals the
    /// exact prefix sum. Validation aid; the output is not private.
    pub fn noiseless(capacity: u64) -> Result<NoisyPrefixSum> {
        let levels = Self::level_count(capacity)?;
        Ok(Self::with_noise(capacity, levels, None))
    }

    fn level_count(capacity: u64) -> Result<u32> {
        if capacity == 0 {
            return Err(Error::Domain("capacity must be at least 1".into()));
        }
        Ok(capacity.next_power_of_two().trailing_zeros() + 1)
    }

    fn with_noise(capacity: u64, levels: u32, node_noise: Option<GeomParam>) -> NoisyPrefixSum {
        NoisyPrefixSum {
            capacity,
            levels,
            node_noise,
            items: 0,
            exact: 0,
            level_true: Vec::new(),
            level_noisy: Vec::new(),
            output: 0,
            nodes_finalized: 0,
        }
    }

    /// Feeds one increment and returns the new noisy total.
    pub fn update<R: Rng + ?Sized>(&mut self, x: i64, rng: &mut R) -> Result<i64> {
        if self.items == self.capacity {
            return Err(Error::State(format!(
                "prefix sum capacity {} exhausted",
                self.capacity
            )));
        }
        self.items += 1;
        self.exact += x;
        let t = self.items;
        let level = t.trailing_zeros() as usize;
        debug_assert!((level as u32) < self.levels);
        if level >= self.level_true.len() {
            self.level_true.resize(level + 1, 0);
            self.level_noisy.resize(level + 1, 0);
        }
        // The closing interval absorbs the open intervals below it; their
        // noisy subtotals leave the output, the fresh one enters it.
        let mut interval_sum = x;
        let mut retired_noisy = 0i64;
        for j in 0..level {
            interval_sum += self.level_true[j];
            retired_noisy += self.level_noisy[j];
            self.level_true[j] = 0;
            self.level_noisy[j] = 0;
        }
        let noise = match self.node_noise {
            Some(p) => p.sample(rng),
            None => 0,
        };
        self.nodes_finalized += 1;
        self.level_true[level] = interval_sum;
        self.level_noisy[level] = interval_sum + noise;
        self.output += self.level_noisy[level] - retired_noisy;
        Ok(self.output)
    }

    /// Current noisy total; deterministic between updates, 0 before the first.
    pub fn query(&self) -> i64 {
        self.output
    }

    /// Exact running total (bookkeeping for validation, not a private value).
    pub fn exact_sum(&self) -> i64 {
        self.exact
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn items_seen(&self) -> u64 {
        self.items
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    /// Dyadic intervals finalized so far; at most one per update.
    pub fn nodes_finalized(&self) -> u64 {
        self.nodes_finalized
    }
}
