use std::fmt;

/// Finite set of integers stored as a bitset over `[offset, offset + 64 * words.len())`.
///
/// The set never grows after construction; every mutation removes values.
#[derive(Clone)]
pub struct IntDomain {
    offset: i64,
    words: Vec<u64>,
    size: usize,
    min: i64,
    max: i64,
}

/// What a mutation did to a domain.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Delta {
    pub changed: bool,
    pub bounds: bool,
}

impl Delta {
    pub const NONE: Delta = Delta { changed: false, bounds: false };

    fn merge(self, other: Delta) -> Delta {
        Delta { changed: self.changed || other.changed, bounds: self.bounds || other.bounds }
    }
}

impl IntDomain {
    /// Builds a domain from arbitrary values; duplicates collapse.
    pub fn from_values<I: IntoIterator<Item = i64>>(values: I) -> Self {
        let mut vals: Vec<i64> = values.into_iter().collect();
        vals.sort_unstable();
        vals.dedup();
        let Some((&lo, &hi)) = vals.first().zip(vals.last()) else {
            return Self::empty();
        };
        let span = (hi - lo) as usize + 1;
        let mut words = vec![0u64; span.div_ceil(64)];
        for v in &vals {
            let k = (v - lo) as usize;
            words[k / 64] |= 1 << (k % 64);
        }
        IntDomain { offset: lo, words, size: vals.len(), min: lo, max: hi }
    }

    /// The interval `lo..=hi`; empty when `lo > hi`.
    pub fn range(lo: i64, hi: i64) -> Self {
        if lo > hi {
            return Self::empty();
        }
        Self::from_values(lo..=hi)
    }

    pub fn empty() -> Self {
        IntDomain { offset: 0, words: Vec::new(), size: 0, min: 1, max: 0 }
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Smallest value. Meaningless on an empty domain.
    pub fn min(&self) -> i64 {
        self.min
    }

    pub fn max(&self) -> i64 {
        self.max
    }

    pub fn is_fixed(&self) -> bool {
        self.size == 1
    }

    /// The single value when the domain is a singleton.
    pub fn value(&self) -> Option<i64> {
        self.is_fixed().then_some(self.min)
    }

    pub fn contains(&self, v: i64) -> bool {
        if self.size == 0 || v < self.min || v > self.max {
            return false;
        }
        let k = (v - self.offset) as usize;
        self.words[k / 64] >> (k % 64) & 1 == 1
    }

    /// True when some value lies in `lo..=hi`.
    pub fn intersects(&self, lo: i64, hi: i64) -> bool {
        let lo = lo.max(self.min);
        let hi = hi.min(self.max);
        (lo..=hi).any(|v| self.contains(v))
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        let (lo, hi) = if self.size == 0 { (1, 0) } else { (self.min, self.max) };
        (lo..=hi).filter(move |&v| self.contains(v))
    }

    pub fn to_vec(&self) -> Vec<i64> {
        self.iter().collect()
    }

    pub fn remove(&mut self, v: i64) -> Delta {
        if !self.contains(v) {
            return Delta::NONE;
        }
        let k = (v - self.offset) as usize;
        self.words[k / 64] &= !(1 << (k % 64));
        self.size -= 1;
        let bounds = v == self.min || v == self.max;
        if self.size > 0 {
            if v == self.min {
                self.min = self.next_present(v + 1);
            }
            if v == self.max {
                self.max = self.prev_present(v - 1);
            }
        }
        Delta { changed: true, bounds }
    }

    /// Removes every value in `lo..=hi`.
    pub fn remove_range(&mut self, lo: i64, hi: i64) -> Delta {
        if self.size == 0 || lo > hi || hi < self.min || lo > self.max {
            return Delta::NONE;
        }
        if lo <= self.min {
            return self.set_min(hi.saturating_add(1));
        }
        if hi >= self.max {
            return self.set_max(lo - 1);
        }
        let mut delta = Delta::NONE;
        for v in lo..=hi {
            delta = delta.merge(self.remove(v));
        }
        delta
    }

    /// Removes every value below `lo`.
    pub fn set_min(&mut self, lo: i64) -> Delta {
        if self.size == 0 || lo <= self.min {
            return Delta::NONE;
        }
        if lo > self.max {
            self.clear();
            return Delta { changed: true, bounds: true };
        }
        let removed = (self.min..lo).filter(|&v| self.contains(v)).count();
        for v in self.min..lo {
            let k = (v - self.offset) as usize;
            self.words[k / 64] &= !(1 << (k % 64));
        }
        self.size -= removed;
        self.min = self.next_present(lo);
        Delta { changed: true, bounds: true }
    }

    /// Removes every value above `hi`.
    pub fn set_max(&mut self, hi: i64) -> Delta {
        if self.size == 0 || hi >= self.max {
            return Delta::NONE;
        }
        if hi < self.min {
            self.clear();
            return Delta { changed: true, bounds: true };
        }
        let removed = (hi + 1..=self.max).filter(|&v| self.contains(v)).count();
        for v in hi + 1..=self.max {
            let k = (v - self.offset) as usize;
            self.words[k / 64] &= !(1 << (k % 64));
        }
        self.size -= removed;
        self.max = self.prev_present(hi);
        Delta { changed: true, bounds: true }
    }

    /// Reduces the domain to `{v}`, or empties it when `v` is absent.
    pub fn assign(&mut self, v: i64) -> Delta {
        if !self.contains(v) {
            let changed = self.size > 0;
            self.clear();
            return Delta { changed, bounds: changed };
        }
        if self.size == 1 {
            return Delta::NONE;
        }
        let a = self.set_min(v);
        let b = self.set_max(v);
        a.merge(b)
    }

    /// Keeps only the values satisfying `keep`.
    pub fn retain<F: FnMut(i64) -> bool>(&mut self, mut keep: F) -> Delta {
        let doomed: Vec<i64> = self.iter().filter(|&v| !keep(v)).collect();
        doomed.into_iter().fold(Delta::NONE, |d, v| d.merge(self.remove(v)))
    }

    fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
        self.size = 0;
        self.min = 1;
        self.max = 0;
    }

    fn next_present(&self, from: i64) -> i64 {
        (from..=self.max).find(|&v| self.contains_raw(v)).unwrap_or(self.max)
    }

    fn prev_present(&self, from: i64) -> i64 {
        (self.min..=from).rev().find(|&v| self.contains_raw(v)).unwrap_or(self.min)
    }

    fn contains_raw(&self, v: i64) -> bool {
        let k = (v - self.offset) as usize;
        self.words[k / 64] >> (k % 64) & 1 == 1
    }
}

impl PartialEq for IntDomain {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.iter().eq(other.iter())
    }
}

impl Eq for IntDomain {}

impl fmt::Debug for IntDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for IntDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<i64> for IntDomain {
    fn from_iter<I: IntoIterator<Item = i64>>(iter: I) -> Self {
        IntDomain::from_values(iter)
    }
}
