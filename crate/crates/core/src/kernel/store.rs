use super::domain::{Delta, IntDomain};
use crate::error::{Error, Result};

/// Handle to an integer decision variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub(crate) u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Handle to a backtrackable boolean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StoredBool(u32);

/// Raised when a domain is wiped out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inconsistency;

pub type PropResult = std::result::Result<(), Inconsistency>;

enum Undo {
    Domain(VarId, IntDomain),
    Bool(StoredBool, bool),
}

/// Undo log with one mark per decision level.
///
/// A variable's domain is copied at most once per level: the first write after
/// a `push` saves the old value, later writes at the same level only mutate.
#[derive(Default)]
struct Trail {
    entries: Vec<Undo>,
    marks: Vec<usize>,
    // Bumped on every push and pop so a saved stamp never matches a dead level.
    stamp: u64,
}

/// Variable domains, stored booleans and the trail that restores both.
pub struct Store {
    domains: Vec<IntDomain>,
    saved_at: Vec<u64>,
    bools: Vec<bool>,
    bool_saved_at: Vec<u64>,
    trail: Trail,
    events: Vec<(VarId, Delta)>,
}

impl Default for Store {
    fn default() -> Self {
        Self::new()
    }
}

impl Store {
    pub fn new() -> Self {
        Store {
            domains: Vec::new(),
            saved_at: Vec::new(),
            bools: Vec::new(),
            bool_saved_at: Vec::new(),
            trail: Trail { stamp: 1, ..Trail::default() },
            events: Vec::new(),
        }
    }

    pub fn new_var(&mut self, domain: IntDomain) -> Result<VarId> {
        if domain.is_empty() {
            return Err(Error::EmptyDomain);
        }
        self.domains.push(domain);
        self.saved_at.push(0);
        Ok(VarId(self.domains.len() as u32 - 1))
    }

    pub fn num_vars(&self) -> usize {
        self.domains.len()
    }

    pub fn new_bool(&mut self, value: bool) -> StoredBool {
        self.bools.push(value);
        self.bool_saved_at.push(0);
        StoredBool(self.bools.len() as u32 - 1)
    }

    pub fn get_bool(&self, b: StoredBool) -> bool {
        self.bools[b.0 as usize]
    }

    pub fn set_bool(&mut self, b: StoredBool, value: bool) {
        let k = b.0 as usize;
        if self.bools[k] == value {
            return;
        }
        if self.bool_saved_at[k] != self.trail.stamp {
            self.bool_saved_at[k] = self.trail.stamp;
            self.trail.entries.push(Undo::Bool(b, self.bools[k]));
        }
        self.bools[k] = value;
    }

    pub fn dom(&self, x: VarId) -> &IntDomain {
        &self.domains[x.index()]
    }

    pub fn min(&self, x: VarId) -> i64 {
        self.domains[x.index()].min()
    }

    pub fn max(&self, x: VarId) -> i64 {
        self.domains[x.index()].max()
    }

    pub fn size(&self, x: VarId) -> usize {
        self.domains[x.index()].size()
    }

    pub fn value(&self, x: VarId) -> Option<i64> {
        self.domains[x.index()].value()
    }

    pub fn is_fixed(&self, x: VarId) -> bool {
        self.domains[x.index()].is_fixed()
    }

    pub fn contains(&self, x: VarId, v: i64) -> bool {
        self.domains[x.index()].contains(v)
    }

    pub fn remove(&mut self, x: VarId, v: i64) -> PropResult {
        self.update(x, |d| d.remove(v))
    }

    /// Removes `lo..=hi` from the domain of `x`.
    pub fn remove_range(&mut self, x: VarId, lo: i64, hi: i64) -> PropResult {
        self.update(x, |d| d.remove_range(lo, hi))
    }

    pub fn set_min(&mut self, x: VarId, lo: i64) -> PropResult {
        self.update(x, |d| d.set_min(lo))
    }

    pub fn set_max(&mut self, x: VarId, hi: i64) -> PropResult {
        self.update(x, |d| d.set_max(hi))
    }

    pub fn assign(&mut self, x: VarId, v: i64) -> PropResult {
        self.update(x, |d| d.assign(v))
    }

    pub fn retain<F: FnMut(i64) -> bool>(&mut self, x: VarId, keep: F) -> PropResult {
        self.update(x, |d| d.retain(keep))
    }

    fn update<F: FnOnce(&mut IntDomain) -> Delta>(&mut self, x: VarId, op: F) -> PropResult {
        let k = x.index();
        if self.saved_at[k] != self.trail.stamp {
            // Cheap pre-check avoids cloning when the operation is a no-op.
            let mut probe = self.domains[k].clone();
            let delta = op(&mut probe);
            if !delta.changed {
                return Ok(());
            }
            self.saved_at[k] = self.trail.stamp;
            let old = std::mem::replace(&mut self.domains[k], probe);
            self.trail.entries.push(Undo::Domain(x, old));
            return self.after_change(x, delta);
        }
        let delta = op(&mut self.domains[k]);
        if !delta.changed {
            return Ok(());
        }
        self.after_change(x, delta)
    }

    fn after_change(&mut self, x: VarId, delta: Delta) -> PropResult {
        self.events.push((x, delta));
        if self.domains[x.index()].is_empty() {
            Err(Inconsistency)
        } else {
            Ok(())
        }
    }

    pub(crate) fn take_events(&mut self) -> Vec<(VarId, Delta)> {
        std::mem::take(&mut self.events)
    }

    pub(crate) fn clear_events(&mut self) {
        self.events.clear();
    }

    /// Current decision level; 0 at the root.
    pub fn level(&self) -> usize {
        self.trail.marks.len()
    }

    pub fn push_level(&mut self) {
        self.trail.marks.push(self.trail.entries.len());
        self.trail.stamp += 1;
    }

    /// Undoes every change made since the matching `push_level`.
    pub fn pop_level(&mut self) {
        let Some(mark) = self.trail.marks.pop() else {
            return;
        };
        while self.trail.entries.len() > mark {
            match self.trail.entries.pop().expect("trail underflow") {
                Undo::Domain(x, d) => self.domains[x.index()] = d,
                Undo::Bool(b, v) => self.bools[b.0 as usize] = v,
            }
        }
        self.trail.stamp += 1;
        self.events.clear();
    }

    pub fn pop_to(&mut self, level: usize) {
        while self.level() > level {
            self.pop_level();
        }
    }

    /// Copies every domain; used by tests and reporting.
    pub fn snapshot(&self) -> Vec<IntDomain> {
        self.domains.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_initial_domain_rejected() {
        let mut s = Store::new();
        assert!(s.new_var(IntDomain::empty()).is_err());
        let x = s.new_var(IntDomain::from_values([3, 4])).unwrap();
        assert_eq!((s.min(x), s.max(x)), (3, 4));
    }

    #[test]
    fn stored_bool_follows_levels() {
        let mut s = Store::new();
        let b = s.new_bool(true);
        s.push_level();
        s.set_bool(b, false);
        s.push_level();
        s.set_bool(b, true);
        s.set_bool(b, false);
        s.pop_level();
        assert!(!s.get_bool(b));
        s.pop_level();
        assert!(s.get_bool(b));
    }

    #[test]
    fn random_mutations_restore_bit_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let mut s = Store::new();
            let vars: Vec<VarId> = (0..6)
                .map(|_| {
                    let vals: Vec<i64> = (0..8).map(|_| rng.gen_range(-3..12)).collect();
                    s.new_var(IntDomain::from_values(vals)).unwrap()
                })
                .collect();
            let bools: Vec<StoredBool> = (0..4).map(|_| s.new_bool(rng.gen())).collect();
            let mut history = Vec::new();
            for _ in 0..rng.gen_range(1..6) {
                history.push((s.snapshot(), bools.iter().map(|b| s.get_bool(*b)).collect::<Vec<_>>()));
                s.push_level();
                for _ in 0..rng.gen_range(0..10) {
                    let x = vars[rng.gen_range(0..vars.len())];
                    let v = rng.gen_range(-3..12);
                    let _ = match rng.gen_range(0..5) {
                        0 => s.remove(x, v),
                        1 => s.set_min(x, v),
                        2 => s.set_max(x, v),
                        3 => s.remove_range(x, v, v + 2),
                        _ => s.assign(x, v),
                    };
                    let b = bools[rng.gen_range(0..bools.len())];
                    s.set_bool(b, rng.gen());
                }
            }
            while let Some((doms, bs)) = history.pop() {
                s.pop_level();
                assert_eq!(s.snapshot(), doms);
                assert_eq!(bools.iter().map(|b| s.get_bool(*b)).collect::<Vec<_>>(), bs);
            }
        }
    }
}
