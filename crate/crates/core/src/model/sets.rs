use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

pub type SetId = usize;

/// An append-only family of subsets of `[0, universe_size)` plus the scope
/// (selected subfamily) used by the union problem.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetSystem {
    universe_size: usize,
    sets: Vec<FixedBitSet>,
    scope: BTreeSet<SetId>,
}

impl SetSystem {
    pub fn new(universe_size: usize) -> Self {
        SetSystem {
            universe_size,
            sets: Vec::new(),
            scope: BTreeSet::new(),
        }
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    /// Sum of set sizes.
    pub fn total_size(&self) -> usize {
        self.sets.iter().map(|s| s.count_ones(..)).sum()
    }

    /// Appends a set and returns its id.
    pub fn push_set(&mut self, members: impl IntoIterator<Item = usize>) -> Result<SetId> {
        let mut bits = FixedBitSet::with_capacity(self.universe_size);
        for u in members {
            if u >= self.universe_size {
                return Err(Error::domain(format!(
                    "element {u} outside universe of size {}",
                    self.universe_size
                )));
            }
            bits.insert(u);
        }
        self.sets.push(bits);
        Ok(self.sets.len() - 1)
    }

    /// Appends the full universe as a set.
    pub fn push_universe(&mut self) -> SetId {
        let mut bits = FixedBitSet::with_capacity(self.universe_size);
        bits.insert_range(..);
        self.sets.push(bits);
        self.sets.len() - 1
    }

    pub(crate) fn check_set(&self, id: SetId) -> Result<()> {
        if id >= self.sets.len() {
            return Err(Error::domain(format!(
                "set {id} does not exist ({} sets)",
                self.sets.len()
            )));
        }
        Ok(())
    }

    /// Appends `X_i ∩ X_j` and returns its id.
    pub fn push_intersection(&mut self, i: SetId, j: SetId) -> Result<SetId> {
        self.check_set(i)?;
        self.check_set(j)?;
        let mut bits = self.sets[i].clone();
        bits.intersect_with(&self.sets[j]);
        self.sets.push(bits);
        Ok(self.sets.len() - 1)
    }

    /// Removes the most recently appended set.
    pub(crate) fn pop_set(&mut self) -> Result<()> {
        let id = self
            .sets
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::state("no set to remove"))?;
        if self.scope.contains(&id) {
            return Err(Error::state(format!("set {id} is in scope")));
        }
        self.sets.pop();
        Ok(())
    }

    pub fn contains(&self, id: SetId, u: usize) -> Result<bool> {
        self.check_set(id)?;
        if u >= self.universe_size {
            return Err(Error::domain(format!("element {u} outside universe")));
        }
        Ok(self.sets[id].contains(u))
    }

    pub fn is_empty_set(&self, id: SetId) -> Result<bool> {
        self.check_set(id)?;
        Ok(self.sets[id].is_clear())
    }

    pub fn members(&self, id: SetId) -> Result<Vec<usize>> {
        self.check_set(id)?;
        Ok(self.sets[id].ones().collect())
    }

    pub fn scope(&self) -> &BTreeSet<SetId> {
        &self.scope
    }

    pub fn add_to_scope(&mut self, id: SetId) -> Result<()> {
        self.check_set(id)?;
        if !self.scope.insert(id) {
            return Err(Error::state(format!("set {id} already in scope")));
        }
        Ok(())
    }

    pub fn remove_from_scope(&mut self, id: SetId) -> Result<()> {
        if !self.scope.remove(&id) {
            return Err(Error::state(format!("set {id} is not in scope")));
        }
        Ok(())
    }

    /// Whether the union of the scoped sets is the whole universe.
    pub fn scope_covers_universe(&self) -> bool {
        let mut acc = FixedBitSet::with_capacity(self.universe_size);
        for &id in &self.scope {
            acc.union_with(&self.sets[id]);
        }
        acc.count_ones(..) == self.universe_size
    }

    /// Canonical text form used for digests.
    pub fn to_text(&self) -> String {
        let mut out = format!("sets {} {}\n", self.universe_size, self.sets.len());
        for set in &self.sets {
            let members: Vec<String> = set.ones().map(|u| u.to_string()).collect();
            out.push_str(&members.join(" "));
            out.push('\n');
        }
        let scope: Vec<String> = self.scope.iter().map(|i| i.to_string()).collect();
        out.push_str(&format!("scope {}\n", scope.join(" ")));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intersection_appends_new_set() {
        let mut sys = SetSystem::new(4);
        sys.push_set([1, 2]).unwrap();
        sys.push_set([2, 3]).unwrap();
        let id = sys.push_intersection(0, 1).unwrap();
        assert_eq!(id, 2);
        assert_eq!(sys.members(2).unwrap(), vec![2]);
        assert!(!sys.is_empty_set(2).unwrap());
    }

    #[test]
    fn scope_union() {
        let mut sys = SetSystem::new(2);
        sys.push_set([0]).unwrap();
        sys.push_set([1]).unwrap();
        assert!(!sys.scope_covers_universe());
        sys.add_to_scope(0).unwrap();
        sys.add_to_scope(1).unwrap();
        assert!(sys.scope_covers_universe());
        assert!(sys.add_to_scope(1).is_err());
    }

    #[test]
    fn empty_universe_is_covered_by_nothing() {
        assert!(SetSystem::new(0).scope_covers_universe());
    }

    #[test]
    fn rejects_out_of_universe_members() {
        let mut sys = SetSystem::new(2);
        assert!(sys.push_set([2]).is_err());
    }
}
