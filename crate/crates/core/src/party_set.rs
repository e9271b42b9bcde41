//! Party identifiers and compact party sets.

use std::fmt;

/// Index of a party in its profile's roster.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PartyId(pub usize);

impl PartyId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Maximum roster size representable by a [`PartySet`].
pub const MAX_PARTIES: usize = 64;

/// A set of parties from a roster of at most [`MAX_PARTIES`] parties.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PartySet(u64);

impl PartySet {
    pub const fn empty() -> Self {
        PartySet(0)
    }

    /// The set `{0, .., m-1}`.
    pub fn full(m: usize) -> Self {
        assert!(m <= MAX_PARTIES);
        if m == MAX_PARTIES {
            PartySet(u64::MAX)
        } else {
            PartySet((1u64 << m) - 1)
        }
    }

    pub fn singleton(p: PartyId) -> Self {
        PartySet(1u64 << p.0)
    }

    pub const fn from_bits(bits: u64) -> Self {
        PartySet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, p: PartyId) -> bool {
        p.0 < MAX_PARTIES && self.0 & (1u64 << p.0) != 0
    }

    pub fn insert(&mut self, p: PartyId) {
        self.0 |= 1u64 << p.0;
    }

    pub fn remove(&mut self, p: PartyId) {
        self.0 &= !(1u64 << p.0);
    }

    pub fn with(self, p: PartyId) -> Self {
        PartySet(self.0 | (1u64 << p.0))
    }

    pub fn without(self, p: PartyId) -> Self {
        PartySet(self.0 & !(1u64 << p.0))
    }

    pub fn union(self, other: Self) -> Self {
        PartySet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        PartySet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        PartySet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Members in increasing index order.
    pub fn iter(self) -> impl Iterator<Item = PartyId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(PartyId(i))
            }
        })
    }

    /// Maps a set over a restricted roster back to the original roster, where
    /// the restricted roster consists of the members of `kept` in index order.
    pub fn expand_from(self, kept: PartySet) -> PartySet {
        let mut out = PartySet::empty();
        for (j, original) in kept.iter().enumerate() {
            if self.0 & (1u64 << j) != 0 {
                out.insert(original);
            }
        }
        out
    }

    /// Inverse of [`PartySet::expand_from`]; members outside `kept` are dropped.
    pub fn compress_into(self, kept: PartySet) -> PartySet {
        let mut out = PartySet::empty();
        for (j, original) in kept.iter().enumerate() {
            if self.contains(original) {
                out.insert(PartyId(j));
            }
        }
        out
    }
}

impl FromIterator<PartyId> for PartySet {
    fn from_iter<I: IntoIterator<Item = PartyId>>(iter: I) -> Self {
        let mut s = PartySet::empty();
        for p in iter {
            s.insert(p);
        }
        s
    }
}

impl fmt::Debug for PartySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|p| p.0)).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_algebra() {
        let s: PartySet = [PartyId(0), PartyId(3)].into_iter().collect();
        assert!(s.contains(PartyId(3)));
        assert!(!s.contains(PartyId(1)));
        assert_eq!(s.len(), 2);
        assert!(s.is_subset(PartySet::full(4)));
        assert_eq!(s.without(PartyId(0)), PartySet::singleton(PartyId(3)));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![PartyId(0), PartyId(3)]);
        assert_eq!(PartySet::full(64).len(), 64);
    }

    #[test]
    fn expand_and_compress_are_inverse() {
        let kept: PartySet = [PartyId(1), PartyId(4), PartyId(6)].into_iter().collect();
        let local = PartySet::from_bits(0b101);
        let global = local.expand_from(kept);
        assert_eq!(global, [PartyId(1), PartyId(6)].into_iter().collect());
        assert_eq!(global.compress_into(kept), local);
    }
}
