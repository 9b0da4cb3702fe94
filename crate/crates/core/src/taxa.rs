//! Taxon naming and compact taxon sets.

use std::collections::HashMap;
use std::fmt;

/// Dense identifier of a taxon (species label) within a [`TaxonTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaxonId(pub u32);

impl TaxonId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for TaxonId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Bidirectional map between label strings and dense taxon ids.
///
/// Ids are handed out in order of first appearance and never change, so a
/// table built while reading a profile can be reused for every tree derived
/// from it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TaxonTable {
    names: Vec<String>,
    index: HashMap<String, TaxonId>,
}

impl TaxonTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a table from names in the given order. Duplicates are merged.
    pub fn from_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut table = Self::new();
        for name in names {
            table.intern(name.as_ref());
        }
        table
    }

    /// Returns the id for `name`, allocating a fresh one if needed.
    pub fn intern(&mut self, name: &str) -> TaxonId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = TaxonId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<TaxonId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: TaxonId) -> &str {
        &self.names[id.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = TaxonId> + '_ {
        (0..self.names.len() as u32).map(TaxonId)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// A set of taxon ids packed into 64-bit words.
///
/// Trailing zero words are always trimmed, so two sets with the same members
/// compare equal (and hash equally) regardless of the universe they were
/// built over.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaxonSet {
    words: Vec<u64>,
}

impl TaxonSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(id: TaxonId) -> Self {
        let mut s = Self::new();
        s.insert(id);
        s
    }

    pub fn insert(&mut self, id: TaxonId) {
        let (w, b) = (id.index() >> 6, id.index() & 63);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << b;
    }

    pub fn remove(&mut self, id: TaxonId) {
        let (w, b) = (id.index() >> 6, id.index() & 63);
        if w < self.words.len() {
            self.words[w] &= !(1 << b);
            self.trim();
        }
    }

    pub fn contains(&self, id: TaxonId) -> bool {
        let (w, b) = (id.index() >> 6, id.index() & 63);
        self.words.get(w).is_some_and(|x| x >> b & 1 == 1)
    }

    pub fn union_with(&mut self, other: &TaxonSet) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn intersection(&self, other: &TaxonSet) -> TaxonSet {
        let mut words: Vec<u64> = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        trim_words(&mut words);
        TaxonSet { words }
    }

    /// Members of `universe` that are not in `self`.
    pub fn complement_in(&self, universe: &TaxonSet) -> TaxonSet {
        let mut words: Vec<u64> = universe
            .words
            .iter()
            .enumerate()
            .map(|(i, u)| u & !self.words.get(i).copied().unwrap_or(0))
            .collect();
        trim_words(&mut words);
        TaxonSet { words }
    }

    pub fn is_subset(&self, other: &TaxonSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn first(&self) -> Option<TaxonId> {
        self.words
            .iter()
            .enumerate()
            .find_map(|(i, &w)| (w != 0).then(|| TaxonId((i * 64 + w.trailing_zeros() as usize) as u32)))
    }

    pub fn iter(&self) -> impl Iterator<Item = TaxonId> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros();
                rest &= rest - 1;
                Some(TaxonId((i * 64) as u32 + b))
            })
        })
    }

    fn trim(&mut self) {
        trim_words(&mut self.words);
    }
}

fn trim_words(words: &mut Vec<u64>) {
    while words.last() == Some(&0) {
        words.pop();
    }
}

impl FromIterator<TaxonId> for TaxonSet {
    fn from_iter<I: IntoIterator<Item = TaxonId>>(iter: I) -> Self {
        let mut s = TaxonSet::new();
        for id in iter {
            s.insert(id);
        }
        s
    }
}

impl fmt::Debug for TaxonSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|t| t.0)).finish()
    }
}
