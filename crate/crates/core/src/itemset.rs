//! Subsets of the ground set `{0, .., d-1}` stored as a little-endian bit vector.
//!
//! Sets up to 128 items live inline; larger ground sets spill to the heap. The
//! word vector is kept trimmed (no trailing zero words) so that derived
//! equality and hashing are structural.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

const WORD: usize = 64;

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ItemSet {
    words: SmallVec<[u64; 2]>,
}

impl ItemSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The full ground set `{0, .., d-1}`.
    pub fn full(d: usize) -> Self {
        let mut words: SmallVec<[u64; 2]> = SmallVec::from_elem(u64::MAX, d / WORD);
        if !d.is_multiple_of(WORD) {
            words.push((1u64 << (d % WORD)) - 1);
        }
        let mut s = Self { words };
        s.trim();
        s
    }

    /// Builds a set from the low bits of `bits` (bit `i` set means item `i` present).
    pub fn from_bits(bits: u64) -> Self {
        let mut s = Self {
            words: SmallVec::from_elem(bits, 1),
        };
        s.trim();
        s
    }

    pub fn from_items<I: IntoIterator<Item = usize>>(items: I) -> Self {
        let mut s = Self::empty();
        for i in items {
            s.insert(i);
        }
        s
    }

    /// The set as a single word, if every member is below 64.
    pub fn bits(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn contains(&self, item: usize) -> bool {
        self.words
            .get(item / WORD)
            .is_some_and(|w| w & (1 << (item % WORD)) != 0)
    }

    pub fn insert(&mut self, item: usize) {
        let idx = item / WORD;
        if idx >= self.words.len() {
            self.words.resize(idx + 1, 0);
        }
        self.words[idx] |= 1 << (item % WORD);
    }

    pub fn remove(&mut self, item: usize) {
        if let Some(w) = self.words.get_mut(item / WORD) {
            *w &= !(1 << (item % WORD));
            self.trim();
        }
    }

    pub fn with(&self, item: usize) -> Self {
        let mut s = self.clone();
        s.insert(item);
        s
    }

    pub fn without(&self, item: usize) -> Self {
        let mut s = self.clone();
        s.remove(item);
        s
    }

    pub fn union(&self, other: &Self) -> Self {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, o) in words.iter_mut().zip(short.words.iter()) {
            *w |= o;
        }
        Self { words }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut s = Self {
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(a, b)| a & b)
                .collect(),
        };
        s.trim();
        s
    }

    /// `[d] \ self`. Members `>= d` are dropped.
    pub fn complement(&self, d: usize) -> Self {
        let full = Self::full(d);
        let mut s = Self {
            words: full
                .words
                .iter()
                .enumerate()
                .map(|(k, f)| f & !self.words.get(k).copied().unwrap_or(0))
                .collect(),
        };
        s.trim();
        s
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(k, w)| w & !other.words.get(k).copied().unwrap_or(0) == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Largest member, if any.
    pub fn max_item(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * WORD + (WORD - 1 - last.leading_zeros() as usize))
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let bit = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + bit);
            }
            self.idx += 1;
            self.cur = *self.words.get(self.idx)?;
        }
    }
}

impl<'a> IntoIterator for &'a ItemSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl FromIterator<usize> for ItemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::from_items(iter)
    }
}

impl fmt::Display for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Serialized as the ascending member list.
impl Serialize for ItemSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ItemSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let items = Vec::<usize>::deserialize(deserializer)?;
        Ok(Self::from_items(items))
    }
}
