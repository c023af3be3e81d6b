//! Fixed-universe bitmasks used for element sets and projection sets.

use std::cmp::Ordering;
use std::fmt;

macro_rules! bitset_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash)]
        pub struct $name {
            len: usize,
            words: Vec<u64>,
        }

        impl $name {
            pub fn empty(len: usize) -> Self {
                $name { len, words: vec![0; len.div_ceil(64)] }
            }

            pub fn full(len: usize) -> Self {
                let mut s = Self::empty(len);
                for i in 0..len {
                    s.insert(i);
                }
                s
            }

            pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, it: I) -> Self {
                let mut s = Self::empty(len);
                for i in it {
                    s.insert(i);
                }
                s
            }

            /// Size of the universe, not the number of members.
            pub fn universe(&self) -> usize {
                self.len
            }

            pub fn insert(&mut self, i: usize) -> bool {
                assert!(i < self.len, "index {i} outside universe of size {}", self.len);
                let (w, b) = (i / 64, i % 64);
                let fresh = self.words[w] & (1 << b) == 0;
                self.words[w] |= 1 << b;
                fresh
            }

            pub fn remove(&mut self, i: usize) {
                if i < self.len {
                    self.words[i / 64] &= !(1 << (i % 64));
                }
            }

            pub fn contains(&self, i: usize) -> bool {
                i < self.len && self.words[i / 64] & (1 << (i % 64)) != 0
            }

            pub fn count(&self) -> usize {
                self.words.iter().map(|w| w.count_ones() as usize).sum()
            }

            pub fn is_empty(&self) -> bool {
                self.words.iter().all(|&w| w == 0)
            }

            pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
                (0..self.len).filter(move |&i| self.contains(i))
            }

            pub fn union(&self, other: &Self) -> Self {
                self.zip_with(other, |a, b| a | b)
            }

            pub fn intersection(&self, other: &Self) -> Self {
                self.zip_with(other, |a, b| a & b)
            }

            pub fn difference(&self, other: &Self) -> Self {
                self.zip_with(other, |a, b| a & !b)
            }

            pub fn complement(&self) -> Self {
                Self::full(self.len).difference(self)
            }

            pub fn is_subset(&self, other: &Self) -> bool {
                self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
            }

            pub fn is_disjoint(&self, other: &Self) -> bool {
                self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
            }

            fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
                assert_eq!(self.len, other.len, "bitsets over different universes");
                $name { len: self.len, words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect() }
            }
        }

        /// Ordered as the integer whose binary digits are the mask.
        impl Ord for $name {
            fn cmp(&self, other: &Self) -> Ordering {
                self.len
                    .cmp(&other.len)
                    .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
            }
        }

        impl PartialOrd for $name {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_set().entries(self.iter()).finish()
            }
        }
    };
}

bitset_type!(
    /// A subset of the elements of a finite semigroup, by index.
    ElementSet
);

bitset_type!(
    /// A subset of the character spectrum: a projection of `C(X)`.
    ProjectionSet
);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a = ElementSet::from_indices(70, [1, 3, 65]);
        let b = ElementSet::from_indices(70, [3, 4]);
        assert_eq!(a.union(&b).iter().collect::<Vec<_>>(), vec![1, 3, 4, 65]);
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), vec![3]);
        assert_eq!(a.complement().count(), 67);
        assert!(ElementSet::from_indices(70, [3]).is_subset(&a));
    }

    #[test]
    fn ordering_is_numeric() {
        let low = ProjectionSet::from_indices(70, [0, 1, 2]);
        let high = ProjectionSet::from_indices(70, [66]);
        assert!(low < high);
        assert!(ProjectionSet::from_indices(4, [0]) < ProjectionSet::from_indices(4, [1]));
    }
}
