use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Sub};

use serde::de::{Error as _, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest vertex universe a [`VertexSet`] can address.
pub const MAX_VERTICES: usize = 128;

/// A set of vertex ids below [`MAX_VERTICES`], stored as a 128-bit mask.
///
/// The derived ordering compares the masks as integers, which is exactly the
/// colexicographic order on sets: the set holding the largest element of the
/// symmetric difference is the larger one.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(u128);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_bits(bits: u128) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    pub fn singleton(v: usize) -> Self {
        assert!(v < MAX_VERTICES, "vertex {v} out of range");
        VertexSet(1u128 << v)
    }

    /// `{lo, lo+1, ..., hi-1}`.
    pub fn range(lo: usize, hi: usize) -> Self {
        assert!(lo <= hi && hi <= MAX_VERTICES, "bad range {lo}..{hi}");
        if lo == hi {
            return VertexSet::EMPTY;
        }
        let width = hi - lo;
        let mask = if width == MAX_VERTICES {
            u128::MAX
        } else {
            (1u128 << width) - 1
        };
        VertexSet(mask << lo)
    }

    /// All vertices `0..n`.
    pub fn full(n: usize) -> Self {
        Self::range(0, n)
    }

    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) -> bool {
        let had = self.contains(v);
        *self = *self | VertexSet::singleton(v);
        !had
    }

    pub fn remove(&mut self, v: usize) -> bool {
        let had = self.contains(v);
        self.0 &= !(1u128 << v);
        had
    }

    #[inline]
    pub const fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    #[inline]
    pub const fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    #[inline]
    pub const fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    #[inline]
    pub const fn intersection_size(self, other: VertexSet) -> usize {
        (self.0 & other.0).count_ones() as usize
    }

    #[inline]
    pub const fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub const fn is_disjoint(self, other: VertexSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn min(self) -> Option<usize> {
        (!self.is_empty()).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn max(self) -> Option<usize> {
        (!self.is_empty()).then(|| 127 - self.0.leading_zeros() as usize)
    }

    /// One past the largest element, 0 for the empty set.
    pub fn upper_bound(self) -> usize {
        self.max().map_or(0, |m| m + 1)
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Every subset of `self`, in colex order (the empty set first).
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl<'a> FromIterator<&'a usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = &'a usize>>(iter: I) -> Self {
        iter.into_iter().copied().collect()
    }
}

impl BitOr for VertexSet {
    type Output = VertexSet;
    fn bitor(self, rhs: VertexSet) -> VertexSet {
        self.union(rhs)
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    fn bitand(self, rhs: VertexSet) -> VertexSet {
        self.intersection(rhs)
    }
}

impl BitXor for VertexSet {
    type Output = VertexSet;
    fn bitxor(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 ^ rhs.0)
    }
}

impl Sub for VertexSet {
    type Output = VertexSet;
    fn sub(self, rhs: VertexSet) -> VertexSet {
        self.difference(rhs)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Ascending iterator over the elements of a [`VertexSet`].
#[derive(Clone)]
pub struct Iter(u128);

impl Iterator for Iter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

/// Iterator over all subsets of a mask (Gosper-free "subtract and mask" walk).
pub struct Subsets {
    mask: u128,
    next: Option<u128>,
}

impl Iterator for Subsets {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            Some((cur | !self.mask).wrapping_add(1) & self.mask)
        };
        Some(VertexSet(cur))
    }
}

/// All `k`-element subsets of `{0, ..., n-1}` in colex order.
pub fn k_subsets(n: usize, k: usize) -> KSubsets {
    assert!(n <= MAX_VERTICES);
    KSubsets {
        n,
        next: (k <= n).then(|| VertexSet::range(0, k).0),
    }
}

/// All `k`-element subsets of a given ground set, in colex order of the
/// ground set's elements.
pub fn k_subsets_of(ground: VertexSet, k: usize) -> impl Iterator<Item = VertexSet> {
    let elems = ground.to_vec();
    k_subsets(elems.len(), k).map(move |idx| idx.iter().map(|i| elems[i]).collect())
}

pub struct KSubsets {
    n: usize,
    next: Option<u128>,
}

impl Iterator for KSubsets {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            // Gosper's hack; the carry out of bit n-1 marks exhaustion.
            let low = cur & cur.wrapping_neg();
            let (ripple, overflow) = cur.overflowing_add(low);
            if overflow || (self.n < MAX_VERTICES && ripple >> self.n != 0) {
                None
            } else {
                let ones = ((cur ^ ripple) >> 2) / low;
                Some(ripple | ones)
            }
        };
        Some(VertexSet(cur))
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct SetVisitor;

        impl<'de> Visitor<'de> for SetVisitor {
            type Value = VertexSet;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a list of distinct vertex ids below {MAX_VERTICES}")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<VertexSet, A::Error> {
                let mut s = VertexSet::EMPTY;
                while let Some(v) = seq.next_element::<usize>()? {
                    if v >= MAX_VERTICES {
                        return Err(A::Error::custom(format!(
                            "vertex {v} exceeds the {MAX_VERTICES}-vertex capacity"
                        )));
                    }
                    if !s.insert(v) {
                        return Err(A::Error::custom(format!("vertex {v} repeated")));
                    }
                }
                Ok(s)
            }
        }

        deserializer.deserialize_seq(SetVisitor)
    }
}
