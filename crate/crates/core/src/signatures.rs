//! Index-list combinatorics and the diagonal space-time metric.
//!
//! Basis blades are named by strictly increasing index lists. With at most
//! [`MAX_DIM`] basis vectors every list fits a 16-bit mask, so set algebra
//! (union, complement, containment) is bitwise. Permutation signs of merged
//! lists come from counting inversions.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported number of space-time dimensions `k + n`.
pub const MAX_DIM: usize = 16;

/// A canonical (strictly increasing) list of basis indices naming a blade.
///
/// Stored as a bitmask; bit `i` set means index `i` is in the list. The empty
/// list is the scalar blade.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct IndexList(u16);

impl IndexList {
    pub const EMPTY: IndexList = IndexList(0);

    /// Builds a list from indices that must already be strictly increasing.
    pub fn new(indices: &[usize]) -> Result<Self> {
        let mut mask = 0u16;
        let mut prev: Option<usize> = None;
        for &i in indices {
            if i >= MAX_DIM {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    dim: MAX_DIM,
                });
            }
            if prev.is_some_and(|p| p >= i) {
                return Err(Error::NonCanonicalIndices(indices.to_vec()));
            }
            mask |= 1 << i;
            prev = Some(i);
        }
        Ok(IndexList(mask))
    }

    pub const fn from_mask(mask: u16) -> Self {
        IndexList(mask)
    }

    pub fn single(i: usize) -> Self {
        assert!(i < MAX_DIM, "index {i} exceeds MAX_DIM");
        IndexList(1 << i)
    }

    pub const fn mask(self) -> u16 {
        self.0
    }

    /// Number of indices, i.e. the grade of the blade.
    pub const fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_DIM && self.0 & (1 << i) != 0
    }

    pub fn is_subset_of(self, other: IndexList) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: IndexList) -> bool {
        self.0 & other.0 == 0
    }

    /// Set union; the merged list is sorted by construction.
    pub fn union(self, other: IndexList) -> IndexList {
        IndexList(self.0 | other.0)
    }

    /// `self \ other`.
    pub fn difference(self, other: IndexList) -> IndexList {
        IndexList(self.0 & !other.0)
    }

    pub fn with(self, i: usize) -> IndexList {
        self.union(IndexList::single(i))
    }

    pub fn without(self, i: usize) -> IndexList {
        self.difference(IndexList::single(i))
    }

    /// Largest index plus one, or 0 for the empty list.
    pub fn bound(self) -> usize {
        MAX_DIM - self.0.leading_zeros() as usize
    }

    /// All lists with indices drawn from `0..dim`, ordered by grade.
    pub fn all(dim: usize) -> Vec<IndexList> {
        assert!(dim <= MAX_DIM);
        let mut v: Vec<IndexList> = (0..(1u32 << dim)).map(|m| IndexList(m as u16)).collect();
        v.sort();
        v
    }

    /// All lists of exactly `grade` indices drawn from `0..dim`.
    pub fn of_grade(dim: usize, grade: usize) -> Vec<IndexList> {
        IndexList::all(dim)
            .into_iter()
            .filter(|l| l.grade() == grade)
            .collect()
    }
}

impl Ord for IndexList {
    /// Grade first, then lexicographic on the ascending index sequence.
    fn cmp(&self, other: &Self) -> Ordering {
        self.grade()
            .cmp(&other.grade())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for IndexList {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for IndexList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IndexList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ")")
    }
}

/// A sorted list together with the sign of the sorting permutation.
///
/// `sign == 0` (and `list == None`) when the source sequence had a repeated
/// index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignedList {
    pub list: Option<IndexList>,
    pub sign: i8,
}

impl SignedList {
    pub const ZERO: SignedList = SignedList {
        list: None,
        sign: 0,
    };
}

/// Sorts `seq` ascending by merge sort and returns the number of inversions
/// (pairs `a < b` with `seq[a] > seq[b]`). Equal values are not inversions.
pub fn count_inversions(seq: &[usize]) -> (Vec<usize>, u64) {
    fn merge_sort(v: &mut [usize], buf: &mut Vec<usize>) -> u64 {
        let n = v.len();
        if n < 2 {
            return 0;
        }
        let mid = n / 2;
        let mut inv = merge_sort(&mut v[..mid], buf) + merge_sort(&mut v[mid..], buf);
        buf.clear();
        let (mut i, mut j) = (0, mid);
        while i < mid && j < n {
            if v[j] < v[i] {
                // every remaining element of the left run jumps over v[j]
                inv += (mid - i) as u64;
                buf.push(v[j]);
                j += 1;
            } else {
                buf.push(v[i]);
                i += 1;
            }
        }
        buf.extend_from_slice(&v[i..mid]);
        buf.extend_from_slice(&v[j..n]);
        v.copy_from_slice(buf);
        inv
    }

    let mut v = seq.to_vec();
    let mut buf = Vec::with_capacity(v.len());
    let inv = merge_sort(&mut v, &mut buf);
    (v, inv)
}

/// Sorts an arbitrary index sequence and returns the permutation sign.
///
/// Repeated indices give sign 0. Panics if an index is `>= MAX_DIM`.
pub fn sort_count(seq: &[usize]) -> SignedList {
    let (sorted, inv) = count_inversions(seq);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return SignedList::ZERO;
    }
    let list = IndexList::new(&sorted).expect("sort_count: index exceeds MAX_DIM");
    SignedList {
        list: Some(list),
        sign: if inv % 2 == 0 { 1 } else { -1 },
    }
}

/// `ε(I,J)` and `σ(I,J)`: the sorted concatenation of `I` and `J` and the
/// parity of the sorting permutation; zero when the lists overlap.
pub fn merge_eps_sigma(i: IndexList, j: IndexList) -> SignedList {
    if !i.is_disjoint(j) {
        return SignedList::ZERO;
    }
    // Both runs are sorted, so the inversions of (I,J) are the pairs (a in I,
    // b in J) with a > b.
    let mut inv = 0u32;
    for b in j.iter() {
        let above = if b + 1 >= MAX_DIM {
            0
        } else {
            i.mask() & !((1u16 << (b + 1)) - 1)
        };
        inv += above.count_ones();
    }
    SignedList {
        list: Some(i.union(j)),
        sign: if inv.is_multiple_of(2) { 1 } else { -1 },
    }
}

/// `σ(I,J)` alone.
pub fn sigma(i: IndexList, j: IndexList) -> i8 {
    merge_eps_sigma(i, j).sign
}

/// Sign of reversing a list of length `len`: `(-1)^{len(len-1)/2}`.
pub fn reversal_sign(len: usize) -> i8 {
    if (len * len.saturating_sub(1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The `(k, n)` space-time: `k` time dimensions (metric −1) followed by `n`
/// space dimensions (metric +1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SignatureRepr", into = "SignatureRepr")]
pub struct Signature {
    k: usize,
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct SignatureRepr {
    k: usize,
    n: usize,
}

impl TryFrom<SignatureRepr> for Signature {
    type Error = Error;
    fn try_from(r: SignatureRepr) -> Result<Self> {
        Signature::new(r.k, r.n)
    }
}

impl From<Signature> for SignatureRepr {
    fn from(s: Signature) -> Self {
        SignatureRepr { k: s.k, n: s.n }
    }
}

impl Signature {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        let d = k + n;
        if d == 0 || d > MAX_DIM {
            return Err(Error::InvalidSignature { k, n, max: MAX_DIM });
        }
        Ok(Signature { k, n })
    }

    /// Euclidean 3-space, `(0, 3)`.
    pub fn euclidean3() -> Self {
        Signature { k: 0, n: 3 }
    }

    /// Minkowski space-time, `(1, 3)`.
    pub fn minkowski() -> Self {
        Signature { k: 1, n: 3 }
    }

    pub const fn time_dims(self) -> usize {
        self.k
    }

    pub const fn space_dims(self) -> usize {
        self.n
    }

    pub const fn dim(self) -> usize {
        self.k + self.n
    }

    /// `Δ_ii`: −1 for time indices, +1 for space indices.
    pub fn metric(self, i: usize) -> i8 {
        debug_assert!(i < self.dim());
        if i < self.k {
            -1
        } else {
            1
        }
    }

    /// `Δ_{I,I}`, the product of `Δ_ii` over `i ∈ I`.
    pub fn delta(self, list: IndexList) -> i8 {
        let time_mask = ((1u32 << self.k) - 1) as u16;
        if (list.mask() & time_mask).count_ones().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// The list of all indices `0..k+n`.
    pub fn full(self) -> IndexList {
        IndexList::from_mask(((1u32 << self.dim()) - 1) as u16)
    }

    pub fn contains(self, list: IndexList) -> bool {
        list.bound() <= self.dim()
    }

    pub fn check(self, list: IndexList) -> Result<()> {
        if self.contains(list) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: list.bound() - 1,
                dim: self.dim(),
            })
        }
    }

    /// `Iᶜ`: the ascending list of indices of `0..k+n` not in `I`.
    pub fn complement(self, list: IndexList) -> Result<IndexList> {
        self.check(list)?;
        Ok(self.full().difference(list))
    }

    /// All canonical blades of this signature, ordered by grade.
    pub fn blades(self) -> Vec<IndexList> {
        IndexList::all(self.dim())
    }

    /// Every valid signature with `1 <= k + n <= max_dim`.
    pub fn all_up_to(max_dim: usize) -> Vec<Signature> {
        (1..=max_dim.min(MAX_DIM))
            .flat_map(|d| (0..=d).map(move |k| Signature { k, n: d - k }))
            .collect()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.n)
    }
}

impl std::str::FromStr for Signature {
    type Err = Error;

    /// Parses `"K,N"` (parentheses optional).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let bad = || Error::Invalid(format!("signature must look like K,N; got {s:?}"));
        let (k, n) = t.split_once(',').ok_or_else(bad)?;
        let k = k.trim().parse().map_err(|_| bad())?;
        let n = n.trim().parse().map_err(|_| bad())?;
        Signature::new(k, n)
    }
}

/// Free-function form of [`Signature::complement`].
pub fn complement(list: IndexList, sig: Signature) -> Result<IndexList> {
    sig.complement(list)
}

/// Free-function form of [`Signature::delta`].
pub fn delta(list: IndexList, sig: Signature) -> i8 {
    sig.delta(list)
}
