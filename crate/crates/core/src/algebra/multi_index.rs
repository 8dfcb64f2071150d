use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// A symmetric multi-index Λ of base derivatives, stored as a multiplicity map.
///
/// Entries are kept sorted by base index and never carry a zero multiplicity,
/// so two multi-indices denoting the same multiset compare equal.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    counts: SmallVec<[(u8, u8); 4]>,
}

impl MultiIndex {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(lambda: usize) -> Self {
        Self::empty().with_index(lambda)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices
            .into_iter()
            .fold(Self::empty(), |acc, lambda| acc.with_index(lambda))
    }

    /// |Λ|, the derivative order.
    pub fn order(&self) -> usize {
        self.counts.iter().map(|&(_, m)| m as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn count(&self, lambda: usize) -> usize {
        self.counts
            .iter()
            .find(|&&(l, _)| l as usize == lambda)
            .map_or(0, |&(_, m)| m as usize)
    }

    /// `(base index, multiplicity)` pairs in ascending base-index order.
    pub fn counts(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts.iter().map(|&(l, m)| (l as usize, m as usize))
    }

    /// The multiset expanded into ascending indices, e.g. `{0,0,2}`.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts
            .iter()
            .flat_map(|&(l, m)| std::iter::repeat_n(l as usize, m as usize))
    }

    pub fn first_index(&self) -> Option<usize> {
        self.counts.first().map(|&(l, _)| l as usize)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.counts.last().map(|&(l, _)| l as usize)
    }

    /// λ+Λ.
    pub fn with_index(&self, lambda: usize) -> Self {
        let lambda = u8::try_from(lambda).expect("base index exceeds 255");
        let mut counts = self.counts.clone();
        match counts.binary_search_by_key(&lambda, |&(l, _)| l) {
            Ok(pos) => counts[pos].1 += 1,
            Err(pos) => counts.insert(pos, (lambda, 1)),
        }
        Self { counts }
    }

    /// Λ with one copy of λ removed, if λ ∈ Λ.
    pub fn without_index(&self, lambda: usize) -> Option<Self> {
        let pos = self
            .counts
            .iter()
            .position(|&(l, _)| l as usize == lambda)?;
        let mut counts = self.counts.clone();
        if counts[pos].1 == 1 {
            counts.remove(pos);
        } else {
            counts[pos].1 -= 1;
        }
        Some(Self { counts })
    }

    /// Multiset union Σ+Λ.
    pub fn union(&self, other: &MultiIndex) -> Self {
        let mut out = self.clone();
        for (l, m) in other.counts() {
            for _ in 0..m {
                out = out.with_index(l);
            }
        }
        out
    }

    pub fn contains(&self, sub: &MultiIndex) -> bool {
        sub.counts().all(|(l, m)| self.count(l) >= m)
    }

    /// `self − sub` when `sub ⊆ self`.
    pub fn difference(&self, sub: &MultiIndex) -> Option<Self> {
        if !self.contains(sub) {
            return None;
        }
        let counts = self
            .counts
            .iter()
            .filter_map(|&(l, m)| {
                let rest = m as usize - sub.count(l as usize);
                (rest > 0).then_some((l, rest as u8))
            })
            .collect();
        Some(Self { counts })
    }

    /// Number of ways `sub` embeds in `self` as a sub-multiset: Π_λ C(Λ_λ, sub_λ).
    pub fn embedding_weight(&self, sub: &MultiIndex) -> u64 {
        sub.counts()
            .map(|(l, m)| binomial(self.count(l) as u64, m as u64))
            .product()
    }

    /// Every sub-multiset of `self`, including ∅ and `self`.
    pub fn sub_multi_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::empty()];
        for (l, m) in self.counts() {
            let mut next = Vec::with_capacity(out.len() * (m + 1));
            for base in &out {
                let mut cur = base.clone();
                next.push(cur.clone());
                for _ in 0..m {
                    cur = cur.with_index(l);
                    next.push(cur.clone());
                }
            }
            out = next;
        }
        out
    }

    /// All multi-indices of exactly `order` over base indices `0..dim`.
    pub fn all_of_order(dim: usize, order: usize) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::empty()];
        for _ in 0..order {
            let mut next = Vec::new();
            for base in &out {
                let start = base.max_index().unwrap_or(0);
                for l in start..dim {
                    next.push(base.with_index(l));
                }
            }
            out = next;
        }
        out
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.indices().cmp(other.indices()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.indices().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}
