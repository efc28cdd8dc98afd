//! Bitset-backed subsets of a finite abelian group.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, Subgroup};

/// A subset of a group, one bit per element index.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupSubset {
    group: FiniteAbelianGroup,
    words: Vec<u64>,
}

/// `S = {start, start + d, …, start + (|S|-1)d}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Progression {
    pub difference: usize,
    pub start: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlmostProgression {
    pub difference: usize,
    pub missing: usize,
}

fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

impl GroupSubset {
    pub fn empty(group: &FiniteAbelianGroup) -> Self {
        GroupSubset {
            group: group.clone(),
            words: vec![0; word_count(group.order())],
        }
    }

    pub fn full(group: &FiniteAbelianGroup) -> Self {
        let n = group.order();
        let mut words = vec![u64::MAX; word_count(n)];
        if !n.is_multiple_of(64) {
            *words.last_mut().unwrap() = (1u64 << (n % 64)) - 1;
        }
        GroupSubset {
            group: group.clone(),
            words,
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(
        group: &FiniteAbelianGroup,
        indices: I,
    ) -> Result<Self> {
        let mut s = Self::empty(group);
        for i in indices {
            group.check_index(i)?;
            s.insert(i);
        }
        Ok(s)
    }

    pub(crate) fn from_words(group: &FiniteAbelianGroup, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), word_count(group.order()));
        GroupSubset {
            group: group.clone(),
            words,
        }
    }

    pub fn from_predicate(group: &FiniteAbelianGroup, mut pred: impl FnMut(usize) -> bool) -> Self {
        let mut s = Self::empty(group);
        for i in 0..group.order() {
            if pred(i) {
                s.insert(i);
            }
        }
        s
    }

    /// Parses a comma-separated index list such as `"0,3,6"`.
    pub fn parse(group: &FiniteAbelianGroup, literal: &str) -> Result<Self> {
        let literal = literal.trim();
        if literal.is_empty() {
            return Ok(Self::empty(group));
        }
        let indices = literal
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad element index {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(group, indices)
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.group.order() && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.group.order()
    }

    /// Member indices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    fn same_parent(&self, other: &GroupSubset) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }

    fn zip_words(&self, other: &GroupSubset, op: impl Fn(u64, u64) -> u64) -> Result<Self> {
        self.same_parent(other)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| op(a, b))
            .collect();
        Ok(GroupSubset {
            group: self.group.clone(),
            words,
        })
    }

    pub fn union(&self, other: &GroupSubset) -> Result<Self> {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &GroupSubset) -> Result<Self> {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &GroupSubset) -> Result<Self> {
        self.zip_words(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Self {
        GroupSubset::full(&self.group)
            .difference(self)
            .expect("same parent")
    }

    pub fn is_subset_of(&self, other: &GroupSubset) -> bool {
        self.group == other.group
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &GroupSubset) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(&a, &b)| a & b == 0)
    }

    /// `S + g`.
    pub fn translate(&self, g: usize) -> Self {
        let n = self.group.order();
        if g == 0 {
            return self.clone();
        }
        if self.group.rank() == 1 && n <= 64 {
            let w = self.words[0];
            let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            let rotated = ((w << g) | (w >> (n - g))) & mask;
            return GroupSubset {
                group: self.group.clone(),
                words: vec![rotated],
            };
        }
        let mut out = GroupSubset::empty(&self.group);
        for x in self.iter() {
            out.insert(self.group.add_idx(x, g));
        }
        out
    }

    fn map(&self, f: impl Fn(usize) -> usize) -> Self {
        let mut out = GroupSubset::empty(&self.group);
        for x in self.iter() {
            out.insert(f(x));
        }
        out
    }

    /// `X + Y`. Both operands must be nonempty.
    pub fn minkowski_sum(&self, other: &GroupSubset) -> Result<Self> {
        self.same_parent(other)?;
        if self.is_empty() || other.is_empty() {
            return Err(Error::EmptyOperand);
        }
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = vec![0u64; self.words.len()];
        for x in small.iter() {
            for (acc, w) in words.iter_mut().zip(large.translate(x).words) {
                *acc |= w;
            }
        }
        Ok(GroupSubset {
            group: self.group.clone(),
            words,
        })
    }

    /// `-X`
    pub fn negate(&self) -> Self {
        self.map(|x| self.group.neg_idx(x))
    }

    /// `2·X`
    pub fn dilate2(&self) -> Self {
        self.map(|x| self.group.double_idx(x))
    }

    /// `k·X`
    pub fn dilate(&self, k: i64) -> Self {
        self.map(|x| self.group.scalar_mul_idx(k, x))
    }

    /// `X/2`, the preimage under doubling. Needs odd order.
    pub fn halve_set(&self) -> Result<Self> {
        self.group.require_odd()?;
        Ok(self.map(|x| self.group.halve_idx(x).expect("odd order")))
    }

    /// The stabilizer `{g : S + g = S}`.
    pub fn period(&self) -> Subgroup {
        let g = &self.group;
        let Some(s0) = self.first() else {
            return g.whole();
        };
        // Any period element g satisfies s0 + g ∈ S.
        let mut p = GroupSubset::empty(g);
        for s in self.iter() {
            let cand = g.sub_idx(s, s0);
            if self.translate(cand) == *self {
                p.insert(cand);
            }
        }
        Subgroup::from_subset(p).expect("stabilizers are subgroups")
    }

    /// `S + H = S`.
    pub fn is_h_periodic(&self, h: &Subgroup) -> Result<bool> {
        self.same_parent(h.as_subset())?;
        Ok(h.iter_members().all(|x| self.translate(x) == *self))
    }

    pub fn is_aperiodic(&self) -> bool {
        self.period().is_trivial()
    }

    /// Splits `S = S0 ∪ S1` with `S1` the union of the `H`-cosets inside `S`.
    /// Returns `None` unless `S0` lies in a single coset.
    pub fn quasiperiodic_decomposition(&self, h: &Subgroup) -> Result<Option<(Self, Self)>> {
        self.same_parent(h.as_subset())?;
        if h.is_trivial() {
            return Err(Error::TrivialSubgroup);
        }
        let q = h.quotient();
        let mut s1 = GroupSubset::empty(&self.group);
        for coset in q.cosets() {
            if coset.is_subset_of(self) {
                s1 = s1.union(coset)?;
            }
        }
        let s0 = self.difference(&s1)?;
        if q.image(&s0).len() <= 1 {
            Ok(Some((s0, s1)))
        } else {
            Ok(None)
        }
    }

    pub fn is_h_quasiperiodic(&self, h: &Subgroup) -> Result<bool> {
        Ok(self.quasiperiodic_decomposition(h)?.is_some())
    }

    /// Every `(d, start)` with `d ≠ 0` presenting `S` as a progression, by
    /// ascending `d`.
    pub fn progression_differences(&self) -> Vec<Progression> {
        let g = &self.group;
        let k = self.len();
        if k == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        for d in 1..g.order() {
            let ord = g.element_order(d);
            if ord < k {
                continue;
            }
            let start = if ord == k {
                // A full coset of <d>; start from its least element.
                self.first().expect("nonempty")
            } else {
                let mut starts = self.iter().filter(|&x| !self.contains(g.sub_idx(x, d)));
                match (starts.next(), starts.next()) {
                    (Some(s), None) => s,
                    _ => continue,
                }
            };
            let mut cur = start;
            let mut ok = true;
            for _ in 0..k {
                if !self.contains(cur) {
                    ok = false;
                    break;
                }
                cur = g.add_idx(cur, d);
            }
            if ok {
                out.push(Progression {
                    difference: d,
                    start,
                });
            }
        }
        out
    }

    /// The progression with the smallest difference index, if `S` is one.
    pub fn is_arithmetic_progression(&self) -> Option<Progression> {
        self.progression_differences().into_iter().next()
    }

    /// `(d, x)` with `x ∉ S` and `S ∪ {x}` a progression of difference `d`;
    /// smallest `d`, then smallest `x`.
    pub fn is_almost_progression(&self) -> Option<AlmostProgression> {
        let mut best: Option<AlmostProgression> = None;
        for x in 0..self.group.order() {
            if self.contains(x) {
                continue;
            }
            let mut ext = self.clone();
            ext.insert(x);
            if let Some(p) = ext.is_arithmetic_progression() {
                let cand = AlmostProgression {
                    difference: p.difference,
                    missing: x,
                };
                if best.is_none_or(|b| cand.difference < b.difference) {
                    best = Some(cand);
                }
            }
        }
        best
    }
}

impl Subgroup {
    pub(crate) fn iter_members(&self) -> impl Iterator<Item = usize> + '_ {
        self.as_subset().iter()
    }
}

impl fmt::Debug for GroupSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self)
    }
}

impl fmt::Display for GroupSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}
