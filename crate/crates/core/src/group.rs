//! Finite abelian groups presented as direct sums of cyclic factors.
//!
//! Elements are addressed either by coordinate tuples ([`GroupElement`]) or by
//! their mixed-radix index: for factors `n_0, …, n_{k-1}` the element
//! `(c_0, …, c_{k-1})` has index `Σ c_i · Π_{j>i} n_j`. The last coordinate
//! varies fastest. Every serialized coloring and subset literal uses this order.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::subset::GroupSubset;

/// Default cap on the group order for subgroup enumeration.
pub const SUBGROUP_SEARCH_BOUND: usize = 1024;

/// Groups up to this order get a precomputed addition table.
const ADD_TABLE_MAX: usize = 512;

#[derive(Debug)]
struct GroupInner {
    orders: Vec<u64>,
    order: usize,
    strides: Vec<usize>,
    add_table: Option<Vec<u32>>,
    neg: Vec<u32>,
    double: Vec<u32>,
    subgroups: OnceLock<Vec<Vec<u64>>>,
}

/// A finite abelian group `Z/n_0 ⊕ … ⊕ Z/n_{k-1}`.
///
/// Cheap to clone; all clones share precomputed tables.
#[derive(Clone)]
pub struct FiniteAbelianGroup {
    inner: Arc<GroupInner>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn coordinates(&self) -> &[u64] {
        &self.coords
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = orders.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidFactor(bad));
        }
        let order = orders
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n as usize))
            .ok_or(Error::Capacity {
                order: usize::MAX,
                bound: u32::MAX as usize,
            })?;
        if order > u32::MAX as usize {
            return Err(Error::Capacity {
                order,
                bound: u32::MAX as usize,
            });
        }
        let mut strides = vec![1usize; orders.len()];
        for i in (0..orders.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * orders[i + 1] as usize;
        }
        let mut inner = GroupInner {
            orders,
            order,
            strides,
            add_table: None,
            neg: Vec::new(),
            double: Vec::new(),
            subgroups: OnceLock::new(),
        };
        inner.neg = (0..order)
            .map(|i| combine(&inner, i, i, |_, b, n| (n - b) % n) as u32)
            .collect();
        inner.double = (0..order)
            .map(|i| combine(&inner, i, i, |a, b, n| (a + b) % n) as u32)
            .collect();
        if order <= ADD_TABLE_MAX {
            let mut table = Vec::with_capacity(order * order);
            for i in 0..order {
                for j in 0..order {
                    table.push(combine(&inner, i, j, |a, b, n| (a + b) % n) as u32);
                }
            }
            inner.add_table = Some(table);
        }
        Ok(FiniteAbelianGroup {
            inner: Arc::new(inner),
        })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        if n == 1 {
            Self::trivial_result()
        } else {
            Self::new(vec![n])
        }
    }

    pub fn trivial() -> Self {
        Self::new(Vec::new()).expect("trivial group")
    }

    fn trivial_result() -> Result<Self> {
        Ok(Self::trivial())
    }

    /// Direct sum `self ⊕ other`, with `self`'s coordinates first.
    pub fn direct_sum(&self, other: &FiniteAbelianGroup) -> Result<Self> {
        let mut orders = self.inner.orders.clone();
        orders.extend_from_slice(&other.inner.orders);
        Self::new(orders)
    }

    pub fn cyclic_orders(&self) -> &[u64] {
        &self.inner.orders
    }

    pub fn order(&self) -> usize {
        self.inner.order
    }

    pub fn rank(&self) -> usize {
        self.inner.orders.len()
    }

    pub fn is_odd_order(&self) -> bool {
        self.inner.order % 2 == 1
    }

    /// The group literal, e.g. `"3,3"`; the trivial group prints as `"1"`.
    pub fn literal(&self) -> String {
        if self.inner.orders.is_empty() {
            return "1".to_string();
        }
        let parts: Vec<String> = self.inner.orders.iter().map(u64::to_string).collect();
        parts.join(",")
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.rank()],
        }
    }

    pub fn element(&self, coords: &[u64]) -> Result<GroupElement> {
        let e = GroupElement {
            coords: coords.to_vec(),
        };
        self.check(&e)?;
        Ok(e)
    }

    fn check(&self, x: &GroupElement) -> Result<()> {
        if x.coords.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: x.coords.len(),
            });
        }
        for (&c, &n) in x.coords.iter().zip(&self.inner.orders) {
            if c >= n {
                return Err(Error::CoordinateOutOfRange { value: c, order: n });
            }
        }
        Ok(())
    }

    pub fn index_of(&self, x: &GroupElement) -> Result<usize> {
        self.check(x)?;
        Ok(x.coords
            .iter()
            .zip(&self.inner.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum())
    }

    pub fn element_at(&self, index: usize) -> Result<GroupElement> {
        self.check_index(index)?;
        Ok(GroupElement {
            coords: coords_of(&self.inner, index),
        })
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.order() {
            Err(Error::IndexOutOfRange {
                index,
                order: self.order(),
            })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        let (i, j) = (self.index_of(x)?, self.index_of(y)?);
        self.element_at(self.add_idx(i, j))
    }

    /// `k · x`; negative `k` is allowed.
    pub fn scalar_mul(&self, k: i64, x: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        let coords = x
            .coords
            .iter()
            .zip(&self.inner.orders)
            .map(|(&c, &n)| (c as i128 * k as i128).rem_euclid(n as i128) as u64)
            .collect();
        Ok(GroupElement { coords })
    }

    /// The unique `y` with `2y = x`. Needs odd order.
    pub fn halve(&self, x: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        self.require_odd()?;
        let coords = x
            .coords
            .iter()
            .zip(&self.inner.orders)
            .map(|(&c, &n)| (c as u128 * (n as u128).div_ceil(2) % n as u128) as u64)
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn require_odd(&self) -> Result<()> {
        if self.is_odd_order() {
            Ok(())
        } else {
            Err(Error::OddOrderRequired(self.order()))
        }
    }

    #[inline]
    pub fn add_idx(&self, i: usize, j: usize) -> usize {
        match &self.inner.add_table {
            Some(t) => t[i * self.inner.order + j] as usize,
            None => combine(&self.inner, i, j, |a, b, n| (a + b) % n),
        }
    }

    #[inline]
    pub fn neg_idx(&self, i: usize) -> usize {
        self.inner.neg[i] as usize
    }

    #[inline]
    pub fn sub_idx(&self, i: usize, j: usize) -> usize {
        self.add_idx(i, self.neg_idx(j))
    }

    #[inline]
    pub fn double_idx(&self, i: usize) -> usize {
        self.inner.double[i] as usize
    }

    pub fn scalar_mul_idx(&self, k: i64, i: usize) -> usize {
        let coords = coords_of(&self.inner, i);
        coords
            .iter()
            .zip(&self.inner.orders)
            .zip(&self.inner.strides)
            .map(|((&c, &n), &s)| (c as i128 * k as i128).rem_euclid(n as i128) as usize * s)
            .sum()
    }

    pub fn halve_idx(&self, i: usize) -> Result<usize> {
        self.require_odd()?;
        let coords = coords_of(&self.inner, i);
        Ok(coords
            .iter()
            .zip(&self.inner.orders)
            .zip(&self.inner.strides)
            .map(|((&c, &n), &s)| (c * n.div_ceil(2) % n) as usize * s)
            .sum())
    }

    /// Additive order of the element with index `i`.
    pub fn element_order(&self, i: usize) -> usize {
        coords_of(&self.inner, i)
            .iter()
            .zip(&self.inner.orders)
            .map(|(&c, &n)| (n / gcd(c, n)) as usize)
            .fold(1, lcm)
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order()).any(|i| self.element_order(i) == self.order())
    }

    /// The subgroup generated by the given element indices.
    pub fn generated_subgroup(&self, generators: &[usize]) -> Result<Subgroup> {
        let mut set = GroupSubset::from_indices(self, [0])?;
        for &g in generators {
            self.check_index(g)?;
            let cyclic = cyclic_subgroup_bits(self, g);
            set = set.minkowski_sum(&cyclic)?;
        }
        Ok(Subgroup::from_closed(set))
    }

    /// All subgroups, sorted by size then by canonical member list.
    pub fn subgroups(&self) -> Result<Vec<Subgroup>> {
        self.enumerate_subgroups(SUBGROUP_SEARCH_BOUND)
    }

    pub fn enumerate_subgroups(&self, bound: usize) -> Result<Vec<Subgroup>> {
        if self.order() > bound {
            return Err(Error::Capacity {
                order: self.order(),
                bound,
            });
        }
        let words = self
            .inner
            .subgroups
            .get_or_init(|| enumerate_by_joins(self));
        Ok(words
            .iter()
            .map(|w| Subgroup::from_closed(GroupSubset::from_words(self, w.clone())))
            .collect())
    }

    /// Proper subgroups in enumeration order.
    pub fn proper_subgroups(&self) -> Result<Vec<Subgroup>> {
        let n = self.order();
        Ok(self
            .subgroups()?
            .into_iter()
            .filter(|h| h.order() < n)
            .collect())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_closed(GroupSubset::from_indices(self, [0]).expect("identity"))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_closed(GroupSubset::full(self))
    }
}

fn coords_of(inner: &GroupInner, mut index: usize) -> Vec<u64> {
    let mut coords = vec![0u64; inner.orders.len()];
    for (c, &s) in coords.iter_mut().zip(&inner.strides) {
        *c = (index / s) as u64;
        index %= s;
    }
    coords
}

fn combine(inner: &GroupInner, i: usize, j: usize, op: impl Fn(u64, u64, u64) -> u64) -> usize {
    let a = coords_of(inner, i);
    let b = coords_of(inner, j);
    a.iter()
        .zip(&b)
        .zip(&inner.orders)
        .zip(&inner.strides)
        .map(|(((&x, &y), &n), &s)| op(x, y, n) as usize * s)
        .sum()
}

fn cyclic_subgroup_bits(g: &FiniteAbelianGroup, x: usize) -> GroupSubset {
    let mut members = vec![0usize];
    let mut cur = x;
    while cur != 0 {
        members.push(cur);
        cur = g.add_idx(cur, x);
    }
    GroupSubset::from_indices(g, members).expect("indices in range")
}

/// Cyclic subgroups first, then close under pairwise joins `H + K` until no new
/// subgroup appears.
fn enumerate_by_joins(g: &FiniteAbelianGroup) -> Vec<Vec<u64>> {
    let mut found: Vec<GroupSubset> = Vec::new();
    for x in 0..g.order() {
        let c = cyclic_subgroup_bits(g, x);
        if !found.contains(&c) {
            found.push(c);
        }
    }
    let mut frontier_start = 0;
    loop {
        let len = found.len();
        let mut fresh = Vec::new();
        for i in 0..len {
            for j in frontier_start.max(i + 1)..len {
                let join = found[i]
                    .minkowski_sum(&found[j])
                    .expect("nonempty subgroups");
                if !found.contains(&join) && !fresh.contains(&join) {
                    fresh.push(join);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        frontier_start = len;
        found.extend(fresh);
    }
    let mut keyed: Vec<(usize, Vec<usize>, GroupSubset)> = found
        .into_iter()
        .map(|s| (s.len(), s.indices(), s))
        .collect();
    keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    keyed
        .into_iter()
        .map(|(_, _, s)| s.words().to_vec())
        .collect()
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a as u64, b as u64) as usize * b
}

impl PartialEq for FiniteAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.orders == other.inner.orders
    }
}

impl Eq for FiniteAbelianGroup {}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteAbelianGroup({})", self.literal())
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.orders.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.inner.orders.iter().map(|n| format!("Z/{n}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FromStr for FiniteAbelianGroup {
    type Err = Error;

    /// Parses a comma-separated factor list such as `"9"` or `"3,2,2"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Self::trivial());
        }
        let orders = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad factor order {t:?} in group {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(orders)
    }
}

/// A subgroup, kept as its member bitset inside the parent group.
#[derive(Clone, PartialEq, Eq)]
pub struct Subgroup {
    set: GroupSubset,
}

impl Subgroup {
    fn from_closed(set: GroupSubset) -> Self {
        debug_assert!(is_closed(&set));
        Subgroup { set }
    }

    /// Validates identity, closure under addition and negation, and Lagrange.
    pub fn from_subset(set: GroupSubset) -> Result<Self> {
        if !set.contains(0) {
            return Err(Error::NotSubgroup("missing identity".into()));
        }
        if !is_closed(&set) {
            return Err(Error::NotSubgroup(format!(
                "{{{}}} is not closed under addition",
                join_indices(&set.indices())
            )));
        }
        if !set.group().order().is_multiple_of(set.len()) {
            return Err(Error::NotSubgroup("order does not divide |G|".into()));
        }
        Ok(Subgroup { set })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.set.group()
    }

    pub fn order(&self) -> usize {
        self.set.len()
    }

    pub fn index(&self) -> usize {
        self.group().order() / self.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_proper(&self) -> bool {
        self.order() < self.group().order()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.set.contains(i)
    }

    pub fn members(&self) -> Vec<usize> {
        self.set.indices()
    }

    pub fn as_subset(&self) -> &GroupSubset {
        &self.set
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.set.is_subset_of(&other.set)
    }

    /// Cosets in order of their least element.
    pub fn cosets(&self) -> Vec<GroupSubset> {
        self.quotient().cosets
    }

    pub fn quotient(&self) -> Quotient {
        let g = self.group();
        let n = g.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        let mut cosets = Vec::new();
        for x in 0..n {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let c = self.set.translate(x);
            for y in c.iter() {
                coset_of[y] = reps.len();
            }
            reps.push(x);
            cosets.push(c);
        }
        Quotient {
            subgroup: self.clone(),
            coset_of,
            reps,
            cosets,
        }
    }
}

fn is_closed(set: &GroupSubset) -> bool {
    let g = set.group();
    let members = set.indices();
    set.contains(0)
        && members.iter().all(|&x| {
            set.contains(g.neg_idx(x)) && members.iter().all(|&y| set.contains(g.add_idx(x, y)))
        })
}

fn join_indices(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{{{}}}", join_indices(&self.members()))
    }
}

/// The quotient `G/H`, with cosets numbered by their least element.
#[derive(Debug, Clone)]
pub struct Quotient {
    subgroup: Subgroup,
    coset_of: Vec<usize>,
    reps: Vec<usize>,
    cosets: Vec<GroupSubset>,
}

impl Quotient {
    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Index of the coset containing element `x`.
    pub fn project(&self, x: usize) -> usize {
        self.coset_of[x]
    }

    pub fn representative(&self, coset: usize) -> usize {
        self.reps[coset]
    }

    pub fn coset(&self, coset: usize) -> &GroupSubset {
        &self.cosets[coset]
    }

    pub fn cosets(&self) -> &[GroupSubset] {
        &self.cosets
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let g = self.subgroup.group();
        self.coset_of[g.add_idx(self.reps[a], self.reps[b])]
    }

    pub fn neg(&self, a: usize) -> usize {
        let g = self.subgroup.group();
        self.coset_of[g.neg_idx(self.reps[a])]
    }

    pub fn double(&self, a: usize) -> usize {
        self.add(a, a)
    }

    /// Image of a subset: the coset indices it meets.
    pub fn image(&self, set: &GroupSubset) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|x| self.coset_of[x]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}
