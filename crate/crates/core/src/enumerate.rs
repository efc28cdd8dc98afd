//! Exhaustive enumeration of rainbow-free colorings with three nonempty classes.
//!
//! Labels are assigned to elements in index order. After element `t` is
//! labelled, every AP(3) whose members are all among `0..=t` and whose largest
//! member is `t` is checked; a rainbow one kills the branch.

use std::sync::Arc;

use rayon::prelude::*;

use crate::coloring::{Color, ThreeColoring};
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;

pub const DEFAULT_MAX_ORDER: usize = 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Yield one representative per translation orbit: the lexicographically
    /// least label string among the translates.
    pub canonical_only: bool,
    /// Also quotient by the six label permutations.
    pub label_symmetry: bool,
    pub max_order: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            canonical_only: false,
            label_symmetry: false,
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

impl EnumerationOptions {
    pub fn canonical() -> Self {
        EnumerationOptions {
            canonical_only: true,
            ..Self::default()
        }
    }
}

/// Per element `t`, the pairs `(u, v)` with `u < v < t` such that `{u, v, t}`
/// is a non-degenerate AP(3) in some order.
struct Plan {
    group: FiniteAbelianGroup,
    partners: Vec<Vec<(u32, u32)>>,
}

impl Plan {
    fn new(group: &FiniteAbelianGroup) -> Self {
        let n = group.order();
        let mut partners = vec![Vec::new(); n];
        for (t, list) in partners.iter_mut().enumerate() {
            for u in 0..t {
                for v in (u + 1)..t {
                    let (dt, du, dv) = (
                        group.double_idx(t),
                        group.double_idx(u),
                        group.double_idx(v),
                    );
                    if group.add_idx(u, v) == dt
                        || group.add_idx(u, t) == dv
                        || group.add_idx(v, t) == du
                    {
                        list.push((u as u32, v as u32));
                    }
                }
            }
        }
        Plan {
            group: group.clone(),
            partners,
        }
    }

    #[inline]
    fn consistent(&self, labels: &[u8], t: usize) -> bool {
        let lt = 1u8 << labels[t];
        self.partners[t]
            .iter()
            .all(|&(u, v)| lt | (1 << labels[u as usize]) | (1 << labels[v as usize]) != 0b111)
    }
}

const UNSET: u8 = u8::MAX;

/// Depth-first stream of rainbow-free colorings in lexicographic order.
pub struct RainbowFreeColorings {
    plan: Arc<Plan>,
    opts: EnumerationOptions,
    labels: Vec<u8>,
    counts: [usize; 3],
    /// Positions below this are fixed.
    floor: usize,
    pos: usize,
    done: bool,
}

impl RainbowFreeColorings {
    pub fn new(group: &FiniteAbelianGroup, opts: EnumerationOptions) -> Result<Self> {
        check_capacity(group, &opts)?;
        Ok(Self::with_prefix(Arc::new(Plan::new(group)), opts, &[]))
    }

    fn with_prefix(plan: Arc<Plan>, opts: EnumerationOptions, prefix: &[u8]) -> Self {
        let n = plan.group.order();
        let mut labels = vec![UNSET; n];
        let mut counts = [0; 3];
        for (i, &l) in prefix.iter().enumerate() {
            labels[i] = l;
            counts[l as usize] += 1;
        }
        RainbowFreeColorings {
            plan,
            opts,
            labels,
            counts,
            floor: prefix.len(),
            pos: prefix.len(),
            done: n == 0,
        }
    }

    fn missing_colors(&self) -> usize {
        self.counts.iter().filter(|&&c| c == 0).count()
    }

    /// Advances to the next complete consistent assignment.
    fn advance(&mut self) -> bool {
        let n = self.labels.len();
        loop {
            if self.pos == n {
                // Step back from the last leaf.
                self.pos -= 1;
            }
            let t = self.pos;
            let cur = self.labels[t];
            if cur != UNSET {
                self.counts[cur as usize] -= 1;
            }
            let next = if cur == UNSET { 0 } else { cur + 1 };
            if next > 2 {
                self.labels[t] = UNSET;
                if t == self.floor {
                    return false;
                }
                self.pos -= 1;
                continue;
            }
            self.labels[t] = next;
            self.counts[next as usize] += 1;
            let remaining = n - t - 1;
            if self.plan.consistent(&self.labels, t) && self.missing_colors() <= remaining {
                self.pos = t + 1;
                if self.pos == n {
                    return true;
                }
            }
        }
    }

    fn current(&self) -> ThreeColoring {
        let labels = self
            .labels
            .iter()
            .map(|&l| Color::from_index(l).expect("complete assignment"))
            .collect();
        ThreeColoring::new(&self.plan.group, labels).expect("length matches")
    }
}

impl Iterator for RainbowFreeColorings {
    type Item = ThreeColoring;

    fn next(&mut self) -> Option<ThreeColoring> {
        while !self.done {
            if !self.advance() {
                self.done = true;
                break;
            }
            let c = self.current();
            if !self.opts.canonical_only || is_canonical(&c, self.opts.label_symmetry) {
                return Some(c);
            }
        }
        None
    }
}

fn check_capacity(group: &FiniteAbelianGroup, opts: &EnumerationOptions) -> Result<()> {
    if group.order() > opts.max_order {
        Err(Error::Capacity {
            order: group.order(),
            bound: opts.max_order,
        })
    } else {
        Ok(())
    }
}

const PERMUTATIONS: [[Color; 3]; 6] = [
    [Color::A, Color::B, Color::C],
    [Color::A, Color::C, Color::B],
    [Color::B, Color::A, Color::C],
    [Color::B, Color::C, Color::A],
    [Color::C, Color::A, Color::B],
    [Color::C, Color::B, Color::A],
];

/// True when `c` is the least label string in its orbit under translations,
/// and label permutations if `label_symmetry` is set.
pub fn is_canonical(c: &ThreeColoring, label_symmetry: bool) -> bool {
    canonical_form(c, label_symmetry).labels() == c.labels()
}

pub fn canonical_form(c: &ThreeColoring, label_symmetry: bool) -> ThreeColoring {
    let perms: &[[Color; 3]] = if label_symmetry {
        &PERMUTATIONS
    } else {
        &PERMUTATIONS[..1]
    };
    let n = c.group().order();
    let mut best = c.clone();
    for g in 0..n {
        let t = c.translate(g);
        for &p in perms {
            let cand = t.permute_labels(p);
            if cand.labels() < best.labels() {
                best = cand;
            }
        }
    }
    best
}

/// Collects the stream, splitting the search tree by its first few labels
/// across the rayon pool. Output order equals the sequential stream order.
pub fn enumerate_rainbow_free(
    group: &FiniteAbelianGroup,
    opts: &EnumerationOptions,
) -> Result<Vec<ThreeColoring>> {
    check_capacity(group, opts)?;
    let plan = Arc::new(Plan::new(group));
    let n = group.order();
    let depth = n.min(5);
    let prefixes = consistent_prefixes(&plan, depth);
    let chunks: Vec<Vec<ThreeColoring>> = prefixes
        .par_iter()
        .map(|p| {
            if p.len() == n {
                // Whole coloring fixed by the prefix.
                let it = RainbowFreeColorings::with_prefix(plan.clone(), *opts, p);
                let c = it.current();
                let keep = c.has_nonempty_classes()
                    && (!opts.canonical_only || is_canonical(&c, opts.label_symmetry));
                if keep {
                    vec![c]
                } else {
                    Vec::new()
                }
            } else {
                RainbowFreeColorings::with_prefix(plan.clone(), *opts, p).collect()
            }
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// Calls `f` on every coloring of the stream; the closure runs on rayon workers.
pub fn par_for_each_rainbow_free<F>(
    group: &FiniteAbelianGroup,
    opts: &EnumerationOptions,
    f: F,
) -> Result<()>
where
    F: Fn(ThreeColoring) + Sync + Send,
{
    check_capacity(group, opts)?;
    let plan = Arc::new(Plan::new(group));
    let n = group.order();
    let prefixes = consistent_prefixes(&plan, n.saturating_sub(1).min(5));
    prefixes.par_iter().for_each(|p| {
        for c in RainbowFreeColorings::with_prefix(plan.clone(), *opts, p) {
            f(c);
        }
    });
    Ok(())
}

fn consistent_prefixes(plan: &Plan, depth: usize) -> Vec<Vec<u8>> {
    let n = plan.group.order();
    let mut out = vec![Vec::new()];
    for t in 0..depth {
        let mut next = Vec::new();
        for p in &out {
            for l in 0..3u8 {
                let mut labels = vec![UNSET; n];
                labels[..t].copy_from_slice(p);
                labels[t] = l;
                if plan.consistent(&labels, t) {
                    let mut q = p.clone();
                    q.push(l);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out
}

/// `max` min class size over the stream, 0 when empty.
pub fn max_min_class(group: &FiniteAbelianGroup, max_order: usize) -> Result<usize> {
    let opts = EnumerationOptions {
        canonical_only: true,
        label_symmetry: false,
        max_order,
    };
    Ok(enumerate_rainbow_free(group, &opts)?
        .iter()
        .map(ThreeColoring::min_class_size)
        .max()
        .unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FiniteAbelianGroup {
        s.parse().unwrap()
    }

    /// Independent oracle: all 3^n colorings, filtered by the full scan.
    fn brute_force(group: &FiniteAbelianGroup) -> Vec<String> {
        let n = group.order();
        let mut out = Vec::new();
        for code in 0..3usize.pow(n as u32) {
            // Most significant digit is element 0, so codes ascend lexicographically.
            let labels: Vec<Color> = (0..n)
                .map(|i| {
                    Color::from_index((code / 3usize.pow((n - 1 - i) as u32) % 3) as u8).unwrap()
                })
                .collect();
            let c = ThreeColoring::new(group, labels).unwrap();
            if c.has_nonempty_classes() && c.is_rainbow_free() {
                out.push(c.label_string());
            }
        }
        out
    }

    fn stream(group: &FiniteAbelianGroup, opts: EnumerationOptions) -> Vec<String> {
        RainbowFreeColorings::new(group, opts)
            .unwrap()
            .map(|c| c.label_string())
            .collect()
    }

    #[test]
    fn no_colorings_for_p0_primes() {
        assert!(stream(&g("3"), EnumerationOptions::default()).is_empty());
        assert!(stream(&g("5"), EnumerationOptions::default()).is_empty());
        assert!(brute_force(&g("3")).is_empty());
    }

    #[test]
    fn stream_matches_brute_force() {
        for lit in ["4", "6", "2,2", "7", "9", "3,3", "2,4"] {
            let grp = g(lit);
            let expect = brute_force(&grp);
            assert_eq!(stream(&grp, EnumerationOptions::default()), expect, "{lit}");
            let par: Vec<String> = enumerate_rainbow_free(&grp, &EnumerationOptions::default())
                .unwrap()
                .iter()
                .map(ThreeColoring::label_string)
                .collect();
            assert_eq!(par, expect, "{lit} parallel");
        }
    }

    #[test]
    fn z9_stream_is_nonempty_and_rainbow_free() {
        let all = enumerate_rainbow_free(&g("9"), &EnumerationOptions::default()).unwrap();
        assert!(!all.is_empty());
        assert!(all
            .iter()
            .all(|c| c.is_rainbow_free() && c.has_nonempty_classes()));
    }

    #[test]
    fn full_stream_is_closed_under_translation() {
        for lit in ["9", "6", "3,3"] {
            let grp = g(lit);
            let all = stream(&grp, EnumerationOptions::default());
            for s in &all {
                let c = ThreeColoring::parse_labels(&grp, s).unwrap();
                for t in 0..grp.order() {
                    assert!(all.contains(&c.translate(t).label_string()));
                }
            }
        }
    }

    #[test]
    fn canonical_stream_covers_every_orbit() {
        for lit in ["9", "12", "3,3"] {
            let grp = g(lit);
            let all = enumerate_rainbow_free(&grp, &EnumerationOptions::default()).unwrap();
            let canon = enumerate_rainbow_free(&grp, &EnumerationOptions::canonical()).unwrap();
            let mut reps: Vec<String> = all
                .iter()
                .map(|c| canonical_form(c, false).label_string())
                .collect();
            reps.sort();
            reps.dedup();
            let got: Vec<String> = canon.iter().map(ThreeColoring::label_string).collect();
            assert_eq!(got, reps, "{lit}");

            let sym = EnumerationOptions {
                label_symmetry: true,
                ..EnumerationOptions::canonical()
            };
            let canon_sym = enumerate_rainbow_free(&grp, &sym).unwrap();
            let mut reps: Vec<String> = all
                .iter()
                .map(|c| canonical_form(c, true).label_string())
                .collect();
            reps.sort();
            reps.dedup();
            let got: Vec<String> = canon_sym.iter().map(ThreeColoring::label_string).collect();
            assert_eq!(got, reps, "{lit} label symmetry");
        }
    }

    #[test]
    fn capacity_is_enforced() {
        let opts = EnumerationOptions {
            max_order: 8,
            ..EnumerationOptions::default()
        };
        assert!(matches!(
            RainbowFreeColorings::new(&g("9"), opts),
            Err(Error::Capacity { order: 9, bound: 8 })
        ));
    }

    #[test]
    fn small_m_values() {
        assert_eq!(max_min_class(&g("5"), 18).unwrap(), 0);
        assert_eq!(max_min_class(&g("9"), 18).unwrap(), 1);
        assert_eq!(max_min_class(&g("6"), 18).unwrap(), 1);
    }
}
