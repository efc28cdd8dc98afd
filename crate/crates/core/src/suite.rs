//! Seeded randomized suites: the sumset theorem checkers and the sufficiency
//! direction of the regularity characterization.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coloring::{Color, ThreeColoring};
use crate::error::Result;
use crate::extremal::exists_rainbow_free;
use crate::group::{FiniteAbelianGroup, Subgroup};
use crate::structure::{check_regular, check_sufficiency, RegularityWitness};
use crate::subset::GroupSubset;
use crate::sumset::{grynkiewicz_case, kst_case, verify_fill_lemma, verify_kneser};

/// Every group of order `2..=max_order` in invariant-factor form
/// `d_1 | d_2 | … | d_k`, sorted by order then factor list.
pub fn groups_up_to(max_order: usize) -> Vec<FiniteAbelianGroup> {
    fn extend(prefix: &mut Vec<u64>, product: u64, max: u64, out: &mut Vec<Vec<u64>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        let last = prefix.last().copied();
        for d in 2..=max / product {
            if last.is_none_or(|l| d % l == 0) {
                prefix.push(d);
                extend(prefix, product * d, max, out);
                prefix.pop();
            }
        }
    }
    let mut lists = Vec::new();
    extend(&mut Vec::new(), 1, max_order as u64, &mut lists);
    lists.sort_by_key(|l| (l.iter().product::<u64>(), l.clone()));
    lists
        .into_iter()
        .map(|l| FiniteAbelianGroup::new(l).expect("valid factors"))
        .collect()
}

fn random_set(group: &FiniteAbelianGroup, rng: &mut ChaCha8Rng) -> GroupSubset {
    let n = group.order();
    let mut s = match rng.gen_range(0..5) {
        // Sparse or dense uniform sets.
        0 => {
            let density: f64 = rng.gen_range(0.05..0.7);
            GroupSubset::from_predicate(group, |_| rng.gen_bool(density))
        }
        // A handful of points.
        1 => {
            let k = rng.gen_range(1..=4.min(n));
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(rng);
            GroupSubset::from_indices(group, idx[..k].iter().copied()).expect("in range")
        }
        // A progression, possibly with one point moved.
        2 | 3 => {
            let d = rng.gen_range(1..n.max(2)).min(n - 1);
            let len = rng.gen_range(1..=group.element_order(d).max(1));
            let mut x = rng.gen_range(0..n);
            let mut s = GroupSubset::empty(group);
            for _ in 0..len {
                s.insert(x);
                x = group.add_idx(x, d);
            }
            if rng.gen_bool(0.3) {
                s.insert(rng.gen_range(0..n));
            }
            s
        }
        // Cosets of a random subgroup plus part of one more coset.
        _ => {
            let subs = group.subgroups().expect("small group");
            let h = subs.choose(rng).expect("at least the trivial subgroup");
            let q = h.quotient();
            let mut s = GroupSubset::empty(group);
            for c in q.cosets() {
                if rng.gen_bool(0.3) {
                    s = s.union(c).expect("same group");
                }
            }
            let extra = q.coset(rng.gen_range(0..q.len()));
            for x in extra.iter() {
                if rng.gen_bool(0.5) {
                    s.insert(x);
                }
            }
            s
        }
    };
    if s.is_empty() {
        s.insert(rng.gen_range(0..n));
    }
    s
}

/// Draws `B` with the same progression difference as `A` when `A` is a
/// progression, to reach the critical-pair hypotheses more often.
fn partner_set(group: &FiniteAbelianGroup, a: &GroupSubset, rng: &mut ChaCha8Rng) -> GroupSubset {
    if rng.gen_bool(0.4) {
        if let Some(p) = a.is_arithmetic_progression() {
            let n = group.order();
            let max_len = group.element_order(p.difference);
            let len = rng.gen_range(1..=max_len);
            let mut x = rng.gen_range(0..n);
            let mut s = GroupSubset::empty(group);
            for _ in 0..len {
                s.insert(x);
                x = group.add_idx(x, p.difference);
            }
            if rng.gen_bool(0.3) {
                s.insert(rng.gen_range(0..n));
            }
            return s;
        }
    }
    random_set(group, rng)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SumsetSuiteSummary {
    pub seed: u64,
    pub pairs: usize,
    pub groups: usize,
    pub kneser_violations: usize,
    pub kst_instances: usize,
    pub kst_violations: usize,
    pub grynkiewicz_instances: usize,
    pub grynkiewicz_violations: usize,
    pub fill_instances: usize,
    pub fill_violations: usize,
    pub failures: Vec<String>,
}

impl SumsetSuiteSummary {
    pub fn passed(&self) -> bool {
        self.kneser_violations == 0
            && self.kst_violations == 0
            && self.grynkiewicz_violations == 0
            && self.fill_violations == 0
    }
}

/// Runs every sumset checker on `pairs` seeded random pairs over all groups of
/// order at most `max_order`.
pub fn sumset_suite(seed: u64, pairs: usize, max_order: usize) -> Result<SumsetSuiteSummary> {
    let groups = groups_up_to(max_order);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = SumsetSuiteSummary {
        seed,
        pairs,
        groups: groups.len(),
        ..Default::default()
    };
    for _ in 0..pairs {
        let group = groups.choose(&mut rng).expect("nonempty group list");
        let a = random_set(group, &mut rng);
        let b = partner_set(group, &a, &mut rng);
        let tag = || format!("G={} A={{{a}}} B={{{b}}}", group.literal());

        if !verify_kneser(&a, &b)?.holds() {
            s.kneser_violations += 1;
            s.failures.push(format!("kneser {}", tag()));
        }
        if let Some(c) = kst_case(&a, &b)?.cases() {
            s.kst_instances += 1;
            if !c.any() {
                s.kst_violations += 1;
                s.failures.push(format!("kst {}", tag()));
            }
        }
        if let Some(c) = grynkiewicz_case(&a, &b)?.cases() {
            s.grynkiewicz_instances += 1;
            if !c.any() {
                s.grynkiewicz_violations += 1;
                s.failures.push(format!("grynkiewicz {}", tag()));
            }
        }
        // Complementary sizes hit the fill lemma's balanced case.
        let b_fill = if rng.gen_bool(0.5) {
            let k = group.order() - a.len();
            let mut idx: Vec<usize> = (0..group.order()).collect();
            idx.shuffle(&mut rng);
            if k == 0 {
                b.clone()
            } else {
                GroupSubset::from_indices(group, idx[..k].iter().copied())?
            }
        } else {
            b.clone()
        };
        let fill = verify_fill_lemma(&a, &b_fill)?;
        if fill.hypotheses_met() {
            s.fill_instances += 1;
            if !fill.holds() {
                s.fill_violations += 1;
                s.failures.push(format!(
                    "fill G={} A={{{a}}} B={{{b_fill}}}",
                    group.literal()
                ));
            }
        }
    }
    Ok(s)
}

fn proper_subgroups_inside(h: &Subgroup) -> Vec<Subgroup> {
    h.group()
        .subgroups()
        .expect("small group")
        .into_iter()
        .filter(|k| k.is_subgroup_of(h) && k.order() < h.order())
        .collect()
}

/// Orbits of the `K`-cosets lying in `H \ K` under negation and doubling.
fn coset_orbits(k: &Subgroup, h: &Subgroup) -> Vec<Vec<usize>> {
    let q = k.quotient();
    let inside: Vec<usize> = (1..q.len())
        .filter(|&c| h.contains(q.representative(c)))
        .collect();
    let mut seen = vec![false; q.len()];
    let mut orbits = Vec::new();
    for &c in &inside {
        if seen[c] {
            continue;
        }
        let mut orbit = vec![c];
        seen[c] = true;
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            for y in [q.neg(x), q.double(x)] {
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbits.push(
            orbit
                .into_iter()
                .flat_map(|c| q.coset(c).indices())
                .collect(),
        );
    }
    orbits
}

/// Fills `labels` on the elements of `h` with a coloring whose restriction to
/// `h` is rainbow-free by construction.
fn color_subgroup(h: &Subgroup, labels: &mut [Color], rng: &mut ChaCha8Rng) {
    if h.is_trivial() {
        labels[0] = Color::ALL[rng.gen_range(0..3)];
        return;
    }
    if rng.gen_bool(0.25) {
        // Two colors never make a rainbow triple.
        let pair = Color::ALL[rng.gen_range(0..3)].others();
        for x in h.members() {
            labels[x] = pair[rng.gen_range(0..2)];
        }
        return;
    }
    let inner = proper_subgroups_inside(h);
    let k = inner
        .choose(rng)
        .expect("trivial subgroup is always inside");
    color_subgroup(k, labels, rng);
    let apex = Color::ALL[rng.gen_range(0..3)];
    let others = apex.others();
    for orbit in coset_orbits(k, h) {
        let c = others[rng.gen_range(0..2)];
        for x in orbit {
            labels[x] = c;
        }
    }
    // The apex must stay inside k.
    debug_assert!(h
        .members()
        .iter()
        .all(|&x| labels[x] != apex || k.contains(x)));
}

/// A random coloring with three nonempty classes satisfying the regularity
/// conditions for the returned witness.
///
/// Loops forever on groups with no such coloring, e.g. `Z/3`.
pub fn random_witness_coloring(
    group: &FiniteAbelianGroup,
    rng: &mut ChaCha8Rng,
) -> Result<(ThreeColoring, RegularityWitness)> {
    let proper = group.proper_subgroups()?;
    loop {
        let h = proper
            .choose(rng)
            .expect("odd groups of order > 1 have {0}");
        let mut labels = vec![Color::A; group.order()];
        color_subgroup(h, &mut labels, rng);
        let apex = Color::ALL[rng.gen_range(0..3)];
        let others = apex.others();
        let whole = group.whole();
        for orbit in coset_orbits(h, &whole) {
            let c = others[rng.gen_range(0..2)];
            for x in orbit {
                labels[x] = c;
            }
        }
        let base = ThreeColoring::new(group, labels)?;
        if !base.has_nonempty_classes() || base.class_set(apex).is_empty() {
            continue;
        }
        let shift = rng.gen_range(0..group.order());
        let coloring = base.translate(shift);
        let witness = RegularityWitness {
            translation: group.neg_idx(shift),
            subgroup: h.clone(),
            apex,
        };
        return Ok((coloring, witness));
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SufficiencySummary {
    pub seed: u64,
    pub colorings: usize,
    pub witness_invalid: usize,
    pub not_rainbow_free: usize,
    pub failures: Vec<String>,
}

impl SufficiencySummary {
    pub fn passed(&self) -> bool {
        self.witness_invalid == 0 && self.not_rainbow_free == 0
    }
}

/// Samples `count` witness-satisfying colorings over odd groups of order
/// `3..=max_order` and checks each is rainbow-free.
pub fn sufficiency_suite(seed: u64, count: usize, max_order: usize) -> Result<SufficiencySummary> {
    let groups: Vec<FiniteAbelianGroup> = groups_up_to(max_order)
        .into_iter()
        .filter(|g| g.is_odd_order() && exists_rainbow_free(g.order() as u64))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = SufficiencySummary {
        seed,
        colorings: count,
        ..Default::default()
    };
    for _ in 0..count {
        let group = groups.choose(&mut rng).expect("odd groups exist");
        let (c, w) = random_witness_coloring(group, &mut rng)?;
        if !check_regular(&c, &w.subgroup, w.apex, w.translation)?.holds() {
            s.witness_invalid += 1;
            s.failures
                .push(format!("witness invalid: {} {}", group.literal(), c));
            continue;
        }
        if !check_sufficiency(&c, &w)? {
            s.not_rainbow_free += 1;
            s.failures
                .push(format!("rainbow: {} {}", group.literal(), c));
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_catalogue() {
        let lits: Vec<String> = groups_up_to(8).iter().map(|g| g.literal()).collect();
        assert_eq!(
            lits,
            vec!["2", "3", "2,2", "4", "5", "6", "7", "2,2,2", "2,4", "8"]
        );
        // Number of abelian groups of each order ≤ 49, summed.
        let total: usize = groups_up_to(49).len();
        let expected: usize = [
            1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2, 1, 1, 1, 5, 1, 2, 1, 2, 1, 1, 1, 3, 2, 1, 3, 2, 1, 1,
            1, 7, 1, 1, 1, 4, 1, 1, 1, 3, 1, 1, 1, 2, 2, 1, 1, 5, 2,
        ]
        .iter()
        .sum();
        assert_eq!(total, expected);
    }

    #[test]
    fn suites_are_reproducible() {
        let a = sumset_suite(7, 200, 20).unwrap();
        let b = sumset_suite(7, 200, 20).unwrap();
        assert_eq!(a, b);
        assert!(a.passed(), "{a:?}");
        let a = sufficiency_suite(3, 50, 27).unwrap();
        assert_eq!(a, sufficiency_suite(3, 50, 27).unwrap());
        assert!(a.passed(), "{a:?}");
    }
}
