//! Structural certificates for rainbow-free colorings.
//!
//! Odd order: up to translation there is a proper subgroup `H` and an apex
//! class `A ⊆ H` such that the coloring induced on `H` is rainbow-free, and
//! `B \ H`, `C \ H` are `H`-periodic and closed under negation and doubling.
//!
//! Even cyclic order `2^m · l`: the apex class lies in one coset of
//! `H = H' ⊕ Z/2^m` with `H'` a proper subgroup of the odd part, and the other
//! two classes are `H`-periodic off that coset.

use rayon::prelude::*;
use serde::Serialize;

use crate::coloring::{Color, ThreeColoring};
use crate::enumerate::{enumerate_rainbow_free, EnumerationOptions};
use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, Subgroup};
use crate::subset::GroupSubset;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityWitness {
    pub translation: usize,
    pub subgroup: Subgroup,
    pub apex: Color,
}

/// Per-condition verdicts of [`check_regular`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegularityCheck {
    pub apex_in_subgroup: bool,
    pub induced_rainbow_free: bool,
    pub periodic_outside: bool,
    pub closed_outside: bool,
}

impl RegularityCheck {
    pub fn holds(&self) -> bool {
        self.apex_in_subgroup
            && self.induced_rainbow_free
            && self.periodic_outside
            && self.closed_outside
    }
}

fn same_group(c: &ThreeColoring, h: &Subgroup) -> Result<()> {
    if c.group() == h.group() {
        Ok(())
    } else {
        Err(Error::ParentMismatch)
    }
}

/// Rainbow scan restricted to triples inside `H`.
fn induced_rainbow_free(c: &ThreeColoring, h: &Subgroup) -> bool {
    let g = c.group();
    let members = h.members();
    members.iter().all(|&x| {
        members.iter().all(|&z| {
            let y = g.sub_idx(g.double_idx(z), x);
            let (cx, cy, cz) = (c.label(x), c.label(y), c.label(z));
            cx == cy || cy == cz || cx == cz
        })
    })
}

fn closed_under_neg_and_double(s: &GroupSubset) -> bool {
    s.negate() == *s && s.dilate2() == *s
}

/// Evaluates the three regularity conditions on `x ↦ c(x + g)`.
pub fn check_regular(
    c: &ThreeColoring,
    h: &Subgroup,
    apex: Color,
    translation: usize,
) -> Result<RegularityCheck> {
    let group = c.group();
    group.require_odd()?;
    same_group(c, h)?;
    group.check_index(translation)?;
    if !h.is_proper() {
        return Err(Error::Precondition(
            "witness subgroup must be proper".into(),
        ));
    }
    let t = c.translate(translation);
    let hs = h.as_subset();
    let apex_in_subgroup = t.class_set(apex).is_subset_of(hs);
    let induced = apex_in_subgroup && induced_rainbow_free(&t, h);
    let mut periodic = true;
    let mut closed = true;
    for other in apex.others() {
        let outside = t.class_set(other).difference(hs)?;
        periodic &= outside.is_h_periodic(h)?;
        closed &= closed_under_neg_and_double(&outside);
    }
    Ok(RegularityCheck {
        apex_in_subgroup,
        induced_rainbow_free: induced,
        periodic_outside: periodic,
        closed_outside: closed,
    })
}

fn require_rainbow_free_nonempty(c: &ThreeColoring) -> Result<()> {
    if !c.has_nonempty_classes() {
        return Err(Error::Precondition("a color class is empty".into()));
    }
    if let Some(t) = c.find_rainbow_ap3() {
        return Err(Error::Precondition(format!(
            "coloring has a rainbow triple ({},{},{})",
            t.x, t.y, t.z
        )));
    }
    Ok(())
}

fn witness_candidates(c: &ThreeColoring) -> Result<impl Iterator<Item = (usize, Subgroup, Color)>> {
    let group = c.group().clone();
    group.require_odd()?;
    require_rainbow_free_nonempty(c)?;
    let subgroups = group.proper_subgroups()?;
    Ok((0..group.order()).flat_map(move |g| {
        let subgroups = subgroups.clone();
        subgroups
            .into_iter()
            .flat_map(move |h| Color::ALL.into_iter().map(move |a| (g, h.clone(), a)))
    }))
}

/// First witness in (translation, subgroup size, apex) order.
///
/// `Ok(None)` on a rainbow-free coloring with nonempty classes contradicts the
/// characterization and should be treated as a hard failure by callers.
pub fn find_regularity_witness(c: &ThreeColoring) -> Result<Option<RegularityWitness>> {
    for (g, h, apex) in witness_candidates(c)? {
        if check_regular(c, &h, apex, g)?.holds() {
            return Ok(Some(RegularityWitness {
                translation: g,
                subgroup: h,
                apex,
            }));
        }
    }
    Ok(None)
}

pub fn all_regularity_witnesses(c: &ThreeColoring) -> Result<Vec<RegularityWitness>> {
    let mut out = Vec::new();
    for (g, h, apex) in witness_candidates(c)? {
        if check_regular(c, &h, apex, g)?.holds() {
            out.push(RegularityWitness {
                translation: g,
                subgroup: h,
                apex,
            });
        }
    }
    Ok(out)
}

/// Returns whether `c` is rainbow-free, after confirming the witness holds.
pub fn check_sufficiency(c: &ThreeColoring, w: &RegularityWitness) -> Result<bool> {
    let check = check_regular(c, &w.subgroup, w.apex, w.translation)?;
    if !check.holds() {
        return Err(Error::Precondition(format!("witness invalid: {check:?}")));
    }
    Ok(c.is_rainbow_free())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenRegularityWitness {
    /// `H'`, a proper subgroup of the odd part.
    pub odd_subgroup: Subgroup,
    /// `H = H' ⊕ Z/2^m`.
    pub subgroup: Subgroup,
    /// Least element of the coset of `H` holding the apex class.
    pub coset_representative: usize,
    pub apex: Color,
    /// Whether the two other classes, off the apex coset and after moving it to
    /// `H`, also happen to be closed under negation and doubling.
    pub closure_analogue: bool,
}

/// `(2^m, l)` with `n = 2^m · l`, `l` odd.
fn split_two_part(n: usize) -> (usize, usize) {
    let two = 1usize << n.trailing_zeros();
    (two, n / two)
}

/// Subgroups `H' ⊕ Z/2^m` of a cyclic group, paired with `H'`.
pub fn even_candidate_subgroups(group: &FiniteAbelianGroup) -> Result<Vec<(Subgroup, Subgroup)>> {
    let n = group.order();
    let (two, odd) = split_two_part(n);
    let subs = group.subgroups()?;
    let mut out = Vec::new();
    for h in &subs {
        if h.order() % two != 0 || h.order() / two >= odd {
            continue;
        }
        let d = h.order() / two;
        let h_odd = subs
            .iter()
            .find(|k| k.order() == d && k.is_subgroup_of(h))
            .expect("cyclic groups have a subgroup of each divisor order")
            .clone();
        out.push((h.clone(), h_odd));
    }
    Ok(out)
}

/// The coset representative of `H` holding the apex, if the even conditions hold.
pub fn check_even_regular(c: &ThreeColoring, h: &Subgroup, apex: Color) -> Result<Option<usize>> {
    same_group(c, h)?;
    let apex_set = c.class_set(apex);
    let Some(first) = apex_set.first() else {
        return Ok(None);
    };
    let q = h.quotient();
    let coset = q.coset(q.project(first));
    if !apex_set.is_subset_of(coset) {
        return Ok(None);
    }
    for other in apex.others() {
        if !c.class_set(other).difference(coset)?.is_h_periodic(h)? {
            return Ok(None);
        }
    }
    Ok(Some(q.representative(q.project(first))))
}

pub fn find_regularity_witness_even(c: &ThreeColoring) -> Result<Option<EvenRegularityWitness>> {
    let group = c.group();
    let n = group.order();
    if !group.is_cyclic() {
        return Err(Error::NotCyclic);
    }
    if n.is_power_of_two() {
        return Err(Error::PowerOfTwo(n));
    }
    require_rainbow_free_nonempty(c)?;
    for (h, h_odd) in even_candidate_subgroups(group)? {
        for apex in Color::ALL {
            if let Some(rep) = check_even_regular(c, &h, apex)? {
                let shifted = c.translate(rep);
                let hs = h.as_subset();
                let closure_analogue = apex.others().iter().all(|&o| {
                    let outside = shifted.class_set(o).difference(hs).expect("same group");
                    closed_under_neg_and_double(&outside)
                });
                return Ok(Some(EvenRegularityWitness {
                    odd_subgroup: h_odd,
                    subgroup: h,
                    coset_representative: rep,
                    apex,
                    closure_analogue,
                }));
            }
        }
    }
    Ok(None)
}

/// One label-to-coset assignment in a three-cosets check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetAssignment {
    /// Labels read off `X`, `Y`, `Z` respectively.
    pub labels: [Color; 3],
    pub sizes: [usize; 3],
    /// All three intersections are nonempty.
    pub applicable: bool,
    pub inequality_holds: bool,
    /// Index pairs `(i, j)` into `sizes` with `sizes[i] + sizes[j] = |H|`, each
    /// with the subgroup `K < H` found for it.
    pub equalities: Vec<((usize, usize), Option<Subgroup>)>,
}

impl CosetAssignment {
    pub fn violation(&self) -> bool {
        self.applicable
            && (!self.inequality_holds || self.equalities.iter().any(|(_, k)| k.is_none()))
    }
}

#[derive(Debug, Clone)]
pub enum ThreeCosetsReport {
    NotApplicable(String),
    Checked(Vec<CosetAssignment>),
}

const ASSIGNMENTS: [[Color; 3]; 6] = [
    [Color::A, Color::B, Color::C],
    [Color::A, Color::C, Color::B],
    [Color::B, Color::A, Color::C],
    [Color::B, Color::C, Color::A],
    [Color::C, Color::A, Color::B],
    [Color::C, Color::B, Color::A],
];

/// Checks the three-cosets inequality for the cosets `x + H`, `y + H`, `z + H`
/// under all six label assignments.
pub fn check_three_cosets(
    c: &ThreeColoring,
    h: &Subgroup,
    x: usize,
    y: usize,
    z: usize,
) -> Result<ThreeCosetsReport> {
    same_group(c, h)?;
    let group = c.group();
    for i in [x, y, z] {
        group.check_index(i)?;
    }
    if !group.is_odd_order() {
        return Ok(ThreeCosetsReport::NotApplicable(
            "group order is even".into(),
        ));
    }
    if !c.is_rainbow_free() {
        return Ok(ThreeCosetsReport::NotApplicable(
            "coloring is not rainbow-free".into(),
        ));
    }
    let q = h.quotient();
    let (qx, qy, qz) = (q.project(x), q.project(y), q.project(z));
    if q.add(qx, qy) != q.double(qz) {
        return Ok(ThreeCosetsReport::NotApplicable(
            "cosets are not in arithmetic progression".into(),
        ));
    }
    let cosets = [q.coset(qx), q.coset(qy), q.coset(qz)];
    let inner: Vec<Subgroup> = group
        .subgroups()?
        .into_iter()
        .filter(|k| k.is_subgroup_of(h) && k.order() < h.order())
        .collect();
    let mut out = Vec::with_capacity(6);
    for labels in ASSIGNMENTS {
        let parts: Vec<GroupSubset> = (0..3)
            .map(|i| c.class_set(labels[i]).intersection(cosets[i]))
            .collect::<Result<_>>()?;
        let sizes = [parts[0].len(), parts[1].len(), parts[2].len()];
        let applicable = sizes.iter().all(|&s| s > 0);
        let mut report = CosetAssignment {
            labels,
            sizes,
            applicable,
            inequality_holds: true,
            equalities: Vec::new(),
        };
        if applicable {
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let s = sizes[i] + sizes[j];
                if s > h.order() {
                    report.inequality_holds = false;
                } else if s == h.order() {
                    let k = 3 - i - j;
                    let found = inner
                        .iter()
                        .find(|sub| {
                            parts[i].is_h_periodic(sub).unwrap_or(false)
                                && parts[j].is_h_periodic(sub).unwrap_or(false)
                                && sub.quotient().image(&parts[k]).len() == 1
                        })
                        .cloned();
                    report.equalities.push(((i, j), found));
                }
            }
        }
        out.push(report);
    }
    Ok(ThreeCosetsReport::Checked(out))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ThreeCosetsSummary {
    pub applicable_instances: usize,
    pub equality_instances: usize,
    pub verified_k: usize,
    pub violations: Vec<String>,
}

/// Runs the three-cosets check over every subgroup, every AP triple of cosets
/// and every label assignment.
pub fn three_cosets_sweep(c: &ThreeColoring) -> Result<ThreeCosetsSummary> {
    let mut summary = ThreeCosetsSummary::default();
    for h in c.group().subgroups()? {
        let q = h.quotient();
        let m = q.len();
        for qx in 0..m {
            for qy in 0..m {
                // Doubling is invertible on an odd quotient; find the middle coset.
                let target = q.add(qx, qy);
                let Some(qz) = (0..m).find(|&k| q.double(k) == target) else {
                    continue;
                };
                let (x, y, z) = (
                    q.representative(qx),
                    q.representative(qy),
                    q.representative(qz),
                );
                if let ThreeCosetsReport::Checked(list) = check_three_cosets(c, &h, x, y, z)? {
                    for a in list.iter().filter(|a| a.applicable) {
                        summary.applicable_instances += 1;
                        summary.equality_instances += a.equalities.len();
                        summary.verified_k += a
                            .equalities
                            .iter()
                            .filter(|((i, j), k)| {
                                k.as_ref().is_some_and(|k| {
                                    verify_k(c, &q, [qx, qy, qz], a.labels, (*i, *j), k)
                                })
                            })
                            .count();
                        if a.violation() {
                            summary.violations.push(format!(
                                "{} H={:?} cosets=({x},{y},{z}) labels={:?} sizes={:?}",
                                c.label_string(),
                                h.members(),
                                a.labels,
                                a.sizes
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(summary)
}

/// Re-checks a returned `K` from scratch.
fn verify_k(
    c: &ThreeColoring,
    q: &crate::group::Quotient,
    cosets: [usize; 3],
    labels: [Color; 3],
    (i, j): (usize, usize),
    k: &Subgroup,
) -> bool {
    let part = |t: usize| {
        c.class_set(labels[t])
            .intersection(q.coset(cosets[t]))
            .expect("same group")
    };
    let third = 3 - i - j;
    k.is_subgroup_of(q.subgroup())
        && k.order() < q.subgroup().order()
        && part(i).is_h_periodic(k).unwrap_or(false)
        && part(j).is_h_periodic(k).unwrap_or(false)
        && k.quotient().image(&part(third)).len() == 1
}

/// Summary of a completeness sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub group: String,
    /// Size of the search space decided by the pruned search, `3^|G|`.
    pub colorings_checked: u128,
    pub rainbow_free_count: usize,
    pub witnesses_found: usize,
    pub failures: Vec<String>,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.witnesses_found == self.rainbow_free_count
    }
}

fn sweep(
    group: &FiniteAbelianGroup,
    max_order: usize,
    certify: impl Fn(&ThreeColoring) -> Result<bool> + Sync,
) -> Result<(SweepSummary, Vec<ThreeColoring>)> {
    let opts = EnumerationOptions {
        max_order,
        ..EnumerationOptions::default()
    };
    let colorings = enumerate_rainbow_free(group, &opts)?;
    let verdicts: Vec<Result<bool>> = colorings.par_iter().map(&certify).collect();
    let mut summary = SweepSummary {
        group: group.literal(),
        colorings_checked: 3u128.pow(group.order() as u32),
        rainbow_free_count: colorings.len(),
        witnesses_found: 0,
        failures: Vec::new(),
    };
    for (c, v) in colorings.iter().zip(verdicts) {
        match v {
            Ok(true) => summary.witnesses_found += 1,
            Ok(false) => summary
                .failures
                .push(format!("no witness: {}", c.label_string())),
            Err(e) => summary.failures.push(format!("{}: {e}", c.label_string())),
        }
    }
    Ok((summary, colorings))
}

/// Certifies every rainbow-free coloring of an odd-order group.
pub fn sweep_odd(
    group: &FiniteAbelianGroup,
    max_order: usize,
) -> Result<(SweepSummary, Vec<ThreeColoring>)> {
    group.require_odd()?;
    sweep(group, max_order, |c| {
        Ok(find_regularity_witness(c)?.is_some())
    })
}

/// Certifies every rainbow-free coloring of an even-order cyclic group.
pub fn sweep_even(
    group: &FiniteAbelianGroup,
    max_order: usize,
) -> Result<(SweepSummary, Vec<ThreeColoring>)> {
    if !group.is_cyclic() {
        return Err(Error::NotCyclic);
    }
    if group.is_odd_order() {
        return Err(Error::Precondition("even order required".into()));
    }
    if group.order().is_power_of_two() {
        // No colorings exist; the sweep still confirms the stream is empty.
        let (mut s, cs) = sweep(group, max_order, |_| Ok(false))?;
        if !cs.is_empty() {
            s.failures
                .push(format!("{} rainbow-free colorings of a 2-group", cs.len()));
        }
        return Ok((s, cs));
    }
    sweep(group, max_order, |c| {
        Ok(find_regularity_witness_even(c)?.is_some())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FiniteAbelianGroup {
        s.parse().unwrap()
    }

    fn z9_construction() -> ThreeColoring {
        ThreeColoring::parse_labels(&g("9"), "ACCBCCBCC").unwrap()
    }

    fn z17_prime() -> ThreeColoring {
        let z17 = g("17");
        let b = [1, 2, 4, 8, 9, 13, 15, 16];
        ThreeColoring::from_fn(&z17, |x| {
            if x == 0 {
                Color::A
            } else if b.contains(&x) {
                Color::B
            } else {
                Color::C
            }
        })
    }

    #[test]
    fn check_regular_z9_with_coset_subgroup() {
        let c = z9_construction();
        let h = c.group().generated_subgroup(&[3]).unwrap();
        let r = check_regular(&c, &h, Color::A, 0).unwrap();
        assert!(r.holds(), "{r:?}");
    }

    #[test]
    fn check_regular_z9_with_trivial_subgroup_also_passes() {
        // Witnesses are not unique: H = {0} works as well as H = {0,3,6}.
        let c = z9_construction();
        let r = check_regular(&c, &c.group().trivial_subgroup(), Color::A, 0).unwrap();
        assert_eq!(
            r,
            RegularityCheck {
                apex_in_subgroup: true,
                induced_rainbow_free: true,
                periodic_outside: true,
                closed_outside: true,
            }
        );
        let all = all_regularity_witnesses(&c).unwrap();
        assert!(all.len() >= 2);
        let w = find_regularity_witness(&c).unwrap().unwrap();
        assert_eq!(
            (w.translation, w.subgroup.order(), w.apex),
            (0, 1, Color::A)
        );
    }

    #[test]
    fn check_regular_prime_shape() {
        let c = z17_prime();
        let r = check_regular(&c, &c.group().trivial_subgroup(), Color::A, 0).unwrap();
        assert!(r.holds());
    }

    #[test]
    fn check_regular_failures() {
        let c = z9_construction();
        // Apex B is not inside {0}.
        let r = check_regular(&c, &c.group().trivial_subgroup(), Color::B, 0).unwrap();
        assert!(!r.apex_in_subgroup);
        assert!(!r.holds());
        let z6 = ThreeColoring::parse_labels(&g("6"), "ABCABC").unwrap();
        assert_eq!(
            check_regular(&z6, &z6.group().trivial_subgroup(), Color::A, 0),
            Err(Error::OddOrderRequired(6))
        );
        assert!(check_regular(&c, &c.group().whole(), Color::A, 0).is_err());
    }

    #[test]
    fn witness_search_rejects_rainbow_colorings() {
        let c = ThreeColoring::parse_labels(&g("9"), "ABCAAAAAA").unwrap();
        assert!(matches!(
            find_regularity_witness(&c),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn witness_search_is_deterministic() {
        let c = z9_construction().translate(5);
        let w1 = find_regularity_witness(&c).unwrap();
        let w2 = find_regularity_witness(&c).unwrap();
        assert_eq!(w1, w2);
        assert!(w1.is_some());
    }

    #[test]
    fn sufficiency_gate() {
        let c = z9_construction();
        let h = c.group().generated_subgroup(&[3]).unwrap();
        let w = RegularityWitness {
            translation: 0,
            subgroup: h.clone(),
            apex: Color::A,
        };
        assert_eq!(check_sufficiency(&c, &w), Ok(true));

        // A rainbow triple inside H breaks condition (i).
        let bad = ThreeColoring::parse_labels(&g("9"), "ACCBCCCCC").unwrap();
        assert!(bad.find_rainbow_ap3().is_some());
        let w = RegularityWitness {
            translation: 0,
            subgroup: h,
            apex: Color::A,
        };
        assert!(matches!(
            check_sufficiency(&bad, &w),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn z9_and_z33_completeness() {
        for lit in ["9", "3,3"] {
            let (s, _) = sweep_odd(&g(lit), 18).unwrap();
            assert!(s.rainbow_free_count > 0);
            assert!(s.passed(), "{s:?}");
        }
    }

    #[test]
    fn even_completeness_small() {
        let (s, _) = sweep_even(&g("6"), 18).unwrap();
        assert!(s.rainbow_free_count > 0);
        assert!(s.passed(), "{s:?}");
        let (s, cs) = sweep_even(&g("4"), 18).unwrap();
        assert!(cs.is_empty());
        assert!(s.failures.is_empty());
    }

    #[test]
    fn even_witness_errors() {
        let c = ThreeColoring::parse_labels(&g("8"), "ABBBBBBB").unwrap();
        assert_eq!(find_regularity_witness_even(&c), Err(Error::PowerOfTwo(8)));
        let c = ThreeColoring::parse_labels(&g("2,2,3"), "ABBBBBBBBBBB").unwrap();
        assert_eq!(find_regularity_witness_even(&c), Err(Error::NotCyclic));
    }

    #[test]
    fn even_candidates_for_z12() {
        let subs = even_candidate_subgroups(&g("12")).unwrap();
        // l = 3, so H' = {0} only and H is the subgroup of order 4.
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].0.members(), vec![0, 3, 6, 9]);
        assert!(subs[0].1.is_trivial());
    }

    #[test]
    fn three_cosets_not_applicable_cases() {
        let c = z9_construction();
        let h = c.group().generated_subgroup(&[3]).unwrap();
        // 0 + 1 != 2·0 in G/H.
        assert!(matches!(
            check_three_cosets(&c, &h, 0, 1, 0).unwrap(),
            ThreeCosetsReport::NotApplicable(_)
        ));
        // X = Y = Z = H: only A and B meet H, so no assignment is applicable.
        match check_three_cosets(&c, &h, 0, 0, 0).unwrap() {
            ThreeCosetsReport::Checked(list) => assert!(list.iter().all(|a| !a.applicable)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn three_cosets_sweep_on_z9() {
        let (_, colorings) = sweep_odd(&g("9"), 18).unwrap();
        for c in &colorings {
            let s = three_cosets_sweep(c).unwrap();
            assert!(s.violations.is_empty(), "{s:?}");
            assert_eq!(s.verified_k, s.equality_instances);
        }
    }
}
