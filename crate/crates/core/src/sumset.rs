//! Checkers for the classical small-sumset structure theorems.
//!
//! Each checker computes the relevant sumset directly and classifies the pair
//! against the theorem's conclusion. A pair that meets the hypotheses but
//! matches no case indicates a bug in this crate, never a property of the data.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::group::Subgroup;
use crate::subset::GroupSubset;

/// Machine-readable form shared by every checker.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub hypotheses_met: bool,
    pub cases: Vec<String>,
    pub witnesses: BTreeMap<String, Value>,
}

#[derive(Debug, Clone)]
pub struct KneserReport {
    pub sumset: GroupSubset,
    pub period: Subgroup,
    /// `|A + B|`
    pub sumset_size: usize,
    /// `|A + H| + |B + H| - |H|`
    pub lower_bound: i64,
    pub bound_holds: bool,
    /// `|A + B| ≤ |A| + |B| - 1`
    pub small_sumset: bool,
    /// Equality in the bound whenever the sumset is small.
    pub equality_holds: bool,
}

impl KneserReport {
    pub fn holds(&self) -> bool {
        self.bound_holds && self.equality_holds
    }

    pub fn to_report(&self) -> TheoremReport {
        let mut cases = Vec::new();
        if self.bound_holds {
            cases.push("bound".to_string());
        }
        if self.small_sumset && self.equality_holds {
            cases.push("equality".to_string());
        }
        let mut w = BTreeMap::new();
        w.insert("period".into(), json!(self.period.members()));
        w.insert("sumset_size".into(), json!(self.sumset_size));
        w.insert("lower_bound".into(), json!(self.lower_bound));
        TheoremReport {
            hypotheses_met: true,
            cases,
            witnesses: w,
        }
    }
}

pub fn verify_kneser(a: &GroupSubset, b: &GroupSubset) -> Result<KneserReport> {
    let sum = a.minkowski_sum(b)?;
    let h = sum.period();
    let hs = h.as_subset();
    let lower_bound =
        a.minkowski_sum(hs)?.len() as i64 + b.minkowski_sum(hs)?.len() as i64 - h.order() as i64;
    let size = sum.len();
    let small = size < a.len() + b.len();
    Ok(KneserReport {
        bound_holds: size as i64 >= lower_bound,
        equality_holds: !small || size as i64 == lower_bound,
        small_sumset: small,
        sumset_size: size,
        lower_bound,
        period: h,
        sumset: sum,
    })
}

/// Outcome of a structure-theorem classification.
#[derive(Debug, Clone)]
pub enum Classification<C> {
    HypothesesNotMet(String),
    Classified(C),
}

impl<C> Classification<C> {
    pub fn cases(&self) -> Option<&C> {
        match self {
            Classification::Classified(c) => Some(c),
            Classification::HypothesesNotMet(_) => None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct KstCases {
    /// `min{|A|, |B|} = 1`
    pub singleton: bool,
    /// Smallest common progression difference.
    pub common_difference: Option<usize>,
    /// First nontrivial proper `H` for which both sets are `H`-quasiperiodic.
    pub quasiperiodic: Option<Subgroup>,
}

impl KstCases {
    pub fn any(&self) -> bool {
        self.singleton || self.common_difference.is_some() || self.quasiperiodic.is_some()
    }
}

fn common_quasiperiodic(a: &GroupSubset, b: &GroupSubset) -> Result<Option<Subgroup>> {
    for h in a.group().subgroups()? {
        if h.is_trivial() || !h.is_proper() {
            continue;
        }
        if a.is_h_quasiperiodic(&h)? && b.is_h_quasiperiodic(&h)? {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// Classifies an aperiodic critical pair `|A+B| = |A|+|B|-1 ≤ |G|-2`.
pub fn kst_case(a: &GroupSubset, b: &GroupSubset) -> Result<Classification<KstCases>> {
    let sum = a.minkowski_sum(b)?;
    let n = a.group().order();
    if sum.len() + 1 != a.len() + b.len() {
        return Ok(Classification::HypothesesNotMet(
            "|A+B| != |A|+|B|-1".into(),
        ));
    }
    if sum.len() + 2 > n {
        return Ok(Classification::HypothesesNotMet("|A+B| > |G|-2".into()));
    }
    if !sum.is_aperiodic() {
        return Ok(Classification::HypothesesNotMet("A+B is periodic".into()));
    }
    let da: Vec<usize> = a
        .progression_differences()
        .iter()
        .map(|p| p.difference)
        .collect();
    let common_difference = b
        .progression_differences()
        .iter()
        .map(|p| p.difference)
        .find(|d| da.contains(d));
    Ok(Classification::Classified(KstCases {
        singleton: a.len().min(b.len()) == 1,
        common_difference,
        quasiperiodic: common_quasiperiodic(a, b)?,
    }))
}

#[derive(Debug, Clone, Default)]
pub struct GrynkiewiczCases {
    /// `min{|A|,|B|} = 2` or `|A| = |B| = 3`
    pub small: bool,
    pub quasiperiodic: Option<Subgroup>,
    /// Every `(a, b)` with `|A'+B'| = |A'|+|B'|-1` for `A' = A∪{a}`, `B' = B∪{b}`.
    pub extension_pairs: Vec<(usize, usize)>,
}

impl GrynkiewiczCases {
    pub fn any(&self) -> bool {
        self.small || self.quasiperiodic.is_some() || !self.extension_pairs.is_empty()
    }
}

/// Classifies an aperiodic pair `|A+B| = |A|+|B| ≤ |G|-3` in a group of odd order.
pub fn grynkiewicz_case(
    a: &GroupSubset,
    b: &GroupSubset,
) -> Result<Classification<GrynkiewiczCases>> {
    let sum = a.minkowski_sum(b)?;
    let g = a.group();
    let n = g.order();
    if !g.is_odd_order() {
        return Ok(Classification::HypothesesNotMet("|G| is even".into()));
    }
    if sum.len() != a.len() + b.len() {
        return Ok(Classification::HypothesesNotMet("|A+B| != |A|+|B|".into()));
    }
    if sum.len() + 3 > n {
        return Ok(Classification::HypothesesNotMet("|A+B| > |G|-3".into()));
    }
    if !sum.is_aperiodic() {
        return Ok(Classification::HypothesesNotMet("A+B is periodic".into()));
    }
    let mut extension_pairs = Vec::new();
    for x in 0..n {
        let mut a2 = a.clone();
        a2.insert(x);
        for y in 0..n {
            let mut b2 = b.clone();
            b2.insert(y);
            if a2.minkowski_sum(&b2)?.len() + 1 == a2.len() + b2.len() {
                extension_pairs.push((x, y));
            }
        }
    }
    let (sa, sb) = (a.len(), b.len());
    Ok(Classification::Classified(GrynkiewiczCases {
        small: sa.min(sb) == 2 || (sa == 3 && sb == 3),
        quasiperiodic: common_quasiperiodic(a, b)?,
        extension_pairs,
    }))
}

impl Classification<KstCases> {
    pub fn to_report(&self) -> TheoremReport {
        let mut report = TheoremReport {
            hypotheses_met: false,
            cases: Vec::new(),
            witnesses: BTreeMap::new(),
        };
        match self {
            Classification::HypothesesNotMet(why) => {
                report.witnesses.insert("reason".into(), json!(why));
            }
            Classification::Classified(c) => {
                report.hypotheses_met = true;
                if c.singleton {
                    report.cases.push("i".into());
                }
                if let Some(d) = c.common_difference {
                    report.cases.push("ii".into());
                    report.witnesses.insert("difference".into(), json!(d));
                }
                if let Some(h) = &c.quasiperiodic {
                    report.cases.push("iii".into());
                    report
                        .witnesses
                        .insert("subgroup".into(), json!(h.members()));
                }
            }
        }
        report
    }
}

impl Classification<GrynkiewiczCases> {
    pub fn to_report(&self) -> TheoremReport {
        let mut report = TheoremReport {
            hypotheses_met: false,
            cases: Vec::new(),
            witnesses: BTreeMap::new(),
        };
        match self {
            Classification::HypothesesNotMet(why) => {
                report.witnesses.insert("reason".into(), json!(why));
            }
            Classification::Classified(c) => {
                report.hypotheses_met = true;
                if c.small {
                    report.cases.push("i".into());
                }
                if let Some(h) = &c.quasiperiodic {
                    report.cases.push("ii".into());
                    report
                        .witnesses
                        .insert("subgroup".into(), json!(h.members()));
                }
                if !c.extension_pairs.is_empty() {
                    report.cases.push("iii".into());
                    report
                        .witnesses
                        .insert("extension_pairs".into(), json!(c.extension_pairs));
                }
            }
        }
        report
    }
}

#[derive(Debug, Clone)]
pub enum FillOutcome {
    HypothesesNotMet,
    /// `|A| + |B| > |G|`
    Exceeds {
        sum_is_full: bool,
    },
    /// `|A| + |B| = |G|`; when `A+B ≠ G` the witness is `(H, a)` with
    /// `A+B = G \ (a+H)` and both sets `H`-periodic.
    Balanced {
        sum_is_full: bool,
        witness: Option<(Subgroup, usize)>,
    },
}

impl FillOutcome {
    pub fn hypotheses_met(&self) -> bool {
        !matches!(self, FillOutcome::HypothesesNotMet)
    }

    pub fn holds(&self) -> bool {
        match self {
            FillOutcome::HypothesesNotMet => true,
            FillOutcome::Exceeds { sum_is_full } => *sum_is_full,
            FillOutcome::Balanced {
                sum_is_full,
                witness,
            } => *sum_is_full || witness.is_some(),
        }
    }

    pub fn to_report(&self) -> TheoremReport {
        let mut report = TheoremReport {
            hypotheses_met: self.hypotheses_met(),
            cases: Vec::new(),
            witnesses: BTreeMap::new(),
        };
        match self {
            FillOutcome::HypothesesNotMet => {}
            FillOutcome::Exceeds { sum_is_full } => {
                if *sum_is_full {
                    report.cases.push("i".into());
                }
            }
            FillOutcome::Balanced {
                sum_is_full,
                witness,
            } => {
                if *sum_is_full {
                    report.cases.push("ii-full".into());
                }
                if let Some((h, a)) = witness {
                    report.cases.push("ii-coset".into());
                    report
                        .witnesses
                        .insert("subgroup".into(), json!(h.members()));
                    report.witnesses.insert("missing_coset".into(), json!(a));
                }
            }
        }
        report
    }
}

pub fn verify_fill_lemma(a: &GroupSubset, b: &GroupSubset) -> Result<FillOutcome> {
    let sum = a.minkowski_sum(b)?;
    let n = a.group().order();
    let total = a.len() + b.len();
    if total > n {
        return Ok(FillOutcome::Exceeds {
            sum_is_full: sum.is_full(),
        });
    }
    if total < n {
        return Ok(FillOutcome::HypothesesNotMet);
    }
    if sum.is_full() {
        return Ok(FillOutcome::Balanced {
            sum_is_full: true,
            witness: None,
        });
    }
    // The complement must be a single coset a + H.
    let missing = sum.complement();
    let a0 = missing.first().expect("sum is not full");
    let shifted = missing.translate(a.group().neg_idx(a0));
    let witness = match Subgroup::from_subset(shifted) {
        Ok(h) if a.is_h_periodic(&h)? && b.is_h_periodic(&h)? => Some((h, a0)),
        _ => None,
    };
    Ok(FillOutcome::Balanced {
        sum_is_full: false,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteAbelianGroup;

    fn g(s: &str) -> FiniteAbelianGroup {
        s.parse().unwrap()
    }

    fn set(grp: &FiniteAbelianGroup, idx: &[usize]) -> GroupSubset {
        GroupSubset::from_indices(grp, idx.iter().copied()).unwrap()
    }

    #[test]
    fn kneser_examples() {
        let z9 = g("9");
        let h = set(&z9, &[0, 3, 6]);
        let r = verify_kneser(&h, &h).unwrap();
        assert_eq!(r.sumset.indices(), vec![0, 3, 6]);
        assert_eq!(r.period.members(), vec![0, 3, 6]);
        assert_eq!((r.sumset_size, r.lower_bound), (3, 3));
        assert!(r.holds());

        let z7 = g("7");
        let r = verify_kneser(&set(&z7, &[0, 1]), &set(&z7, &[0, 2])).unwrap();
        assert_eq!((r.sumset_size, r.lower_bound), (4, 3));
        assert!(r.period.is_trivial());
        assert!(r.holds());
        assert_eq!(r.to_report().cases, vec!["bound"]);
    }

    #[test]
    fn kst_examples() {
        let z7 = g("7");
        let c = kst_case(&set(&z7, &[3]), &set(&z7, &[0, 1, 4])).unwrap();
        assert!(c.cases().unwrap().singleton);

        let z13 = g("13");
        let c = kst_case(&set(&z13, &[0, 1, 2]), &set(&z13, &[5, 6, 7, 8])).unwrap();
        let cases = c.cases().unwrap();
        assert_eq!(cases.common_difference, Some(1));
        assert!(!cases.singleton);
        // Z/13 has no nontrivial proper subgroup.
        assert!(cases.quasiperiodic.is_none());
        assert_eq!(c.to_report().cases, vec!["ii"]);

        let z9 = g("9");
        let c = kst_case(&set(&z9, &[0, 3]), &set(&z9, &[0, 3, 6])).unwrap();
        assert!(matches!(c, Classification::HypothesesNotMet(_)));
        assert!(!c.to_report().hypotheses_met);
    }

    #[test]
    fn grynkiewicz_examples() {
        // {0,1} + {0,2,5} = {0,1,2,3,5,6}: six elements, so |A+B| = |A|+|B| + 1
        // and the hypothesis fails.
        let z11 = g("11");
        let (a, b) = (set(&z11, &[0, 1]), set(&z11, &[0, 2, 5]));
        assert_eq!(a.minkowski_sum(&b).unwrap().len(), 6);
        assert!(matches!(
            grynkiewicz_case(&a, &b).unwrap(),
            Classification::HypothesesNotMet(_)
        ));

        // {0,1} + {0,1,3} = {0,1,2,3,4}: |A+B| = 5 = |A|+|B|.
        let b = set(&z11, &[0, 1, 3]);
        let c = grynkiewicz_case(&a, &b).unwrap();
        let cases = c.cases().expect("hypotheses hold");
        assert!(cases.small);
        assert!(cases.extension_pairs.contains(&(2, 2)));
        assert!(cases.any());

        let z9 = g("9");
        let c = grynkiewicz_case(&set(&z9, &[0, 3]), &set(&z9, &[0, 3, 6])).unwrap();
        assert!(matches!(c, Classification::HypothesesNotMet(_)));
    }

    #[test]
    fn fill_lemma_examples() {
        let z5 = g("5");
        let a = set(&z5, &[0, 1, 2]);
        let r = verify_fill_lemma(&a, &a).unwrap();
        assert!(matches!(r, FillOutcome::Exceeds { sum_is_full: true }));

        let z9 = g("9");
        let h = set(&z9, &[0, 3, 6]);
        assert!(!verify_fill_lemma(&h, &h).unwrap().hypotheses_met());

        let b = set(&z9, &[0, 1, 3, 4, 6, 7]);
        assert_eq!(
            h.minkowski_sum(&b).unwrap().indices(),
            vec![0, 1, 3, 4, 6, 7]
        );
        match verify_fill_lemma(&h, &b).unwrap() {
            FillOutcome::Balanced {
                sum_is_full: false,
                witness: Some((sub, a0)),
            } => {
                assert_eq!(sub.members(), vec![0, 3, 6]);
                assert_eq!(a0, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn report_serializes_to_schema() {
        let z7 = g("7");
        let c = kst_case(&set(&z7, &[3]), &set(&z7, &[0, 1, 4])).unwrap();
        let v = serde_json::to_value(c.to_report()).unwrap();
        assert_eq!(v["hypotheses_met"], json!(true));
        assert!(v["cases"].as_array().unwrap().contains(&json!("i")));
        assert!(v["witnesses"].is_object());
    }
}
