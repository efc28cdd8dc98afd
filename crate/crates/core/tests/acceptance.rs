//! Acceptance checks. Each test prints one PASS/FAIL line; run with
//! `--nocapture` to see them.

use std::time::Instant;

use rainbowlab::enumerate::{enumerate_rainbow_free, max_min_class, EnumerationOptions};
use rainbowlab::extremal::{
    classify_prime, gen_counterexample_even, m_formula, m_search, PrimeClass,
};
use rainbowlab::structure::{sweep_even, sweep_odd, three_cosets_sweep, SweepSummary};
use rainbowlab::suite::{sufficiency_suite, sumset_suite};
use rainbowlab::{FiniteAbelianGroup, ThreeColoring};

fn report(id: u32, name: &str, ok: bool, detail: String, started: Instant) {
    println!(
        "{} criterion {id} ({name}): {detail} [{:.2?}]",
        if ok { "PASS" } else { "FAIL" },
        started.elapsed()
    );
    assert!(ok, "criterion {id} failed: {detail}");
}

fn g(s: &str) -> FiniteAbelianGroup {
    s.parse().unwrap()
}

fn cap(n: u64) -> usize {
    n as usize
}

#[test]
fn criterion_1_m_values_odd() {
    let t = Instant::now();
    let expected = [(3, 0), (5, 0), (7, 0), (9, 1), (11, 0), (13, 0), (15, 2)];
    let mut rows = Vec::new();
    let mut ok = true;
    for (n, want) in expected {
        let search = m_search(&FiniteAbelianGroup::cyclic(n).unwrap(), cap(n)).unwrap();
        let formula = m_formula(n).unwrap();
        ok &= search == want && formula == want;
        rows.push(format!("{n}:{search}/{formula}"));
    }
    report(1, "m(n) odd", ok, rows.join(" "), t);
}

#[test]
fn criterion_2_m_values_even() {
    let t = Instant::now();
    let mut rows = Vec::new();
    let mut ok = true;
    for (n, want) in [(6, 1), (10, 1), (12, 2), (14, 1)] {
        let search = m_search(&FiniteAbelianGroup::cyclic(n).unwrap(), cap(n)).unwrap();
        let formula = m_formula(n).unwrap();
        ok &= search == want && formula == want;
        rows.push(format!("{n}:{search}/{formula}"));
    }
    for n in [4u64, 8, 16] {
        let found = enumerate_rainbow_free(
            &FiniteAbelianGroup::cyclic(n).unwrap(),
            &EnumerationOptions {
                max_order: cap(n),
                ..EnumerationOptions::default()
            },
        )
        .unwrap()
        .len();
        ok &= found == 0 && m_formula(n).is_none();
        rows.push(format!("{n}:{found} colorings"));
    }
    report(2, "m(n) even", ok, rows.join(" "), t);
}

fn odd_sweeps() -> Vec<(SweepSummary, Vec<ThreeColoring>)> {
    ["9", "15", "3,3"]
        .iter()
        .map(|s| sweep_odd(&g(s), 15).unwrap())
        .collect()
}

fn sweep_line(s: &SweepSummary) -> String {
    format!(
        "{}: {}/{} certified, {} failures",
        s.group,
        s.witnesses_found,
        s.rainbow_free_count,
        s.failures.len()
    )
}

#[test]
fn criterion_3_odd_completeness() {
    let t = Instant::now();
    let sweeps = odd_sweeps();
    let ok = sweeps
        .iter()
        .all(|(s, _)| s.passed() && s.rainbow_free_count > 0);
    let detail: Vec<String> = sweeps.iter().map(|(s, _)| sweep_line(s)).collect();
    report(3, "odd completeness", ok, detail.join("; "), t);
}

#[test]
fn criterion_4_even_completeness() {
    let t = Instant::now();
    let sweeps: Vec<SweepSummary> = ["6", "10", "12", "14"]
        .iter()
        .map(|s| sweep_even(&g(s), 14).unwrap().0)
        .collect();
    let ok = sweeps
        .iter()
        .all(|s| s.passed() && s.rainbow_free_count > 0);
    let detail: Vec<String> = sweeps.iter().map(sweep_line).collect();
    report(4, "even completeness", ok, detail.join("; "), t);
}

#[test]
fn criterion_5_sufficiency() {
    let t = Instant::now();
    let s = sufficiency_suite(20_240_601, 1000, 45).unwrap();
    let ok = s.colorings == 1000 && s.passed();
    let detail = format!(
        "{} colorings, {} invalid witnesses, {} not rainbow-free",
        s.colorings, s.witness_invalid, s.not_rainbow_free
    );
    report(5, "sufficiency", ok, detail, t);
}

#[test]
fn criterion_6_counterexample() {
    let t = Instant::now();
    let (group, c) = gen_counterexample_even(&g("3")).unwrap();
    let min = c.min_class_size();
    let bound = group.order() / 6;
    let ok = group.order() == 12
        && c.is_rainbow_free()
        && c.has_nonempty_classes()
        && min == 3
        && min > bound;
    let detail = format!(
        "order {}, min class {min}, floor(n/6) = {bound}",
        group.order()
    );
    report(6, "even counterexample", ok, detail, t);
}

#[test]
fn criterion_7_sumset_suite() {
    let t = Instant::now();
    let s = sumset_suite(20_240_601, 10_000, 49).unwrap();
    let ok = s.pairs >= 10_000
        && s.passed()
        && s.kst_instances > 0
        && s.grynkiewicz_instances > 0
        && s.fill_instances > 0;
    let detail = format!(
        "{} pairs over {} groups; kneser {} / kst {} of {} / grynkiewicz {} of {} / fill {} of {} violations",
        s.pairs,
        s.groups,
        s.kneser_violations,
        s.kst_violations,
        s.kst_instances,
        s.grynkiewicz_violations,
        s.grynkiewicz_instances,
        s.fill_violations,
        s.fill_instances
    );
    report(
        7,
        "sumset theorems",
        ok && t.elapsed().as_secs() < 120,
        detail,
        t,
    );
}

#[test]
fn criterion_8_three_cosets() {
    let t = Instant::now();
    let (mut applicable, mut equality, mut verified, mut violations) = (0, 0, 0, 0);
    let mut colorings = 0;
    for (_, cs) in odd_sweeps() {
        for c in &cs {
            let s = three_cosets_sweep(c).unwrap();
            applicable += s.applicable_instances;
            equality += s.equality_instances;
            verified += s.verified_k;
            violations += s.violations.len();
            colorings += 1;
        }
    }
    let ok = violations == 0 && equality == verified && applicable > 0;
    let detail = format!(
        "{colorings} colorings, {applicable} applicable, {equality} equality instances, {verified} verified K, {violations} violations"
    );
    report(8, "three cosets", ok, detail, t);
}

#[test]
fn criterion_9_prime_classes() {
    let t = Instant::now();
    use PrimeClass::{P0, P1};
    let expected = [
        (3, P0),
        (5, P0),
        (7, P0),
        (11, P0),
        (13, P0),
        (17, P1),
        (23, P0),
        (31, P1),
        (73, P1),
    ];
    let mut ok = true;
    let mut rows = Vec::new();
    for (p, want) in expected {
        let class = classify_prime(p).unwrap().class;
        ok &= class == want;
        if p <= 13 {
            // P1 exactly when some rainbow-free coloring has three nonempty classes.
            let exists =
                max_min_class(&FiniteAbelianGroup::cyclic(p).unwrap(), cap(p)).unwrap() > 0;
            ok &= exists == (class == P1);
        }
        rows.push(format!("{p}:{class:?}"));
    }
    report(9, "prime classes", ok, rows.join(" "), t);
}
