//! Prime classes, the value of `m(n)` and the extremal constructions.

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, ThreeColoring};
use crate::enumerate::max_min_class;
use crate::error::{Error, Result};
use crate::group::{gcd, FiniteAbelianGroup};
use crate::structure::RegularityWitness;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in ascending order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Least `k ≥ 1` with `a^k ≡ 1 (mod p)`.
pub fn multiplicative_order(a: i64, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let a = a.rem_euclid(p as i64) as u64;
    if gcd(a, p) != 1 {
        return Err(Error::NotInvertible { a: a as i64, p });
    }
    let mut x = a % p;
    let mut k = 1;
    while x != 1 % p {
        x = x * a % p;
        k += 1;
    }
    Ok(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrimeClass {
    P0,
    P1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeClassification {
    pub p: u64,
    pub ord2: u64,
    pub class: PrimeClass,
}

/// P0 when 2 has order `p-1`, or order `(p-1)/2` with `(p-1)/2` odd; P1 otherwise.
pub fn classify_prime(p: u64) -> Result<PrimeClassification> {
    if p == 2 {
        return Err(Error::OddPrimeRequired(p));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let ord2 = multiplicative_order(2, p)?;
    let half = (p - 1) / 2;
    let class = if ord2 == p - 1 || (ord2 == half && half % 2 == 1) {
        PrimeClass::P0
    } else {
        PrimeClass::P1
    };
    Ok(PrimeClassification { p, ord2, class })
}

/// Whether `Z/n` has a rainbow-free coloring with three nonempty classes.
pub fn exists_rainbow_free(n: u64) -> bool {
    if n == 0 || n.is_power_of_two() {
        return false;
    }
    if is_prime(n) {
        return classify_prime(n)
            .map(|c| c.class == PrimeClass::P1)
            .unwrap_or(false);
    }
    true
}

/// `(p, q)`: the smallest odd prime factors of `n` in P0 and in P1.
pub fn formula_primes(n: u64) -> (Option<u64>, Option<u64>) {
    let mut p = None;
    let mut q = None;
    for f in prime_factors(n).into_iter().filter(|&f| f != 2) {
        match classify_prime(f).expect("odd prime factor").class {
            PrimeClass::P0 if p.is_none() => p = Some(f),
            PrimeClass::P1 if q.is_none() => q = Some(f),
            _ => {}
        }
    }
    (p, q)
}

/// `⌊n / min{2p, q}⌋`, minimising over whichever of `p`, `q` exist. `None` for
/// powers of 2.
pub fn m_formula(n: u64) -> Option<u64> {
    if n == 0 || n.is_power_of_two() {
        return None;
    }
    let (p, q) = formula_primes(n);
    let denom = [p.map(|p| 2 * p), q].into_iter().flatten().min()?;
    Some(n / denom)
}

/// Largest smallest-class size over all rainbow-free colorings of `group`.
pub fn m_search(group: &FiniteAbelianGroup, max_order: usize) -> Result<u64> {
    Ok(max_min_class(group, max_order)? as u64)
}

/// One row of the `m(n)` table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MnResult {
    pub n: u64,
    pub p: Option<u64>,
    pub q: Option<u64>,
    /// Formula value; `None` when `n` is a power of 2.
    pub formula: Option<u64>,
    /// Exhaustive-search value.
    pub search: Option<u64>,
    /// Formula and search agree, reading a missing formula value as 0.
    pub agree: Option<bool>,
}

impl MnResult {
    pub fn compute(n: u64, search: bool, max_order: usize) -> Result<Self> {
        let (p, q) = formula_primes(n);
        let formula = m_formula(n);
        let search = if search {
            Some(m_search(&FiniteAbelianGroup::cyclic(n)?, max_order)?)
        } else {
            None
        };
        let agree = search.map(|s| formula.unwrap_or(0) == s);
        Ok(MnResult {
            n,
            p,
            q,
            formula,
            search,
            agree,
        })
    }
}

/// `⌊n/2r⌋ ≤ m ≤ min(n/6, n/q̂)` with `r` the smallest odd and `q̂` the smallest
/// prime factor of `n`.
pub fn bounds_check(n: u64, m: u64) -> bool {
    if n == 0 || n.is_power_of_two() {
        return false;
    }
    let factors = prime_factors(n);
    let smallest = factors[0];
    let r = *factors
        .iter()
        .find(|&&f| f != 2)
        .expect("n has an odd factor");
    n / (2 * r) <= m && 6 * m <= n && m * smallest <= n
}

#[derive(Debug, Clone)]
pub struct ExtremalColoring {
    pub coloring: ThreeColoring,
    pub witness: RegularityWitness,
}

/// A coloring of an odd-order group whose smallest class has size
/// `m_formula(|G|)`, with its natural witness.
pub fn gen_extremal_odd(group: &FiniteAbelianGroup) -> Result<ExtremalColoring> {
    group.require_odd()?;
    let n = group.order() as u64;
    if n == 1 {
        return Err(Error::Precondition("group has no odd prime factor".into()));
    }
    let (p, q) = formula_primes(n);
    let use_p = match (p, q) {
        (Some(p), Some(q)) => 2 * p <= q,
        (Some(_), None) => true,
        _ => false,
    };
    let subgroups = group.subgroups()?;
    if use_p {
        let p = p.expect("p exists");
        let h = subgroups
            .into_iter()
            .find(|h| h.order() as u64 == n / p)
            .expect("abelian groups have subgroups of every divisor order");
        let a_size = (n / (2 * p)) as usize;
        let members = h.members();
        let a: Vec<usize> = members[..a_size].to_vec();
        let coloring = ThreeColoring::from_fn(group, |x| {
            if a.contains(&x) {
                Color::A
            } else if h.contains(x) {
                Color::B
            } else {
                Color::C
            }
        });
        Ok(ExtremalColoring {
            coloring,
            witness: RegularityWitness {
                translation: 0,
                subgroup: h,
                apex: Color::A,
            },
        })
    } else {
        let q = q.expect("q exists");
        let h = subgroups
            .into_iter()
            .find(|h| h.order() as u64 == n / q)
            .expect("abelian groups have subgroups of every divisor order");
        let base = gen_prime_coloring(q)?;
        let quotient = h.quotient();
        // G/H is cyclic of prime order; coset 1 generates it.
        let mut label_of_coset = vec![Color::A; quotient.len()];
        let mut cur = 0;
        for k in 0..q as usize {
            label_of_coset[cur] = base.label(k);
            cur = quotient.add(cur, 1);
        }
        let coloring = ThreeColoring::from_fn(group, |x| label_of_coset[quotient.project(x)]);
        Ok(ExtremalColoring {
            coloring,
            witness: RegularityWitness {
                translation: 0,
                subgroup: h,
                apex: Color::A,
            },
        })
    }
}

/// On `Z/p` with `p ∈ P1`: `A = {0}`, `B = ⟨2, -1⟩ ≤ (Z/p)^×`, `C` the rest.
pub fn gen_prime_coloring(p: u64) -> Result<ThreeColoring> {
    let class = classify_prime(p)?;
    if class.class == PrimeClass::P0 {
        return Err(Error::PrimeInP0(p));
    }
    let mut in_m = vec![false; p as usize];
    let mut stack = vec![1u64];
    in_m[1] = true;
    while let Some(x) = stack.pop() {
        for y in [2 * x % p, p - x] {
            if !in_m[y as usize] {
                in_m[y as usize] = true;
                stack.push(y);
            }
        }
    }
    let group = FiniteAbelianGroup::cyclic(p)?;
    Ok(ThreeColoring::from_fn(&group, |x| {
        if x == 0 {
            Color::A
        } else if in_m[x] {
            Color::B
        } else {
            Color::C
        }
    }))
}

/// `G = H ⊕ Z/2 ⊕ Z/2` colored by `H`-cosets: `(·,0,0) ↦ A`, `(·,1,0) ↦ B`,
/// the other two cosets `↦ C`.
pub fn gen_counterexample_even(
    h: &FiniteAbelianGroup,
) -> Result<(FiniteAbelianGroup, ThreeColoring)> {
    if h.order().is_power_of_two() {
        return Err(Error::PowerOfTwo(h.order()));
    }
    let g = h.direct_sum(&"2,2".parse()?)?;
    // The two trailing coordinates are the low bits of the index.
    let coloring = ThreeColoring::from_fn(&g, |x| match x % 4 {
        0 => Color::A,
        2 => Color::B,
        _ => Color::C,
    });
    Ok((g, coloring))
}
