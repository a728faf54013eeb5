//! Brute-force ground truth: enumerate elements, then read off atoms and
//! factorizations by exhaustive search. Written for obviousness.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::atoms::Factorization;
use crate::error::{Error, Result};
use crate::rational::{lcm_of_denominators, Rat};
use crate::spec::MonoidSpec;

/// Default cap on enumerated elements (and on dense lattice size).
pub const ENUMERATION_CAP: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Enumeration {
    /// Sorted, deduplicated, always containing 0.
    pub elements: Vec<Rat>,
    pub generator_count: usize,
    pub max_coefficient: u64,
    pub bound: Rat,
    /// Every generator left out exceeds `bound`.
    pub complete: bool,
}

impl Enumeration {
    pub fn contains(&self, x: &Rat) -> bool {
        self.elements.binary_search(x).is_ok()
    }
}

/// Whether every generator outside the first `depth` exceeds `t`.
fn omitted_exceed(spec: &MonoidSpec, depth: usize, t: &Rat) -> bool {
    if let Some(size) = spec.finite_size() {
        if depth >= size {
            return true;
        }
    }
    match spec {
        // every shifted generator is at least 1
        MonoidSpec::PrimeReciprocalShift { max_prime: None } => *t < Rat::one(),
        MonoidSpec::DenseAtoms { .. } => false,
        // the other canonical orders are monotone, so the first omitted
        // generator is the smallest (increasing) or largest (decreasing) one
        _ => spec.generator_stream(depth + 1).get(depth).map_or(true, |g| g > t),
    }
}

/// All sums of the first `depth` generators lying in `[0, t]`.
pub fn enumerate(spec: &MonoidSpec, t: &Rat, depth: usize) -> Result<Enumeration> {
    enumerate_with_cap(spec, t, depth, ENUMERATION_CAP)
}

pub fn enumerate_with_cap(spec: &MonoidSpec, t: &Rat, depth: usize, cap: usize) -> Result<Enumeration> {
    if t.is_zero() || depth == 0 {
        return Err(Error::InvalidArgument("enumeration needs T > 0 and depth >= 1".into()));
    }
    let gens: Vec<Rat> = spec
        .generator_stream(depth)
        .into_iter()
        .filter(|g| g <= t)
        .collect();
    let complete = omitted_exceed(spec, depth, t);
    let elements = sums_up_to(&gens, t, cap)?;
    Ok(Enumeration {
        elements,
        generator_count: gens.len(),
        max_coefficient: gens.iter().map(|g| t.floor_div(g)).max().unwrap_or(0),
        bound: t.clone(),
        complete,
    })
}

/// Enumerates the submonoid spanned by a finite set, up to `t`.
pub fn sums_up_to(gens: &[Rat], t: &Rat, cap: usize) -> Result<Vec<Rat>> {
    let budget_error = |what: &str| Error::Budget {
        detail: format!("{what} (generators {}, T = {t}, cap {cap})", gens.len()),
    };
    if gens.is_empty() {
        return Ok(vec![Rat::zero()]);
    }
    let lcm = lcm_of_denominators(gens);
    let to_int = |q: &Rat| (q.as_ratio() * BigRational::from_integer(lcm.clone())).floor().to_integer();
    let top = to_int(t).to_usize().filter(|&n| n < cap);
    if let Some(top) = top {
        let ints: Vec<usize> = gens.iter().map(|g| to_int(g).to_usize().expect("g <= t")).collect();
        let mut reach = vec![false; top + 1];
        reach[0] = true;
        for v in 1..=top {
            reach[v] = ints.iter().any(|&g| g <= v && reach[v - g]);
        }
        let out: Vec<Rat> = (0..=top)
            .filter(|&v| reach[v])
            .map(|v| Rat::from_ratio(BigRational::new(v.into(), lcm.clone())).expect("nonnegative"))
            .collect();
        return Ok(out);
    }
    // sparse closure, smallest element first
    let mut seen: BTreeSet<Rat> = BTreeSet::from([Rat::zero()]);
    let mut frontier: BTreeSet<Rat> = BTreeSet::from([Rat::zero()]);
    while let Some(e) = frontier.pop_first() {
        for g in gens {
            let s = &e + g;
            if &s > t {
                continue;
            }
            if seen.insert(s.clone()) {
                if seen.len() > cap {
                    return Err(budget_error("element cap exceeded"));
                }
                frontier.insert(s);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Elements of `(0, T]` with no decomposition into two nonzero elements.
pub fn naive_atoms(e: &Enumeration) -> Result<Vec<Rat>> {
    if !e.complete {
        return Err(Error::IncompleteEnumeration(format!(
            "{} generators up to {}",
            e.generator_count, e.bound
        )));
    }
    let set: HashSet<&Rat> = e.elements.iter().collect();
    let mut out = Vec::new();
    for x in e.elements.iter().skip(1) {
        let decomposes = e
            .elements
            .iter()
            .skip(1)
            .take_while(|u| u.mul_int(2) <= *x)
            .any(|u| x.checked_sub(u).is_some_and(|v| set.contains(&v)));
        if !decomposes {
            out.push(x.clone());
        }
    }
    Ok(out)
}

/// Every factorization of `x` over `atoms` by exhaustive nested search.
pub fn naive_factorizations(e: &Enumeration, atoms: &[Rat], x: &Rat) -> Result<Vec<Factorization>> {
    if !e.complete || x > &e.bound {
        return Err(Error::IncompleteEnumeration(format!(
            "x = {x} against an enumeration up to {} (complete: {})",
            e.bound, e.complete
        )));
    }
    let mut atoms: Vec<Rat> = atoms.iter().filter(|a| *a <= x).cloned().collect();
    atoms.sort();
    atoms.dedup();
    let mut memo = HashMap::new();
    let mut out: Vec<Factorization> = solve(&atoms, atoms.len(), x, &mut memo)
        .into_iter()
        .map(|counts| Factorization::new(atoms.iter().cloned().zip(counts).collect()))
        .collect();
    out.sort();
    Ok(out)
}

type Memo = HashMap<(usize, Rat), Vec<Vec<u64>>>;

/// Count vectors (over `atoms[..n]`) summing to `x`.
fn solve(atoms: &[Rat], n: usize, x: &Rat, memo: &mut Memo) -> Vec<Vec<u64>> {
    if n == 0 {
        return if x.is_zero() { vec![Vec::new()] } else { Vec::new() };
    }
    if let Some(v) = memo.get(&(n, x.clone())) {
        return v.clone();
    }
    let a = &atoms[n - 1];
    let mut out = Vec::new();
    let mut c = 0u64;
    while let Some(rem) = x.checked_sub(&a.mul_int(c)) {
        for mut counts in solve(atoms, n - 1, &rem, memo) {
            counts.push(c);
            out.push(counts);
        }
        c += 1;
    }
    memo.insert((n, x.clone()), out.clone());
    out
}
