//! Atoms, factorizations and length sets.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::knapsack::finite_member;
use crate::rational::{lcm_of_denominators, Rat};
use crate::spec::{canonicalize, prime_shift_relevant_generators, MonoidSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AtomicityKind {
    Atomic,
    Antimatter,
    NotAtomic,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtomicityVerdict {
    pub kind: AtomicityKind,
    pub atoms_shown: Vec<Rat>,
    /// More atoms exist than are shown.
    pub truncated: bool,
    pub rule: String,
}

/// Keeps each term of an ascending list that is not a sum of earlier kept terms.
fn increasing_filter(sorted: &[Rat]) -> Vec<Rat> {
    let mut atoms: Vec<Rat> = Vec::new();
    for g in sorted {
        if atoms.last() == Some(g) {
            continue;
        }
        if !finite_member(&atoms, g) {
            atoms.push(g.clone());
        }
    }
    atoms
}

/// Every atom of a finitely generated monoid, ascending.
fn fg_atoms(gens: &[Rat]) -> Result<Vec<Rat>> {
    match canonicalize(gens) {
        Ok(c) => Ok(c.atoms()),
        Err(Error::LatticeTooLarge { .. }) => {
            let mut sorted = gens.to_vec();
            sorted.sort();
            Ok(increasing_filter(&sorted))
        }
        Err(e) => Err(e),
    }
}

/// Atomicity verdict with up to `limit` atoms listed (finite generator lists
/// always show the full minimal generating set).
pub fn atoms(spec: &MonoidSpec, limit: usize) -> Result<AtomicityVerdict> {
    if limit == 0 {
        return Err(Error::InvalidArgument("limit must be at least 1".into()));
    }
    let atomic = |mut shown: Vec<Rat>, more: bool, rule: &str| {
        let truncated = more || shown.len() > limit;
        shown.truncate(limit);
        AtomicityVerdict {
            kind: AtomicityKind::Atomic,
            atoms_shown: shown,
            truncated,
            rule: rule.to_string(),
        }
    };
    if let MonoidSpec::Finite { .. } = spec {
        let gens = spec.fg_generators()?.expect("finite");
        return Ok(AtomicityVerdict {
            kind: AtomicityKind::Atomic,
            atoms_shown: fg_atoms(&gens)?,
            truncated: false,
            rule: "finitely generated: atoms are the minimal generators".into(),
        });
    }
    if spec.b_adic_base().is_some() {
        return Ok(AtomicityVerdict {
            kind: AtomicityKind::Antimatter,
            atoms_shown: Vec::new(),
            truncated: false,
            rule: "every generator 1/b^n equals b copies of 1/b^(n+1)".into(),
        });
    }
    Ok(match spec {
        MonoidSpec::Geometric { ratio } if ratio.is_integer() => atomic(
            vec![Rat::one()],
            false,
            "integer ratio: the monoid is N0",
        ),
        MonoidSpec::Geometric { ratio } if *ratio < Rat::one() => AtomicityVerdict {
            kind: AtomicityKind::Unknown,
            atoms_shown: Vec::new(),
            truncated: false,
            rule: "geometric ratio below 1 with numerator above 1: no criterion available".into(),
        },
        MonoidSpec::CantorShift { .. } | MonoidSpec::PrimeReciprocalShift { max_prime: Some(_) } => {
            let gens = spec.fg_generators()?.expect("finite family");
            atomic(fg_atoms(&gens)?, false, "finitely generated: increasing-atom filter")
        }
        MonoidSpec::PrimeReciprocalShift { max_prime: None } => {
            let shown = spec
                .generator_stream(limit)
                .into_iter()
                .filter(|g| !finite_member(&prime_shift_relevant_generators(g, Some(g)), g))
                .collect();
            atomic(shown, true, "prime reciprocal shift: every generator is an atom")
        }
        MonoidSpec::DenseAtoms { .. } => atomic(
            spec.generator_stream(limit),
            true,
            "distinct prime denominators: every generator is an atom",
        ),
        MonoidSpec::Increasing { .. } | MonoidSpec::Geometric { .. } => {
            if let Some(gens) = spec.fg_generators()? {
                atomic(fg_atoms(&gens)?, false, "finitely generated increasing sequence: minimal generators")
            } else {
                atomic(
                    increasing_filter(&spec.generator_stream(limit)),
                    true,
                    "increasing sequence: a_k is an atom iff it is not in <a_1, ..., a_(k-1)>",
                )
            }
        }
        MonoidSpec::Finite { .. } | MonoidSpec::UnitFractionPowers { .. } => unreachable!(),
    })
}

/// A factorization: atoms with multiplicities, atoms in descending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Factorization {
    pub parts: Vec<(Rat, u64)>,
    pub length: u64,
}

impl Factorization {
    pub fn new(mut parts: Vec<(Rat, u64)>) -> Factorization {
        parts.retain(|(_, c)| *c > 0);
        parts.sort_by(|a, b| b.0.cmp(&a.0));
        let length = parts.iter().map(|(_, c)| c).sum();
        Factorization { parts, length }
    }

    /// The element this factorization evaluates to.
    pub fn value(&self) -> Rat {
        self.parts.iter().map(|(a, c)| a.mul_int(*c)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorizationSet {
    pub factorizations: Vec<Factorization>,
    /// False when atoms were truncated or the budget ran out.
    pub complete: bool,
    pub atoms_used: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LengthSet {
    pub lengths: BTreeSet<u64>,
    pub complete: bool,
}

/// Generators taken from an infinite supply of atoms below `x`.
pub const TRUNCATED_ATOMS: usize = 64;

/// Atoms `<= x` and whether the list is every such atom.
fn atoms_below(spec: &MonoidSpec, x: &Rat) -> Result<(Vec<Rat>, bool)> {
    if spec.b_adic_base().is_some() {
        return Err(Error::NoAtoms);
    }
    let keep = |v: Vec<Rat>| -> Vec<Rat> { v.into_iter().filter(|a| a <= x).collect() };
    if let Some(gens) = spec.fg_generators()? {
        return Ok((keep(fg_atoms(&gens)?), true));
    }
    match spec {
        MonoidSpec::Geometric { ratio } if *ratio < Rat::one() => {
            Err(Error::AtomsUnknown(format!("geometric ratio {ratio}")))
        }
        MonoidSpec::PrimeReciprocalShift { max_prime: None } => {
            // a prime p > x with p not dividing d(x) cannot occur in a factorization
            Ok((prime_shift_relevant_generators(x, None), true))
        }
        MonoidSpec::DenseAtoms { .. } => {
            let (gens, _) = spec.generators_up_to(x, TRUNCATED_ATOMS);
            Ok((gens, false))
        }
        _ => {
            let (gens, complete) = spec.generators_up_to(x, TRUNCATED_ATOMS);
            Ok((increasing_filter(&gens), complete))
        }
    }
}

/// Upper limit on search nodes per unit of budget.
const NODES_PER_BUDGET: u64 = 10_000;

/// All factorizations of `x`, at most `budget` of them. When infinitely many
/// atoms lie below `x`, only the first [`TRUNCATED_ATOMS`] are used and the
/// result is flagged incomplete.
pub fn factorizations(spec: &MonoidSpec, x: &Rat, budget: usize) -> Result<FactorizationSet> {
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    let (mut atoms, atoms_complete) = atoms_below(spec, x)?;
    atoms.sort_by(|a, b| b.cmp(a));
    atoms.dedup();
    let mut search = Search {
        out: Vec::new(),
        max_out: budget,
        nodes: 0,
        max_nodes: NODES_PER_BUDGET.saturating_mul(budget as u64),
        exhausted: false,
    };
    search.run(&atoms, x);
    let mut factorizations = search.out;
    factorizations.sort_by(|a, b| b.cmp(a));
    Ok(FactorizationSet {
        factorizations,
        complete: atoms_complete && !search.exhausted,
        atoms_used: atoms,
    })
}

pub fn length_set(spec: &MonoidSpec, x: &Rat, budget: usize) -> Result<LengthSet> {
    let set = factorizations(spec, x, budget)?;
    Ok(LengthSet {
        lengths: set.factorizations.iter().map(|z| z.length).collect(),
        complete: set.complete,
    })
}

struct Search {
    out: Vec<Factorization>,
    max_out: usize,
    nodes: u64,
    max_nodes: u64,
    exhausted: bool,
}

impl Search {
    fn run(&mut self, atoms: &[Rat], x: &Rat) {
        if atoms.is_empty() {
            if x.is_zero() {
                self.out.push(Factorization::new(Vec::new()));
            }
            return;
        }
        let lcm = lcm_of_denominators(atoms.iter().chain(std::iter::once(x)));
        let scale = |q: &Rat| (q.as_ratio() * BigRational::from_integer(lcm.clone())).to_integer();
        let target = scale(x);
        let ints: Vec<BigInt> = atoms.iter().map(scale).collect();
        let small = target.to_u64().filter(|&t| t <= 1 << 20 && t * atoms.len() as u64 <= 60_000_000);
        let reach = small.map(|t| suffix_reachability(&ints, t));
        let mut counts = vec![0u64; atoms.len()];
        self.dfs(atoms, &ints, reach.as_deref(), 0, target, &mut counts);
    }

    fn dfs(
        &mut self,
        atoms: &[Rat],
        ints: &[BigInt],
        reach: Option<&[Vec<bool>]>,
        i: usize,
        rem: BigInt,
        counts: &mut Vec<u64>,
    ) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes || self.out.len() >= self.max_out {
            self.exhausted = true;
            return;
        }
        if rem.is_zero() {
            let parts = atoms.iter().cloned().zip(counts.iter().copied()).collect();
            self.out.push(Factorization::new(parts));
            return;
        }
        if i == atoms.len() {
            return;
        }
        if let Some(reach) = reach {
            if !reach[i][rem.to_usize().expect("small target")] {
                return;
            }
        }
        let a = &ints[i];
        if i + 1 == atoms.len() {
            if (&rem % a).is_zero() {
                counts[i] = (&rem / a).to_u64().expect("bounded by target");
                self.dfs(atoms, ints, reach, i + 1, BigInt::zero(), counts);
                counts[i] = 0;
            }
            return;
        }
        let max = (&rem / a).to_u64().unwrap_or(u64::MAX);
        for c in (0..=max).rev() {
            counts[i] = c;
            let next = &rem - a * BigInt::from(c);
            self.dfs(atoms, ints, reach, i + 1, next, counts);
            if self.exhausted {
                break;
            }
        }
        counts[i] = 0;
    }
}

/// `reach[i][v]`: `v` is a combination of `ints[i..]`.
fn suffix_reachability(ints: &[BigInt], target: u64) -> Vec<Vec<bool>> {
    let n = ints.len();
    let mut reach = vec![vec![false; target as usize + 1]; n + 1];
    reach[n][0] = true;
    for i in (0..n).rev() {
        let a = ints[i].to_usize().unwrap_or(usize::MAX);
        let (head, tail) = reach.split_at_mut(i + 1);
        let row = &mut head[i];
        let below = &tail[0];
        for v in 0..=target as usize {
            row[v] = below[v] || (v >= a && row[v - a]);
        }
    }
    reach
}
