//! Exact membership of a rational in the monoid spanned by a finite set.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::rational::{lcm_of_denominators, Rat};

/// Lattice sizes up to this bound use a reachability table.
const TABLE_LIMIT: u64 = 1 << 20;
const TABLE_WORK_LIMIT: u64 = 60_000_000;

/// Whether `x` is a nonnegative integer combination of `gens`.
pub(crate) fn finite_member(gens: &[Rat], x: &Rat) -> bool {
    finite_member_bounded(gens, x, u64::MAX).expect("unbounded search always finishes")
}

/// As [`finite_member`], giving up (`None`) after `max_nodes` search nodes.
pub(crate) fn finite_member_bounded(gens: &[Rat], x: &Rat, max_nodes: u64) -> Option<bool> {
    if x.is_zero() {
        return Some(true);
    }
    let mut usable: Vec<Rat> = gens
        .iter()
        .filter(|g| !g.is_zero() && *g <= x)
        .cloned()
        .collect();
    // largest denominators first, so the suffix lattices shrink as we go
    usable.sort_unstable_by(|a, b| b.denom().cmp(a.denom()).then_with(|| b.cmp(a)));
    usable.dedup();
    if usable.is_empty() {
        return Some(false);
    }
    if usable.contains(x) {
        return Some(true);
    }
    let l = lcm_of_denominators(usable.iter().chain(std::iter::once(x)));
    let scale = |q: &Rat| (q.as_ratio() * BigRational::from_integer(l.clone())).to_integer();
    if let Some(target) = scale(x).to_u64() {
        let work = target.saturating_mul(usable.len() as u64);
        if target <= TABLE_LIMIT && work <= TABLE_WORK_LIMIT {
            let ints: Vec<u64> = usable
                .iter()
                .map(|g| scale(g).to_u64().expect("generator below target"))
                .collect();
            return Some(table_member(&ints, target));
        }
    }
    let mut suffix_lcm = vec![BigInt::one(); usable.len() + 1];
    for i in (0..usable.len()).rev() {
        suffix_lcm[i] = suffix_lcm[i + 1].lcm(usable[i].denom());
    }
    let mut search = Search {
        gens: &usable,
        suffix_lcm,
        failed: HashSet::new(),
        nodes: 0,
        max_nodes,
    };
    search.dfs(0, x)
}

fn table_member(gens: &[u64], target: u64) -> bool {
    let mut reach = vec![false; target as usize + 1];
    reach[0] = true;
    for &g in gens {
        let g = g as usize;
        for v in g..reach.len() {
            if reach[v - g] {
                reach[v] = true;
            }
        }
    }
    reach[target as usize]
}

struct Search<'a> {
    gens: &'a [Rat],
    /// `suffix_lcm[i]`: lcm of the denominators of `gens[i..]`.
    suffix_lcm: Vec<BigInt>,
    failed: HashSet<(usize, Rat)>,
    nodes: u64,
    max_nodes: u64,
}

impl Search<'_> {
    fn dfs(&mut self, i: usize, rem: &Rat) -> Option<bool> {
        if rem.is_zero() {
            return Some(true);
        }
        // what is left must lie in the lattice of the remaining generators
        if i == self.gens.len() || !self.suffix_lcm[i].is_multiple_of(rem.denom()) {
            return Some(false);
        }
        let g = &self.gens[i];
        if i + 1 == self.gens.len() {
            return Some(rem.checked_div(g).is_some_and(|q| q.is_integer()));
        }
        if self.failed.contains(&(i, rem.clone())) {
            return Some(false);
        }
        // (rem - c g) must lie in the lattice of gens[i+1..], which fixes c
        // modulo the denominator of g in that lattice
        let lattice = BigRational::from_integer(self.suffix_lcm[i + 1].clone());
        let a = rem.as_ratio() * &lattice;
        let b = g.as_ratio() * &lattice;
        let period = b.denom().clone();
        let a_scaled = &a * BigRational::from_integer(period.clone());
        if !a_scaled.is_integer() {
            self.failed.insert((i, rem.clone()));
            return Some(false);
        }
        let inverse = b.numer().extended_gcd(&period).x;
        let first = (a_scaled.to_integer() * inverse).mod_floor(&period);
        let max = BigInt::from(rem.floor_div(g));
        let mut c = first;
        while c <= max {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return None;
            }
            let next = rem
                .checked_sub(&Rat::from_ratio(g.as_ratio() * BigRational::from_integer(c.clone())).expect("c >= 0"))
                .expect("c <= rem/g");
            if self.dfs(i + 1, &next)? {
                return Some(true);
            }
            c += &period;
        }
        self.failed.insert((i, rem.clone()));
        Some(false)
    }
}
