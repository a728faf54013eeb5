//! Numerical monoids: cofinite submonoids of the nonnegative integers.
//!
//! Everything is derived from the Apéry table with respect to the smallest
//! generator `m`: entry `i` is the least element congruent to `i` mod `m`.
//! The table is filled by round-robin relaxation, one generator at a time,
//! walking each residue cycle of `a mod m` once, so a generator costs `O(m)`.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest modulus for which an Apéry table is materialized.
pub const MAX_MODULUS: u64 = 4_000_000;

const INF: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NumericalMonoid {
    minimal_generators: Vec<u64>,
    #[serde(skip)]
    apery: Vec<u64>,
    frobenius: i64,
}

/// Relaxes `table` (indexed by residues mod `table.len()`) with generator `a`.
fn relax(table: &mut [u64], a: u64) -> Result<()> {
    let m = table.len() as u64;
    let d = a.gcd(&m);
    let cycle = m / d;
    for class in 0..d {
        // start the walk at the cycle's current minimum
        let mut best = INF;
        let mut start = class;
        let mut r = class;
        while r < m {
            if table[r as usize] < best {
                best = table[r as usize];
                start = r;
            }
            r += d;
        }
        if best == INF {
            continue;
        }
        let mut n = best;
        let mut r = start;
        for _ in 1..cycle {
            n = n.checked_add(a).ok_or_else(|| Error::LatticeTooLarge {
                what: "Apéry entry",
                size: format!("{n} + {a}"),
            })?;
            r = (r + a) % m;
            let slot = &mut table[r as usize];
            if *slot < n {
                n = *slot;
            } else {
                *slot = n;
            }
        }
    }
    Ok(())
}

fn empty_table(m: u64) -> Result<Vec<u64>> {
    if m > MAX_MODULUS {
        return Err(Error::LatticeTooLarge {
            what: "Apéry modulus",
            size: m.to_string(),
        });
    }
    let mut t = vec![INF; m as usize];
    t[0] = 0;
    Ok(t)
}

impl NumericalMonoid {
    /// Builds the monoid generated by `gens`, keeping only minimal generators.
    pub fn from_generators(gens: &[u64]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        if gens.contains(&0) {
            return Err(Error::NotPositive("0".into()));
        }
        let g = gens.iter().fold(0u64, |acc, &x| acc.gcd(&x));
        if g != 1 {
            return Err(Error::NotCofinite(g));
        }
        let mut sorted = gens.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let m = sorted[0];
        let mut apery = empty_table(m)?;
        let mut minimal = vec![m];
        for &a in &sorted[1..] {
            // only smaller generators can appear in a representation of `a`
            if apery[(a % m) as usize] <= a {
                continue;
            }
            relax(&mut apery, a)?;
            minimal.push(a);
        }
        let max = *apery.iter().max().expect("nonempty table");
        debug_assert!(max != INF, "gcd 1 leaves no residue unreachable");
        Ok(NumericalMonoid {
            minimal_generators: minimal,
            frobenius: max as i64 - m as i64,
            apery,
        })
    }

    /// The unique minimal generating set, which is also the atom set.
    pub fn minimal_generators(&self) -> &[u64] {
        &self.minimal_generators
    }

    /// Smallest nonzero element.
    pub fn multiplicity(&self) -> u64 {
        self.minimal_generators[0]
    }

    /// Apéry table with respect to the multiplicity.
    pub fn apery(&self) -> &[u64] {
        &self.apery
    }

    /// Apéry table with respect to an arbitrary element `m` of the monoid.
    pub fn apery_set(&self, m: u64) -> Result<Vec<u64>> {
        if m == 0 || !self.contains(m) {
            return Err(Error::NotAnElement(m.to_string()));
        }
        if m == self.multiplicity() {
            return Ok(self.apery.clone());
        }
        let mut table = empty_table(m)?;
        for &a in &self.minimal_generators {
            if a % m != 0 {
                relax(&mut table, a)?;
            }
        }
        Ok(table)
    }

    /// Largest integer not in the monoid; `-1` for the whole of `N0`.
    pub fn frobenius(&self) -> i64 {
        self.frobenius
    }

    /// Least element `c` with every integer `>= c` in the monoid.
    pub fn conductor(&self) -> u64 {
        (self.frobenius + 1) as u64
    }

    pub fn contains(&self, x: u64) -> bool {
        let m = self.multiplicity();
        self.apery[(x % m) as usize] <= x
    }

    /// Membership for a signed input; negative values are rejected.
    pub fn member(&self, x: i64) -> Result<bool> {
        if x < 0 {
            return Err(Error::Negative(x.to_string()));
        }
        Ok(self.contains(x as u64))
    }

    /// All gaps (nonnegative integers outside the monoid), ascending.
    pub fn gaps(&self) -> Vec<u64> {
        (1..self.conductor()).filter(|&x| !self.contains(x)).collect()
    }
}
