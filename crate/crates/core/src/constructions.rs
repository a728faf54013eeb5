//! Executable versions of the worked example monoids.
//!
//! * an atomic monoid whose atoms are dense in the nonnegative reals: the
//!   k-th atom is `m_k / p_k^{n_k}` with `p_k` the k-th prime, approximating
//!   the k-th term of a dense seed sequence to within `1/k`;
//! * the shifted Cantor endpoint monoid `<1 + E_d>`;
//! * monoids generated by increasing sequences from a fixed catalog.

use std::collections::HashSet;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::first_primes;
use crate::rational::{Rat, SignedRat};
use crate::spec::{MonoidSpec, TailForm};

/// Deterministic enumerations of positive rationals that are dense in `R>=0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SeedSequence {
    /// Level `j` lists the not-yet-seen `a/2^j` in `(0, max(1, j)]`, ascending.
    #[default]
    Dyadic,
    /// Calkin–Wilf order: 1, 1/2, 2, 1/3, 3/2, 2/3, 3, ...
    CalkinWilf,
}

impl std::str::FromStr for SeedSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dyadic" => Ok(SeedSequence::Dyadic),
            "calkin_wilf" | "calkin-wilf" => Ok(SeedSequence::CalkinWilf),
            other => Err(Error::InvalidArgument(format!("unknown seed sequence {other:?}"))),
        }
    }
}

/// First `count` terms of a seed sequence.
pub fn seed_terms(seed: SeedSequence, count: usize) -> Vec<Rat> {
    let mut out = Vec::with_capacity(count);
    match seed {
        SeedSequence::CalkinWilf => {
            let mut q = Rat::one();
            while out.len() < count {
                out.push(q.clone());
                // q' = 1 / (2 floor(q) - q + 1)
                let two_floor = Rat::integer(q.floor() * 2);
                let denom = (two_floor + Rat::one()).checked_sub(&q).expect("positive");
                q = Rat::one().checked_div(&denom).expect("nonzero");
            }
        }
        SeedSequence::Dyadic => {
            let mut seen = HashSet::new();
            let mut level = 0u32;
            while out.len() < count {
                let den = 1u64 << level;
                let range = (level as u64).max(1);
                for a in 1..=range * den {
                    let q = Rat::frac(a, den);
                    if seen.insert(q.clone()) {
                        out.push(q);
                        if out.len() == count {
                            break;
                        }
                    }
                }
                level += 1;
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DenseAtomEntry {
    pub k: usize,
    pub r_k: Rat,
    pub p_k: u64,
    pub n_k: u32,
    pub m_k: u64,
    pub atom: Rat,
    pub error: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DenseAtomsOutput {
    pub seed: SeedSequence,
    pub entries: Vec<DenseAtomEntry>,
}

/// Exponent rule: least `n` with `p^n > 4k`.
pub fn dense_atom_exponent(k: usize, p: u64) -> u32 {
    let bound = 4 * k as u128;
    let mut n = 1u32;
    let mut pow = p as u128;
    while pow <= bound {
        pow *= p as u128;
        n += 1;
    }
    n
}

/// The k-th entry given its seed term `r` and prime `p`.
pub fn dense_atom_entry(k: usize, r: &Rat, p: u64) -> DenseAtomEntry {
    let n = dense_atom_exponent(k, p);
    let pn = p.pow(n);
    let scaled = r.mul_int(pn) + Rat::frac(1, 2);
    let mut m = scaled
        .floor()
        .to_u64()
        .expect("seed term times prime power fits in u64");
    if m == 0 {
        m = 1;
    }
    if m % p == 0 {
        m += 1;
    }
    let atom = Rat::frac(m, pn);
    let error = r.signed_sub(&atom).abs();
    DenseAtomEntry {
        k,
        r_k: r.clone(),
        p_k: p,
        n_k: n,
        m_k: m,
        atom,
        error,
    }
}

/// The first `count` entries of the dense-atom construction.
pub fn dense_atom_entries(count: usize, seed: SeedSequence) -> Vec<DenseAtomEntry> {
    let seeds = seed_terms(seed, count);
    let primes = first_primes(count);
    seeds
        .iter()
        .zip(primes)
        .enumerate()
        .map(|(i, (r, p))| dense_atom_entry(i + 1, r, p))
        .collect()
}

pub fn build_dense_atoms(count: usize, seed: SeedSequence) -> Result<(DenseAtomsOutput, MonoidSpec)> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let entries = dense_atom_entries(count, seed);
    Ok((
        DenseAtomsOutput { seed, entries },
        MonoidSpec::DenseAtoms { count, seed },
    ))
}

/// Endpoints of the intervals left after `depth` middle-third removals,
/// ascending, as triadic rationals.
pub fn cantor_endpoints(depth: u32) -> Vec<Rat> {
    let den = 3u64.pow(depth);
    let mut intervals = vec![(0u64, den)];
    for _ in 0..depth {
        intervals = intervals
            .into_iter()
            .flat_map(|(a, b)| {
                let third = (b - a) / 3;
                [(a, a + third), (b - third, b)]
            })
            .collect();
    }
    intervals
        .into_iter()
        .flat_map(|(a, b)| [a, b])
        .map(|x| Rat::frac(x, den))
        .collect()
}

/// Largest supported Cantor depth (3^depth must fit comfortably in u64).
pub const MAX_CANTOR_DEPTH: u32 = 30;

pub fn build_cantor_shift(depth: u32) -> Result<(MonoidSpec, Vec<Rat>)> {
    if depth == 0 || depth > MAX_CANTOR_DEPTH {
        return Err(Error::InvalidArgument(format!(
            "cantor depth must be in 1..={MAX_CANTOR_DEPTH}, got {depth}"
        )));
    }
    let gens = cantor_endpoints(depth)
        .into_iter()
        .map(|e| Rat::one() + e)
        .collect();
    Ok((MonoidSpec::CantorShift { depth }, gens))
}

/// Catalog of closed forms for increasing generating sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IncreasingForm {
    /// `a_k = offset + step * k`
    Affine { offset: SignedRat, step: Rat },
    /// `a_k = limit - coeff / k`
    Harmonic { limit: Rat, coeff: Rat },
    /// `a_k = limit - 1 / p_k`
    PrimeReciprocal { limit: Rat },
    /// `a_k = ratio^k`, mapped onto the geometric family
    Geometric { ratio: Rat },
}

pub fn build_increasing(form: IncreasingForm, prefix: Vec<Rat>) -> Result<MonoidSpec> {
    let tail = match form {
        IncreasingForm::Geometric { ratio } => {
            if ratio <= Rat::one() {
                return Err(Error::InvalidArgument(format!(
                    "geometric ratio {ratio} does not give an increasing sequence"
                )));
            }
            if !prefix.is_empty() {
                return Err(Error::InvalidArgument(
                    "the geometric form takes no prefix".into(),
                ));
            }
            return Ok(MonoidSpec::Geometric { ratio });
        }
        IncreasingForm::Affine { offset, step } => TailForm::Affine { offset, step },
        IncreasingForm::Harmonic { limit, coeff } => TailForm::Harmonic { limit, coeff },
        IncreasingForm::PrimeReciprocal { limit } => TailForm::PrimeReciprocal { limit },
    };
    let bounded = tail.limit().is_some();
    let spec = MonoidSpec::Increasing {
        prefix,
        limit: tail.limit(),
        tail,
        bounded,
    };
    spec.validate()?;
    Ok(spec)
}
