//! Descriptions of Puiseux monoids.
//!
//! A [`MonoidSpec`] is either a finite generator list or one of a closed
//! catalog of infinite families. Every classifier in the crate dispatches on
//! the family, so arbitrary generator callbacks are not supported.
//!
//! The JSON form is the CLI input contract:
//!
//! ```json
//! {"variant":"finite","generators":["1/2","1/3"]}
//! {"variant":"geometric","ratio":"2/3"}
//! {"variant":"unit_fraction_powers","base":2}
//! {"variant":"increasing","prefix":[],"tail":{"form":"harmonic","limit":"2","coeff":"1/2"},"bounded":true,"limit":"2"}
//! {"variant":"prime_reciprocal_shift","max_prime":null}
//! {"variant":"cantor_shift","depth":3}
//! {"variant":"dense_atoms","count":200,"seed":"dyadic"}
//! ```
//!
//! Compact JSON in this key order round-trips byte for byte.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::constructions::{cantor_endpoints, dense_atom_entries, SeedSequence};
use crate::error::{Error, Result};
use crate::knapsack::{finite_member, finite_member_bounded};
use crate::numerical::NumericalMonoid;
use crate::primes::{first_primes, prime_index, primes_divide, primes_up_to};
use crate::rational::{lcm_of_denominators, Rat, SignedRat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum MonoidSpec {
    /// `<generators>`
    Finite { generators: Vec<Rat> },
    /// `<ratio^n | n >= 0>`
    Geometric { ratio: Rat },
    /// `<1/base^n | n >= 1>`
    UnitFractionPowers { base: u64 },
    /// Generated by `prefix` followed by the tail terms exceeding it.
    Increasing {
        prefix: Vec<Rat>,
        tail: TailForm,
        bounded: bool,
        limit: Option<Rat>,
    },
    /// `<1, 1 + 1/p | p prime, p <= max_prime>`; `null` means every prime.
    PrimeReciprocalShift { max_prime: Option<u64> },
    /// `<1 + e | e a Cantor endpoint after `depth` removals>`
    CantorShift { depth: u32 },
    /// The atomic monoid with dense atoms; `count` atoms are materialized.
    DenseAtoms { count: usize, seed: SeedSequence },
}

/// Closed forms for the tail of an increasing sequence, indexed by `k >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum TailForm {
    /// `offset + step * k`
    Affine { offset: SignedRat, step: Rat },
    /// `limit - coeff / k`
    Harmonic { limit: Rat, coeff: Rat },
    /// `limit - 1 / p_k`
    PrimeReciprocal { limit: Rat },
}

impl TailForm {
    pub fn limit(&self) -> Option<Rat> {
        match self {
            TailForm::Affine { .. } => None,
            TailForm::Harmonic { limit, .. } | TailForm::PrimeReciprocal { limit } => {
                Some(limit.clone())
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            TailForm::Affine { step, .. } if step.is_zero() => {
                Err(Error::InvalidSpec("affine tail needs a positive step".into()))
            }
            TailForm::Harmonic { coeff, .. } if coeff.is_zero() => {
                Err(Error::InvalidSpec("harmonic tail needs a positive coefficient".into()))
            }
            TailForm::Harmonic { limit, .. } | TailForm::PrimeReciprocal { limit }
                if limit.is_zero() =>
            {
                Err(Error::InvalidSpec("bounded tail needs a positive limit".into()))
            }
            _ => Ok(()),
        }
    }

    /// First tail index whose term exceeds `floor` (a nonnegative bound).
    fn first_index_above(&self, floor: &Rat) -> Result<u64> {
        let k = match self {
            TailForm::Affine { offset, step } => {
                // offset + step k > floor  <=>  k > (floor - offset) / step
                let q = (floor.as_ratio() - offset.as_ratio()) / step.as_ratio();
                q.floor().to_integer().max(BigInt::zero()) + 1
            }
            TailForm::Harmonic { limit, coeff } => {
                let gap = limit.checked_sub(floor).filter(|g| !g.is_zero()).ok_or_else(|| {
                    Error::InvalidSpec(format!("prefix reaches the tail limit {limit}"))
                })?;
                (coeff.as_ratio() / gap.as_ratio()).floor().to_integer() + 1
            }
            TailForm::PrimeReciprocal { limit } => {
                let gap = limit.checked_sub(floor).filter(|g| !g.is_zero()).ok_or_else(|| {
                    Error::InvalidSpec(format!("prefix reaches the tail limit {limit}"))
                })?;
                // need p_k > 1/gap
                let bound = Rat::one().checked_div(&gap).expect("gap > 0").floor();
                let bound = bound.to_u64().filter(|&b| b < 50_000_000).ok_or_else(|| {
                    Error::InvalidSpec("prefix too close to the tail limit".into())
                })?;
                BigInt::from(prime_index(bound) as u64 + 1)
            }
        };
        k.to_u64()
            .ok_or_else(|| Error::InvalidSpec("tail start index too large".into()))
    }

    /// Terms for indices `start, start+1, ...`, `count` of them.
    fn terms(&self, start: u64, count: usize) -> Vec<Rat> {
        match self {
            TailForm::Affine { offset, step } => (0..count as u64)
                .map(|i| {
                    let k = BigRational::from_integer((start + i).into());
                    Rat::from_ratio(offset.as_ratio() + step.as_ratio() * k)
                        .expect("tail terms past the start index are positive")
                })
                .collect(),
            TailForm::Harmonic { limit, coeff } => (0..count as u64)
                .map(|i| {
                    limit
                        .checked_sub(&coeff.div_int(start + i))
                        .expect("tail terms past the start index are positive")
                })
                .collect(),
            TailForm::PrimeReciprocal { limit } => {
                let primes = first_primes(start as usize - 1 + count);
                primes[start as usize - 1..]
                    .iter()
                    .map(|&p| limit.checked_sub(&Rat::frac(1, p)).expect("positive"))
                    .collect()
            }
        }
    }
}

/// Verdict of a membership query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Membership {
    In,
    Out,
    Unknown(Undecided),
}

/// Why a budgeted question was left open.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Undecided {
    pub generator_depth: usize,
    pub reason: String,
}

/// A finitely generated monoid written as `scale * N` for a numerical monoid `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalFG {
    pub scale: Rat,
    pub nm: NumericalMonoid,
    #[serde(serialize_with = "crate::rational::ser_bigint")]
    pub lcm: BigInt,
    #[serde(serialize_with = "crate::rational::ser_bigint")]
    pub gcd: BigInt,
}

/// `gcd(L*g_i) / L` for `L` the lcm of the denominators: the generator of
/// the group spanned by `gens`. Works for lattices too large to tabulate.
pub fn lattice_scale(gens: &[Rat]) -> Result<Rat> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let lcm = lcm_of_denominators(gens);
    let gcd = gens
        .iter()
        .fold(BigInt::zero(), |acc, g| acc.gcd(&(g.numer() * (&lcm / g.denom()))));
    Rat::new(gcd, lcm)
}

/// Normalizes a finite generating set: with `L` the lcm of the denominators
/// and `g` the gcd of the integers `L*g_i`, the map `x -> x * L / g` is an
/// isomorphism onto the numerical monoid generated by the `L*g_i / g`.
pub fn canonicalize(gens: &[Rat]) -> Result<CanonicalFG> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    if let Some(z) = gens.iter().find(|g| g.is_zero()) {
        return Err(Error::NotPositive(z.to_string()));
    }
    let lcm = lcm_of_denominators(gens);
    let scaled: Vec<BigInt> = gens
        .iter()
        .map(|g| g.numer() * (&lcm / g.denom()))
        .collect();
    let gcd = scaled.iter().fold(BigInt::zero(), |acc, h| acc.gcd(h));
    let ints = scaled
        .iter()
        .map(|h| {
            (h / &gcd).to_u64().ok_or_else(|| Error::LatticeTooLarge {
                what: "scaled generator",
                size: (h / &gcd).to_string(),
            })
        })
        .collect::<Result<Vec<u64>>>()?;
    let nm = NumericalMonoid::from_generators(&ints)?;
    Ok(CanonicalFG {
        scale: Rat::new(gcd.clone(), lcm.clone())?,
        nm,
        lcm,
        gcd,
    })
}

impl CanonicalFG {
    /// `x / scale` when it is an integer.
    pub fn to_lattice(&self, x: &Rat) -> Option<BigInt> {
        let q = x.checked_div(&self.scale)?;
        q.is_integer().then(|| q.numer().clone())
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let Some(n) = self.to_lattice(x) else {
            return false;
        };
        if n > BigInt::from(self.nm.frobenius()) {
            return true;
        }
        self.nm.contains(n.to_u64().expect("below the Frobenius number"))
    }

    /// Atoms: the scaled minimal generators, ascending.
    pub fn atoms(&self) -> Vec<Rat> {
        self.nm
            .minimal_generators()
            .iter()
            .map(|&a| self.scale.mul_int(a))
            .collect()
    }

    /// `scale * f(N)`, or `None` when `N = N0`.
    pub fn frobenius_element(&self) -> Option<Rat> {
        let f = self.nm.frobenius();
        (f >= 0).then(|| self.scale.mul_int(f as u64))
    }

    /// `scale * f(N)`, negative when `N = N0`.
    pub fn frobenius_value(&self) -> SignedRat {
        SignedRat::from_ratio(self.scale.as_ratio() * BigRational::from_integer(self.nm.frobenius().into()))
    }

    /// `scale * (f(N) + 1)`: least element of the conductor.
    pub fn conductor_element(&self) -> Rat {
        self.scale.mul_int(self.nm.conductor())
    }
}

/// Search nodes allowed per generator in truncated membership searches.
const SEARCH_NODES_PER_GENERATOR: u64 = 2_000;

/// Upper bound on generators scanned while deriving a finite generating set.
const FG_SCAN_LIMIT: usize = 20_000;

impl MonoidSpec {
    pub fn finite(generators: Vec<Rat>) -> Result<MonoidSpec> {
        let spec = MonoidSpec::Finite { generators };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_json(text: &str) -> Result<MonoidSpec> {
        let spec: MonoidSpec = serde_json::from_str(text)
            .map_err(|e| Error::InvalidSpec(format!("{e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("specs always serialize")
    }

    /// Checks the per-variant invariants.
    pub fn validate(&self) -> Result<()> {
        match self {
            MonoidSpec::Finite { generators } => {
                if generators.is_empty() {
                    return Err(Error::EmptyGenerators);
                }
                if let Some(z) = generators.iter().find(|g| g.is_zero()) {
                    return Err(Error::NotPositive(z.to_string()));
                }
            }
            MonoidSpec::Geometric { ratio } => {
                if ratio.is_zero() || *ratio == Rat::one() {
                    return Err(Error::InvalidSpec(format!(
                        "geometric ratio must be positive and different from 1, got {ratio}"
                    )));
                }
            }
            MonoidSpec::UnitFractionPowers { base } => {
                if *base < 2 {
                    return Err(Error::InvalidSpec(format!("base must be at least 2, got {base}")));
                }
            }
            MonoidSpec::Increasing {
                prefix,
                tail,
                bounded,
                limit,
            } => {
                tail.validate()?;
                if prefix.iter().any(|q| q.is_zero()) {
                    return Err(Error::InvalidSpec("prefix terms must be positive".into()));
                }
                if prefix.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::InvalidSpec("prefix must be strictly increasing".into()));
                }
                if *bounded != tail.limit().is_some() || *limit != tail.limit() {
                    return Err(Error::InvalidSpec(format!(
                        "bounded/limit metadata ({bounded}, {limit:?}) disagrees with the tail form"
                    )));
                }
                if let (Some(l), Some(last)) = (limit, prefix.last()) {
                    if last >= l {
                        return Err(Error::InvalidSpec(format!(
                            "prefix term {last} is not below the limit {l}"
                        )));
                    }
                }
                tail.first_index_above(prefix.last().unwrap_or(&Rat::zero()))?;
            }
            MonoidSpec::PrimeReciprocalShift { max_prime } => {
                if matches!(max_prime, Some(p) if *p < 2) {
                    return Err(Error::InvalidSpec("max_prime must be at least 2".into()));
                }
            }
            MonoidSpec::CantorShift { depth } => {
                if *depth == 0 || *depth > crate::constructions::MAX_CANTOR_DEPTH {
                    return Err(Error::InvalidSpec(format!("cantor depth out of range: {depth}")));
                }
            }
            MonoidSpec::DenseAtoms { count, .. } => {
                if *count == 0 {
                    return Err(Error::InvalidSpec("dense_atoms count must be at least 1".into()));
                }
            }
        }
        Ok(())
    }

    /// Number of generators when the family is finite.
    pub fn finite_size(&self) -> Option<usize> {
        match self {
            MonoidSpec::Finite { generators } => Some(sorted_unique(generators).len()),
            MonoidSpec::PrimeReciprocalShift { max_prime: Some(p) } => {
                Some(primes_up_to(*p).len() + 1)
            }
            MonoidSpec::CantorShift { depth } => Some(1usize << (depth + 1)),
            _ => None,
        }
    }

    /// First `k` generators in the family's canonical order.
    pub fn generator_stream(&self, k: usize) -> Vec<Rat> {
        match self {
            MonoidSpec::Finite { generators } => {
                let mut g = sorted_unique(generators);
                g.truncate(k);
                g
            }
            MonoidSpec::Geometric { ratio } => (0..k as u32).map(|n| ratio.pow(n)).collect(),
            MonoidSpec::UnitFractionPowers { base } => {
                let base = Rat::integer(*base);
                (1..=k as u32)
                    .map(|n| Rat::one().checked_div(&base.pow(n)).expect("base >= 2"))
                    .collect()
            }
            MonoidSpec::Increasing { prefix, tail, .. } => {
                let mut out: Vec<Rat> = prefix.iter().take(k).cloned().collect();
                if out.len() < k {
                    let start = tail
                        .first_index_above(prefix.last().unwrap_or(&Rat::zero()))
                        .expect("validated spec");
                    out.extend(tail.terms(start, k - out.len()));
                }
                out
            }
            MonoidSpec::PrimeReciprocalShift { max_prime } => {
                let primes = match max_prime {
                    Some(p) => primes_up_to(*p).into_iter().take(k.saturating_sub(1)).collect(),
                    None => first_primes(k.saturating_sub(1)),
                };
                std::iter::once(Rat::one())
                    .chain(primes.into_iter().map(|p| Rat::one() + Rat::frac(1, p)))
                    .take(k)
                    .collect()
            }
            MonoidSpec::CantorShift { depth } => cantor_endpoints(*depth)
                .into_iter()
                .map(|e| Rat::one() + e)
                .take(k)
                .collect(),
            MonoidSpec::DenseAtoms { seed, .. } => dense_atom_entries(k, *seed)
                .into_iter()
                .map(|e| e.atom)
                .collect(),
        }
    }

    /// Generators `<= x`, taking at most `cap` from infinite supplies.
    /// The flag reports whether the returned list is every generator `<= x`.
    pub fn generators_up_to(&self, x: &Rat, cap: usize) -> (Vec<Rat>, bool) {
        let take_while_le = |stream: Vec<Rat>| -> Vec<Rat> {
            stream.into_iter().filter(|g| g <= x).collect()
        };
        match self {
            MonoidSpec::Finite { .. }
            | MonoidSpec::CantorShift { .. }
            | MonoidSpec::PrimeReciprocalShift { max_prime: Some(_) } => {
                (take_while_le(self.generator_stream(usize::MAX >> 1)), true)
            }
            MonoidSpec::Geometric { ratio } if *ratio > Rat::one() => {
                let mut out = Vec::new();
                let mut g = Rat::one();
                while &g <= x {
                    out.push(g.clone());
                    g = &g * ratio;
                }
                (out, true)
            }
            MonoidSpec::Increasing { prefix, tail, .. } => {
                let below_limit = tail.limit().map_or(true, |l| x < &l);
                if below_limit {
                    let mut out: Vec<Rat> = prefix.iter().filter(|g| *g <= x).cloned().collect();
                    if prefix.last().map_or(true, |last| last <= x) {
                        let mut k = tail
                            .first_index_above(prefix.last().unwrap_or(&Rat::zero()))
                            .expect("validated spec");
                        loop {
                            let t = tail.terms(k, 1).pop().expect("one term");
                            if &t > x {
                                break;
                            }
                            out.push(t);
                            k += 1;
                        }
                    }
                    (out, true)
                } else {
                    (take_while_le(self.generator_stream(cap)), false)
                }
            }
            MonoidSpec::PrimeReciprocalShift { max_prime: None } if x < &Rat::one() => {
                (Vec::new(), true)
            }
            _ => (take_while_le(self.generator_stream(cap)), false),
        }
    }

    /// Whether the monoid is finitely generated (decided per family).
    pub fn is_finitely_generated(&self) -> bool {
        match self {
            MonoidSpec::Finite { .. }
            | MonoidSpec::CantorShift { .. }
            | MonoidSpec::PrimeReciprocalShift { max_prime: Some(_) } => true,
            // integer ratios give N0; otherwise denominators d(r)^n are unbounded
            MonoidSpec::Geometric { ratio } => ratio.is_integer(),
            // affine tails have bounded denominators, the other forms do not
            MonoidSpec::Increasing { tail, .. } => matches!(tail, TailForm::Affine { .. }),
            MonoidSpec::UnitFractionPowers { .. }
            | MonoidSpec::PrimeReciprocalShift { max_prime: None }
            | MonoidSpec::DenseAtoms { .. } => false,
        }
    }

    /// Whether the family is generated by a strictly increasing sequence.
    pub fn is_increasing_family(&self) -> bool {
        match self {
            MonoidSpec::Increasing { .. } => true,
            MonoidSpec::Geometric { ratio } => *ratio > Rat::one(),
            _ => false,
        }
    }

    /// `Some(b)` when the monoid equals the nonnegative `b`-adic rationals.
    pub(crate) fn b_adic_base(&self) -> Option<u64> {
        match self {
            MonoidSpec::UnitFractionPowers { base } => Some(*base),
            MonoidSpec::Geometric { ratio } if ratio.numer().is_one() && !ratio.is_integer() => {
                ratio.denom().to_u64()
            }
            _ => None,
        }
    }

    /// A finite generating set, when the monoid is finitely generated.
    pub fn fg_generators(&self) -> Result<Option<Vec<Rat>>> {
        if !self.is_finitely_generated() {
            return Ok(None);
        }
        match self {
            MonoidSpec::Geometric { .. } => Ok(Some(vec![Rat::one()])),
            MonoidSpec::Increasing { prefix, tail, .. } => affine_generators(prefix, tail).map(Some),
            _ => Ok(Some(self.generator_stream(usize::MAX >> 1))),
        }
    }

    /// Canonical form of a finitely generated monoid; `None` otherwise.
    pub fn canonical(&self) -> Result<Option<CanonicalFG>> {
        match self.fg_generators()? {
            Some(gens) => canonicalize(&gens).map(Some),
            None => Ok(None),
        }
    }

    /// Membership of `x`, exact where the family allows it, budgeted otherwise.
    /// `budget` is the number of generators used for truncated searches.
    pub fn member(&self, x: &Rat, budget: usize) -> Result<Membership> {
        if x.is_zero() {
            return Ok(Membership::In);
        }
        let verdict = |b: bool| if b { Membership::In } else { Membership::Out };
        if let Some(b) = self.b_adic_base() {
            return Ok(verdict(primes_divide(x.denom(), b)));
        }
        match self {
            MonoidSpec::PrimeReciprocalShift { max_prime: None } => {
                return Ok(verdict(finite_member(&prime_shift_relevant_generators(x, None), x)));
            }
            MonoidSpec::Geometric { ratio } if *ratio < Rat::one() => {
                // every element lies in Z[1/d(r)]
                let den = ratio.denom().to_u64();
                if den.is_some_and(|d| !primes_divide(x.denom(), d)) {
                    return Ok(Membership::Out);
                }
            }
            _ => {}
        }
        if self.is_finitely_generated() {
            match self.canonical() {
                Ok(Some(c)) => return Ok(verdict(c.contains(x))),
                Ok(None) => unreachable!("finitely generated families have generators"),
                Err(Error::LatticeTooLarge { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        let (gens, complete) = self.generators_up_to(x, budget);
        if complete {
            return Ok(verdict(finite_member(&gens, x)));
        }
        let nodes = SEARCH_NODES_PER_GENERATOR.saturating_mul(budget as u64);
        Ok(match finite_member_bounded(&gens, x, nodes) {
            Some(true) => Membership::In,
            found => Membership::Unknown(Undecided {
                generator_depth: budget,
                reason: if found.is_none() {
                    format!("search over the first {budget} generators stopped after {nodes} nodes")
                } else {
                    format!(
                        "no representation over the first {budget} generators; infinitely many generators lie below {x}"
                    )
                },
            }),
        })
    }
}

/// Generators of the all-primes shift that can occur in a representation of
/// `x`: `1` and `1 + 1/p` for `p <= x` or `p | d(x)`. A prime dividing neither
/// would need multiplicity at least `p`, hence total size at least `p > x`.
pub(crate) fn prime_shift_relevant_generators(x: &Rat, exclude: Option<&Rat>) -> Vec<Rat> {
    let bound = x.floor().to_u64().unwrap_or(u64::MAX).min(10_000_000);
    let mut primes: Vec<u64> = primes_up_to(bound);
    if let Some(factors) = crate::primes::factorize_big(x.denom()) {
        for (p, _) in factors {
            if let Some(p) = p.to_u64() {
                primes.push(p);
            }
        }
    }
    primes.sort_unstable();
    primes.dedup();
    std::iter::once(Rat::one())
        .chain(primes.into_iter().map(|p| Rat::one() + Rat::frac(1, p)))
        .filter(|g| Some(g) != exclude)
        .collect()
}

fn sorted_unique(gens: &[Rat]) -> Vec<Rat> {
    let mut g = gens.to_vec();
    g.sort();
    g.dedup();
    g
}

/// Minimal generating set of an affine increasing monoid.
///
/// All terms lie in `(1/D) Z` for `D` the lcm of the denominators involved,
/// so the monoid is finitely generated. Terms are filtered in order; once the
/// kept terms span the final lattice and the next term exceeds their
/// Frobenius element, every later term is redundant.
fn affine_generators(prefix: &[Rat], tail: &TailForm) -> Result<Vec<Rat>> {
    let TailForm::Affine { offset, step } = tail else {
        unreachable!("only affine tails are finitely generated");
    };
    let start = tail.first_index_above(prefix.last().unwrap_or(&Rat::zero()))?;
    let first_tail = tail.terms(start, 1).pop().expect("one term");
    let d = prefix
        .iter()
        .chain([&first_tail, step])
        .fold(offset.denom().clone(), |acc, q| acc.lcm(q.denom()));
    let to_int = |q: &Rat| q.numer() * (&d / q.denom());
    let final_gcd = prefix
        .iter()
        .chain([&first_tail, step])
        .fold(BigInt::zero(), |acc, q| acc.gcd(&to_int(q)));
    let final_scale = Rat::new(final_gcd, d.clone())?;

    let mut kept: Vec<Rat> = Vec::new();
    let mut current: Option<CanonicalFG> = None;
    let mut scanned = 0usize;
    let mut next_tail = start;
    let mut prefix_iter = prefix.iter();
    let mut next_term = || -> Rat {
        prefix_iter.next().cloned().unwrap_or_else(|| {
            let t = tail.terms(next_tail, 1).pop().expect("one term");
            next_tail += 1;
            t
        })
    };
    let mut term = next_term();
    loop {
        scanned += 1;
        if scanned > FG_SCAN_LIMIT {
            return Err(Error::Budget {
                detail: format!("affine generating set did not stabilize within {FG_SCAN_LIMIT} terms"),
            });
        }
        let redundant = current.as_ref().is_some_and(|c| c.contains(&term));
        if !redundant {
            kept.push(term.clone());
            current = Some(canonicalize(&kept)?);
        }
        let c = current.as_ref().expect("at least one term kept");
        let upcoming = next_term();
        if c.scale == final_scale {
            let beyond = c.frobenius_element().map_or(true, |f| upcoming > f);
            if beyond {
                return Ok(c.atoms());
            }
        }
        term = upcoming;
    }
}
