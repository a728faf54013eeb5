//! Difference groups, root closures and conductors.
//!
//! For a Puiseux monoid `M`, the root closure is `gp(M) ∩ Q>=0`, and
//! `gp(M) = n * <1/d : d a denominator of an element>` with `n` the gcd of
//! the numerators. Groups are therefore described by a scale `n` and, per
//! prime, the largest exponent allowed in a denominator.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::constructions::{dense_atom_exponent, SeedSequence};
use crate::error::{Error, Result};
use crate::primes::{factorize, factorize_big, first_primes, is_prime, prime_index};
use crate::rational::{ser_bigint, Rat};
use crate::spec::{lattice_scale, MonoidSpec, TailForm};

/// Largest power of a prime allowed in a denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exponent {
    Finite(u32),
    Unbounded,
}

impl Exponent {
    fn allows(self, e: u32) -> bool {
        match self {
            Exponent::Finite(max) => e <= max,
            Exponent::Unbounded => true,
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(e) => s.serialize_u32(*e),
            Exponent::Unbounded => s.serialize_str("inf"),
        }
    }
}

/// Exponents for primes not listed explicitly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum OtherPrimes {
    Excluded,
    All { exponent: Exponent },
    /// The k-th prime gets the dense-atom exponent `n_k`.
    DenseAtomsSchedule { seed: SeedSequence },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeSupport {
    pub listed: BTreeMap<u64, Exponent>,
    pub others: OtherPrimes,
}

impl PrimeSupport {
    fn exponent(&self, p: &BigInt) -> Exponent {
        if let Some(e) = p.to_u64().and_then(|q| self.listed.get(&q)) {
            return *e;
        }
        match &self.others {
            OtherPrimes::Excluded => Exponent::Finite(0),
            OtherPrimes::All { exponent } => *exponent,
            OtherPrimes::DenseAtomsSchedule { .. } => match p.to_u64() {
                Some(q) if q < 50_000_000 => Exponent::Finite(dense_atom_exponent(prime_index(q), q)),
                _ => Exponent::Finite(0),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum GroupDescription {
    /// `generator * Z`
    CyclicScaled { generator: Rat },
    /// `scale * {y : every p^e dividing d(y) is allowed}`
    LocalizedScaled {
        #[serde(serialize_with = "ser_bigint")]
        scale: BigInt,
        primes: PrimeSupport,
    },
    Unknown { reason: String },
}

impl GroupDescription {
    /// Membership of a nonnegative rational; `None` when the group is unknown.
    pub fn contains(&self, x: &Rat) -> Option<bool> {
        match self {
            GroupDescription::CyclicScaled { generator } => {
                Some(x.checked_div(generator).is_some_and(|q| q.is_integer()))
            }
            GroupDescription::LocalizedScaled { scale, primes } => {
                let y = x.checked_div(&Rat::integer(scale.clone()))?;
                if y.denom().is_one() {
                    return Some(true);
                }
                let factors = factorize_big(y.denom())?;
                Some(factors.iter().all(|(p, e)| primes.exponent(p).allows(*e)))
            }
            GroupDescription::Unknown { .. } => None,
        }
    }

    /// Signed membership, used for differences of monoid elements.
    pub fn contains_signed(&self, x: &crate::rational::SignedRat) -> Option<bool> {
        self.contains(&x.abs())
    }
}

fn localized(scale: BigInt, listed: BTreeMap<u64, Exponent>, others: OtherPrimes) -> GroupDescription {
    GroupDescription::LocalizedScaled {
        scale,
        primes: PrimeSupport { listed, others },
    }
}

fn unbounded_primes_of(b: &BigInt) -> BTreeMap<u64, Exponent> {
    let b = b.to_u64().expect("machine-sized base");
    factorize(b)
        .into_iter()
        .map(|(p, _)| (p, Exponent::Unbounded))
        .collect()
}

/// Exponents of the primes in `n` as a map.
fn prime_exponents(n: &BigInt) -> Option<BTreeMap<u64, u32>> {
    factorize_big(n)?
        .into_iter()
        .map(|(p, e)| p.to_u64().map(|p| (p, e)))
        .collect()
}

fn numerator_gcd<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values.into_iter().fold(BigInt::zero(), |acc, q| acc.gcd(q.numer()))
}

/// The difference group of the monoid.
pub fn difference_group(spec: &MonoidSpec) -> GroupDescription {
    if let Some(b) = spec.b_adic_base() {
        return localized(BigInt::one(), unbounded_primes_of(&BigInt::from(b)), OtherPrimes::Excluded);
    }
    match spec {
        MonoidSpec::Geometric { ratio } if ratio.is_integer() => GroupDescription::CyclicScaled {
            generator: Rat::one(),
        },
        // 1 is a generator, so the numerator gcd is 1
        MonoidSpec::Geometric { ratio } => {
            localized(BigInt::one(), unbounded_primes_of(ratio.denom()), OtherPrimes::Excluded)
        }
        MonoidSpec::PrimeReciprocalShift { max_prime: Some(p) } => localized(
            BigInt::one(),
            crate::primes::primes_up_to(*p)
                .into_iter()
                .map(|q| (q, Exponent::Finite(1)))
                .collect(),
            OtherPrimes::Excluded,
        ),
        MonoidSpec::PrimeReciprocalShift { max_prime: None } => localized(
            BigInt::one(),
            BTreeMap::new(),
            OtherPrimes::All { exponent: Exponent::Finite(1) },
        ),
        MonoidSpec::CantorShift { depth } => localized(
            BigInt::one(),
            BTreeMap::from([(3, Exponent::Finite(*depth))]),
            OtherPrimes::Excluded,
        ),
        MonoidSpec::DenseAtoms { count, seed } => {
            let n = numerator_gcd(&spec.generator_stream((*count).max(8)));
            if !n.is_one() {
                return GroupDescription::Unknown {
                    reason: format!("numerator gcd {n} of the materialized atoms is not certified"),
                };
            }
            localized(n, BTreeMap::new(), OtherPrimes::DenseAtomsSchedule { seed: *seed })
        }
        MonoidSpec::Finite { generators } => match lattice_scale(generators) {
            Ok(q) => GroupDescription::CyclicScaled { generator: q },
            Err(e) => GroupDescription::Unknown { reason: e.to_string() },
        },
        MonoidSpec::Increasing { prefix, tail, .. } => increasing_group(spec, prefix, tail),
        MonoidSpec::UnitFractionPowers { .. } => unreachable!("handled as b-adic"),
    }
}

fn increasing_group(spec: &MonoidSpec, prefix: &[Rat], tail: &TailForm) -> GroupDescription {
    match tail {
        TailForm::Affine { step, .. } => {
            // the tail spans the same group as its first term and the step
            let first_tail = spec.generator_stream(prefix.len() + 1).pop().expect("nonempty");
            let mut gens = prefix.to_vec();
            gens.extend([first_tail, step.clone()]);
            match lattice_scale(&gens) {
                Ok(q) => GroupDescription::CyclicScaled { generator: q },
                Err(e) => GroupDescription::Unknown { reason: e.to_string() },
            }
        }
        // limit - coeff/k has p-adic valuation tending to -inf along k = p^e,
        // for every prime p; a subgroup of Q with that property is Q
        TailForm::Harmonic { .. } => localized(
            BigInt::one(),
            BTreeMap::new(),
            OtherPrimes::All { exponent: Exponent::Unbounded },
        ),
        TailForm::PrimeReciprocal { limit } => prime_tail_group(spec, prefix, limit),
    }
}

/// Group of `prefix ∪ {limit - 1/p_k : k >= k0}`.
fn prime_tail_group(spec: &MonoidSpec, prefix: &[Rat], limit: &Rat) -> GroupDescription {
    const SAMPLE: usize = 64;
    let sample = spec.generator_stream(prefix.len() + SAMPLE);
    let n = numerator_gcd(&sample);
    if !n.is_one() {
        return GroupDescription::Unknown {
            reason: format!("numerator gcd {n} over the first {SAMPLE} tail terms is not certified"),
        };
    }
    let first_tail_prime = {
        let t = &sample[prefix.len()];
        // t = limit - 1/p
        let inv = limit.checked_sub(t).expect("tail below limit");
        inv.denom().to_u64().expect("prime fits")
    };
    let mut special: BTreeMap<u64, u32> = BTreeMap::new();
    let bump = |n: &BigInt, special: &mut BTreeMap<u64, u32>| -> bool {
        match prime_exponents(n) {
            Some(m) => {
                for (p, e) in m {
                    let slot = special.entry(p).or_insert(0);
                    *slot = (*slot).max(e);
                }
                true
            }
            None => false,
        }
    };
    let mut ok = bump(limit.denom(), &mut special);
    for q in prefix {
        ok &= bump(q.denom(), &mut special);
    }
    if !ok {
        return GroupDescription::Unknown {
            reason: "denominator too large to factor".into(),
        };
    }
    let mut listed: BTreeMap<u64, Exponent> = BTreeMap::new();
    for p in first_primes(prime_index(first_tail_prime).saturating_sub(1)) {
        listed.insert(p, Exponent::Finite(0));
    }
    for (&p, &e) in &special {
        let mut best = e;
        if p >= first_tail_prime {
            let term = limit.signed_sub(&Rat::frac(1, p)).abs();
            let v = prime_exponents(term.denom())
                .and_then(|m| m.get(&p).copied())
                .unwrap_or(0);
            best = best.max(v);
        }
        listed.insert(p, Exponent::Finite(best));
    }
    localized(
        BigInt::one(),
        listed,
        OtherPrimes::All { exponent: Exponent::Finite(1) },
    )
}

/// `M̃ = gp(M) ∩ Q>=0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureDescription {
    pub group: GroupDescription,
}

pub fn root_closure(spec: &MonoidSpec) -> ClosureDescription {
    ClosureDescription {
        group: difference_group(spec),
    }
}

impl ClosureDescription {
    pub fn contains(&self, x: &Rat) -> Option<bool> {
        self.group.contains(x)
    }

    pub fn is_known(&self) -> bool {
        !matches!(self.group, GroupDescription::Unknown { .. })
    }

    /// Closure elements `a/d` with `d <= max_den` and `a/d <= max_value`,
    /// ascending.
    pub fn elements(&self, max_den: u64, max_value: u64) -> Vec<Rat> {
        let mut out: Vec<Rat> = (1..=max_den)
            .flat_map(|d| (0..=max_value * d).map(move |a| (a, d)))
            .filter(|&(a, d)| a.gcd(&d) == 1 || a == 0)
            .map(|(a, d)| Rat::frac(a, d))
            .filter(|q| self.contains(q) == Some(true))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Up to `count` strictly decreasing closure elements tending to 0, when
    /// the closure is dense; empty for `scale * N0`.
    pub fn decreasing_witness(&self, count: usize) -> Vec<Rat> {
        let GroupDescription::LocalizedScaled { scale, primes } = &self.group else {
            return Vec::new();
        };
        let n = Rat::integer(scale.clone());
        if let Some((&p, _)) = primes.listed.iter().find(|(_, e)| **e == Exponent::Unbounded) {
            return (1..=count as u32)
                .map(|e| n.checked_div(&Rat::integer(p).pow(e)).expect("p > 0"))
                .collect();
        }
        match &primes.others {
            OtherPrimes::All { exponent: Exponent::Unbounded } => (1..=count as u32)
                .map(|e| n.checked_div(&Rat::integer(2u64).pow(e)).expect("nonzero"))
                .collect(),
            OtherPrimes::All { .. } | OtherPrimes::DenseAtomsSchedule { .. } => {
                // n / (p_1^e_1 ... p_j^e_j) over the primes with a positive exponent
                let mut out = Vec::with_capacity(count);
                let mut den = BigInt::one();
                let mut p = 1u64;
                while out.len() < count {
                    p += 1;
                    if !is_prime(p) {
                        continue;
                    }
                    let e = match primes.exponent(&BigInt::from(p)) {
                        Exponent::Finite(e) => e,
                        Exponent::Unbounded => 1,
                    };
                    if e > 0 {
                        den *= BigInt::from(p).pow(e);
                        out.push(Rat::new(scale.clone(), den.clone()).expect("positive"));
                    }
                }
                out
            }
            OtherPrimes::Excluded => Vec::new(),
        }
    }

    /// A spec for the closure itself, when it falls into the catalog.
    pub fn as_spec(&self) -> Option<MonoidSpec> {
        match &self.group {
            GroupDescription::CyclicScaled { generator } => Some(MonoidSpec::Finite {
                generators: vec![generator.clone()],
            }),
            GroupDescription::LocalizedScaled { scale, primes } if primes.others == OtherPrimes::Excluded => {
                let finite: Vec<(u64, u32)> = primes
                    .listed
                    .iter()
                    .filter_map(|(&p, e)| match e {
                        Exponent::Finite(e) => Some((p, *e)),
                        Exponent::Unbounded => None,
                    })
                    .collect();
                if finite.len() == primes.listed.len() {
                    let d: BigInt = finite.iter().map(|&(p, e)| BigInt::from(p).pow(e)).product();
                    return Some(MonoidSpec::Finite {
                        generators: vec![Rat::new(scale.clone(), d).ok()?],
                    });
                }
                if finite.is_empty() && scale.is_one() {
                    let b: u64 = primes.listed.keys().product();
                    return Some(MonoidSpec::UnitFractionPowers { base: b });
                }
                None
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "class")]
pub enum GpDensity {
    /// `gp(M) = scale * Z` and `M̃ = scale * N0`.
    NowhereDenseFg { scale: Rat },
    /// `gp(M)` is dense in R and `M̃` in R>=0; the witness tends to 0.
    GroupDenseInRClosureDenseInRplus { witness: Vec<Rat> },
}

pub fn gp_density(spec: &MonoidSpec, witness_len: usize) -> Result<GpDensity> {
    let closure = root_closure(spec);
    if spec.is_finitely_generated() {
        let GroupDescription::CyclicScaled { generator } = group_as_cyclic(&closure.group, spec)? else {
            unreachable!()
        };
        return Ok(GpDensity::NowhereDenseFg { scale: generator });
    }
    let witness = closure.decreasing_witness(witness_len);
    if witness.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no closure witness available: {:?}",
            closure.group
        )));
    }
    Ok(GpDensity::GroupDenseInRClosureDenseInRplus { witness })
}

/// The cyclic form of a finitely generated monoid's group.
fn group_as_cyclic(group: &GroupDescription, spec: &MonoidSpec) -> Result<GroupDescription> {
    if let GroupDescription::CyclicScaled { .. } = group {
        return Ok(group.clone());
    }
    let gens = spec.fg_generators()?.expect("finitely generated");
    Ok(GroupDescription::CyclicScaled {
        generator: lattice_scale(&gens)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum ConductorKind {
    /// The monoid is root closed, so the conductor is the monoid itself.
    EqualsM,
    Empty,
    /// Conductor is `M>=sigma`; `min` is its least element.
    Tail { sigma: Rat, min: Rat },
    Unknown { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConductorResult {
    #[serde(flatten)]
    pub kind: ConductorKind,
    pub rule: &'static str,
    pub citation: &'static str,
}

pub fn conductor(spec: &MonoidSpec) -> ConductorResult {
    let result = |kind, rule, citation| ConductorResult { kind, rule, citation };
    if spec.b_adic_base().is_some() {
        return result(ConductorKind::EqualsM, "R1", "root-closed monoid: conductor equals M");
    }
    if spec.is_finitely_generated() {
        return match spec.canonical() {
            Ok(Some(c)) if c.nm.frobenius() < 0 => {
                result(ConductorKind::EqualsM, "R1", "root-closed monoid: conductor equals M")
            }
            Ok(Some(c)) => result(
                ConductorKind::Tail {
                    sigma: c.frobenius_element().expect("frobenius >= 0"),
                    min: c.conductor_element(),
                },
                "R2",
                "finitely generated: conductor is the tail above the scaled Frobenius number",
            ),
            Ok(None) => unreachable!(),
            Err(e) => result(
                ConductorKind::Unknown { reason: e.to_string() },
                "R2",
                "finitely generated, but the numerical monoid is too large to build",
            ),
        };
    }
    match spec {
        _ if spec.is_increasing_family() => result(
            ConductorKind::Empty,
            "R3",
            "increasing monoid: conductor nonempty iff finitely generated",
        ),
        MonoidSpec::PrimeReciprocalShift { max_prime: None } => result(
            ConductorKind::Empty,
            "R4",
            "prime reciprocal shift: 1 is a right limit point, conductor is empty",
        ),
        _ => result(
            ConductorKind::Unknown {
                reason: "family not covered by the conductor rule table".into(),
            },
            "R5",
            "no rule applies",
        ),
    }
}
