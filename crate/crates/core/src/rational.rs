//! Exact rational arithmetic.
//!
//! [`Rat`] is a nonnegative rational in lowest terms; every monoid element,
//! generator and bound in this crate is a `Rat`. [`SignedRat`] is only used
//! for difference-group elements. Both parse from and print to the string
//! form `a/b` (or `a` for integers); floating point never enters.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A nonnegative rational number in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rat(BigRational);

/// A signed rational number in lowest terms (difference-group elements).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedRat(BigRational);

impl Rat {
    /// Builds `num/den` in lowest terms.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Rat> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Rat::from_ratio(BigRational::new(num, den))
    }

    pub fn from_ratio(r: BigRational) -> Result<Rat> {
        if r.is_negative() {
            return Err(Error::Negative(r.to_string()));
        }
        Ok(Rat(r))
    }

    pub fn integer(n: impl Into<BigInt>) -> Rat {
        let n = n.into();
        assert!(!n.is_negative(), "Rat::integer called with a negative value");
        Rat(BigRational::from_integer(n))
    }

    /// `num/den` for machine integers; panics on a zero denominator.
    pub fn frac(num: u64, den: u64) -> Rat {
        assert!(den != 0, "Rat::frac with zero denominator");
        Rat(BigRational::new(num.into(), den.into()))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// The numerator and denominator maps, defined on positive rationals only.
    pub fn num_den(&self) -> Result<(BigInt, BigInt)> {
        if self.is_zero() {
            return Err(Error::NotPositive(self.to_string()));
        }
        Ok((self.numer().clone(), self.denom().clone()))
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// `self - rhs` when the result is nonnegative.
    pub fn checked_sub(&self, rhs: &Rat) -> Option<Rat> {
        let d = &self.0 - &rhs.0;
        (!d.is_negative()).then_some(Rat(d))
    }

    pub fn signed_sub(&self, rhs: &Rat) -> SignedRat {
        SignedRat(&self.0 - &rhs.0)
    }

    pub fn checked_div(&self, rhs: &Rat) -> Option<Rat> {
        (!rhs.is_zero()).then(|| Rat(&self.0 / &rhs.0))
    }

    pub fn mul_int(&self, k: u64) -> Rat {
        Rat(&self.0 * BigRational::from_integer(k.into()))
    }

    pub fn div_int(&self, k: u64) -> Rat {
        assert!(k != 0, "division by zero");
        Rat(&self.0 / BigRational::from_integer(k.into()))
    }

    pub fn pow(&self, e: u32) -> Rat {
        Rat(num_traits::pow(self.0.clone(), e as usize))
    }

    pub fn to_signed(&self) -> SignedRat {
        SignedRat(self.0.clone())
    }

    /// Approximate value, for human-facing summaries only.
    pub fn approx(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `floor(self / step)` as a u64, saturating.
    pub fn floor_div(&self, step: &Rat) -> u64 {
        let q = (&self.0 / &step.0).floor().to_integer();
        q.to_u64().unwrap_or(u64::MAX)
    }
}

impl SignedRat {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<SignedRat> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(SignedRat(BigRational::new(num, den)))
    }

    pub fn from_ratio(r: BigRational) -> SignedRat {
        SignedRat(r)
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    /// The nonnegative value, if it is one.
    pub fn to_rat(&self) -> Option<Rat> {
        Rat::from_ratio(self.0.clone()).ok()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }
}

macro_rules! forward_binop {
    ($ty:ident, $trait:ident, $method:ident) => {
        impl $trait<&$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                $ty((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                $ty(self.0.$method(rhs.0))
            }
        }
        impl $trait<&$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                $ty(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Rat, Add, add);
forward_binop!(Rat, Mul, mul);
forward_binop!(SignedRat, Add, add);
forward_binop!(SignedRat, Mul, mul);

impl std::ops::Sub<&SignedRat> for &SignedRat {
    type Output = SignedRat;
    fn sub(self, rhs: &SignedRat) -> SignedRat {
        SignedRat(&self.0 - &rhs.0)
    }
}

impl std::ops::Neg for SignedRat {
    type Output = SignedRat;
    fn neg(self) -> SignedRat {
        SignedRat(-self.0)
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl From<u64> for Rat {
    fn from(n: u64) -> Rat {
        Rat::integer(n)
    }
}

impl PartialEq<Rat> for SignedRat {
    fn eq(&self, other: &Rat) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd<Rat> for SignedRat {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

fn write_ratio(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ratio(f, &self.0)
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ratio(f, &self.0)
    }
}

impl fmt::Display for SignedRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ratio(f, &self.0)
    }
}

impl fmt::Debug for SignedRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ratio(f, &self.0)
    }
}

fn parse_digits(input: &str, part: &str) -> Result<BigInt> {
    if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse {
            input: input.to_string(),
            reason: "expected decimal digits".into(),
        });
    }
    Ok(part.parse::<BigInt>().expect("validated digits"))
}

/// Parses `a` or `a/b` where `a` and `b` are plain decimal digit strings.
fn parse_unsigned(input: &str) -> Result<BigRational> {
    let (num, den) = match input.split_once('/') {
        Some((n, d)) => (parse_digits(input, n)?, parse_digits(input, d)?),
        None => (parse_digits(input, input)?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(BigRational::new(num, den))
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat> {
        if s.starts_with('-') {
            return Err(Error::Negative(s.to_string()));
        }
        parse_unsigned(s).map(Rat)
    }
}

impl FromStr for SignedRat {
    type Err = Error;

    fn from_str(s: &str) -> Result<SignedRat> {
        match s.strip_prefix('-') {
            Some(rest) => parse_unsigned(rest).map(|r| SignedRat(-r)),
            None => parse_unsigned(s).map(SignedRat),
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for SignedRat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SignedRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<SignedRat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Numerator gcd and denominator data of a finite set of positive rationals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatSetSummary {
    #[serde(serialize_with = "ser_bigint")]
    pub numerator_gcd: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub denominator_lcm: BigInt,
    #[serde(serialize_with = "ser_bigint_set")]
    pub denominators: BTreeSet<BigInt>,
}

pub(crate) fn ser_bigint<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ser_bigint_set<S: Serializer>(
    v: &BTreeSet<BigInt>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub fn summarize(set: &[Rat]) -> Result<RatSetSummary> {
    if set.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let mut numerator_gcd = BigInt::zero();
    let mut denominator_lcm = BigInt::one();
    let mut denominators = BTreeSet::new();
    for q in set {
        let (n, d) = q.num_den()?;
        numerator_gcd = numerator_gcd.gcd(&n);
        denominator_lcm = denominator_lcm.lcm(&d);
        denominators.insert(d);
    }
    Ok(RatSetSummary {
        numerator_gcd,
        denominator_lcm,
        denominators,
    })
}

/// Least common multiple of the denominators of `values`.
pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}
