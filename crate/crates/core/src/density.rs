//! Density classification, epsilon probes and right isolation.
//!
//! Classes: dense, eventually dense but not dense, nowhere dense, unknown.
//! "Somewhere dense but not eventually dense" cannot occur, so it has no
//! variant. Verdicts come from a fixed, ordered rule table; probes only
//! supply evidence and never change a verdict.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{enumerate, Enumeration};
use crate::rational::Rat;
use crate::spec::{lattice_scale, MonoidSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DensityClass {
    Dense,
    EventuallyDenseNotDense,
    NowhereDense,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityWitness {
    /// Strictly decreasing generators tending to 0.
    DecreasingGenerators { terms: Vec<Rat> },
    /// Every element is a multiple of `step`.
    LatticeStep { step: Rat },
    /// Elements up to `bound` with the gap to the next element.
    Isolation { bound: Rat, radii: Vec<(Rat, Rat)> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityVerdict {
    pub class: DensityClass,
    pub rule: &'static str,
    pub citation: &'static str,
    pub witness: Option<DensityWitness>,
    pub note: Option<String>,
}

/// Number of witness terms reported for dense families.
const WITNESS_TERMS: usize = 12;

pub fn classify_density(spec: &MonoidSpec) -> DensityVerdict {
    let verdict = |class, rule, citation, witness, note: Option<String>| DensityVerdict {
        class,
        rule,
        citation,
        witness,
        note,
    };
    let dense_generators = match spec {
        MonoidSpec::UnitFractionPowers { .. } => Some(spec.generator_stream(WITNESS_TERMS)),
        MonoidSpec::Geometric { ratio } if *ratio < Rat::one() => {
            Some(spec.generator_stream(WITNESS_TERMS + 1).split_off(1))
        }
        MonoidSpec::DenseAtoms { count, .. } => {
            let mut minima: Vec<Rat> = Vec::new();
            for a in spec.generator_stream((*count).max(64)) {
                if minima.last().map_or(true, |m| a < *m) {
                    minima.push(a);
                }
            }
            Some(minima)
        }
        _ => None,
    };
    if let Some(terms) = dense_generators {
        return verdict(
            DensityClass::Dense,
            "D1",
            "0 is a limit point of the generating set, hence the monoid is dense",
            Some(DensityWitness::DecreasingGenerators { terms }),
            None,
        );
    }
    match spec {
        MonoidSpec::Finite { .. } | MonoidSpec::PrimeReciprocalShift { max_prime: Some(_) } => {
            let gens = spec
                .fg_generators()
                .ok()
                .flatten()
                .expect("finite families list their generators");
            let witness = lattice_scale(&gens).ok().map(|step| DensityWitness::LatticeStep { step });
            verdict(
                DensityClass::NowhereDense,
                "D2",
                "finitely generated: isomorphic to a numerical monoid, hence nowhere dense",
                witness,
                None,
            )
        }
        _ if spec.is_increasing_family() => {
            let bound = spec.generator_stream(1)[0].mul_int(2);
            let witness = right_isolation_truncated(spec, &bound, 16)
                .ok()
                .map(|radii| DensityWitness::Isolation { bound, radii });
            verdict(
                DensityClass::NowhereDense,
                "D3",
                "generated by an increasing sequence: no right limit points, nowhere dense",
                witness,
                None,
            )
        }
        MonoidSpec::CantorShift { depth } => verdict(
            DensityClass::NowhereDense,
            "D4",
            "shifted Cantor endpoints: finitely generated at any finite depth",
            Some(DensityWitness::LatticeStep {
                step: Rat::one().checked_div(&Rat::integer(3u64).pow(*depth)).expect("nonzero"),
            }),
            Some(
                "the depth -> infinity limit is eventually dense (dense in [2,4]) but not dense".into(),
            ),
        ),
        MonoidSpec::PrimeReciprocalShift { max_prime: None } => verdict(
            DensityClass::Unknown,
            "D5",
            "prime reciprocal shift: not increasing, no classification available",
            None,
            Some("1 is a limit point from the right; probe windows above 1 for evidence".into()),
        ),
        _ => verdict(
            DensityClass::Unknown,
            "D6",
            "no rule applies",
            None,
            None,
        ),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum ProbeResult {
    EpsDense,
    /// Open interval free of elements, longer than epsilon.
    GapWitness { lo: Rat, hi: Rat },
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Truncation {
    pub generator_depth: usize,
    pub max_coefficient: u64,
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub interval: (Rat, Rat),
    pub epsilon: Rat,
    pub result: ProbeResult,
    pub elements_found: usize,
    /// Largest gap between consecutive points of `{lo} ∪ elements ∪ {hi}`.
    pub max_gap: Rat,
    pub truncation: Truncation,
}

fn check_window(lo: &Rat, hi: &Rat, eps: &Rat) -> Result<()> {
    if lo >= hi {
        return Err(Error::InvalidArgument(format!("empty interval [{lo}, {hi}]")));
    }
    if eps.is_zero() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    Ok(())
}

/// Largest gap in `{lo} ∪ points ∪ {hi}` (points sorted, inside the window).
fn widest_gap(points: &[Rat], lo: &Rat, hi: &Rat) -> (Rat, Rat) {
    let mut best = (lo.clone(), lo.clone());
    let mut prev = lo;
    for p in points.iter().chain(std::iter::once(hi)) {
        let gap = p.checked_sub(prev).expect("sorted");
        if gap > best.1.checked_sub(&best.0).expect("ordered") {
            best = (prev.clone(), p.clone());
        }
        prev = p;
    }
    best
}

fn report(
    points: &[Rat],
    lo: &Rat,
    hi: &Rat,
    eps: &Rat,
    truncation: Truncation,
) -> ProbeReport {
    let inside: Vec<Rat> = points.iter().filter(|p| *p >= lo && *p <= hi).cloned().collect();
    let (glo, ghi) = widest_gap(&inside, lo, hi);
    let max_gap = ghi.checked_sub(&glo).expect("ordered");
    let result = if &max_gap <= eps {
        ProbeResult::EpsDense
    } else if truncation.complete {
        ProbeResult::GapWitness { lo: glo, hi: ghi }
    } else {
        ProbeResult::Inconclusive
    };
    ProbeReport {
        interval: (lo.clone(), hi.clone()),
        epsilon: eps.clone(),
        result,
        elements_found: inside.len(),
        max_gap,
        truncation,
    }
}

/// Probes `M ∩ [lo, hi]` using the first `budget` generators.
pub fn probe_density(spec: &MonoidSpec, lo: &Rat, hi: &Rat, eps: &Rat, budget: usize) -> Result<ProbeReport> {
    check_window(lo, hi, eps)?;
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    let e = enumerate(spec, hi, budget)?;
    Ok(report_from(&e, lo, hi, eps, budget))
}

fn report_from(e: &Enumeration, lo: &Rat, hi: &Rat, eps: &Rat, budget: usize) -> ProbeReport {
    report(
        &e.elements,
        lo,
        hi,
        eps,
        Truncation {
            generator_depth: budget,
            max_coefficient: e.max_coefficient,
            complete: e.complete,
        },
    )
}

/// Probes a bare point set (for instance an atom set) on `[lo, hi]`.
pub fn probe_points(points: &[Rat], lo: &Rat, hi: &Rat, eps: &Rat) -> Result<ProbeReport> {
    check_window(lo, hi, eps)?;
    let mut sorted = points.to_vec();
    sorted.sort();
    sorted.dedup();
    Ok(report(
        &sorted,
        lo,
        hi,
        eps,
        Truncation {
            generator_depth: sorted.len(),
            max_coefficient: 1,
            complete: true,
        },
    ))
}

/// Probes `(n r, n s)` for `n = 1..=n_max`; the first window must be
/// epsilon-dense. Any later report that is not is an implementation bug.
pub fn eventual_window_check(
    spec: &MonoidSpec,
    r: &Rat,
    s: &Rat,
    n_max: u64,
    eps: &Rat,
    budget: usize,
) -> Result<Vec<ProbeReport>> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let first = probe_density(spec, r, s, eps, budget)?;
    if first.result != ProbeResult::EpsDense {
        return Err(Error::InvalidArgument(format!(
            "window ({r}, {s}) is not {eps}-dense: largest gap {}",
            first.max_gap
        )));
    }
    let mut out = vec![first];
    for n in 2..=n_max {
        out.push(probe_density(spec, &r.mul_int(n), &s.mul_int(n), eps, budget)?);
    }
    Ok(out)
}

fn consecutive_radii(elements: &[Rat]) -> Vec<(Rat, Rat)> {
    elements
        .windows(2)
        .map(|w| (w[0].clone(), w[1].checked_sub(&w[0]).expect("sorted")))
        .collect()
}

/// Each element `e <= t` (but the last) with the distance to the next one.
/// Fails unless the enumeration up to `t` is provably complete.
pub fn right_isolation(spec: &MonoidSpec, t: &Rat, budget: usize) -> Result<Vec<(Rat, Rat)>> {
    let e = enumerate(spec, t, budget)?;
    if !e.complete {
        return Err(Error::CannotCertifyIsolation(format!(
            "the first {budget} generators do not cover every generator up to {t}"
        )));
    }
    Ok(consecutive_radii(&e.elements))
}

/// Like [`right_isolation`], for the submonoid spanned by the first `depth`
/// generators, without any completeness requirement.
pub fn right_isolation_truncated(spec: &MonoidSpec, t: &Rat, depth: usize) -> Result<Vec<(Rat, Rat)>> {
    let e = enumerate(spec, t, depth)?;
    Ok(consecutive_radii(&e.elements))
}
