//! Acceptance gate: one pass/fail line per criterion.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use puiseux::atoms::{factorizations, length_set};
use puiseux::closure::{conductor, gp_density, root_closure, ConductorKind, GpDensity};
use puiseux::constructions::{build_cantor_shift, build_dense_atoms, build_increasing, IncreasingForm, SeedSequence};
use puiseux::density::{
    classify_density, eventual_window_check, probe_density, probe_points, right_isolation,
    right_isolation_truncated, DensityClass, ProbeResult,
};
use puiseux::oracle::{enumerate, naive_atoms, naive_factorizations, sums_up_to, ENUMERATION_CAP};
use puiseux::{canonicalize, MonoidSpec, NumericalMonoid, Rat, SignedRat};

// pinned tolerances and sizes
const C1_SETS: usize = 200;
const C1_MAX_GEN: u64 = 200;
const C1_TIME: Duration = Duration::from_secs(30);
const C3_SETS: usize = 50;
const C3_MAX_DEN: u64 = 64;
const C3_MAX_MULTIPLE: u64 = 256;
const C3_GRID: usize = 200;
const C4_BELOW: (u64, u64) = (1, 1_000_000);
const C5_EPS: (u64, u64) = (1, 1000);
const C5_DEPTH: usize = 14;
const C5_TIME: Duration = Duration::from_secs(5);
const C5_T: u64 = 3;
const C6_COUNT: usize = 200;
const C6_EPS: (u64, u64) = (1, 20);
const C7_DEPTH: u32 = 6;
const C8_P: u64 = 100;
const C8_P_SMALL: u64 = 50;
const C9_SETS: usize = 50;
const C9_STEPS: u64 = 60;
const C10_N_MAX: u64 = 3;

type Outcome = Result<String, String>;

/// An EpsDense monoid window: spec, lo, hi, epsilon, budget.
type Window = (MonoidSpec, Rat, Rat, Rat, usize);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn r(s: &str) -> Rat {
    s.parse().unwrap()
}

fn frac((a, b): (u64, u64)) -> Rat {
    Rat::frac(a, b)
}

fn gcd_all(v: &[u64]) -> u64 {
    v.iter().fold(0, |g, &x| num_integer::gcd(g, x))
}

/// Coin-problem table: reach[v] iff v is a sum of the generators.
fn dp_table(gens: &[u64], top: usize) -> Vec<bool> {
    let mut reach = vec![false; top + 1];
    reach[0] = true;
    for v in 1..=top {
        reach[v] = gens.iter().any(|&g| g as usize <= v && reach[v - g as usize]);
    }
    reach
}

/// Random finitely generated monoid with small numerators and denominators.
fn random_fg(rng: &mut ChaCha8Rng, max_num: u64, max_den: u64) -> Vec<Rat> {
    let n = rng.gen_range(2..=4);
    (0..n)
        .map(|_| Rat::frac(rng.gen_range(1..=max_num), rng.gen_range(1..=max_den)))
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut sets = 0;
    while sets < C1_SETS {
        let n = rng.gen_range(2..=5);
        let gens: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=C1_MAX_GEN)).collect();
        if gcd_all(&gens) != 1 {
            continue;
        }
        sets += 1;
        let nm = NumericalMonoid::from_generators(&gens).map_err(|e| e.to_string())?;
        let max = *gens.iter().max().unwrap();
        let top = (4 * max * max) as usize;
        let reach = dp_table(&gens, top);
        for (v, &inside) in reach.iter().enumerate() {
            ensure!(nm.contains(v as u64) == inside, "{gens:?}: membership of {v} differs");
        }
        let largest_gap = reach.iter().rposition(|&x| !x).map_or(-1, |v| v as i64);
        ensure!(nm.frobenius() == largest_gap, "{gens:?}: frobenius {} vs oracle {largest_gap}", nm.frobenius());
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < C1_TIME, "took {elapsed:?}");
    Ok(format!("{C1_SETS} sets agree with the DP oracle in {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let spec = MonoidSpec::finite(vec![r("6"), r("9"), r("20")]).unwrap();
    let reach = dp_table(&[6, 9, 20], 400);
    let oracle_f = reach.iter().rposition(|&x| !x).unwrap() as u64;
    ensure!(oracle_f == 43, "oracle frobenius {oracle_f}");
    match conductor(&spec).kind {
        ConductorKind::Tail { sigma, min } => {
            ensure!(sigma == Rat::integer(oracle_f), "sigma {sigma}");
            ensure!(min == Rat::integer(oracle_f + 1), "conductor min {min}");
        }
        other => return Err(format!("unexpected conductor {other:?}")),
    }
    // every integer from 44 on is in M, and 43 is not
    ensure!(reach[44..].iter().all(|&x| x) && !reach[43], "oracle tail check");
    Ok("conductor is the integers >= 44, frobenius 43".into())
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0usize;
    for _ in 0..C3_SETS {
        let gens = random_fg(&mut rng, 12, 4);
        let spec = MonoidSpec::finite(gens.clone()).unwrap();
        let closure = root_closure(&spec);
        let elements = closure.elements(C3_MAX_DEN, 2);
        let t = Rat::integer(2 * C3_MAX_MULTIPLE);
        let e = enumerate(&spec, &t, gens.len()).map_err(|e| e.to_string())?;
        ensure!(e.complete, "{gens:?}: incomplete oracle");
        for q in elements.iter().filter(|q| !q.is_zero()) {
            let found = (1..=C3_MAX_MULTIPLE).any(|k| e.contains(&q.mul_int(k)));
            ensure!(found, "{gens:?}: no multiple of {q} up to {C3_MAX_MULTIPLE} in M");
            checked += 1;
        }
        // every element of M is in the closure; exhaustively on [0, T]
        for x in &e.elements {
            ensure!(closure.contains(x) == Some(true), "{gens:?}: {x} in M but not in the closure");
        }
    }
    let geo = root_closure(&MonoidSpec::Geometric { ratio: r("2/3") });
    let mut grid = 0;
    for d in 1..=10u64 {
        for a in 0..20u64 {
            let x = Rat::frac(a, d);
            let mut den = x.denom().clone();
            while (&den % 3u32) == 0u32.into() {
                den /= 3u32;
            }
            let expected = den == 1u32.into();
            ensure!(geo.contains(&x) == Some(expected), "Geometric(2/3) closure at {x}");
            grid += 1;
        }
    }
    ensure!(grid == C3_GRID, "grid size {grid}");
    Ok(format!("{checked} closure elements have a multiple in M; {grid}-point grid matches Z[1/3]"))
}

fn criterion_4() -> Outcome {
    let below = frac(C4_BELOW);
    let (_, dense_spec) = build_dense_atoms(C6_COUNT, SeedSequence::default()).unwrap();
    let families = vec![
        MonoidSpec::UnitFractionPowers { base: 2 },
        MonoidSpec::UnitFractionPowers { base: 6 },
        MonoidSpec::Geometric { ratio: r("2/3") },
        MonoidSpec::Geometric { ratio: r("3/5") },
        build_increasing(IncreasingForm::Harmonic { limit: r("2"), coeff: r("1/2") }, vec![]).unwrap(),
        build_increasing(IncreasingForm::PrimeReciprocal { limit: r("2") }, vec![]).unwrap(),
        MonoidSpec::PrimeReciprocalShift { max_prime: None },
        dense_spec,
    ];
    for spec in &families {
        ensure!(!spec.is_finitely_generated(), "{spec:?} should not be finitely generated");
        let GpDensity::GroupDenseInRClosureDenseInRplus { witness } =
            gp_density(spec, 64).map_err(|e| e.to_string())?
        else {
            return Err(format!("{spec:?}: no dense closure"));
        };
        let closure = root_closure(spec);
        ensure!(witness.windows(2).all(|w| w[1] < w[0]), "{spec:?}: witness not decreasing");
        for w in &witness {
            ensure!(closure.contains(w) == Some(true), "{spec:?}: witness {w} outside closure");
        }
        ensure!(witness.iter().any(|w| *w < below), "{spec:?}: witness stays above {below}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..C3_SETS {
        let gens = random_fg(&mut rng, 30, 6);
        let spec = MonoidSpec::finite(gens.clone()).unwrap();
        let scale = canonicalize(&gens).unwrap().scale;
        match gp_density(&spec, 8).map_err(|e| e.to_string())? {
            GpDensity::NowhereDenseFg { scale: s } => ensure!(s == scale, "{gens:?}: scale {s} vs {scale}"),
            other => return Err(format!("{gens:?}: {other:?}")),
        }
        let den: u64 = scale.denom().try_into().unwrap();
        let elements = root_closure(&spec).elements(den, 4);
        ensure!(elements[0].is_zero(), "{gens:?}: closure misses 0");
        for w in elements.windows(2) {
            ensure!(w[1].checked_sub(&w[0]) == Some(scale.clone()), "{gens:?}: closure gap at {}", w[0]);
        }
    }
    Ok(format!("{} non-FG families reach below {below}; FG closures are scale * N0", families.len()))
}

fn criterion_5(windows: &mut Vec<Window>) -> Outcome {
    let eps = frac(C5_EPS);
    let u2 = MonoidSpec::UnitFractionPowers { base: 2 };
    ensure!(classify_density(&u2).class == DensityClass::Dense, "UFP(2) not Dense");
    let start = Instant::now();
    let report = probe_density(&u2, &r("0"), &r("10"), &eps, C5_DEPTH).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!(report.result == ProbeResult::EpsDense, "UFP(2) probe {:?}", report.result);
    ensure!(elapsed < C5_TIME, "UFP(2) probe took {elapsed:?}");
    windows.push((u2.clone(), r("0"), r("10"), eps.clone(), C5_DEPTH));
    windows.push((u2, r("1"), r("2"), r("1/100"), 8));

    // finitely generated: exact gap witnesses
    for (gens, lo, hi, e) in [
        (vec![r("2"), r("3")], "0", "1", "1/2"),
        (vec![r("6"), r("9"), r("20")], "30", "50", "1/2"),
        (vec![r("1/2"), r("5/3")], "0", "4", "1/10"),
    ] {
        let spec = MonoidSpec::finite(gens.clone()).unwrap();
        ensure!(classify_density(&spec).class == DensityClass::NowhereDense, "{gens:?} not NowhereDense");
        let (lo, hi) = (r(lo), r(hi));
        let report = probe_density(&spec, &lo, &hi, &r(e), gens.len()).map_err(|e| e.to_string())?;
        let ProbeResult::GapWitness { lo: glo, hi: ghi } = report.result else {
            return Err(format!("{gens:?}: no gap witness"));
        };
        let all = sums_up_to(&gens, &hi, ENUMERATION_CAP).map_err(|e| e.to_string())?;
        ensure!(!all.iter().any(|x| *x > glo && *x < ghi), "{gens:?}: element inside ({glo}, {ghi})");
        ensure!(ghi.checked_sub(&glo).unwrap() > r(e), "{gens:?}: gap not wider than epsilon");
    }

    // increasing catalog: nowhere dense, every right-isolation radius positive up to T
    let t = Rat::integer(C5_T);
    let increasing = [
        (build_increasing(IncreasingForm::Affine { offset: SignedRat::new(1, 1).unwrap(), step: r("1/2") }, vec![]), false),
        (build_increasing(IncreasingForm::Affine { offset: SignedRat::new(-1, 2).unwrap(), step: r("2/3") }, vec![]), false),
        (build_increasing(IncreasingForm::Harmonic { limit: r("2"), coeff: r("1/2") }, vec![]), true),
        (build_increasing(IncreasingForm::Harmonic { limit: r("2"), coeff: r("1/2") }, vec![r("3/2"), r("5/3"), r("7/4")]), true),
        (build_increasing(IncreasingForm::PrimeReciprocal { limit: r("2") }, vec![]), true),
        (build_increasing(IncreasingForm::Geometric { ratio: r("3/2") }, vec![]), false),
    ];
    let mut radii = 0;
    for (spec, bounded) in increasing {
        let spec = spec.map_err(|e| e.to_string())?;
        ensure!(classify_density(&spec).class == DensityClass::NowhereDense, "{spec:?} not NowhereDense");
        let list = if bounded {
            right_isolation_truncated(&spec, &t, 8)
        } else {
            right_isolation(&spec, &t, 16)
        }
        .map_err(|e| format!("{spec:?}: {e}"))?;
        ensure!(!list.is_empty(), "{spec:?}: no elements below {t}");
        ensure!(list.iter().all(|(_, rad)| !rad.is_zero()), "{spec:?}: zero radius");
        radii += list.len();
    }
    Ok(format!("UFP(2) probe EpsDense in {elapsed:.2?}; gap witnesses exact; {radii} positive isolation radii"))
}

fn criterion_6() -> Outcome {
    let (out, _) = build_dense_atoms(C6_COUNT, SeedSequence::default()).map_err(|e| e.to_string())?;
    ensure!(out.entries.len() == C6_COUNT, "entry count {}", out.entries.len());
    for (i, e) in out.entries.iter().enumerate() {
        ensure!(e.m_k % e.p_k != 0, "k={}: p divides m", e.k);
        ensure!(e.error < Rat::frac(1, e.k as u64), "k={}: error {}", e.k, e.error);
        ensure!(e.atom == Rat::frac(e.m_k, e.p_k.pow(e.n_k)), "k={}: atom", e.k);
        if i > 0 {
            ensure!(e.p_k > out.entries[i - 1].p_k, "primes not increasing at k={}", e.k);
        }
    }
    let atoms: Vec<Rat> = out.entries.iter().map(|e| e.atom.clone()).collect();
    let report = probe_points(&atoms, &r("0"), &r("5"), &frac(C6_EPS)).map_err(|e| e.to_string())?;
    ensure!(report.result == ProbeResult::EpsDense, "atoms leave a gap of {}", report.max_gap);
    Ok(format!("invariants hold for {C6_COUNT} entries; atom set max gap {} on [0,5]", report.max_gap))
}

fn criterion_7(windows: &mut Vec<Window>) -> Outcome {
    let (spec, gens) = build_cantor_shift(C7_DEPTH).map_err(|e| e.to_string())?;
    let step = Rat::frac(1, 3u64.pow(C7_DEPTH));
    let mut sums = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i..] {
            sums.push(a + b);
        }
    }
    let report = probe_points(&sums, &r("2"), &r("4"), &step).map_err(|e| e.to_string())?;
    ensure!(report.result == ProbeResult::EpsDense, "pair sums max gap {}", report.max_gap);
    let (lo, hi) = (r("4/3"), r("5/3"));
    ensure!(gens.contains(&lo) && gens.contains(&hi), "middle gap endpoints missing");
    ensure!(!gens.iter().any(|g| *g > lo && *g < hi), "generator inside (4/3, 5/3)");
    let e = enumerate(&spec, &r("2"), gens.len()).map_err(|e| e.to_string())?;
    let atoms = naive_atoms(&e).map_err(|e| e.to_string())?;
    ensure!(!atoms.iter().any(|a| *a > lo && *a < hi), "atom inside (4/3, 5/3)");
    let probe = probe_density(&spec, &r("2"), &r("4"), &r("1/10"), gens.len()).map_err(|e| e.to_string())?;
    ensure!(probe.result == ProbeResult::EpsDense, "monoid probe on [2,4]: {:?}", probe.result);
    windows.push((spec, r("2"), r("4"), r("1/10"), gens.len()));
    Ok(format!("pair sums max gap {} <= {step}; (4/3, 5/3) free of generators", report.max_gap))
}

fn criterion_8() -> Outcome {
    let spec = MonoidSpec::PrimeReciprocalShift { max_prime: Some(C8_P) };
    let gens = spec.fg_generators().map_err(|e| e.to_string())?.unwrap();
    let e = enumerate(&spec, &r("5/2"), gens.len()).map_err(|e| e.to_string())?;
    let mut atoms = naive_atoms(&e).map_err(|e| e.to_string())?;
    let mut sorted = gens.clone();
    sorted.sort();
    atoms.sort();
    ensure!(atoms == sorted, "atoms {} vs generators {}", atoms.len(), sorted.len());
    let radius_of_one = |p: u64| -> Result<Rat, String> {
        let s = MonoidSpec::PrimeReciprocalShift { max_prime: Some(p) };
        let list = right_isolation(&s, &r("3/2"), 64).map_err(|e| e.to_string())?;
        list.into_iter()
            .find(|(x, _)| *x == Rat::one())
            .map(|(_, rad)| rad)
            .ok_or_else(|| "1 not enumerated".to_string())
    };
    let big = radius_of_one(C8_P)?;
    let small = radius_of_one(C8_P_SMALL)?;
    ensure!(big <= r("1/97"), "radius of 1 at P={C8_P} is {big}");
    ensure!(big < small, "radius did not shrink: {big} vs {small}");
    let c = conductor(&MonoidSpec::PrimeReciprocalShift { max_prime: None });
    ensure!(c.kind == ConductorKind::Empty && c.rule == "R4", "conductor {:?} via {}", c.kind, c.rule);
    Ok(format!("{} atoms = generators; radius of 1: {big} (P={C8_P}) < {small} (P={C8_P_SMALL}); conductor Empty via R4", atoms.len()))
}

fn criterion_9() -> Outcome {
    let spec = MonoidSpec::finite(vec![r("2"), r("3")]).unwrap();
    let lengths = length_set(&spec, &r("12"), 1000).map_err(|e| e.to_string())?;
    ensure!(lengths.complete, "length set incomplete");
    ensure!(lengths.lengths.iter().copied().collect::<Vec<_>>() == vec![4, 5, 6], "lengths {:?}", lengths.lengths);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut compared = 0usize;
    for _ in 0..C9_SETS {
        let gens = random_fg(&mut rng, 12, 4);
        let spec = MonoidSpec::finite(gens.clone()).unwrap();
        let scale = canonicalize(&gens).unwrap().scale;
        let t = scale.mul_int(C9_STEPS);
        let e = enumerate(&spec, &t, gens.len()).map_err(|e| e.to_string())?;
        let atoms = naive_atoms(&e).map_err(|e| e.to_string())?;
        for j in 0..=C9_STEPS {
            let x = scale.mul_int(j);
            let ours = factorizations(&spec, &x, 1_000_000).map_err(|e| e.to_string())?;
            ensure!(ours.complete, "{gens:?}: factorizations of {x} incomplete");
            let mut got = ours.factorizations.clone();
            got.sort();
            let oracle = naive_factorizations(&e, &atoms, &x).map_err(|e| e.to_string())?;
            ensure!(got == oracle, "{gens:?}: factorizations of {x} differ");
            ensure!(got.iter().all(|z| z.value() == x), "{gens:?}: factorization of {x} re-evaluates wrongly");
            compared += 1;
        }
    }
    Ok(format!("lengths of 12 in <2,3> are {{4,5,6}}; {compared} factorization sets match the oracle"))
}

fn criterion_10(windows: &[Window]) -> Outcome {
    ensure!(!windows.is_empty(), "no EpsDense windows recorded");
    for (spec, lo, hi, eps, budget) in windows {
        let reports = eventual_window_check(spec, lo, hi, C10_N_MAX, eps, *budget).map_err(|e| e.to_string())?;
        ensure!(reports.len() == C10_N_MAX as usize, "report count");
        for rep in &reports {
            ensure!(
                rep.result == ProbeResult::EpsDense,
                "window {:?} of {spec:?} not {eps}-dense (gap {})",
                rep.interval,
                rep.max_gap
            );
        }
    }
    Ok(format!("{} windows stay EpsDense for n <= {C10_N_MAX}", windows.len()))
}

#[test]
fn acceptance() {
    let mut windows = Vec::new();
    let results = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(&mut windows),
        criterion_6(),
        criterion_7(&mut windows),
        criterion_8(),
        criterion_9(),
        criterion_10(&windows),
    ];
    // written to the raw handle so the lines survive output capture
    let mut err = std::io::stderr().lock();
    let mut failed = Vec::new();
    for (i, res) in results.iter().enumerate() {
        match res {
            Ok(msg) => writeln!(err, "criterion {}: PASS ({msg})", i + 1).unwrap(),
            Err(msg) => {
                writeln!(err, "criterion {}: FAIL ({msg})", i + 1).unwrap();
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
