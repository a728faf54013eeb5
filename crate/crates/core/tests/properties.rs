use proptest::prelude::*;

use puiseux::atoms::factorizations;
use puiseux::closure::{difference_group, root_closure};
use puiseux::density::{classify_density, DensityClass};
use puiseux::oracle::{enumerate, naive_atoms, naive_factorizations};
use puiseux::{canonicalize, Membership, MonoidSpec, NumericalMonoid, Rat, SignedRat};

fn small_rat() -> impl Strategy<Value = Rat> {
    (1u64..40, 1u64..7).prop_map(|(a, b)| Rat::frac(a, b))
}

fn small_gens() -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec(small_rat(), 1..4)
}

fn max_of(gens: &[Rat]) -> Rat {
    gens.iter().max().unwrap().clone()
}

fn dp_members(gens: &[u64], top: usize) -> Vec<bool> {
    let mut reach = vec![false; top + 1];
    reach[0] = true;
    for v in 1..=top {
        reach[v] = gens.iter().any(|&g| g as usize <= v && reach[v - g as usize]);
    }
    reach
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn apery_membership_matches_dp(gens in prop::collection::vec(2u64..60, 2..5)) {
        let g = gens.iter().fold(0u64, |acc, &x| num_integer::gcd(acc, x));
        prop_assume!(g == 1);
        let nm = NumericalMonoid::from_generators(&gens).unwrap();
        let top = 2 * 60 * 60;
        let reach = dp_members(&gens, top);
        for (v, &r) in reach.iter().enumerate() {
            prop_assert_eq!(nm.contains(v as u64), r);
        }
        let largest_gap = reach.iter().rposition(|&r| !r).map_or(-1, |v| v as i64);
        prop_assert_eq!(nm.frobenius(), largest_gap);
    }

    #[test]
    fn canonical_form_describes_the_same_monoid(gens in small_gens()) {
        let c = canonicalize(&gens).unwrap();
        for g in &gens {
            prop_assert!(c.contains(g));
        }
        let spec = MonoidSpec::finite(gens.clone()).unwrap();
        let t = max_of(&gens).mul_int(3);
        let e = enumerate(&spec, &t, gens.len()).unwrap();
        prop_assert!(e.complete);
        // every lattice point up to t is in M exactly when the oracle finds it
        let steps = t.checked_div(&c.scale).unwrap().floor();
        let steps: u64 = steps.try_into().unwrap();
        for j in 0..=steps {
            let x = c.scale.mul_int(j);
            prop_assert_eq!(c.contains(&x), e.contains(&x), "x = {}", x);
            let verdict = spec.member(&x, 8).unwrap();
            let expected = if e.contains(&x) { Membership::In } else { Membership::Out };
            prop_assert_eq!(verdict, expected);
        }
        // off-lattice points are never members
        prop_assert!(!c.contains(&c.scale.div_int(2)));
    }

    #[test]
    fn factorizations_reevaluate_and_bound_lengths(gens in small_gens(), k in 1u64..6) {
        let spec = MonoidSpec::finite(gens.clone()).unwrap();
        let c = canonicalize(&gens).unwrap();
        let x = c.scale.mul_int(k * c.nm.multiplicity());
        let set = factorizations(&spec, &x, 10_000).unwrap();
        prop_assert!(set.complete);
        prop_assert!(!set.factorizations.is_empty());
        let lo = set.atoms_used.iter().min().unwrap();
        let hi = set.atoms_used.iter().max().unwrap();
        for z in &set.factorizations {
            prop_assert_eq!(z.value(), x.clone());
            prop_assert!(hi.mul_int(z.length) >= x);
            prop_assert!(lo.mul_int(z.length) <= x);
        }
        let e = enumerate(&spec, &x, gens.len()).unwrap();
        let oracle = naive_factorizations(&e, &naive_atoms(&e).unwrap(), &x).unwrap();
        let mut ours = set.factorizations.clone();
        ours.sort();
        prop_assert_eq!(ours, oracle);
    }

    #[test]
    fn difference_group_is_symmetric(gens in small_gens(), a in 0u64..200, b in 1u64..30) {
        let g = difference_group(&MonoidSpec::finite(gens).unwrap());
        let x = SignedRat::new(a as i64, b as i64).unwrap();
        let neg = SignedRat::new(-(a as i64), b as i64).unwrap();
        prop_assert_eq!(g.contains_signed(&x), g.contains_signed(&neg));
    }

    #[test]
    fn closure_contains_monoid_and_is_idempotent(gens in small_gens()) {
        let spec = MonoidSpec::finite(gens.clone()).unwrap();
        let closure = root_closure(&spec);
        let e = enumerate(&spec, &max_of(&gens).mul_int(2), gens.len()).unwrap();
        for x in &e.elements {
            prop_assert_eq!(closure.contains(x), Some(true));
        }
        let again = root_closure(&closure.as_spec().unwrap());
        prop_assert_eq!(again, closure);
    }

    #[test]
    fn oracle_ignores_generator_order(gens in small_gens(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut shuffled = gens.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let t = max_of(&gens).mul_int(2);
        let a = enumerate(&MonoidSpec::finite(gens.clone()).unwrap(), &t, gens.len()).unwrap();
        let b = enumerate(&MonoidSpec::finite(shuffled).unwrap(), &t, gens.len()).unwrap();
        prop_assert_eq!(a.elements, b.elements);
    }

    #[test]
    fn naive_atoms_lie_in_the_generating_set(gens in small_gens()) {
        let spec = MonoidSpec::finite(gens.clone()).unwrap();
        let e = enumerate(&spec, &max_of(&gens), gens.len()).unwrap();
        let atoms = naive_atoms(&e).unwrap();
        for a in &atoms {
            prop_assert!(gens.contains(a));
        }
        let c = canonicalize(&gens).unwrap();
        prop_assert_eq!(atoms, c.atoms());
    }

    #[test]
    fn finite_specs_round_trip_and_classify(gens in small_gens()) {
        let spec = MonoidSpec::finite(gens).unwrap();
        let text = spec.to_json();
        let back = MonoidSpec::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
        prop_assert_eq!(back, spec.clone());
        prop_assert_eq!(classify_density(&spec).class, DensityClass::NowhereDense);
    }

    #[test]
    fn unit_fraction_membership_follows_denominators(base in 2u64..7, a in 0u64..60, d in 1u64..40) {
        let spec = MonoidSpec::UnitFractionPowers { base };
        let x = Rat::frac(a, d);
        let verdict = spec.member(&x, 8).unwrap();
        // x is in M iff d(x) divides a power of the base
        let mut den = x.denom().clone();
        let b = num_bigint::BigInt::from(base);
        for _ in 0..64 {
            let g = num_integer::Integer::gcd(&den, &b);
            if g == num_bigint::BigInt::from(1) {
                break;
            }
            den /= g;
        }
        let expected = if den == num_bigint::BigInt::from(1) { Membership::In } else { Membership::Out };
        prop_assert_eq!(verdict, expected);
    }
}
