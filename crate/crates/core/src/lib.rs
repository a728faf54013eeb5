//! Puiseux monoids: additive submonoids of the nonnegative rationals.
//!
//! Finitely generated monoids reduce to numerical monoids; the infinite
//! families are handled by family-specific rules with explicit budgets.

pub mod atoms;
pub mod closure;
pub mod constructions;
pub mod density;
pub mod error;
mod knapsack;
pub mod numerical;
pub mod oracle;
pub mod primes;
pub mod rational;
pub mod spec;

pub use atoms::{atoms, factorizations, length_set, AtomicityKind, AtomicityVerdict, Factorization};
pub use closure::{conductor, difference_group, gp_density, root_closure, ConductorKind, GroupDescription};
pub use density::{classify_density, probe_density, DensityClass, ProbeResult};
pub use error::{Error, Result};
pub use numerical::NumericalMonoid;
pub use rational::{Rat, SignedRat};
pub use spec::{canonicalize, CanonicalFG, Membership, MonoidSpec, TailForm, Undecided};
