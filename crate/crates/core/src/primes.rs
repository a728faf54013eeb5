//! Small prime utilities: sieving, the k-th prime, trial-division factoring.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// All primes `<= n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// The first `count` primes, in increasing order.
pub fn first_primes(count: usize) -> Vec<u64> {
    if count == 0 {
        return Vec::new();
    }
    // p_k < k (ln k + ln ln k) for k >= 6
    let k = count.max(6) as f64;
    let bound = (k * (k.ln() + k.ln().ln())).ceil() as u64 + 10;
    let mut primes = primes_up_to(bound);
    primes.truncate(count);
    primes
}

/// The `k`-th prime, 1-indexed (`nth_prime(1) == 2`).
pub fn nth_prime(k: usize) -> u64 {
    assert!(k >= 1, "primes are 1-indexed");
    first_primes(k)[k - 1]
}

/// Number of primes `<= p`; for a prime `p` this is its 1-based index.
pub fn prime_index(p: u64) -> usize {
    primes_up_to(p).len()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization of a machine integer as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Factorization of a positive big integer by trial division.
///
/// Returns `None` when a cofactor larger than `TRIAL_LIMIT^2` survives, i.e.
/// when the result cannot be certified.
pub fn factorize_big(n: &BigInt) -> Option<Vec<(BigInt, u32)>> {
    assert!(n > &BigInt::zero());
    if let Some(small) = n.to_u64() {
        if small <= TRIAL_LIMIT * TRIAL_LIMIT {
            return Some(
                factorize(small)
                    .into_iter()
                    .map(|(p, e)| (BigInt::from(p), e))
                    .collect(),
            );
        }
    }
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT {
        let bd = BigInt::from(d);
        if (&n % &bd).is_zero() {
            let mut e = 0;
            while (&n % &bd).is_zero() {
                n /= &bd;
                e += 1;
            }
            out.push((bd, e));
        }
        if n.is_one() {
            return Some(out);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let limit_sq = BigInt::from(TRIAL_LIMIT) * BigInt::from(TRIAL_LIMIT);
    if n < limit_sq {
        out.push((n, 1));
        Some(out)
    } else {
        None
    }
}

/// Radical-free check: every prime factor of `n` divides `base`.
pub fn primes_divide(n: &BigInt, base: u64) -> bool {
    let base = BigInt::from(base);
    let mut n = n.clone();
    loop {
        let g = n.gcd(&base);
        if g.is_one() {
            return n.is_one();
        }
        while (&n % &g).is_zero() {
            n /= &g;
        }
    }
}
