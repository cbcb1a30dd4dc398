//! Exact integer arithmetic: factor sieve, factorizations, modular helpers and
//! integer roots.

mod cache;
mod modular;
mod roots;
mod sieve;

pub use cache::{load_sieve, save_sieve, SIEVE_MAGIC};
pub use modular::{gcd, legendre, mod_inverse, mod_pow, mul_mod, sqrt_mod};
pub use roots::{integer_root, iroot_u128, isqrt_u64};
pub use sieve::{FactorSieve, Factorization, SieveConfig, DEFAULT_MAX_LIMIT, DEFAULT_SEGMENT};

/// Primes up to `n` (inclusive) by a plain Eratosthenes bitmap.
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

/// Deterministic primality by trial division; fine for the moduli used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Squarefree test by trial division (no sieve needed).
pub fn is_squarefree_u64(mut n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return false;
            }
        }
        d += 1;
    }
    true
}
