use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;

/// Largest sieve limit accepted unless the caller raises the budget.
pub const DEFAULT_MAX_LIMIT: u64 = 1 << 32;
/// Numbers per segment when filling the table.
pub const DEFAULT_SEGMENT: usize = 1 << 22;

#[derive(Debug, Clone, Copy)]
pub struct SieveConfig {
    pub max_limit: u64,
    pub segment: usize,
    pub exec: Exec,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            max_limit: DEFAULT_MAX_LIMIT,
            segment: DEFAULT_SEGMENT,
            exec: Exec::default(),
        }
    }
}

/// Smallest-prime-factor table for every `n` in `[2, limit]`.
///
/// Immutable once built; share it freely between threads.
#[derive(Clone, PartialEq, Eq)]
pub struct FactorSieve {
    limit: u64,
    // spf[n] for n in 0..=limit; entries 0 and 1 are 0
    spf: Vec<u32>,
}

impl std::fmt::Debug for FactorSieve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FactorSieve").field("limit", &self.limit).finish()
    }
}

/// Canonical factorization: primes strictly increasing, exponents at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn largest_prime(&self) -> Option<u64> {
        self.factors.last().map(|&(q, _)| q)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn is_k_full(&self, k: u32) -> bool {
        self.factors.iter().all(|&(_, e)| e >= k)
    }

    pub fn mobius(&self) -> i32 {
        if !self.is_squarefree() {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn product(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(q, e)| (q as u128).pow(e))
            .product()
    }
}

impl FactorSieve {
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_config(limit, &SieveConfig::default())
    }

    pub fn with_config(limit: u64, config: &SieveConfig) -> Result<Self> {
        if limit < 2 {
            return Err(Error::domain(format!("sieve limit {limit} < 2")));
        }
        if limit > config.max_limit {
            return Err(Error::resource(
                format!("sieve limit {limit}"),
                format!("max_limit {}", config.max_limit),
            ));
        }
        let len = usize::try_from(limit + 1)
            .map_err(|_| Error::resource(format!("sieve limit {limit}"), "address space"))?;
        let base = base_primes(super::isqrt_u64(limit));
        let mut spf = vec![0u32; len];
        let segment = config.segment.max(1024);
        let fill = |(idx, chunk): (usize, &mut [u32])| {
            fill_segment((idx * segment) as u64, chunk, &base);
        };
        #[cfg(feature = "parallel")]
        if config.exec.is_parallel() {
            use rayon::prelude::*;
            spf.par_chunks_mut(segment).enumerate().for_each(fill);
            return Ok(Self::finish(limit, spf));
        }
        spf.chunks_mut(segment).enumerate().for_each(fill);
        Ok(Self::finish(limit, spf))
    }

    fn finish(limit: u64, mut spf: Vec<u32>) -> Self {
        spf[0] = 0;
        spf[1] = 0;
        FactorSieve { limit, spf }
    }

    pub(crate) fn from_raw(limit: u64, spf: Vec<u32>) -> Self {
        FactorSieve { limit, spf }
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.spf
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `n`, for `2 <= n <= limit`.
    pub fn spf(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit {
            None
        } else {
            Some(self.spf[n as usize] as u64)
        }
    }

    pub fn is_prime(&self, n: u64) -> bool {
        self.spf(n) == Some(n)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        (2..=self.limit).filter(move |&n| self.spf[n as usize] as u64 == n)
    }

    fn check(&self, n: u64) -> Result<()> {
        if n == 0 {
            return Err(Error::domain("cannot factor 0"));
        }
        if n > self.limit {
            return Err(Error::domain(format!("{n} exceeds sieve limit {}", self.limit)));
        }
        Ok(())
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        self.check(n)?;
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        while m > 1 {
            let q = self.spf[m as usize] as u64;
            let mut e = 0;
            while m % q == 0 {
                m /= q;
                e += 1;
            }
            factors.push((q, e));
        }
        Ok(Factorization { n, factors })
    }

    /// `P+(n)`, the largest prime factor.
    pub fn largest_prime_factor(&self, n: u64) -> Result<u64> {
        if n < 2 {
            return Err(Error::domain(format!("largest prime factor undefined for {n}")));
        }
        self.check(n)?;
        let mut m = n;
        let mut q = 1;
        while m > 1 {
            q = self.spf[m as usize] as u64;
            m /= q;
        }
        Ok(q)
    }

    /// `n = 1` or `P+(n) <= y`.
    pub fn is_y_smooth(&self, n: u64, y: f64) -> Result<bool> {
        if n == 1 {
            return Ok(true);
        }
        Ok(self.largest_prime_factor(n)? as f64 <= y)
    }

    pub fn is_squarefree(&self, n: u64) -> Result<bool> {
        self.check(n)?;
        let mut m = n;
        let mut last = 0;
        while m > 1 {
            let q = self.spf[m as usize] as u64;
            if q == last {
                return Ok(false);
            }
            last = q;
            m /= q;
        }
        Ok(true)
    }

    pub fn mobius(&self, n: u64) -> Result<i32> {
        Ok(self.factorize(n)?.mobius())
    }

    pub fn is_k_full(&self, n: u64, k: u32) -> Result<bool> {
        if k < 2 {
            return Err(Error::domain(format!("k-full needs k >= 2, got {k}")));
        }
        Ok(self.factorize(n)?.is_k_full(k))
    }

    /// Largest prime factor and squarefreeness in one pass; `(1, true)` for `n = 1`.
    #[inline]
    pub(crate) fn smooth_profile(&self, n: u64) -> (u64, bool) {
        let mut m = n;
        let mut last = 1u64;
        let mut squarefree = true;
        while m > 1 {
            let q = self.spf[m as usize] as u64;
            if q == last {
                squarefree = false;
            }
            last = q;
            m /= q;
        }
        (last, squarefree)
    }
}

fn base_primes(bound: u64) -> Vec<u32> {
    super::primes_up_to(bound).into_iter().map(|q| q as u32).collect()
}

fn fill_segment(lo: u64, chunk: &mut [u32], base: &[u32]) {
    let hi = lo + chunk.len() as u64;
    for &q in base {
        let q = q as u64;
        let first = (q * q).max(lo.div_ceil(q) * q);
        let mut m = first;
        while m < hi {
            let slot = &mut chunk[(m - lo) as usize];
            if *slot == 0 {
                *slot = q as u32;
            }
            m += q;
        }
    }
    for (i, slot) in chunk.iter_mut().enumerate() {
        if *slot == 0 {
            *slot = (lo + i as u64) as u32;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_spf(n: u64) -> u64 {
        (2..=n).find(|d| n % d == 0).unwrap()
    }

    fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut d = 2;
        while n > 1 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            if e > 0 {
                out.push((d, e));
            }
            d += 1;
        }
        out
    }

    #[test]
    fn spf_examples() {
        let s = FactorSieve::new(10).unwrap();
        let got: Vec<u64> = (2..=10).map(|n| s.spf(n).unwrap()).collect();
        assert_eq!(got, vec![2, 3, 2, 5, 2, 7, 2, 3, 2]);
        assert_eq!(FactorSieve::new(2).unwrap().spf(2), Some(2));
        assert_eq!(FactorSieve::new(100).unwrap().primes().count(), 25);
    }

    #[test]
    fn budget_and_domain_errors() {
        assert!(matches!(FactorSieve::new(1), Err(Error::Domain(_))));
        let cfg = SieveConfig { max_limit: 1000, ..Default::default() };
        let err = FactorSieve::with_config(1001, &cfg).unwrap_err();
        assert!(matches!(err, Error::Resource { .. }));
        assert!(err.to_string().contains("1000"));
    }

    #[test]
    fn segmented_matches_trial_division() {
        let cfg = SieveConfig { segment: 1024, ..Default::default() };
        let small = FactorSieve::with_config(20_000, &cfg).unwrap();
        let seq = FactorSieve::with_config(
            20_000,
            &SieveConfig { segment: 1024, exec: Exec::Sequential, ..Default::default() },
        )
        .unwrap();
        assert_eq!(small, seq);
        for n in 2..=20_000 {
            let q = small.spf(n).unwrap();
            assert_eq!(q, trial_spf(n));
            assert!(q == n || q * q <= n);
        }
    }

    #[test]
    fn factorization_examples() {
        let s = FactorSieve::new(1000).unwrap();
        assert_eq!(s.factorize(72).unwrap().factors, vec![(2, 3), (3, 2)]);
        assert!(s.factorize(1).unwrap().factors.is_empty());
        assert_eq!(s.factorize(97).unwrap().factors, vec![(97, 1)]);
        assert!(matches!(s.factorize(0), Err(Error::Domain(_))));
        assert!(matches!(s.factorize(1001), Err(Error::Domain(_))));
        for n in 1..=1000 {
            let f = s.factorize(n).unwrap();
            assert_eq!(f.factors, trial_factor(n));
            assert_eq!(f.product(), n as u128);
        }
    }

    #[test]
    fn prime_factor_and_smoothness_examples() {
        let s = FactorSieve::new(1000).unwrap();
        assert_eq!(s.largest_prime_factor(20).unwrap(), 5);
        assert_eq!(s.largest_prime_factor(2).unwrap(), 2);
        assert_eq!(s.largest_prime_factor(210).unwrap(), 7);
        assert!(matches!(s.largest_prime_factor(1), Err(Error::Domain(_))));
        assert!(s.is_y_smooth(12, 3.0).unwrap());
        assert!(s.is_y_smooth(1, 0.0).unwrap());
        assert!(!s.is_y_smooth(14, 5.0).unwrap());
    }

    #[test]
    fn mobius_and_fullness_examples() {
        let s = FactorSieve::new(100_000).unwrap();
        assert_eq!(s.mobius(30).unwrap(), -1);
        assert_eq!(s.mobius(1).unwrap(), 1);
        assert_eq!(s.mobius(12).unwrap(), 0);
        assert!(s.is_k_full(72, 2).unwrap());
        assert!(s.is_k_full(8, 3).unwrap());
        assert!(s.is_k_full(1, 5).unwrap());
        assert!(!s.is_k_full(12, 2).unwrap());
        assert!(matches!(s.is_k_full(8, 1), Err(Error::Domain(_))));
        assert!(s.is_squarefree(1).unwrap());
        assert!(!s.is_squarefree(18).unwrap());
    }

    #[test]
    fn mobius_identities() {
        let s = FactorSieve::new(90_000).unwrap();
        for m in 1..=300u64 {
            for n in 1..=300u64 {
                if crate::arith::gcd(m, n) == 1 {
                    assert_eq!(s.mobius(m * n).unwrap(), s.mobius(m).unwrap() * s.mobius(n).unwrap());
                }
            }
        }
        for n in 1..=10_000u64 {
            let total: i32 = (1..=n).filter(|d| n % d == 0).map(|d| s.mobius(d).unwrap()).sum();
            assert_eq!(total, i32::from(n == 1), "n={n}");
        }
    }

    #[test]
    fn smooth_profile_agrees() {
        let s = FactorSieve::new(5000).unwrap();
        assert_eq!(s.smooth_profile(1), (1, true));
        for n in 2..=5000 {
            let (big, sf) = s.smooth_profile(n);
            assert_eq!(big, s.largest_prime_factor(n).unwrap());
            assert_eq!(sf, s.is_squarefree(n).unwrap());
        }
    }
}
