//! Short intervals `(N^k, (N+1)^k)` containing many k-full integers: exhaustive
//! scans, record searches, and the constructive clustering through
//! simultaneous rational approximation of `d^{-(k+1)/k}`.

pub mod certified;
mod construct;
pub mod lattice;

pub use construct::{
    construct_kfull_cluster, construct_kfull_cluster_with, kfull_by_trial, r_bound, simultaneous_approx,
    verify_certificate, ApproximationResult, CandidateRecord, ClusterCertificate, ClusterResult,
    KfullConstructionParams, Side, DEFAULT_MAX_ELL, DEFAULT_MAX_K, DEFAULT_MAX_PRECISION_BITS, DEFAULT_PRECISION_BITS,
};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::{iroot_u128, is_squarefree_u64, primes_up_to};
use crate::error::{Error, Result};
use crate::exec::Exec;

/// Largest prime needed for core enumeration before a scan is refused.
pub const DEFAULT_SCAN_PRIME_BUDGET: u64 = 50_000_000;

/// The first `2 ell` squarefree integers greater than 1.
pub fn squarefree_seeds(ell: u32) -> Vec<u64> {
    (2u64..)
        .filter(|&n| is_squarefree_u64(n))
        .take(2 * ell as usize)
        .collect()
}

/// k-full integers found in `(N^k, (N+1)^k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalScanResult {
    #[serde(with = "crate::decimal")]
    pub n: BigUint,
    pub k: u32,
    #[serde(with = "crate::decimal::vec")]
    pub witnesses: Vec<BigUint>,
}

impl IntervalScanResult {
    pub fn count(&self) -> usize {
        self.witnesses.len()
    }
}

/// Enumerates k-full integers in open ranges.
///
/// Every k-full `n` is uniquely `a^k c` where `c = prod p^{j_p}` over distinct
/// primes with `k < j_p < 2k`; the scanner lists the cores `c` once and solves
/// for `a` by integer roots.
#[derive(Debug, Clone)]
pub struct KfullScanner {
    k: u32,
    max_hi: u128,
    primes: Vec<u64>,
}

impl KfullScanner {
    pub fn new(k: u32, max_hi: u128) -> Result<Self> {
        Self::with_budget(k, max_hi, DEFAULT_SCAN_PRIME_BUDGET)
    }

    pub fn with_budget(k: u32, max_hi: u128, prime_budget: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::domain(format!("k-full needs k >= 2, got {k}")));
        }
        let pmax = iroot_u128(max_hi, k + 1);
        if pmax > prime_budget as u128 {
            return Err(Error::resource(format!("prime bound {pmax} for k-full cores"), prime_budget));
        }
        Ok(KfullScanner { k, max_hi, primes: primes_up_to(pmax as u64) })
    }

    /// Sorted k-full integers in the open range `(lo, hi)`.
    pub fn open_range(&self, lo: u128, hi: u128) -> Vec<u128> {
        assert!(hi <= self.max_hi, "range exceeds scanner bound");
        let mut out = Vec::new();
        if hi <= lo + 1 {
            return out;
        }
        let k = self.k;
        let mut visit = |c: u128| {
            // a^k c in (lo, hi)
            let mut a = iroot_u128(lo / c, k);
            while pow_mul(a, k, c).is_some_and(|v| v <= lo) {
                a += 1;
            }
            while let Some(v) = pow_mul(a, k, c) {
                if v >= hi {
                    break;
                }
                if a >= 1 {
                    out.push(v);
                }
                a += 1;
            }
        };
        cores(&self.primes, 0, 1, hi, k, &mut visit);
        out.sort_unstable();
        out
    }
}

fn pow_mul(a: u128, k: u32, c: u128) -> Option<u128> {
    a.checked_pow(k)?.checked_mul(c)
}

fn cores(primes: &[u64], i: usize, acc: u128, hi: u128, k: u32, visit: &mut dyn FnMut(u128)) {
    visit(acc);
    for (j, &q) in primes.iter().enumerate().skip(i) {
        let q = q as u128;
        let Some(first) = q.checked_pow(k + 1).and_then(|v| v.checked_mul(acc)) else {
            break;
        };
        if first >= hi {
            break;
        }
        let mut v = first;
        for e in k + 1..2 * k {
            if e > k + 1 {
                match v.checked_mul(q) {
                    Some(x) if x < hi => v = x,
                    _ => break,
                }
            }
            cores(primes, j + 1, v, hi, k, visit);
        }
    }
}

/// All k-full integers strictly between `N^k` and `(N+1)^k`.
pub fn scan_interval(n: u64, k: u32) -> Result<IntervalScanResult> {
    if n < 1 {
        return Err(Error::domain("N must be at least 1"));
    }
    let (lo, hi) = interval_bounds(n, k)?;
    let scanner = KfullScanner::new(k, hi)?;
    Ok(IntervalScanResult {
        n: BigUint::from(n),
        k,
        witnesses: scanner.open_range(lo, hi).into_iter().map(BigUint::from).collect(),
    })
}

fn interval_bounds(n: u64, k: u32) -> Result<(u128, u128)> {
    if k < 2 {
        return Err(Error::domain(format!("k-full needs k >= 2, got {k}")));
    }
    let lo = (n as u128).checked_pow(k);
    let hi = (n as u128 + 1).checked_pow(k);
    match (lo, hi) {
        (Some(lo), Some(hi)) => Ok((lo, hi)),
        _ => Err(Error::resource(format!("({n}+1)^{k}"), "u128")),
    }
}

/// Witness counts for `N = 1..=n_max`.
pub fn interval_counts(k: u32, n_max: u64, exec: Exec) -> Result<Vec<usize>> {
    if n_max == 0 {
        return Ok(Vec::new());
    }
    let (_, hi) = interval_bounds(n_max, k)?;
    let scanner = KfullScanner::new(k, hi)?;
    Ok(exec.map_range(1..n_max + 1, |n| {
        let lo = (n as u128).pow(k);
        let hi = (n as u128 + 1).pow(k);
        scanner.open_range(lo, hi).len()
    }))
}

/// Least `N <= n_max` whose interval holds at least `target` k-full integers.
pub fn record_search(k: u32, n_max: u64, target: usize, exec: Exec) -> Result<Option<u64>> {
    if target < 1 {
        return Err(Error::domain("target must be at least 1"));
    }
    let counts = interval_counts(k, n_max, exec)?;
    Ok(counts.iter().position(|&c| c >= target).map(|i| i as u64 + 1))
}

/// `sqrt(k / (2 (k + 1)) * log N / log log N)`, the lower-order-free growth curve.
pub fn theorem_a1_bound(k: u32, n: f64) -> Result<f64> {
    if !(n > std::f64::consts::E.powf(std::f64::consts::E)) {
        return Err(Error::domain(format!("N = {n} must exceed e^e")));
    }
    let c = k as f64 / (2.0 * (k as f64 + 1.0));
    Ok((c * n.ln() / n.ln().ln()).sqrt())
}

/// `(3/8 log N / log log N)^{1/3}`, the earlier squarefull curve.
pub fn prior_work_bound(n: f64) -> Result<f64> {
    if !(n > std::f64::consts::E.powf(std::f64::consts::E)) {
        return Err(Error::domain(format!("N = {n} must exceed e^e")));
    }
    Ok((0.375 * n.ln() / n.ln().ln()).cbrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::FactorSieve;

    #[test]
    fn seed_examples() {
        assert_eq!(squarefree_seeds(1), vec![2, 3]);
        assert_eq!(squarefree_seeds(2), vec![2, 3, 5, 6]);
        assert_eq!(squarefree_seeds(3), vec![2, 3, 5, 6, 7, 10]);
    }

    #[test]
    fn seeds_stay_below_four_ell() {
        let seeds = squarefree_seeds(5000);
        for ell in 10..=5000usize {
            assert!(seeds[2 * ell - 1] <= 4 * ell as u64, "ell = {ell}");
        }
    }

    #[test]
    fn scan_examples() {
        let w = |n, k| -> Vec<u64> {
            scan_interval(n, k).unwrap().witnesses.iter().map(|b| b.try_into().unwrap()).collect()
        };
        assert_eq!(w(5, 2), vec![27, 32]);
        assert_eq!(w(2, 2), vec![8]);
        assert!(w(1, 2).is_empty());
        assert!(scan_interval(5, 1).is_err());
    }

    #[test]
    fn scan_matches_sieve_filter() {
        let sieve = FactorSieve::new(1_000_000).unwrap();
        for k in [2u32, 3, 4] {
            let scanner = KfullScanner::new(k, 1_000_001).unwrap();
            let all = scanner.open_range(0, 1_000_001);
            let want: Vec<u128> = (1..=1_000_000u64)
                .filter(|&n| sieve.is_k_full(n, k).unwrap())
                .map(|n| n as u128)
                .collect();
            assert_eq!(all, want, "k = {k}");
        }
    }

    #[test]
    fn records() {
        assert_eq!(record_search(2, 100, 2, Exec::Parallel).unwrap(), Some(5));
        assert_eq!(record_search(2, 100, 1, Exec::Sequential).unwrap(), Some(2));
        assert_eq!(record_search(2, 3, 5, Exec::Parallel).unwrap(), None);
        let mut prev = 0;
        for target in 1..=4 {
            if let Some(n) = record_search(2, 2000, target, Exec::Parallel).unwrap() {
                assert!(n >= prev);
                prev = n;
            }
        }
    }

    #[test]
    fn curves() {
        assert!(theorem_a1_bound(2, 15.0).is_err());
        let a = theorem_a1_bound(2, 16.0).unwrap();
        let b = theorem_a1_bound(2, 1e6).unwrap();
        assert!(b > a);
        let n: f64 = 1e12;
        let want = (n.ln() / n.ln().ln() / 3.0).sqrt();
        assert!((theorem_a1_bound(2, n).unwrap() - want).abs() < 1e-12);
        let want = (0.375 * n.ln() / n.ln().ln()).cbrt();
        assert!((prior_work_bound(n).unwrap() - want).abs() < 1e-12);
        let mut prev = 0.0;
        for e in 0..200 {
            let v = theorem_a1_bound(3, 16.0 * 1.2f64.powi(e)).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }
}
