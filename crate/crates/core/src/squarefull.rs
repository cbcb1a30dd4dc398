//! Squarefull enumeration and the least squarefull integer in each residue
//! class modulo a prime.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, is_squarefree_u64, isqrt_u64, iroot_u128, legendre, mod_pow, mul_mod, sqrt_mod};
use crate::characters::least_qnr;
use crate::error::{Error, Result};
use crate::exec::Exec;

/// Largest bound accepted by [`enumerate_squarefull`] by default (about 1.5e7 values).
pub const DEFAULT_SQUAREFULL_BOUND: u64 = 1 << 46;

/// Sorted squarefull integers `<= bound` (1 included).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefullStream {
    pub bound: u64,
    pub values: Vec<u64>,
}

impl SquarefullStream {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Least element `= a (mod p)`, optionally skipping 1.
    pub fn first_in_class(&self, a: u64, p: u64, exclude_one: bool) -> Option<u64> {
        self.values
            .iter()
            .copied()
            .find(|&v| v % p == a && !(exclude_one && v == 1))
    }
}

pub fn enumerate_squarefull(bound: u64) -> Result<SquarefullStream> {
    enumerate_squarefull_with(bound, DEFAULT_SQUAREFULL_BOUND)
}

/// Each squarefull `n` is uniquely `a^2 b^3` with `b` squarefree.
pub fn enumerate_squarefull_with(bound: u64, max_bound: u64) -> Result<SquarefullStream> {
    if bound < 1 {
        return Err(Error::domain("squarefull bound must be at least 1"));
    }
    if bound > max_bound {
        return Err(Error::resource(format!("squarefull bound {bound}"), max_bound));
    }
    let mut values = Vec::with_capacity((2.2 * (bound as f64).sqrt()) as usize + 8);
    let bmax = iroot_u128(bound as u128, 3) as u64;
    for b in (1..=bmax).filter(|&b| is_squarefree_u64(b)) {
        let cube = b * b * b;
        let amax = isqrt_u64(bound / cube);
        values.extend((1..=amax).map(|a| a * a * cube));
    }
    values.sort_unstable();
    Ok(SquarefullStream { bound, values })
}

/// Distinct values `r^2 s <= bound` with `s | r` and `s` accepted by `keep_s`.
pub fn r2s_values(bound: u64, keep_s: impl Fn(u64) -> bool) -> Vec<u64> {
    let mut out = BTreeSet::new();
    let mut s = 1u64;
    while s.saturating_mul(s).saturating_mul(s) <= bound {
        if keep_s(s) {
            let mut r = s;
            while r.saturating_mul(r).saturating_mul(s) <= bound {
                out.insert(r * r * s);
                r += s;
            }
        }
        s += 1;
    }
    out.into_iter().collect()
}

/// `F(a, p)` if it is at most `cap`.
pub fn f_of(a: u64, p: u64, cap: u64) -> Result<Option<u64>> {
    if !is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    if a >= p {
        return Err(Error::domain(format!("residue {a} not in [0, {p})")));
    }
    if cap < 1 {
        return Err(Error::domain("cap must be at least 1"));
    }
    Ok(enumerate_squarefull(cap)?.first_in_class(a, p, false))
}

/// `F(a, p)` for every residue `a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinnikRecord {
    pub p: u64,
    pub f: Vec<u64>,
    pub f_max: u64,
    pub n_p: u64,
}

impl LinnikRecord {
    /// `F_max / (p^2 n_p)`.
    pub fn ratio(&self) -> f64 {
        self.f_max as f64 / ((self.p * self.p) as f64 * self.n_p as f64)
    }

    pub fn is_qnr(&self, a: u64) -> bool {
        legendre(a as i64, self.p) == -1
    }

    /// Sorted `F(a, p) / (p^2 n_p)` over non-residue classes.
    pub fn qnr_ratio_distribution(&self) -> Vec<f64> {
        let scale = (self.p * self.p) as f64 * self.n_p as f64;
        let mut v: Vec<f64> = (1..self.p)
            .filter(|&a| self.is_qnr(a))
            .map(|a| self.f[a as usize] as f64 / scale)
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

pub fn linnik_table(p: u64) -> Result<LinnikRecord> {
    linnik_table_with(p, false)
}

/// Builds the table from one squarefull stream whose cap starts at `p^2` and
/// grows eightfold until every class has a member.
pub fn linnik_table_with(p: u64, exclude_one: bool) -> Result<LinnikRecord> {
    if p == 2 || !is_prime(p) {
        return Err(Error::domain(format!("linnik table needs an odd prime, got {p}")));
    }
    let n_p = least_qnr(p)?;
    let mut cap = p.checked_mul(p).ok_or_else(|| Error::resource("p^2", "u64"))?;
    loop {
        let stream = enumerate_squarefull(cap)?;
        let mut f = vec![0u64; p as usize];
        let mut missing = p;
        for &v in &stream.values {
            if exclude_one && v == 1 {
                continue;
            }
            let slot = &mut f[(v % p) as usize];
            if *slot == 0 {
                *slot = v;
                missing -= 1;
                if missing == 0 {
                    break;
                }
            }
        }
        if missing == 0 {
            let f_max = *f.iter().max().unwrap();
            return Ok(LinnikRecord { p, f, f_max, n_p });
        }
        cap = match cap.checked_mul(8) {
            Some(c) if c < 1 << 63 => c,
            _ => return Err(Error::resource(format!("squarefull cap for p = {p}"), "2^63")),
        };
    }
}

/// Tables for many primes.
pub fn linnik_tables(primes: &[u64], exec: Exec) -> Result<Vec<LinnikRecord>> {
    exec.map_slice(primes, |&p| linnik_table(p)).into_iter().collect()
}

/// `#S` against the counting bound used in the lower-bound argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallClassCount {
    /// Non-residues `a` with `F(a, p) <= M`.
    pub small_classes: u64,
    /// Distinct `r^2 s <= M`, `s | r`, `s >= n_p`.
    pub bound_s_ge_np: u64,
    /// Distinct `r^2 s <= M`, `s | r`, `s` a non-residue.
    pub bound_s_qnr: u64,
}

impl SmallClassCount {
    pub fn holds(&self) -> bool {
        self.small_classes <= self.bound_s_qnr && self.bound_s_qnr <= self.bound_s_ge_np
    }
}

pub fn qnr_small_class_count(p: u64, m: u64) -> Result<SmallClassCount> {
    qnr_small_class_count_from(&linnik_table(p)?, m)
}

pub fn qnr_small_class_count_from(record: &LinnikRecord, m: u64) -> Result<SmallClassCount> {
    if m < 1 {
        return Err(Error::domain("M must be at least 1"));
    }
    let p = record.p;
    let small = (1..p)
        .filter(|&a| record.is_qnr(a) && record.f[a as usize] <= m)
        .count() as u64;
    let n_p = record.n_p;
    let ge = r2s_values(m, |s| s >= n_p).len() as u64;
    let qnr = r2s_values(m, |s| legendre(s as i64, p) == -1).len() as u64;
    Ok(SmallClassCount { small_classes: small, bound_s_ge_np: ge, bound_s_qnr: qnr })
}

/// Least `n^3 u^2 = a (mod p)` with `n` a quadratic non-residue and `u >= 1`.
pub fn constructive_f_upper(a: u64, p: u64) -> Result<u128> {
    if p == 2 || !is_prime(p) {
        return Err(Error::domain(format!("{p} is not an odd prime")));
    }
    if legendre(a as i64, p) != -1 {
        return Err(Error::domain(format!("{a} is not a quadratic non-residue mod {p}")));
    }
    let a = a % p;
    let mut best: Option<u128> = None;
    let mut n = 2u64;
    loop {
        let cube = (n as u128).pow(3);
        if best.is_some_and(|b| cube > b) {
            break;
        }
        if legendre(n as i64, p) == -1 {
            // u^2 = a / n^3, a residue because both a and n^3 are non-residues
            let target = mul_mod(a, crate::arith::mod_inverse(mod_pow(n, 3, p), p)?, p);
            let (r, _) = sqrt_mod(target, p).expect("quotient of non-residues is a residue");
            let v = cube * (r as u128).pow(2);
            if best.is_none_or(|b| v < b) {
                best = Some(v);
            }
        }
        n += 1;
    }
    Ok(best.expect("loop ends only after a witness"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::FactorSieve;

    #[test]
    fn stream_examples() {
        assert_eq!(enumerate_squarefull(40).unwrap().values, vec![1, 4, 8, 9, 16, 25, 27, 32, 36]);
        assert_eq!(enumerate_squarefull(1).unwrap().values, vec![1]);
        assert!(matches!(enumerate_squarefull_with(1000, 999), Err(Error::Resource { .. })));
        for bound in [10u64, 1000, 100_000, 10_000_000] {
            let n = enumerate_squarefull(bound).unwrap().len() as f64;
            assert!(n <= 3.0 * (bound as f64).sqrt());
        }
    }

    #[test]
    fn stream_matches_filter_and_r2s_form() {
        let bound = 200_000;
        let sieve = FactorSieve::new(bound).unwrap();
        let want: Vec<u64> = (1..=bound).filter(|&n| sieve.is_k_full(n, 2).unwrap()).collect();
        let got = enumerate_squarefull(bound).unwrap().values;
        assert_eq!(got, want);
        assert_eq!(r2s_values(bound, |_| true), want);
    }

    #[test]
    fn f_examples() {
        assert_eq!(f_of(3, 5, 1000).unwrap(), Some(8));
        assert_eq!(f_of(1, 97, 1).unwrap(), Some(1));
        assert_eq!(f_of(2, 5, 1000).unwrap(), Some(27));
        assert_eq!(f_of(0, 5, 1000).unwrap(), Some(25));
        assert_eq!(f_of(2, 5, 26).unwrap(), None);
        assert!(f_of(5, 5, 10).is_err());
    }

    #[test]
    fn table_examples() {
        let r = linnik_table(5).unwrap();
        assert_eq!(r.f, vec![25, 1, 27, 8, 4]);
        assert_eq!(r.f_max, 27);
        assert_eq!(r.n_p, 2);
        assert!((r.ratio() - 0.54).abs() < 1e-12);
        let r = linnik_table(3).unwrap();
        assert_eq!(r.f, vec![9, 1, 8]);
        assert_eq!(r.f_max, 9);
        for p in [7u64, 101, 313] {
            let r = linnik_table(p).unwrap();
            for a in 0..p {
                if legendre(a as i64, p) != -1 {
                    assert!(r.f[a as usize] <= p * p);
                }
                assert_eq!(r.f[a as usize] % p, a);
            }
            assert_eq!(r.f[1], 1);
        }
        let r = linnik_table_with(5, true).unwrap();
        assert_eq!(r.f[1], 16);
        assert!(linnik_table(2).is_err());
    }

    #[test]
    fn small_class_examples() {
        let c = qnr_small_class_count(5, 10).unwrap();
        assert_eq!((c.small_classes, c.bound_s_ge_np, c.bound_s_qnr), (1, 1, 1));
        let c = qnr_small_class_count(5, 1).unwrap();
        assert_eq!((c.small_classes, c.bound_s_ge_np), (0, 0));
        assert!(qnr_small_class_count(7, 100).unwrap().holds());
    }

    #[test]
    fn constructive_examples() {
        assert_eq!(constructive_f_upper(2, 5).unwrap(), 27);
        assert_eq!(constructive_f_upper(3, 5).unwrap(), 8);
        assert!(constructive_f_upper(4, 5).is_err());
        assert!(constructive_f_upper(0, 5).is_err());
        // brute force over n, u <= 20 for p = 5
        for a in [2u64, 3] {
            let mut best = u128::MAX;
            for n in (1..=20u64).filter(|&n| legendre(n as i64, 5) == -1) {
                for u in 1..=20u64 {
                    let v = (n as u128).pow(3) * (u as u128).pow(2);
                    if v % 5 == a as u128 {
                        best = best.min(v);
                    }
                }
            }
            assert_eq!(constructive_f_upper(a, 5).unwrap(), best);
        }
        for p in [7u64, 23, 101] {
            let r = linnik_table(p).unwrap();
            for a in (1..p).filter(|&a| legendre(a as i64, p) == -1) {
                let up = constructive_f_upper(a, p).unwrap();
                assert!(up >= r.f[a as usize] as u128);
                assert_eq!(up % p as u128, a as u128);
            }
        }
    }
}
