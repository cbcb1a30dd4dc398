//! Smooth and squarefree-smooth counts in residue classes.

use serde::{Deserialize, Serialize};

use crate::arith::{primes_up_to, FactorSieve};
use crate::error::{Error, Result};
use crate::exec::Exec;

const SWEEP_CHUNK: u64 = 1 << 16;

/// `(x, y, p, a)`: count `n <= x` that are `y`-smooth and `n = a (mod p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProgressionQuery {
    pub x: u64,
    pub y: f64,
    pub p: u64,
    pub a: u64,
}

impl ProgressionQuery {
    pub fn new(x: u64, y: f64, p: u64, a: u64) -> Result<Self> {
        let q = ProgressionQuery { x, y, p, a };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.x < 1 {
            return Err(Error::domain("x must be at least 1"));
        }
        if !(self.y >= 2.0) {
            return Err(Error::domain(format!("y = {} < 2", self.y)));
        }
        if !crate::arith::is_prime(self.p) {
            return Err(Error::domain(format!("modulus {} is not prime", self.p)));
        }
        if self.a >= self.p {
            return Err(Error::domain(format!("residue {} not in [0, {})", self.a, self.p)));
        }
        Ok(())
    }
}

/// Both counts for one residue class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub psi: u64,
    pub psi_sharp: u64,
}

fn check_limit(x: u64, sieve: &FactorSieve) -> Result<()> {
    if x > sieve.limit() {
        return Err(Error::resource(format!("x = {x}"), format!("sieve limit {}", sieve.limit())));
    }
    Ok(())
}

fn count_class(q: &ProgressionQuery, sieve: &FactorSieve, exec: Exec) -> Result<ClassCounts> {
    q.validate()?;
    check_limit(q.x, sieve)?;
    // walk only the class: n = a, a + p, ...; n = 0 is skipped
    let first = if q.a == 0 { q.p } else { q.a };
    if first > q.x {
        return Ok(ClassCounts::default());
    }
    let terms = (q.x - first) / q.p + 1;
    let (p, y) = (q.p, q.y);
    let counts = exec
        .fold_chunks(
            0..terms,
            SWEEP_CHUNK,
            |r| {
                let mut c = ClassCounts::default();
                for i in r {
                    let (big, sf) = sieve.smooth_profile(first + i * p);
                    if big as f64 <= y {
                        c.psi += 1;
                        c.psi_sharp += sf as u64;
                    }
                }
                c
            },
            |a, b| ClassCounts {
                psi: a.psi + b.psi,
                psi_sharp: a.psi_sharp + b.psi_sharp,
            },
        )
        .unwrap_or_default();
    Ok(counts)
}

/// `psi(x, y; p, a)`.
pub fn psi(q: &ProgressionQuery, sieve: &FactorSieve) -> Result<u64> {
    Ok(count_class(q, sieve, Exec::default())?.psi)
}

/// `psi#(x, y; p, a)`: the squarefree part of [`psi`].
pub fn psi_sharp(q: &ProgressionQuery, sieve: &FactorSieve) -> Result<u64> {
    Ok(count_class(q, sieve, Exec::default())?.psi_sharp)
}

pub fn class_counts(q: &ProgressionQuery, sieve: &FactorSieve, exec: Exec) -> Result<ClassCounts> {
    count_class(q, sieve, exec)
}

/// Counts for every residue `a` in `[0, p)` from one pass over `[1, x]`.
pub fn sweep_classes(x: u64, y: f64, p: u64, sieve: &FactorSieve, exec: Exec) -> Result<Vec<ClassCounts>> {
    ProgressionQuery::new(x, y, p, 0)?;
    check_limit(x, sieve)?;
    let width = p as usize;
    let merged = exec.fold_chunks(
        1..x + 1,
        SWEEP_CHUNK,
        |r| {
            let mut local = vec![ClassCounts::default(); width];
            let mut a = r.start % p;
            for n in r {
                let (big, sf) = sieve.smooth_profile(n);
                if big as f64 <= y {
                    let slot = &mut local[a as usize];
                    slot.psi += 1;
                    slot.psi_sharp += sf as u64;
                }
                a += 1;
                if a == p {
                    a = 0;
                }
            }
            local
        },
        |mut acc, part| {
            for (s, t) in acc.iter_mut().zip(part) {
                s.psi += t.psi;
                s.psi_sharp += t.psi_sharp;
            }
            acc
        },
    );
    Ok(merged.unwrap_or_else(|| vec![ClassCounts::default(); width]))
}

/// Unrestricted smooth count `Psi(x, y)` (and its squarefree part).
pub fn smooth_total(x: u64, y: f64, sieve: &FactorSieve, exec: Exec) -> Result<ClassCounts> {
    check_limit(x, sieve)?;
    Ok(exec
        .fold_chunks(
            1..x + 1,
            SWEEP_CHUNK,
            |r| {
                let mut c = ClassCounts::default();
                for n in r {
                    let (big, sf) = sieve.smooth_profile(n);
                    if big as f64 <= y {
                        c.psi += 1;
                        c.psi_sharp += sf as u64;
                    }
                }
                c
            },
            |a, b| ClassCounts {
                psi: a.psi + b.psi,
                psi_sharp: a.psi_sharp + b.psi_sharp,
            },
        )
        .unwrap_or_default())
}

/// First squarefree `p`-smooth integer in each class, and `M(p)` when every
/// class is covered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCoverage {
    pub p: u64,
    pub first_hit: Vec<Option<u128>>,
    pub include_zero: bool,
}

impl ClassCoverage {
    /// `M(p)`: the largest first hit, or `None` if some counted class is empty.
    pub fn m_of_p(&self) -> Option<u128> {
        let skip = usize::from(!self.include_zero);
        let mut best = 0u128;
        for hit in &self.first_hit[skip..] {
            best = best.max((*hit)?);
        }
        Some(best)
    }

    pub fn uncovered(&self) -> Vec<u64> {
        let skip = usize::from(!self.include_zero);
        (skip..self.first_hit.len())
            .filter(|&a| self.first_hit[a].is_none())
            .map(|a| a as u64)
            .collect()
    }
}

/// Default cap on squarefree smooth products visited by [`class_coverage`].
pub const DEFAULT_SUBSET_BUDGET: u64 = 1 << 24;

/// Enumerates squarefree `p`-smooth integers (subset products of the primes
/// `<= p`) in value bands that double until every class is hit or the
/// product set is exhausted.
pub fn class_coverage(p: u64, include_zero: bool, budget: u64) -> Result<ClassCoverage> {
    if !crate::arith::is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let primes = primes_up_to(p);
    let width = p as usize;
    let mut first_hit: Vec<Option<u128>> = vec![None; width];
    let needed = width - usize::from(!include_zero);
    let full_product = primes
        .iter()
        .try_fold(1u128, |acc, &q| acc.checked_mul(q as u128));
    let mut bound: u128 = (2 * p as u128).max(16);
    let mut visited_total = 0u64;
    loop {
        let mut visited = 0u64;
        let mut hits = vec![None::<u128>; width];
        let ok = subset_products(&primes, 0, 1, bound, &mut |v| {
            visited += 1;
            if visited > budget {
                return false;
            }
            let slot = &mut hits[(v % p as u128) as usize];
            if slot.is_none_or(|old| v < old) {
                *slot = Some(v);
            }
            true
        });
        visited_total = visited_total.max(visited);
        if !ok {
            return Err(Error::resource(
                format!(
                    "subset-product enumeration over {} primes <= {p} ({} products visited)",
                    primes.len(),
                    visited_total
                ),
                budget,
            ));
        }
        first_hit = hits;
        let covered = first_hit
            .iter()
            .enumerate()
            .filter(|(a, h)| h.is_some() && (include_zero || *a != 0))
            .count();
        let exhausted = full_product.is_some_and(|f| f <= bound);
        if covered == needed || exhausted {
            break;
        }
        bound = match bound.checked_mul(2) {
            Some(b) => b,
            None => {
                return Err(Error::resource(
                    format!("value bound for {} primes <= {p}", primes.len()),
                    "u128",
                ))
            }
        };
    }
    Ok(ClassCoverage { p, first_hit, include_zero })
}

// Visits every product of a subset of primes[i..] times `acc` that is <= bound.
fn subset_products(primes: &[u64], i: usize, acc: u128, bound: u128, visit: &mut dyn FnMut(u128) -> bool) -> bool {
    if !visit(acc) {
        return false;
    }
    for j in i..primes.len() {
        match acc.checked_mul(primes[j] as u128) {
            Some(next) if next <= bound => {
                if !subset_products(primes, j + 1, next, bound, visit) {
                    return false;
                }
            }
            // primes are increasing, so later ones overshoot too
            _ => break,
        }
    }
    true
}

/// `M(p)`; `Ok(None)` when some residue class has no squarefree `p`-smooth member.
pub fn m_of_p(p: u64) -> Result<Option<u128>> {
    Ok(class_coverage(p, true, DEFAULT_SUBSET_BUDGET)?.m_of_p())
}
