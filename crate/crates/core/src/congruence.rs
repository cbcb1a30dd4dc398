//! Solution counts of `l1 l2 u = a (mod p)` and relatives over a window of
//! primes, the bilinear exponential sum over inverse products, and the Möbius
//! decomposition of the squarefree count.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, is_squarefree_u64, mod_inverse, mul_mod, primes_up_to};
use crate::error::{Error, Result};
use crate::exec::{pairwise_sum, Exec, NeumaierSum};

/// `zeta(2) = pi^2 / 6`.
pub const ZETA2: f64 = PI * PI / 6.0;

/// All primes in `[ceil(L), floor(2L)]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeWindow {
    pub l: f64,
    pub primes: Vec<u64>,
}

impl PrimeWindow {
    pub fn new(l: f64) -> Result<Self> {
        if !(l >= 2.0) || !l.is_finite() {
            return Err(Error::domain(format!("window parameter L = {l} < 2")));
        }
        let lo = l.ceil() as u64;
        let hi = (2.0 * l).floor() as u64;
        let primes = primes_up_to(hi).into_iter().filter(|&q| q >= lo).collect();
        Ok(PrimeWindow { l, primes })
    }

    /// `K`, the number of primes in the window.
    pub fn k(&self) -> usize {
        self.primes.len()
    }
}

/// Exact count against a predicted main term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountComparison {
    pub exact: u64,
    pub main_term: f64,
    pub error_bound_formula: f64,
    pub relative_deviation: f64,
}

impl CountComparison {
    pub fn new(exact: u64, main_term: f64, error_bound_formula: f64) -> Self {
        let relative_deviation = (exact as f64 - main_term).abs() / main_term.max(1.0);
        CountComparison { exact, main_term, error_bound_formula, relative_deviation }
    }
}

fn check_residue(a: u64, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::domain(format!("modulus {p} is not prime")));
    }
    let a = a % p;
    if a == 0 {
        return Err(Error::domain(format!("p = {p} divides a")));
    }
    Ok(a)
}

fn floor_h(h: f64) -> Result<u64> {
    if !(h >= 0.0) || !h.is_finite() {
        return Err(Error::domain(format!("h = {h} is not a nonnegative real")));
    }
    Ok(h.floor() as u64)
}

/// Number of `u` in `[1, hmax]` with `u = r (mod p)`, for `r` in `[0, p)`.
#[inline]
fn class_count_upto(r: u64, p: u64, hmax: u64) -> u64 {
    let first = if r == 0 { p } else { r };
    if first > hmax {
        0
    } else {
        (hmax - first) / p + 1
    }
}

/// `u` in `[1, hmax]` with `u = r (mod p)`, increasing.
fn class_members(r: u64, p: u64, hmax: u64) -> impl Iterator<Item = u64> {
    let first = if r == 0 { p } else { r };
    (0..class_count_upto(r, p, hmax)).map(move |i| first + i * p)
}

/// Multiset of the `K^2` ordered products `l1 l2 mod p`, keyed by residue.
#[derive(Debug, Clone)]
pub struct ProductTable {
    p: u64,
    // counts[r] = #{(l1, l2) : l1 l2 = r (mod p)}
    counts: Vec<u32>,
}

impl ProductTable {
    pub fn new(p: u64, w: &PrimeWindow) -> Self {
        let mut counts = vec![0u32; p as usize];
        for &l1 in &w.primes {
            for &l2 in &w.primes {
                counts[mul_mod(l1, l2, p) as usize] += 1;
            }
        }
        ProductTable { p, counts }
    }

    /// `N_{a,p}(L, h)` in `O(p)` time via the class-count formula.
    pub fn count_n(&self, a: u64, hmax: u64) -> u64 {
        let p = self.p;
        let mut total = 0u64;
        for (v, &c) in self.counts.iter().enumerate() {
            if c == 0 || v == 0 {
                continue;
            }
            let r = mul_mod(a, mod_inverse(v as u64, p).unwrap(), p);
            total += c as u64 * class_count_upto(r, p, hmax);
        }
        total
    }
}

/// `N_{a,p}(L, h)`: ordered triples `(l1, l2, u)` with `l1 l2 u = a (mod p)`, `u <= h`.
pub fn count_n(a: u64, p: u64, w: &PrimeWindow, h: f64) -> Result<u64> {
    let a = check_residue(a, p)?;
    let hmax = floor_h(h)?;
    let mut total = 0u64;
    for &l1 in &w.primes {
        for &l2 in &w.primes {
            let v = mul_mod(l1, l2, p);
            if v == 0 {
                continue;
            }
            let r = mul_mod(a, mod_inverse(v, p)?, p);
            total += class_count_upto(r, p, hmax);
        }
    }
    Ok(total)
}

/// `N#_{a,p}(L, h)`: triples whose product `l1 l2 u` is squarefree.
pub fn count_n_sharp(a: u64, p: u64, w: &PrimeWindow, h: f64) -> Result<u64> {
    let a = check_residue(a, p)?;
    let hmax = floor_h(h)?;
    let mut total = 0u64;
    for &l1 in &w.primes {
        for &l2 in &w.primes {
            if l1 == l2 {
                continue;
            }
            let v = mul_mod(l1, l2, p);
            if v == 0 {
                continue;
            }
            let r = mul_mod(a, mod_inverse(v, p)?, p);
            total += class_members(r, p, hmax)
                .filter(|&u| u % l1 != 0 && u % l2 != 0 && is_squarefree_u64(u))
                .count() as u64;
        }
    }
    Ok(total)
}

/// `Q_{a,p}(L, h)`: ordered `(l1, l2, v)` with `l1 l2^2 v = a (mod p)`, `v <= h`.
pub fn count_q(a: u64, p: u64, w: &PrimeWindow, h: f64) -> Result<u64> {
    let a = check_residue(a, p)?;
    let hmax = floor_h(h)?;
    let mut total = 0u64;
    for &l1 in &w.primes {
        for &l2 in &w.primes {
            let v = mul_mod(l1, mul_mod(l2, l2, p), p);
            if v == 0 {
                continue;
            }
            let r = mul_mod(a, mod_inverse(v, p)?, p);
            total += class_count_upto(r, p, hmax);
        }
    }
    Ok(total)
}

/// `R_{a,p}(F, L, h) = sum_{F <= d <= 2F, p not| d} N_{a d^-2, p}(L, h)`.
pub fn count_r(a: u64, p: u64, f: f64, w: &PrimeWindow, h: f64) -> Result<u64> {
    let a = check_residue(a, p)?;
    if !(f >= 1.0) || f >= p as f64 {
        return Err(Error::domain(format!("F = {f} outside [1, p)")));
    }
    let lo = f.ceil() as u64;
    let hi = (2.0 * f).floor() as u64;
    let mut total = 0u64;
    for d in lo..=hi {
        if d % p == 0 {
            continue;
        }
        let shifted = mul_mod(a, mod_inverse(mul_mod(d, d, p), p)?, p);
        total += count_n(shifted, p, w, h)?;
    }
    Ok(total)
}

/// `K^2 h / p`.
pub fn predict_n_main_term(w: &PrimeWindow, h: f64, p: u64) -> f64 {
    let k = w.k() as f64;
    k * k * h / p as f64
}

/// `K^2 h / (zeta(2) p)`.
pub fn predict_n_sharp_main_term(w: &PrimeWindow, h: f64, p: u64) -> f64 {
    predict_n_main_term(w, h, p) / ZETA2
}

/// `e_p(z) = exp(2 pi i z / p)` as `(re, im)`, with `z` reduced exactly first.
#[inline]
pub fn e_p(z: u64, p: u64) -> (f64, f64) {
    let r = z % p;
    let theta = 2.0 * PI * (r as f64) / (p as f64);
    let (s, c) = theta.sin_cos();
    (c, s)
}

/// `|sum_{l1, l2} e_p(a inv(l1) inv(l2))|` for a single `a`.
pub fn bilinear_term(a: u64, p: u64, w: &PrimeWindow) -> Result<f64> {
    let buckets = inverse_product_buckets(p, w)?;
    Ok(bucket_sum_abs(a % p, p, &buckets))
}

fn inverse_product_buckets(p: u64, w: &PrimeWindow) -> Result<Vec<(u64, u64)>> {
    if !is_prime(p) {
        return Err(Error::domain(format!("modulus {p} is not prime")));
    }
    if 2.0 * w.l >= p as f64 {
        return Err(Error::domain(format!("2L = {} >= p = {p}", 2.0 * w.l)));
    }
    let mut counts = vec![0u64; p as usize];
    let inv: Vec<u64> = w.primes.iter().map(|&l| mod_inverse(l, p)).collect::<Result<_>>()?;
    for &x in &inv {
        for &y in &inv {
            counts[mul_mod(x, y, p) as usize] += 1;
        }
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(c, m)| (c as u64, m))
        .collect())
}

fn bucket_sum_abs(a: u64, p: u64, buckets: &[(u64, u64)]) -> f64 {
    let mut re = NeumaierSum::default();
    let mut im = NeumaierSum::default();
    for &(c, m) in buckets {
        let (x, y) = e_p(mul_mod(a, c, p), p);
        re.add(m as f64 * x);
        im.add(m as f64 * y);
    }
    re.value().hypot(im.value())
}

/// Max over `a` in `[1, p-1]` of the bilinear sum modulus, and the maximizing `a`.
pub fn bilinear_inverse_sum_argmax(p: u64, w: &PrimeWindow, exec: Exec) -> Result<(f64, u64)> {
    let buckets = inverse_product_buckets(p, w)?;
    let values = exec.map_range(1..p, |a| bucket_sum_abs(a, p, &buckets));
    let mut best = (0.0, 1);
    for (i, v) in values.into_iter().enumerate() {
        if v > best.0 {
            best = (v, i as u64 + 1);
        }
    }
    Ok(best)
}

pub fn bilinear_inverse_sum(p: u64, w: &PrimeWindow) -> Result<f64> {
    Ok(bilinear_inverse_sum_argmax(p, w, Exec::default())?.0)
}

/// The two sides of the inclusion-exclusion formula for `N#`.
///
/// `strict` is `sum_{d <= sqrt h} mu(d) N_{a d^-2}(h / d^2)`; it counts
/// triples with `u` squarefree but ignores collisions `l1 = l2`, `l | u`.
/// `separated` applies the same Möbius sum to the collision-free triple count
/// and matches `n_sharp` exactly. `correction` counts the collision triples
/// (with `u` squarefree) directly from their `l1^2 l2 v` / `l^2 u` / `l^3 v`
/// parametrisations, so `strict - n_sharp == correction`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionCheck {
    pub n_sharp: u64,
    pub strict: i64,
    pub separated: i64,
    pub correction: u64,
}

impl DecompositionCheck {
    /// The collision-free reading reproduces `N#`.
    pub fn holds(&self) -> bool {
        self.separated == self.n_sharp as i64
    }

    /// The literal reading holds (only when no collision triples exist).
    pub fn strict_holds(&self) -> bool {
        self.strict == self.n_sharp as i64
    }

    pub fn strict_discrepancy(&self) -> i64 {
        self.strict - self.n_sharp as i64
    }

    /// The literal reading misses exactly the collision correction.
    pub fn discrepancy_explained(&self) -> bool {
        self.strict_discrepancy() == self.correction as i64
    }
}

fn mobius_small(d: u64) -> i64 {
    let mut m = d;
    let mut sign = 1;
    let mut q = 2;
    while q * q <= m {
        if m % q == 0 {
            m /= q;
            if m % q == 0 {
                return 0;
            }
            sign = -sign;
        }
        q += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

// (l1, l2, u') with l1 l2 d^2 u' = a, u' <= hmax, l1 != l2, and neither l divides d u'.
fn count_separated(a: u64, p: u64, w: &PrimeWindow, d: u64, hmax: u64) -> Result<u64> {
    let mut total = 0;
    for &l1 in &w.primes {
        for &l2 in &w.primes {
            if l1 == l2 || d % l1 == 0 || d % l2 == 0 {
                continue;
            }
            let v = mul_mod(l1, l2, p);
            if v == 0 {
                continue;
            }
            let r = mul_mod(a, mod_inverse(v, p)?, p);
            total += class_members(r, p, hmax)
                .filter(|&u| u % l1 != 0 && u % l2 != 0)
                .count() as u64;
        }
    }
    Ok(total)
}

/// `#{(l, ..., v) : coef * v = a (mod p), v <= vmax, v squarefree, keep(v)}` summed over `coef`.
fn count_structured(a: u64, p: u64, coef: u64, vmax: u64, keep: impl Fn(u64) -> bool) -> Result<u64> {
    let c = coef % p;
    if c == 0 {
        return Ok(0);
    }
    let r = mul_mod(a, mod_inverse(c, p)?, p);
    Ok(class_members(r, p, vmax)
        .filter(|&v| is_squarefree_u64(v) && keep(v))
        .count() as u64)
}

/// Collision triples `(l1, l2, u)` with `u` squarefree: `l1 = l2`, `l1 | u` or `l2 | u`.
///
/// Inclusion-exclusion over `A = {l1 = l2}`, `B = {l1 | u}`, `C = {l2 | u}`:
/// `|A u B u C| = |A| + |B| + |C| - 2|A n B| - |B n C, l1 != l2|`, each term
/// a `Q`-type count (`l^2 u`, `l1^2 l2 v`, `l^3 v`, `l1^2 l2^2 w`).
pub fn collision_correction(a: u64, p: u64, w: &PrimeWindow, h: f64) -> Result<u64> {
    let a = check_residue(a, p)?;
    let hmax = floor_h(h)?;
    let ls = &w.primes;
    let mut a_only = 0u64; // l^2 u = a, u squarefree
    let mut both = 0u64; // l^3 v = a, v <= h/l, l not| v
    for &l in ls {
        a_only += count_structured(a, p, mul_mod(l, l, p), hmax, |_| true)?;
        both += count_structured(a, p, mul_mod(mul_mod(l, l, p), l, p), hmax / l, |v| v % l != 0)?;
    }
    let mut b = 0u64; // l1^2 l2 v = a, v <= h/l1, l1 not| v
    let mut c = 0u64; // l1 l2^2 v = a, v <= h/l2, l2 not| v
    let mut bc_distinct = 0u64; // l1^2 l2^2 w = a, l1 != l2, w <= h/(l1 l2), coprime to both
    for &l1 in ls {
        for &l2 in ls {
            let sq1 = mul_mod(l1, l1, p);
            let sq2 = mul_mod(l2, l2, p);
            b += count_structured(a, p, mul_mod(sq1, l2, p), hmax / l1, |v| v % l1 != 0)?;
            c += count_structured(a, p, mul_mod(l1, sq2, p), hmax / l2, |v| v % l2 != 0)?;
            if l1 != l2 {
                bc_distinct += count_structured(a, p, mul_mod(sq1, sq2, p), hmax / (l1 * l2), |v| {
                    v % l1 != 0 && v % l2 != 0
                })?;
            }
        }
    }
    Ok(a_only + b + c - 2 * both - bc_distinct)
}

/// Evaluates both readings of the Möbius decomposition of `N#`.
pub fn mobius_decomposition_check(a: u64, p: u64, w: &PrimeWindow, h: f64) -> Result<DecompositionCheck> {
    let a = check_residue(a, p)?;
    let hmax = floor_h(h)?;
    if hmax >= p {
        return Err(Error::domain(format!("h = {h} must be below p = {p}")));
    }
    let mut strict = 0i64;
    let mut separated = 0i64;
    let mut d = 1u64;
    while d * d <= hmax {
        let mu = mobius_small(d);
        if mu != 0 {
            let shifted = mul_mod(a, mod_inverse(mul_mod(d, d, p), p)?, p);
            let sub = hmax / (d * d);
            strict += mu * count_n(shifted, p, w, sub as f64)? as i64;
            separated += mu * count_separated(shifted, p, w, d, sub)? as i64;
        }
        d += 1;
    }
    Ok(DecompositionCheck {
        n_sharp: count_n_sharp(a, p, w, h)?,
        strict,
        separated,
        correction: collision_correction(a, p, w, h)?,
    })
}

/// `count_n` for every `a` in `[1, p-1]` (index `a - 1`), sharing one product table.
pub fn count_n_all(p: u64, w: &PrimeWindow, h: f64, exec: Exec) -> Result<Vec<u64>> {
    check_residue(1, p)?;
    let hmax = floor_h(h)?;
    let table = ProductTable::new(p, w);
    Ok(exec.map_range(1..p, |a| table.count_n(a, hmax)))
}

/// Deviation of `count_n` from `K^2 h / p`.
pub fn compare_n(a: u64, p: u64, w: &PrimeWindow, h: f64) -> Result<CountComparison> {
    let exact = count_n(a, p, w, h)?;
    let b = crate::bounds::b_of(p as f64, w.l).unwrap_or(f64::NAN);
    Ok(CountComparison::new(exact, predict_n_main_term(w, h, p), b))
}

/// Deviation of `count_n_sharp` from `K^2 h / (zeta(2) p)`.
pub fn compare_n_sharp(a: u64, p: u64, w: &PrimeWindow, h: f64) -> Result<CountComparison> {
    let exact = count_n_sharp(a, p, w, h)?;
    let hh = h.max(1.0);
    let b = crate::bounds::b_of(p as f64, w.l).unwrap_or(f64::NAN);
    let err = (w.l * w.l * h / p as f64) + b + hh.sqrt();
    Ok(CountComparison::new(exact, predict_n_sharp_main_term(w, h, p), err))
}

/// Mean of `|S(a)|` over `a`, a cheap summary printed next to the maximum.
pub fn bilinear_mean(p: u64, w: &PrimeWindow, exec: Exec) -> Result<f64> {
    let buckets = inverse_product_buckets(p, w)?;
    let values = exec.map_range(1..p, |a| bucket_sum_abs(a, p, &buckets));
    Ok(pairwise_sum(&values) / (p - 1) as f64)
}
