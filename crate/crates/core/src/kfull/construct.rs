use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::certified::{certify, nearest_multiple, ErrorBound, Exponent};
use super::lattice::{lll_reduce, Vector};
use super::{squarefree_seeds, IntervalScanResult};
use crate::arith::is_squarefree_u64;
use crate::error::{Error, Result};
use crate::exec::Exec;

pub const DEFAULT_MAX_ELL: u32 = 3;
pub const DEFAULT_MAX_K: u32 = 4;
pub const DEFAULT_PRECISION_BITS: u32 = 256;
pub const DEFAULT_MAX_PRECISION_BITS: u32 = 1 << 16;
/// Trial-division bound for the independent k-fullness re-check.
const TRIAL_BUDGET: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KfullConstructionParams {
    pub k: u32,
    pub ell: u32,
    pub q_cap: BigUint,
    pub precision_bits: u32,
    pub max_precision_bits: u32,
    /// Lift the default `ell <= 3`, `k <= 4` budget.
    pub allow_large: bool,
}

impl KfullConstructionParams {
    pub fn new(k: u32, ell: u32) -> Self {
        KfullConstructionParams {
            k,
            ell,
            q_cap: BigUint::one() << 4096usize,
            precision_bits: DEFAULT_PRECISION_BITS,
            max_precision_bits: DEFAULT_MAX_PRECISION_BITS,
            allow_large: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::domain(format!("k = {} must be at least 2", self.k)));
        }
        if self.ell < 1 {
            return Err(Error::domain("ell must be at least 1"));
        }
        if !self.allow_large && (self.ell > DEFAULT_MAX_ELL || self.k > DEFAULT_MAX_K) {
            return Err(Error::resource(
                format!("k = {}, ell = {}", self.k, self.ell),
                format!("k <= {DEFAULT_MAX_K}, ell <= {DEFAULT_MAX_ELL} without override"),
            ));
        }
        if self.precision_bits < 8 || self.max_precision_bits < self.precision_bits {
            return Err(Error::domain("precision bits must satisfy 8 <= start <= max"));
        }
        let r = r_bound(self.k, self.ell);
        if self.q_cap < r {
            return Err(Error::domain(format!("q_cap {} below R = {r}", self.q_cap)));
        }
        Ok(())
    }
}

/// `ceil(R)` for `R = (k 2^{k-1} (4 ell)^{(k+1)/k})^{2 ell}`.
///
/// `R^k = (k 2^{k-1})^{2 ell k} (4 ell)^{2 ell (k+1)}` is an integer.
pub fn r_bound(k: u32, ell: u32) -> BigUint {
    let c = BigUint::from(k) << (k as usize - 1);
    let rk = num_traits::pow(c, (2 * ell * k) as usize) * num_traits::pow(BigUint::from(4 * ell), (2 * ell * (k + 1)) as usize);
    ceil_root(&rk, k)
}

fn ceil_root(n: &BigUint, k: u32) -> BigUint {
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        r
    } else {
        r + 1u32
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproximationResult {
    pub q: BigUint,
    pub r: Vec<BigUint>,
    pub certified_errors: Vec<ErrorBound>,
}

/// Checks one denominator: `r_j = round(q alpha_j)` and every bound certified.
fn try_denominator(seeds: &[u64], k: u32, e: Exponent, q: &BigUint, prec: u32, max_prec: u32) -> Result<Option<ApproximationResult>> {
    let round_prec = prec.max(q.bits() as u32 + 64);
    let mut r = Vec::with_capacity(seeds.len());
    let mut errs = Vec::with_capacity(seeds.len());
    for &d in seeds {
        let rj = nearest_multiple(d, k, q, round_prec);
        match certify(d, k, q, &rj, e, prec, max_prec)? {
            Some(b) => errs.push(b),
            None => return Ok(None),
        }
        r.push(rj.to_biguint().unwrap_or_default());
    }
    Ok(Some(ApproximationResult { q: q.clone(), r, certified_errors: errs }))
}

/// Candidate denominators from the reduced simultaneous-approximation lattice at scale `big_q`.
fn lattice_candidates(seeds: &[u64], k: u32, big_q: &BigUint) -> Vec<BigUint> {
    let n = seeds.len();
    let prec = (big_q.bits() as usize * (n + 1)).div_ceil(n) + 64;
    let s = BigInt::one() << prec;
    // W ~ S Q^{-1-1/n}
    let denom = BigInt::from(big_q * big_q.nth_root(n as u32).max(BigUint::one()));
    let w = (&s / denom).max(BigInt::one());
    let mut basis: Vec<Vector> = Vec::with_capacity(n + 1);
    let mut first = vec![w.clone()];
    first.extend(seeds.iter().map(|&d| BigInt::from(super::certified::alpha_scaled_floor(d, k, prec as u32))));
    basis.push(first);
    for j in 0..n {
        let mut row = vec![BigInt::zero(); n + 1];
        row[j + 1] = s.clone();
        basis.push(row);
    }
    lll_reduce(&mut basis);

    let mut firsts: Vec<BigInt> = basis.iter().map(|v| v[0].clone()).collect();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            firsts.push(&basis[i][0] + &basis[j][0]);
            firsts.push(&basis[i][0] - &basis[j][0]);
        }
    }
    let mut out: Vec<BigUint> = firsts
        .into_iter()
        .filter_map(|c| {
            let c = c.abs();
            if c.is_zero() || !(&c % &w).is_zero() {
                None
            } else {
                (c / &w).to_biguint()
            }
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Finds `q` in `[q_min, q_cap]` with `|alpha_j - r_j/q| <= q^{-e}` for every seed,
/// where `alpha_j = d_j^{-(k+1)/k}`.
///
/// `q_min` is tried first; then the lattice scale doubles from `q_min` to `q_cap`.
pub fn simultaneous_approx(
    seeds: &[u64],
    k: u32,
    exponent: Exponent,
    q_min: &BigUint,
    q_cap: &BigUint,
    precision_bits: u32,
    max_precision_bits: u32,
) -> Result<Option<ApproximationResult>> {
    if q_min.is_zero() {
        return Err(Error::domain("q_min must be at least 1"));
    }
    if seeds.is_empty() || k < 2 {
        return Err(Error::domain("need at least one seed and k >= 2"));
    }
    if q_min > q_cap {
        return Ok(None);
    }
    if let Some(hit) = try_denominator(seeds, k, exponent, q_min, precision_bits, max_precision_bits)? {
        return Ok(Some(hit));
    }
    let mut scale = q_min.clone();
    let mut tried = std::collections::BTreeSet::new();
    tried.insert(q_min.clone());
    while &scale <= q_cap {
        for q in lattice_candidates(seeds, k, &scale) {
            if &q < q_min || &q > q_cap || !tried.insert(q.clone()) {
                continue;
            }
            if let Some(hit) = try_denominator(seeds, k, exponent, &q, precision_bits, max_precision_bits)? {
                return Ok(Some(hit));
            }
        }
        scale <<= 1usize;
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `((q-1)^k, q^k)`
    Below,
    /// `(q^k, (q+1)^k)`
    Above,
}

/// One candidate `c = d^{k+1} r^k` with its exact comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub d: u64,
    pub r: String,
    pub c: String,
    /// `|d^{-(k+1)/k} - r/q| <= err_numer / err_denom`.
    pub err_numer: String,
    pub err_denom: String,
    /// `|q^k - c|`, asserted `< q^{k-1}`.
    pub gap: String,
    pub gap_limit: String,
    pub side: Side,
    pub interval_lower: String,
    pub interval_upper: String,
}

/// Everything needed to re-check a constructed cluster in exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterCertificate {
    pub k: u32,
    pub ell: u32,
    pub seeds: Vec<u64>,
    pub r_bound: String,
    pub q: String,
    pub exponent: Exponent,
    pub precision_bits: u32,
    pub candidates: Vec<CandidateRecord>,
    pub side: Side,
    pub n: String,
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterResult {
    pub interval: IntervalScanResult,
    pub certificate: ClusterCertificate,
}

/// Builds an interval `(N^k, (N+1)^k)` holding at least `ell` k-full integers.
pub fn construct_kfull_cluster(params: &KfullConstructionParams) -> Result<ClusterResult> {
    construct_kfull_cluster_with(params, Exec::default())
}

pub fn construct_kfull_cluster_with(params: &KfullConstructionParams, exec: Exec) -> Result<ClusterResult> {
    params.validate()?;
    let (k, ell) = (params.k, params.ell);
    let seeds = squarefree_seeds(ell);
    let r = r_bound(k, ell);
    let e = Exponent::dirichlet(2 * ell);
    let approx = simultaneous_approx(&seeds, k, e, &r, &params.q_cap, params.precision_bits, params.max_precision_bits)?
        .ok_or_else(|| Error::resource(format!("simultaneous approximation search over [{r}, q_cap]"), &params.q_cap))?;
    let q = &approx.q;
    let qk = num_traits::pow(q.clone(), k as usize);
    let limit = num_traits::pow(q.clone(), k as usize - 1);
    let below = (num_traits::pow(q - 1u32, k as usize), qk.clone());
    let above = (qk.clone(), num_traits::pow(q + 1u32, k as usize));

    let jobs: Vec<(usize, u64)> = seeds.iter().copied().enumerate().collect();
    let records = exec.map_slice(&jobs, |&(j, d)| -> Result<CandidateRecord> {
        let rj = &approx.r[j];
        let c = num_traits::pow(BigUint::from(d), k as usize + 1) * num_traits::pow(rj.clone(), k as usize);
        let gap = if c > qk { &c - &qk } else { &qk - &c };
        if gap >= limit {
            return Err(Error::Internal(format!("|q^k - c| = {gap} >= q^(k-1) for d = {d}")));
        }
        let (side, (lo, hi)) = if below.0 < c && c < below.1 {
            (Side::Below, &below)
        } else if above.0 < c && c < above.1 {
            (Side::Above, &above)
        } else {
            return Err(Error::Internal(format!("candidate {c} for d = {d} outside both intervals")));
        };
        if !kfull_structural(d, rj, &c, k) {
            return Err(Error::Internal(format!("candidate {c} is not k-full")));
        }
        let eb = &approx.certified_errors[j];
        Ok(CandidateRecord {
            d,
            r: rj.to_string(),
            c: c.to_string(),
            err_numer: eb.numer.to_string(),
            err_denom: eb.denom.to_string(),
            gap: gap.to_string(),
            gap_limit: limit.to_string(),
            side,
            interval_lower: lo.to_string(),
            interval_upper: hi.to_string(),
        })
    });
    let records = records.into_iter().collect::<Result<Vec<_>>>()?;
    let n_below = records.iter().filter(|c| c.side == Side::Below).count();
    let side = if n_below >= records.len() - n_below { Side::Below } else { Side::Above };
    let n = match side {
        Side::Below => q - 1u32,
        Side::Above => q.clone(),
    };
    let mut witnesses: Vec<BigUint> = records
        .iter()
        .filter(|c| c.side == side)
        .map(|c| c.c.parse().expect("decimal"))
        .collect();
    witnesses.sort();
    witnesses.dedup();
    if witnesses.len() < ell as usize {
        return Err(Error::Internal(format!("only {} distinct witnesses, need {ell}", witnesses.len())));
    }
    let certificate = ClusterCertificate {
        k,
        ell,
        seeds,
        r_bound: r.to_string(),
        q: q.to_string(),
        exponent: e,
        precision_bits: params.precision_bits,
        candidates: records,
        side,
        n: n.to_string(),
        witnesses: witnesses.iter().map(|w| w.to_string()).collect(),
    };
    verify_certificate(&certificate)?;
    Ok(ClusterResult {
        interval: IntervalScanResult { n, k, witnesses },
        certificate,
    })
}

/// `c = d^{k+1} r^k` with `d > 1` squarefree and `r >= 1` is k-full: every prime
/// of `c` divides `d` or `r`, contributing exponent at least `k`.
fn kfull_structural(d: u64, r: &BigUint, c: &BigUint, k: u32) -> bool {
    d > 1
        && is_squarefree_u64(d)
        && !r.is_zero()
        && num_traits::pow(BigUint::from(d), k as usize + 1) * num_traits::pow(r.clone(), k as usize) == *c
}

/// Independent k-fullness test by trial division up to `c^{1/(k+1)}`; `None`
/// when `c` is too large for the budget.
///
/// After removing primes below `B = c^{1/(k+1)}`, the cofactor has fewer than
/// `k + 1` prime factors, so it is k-full exactly when it is 1 or a k-th power.
pub fn kfull_by_trial(c: &BigUint, k: u32) -> Option<bool> {
    let mut m = c.to_u128()?;
    if m == 0 {
        return Some(false);
    }
    let bound = crate::arith::iroot_u128(m, k + 1);
    if bound > TRIAL_BUDGET {
        return None;
    }
    let mut p: u128 = 2;
    while p <= bound {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            if e < k {
                return Some(false);
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let t = crate::arith::iroot_u128(m, k);
    Some(m == 1 || t.checked_pow(k) == Some(m))
}

fn reject(msg: impl Into<String>) -> Error {
    Error::Format(format!("certificate rejected: {}", msg.into()))
}

fn parse_big(s: &str, what: &str) -> Result<BigUint> {
    s.parse().map_err(|_| reject(format!("{what} = {s:?} is not a decimal integer")))
}

/// Re-checks a certificate from its integers alone.
pub fn verify_certificate(cert: &ClusterCertificate) -> Result<()> {
    let (k, ell) = (cert.k, cert.ell);
    if k < 2 || ell < 1 {
        return Err(reject("k >= 2 and ell >= 1 required"));
    }
    if cert.seeds != squarefree_seeds(ell) {
        return Err(reject("seeds are not the first 2 ell squarefree integers above 1"));
    }
    let r = r_bound(k, ell);
    if parse_big(&cert.r_bound, "R")? != r {
        return Err(reject("R mismatch"));
    }
    let q = parse_big(&cert.q, "q")?;
    if q < r {
        return Err(reject(format!("q = {q} below R = {r}")));
    }
    if cert.exponent != Exponent::dirichlet(2 * ell) {
        return Err(reject("approximation exponent is not 1 + 1/(2 ell)"));
    }
    if cert.candidates.len() != cert.seeds.len() {
        return Err(reject("one candidate per seed required"));
    }
    let qk = num_traits::pow(q.clone(), k as usize);
    let limit = num_traits::pow(q.clone(), k as usize - 1);
    let below = (num_traits::pow(&q - 1u32, k as usize), qk.clone());
    let above = (qk.clone(), num_traits::pow(&q + 1u32, k as usize));
    let max_prec = cert.precision_bits.max(8).saturating_mul(256).max(DEFAULT_MAX_PRECISION_BITS);
    let mut cs = Vec::new();
    for (cand, &d) in cert.candidates.iter().zip(&cert.seeds) {
        if cand.d != d {
            return Err(reject(format!("candidate seed {} != {d}", cand.d)));
        }
        let rj = parse_big(&cand.r, "r")?;
        let c = parse_big(&cand.c, "c")?;
        if certify(d, k, &q, &BigInt::from(rj.clone()), cert.exponent, cert.precision_bits, max_prec)?.is_none() {
            return Err(reject(format!("approximation bound fails for d = {d}")));
        }
        if !kfull_structural(d, &rj, &c, k) {
            return Err(reject(format!("c != d^(k+1) r^k for d = {d}")));
        }
        if kfull_by_trial(&c, k) == Some(false) {
            return Err(reject(format!("{c} is not {k}-full")));
        }
        let gap = if c > qk { &c - &qk } else { &qk - &c };
        if parse_big(&cand.gap, "gap")? != gap || parse_big(&cand.gap_limit, "gap_limit")? != limit || gap >= limit {
            return Err(reject(format!("|q^k - c| < q^(k-1) fails for d = {d}")));
        }
        let (lo, hi) = match cand.side {
            Side::Below => &below,
            Side::Above => &above,
        };
        if !(*lo < c && c < *hi) || parse_big(&cand.interval_lower, "lower")? != *lo || parse_big(&cand.interval_upper, "upper")? != *hi {
            return Err(reject(format!("interval membership fails for d = {d}")));
        }
        cs.push((c, cand.side));
    }
    let mut all: Vec<&BigUint> = cs.iter().map(|(c, _)| c).collect();
    all.sort();
    all.dedup();
    if all.len() != cs.len() {
        return Err(reject("candidates are not pairwise distinct"));
    }
    let n = parse_big(&cert.n, "N")?;
    let want_n = match cert.side {
        Side::Below => &q - 1u32,
        Side::Above => q.clone(),
    };
    if n != want_n {
        return Err(reject("N does not match the chosen side"));
    }
    let mut on_side: Vec<BigUint> = cs.into_iter().filter(|(_, s)| *s == cert.side).map(|(c, _)| c).collect();
    on_side.sort();
    let listed = cert.witnesses.iter().map(|w| parse_big(w, "witness")).collect::<Result<Vec<_>>>()?;
    if listed != on_side {
        return Err(reject("witness list differs from the candidates on the chosen side"));
    }
    if listed.len() < ell as usize {
        return Err(reject(format!("{} witnesses, need {ell}", listed.len())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_values() {
        assert_eq!(r_bound(2, 1), BigUint::from(1024u32));
        assert_eq!(r_bound(2, 2), BigUint::from(67_108_864u32));
        // (3 * 4 * 4^{4/3})^2 = 144 * 4^{8/3} = 5805.71...
        assert_eq!(r_bound(3, 1), BigUint::from(5806u32));
    }

    #[test]
    fn q_one_is_degenerate() {
        let got = simultaneous_approx(&[2, 3], 2, Exponent::dirichlet(2), &BigUint::one(), &BigUint::from(10u32), 64, 4096)
            .unwrap()
            .unwrap();
        assert_eq!(got.q, BigUint::one());
        assert!(got.r.iter().all(|r| r.is_zero()));
    }

    #[test]
    fn classical_exponent_found_quickly() {
        let q_min = BigUint::from(1000u32);
        let got = simultaneous_approx(&[2, 3], 2, Exponent { num: 1, den: 1 }, &q_min, &BigUint::from(1u32 << 20), 64, 4096)
            .unwrap()
            .unwrap();
        assert!(got.q >= q_min);
    }

    #[test]
    fn trial_kfull() {
        assert_eq!(kfull_by_trial(&BigUint::from(72u32), 2), Some(true));
        assert_eq!(kfull_by_trial(&BigUint::from(12u32), 2), Some(false));
        assert_eq!(kfull_by_trial(&BigUint::from(7u32 * 7 * 11 * 11), 2), Some(true));
        assert_eq!(kfull_by_trial(&BigUint::from(7u32 * 7 * 11), 2), Some(false));
        assert_eq!(kfull_by_trial(&BigUint::from(1u32 << 20), 3), Some(true));
        assert_eq!(kfull_by_trial(&BigUint::from(1u32), 3), Some(true));
    }

    #[test]
    fn cluster_k2_ell1() {
        let res = construct_kfull_cluster(&KfullConstructionParams::new(2, 1)).unwrap();
        verify_certificate(&res.certificate).unwrap();
        assert!(!res.interval.witnesses.is_empty());
        let json = serde_json::to_string(&res.certificate).unwrap();
        let back: ClusterCertificate = serde_json::from_str(&json).unwrap();
        verify_certificate(&back).unwrap();

        let mut bad = res.certificate.clone();
        bad.candidates[0].r = (bad.candidates[0].r.parse::<u64>().unwrap() + 1).to_string();
        assert!(verify_certificate(&bad).is_err());
    }

    #[test]
    fn budget_and_domain() {
        assert!(matches!(KfullConstructionParams::new(1, 1).validate(), Err(Error::Domain(_))));
        assert!(matches!(KfullConstructionParams::new(2, 4).validate(), Err(Error::Resource { .. })));
        let mut p = KfullConstructionParams::new(2, 1);
        p.q_cap = BigUint::from(1000u32);
        assert!(matches!(p.validate(), Err(Error::Domain(_))));
    }
}
