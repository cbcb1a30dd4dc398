//! Certified bounds for `alpha = d^{-(k+1)/k}` from exact integer roots.
//!
//! At precision `P`, `a = floor(floor(2^{Pk} / d^{k+1})^{1/k})` satisfies
//! `a <= 2^P alpha < a + 1`, so every comparison below is an exact integer
//! inequality on the enclosing interval.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `floor(2^prec * d^{-(k+1)/k})`.
pub fn alpha_scaled_floor(d: u64, k: u32, prec: u32) -> BigUint {
    let num = BigUint::one() << (prec as usize * k as usize);
    let den = num_traits::pow(BigUint::from(d), k as usize + 1);
    (num / den).nth_root(k)
}

/// Outcome of a certified comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    True,
    False,
    Undecided,
}

/// Rational exponent `num / den >= 1` in `|alpha - r/q| <= q^{-num/den}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exponent {
    pub num: u32,
    pub den: u32,
}

impl Exponent {
    /// `1 + 1/n`.
    pub fn dirichlet(n: u32) -> Self {
        Exponent { num: n + 1, den: n }
    }
}

/// `|alpha - r/q| <= numer / denom`, with `denom = 2^prec * q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBound {
    #[serde(with = "crate::decimal")]
    pub numer: BigUint,
    #[serde(with = "crate::decimal")]
    pub denom: BigUint,
    pub prec: u32,
}

/// Bracket `[lo, hi]` for `2^prec |q alpha - r|`.
fn scaled_residual(d: u64, k: u32, q: &BigUint, r: &BigInt, prec: u32) -> (BigUint, BigUint) {
    let a = BigInt::from(alpha_scaled_floor(d, k, prec));
    let q = BigInt::from(q.clone());
    let shift = r * (BigInt::one() << prec as usize);
    let lo = &q * &a - &shift;
    let hi: BigInt = &q * (&a + 1) - &shift;
    let upper = lo.abs().max(hi.abs());
    let lower = if lo.sign() != Sign::Plus && hi.sign() != Sign::Minus {
        BigInt::zero()
    } else {
        lo.abs().min(hi.abs())
    };
    (lower.to_biguint().unwrap(), upper.to_biguint().unwrap())
}

/// Decides `|alpha - r/q| <= q^{-e}` at one precision.
///
/// Equivalent to `(2^P |q alpha - r|)^den * q^(num - den) <= 2^(P den)`.
pub fn decide(d: u64, k: u32, q: &BigUint, r: &BigInt, e: Exponent, prec: u32) -> (Decision, ErrorBound) {
    let (lower, upper) = scaled_residual(d, k, q, r, prec);
    let qpow = num_traits::pow(q.clone(), (e.num - e.den) as usize);
    let limit = BigUint::one() << (prec as usize * e.den as usize);
    let bound = ErrorBound {
        numer: upper.clone(),
        denom: q << prec as usize,
        prec,
    };
    let hi_side = num_traits::pow(upper, e.den as usize) * &qpow;
    if hi_side <= limit {
        return (Decision::True, bound);
    }
    let lo_side = num_traits::pow(lower, e.den as usize) * &qpow;
    if lo_side > limit {
        return (Decision::False, bound);
    }
    (Decision::Undecided, bound)
}

/// Doubles the precision from `start` up to `max` until [`decide`] is definite.
///
/// `Ok(Some(bound))` when the inequality holds, `Ok(None)` when it fails.
pub fn certify(d: u64, k: u32, q: &BigUint, r: &BigInt, e: Exponent, start: u32, max: u32) -> Result<Option<ErrorBound>> {
    if e.num < e.den {
        return Err(Error::domain(format!("exponent {}/{} < 1", e.num, e.den)));
    }
    let mut prec = start.max(8);
    loop {
        match decide(d, k, q, r, e, prec) {
            (Decision::True, b) => return Ok(Some(b)),
            (Decision::False, _) => return Ok(None),
            (Decision::Undecided, _) if prec >= max => {
                return Err(Error::Precision(format!(
                    "|{d}^(-{}/{k}) - {r}/{q}| <= {q}^(-{}/{}) undecided at {prec} bits",
                    k + 1,
                    e.num,
                    e.den
                )))
            }
            _ => prec = (prec * 2).min(max),
        }
    }
}

/// Nearest integer to `q alpha`, from a bracket at precision `prec`.
pub fn nearest_multiple(d: u64, k: u32, q: &BigUint, prec: u32) -> BigInt {
    let a = alpha_scaled_floor(d, k, prec);
    let half = BigUint::one() << (prec as usize).saturating_sub(1);
    BigInt::from((q * a + half) >> prec as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_brackets() {
        // 2^{-3/2} = 0.35355339..., 3^{-3/2} = 0.19245008...
        let a = alpha_scaled_floor(2, 2, 30);
        let v = a.to_string().parse::<f64>().unwrap() / 2f64.powi(30);
        assert!((v - 2f64.powf(-1.5)).abs() < 2.0 / 2f64.powi(30));
        let a = alpha_scaled_floor(3, 2, 40);
        let v = a.to_string().parse::<f64>().unwrap() / 2f64.powi(40);
        assert!((v - 3f64.powf(-1.5)).abs() < 2.0 / 2f64.powi(40));
        // k = 3: 5^{-4/3}
        let a = alpha_scaled_floor(5, 3, 40);
        let v = a.to_string().parse::<f64>().unwrap() / 2f64.powi(40);
        assert!((v - 5f64.powf(-4.0 / 3.0)).abs() < 2.0 / 2f64.powi(40));
    }

    #[test]
    fn bracket_is_exact() {
        // (a / 2^P)^k d^{k+1} <= 1 < ((a + 1) / 2^P)^k d^{k+1}
        for (d, k, p) in [(2u64, 2u32, 50u32), (6, 3, 64), (10, 4, 33)] {
            let a = alpha_scaled_floor(d, k, p);
            let dk = num_traits::pow(BigUint::from(d), k as usize + 1);
            let one = BigUint::one() << (p as usize * k as usize);
            assert!(num_traits::pow(a.clone(), k as usize) * &dk <= one);
            assert!(num_traits::pow(a + 1u32, k as usize) * &dk > one);
        }
    }

    #[test]
    fn trivial_q_one() {
        // r = round(alpha) = 0 and alpha <= 1 = 1^{-3/2}
        let q = BigUint::one();
        let r = nearest_multiple(2, 2, &q, 64);
        assert_eq!(r, BigInt::zero());
        assert!(certify(2, 2, &q, &r, Exponent::dirichlet(2), 32, 1024).unwrap().is_some());
        // r = 1 misses at exponent 3/2 only if |alpha - 1| > 1: it does not
        assert!(certify(2, 2, &q, &BigInt::one(), Exponent::dirichlet(2), 32, 1024).unwrap().is_some());
        // r = 2 is too far
        assert!(certify(2, 2, &q, &BigInt::from(2), Exponent::dirichlet(2), 32, 1024).unwrap().is_none());
    }

    #[test]
    fn classical_exponent_always_holds_for_nearest() {
        let e = Exponent { num: 1, den: 1 };
        for q in 1u32..200 {
            let q = BigUint::from(q);
            let r = nearest_multiple(3, 2, &q, 64);
            assert!(certify(3, 2, &q, &r, e, 32, 1024).unwrap().is_some());
        }
    }

    #[test]
    fn precision_exhaustion_is_reported() {
        // at 8 bits the bracket for q alpha is about q / 256 wide and straddles r
        let q = BigUint::from(1_000_003u64);
        let r = nearest_multiple(2, 2, &q, 128);
        let got = certify(2, 2, &q, &r, Exponent::dirichlet(2), 8, 8);
        assert!(matches!(got, Err(Error::Precision(_))), "{got:?}");
    }
}
