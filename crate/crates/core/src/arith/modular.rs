use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// The inverse of `k` modulo `p`, in `[1, p-1]`.
pub fn mod_inverse(k: u64, p: u64) -> Result<u64> {
    if p < 2 {
        return Err(Error::domain(format!("modulus {p} < 2")));
    }
    let k = k % p;
    if k == 0 || gcd(k, p) != 1 {
        return Err(Error::domain(format!("{k} is not invertible modulo {p}")));
    }
    // extended Euclid on signed 128-bit values
    let (mut r0, mut r1) = (p as i128, k as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    Ok(t0.rem_euclid(p as i128) as u64)
}

/// Legendre symbol `(a/p)` for an odd prime `p`, via Euler's criterion.
pub fn legendre(a: i64, p: u64) -> i32 {
    let r = (a as i128).rem_euclid(p as i128) as u64;
    if r == 0 {
        return 0;
    }
    match mod_pow(r, (p - 1) / 2, p) {
        1 => 1,
        _ => -1,
    }
}

/// Square roots of `c` modulo an odd prime `p` (Tonelli-Shanks), smaller root first.
pub fn sqrt_mod(c: u64, p: u64) -> Option<(u64, u64)> {
    let c = c % p;
    if c == 0 {
        return Some((0, 0));
    }
    if legendre(c as i64, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| legendre(z as i64, p) == -1)?;
    let mut m = s;
    let mut cc = mod_pow(z, q, p);
    let mut t = mod_pow(c, q, p);
    let mut r = mod_pow(c, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = mod_pow(cc, 1 << (m - i - 1), p);
        m = i;
        cc = mul_mod(b, b, p);
        t = mul_mod(t, cc, p);
        r = mul_mod(r, b, p);
    }
    let other = p - r;
    Some((r.min(other), r.max(other)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(4, 7).unwrap(), 2);
        assert_eq!(mod_inverse(1, 13).unwrap(), 1);
        assert_eq!(mod_inverse(2, 5).unwrap(), 3);
        assert!(matches!(mod_inverse(14, 7), Err(Error::Domain(_))));
        for p in [3u64, 7, 101, 65_537] {
            for k in 1..p.min(500) {
                let inv = mod_inverse(k, p).unwrap();
                assert!((1..p).contains(&inv));
                assert_eq!(mul_mod(k, inv, p), 1);
            }
        }
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(2, 7), 1);
        assert_eq!(legendre(0, 7), 0);
        assert_eq!(legendre(3, 7), -1);
        assert_eq!(legendre(-1, 7), -1);
        assert_eq!(legendre(14, 7), 0);
    }

    #[test]
    fn legendre_matches_exhaustive_squares() {
        for p in crate::arith::primes_up_to(1000).into_iter().skip(1) {
            let mut is_sq = vec![false; p as usize];
            for x in 1..p {
                is_sq[(x * x % p) as usize] = true;
            }
            for a in 0..p {
                let want = if a == 0 {
                    0
                } else if is_sq[a as usize] {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre(a as i64, p), want, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn square_roots() {
        for p in crate::arith::primes_up_to(600).into_iter().skip(1) {
            for c in 0..p {
                match sqrt_mod(c, p) {
                    Some((r, s)) => {
                        assert_eq!(mul_mod(r, r, p), c);
                        assert_eq!(mul_mod(s, s, p), c);
                        assert!(r <= s);
                    }
                    None => assert_eq!(legendre(c as i64, p), -1),
                }
            }
        }
    }

    #[test]
    fn legendre_is_multiplicative() {
        for p in crate::arith::primes_up_to(101).into_iter().skip(1) {
            for a in 1..p as i64 {
                for b in 1..p as i64 {
                    assert_eq!(legendre(a, p) * legendre(b, p), legendre(a * b, p));
                }
            }
        }
    }
}
