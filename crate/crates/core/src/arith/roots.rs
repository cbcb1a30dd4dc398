use num_bigint::BigUint;

use crate::error::{Error, Result};

/// `floor(n^(1/k))`, exact for arbitrary precision inputs.
pub fn integer_root(n: &BigUint, k: u32) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::domain("integer_root with k = 0"));
    }
    Ok(n.nth_root(k))
}

/// `floor(n^(1/k))` on machine integers.
pub fn iroot_u128(n: u128, k: u32) -> u128 {
    assert!(k >= 1);
    if k == 1 || n < 2 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64) as u128;
    // float guess is within a couple of units; fix up exactly
    while r > 0 && pow_exceeds(r, k, n) {
        r -= 1;
    }
    while !pow_exceeds(r + 1, k, n) {
        r += 1;
    }
    r
}

/// `r^k > n`, without overflow.
fn pow_exceeds(r: u128, k: u32, n: u128) -> bool {
    let mut acc: u128 = 1;
    for _ in 0..k {
        match acc.checked_mul(r) {
            Some(v) if v <= n => acc = v,
            _ => return true,
        }
    }
    false
}

pub fn isqrt_u64(n: u64) -> u64 {
    iroot_u128(n as u128, 2) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Pow;
    use proptest::prelude::*;

    #[test]
    fn root_examples() {
        assert_eq!(integer_root(&BigUint::from(26u32), 2).unwrap(), BigUint::from(5u32));
        assert_eq!(integer_root(&BigUint::from(27u32), 3).unwrap(), BigUint::from(3u32));
        let e18 = BigUint::from(10u32).pow(18u32);
        assert_eq!(integer_root(&e18, 2).unwrap(), BigUint::from(10u32).pow(9u32));
        assert!(matches!(integer_root(&e18, 0), Err(Error::Domain(_))));
        assert_eq!(iroot_u128(26, 2), 5);
        assert_eq!(iroot_u128(u128::MAX, 2), u64::MAX as u128);
        assert_eq!(iroot_u128(1_000_000_000_000, 3), 10_000);
        assert_eq!(iroot_u128(999_999_999_999, 3), 9_999);
    }

    proptest! {
        #[test]
        fn big_root_brackets(digits in proptest::collection::vec(any::<u32>(), 1..8), k in 1u32..9) {
            let n = BigUint::new(digits);
            let r = integer_root(&n, k).unwrap();
            prop_assert!(r.clone().pow(k) <= n);
            prop_assert!((r + 1u32).pow(k) > n);
        }

        #[test]
        fn machine_root_brackets(n in any::<u128>(), k in 1u32..7) {
            let r = iroot_u128(n, k);
            prop_assert!(!pow_exceeds(r, k, n));
            prop_assert!(pow_exceeds(r + 1, k, n));
        }
    }
}
