//! Integral LLL reduction (fraction-free Gram-Schmidt, Cohen Alg. 2.6.7) with
//! `delta = 99/100`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type Vector = Vec<BigInt>;

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `round(a / b)` for `b > 0`, halves away from zero.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (q, r) = a.div_mod_floor(b);
    if &r * &two >= *b {
        q + 1
    } else {
        q
    }
}

/// Reduces the rows of `basis` in place. Rows must be linearly independent.
pub fn lll_reduce(basis: &mut [Vector]) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    // 1-based bookkeeping: b[1..=n], d[0..=n], lambda[k][j] for j < k
    let mut b: Vec<Vector> = std::iter::once(Vec::new()).chain(basis.iter().cloned()).collect();
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    d[0] = BigInt::from(1);
    d[1] = dot(&b[1], &b[1]);
    let mut k = 2;
    let mut k_max = 1;
    let (num, den) = (BigInt::from(99), BigInt::from(100));

    while k <= n {
        if k > k_max {
            k_max = k;
            for j in 1..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    assert!(!u.is_zero(), "lll_reduce: dependent rows");
                    d[k] = u;
                }
            }
        }
        reduce(&mut b, &mut lam, &d, k, k - 1);
        let lhs = &den * &d[k] * &d[k - 2];
        let rhs = &num * &d[k - 1] * &d[k - 1] - &den * &lam[k][k - 1] * &lam[k][k - 1];
        if lhs < rhs {
            swap(&mut b, &mut lam, &mut d, k, k_max);
            k = (k - 1).max(2);
        } else {
            for l in (1..k - 1).rev() {
                reduce(&mut b, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
    for (dst, src) in basis.iter_mut().zip(b.into_iter().skip(1)) {
        *dst = src;
    }
}

fn reduce(b: &mut [Vector], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
    if (&lam[k][l] * 2u32).abs() > d[l] {
        let q = round_div(&lam[k][l], &d[l]);
        let bl = b[l].clone();
        for (x, y) in b[k].iter_mut().zip(&bl) {
            *x -= &q * y;
        }
        lam[k][l] -= &q * &d[l];
        for i in 1..l {
            let t = &q * &lam[l][i];
            lam[k][i] -= t;
        }
    }
}

fn swap(b: &mut [Vector], lam: &mut [Vec<BigInt>], d: &mut [BigInt], k: usize, k_max: usize) {
    b.swap(k, k - 1);
    for j in 1..k - 1 {
        let t = lam[k][j].clone();
        lam[k][j] = lam[k - 1][j].clone();
        lam[k - 1][j] = t;
    }
    let l = lam[k][k - 1].clone();
    let big_b = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
    for i in k + 1..=k_max {
        let t = lam[i][k].clone();
        lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
        lam[i][k - 1] = (&big_b * &t + &l * &lam[i][k]) / &d[k];
    }
    d[k - 1] = big_b;
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn det_sq(basis: &[Vector]) -> BigInt {
        // Gram determinant via rational Gaussian elimination
        let n = basis.len();
        let mut g: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| BigRational::from_integer(dot(&basis[i], &basis[j]))).collect())
            .collect();
        let mut det = BigRational::from_integer(BigInt::from(1));
        for c in 0..n {
            let piv = (c..n).find(|&r| !g[r][c].is_zero()).unwrap();
            if piv != c {
                g.swap(piv, c);
                det = -det;
            }
            det *= g[c][c].clone();
            for r in c + 1..n {
                let f = &g[r][c] / &g[c][c];
                for j in c..n {
                    let t = &f * &g[c][j];
                    g[r][j] -= t;
                }
            }
        }
        det.to_integer()
    }

    // exact rational Gram-Schmidt, used to check the LLL conditions
    fn check_reduced(basis: &[Vector]) {
        let n = basis.len();
        let to_q = |x: &BigInt| BigRational::from_integer(x.clone());
        let mut star: Vec<Vec<BigRational>> = Vec::new();
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            let mut s: Vec<BigRational> = basis[i].iter().map(to_q).collect();
            for j in 0..i {
                let nj: BigRational = star[j].iter().map(|x| x * x).sum();
                let bij: BigRational = basis[i].iter().zip(&star[j]).map(|(x, y)| to_q(x) * y).sum();
                mu[i][j] = bij / nj;
                for (a, b) in s.iter_mut().zip(&star[j]) {
                    *a -= &mu[i][j] * b;
                }
            }
            star.push(s);
        }
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        for i in 0..n {
            for j in 0..i {
                assert!(mu[i][j].abs() <= half, "size condition {i},{j}");
            }
        }
        let delta = BigRational::new(BigInt::from(99), BigInt::from(100));
        for i in 1..n {
            let ni: BigRational = star[i].iter().map(|x| x * x).sum();
            let nm: BigRational = star[i - 1].iter().map(|x| x * x).sum();
            assert!(ni >= (&delta - &mu[i][i - 1] * &mu[i][i - 1]) * nm, "lovasz {i}");
        }
    }

    #[test]
    fn textbook_example() {
        let mut basis = vec![v(&[1, 1, 1]), v(&[-1, 0, 2]), v(&[3, 5, 6])];
        let before = det_sq(&basis);
        lll_reduce(&mut basis);
        assert_eq!(det_sq(&basis), before);
        check_reduced(&basis);
        assert_eq!(dot(&basis[0], &basis[0]), BigInt::from(1));
    }

    #[test]
    fn random_bases_are_reduced() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 2..=6 {
            for _ in 0..10 {
                let mut basis: Vec<Vector> = (0..n)
                    .map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-1000i64..1000))).collect())
                    .collect();
                let before = det_sq(&basis);
                if before.is_zero() {
                    continue;
                }
                lll_reduce(&mut basis);
                assert_eq!(det_sq(&basis), before);
                check_reduced(&basis);
            }
        }
    }
}
