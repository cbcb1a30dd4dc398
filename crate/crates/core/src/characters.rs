//! Dirichlet characters modulo a prime, realized through a discrete-log table
//! against the least primitive root.
//!
//! Character `j` (for `0 <= j <= p - 2`) sends `n` to
//! `exp(2 pi i j dlog(n) / (p - 1))`; `j = 0` is principal and
//! `j = (p - 1) / 2` is the quadratic character.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, legendre, mod_pow, mul_mod};
use crate::error::{Error, Result};
use crate::exec::{pairwise_sum, Exec, NeumaierSum};

/// Largest modulus accepted by [`CharacterTable::new`].
pub const DEFAULT_TABLE_CAP: u64 = 100_000;

/// `eta_0 = 1 / (4 sqrt(e))`.
pub fn eta0() -> f64 {
    1.0 / (4.0 * std::f64::consts::E.sqrt())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterTable {
    p: u64,
    g: u64,
    // dlog[n] for n in 1..p; dlog[0] unused
    dlog: Vec<u32>,
}

impl CharacterTable {
    pub fn new(p: u64) -> Result<Self> {
        Self::with_cap(p, DEFAULT_TABLE_CAP)
    }

    pub fn with_cap(p: u64, cap: u64) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::domain(format!("character table needs an odd prime, got {p}")));
        }
        if p > cap {
            return Err(Error::resource(format!("character table for p = {p}"), format!("cap {cap}")));
        }
        let g = least_primitive_root(p);
        let mut dlog = vec![0u32; p as usize];
        let mut x = 1u64;
        for e in 0..p - 1 {
            dlog[x as usize] = e as u32;
            x = mul_mod(x, g, p);
        }
        Ok(CharacterTable { p, g, dlog })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.g
    }

    /// Discrete log of `n` (`n` coprime to `p`).
    pub fn dlog(&self, n: u64) -> Option<u64> {
        let r = n % self.p;
        (r != 0).then(|| self.dlog[r as usize] as u64)
    }

    pub fn order(&self) -> u64 {
        self.p - 1
    }

    pub fn quadratic_index(&self) -> u64 {
        (self.p - 1) / 2
    }

    /// `chi_j(n)`; zero when `p | n`.
    pub fn chi(&self, j: u64, n: u64) -> Complex64 {
        match self.dlog(n) {
            None => Complex64::new(0.0, 0.0),
            Some(e) => self.root_of_unity(mul_mod(j % self.order(), e, self.order())),
        }
    }

    /// `exp(2 pi i t / (p - 1))`.
    pub fn root_of_unity(&self, t: u64) -> Complex64 {
        let m = self.order();
        let theta = 2.0 * PI * ((t % m) as f64) / (m as f64);
        Complex64::from_polar(1.0, theta)
    }

    fn check_index(&self, j: u64) -> Result<()> {
        if j > self.p - 2 {
            return Err(Error::domain(format!("character index {j} > p - 2 = {}", self.p - 2)));
        }
        Ok(())
    }

    /// Sum of `chi_j` over a set of integers, with compensated accumulation.
    pub fn sum_over(&self, j: u64, ns: impl IntoIterator<Item = u64>) -> Complex64 {
        let mut re = NeumaierSum::default();
        let mut im = NeumaierSum::default();
        for n in ns {
            let z = self.chi(j, n);
            re.add(z.re);
            im.add(z.im);
        }
        Complex64::new(re.value(), im.value())
    }
}

fn least_primitive_root(p: u64) -> u64 {
    let m = p - 1;
    let mut factors = Vec::new();
    let mut r = m;
    let mut d = 2;
    while d * d <= r {
        if r % d == 0 {
            factors.push(d);
            while r % d == 0 {
                r /= d;
            }
        }
        d += 1;
    }
    if r > 1 {
        factors.push(r);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| mod_pow(g, m / q, p) != 1))
        .unwrap_or(1)
}

/// `sum_{1 <= n <= K} chi_j(n)`.
pub fn char_sum(table: &CharacterTable, j: u64, k: u64) -> Result<Complex64> {
    table.check_index(j)?;
    if k >= table.p {
        return Err(Error::domain(format!("K = {k} must be below p = {}", table.p)));
    }
    Ok(table.sum_over(j, 1..=k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentScope {
    Nonprincipal,
    All,
}

/// `sum_chi |sum_{n <= K} chi(n)|^4` over the requested characters.
pub fn fourth_moment(table: &CharacterTable, k: u64, scope: MomentScope, exec: Exec) -> Result<f64> {
    if k == 0 || k >= table.p {
        return Err(Error::domain(format!("K = {k} outside [1, p)")));
    }
    let start = match scope {
        MomentScope::All => 0,
        MomentScope::Nonprincipal => 1,
    };
    // exponent histogram: the sum for chi_j only depends on the multiset of dlogs
    let m = table.order();
    let dl: Vec<u64> = (1..=k).map(|n| table.dlog[n as usize] as u64).collect();
    let terms = exec.map_range(start..m, |j| {
        let mut re = NeumaierSum::default();
        let mut im = NeumaierSum::default();
        for &e in &dl {
            let z = table.root_of_unity(mul_mod(j, e, m));
            re.add(z.re);
            im.add(z.im);
        }
        let a2 = re.value() * re.value() + im.value() * im.value();
        a2 * a2
    });
    Ok(pairwise_sum(&terms))
}

/// `#{(n1, n2, n3, n4) in [1, K]^4 : n1 n2 = n3 n4 (mod p)}` via product buckets.
pub fn product_collision_count(p: u64, k: u64) -> Result<u64> {
    if k >= p {
        return Err(Error::domain(format!("K = {k} must be below p = {p}")));
    }
    let mut buckets = vec![0u64; p as usize];
    for a in 1..=k {
        for b in 1..=k {
            buckets[mul_mod(a, b, p) as usize] += 1;
        }
    }
    Ok(buckets.iter().map(|c| c * c).sum())
}

/// `(p - 1)` times [`product_collision_count`]; equals the full fourth moment.
pub fn fourth_moment_combinatorial(p: u64, k: u64) -> Result<u64> {
    Ok((p - 1) * product_collision_count(p, k)?)
}

/// Least `m >= 2` with `(m / p) = -1`.
pub fn least_qnr(p: u64) -> Result<u64> {
    if p == 2 || !is_prime(p) {
        return Err(Error::domain(format!("least non-residue needs an odd prime, got {p}")));
    }
    Ok((2..p).find(|&m| legendre(m as i64, p) == -1).expect("odd prime has a non-residue"))
}

/// `T_p(K)`: quadratic non-residues in `[1, K]`.
pub fn qnr_count(p: u64, k: u64) -> Result<u64> {
    if p == 2 || !is_prime(p) {
        return Err(Error::domain(format!("{p} is not an odd prime")));
    }
    if k >= p {
        return Err(Error::domain(format!("K = {k} must be below p = {p}")));
    }
    Ok((1..=k).filter(|&m| legendre(m as i64, p) == -1).count() as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BurgessRow {
    pub eta: f64,
    pub k: u64,
    pub t: u64,
    pub ratio: f64,
    pub above_eta0: bool,
}

/// Least non-residue and `T_p(K)` at `K = ceil(p^eta)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QnrProfile {
    pub p: u64,
    pub n_p: u64,
    pub eta0: f64,
    pub rows: Vec<BurgessRow>,
}

pub fn burgess_profile(p: u64, etas: &[f64]) -> Result<QnrProfile> {
    let n_p = least_qnr(p)?;
    let mut rows = Vec::with_capacity(etas.len());
    for &eta in etas {
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::domain(format!("eta = {eta} outside (0, 1)")));
        }
        let k = ((p as f64).powf(eta).ceil() as u64).clamp(1, p - 1);
        let t = qnr_count(p, k)?;
        if (t > 0) != (k >= n_p) {
            return Err(Error::Domain(format!("T_p({k}) = {t} inconsistent with n_p = {n_p}")));
        }
        rows.push(BurgessRow { eta, k, t, ratio: t as f64 / k as f64, above_eta0: eta > eta0() });
    }
    Ok(QnrProfile { p, n_p, eta0: eta0(), rows })
}

/// Non-residues `a` for which `a = n^3 u^2 (mod p)` has no solution with `n` a
/// non-residue in `[1, K]` and `1 <= u <= U`.
pub fn unrepresentable_nonresidues(p: u64, k: u64, u: u64) -> Result<Vec<u64>> {
    if p == 2 || !is_prime(p) {
        return Err(Error::domain(format!("{p} is not an odd prime")));
    }
    let mut hit = vec![false; p as usize];
    for n in (1..=k).filter(|&n| legendre(n as i64, p) == -1) {
        let c = mod_pow(n, 3, p);
        for v in 1..=u {
            hit[mul_mod(c, mul_mod(v, v, p), p) as usize] = true;
        }
    }
    Ok((1..p).filter(|&a| legendre(a as i64, p) == -1 && !hit[a as usize]).collect())
}

/// Both sides of the vanishing character-sum identity over non-representable residues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub p: u64,
    pub k: u64,
    pub u: u64,
    pub set_size: u64,
    pub t: u64,
    /// `#A * T_p(K) * U`, the exact principal and quadratic contributions.
    pub expected_each: u64,
    pub principal_exact: i64,
    pub quadratic_exact: i64,
    pub principal_float: f64,
    pub quadratic_float: f64,
    /// Full sum over all characters (real, imaginary).
    pub full_sum: (f64, f64),
    /// Sum over characters that are neither principal nor quadratic.
    pub sharp_sum: (f64, f64),
    pub terms: u64,
}

impl VanishingReport {
    pub fn full_vanishes(&self, rel_tol: f64) -> bool {
        self.full_sum.0.hypot(self.full_sum.1) < rel_tol * self.terms.max(1) as f64
    }

    pub fn contributions_exact(&self) -> bool {
        self.principal_exact == self.expected_each as i64 && self.quadratic_exact == self.expected_each as i64
    }

    /// `2 #A T U = -(sharp sum)` within `abs_tol`.
    pub fn balanced(&self, abs_tol: f64) -> bool {
        (2.0 * self.expected_each as f64 + self.sharp_sum.0).abs() < abs_tol && self.sharp_sum.1.abs() < abs_tol
    }
}

/// Evaluates `sum_chi sum_{a in A} conj(chi(a)) sum_{n in N} chi(n)^3 sum_{u <= U} chi(u)^2`.
pub fn vanishing_identity_check(p: u64, set: &[u64], k: u64, u: u64, exec: Exec) -> Result<VanishingReport> {
    let table = CharacterTable::new(p)?;
    if k >= p || u >= p {
        return Err(Error::domain(format!("K = {k} and U = {u} must be below p = {p}")));
    }
    let nonres: Vec<u64> = (1..=k).filter(|&n| legendre(n as i64, p) == -1).collect();
    for &a in set {
        if legendre(a as i64, p) != -1 {
            return Err(Error::domain(format!("{a} is not a quadratic non-residue mod {p}")));
        }
        for &n in &nonres {
            for v in 1..=u {
                if mul_mod(mod_pow(n, 3, p), mul_mod(v, v, p), p) == a % p {
                    return Err(Error::domain(format!("{a} = {n}^3 * {v}^2 (mod {p}) is representable")));
                }
            }
        }
    }
    let t = nonres.len() as u64;
    let size = set.len() as u64;
    let m = table.order();
    let terms = exec.map_range(0..m, |j| {
        let sa = table.sum_over(j, set.iter().copied()).conj();
        let sn = table.sum_over(mul_mod(3, j, m), nonres.iter().copied());
        let su = table.sum_over(mul_mod(2, j, m), 1..=u);
        sa * sn * su
    });
    let q = table.quadratic_index() as usize;
    let re: Vec<f64> = terms.iter().map(|z| z.re).collect();
    let im: Vec<f64> = terms.iter().map(|z| z.im).collect();
    let sharp_idx: Vec<usize> = (1..m as usize).filter(|&j| j != q).collect();
    let sharp_re: Vec<f64> = sharp_idx.iter().map(|&j| re[j]).collect();
    let sharp_im: Vec<f64> = sharp_idx.iter().map(|&j| im[j]).collect();

    // integer evaluation of the principal and quadratic terms
    let leg = |x: u64| legendre(x as i64, p) as i64;
    let principal_exact = size as i64 * t as i64 * u as i64;
    let quadratic_exact = set.iter().map(|&a| leg(a)).sum::<i64>()
        * nonres.iter().map(|&n| leg(n).pow(3)).sum::<i64>()
        * (1..=u).map(|v| leg(v).pow(2)).sum::<i64>();

    Ok(VanishingReport {
        p,
        k,
        u,
        set_size: size,
        t,
        expected_each: size * t * u,
        principal_exact,
        quadratic_exact,
        principal_float: re[0],
        quadratic_float: re[q],
        full_sum: (pairwise_sum(&re), pairwise_sum(&im)),
        sharp_sum: (pairwise_sum(&sharp_re), pairwise_sum(&sharp_im)),
        terms: m * size.max(1) * t.max(1) * u.max(1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_examples() {
        let t = CharacterTable::new(5).unwrap();
        assert_eq!(t.generator(), 2);
        assert_eq!((1..5).map(|n| t.dlog(n).unwrap()).collect::<Vec<_>>(), vec![0, 1, 3, 2]);
        assert_eq!(CharacterTable::new(7).unwrap().generator(), 3);
        let t = CharacterTable::new(101).unwrap();
        let mut seen = vec![false; 100];
        for n in 1..101 {
            seen[t.dlog(n).unwrap() as usize] = true;
        }
        assert!(seen.iter().all(|&b| b));
        assert_eq!(t.dlog(t.generator()), Some(1));
        assert!(matches!(CharacterTable::new(2), Err(Error::Domain(_))));
        assert!(matches!(CharacterTable::new(15), Err(Error::Domain(_))));
        assert!(matches!(CharacterTable::new(100_003), Err(Error::Resource { .. })));
    }

    #[test]
    fn least_root_is_least() {
        for p in crate::arith::primes_up_to(500).into_iter().skip(1) {
            let t = CharacterTable::new(p).unwrap();
            let order = |g: u64| (1..p).find(|&e| mod_pow(g, e, p) == 1).unwrap();
            assert_eq!(order(t.generator()), p - 1);
            for g in 2..t.generator() {
                assert!(order(g) < p - 1);
            }
        }
    }

    #[test]
    fn char_sum_examples() {
        let t = CharacterTable::new(5).unwrap();
        let close = |z: Complex64, re: f64, im: f64| (z.re - re).abs() < 1e-12 && (z.im - im).abs() < 1e-12;
        assert!(close(char_sum(&t, 0, 4).unwrap(), 4.0, 0.0));
        assert!(close(char_sum(&t, 2, 2).unwrap(), 0.0, 0.0));
        assert!(close(char_sum(&t, 1, 2).unwrap(), 1.0, 1.0));
        assert!(char_sum(&t, 1, 5).is_err());
        assert!(char_sum(&t, 4, 2).is_err());
    }

    #[test]
    fn moment_examples() {
        let t = CharacterTable::new(5).unwrap();
        let non = fourth_moment(&t, 2, MomentScope::Nonprincipal, Exec::Sequential).unwrap();
        let all = fourth_moment(&t, 2, MomentScope::All, Exec::Parallel).unwrap();
        assert!((non - 8.0).abs() < 1e-9);
        assert!((all - 24.0).abs() < 1e-9);
        let t3 = CharacterTable::new(3).unwrap();
        assert!((fourth_moment(&t3, 1, MomentScope::Nonprincipal, Exec::Sequential).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(fourth_moment_combinatorial(5, 2).unwrap(), 24);
        assert_eq!(fourth_moment_combinatorial(7, 1).unwrap(), 6);
    }

    #[test]
    fn orthogonality_and_quadratic_character() {
        for p in crate::arith::primes_up_to(101).into_iter().skip(1) {
            let t = CharacterTable::new(p).unwrap();
            for n in 1..p {
                let s: Complex64 = (0..p - 1).map(|j| t.chi(j, n)).sum();
                let want = if n == 1 { (p - 1) as f64 } else { 0.0 };
                assert!((s.re - want).abs() < 1e-9 && s.im.abs() < 1e-9, "p={p} n={n}");
                let q = t.chi(t.quadratic_index(), n);
                assert!((q.re - legendre(n as i64, p) as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn multiplicativity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        let t = CharacterTable::new(997).unwrap();
        for _ in 0..2000 {
            let (j, m, n) = (rng.gen_range(0..996), rng.gen_range(1..997), rng.gen_range(1..997));
            let lhs = t.chi(j, m * n % 997);
            let rhs = t.chi(j, m) * t.chi(j, n);
            assert!((lhs - rhs).norm() < 1e-9);
        }
    }

    #[test]
    fn qnr_examples() {
        assert_eq!(least_qnr(7).unwrap(), 3);
        assert_eq!(least_qnr(3).unwrap(), 2);
        assert_eq!(least_qnr(23).unwrap(), 5);
        assert!(least_qnr(2).is_err());
        assert_eq!(qnr_count(7, 6).unwrap(), 3);
        assert_eq!(qnr_count(7, 2).unwrap(), 0);
        for p in [11u64, 101, 1009] {
            assert_eq!(qnr_count(p, p - 1).unwrap(), (p - 1) / 2);
        }
    }

    #[test]
    fn burgess_rows() {
        assert!((eta0() - 0.151_632_664_928_158_36).abs() < 1e-16);
        let prof = burgess_profile(10007, &[0.1, 0.5]).unwrap();
        assert_eq!(prof.rows[1].k, 101);
        assert_eq!(prof.rows[1].t, qnr_count(10007, 101).unwrap());
        assert!(prof.rows[1].above_eta0 && !prof.rows[0].above_eta0);
        assert!(burgess_profile(10007, &[1.0]).is_err());
    }

    #[test]
    fn vanishing_examples() {
        let empty = vanishing_identity_check(11, &[], 2, 1, Exec::Sequential).unwrap();
        assert_eq!(empty.expected_each, 0);
        assert!(empty.full_sum.0.abs() < 1e-12);
        let set = unrepresentable_nonresidues(11, 2, 1).unwrap();
        assert_eq!(set, vec![2, 6, 7, 10]);
        let r = vanishing_identity_check(11, &set, 2, 1, Exec::Parallel).unwrap();
        assert_eq!(r.expected_each, 4);
        assert!(r.contributions_exact());
        assert!(r.full_vanishes(1e-6));
        assert!(r.balanced(1e-9));
        assert!((r.principal_float - 4.0).abs() < 1e-9);
        let err = vanishing_identity_check(11, &[8], 2, 1, Exec::Sequential).unwrap_err();
        assert!(err.to_string().contains("8"));
    }
}
