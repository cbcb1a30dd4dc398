//! Closed-form bounds, thresholds and the piecewise exponent table, in exact
//! rational arithmetic. Floats only appear in reports.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::congruence::{count_n_sharp, predict_n_sharp_main_term, PrimeWindow};
use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"n/d"`, `"n"` or a finite decimal such as `"0.95"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches('-'), frac);
        let num: BigInt = digits.parse().map_err(|_| Error::domain(format!("bad rational {s:?}")))?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(num, den);
        return Ok(if neg { -r } else { r });
    }
    s.parse::<Rational>().map_err(|_| Error::domain(format!("bad rational {s:?}")))
}

/// `"n/d"`, always with an explicit denominator.
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `B(p, L)`: `L^{3/2} p^{1/8}` when `L < p^{1/3}`, else `L^{15/8}`.
pub fn b_of(p: f64, l: f64) -> Result<f64> {
    if !(l >= 2.0) || !(l < p) {
        return Err(Error::domain(format!("B(p, L) needs 2 <= L < p, got p = {p}, L = {l}")));
    }
    let integral = p.fract() == 0.0 && l.fract() == 0.0 && p < 2f64.powi(53);
    let small = if integral {
        (l as u128).pow(3) < p as u128
    } else {
        l < p.cbrt()
    };
    Ok(if small {
        l.powf(1.5) * p.powf(0.125)
    } else {
        l.powf(15.0 / 8.0)
    })
}

/// One piece of the threshold table, `alpha_0(beta) = constant + slope * beta`
/// on `(lo, hi]`, attained by the condition with parameter `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub lo: Rational,
    pub hi: Rational,
    pub constant: Rational,
    pub slope: Rational,
    pub k: u32,
}

impl Piece {
    pub fn eval(&self, beta: &Rational) -> Rational {
        &self.constant + &self.slope * beta
    }

    pub fn contains(&self, beta: &Rational) -> bool {
        beta > &self.lo && beta <= &self.hi
    }
}

/// `alpha_0` on `(7/8, 1]`, nine left-open right-closed pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdTable {
    pub pieces: Vec<Piece>,
}

impl Default for ThresholdTable {
    fn default() -> Self {
        let cuts = [(7, 8), (13, 14), (17, 18), (25, 26), (31, 32), (41, 42), (49, 50), (61, 62), (68, 69), (1, 1)];
        // (constant, slope, k)
        let exprs = [
            (rat(10, 3), rat(-5, 3), 2),
            (int(12), int(-11), 3),
            (rat(7, 2), int(-2), 3),
            (int(16), int(-15), 4),
            (rat(18, 5), rat(-11, 5), 4),
            (int(20), int(-19), 5),
            (rat(11, 3), rat(-7, 3), 5),
            (int(24), int(-23), 6),
            (rat(4, 3), int(0), 6),
        ];
        let pieces = exprs
            .into_iter()
            .enumerate()
            .map(|(i, (constant, slope, k))| Piece {
                lo: rat(cuts[i].0, cuts[i].1),
                hi: rat(cuts[i + 1].0, cuts[i + 1].1),
                constant,
                slope,
                k,
            })
            .collect();
        ThresholdTable { pieces }
    }
}

impl ThresholdTable {
    pub fn piece(&self, beta: &Rational) -> Result<&Piece> {
        self.pieces
            .iter()
            .find(|pc| pc.contains(beta))
            .ok_or_else(|| Error::domain(format!("beta = {} outside (7/8, 1]", fmt_rational(beta))))
    }

    /// Interior breakpoints where adjacent pieces meet.
    pub fn breakpoints(&self) -> Vec<Rational> {
        self.pieces[..self.pieces.len() - 1].iter().map(|pc| pc.hi.clone()).collect()
    }

    /// Adjacent pieces agree at every interior breakpoint.
    pub fn is_continuous(&self) -> bool {
        self.pieces.windows(2).all(|w| w[0].eval(&w[0].hi) == w[1].eval(&w[0].hi))
    }
}

/// `alpha_0(beta)`.
pub fn alpha0(beta: &Rational) -> Result<Rational> {
    Ok(ThresholdTable::default().piece(beta)?.eval(beta))
}

/// The open interval `(alpha_0(beta), beta + 1)`.
pub fn admissible_interval(beta: &Rational) -> Result<(Rational, Rational)> {
    Ok((alpha0(beta)?, beta + int(1)))
}

/// `beta in (23/24, 1]` and `alpha in (9/2 - 3 beta, 3 beta]`.
pub fn thm11_admissible(alpha: &Rational, beta: &Rational) -> bool {
    let three = int(3);
    beta > &rat(23, 24) && beta <= &int(1) && alpha > &(rat(9, 2) - &three * beta) && alpha <= &(&three * beta)
}

/// The four lower bounds on `alpha` for parameter `k`.
pub fn condition_terms(beta: &Rational, k: u32) -> [Rational; 4] {
    let k = int(k as i64);
    let one = int(1);
    [
        ((&one - int(3) * &k) * beta + int(2) + int(4) * &k) / (&k + &one),
        (&one - int(4) * &k) * beta + int(4) * &k,
        rat(4, 3),
        int(2) - beta,
    ]
}

/// `max{((1-3k) beta + 2 + 4k)/(k+1), (1-4k) beta + 4k, 4/3, 2 - beta}`.
pub fn condition_k(beta: &Rational, k: u32) -> Result<Rational> {
    if k < 1 {
        return Err(Error::domain("k must be at least 1"));
    }
    if let Some(v) = condition_k_small(beta, k) {
        return Ok(v);
    }
    Ok(condition_terms(beta, k).into_iter().max().unwrap())
}

// Same maximum in i128 when beta = n/d has small parts.
fn condition_k_small(beta: &Rational, k: u32) -> Option<Rational> {
    let n = beta.numer().to_i64()? as i128;
    let d = beta.denom().to_i64()? as i128;
    if n.abs() > 1 << 40 || d > 1 << 40 {
        return None;
    }
    let k = k as i128;
    let terms = [
        ((1 - 3 * k) * n + (2 + 4 * k) * d, (k + 1) * d),
        ((1 - 4 * k) * n + 4 * k * d, d),
        (4, 3),
        (2 * d - n, d),
    ];
    let (bn, bd) = terms.into_iter().reduce(|a, b| if b.0 * a.1 > a.0 * b.1 { b } else { a })?;
    Some(Rational::new(BigInt::from(bn), BigInt::from(bd)))
}

/// Whether `alpha` clears the condition for this `k`.
pub fn satisfies_condition(alpha: &Rational, beta: &Rational, k: u32) -> Result<bool> {
    Ok(alpha > &condition_k(beta, k)?)
}

/// Least value of [`condition_k`] over `1 <= k <= k_max`, ties to the least `k`.
pub fn optimal_k(beta: &Rational, k_max: u32) -> Result<(u32, Rational)> {
    if beta <= &rat(7, 8) || beta > &int(1) {
        return Err(Error::domain(format!("beta = {} outside (7/8, 1]", fmt_rational(beta))));
    }
    if k_max < 6 {
        return Err(Error::domain(format!("k_max = {k_max} < 6")));
    }
    let mut best = (1, condition_k(beta, 1)?);
    for k in 2..=k_max {
        let v = condition_k(beta, k)?;
        if v < best.1 {
            best = (k, v);
        }
    }
    Ok(best)
}

/// `beta_0(k) = 1 - 1 / (2 (k^2 + k + 1))`.
pub fn beta0(k: u32) -> Rational {
    let k = k as i64;
    int(1) - rat(1, 2 * (k * k + k + 1))
}

/// Exponents of `L, h, D, E` as powers of the modulus scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ProofParameters {
    pub alpha: Rational,
    pub beta: Rational,
    pub epsilon: Rational,
}

impl ProofParameters {
    pub fn new(alpha: Rational, beta: Rational, epsilon: Rational) -> Result<Self> {
        if !epsilon.is_positive() {
            return Err(Error::domain("epsilon must be positive"));
        }
        Ok(ProofParameters { alpha, beta, epsilon })
    }

    pub fn l_exp(&self) -> Rational {
        (&self.alpha - &self.beta) / int(2) - &self.epsilon / int(2)
    }

    pub fn h_exp(&self) -> Rational {
        self.beta.clone()
    }

    pub fn d_exp(&self) -> Rational {
        &self.epsilon / int(2)
    }

    pub fn e_exp(&self) -> Rational {
        (&self.alpha - int(1)) / int(2)
    }

    /// `alpha - 1 - epsilon`.
    pub fn main_exp(&self) -> Rational {
        &self.alpha - int(1) - &self.epsilon
    }

    /// Exponents of `D (L^{(3k-1)/2k} p^{1/2k} + L^{(4k-1)/2k})`, `L^2 h / (D p)`,
    /// `E` and `(L^2 h)^{1/4}`.
    pub fn error_exps(&self, k: u32) -> [Rational; 4] {
        let l = self.l_exp();
        let first = rat(3 * k as i64 - 1, 2 * k as i64) * &l + rat(1, 2 * k as i64);
        let second = rat(4 * k as i64 - 1, 2 * k as i64) * &l;
        let two_l_h = int(2) * &l + self.h_exp();
        [
            self.d_exp() + first.max(second),
            &two_l_h - self.d_exp() - int(1),
            self.e_exp(),
            two_l_h / int(4),
        ]
    }
}

/// Exponent bookkeeping plus one desk-scale exact count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MainErrorReport {
    pub p: u64,
    pub k: u32,
    pub main_exp: String,
    pub error_exps: Vec<String>,
    pub error_exps_below_main: Vec<bool>,
    pub l: f64,
    pub h: f64,
    pub window_size: usize,
    pub exact_n_sharp: Option<u64>,
    pub predicted_n_sharp: Option<f64>,
    pub relative_deviation: Option<f64>,
}

pub fn main_error_report(p: u64, alpha: &Rational, beta: &Rational, epsilon: &Rational) -> Result<MainErrorReport> {
    let params = ProofParameters::new(alpha.clone(), beta.clone(), epsilon.clone())?;
    let k = ThresholdTable::default().piece(beta).map(|pc| pc.k).unwrap_or(6);
    let main = params.main_exp();
    let errs = params.error_exps(k);
    let pf = p as f64;
    let l = pf.powf(to_f64(&params.l_exp()));
    let h = pf.powf(to_f64(&params.h_exp())).min(pf - 1.0);
    let (exact, predicted, dev, size) = if l >= 2.0 && crate::arith::is_prime(p) {
        let w = PrimeWindow::new(l)?;
        let exact = count_n_sharp(1, p, &w, h)?;
        let pred = predict_n_sharp_main_term(&w, h, p);
        let dev = (exact as f64 - pred).abs() / pred.max(1.0);
        (Some(exact), Some(pred), Some(dev), w.k())
    } else {
        (None, None, None, 0)
    };
    Ok(MainErrorReport {
        p,
        k,
        main_exp: fmt_rational(&main),
        error_exps_below_main: errs.iter().map(|e| e < &main).collect(),
        error_exps: errs.iter().map(fmt_rational).collect(),
        l,
        h,
        window_size: size,
        exact_n_sharp: exact,
        predicted_n_sharp: predicted,
        relative_deviation: dev,
    })
}

/// `9/2 - 3 beta < 3/4 + beta`.
pub fn thm11_remark_holds(beta: &Rational) -> bool {
    rat(9, 2) - int(3) * beta < rat(3, 4) + beta
}

/// Evenly spaced rationals strictly inside `(lo, hi]`: `lo + i (hi - lo) / n`, `i = 1..=n`.
pub fn rational_grid(lo: &Rational, hi: &Rational, n: u32) -> Vec<Rational> {
    let step = (hi - lo) / int(n as i64);
    (1..=n).map(|i| lo + &step * int(i as i64)).collect()
}

/// `(beta, alpha_0(beta), k*)` rows for plotting.
pub fn alpha0_rows(n_per_piece: u32) -> Result<Vec<(Rational, Rational, u32)>> {
    let table = ThresholdTable::default();
    let mut out = Vec::new();
    for pc in &table.pieces {
        for beta in rational_grid(&pc.lo, &pc.hi, n_per_piece) {
            let a = pc.eval(&beta);
            let (k, _) = optimal_k(&beta, 12)?;
            out.push((beta, a, k));
        }
    }
    Ok(out)
}
