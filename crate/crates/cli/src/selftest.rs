//! Known small values for each module, run by `--selftest` and `selftest`.

use std::fmt::Display;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use residue_forge::arith::{legendre, mod_inverse, FactorSieve};
use residue_forge::bounds::{self, fmt_rational, rat};
use residue_forge::characters::{self, CharacterTable, MomentScope};
use residue_forge::congruence::{self, PrimeWindow};
use residue_forge::kfull::{self, KfullConstructionParams};
use residue_forge::progression::{self, ProgressionQuery};
use residue_forge::report::Table;
use residue_forge::{squarefull, Error, Result};

use crate::{CliError, CliResult, Context, Outcome};

pub struct Checks {
    module: &'static str,
    rows: Vec<(&'static str, String, String, String)>,
}

impl Checks {
    fn eq<T: Display + PartialEq>(&mut self, name: impl Into<String>, expected: T, got: T) {
        self.rows.push((self.module, name.into(), expected.to_string(), got.to_string()));
    }
}

pub type Suite = fn(&Context, &mut Checks) -> Result<()>;

fn run(ctx: &Context, suites: &[(&'static str, Suite)]) -> CliResult<Outcome> {
    let mut t = Table::new(&["module", "check", "expected", "got", "pass"]);
    let mut failed = Vec::new();
    for &(module, suite) in suites {
        let mut c = Checks { module, rows: Vec::new() };
        suite(ctx, &mut c)?;
        for (m, name, e, g) in c.rows {
            let pass = e == g;
            if !pass {
                failed.push(format!("{m}/{name}: expected {e}, got {g}"));
            }
            t.push(vec![json!(m), json!(name), json!(e), json!(g), json!(pass)]);
        }
    }
    if !failed.is_empty() {
        return Err(CliError::Core(Error::Internal(format!("selftest failures: {}", failed.join("; ")))));
    }
    Ok(Outcome::table(t))
}

pub fn module(ctx: &Context, suite: Suite) -> CliResult<Outcome> {
    let name = SUITES.iter().find(|(_, s)| *s as usize == suite as usize).map_or("module", |(n, _)| *n);
    run(ctx, &[(name, suite)])
}

pub fn all(ctx: &Context) -> CliResult<Outcome> {
    run(ctx, SUITES)
}

const SUITES: &[(&str, Suite)] = &[
    ("arith", arith),
    ("psi", psi),
    ("congr", congr),
    ("chars", chars),
    ("squarefull", squarefull),
    ("kfull", kfull),
    ("bounds", bounds),
];

fn arith(_: &Context, c: &mut Checks) -> Result<()> {
    let s = FactorSieve::new(1000)?;
    c.eq("factorize(72)", "[(2, 3), (3, 2)]".to_string(), format!("{:?}", s.factorize(72)?.factors));
    c.eq("P+(210)", 7, s.largest_prime_factor(210)?);
    c.eq("is_y_smooth(14, 5)", false, s.is_y_smooth(14, 5.0)?);
    c.eq("is_k_full(72, 2)", true, s.is_k_full(72, 2)?);
    c.eq("inverse(4, 7)", 2, mod_inverse(4, 7)?);
    c.eq("legendre(3, 7)", -1, legendre(3, 7));
    c.eq("iroot(10^18, 2)", BigUint::from(1_000_000_000u64), residue_forge::arith::integer_root(&BigUint::from(10u64.pow(18)), 2)?);
    Ok(())
}

pub fn psi(ctx: &Context, c: &mut Checks) -> Result<()> {
    let s = FactorSieve::new(100)?;
    let q = |x, y, p, a| ProgressionQuery::new(x, y, p, a);
    c.eq("psi(20, 5; 3, 1)", 4, progression::psi(&q(20, 5.0, 3, 1)?, &s)?);
    c.eq("psi#(20, 5; 3, 1)", 2, progression::psi_sharp(&q(20, 5.0, 3, 1)?, &s)?);
    c.eq("psi(10, 10; 7, 0)", 1, progression::psi(&q(10, 10.0, 7, 0)?, &s)?);
    c.eq("psi(1, 2; 3, 1)", 1, progression::psi(&q(1, 2.0, 3, 1)?, &s)?);
    let total: u64 = progression::sweep_classes(100, 7.0, 11, &s, ctx.exec)?.iter().map(|cc| cc.psi).sum();
    c.eq("sum over classes = Psi(100, 7)", progression::smooth_total(100, 7.0, &s, ctx.exec)?.psi, total);
    let m = |p| progression::m_of_p(p).map(|v| format!("{v:?}"));
    c.eq("M(3)", "Some(3)".to_string(), m(3)?);
    c.eq("M(5)", "None".to_string(), m(5)?);
    c.eq("M(11)", "Some(42)".to_string(), m(11)?);
    Ok(())
}

pub fn congr(ctx: &Context, c: &mut Checks) -> Result<()> {
    let w = PrimeWindow { l: 2.0, primes: vec![2, 3] };
    c.eq("N(1, 7, {2,3}, 3)", 1, congruence::count_n(1, 7, &w, 3.0)?);
    c.eq("N(5, 7, {2,3}, 1)", 0, congruence::count_n(5, 7, &w, 1.0)?);
    c.eq("N#(1, 7, {2,3}, 3)", 0, congruence::count_n_sharp(1, 7, &w, 3.0)?);
    c.eq("N#(6, 7, {2,3}, 1)", 2, congruence::count_n_sharp(6, 7, &w, 1.0)?);
    c.eq("Q(1, 7, {2,3}, 2)", 2, congruence::count_q(1, 7, &w, 2.0)?);
    c.eq("Q(1, 7, {2,3}, 1)", 1, congruence::count_q(1, 7, &w, 1.0)?);
    c.eq("R(1, 7, 1, {2,3}, 3)", 2, congruence::count_r(1, 7, 1.0, &w, 3.0)?);
    let (v, _) = congruence::bilinear_inverse_sum_argmax(5, &w, ctx.exec)?;
    c.eq("max bilinear p=5", "3.2361".to_string(), format!("{v:.4}"));
    // inclusion-exclusion on random classes
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let w5 = PrimeWindow::new(5.0)?;
    for _ in 0..5 {
        let a = rng.gen_range(1..101u64);
        let d = congruence::mobius_decomposition_check(a, 101, &w5, 50.0)?;
        c.eq(format!("decomposition a={a} p=101"), true, d.holds() && d.discrepancy_explained());
    }
    Ok(())
}

pub fn chars(ctx: &Context, c: &mut Checks) -> Result<()> {
    let t5 = CharacterTable::new(5)?;
    c.eq("generator(5)", 2, t5.generator());
    c.eq("generator(7)", 3, CharacterTable::new(7)?.generator());
    let s = characters::char_sum(&t5, 1, 2)?;
    c.eq("S(chi_1, 2) mod 5", "1.000000+1.000000i".to_string(), format!("{:.6}+{:.6}i", s.re, s.im));
    let m = |scope| characters::fourth_moment(&t5, 2, scope, ctx.exec).map(|v| v.round() as i64);
    c.eq("fourth moment p=5 K=2 nonprincipal", 8, m(MomentScope::Nonprincipal)?);
    c.eq("fourth moment p=5 K=2 all", 24, m(MomentScope::All)?);
    c.eq("collision side p=5 K=2", 24, characters::fourth_moment_combinatorial(5, 2)?);
    c.eq("collision side p=7 K=1", 6, characters::fourth_moment_combinatorial(7, 1)?);
    for (p, n) in [(3, 2), (7, 3), (23, 5)] {
        c.eq(format!("n_{p}"), n, characters::least_qnr(p)?);
    }
    c.eq("T_7(6)", 3, characters::qnr_count(7, 6)?);
    c.eq("T_7(2)", 0, characters::qnr_count(7, 2)?);
    let set = characters::unrepresentable_nonresidues(11, 2, 1)?;
    let rep = characters::vanishing_identity_check(11, &set, 2, 1, ctx.exec)?;
    c.eq("vanishing p=11 K=2 U=1", true, rep.full_vanishes(1e-6) && rep.contributions_exact());
    Ok(())
}

pub fn squarefull(_: &Context, c: &mut Checks) -> Result<()> {
    let s = squarefull::enumerate_squarefull(40)?;
    c.eq("squarefull <= 40", "[1, 4, 8, 9, 16, 25, 27, 32, 36]".to_string(), format!("{:?}", s.values));
    let r5 = squarefull::linnik_table(5)?;
    c.eq("F(., 5)", "[25, 1, 27, 8, 4]".to_string(), format!("{:?}", r5.f));
    c.eq("F_max(5)", 27, r5.f_max);
    c.eq("F(., 3)", "[9, 1, 8]".to_string(), format!("{:?}", squarefull::linnik_table(3)?.f));
    let sc = squarefull::qnr_small_class_count(5, 10)?;
    c.eq("small classes p=5 M=10", "1 1".to_string(), format!("{} {}", sc.small_classes, sc.bound_s_ge_np));
    c.eq("bound holds p=7 M=100", true, squarefull::qnr_small_class_count(7, 100)?.holds());
    c.eq("n^3 u^2 upper (2, 5)", 27, squarefull::constructive_f_upper(2, 5)?);
    c.eq("n^3 u^2 upper (3, 5)", 8, squarefull::constructive_f_upper(3, 5)?);
    Ok(())
}

pub fn kfull(ctx: &Context, c: &mut Checks) -> Result<()> {
    c.eq("seeds(3)", "[2, 3, 5, 6, 7, 10]".to_string(), format!("{:?}", kfull::squarefree_seeds(3)));
    let w = |n| kfull::scan_interval(n, 2).map(|r| format!("{:?}", r.witnesses));
    c.eq("scan(5, 2)", "[27, 32]".to_string(), w(5)?);
    c.eq("scan(2, 2)", "[8]".to_string(), w(2)?);
    c.eq("scan(1, 2)", "[]".to_string(), w(1)?);
    let rs = |n, t| kfull::record_search(2, n, t, ctx.exec).map(|v| format!("{v:?}"));
    c.eq("record(2, 100, 2)", "Some(5)".to_string(), rs(100, 2)?);
    c.eq("record(2, 100, 1)", "Some(2)".to_string(), rs(100, 1)?);
    c.eq("record(2, 3, 5)", "None".to_string(), rs(3, 5)?);
    c.eq("R(2, 1)", BigUint::from(1024u32), kfull::r_bound(2, 1));
    let res = kfull::construct_kfull_cluster_with(&KfullConstructionParams::new(2, 1), ctx.exec)?;
    c.eq("construct(2, 1) verifies", true, kfull::verify_certificate(&res.certificate).is_ok() && !res.interval.witnesses.is_empty());
    Ok(())
}

pub fn bounds(_: &Context, c: &mut Checks) -> Result<()> {
    let a0 = |n, d| bounds::alpha0(&rat(n, d)).map(|v| fmt_rational(&v));
    c.eq("alpha0(9/10)", "11/6".to_string(), a0(9, 10)?);
    c.eq("alpha0(1)", "4/3".to_string(), a0(1, 1)?);
    c.eq("alpha0(13/14)", "25/14".to_string(), a0(13, 14)?);
    c.eq("table continuous", true, bounds::ThresholdTable::default().is_continuous());
    c.eq("admissible(8/5, 1)", true, bounds::thm11_admissible(&rat(8, 5), &rat(1, 1)));
    c.eq("admissible(3/2, 1)", false, bounds::thm11_admissible(&rat(3, 2), &rat(1, 1)));
    c.eq("admissible(2, 23/24)", false, bounds::thm11_admissible(&rat(2, 1), &rat(23, 24)));
    c.eq("optimal_k(9/10)", 2, bounds::optimal_k(&rat(9, 10), 12)?.0);
    c.eq("beta0(5)", "61/62".to_string(), fmt_rational(&bounds::beta0(5)));
    c.eq("B(100, 4)", "14.2262".to_string(), format!("{:.4}", bounds::b_of(100.0, 4.0)?));
    c.eq("B(27, 3)", "7.8452".to_string(), format!("{:.4}", bounds::b_of(27.0, 3.0)?));
    Ok(())
}
