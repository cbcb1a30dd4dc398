use std::path::PathBuf;

use clap::{Args, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use residue_forge::arith::{load_sieve, save_sieve, FactorSieve, SieveConfig};
use residue_forge::bounds::{self, fmt_rational, parse_rational, Rational};
use residue_forge::characters::{self, CharacterTable, MomentScope};
use residue_forge::congruence::{self, PrimeWindow};
use residue_forge::kfull::{self, ClusterCertificate, KfullConstructionParams};
use residue_forge::progression::{self, ProgressionQuery};
use residue_forge::report::{linnik_table_rows, Table};
use residue_forge::squarefull;
use residue_forge::Error;

use crate::{selftest, usage, CliError, CliResult, Context, Outcome};

fn need<T: Copy>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("missing {flag}")))
}

fn rat_arg(s: &str, flag: &str) -> CliResult<Rational> {
    parse_rational(s).map_err(|_| CliError::Usage(format!("{flag}: {s:?} is not a rational")))
}

fn r(v: &Rational) -> Value {
    Value::String(fmt_rational(v))
}

fn big(v: &BigUint) -> Value {
    Value::String(v.to_string())
}

fn sieve(ctx: &Context, need_up_to: u64, cache: Option<&PathBuf>) -> CliResult<FactorSieve> {
    let limit = ctx.sieve_limit.unwrap_or(need_up_to).max(2);
    if let Some(path) = cache {
        if path.exists() {
            let f = std::fs::File::open(path).map_err(|e| Error::resource(format!("reading {}", path.display()), e))?;
            return Ok(load_sieve(std::io::BufReader::new(f), Some(limit))?);
        }
    }
    let config = SieveConfig { exec: ctx.exec, ..SieveConfig::default() };
    let s = FactorSieve::with_config(limit, &config)?;
    if let Some(path) = cache {
        let f = std::fs::File::create(path).map_err(|e| Error::resource(format!("writing {}", path.display()), e))?;
        save_sieve(&s, std::io::BufWriter::new(f))?;
    }
    Ok(s)
}

// ---------------------------------------------------------------- psi

#[derive(Args, Debug, Serialize)]
pub struct PsiArgs {
    #[arg(long)]
    pub x: Option<u64>,
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub a: Option<u64>,
    /// One row per residue class
    #[arg(long, conflicts_with = "a")]
    pub all_classes: bool,
    /// Report only the squarefree count
    #[arg(long)]
    pub sharp: bool,
    /// Least x covering every class with a squarefree p-smooth integer
    #[arg(long)]
    pub m_of_p: bool,
    /// Leave class 0 out of M(p)
    #[arg(long)]
    pub exclude_zero: bool,
    /// Load or store the factor sieve here
    #[arg(long, value_name = "PATH")]
    pub sieve_cache: Option<PathBuf>,
    #[arg(long)]
    pub selftest: bool,
}

pub fn psi(a: &PsiArgs, ctx: &Context) -> CliResult<Outcome> {
    if a.selftest {
        return selftest::module(ctx, selftest::psi);
    }
    let p = need(a.p, "--p")?;
    if a.m_of_p {
        let cov = progression::class_coverage(p, !a.exclude_zero, progression::DEFAULT_SUBSET_BUDGET)?;
        let mut t = Table::new(&["p", "include_zero", "m_of_p", "uncovered"]);
        let uncovered: Vec<String> = cov.uncovered().iter().map(|c| c.to_string()).collect();
        t.push(vec![
            json!(p),
            json!(cov.include_zero),
            cov.m_of_p().map_or(Value::Null, |m| Value::String(m.to_string())),
            Value::String(uncovered.join(" ")),
        ]);
        return Ok(Outcome::table(t));
    }
    let x = need(a.x, "--x")?;
    let y = need(a.y, "--y")?;
    let cols: &[&str] = if a.sharp { &["p", "a", "x", "y", "psi_sharp"] } else { &["p", "a", "x", "y", "psi", "psi_sharp"] };
    let mut t = Table::new(cols);
    let s = sieve(ctx, x, a.sieve_cache.as_ref())?;
    let mut push = |cls: u64, c: progression::ClassCounts| {
        let mut row = vec![json!(p), json!(cls), json!(x), json!(y)];
        if !a.sharp {
            row.push(json!(c.psi));
        }
        row.push(json!(c.psi_sharp));
        t.push(row);
    };
    match a.a {
        Some(cls) => {
            let q = ProgressionQuery::new(x, y, p, cls)?;
            push(cls, progression::class_counts(&q, &s, ctx.exec)?);
        }
        None if a.all_classes => {
            for (cls, c) in progression::sweep_classes(x, y, p, &s, ctx.exec)?.into_iter().enumerate() {
                push(cls as u64, c);
            }
        }
        None => return usage("give --a or --all-classes"),
    }
    Ok(Outcome::table(t))
}

// ---------------------------------------------------------------- congr

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub enum CongrKind {
    #[value(name = "N")]
    N,
    #[value(name = "Nsharp")]
    Nsharp,
    #[value(name = "Q")]
    Q,
    #[value(name = "R")]
    R,
    #[value(name = "bilinear")]
    Bilinear,
    /// Inclusion-exclusion check for N#
    #[value(name = "decomp")]
    Decomp,
}

#[derive(Args, Debug, Serialize)]
pub struct CongrArgs {
    #[arg(long, value_enum, default_value = "N")]
    pub kind: CongrKind,
    /// Residue; every unit class when omitted
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long = "L")]
    pub l: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long = "F")]
    pub f: Option<f64>,
    /// Add main term and deviation columns
    #[arg(long)]
    pub compare_main_term: bool,
    #[arg(long)]
    pub selftest: bool,
}

pub fn congr(a: &CongrArgs, ctx: &Context) -> CliResult<Outcome> {
    if a.selftest {
        return selftest::module(ctx, selftest::congr);
    }
    let p = need(a.p, "--p")?;
    let l = need(a.l, "--L")?;
    let w = PrimeWindow::new(l)?;
    if a.kind == CongrKind::Bilinear {
        let (max, arg) = congruence::bilinear_inverse_sum_argmax(p, &w, ctx.exec)?;
        let b = bounds::b_of(p as f64, l)?;
        let mut t = Table::new(&["kind", "p", "L", "K", "exact", "argmax_a", "mean", "B", "ratio"]);
        t.push(vec![
            json!("bilinear"),
            json!(p),
            json!(l),
            json!(w.k()),
            json!(max),
            json!(arg),
            json!(congruence::bilinear_mean(p, &w, ctx.exec)?),
            json!(b),
            json!(max / b),
        ]);
        return Ok(Outcome::table(t));
    }
    let h = need(a.h, "--h")?;
    let classes: Vec<u64> = match a.a {
        Some(x) => vec![x],
        None => (1..p).collect(),
    };
    if a.kind == CongrKind::Decomp {
        let mut t = Table::new(&["kind", "p", "a", "L", "h", "n_sharp", "strict", "separated", "correction", "holds", "strict_holds", "discrepancy_explained"]);
        for &cls in &classes {
            let d = congruence::mobius_decomposition_check(cls, p, &w, h)?;
            t.push(vec![
                json!("decomp"),
                json!(p),
                json!(cls),
                json!(l),
                json!(h),
                json!(d.n_sharp),
                json!(d.strict),
                json!(d.separated),
                json!(d.correction),
                json!(d.holds()),
                json!(d.strict_holds()),
                json!(d.discrepancy_explained()),
            ]);
        }
        return Ok(Outcome::table(t));
    }
    let mut cols = vec!["kind", "p", "a", "L", "h", "exact"];
    if a.compare_main_term {
        cols.extend(["main_term", "error_bound", "relative_deviation"]);
    }
    let mut t = Table::new(&cols);
    let (name, f) = match a.kind {
        CongrKind::N => ("N", None),
        CongrKind::Nsharp => ("Nsharp", None),
        CongrKind::Q => ("Q", None),
        _ => ("R", Some(need(a.f, "--F")?)),
    };
    if a.compare_main_term && !matches!(a.kind, CongrKind::N | CongrKind::Nsharp) {
        return usage("--compare-main-term applies to N and Nsharp");
    }
    // N for every class in one pass
    let all_n = if a.kind == CongrKind::N && a.a.is_none() { Some(congruence::count_n_all(p, &w, h, ctx.exec)?) } else { None };
    for &cls in &classes {
        let exact = match (a.kind, &all_n) {
            (CongrKind::N, Some(v)) => v[cls as usize - 1],
            (CongrKind::N, None) => congruence::count_n(cls, p, &w, h)?,
            (CongrKind::Nsharp, _) => congruence::count_n_sharp(cls, p, &w, h)?,
            (CongrKind::Q, _) => congruence::count_q(cls, p, &w, h)?,
            _ => congruence::count_r(cls, p, f.unwrap_or(1.0), &w, h)?,
        };
        let mut row = vec![json!(name), json!(p), json!(cls), json!(l), json!(h), json!(exact)];
        if a.compare_main_term {
            let main = match a.kind {
                CongrKind::N => congruence::predict_n_main_term(&w, h, p),
                _ => congruence::predict_n_sharp_main_term(&w, h, p),
            };
            let c = congruence::CountComparison::new(exact, main, bounds::b_of(p as f64, l)?);
            row.extend([json!(c.main_term), json!(c.error_bound_formula), json!(c.relative_deviation)]);
        }
        t.push(row);
    }
    Ok(Outcome::table(t))
}

// ---------------------------------------------------------------- chars

#[derive(Args, Debug, Serialize)]
pub struct CharsArgs {
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long = "K")]
    pub k: Option<u64>,
    /// Analytic fourth moment over nonprincipal and all characters
    #[arg(long)]
    pub moment4: bool,
    /// Product-collision side of the fourth moment
    #[arg(long)]
    pub combinatorial: bool,
    #[arg(long)]
    pub least_qnr: bool,
    /// Non-residues in [1, K]
    #[arg(long)]
    pub qnr_count: bool,
    /// Burgess exponents, comma separated
    #[arg(long, value_delimiter = ',')]
    pub eta: Vec<f64>,
    /// Vanishing character-sum identity over non-representable residues
    #[arg(long)]
    pub vanishing: bool,
    #[arg(long = "U")]
    pub u: Option<u64>,
    #[arg(long)]
    pub selftest: bool,
}

pub fn chars(a: &CharsArgs, ctx: &Context) -> CliResult<Outcome> {
    if a.selftest {
        return selftest::module(ctx, selftest::chars);
    }
    let p = need(a.p, "--p")?;
    let mut out = Outcome::default();
    if a.moment4 || a.combinatorial {
        let k = need(a.k, "--K")?;
        let mut t = Table::new(&["p", "K", "nonprincipal", "all", "combinatorial", "ratio_to_K2p"]);
        let (np, all) = if a.moment4 {
            let table = CharacterTable::new(p)?;
            (
                json!(characters::fourth_moment(&table, k, MomentScope::Nonprincipal, ctx.exec)?),
                json!(characters::fourth_moment(&table, k, MomentScope::All, ctx.exec)?),
            )
        } else {
            (Value::Null, Value::Null)
        };
        let comb = characters::fourth_moment_combinatorial(p, k)?;
        let combv = if a.combinatorial || a.moment4 { json!(comb) } else { Value::Null };
        t.push(vec![json!(p), json!(k), np, all, combv, json!(comb as f64 / ((k * k) as f64 * p as f64))]);
        out.table = t;
    } else if a.vanishing {
        let k = need(a.k, "--K")?;
        let u = need(a.u, "--U")?;
        let set = characters::unrepresentable_nonresidues(p, k, u)?;
        let rep = characters::vanishing_identity_check(p, &set, k, u, ctx.exec)?;
        let mut t = Table::new(&["p", "K", "U", "set_size", "T", "expected_each", "principal", "quadratic", "full_vanishes", "contributions_exact"]);
        t.push(vec![
            json!(p),
            json!(k),
            json!(u),
            json!(rep.set_size),
            json!(rep.t),
            json!(rep.expected_each),
            json!(rep.principal_exact),
            json!(rep.quadratic_exact),
            json!(rep.full_vanishes(1e-6)),
            json!(rep.contributions_exact()),
        ]);
        out.table = t;
        out.extra.push(serde_json::to_string(&rep).expect("report serializes"));
    } else if !a.eta.is_empty() {
        let prof = characters::burgess_profile(p, &a.eta)?;
        let mut t = Table::new(&["p", "n_p", "eta", "K", "T", "ratio", "above_eta0"]);
        for row in &prof.rows {
            t.push(vec![json!(p), json!(prof.n_p), json!(row.eta), json!(row.k), json!(row.t), json!(row.ratio), json!(row.above_eta0)]);
        }
        out.table = t;
    } else {
        let mut cols = vec!["p", "n_p"];
        if a.qnr_count {
            cols.extend(["K", "T"]);
        }
        let mut t = Table::new(&cols);
        let mut row = vec![json!(p), json!(characters::least_qnr(p)?)];
        if a.qnr_count {
            let k = need(a.k, "--K")?;
            row.extend([json!(k), json!(characters::qnr_count(p, k)?)]);
        }
        t.push(row);
        out.table = t;
    }
    Ok(out)
}

// ---------------------------------------------------------------- squarefull

#[derive(Args, Debug, Serialize)]
pub struct SquarefullArgs {
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub a: Option<u64>,
    /// F(a, p) for every class
    #[arg(long, conflicts_with = "a")]
    pub table: bool,
    /// Tables for every odd prime up to this bound
    #[arg(long, value_name = "P")]
    pub p_max: Option<u64>,
    /// Small-class count against the r^2 s bound
    #[arg(long = "M")]
    pub m: Option<u64>,
    /// Least n^3 u^2 with n a non-residue in the class
    #[arg(long)]
    pub constructive_upper: bool,
    /// Do not count 1 as squarefull
    #[arg(long)]
    pub exclude_one: bool,
    #[arg(long)]
    pub selftest: bool,
}

pub fn squarefull(a: &SquarefullArgs, ctx: &Context) -> CliResult<Outcome> {
    if a.selftest {
        return selftest::module(ctx, selftest::squarefull);
    }
    if let Some(pmax) = a.p_max {
        let primes: Vec<u64> = residue_forge::arith::primes_up_to(pmax).into_iter().filter(|&q| q > 2).collect();
        let recs = squarefull::linnik_tables(&primes, ctx.exec)?;
        let mut out = Outcome::table(linnik_table_rows(&recs));
        for rec in &recs {
            out.extra.push(summary(rec));
        }
        return Ok(out);
    }
    let p = need(a.p, "--p")?;
    if let Some(m) = a.m {
        let c = squarefull::qnr_small_class_count(p, m)?;
        let mut t = Table::new(&["p", "M", "small_classes", "bound_s_ge_np", "bound_s_qnr", "holds"]);
        t.push(vec![json!(p), json!(m), json!(c.small_classes), json!(c.bound_s_ge_np), json!(c.bound_s_qnr), json!(c.holds())]);
        return Ok(Outcome::table(t));
    }
    let rec = squarefull::linnik_table_with(p, a.exclude_one)?;
    if a.table {
        let mut out = Outcome::table(linnik_table_rows(std::slice::from_ref(&rec)));
        out.extra.push(summary(&rec));
        return Ok(out);
    }
    let cls = need(a.a, "--a or --table")? % p;
    let mut cols = vec!["p", "a", "F", "is_qnr", "n_p"];
    if a.constructive_upper {
        cols.push("constructive_upper");
    }
    let mut t = Table::new(&cols);
    let mut row = vec![json!(p), json!(cls), json!(rec.f[cls as usize]), json!(rec.is_qnr(cls)), json!(rec.n_p)];
    if a.constructive_upper {
        row.push(Value::String(squarefull::constructive_f_upper(cls, p)?.to_string()));
    }
    t.push(row);
    Ok(Outcome::table(t))
}

fn summary(rec: &squarefull::LinnikRecord) -> String {
    json!({"p": rec.p, "F_max": rec.f_max, "n_p": rec.n_p, "ratio": rec.ratio()}).to_string()
}

// ---------------------------------------------------------------- kfull

#[derive(Args, Debug, Serialize)]
pub struct KfullScanArgs {
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long = "N")]
    pub n: Option<u64>,
    /// Least N <= N-max with at least `target` witnesses
    #[arg(long)]
    pub record: bool,
    #[arg(long = "N-max")]
    pub n_max: Option<u64>,
    #[arg(long, default_value_t = 2)]
    pub target: usize,
    #[arg(long)]
    pub selftest: bool,
}

pub fn kfull_scan(a: &KfullScanArgs, ctx: &Context) -> CliResult<Outcome> {
    if a.selftest {
        return selftest::module(ctx, selftest::kfull);
    }
    if a.record {
        let n_max = need(a.n_max, "--N-max")?;
        let found = kfull::record_search(a.k, n_max, a.target, ctx.exec)?;
        let mut t = Table::new(&["k", "N_max", "target", "N"]);
        t.push(vec![json!(a.k), json!(n_max), json!(a.target), found.map_or(Value::Null, |n| Value::String(n.to_string()))]);
        return Ok(Outcome::table(t));
    }
    let n = need(a.n, "--N or --record")?;
    let res = kfull::scan_interval(n, a.k)?;
    let mut t = Table::new(&["N", "k", "witness"]);
    for w in &res.witnesses {
        t.push(vec![big(&res.n), json!(a.k), big(w)]);
    }
    let mut out = Outcome::table(t);
    out.extra.push(json!({"N": res.n.to_string(), "k": a.k, "count": res.count()}).to_string());
    Ok(out)
}

fn parse_big(s: &str) -> Option<BigUint> {
    if let Some((b, e)) = s.split_once('^') {
        let b: BigUint = b.trim().parse().ok()?;
        let e: usize = e.trim().parse().ok()?;
        return Some(num_traits::pow(b, e));
    }
    s.trim().parse().ok()
}

#[derive(Args, Debug, Serialize)]
pub struct KfullConstructArgs {
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long, default_value_t = 1)]
    pub ell: u32,
    /// Search budget, decimal or `b^e`
    #[arg(long, default_value = "2^4096")]
    pub q_cap: String,
    #[arg(long, default_value_t = kfull::DEFAULT_PRECISION_BITS)]
    pub precision_bits: u32,
    #[arg(long, default_value_t = kfull::DEFAULT_MAX_PRECISION_BITS)]
    pub max_precision_bits: u32,
    /// Allow ell > 3 or k > 4
    #[arg(long)]
    pub allow_large: bool,
    /// Write the certificate here as pretty JSON
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub selftest: bool,
}

pub fn kfull_construct(a: &KfullConstructArgs, ctx: &Context) -> CliResult<Outcome> {
    if a.selftest {
        return selftest::module(ctx, selftest::kfull);
    }
    let q_cap = parse_big(&a.q_cap).ok_or_else(|| CliError::Usage(format!("--q-cap {:?} is not an integer", a.q_cap)))?;
    let params = KfullConstructionParams {
        k: a.k,
        ell: a.ell,
        q_cap,
        precision_bits: a.precision_bits,
        max_precision_bits: a.max_precision_bits,
        allow_large: a.allow_large,
    };
    let res = kfull::construct_kfull_cluster_with(&params, ctx.exec)?;
    if let Some(path) = &a.out {
        let text = serde_json::to_string_pretty(&res.certificate).expect("certificate serializes");
        std::fs::write(path, text + "\n").map_err(|e| Error::resource(format!("writing {}", path.display()), e))?;
    }
    let mut t = Table::new(&["N", "k", "witness"]);
    for w in &res.interval.witnesses {
        t.push(vec![big(&res.interval.n), json!(a.k), big(w)]);
    }
    let mut out = Outcome::table(t);
    out.extra.push(serde_json::to_string(&res.certificate).expect("certificate serializes"));
    Ok(out)
}

#[derive(Args, Debug, Serialize)]
pub struct KfullVerifyArgs {
    #[arg(long, value_name = "PATH")]
    pub certificate: Option<PathBuf>,
    #[arg(long)]
    pub selftest: bool,
}

pub fn kfull_verify(a: &KfullVerifyArgs, ctx: &Context) -> CliResult<Outcome> {
    if a.selftest {
        return selftest::module(ctx, selftest::kfull);
    }
    let path = a.certificate.as_ref().ok_or_else(|| CliError::Usage("missing --certificate".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::resource(format!("reading {}", path.display()), e))?;
    let cert: ClusterCertificate = serde_json::from_str(&text).map_err(|e| Error::Format(format!("certificate: {e}")))?;
    kfull::verify_certificate(&cert)?;
    let mut t = Table::new(&["k", "ell", "q", "N", "witnesses", "verified"]);
    t.push(vec![json!(cert.k), json!(cert.ell), json!(cert.q), json!(cert.n), json!(cert.witnesses.len()), json!(true)]);
    Ok(Outcome::table(t))
}

// ---------------------------------------------------------------- bounds

#[derive(Args, Debug, Serialize)]
pub struct BoundsArgs {
    /// alpha_0(beta) from the piecewise table
    #[arg(long, value_name = "BETA")]
    pub alpha0: Option<String>,
    /// Best k <= --k-max for beta
    #[arg(long, value_name = "BETA")]
    pub optimal_k: Option<String>,
    #[arg(long, default_value_t = 12)]
    pub k_max: u32,
    /// Condition value for a given beta and --k
    #[arg(long, value_name = "BETA")]
    pub condition: Option<String>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Whether (alpha, beta) lies in the admissible range
    #[arg(long, num_args = 2, value_names = ["ALPHA", "BETA"])]
    pub admissible: Vec<String>,
    /// B(p, L)
    #[arg(long, num_args = 2, value_names = ["P", "L"])]
    pub b_of: Vec<f64>,
    /// (beta, alpha_0, k*) rows, this many per piece
    #[arg(long, value_name = "N")]
    pub table: Option<u32>,
    /// Exponent bookkeeping and one exact count at p
    #[arg(long, value_name = "P")]
    pub report: Option<u64>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long, default_value = "1/100")]
    pub eps: String,
    #[arg(long)]
    pub selftest: bool,
}

pub fn bounds(a: &BoundsArgs, ctx: &Context) -> CliResult<Outcome> {
    if a.selftest {
        return selftest::module(ctx, selftest::bounds);
    }
    if let Some(b) = &a.alpha0 {
        let beta = rat_arg(b, "--alpha0")?;
        let piece = bounds::ThresholdTable::default().piece(&beta)?.clone();
        let mut t = Table::new(&["beta", "alpha0", "k"]);
        t.push(vec![r(&beta), r(&bounds::alpha0(&beta)?), json!(piece.k)]);
        return Ok(Outcome::table(t));
    }
    if let Some(b) = &a.optimal_k {
        let beta = rat_arg(b, "--optimal-k")?;
        let (k, v) = bounds::optimal_k(&beta, a.k_max)?;
        let mut t = Table::new(&["beta", "k_max", "k", "value", "alpha0"]);
        t.push(vec![r(&beta), json!(a.k_max), json!(k), r(&v), r(&bounds::alpha0(&beta)?)]);
        return Ok(Outcome::table(t));
    }
    if let Some(b) = &a.condition {
        let beta = rat_arg(b, "--condition")?;
        let k = need(a.k, "--k")?;
        let mut t = Table::new(&["beta", "k", "value"]);
        t.push(vec![r(&beta), json!(k), r(&bounds::condition_k(&beta, k)?)]);
        return Ok(Outcome::table(t));
    }
    if !a.admissible.is_empty() {
        let alpha = rat_arg(&a.admissible[0], "--admissible")?;
        let beta = rat_arg(&a.admissible[1], "--admissible")?;
        let mut t = Table::new(&["alpha", "beta", "admissible"]);
        t.push(vec![r(&alpha), r(&beta), json!(bounds::thm11_admissible(&alpha, &beta))]);
        return Ok(Outcome::table(t));
    }
    if !a.b_of.is_empty() {
        let (p, l) = (a.b_of[0], a.b_of[1]);
        let mut t = Table::new(&["p", "L", "B"]);
        t.push(vec![json!(p), json!(l), json!(bounds::b_of(p, l)?)]);
        return Ok(Outcome::table(t));
    }
    if let Some(n) = a.table {
        let mut t = Table::new(&["beta", "alpha0", "k_star"]);
        for (beta, al, k) in bounds::alpha0_rows(n)? {
            t.push(vec![r(&beta), r(&al), json!(k)]);
        }
        return Ok(Outcome::table(t));
    }
    if let Some(p) = a.report {
        let alpha = rat_arg(a.alpha.as_deref().ok_or_else(|| CliError::Usage("missing --alpha".into()))?, "--alpha")?;
        let beta = rat_arg(a.beta.as_deref().ok_or_else(|| CliError::Usage("missing --beta".into()))?, "--beta")?;
        let eps = rat_arg(&a.eps, "--eps")?;
        let rep = bounds::main_error_report(p, &alpha, &beta, &eps)?;
        let mut t = Table::new(&["p", "k", "main_exp", "error_exps", "all_below_main", "exact_n_sharp", "predicted_n_sharp", "relative_deviation"]);
        t.push(vec![
            json!(p),
            json!(rep.k),
            json!(rep.main_exp),
            json!(rep.error_exps.join(" ")),
            json!(rep.error_exps_below_main.iter().all(|&b| b)),
            json!(rep.exact_n_sharp),
            json!(rep.predicted_n_sharp),
            json!(rep.relative_deviation),
        ]);
        return Ok(Outcome::table(t));
    }
    usage("bounds needs one of --alpha0, --optimal-k, --condition, --admissible, --b-of, --table, --report")
}
