use num_bigint::BigUint;
use proptest::prelude::*;

use residue_forge::arith::{load_sieve, save_sieve, sqrt_mod, FactorSieve, SieveConfig};
use residue_forge::characters::{fourth_moment, CharacterTable, MomentScope};
use residue_forge::congruence::{count_n, count_n_all, PrimeWindow};
use residue_forge::kfull::certified::{certify, nearest_multiple, Exponent};
use residue_forge::kfull::{interval_counts, record_search, scan_interval};
use residue_forge::progression::sweep_classes;
use residue_forge::report::{emit_report, linnik_table_rows, Format};
use residue_forge::squarefull::{enumerate_squarefull, linnik_tables};
use residue_forge::{Error, Exec};

fn odd_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(residue_forge::arith::primes_up_to(400).into_iter().skip(1).collect::<Vec<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sweep_is_exec_independent(x in 1u64..20_000, y in 2.0f64..500.0, p in odd_prime()) {
        let s = FactorSieve::new(20_000).unwrap();
        let a = sweep_classes(x, y, p, &s, Exec::Sequential).unwrap();
        let b = sweep_classes(x, y, p, &s, Exec::Parallel).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn sieve_is_exec_independent(limit in 2u64..300_000, seg in 10usize..5000) {
        let seq = FactorSieve::with_config(limit, &SieveConfig { exec: Exec::Sequential, segment: seg, ..SieveConfig::default() }).unwrap();
        let par = FactorSieve::with_config(limit, &SieveConfig { exec: Exec::Parallel, segment: seg, ..SieveConfig::default() }).unwrap();
        for n in (2..=limit).step_by(97) {
            prop_assert_eq!(seq.spf(n), par.spf(n));
        }
        prop_assert_eq!(seq.primes().count(), par.primes().count());
    }

    #[test]
    fn n_all_matches_single(p in odd_prime(), l in 2.0f64..12.0, h in 0.0f64..300.0) {
        let w = PrimeWindow::new(l).unwrap();
        prop_assume!(!w.primes.contains(&p));
        let all = count_n_all(p, &w, h, Exec::Parallel).unwrap();
        prop_assert_eq!(&all, &count_n_all(p, &w, h, Exec::Sequential).unwrap());
        for a in (1..p).step_by(7) {
            prop_assert_eq!(all[a as usize - 1], count_n(a, p, &w, h).unwrap());
        }
    }

    #[test]
    fn fourth_moment_bitwise_deterministic(p in odd_prime(), k in 1u64..50) {
        prop_assume!(k < p);
        let t = CharacterTable::new(p).unwrap();
        let a = fourth_moment(&t, k, MomentScope::All, Exec::Sequential).unwrap();
        let b = fourth_moment(&t, k, MomentScope::All, Exec::Parallel).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn sqrt_mod_roots_square(p in odd_prime(), c in 0u64..400) {
        let c = c % p;
        if let Some((r1, r2)) = sqrt_mod(c, p) {
            prop_assert_eq!(r1 * r1 % p, c);
            prop_assert_eq!(r2 * r2 % p, c);
            prop_assert!(r1 <= r2);
        }
    }

    /// The certified decision agrees with an f64 reference wherever the margin is clear.
    #[test]
    fn certify_agrees_with_reference(d in prop::sample::select(vec![2u64, 3, 5, 6, 7, 10, 11]), q in 2u64..1_000_000, k in 2u32..5) {
        let qb = BigUint::from(q);
        let r = nearest_multiple(d, k, &qb, 128);
        let e = Exponent::dirichlet(2);
        let got = certify(d, k, &qb, &r, e, 16, 4096).unwrap().is_some();
        // |q alpha - r| vs q^{-1/2}, in f64 with a safety margin
        let alpha = (d as f64).powf(-((k + 1) as f64) / k as f64);
        let lhs = (q as f64 * alpha - r.to_string().parse::<f64>().unwrap()).abs();
        let rhs = (q as f64).powf(-0.5);
        if (lhs - rhs).abs() > 1e-9 * rhs.max(1e-300) + 1e-12 {
            prop_assert_eq!(got, lhs <= rhs);
        }
    }
}

#[test]
fn linnik_tables_exec_independent() {
    let primes: Vec<u64> = residue_forge::arith::primes_up_to(200).into_iter().skip(1).collect();
    assert_eq!(linnik_tables(&primes, Exec::Sequential).unwrap(), linnik_tables(&primes, Exec::Parallel).unwrap());
}

#[test]
fn squarefull_scan_complete_k2() {
    // independent generator: the a^2 b^3 stream from the squarefull module
    let nmax = 10_000u64;
    let stream = enumerate_squarefull((nmax + 1) * (nmax + 1)).unwrap().values;
    let counts = interval_counts(2, nmax, Exec::Parallel).unwrap();
    let mut idx = 0;
    for n in 1..=nmax {
        let (lo, hi) = (n * n, (n + 1) * (n + 1));
        while stream[idx] <= lo {
            idx += 1;
        }
        let mut c = 0;
        let mut j = idx;
        while j < stream.len() && stream[j] < hi {
            c += 1;
            j += 1;
        }
        assert_eq!(counts[n as usize - 1], c, "N = {n}");
    }
}

#[test]
fn kfull_scan_complete_k3() {
    let nmax = 200u64;
    let sieve = FactorSieve::new((nmax + 1).pow(3)).unwrap();
    for n in 1..=nmax {
        let got: Vec<u64> = scan_interval(n, 3).unwrap().witnesses.iter().map(|w| w.try_into().unwrap()).collect();
        let want: Vec<u64> = (n.pow(3) + 1..(n + 1).pow(3)).filter(|&m| sieve.is_k_full(m, 3).unwrap()).collect();
        assert_eq!(got, want, "N = {n}");
    }
}

#[test]
fn record_search_monotone_in_target() {
    let mut prev = 0;
    for target in 1..=5 {
        match record_search(2, 5000, target, Exec::Parallel).unwrap() {
            Some(n) => {
                assert!(n >= prev);
                prev = n;
            }
            None => prev = u64::MAX,
        }
    }
}

#[test]
fn sieve_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spf.bin");
    let s = FactorSieve::new(50_000).unwrap();
    save_sieve(&s, std::fs::File::create(&path).unwrap()).unwrap();
    let back = load_sieve(std::fs::File::open(&path).unwrap(), Some(50_000)).unwrap();
    assert_eq!(s, back);
    assert!(matches!(load_sieve(std::fs::File::open(&path).unwrap(), Some(60_000)), Err(Error::Format(_))));
}

#[test]
fn csv_report_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("linnik.csv");
    let recs = linnik_tables(&[3, 5], Exec::Sequential).unwrap();
    emit_report(&linnik_table_rows(&recs), &path, Format::Csv).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,a,F,is_qnr,n_p"));
    assert_eq!(lines.next(), Some("3,0,9,false,2"));
    assert_eq!(text.lines().count(), 1 + 3 + 5);
    let bad = dir.path().join("missing").join("x.csv");
    assert!(matches!(emit_report(&linnik_table_rows(&recs), &bad, Format::Csv), Err(Error::Resource { .. })));
}
