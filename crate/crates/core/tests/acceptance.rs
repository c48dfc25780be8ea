//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use purefv_core::construct::algebraic::{construct_algebraic, DEFAULT_M_LIMIT};
use purefv_core::construct::combinatorial::{construct_combinatorial, facet_count, materialize};
use purefv_core::construct::{verify_certificate, Certificate};
use purefv_core::macaulay::{binom, expand, kk_bound, macaulay_bound};
use purefv_core::peaks::{first_half_increasing, peak_profile, PeakRun};
use purefv_core::pure_decide::{b0, cm_upper, decide_pure, decide_pure_dim2, ip_experiment, FPrimeSource};
use purefv_core::steiner::{is_admissible, sts, sts_f_vector, verify_sts};
use purefv_core::{complex_f_vector, f_to_h, h_to_f, is_cm_fvector, is_kk_fvector, is_o_sequence};
use purefv_core::{FVector, HVector, PurityStatus};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fv(v: &[i64]) -> FVector {
    FVector::from_i64s(v).unwrap()
}

fn transform_correctness() -> Check {
    let f = fv(&[1, 7, 21, 7]);
    let h = f_to_h(&f);
    ensure(h == HVector::from_i64s(&[1, 4, 10, -8]).unwrap(), || format!("f_to_h gave {h}"))?;
    ensure(h_to_f(&h) == f, || "h_to_f does not invert".into())?;

    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = prop::collection::vec(-1_000_000_000i64..1_000_000_000, 1..25);
    runner
        .run(&strategy, |tail| {
            let mut entries = vec![BigInt::from(1)];
            entries.extend(tail.iter().map(|&x| BigInt::from(x)));
            let h = HVector::new(entries).unwrap();
            let back = f_to_h(&h_to_f(&h));
            prop_assert_eq!(back, h);
            Ok(())
        })
        .map_err(|e| format!("round trip: {e}"))
}

fn classification_at_seven() -> Check {
    let pure: BTreeSet<u64> = (1..=21)
        .filter(|&b| {
            let v = decide_pure_dim2(7, b, 7, u64::MAX).unwrap();
            assert!(!v.budget_hit);
            v.status == PurityStatus::Pure
        })
        .collect();
    let want: BTreeSet<u64> = (12..=19).chain([21]).collect();
    ensure(pure == want, || format!("pure set {pure:?}"))
}

fn interval_property_violation() -> Check {
    let rep = ip_experiment(7, u64::MAX, false).map_err(|e| e.to_string())?;
    ensure(rep.f == fv(&[1, 7, 21, 7]) && rep.f_pure, || "f not certified pure".into())?;
    ensure(rep.f_prime == fv(&[1, 7, 20, 7]), || "wrong f'".into())?;
    ensure(
        rep.f_prime_verdict == PurityStatus::NotPure
            && rep.f_prime_source == FPrimeSource::Search
            && !rep.f_prime_search.budget_hit,
        || format!("f' verdict {:?} from {:?}", rep.f_prime_verdict, rep.f_prime_source),
    )?;
    ensure(rep.cm_range == [12, 13] && rep.cm_confirmed, || format!("cm range {:?}", rep.cm_range))?;
    ensure(b0(7).unwrap() == 12 && cm_upper(7) == 13, || "b0(7)".into())?;
    ensure(rep.ip_violated, || "ip_violated is false".into())
}

fn algebraic_construction() -> Check {
    let expected: [(u32, &[u64]); 3] = [(2, &[4, 7]), (3, &[10, 16, 19]), (4, &[22, 34, 40, 43])];
    for (n, peaks) in expected {
        let formula: Vec<u64> = (1..=n as u64).map(|t| 3 * ((1 << t) - 1) * (1 << (n as u64 - t)) - 2).collect();
        ensure(formula == peaks, || format!("N={n}: closed form gives {formula:?}"))?;
        let cert = construct_algebraic(n, 2, DEFAULT_M_LIMIT).map_err(|e| format!("N={n}: {e}"))?;
        ensure(cert.peak_indices == peaks, || format!("N={n}: peaks {:?}", cert.peak_indices))?;
        let profile = peak_profile(cert.f.tail());
        let positions: Vec<u64> = profile.positions().iter().map(|&p| p as u64).collect();
        ensure(positions == peaks && profile.all_singletons(), || format!("N={n}: f peaks {positions:?}"))?;
        ensure(is_o_sequence(cert.h.entries()).valid, || format!("N={n}: h is not an O-sequence"))?;
        ensure(is_cm_fvector(&cert.f).is_cm, || format!("N={n}: f is not Cohen-Macaulay"))?;
        ensure(is_kk_fvector(cert.f.entries()).valid, || format!("N={n}: f fails Kruskal-Katona"))?;
        ensure(first_half_increasing(&cert.f), || format!("N={n}: first half not increasing"))?;
        let check = verify_certificate(&Certificate::Algebraic(cert));
        ensure(check.ok, || format!("N={n}: certificate failures {:?}", check.failures))?;
    }
    Ok(())
}

fn combinatorial_construction() -> Check {
    let k = [4u64, 6, 8];
    let cert = construct_combinatorial(&k, None).map_err(|e| format!("k={k:?}: {e}"))?;
    let check = verify_certificate(&Certificate::Combinatorial(cert.clone()));
    ensure(check.ok, || format!("certificate failures {:?}", check.failures))?;
    let profile = peak_profile(cert.f.tail());
    ensure(
        profile.peak_count == 3 && profile.positions() == [3, 5, 7],
        || format!("peaks at {:?}", profile.positions()),
    )?;
    let facets = facet_count(&cert);
    match materialize(&cert, 2_000_000).map_err(|e| e.to_string())? {
        Some(complex) => ensure(complex_f_vector(&complex) == cert.f, || "materialized f differs".into()),
        None => {
            println!("    (witness has {facets} facets; too large to materialize)");
            Ok(())
        }
    }
}

fn steiner_suite() -> Check {
    for r in (1..=99).filter(|&r| is_admissible(r)) {
        let ts = sts(r).map_err(|e| e.to_string())?;
        let check = verify_sts(&ts);
        ensure(check.valid, || format!("r={r}: {:?}", check.problem))?;
        ensure(ts.blocks.len() as u64 * 3 == r * (r - 1) / 2, || format!("r={r}: {} blocks", ts.blocks.len()))?;
    }
    let f = sts_f_vector(&sts(7).unwrap()).map_err(|e| e.to_string())?;
    ensure(f == fv(&[1, 7, 21, 7]), || format!("sts_f_vector(7) = {f}"))
}

/// Every sum `C(a_i, i) + C(a_{i-1}, i-1) + ... + C(a_j, j)` with
/// `a_i > ... > a_j >= j >= 1` and value at most `limit`, tallied by value.
fn tally_decompositions(i: u32, limit: u64) -> Vec<Vec<Vec<(u64, u32)>>> {
    fn go(rem: u64, bottom: u32, max_top: u64, acc: &mut Vec<(u64, u32)>, total: u64, out: &mut Vec<Vec<Vec<(u64, u32)>>>) {
        if bottom == 0 {
            return;
        }
        let mut top = bottom as u64;
        while top < max_top {
            let v = binom(top, bottom as i64).to_u64().unwrap();
            if v > rem {
                break;
            }
            acc.push((top, bottom));
            out[(total + v) as usize].push(acc.clone());
            go(rem - v, bottom - 1, top, acc, total + v, out);
            acc.pop();
            top += 1;
        }
    }
    let mut out = vec![Vec::new(); limit as usize + 1];
    go(limit, i, u64::MAX, &mut Vec::new(), 0, &mut out);
    out
}

fn property_suites() -> Check {
    const N_MAX: u64 = 5000;
    for i in 1..=8u32 {
        let tally = tally_decompositions(i, N_MAX);
        for n in 1..=N_MAX {
            let found = &tally[n as usize];
            ensure(found.len() == 1, || format!("n={n} i={i}: {} decompositions", found.len()))?;
            let got: Vec<(u64, u32)> = expand(&BigUint::from(n), i)
                .unwrap()
                .terms
                .iter()
                .map(|t| (t.top.to_u64().unwrap(), t.bottom))
                .collect();
            ensure(got == found[0], || format!("n={n} i={i}: expand gave {got:?}, oracle {:?}", found[0]))?;
        }
    }

    for i in 1..=8u32 {
        let mut prev_m = BigUint::from(0u32);
        let mut prev_k = BigUint::from(0u32);
        for n in 0..=3000u64 {
            let m = macaulay_bound(&BigUint::from(n), i);
            let k = kk_bound(&BigUint::from(n), i);
            ensure(m >= prev_m, || format!("Macaulay bound decreases at n={n} i={i}"))?;
            ensure(k >= prev_k, || format!("Kruskal-Katona bound decreases at n={n} i={i}"))?;
            ensure(m >= BigUint::from(n) || i == 0, || format!("Macaulay bound below n at n={n} i={i}"))?;
            prev_m = m;
            prev_k = k;
        }
    }

    let example: Vec<i64> = vec![1, 15, 22, 18, 20, 20, 15, 22];
    let p = peak_profile(&example);
    let want = vec![
        PeakRun { start: 2, end: 2 },
        PeakRun { start: 4, end: 5 },
        PeakRun { start: 7, end: 7 },
    ];
    ensure(p.peak_count == 3 && p.peaks == want && !p.unimodal, || format!("peak profile {p:?}"))?;

    for r in (7..=99).filter(|&r| is_admissible(r)) {
        let b = b0(r).map_err(|e| e.to_string())?;
        ensure(b < cm_upper(r), || format!("b0({r}) = {b} is not below {}", cm_upper(r)))?;
    }
    Ok(())
}

fn honest_incompleteness() -> Check {
    let known_not_pure = decide_pure(&fv(&[1, 7, 20, 7]), 5).map_err(|e| e.to_string())?;
    ensure(
        known_not_pure.status == PurityStatus::Unknown && known_not_pure.budget_hit && known_not_pure.witness.is_none(),
        || format!("small budget on (1,7,20,7) gave {:?}", known_not_pure.status),
    )?;
    let known_pure = decide_pure(&fv(&[1, 7, 21, 7]), 3).map_err(|e| e.to_string())?;
    ensure(known_pure.status == PurityStatus::Unknown, || {
        format!("small budget on (1,7,21,7) gave {:?}", known_pure.status)
    })?;
    // (1, r, C(r,2) - 1, C(r,2)/3) is not pure for admissible r, so the only
    // honest answers are NotPure or Unknown; these budgets cannot finish.
    for (f, budget) in [(fv(&[1, 13, 77, 26]), 100_000u64), (fv(&[1, 19, 170, 57]), 100_000)] {
        let v = decide_pure(&f, budget).map_err(|e| e.to_string())?;
        ensure(
            v.status == PurityStatus::Unknown && v.budget_hit && v.nodes_explored <= budget + 1,
            || format!("{f} gave {:?} after {} nodes", v.status, v.nodes_explored),
        )?;
    }
    let pool_too_large = fv(&[1, 30, 435, 4060, 27405]);
    let v = decide_pure(&pool_too_large, 1000).map_err(|e| e.to_string())?;
    ensure(v.status == PurityStatus::Unknown && v.budget_hit, || format!("oversized pool gave {:?}", v.status))
}

fn main() {
    let criteria: [(&str, &str, Duration, fn() -> Check); 8] = [
        ("1", "transform correctness", Duration::from_secs(1), transform_correctness),
        ("2", "classification of (1,7,b,7)", Duration::from_secs(120), classification_at_seven),
        ("3", "Interval Property violation at r = 7", Duration::from_secs(120), interval_property_violation),
        ("4", "algebraic construction, N = 2, 3, 4", Duration::from_secs(30), algebraic_construction),
        ("5", "combinatorial construction, k = (4,6,8)", Duration::from_secs(60), combinatorial_construction),
        ("6", "Steiner triple systems, r <= 99", Duration::from_secs(10), steiner_suite),
        ("7", "property suites", Duration::from_secs(600), property_suites),
        ("8", "Unknown on budget exhaustion", Duration::from_secs(60), honest_incompleteness),
    ];
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= limit, || format!("took {:.2} s, limit {} s", elapsed.as_secs_f64(), limit.as_secs()))
        });
        match outcome {
            Ok(()) => println!("PASS  criterion {id}: {name} ({:.2} s)", elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {id}: {name} ({:.2} s): {why}", elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
