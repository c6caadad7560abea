//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use continuant::maps::{complete, map_f, map_g, map_h, Completion, DivisorPrefix};
use continuant::seeds::{enumerate_unit_tuples, family_tuples};
use continuant::{
    classify_n2_solution, continuant, continuant_matrix, enumerate_factorizations, extend_left,
    factorization_to_solution, is_nonstandard_window, solution_to_factorization, Chain,
    EquationInstance, ExtendResult, FactorizationTriple, IntPolynomial, IntTuple, N2Category,
    Parity, Sign, Solution,
};
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

mod common;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn x4p1() -> IntPolynomial {
    "1,0,0,0,1".parse().unwrap()
}

fn solution(xs: &[i64]) -> Solution {
    let inst = EquationInstance::new(x4p1(), Sign::Plus, xs.len() - 1).unwrap();
    Solution::new(Arc::new(inst), IntTuple::from(xs)).unwrap()
}

fn ints(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The `right` elements following the seed window.
fn right_of(seed: &[i64], right: usize) -> Vec<BigInt> {
    let mut chain = Chain::new(&solution(seed));
    chain.ensure(0, right).unwrap();
    let start = chain.base_offset() + seed.len();
    chain.elements()[start..].to_vec()
}

fn chain_reproduction() -> Check {
    for (seed, want) in [(&[0, 2, 8][..], [30, 112]), (&[0, 3, 27][..], [240, 2133])] {
        let got = right_of(seed, 2);
        ensure(got == ints(&want), || {
            format!("{seed:?} continues as {got:?}")
        })?;
    }
    Ok(())
}

fn deep_chain() -> Check {
    let got = right_of(&[0, 1, 1, 1, 13], 2);
    ensure(got == ints(&[480, 23422307]), || {
        format!("continues as {got:?}")
    })?;
    let m = continuant(1, &ints(&[13, 480, 23422307])).unwrap();
    let want: BigInt = "146178618000".parse().unwrap();
    ensure(m == want, || format!("m-value {m}"))
}

fn left_extension() -> Check {
    for (seed, want) in [(&[0, 1, 1, 1, 13][..], -1), (&[0, 2, 1, 1, 62][..], -2)] {
        match extend_left(&solution(seed)).map_err(|e| e.to_string())? {
            ExtendResult::Unique(w) if w.xs()[0] == BigInt::from(want) => {}
            other => return Err(format!("{seed:?} extends left to {other:?}")),
        }
    }
    Ok(())
}

fn unit_classification() -> Check {
    let cases = [
        (Sign::Plus, 2),
        (Sign::Plus, 3),
        (Sign::Plus, 4),
        (Sign::Minus, 2),
        (Sign::Minus, 3),
    ];
    for (t, n) in cases {
        for bound in [3, 5, 8] {
            let fam: BTreeSet<IntTuple> = family_tuples(t, n, bound)
                .map_err(|e| e.to_string())?
                .into_iter()
                .collect();
            let brute: BTreeSet<IntTuple> =
                enumerate_unit_tuples(t, n, bound, 1).into_iter().collect();
            if fam != brute {
                let extra: Vec<_> = fam.difference(&brute).map(ToString::to_string).collect();
                let missing: Vec<_> = brute.difference(&fam).map(ToString::to_string).collect();
                return Err(format!(
                    "t={t} n={n} B={bound}: extra {extra:?}, missing {missing:?}"
                ));
            }
        }
    }
    Ok(())
}

/// `(m, d1, solution)` for every positive factorization `m^4 + 1 = d1 d2`,
/// `d1 <= d2`, `m <= 10`.
const TABLE: [(i64, i64, &[i64]); 18] = [
    (1, 1, &[0, 1, 1]),
    (2, 1, &[0, 2, 8]),
    (3, 1, &[0, 3, 27]),
    (3, 2, &[0, 1, 1, 1, 13]),
    (4, 1, &[0, 4, 64]),
    (5, 1, &[0, 5, 125]),
    (5, 2, &[0, 2, 1, 1, 62]),
    (6, 1, &[0, 6, 216]),
    (7, 1, &[0, 7, 343]),
    (7, 2, &[0, 3, 1, 1, 171]),
    (8, 1, &[0, 8, 512]),
    (8, 17, &[2, 8, 30]),
    (9, 1, &[0, 9, 729]),
    (9, 2, &[0, 4, 1, 1, 364]),
    (9, 17, &[1, 1, 7, 1, 42]),
    (9, 34, &[3, 1, 3, 2, 21]),
    (10, 1, &[0, 10, 1000]),
    (10, 73, &[7, 3, 2, 1, 13]),
];

fn bridge_table() -> Check {
    let p = x4p1();
    let mut rows = Vec::new();
    for m in 1..=10i64 {
        for (d1, d2) in enumerate_factorizations(&p, &BigInt::from(m)).map_err(|e| e.to_string())? {
            let f =
                FactorizationTriple::new(&p, BigInt::from(m), d1, d2).map_err(|e| e.to_string())?;
            let s = factorization_to_solution(&p, Parity::Even, &f).map_err(|e| e.to_string())?;
            let back = solution_to_factorization(&s).map_err(|e| e.to_string())?;
            ensure(back == f, || format!("{f} -> {s} -> {back}"))?;
            rows.push((f.m, f.d1, s.into_tuple()));
        }
    }
    let want: Vec<_> = TABLE
        .iter()
        .map(|&(m, d1, xs)| (BigInt::from(m), BigInt::from(d1), IntTuple::from(xs)))
        .collect();
    ensure(rows == want, || format!("table rows differ: {rows:?}"))?;
    for m in 11..=50i64 {
        for (d1, d2) in enumerate_factorizations(&p, &BigInt::from(m)).map_err(|e| e.to_string())? {
            let f =
                FactorizationTriple::new(&p, BigInt::from(m), d1, d2).map_err(|e| e.to_string())?;
            let s = factorization_to_solution(&p, Parity::Even, &f).map_err(|e| e.to_string())?;
            let back = solution_to_factorization(&s).map_err(|e| e.to_string())?;
            ensure(back == f, || format!("{f} -> {s} -> {back}"))?;
        }
    }
    Ok(())
}

fn completed(p: &DivisorPrefix) -> Result<IntTuple, String> {
    match complete(p).map_err(|e| e.to_string())? {
        Completion::Solution(s) => Ok(s.into_tuple()),
        Completion::Free(_) => Err(format!("{p} has a free completion")),
    }
}

fn map_reproduction() -> Check {
    let poly = Arc::new(x4p1());
    let prefix = |xs: &[i64]| DivisorPrefix::new(Arc::clone(&poly), Sign::Plus, IntTuple::from(xs));
    let gh = prefix(&[2, 8])
        .and_then(|p| map_h(&p))
        .and_then(|p| map_g(&p))
        .map_err(|e| e.to_string())?;
    ensure(gh.xs() == &IntTuple::from([1, 1, 7, 1]), || {
        format!("g.h(2,8) = {gh}")
    })?;
    let done = completed(&gh)?;
    ensure(done == IntTuple::from([1, 1, 7, 1, 42]), || {
        format!("completes to {done}")
    })?;
    let f1 = prefix(&[1, 1])
        .and_then(|p| map_f(&BigInt::from(1), &p))
        .map_err(|e| e.to_string())?;
    let done = completed(&f1)?;
    ensure(done == IntTuple::from([0, 1, 1, 1, 13]), || {
        format!("f_1(1,1) completes to {done}")
    })
}

fn identity_suite() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed_c0de);
    for _ in 0..1000 {
        let t: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let n = rng.gen_range(2..=8usize);
        let xs: Vec<BigInt> = (0..n)
            .map(|_| BigInt::from(rng.gen_range(-100i64..=100)))
            .collect();
        let k = |s: &[BigInt]| continuant(t, s).unwrap();
        let tb = BigInt::from(t);
        let full = k(&xs);

        let det = &full * k(&xs[1..n - 1]) - k(&xs[..n - 1]) * k(&xs[1..]);
        let sign = if n % 2 == 0 { 1 } else { -1 };
        ensure(det == BigInt::from(sign * t.pow(n as u32 - 1)), || {
            format!("determinant identity fails on {xs:?}")
        })?;

        let back = &xs[n - 1] * k(&xs[..n - 1]) + &tb * k(&xs[..n - 2]);
        let front = &xs[0] * k(&xs[1..]) + &tb * k(&xs[2..]);
        ensure(back == full && front == full, || {
            format!("expansions disagree on {xs:?}")
        })?;

        let rev: Vec<BigInt> = xs.iter().rev().cloned().collect();
        ensure(k(&rev) == full, || format!("reversal fails on {xs:?}"))?;

        let one = BigInt::from(1);
        let padded_front = [&[one.clone(), &xs[0] - &tb][..], &xs[1..]].concat();
        let padded_back = [&xs[..n - 1], &[&xs[n - 1] - &tb, one][..]].concat();
        ensure(k(&padded_front) == full && k(&padded_back) == full, || {
            format!("padding fails on {xs:?}")
        })?;

        let m = continuant_matrix(t, &xs).unwrap();
        let entries = [
            &tb * k(&xs[1..n - 1]),
            &tb * k(&xs[1..]),
            k(&xs[..n - 1]),
            full.clone(),
        ];
        ensure([m.a, m.b, m.c, m.d] == entries, || {
            format!("matrix entries differ on {xs:?}")
        })?;

        let small = common::small(&xs);
        ensure(
            common::k(t as i128, &small).map(BigInt::from) == Some(full),
            || format!("oracle disagrees on {xs:?}"),
        )?;
    }
    Ok(())
}

fn n2_completeness() -> Check {
    const B: i128 = 30;
    let mut seen = 0usize;
    for x0 in -B..=B {
        for x1 in -B..=B {
            for x2 in -B..=B {
                if !common::is_solution(&[1, 0, 0, 0, 1], 1, &[x0, x1, x2]).unwrap() {
                    continue;
                }
                seen += 1;
                let [a, b, c] = [x0, x1, x2].map(BigInt::from);
                match classify_n2_solution(&a, &b, &c) {
                    Ok(N2Category::NotASolution) => {
                        return Err(format!("({x0},{x1},{x2}) rejected"))
                    }
                    Ok(_) => {}
                    Err(e) => return Err(format!("({x0},{x1},{x2}): {e}")),
                }
            }
        }
    }
    ensure(seen > 0, || "no solutions found".into())
}

fn nonstandard_certificate() -> Check {
    let ok = is_nonstandard_window(&solution(&[3, 1, 3, 2, 21]), 10).map_err(|e| e.to_string())?;
    ensure(ok, || {
        "a window with |K_4| = 1 appears within 10 steps".into()
    })
}

fn growth_bound() -> Check {
    let mut chain = Chain::new(&solution(&[0, 1, 1, 1, 13]));
    chain.ensure(3, 6).map_err(|e| e.to_string())?;
    let els = chain.elements();
    let mut checked = 0;
    for w in els.windows(6) {
        let (win, next) = (&w[..5], &w[5]);
        let positive = win.iter().all(|x| x.sign() == num_bigint::Sign::Plus);
        if positive && win.windows(2).all(|p| p[0] <= p[1]) {
            checked += 1;
            let bound = &win[4] * &win[4] * &win[3] * &win[3] * &win[2];
            ensure(next * 2 > bound, || {
                format!("next {next} too small after {:?}", IntTuple::from(win))
            })?;
        }
    }
    ensure(checked >= 4, || format!("only {checked} windows checked"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("chain reproduction", chain_reproduction),
        ("deep chain", deep_chain),
        ("left extension", left_extension),
        ("unit tuple classifications", unit_classification),
        ("factorization table", bridge_table),
        ("map reproduction", map_reproduction),
        ("identity suite", identity_suite),
        ("n = 2 completeness", n2_completeness),
        ("nonstandard chain", nonstandard_certificate),
        ("growth bound", growth_bound),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = match panic::catch_unwind(AssertUnwindSafe(check)) {
            Ok(r) => r,
            Err(p) => Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into())),
        };
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({ms} ms): {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
