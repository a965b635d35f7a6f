//! End-to-end acceptance gate. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion fails. Oracle values are computed
//! independently inside this file (integer square roots, exact
//! bisection, brute-force lattice counts) rather than through the
//! library code paths they validate.

use eudoxus::arith::multiply;
use eudoxus::constructors::{
    circle_defect, e_slope, lattice_count, quintic, sqrt_nat, steiner_compare,
};
use eudoxus::real::{compare_within, sup_finite, to_decimal, ComparisonOutcome, Real};
use eudoxus::slope::{concentrate, opt_div};
use eudoxus::verify::axioms::{run_axiom_checks_on, AxiomMember};
use eudoxus::verify::Scale;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::Command;
use std::time::{Duration, Instant};

struct Criterion {
    id: u32,
    what: &'static str,
    budget: Duration,
    run: fn() -> Result<(), String>,
}

#[test]
fn acceptance_criteria() {
    let criteria = [
        Criterion { id: 1, what: "sqrt(2) to 12 digits vs integer-sqrt oracle", budget: Duration::from_secs(1), run: c01_sqrt2_digits },
        Criterion { id: 2, what: "2n <= (rho.rho)(n) <= 2n+2 for n <= 10^4", budget: Duration::from_secs(5), run: c02_sqrt2_squared },
        Criterion { id: 3, what: "rho defect <= 8 on 10^5 sampled pairs", budget: Duration::from_secs(10), run: c03_rho_defect },
        Criterion { id: 4, what: "quintic root: values, defect, residual, bisection oracle", budget: Duration::from_secs(30), run: c04_quintic },
        Criterion { id: 5, what: "pi: lattice counts, accuracy bound, decimal, circle defect", budget: Duration::from_secs(60), run: c05_pi },
        Criterion { id: 6, what: "e: exact argmax values and local maximality", budget: Duration::from_secs(60), run: c06_e },
        Criterion { id: 7, what: "optimal division and concentration, exhaustively", budget: Duration::from_secs(30), run: c07_opt_div },
        Criterion { id: 8, what: "field and order axioms at 1e-9 (pi at 1e-4)", budget: Duration::from_secs(300), run: c08_axioms },
        Criterion { id: 9, what: "finite suprema: defect, value, leastness evidence", budget: Duration::from_secs(30), run: c09_sup },
        Criterion { id: 10, what: "iterate estimate for exponents up to 5", budget: Duration::from_secs(30), run: c10_iterate },
        Criterion { id: 11, what: "CLI JSON schema and verify exit code", budget: Duration::from_secs(60), run: c11_cli },
    ];
    let mut failures = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let timely = elapsed <= c.budget;
        match (&result, timely) {
            (Ok(()), true) => println!("criterion {:>2} PASS [{elapsed:.2?}] {}", c.id, c.what),
            (Ok(()), false) => {
                println!(
                    "criterion {:>2} FAIL [{elapsed:.2?} > {:?}] {}",
                    c.id, c.budget, c.what
                );
                failures.push(format!("criterion {} exceeded its time budget", c.id));
            }
            (Err(msg), _) => {
                println!("criterion {:>2} FAIL [{elapsed:.2?}] {}: {msg}", c.id, c.what);
                failures.push(format!("criterion {}: {msg}", c.id));
            }
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eudoxus"))
}

fn run_cli(args: &[&str]) -> Result<(String, i32), String> {
    let out = bin()
        .args(args)
        .output()
        .map_err(|e| format!("spawn failed: {e}"))?;
    Ok((
        String::from_utf8_lossy(&out.stdout).into_owned(),
        out.status.code().unwrap_or(-1),
    ))
}

/// Round-half-up decimal of sqrt(m) with `digits` places, via integer
/// square roots only: floor(x + 1/2) = floor((2x + 1) / 2) with
/// floor(2x) = isqrt(4 m 10^(2 digits)).
fn sqrt_oracle(m: u32, digits: u32) -> String {
    let scaled: BigInt = big(4) * big(m as i64) * BigInt::from(10u32).pow(2 * digits);
    let twice = scaled.sqrt();
    let rounded: BigInt = (twice + 1) / 2;
    let ten_d = BigInt::from(10u32).pow(digits);
    let (q, r) = rounded.div_rem(&ten_d);
    format!("{q}.{r:0>width$}", width = digits as usize)
}

fn c01_sqrt2_digits() -> Result<(), String> {
    let (stdout, code) = run_cli(&["eval", "sqrt(2)", "--digits", "12"])?;
    if code != 0 {
        return Err(format!("exit code {code}"));
    }
    let got = stdout.lines().next().unwrap_or("").trim().to_string();
    let want = sqrt_oracle(2, 12);
    if got != want {
        return Err(format!("got {got}, oracle says {want}"));
    }
    Ok(())
}

fn c02_sqrt2_squared() -> Result<(), String> {
    let rho = sqrt_nat(&big(2)).map_err(|e| e.to_string())?;
    let sq = multiply(&rho, &rho).map_err(|e| e.to_string())?;
    for n in 1..=10_000i64 {
        let v = sq.at(n).map_err(|e| e.to_string())?;
        if v < big(2 * n) || v > big(2 * n + 2) {
            return Err(format!("(rho.rho)({n}) = {v}"));
        }
    }
    Ok(())
}

fn max_defect(
    slope: &eudoxus::Slope,
    pairs: usize,
    max: i64,
    seed: u64,
) -> Result<BigInt, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = big(0);
    for _ in 0..pairs {
        let n = big(rng.gen_range(-max..=max));
        let m = big(rng.gen_range(-max..=max));
        let d = (slope.evaluate(&(&n + &m)).map_err(|e| e.to_string())?
            - slope.evaluate(&n).map_err(|e| e.to_string())?
            - slope.evaluate(&m).map_err(|e| e.to_string())?)
        .abs();
        worst = worst.max(d);
    }
    Ok(worst)
}

fn c03_rho_defect() -> Result<(), String> {
    let rho = sqrt_nat(&big(2)).map_err(|e| e.to_string())?;
    let worst = max_defect(&rho, 100_000, 10_000, 0xACCE01)?;
    if worst > big(8) {
        return Err(format!("observed defect {worst} > 8"));
    }
    Ok(())
}

/// Q(k, n) = k^5 + k n^4 - 3 n^5, the homogenized quintic.
fn quintic_q(k: &BigInt, n: &BigInt) -> BigInt {
    k.pow(5) + k * n.pow(4) - 3 * n.pow(5)
}

fn c04_quintic() -> Result<(), String> {
    let alpha = quintic().map_err(|e| e.to_string())?;
    if alpha.at(100).map_err(|e| e.to_string())? != big(114) {
        return Err("alpha(100) != 114".into());
    }
    let worst = max_defect(&alpha, 100_000, 10_000, 0xACCE04)?;
    if worst > big(3) {
        return Err(format!("observed defect {worst} > 3"));
    }
    for n in 1..=10_000i64 {
        // Residual n * P(alpha(n)/n) = Q(alpha(n), n) / n^4 in [0, 50].
        let n_big = big(n);
        let q = quintic_q(&alpha.at(n).map_err(|e| e.to_string())?, &n_big);
        if q.is_negative() || q > 50 * n_big.pow(4) {
            return Err(format!("residual out of [0, 50] at n = {n}"));
        }
    }
    // Exact-integer bisection oracle at 16 digits, rounded to 8.
    let scale = BigInt::from(10u64).pow(16);
    let (mut lo, mut hi) = (scale.clone(), 2 * &scale);
    while &hi - &lo > big(1) {
        let mid: BigInt = (&lo + &hi) / 2;
        if quintic_q(&mid, &scale).is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rounded: BigInt = (hi + BigInt::from(5u64 * 10u64.pow(7))) / BigInt::from(10u64.pow(8));
    let ten8 = BigInt::from(10u64.pow(8));
    let (q, r) = rounded.div_rem(&ten8);
    let want = format!("{q}.{r:0>8}");
    let got = to_decimal(&Real::from_slope(alpha), 8)
        .map_err(|e| e.to_string())?
        .text;
    if got != want {
        return Err(format!("decimal {got}, bisection oracle {want}"));
    }
    Ok(())
}

fn c05_pi() -> Result<(), String> {
    // Brute-force oracle for the count at 100.
    let mut brute = 0i64;
    for p in -10i64..=10 {
        for q in -10i64..=10 {
            if p * p + q * q <= 100 {
                brute += 1;
            }
        }
    }
    if lattice_count(&big(100)).map_err(|e| e.to_string())? != big(brute) {
        return Err("count(100) mismatch with brute force".into());
    }
    // |count(n) - n*pi_hat| <= ceil(2 sqrt(2) sqrt(n)) + 1, exactly in
    // integers against a 15-digit rational pi.
    let pi_num: BigInt = "3141592653589793".parse().unwrap();
    let pi_den = BigInt::from(10u64.pow(15));
    for n in 1..=100_000i64 {
        let count = lattice_count(&big(n)).map_err(|e| e.to_string())?;
        let dev = (count * &pi_den - &pi_num * n).abs();
        let eight_n = big(8 * n);
        let root = eight_n.sqrt();
        let ceil_root = if &root * &root == eight_n { root } else { root + 1 };
        if dev > (ceil_root + 1) * &pi_den {
            return Err(format!("count accuracy bound violated at n = {n}"));
        }
    }
    let (stdout, code) = run_cli(&["eval", "pi", "--digits", "5"])?;
    let first = stdout.lines().next().unwrap_or("").trim();
    if code != 0 || first != "3.14159" {
        return Err(format!("eval pi --digits 5 gave {first:?} (exit {code})"));
    }
    for u in 1..=6i64 {
        let got = circle_defect(&big(5).pow(u as u32)).map_err(|e| e.to_string())?;
        if got != big(4 * u - 1) {
            return Err(format!("circle defect at 5^{u}: {got} != {}", 4 * u - 1));
        }
    }
    Ok(())
}

fn c06_e() -> Result<(), String> {
    let e = e_slope().map_err(|e| e.to_string())?;
    for (n, want) in [(1i64, 3i64), (2, 5), (10, 27)] {
        let got = e.at(n).map_err(|e| e.to_string())?;
        if got != big(want) {
            return Err(format!("e({n}) = {got}, want {want}"));
        }
    }
    let e100 = e.at(100).map_err(|e| e.to_string())?.to_f64().unwrap();
    if (e100 / 100.0 - std::f64::consts::E).abs() > 0.01 {
        return Err(format!("e(100)/100 = {} is off by > 0.01", e100 / 100.0));
    }
    for n in 1..=50u64 {
        let nb = num_bigint::BigUint::from(n);
        let k = e.at(n as i64).map_err(|e| e.to_string())?;
        let k = k.to_biguint().unwrap();
        for neighbor in [&k - 1u32, &k + 1u32] {
            if neighbor < 1u32.into() || neighbor > (4 * n).into() {
                continue;
            }
            let cmp = steiner_compare(&nb, &neighbor, &k).map_err(|e| e.to_string())?;
            if cmp == std::cmp::Ordering::Greater {
                return Err(format!("e({n}) = {k} beaten by neighbor {neighbor}"));
            }
        }
    }
    Ok(())
}

fn c07_opt_div() -> Result<(), String> {
    for p in -1000i64..=1000 {
        for q in (-50i64..=50).filter(|q| *q != 0) {
            let r = opt_div(&big(p), &big(q)).map_err(|e| e.to_string())?;
            let (pb, qb) = (big(p), big(q));
            let mid = 2 * &qb * &r;
            if !(2 * &pb - qb.abs() <= mid && mid < 2 * &pb + qb.abs()) {
                return Err(format!("optimal division inequality fails at {p}:{q}"));
            }
        }
    }
    for slope in [
        sqrt_nat(&big(2)).map_err(|e| e.to_string())?,
        quintic().map_err(|e| e.to_string())?,
    ] {
        let conc = concentrate(&slope).map_err(|e| e.to_string())?;
        let s = slope.certificate().bound.clone().max(big(1));
        for n in -200i64..=200 {
            let drift = (conc.at(n).map_err(|e| e.to_string())?
                - slope.at(n).map_err(|e| e.to_string())?)
            .abs();
            if drift > s {
                return Err(format!("concentration drift > s at n = {n}"));
            }
            for m in -200i64..=200 {
                let d = (conc.at(n + m).map_err(|e| e.to_string())?
                    - conc.at(n).map_err(|e| e.to_string())?
                    - conc.at(m).map_err(|e| e.to_string())?)
                .abs();
                if d > big(1) {
                    return Err(format!("concentrated defect > 1 at ({n}, {m})"));
                }
            }
        }
    }
    Ok(())
}

fn c08_axioms() -> Result<(), String> {
    let m = AxiomMember::new;
    let corpus = (|| -> eudoxus::Result<Vec<AxiomMember>> {
        Ok(vec![
            m("2", Real::integer(2)?).positive(),
            m("-3", Real::integer(-3)?),
            m("7/3", Real::rational(7, 3)?).positive(),
            m("sqrt(2)", Real::sqrt_nat(2)?).positive(),
            m("sqrt(3)", Real::sqrt_nat(3)?).positive(),
            m("alpha", Real::from_slope(quintic()?)).positive(),
            m("e", Real::e()?).positive(),
            m("pi", Real::pi()?).positive().heavy(),
        ])
    })()
    .map_err(|e| e.to_string())?;
    let eps = BigRational::new(big(1), BigInt::from(10u64.pow(9)));
    let reports =
        run_axiom_checks_on(&corpus, &eps, 0xACCE08, Scale::Small).map_err(|e| e.to_string())?;
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| r.failed())
        .map(|r| r.check_id.as_str())
        .collect();
    if !failed.is_empty() {
        return Err(format!("failing axiom checks: {failed:?}"));
    }
    Ok(())
}

fn c09_sup() -> Result<(), String> {
    let one = Real::integer(1).map_err(|e| e.to_string())?;
    let three_halves = Real::rational(3, 2).map_err(|e| e.to_string())?;
    let rho = Real::sqrt_nat(2).map_err(|e| e.to_string())?;
    let members = [one, three_halves.clone(), rho];
    let sup = sup_finite(&members).map_err(|e| e.to_string())?;
    let worst = max_defect(sup.raw(), 2000, 100_000, 0xACCE09)?;
    if worst > big(4) {
        return Err(format!("sup defect {worst} > 4"));
    }
    let eps = BigRational::new(big(1), BigInt::from(10u64.pow(9)));
    match compare_within(&sup, &three_halves, &eps).map_err(|e| e.to_string())? {
        ComparisonOutcome::Indistinguishable(_) => {}
        other => return Err(format!("sup vs 3/2: {other:?}")),
    }
    // Leastness evidence: the sup slope never exceeds the pointwise max
    // of the members' normal forms.
    let normals: Vec<_> = members
        .iter()
        .map(|x| x.normal())
        .collect::<eudoxus::Result<_>>()
        .map_err(|e| e.to_string())?;
    for k in 1..=1000i64 {
        let max_member = normals
            .iter()
            .map(|s| s.at(k))
            .collect::<eudoxus::Result<Vec<_>>>()
            .map_err(|e| e.to_string())?
            .into_iter()
            .max()
            .unwrap();
        if sup.raw().at(k).map_err(|e| e.to_string())? > max_member {
            return Err(format!("sup exceeds every member at index {k}"));
        }
    }
    Ok(())
}

fn c10_iterate() -> Result<(), String> {
    let alpha = quintic().map_err(|e| e.to_string())?;
    let cert = alpha.certificate();
    let base: BigInt = 1 + cert.value_at_one.abs() + &cert.bound;
    for e in 2u32..=5 {
        let mut chain = alpha.clone();
        for _ in 1..e {
            chain = multiply(&chain, &alpha).map_err(|x| x.to_string())?;
        }
        let coeff = base.pow(e - 1);
        for n in 1..=200i64 {
            let n_big = big(n);
            let scaled_chain = chain.at(n).map_err(|x| x.to_string())? * n_big.pow(e - 1);
            let direct = alpha.at(n).map_err(|x| x.to_string())?.pow(e);
            if (scaled_chain - direct).abs() > &coeff * n_big.pow(e - 1) {
                return Err(format!("iterate estimate fails at e = {e}, n = {n}"));
            }
        }
    }
    Ok(())
}

fn c11_cli() -> Result<(), String> {
    let golden = [
        vec!["eval", "sqrt(2)", "--digits", "6", "--json"],
        vec!["eval", "2/3 + 1/6", "--json"],
        vec!["eval", "polyroot(-3, 1, 0, 0, 0, 1; 1, 2)", "--digits", "8", "--json"],
    ];
    for args in &golden {
        let (stdout, code) = run_cli(args)?;
        if code != 0 {
            return Err(format!("{args:?} exited {code}"));
        }
        let v: serde_json::Value = serde_json::from_str(stdout.trim())
            .map_err(|e| format!("{args:?}: invalid JSON: {e}"))?;
        for field in ["expr", "decimal", "error_bound", "index_used"] {
            if !v[field].is_string() {
                return Err(format!("{args:?}: missing string field {field}"));
            }
        }
        if !v["wall_ms"].is_u64() {
            return Err(format!("{args:?}: missing numeric wall_ms"));
        }
        for field in ["bound", "value_at_one", "class"] {
            if !v["certificate"][field].is_string() {
                return Err(format!("{args:?}: missing certificate.{field}"));
            }
        }
        let class = v["certificate"]["class"].as_str().unwrap();
        if class != "proven" && class != "empirical" {
            return Err(format!("{args:?}: bad class {class:?}"));
        }
        if !v["error_bound"].as_str().unwrap().contains('/') {
            return Err(format!("{args:?}: error_bound is not an exact rational"));
        }
    }
    let status = bin()
        .args(["verify", "--scale", "small", "--seed", "7"])
        .output()
        .map_err(|e| format!("spawn failed: {e}"))?;
    if status.status.code() != Some(0) {
        return Err(format!("verify --scale small exited {:?}", status.status.code()));
    }
    Ok(())
}
