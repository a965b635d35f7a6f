//! Quantitative bound checks: every inequality the library's
//! certificates rely on, re-verified against independent computation.

use super::report::{report, CheckReport};
use super::Scale;
use crate::arith::{int_power, inverse, multiply, negate, add};
use crate::constructors::{
    circle_defect, e_slope, from_rational, lattice_count, pi_slope, quintic, sqrt_nat,
    steiner_argmax, steiner_compare,
};
use crate::real::{sup_finite, Real};
use crate::slope::{concentrate, defect_sample, opt_div, opt_div_i128, Slope};
use crate::Result;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;
use std::cmp::Ordering;

/// Check ids this suite must produce; the coverage meta-check enforces it.
pub const REQUIRED: &[&str] = &[
    "bounds/known-values",
    "bounds/rho-defect-bound",
    "bounds/rho-envelope",
    "bounds/quintic-defect-bound",
    "bounds/quintic-residual",
    "bounds/circle-defect-formula",
    "bounds/pi-count-accuracy",
    "bounds/opt-div-inequality",
    "bounds/concentration-defect-exhaustive",
    "bounds/concentration-well-adjusted",
    "bounds/growth-estimate",
    "bounds/commutativity-estimate",
    "bounds/propagation-trees",
    "bounds/iterate-estimate",
    "bounds/inverse-contract",
    "bounds/sup-defect",
    "bounds/e-local-max",
    "bounds/rational-consistency",
];

pub fn run_bound_checks(seed: u64, scale: Scale) -> Result<Vec<CheckReport>> {
    let mut out: Vec<CheckReport> = Vec::new();
    out.push(known_values()?);
    out.push(rho_defect_bound(seed)?);
    out.push(rho_envelope(scale)?);
    out.push(quintic_defect_bound(seed)?);
    out.push(quintic_residual(scale)?);
    out.push(circle_defect_formula(scale)?);
    out.push(pi_count_accuracy(seed, scale)?);
    out.push(opt_div_inequality()?);
    out.push(concentration_defect_exhaustive(scale));
    out.push(concentration_well_adjusted(seed)?);
    out.push(growth_estimate(seed)?);
    out.push(commutativity_estimate(seed)?);
    out.push(propagation_trees(seed, scale)?);
    out.push(iterate_estimate(scale)?);
    out.push(inverse_contract(seed)?);
    out.push(sup_defect(seed)?);
    out.push(e_local_max(scale)?);
    out.push(rational_consistency(seed)?);
    Ok(out)
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn known_values() -> Result<CheckReport> {
    let rho = sqrt_nat(&big(2))?;
    let alpha = quintic()?;
    let pi = pi_slope()?;
    let e = e_slope()?;
    let cases: Vec<(&str, BigInt, BigInt)> = vec![
        ("rho(1)", rho.at(1)?, big(2)),
        ("rho(5)", rho.at(5)?, big(8)),
        ("rho(10^6)", rho.evaluate(&big(1_000_000))?, big(1_414_214)),
        ("alpha(1)", alpha.at(1)?, big(2)),
        ("alpha(10)", alpha.at(10)?, big(12)),
        ("alpha(100)", alpha.at(100)?, big(114)),
        ("pi(10)", pi.at(10)?, big(31)),
        ("pi(100)", pi.at(100)?, big(314)),
        ("e(1)", e.at(1)?, big(3)),
        ("e(2)", e.at(2)?, big(5)),
        ("e(10)", e.at(10)?, big(27)),
        ("count(100)", lattice_count(&big(100))?, big(317)),
        ("count(10^4)", lattice_count(&big(10_000))?, big(31417)),
    ];
    let failure = cases
        .iter()
        .find(|(_, got, want)| got != want)
        .map(|(what, got, want)| json!({"value": what, "got": got.to_string(), "want": want.to_string()}));
    Ok(report(
        "bounds/known-values",
        "canonical slopes take their published values at spot-check indices",
        json!({"cases": cases.len()}),
        failure,
        json!({"cases": cases.len()}),
    ))
}

fn sampled_defect_check(
    id: &str,
    claim: &str,
    slope: &Slope,
    bound: &BigInt,
    seed: u64,
    pairs: usize,
    max: i64,
) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = big(0);
    let mut failure = None;
    for _ in 0..pairs {
        let n = big(rng.gen_range(-max..=max));
        let m = big(rng.gen_range(-max..=max));
        let d = (slope.evaluate(&(&n + &m))? - slope.evaluate(&n)? - slope.evaluate(&m)?).abs();
        if d > *bound && failure.is_none() {
            failure = Some(json!({"n": n.to_string(), "m": m.to_string(), "defect": d.to_string()}));
        }
        worst = worst.max(d);
    }
    Ok(report(
        id,
        claim,
        json!({"bound": bound.to_string(), "pairs": pairs, "index_magnitude": max}),
        failure,
        json!({"max_observed_defect": worst.to_string()}),
    ))
}

fn rho_defect_bound(seed: u64) -> Result<CheckReport> {
    let rho = sqrt_nat(&big(2))?;
    sampled_defect_check(
        "bounds/rho-defect-bound",
        "|rho(n+m) - rho(n) - rho(m)| <= 8 for the sqrt(2) slope",
        &rho,
        &big(8),
        seed,
        2000,
        1_000_000,
    )
}

fn rho_envelope(scale: Scale) -> Result<CheckReport> {
    let rho = sqrt_nat(&big(2))?;
    let limit = match scale {
        Scale::Small => 2_000i64,
        Scale::Full => 20_000,
    };
    let mut failure = None;
    for n in 1..=limit {
        let v = rho.at(n)?;
        let n_big = big(n);
        let ok = n_big <= v
            && v <= 2 * &n_big
            && 2 * &n_big * &n_big <= &v * &v
            && (&v - 1) * (&v - 1) < 2 * &n_big * &n_big;
        if !ok {
            failure = Some(json!({"n": n, "rho": v.to_string()}));
            break;
        }
    }
    Ok(report(
        "bounds/rho-envelope",
        "n <= rho(n) <= 2n and rho(n) is the least k with k^2 >= 2n^2",
        json!({"max_index": limit}),
        failure,
        json!({"indices_checked": limit}),
    ))
}

fn quintic_defect_bound(seed: u64) -> Result<CheckReport> {
    let alpha = quintic()?;
    sampled_defect_check(
        "bounds/quintic-defect-bound",
        "|alpha(n+m) - alpha(n) - alpha(m)| <= 3 for the quintic-root slope",
        &alpha,
        &big(3),
        seed ^ 0xA1FA,
        800,
        100_000,
    )
}

fn quintic_residual(scale: Scale) -> Result<CheckReport> {
    // Q(k, n) = k^5 + k n^4 - 3 n^5. The selected k is the least sign
    // change, so 0 <= Q(k, n) with Q(k-1, n) < 0, and near the root the
    // step size keeps n*P(alpha(n)/n) = Q(k, n)/n^4 below 50.
    let alpha = quintic()?;
    let limit = match scale {
        Scale::Small => 500i64,
        Scale::Full => 5_000,
    };
    let q = |k: &BigInt, n: &BigInt| -> BigInt {
        k.pow(5) + k * n.pow(4) - 3 * n.pow(5)
    };
    let mut failure = None;
    for n in 1..=limit {
        let n_big = big(n);
        let k = alpha.at(n)?;
        let at_k = q(&k, &n_big);
        let below = q(&(&k - 1), &n_big);
        if !(at_k.is_positive() || at_k.is_zero())
            || at_k > 50 * n_big.pow(4)
            || !below.is_negative()
        {
            failure = Some(json!({
                "n": n,
                "k": k.to_string(),
                "Q(k,n)": at_k.to_string(),
                "Q(k-1,n)": below.to_string(),
            }));
            break;
        }
    }
    Ok(report(
        "bounds/quintic-residual",
        "Q(alpha(n)-1, n) < 0 <= Q(alpha(n), n) <= 50 n^4 for Q(k,n) = k^5 + k n^4 - 3 n^5",
        json!({"max_index": limit}),
        failure,
        json!({"indices_checked": limit}),
    ))
}

fn circle_defect_formula(scale: Scale) -> Result<CheckReport> {
    let max_u = match scale {
        Scale::Small => 4u32,
        Scale::Full => 6,
    };
    let mut failure = None;
    for u in 1..=max_u {
        let n = big(5).pow(u);
        let got = circle_defect(&n)?;
        let want = big(4 * u as i64 - 1);
        if got != want {
            failure = Some(json!({"u": u, "got": got.to_string(), "want": want.to_string()}));
            break;
        }
    }
    Ok(report(
        "bounds/circle-defect-formula",
        "count(5^u) - count(5^u - 1) - count(1) = 4u - 1: the raw lattice count has unbounded defect",
        json!({"max_u": max_u}),
        failure,
        json!({"exponents_checked": max_u}),
    ))
}

fn pi_count_accuracy(seed: u64, scale: Scale) -> Result<CheckReport> {
    let max = match scale {
        Scale::Small => 1_000_000i64,
        Scale::Full => 100_000_000,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x314159);
    let mut targets: Vec<i64> = (1..=100).collect();
    for _ in 0..40 {
        targets.push(rng.gen_range(100..=max));
    }
    let mut failure = None;
    for m in targets.iter() {
        let count = lattice_count(&big(*m))?
            .to_f64()
            .expect("counts fit in f64");
        let diff = (count - std::f64::consts::PI * *m as f64).abs();
        let allowed = 2.0 * std::f64::consts::SQRT_2 * (*m as f64).sqrt() + 1.0 + 1e-6;
        if diff > allowed {
            failure = Some(json!({"m": m, "deviation": diff, "allowed": allowed}));
            break;
        }
    }
    Ok(report(
        "bounds/pi-count-accuracy",
        "|count(m) - pi*m| <= 2*sqrt(2)*sqrt(m) + 1: the annulus bound on the lattice count",
        json!({"targets": targets.len(), "max_m": max}),
        failure,
        json!({"targets_checked": targets.len()}),
    ))
}

fn opt_div_inequality() -> Result<CheckReport> {
    let mut failure = None;
    'outer: for p in -1000i64..=1000 {
        for q in (-50i64..=50).filter(|q| *q != 0) {
            let r = opt_div(&big(p), &big(q))?;
            let (pb, qb) = (big(p), big(q));
            let mid = 2 * &qb * &r;
            if !(2 * &pb - qb.abs() <= mid && mid < 2 * &pb + qb.abs()) {
                failure = Some(json!({"p": p, "q": q, "r": r.to_string()}));
                break 'outer;
            }
            if BigInt::from(opt_div_i128(p as i128, q as i128)) != r {
                failure = Some(json!({"p": p, "q": q, "mismatch": "machine vs bigint"}));
                break 'outer;
            }
        }
    }
    Ok(report(
        "bounds/opt-div-inequality",
        "2p - |q| <= 2q*optdiv(p,q) < 2p + |q| for all |p| <= 1000, 1 <= |q| <= 50",
        json!({"p_range": 1000, "q_range": 50}),
        failure,
        json!({"pairs_checked": 2001 * 100}),
    ))
}

fn concentration_defect_exhaustive(scale: Scale) -> CheckReport {
    // Core of the concentration argument: if x + y = z + d with
    // |d| <= s, the rounded values at denominator 3s differ from their
    // sum by at most 1.
    let (s_max, n_max) = match scale {
        Scale::Small => (8i128, 240i128),
        Scale::Full => (20, 2000),
    };
    let failure = (1..=s_max)
        .into_par_iter()
        .flat_map(|s| {
            let d3 = 3 * s;
            (-n_max..=n_max).into_par_iter().filter_map(move |x| {
                for y in -n_max..=n_max {
                    let ox = opt_div_i128(x, d3);
                    let oy = opt_div_i128(y, d3);
                    for d in [-s, 0, s] {
                        let oz = opt_div_i128(x + y + d, d3);
                        if (oz - ox - oy).abs() > 1 {
                            return Some(json!({"s": s as i64, "x": x as i64, "y": y as i64, "d": d as i64}));
                        }
                    }
                }
                None
            })
        })
        .find_any(|_| true);
    report(
        "bounds/concentration-defect-exhaustive",
        "|optdiv(x+y+d, 3s) - optdiv(x, 3s) - optdiv(y, 3s)| <= 1 whenever |d| <= s",
        json!({"s_max": s_max as i64, "magnitude": n_max as i64}),
        failure,
        json!({"triples_checked": (s_max as i64) * (2 * n_max as i64 + 1).pow(2) * 3}),
    )
}

fn corpus() -> Result<Vec<(String, Slope)>> {
    Ok(vec![
        ("rho".into(), sqrt_nat(&big(2))?),
        ("alpha".into(), quintic()?),
        ("5/3".into(), from_rational(&big(5), &big(3))?),
        ("-7/4".into(), from_rational(&big(-7), &big(4))?),
    ])
}

fn concentration_well_adjusted(seed: u64) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC0CE);
    let mut failure = None;
    'outer: for (name, slope) in corpus()? {
        let conc = concentrate(&slope)?;
        let s = slope.certificate().bound.clone().max(big(1));
        if conc.at(0)? != big(0) {
            failure = Some(json!({"slope": name, "property": "zero at zero"}));
            break;
        }
        for _ in 0..300 {
            let n = big(rng.gen_range(-100_000i64..=100_000));
            let m = big(rng.gen_range(-100_000i64..=100_000));
            let defect =
                (conc.evaluate(&(&n + &m))? - conc.evaluate(&n)? - conc.evaluate(&m)?).abs();
            let drift = (conc.evaluate(&n)? - slope.evaluate(&n)?).abs();
            let odd = conc.evaluate(&-&n)? == -conc.evaluate(&n)?;
            if defect > big(1) || drift > s || !odd {
                failure = Some(json!({
                    "slope": name,
                    "n": n.to_string(),
                    "m": m.to_string(),
                    "defect": defect.to_string(),
                    "drift": drift.to_string(),
                }));
                break 'outer;
            }
        }
    }
    Ok(report(
        "bounds/concentration-well-adjusted",
        "concentrated slopes are odd, vanish at 0, have defect <= 1, and stay within max(S,1) of the original",
        json!({"samples_per_slope": 300}),
        failure,
        json!({"slopes": 4}),
    ))
}

fn growth_estimate(seed: u64) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6706);
    let mut failure = None;
    'outer: for (name, slope) in corpus()? {
        let cert = slope.certificate();
        let coeff = cert.value_at_one.abs() + &cert.bound;
        for _ in 0..400 {
            let n = big(rng.gen_range(-1_000_000i64..=1_000_000));
            if slope.evaluate(&n)?.abs() > &coeff * n.abs() {
                failure = Some(json!({"slope": name, "n": n.to_string()}));
                break 'outer;
            }
        }
    }
    Ok(report(
        "bounds/growth-estimate",
        "|f(n)| <= (|f(1)| + S) * |n| for every certified slope",
        json!({"samples_per_slope": 400}),
        failure,
        json!({"slopes": 4}),
    ))
}

fn commutativity_estimate(seed: u64) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC033);
    let slopes = corpus()?;
    let mut failure = None;
    'outer: for (na, a) in &slopes {
        for (nb, b) in &slopes {
            let ab = multiply(a, b)?;
            let ba = multiply(b, a)?;
            let (ca, cb) = (a.certificate(), b.certificate());
            let allowed = &ca.bound * (1 + cb.value_at_one.abs() + &cb.bound)
                + &cb.bound * (1 + ca.value_at_one.abs() + &ca.bound);
            for _ in 0..60 {
                let n = big(rng.gen_range(1..=10_000i64));
                let gap = (ab.evaluate(&n)? - ba.evaluate(&n)?).abs();
                if gap > allowed {
                    failure = Some(json!({
                        "a": na, "b": nb, "n": n.to_string(),
                        "gap": gap.to_string(), "allowed": allowed.to_string(),
                    }));
                    break 'outer;
                }
            }
        }
    }
    Ok(report(
        "bounds/commutativity-estimate",
        "|(a.b)(n) - (b.a)(n)| <= S_a(1 + |b(1)| + S_b) + S_b(1 + |a(1)| + S_a)",
        json!({"pairs": 16, "samples_per_pair": 60}),
        failure,
        json!({"pairs": 16}),
    ))
}

fn propagation_trees(seed: u64, scale: Scale) -> Result<CheckReport> {
    let trees = match scale {
        Scale::Small => 10usize,
        Scale::Full => 40,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x73EE);
    let leaves = corpus()?;
    let mut failure = None;
    for t in 0..trees {
        // A random binary tree of depth <= 4 over add/negate/multiply.
        fn build(
            rng: &mut ChaCha8Rng,
            leaves: &[(String, Slope)],
            depth: usize,
        ) -> Result<Slope> {
            if depth == 0 || rng.gen_bool(0.3) {
                return Ok(leaves[rng.gen_range(0..leaves.len())].1.clone());
            }
            match rng.gen_range(0..3) {
                0 => add(&build(rng, leaves, depth - 1)?, &build(rng, leaves, depth - 1)?),
                1 => negate(&build(rng, leaves, depth - 1)?),
                _ => multiply(&build(rng, leaves, depth - 1)?, &build(rng, leaves, depth - 1)?),
            }
        }
        let tree = build(&mut rng, &leaves, 4)?;
        let mut pairs = Vec::new();
        for _ in 0..40 {
            pairs.push((
                big(rng.gen_range(-2000i64..=2000)),
                big(rng.gen_range(-2000i64..=2000)),
            ));
        }
        let observed = defect_sample(&tree, &pairs)?;
        if observed > tree.certificate().bound {
            failure = Some(json!({
                "tree": t,
                "label": tree.label(),
                "observed": observed.to_string(),
                "bound": tree.certificate().bound.to_string(),
            }));
            break;
        }
    }
    Ok(report(
        "bounds/propagation-trees",
        "sampled defect of random add/negate/multiply trees never exceeds the propagated bound",
        json!({"trees": trees, "depth": 4, "pairs_per_tree": 40}),
        failure,
        json!({"trees": trees}),
    ))
}

fn iterate_estimate(scale: Scale) -> Result<CheckReport> {
    let n_max = match scale {
        Scale::Small => 200i64,
        Scale::Full => 1000,
    };
    let mut failure = None;
    'outer: for (name, a) in corpus()? {
        let cert = a.certificate();
        let base: BigInt = 1 + cert.value_at_one.abs() + &cert.bound;
        for e in 2u32..=5 {
            let powered = int_power(&a, e)?;
            let mut chain = a.clone();
            for _ in 1..e {
                chain = multiply(&chain, &a)?;
            }
            let allowed: BigInt = 3 * (base.pow(e - 1) + 1);
            for n in 1..=n_max {
                let gap = (powered.at(n)? - chain.at(n)?).abs();
                if gap > allowed {
                    failure = Some(json!({
                        "slope": name, "e": e, "n": n,
                        "gap": gap.to_string(), "allowed": allowed.to_string(),
                    }));
                    break 'outer;
                }
            }
        }
    }
    Ok(report(
        "bounds/iterate-estimate",
        "|floor(a(n)^e / n^(e-1)) - a^(e)(n)| <= 3((1 + |a(1)| + S)^(e-1) + 1) against the composition chain",
        json!({"max_exponent": 5, "max_index": n_max}),
        failure,
        json!({"slopes": 4}),
    ))
}

fn inverse_contract(seed: u64) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1117);
    let mut failure = None;
    'outer: for (name, slope) in corpus()? {
        let conc = concentrate(&slope)?;
        let beta = inverse(&conc)?;
        let gap = conc.certificate().value_at_one.abs() + 1;
        let defect_allowed = 3 * conc.certificate().value_at_one.abs() + 5;
        for _ in 0..60 {
            let v = big(rng.gen_range(1..=100_000i64));
            let n_v = beta.evaluate(&v)?;
            if (&v - conc.evaluate(&n_v)?).abs() > gap {
                failure = Some(json!({"slope": name, "v": v.to_string(), "property": "value gap"}));
                break 'outer;
            }
        }
        for _ in 0..40 {
            let n = big(rng.gen_range(-3000i64..=3000));
            let m = big(rng.gen_range(-3000i64..=3000));
            let d =
                (beta.evaluate(&(&n + &m))? - beta.evaluate(&n)? - beta.evaluate(&m)?).abs();
            if d > defect_allowed {
                failure = Some(json!({
                    "slope": name, "n": n.to_string(), "m": m.to_string(),
                    "defect": d.to_string(), "allowed": defect_allowed.to_string(),
                }));
                break 'outer;
            }
        }
    }
    Ok(report(
        "bounds/inverse-contract",
        "|v - a(beta(v))| <= |a(1)| + 1 and the inverse slope's defect stays within 3|a(1)| + 5",
        json!({"value_samples": 60, "defect_samples": 40}),
        failure,
        json!({"slopes": 4}),
    ))
}

fn sup_defect(seed: u64) -> Result<CheckReport> {
    let one = Real::integer(1)?;
    let half = Real::rational(1, 2)?;
    let rho = Real::sqrt_nat(2)?;
    let sup = sup_finite(&[one, half, rho])?;
    sampled_defect_check(
        "bounds/sup-defect",
        "the pointwise max of well-adjusted slopes, odd-extended, has defect <= 4",
        sup.raw(),
        &big(4),
        seed ^ 0x50B,
        600,
        100_000,
    )
}

fn e_local_max(scale: Scale) -> Result<CheckReport> {
    let n_max = match scale {
        Scale::Small => 40u64,
        Scale::Full => 60,
    };
    let mut failure = None;
    'outer: for n in 1..=n_max {
        let nb = num_bigint::BigUint::from(n);
        let best = steiner_argmax(&nb)?;
        for k in 1..=4 * n {
            let kb = num_bigint::BigUint::from(k);
            if steiner_compare(&nb, &kb, &best)? == Ordering::Greater {
                failure = Some(json!({"n": n, "argmax": best.to_string(), "beaten_by": k}));
                break 'outer;
            }
        }
    }
    Ok(report(
        "bounds/e-local-max",
        "e(n) maximizes (k/n)^(n/k) over the whole window 1 <= k <= 4n, by exact comparison",
        json!({"max_index": n_max}),
        failure,
        json!({"indices_checked": n_max}),
    ))
}

fn rational_consistency(seed: u64) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7A7);
    let mut failure = None;
    'outer: for _ in 0..40 {
        let p1 = big(rng.gen_range(-20i64..=20));
        let q1 = big(rng.gen_range(1..=12i64));
        let p2 = big(rng.gen_range(-20i64..=20));
        let q2 = big(rng.gen_range(1..=12i64));
        let a = from_rational(&p1, &q1)?;
        let b = from_rational(&p2, &q2)?;
        let sum = add(&a, &b)?;
        let direct = from_rational(&(&p1 * &q2 + &p2 * &q1), &(&q1 * &q2))?;
        for n in 1..=500i64 {
            // Pointwise: f_{p/q}(n) is within 1 of pn/q, so the two
            // routes differ by less than 3.
            let gap = (sum.at(n)? - direct.at(n)?).abs();
            if gap > big(3) {
                failure = Some(json!({
                    "p1/q1": format!("{p1}/{q1}"), "p2/q2": format!("{p2}/{q2}"),
                    "n": n, "gap": gap.to_string(),
                }));
                break 'outer;
            }
            let v = from_rational(&p1, &q1)?.at(n)?;
            let scaled = &v * &q1 - &p1 * big(n);
            if scaled.is_negative() || scaled >= q1 {
                failure = Some(json!({"p/q": format!("{p1}/{q1}"), "n": n, "property": "ceiling"}));
                break 'outer;
            }
        }
    }
    Ok(report(
        "bounds/rational-consistency",
        "f_{p/q}(n) = ceil(pn/q), and literal-sum vs common-denominator routes agree within 3 pointwise",
        json!({"random_pairs": 40, "max_index": 500}),
        failure,
        json!({"random_pairs": 40}),
    ))
}
