//! Concrete slopes: integers, rationals, integer roots, monotone
//! polynomial roots, pi from lattice-point counts, and e from exact
//! Steiner maximization.

use crate::dyadic::pow_product_interval;
use crate::error::Error;
use crate::slope::{odd_extend, CertClass, SampleGrid, Slope};
use crate::Result;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use std::cmp::Ordering;

/// Floor of the square root, exact for arbitrary-precision input.
pub fn isqrt(m: &BigInt) -> Result<BigInt> {
    if m.is_negative() {
        return Err(Error::NegativeSqrt);
    }
    if let Some(small) = m.to_u64() {
        return Ok(BigInt::from(isqrt_u64(small)));
    }
    Ok(m.sqrt())
}

/// Machine-word square root used on the hot lattice-counting path.
pub fn isqrt_u64(m: u64) -> u64 {
    if m == 0 {
        return 0;
    }
    let mut r = (m as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |s| s > m) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).map_or(false, |s| s <= m) {
        r += 1;
    }
    r
}

/// The exactly linear slope `n -> n*j` representing the integer `j`.
pub fn from_integer(j: &BigInt) -> Result<Slope> {
    let j = j.clone();
    odd_extend(format!("int({j})"), move |n| Ok(n * &j)).certified(0, CertClass::Proven)
}

/// The slope `n -> ceil(p*n/q)` representing the rational `p/q`, `q > 0`.
///
/// For `p >= 0` this matches the minimal-k formula `min{k : qk >= pn}`;
/// the ceiling form also odd-extends correctly for negative `p`.
pub fn from_rational(p: &BigInt, q: &BigInt) -> Result<Slope> {
    if !q.is_positive() {
        return Err(Error::NonpositiveDenominator(q.clone()));
    }
    let (p, q) = (p.clone(), q.clone());
    odd_extend(format!("rational({p}/{q})"), move |n| {
        Ok((&p * n).div_ceil(&q))
    })
    .certified(2, CertClass::Proven)
}

/// The slope `n -> min{k >= 0 : m*n^2 <= k^2}` representing `sqrt(m)`.
///
/// The defect bound 8 is analytic for `m = 2`; other radicands get a
/// sampled empirical bound.
pub fn sqrt_nat(m: &BigInt) -> Result<Slope> {
    if !m.is_positive() {
        return Err(Error::Invalid(format!(
            "sqrt_nat requires a positive radicand, got {m}"
        )));
    }
    let radicand = m.clone();
    let map = odd_extend(format!("sqrt({m})"), move |n| {
        let target = &radicand * n * n;
        let mut k = isqrt(&target)?;
        if &k * &k < target {
            k += 1;
        }
        Ok(k)
    });
    if *m == BigInt::from(2) {
        map.certified(8, CertClass::Proven)
    } else {
        map.empirical(&SampleGrid::default_grid())
    }
}

/// An integer polynomial `P(x) = sum c_i x^i` together with a bracket
/// `[lo, hi]` on which it is strictly increasing and changes sign.
///
/// `Q(k, n) = sum c_i k^i n^(d-i) = n^d P(k/n)` evaluates `P` at the
/// rational `k/n` exactly in integers.
#[derive(Debug, Clone)]
pub struct HomogenizedPolynomial {
    coefficients: Vec<BigInt>,
    bracket: (BigInt, BigInt),
}

impl HomogenizedPolynomial {
    pub fn new(coefficients: Vec<BigInt>, lo: BigInt, hi: BigInt) -> Result<Self> {
        if coefficients.len() < 2 || coefficients.last().map_or(true, |c| c.is_zero()) {
            return Err(Error::InvalidBracket(
                "polynomial must have degree at least 1".into(),
            ));
        }
        if lo.is_negative() || lo >= hi {
            return Err(Error::InvalidBracket(format!(
                "bracket must satisfy 0 <= lo < hi, got ({lo}, {hi})"
            )));
        }
        let poly = HomogenizedPolynomial {
            coefficients,
            bracket: (lo, hi),
        };
        let at_lo = poly.q_eval(&poly.bracket.0, &BigInt::one());
        let at_hi = poly.q_eval(&poly.bracket.1, &BigInt::one());
        if !at_lo.is_negative() || !at_hi.is_positive() {
            return Err(Error::InvalidBracket(format!(
                "need P(lo) < 0 < P(hi), got P({}) = {at_lo}, P({}) = {at_hi}",
                poly.bracket.0, poly.bracket.1
            )));
        }
        poly.check_monotone()?;
        Ok(poly)
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn bracket(&self) -> (&BigInt, &BigInt) {
        (&self.bracket.0, &self.bracket.1)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    /// `Q(k, n) = n^d * P(k/n)`, exact in integers.
    pub fn q_eval(&self, k: &BigInt, n: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let d = self.degree();
        let mut n_pow = BigInt::one();
        let mut k_pows = Vec::with_capacity(d + 1);
        let mut k_pow = BigInt::one();
        for _ in 0..=d {
            k_pows.push(k_pow.clone());
            k_pow *= k;
        }
        for i in (0..=d).rev() {
            acc += &self.coefficients[i] * &k_pows[i] * &n_pow;
            n_pow *= n;
        }
        acc
    }

    fn check_monotone(&self) -> Result<()> {
        // Nonnegative derivative coefficients give monotonicity on
        // [0, inf) outright; otherwise fall back to sampling Q steps.
        let derivative_nonneg = self.coefficients.iter().skip(1).all(|c| !c.is_negative());
        if derivative_nonneg {
            return Ok(());
        }
        let (lo, hi) = (&self.bracket.0, &self.bracket.1);
        for n in [1i64, 7, 64, 1000].map(BigInt::from) {
            let start = lo * &n;
            let end = hi * &n;
            let span = &end - &start;
            let step = (&span / BigInt::from(64)).max(BigInt::one());
            let mut k = start;
            while k < end {
                let next = (&k + &step).min(end.clone());
                if self.q_eval(&next, &n) <= self.q_eval(&k, &n) {
                    return Err(Error::NonMonotone(format!(
                        "Q({next}, {n}) <= Q({k}, {n})"
                    )));
                }
                k = next;
            }
        }
        Ok(())
    }
}

/// The slope `n -> min{k in [lo*n, hi*n] : Q(k, n) >= 0}` representing
/// the bracketed root of `P`, found by binary search on `k`.
pub fn poly_root(p: &HomogenizedPolynomial) -> Result<Slope> {
    let poly = p.clone();
    odd_extend(
        format!(
            "polyroot({:?}; {}, {})",
            p.coefficients(),
            p.bracket().0,
            p.bracket().1
        ),
        move |n| {
            let mut lo = &poly.bracket.0 * n;
            let mut hi = &poly.bracket.1 * n;
            // Invariant: Q(lo, n) < 0 <= Q(hi, n).
            debug_assert!(poly.q_eval(&lo, n).is_negative());
            while &hi - &lo > BigInt::one() {
                let mid = (&lo + &hi) / 2;
                if poly.q_eval(&mid, n).is_negative() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(hi)
        },
    )
    .certified(3, CertClass::Proven)
}

/// The reference quintic `x^5 + x - 3`, bracketed in (1, 2).
pub fn quintic() -> Result<Slope> {
    let poly = HomogenizedPolynomial::new(
        vec![
            BigInt::from(-3),
            BigInt::one(),
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
            BigInt::one(),
        ],
        BigInt::one(),
        BigInt::from(2),
    )?;
    poly_root(&poly)
}

/// Row budget for a single lattice count: counts with more rows than
/// this return a resource error instead of running for hours.
const LATTICE_ROW_BUDGET: u64 = 4_000_000_000;

/// Number of integer points (p, q) with p^2 + q^2 <= m, exact.
pub fn lattice_count(m: &BigInt) -> Result<BigInt> {
    if m.is_negative() {
        return Ok(BigInt::zero());
    }
    if let Some(small) = m.to_u64() {
        return Ok(BigInt::from(lattice_count_u64(small)));
    }
    let r = isqrt(m)?;
    if r > BigInt::from(LATTICE_ROW_BUDGET) {
        return Err(Error::ResourceExhausted(format!(
            "lattice count at radius^2 = {m} needs {r} rows"
        )));
    }
    let mut total = 2 * isqrt(m)? + 1;
    let mut p = BigInt::one();
    while &p * &p <= *m {
        let rest = m - &p * &p;
        total += 2 * (2 * isqrt(&rest)? + 1);
        p += 1;
    }
    Ok(total)
}

fn lattice_count_u64(m: u64) -> u128 {
    let r = isqrt_u64(m);
    let axis = 2u128 * isqrt_u64(m) as u128 + 1;
    let body: u128 = if r >= 1 << 16 {
        (1..=r)
            .into_par_iter()
            .map(|p| 2 * isqrt_u64(m - p * p) as u128 + 1)
            .sum()
    } else {
        (1..=r).map(|p| 2 * isqrt_u64(m - p * p) as u128 + 1).sum()
    };
    axis + 2 * body
}

/// `s(n) = count(n) - count(n-1) - count(1)`: the unbounded defect of
/// the raw lattice count, showing it is not itself a slope.
pub fn circle_defect(n: &BigInt) -> Result<BigInt> {
    if !n.is_positive() {
        return Err(Error::Invalid(format!("circle_defect requires n >= 1, got {n}")));
    }
    Ok(lattice_count(n)? - lattice_count(&(n - 1))? - lattice_count(&BigInt::one())?)
}

/// The slope `n -> floor(count(n^2) / n)` representing pi.
///
/// The geometric bound `|count(n) - n*pi| <= 2*sqrt(2)*sqrt(n)` gives
/// `|f(n) - pi*n| <= 2*sqrt(2) + 1` per term, hence defect below 12;
/// the class stays empirical because the bound is derived, not sampled
/// nor packaged as a constructor proof.
pub fn pi_slope() -> Result<Slope> {
    odd_extend("pi", move |n| {
        let count = lattice_count(&(n * n))?;
        Ok(count.div_floor(n))
    })
    .certified(12, CertClass::Empirical)
}

// e = 2.71828182845904523536028747135... as a 29-digit rational, used
// only to center the candidate window; correctness never depends on it.
const E_DIGITS: &str = "271828182845904523536028747135";
const E_SCALE: u32 = 29;

/// Exact comparison of f(k1) against f(k2) where f(k) = (k/n)^(n/k).
///
/// Reduces to comparing k1^k2 * n^k1 with k2^k1 * n^k2. Small operands
/// are compared as literal big integers; large ones through dyadic
/// interval brackets at escalating precision, with an exact coprime
/// factor-basis test deciding genuine ties.
pub fn steiner_compare(n: &BigUint, k1: &BigUint, k2: &BigUint) -> Result<Ordering> {
    if k1 == k2 {
        return Ok(Ordering::Equal);
    }
    let e1 = k2.to_u64().ok_or_else(|| too_big(k2))?;
    let e2 = k1.to_u64().ok_or_else(|| too_big(k1))?;
    // bits(A) ~ k2*log2(k1) + k1*log2(n)
    let bits_a = e1 as u128 * k1.bits() as u128 + e2 as u128 * n.bits() as u128;
    let bits_b = e2 as u128 * k2.bits() as u128 + e1 as u128 * n.bits() as u128;
    if bits_a.max(bits_b) <= 1 << 14 {
        let a = Pow::pow(k1, e1) * Pow::pow(n, e2);
        let b = Pow::pow(k2, e2) * Pow::pow(n, e1);
        return Ok(a.cmp(&b));
    }
    let mut prec: u64 = 128;
    while prec <= 1 << 16 {
        let (a_lo, a_hi) = pow_product_interval(&[(k1.clone(), e1), (n.clone(), e2)], prec);
        let (b_lo, b_hi) = pow_product_interval(&[(k2.clone(), e2), (n.clone(), e1)], prec);
        if a_hi.cmp_value(&b_lo) == Ordering::Less {
            return Ok(Ordering::Less);
        }
        if b_hi.cmp_value(&a_lo) == Ordering::Less {
            return Ok(Ordering::Greater);
        }
        if prec == 128 && products_equal(n, k1, k2) {
            return Ok(Ordering::Equal);
        }
        prec *= 2;
    }
    Err(Error::ResourceExhausted(
        "steiner comparison exceeded the precision budget".into(),
    ))
}

fn too_big(k: &BigUint) -> Error {
    Error::ResourceExhausted(format!("steiner exponent {k} exceeds the machine range"))
}

/// Exact equality of k1^k2 * n^k1 and k2^k1 * n^k2 via exponent vectors
/// over a coprime factor basis of {k1, k2, n}.
fn products_equal(n: &BigUint, k1: &BigUint, k2: &BigUint) -> bool {
    let basis = coprime_basis(&[k1.clone(), k2.clone(), n.clone()]);
    let v1 = factor_over(k1, &basis);
    let v2 = factor_over(k2, &basis);
    let vn = factor_over(n, &basis);
    let (v1, v2, vn) = match (v1, v2, vn) {
        (Some(a), Some(b), Some(c)) => (a, b, c),
        _ => return false,
    };
    for i in 0..basis.len() {
        let lhs = k2 * v1[i] + k1 * vn[i];
        let rhs = k1 * v2[i] + k2 * vn[i];
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// Pairwise-coprime integers over which every input factors exactly.
fn coprime_basis(values: &[BigUint]) -> Vec<BigUint> {
    let one = BigUint::one();
    let mut basis: Vec<BigUint> = values.iter().filter(|v| **v > one).cloned().collect();
    'refine: loop {
        for i in 0..basis.len() {
            for j in (i + 1)..basis.len() {
                let g = basis[i].gcd(&basis[j]);
                if g > one {
                    let bi = &basis[i] / &g;
                    let bj = &basis[j] / &g;
                    basis[i] = bi;
                    basis[j] = bj;
                    basis.push(g);
                    basis.retain(|b| *b > one);
                    continue 'refine;
                }
            }
        }
        basis.sort();
        basis.dedup();
        return basis;
    }
}

fn factor_over(x: &BigUint, basis: &[BigUint]) -> Option<Vec<u64>> {
    let one = BigUint::one();
    let mut rest = x.clone();
    let mut exps = vec![0u64; basis.len()];
    for (i, b) in basis.iter().enumerate() {
        while (&rest % b).is_zero() {
            rest /= b;
            exps[i] += 1;
        }
    }
    (rest == one).then_some(exps)
}

/// The integer k in [1, 4n] maximizing (k/n)^(n/k); ties break to the
/// smallest k. The window is exhaustively prefiltered in floating point
/// for small n; for large n the maximizer sits at floor(e*n) or its
/// ceiling, so only a guarded neighborhood is resolved exactly.
pub fn steiner_argmax(n: &BigUint) -> Result<BigUint> {
    let candidates: Vec<BigUint> = if let Some(small) = n.to_u64().filter(|s| *s <= 1000) {
        let nf = small as f64;
        let mut best = f64::NEG_INFINITY;
        let mut scores = Vec::with_capacity(4 * small as usize);
        for k in 1..=4 * small {
            let g = (k as f64 / nf).ln() / k as f64;
            scores.push((k, g));
            if g > best {
                best = g;
            }
        }
        scores
            .into_iter()
            .filter(|(_, g)| *g >= best - 1e-9)
            .map(|(k, _)| BigUint::from(k))
            .collect()
    } else {
        let num: BigUint = E_DIGITS.parse().expect("static digits");
        let den = BigUint::from(10u32).pow(E_SCALE);
        let center = (n * num) / den;
        let four_n = n * 4u32;
        let mut c = Vec::new();
        for off in -2i64..=3 {
            let k = if off < 0 {
                let away = BigUint::from((-off) as u64);
                if center > away {
                    &center - &away
                } else {
                    continue;
                }
            } else {
                &center + BigUint::from(off as u64)
            };
            if k >= BigUint::one() && k <= four_n {
                c.push(k);
            }
        }
        c
    };
    let mut best = candidates[0].clone();
    for k in &candidates[1..] {
        // Strictly-greater keeps the smallest k on genuine ties.
        let better = match best.cmp(k) {
            Ordering::Less => steiner_compare(n, k, &best)? == Ordering::Greater,
            _ => steiner_compare(n, k, &best)? != Ordering::Less,
        };
        if better {
            best = k.clone();
        }
    }
    Ok(best)
}

/// The slope `n -> argmax_k (k/n)^(n/k)` representing e.
pub fn e_slope() -> Result<Slope> {
    odd_extend("e", move |n| {
        let n = n.to_biguint().expect("positive index");
        let k = steiner_argmax(&n)?;
        Ok(BigInt::from(k))
    })
    .certified(4, CertClass::Empirical)
}
