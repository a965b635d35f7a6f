//! Field operations on slopes with defect-certificate propagation.
//!
//! Sum and negation are pointwise; the product is composition. The
//! propagated bounds are
//!   sum:      S = S_a + S_b
//!   product:  S = 2*S_a + (|a(1)| + S_a) * S_b
//! and the class of a result is the weaker of the operand classes.

use crate::constructors::from_integer;
use crate::error::Error;
use crate::limits;
use crate::slope::{concentrate, odd_extend, opt_div, SampleGrid, Slope};
use crate::Result;
use num_bigint::BigInt;
use num_traits::{One, Signed};

/// Pointwise sum `n -> a(n) + b(n)`.
pub fn add(a: &Slope, b: &Slope) -> Result<Slope> {
    let bound = &a.certificate().bound + &b.certificate().bound;
    let class = a.certificate().class.weaker(b.certificate().class);
    let (ac, bc) = (a.clone(), b.clone());
    odd_extend(format!("({} + {})", a.label(), b.label()), move |n| {
        Ok(ac.evaluate(n)? + bc.evaluate(n)?)
    })
    .certified(bound, class)
}

/// Pointwise negation; the certificate carries over unchanged.
pub fn negate(a: &Slope) -> Result<Slope> {
    let cert = a.certificate().clone();
    let ac = a.clone();
    odd_extend(format!("(-{})", a.label()), move |n| Ok(-ac.evaluate(n)?))
        .certified(cert.bound, cert.class)
}

pub fn sub(a: &Slope, b: &Slope) -> Result<Slope> {
    add(a, &negate(b)?)
}

/// Composition product `n -> a(b(n))`.
pub fn multiply(a: &Slope, b: &Slope) -> Result<Slope> {
    let sa = &a.certificate().bound;
    let sb = &b.certificate().bound;
    let a1 = a.certificate().value_at_one.abs();
    let bound = 2 * sa + (&a1 + sa) * sb;
    let class = a.certificate().class.weaker(b.certificate().class);
    let (ac, bc) = (a.clone(), b.clone());
    odd_extend(format!("({} * {})", a.label(), b.label()), move |n| {
        let inner = bc.evaluate(n)?;
        ac.evaluate(&inner)
    })
    .certified(bound, class)
}

/// Right inverse: a slope `v -> n_v` with `|v - a(n_v)| <= |a(1)| + 1`.
///
/// Requires a nonzero operand; nonzeroness is witnessed by an index k
/// with `|a(k)| > 1`, searched on a doubling ladder up to a cap. Each
/// value is located from the rational estimate `v*N : a(N)` and a short
/// outward scan; the well-adjusted gap property guarantees a hit.
pub fn inverse(a: &Slope) -> Result<Slope> {
    let a = if a.certificate().bound > BigInt::one() {
        concentrate(a)?
    } else {
        a.clone()
    };
    let witness_cap = BigInt::from(limits::INVERSE_WITNESS_CAP);
    let mut k = BigInt::one();
    let witness = loop {
        if a.evaluate(&k)?.abs() > BigInt::one() {
            break k;
        }
        k *= 2;
        if k > witness_cap {
            return Err(Error::ZeroDivisor { cap: witness_cap });
        }
    };
    let gap: BigInt = a.certificate().value_at_one.abs() + 1;
    let (ac, gap_in) = (a.clone(), gap.clone());
    odd_extend(format!("inverse({})", a.label()), move |v| {
        let threshold = v.clone().max(BigInt::from(4)) * &gap_in;
        let mut idx = witness.clone();
        while ac.evaluate(&idx)?.abs() <= threshold {
            idx *= 2;
        }
        let a_idx = ac.evaluate(&idx)?;
        let center = opt_div(&(v * &idx), &a_idx)?;
        for j in 0..1_000_000i64 {
            for cand in [&center + j, &center - j] {
                if (v - ac.evaluate(&cand)?).abs() <= gap_in {
                    return Ok(cand);
                }
                if j == 0 {
                    break;
                }
            }
        }
        Err(Error::ResourceExhausted(format!(
            "inverse scan did not converge near index {center}"
        )))
    })
    .empirical(&SampleGrid::light_grid())
}

/// Integer power via the scaled-power formula
/// `n -> floor(a(n)^e / n^(e-1))`, equivalent to the e-fold composition.
///
/// The bound combines the propagated composition bound with the iterate
/// estimate `(1 + |a(1)| + S_a)^(e-1)`; the class is empirical for
/// `e >= 2` because the combination is derived, not constructor-proven.
pub fn int_power(a: &Slope, e: u32) -> Result<Slope> {
    if e == 0 {
        return from_integer(&BigInt::one());
    }
    if e == 1 {
        return Ok(a.clone());
    }
    let sa = a.certificate().bound.clone();
    let a1 = a.certificate().value_at_one.abs();
    let mut iter_bound = sa.clone();
    for _ in 1..e {
        iter_bound = 2 * &sa + (&a1 + &sa) * &iter_bound;
    }
    let offset: BigInt = (BigInt::one() + &a1 + &sa).pow(e - 1) + 1;
    let bound = iter_bound + 3 * offset;
    let ac = a.clone();
    odd_extend(format!("({})^{e}", a.label()), move |n| {
        let v = ac.evaluate(n)?;
        Ok(num_integer::Integer::div_floor(
            &v.pow(e),
            &n.pow(e - 1),
        ))
    })
    .certified(bound, crate::slope::CertClass::Empirical)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{from_rational, quintic, sqrt_nat};
    use crate::slope::{defect_sample, equivalence_evidence, CertClass, SampleGrid};

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn add_examples() {
        let two = from_integer(&big(2)).unwrap();
        let three = from_integer(&big(3)).unwrap();
        assert_eq!(add(&two, &three).unwrap().at(7).unwrap(), big(35));

        let rho = sqrt_nat(&big(2)).unwrap();
        let cancel = add(&rho, &negate(&rho).unwrap()).unwrap();
        for n in [-100i64, -1, 0, 1, 17, 1000] {
            assert_eq!(cancel.at(n).unwrap(), big(0));
        }

        let third = from_rational(&big(1), &big(3)).unwrap();
        let sixth = from_rational(&big(1), &big(6)).unwrap();
        let sum = add(&third, &sixth).unwrap();
        let half = from_rational(&big(1), &big(2)).unwrap();
        let range: Vec<_> = (1..=1000).map(BigInt::from).collect();
        assert!(equivalence_evidence(&sum, &half, &range, &big(6)).unwrap());
    }

    #[test]
    fn negate_examples() {
        let five = from_integer(&big(5)).unwrap();
        assert_eq!(negate(&five).unwrap().at(3).unwrap(), big(-15));
        let rho = sqrt_nat(&big(2)).unwrap();
        assert_eq!(
            negate(&negate(&rho).unwrap()).unwrap().at(5).unwrap(),
            big(8)
        );
        let alpha = quintic().unwrap();
        assert_eq!(negate(&alpha).unwrap().at(10).unwrap(), big(-12));
    }

    #[test]
    fn multiply_linear_is_exact() {
        let two = from_integer(&big(2)).unwrap();
        let three = from_integer(&big(3)).unwrap();
        let six = multiply(&two, &three).unwrap();
        for n in -50..=50i64 {
            assert_eq!(six.at(n).unwrap(), big(6 * n));
        }
    }

    #[test]
    fn multiply_sqrt2_squared_brackets_two() {
        let rho = sqrt_nat(&big(2)).unwrap();
        let sq = multiply(&rho, &rho).unwrap();
        for n in 1..=1000i64 {
            let v = sq.at(n).unwrap();
            assert!(big(2 * n) <= v && v <= big(2 * n + 2), "n = {n}, v = {v}");
        }
    }

    #[test]
    fn commutativity_estimate_sqrt2_quintic() {
        // S_rho = 8, rho(1) = 2, S_alpha = 3, alpha(1) = 2:
        // 8*(1+2+3) + 3*(1+2+8) = 81
        let rho = sqrt_nat(&big(2)).unwrap();
        let alpha = quintic().unwrap();
        let ab = multiply(&rho, &alpha).unwrap();
        let ba = multiply(&alpha, &rho).unwrap();
        for n in (1..500i64).step_by(17) {
            let d = (ab.at(n).unwrap() - ba.at(n).unwrap()).abs();
            assert!(d <= big(81), "n = {n}, d = {d}");
        }
    }

    #[test]
    fn propagated_bounds_survive_sampling() {
        let rho = sqrt_nat(&big(2)).unwrap();
        let alpha = quintic().unwrap();
        let third = from_rational(&big(1), &big(3)).unwrap();
        let tree = add(
            &multiply(&rho, &alpha).unwrap(),
            &negate(&multiply(&third, &rho).unwrap()).unwrap(),
        )
        .unwrap();
        let grid = SampleGrid::light_grid();
        let observed = defect_sample(&tree, &grid.pairs()).unwrap();
        assert!(observed <= tree.certificate().bound);
    }

    #[test]
    fn inverse_of_two_halves_exactly() {
        let two = from_integer(&big(2)).unwrap();
        let inv = inverse(&two).unwrap();
        assert_eq!(inv.at(10).unwrap(), big(5));
    }

    #[test]
    fn inverse_contract_on_sqrt2() {
        let rho = sqrt_nat(&big(2)).unwrap();
        let conc = concentrate(&rho).unwrap();
        let beta = inverse(&conc).unwrap();
        let gap = conc.certificate().value_at_one.abs() + 1;
        for v in [1i64, 2, 17, 100, 12345, 1_000_000] {
            let n_v = beta.at(v).unwrap();
            let err = (big(v) - conc.evaluate(&n_v).unwrap()).abs();
            assert!(err <= gap, "v = {v}");
        }
    }

    #[test]
    fn inverse_of_zero_fails() {
        let zero = from_integer(&big(0)).unwrap();
        assert!(matches!(inverse(&zero), Err(Error::ZeroDivisor { .. })));
    }

    #[test]
    fn int_power_examples() {
        let three = from_integer(&big(3)).unwrap();
        let nine = int_power(&three, 2).unwrap();
        for n in 1..50i64 {
            assert_eq!(nine.at(n).unwrap(), big(9 * n));
        }
        assert_eq!(
            int_power(&three, 0).unwrap().at(7).unwrap(),
            big(7)
        );
        assert_eq!(
            int_power(&three, 2).unwrap().certificate().class,
            CertClass::Empirical
        );
    }
}
