//! Reals as certified slopes: normalization, approximation, ordering,
//! decimal rendering, cuts, finite suprema, and the archimedean witness.

use crate::arith;
use crate::constructors;
use crate::error::Error;
use crate::limits;
use crate::slope::{concentrate, odd_extend, CertClass, Slope};
use crate::Result;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::sync::{Arc, OnceLock};

/// A real number: a certified slope plus a lazily computed well-adjusted
/// (defect at most 1) normal form used for all numeric queries.
#[derive(Clone)]
pub struct Real {
    inner: Arc<RealInner>,
}

struct RealInner {
    raw: Slope,
    normal: OnceLock<Slope>,
}

impl std::fmt::Debug for Real {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Real")
            .field("raw", &self.inner.raw)
            .finish()
    }
}

impl Real {
    pub fn from_slope(raw: Slope) -> Real {
        Real {
            inner: Arc::new(RealInner {
                raw,
                normal: OnceLock::new(),
            }),
        }
    }

    pub fn raw(&self) -> &Slope {
        &self.inner.raw
    }

    /// The well-adjusted representative: the raw slope if its bound is
    /// already at most 1, otherwise its concentration. Computed once.
    pub fn normal(&self) -> Result<Slope> {
        if let Some(s) = self.inner.normal.get() {
            return Ok(s.clone());
        }
        let raw = &self.inner.raw;
        let s = if raw.certificate().bound <= BigInt::one() {
            raw.clone()
        } else {
            concentrate(raw)?
        };
        let _ = self.inner.normal.set(s.clone());
        Ok(self.inner.normal.get().expect("just set").clone())
    }

    pub fn class(&self) -> CertClass {
        self.inner.raw.certificate().class
    }

    pub fn label(&self) -> &str {
        self.inner.raw.label()
    }

    // Constructors.

    pub fn integer(j: impl Into<BigInt>) -> Result<Real> {
        Ok(Real::from_slope(constructors::from_integer(&j.into())?))
    }

    pub fn rational(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Real> {
        Ok(Real::from_slope(constructors::from_rational(
            &p.into(),
            &q.into(),
        )?))
    }

    pub fn sqrt_nat(m: impl Into<BigInt>) -> Result<Real> {
        Ok(Real::from_slope(constructors::sqrt_nat(&m.into())?))
    }

    pub fn pi() -> Result<Real> {
        Ok(Real::from_slope(constructors::pi_slope()?))
    }

    pub fn e() -> Result<Real> {
        Ok(Real::from_slope(constructors::e_slope()?))
    }

    // Field operations; all propagate certificates through the slope layer.

    pub fn add(&self, other: &Real) -> Result<Real> {
        Ok(Real::from_slope(arith::add(self.raw(), other.raw())?))
    }

    pub fn sub(&self, other: &Real) -> Result<Real> {
        Ok(Real::from_slope(arith::sub(self.raw(), other.raw())?))
    }

    pub fn neg(&self) -> Result<Real> {
        Ok(Real::from_slope(arith::negate(self.raw())?))
    }

    pub fn mul(&self, other: &Real) -> Result<Real> {
        Ok(Real::from_slope(arith::multiply(self.raw(), other.raw())?))
    }

    /// Multiplicative inverse; fails with `ZeroDivisor` when no
    /// nonzeroness witness is found.
    pub fn inverse(&self) -> Result<Real> {
        Ok(Real::from_slope(arith::inverse(&self.normal()?)?))
    }

    pub fn int_power(&self, e: u32) -> Result<Real> {
        Ok(Real::from_slope(arith::int_power(self.raw(), e)?))
    }
}

/// A rational midpoint/radius pair guaranteed (up to the certificate
/// class) to contain the real.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedApprox {
    pub midpoint: BigRational,
    pub radius: BigRational,
    pub index: BigInt,
    pub class: CertClass,
}

/// Evaluates the normal form at `index >= 1` and packages the rational
/// interval `value/index +- (bound+1)/index`.
pub fn approximate(x: &Real, index: &BigInt) -> Result<CertifiedApprox> {
    if !index.is_positive() {
        return Err(Error::Invalid(format!(
            "approximation index must be >= 1, got {index}"
        )));
    }
    let normal = x.normal()?;
    let v = normal.evaluate(index)?;
    let spread = &normal.certificate().bound + 1;
    Ok(CertifiedApprox {
        midpoint: BigRational::new(v, index.clone()),
        radius: BigRational::new(spread, index.clone()),
        index: index.clone(),
        class: x.class(),
    })
}

/// Term `n` of the canonical Cauchy sequence `normal(n+1)/(n+1)`.
pub fn cauchy_term(x: &Real, n: &BigInt) -> Result<BigRational> {
    if n.is_negative() {
        return Err(Error::Invalid(format!("cauchy_term requires n >= 0, got {n}")));
    }
    let m = n + 1;
    let v = x.normal()?.evaluate(&m)?;
    Ok(BigRational::new(v, m))
}

/// Outcome of a sign or order query at a finite tolerance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComparisonOutcome {
    Less,
    Greater,
    /// The magnitude stayed within this verified radius of zero, which
    /// is at most the requested tolerance.
    Indistinguishable(BigRational),
}

/// Default resolution floor: one part in 10^9.
pub fn default_eps() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(1_000_000_000u64))
}

/// Decides the sign of `x` down to resolution `eps` by evaluating the
/// normal form on a doubling index ladder. A value beyond 1 in magnitude
/// settles the sign immediately; otherwise the ladder stops once the
/// certified radius drops below `eps`.
pub fn sign_within(x: &Real, eps: &BigRational) -> Result<ComparisonOutcome> {
    if !eps.is_positive() {
        return Err(Error::Invalid(format!("tolerance must be positive, got {eps}")));
    }
    let normal = x.normal()?;
    let spread = &normal.certificate().bound + 1;
    let mut n = BigInt::from(8);
    loop {
        let v = normal.evaluate(&n)?;
        if v > BigInt::one() {
            return Ok(ComparisonOutcome::Greater);
        }
        if v < -BigInt::one() {
            return Ok(ComparisonOutcome::Less);
        }
        let radius = BigRational::new(v.abs() + &spread, n.clone());
        if radius <= *eps {
            return Ok(ComparisonOutcome::Indistinguishable(radius));
        }
        n *= 2;
    }
}

/// Orders `x` against `y` down to resolution `eps` via the sign of the
/// difference.
pub fn compare_within(x: &Real, y: &Real, eps: &BigRational) -> Result<ComparisonOutcome> {
    sign_within(&x.sub(y)?, eps)
}

/// A decimal rendering together with the certificate data backing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendered {
    /// Either a single decimal like `1.4142` or, when the value sits on
    /// a rounding boundary at every attempted index, an explicit
    /// interval `[lo, hi]`.
    pub text: String,
    pub class: CertClass,
    /// The slope index at which the rendering was certified.
    pub index: BigInt,
    /// The certified error radius at that index.
    pub error_bound: BigRational,
}

/// Renders `x` to `digits` decimal places, rounding half up.
///
/// The starting index makes the certified radius smaller than half an
/// ulp. If the interval still straddles a rounding boundary the index is
/// doubled a bounded number of times; a persistent straddle falls back
/// to an explicit interval at two extra digits.
pub fn to_decimal(x: &Real, digits: u32) -> Result<Rendered> {
    let normal = x.normal()?;
    let spread = &normal.certificate().bound + 1;
    let ten_d = BigInt::from(10u32).pow(digits);
    let mut n = 2 * &ten_d * &spread + 1;
    for _ in 0..=limits::STRADDLE_DOUBLINGS {
        let ap = approximate(x, &n)?;
        let lo = &ap.midpoint - &ap.radius;
        let hi = &ap.midpoint + &ap.radius;
        let klo = round_half_up_scaled(&lo, digits);
        let khi = round_half_up_scaled(&hi, digits);
        if klo == khi {
            return Ok(Rendered {
                text: format_scaled(&klo, digits),
                class: ap.class,
                index: ap.index,
                error_bound: ap.radius,
            });
        }
        n *= 2;
    }
    let ap = approximate(x, &n)?;
    let lo = &ap.midpoint - &ap.radius;
    let hi = &ap.midpoint + &ap.radius;
    let extra = digits + 2;
    let text = format!(
        "[{}, {}]",
        format_scaled(&round_half_up_scaled(&lo, extra), extra),
        format_scaled(&round_half_up_scaled(&hi, extra), extra)
    );
    Ok(Rendered {
        text,
        class: ap.class,
        index: ap.index,
        error_bound: ap.radius,
    })
}

/// `round(x * 10^d)` with ties rounding up: `floor(x*10^d + 1/2)`.
fn round_half_up_scaled(x: &BigRational, digits: u32) -> BigInt {
    let ten_d = BigInt::from(10u32).pow(digits);
    let num: BigInt = x.numer() * &ten_d;
    let den = x.denom();
    let doubled: BigInt = 2 * num + den;
    let divisor: BigInt = 2 * den;
    doubled.div_floor(&divisor)
}

/// Formats a scaled integer `k` as a decimal with `digits` places.
fn format_scaled(k: &BigInt, digits: u32) -> String {
    if digits == 0 {
        return k.to_string();
    }
    let ten_d = BigInt::from(10u32).pow(digits);
    let sign = if k.is_negative() { "-" } else { "" };
    let mag = k.abs();
    let (q, r) = mag.div_rem(&ten_d);
    format!("{sign}{q}.{r:0>width$}", width = digits as usize)
}

/// Which side of the rational `p/q` a real falls on, at resolution `eps`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DedekindSide {
    Below,
    Above,
    /// Within this radius of the rational; the cut cannot be resolved
    /// at the requested tolerance.
    Boundary(BigRational),
}

/// Locates `x` relative to the rational `p/q` (`q > 0`).
pub fn dedekind_side(
    x: &Real,
    p: &BigInt,
    q: &BigInt,
    eps: &BigRational,
) -> Result<DedekindSide> {
    if !q.is_positive() {
        return Err(Error::NonpositiveDenominator(q.clone()));
    }
    let rat = Real::rational(p.clone(), q.clone())?;
    Ok(match compare_within(x, &rat, eps)? {
        ComparisonOutcome::Less => DedekindSide::Below,
        ComparisonOutcome::Greater => DedekindSide::Above,
        ComparisonOutcome::Indistinguishable(r) => DedekindSide::Boundary(r),
    })
}

/// Supremum of a nonempty finite set: the pointwise maximum of the
/// members' normal forms, odd-extended from positive indices.
///
/// Each normal form has defect at most 1; the pointwise max of
/// well-adjusted slopes has defect at most 4 after odd extension.
pub fn sup_finite(xs: &[Real]) -> Result<Real> {
    if xs.is_empty() {
        return Err(Error::Invalid("sup_finite requires a nonempty set".into()));
    }
    let members = xs
        .iter()
        .map(|x| x.normal())
        .collect::<Result<Vec<Slope>>>()?;
    let class = members
        .iter()
        .fold(CertClass::Proven, |c, s| c.weaker(s.certificate().class));
    let labels: Vec<&str> = xs.iter().map(|x| x.label()).collect();
    let slope = odd_extend(format!("sup({})", labels.join(", ")), move |n| {
        let mut best: Option<BigInt> = None;
        for s in &members {
            let v = s.evaluate(n)?;
            best = Some(match best {
                Some(b) => b.max(v),
                None => v,
            });
        }
        Ok(best.expect("nonempty member list"))
    })
    .certified(4, class)?;
    Ok(Real::from_slope(slope))
}

/// For positive `a` and arbitrary `big`, an integer `N` with
/// `N * a > big`: positivity of `a` is detected on the ladder, and `N`
/// is read off the normal forms.
pub fn archimedean_witness(a: &Real, big: &Real) -> Result<BigInt> {
    let a_norm = a.normal()?;
    let spread = &a_norm.certificate().bound + 1;
    let eps = default_eps();
    let mut n = BigInt::from(8);
    let n_pos = loop {
        let v = a_norm.evaluate(&n)?;
        if v > BigInt::one() {
            break n;
        }
        if v < -BigInt::one() {
            return Err(Error::NotPositive);
        }
        if BigRational::new(v.abs() + &spread, n.clone()) <= eps {
            return Err(Error::NotPositive);
        }
        n *= 2;
    };
    // a > 1/(2*n_pos), so N = 1 + max(big_normal(2*n_pos), 0) suffices:
    // N*a > N/(2*n_pos) >= big_normal(2*n_pos)/(2*n_pos) + radius >= big.
    let big_norm = big.normal()?;
    let v = big_norm.evaluate(&(2 * &n_pos))?;
    Ok(BigInt::one() + v.max(BigInt::zero()))
}
