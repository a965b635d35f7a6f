//! Slopes: odd maps `Z -> Z` with bounded defect, plus their certificates.
//!
//! The defect of a map `f` is `f(n+m) - f(n) - f(m)`. A slope is a map
//! whose defect is bounded; the recorded bound is the certificate that
//! every downstream error radius is computed from.

use crate::error::Error;
use crate::limits;
use crate::Result;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, RwLock};

/// Trust class of a defect bound.
///
/// `Proven` bounds come only from analytic constructor arguments or the
/// propagation rules; `Empirical` bounds were sampled on a finite grid
/// and are advisory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CertClass {
    Proven,
    Empirical,
}

impl CertClass {
    /// The weaker of two classes: anything touched by an empirical
    /// bound is empirical.
    pub fn weaker(self, other: CertClass) -> CertClass {
        self.max(other)
    }
}

impl fmt::Display for CertClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertClass::Proven => write!(f, "proven"),
            CertClass::Empirical => write!(f, "empirical"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectCertificate {
    /// Bound on `|f(n+m) - f(n) - f(m)|` over all n, m.
    pub bound: BigInt,
    /// The slope's value at index 1.
    pub value_at_one: BigInt,
    pub class: CertClass,
}

impl DefectCertificate {
    pub fn new(bound: impl Into<BigInt>, value_at_one: BigInt, class: CertClass) -> Self {
        let bound = bound.into();
        assert!(!bound.is_negative(), "defect bound must be nonnegative");
        DefectCertificate {
            bound,
            value_at_one,
            class,
        }
    }
}

type Evaluator = dyn Fn(&BigInt) -> Result<BigInt> + Send + Sync;

struct Inner {
    label: String,
    certificate: DefectCertificate,
    /// Defined for strictly positive indices only; `evaluate` odd-extends.
    eval: Arc<Evaluator>,
    cache: RwLock<BTreeMap<BigUint, BigInt>>,
}

/// A slope with a defect certificate: the representation of a real number.
///
/// Cheap to clone and shareable across threads; evaluation is pure and
/// memoized per positive index.
#[derive(Clone)]
pub struct Slope {
    inner: Arc<Inner>,
}

impl fmt::Debug for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Slope")
            .field("label", &self.inner.label)
            .field("certificate", &self.inner.certificate)
            .finish()
    }
}

/// An odd map without a certificate yet: the output of `odd_extend` and
/// the input to the certifying constructors.
#[derive(Clone)]
pub struct OddMap {
    label: String,
    f: Arc<Evaluator>,
}

/// Odd-extends a map defined on positive integers: the result sends 0 to
/// 0 and -n to -f(n).
pub fn odd_extend<F>(label: impl Into<String>, f: F) -> OddMap
where
    F: Fn(&BigInt) -> Result<BigInt> + Send + Sync + 'static,
{
    OddMap {
        label: label.into(),
        f: Arc::new(f),
    }
}

impl OddMap {
    /// Uncached odd evaluation, used while no certificate exists yet.
    pub fn evaluate(&self, n: &BigInt) -> Result<BigInt> {
        if n.is_zero() {
            return Ok(BigInt::zero());
        }
        let mag = n.abs();
        check_index_cap(&mag)?;
        let v = (self.f)(&mag)?;
        Ok(if n.is_negative() { -v } else { v })
    }

    /// Attach an analytic or propagated bound. The certificate's value
    /// at one is computed from the map itself.
    pub fn certified(self, bound: impl Into<BigInt>, class: CertClass) -> Result<Slope> {
        let value_at_one = self.evaluate(&BigInt::one())?;
        Ok(Slope {
            inner: Arc::new(Inner {
                label: self.label,
                certificate: DefectCertificate::new(bound, value_at_one, class),
                eval: self.f,
                cache: RwLock::new(BTreeMap::new()),
            }),
        })
    }

    /// Sample the defect on `grid` and record the observed maximum as an
    /// empirical bound.
    pub fn empirical(self, grid: &SampleGrid) -> Result<Slope> {
        let mut max = BigInt::zero();
        for (n, m) in grid.pairs() {
            let d = (self.evaluate(&(&n + &m))? - self.evaluate(&n)? - self.evaluate(&m)?).abs();
            if d > max {
                max = d;
            }
        }
        self.certified(max, CertClass::Empirical)
    }
}

fn check_index_cap(mag: &BigInt) -> Result<()> {
    let cap = limits::index_cap();
    if *mag > cap {
        return Err(Error::IndexCapExceeded {
            index: mag.clone(),
            cap,
        });
    }
    Ok(())
}

impl Slope {
    pub fn label(&self) -> &str {
        &self.inner.label
    }

    pub fn certificate(&self) -> &DefectCertificate {
        &self.inner.certificate
    }

    /// Evaluates the slope at an arbitrary integer index. Oddness holds
    /// by construction; results are memoized per positive index.
    pub fn evaluate(&self, n: &BigInt) -> Result<BigInt> {
        if n.is_zero() {
            return Ok(BigInt::zero());
        }
        let neg = n.is_negative();
        let mag = n.abs();
        check_index_cap(&mag)?;
        let key = mag.to_biguint().expect("magnitude is nonnegative");
        if let Some(v) = self.inner.cache.read().unwrap().get(&key) {
            return Ok(if neg { -v } else { v.clone() });
        }
        let v = (self.inner.eval)(&mag)?;
        let mut cache = self.inner.cache.write().unwrap();
        cache.entry(key).or_insert_with(|| v.clone());
        if let Some(cap) = limits::cache_cap() {
            while cache.len() > cap {
                cache.pop_last();
            }
        }
        Ok(if neg { -v } else { v })
    }

    /// Convenience evaluation at a machine-sized index.
    pub fn at(&self, n: i64) -> Result<BigInt> {
        self.evaluate(&BigInt::from(n))
    }
}

/// Optimal euclidean division `p : q`: the unique integer `r` with
/// `2p - |q| <= 2qr < 2p + |q|`. Rounds to nearest with ties toward
/// negative infinity (for positive `q`).
pub fn opt_div(p: &BigInt, q: &BigInt) -> Result<BigInt> {
    if q.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if q.is_negative() {
        return Ok(-opt_div(p, &-q)?);
    }
    let num: BigInt = 2 * p + q - 1;
    let den: BigInt = 2 * q;
    Ok(num.div_floor(&den))
}

/// `opt_div` on machine integers; the harness uses this in exhaustive
/// loops. Cross-checked against the big-integer route in tests.
pub fn opt_div_i128(p: i128, q: i128) -> i128 {
    debug_assert!(q != 0);
    if q < 0 {
        return -opt_div_i128(p, -q);
    }
    (2 * p + q - 1).div_euclid(2 * q)
}

/// Concentration: rescales a slope into a well-adjusted one (defect at
/// most 1) that stays within `s` of the original, where
/// `s = max(bound, 1)` and the new slope is `n -> f(3sn) : 3s`.
pub fn concentrate(slope: &Slope) -> Result<Slope> {
    let cert = slope.certificate();
    let s = cert.bound.clone().max(BigInt::one());
    let scale: BigInt = 3 * &s;
    let base = slope.clone();
    let scale_in = scale.clone();
    odd_extend(format!("concentrate({})", slope.label()), move |n| {
        let v = base.evaluate(&(n * &scale_in))?;
        opt_div(&v, &scale_in)
    })
    .certified(BigInt::one(), cert.class)
}

/// Maximum observed defect of `slope` over `pairs`. Errors if a proven
/// certificate is exceeded, which signals an implementation bug.
pub fn defect_sample(slope: &Slope, pairs: &[(BigInt, BigInt)]) -> Result<BigInt> {
    assert!(!pairs.is_empty(), "defect_sample requires at least one pair");
    let cert = slope.certificate().clone();
    let mut max = BigInt::zero();
    for (n, m) in pairs {
        let d = (slope.evaluate(&(n + m))? - slope.evaluate(n)? - slope.evaluate(m)?).abs();
        if cert.class == CertClass::Proven && d > cert.bound {
            return Err(Error::CertificateViolation {
                bound: cert.bound,
                observed: d,
                n: n.clone(),
                m: m.clone(),
            });
        }
        if d > max {
            max = d;
        }
    }
    Ok(max)
}

/// Finite-scale equivalence evidence: true iff `|a(n) - b(n)| <= bound`
/// for every index in `range`. Evidence only; true equivalence of
/// slopes is not decidable.
pub fn equivalence_evidence(
    a: &Slope,
    b: &Slope,
    range: &[BigInt],
    bound: &BigInt,
) -> Result<bool> {
    assert!(!range.is_empty(), "equivalence_evidence requires a nonempty range");
    for n in range {
        if (a.evaluate(n)? - b.evaluate(n)?).abs() > *bound {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A deterministic grid of index pairs for defect sampling.
#[derive(Debug, Clone)]
pub struct SampleGrid {
    /// All ordered pairs with both magnitudes at most this radius.
    pub exhaustive_radius: i64,
    pub random_pairs: usize,
    pub random_max: i64,
    pub seed: u64,
}

impl SampleGrid {
    /// The documented default: all |n|, |m| <= 256 plus 1000 random
    /// pairs with magnitudes up to 10^6.
    pub fn default_grid() -> Self {
        SampleGrid {
            exhaustive_radius: 256,
            random_pairs: 1000,
            random_max: 1_000_000,
            seed: 0xEDC5,
        }
    }

    /// A cheaper grid for slopes whose single evaluation is expensive
    /// (inverse slopes scan for each value).
    pub fn light_grid() -> Self {
        SampleGrid {
            exhaustive_radius: 64,
            random_pairs: 200,
            random_max: 10_000,
            seed: 0xEDC5,
        }
    }

    pub fn pairs(&self) -> Vec<(BigInt, BigInt)> {
        let mut out = Vec::new();
        for n in -self.exhaustive_radius..=self.exhaustive_radius {
            for m in -self.exhaustive_radius..=self.exhaustive_radius {
                out.push((BigInt::from(n), BigInt::from(m)));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..self.random_pairs {
            let n = rng.gen_range(-self.random_max..=self.random_max);
            let m = rng.gen_range(-self.random_max..=self.random_max);
            out.push((BigInt::from(n), BigInt::from(m)));
        }
        out
    }
}
