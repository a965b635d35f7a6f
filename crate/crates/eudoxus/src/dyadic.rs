//! Positive dyadic floats with directed rounding.
//!
//! Values are `mantissa * 2^exp` with a positive big-integer mantissa.
//! Multiplication and powering round the mantissa down or up to a fixed
//! precision, so a pair of computations brackets the exact result. This
//! is enough to compare enormous products like `a^e * b^f` without ever
//! materializing them.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::cmp::Ordering;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    pub mantissa: BigUint,
    pub exp: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

impl Dyadic {
    pub fn from_biguint(m: BigUint) -> Self {
        Dyadic { mantissa: m, exp: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    /// Truncate the mantissa to at most `prec` bits, rounding in the
    /// requested direction.
    pub fn round(&self, prec: u64, dir: Round) -> Self {
        let bits = self.mantissa.bits();
        if bits <= prec {
            return self.clone();
        }
        let drop = bits - prec;
        let mut m = &self.mantissa >> drop;
        if dir == Round::Up {
            // Any dropped bit forces a bump; dropping only zero bits
            // would have meant bits() misreported, which it cannot.
            let back = &m << drop;
            if back != self.mantissa {
                m += BigUint::one();
            }
        }
        Dyadic {
            mantissa: m,
            exp: self.exp + drop as i64,
        }
    }

    pub fn mul(&self, other: &Self, prec: u64, dir: Round) -> Self {
        let raw = Dyadic {
            mantissa: &self.mantissa * &other.mantissa,
            exp: self.exp + other.exp,
        };
        raw.round(prec, dir)
    }

    /// `self^e` by binary exponentiation, rounding every step in the
    /// same direction. Monotone because all values are positive.
    pub fn pow(&self, e: u64, prec: u64, dir: Round) -> Self {
        let mut result = Dyadic::from_biguint(BigUint::one());
        let mut base = self.round(prec, dir);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, prec, dir);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, prec, dir);
            }
        }
        result
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        if self.is_zero() || other.is_zero() {
            return self.mantissa.cmp(&other.mantissa);
        }
        // Compare by magnitude first to avoid giant shifts.
        let ha = self.exp + self.mantissa.bits() as i64;
        let hb = other.exp + other.mantissa.bits() as i64;
        if ha != hb {
            return ha.cmp(&hb);
        }
        if self.exp >= other.exp {
            let shifted = &self.mantissa << (self.exp - other.exp) as u64;
            shifted.cmp(&other.mantissa)
        } else {
            let shifted = &other.mantissa << (other.exp - self.exp) as u64;
            self.mantissa.cmp(&shifted).reverse()
        }
    }
}

/// Product of `base^exp` factors bracketed at `prec` bits.
pub fn pow_product_interval(factors: &[(BigUint, u64)], prec: u64) -> (Dyadic, Dyadic) {
    let mut lo = Dyadic::from_biguint(BigUint::one());
    let mut hi = Dyadic::from_biguint(BigUint::one());
    for (base, e) in factors {
        let b = Dyadic::from_biguint(base.clone());
        lo = lo.mul(&b.pow(*e, prec, Round::Down), prec, Round::Down);
        hi = hi.mul(&b.pow(*e, prec, Round::Up), prec, Round::Up);
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn rounding_brackets_exact_product() {
        let a = Dyadic::from_biguint(big(0xdead_beef_cafe));
        let b = Dyadic::from_biguint(big(0x1234_5678_9abc));
        let exact = Dyadic {
            mantissa: &a.mantissa * &b.mantissa,
            exp: 0,
        };
        let lo = a.mul(&b, 24, Round::Down);
        let hi = a.mul(&b, 24, Round::Up);
        assert_ne!(lo.cmp_value(&exact), Ordering::Greater);
        assert_ne!(hi.cmp_value(&exact), Ordering::Less);
    }

    #[test]
    fn pow_brackets_exact_power() {
        let base = Dyadic::from_biguint(big(1_000_003));
        let exact = Dyadic::from_biguint(big(1_000_003).pow(11));
        let lo = base.pow(11, 40, Round::Down);
        let hi = base.pow(11, 40, Round::Up);
        assert_ne!(lo.cmp_value(&exact), Ordering::Greater);
        assert_ne!(hi.cmp_value(&exact), Ordering::Less);
        // The bracket is tight at 40 bits: lo and hi agree to ~8 digits.
        assert_eq!(lo.cmp_value(&hi), Ordering::Less);
    }

    #[test]
    fn interval_separates_distinct_products() {
        // 3^5 * 2^7 = 31104 vs 5^3 * 4^4 = 32000
        let (alo, ahi) = pow_product_interval(&[(big(3), 5), (big(2), 7)], 20);
        let (blo, bhi) = pow_product_interval(&[(big(5), 3), (big(4), 4)], 20);
        assert_eq!(ahi.cmp_value(&blo), Ordering::Less);
        assert_eq!(bhi.cmp_value(&alo), Ordering::Greater);
    }
}
