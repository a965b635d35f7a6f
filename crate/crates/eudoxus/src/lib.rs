//! Exact real arithmetic over integer slopes.
//!
//! A real number is represented by an odd map `Z -> Z` whose defect
//! `f(n+m) - f(n) - f(m)` is bounded. Every slope carries a defect
//! certificate (a bound plus a trust class), and every derived quantity
//! — approximations, comparisons, decimal renderings — reports an error
//! radius computed from that certificate.

pub mod arith;
pub mod constructors;
pub mod dyadic;
pub mod error;
pub mod expr;
pub mod limits;
pub mod real;
pub mod slope;
pub mod verify;

pub use error::Error;
pub use real::{CertifiedApprox, ComparisonOutcome, Real};
pub use slope::{CertClass, DefectCertificate, Slope};

pub type Result<T> = std::result::Result<T, Error>;
