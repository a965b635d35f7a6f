//! Process-wide evaluation limits, settable from the CLI.

use num_bigint::BigInt;
use std::sync::RwLock;

static INDEX_CAP: RwLock<Option<BigInt>> = RwLock::new(None);
static CACHE_CAP: RwLock<Option<usize>> = RwLock::new(None);

/// Default cap on slope index magnitude. Composition towers multiply
/// index sizes, so runaway expressions hit this instead of spinning.
pub const DEFAULT_INDEX_CAP: u64 = 1_000_000_000_000_000_000;

/// Search cap for the nonzeroness witness used by `inverse`.
pub const INVERSE_WITNESS_CAP: u64 = 1_000_000;

/// How many times `to_decimal` doubles the index trying to escape a
/// rounding-boundary straddle before giving up on a single rendering.
pub const STRADDLE_DOUBLINGS: u32 = 16;

pub fn index_cap() -> BigInt {
    INDEX_CAP
        .read()
        .unwrap()
        .clone()
        .unwrap_or_else(|| BigInt::from(DEFAULT_INDEX_CAP))
}

pub fn set_index_cap(cap: BigInt) {
    *INDEX_CAP.write().unwrap() = Some(cap);
}

pub fn cache_cap() -> Option<usize> {
    *CACHE_CAP.read().unwrap()
}

pub fn set_cache_cap(cap: Option<usize>) {
    *CACHE_CAP.write().unwrap() = cap;
}
