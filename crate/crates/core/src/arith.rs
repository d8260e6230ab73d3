//! Elementary exact number theory: residues, p-adic valuations, the
//! Atiyah–Todd valuation bound and the metastable range predicate.
//!
//! Everything is `i64` with checked arithmetic where a product could
//! realistically overflow; nothing here touches floating point.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A rational prime, verified at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Prime(i64);

impl Prime {
    pub fn new(p: i64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> i64 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    /// `p - 1`, the number of Adams summands.
    #[inline]
    pub fn pm1(self) -> i64 {
        self.0 - 1
    }

    /// Upper end (exclusive) of the corank window `c < 2p^2 - p - 2`.
    pub fn window(self) -> i64 {
        let p = self.0;
        2 * p * p - p - 2
    }
}

impl TryFrom<i64> for Prime {
    type Error = Error;
    fn try_from(p: i64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for i64 {
    fn from(p: Prime) -> i64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3i64;
    while d <= n / d {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The representative of `value` modulo `modulus` in `[0, modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: i64,
    modulus: i64,
}

impl Residue {
    pub fn value(self) -> i64 {
        self.value
    }

    pub fn modulus(self) -> i64 {
        self.modulus
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// `[k]_d`, the least non-negative residue of `k` mod `d`.
pub fn mod_rep(k: i64, d: i64) -> Result<Residue> {
    if d <= 0 {
        return Err(Error::invalid(format!("modulus must be positive, got {d}")));
    }
    Ok(Residue { value: k.rem_euclid(d), modulus: d })
}

/// Infallible `[k]_d` for internal use where `d >= 1` is known.
#[inline]
pub(crate) fn rep(k: i64, d: i64) -> i64 {
    debug_assert!(d >= 1);
    k.rem_euclid(d)
}

/// `n_j`: the largest integer `<= n` congruent to `j` modulo `p - 1`.
pub fn floor_same_residue(n: i64, j: i64, p: Prime) -> i64 {
    n - rep(n - j, p.pm1())
}

/// Largest `e` with `p^e | n`. Zero has no finite valuation and is rejected.
pub fn p_valuation(n: i64, p: Prime) -> Result<u32> {
    if n == 0 {
        return Err(Error::invalid("the valuation of 0 is infinite"));
    }
    let p = p.get();
    let mut n = n;
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    Ok(e)
}

/// Lower bound `floor((k-1)/(p-1))` for the p-adic valuation of the
/// Atiyah–Todd number `M_k`.
pub fn atiyah_todd_valuation_bound(k: i64, p: Prime) -> Result<i64> {
    if k < 1 {
        return Err(Error::invalid(format!("k must be positive, got {k}")));
    }
    Ok((k - 1).div_euclid(p.pm1()))
}

/// `n/2 <= r < n`, compared exactly as `2r >= n && r < n`.
pub fn is_metastable(r: i64, n: i64) -> bool {
    r < n && r.checked_mul(2).is_some_and(|two_r| two_r >= n)
}

/// Ceiling division for a positive divisor.
#[inline]
pub(crate) fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    -((-a).div_euclid(b))
}
