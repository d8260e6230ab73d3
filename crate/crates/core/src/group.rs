use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::Prime;

/// A finite abelian p-group `⊕ Z/p^{k_i}`, stored as the sorted list of
/// exponents `k_i >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinitePGroup {
    prime: Prime,
    exponents: Vec<u32>,
}

impl FinitePGroup {
    pub fn trivial(prime: Prime) -> Self {
        FinitePGroup { prime, exponents: Vec::new() }
    }

    /// `Z/p^e`; `e = 0` gives the trivial group.
    pub fn cyclic(prime: Prime, exponent: u32) -> Self {
        Self::from_exponents(prime, [exponent])
    }

    /// `(Z/p)^{⊕ rank}`.
    pub fn elementary(prime: Prime, rank: usize) -> Self {
        Self::from_exponents(prime, std::iter::repeat_n(1, rank))
    }

    /// Zero exponents are dropped.
    pub fn from_exponents(prime: Prime, exponents: impl IntoIterator<Item = u32>) -> Self {
        let mut exponents: Vec<u32> = exponents.into_iter().filter(|&e| e > 0).collect();
        exponents.sort_unstable();
        FinitePGroup { prime, exponents }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty()
    }

    /// The order is `p^order_exponent()`.
    pub fn order_exponent(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn direct_sum(mut self, other: &FinitePGroup) -> Self {
        debug_assert_eq!(self.prime, other.prime);
        self.exponents.extend_from_slice(&other.exponents);
        self.exponents.sort_unstable();
        self
    }

    /// `"1"` for the trivial group, otherwise `"p^e"`.
    pub fn order_string(&self) -> String {
        match self.order_exponent() {
            0 => "1".to_string(),
            e => format!("{}^{}", self.prime, e),
        }
    }
}

impl fmt::Display for FinitePGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return f.write_str("0");
        }
        let p = self.prime.get();
        for (idx, &e) in self.exponents.iter().enumerate() {
            if idx > 0 {
                f.write_str("+")?;
            }
            match p.checked_pow(e) {
                Some(order) => write!(f, "Z/{order}")?,
                None => write!(f, "Z/{p}^{e}")?,
            }
        }
        Ok(())
    }
}
