//! Finite abelian groups given by invariant factors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::element::Residue;
use crate::error::{Error, Result};

/// `C_{n_1} + ... + C_{n_r}` with `1 < n_1 | n_2 | ... | n_r`. The empty
/// factor list is the trivial group.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct GroupSpec {
    factors: Vec<u64>,
}

impl GroupSpec {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        for (i, &n) in factors.iter().enumerate() {
            if n < 2 {
                return Err(Error::InvalidGroup(format!(
                    "invariant factor {n} at position {i} must be at least 2"
                )));
            }
            if let Some(&next) = factors.get(i + 1) {
                if next % n != 0 {
                    return Err(Error::InvalidGroup(format!(
                        "invariant factor {n} does not divide {next}"
                    )));
                }
            }
        }
        Ok(GroupSpec { factors })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        if n == 1 {
            return Ok(GroupSpec::trivial());
        }
        GroupSpec::new(vec![n])
    }

    pub fn trivial() -> Self {
        GroupSpec { factors: Vec::new() }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    pub fn order(&self) -> Result<u64> {
        self.factors
            .iter()
            .try_fold(1u64, |acc, &n| acc.checked_mul(n))
            .ok_or(Error::Overflow)
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    /// True when every factor is a power of one common prime.
    pub fn is_p_group(&self) -> bool {
        let Some(&exp) = self.factors.last() else {
            return true;
        };
        let p = smallest_prime_factor(exp);
        let mut rest = exp;
        while rest % p == 0 {
            rest /= p;
        }
        rest == 1
    }

    /// All elements as residue tuples, in lexicographic order.
    pub fn elements(&self) -> Vec<Vec<Residue>> {
        let mut out: Vec<Vec<Residue>> = vec![Vec::new()];
        for &n in &self.factors {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..n).map(move |v| {
                        let mut next = prefix.clone();
                        next.push(Residue::new(v as i64, n).expect("positive modulus"));
                        next
                    })
                })
                .collect();
        }
        out
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return p;
        }
        p += 1;
    }
    n
}

impl TryFrom<Vec<u64>> for GroupSpec {
    type Error = Error;

    fn try_from(factors: Vec<u64>) -> Result<Self> {
        GroupSpec::new(factors)
    }
}

impl From<GroupSpec> for Vec<u64> {
    fn from(g: GroupSpec) -> Self {
        g.factors
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("C1");
        }
        for (i, n) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "C{n}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
