//! Points of `Z^d`, residues, and points of `G x Z^d`.

use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Anything that can be the letter of a sequence: an abelian group element
/// with overflow-checked arithmetic and a canonical total order.
pub trait Symbol: Clone + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync {
    /// The identity of the group this symbol lives in.
    fn zero_like(&self) -> Self;

    fn is_zero(&self) -> bool;

    fn checked_add(&self, rhs: &Self) -> Result<Self>;

    fn checked_neg(&self) -> Result<Self>;

    fn checked_scale(&self, k: u64) -> Result<Self> {
        let mut acc = self.zero_like();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.checked_add(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.checked_add(&base)?;
            }
        }
        Ok(acc)
    }

    /// Coordinates in the torsion-free part.
    fn lattice(&self) -> &[i64];

    /// The single lattice coordinate when the symbol is a plain point of `Z`.
    fn as_scalar(&self) -> Option<i64> {
        None
    }
}

/// A point of `Z^d`, ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element {
    coords: Vec<i64>,
}

impl Element {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument(
                "an element needs at least one coordinate".into(),
            ));
        }
        Ok(Element { coords })
    }

    /// Parses `3` or `(1,-2)`.
    pub fn parse(text: &str) -> Result<Self> {
        crate::ground::Parser::new(text).whole_element()
    }

    pub fn scalar(value: i64) -> Self {
        Element { coords: vec![value] }
    }

    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Element { coords: vec![0; dim] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// `self` with `extra` appended as a new last coordinate.
    pub fn extended(&self, extra: i64) -> Element {
        let mut coords = self.coords.clone();
        coords.push(extra);
        Element { coords }
    }

    pub fn sup_norm(&self) -> u64 {
        self.coords.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    fn check_dim(&self, rhs: &Element) -> Result<()> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: rhs.dim(),
            });
        }
        Ok(())
    }
}

impl From<i64> for Element {
    fn from(value: i64) -> Self {
        Element::scalar(value)
    }
}

impl Symbol for Element {
    fn zero_like(&self) -> Self {
        Element::zero(self.dim())
    }

    fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Element { coords })
    }

    fn checked_neg(&self) -> Result<Self> {
        let coords = self
            .coords
            .iter()
            .map(|c| c.checked_neg().ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Element { coords })
    }

    fn checked_scale(&self, k: u64) -> Result<Self> {
        let k = i64::try_from(k).map_err(|_| Error::Overflow)?;
        let coords = self
            .coords
            .iter()
            .map(|c| c.checked_mul(k).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Element { coords })
    }

    fn lattice(&self) -> &[i64] {
        &self.coords
    }

    fn as_scalar(&self) -> Option<i64> {
        match self.coords.as_slice() {
            [c] => Some(*c),
            _ => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coords.as_slice() {
            [c] => write!(f, "{c}"),
            coords => {
                f.write_str("(")?;
                for (i, c) in coords.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An element of the cyclic group `Z/modulus`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    /// Reduces `value` into `[0, modulus)`.
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidGroup("modulus must be positive".into()));
        }
        let m = i128::from(modulus);
        let value = (i128::from(value)).rem_euclid(m) as u64;
        Ok(Residue { value, modulus })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn add(self, rhs: Residue) -> Result<Residue> {
        if self.modulus != rhs.modulus {
            return Err(Error::InvalidGroup(format!(
                "cannot add residues mod {} and mod {}",
                self.modulus, rhs.modulus
            )));
        }
        let sum = (u128::from(self.value) + u128::from(rhs.value)) % u128::from(self.modulus);
        Ok(Residue {
            value: sum as u64,
            modulus: self.modulus,
        })
    }

    fn neg(self) -> Residue {
        Residue {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

/// A point `(g, x)` of `G x Z^d`, with `g` given as a residue tuple over the
/// invariant factors of `G`. Ordered by group part, then lattice part.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MixedElement {
    group_part: Vec<Residue>,
    lattice_part: Element,
}

impl MixedElement {
    pub fn new(group_part: Vec<Residue>, lattice_part: Element) -> Self {
        MixedElement {
            group_part,
            lattice_part,
        }
    }

    /// Builds the group part from raw integers reduced modulo `moduli`.
    pub fn from_raw(residues: &[i64], moduli: &[u64], lattice_part: Element) -> Result<Self> {
        if residues.len() != moduli.len() {
            return Err(Error::InvalidGroup(format!(
                "expected {} residues, got {}",
                moduli.len(),
                residues.len()
            )));
        }
        let group_part = residues
            .iter()
            .zip(moduli)
            .map(|(&r, &n)| Residue::new(r, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(MixedElement {
            group_part,
            lattice_part,
        })
    }

    pub fn group_part(&self) -> &[Residue] {
        &self.group_part
    }

    pub fn lattice_part(&self) -> &Element {
        &self.lattice_part
    }

    pub fn residues(&self) -> Vec<u64> {
        self.group_part.iter().map(Residue::value).collect()
    }

    fn check_shape(&self, rhs: &MixedElement) -> Result<()> {
        if self.group_part.len() != rhs.group_part.len() {
            return Err(Error::InvalidGroup(format!(
                "group rank mismatch: {} vs {}",
                self.group_part.len(),
                rhs.group_part.len()
            )));
        }
        Ok(())
    }
}

impl Symbol for MixedElement {
    fn zero_like(&self) -> Self {
        MixedElement {
            group_part: self
                .group_part
                .iter()
                .map(|r| Residue {
                    value: 0,
                    modulus: r.modulus,
                })
                .collect(),
            lattice_part: self.lattice_part.zero_like(),
        }
    }

    fn is_zero(&self) -> bool {
        self.group_part.iter().all(|r| r.value == 0) && self.lattice_part.is_zero()
    }

    fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.check_shape(rhs)?;
        let group_part = self
            .group_part
            .iter()
            .zip(&rhs.group_part)
            .map(|(a, b)| a.add(*b))
            .collect::<Result<Vec<_>>>()?;
        Ok(MixedElement {
            group_part,
            lattice_part: self.lattice_part.checked_add(&rhs.lattice_part)?,
        })
    }

    fn checked_neg(&self) -> Result<Self> {
        Ok(MixedElement {
            group_part: self.group_part.iter().map(|r| r.neg()).collect(),
            lattice_part: self.lattice_part.checked_neg()?,
        })
    }

    fn checked_scale(&self, k: u64) -> Result<Self> {
        let group_part = self
            .group_part
            .iter()
            .map(|r| {
                let v = (u128::from(r.value) * u128::from(k)) % u128::from(r.modulus);
                Residue {
                    value: v as u64,
                    modulus: r.modulus,
                }
            })
            .collect();
        Ok(MixedElement {
            group_part,
            lattice_part: self.lattice_part.checked_scale(k)?,
        })
    }

    fn lattice(&self) -> &[i64] {
        self.lattice_part.coords()
    }
}

impl fmt::Display for MixedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, r) in self.group_part.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", r.value)?;
        }
        f.write_str("|")?;
        for (i, c) in self.lattice_part.coords().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for MixedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_order_is_lexicographic() {
        let a = Element::new(vec![-1, 5]).unwrap();
        let b = Element::new(vec![0, -3]).unwrap();
        let c = Element::new(vec![0, 2]).unwrap();
        assert!(a < b && b < c);
    }

    #[test]
    fn element_overflow_is_an_error() {
        let big = Element::scalar(i64::MAX);
        assert_eq!(big.checked_add(&Element::scalar(1)), Err(Error::Overflow));
        assert_eq!(Element::scalar(i64::MIN).checked_neg(), Err(Error::Overflow));
        assert_eq!(big.checked_scale(2), Err(Error::Overflow));
    }

    #[test]
    fn dimension_mismatch() {
        let a = Element::scalar(1);
        let b = Element::new(vec![1, 1]).unwrap();
        assert!(matches!(a.checked_add(&b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn residues_reduce_and_wrap() {
        let r = Residue::new(-1, 3).unwrap();
        assert_eq!(r.value(), 2);
        let x = MixedElement::from_raw(&[1], &[2], Element::scalar(1)).unwrap();
        let two_x = x.checked_add(&x).unwrap();
        assert_eq!(two_x.residues(), vec![0]);
        assert_eq!(two_x.lattice(), &[2]);
        assert_eq!(x.checked_scale(3).unwrap().residues(), vec![1]);
        assert!(x.checked_add(&x.checked_neg().unwrap()).unwrap().is_zero());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Element::scalar(-2).to_string(), "-2");
        assert_eq!(Element::new(vec![1, -1]).unwrap().to_string(), "(1,-1)");
        let x = MixedElement::from_raw(&[1, 0], &[2, 4], Element::new(vec![1, 2]).unwrap()).unwrap();
        assert_eq!(x.to_string(), "(1,0|1,2)");
    }
}
