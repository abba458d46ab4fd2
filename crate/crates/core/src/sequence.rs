//! Unordered sequences (multisets) stored as multiplicity maps.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::element::{Element, MixedElement, Symbol};
use crate::error::{Error, Result};
use crate::ground::Parser;
use crate::group::GroupSpec;

/// A finite multiset of symbols. Entries are kept in canonical (ascending)
/// order with strictly positive multiplicities; length and sum are cached.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequence<T: Symbol> {
    entries: BTreeMap<T, u64>,
    len: u64,
    sum: Option<T>,
}

impl<T: Symbol> Default for Sequence<T> {
    fn default() -> Self {
        Sequence {
            entries: BTreeMap::new(),
            len: 0,
            sum: None,
        }
    }
}

impl<T: Symbol> Sequence<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a canonical sequence from `(symbol, multiplicity)` pairs in any
    /// order. Repeated symbols are merged and zero multiplicities dropped.
    pub fn from_counts<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, u64)>,
    {
        let mut s = Sequence::new();
        for (x, k) in pairs {
            s.push_n(x, k)?;
        }
        Ok(s)
    }

    pub fn from_elements<I>(items: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
    {
        Self::from_counts(items.into_iter().map(|x| (x, 1)))
    }

    /// Adds `k` copies of `x`.
    pub fn push_n(&mut self, x: T, k: u64) -> Result<()> {
        if k == 0 {
            return Ok(());
        }
        let contribution = x.checked_scale(k)?;
        let sum = match &self.sum {
            Some(s) => s.checked_add(&contribution)?,
            None => contribution,
        };
        let len = self.len.checked_add(k).ok_or(Error::Overflow)?;
        let slot = self.entries.entry(x).or_insert(0);
        *slot = slot.checked_add(k).ok_or(Error::Overflow)?;
        self.len = len;
        self.sum = Some(sum);
        Ok(())
    }

    pub fn push(&mut self, x: T) -> Result<()> {
        self.push_n(x, 1)
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Component-wise sum; `None` for the empty sequence.
    pub fn sum(&self) -> Option<&T> {
        self.sum.as_ref()
    }

    pub fn multiplicity(&self, x: &T) -> u64 {
        self.entries.get(x).copied().unwrap_or(0)
    }

    /// Distinct symbols with multiplicities, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&T, u64)> + '_ {
        self.entries.iter().map(|(x, &k)| (x, k))
    }

    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn support(&self) -> Vec<T> {
        self.entries.keys().cloned().collect()
    }

    /// Every term, multiplicities expanded, in canonical order.
    pub fn flatten(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.len as usize);
        for (x, &k) in &self.entries {
            for _ in 0..k {
                out.push(x.clone());
            }
        }
        out
    }

    /// Returns the canonical form. Sequences are stored canonically already;
    /// this rebuilds the cached length and sum from the entries.
    pub fn canonicalize(&self) -> Result<Self> {
        Self::from_counts(self.entries.iter().map(|(x, &k)| (x.clone(), k)))
    }

    pub fn negate(&self) -> Result<Self> {
        Self::from_counts(
            self.entries
                .iter()
                .map(|(x, &k)| x.checked_neg().map(|n| (n, k)))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// The `u`-fold concatenation of `self`.
    pub fn power(&self, u: u64) -> Result<Self> {
        Self::from_counts(
            self.entries
                .iter()
                .map(|(x, &k)| k.checked_mul(u).map(|n| (x.clone(), n)).ok_or(Error::Overflow))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn is_subsequence_of(&self, other: &Self) -> bool {
        self.entries.iter().all(|(x, &k)| other.multiplicity(x) >= k)
    }

    /// True when `self` is a subsequence of `other` and strictly shorter.
    pub fn is_proper_subsequence_of(&self, other: &Self) -> bool {
        self.len < other.len && self.is_subsequence_of(other)
    }

    pub fn is_zero_sum(&self) -> bool {
        self.sum.as_ref().is_some_and(Symbol::is_zero)
    }
}

impl<T: Symbol> fmt::Display for Sequence<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("1");
        }
        for (i, (x, &k)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            let text = x.to_string();
            let text = if text.starts_with('-') && k > 1 {
                format!("({text})")
            } else {
                text
            };
            if k == 1 {
                f.write_str(&text)?;
            } else {
                write!(f, "{text}^{k}")?;
            }
        }
        Ok(())
    }
}

impl<T: Symbol> fmt::Debug for Sequence<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<T: Symbol + Serialize> Serialize for Sequence<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a, T> {
            element: &'a T,
            mult: u64,
        }
        let entries: Vec<Entry<'_, T>> = self
            .entries
            .iter()
            .map(|(element, &mult)| Entry { element, mult })
            .collect();
        let mut st = serializer.serialize_struct("Sequence", 3)?;
        st.serialize_field("text", &self.to_string())?;
        st.serialize_field("length", &self.len)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

/// A sequence over either a lattice ground set or a group product.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(untagged)]
pub enum AnySequence {
    Lattice(Sequence<Element>),
    Mixed(Sequence<MixedElement>),
}

impl AnySequence {
    pub fn len(&self) -> u64 {
        match self {
            AnySequence::Lattice(s) => s.len(),
            AnySequence::Mixed(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_zero_sum(&self) -> bool {
        match self {
            AnySequence::Lattice(s) => s.is_zero_sum(),
            AnySequence::Mixed(s) => s.is_zero_sum(),
        }
    }

    pub fn negate(&self) -> Result<AnySequence> {
        Ok(match self {
            AnySequence::Lattice(s) => AnySequence::Lattice(s.negate()?),
            AnySequence::Mixed(s) => AnySequence::Mixed(s.negate()?),
        })
    }

    pub fn as_lattice(&self) -> Option<&Sequence<Element>> {
        match self {
            AnySequence::Lattice(s) => Some(s),
            AnySequence::Mixed(_) => None,
        }
    }

    /// Parses text such as `3^2 * (-2)^3`, `(1,0)^2 * (-1,0)^2` or, with a
    /// group, `(1|2) * (1|-2)`. Inverse of `Display`.
    pub fn parse(text: &str, group: Option<&GroupSpec>) -> Result<AnySequence> {
        Parser::new(text).sequence(group)
    }

    pub fn as_mixed(&self) -> Option<&Sequence<MixedElement>> {
        match self {
            AnySequence::Mixed(s) => Some(s),
            AnySequence::Lattice(_) => None,
        }
    }
}

impl fmt::Display for AnySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnySequence::Lattice(s) => fmt::Display::fmt(s, f),
            AnySequence::Mixed(s) => fmt::Display::fmt(s, f),
        }
    }
}

impl From<Sequence<Element>> for AnySequence {
    fn from(s: Sequence<Element>) -> Self {
        AnySequence::Lattice(s)
    }
}

impl From<Sequence<MixedElement>> for AnySequence {
    fn from(s: Sequence<MixedElement>) -> Self {
        AnySequence::Mixed(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(items: &[(i64, u64)]) -> Sequence<Element> {
        Sequence::from_counts(items.iter().map(|&(x, k)| (Element::scalar(x), k))).unwrap()
    }

    #[test]
    fn order_does_not_matter() {
        let a = Sequence::from_elements([Element::scalar(1), Element::scalar(-1)]).unwrap();
        let b = Sequence::from_elements([Element::scalar(-1), Element::scalar(1)]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_multiplicities_removed() {
        let s = seq(&[(3, 0), (1, 2)]);
        assert_eq!(s.distinct(), 1);
        assert_eq!(s.multiplicity(&Element::scalar(3)), 0);
    }

    #[test]
    fn canonical_entries_length_sum() {
        let s = Sequence::from_elements([Element::scalar(2), Element::scalar(-1), Element::scalar(-1)]).unwrap();
        let entries: Vec<(i64, u64)> = s.iter().map(|(x, k)| (x.coords()[0], k)).collect();
        assert_eq!(entries, vec![(-1, 2), (2, 1)]);
        assert_eq!(s.len(), 3);
        assert!(s.is_zero_sum());
        assert_eq!(s.to_string(), "(-1)^2 * 2");
    }

    #[test]
    fn power_and_subsequence() {
        let s = seq(&[(2, 1), (-1, 2)]);
        let s2 = s.power(2).unwrap();
        assert_eq!(s2.len(), 6);
        assert!(s.is_proper_subsequence_of(&s2));
        assert!(!s2.is_subsequence_of(&s));
        assert_eq!(s.negate().unwrap(), seq(&[(-2, 1), (1, 2)]));
    }

    #[test]
    fn empty_sequence() {
        let s: Sequence<Element> = Sequence::new();
        assert!(s.is_empty());
        assert!(s.sum().is_none());
        assert!(!s.is_zero_sum());
    }

    #[test]
    fn parse_display_round_trip() {
        let s = seq(&[(3, 2), (-2, 3)]);
        assert_eq!(s.to_string(), "(-2)^3 * 3^2");
        assert_eq!(
            AnySequence::parse("3^2 * (-2)^3", None).unwrap(),
            AnySequence::from(s.clone())
        );
        assert!(AnySequence::parse("3\u{b2}", None).is_err());
        assert_eq!(
            AnySequence::parse("3^2 \u{b7} (\u{2212}2)^3", None).unwrap(),
            AnySequence::from(s)
        );
        let plane = AnySequence::parse("(1,0)^2*(-1,0) * (-1,0)", None).unwrap();
        assert_eq!(plane.to_string(), "(-1,0)^2 * (1,0)^2");
        let g = GroupSpec::cyclic(3).unwrap();
        let mixed = AnySequence::parse("(1|2) * (4|-2)", Some(&g)).unwrap();
        assert_eq!(mixed.to_string(), "(1|-2) * (1|2)");
        assert!(mixed.as_mixed().is_some());
    }

    #[test]
    fn parse_rejects_malformed_sequences() {
        for bad in ["", "3^0", "3 ^ -1", "(1|2)", "1 * (1,2)", "3 *", "(1,2", "3 4"] {
            assert!(AnySequence::parse(bad, None).is_err(), "{bad}");
        }
        let g = GroupSpec::cyclic(2).unwrap();
        assert!(AnySequence::parse("(1|1) * 2", Some(&g)).is_err());
        assert!(AnySequence::parse("(1,1|1)", Some(&g)).is_err());
        assert_eq!(
            Element::parse(" ( 1 , -2 ) ").unwrap(),
            Element::new(vec![1, -2]).unwrap()
        );
        assert!(Element::parse("1 2").is_err());
    }
}
