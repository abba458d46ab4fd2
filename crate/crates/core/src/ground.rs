//! Finite ground sets: intervals, boxes, explicit sets and group products.
//!
//! Text grammar (whitespace-insensitive):
//!
//! ```text
//! ground   := group? set
//! group    := ("C" int "x")+
//! set      := boxes | explicit
//! boxes    := factor ("x" factor)*
//! factor   := "[" int "," int "]" ("^" int)?
//! explicit := "{" elem ("," elem)* "}"
//! elem     := int | "(" int ("," int)* ")"
//! ```
//!
//! A single bracket pair without exponent is an interval; anything else made
//! of brackets is a box.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::element::{Element, MixedElement, Symbol};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::sequence::{AnySequence, Sequence};

/// Default cap on the number of materialized ground-set elements.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGround", into = "RawGround")]
pub enum GroundSet {
    Interval {
        lo: i64,
        hi: i64,
    },
    Box {
        intervals: Vec<(i64, i64)>,
    },
    Explicit {
        elements: Vec<Element>,
    },
    GroupProduct {
        group: GroupSpec,
        base: std::boxed::Box<GroundSet>,
    },
}

/// The materialized elements of a ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Alphabet {
    Lattice(Vec<Element>),
    Mixed(Vec<MixedElement>),
}

impl Alphabet {
    pub fn len(&self) -> usize {
        match self {
            Alphabet::Lattice(v) => v.len(),
            Alphabet::Mixed(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl GroundSet {
    pub fn interval(lo: i64, hi: i64) -> Result<Self> {
        let g = GroundSet::Interval { lo, hi };
        g.validate()?;
        Ok(g)
    }

    pub fn boxed(intervals: Vec<(i64, i64)>) -> Result<Self> {
        let g = GroundSet::Box { intervals };
        g.validate()?;
        Ok(g)
    }

    /// `[-m, m]^d`.
    pub fn hypercube(m: i64, d: usize) -> Result<Self> {
        Self::boxed(vec![(-m, m); d])
    }

    pub fn explicit<I: IntoIterator<Item = Element>>(elements: I) -> Result<Self> {
        let set: BTreeSet<Element> = elements.into_iter().collect();
        let g = GroundSet::Explicit {
            elements: set.into_iter().collect(),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn explicit_scalars<I: IntoIterator<Item = i64>>(values: I) -> Result<Self> {
        Self::explicit(values.into_iter().map(Element::scalar))
    }

    pub fn product(group: GroupSpec, base: GroundSet) -> Result<Self> {
        let g = GroundSet::GroupProduct {
            group,
            base: std::boxed::Box::new(base),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GroundSet::Interval { lo, hi } => {
                if lo > hi {
                    return Err(Error::InvalidGround(format!("interval [{lo},{hi}] has lo > hi")));
                }
            }
            GroundSet::Box { intervals } => {
                if intervals.is_empty() {
                    return Err(Error::InvalidGround("a box needs at least one axis".into()));
                }
                for (axis, (lo, hi)) in intervals.iter().enumerate() {
                    if lo > hi {
                        return Err(Error::InvalidGround(format!("axis {axis}: [{lo},{hi}] has lo > hi")));
                    }
                }
            }
            GroundSet::Explicit { elements } => {
                let Some(first) = elements.first() else {
                    return Err(Error::InvalidGround("explicit set is empty".into()));
                };
                if elements.iter().any(|e| e.dim() != first.dim()) {
                    return Err(Error::InvalidGround("explicit set mixes dimensions".into()));
                }
                if elements.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::InvalidGround(
                        "explicit set must be sorted without duplicates".into(),
                    ));
                }
            }
            GroundSet::GroupProduct { group, base } => {
                if group.is_trivial() {
                    return Err(Error::InvalidGround(
                        "group factor of a product must be nontrivial".into(),
                    ));
                }
                if matches!(**base, GroundSet::GroupProduct { .. }) {
                    return Err(Error::InvalidGround("group products nest at most one level".into()));
                }
                base.validate()?;
            }
        }
        Ok(())
    }

    /// Dimension of the lattice part.
    pub fn dim(&self) -> usize {
        match self {
            GroundSet::Interval { .. } => 1,
            GroundSet::Box { intervals } => intervals.len(),
            GroundSet::Explicit { elements } => elements[0].dim(),
            GroundSet::GroupProduct { base, .. } => base.dim(),
        }
    }

    pub fn group(&self) -> Option<&GroupSpec> {
        match self {
            GroundSet::GroupProduct { group, .. } => Some(group),
            _ => None,
        }
    }

    /// The lattice part: `self` unless this is a group product.
    pub fn lattice_part(&self) -> &GroundSet {
        match self {
            GroundSet::GroupProduct { base, .. } => base,
            other => other,
        }
    }

    /// Per-axis `(min, max)` of the lattice part.
    pub fn lattice_bounds(&self) -> Vec<(i64, i64)> {
        match self {
            GroundSet::Interval { lo, hi } => vec![(*lo, *hi)],
            GroundSet::Box { intervals } => intervals.clone(),
            GroundSet::Explicit { elements } => (0..elements[0].dim())
                .map(|axis| {
                    let coords = elements.iter().map(|e| e.coords()[axis]);
                    (coords.clone().min().unwrap(), coords.max().unwrap())
                })
                .collect(),
            GroundSet::GroupProduct { base, .. } => base.lattice_bounds(),
        }
    }

    /// Exact number of elements.
    pub fn cardinality(&self) -> Result<u128> {
        match self {
            GroundSet::Interval { lo, hi } => Ok((*hi as i128 - *lo as i128 + 1) as u128),
            GroundSet::Box { intervals } => intervals.iter().try_fold(1u128, |acc, (lo, hi)| {
                acc.checked_mul((*hi as i128 - *lo as i128 + 1) as u128)
                    .ok_or(Error::Overflow)
            }),
            GroundSet::Explicit { elements } => Ok(elements.len() as u128),
            GroundSet::GroupProduct { group, base } => base
                .cardinality()?
                .checked_mul(u128::from(group.order()?))
                .ok_or(Error::Overflow),
        }
    }

    pub fn contains(&self, x: &Element) -> bool {
        match self {
            GroundSet::Interval { lo, hi } => x.as_scalar().is_some_and(|v| *lo <= v && v <= *hi),
            GroundSet::Box { intervals } => {
                x.dim() == intervals.len() && x.coords().iter().zip(intervals).all(|(c, (lo, hi))| lo <= c && c <= hi)
            }
            GroundSet::Explicit { elements } => elements.binary_search(x).is_ok(),
            GroundSet::GroupProduct { .. } => false,
        }
    }

    pub fn contains_mixed(&self, x: &MixedElement) -> bool {
        match self {
            GroundSet::GroupProduct { group, base } => {
                x.group_part().len() == group.rank()
                    && x.group_part()
                        .iter()
                        .zip(group.factors())
                        .all(|(r, &n)| r.modulus() == n)
                    && base.contains(x.lattice_part())
            }
            _ => false,
        }
    }

    /// The mirror set `-X`.
    pub fn negated(&self) -> Result<GroundSet> {
        let neg = |v: i64| v.checked_neg().ok_or(Error::Overflow);
        match self {
            GroundSet::Interval { lo, hi } => GroundSet::interval(neg(*hi)?, neg(*lo)?),
            GroundSet::Box { intervals } => GroundSet::boxed(
                intervals
                    .iter()
                    .map(|(lo, hi)| Ok((neg(*hi)?, neg(*lo)?)))
                    .collect::<Result<Vec<_>>>()?,
            ),
            GroundSet::Explicit { elements } => {
                GroundSet::explicit(elements.iter().map(Symbol::checked_neg).collect::<Result<Vec<_>>>()?)
            }
            GroundSet::GroupProduct { group, base } => GroundSet::product(group.clone(), base.negated()?),
        }
    }

    /// Materializes the set with the default cap.
    pub fn enumerate(&self) -> Result<Alphabet> {
        self.enumerate_capped(DEFAULT_ENUMERATION_CAP)
    }

    /// Materializes every element in canonical order, refusing when the
    /// cardinality exceeds `cap`.
    pub fn enumerate_capped(&self, cap: u128) -> Result<Alphabet> {
        let card = self.cardinality()?;
        if card > cap {
            return Err(Error::Guard {
                what: "ground-set cardinality",
                needed: card,
                cap,
            });
        }
        match self {
            GroundSet::GroupProduct { group, base } => {
                let lattice = base.lattice_points();
                let mut out = Vec::with_capacity(card as usize);
                for g in group.elements() {
                    for x in &lattice {
                        out.push(MixedElement::new(g.clone(), x.clone()));
                    }
                }
                Ok(Alphabet::Mixed(out))
            }
            lattice => Ok(Alphabet::Lattice(lattice.lattice_points())),
        }
    }

    /// Lattice points of a non-product set, lexicographically sorted.
    pub fn lattice_points(&self) -> Vec<Element> {
        match self {
            GroundSet::Interval { lo, hi } => (*lo..=*hi).map(Element::scalar).collect(),
            GroundSet::Box { intervals } => {
                let mut out = Vec::new();
                let mut current: Vec<i64> = intervals.iter().map(|(lo, _)| *lo).collect();
                loop {
                    out.push(Element::new(current.clone()).expect("box has at least one axis"));
                    // odometer, last axis fastest
                    let mut axis = intervals.len();
                    loop {
                        if axis == 0 {
                            return out;
                        }
                        axis -= 1;
                        if current[axis] < intervals[axis].1 {
                            current[axis] += 1;
                            for later in axis + 1..intervals.len() {
                                current[later] = intervals[later].0;
                            }
                            break;
                        }
                    }
                }
            }
            GroundSet::Explicit { elements } => elements.clone(),
            GroundSet::GroupProduct { base, .. } => base.lattice_points(),
        }
    }

    /// For 1-d sets: the sorted integer values.
    pub fn scalars(&self) -> Option<Vec<i64>> {
        if self.dim() != 1 || self.group().is_some() {
            return None;
        }
        Some(self.lattice_points().iter().map(|e| e.coords()[0]).collect())
    }

    /// Returns `Some((m, M))` when the set is exactly the interval `[-m, M]`
    /// with `m, M >= 1`.
    pub fn as_centered_interval(&self) -> Option<(i64, i64)> {
        match self {
            GroundSet::Interval { lo, hi } if *lo < 0 && *hi > 0 => Some((-lo, *hi)),
            GroundSet::Box { intervals } if intervals.len() == 1 => GroundSet::Interval {
                lo: intervals[0].0,
                hi: intervals[0].1,
            }
            .as_centered_interval(),
            _ => None,
        }
    }

    /// Returns `Some((m, d))` when the set is the hypercube `[-m, m]^d`, `m >= 1`.
    pub fn as_hypercube(&self) -> Option<(i64, usize)> {
        match self {
            GroundSet::Interval { lo, hi } if *lo == -*hi && *hi > 0 => Some((*hi, 1)),
            GroundSet::Box { intervals } => {
                let (lo, hi) = intervals[0];
                (lo == -hi && hi > 0 && intervals.iter().all(|&iv| iv == (lo, hi))).then_some((hi, intervals.len()))
            }
            _ => None,
        }
    }

    pub fn parse(text: &str) -> Result<GroundSet> {
        Parser::new(text).ground()
    }
}

impl std::str::FromStr for GroundSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroundSet::parse(s)
    }
}

impl fmt::Display for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundSet::Interval { lo, hi } => write!(f, "[{lo},{hi}]"),
            GroundSet::Box { intervals } => {
                let first = intervals[0];
                if intervals.len() == 1 || intervals.iter().all(|&iv| iv == first) {
                    write!(f, "[{},{}]^{}", first.0, first.1, intervals.len())
                } else {
                    for (i, (lo, hi)) in intervals.iter().enumerate() {
                        if i > 0 {
                            f.write_str("x")?;
                        }
                        write!(f, "[{lo},{hi}]")?;
                    }
                    Ok(())
                }
            }
            GroundSet::Explicit { elements } => {
                f.write_str("{")?;
                for (i, e) in elements.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str("}")
            }
            GroundSet::GroupProduct { group, base } => write!(f, "{group}x{base}"),
        }
    }
}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroundSet({self})")
    }
}

/// JSON shape of a ground set: a tagged union mirroring the grammar.
#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RawGround {
    Interval {
        lo: i64,
        hi: i64,
    },
    Box {
        intervals: Vec<(i64, i64)>,
    },
    Explicit {
        elements: Vec<Element>,
    },
    GroupProduct {
        group: GroupSpec,
        base: std::boxed::Box<RawGround>,
    },
}

impl TryFrom<RawGround> for GroundSet {
    type Error = Error;

    fn try_from(raw: RawGround) -> Result<Self> {
        match raw {
            RawGround::Interval { lo, hi } => GroundSet::interval(lo, hi),
            RawGround::Box { intervals } => GroundSet::boxed(intervals),
            RawGround::Explicit { elements } => {
                let n = elements.len();
                let g = GroundSet::explicit(elements)?;
                match &g {
                    GroundSet::Explicit { elements } if elements.len() != n => {
                        Err(Error::InvalidGround("explicit set contains duplicates".into()))
                    }
                    _ => Ok(g),
                }
            }
            RawGround::GroupProduct { group, base } => GroundSet::product(group, GroundSet::try_from(*base)?),
        }
    }
}

impl From<GroundSet> for RawGround {
    fn from(g: GroundSet) -> Self {
        match g {
            GroundSet::Interval { lo, hi } => RawGround::Interval { lo, hi },
            GroundSet::Box { intervals } => RawGround::Box { intervals },
            GroundSet::Explicit { elements } => RawGround::Explicit { elements },
            GroundSet::GroupProduct { group, base } => RawGround::GroupProduct {
                group,
                base: std::boxed::Box::new(RawGround::from(*base)),
            },
        }
    }
}

/// Recursive-descent parser over the whitespace-stripped input, keeping the
/// original byte offsets for error messages.
pub(crate) struct Parser {
    chars: Vec<(usize, char)>,
    at: usize,
    end: usize,
}

impl Parser {
    pub(crate) fn new(text: &str) -> Self {
        let normalize = |(p, c): (usize, char)| match c {
            '\u{2212}' => (p, '-'),
            '\u{b7}' => (p, '*'),
            _ => (p, c),
        };
        Parser {
            chars: text
                .char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .map(normalize)
                .collect(),
            at: 0,
            end: text.len(),
        }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or(self.end, |&(p, _)| p)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.at += 1;
        }
        c
    }

    fn expect(&mut self, want: char) -> Result<()> {
        let pos = self.pos();
        match self.bump() {
            Some(c) if c == want => Ok(()),
            Some(c) => Err(Error::parse(pos, format!("expected '{want}', found '{c}'"))),
            None => Err(Error::parse(pos, format!("expected '{want}', found end of input"))),
        }
    }

    fn reject_infinite(&self) -> Result<()> {
        let rest: String = self.chars[self.at..].iter().map(|&(_, c)| c).take(3).collect();
        let lower = rest.to_ascii_lowercase();
        if lower.starts_with("inf") || lower.starts_with("oo") || rest.starts_with('\u{221e}') {
            return Err(Error::parse(
                self.pos(),
                "unbounded interval: only finite ground sets are supported (infinite diameter)",
            ));
        }
        if rest.starts_with('Z') || rest.starts_with('N') {
            return Err(Error::parse(
                self.pos(),
                "infinite ground sets such as Z or N are not supported; give a finite interval",
            ));
        }
        Ok(())
    }

    fn int(&mut self) -> Result<i64> {
        self.reject_infinite()?;
        let start = self.pos();
        let mut text = String::new();
        if matches!(self.peek(), Some('-') | Some('+')) {
            text.push(self.bump().unwrap());
        }
        if matches!(self.peek(), Some('-') | Some('+')) {
            return Err(Error::parse(self.pos(), "repeated sign"));
        }
        self.reject_infinite()?;
        let mut last: Option<usize> = None;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            // digits split by whitespace are two numbers, not one
            if last.is_some_and(|p| self.pos() != p + 1) {
                break;
            }
            last = Some(self.pos());
            text.push(c);
            self.bump();
        }
        if text.is_empty() || text == "-" || text == "+" {
            return Err(match self.peek() {
                Some(c) => Error::parse(self.pos(), format!("expected an integer, found '{c}'")),
                None => Error::parse(self.pos(), "expected an integer, found end of input"),
            });
        }
        text.parse::<i64>()
            .map_err(|_| Error::parse(start, format!("integer '{text}' out of 64-bit range")))
    }

    fn uint(&mut self) -> Result<u64> {
        let pos = self.pos();
        let v = self.int()?;
        u64::try_from(v).map_err(|_| Error::parse(pos, "expected a non-negative integer"))
    }

    fn ground(&mut self) -> Result<GroundSet> {
        let mut factors = Vec::new();
        let group_pos = self.pos();
        while self.peek() == Some('C') {
            self.bump();
            let n_pos = self.pos();
            let n = self.uint()?;
            if n < 2 {
                return Err(Error::parse(n_pos, "cyclic factors must have order at least 2"));
            }
            factors.push(n);
            self.expect('x')?;
        }
        let base = self.set()?;
        if let Some(c) = self.peek() {
            return Err(Error::parse(self.pos(), format!("unexpected trailing '{c}'")));
        }
        if factors.is_empty() {
            return Ok(base);
        }
        let group = GroupSpec::new(factors).map_err(|e| Error::parse(group_pos, e.to_string()))?;
        GroundSet::product(group, base)
    }

    fn set(&mut self) -> Result<GroundSet> {
        match self.peek() {
            Some('{') => self.explicit(),
            Some('[') => self.boxes(),
            Some(c) => {
                self.reject_infinite()?;
                Err(Error::parse(self.pos(), format!("expected '[' or '{{', found '{c}'")))
            }
            None => Err(Error::parse(self.pos(), "expected a set, found end of input")),
        }
    }

    fn boxes(&mut self) -> Result<GroundSet> {
        let mut intervals = Vec::new();
        let mut plain_single = true;
        loop {
            let open = self.pos();
            self.expect('[')?;
            let lo = self.int()?;
            self.expect(',')?;
            let hi = self.int()?;
            self.expect(']')?;
            if lo > hi {
                return Err(Error::parse(open, format!("interval [{lo},{hi}] has lo > hi")));
            }
            let mut copies = 1;
            if self.peek() == Some('^') {
                self.bump();
                let pos = self.pos();
                copies = self.uint()?;
                if copies == 0 {
                    return Err(Error::parse(pos, "exponent must be positive"));
                }
                plain_single = false;
            }
            intervals.extend(std::iter::repeat_n((lo, hi), copies as usize));
            if self.peek() == Some('x') {
                self.bump();
                plain_single = false;
                if self.peek() != Some('[') {
                    return Err(Error::parse(self.pos(), "expected '[' after 'x'"));
                }
            } else {
                break;
            }
        }
        if plain_single {
            let (lo, hi) = intervals[0];
            return GroundSet::interval(lo, hi);
        }
        GroundSet::boxed(intervals)
    }

    fn int_list(&mut self) -> Result<Vec<i64>> {
        let mut out = vec![self.int()?];
        while self.peek() == Some(',') {
            self.bump();
            out.push(self.int()?);
        }
        Ok(out)
    }

    fn element(&mut self) -> Result<Element> {
        if self.peek() == Some('(') {
            self.bump();
            let coords = self.int_list()?;
            self.expect(')')?;
            Element::new(coords)
        } else {
            Ok(Element::scalar(self.int()?))
        }
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            Some(c) => Err(Error::parse(self.pos(), format!("unexpected trailing '{c}'"))),
            None => Ok(()),
        }
    }

    pub(crate) fn whole_element(&mut self) -> Result<Element> {
        let e = self.element()?;
        self.finish()?;
        Ok(e)
    }

    /// `term ("*" term)*` with `term := symbol ("^" int)?`. A symbol is an
    /// integer, a parenthesized tuple, or `(g1,..|x1,..)` for a point of a
    /// group product, which needs `group`.
    pub(crate) fn sequence(&mut self, group: Option<&GroupSpec>) -> Result<AnySequence> {
        let mut lattice: Vec<(Element, u64)> = Vec::new();
        let mut mixed: Vec<(MixedElement, u64)> = Vec::new();
        loop {
            let pos = self.pos();
            let mut residues = None;
            let coords = if self.peek() == Some('(') {
                self.bump();
                let first = self.int_list()?;
                let coords = if self.peek() == Some('|') {
                    self.bump();
                    residues = Some(first);
                    self.int_list()?
                } else {
                    first
                };
                self.expect(')')?;
                coords
            } else {
                vec![self.int()?]
            };
            let mut k = 1;
            if self.peek() == Some('^') {
                self.bump();
                let at = self.pos();
                k = self.uint()?;
                if k == 0 {
                    return Err(Error::parse(at, "multiplicity must be positive"));
                }
            }
            let x = Element::new(coords)?;
            match residues {
                Some(r) => {
                    let group = group
                        .ok_or_else(|| Error::parse(pos, "group elements need a group; pass a product ground set"))?;
                    let e =
                        MixedElement::from_raw(&r, group.factors(), x).map_err(|e| Error::parse(pos, e.to_string()))?;
                    mixed.push((e, k));
                }
                None => lattice.push((x, k)),
            }
            if !lattice.is_empty() && !mixed.is_empty() {
                return Err(Error::parse(pos, "cannot mix group-product and plain lattice elements"));
            }
            match self.peek() {
                Some('*') => {
                    self.bump();
                }
                _ => break,
            }
        }
        self.finish()?;
        if mixed.is_empty() {
            Ok(AnySequence::Lattice(Sequence::from_counts(lattice)?))
        } else {
            Ok(AnySequence::Mixed(Sequence::from_counts(mixed)?))
        }
    }

    fn explicit(&mut self) -> Result<GroundSet> {
        let open = self.pos();
        self.expect('{')?;
        let mut elements = Vec::new();
        loop {
            let pos = self.pos();
            let e = self.element()?;
            if let Some(first) = elements.first() {
                let first: &Element = first;
                if first.dim() != e.dim() {
                    return Err(Error::parse(
                        pos,
                        "all elements of an explicit set must share one dimension",
                    ));
                }
            }
            if elements.contains(&e) {
                return Err(Error::parse(pos, format!("duplicate element {e}")));
            }
            elements.push(e);
            match self.peek() {
                Some(',') => {
                    self.bump();
                }
                Some('}') => {
                    self.bump();
                    break;
                }
                Some(c) => return Err(Error::parse(self.pos(), format!("expected ',' or '}}', found '{c}'"))),
                None => return Err(Error::parse(self.pos(), format!("unclosed '{{' opened at byte {open}"))),
            }
        }
        GroundSet::explicit(elements)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_interval_box_product() {
        assert_eq!(
            GroundSet::parse("[-2,4]").unwrap(),
            GroundSet::Interval { lo: -2, hi: 4 }
        );
        assert_eq!(
            GroundSet::parse("[-1,1]^2").unwrap(),
            GroundSet::Box {
                intervals: vec![(-1, 1), (-1, 1)]
            }
        );
        let p = GroundSet::parse("C2 x [-2,2]").unwrap();
        assert_eq!(
            p,
            GroundSet::product(GroupSpec::cyclic(2).unwrap(), GroundSet::interval(-2, 2).unwrap()).unwrap()
        );
        let b = GroundSet::parse(" [ -1 , 2 ] x [0,3] ").unwrap();
        assert_eq!(
            b,
            GroundSet::Box {
                intervals: vec![(-1, 2), (0, 3)]
            }
        );
        let e = GroundSet::parse("{(1,1),(-1,0)}").unwrap();
        assert_eq!(e.dim(), 2);
        assert_eq!(GroundSet::parse("{3,-2}").unwrap().to_string(), "{-2,3}");
    }

    #[test]
    fn parse_errors_carry_positions() {
        match GroundSet::parse("[3,1]") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 0),
            other => panic!("unexpected {other:?}"),
        }
        match GroundSet::parse("[1, 2") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            GroundSet::parse("C2xC3x[0,1]"),
            Err(Error::Parse { pos: 0, .. })
        ));
        assert!(matches!(GroundSet::parse("[-1,inf]"), Err(Error::Parse { pos: 4, .. })));
        assert!(GroundSet::parse("Z").is_err());
        assert!(GroundSet::parse("{1,1}").is_err());
        assert!(GroundSet::parse("{1,(1,2)}").is_err());
        assert!(GroundSet::parse("[0,1]]").is_err());
        assert!(GroundSet::parse("").is_err());
        assert!(GroundSet::parse("[1 2,3]").is_err());
    }

    #[test]
    fn enumerate_examples() {
        let Alphabet::Lattice(v) = GroundSet::parse("[-1,1]").unwrap().enumerate().unwrap() else {
            panic!()
        };
        assert_eq!(v, vec![Element::scalar(-1), Element::scalar(0), Element::scalar(1)]);

        let Alphabet::Lattice(v) = GroundSet::parse("[-1,1]^2").unwrap().enumerate().unwrap() else {
            panic!()
        };
        assert_eq!(v.len(), 9);
        assert!(v.windows(2).all(|w| w[0] < w[1]));

        let Alphabet::Mixed(v) = GroundSet::parse("C2x[-1,1]").unwrap().enumerate().unwrap() else {
            panic!()
        };
        assert_eq!(v.len(), 6);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn enumeration_cap_reports_cardinality() {
        let g = GroundSet::parse("[-100,100]^3").unwrap();
        match g.enumerate() {
            Err(Error::Guard { needed, .. }) => assert_eq!(needed, 201u128.pow(3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(g.enumerate_capped(10_000_000).is_ok());
    }

    #[test]
    fn json_is_a_tagged_union() {
        let g = GroundSet::parse("C2x[-1,1]^2").unwrap();
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"group_product","group":[2],"base":{"kind":"box","intervals":[[-1,1],[-1,1]]}}"#
        );
        let back: GroundSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<GroundSet>(r#"{"kind":"interval","lo":2,"hi":1}"#).is_err());
        assert!(serde_json::from_str::<GroundSet>(r#"{"kind":"explicit","elements":[[1],[1]]}"#).is_err());
    }

    #[test]
    fn shape_queries() {
        assert_eq!(GroundSet::parse("[-2,3]").unwrap().as_centered_interval(), Some((2, 3)));
        assert_eq!(GroundSet::parse("[-2,2]^3").unwrap().as_hypercube(), Some((2, 3)));
        assert_eq!(GroundSet::parse("[-2,2]x[-2,1]").unwrap().as_hypercube(), None);
        assert_eq!(
            GroundSet::parse("[-2,3]").unwrap().negated().unwrap(),
            GroundSet::interval(-3, 2).unwrap()
        );
    }
}
