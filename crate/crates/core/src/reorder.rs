//! Orderings of sequences and their prefix sums.
//!
//! Positions refer to the flattened sequence: canonical element order with
//! multiplicities expanded, numbered from 0. For integer atoms a *nyctalopic*
//! ordering picks every element after the first with sign opposite to the
//! running prefix sum; such orderings keep all prefix sums inside
//! `[min X, max X]`.

use std::collections::HashSet;

use serde::Serialize;

use crate::element::{Element, Symbol};
use crate::error::{Error, Result};
use crate::sequence::Sequence;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ordering {
    pub perm: Vec<usize>,
    pub prefix_sums: Vec<Element>,
}

impl Ordering {
    /// Builds the ordering for `perm` (a full permutation of positions).
    pub fn new(s: &Sequence<Element>, perm: Vec<usize>) -> Result<Self> {
        let flat = s.flatten();
        check_injective(&perm, flat.len())?;
        if perm.len() != flat.len() {
            return Err(Error::InvalidArgument(format!(
                "permutation has {} entries for a sequence of length {}",
                perm.len(),
                flat.len()
            )));
        }
        let prefix_sums = prefix_sums(&flat, &perm)?;
        Ok(Ordering { perm, prefix_sums })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// The elements in chosen order.
    pub fn elements(&self, s: &Sequence<Element>) -> Vec<Element> {
        let flat = s.flatten();
        self.perm.iter().map(|&p| flat[p].clone()).collect()
    }
}

fn check_injective(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n {
            return Err(Error::InvalidArgument(format!(
                "position {p} out of range for length {n}"
            )));
        }
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidArgument(format!("position {p} used twice")));
        }
    }
    Ok(())
}

fn prefix_sums(flat: &[Element], perm: &[usize]) -> Result<Vec<Element>> {
    let mut out: Vec<Element> = Vec::with_capacity(perm.len());
    for &p in perm {
        let next = match out.last() {
            Some(prev) => prev.checked_add(&flat[p])?,
            None => flat[p].clone(),
        };
        out.push(next);
    }
    Ok(out)
}

fn integer_terms(s: &Sequence<Element>) -> Result<Vec<i64>> {
    if let Some(x) = s.iter().map(|(x, _)| x).find(|x| x.dim() != 1) {
        return Err(Error::DimensionMismatch {
            left: 1,
            right: x.dim(),
        });
    }
    Ok(s.flatten().iter().map(|x| x.coords()[0]).collect())
}

/// Whether the first `k` chosen positions of `perm` form a nyctalopic
/// prefix: every element from the second on has sign opposite to the sum
/// before it.
pub fn is_nyctalopic(s: &Sequence<Element>, perm: &[usize], k: usize) -> Result<bool> {
    let terms = integer_terms(s)?;
    let n = terms.len();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "nyctalopic orderings need length at least 2".into(),
        ));
    }
    if k == 0 || k > n || perm.len() < k {
        return Err(Error::InvalidArgument(format!(
            "k = {k} must lie in [1, {n}] and not exceed the {} given positions",
            perm.len()
        )));
    }
    check_injective(&perm[..k], n)?;
    let mut sum = terms[perm[0]] as i128;
    for &p in &perm[1..k] {
        let x = terms[p] as i128;
        if x * sum >= 0 {
            return Ok(false);
        }
        sum += x;
    }
    Ok(true)
}

/// Extends a nyctalopic seed to a full nyctalopic ordering, always taking
/// the unused position of smallest index whose element opposes the running
/// sum.
pub fn nyctalopic_extend(s: &Sequence<Element>, seed: &[usize]) -> Result<Ordering> {
    let terms = integer_terms(s)?;
    if seed.is_empty() {
        return Err(Error::InvalidArgument(
            "seed must fix at least the first position".into(),
        ));
    }
    if !is_nyctalopic(s, seed, seed.len())? {
        return Err(Error::InvalidArgument("seed is not nyctalopic".into()));
    }
    if !s.is_zero_sum() {
        return Err(Error::NotMinimalOrBadSeed("sequence does not sum to zero".into()));
    }
    let n = terms.len();
    let mut used = vec![false; n];
    let mut perm = seed.to_vec();
    let mut sum: i128 = 0;
    for &p in seed {
        used[p] = true;
        sum += terms[p] as i128;
    }
    while perm.len() < n {
        let next = (0..n).find(|&j| !used[j] && (terms[j] as i128) * sum < 0);
        let Some(j) = next else {
            return Err(Error::NotMinimalOrBadSeed(format!(
                "no unused element opposes the prefix sum {sum} after {} steps",
                perm.len()
            )));
        };
        used[j] = true;
        sum += terms[j] as i128;
        perm.push(j);
    }
    Ordering::new(s, perm)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContainmentReport {
    pub min_prefix: i64,
    pub max_prefix: i64,
    /// Whether every prefix sum had to stay strictly below `max X`.
    pub strict_right: bool,
    /// Whether every prefix sum had to stay strictly above `min X`.
    pub strict_left: bool,
}

/// Checks that the prefix sums of a nyctalopic ordering of an atom over
/// `[lo, hi]` stay in `[lo, hi]`, strictly below `hi` unless the ordering
/// starts with `hi`, and strictly above `lo` unless it starts with `lo`.
/// A violation is reported as a consistency error.
pub fn containment_check(s: &Sequence<Element>, ord: &Ordering, lo: i64, hi: i64) -> Result<ContainmentReport> {
    let terms = integer_terms(s)?;
    if ord.perm.len() != terms.len() {
        return Err(Error::InvalidArgument("ordering does not cover the sequence".into()));
    }
    if let Some(&x) = terms.iter().find(|&&x| x < lo || x > hi) {
        return Err(Error::InvalidArgument(format!("{x} is outside [{lo}, {hi}]")));
    }
    let first = terms[ord.perm[0]];
    let strict_right = first != hi;
    let strict_left = first != lo;
    let sums: Vec<i64> = ord.prefix_sums.iter().map(|e| e.coords()[0]).collect();
    let min_prefix = *sums.iter().min().expect("nonempty ordering");
    let max_prefix = *sums.iter().max().expect("nonempty ordering");
    let right_ok = if strict_right {
        max_prefix < hi
    } else {
        max_prefix <= hi
    };
    let left_ok = if strict_left { min_prefix > lo } else { min_prefix >= lo };
    if !(right_ok && left_ok) {
        return Err(Error::Consistency(format!(
            "prefix sums of {s} span [{min_prefix}, {max_prefix}], outside the guaranteed range for [{lo}, {hi}]"
        )));
    }
    Ok(ContainmentReport {
        min_prefix,
        max_prefix,
        strict_right,
        strict_left,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxReordering {
    pub ordering: Ordering,
    /// Coordinate-wise bounding box of the prefix sums.
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    /// Largest sup-norm among the prefix sums.
    pub max_sup: u64,
    /// `max_sup` divided by the largest sup-norm of a term.
    pub ratio: f64,
    /// `d + 1/d - 1`, for comparison only.
    pub steinitz_constant: f64,
}

/// Greedy heuristic: repeatedly appends the remaining element that makes the
/// next prefix sum smallest in sup-norm, preferring the lexicographically
/// smallest element on ties (and its first unused position). No optimality
/// claim.
pub fn greedy_box_reorder(s: &Sequence<Element>) -> Result<BoxReordering> {
    greedy_box_reorder_seeded(s, &[])
}

/// [`greedy_box_reorder`] after a fixed initial run of positions.
pub fn greedy_box_reorder_seeded(s: &Sequence<Element>, seed: &[usize]) -> Result<BoxReordering> {
    if !s.is_zero_sum() {
        return Err(Error::InvalidArgument(format!("{s} is not a zero-sum sequence")));
    }
    let flat = s.flatten();
    let n = flat.len();
    check_injective(seed, n)?;
    let d = flat[0].dim();
    let mut used = vec![false; n];
    let mut perm = Vec::with_capacity(n);
    let mut sum = Element::zero(d);
    for &p in seed {
        used[p] = true;
        sum = sum.checked_add(&flat[p])?;
        perm.push(p);
    }
    while perm.len() < n {
        // flat is sorted, so the first unused copy of each value comes first
        let mut best: Option<(u64, usize)> = None;
        let mut tried: HashSet<&Element> = HashSet::new();
        for j in (0..n).filter(|&j| !used[j]) {
            if !tried.insert(&flat[j]) {
                continue;
            }
            let norm = sum.checked_add(&flat[j])?.sup_norm();
            if best.is_none_or(|(b, _)| norm < b) {
                best = Some((norm, j));
            }
        }
        let (_, j) = best.expect("an unused position remains");
        used[j] = true;
        sum = sum.checked_add(&flat[j])?;
        perm.push(j);
    }
    let ordering = Ordering::new(s, perm)?;
    let mut lo = vec![i64::MAX; d];
    let mut hi = vec![i64::MIN; d];
    for p in &ordering.prefix_sums {
        for (c, &v) in p.coords().iter().enumerate() {
            lo[c] = lo[c].min(v);
            hi[c] = hi[c].max(v);
        }
    }
    let max_sup = ordering.prefix_sums.iter().map(Element::sup_norm).max().unwrap_or(0);
    let term_sup = flat.iter().map(Element::sup_norm).max().unwrap_or(0);
    let ratio = if term_sup == 0 {
        0.0
    } else {
        max_sup as f64 / term_sup as f64
    };
    let dd = d as f64;
    Ok(BoxReordering {
        ordering,
        lo,
        hi,
        max_sup,
        ratio,
        steinitz_constant: dd + 1.0 / dd - 1.0,
    })
}

/// True when all prefix sums of `ord` are pairwise distinct, as they must be
/// for an atom.
pub fn prefix_sums_distinct(ord: &Ordering) -> bool {
    let mut seen = HashSet::new();
    ord.prefix_sums.iter().all(|p| seen.insert(p))
}

/// For length at least 3: no prefix sum other than the second equals
/// `x_1 + x_3` (positions in chosen order). Vacuously true for shorter
/// orderings.
pub fn refine_holds(s: &Sequence<Element>, ord: &Ordering) -> Result<bool> {
    if ord.len() < 3 {
        return Ok(true);
    }
    let chosen = ord.elements(s);
    let target = chosen[0].checked_add(&chosen[2])?;
    Ok(ord.prefix_sums.iter().enumerate().all(|(i, p)| i == 1 || *p != target))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PigeonCheck {
    /// Whether every prefix sum lies in the given set.
    pub contained: bool,
    pub length: usize,
    pub set_size: usize,
    /// `length <= set_size` (only meaningful when `contained`).
    pub count_bound: bool,
    /// Whether the sharpened hypotheses hold: length at least 3,
    /// `x_2 != x_3` and `x_1 + x_3` in the set.
    pub sharpened_applies: bool,
    /// `length <= set_size - 1` (only meaningful when `sharpened_applies`).
    pub sharpened_bound: bool,
}

impl PigeonCheck {
    /// True unless a bound whose hypotheses hold is violated.
    pub fn consistent(&self) -> bool {
        !self.contained || (self.count_bound && (!self.sharpened_applies || self.sharpened_bound))
    }
}

/// Counting check for an ordering whose prefix sums are meant to land in
/// `set`: distinct prefix sums give `n <= |set|`; when also `x_2 != x_3` and
/// `x_1 + x_3` is in `set` (a value no other prefix sum can take),
/// `n <= |set| - 1`.
pub fn pigeon_check(s: &Sequence<Element>, ord: &Ordering, set: &[Element]) -> Result<PigeonCheck> {
    let set: HashSet<&Element> = set.iter().collect();
    let n = ord.len();
    let contained = ord.prefix_sums.iter().all(|p| set.contains(p));
    let chosen = ord.elements(s);
    let sharpened_applies =
        contained && n >= 3 && chosen[1] != chosen[2] && set.contains(&chosen[0].checked_add(&chosen[2])?);
    Ok(PigeonCheck {
        contained,
        length: n,
        set_size: set.len(),
        count_bound: n <= set.len(),
        sharpened_applies,
        sharpened_bound: n < set.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(items: &[(i64, u64)]) -> Sequence<Element> {
        Sequence::from_counts(items.iter().map(|&(x, k)| (Element::scalar(x), k))).unwrap()
    }

    fn ints(ord: &Ordering) -> Vec<i64> {
        ord.prefix_sums.iter().map(|e| e.coords()[0]).collect()
    }

    #[test]
    fn nyctalopic_predicate() {
        // flattened: -1, -1, 2
        let s = seq(&[(2, 1), (-1, 2)]);
        assert!(is_nyctalopic(&s, &[2, 0, 1], 3).unwrap());
        assert!(!is_nyctalopic(&s, &[0, 1, 2], 3).unwrap());
        assert!(is_nyctalopic(&s, &[0, 1, 2], 1).unwrap());
        assert!(is_nyctalopic(&s, &[1], 1).unwrap());
        let plane =
            Sequence::from_elements([Element::new(vec![1, 0]).unwrap(), Element::new(vec![-1, 0]).unwrap()]).unwrap();
        assert!(matches!(
            is_nyctalopic(&plane, &[0, 1], 2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn extend_examples() {
        // flattened: -2, -2, -2, 3, 3
        let s = seq(&[(3, 2), (-2, 3)]);
        let ord = nyctalopic_extend(&s, &[3]).unwrap();
        assert_eq!(ord.perm, vec![3, 0, 1, 4, 2]);
        assert_eq!(ints(&ord), vec![3, 1, -1, 2, 0]);
        let rep = containment_check(&s, &ord, -2, 3).unwrap();
        assert_eq!(
            (rep.min_prefix, rep.max_prefix, rep.strict_left, rep.strict_right),
            (-1, 3, true, false)
        );

        let s = seq(&[(1, 1), (-1, 1)]);
        let ord = nyctalopic_extend(&s, &[1]).unwrap();
        assert_eq!(ints(&ord), vec![1, 0]);
        let rep = containment_check(&s, &ord, -1, 1).unwrap();
        assert_eq!((rep.min_prefix, rep.max_prefix), (0, 1));

        let s = seq(&[(2, 1), (-1, 2)]);
        let ord = nyctalopic_extend(&s, &[0]).unwrap();
        assert_eq!(ord.perm, vec![0, 2, 1]);
        assert_eq!(ints(&ord), vec![-1, 1, 0]);
        let rep = containment_check(&s, &ord, -2, 2).unwrap();
        assert!(rep.strict_left && rep.strict_right);
        assert_eq!((rep.min_prefix, rep.max_prefix), (-1, 1));
    }

    #[test]
    fn extend_errors() {
        let s = seq(&[(2, 1), (-1, 2)]);
        assert!(matches!(nyctalopic_extend(&s, &[0, 1]), Err(Error::InvalidArgument(_))));
        // 1^2 (-1)^2 is zero-sum but not minimal: the prefix returns to 0 early
        let s = seq(&[(1, 2), (-1, 2)]);
        assert!(matches!(
            nyctalopic_extend(&s, &[0]),
            Err(Error::NotMinimalOrBadSeed(_))
        ));
    }

    #[test]
    fn containment_violation_is_consistency_error() {
        // a non-nyctalopic order of an atom can leave the interval
        let s = seq(&[(3, 2), (-2, 3)]);
        let ord = Ordering::new(&s, vec![3, 4, 0, 1, 2]).unwrap();
        assert!(containment_check(&s, &ord, -2, 3).unwrap_err().is_consistency());
    }

    #[test]
    fn greedy_box_examples() {
        let e = |a, b| Element::new(vec![a, b]).unwrap();
        let s = Sequence::from_counts([(e(1, 1), 1), (e(-1, 1), 1), (e(0, -1), 2)]).unwrap();
        let r = greedy_box_reorder(&s).unwrap();
        assert!(r.max_sup <= 2);
        assert_eq!(r.max_sup, 1);
        assert_eq!(r.steinitz_constant, 1.5);
        let s = Sequence::from_elements([e(2, -1), e(-2, 1)]).unwrap();
        let r = greedy_box_reorder(&s).unwrap();
        assert_eq!(r.ordering.prefix_sums[0], e(-2, 1));
        assert_eq!((r.lo.clone(), r.hi.clone()), (vec![-2, 0], vec![0, 1]));
        assert!(greedy_box_reorder(&seq(&[(1, 1)])).is_err());
    }

    #[test]
    fn predicates_on_an_atom() {
        let s = seq(&[(3, 2), (-2, 3)]);
        let ord = nyctalopic_extend(&s, &[3]).unwrap();
        assert!(prefix_sums_distinct(&ord));
        assert!(refine_holds(&s, &ord).unwrap());
        let x: Vec<Element> = (-2..=3).map(Element::scalar).collect();
        let p = pigeon_check(&s, &ord, &x).unwrap();
        assert!(p.contained && p.count_bound && p.consistent());
        // order 3, -2, -2: x_2 = x_3, so only the plain bound applies
        assert!(!p.sharpened_applies);
    }
}
