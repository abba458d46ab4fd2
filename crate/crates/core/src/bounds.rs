//! Closed-form bounds and exact values of Davenport constants.
//!
//! Every [`BoundReport`] lists the results it relies on as machine-readable
//! [`Provenance`] tags.

use serde::Serialize;

use crate::arith::gcd;
use crate::element::{Element, Symbol};
use crate::error::{Error, Result};
use crate::ground::GroundSet;
use crate::group::GroupSpec;

/// Identifiers of the results a bound is derived from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// A set of integers of one sign has no atom; with 0 adjoined only `0`.
    OneSidedSet,
    /// `chi(X) <= D(X)` via two-letter atoms `x^a y^b`.
    ChiLower,
    /// `D(X) <= diam(X)` via sign-alternating orderings.
    DiameterUpper,
    /// `D([-m, M]) = m + M` for coprime `m, M`.
    CoprimeInterval,
    /// `D([-m, m]) = 2m - 1` for `m >= 2`.
    SymmetricInterval,
    /// No atom of length `m + M` in `[-m, M]` unless `gcd(m, M) = 1`.
    NonCoprimeExclusion,
    /// Box upper bound from the sup-norm Steinitz constant `d + 1/d - 1`.
    SteinitzBox,
    /// Rectangle reordering with `(a, b) = (1, 2)`: `(2 m_1 + 1)(4 m_2 + 1)`.
    RectangleReordering,
    /// `D([-1, 1]^2) = 4`.
    UnitSquare,
    /// Lower bound `(2m - 1 + delta_m)^d` from the recursive hypercube atom.
    HypercubeConstruction,
    /// The zero element alone is an atom.
    ZeroElement,
    /// Two opposite collinear points give a two-letter atom.
    CollinearPair,
    /// `D(X) <= D(Y)` for `X` inside `Y`.
    Monotonicity,
    /// `D({0}) = 1`.
    TrivialGroup,
    /// `D(C_n) = n`.
    CyclicGroup,
    /// `D(G) >= 1 + sum(n_i - 1)`.
    InvariantFactorLower,
    /// Equality in the invariant-factor bound for rank at most two and p-groups.
    RankTwoOrPGroup,
    /// `D(G) <= (1 + ln(|G| / exp G)) exp G`.
    LogarithmicUpper,
    /// `D(G x X) <= D(G) D(X)`.
    ProductUpper,
    /// `D(C_n x [-m, m]^d) >= n (2m - 1 + delta_m)^d` via a Bezout-weighted atom.
    GroupBoxConstruction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub lower: u64,
    pub upper: u64,
    pub exact: bool,
    pub provenance: Vec<Provenance>,
}

impl BoundReport {
    fn new(lower: u64, upper: u64, mut provenance: Vec<Provenance>) -> Result<Self> {
        if lower > upper {
            return Err(Error::Consistency(format!(
                "lower bound {lower} exceeds upper bound {upper}"
            )));
        }
        provenance.sort();
        provenance.dedup();
        Ok(BoundReport {
            lower,
            upper,
            exact: lower == upper,
            provenance,
        })
    }

    fn exact(value: u64, provenance: Vec<Provenance>) -> Result<Self> {
        Self::new(value, value, provenance)
    }

    /// True when `value` lies in `[lower, upper]`.
    pub fn admits(&self, value: u64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

/// `delta_m`: 1 when `m = 1`, else 0.
pub fn delta(m: u64) -> u64 {
    u64::from(m == 1)
}

fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp).ok_or(Error::Overflow)
}

/// `max (|x| + |y|) / gcd(x, y)` over pairs of opposite sign.
pub fn chi(values: &[i64]) -> Result<u64> {
    let neg: Vec<i64> = values.iter().copied().filter(|&v| v < 0).collect();
    let pos: Vec<i64> = values.iter().copied().filter(|&v| v > 0).collect();
    if neg.is_empty() || pos.is_empty() {
        return Err(Error::InvalidArgument(
            "chi needs at least one positive and one negative element".into(),
        ));
    }
    let mut best = 0u64;
    for &x in &neg {
        for &y in &pos {
            let s = x.unsigned_abs().checked_add(y.unsigned_abs()).ok_or(Error::Overflow)?;
            best = best.max(s / gcd(x, y));
        }
    }
    Ok(best)
}

/// `chi([-m, M])`, scanning pair sums downwards and stopping once no larger
/// value is possible.
fn chi_interval(m: u64, big_m: u64) -> u64 {
    let mut best = 0u64;
    let mut s = m + big_m;
    while s >= 2 && s > best {
        let lo = s.saturating_sub(big_m).max(1);
        let hi = m.min(s - 1);
        for x in lo..=hi {
            let y = s - x;
            best = best.max(s / gcd(x as i64, y as i64));
        }
        s -= 1;
    }
    best
}

pub fn diam(values: &[i64]) -> Result<u64> {
    let (Some(min), Some(max)) = (values.iter().min(), values.iter().max()) else {
        return Err(Error::InvalidArgument("diameter of an empty set".into()));
    };
    Ok(max.abs_diff(*min))
}

/// Bounds for `D([-m, M])`, exact whenever the closed forms meet.
pub fn interval_davenport(m: u64, big_m: u64) -> Result<BoundReport> {
    if m == 0 || big_m == 0 {
        return Err(Error::InvalidArgument(
            "interval endpoints m and M must be positive".into(),
        ));
    }
    let total = m.checked_add(big_m).ok_or(Error::Overflow)?;
    if gcd(m as i64, big_m as i64) == 1 {
        return BoundReport::exact(
            total,
            vec![
                Provenance::CoprimeInterval,
                Provenance::ChiLower,
                Provenance::DiameterUpper,
            ],
        );
    }
    if m == big_m {
        return BoundReport::exact(2 * m - 1, vec![Provenance::SymmetricInterval, Provenance::Monotonicity]);
    }
    BoundReport::new(
        chi_interval(m, big_m),
        total - 1,
        vec![
            Provenance::ChiLower,
            Provenance::DiameterUpper,
            Provenance::NonCoprimeExclusion,
        ],
    )
}

/// Bounds for an arbitrary finite set of integers.
pub fn one_dim_bounds(values: &[i64]) -> Result<BoundReport> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("empty set".into()));
    }
    let has_neg = values.iter().any(|&v| v < 0);
    let has_pos = values.iter().any(|&v| v > 0);
    let has_zero = values.contains(&0);
    if !(has_neg && has_pos) {
        return BoundReport::exact(u64::from(has_zero), vec![Provenance::OneSidedSet]);
    }
    let lo = *values.iter().min().unwrap();
    let hi = *values.iter().max().unwrap();
    let is_interval = values.len() as u64 == hi.abs_diff(lo) + 1;
    if is_interval {
        return interval_davenport(lo.unsigned_abs(), hi.unsigned_abs());
    }
    BoundReport::new(
        chi(values)?,
        diam(values)?,
        vec![Provenance::ChiLower, Provenance::DiameterUpper],
    )
}

/// `prod (floor(2 (d + 1/d - 1) m_i) + 1)`, evaluated in exact integer
/// arithmetic as `floor(2 m_i (d^2 - d + 1) / d) + 1`.
pub fn box_upper(ms: &[u64]) -> Result<u64> {
    if ms.is_empty() || ms.contains(&0) {
        return Err(Error::InvalidArgument(
            "box half-widths must be positive and d >= 1".into(),
        ));
    }
    let d = ms.len() as u128;
    let numer = d * d - d + 1;
    ms.iter().try_fold(1u64, |acc, &m| {
        let side = 2 * u128::from(m) * numer / d + 1;
        let side = u64::try_from(side).map_err(|_| Error::Overflow)?;
        acc.checked_mul(side).ok_or(Error::Overflow)
    })
}

/// `min((2 m_a + 1)(4 m_b + 1))` over both axis assignments.
pub fn square_upper(m1: u64, m2: u64) -> Result<u64> {
    if m1 == 0 || m2 == 0 {
        return Err(Error::InvalidArgument("half-widths must be positive".into()));
    }
    let f = |a: u64, b: u64| -> Result<u64> {
        let x = a.checked_mul(2).and_then(|v| v.checked_add(1)).ok_or(Error::Overflow)?;
        let y = b.checked_mul(4).and_then(|v| v.checked_add(1)).ok_or(Error::Overflow)?;
        x.checked_mul(y).ok_or(Error::Overflow)
    };
    Ok(f(m1, m2)?.min(f(m2, m1)?))
}

/// `(2m - 1 + delta_m)^d`, the length of the recursive hypercube atom.
pub fn hypercube_lower(m: u64, d: u32) -> Result<u64> {
    if m == 0 || d == 0 {
        return Err(Error::InvalidArgument("m and d must be positive".into()));
    }
    checked_pow(2 * m - 1 + delta(m), d)
}

pub fn hypercube_bounds(m: u64, d: u32) -> Result<BoundReport> {
    if m == 0 || d == 0 {
        return Err(Error::InvalidArgument("m and d must be positive".into()));
    }
    match (m, d) {
        (_, 1) => interval_davenport(m, m),
        (1, 2) => BoundReport::exact(4, vec![Provenance::UnitSquare]),
        (_, 2) => BoundReport::new(
            hypercube_lower(m, 2)?,
            square_upper(m, m)?,
            vec![Provenance::HypercubeConstruction, Provenance::RectangleReordering],
        ),
        _ => BoundReport::new(
            hypercube_lower(m, d)?,
            box_upper(&vec![m; d as usize])?,
            vec![Provenance::HypercubeConstruction, Provenance::SteinitzBox],
        ),
    }
}

pub fn group_davenport(group: &GroupSpec) -> Result<BoundReport> {
    if group.is_trivial() {
        return BoundReport::exact(1, vec![Provenance::TrivialGroup]);
    }
    let order = group.order()?;
    if group.is_cyclic() {
        return BoundReport::exact(order, vec![Provenance::CyclicGroup]);
    }
    let lower = 1 + group.factors().iter().map(|n| n - 1).sum::<u64>();
    if group.rank() <= 2 || group.is_p_group() {
        return BoundReport::exact(
            lower,
            vec![Provenance::InvariantFactorLower, Provenance::RankTwoOrPGroup],
        );
    }
    let exp = group.exponent();
    let upper = ((1.0 + (order as f64 / exp as f64).ln()) * exp as f64).floor() as u64;
    BoundReport::new(
        lower,
        upper,
        vec![Provenance::InvariantFactorLower, Provenance::LogarithmicUpper],
    )
}

/// Half-widths of the smallest symmetric box around a lattice set, with
/// degenerate (all-zero) axes dropped. Returns the active axis indices too.
fn active_axes(set: &GroundSet) -> (Vec<usize>, Vec<u64>) {
    let mut axes = Vec::new();
    let mut widths = Vec::new();
    for (axis, (lo, hi)) in set.lattice_bounds().into_iter().enumerate() {
        let m = lo.unsigned_abs().max(hi.unsigned_abs());
        if m > 0 {
            axes.push(axis);
            widths.push(m);
        }
    }
    (axes, widths)
}

/// Upper bound for a lattice set of dimension at least 2 through its
/// enclosing symmetric box, together with the tags used.
pub(crate) fn enclosing_box_upper(set: &GroundSet, use_rectangle: bool) -> Result<(u64, Vec<Provenance>)> {
    let (axes, widths) = active_axes(set);
    match widths.len() {
        0 => Ok((1, vec![Provenance::ZeroElement])),
        1 => {
            let axis = axes[0];
            let values: Vec<i64> = set.lattice_points().iter().map(|e| e.coords()[axis]).collect();
            let r = one_dim_bounds(&values)?;
            Ok((r.upper, r.provenance))
        }
        2 if use_rectangle => {
            let steinitz = box_upper(&widths)?;
            let rect = square_upper(widths[0], widths[1])?;
            if rect < steinitz {
                Ok((rect, vec![Provenance::RectangleReordering, Provenance::Monotonicity]))
            } else {
                Ok((steinitz, vec![Provenance::SteinitzBox, Provenance::Monotonicity]))
            }
        }
        _ => Ok((
            box_upper(&widths)?,
            vec![Provenance::SteinitzBox, Provenance::Monotonicity],
        )),
    }
}

/// Lower bounds from atoms of length at most 2 and from opposite collinear
/// pairs, for explicit sets in any dimension.
fn explicit_lower(elements: &[Element]) -> Result<(u64, Vec<Provenance>)> {
    let mut best = 0u64;
    let mut tags = Vec::new();
    if elements.iter().any(Symbol::is_zero) {
        best = 1;
        tags.push(Provenance::ZeroElement);
    }
    for (i, x) in elements.iter().enumerate() {
        for y in &elements[i + 1..] {
            if let Some(len) = opposite_collinear_atom_len(x, y) {
                if len > best {
                    best = len;
                    tags = vec![Provenance::CollinearPair];
                }
            }
        }
    }
    Ok((best, tags))
}

/// For `x = g u` and `y = -h u` with `u` primitive and `g, h > 0`, the atom
/// `x^(h/c) y^(g/c)` (with `c = gcd(g, h)`) has length `(g + h) / c`.
fn opposite_collinear_atom_len(x: &Element, y: &Element) -> Option<u64> {
    if x.is_zero() || y.is_zero() {
        return None;
    }
    let gx = x.coords().iter().fold(0u64, |acc, &c| gcd(acc as i64, c));
    let gy = y.coords().iter().fold(0u64, |acc, &c| gcd(acc as i64, c));
    let same_direction_negated = x
        .coords()
        .iter()
        .zip(y.coords())
        .all(|(&a, &b)| (a as i128) * (gy as i128) == -(b as i128) * (gx as i128));
    if !same_direction_negated {
        return None;
    }
    let c = gcd(gx as i64, gy as i64);
    Some((gx + gy) / c)
}

/// Bounds for a lattice ground set (interval, box or explicit set).
pub fn ground_bounds(set: &GroundSet) -> Result<BoundReport> {
    if let GroundSet::GroupProduct { group, base } = set {
        return product_bounds(group, base);
    }
    if let Some(values) = set.scalars() {
        return one_dim_bounds(&values);
    }
    if let Some((m, d)) = set.as_hypercube() {
        return hypercube_bounds(m as u64, d as u32);
    }
    let (upper, mut provenance) = enclosing_box_upper(set, true)?;
    let (axes, _) = active_axes(set);
    if axes.len() <= 1 {
        // Effectively one-dimensional: the projection is exact.
        let values: Vec<i64> = match axes.first() {
            Some(&axis) => set.lattice_points().iter().map(|e| e.coords()[axis]).collect(),
            None => vec![0],
        };
        return one_dim_bounds(&values);
    }
    let mut lower = 0u64;
    match set {
        GroundSet::Box { intervals } => {
            if intervals.iter().all(|&(lo, hi)| lo <= 0 && 0 <= hi) {
                lower = 1;
                provenance.push(Provenance::ZeroElement);
                // an axis interval embeds as the other coordinates can be 0
                for &(lo, hi) in intervals {
                    if lo < 0 && hi > 0 {
                        let r = interval_davenport(lo.unsigned_abs(), hi as u64)?;
                        if r.lower > lower {
                            lower = r.lower;
                            provenance.push(Provenance::Monotonicity);
                            provenance.extend(r.provenance);
                        }
                    }
                }
                let k = intervals
                    .iter()
                    .map(|&(lo, hi)| lo.unsigned_abs().min(hi.unsigned_abs()))
                    .min()
                    .unwrap_or(0);
                if k >= 1 {
                    let h = hypercube_bounds(k, intervals.len() as u32)?;
                    if h.lower > lower {
                        lower = h.lower;
                        provenance.push(Provenance::Monotonicity);
                        provenance.push(Provenance::HypercubeConstruction);
                    }
                }
            }
        }
        GroundSet::Explicit { elements } => {
            let (l, tags) = explicit_lower(elements)?;
            lower = l;
            provenance.extend(tags);
        }
        _ => unreachable!("products and intervals handled above"),
    }
    BoundReport::new(lower, upper, provenance)
}

/// Lower bound `|G| (2m - 1 + delta_m)^d` for cyclic `G`; the construction
/// behind it needs a generator, so other groups are rejected.
pub fn group_box_lower(group: &GroupSpec, m: u64, d: u32) -> Result<u64> {
    if !group.is_cyclic() {
        return Err(Error::InvalidArgument(format!(
            "{group} is not cyclic; the group-box lower bound needs a cyclic group"
        )));
    }
    group
        .order()?
        .checked_mul(hypercube_lower(m, d)?)
        .ok_or(Error::Overflow)
}

/// Bounds for `G x X`.
pub fn product_bounds(group: &GroupSpec, set: &GroundSet) -> Result<BoundReport> {
    if set.group().is_some() {
        return Err(Error::InvalidArgument("base of a product must be a lattice set".into()));
    }
    let dg = group_davenport(group)?;
    let dx = ground_bounds(set)?;
    let upper = dg.upper.checked_mul(dx.upper).ok_or(Error::Overflow)?;
    let mut provenance = vec![Provenance::ProductUpper];
    provenance.extend(dg.provenance.iter().copied());
    provenance.extend(dx.provenance.iter().copied());

    let mut lower = dx.lower;
    let contains_zero = set.lattice_points().iter().any(Symbol::is_zero);
    if contains_zero && dg.lower > lower {
        lower = dg.lower;
        provenance.push(Provenance::Monotonicity);
    }
    if let Some((m, d)) = set.as_hypercube() {
        if let Ok(l) = group_box_lower(group, m as u64, d as u32) {
            if l > lower {
                lower = l;
                provenance.push(Provenance::GroupBoxConstruction);
            }
        }
    }
    BoundReport::new(lower, upper, provenance)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_examples() {
        let x: Vec<i64> = vec![-2, -1, 1, 2, 3];
        // pairs: (-2,1)=3 (-2,2)=2 (-2,3)=5 (-1,1)=2 (-1,2)=3 (-1,3)=4
        assert_eq!(chi(&x).unwrap(), 5);
        assert_eq!(chi(&[-2, 4]).unwrap(), 3);
        assert!(chi(&[1, 2]).is_err());
        for m in 1..=8u64 {
            for big_m in 1..=8u64 {
                let values: Vec<i64> = (-(m as i64)..=big_m as i64).collect();
                assert_eq!(chi_interval(m, big_m), chi(&values).unwrap(), "m={m} M={big_m}");
                if gcd(m as i64, big_m as i64) == 1 {
                    assert_eq!(chi_interval(m, big_m), m + big_m);
                }
            }
        }
    }

    #[test]
    fn diam_examples() {
        assert_eq!(diam(&(-2..=4).collect::<Vec<_>>()).unwrap(), 6);
        assert_eq!(diam(&[5]).unwrap(), 0);
        assert_eq!(diam(&[-3, 7]).unwrap(), 10);
    }

    #[test]
    fn interval_examples() {
        let r = interval_davenport(2, 3).unwrap();
        assert!(r.exact && r.lower == 5);
        let r = interval_davenport(3, 3).unwrap();
        assert!(r.exact && r.lower == 5);
        let r = interval_davenport(2, 4).unwrap();
        assert_eq!((r.lower, r.upper, r.exact), (5, 5, true));
        let r = interval_davenport(1, 1).unwrap();
        assert_eq!((r.lower, r.exact), (2, true));
        // gcd(4, 6) = 2; the pair (-4, 5) gives chi = 9 = m + M - 1
        let r = interval_davenport(4, 6).unwrap();
        assert_eq!((r.lower, r.upper), (9, 9));
    }

    #[test]
    fn box_and_square() {
        assert_eq!(box_upper(&[5]).unwrap(), 11);
        assert_eq!(box_upper(&[1, 1]).unwrap(), 16);
        assert_eq!(box_upper(&[2, 2, 2]).unwrap(), 1000);
        assert_eq!(square_upper(1, 1).unwrap(), 15);
        assert_eq!(square_upper(1, 2).unwrap(), 25);
        for m in 1..6 {
            assert_eq!(square_upper(m, m).unwrap(), (2 * m + 1) * (4 * m + 1));
        }
    }

    #[test]
    fn hypercube_examples() {
        let r = hypercube_bounds(1, 2).unwrap();
        assert_eq!((r.lower, r.upper), (4, 4));
        let r = hypercube_bounds(2, 3).unwrap();
        assert_eq!((r.lower, r.upper), (27, 1000));
        let r = hypercube_bounds(1, 3).unwrap();
        assert_eq!((r.lower, r.upper), (8, 125));
        let r = hypercube_bounds(3, 2).unwrap();
        assert_eq!((r.lower, r.upper), (25, 7 * 13));
    }

    #[test]
    fn group_examples() {
        let r = group_davenport(&GroupSpec::cyclic(6).unwrap()).unwrap();
        assert_eq!((r.lower, r.exact), (6, true));
        let r = group_davenport(&GroupSpec::new(vec![2, 2]).unwrap()).unwrap();
        assert_eq!((r.lower, r.exact), (3, true));
        let r = group_davenport(&GroupSpec::new(vec![3, 3, 3]).unwrap()).unwrap();
        assert_eq!((r.lower, r.exact), (7, true));
        let r = group_davenport(&GroupSpec::new(vec![2, 2, 6]).unwrap()).unwrap();
        // 1 + 1 + 1 + 5 = 8; (1 + ln 4) * 6 = 14.31...
        assert_eq!((r.lower, r.upper, r.exact), (8, 14, false));
        assert!(r.provenance.contains(&Provenance::LogarithmicUpper));
    }

    #[test]
    fn product_examples() {
        for n in 2..6u64 {
            for m in 1..5i64 {
                let r = product_bounds(&GroupSpec::cyclic(n).unwrap(), &GroundSet::interval(-m, m).unwrap()).unwrap();
                let dm = if m == 1 { 2 } else { 2 * m as u64 - 1 };
                assert_eq!((r.lower, r.upper, r.exact), (n * dm, n * dm, true));
            }
        }
        let r = product_bounds(&GroupSpec::cyclic(2).unwrap(), &GroundSet::hypercube(2, 2).unwrap()).unwrap();
        assert_eq!((r.lower, r.upper), (18, 90));
        assert!(group_box_lower(&GroupSpec::new(vec![2, 2]).unwrap(), 1, 1).is_err());
    }

    #[test]
    fn ground_bounds_degenerate_sets() {
        let r = ground_bounds(&GroundSet::explicit_scalars([1, 2, 5]).unwrap()).unwrap();
        assert_eq!((r.lower, r.upper), (0, 0));
        let r = ground_bounds(&GroundSet::explicit_scalars([0, 2, 5]).unwrap()).unwrap();
        assert_eq!((r.lower, r.upper), (1, 1));
        let r = ground_bounds(&GroundSet::explicit_scalars([-3, -1]).unwrap()).unwrap();
        assert_eq!((r.lower, r.upper), (0, 0));
        let r = ground_bounds(&GroundSet::parse("{(0,0)}").unwrap()).unwrap();
        assert_eq!((r.lower, r.upper), (1, 1));
        let r = ground_bounds(&GroundSet::parse("{(0,-2),(0,3)}").unwrap()).unwrap();
        assert_eq!((r.lower, r.upper), (5, 5));
        let r = ground_bounds(&GroundSet::parse("{(2,2),(-3,-3),(1,0)}").unwrap()).unwrap();
        assert_eq!(r.lower, 5);
    }
}
