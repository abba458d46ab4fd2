//! Explicit extremal atoms: two-letter atoms, maximal interval atoms, the
//! recursive hypercube atoms `ss_d` and their lifts to `C_n x [-m, m]^d`.
//!
//! Constructions up to [`DEFAULT_CHECK_CAP`] terms are re-checked for
//! minimality with the zero-sum DP before being returned; longer ones are
//! returned on the strength of the construction alone and flagged so.

use serde::Serialize;

use crate::arith::{bezout_fold, gcd, gcd_all};
use crate::element::{Element, MixedElement, Symbol};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::sequence::Sequence;
use crate::zerosum::{is_minimal, zero_sum_subsequences, DEFAULT_NAIVE_CAP};

pub const DEFAULT_CHECK_CAP: u64 = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// Minimality confirmed by the zero-sum DP.
    MachineChecked,
    /// Too long to check; minimal by construction, not machine-checked.
    ConstructionOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Construction<T: Symbol + Serialize> {
    pub sequence: Sequence<T>,
    pub certificate: Certificate,
}

fn certify<T: Symbol + Serialize>(sequence: Sequence<T>, check_cap: u64, what: &str) -> Result<Construction<T>> {
    if !sequence.is_zero_sum() {
        return Err(Error::Consistency(format!("{what} does not sum to zero: {sequence}")));
    }
    if sequence.len() > check_cap {
        return Ok(Construction {
            sequence,
            certificate: Certificate::ConstructionOnly,
        });
    }
    if !is_minimal(&sequence)? {
        return Err(Error::Consistency(format!("{what} is not minimal: {sequence}")));
    }
    Ok(Construction {
        sequence,
        certificate: Certificate::MachineChecked,
    })
}

/// `x^(|y|/g) y^(|x|/g)` with `g = gcd(x, y)`, for `x` and `y` of opposite
/// signs. Its length is `(|x| + |y|) / g`.
pub fn two_element_atom(x: i64, y: i64) -> Result<Construction<Element>> {
    if x == 0 || y == 0 || (x > 0) == (y > 0) {
        return Err(Error::InvalidArgument(format!(
            "{x} and {y} must be nonzero with opposite signs"
        )));
    }
    let g = gcd(x, y);
    let s = Sequence::from_counts([
        (Element::scalar(x), y.unsigned_abs() / g),
        (Element::scalar(y), x.unsigned_abs() / g),
    ])?;
    certify(s, DEFAULT_CHECK_CAP, "two-element atom")
}

/// `M^m (-m)^M`, the unique atom of length `m + M` over `[-m, M]`; exists
/// only for coprime `m, M`.
pub fn interval_max_atom(m: i64, big_m: i64) -> Result<Construction<Element>> {
    if m < 1 || big_m < 1 {
        return Err(Error::InvalidArgument("m and M must be positive".into()));
    }
    if gcd(m, big_m) != 1 {
        return Err(Error::InvalidArgument(format!(
            "gcd({m}, {big_m}) != 1: no atom of length {} exists over [-{m}, {big_m}]",
            m + big_m
        )));
    }
    let s = Sequence::from_counts([(Element::scalar(big_m), m as u64), (Element::scalar(-m), big_m as u64)])?;
    certify(s, DEFAULT_CHECK_CAP, "interval maximal atom")
}

/// Supports and multiplicities of a sequence, in a stated order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityProfile {
    pub supports: Vec<Element>,
    pub mults: Vec<u64>,
    pub gcd: u64,
}

impl MultiplicityProfile {
    fn new(pairs: Vec<(Element, u64)>) -> Self {
        let (supports, mults): (Vec<Element>, Vec<u64>) = pairs.into_iter().unzip();
        let gcd = gcd_all(&mults);
        MultiplicityProfile { supports, mults, gcd }
    }

    pub fn to_sequence(&self) -> Result<Sequence<Element>> {
        Sequence::from_counts(self.supports.iter().cloned().zip(self.mults.iter().copied()))
    }

    pub fn len(&self) -> u64 {
        self.mults.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.mults.is_empty()
    }
}

/// Distinct supports of `s` in canonical order with their multiplicities.
pub fn profile(s: &Sequence<Element>) -> MultiplicityProfile {
    MultiplicityProfile::new(s.iter().map(|(x, k)| (x.clone(), k)).collect())
}

fn check_hypercube_params(m: i64, d: u32) -> Result<()> {
    if m < 1 || d < 1 {
        return Err(Error::InvalidArgument("m and d must be at least 1".into()));
    }
    Ok(())
}

/// The `d + 1` supports and multiplicities of `ss_d` in construction order.
///
/// For `m >= 2`: `ss_1 = m^(m-1) (-(m-1))^m`, and `ss_{d+1}` appends a last
/// coordinate `m` to every term of `ss_d`, takes each `m - 1` times as often,
/// and adds `(0, ..., 0, -(m-1))` with multiplicity `m (2m-1)^d`.
///
/// For `m = 1`: `e_1 = (1, ..., 1)`, `e_2 = (-1, 1, ..., 1)` and, for
/// `k >= 3`, `e_k` has zeros in its first `k - 2` coordinates, `-1` in
/// coordinate `k - 1` and ones after; multiplicities are `1, 1, 2, 4, ...,
/// 2^(d-1)`.
pub fn hypercube_profile(m: i64, d: u32) -> Result<MultiplicityProfile> {
    check_hypercube_params(m, d)?;
    let d = d as usize;
    if m == 1 {
        let mut pairs = Vec::with_capacity(d + 1);
        pairs.push((Element::new(vec![1; d])?, 1));
        for k in 2..=d + 1 {
            let mut v = vec![1i64; d];
            for c in v.iter_mut().take(k - 2) {
                *c = 0;
            }
            v[k - 2] = -1;
            let mult = if k == 2 {
                1
            } else {
                1u64.checked_shl(k as u32 - 2).ok_or(Error::Overflow)?
            };
            pairs.push((Element::new(v)?, mult));
        }
        return Ok(MultiplicityProfile::new(pairs));
    }
    let mu = (m - 1) as u64;
    let mut pairs = vec![(Element::scalar(m), mu), (Element::scalar(-(m - 1)), m as u64)];
    let mut length: u64 = 2 * m as u64 - 1;
    for _ in 1..d {
        let mut next = Vec::with_capacity(pairs.len() + 1);
        for (x, k) in &pairs {
            next.push((x.extended(m), k.checked_mul(mu).ok_or(Error::Overflow)?));
        }
        let dim = pairs[0].0.dim();
        let tail_mult = (m as u64).checked_mul(length).ok_or(Error::Overflow)?;
        next.push((Element::zero(dim).extended(-(m - 1)), tail_mult));
        length = length.checked_mul(2 * m as u64 - 1).ok_or(Error::Overflow)?;
        pairs = next;
    }
    Ok(MultiplicityProfile::new(pairs))
}

/// `ss_d`, an atom of length `(2m - 1 + delta_m)^d` over `[-m, m]^d`.
pub fn hypercube_atom(m: i64, d: u32) -> Result<Construction<Element>> {
    hypercube_atom_capped(m, d, DEFAULT_CHECK_CAP)
}

pub fn hypercube_atom_capped(m: i64, d: u32, check_cap: u64) -> Result<Construction<Element>> {
    let p = hypercube_profile(m, d)?;
    certify(p.to_sequence()?, check_cap, "hypercube atom")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerSubsequenceReport {
    pub m: i64,
    pub d: u32,
    pub u: u64,
    /// Lengths of the nonempty zero-sum subsequences of `ss_d^u` found.
    pub found_lengths: Vec<u64>,
    /// Whether they are exactly `ss_d^j` for `1 <= j <= u`.
    pub passed: bool,
}

/// Lists every nonempty zero-sum subsequence of `ss_d^u` and compares them
/// with the powers `ss_d^1, ..., ss_d^u`.
pub fn power_subsequence_check(m: i64, d: u32, u: u64) -> Result<PowerSubsequenceReport> {
    power_subsequence_check_capped(m, d, u, DEFAULT_NAIVE_CAP)
}

pub fn power_subsequence_check_capped(m: i64, d: u32, u: u64, cap: u128) -> Result<PowerSubsequenceReport> {
    if u < 1 {
        return Err(Error::InvalidArgument("u must be at least 1".into()));
    }
    let base = hypercube_profile(m, d)?.to_sequence()?;
    let powered = base.power(u)?;
    let found = zero_sum_subsequences(&powered, cap)?;
    let expected = (1..=u).map(|j| base.power(j)).collect::<Result<Vec<_>>>()?;
    Ok(PowerSubsequenceReport {
        m,
        d,
        u,
        found_lengths: found.iter().map(Sequence::len).collect(),
        passed: found == expected,
    })
}

/// Bezout weights `w` with `sum(alpha_j w_j) = 1` for the profile of
/// `ss_d`. For `m = 1` the first multiplicity is 1, so `w = (1, 0, ..., 0)`.
pub fn group_box_weights(m: i64, d: u32) -> Result<(MultiplicityProfile, Vec<i64>)> {
    let p = hypercube_profile(m, d)?;
    let w = if m == 1 {
        let mut w = vec![0; p.mults.len()];
        w[0] = 1;
        w
    } else {
        let alphas = p
            .mults
            .iter()
            .map(|&a| i64::try_from(a).map_err(|_| Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        let (g, w) = bezout_fold(&alphas)?;
        if g != 1 {
            return Err(Error::Consistency(format!("multiplicities of ss_{d} have gcd {g}")));
        }
        w
    };
    Ok((p, w))
}

/// `prod (w_j g, u_j)^(n alpha_j)` over `C_n x [-m, m]^d`, with `g = 1` the
/// generator of `C_n`: an atom of length `n (2m - 1 + delta_m)^d`.
pub fn group_box_atom(n: u64, m: i64, d: u32) -> Result<Construction<MixedElement>> {
    group_box_atom_capped(n, m, d, DEFAULT_CHECK_CAP)
}

pub fn group_box_atom_capped(n: u64, m: i64, d: u32, check_cap: u64) -> Result<Construction<MixedElement>> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let group = GroupSpec::cyclic(n)?;
    let (p, w) = group_box_weights(m, d)?;
    let mut s = Sequence::new();
    for ((u, &alpha), &wj) in p.supports.iter().zip(&p.mults).zip(&w) {
        let x = MixedElement::from_raw(&vec![wj; group.rank()], group.factors(), u.clone())?;
        s.push_n(x, alpha.checked_mul(n).ok_or(Error::Overflow)?)?;
    }
    certify(s, check_cap, "group-box atom")
}
