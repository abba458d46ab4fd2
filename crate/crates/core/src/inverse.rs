//! Structure of maximal and near-maximal atoms over integer intervals.
//!
//! Classification compares a sequence with explicit templates:
//!
//! * length `m + M` over `[-m, M]`: only `M^m (-m)^M`, and only when
//!   `gcd(m, M) = 1`;
//! * length `2m - 1` over `[-m, m]`: `m^(m-1) (-(m-1))^m` and its mirror;
//! * length `2m - 2` over `[-m, m]`: `m^(m-2) (-(m-1))^(m-1) 1` and its
//!   mirror, plus `m^(m-2) (-(m-2))^m` and its mirror when `m` is odd.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::gcd;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::ground::GroundSet;
use crate::search::{atoms_of_length, SearchConfig};
use crate::sequence::{AnySequence, Sequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CaseTag {
    #[serde(rename = "THM2")]
    Thm2,
    #[serde(rename = "COR3_POS")]
    Cor3Pos,
    #[serde(rename = "COR3_NEG")]
    Cor3Neg,
    #[serde(rename = "T2M2_I_POS")]
    T2m2IPos,
    #[serde(rename = "T2M2_I_NEG")]
    T2m2INeg,
    #[serde(rename = "T2M2_II_POS")]
    T2m2IiPos,
    #[serde(rename = "T2M2_II_NEG")]
    T2m2IiNeg,
    #[serde(rename = "NONE")]
    None,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Thm2 => "THM2",
            CaseTag::Cor3Pos => "COR3_POS",
            CaseTag::Cor3Neg => "COR3_NEG",
            CaseTag::T2m2IPos => "T2M2_I_POS",
            CaseTag::T2m2INeg => "T2M2_I_NEG",
            CaseTag::T2m2IiPos => "T2M2_II_POS",
            CaseTag::T2m2IiNeg => "T2M2_II_NEG",
            CaseTag::None => "NONE",
        }
    }

    /// The tag of the negated sequence.
    pub fn mirror(self) -> CaseTag {
        match self {
            CaseTag::Cor3Pos => CaseTag::Cor3Neg,
            CaseTag::Cor3Neg => CaseTag::Cor3Pos,
            CaseTag::T2m2IPos => CaseTag::T2m2INeg,
            CaseTag::T2m2INeg => CaseTag::T2m2IPos,
            CaseTag::T2m2IiPos => CaseTag::T2m2IiNeg,
            CaseTag::T2m2IiNeg => CaseTag::T2m2IiPos,
            other => other,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InverseVerdict {
    pub matches: bool,
    pub case: CaseTag,
}

impl InverseVerdict {
    fn of(case: CaseTag) -> Self {
        InverseVerdict {
            matches: case != CaseTag::None,
            case,
        }
    }
}

fn scalar_seq(items: &[(i64, i64)]) -> Result<Sequence<Element>> {
    Sequence::from_counts(items.iter().map(|&(x, k)| (Element::scalar(x), k as u64)))
}

fn check_shape(s: &Sequence<Element>, lo: i64, hi: i64, len: i64) -> Result<()> {
    for (x, _) in s.iter() {
        if x.dim() != 1 {
            return Err(Error::DimensionMismatch {
                left: 1,
                right: x.dim(),
            });
        }
        let v = x.coords()[0];
        if v < lo || v > hi {
            return Err(Error::InvalidArgument(format!("{v} is outside [{lo}, {hi}]")));
        }
    }
    if s.len() as i64 != len {
        return Err(Error::InvalidArgument(format!(
            "expected length {len}, got {}",
            s.len()
        )));
    }
    Ok(())
}

/// `M^m (-m)^M` when `gcd(m, M) = 1`.
pub fn interval_max_template(m: i64, big_m: i64) -> Result<Option<Sequence<Element>>> {
    if gcd(m, big_m) != 1 {
        return Ok(None);
    }
    scalar_seq(&[(big_m, m), (-m, big_m)]).map(Some)
}

/// The two atoms of length `2m - 1` over `[-m, m]`, tagged.
pub fn symmetric_max_templates(m: i64) -> Result<Vec<(CaseTag, Sequence<Element>)>> {
    if m < 2 {
        return Err(Error::InvalidArgument("m must be at least 2".into()));
    }
    let pos = scalar_seq(&[(m, m - 1), (-(m - 1), m)])?;
    let neg = pos.negate()?;
    Ok(vec![(CaseTag::Cor3Pos, pos), (CaseTag::Cor3Neg, neg)])
}

/// The atoms of length `2m - 2` over `[-m, m]`, tagged: four for odd `m`,
/// two for even `m`.
pub fn symmetric_submax_templates(m: i64) -> Result<Vec<(CaseTag, Sequence<Element>)>> {
    if m < 3 {
        return Err(Error::InvalidArgument("m must be at least 3".into()));
    }
    let mut out = Vec::new();
    if m % 2 == 1 {
        let pos = scalar_seq(&[(m, m - 2), (-(m - 2), m)])?;
        out.push((CaseTag::T2m2INeg, pos.negate()?));
        out.push((CaseTag::T2m2IPos, pos));
    }
    let pos = scalar_seq(&[(m, m - 2), (-(m - 1), m - 1), (1, 1)])?;
    out.push((CaseTag::T2m2IiNeg, pos.negate()?));
    out.push((CaseTag::T2m2IiPos, pos));
    Ok(out)
}

fn lookup(templates: &[(CaseTag, Sequence<Element>)], s: &Sequence<Element>) -> InverseVerdict {
    let case = templates
        .iter()
        .find(|(_, t)| t == s)
        .map_or(CaseTag::None, |(c, _)| *c);
    InverseVerdict::of(case)
}

/// Sequences of length `m + M` over `[-m, M]`.
pub fn classify_interval_max(m: i64, big_m: i64, s: &Sequence<Element>) -> Result<InverseVerdict> {
    if m < 1 || big_m < 1 {
        return Err(Error::InvalidArgument("m and M must be positive".into()));
    }
    check_shape(s, -m, big_m, m + big_m)?;
    let hit = interval_max_template(m, big_m)?.is_some_and(|t| &t == s);
    Ok(InverseVerdict::of(if hit { CaseTag::Thm2 } else { CaseTag::None }))
}

/// Sequences of length `2m - 1` over `[-m, m]`.
pub fn classify_symmetric_max(m: i64, s: &Sequence<Element>) -> Result<InverseVerdict> {
    let templates = symmetric_max_templates(m)?;
    check_shape(s, -m, m, 2 * m - 1)?;
    Ok(lookup(&templates, s))
}

/// Sequences of length `2m - 2` over `[-m, m]`.
pub fn classify_symmetric_submax(m: i64, s: &Sequence<Element>) -> Result<InverseVerdict> {
    let templates = symmetric_submax_templates(m)?;
    check_shape(s, -m, m, 2 * m - 2)?;
    Ok(lookup(&templates, s))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InverseCheck {
    pub ground: String,
    pub length: u64,
    pub expected: Vec<String>,
    pub found: Vec<String>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InverseReport {
    pub checks: Vec<InverseCheck>,
    pub passed: bool,
}

impl InverseReport {
    pub fn discrepancies(&self) -> impl Iterator<Item = &InverseCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn compare(
    ground: &GroundSet,
    length: u64,
    expected: Vec<Sequence<Element>>,
    config: &SearchConfig,
) -> Result<InverseCheck> {
    let mut expected: Vec<AnySequence> = expected.into_iter().map(AnySequence::from).collect();
    expected.sort();
    let found = atoms_of_length(ground, length, config)?;
    Ok(InverseCheck {
        ground: ground.to_string(),
        length,
        passed: found == expected,
        expected: expected.iter().map(ToString::to_string).collect(),
        found: found.iter().map(ToString::to_string).collect(),
    })
}

/// Enumerates atoms and compares them with the templates: for each `m`,
/// lengths `2m - 1` (when `m >= 2`) and `2m - 2` (when `m >= 3`) over
/// `[-m, m]`; for each coprime pair `(a, b)` from `m_values`, length `a + b`
/// over `[-a, b]`.
pub fn verify_inverse(m_values: &[i64], config: &SearchConfig) -> Result<InverseReport> {
    let mut values = m_values.to_vec();
    values.sort_unstable();
    values.dedup();
    if let Some(&bad) = values.iter().find(|&&m| m < 1) {
        return Err(Error::InvalidArgument(format!("m = {bad} must be positive")));
    }
    let mut jobs: Vec<(GroundSet, u64, Vec<Sequence<Element>>)> = Vec::new();
    for &m in &values {
        let ground = GroundSet::interval(-m, m)?;
        if m >= 2 {
            let t = symmetric_max_templates(m)?.into_iter().map(|(_, s)| s).collect();
            jobs.push((ground.clone(), (2 * m - 1) as u64, t));
        }
        if m >= 3 {
            let t = symmetric_submax_templates(m)?.into_iter().map(|(_, s)| s).collect();
            jobs.push((ground, (2 * m - 2) as u64, t));
        }
    }
    for &a in &values {
        for &b in &values {
            if let Some(t) = interval_max_template(a, b)? {
                jobs.push((GroundSet::interval(-a, b)?, (a + b) as u64, vec![t]));
            }
        }
    }
    let checks = jobs
        .into_par_iter()
        .map(|(ground, length, expected)| compare(&ground, length, expected, config))
        .collect::<Result<Vec<_>>>()?;
    let passed = checks.iter().all(|c| c.passed);
    Ok(InverseReport { checks, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zerosum::is_minimal;

    fn seq(items: &[(i64, u64)]) -> Sequence<Element> {
        Sequence::from_counts(items.iter().map(|&(x, k)| (Element::scalar(x), k))).unwrap()
    }

    #[test]
    fn interval_max_examples() {
        let v = classify_interval_max(2, 3, &seq(&[(3, 2), (-2, 3)])).unwrap();
        assert_eq!((v.matches, v.case), (true, CaseTag::Thm2));
        let s = seq(&[(3, 1), (2, 1), (-1, 1), (-2, 2)]);
        assert_eq!(classify_interval_max(2, 3, &s).unwrap().case, CaseTag::None);
        assert!(!is_minimal(&s).unwrap());
        let s = seq(&[(4, 2), (-2, 4)]);
        assert_eq!(classify_interval_max(2, 4, &s).unwrap().case, CaseTag::None);
        assert!(classify_interval_max(2, 3, &seq(&[(3, 1), (-3, 1)])).is_err());
    }

    #[test]
    fn symmetric_examples() {
        assert_eq!(
            classify_symmetric_max(3, &seq(&[(3, 2), (-2, 3)])).unwrap().case,
            CaseTag::Cor3Pos
        );
        assert_eq!(
            classify_symmetric_max(3, &seq(&[(-3, 2), (2, 3)])).unwrap().case,
            CaseTag::Cor3Neg
        );
        let s = seq(&[(3, 1), (2, 1), (-2, 2), (-1, 1)]);
        assert_eq!(classify_symmetric_max(3, &s).unwrap().case, CaseTag::None);
        assert_eq!(
            classify_symmetric_submax(3, &seq(&[(3, 1), (-1, 3)])).unwrap().case,
            CaseTag::T2m2IPos
        );
        assert_eq!(
            classify_symmetric_submax(4, &seq(&[(4, 2), (-3, 3), (1, 1)]))
                .unwrap()
                .case,
            CaseTag::T2m2IiPos
        );
        // the odd-m family at m = 4 would be 4^2 (-2)^4, which is not an atom
        assert_eq!(
            classify_symmetric_submax(4, &seq(&[(4, 2), (-2, 4)])).unwrap().case,
            CaseTag::None
        );
        assert!(classify_symmetric_submax(4, &seq(&[(4, 2), (-3, 3)])).is_err());
    }

    #[test]
    fn verifier_examples() {
        let cfg = SearchConfig::default();
        let r = verify_inverse(&[3], &cfg).unwrap();
        assert!(r.passed);
        let lens: Vec<(u64, usize)> = r.checks.iter().map(|c| (c.length, c.found.len())).collect();
        assert_eq!(lens, vec![(5, 2), (4, 4)]);
        let r = verify_inverse(&[4], &cfg).unwrap();
        let lens: Vec<(u64, usize)> = r.checks.iter().map(|c| (c.length, c.found.len())).collect();
        assert_eq!(lens, vec![(7, 2), (6, 2)]);
        let r = verify_inverse(&[3, 4], &cfg).unwrap();
        assert!(r.passed);
        let c = r.checks.iter().find(|c| c.ground == "[-3,4]").unwrap();
        assert_eq!(c.found, vec![seq(&[(4, 3), (-3, 4)]).to_string()]);
    }
}
