//! Zero-sum and minimality predicates.
//!
//! [`find_proper_zero_subsum`] is a bounded-knapsack reachability DP over the
//! distinct symbols of a sequence. The `*_naive` functions and
//! [`atoms_brute`] enumerate sub-multisets exhaustively and exist to check
//! the DP and the search engine independently.

use std::collections::HashMap;

use crate::arith::binomial;
use crate::element::Symbol;
use crate::error::{Error, Result};
use crate::sequence::Sequence;

/// Default cap on the number of distinct reachable sums held by the DP.
pub const DEFAULT_STATE_CAP: usize = 5_000_000;

/// Default cap on candidates enumerated by the naive routines.
pub const DEFAULT_NAIVE_CAP: u128 = 10_000_000;

/// A nonempty proper sub-multiset with zero sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsumWitness<T: Symbol> {
    pub sub: Sequence<T>,
}

pub fn is_zero_sum<T: Symbol>(s: &Sequence<T>) -> Result<bool> {
    if s.is_empty() {
        return Err(Error::EmptySequence);
    }
    Ok(s.is_zero_sum())
}

pub fn find_proper_zero_subsum<T: Symbol>(s: &Sequence<T>) -> Result<Option<SubsumWitness<T>>> {
    find_proper_zero_subsum_capped(s, DEFAULT_STATE_CAP)
}

/// Looks for a nonempty proper zero-sum sub-multiset of `s`.
///
/// When `s` itself sums to zero, any such sub-multiset or its complement
/// misses a copy of the first symbol, so it suffices to search `s` with one
/// copy of that symbol removed. Otherwise every nonempty zero-sum
/// sub-multiset is automatically proper.
pub fn find_proper_zero_subsum_capped<T: Symbol>(
    s: &Sequence<T>,
    state_cap: usize,
) -> Result<Option<SubsumWitness<T>>> {
    if s.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut items: Vec<(T, u64)> = s.iter().map(|(x, k)| (x.clone(), k)).collect();
    if s.is_zero_sum() {
        items[0].1 -= 1;
        if items[0].1 == 0 {
            items.remove(0);
        }
    }
    let found = nonempty_zero_subsum(&items, state_cap)?;
    found
        .map(|pairs| Sequence::from_counts(pairs).map(|sub| SubsumWitness { sub }))
        .transpose()
}

pub fn is_minimal<T: Symbol>(s: &Sequence<T>) -> Result<bool> {
    is_minimal_capped(s, DEFAULT_STATE_CAP)
}

pub fn is_minimal_capped<T: Symbol>(s: &Sequence<T>, state_cap: usize) -> Result<bool> {
    Ok(is_zero_sum(s)? && find_proper_zero_subsum_capped(s, state_cap)?.is_none())
}

struct State<T> {
    sum: T,
    prev: Option<usize>,
    item: usize,
    count: u64,
}

/// Maps a reached sum to its state id.
enum SumIndex<T> {
    /// 1-d sums in `[offset, offset + slots.len())`.
    Dense {
        offset: i128,
        slots: Vec<u32>,
    },
    Hashed(HashMap<T, usize>),
}

impl<T: Symbol> SumIndex<T> {
    fn for_items(items: &[(T, u64)], state_cap: usize) -> Self {
        let scalars: Option<Vec<(i64, u64)>> = items.iter().map(|(x, k)| x.as_scalar().map(|v| (v, *k))).collect();
        if let Some(scalars) = scalars {
            let lo: i128 = scalars.iter().map(|&(v, k)| (v as i128).min(0) * k as i128).sum();
            let hi: i128 = scalars.iter().map(|&(v, k)| (v as i128).max(0) * k as i128).sum();
            let width = hi - lo + 1;
            if width <= (state_cap as i128).max(1 << 16) && width < u32::MAX as i128 {
                return SumIndex::Dense {
                    offset: lo,
                    slots: vec![u32::MAX; width as usize],
                };
            }
        }
        SumIndex::Hashed(HashMap::new())
    }

    fn get(&self, key: &T) -> Option<usize> {
        match self {
            SumIndex::Dense { offset, slots } => {
                let v = key.as_scalar()? as i128 - offset;
                match slots.get(usize::try_from(v).ok()?) {
                    Some(&id) if id != u32::MAX => Some(id as usize),
                    _ => None,
                }
            }
            SumIndex::Hashed(map) => map.get(key).copied(),
        }
    }

    fn insert(&mut self, key: T, id: usize) {
        match self {
            SumIndex::Dense { offset, slots } => {
                let v = key.as_scalar().expect("dense index holds scalars") as i128 - *offset;
                slots[v as usize] = id as u32;
            }
            SumIndex::Hashed(map) => {
                map.insert(key, id);
            }
        }
    }
}

/// Bounded-multiplicity reachability: returns the counts of one nonempty
/// zero-sum selection from `items`, if any. Sums are reached in a fixed
/// order (item by item, sources in creation order, counts ascending) and
/// only the first predecessor of each sum is kept.
fn nonempty_zero_subsum<T: Symbol>(items: &[(T, u64)], state_cap: usize) -> Result<Option<Vec<(T, u64)>>> {
    let mut states: Vec<State<T>> = Vec::new();
    let mut index = SumIndex::for_items(items, state_cap);

    for (item, (x, k)) in items.iter().enumerate() {
        let snapshot = states.len();
        for src in std::iter::once(None).chain((0..snapshot).map(Some)) {
            let mut cur = match src {
                Some(i) => states[i].sum.clone(),
                None => x.zero_like(),
            };
            for count in 1..=*k {
                cur = cur.checked_add(x)?;
                if cur.is_zero() {
                    return Ok(Some(reconstruct(items, &states, src, item, count)));
                }
                if index.get(&cur).is_none() {
                    if states.len() >= state_cap {
                        return Err(Error::Guard {
                            what: "zero-sum DP reachable states",
                            needed: states.len() as u128 + 1,
                            cap: state_cap as u128,
                        });
                    }
                    index.insert(cur.clone(), states.len());
                    states.push(State {
                        sum: cur.clone(),
                        prev: src,
                        item,
                        count,
                    });
                }
            }
        }
    }
    Ok(None)
}

fn reconstruct<T: Symbol>(
    items: &[(T, u64)],
    states: &[State<T>],
    mut src: Option<usize>,
    item: usize,
    count: u64,
) -> Vec<(T, u64)> {
    let mut picked = vec![(items[item].0.clone(), count)];
    while let Some(i) = src {
        let st = &states[i];
        picked.push((items[st.item].0.clone(), st.count));
        src = st.prev;
    }
    picked.reverse();
    picked
}

/// Every sub-multiset of `s` as a vector of counts over `s`'s distinct
/// symbols, visited in odometer order. Refuses when the number of
/// sub-multisets exceeds `cap`.
fn for_each_subcount<T: Symbol>(
    s: &Sequence<T>,
    cap: u128,
    mut visit: impl FnMut(&[u64]) -> Result<bool>,
) -> Result<()> {
    let mults: Vec<u64> = s.iter().map(|(_, k)| k).collect();
    let total = mults
        .iter()
        .try_fold(1u128, |acc, &k| acc.checked_mul(k as u128 + 1))
        .unwrap_or(u128::MAX);
    if total > cap {
        return Err(Error::Guard {
            what: "sub-multisets to enumerate",
            needed: total,
            cap,
        });
    }
    let mut counts = vec![0u64; mults.len()];
    loop {
        if !visit(&counts)? {
            return Ok(());
        }
        let mut axis = 0;
        loop {
            if axis == counts.len() {
                return Ok(());
            }
            if counts[axis] < mults[axis] {
                counts[axis] += 1;
                break;
            }
            counts[axis] = 0;
            axis += 1;
        }
    }
}

fn sub_from_counts<T: Symbol>(support: &[T], counts: &[u64]) -> Result<Sequence<T>> {
    Sequence::from_counts(support.iter().cloned().zip(counts.iter().copied()))
}

/// Full subset scan: the first nonempty proper zero-sum sub-multiset in
/// odometer order, if any.
pub fn find_proper_zero_subsum_naive<T: Symbol>(s: &Sequence<T>, cap: u128) -> Result<Option<Sequence<T>>> {
    if s.is_empty() {
        return Err(Error::EmptySequence);
    }
    let support = s.support();
    let zero = support[0].zero_like();
    let mut found = None;
    for_each_subcount(s, cap, |counts| {
        let len: u64 = counts.iter().sum();
        if len == 0 || len == s.len() {
            return Ok(true);
        }
        let mut sum = zero.clone();
        for (x, &c) in support.iter().zip(counts) {
            if c > 0 {
                sum = sum.checked_add(&x.checked_scale(c)?)?;
            }
        }
        if sum.is_zero() {
            found = Some(sub_from_counts(&support, counts)?);
            return Ok(false);
        }
        Ok(true)
    })?;
    Ok(found)
}

pub fn is_minimal_naive<T: Symbol>(s: &Sequence<T>, cap: u128) -> Result<bool> {
    Ok(is_zero_sum(s)? && find_proper_zero_subsum_naive(s, cap)?.is_none())
}

/// All nonempty zero-sum sub-multisets of `s` (including `s` itself when it
/// is zero-sum), sorted.
pub fn zero_sum_subsequences<T: Symbol>(s: &Sequence<T>, cap: u128) -> Result<Vec<Sequence<T>>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let support = s.support();
    let zero = support[0].zero_like();
    let mut out = Vec::new();
    for_each_subcount(s, cap, |counts| {
        if counts.iter().all(|&c| c == 0) {
            return Ok(true);
        }
        let mut sum = zero.clone();
        for (x, &c) in support.iter().zip(counts) {
            if c > 0 {
                sum = sum.checked_add(&x.checked_scale(c)?)?;
            }
        }
        if sum.is_zero() {
            out.push(sub_from_counts(&support, counts)?);
        }
        Ok(true)
    })?;
    out.sort();
    Ok(out)
}

/// Every minimal zero-sum sequence over `elements` of length at most
/// `max_len`, found by listing all multisets in nondecreasing order and
/// filtering with the full subset scan. No pruning.
pub fn atoms_brute<T: Symbol>(elements: &[T], max_len: usize) -> Result<Vec<Sequence<T>>> {
    let mut alphabet = elements.to_vec();
    alphabet.sort();
    alphabet.dedup();
    let n = alphabet.len() as u64;
    if n == 0 || max_len == 0 {
        return Ok(Vec::new());
    }
    let candidates = binomial(n + max_len as u64, max_len as u64).map_or(u128::MAX, |c| c - 1);
    if candidates > DEFAULT_NAIVE_CAP {
        return Err(Error::Guard {
            what: "candidate multisets for brute-force atom enumeration",
            needed: candidates,
            cap: DEFAULT_NAIVE_CAP,
        });
    }

    let mut out = Vec::new();
    let mut picks: Vec<usize> = Vec::with_capacity(max_len);
    fn rec<T: Symbol>(
        alphabet: &[T],
        start: usize,
        max_len: usize,
        picks: &mut Vec<usize>,
        out: &mut Vec<Sequence<T>>,
    ) -> Result<()> {
        for i in start..alphabet.len() {
            picks.push(i);
            let s = Sequence::from_elements(picks.iter().map(|&j| alphabet[j].clone()))?;
            if s.is_zero_sum() && find_proper_zero_subsum_naive(&s, DEFAULT_NAIVE_CAP)?.is_none() {
                out.push(s);
            }
            if picks.len() < max_len {
                rec(alphabet, i, max_len, picks, out)?;
            }
            picks.pop();
        }
        Ok(())
    }
    rec(&alphabet, 0, max_len, &mut picks, &mut out)?;
    out.sort();
    Ok(out)
}
