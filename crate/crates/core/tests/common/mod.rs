#![allow(dead_code)]

use davkit::{Element, Sequence};

pub fn seq(items: &[(i64, u64)]) -> Sequence<Element> {
    Sequence::from_counts(items.iter().map(|&(x, k)| (Element::scalar(x), k))).unwrap()
}

/// Every multiset of exactly `len` integers drawn from `alphabet`.
pub fn multisets(alphabet: &[i64], len: usize) -> Vec<Sequence<Element>> {
    fn rec(alphabet: &[i64], start: usize, left: usize, picks: &mut Vec<i64>, out: &mut Vec<Sequence<Element>>) {
        if left == 0 {
            out.push(Sequence::from_elements(picks.iter().map(|&x| Element::scalar(x))).unwrap());
            return;
        }
        for i in start..alphabet.len() {
            picks.push(alphabet[i]);
            rec(alphabet, i, left - 1, picks, out);
            picks.pop();
        }
    }
    let mut out = Vec::new();
    rec(alphabet, 0, len, &mut Vec::new(), &mut out);
    out
}

/// All nonempty subsets of `[-r, r] \ {0}` with at most `max_size` elements.
pub fn oracle_family(r: i64, max_size: usize) -> Vec<Vec<i64>> {
    let pool: Vec<i64> = (-r..=r).filter(|&x| x != 0).collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << pool.len()) {
        if mask.count_ones() as usize <= max_size {
            out.push(
                (0..pool.len())
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| pool[i])
                    .collect(),
            );
        }
    }
    out
}

pub fn mixed_signs(x: &[i64]) -> bool {
    x.iter().any(|&v| v < 0) && x.iter().any(|&v| v > 0)
}
