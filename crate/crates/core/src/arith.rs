//! Small integer helpers: gcd, extended Euclid and Bezout folds.

use crate::error::{Error, Result};

pub fn gcd(a: i64, b: i64) -> u64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn gcd_all(values: &[u64]) -> u64 {
    values.iter().fold(0u64, |acc, &v| {
        let (mut a, mut b) = (acc, v);
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    })
}

/// Returns `(g, s, t)` with `a*s + b*t = g = gcd(a, b)` and `g >= 0`.
pub fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (old_r, old_s, old_t) = (-old_r, -old_s, -old_t);
    }
    (old_r as i64, old_s as i64, old_t as i64)
}

/// Bezout coefficients for a list, folded left to right: returns `(g, w)` with
/// `sum(values[j] * w[j]) = g = gcd(values)`.
pub fn bezout_fold(values: &[i64]) -> Result<(i64, Vec<i64>)> {
    let Some((&first, rest)) = values.split_first() else {
        return Ok((0, Vec::new()));
    };
    let mut g = first.abs();
    let mut coeffs = vec![first.signum()];
    for &v in rest {
        let (next, s, t) = extended_gcd(g, v);
        for c in coeffs.iter_mut() {
            *c = c.checked_mul(s).ok_or(Error::Overflow)?;
        }
        coeffs.push(t);
        g = next;
    }
    Ok((g, coeffs))
}

/// Exact binomial coefficient, `None` on overflow of `u128`.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}
