//! Arithmetic over prime fields `F_q`, values stored as `u64` in `0..q`.

use crate::error::{Error, Result};

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn check_prime(q: u64) -> Result<()> {
    if is_prime(q) {
        Ok(())
    } else {
        Err(Error::NotPrime(q))
    }
}

pub fn add(a: u64, b: u64, q: u64) -> u64 {
    (a + b) % q
}

pub fn sub(a: u64, b: u64, q: u64) -> u64 {
    (a + q - b) % q
}

pub fn mul(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub fn pow(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base, q);
        }
        base = mul(base, base, q);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse of a non-zero element.
pub fn inv(a: u64, q: u64) -> u64 {
    debug_assert!(a % q != 0);
    pow(a, q - 2, q)
}

/// Reduces `rows` in place to row-echelon form; returns the pivot columns.
pub(crate) fn row_reduce(rows: &mut [Vec<u64>], q: u64) -> Vec<usize> {
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(found) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, found);
        let scale = inv(rows[r][c], q);
        rows[r].iter_mut().for_each(|v| *v = mul(*v, scale, q));
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..width {
                    let t = mul(f, rows[r][j], q);
                    rows[i][j] = sub(rows[i][j], t, q);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<u64>], q: u64) -> usize {
    row_reduce(&mut rows.to_vec(), q).len()
}
