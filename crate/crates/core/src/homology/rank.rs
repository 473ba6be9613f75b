//! Ranks of sparse boundary matrices by column reduction, over `GF(P)` for
//! word-sized primes or exactly over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A sparse column: `(row, coefficient)` sorted by row, coefficients ±1.
pub type SignedColumn = Vec<(u32, i8)>;

/// Result of reducing one matrix.
#[derive(Clone, Debug, Default)]
pub struct Reduction {
    pub rank: usize,
    /// Rows that became pivots; their columns in the next-lower matrix are
    /// cleared.
    pub pivot_rows: Vec<u32>,
}

fn add_scaled(a: &[(u32, u64)], b: &[(u32, u64)], factor: u64, prime: u64) -> Vec<(u32, u64)> {
    // a + factor·b mod prime
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, factor * b[j].1 % prime));
            j += 1;
        } else {
            let v = (a[i].1 + factor * b[j].1) % prime;
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut e = p - 2;
    let mut base = a % p;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Rank over `GF(prime)` by left-to-right reduction on the lowest nonzero
/// row. Columns listed in `cleared` are known to reduce to zero and are
/// skipped.
pub fn rank_mod_p(
    columns: &[SignedColumn],
    rows: usize,
    prime: u64,
    cleared: &[bool],
) -> Reduction {
    let mut pivot_col: Vec<u32> = vec![u32::MAX; rows];
    let mut store: Vec<Vec<(u32, u64)>> = Vec::new();
    let mut pivot_rows = Vec::new();
    for (c, col) in columns.iter().enumerate() {
        if cleared.get(c).copied().unwrap_or(false) {
            continue;
        }
        let mut v: Vec<(u32, u64)> = col
            .iter()
            .map(|&(r, s)| (r, if s > 0 { 1 } else { prime - 1 }))
            .collect();
        while let Some(&(low, val)) = v.last() {
            let pc = pivot_col[low as usize];
            if pc == u32::MAX {
                break;
            }
            // stored pivot columns have coefficient 1 at their low row
            let factor = prime - val;
            v = add_scaled(&v, &store[pc as usize], factor, prime);
        }
        if let Some(&(low, val)) = v.last() {
            let inv = inv_mod(val, prime);
            for e in v.iter_mut() {
                e.1 = e.1 * inv % prime;
            }
            pivot_col[low as usize] = store.len() as u32;
            store.push(v);
            pivot_rows.push(low);
        }
    }
    Reduction {
        rank: store.len(),
        pivot_rows,
    }
}

fn content(v: &[(u32, BigInt)]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, (_, x)| g.gcd(x))
}

/// Exact rank over the rationals by fraction-free column reduction on
/// integers, dividing each column by its content.
pub fn rank_exact(columns: &[SignedColumn], rows: usize, cleared: &[bool]) -> Reduction {
    let mut pivot_col: Vec<u32> = vec![u32::MAX; rows];
    let mut store: Vec<Vec<(u32, BigInt)>> = Vec::new();
    let mut pivot_rows = Vec::new();
    for (c, col) in columns.iter().enumerate() {
        if cleared.get(c).copied().unwrap_or(false) {
            continue;
        }
        let mut v: Vec<(u32, BigInt)> = col.iter().map(|&(r, s)| (r, BigInt::from(s))).collect();
        while let Some((low, val)) = v.last().cloned() {
            let pc = pivot_col[low as usize];
            if pc == u32::MAX {
                break;
            }
            let piv = &store[pc as usize];
            let pval = &piv.last().expect("nonempty pivot").1;
            // v ← pval·v − val·piv
            let mut out: Vec<(u32, BigInt)> = Vec::with_capacity(v.len() + piv.len());
            let (mut i, mut j) = (0, 0);
            while i < v.len() || j < piv.len() {
                if j == piv.len() || (i < v.len() && v[i].0 < piv[j].0) {
                    out.push((v[i].0, pval * &v[i].1));
                    i += 1;
                } else if i == v.len() || piv[j].0 < v[i].0 {
                    out.push((piv[j].0, -(&val * &piv[j].1)));
                    j += 1;
                } else {
                    let x = pval * &v[i].1 - &val * &piv[j].1;
                    if !x.is_zero() {
                        out.push((v[i].0, x));
                    }
                    i += 1;
                    j += 1;
                }
            }
            let g = content(&out);
            if !g.is_zero() && !g.is_one() {
                for e in out.iter_mut() {
                    e.1 = &e.1 / &g;
                }
            }
            v = out;
        }
        if let Some((low, val)) = v.last().cloned() {
            if val.is_negative() {
                for e in v.iter_mut() {
                    e.1 = -e.1.clone();
                }
            }
            pivot_col[low as usize] = store.len() as u32;
            store.push(v);
            pivot_rows.push(low);
        }
    }
    Reduction {
        rank: store.len(),
        pivot_rows,
    }
}

/// Miller–Rabin with bases 2, 3, 5, 7: exact for `n < 3_215_031_751`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let powmod = |b: u64, mut e: u64| -> u64 {
        let m = n as u128;
        let mut acc = 1u128;
        let mut base = b as u128 % m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        acc as u64
    };
    'witness: for a in [2u64, 3, 5, 7] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
