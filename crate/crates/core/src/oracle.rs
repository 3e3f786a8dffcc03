//! Slow reference computations used to cross-check the fast paths.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::PcError;
use crate::pcpres::{ExponentVector, PcPresentation};

/// Determinant by cofactor expansion.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    match n {
        0 => BigInt::one(),
        1 => m[0][0].clone(),
        _ => {
            let mut total = BigInt::zero();
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BigInt>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(k, _)| k != c)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][c] * determinant(&minor);
                if c % 2 == 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
            total
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `d_k` = gcd of all `k x k` minors, for `k = 1..=min(rows, cols)`.
pub fn determinantal_divisors(m: &[Vec<BigInt>], cols: usize) -> Vec<BigInt> {
    let rows = m.len();
    (1..=rows.min(cols))
        .map(|k| {
            let mut g = BigInt::zero();
            for rs in subsets(rows, k) {
                for cs in subsets(cols, k) {
                    let minor: Vec<Vec<BigInt>> = rs
                        .iter()
                        .map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect())
                        .collect();
                    g = g.gcd(&determinant(&minor));
                }
            }
            g
        })
        .collect()
}

/// Nonzero elementary divisors from determinantal divisors.
pub fn elementary_divisors(m: &[Vec<BigInt>], cols: usize) -> Vec<BigInt> {
    let d = determinantal_divisors(m, cols);
    let mut prev = BigInt::one();
    let mut out = Vec::new();
    for dk in d {
        if dk.is_zero() {
            break;
        }
        out.push(&dk / &prev);
        prev = dk;
    }
    out
}

/// All elements of a finite group given by a presentation, by closing the
/// identity under right multiplication by the generators.
pub fn enumerate_elements(
    p: &PcPresentation,
    limit: usize,
) -> Result<Option<Vec<ExponentVector>>, PcError> {
    let gens: Vec<ExponentVector> = (0..p.len())
        .map(|g| ExponentVector::unit(p.len(), g))
        .collect();
    let mut seen: HashSet<ExponentVector> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(p.identity());
    queue.push_back(p.identity());
    let mut out = Vec::new();
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = p.multiply(&x, g)?;
            if seen.insert(y.clone()) {
                if seen.len() > limit {
                    return Ok(None);
                }
                queue.push_back(y);
            }
        }
        out.push(x);
    }
    Ok(Some(out))
}

/// Order of `x` by repeated multiplication, up to `limit`.
pub fn order_by_powers(
    p: &PcPresentation,
    x: &ExponentVector,
    limit: u64,
) -> Result<Option<u64>, PcError> {
    let mut acc = x.clone();
    for k in 1..=limit {
        if acc.is_identity() {
            return Ok(Some(k));
        }
        acc = p.multiply(&acc, x)?;
    }
    Ok(None)
}

/// Elements of finite order among the normal forms whose infinite
/// coordinates lie in `[-radius, radius]`, found by repeated multiplication.
pub fn finite_order_elements(
    p: &PcPresentation,
    radius: i64,
    limit: u64,
) -> Result<BTreeSet<Vec<i64>>, PcError> {
    let ranges: Vec<(i64, i64)> = (0..p.len())
        .map(|g| {
            if p.rel_order(g) == 0 {
                (-radius, radius)
            } else {
                (0, p.rel_order(g) - 1)
            }
        })
        .collect();
    let mut out = BTreeSet::new();
    let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        let x = ExponentVector::from_vec(cur.clone());
        if order_by_powers(p, &x, limit)?.is_some() {
            out.insert(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == cur.len() {
                return Ok(out);
            }
            if cur[i] < ranges[i].1 {
                cur[i] += 1;
                break;
            }
            cur[i] = ranges[i].0;
            i += 1;
        }
    }
}

/// Rank of the `k`-th lower central layer of a free group of rank `r`.
pub fn witt(r: u64, k: u64) -> u64 {
    fn mobius(mut d: u64) -> i64 {
        let mut res = 1;
        let mut q = 2;
        while q * q <= d {
            if d.is_multiple_of(q) {
                d /= q;
                if d.is_multiple_of(q) {
                    return 0;
                }
                res = -res;
            }
            q += 1;
        }
        if d > 1 {
            res = -res;
        }
        res
    }
    let mut total: i128 = 0;
    for d in 1..=k {
        if k.is_multiple_of(d) {
            total += mobius(d) as i128 * (r as i128).pow((k / d) as u32);
        }
    }
    (total / k as i128) as u64
}

/// Product of upper unitriangular 3x3 integer matrices, stored as `(x, y, z)`
/// for the entries above the diagonal.
pub fn unitriangular_mul(
    a: (BigInt, BigInt, BigInt),
    b: (BigInt, BigInt, BigInt),
) -> (BigInt, BigInt, BigInt) {
    let z = &a.2 + &b.2 + &a.0 * &b.1;
    (a.0 + b.0, a.1 + b.1, z)
}

pub fn unitriangular_pow(a: &(BigInt, BigInt, BigInt), e: i64) -> (BigInt, BigInt, BigInt) {
    let base = if e >= 0 {
        a.clone()
    } else {
        // inverse of (x, y, z) is (-x, -y, xy - z)
        (-&a.0, -&a.1, &a.0 * &a.1 - &a.2)
    };
    let mut acc = (BigInt::zero(), BigInt::zero(), BigInt::zero());
    for _ in 0..e.abs() {
        acc = unitriangular_mul(acc, base.clone());
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn divisors() {
        assert_eq!(
            elementary_divisors(&m(&[&[2, 4], &[6, 8]]), 2),
            vec![BigInt::from(2), BigInt::from(4)]
        );
        assert_eq!(
            determinant(&m(&[&[1, 2, 3], &[0, 1, 4], &[5, 6, 0]])),
            BigInt::from(1)
        );
    }

    #[test]
    fn witt_values() {
        let v: Vec<u64> = (1..=8).map(|k| witt(2, k)).collect();
        assert_eq!(v, vec![2, 1, 2, 3, 6, 9, 18, 30]);
    }
}
