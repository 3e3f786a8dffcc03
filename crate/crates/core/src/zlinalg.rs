//! Exact integer matrix algebra: Hermite and Smith normal forms, coset
//! representatives modulo a row lattice, and abelian invariants.
//!
//! Relations are rows throughout.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::LinalgError;

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| x.to_string()).collect())
            .collect();
        write!(f, "IntMatrix{:?}", rows)
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(
        cols: usize,
        rows: &[Vec<T>],
    ) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend(r.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let v: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        IntMatrix::from_rows(cols, &v).expect("ragged rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero_row(&self, r: usize) -> bool {
        self.row(r).iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let s = &self.data[src * self.cols + c];
            if !s.is_zero() {
                let t = s * q;
                self.data[dst * self.cols + c] -= t;
            }
        }
    }

    /// col[dst] -= q * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let s = &self.data[r * self.cols + src];
            if !s.is_zero() {
                let t = s * q;
                self.data[r * self.cols + dst] -= t;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let x = &mut self.data[r * self.cols + c];
            *x = -std::mem::take(x);
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

/// Row Hermite normal form. Returns `(H, U)` with `U * A = H`, `U`
/// unimodular, pivots positive with strictly increasing columns, entries
/// above each pivot in `[0, pivot)`, zero rows last.
///
/// Elimination always pivots on the entry of least absolute value in the
/// current column to limit coefficient growth.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut prow = 0;
    for col in 0..h.cols {
        if prow == h.rows {
            break;
        }
        loop {
            let best = (prow..h.rows)
                .filter(|&r| !h[(r, col)].is_zero())
                .min_by(|&x, &y| h[(x, col)].abs().cmp(&h[(y, col)].abs()));
            let Some(best) = best else { break };
            h.swap_rows(prow, best);
            u.swap_rows(prow, best);
            let mut done = true;
            for r in prow + 1..h.rows {
                if h[(r, col)].is_zero() {
                    continue;
                }
                let q = h[(r, col)].div_floor(&h[(prow, col)]);
                h.row_axpy(r, prow, &q);
                u.row_axpy(r, prow, &q);
                if !h[(r, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(prow, col)].is_zero() {
            continue;
        }
        if h[(prow, col)].is_negative() {
            h.negate_row(prow);
            u.negate_row(prow);
        }
        let p = h[(prow, col)].clone();
        for r in 0..prow {
            let q = h[(r, col)].div_floor(&p);
            h.row_axpy(r, prow, &q);
            u.row_axpy(r, prow, &q);
        }
        prow += 1;
    }
    (h, u)
}

/// Smith normal form. Returns `(S, U, V)` with `U * A * V = S` diagonal,
/// `d1 | d2 | ...`, all nonzero entries positive.
pub fn snf(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut s = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut v = IntMatrix::identity(a.cols);
    let n = a.rows.min(a.cols);
    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for r in t..s.rows {
                for c in t..s.cols {
                    if s[(r, c)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(br, bc)| s[(r, c)].abs() < s[(br, bc)].abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((br, bc)) = best else {
                return finish_snf(s, u, v);
            };
            s.swap_rows(t, br);
            u.swap_rows(t, br);
            s.swap_cols(t, bc);
            v.swap_cols(t, bc);
            let p = s[(t, t)].clone();
            let mut clean = true;
            for r in t + 1..s.rows {
                if !s[(r, t)].is_zero() {
                    let q = s[(r, t)].div_floor(&p);
                    s.row_axpy(r, t, &q);
                    u.row_axpy(r, t, &q);
                    clean &= s[(r, t)].is_zero();
                }
            }
            for c in t + 1..s.cols {
                if !s[(t, c)].is_zero() {
                    let q = s[(t, c)].div_floor(&p);
                    s.col_axpy(c, t, &q);
                    v.col_axpy(c, t, &q);
                    clean &= s[(t, c)].is_zero();
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t
            let mut offender = None;
            'outer: for r in t + 1..s.rows {
                for c in t + 1..s.cols {
                    if !s[(r, c)].is_multiple_of(&p) {
                        offender = Some(r);
                        break 'outer;
                    }
                }
            }
            match offender {
                Some(r) => {
                    let m1 = BigInt::from(-1);
                    s.row_axpy(t, r, &m1);
                    u.row_axpy(t, r, &m1);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    finish_snf(s, u, v)
}

fn finish_snf(
    mut s: IntMatrix,
    mut u: IntMatrix,
    v: IntMatrix,
) -> (IntMatrix, IntMatrix, IntMatrix) {
    for t in 0..s.rows.min(s.cols) {
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    (s, u, v)
}

/// Canonical coset representative of `v` modulo the row lattice of `h`,
/// which must be in row Hermite normal form.
pub fn reduce_mod_rows(h: &IntMatrix, v: &[BigInt]) -> Result<Vec<BigInt>, LinalgError> {
    if v.len() != h.cols {
        return Err(LinalgError::DimensionMismatch {
            expected: h.cols,
            got: v.len(),
        });
    }
    let mut out = v.to_vec();
    for r in 0..h.rows {
        let row = h.row(r);
        let Some(p) = row.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        let q = out[p].div_floor(&row[p]);
        if q.is_zero() {
            continue;
        }
        for c in p..h.cols {
            if !row[c].is_zero() {
                out[c] -= &row[c] * &q;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AbelianInvariants {
    /// Nontrivial elementary divisors, each dividing the next.
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    /// Largest elementary divisor of a finite group, 0 when free rank is
    /// present, 1 for the trivial group.
    pub fn exponent(&self) -> BigInt {
        if self.free_rank > 0 {
            BigInt::zero()
        } else {
            self.torsion.last().cloned().unwrap_or_else(BigInt::one)
        }
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |a, b| a * b)
    }
}

/// Invariants of `Z^n / rowspace(A)`.
pub fn abelian_invariants(
    a: &IntMatrix,
    ambient_rank: usize,
) -> Result<AbelianInvariants, LinalgError> {
    if a.rows > 0 && a.cols != ambient_rank {
        return Err(LinalgError::DimensionMismatch {
            expected: ambient_rank,
            got: a.cols,
        });
    }
    if a.rows == 0 {
        return Ok(AbelianInvariants {
            torsion: vec![],
            free_rank: ambient_rank,
        });
    }
    let (s, _, _) = snf(a);
    let mut rank = 0;
    let mut torsion = Vec::new();
    for t in 0..s.rows.min(s.cols) {
        let d = &s[(t, t)];
        if d.is_zero() {
            break;
        }
        rank += 1;
        if !d.is_one() {
            torsion.push(d.clone());
        }
    }
    Ok(AbelianInvariants {
        torsion,
        free_rank: ambient_rank - rank,
    })
}

/// Integer basis of `{x : x * A = 0}`, as rows.
pub fn left_kernel(a: &IntMatrix) -> IntMatrix {
    let (h, u) = hnf(a);
    let zero_rows: Vec<usize> = (0..h.rows).filter(|&r| h.is_zero_row(r)).collect();
    let rows: Vec<Vec<BigInt>> = zero_rows.iter().map(|&r| u.row(r).to_vec()).collect();
    IntMatrix::from_rows(a.rows, &rows).expect("kernel rows")
}

/// Rows spanning the saturation `(rowspace(A) ⊗ Q) ∩ Z^n` of the row
/// lattice of `A`, in Hermite normal form without zero rows.
pub fn saturate(a: &IntMatrix) -> IntMatrix {
    if a.rows == 0 {
        return a.clone();
    }
    // right kernel K of A as rows, then the left kernel of K^T
    let k = left_kernel(&a.transpose());
    let sat = if k.rows == 0 {
        IntMatrix::identity(a.cols)
    } else {
        left_kernel(&k.transpose())
    };
    let (h, _) = hnf(&sat);
    let keep: Vec<Vec<BigInt>> = (0..h.rows)
        .filter(|&r| !h.is_zero_row(r))
        .map(|r| h.row(r).to_vec())
        .collect();
    IntMatrix::from_rows(a.cols, &keep).expect("saturated rows")
}

/// Sparse row: strictly increasing columns, nonzero entries.
pub type SparseRow = Vec<(usize, BigInt)>;

/// Incrementally maintained Hermite basis of an integer row lattice.
/// Every row stays reduced modulo the pivots of the other rows, which keeps
/// coefficients small.
#[derive(Clone, Debug, Default)]
pub struct EchelonLattice {
    ncols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

fn axpy_sparse(dst: &SparseRow, q: &BigInt, src: &SparseRow) -> SparseRow {
    // dst - q * src
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        let take_dst = j == src.len() || (i < dst.len() && dst[i].0 < src[j].0);
        let take_src = i == dst.len() || (j < src.len() && src[j].0 < dst[i].0);
        if take_dst {
            out.push(dst[i].clone());
            i += 1;
        } else if take_src {
            out.push((src[j].0, -(q * &src[j].1)));
            j += 1;
        } else {
            let v = &dst[i].1 - q * &src[j].1;
            if !v.is_zero() {
                out.push((dst[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn lin_comb(a: &BigInt, x: &SparseRow, b: &BigInt, y: &SparseRow) -> SparseRow {
    // a*x + b*y
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let c = match (x.get(i), y.get(j)) {
            (Some(p), Some(q)) if p.0 == q.0 => {
                let v = a * &p.1 + b * &q.1;
                i += 1;
                j += 1;
                (p.0, v)
            }
            (Some(p), Some(q)) if p.0 < q.0 => {
                i += 1;
                (p.0, a * &p.1)
            }
            (Some(p), None) => {
                i += 1;
                (p.0, a * &p.1)
            }
            (_, Some(q)) => {
                j += 1;
                (q.0, b * &q.1)
            }
            (None, None) => unreachable!(),
        };
        if !c.1.is_zero() {
            out.push(c);
        }
    }
    out
}

impl EchelonLattice {
    pub fn new(ncols: usize) -> Self {
        EchelonLattice {
            ncols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn insert_dense(&mut self, row: &[i64]) {
        let sparse: SparseRow = row
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(|(c, v)| (c, BigInt::from(*v)))
            .collect();
        self.insert(sparse);
    }

    /// Adds a row to the lattice. Returns true when the lattice grew.
    pub fn insert(&mut self, mut row: SparseRow) -> bool {
        let mut grew = false;
        loop {
            let Some((lead, _)) = row.first().cloned() else {
                return grew;
            };
            let Some(piv) = self.pivots.get(&lead) else {
                if row[0].1.is_negative() {
                    for e in row.iter_mut() {
                        e.1 = -std::mem::take(&mut e.1);
                    }
                }
                self.pivots.insert(lead, row);
                self.settle(lead);
                return true;
            };
            let p = &piv[0].1;
            let r = &row[0].1;
            if r.is_multiple_of(p) {
                let q = r / p;
                row = axpy_sparse(&row, &q, piv);
            } else {
                let eg = p.extended_gcd(r);
                let (g, x, y) = (eg.gcd, eg.x, eg.y);
                let new_piv = lin_comb(&x, piv, &y, &row);
                let rest = lin_comb(&(r / &g), piv, &(-(p / &g)), &row);
                self.pivots.insert(lead, new_piv);
                self.settle(lead);
                grew = true;
                row = rest;
            }
        }
    }

    /// Reduces the entries of `row` at pivot columns other than its own
    /// leading column into `[0, pivot)`.
    fn reduce_tail(&self, mut row: SparseRow) -> SparseRow {
        let mut idx = 1;
        while idx < row.len() {
            let c = row[idx].0;
            if let Some(piv) = self.pivots.get(&c) {
                let q = row[idx].1.div_floor(&piv[0].1);
                if !q.is_zero() {
                    row = axpy_sparse(&row, &q, piv);
                    idx = row.partition_point(|e| e.0 <= c);
                    continue;
                }
            }
            idx += 1;
        }
        row
    }

    /// Restores full reduction after the pivot row at `col` changed.
    fn settle(&mut self, col: usize) {
        let r = self.pivots.remove(&col).expect("pivot row");
        let r = self.reduce_tail(r);
        self.pivots.insert(col, r);
        let above: Vec<usize> = self
            .pivots
            .range(..col)
            .filter(|(_, row)| row.binary_search_by_key(&col, |e| e.0).is_ok())
            .map(|(&c, _)| c)
            .collect();
        for a in above {
            let row = self.pivots.remove(&a).expect("pivot row");
            let row = self.reduce_tail(row);
            self.pivots.insert(a, row);
        }
    }

    /// Whether `row` lies in the lattice.
    pub fn contains(&self, row: &SparseRow) -> bool {
        let mut row = row.clone();
        loop {
            let Some((lead, val)) = row.first().cloned() else {
                return true;
            };
            let Some(piv) = self.pivots.get(&lead) else {
                return false;
            };
            if !val.is_multiple_of(&piv[0].1) {
                return false;
            }
            row = axpy_sparse(&row, &(&val / &piv[0].1), piv);
        }
    }

    /// Fully reduced Hermite basis, keyed by pivot column.
    pub fn into_hnf(self) -> BTreeMap<usize, SparseRow> {
        self.pivots
    }

    pub fn to_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.pivots.len(), self.ncols);
        for (r, row) in self.pivots.values().enumerate() {
            for (c, v) in row {
                m[(r, *c)] = v.clone();
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Bareiss fraction-free determinant; independent of the HNF code.
    fn det(m: &IntMatrix) -> BigInt {
        let n = m.rows();
        assert_eq!(n, m.cols());
        if n == 0 {
            return BigInt::one();
        }
        let mut a = m.row_vecs();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(sw) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, sw);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    /// gcd of all k×k minors, by enumeration.
    fn determinantal_divisor(m: &IntMatrix, k: usize) -> BigInt {
        fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = combos(n - 1, k);
            for mut c in combos(n - 1, k - 1) {
                c.push(n - 1);
                out.push(c);
            }
            out
        }
        let mut g = BigInt::zero();
        for rs in combos(m.rows(), k) {
            for cs in combos(m.cols(), k) {
                let sub: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| m[(r, c)].clone()).collect())
                    .collect();
                let sm = IntMatrix::from_rows(k, &sub).unwrap();
                g = g.gcd(&det(&sm));
            }
        }
        g
    }

    fn is_hnf(h: &IntMatrix) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero = false;
        for r in 0..h.rows() {
            let piv = h.row(r).iter().position(|x| !x.is_zero());
            match piv {
                None => seen_zero = true,
                Some(p) => {
                    if seen_zero || last_pivot.is_some_and(|lp| p <= lp) || !h[(r, p)].is_positive()
                    {
                        return false;
                    }
                    for above in 0..r {
                        if h[(above, p)].is_negative() || h[(above, p)] >= h[(r, p)] {
                            return false;
                        }
                    }
                    last_pivot = Some(p);
                }
            }
        }
        true
    }

    #[test]
    fn hnf_examples() {
        let (h, u) = hnf(&IntMatrix::identity(3));
        assert_eq!(h, IntMatrix::identity(3));
        assert_eq!(u, IntMatrix::identity(3));

        let a = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        let (h, u) = hnf(&a);
        assert_eq!(h, IntMatrix::from_i64(&[&[2, 0], &[0, 4]]));
        assert_eq!(u.mul(&a).unwrap(), h);
        // determinantal-divisor oracle: |det| equals the pivot product
        assert_eq!(det(&a).abs(), big(8));

        let z = IntMatrix::zeros(2, 3);
        let (h, u) = hnf(&z);
        assert_eq!(h, z);
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn snf_examples() {
        let (s, u, v) = snf(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(s, IntMatrix::from_i64(&[&[1, 0], &[0, 6]]));
        assert_eq!(
            u.mul(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]))
                .unwrap()
                .mul(&v)
                .unwrap(),
            s
        );
        assert_eq!(snf(&IntMatrix::identity(3)).0, IntMatrix::identity(3));
        assert_eq!(
            snf(&IntMatrix::from_i64(&[&[0]])).0,
            IntMatrix::from_i64(&[&[0]])
        );
    }

    #[test]
    fn reduce_examples() {
        let v = [big(5), big(-3)];
        assert_eq!(
            reduce_mod_rows(&IntMatrix::identity(2), &v).unwrap(),
            vec![big(0), big(0)]
        );
        let h = IntMatrix::from_i64(&[&[2, 0], &[0, 4]]);
        assert_eq!(
            reduce_mod_rows(&h, &[big(3), big(5)]).unwrap(),
            vec![big(1), big(1)]
        );
        let z = IntMatrix::zeros(2, 2);
        assert_eq!(reduce_mod_rows(&z, &v).unwrap(), v.to_vec());
        assert!(reduce_mod_rows(&h, &[big(1)]).is_err());
    }

    #[test]
    fn abelian_invariant_examples() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 2]]);
        assert_eq!(
            abelian_invariants(&a, 2).unwrap(),
            AbelianInvariants {
                torsion: vec![big(2), big(2)],
                free_rank: 0
            }
        );
        let e = IntMatrix::zeros(0, 3);
        assert_eq!(
            abelian_invariants(&e, 3).unwrap(),
            AbelianInvariants {
                torsion: vec![],
                free_rank: 3
            }
        );
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(
            abelian_invariants(&a, 2).unwrap(),
            AbelianInvariants {
                torsion: vec![big(6)],
                free_rank: 0
            }
        );
        assert!(abelian_invariants(&a, 3).is_err());
    }

    fn random_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
        let r = rng.gen_range(1..=6);
        let c = rng.gen_range(1..=6);
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        IntMatrix::from_rows(c, &rows).unwrap()
    }

    /// Checks every normal-form property on 1000 random small matrices
    /// against the determinantal-divisor oracle.
    #[test]
    fn random_matrices_against_determinantal_divisors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let a = random_matrix(&mut rng);
            let (h, u) = hnf(&a);
            assert_eq!(u.mul(&a).unwrap(), h);
            assert_eq!(det(&u).abs(), BigInt::one());
            assert!(is_hnf(&h), "{:?}", h);

            let (s, su, sv) = snf(&a);
            assert_eq!(su.mul(&a).unwrap().mul(&sv).unwrap(), s);
            assert_eq!(det(&su).abs(), BigInt::one());
            assert_eq!(det(&sv).abs(), BigInt::one());
            let mut prev_d = BigInt::one();
            let mut prod = BigInt::one();
            for t in 0..s.rows().min(s.cols()) {
                for r in 0..s.rows() {
                    for c in 0..s.cols() {
                        if r != c {
                            assert!(s[(r, c)].is_zero());
                        }
                    }
                }
                let d = s[(t, t)].clone();
                if !d.is_zero() {
                    assert!(d.is_positive());
                    assert!(d.is_multiple_of(&prev_d));
                    prev_d = d.clone();
                }
                prod *= &d;
                // D_k = d_1 ... d_k
                assert_eq!(determinantal_divisor(&a, t + 1), prod.clone());
            }

            // echelon lattice agrees with the dense HNF
            let mut lat = EchelonLattice::new(a.cols());
            for r in 0..a.rows() {
                lat.insert(
                    a.row(r)
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .map(|(c, v)| (c, v.clone()))
                        .collect(),
                );
            }
            let sparse = lat.into_hnf();
            let dense: Vec<Vec<BigInt>> = (0..h.rows())
                .filter(|&r| !h.is_zero_row(r))
                .map(|r| h.row(r).to_vec())
                .collect();
            assert_eq!(sparse.len(), dense.len());
            for (row, d) in sparse.values().zip(&dense) {
                let mut full = vec![BigInt::zero(); a.cols()];
                for (c, v) in row {
                    full[*c] = v.clone();
                }
                assert_eq!(&full, d);
            }
        }
    }

    #[test]
    fn reduction_differs_by_lattice_vector() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let a = random_matrix(&mut rng);
            let (h, _) = hnf(&a);
            let v: Vec<BigInt> = (0..a.cols())
                .map(|_| big(rng.gen_range(-50..=50)))
                .collect();
            let red = reduce_mod_rows(&h, &v).unwrap();
            let diff: SparseRow = v
                .iter()
                .zip(&red)
                .enumerate()
                .filter(|(_, (x, y))| x != y)
                .map(|(c, (x, y))| (c, x - y))
                .collect();
            let mut lat = EchelonLattice::new(a.cols());
            for r in 0..h.rows() {
                lat.insert(
                    h.row(r)
                        .iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .map(|(c, x)| (c, x.clone()))
                        .collect(),
                );
            }
            assert!(lat.contains(&diff));
            // canonical: pivot entries in range
            for r in 0..h.rows() {
                if let Some(p) = h.row(r).iter().position(|x| !x.is_zero()) {
                    assert!(!red[p].is_negative() && red[p] < h[(r, p)]);
                }
            }
        }
    }

    #[test]
    fn invariants_stable_under_row_operations() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a = random_matrix(&mut rng);
            let inv = abelian_invariants(&a, a.cols()).unwrap();
            let mut b = a.clone();
            let n = b.rows();
            if n > 1 {
                b.swap_rows(0, n - 1);
                b.row_axpy(0, 1, &big(rng.gen_range(-5..=5)));
            }
            b.negate_row(0);
            assert_eq!(abelian_invariants(&b, a.cols()).unwrap(), inv);
        }
    }

    #[test]
    fn saturation() {
        let a = IntMatrix::from_i64(&[&[2, 4], &[0, 6]]);
        assert_eq!(saturate(&a), IntMatrix::identity(2));
        let a = IntMatrix::from_i64(&[&[2, 2, 0]]);
        assert_eq!(saturate(&a), IntMatrix::from_i64(&[&[1, 1, 0]]));
        let a = IntMatrix::from_i64(&[&[2, 1]]);
        assert_eq!(saturate(&a), a);
    }
}
