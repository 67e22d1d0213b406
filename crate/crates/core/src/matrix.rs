//! Exact integer matrices: Smith normal form, kernels, cokernels and
//! unimodularity tests.
//!
//! Everything here is arbitrary precision; intermediate Smith normal form
//! entries overflow 64 bits even on 8x8 inputs with single-digit entries.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix in row-major layout. Entries are exact `BigInt`s.
///
/// 0xn and nx0 matrices are legal; the kernel of the 0xn map is all of Z^n.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Convenience constructor from machine integers, mostly for tests and
    /// fixed small matrices.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
            .collect();
        IntMatrix {
            rows: r,
            cols: c,
            entries,
        }
    }

    pub fn from_columns(cols: &[Vec<BigInt>]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        if cols.iter().any(|col| col.len() != r) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        let mut m = Self::zero(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn neg(&self) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns, vector has length {}",
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &x[j]).sum())
            .collect())
    }

    /// Orthogonal (block diagonal) sum.
    pub fn block_diag(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = IntMatrix::zero(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return Ok(BigInt::zero());
                };
                for j in 0..n {
                    let a = m.get(k, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(k, j, b);
                    m.set(p, j, a);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.get(k, k).clone();
        }
        let d = m.get(n - 1, n - 1).clone();
        Ok(if sign < 0 { -d } else { d })
    }

    pub fn rank(&self) -> usize {
        self.snf_diagonal().iter().filter(|d| !d.is_zero()).count()
    }

    /// Diagonal of the Smith normal form (invariant factors padded with
    /// zeros), without transform bookkeeping.
    pub fn snf_diagonal(&self) -> Vec<BigInt> {
        let mut work = self.clone();
        smith_in_place(&mut work, None);
        (0..self.rows.min(self.cols))
            .map(|i| work.get(i, i).clone())
            .collect()
    }

    /// Invariant factors: the nonzero Smith diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.snf_diagonal()
            .into_iter()
            .filter(|d| !d.is_zero())
            .collect()
    }
}

/// Transforms accompanying a Smith normal form: `u * a * v = s` with
/// `u`, `v` unimodular, plus their inverses.
pub struct SmithDecomposition {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

struct Transforms {
    u: IntMatrix,
    v: IntMatrix,
    u_inv: IntMatrix,
    v_inv: IntMatrix,
}

/// Smith normal form with unimodular transforms: `u * a * v = s`, the
/// diagonal of `s` is nonnegative and satisfies the divisibility chain.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let mut s = a.clone();
    let mut t = Transforms {
        u: IntMatrix::identity(a.rows()),
        v: IntMatrix::identity(a.cols()),
        u_inv: IntMatrix::identity(a.rows()),
        v_inv: IntMatrix::identity(a.cols()),
    };
    smith_in_place(&mut s, Some(&mut t));
    SmithDecomposition {
        s,
        u: t.u,
        v: t.v,
        u_inv: t.u_inv,
        v_inv: t.v_inv,
    }
}

// Row/column operations, mirrored into the transforms.
// Row ops act on the left: s <- L s, u <- L u, u_inv <- u_inv L^{-1}.
// Column ops act on the right: s <- s R, v <- v R, v_inv <- R^{-1} v_inv.

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let x = m.get(a, j).clone();
        let y = m.get(b, j).clone();
        m.set(a, j, y);
        m.set(b, j, x);
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let x = m.get(i, a).clone();
        let y = m.get(i, b).clone();
        m.set(i, a, y);
        m.set(i, b, x);
    }
}

/// row_dst += q * row_src
fn add_row(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for j in 0..m.cols() {
        let v = m.get(dst, j) + q * m.get(src, j);
        m.set(dst, j, v);
    }
}

/// col_dst += q * col_src
fn add_col(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for i in 0..m.rows() {
        let v = m.get(i, dst) + q * m.get(i, src);
        m.set(i, dst, v);
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for j in 0..m.cols() {
        let v = -m.get(r, j);
        m.set(r, j, v);
    }
}

fn negate_col(m: &mut IntMatrix, c: usize) {
    for i in 0..m.rows() {
        let v = -m.get(i, c);
        m.set(i, c, v);
    }
}

fn smith_in_place(s: &mut IntMatrix, mut transforms: Option<&mut Transforms>) {
    let rows = s.rows();
    let cols = s.cols();
    let n = rows.min(cols);

    macro_rules! op_swap_rows {
        ($a:expr, $b:expr) => {{
            swap_rows(s, $a, $b);
            if let Some(t) = transforms.as_deref_mut() {
                swap_rows(&mut t.u, $a, $b);
                swap_cols(&mut t.u_inv, $a, $b);
            }
        }};
    }
    macro_rules! op_swap_cols {
        ($a:expr, $b:expr) => {{
            swap_cols(s, $a, $b);
            if let Some(t) = transforms.as_deref_mut() {
                swap_cols(&mut t.v, $a, $b);
                swap_rows(&mut t.v_inv, $a, $b);
            }
        }};
    }
    macro_rules! op_add_row {
        ($dst:expr, $src:expr, $q:expr) => {{
            let q: BigInt = $q;
            add_row(s, $dst, $src, &q);
            if let Some(t) = transforms.as_deref_mut() {
                add_row(&mut t.u, $dst, $src, &q);
                add_col(&mut t.u_inv, $src, $dst, &(-&q));
            }
        }};
    }
    macro_rules! op_add_col {
        ($dst:expr, $src:expr, $q:expr) => {{
            let q: BigInt = $q;
            add_col(s, $dst, $src, &q);
            if let Some(t) = transforms.as_deref_mut() {
                add_col(&mut t.v, $dst, $src, &q);
                add_row(&mut t.v_inv, $src, $dst, &(-&q));
            }
        }};
    }

    for t in 0..n {
        // Pivot: nonzero entry of minimal absolute value in the remaining
        // block. Keeps coefficient growth modest.
        let mut pivot: Option<(usize, usize)> = None;
        let mut best: Option<BigInt> = None;
        for i in t..rows {
            for j in t..cols {
                let v = s.get(i, j);
                if v.is_zero() {
                    continue;
                }
                let a = v.abs();
                if best.as_ref().is_none_or(|b| a < *b) {
                    best = Some(a);
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            break;
        };
        op_swap_rows!(t, pi);
        op_swap_cols!(t, pj);

        'reduce: loop {
            // Clear the pivot column.
            let mut dirty = false;
            for i in t + 1..rows {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = s.get(i, t) / s.get(t, t);
                op_add_row!(i, t, -q);
                if !s.get(i, t).is_zero() {
                    // Remainder is smaller than the pivot: promote it.
                    op_swap_rows!(t, i);
                    dirty = true;
                }
            }
            if dirty {
                continue 'reduce;
            }
            // Clear the pivot row.
            for j in t + 1..cols {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = s.get(t, j) / s.get(t, t);
                op_add_col!(j, t, -q);
                if !s.get(t, j).is_zero() {
                    op_swap_cols!(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue 'reduce;
            }
            // Divisibility: the pivot must divide every remaining entry.
            for i in t + 1..rows {
                for j in t + 1..cols {
                    if !s.get(i, j).mod_floor(s.get(t, t)).is_zero() {
                        op_add_row!(t, i, BigInt::one());
                        continue 'reduce;
                    }
                }
            }
            break;
        }
        if s.get(t, t).is_negative() {
            negate_row(s, t);
            if let Some(tr) = transforms.as_deref_mut() {
                negate_row(&mut tr.u, t);
                negate_col(&mut tr.u_inv, t);
            }
        }
    }
}

/// Invariant factors and free rank of an abelian group presented as a
/// cokernel, `Z^rows / column-span(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianInvariants {
    /// Invariant factors d_1 | d_2 | ... | d_k, each >= 2.
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        AbelianInvariants {
            torsion: Vec::new(),
            free_rank: 0,
        }
    }

    pub fn free(rank: usize) -> Self {
        AbelianInvariants {
            torsion: Vec::new(),
            free_rank: rank,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    /// Minimal number of generators.
    pub fn num_generators(&self) -> usize {
        self.torsion.len() + self.free_rank
    }
}

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for d in &self.torsion {
            parts.push(format!("Z/{}", d));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Structure of `Z^rows / column-span(A)`.
pub fn cokernel_invariants(a: &IntMatrix) -> AbelianInvariants {
    let diag = a.snf_diagonal();
    let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
    let torsion = diag
        .iter()
        .filter(|d| !d.is_zero() && !d.is_one())
        .cloned()
        .collect();
    AbelianInvariants {
        torsion,
        free_rank: a.rows() - nonzero,
    }
}

/// A basis of the integer kernel of `A`, returned as the columns of an
/// n x k matrix. The basis is saturated: it spans a direct summand of Z^n.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let dec = smith_normal_form(a);
    let rank = (0..a.rows().min(a.cols()))
        .filter(|&i| !dec.s.get(i, i).is_zero())
        .count();
    if rank == a.cols() {
        return IntMatrix::zero(a.cols(), 0);
    }
    let cols: Vec<Vec<BigInt>> = (rank..a.cols()).map(|j| dec.v.column(j)).collect();
    IntMatrix::from_columns(&cols).expect("kernel columns have uniform length")
}

/// Whether the vectors span a rank-k direct summand of Z^n, i.e. the gcd of
/// all k x k minors is 1. Rank-deficient or overlong sets are not unimodular.
pub fn is_unimodular(vectors: &[Vec<BigInt>]) -> Result<bool> {
    if vectors.is_empty() {
        return Err(Error::InvalidInput(
            "unimodularity of an empty set of vectors".into(),
        ));
    }
    let n = vectors[0].len();
    if vectors.iter().any(|v| v.len() != n) {
        return Err(Error::DimensionMismatch(
            "vectors have differing lengths".into(),
        ));
    }
    if vectors.len() > n {
        return Ok(false);
    }
    let m = IntMatrix::from_columns(vectors)?;
    let diag = m.snf_diagonal();
    Ok(diag.len() == vectors.len() && diag.iter().all(|d| d.is_one()))
}

/// Fast-path joint unimodularity for small integer vectors: gcd of all
/// maximal minors, computed in machine arithmetic. Falls back to the exact
/// route on overflow. Used in simplex enumeration hot loops.
pub fn jointly_unimodular_i64(vectors: &[&[i64]]) -> bool {
    let k = vectors.len();
    let n = vectors[0].len();
    debug_assert!(vectors.iter().all(|v| v.len() == n));
    if k > n {
        return false;
    }
    let mut gcd: i128 = 0;
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        match det_i128(vectors, &idx) {
            Some(d) => {
                gcd = gcd_i128(gcd, d);
                if gcd == 1 {
                    return true;
                }
            }
            None => return jointly_unimodular_exact(vectors),
        }
        // Next k-subset of rows (coordinates), in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] != i + n - k {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn jointly_unimodular_exact(vectors: &[&[i64]]) -> bool {
    let vecs: Vec<Vec<BigInt>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    is_unimodular(&vecs).expect("validated dimensions")
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Determinant of the k x k submatrix with the given coordinate rows,
/// fraction-free; None on (unlikely) overflow.
fn det_i128(vectors: &[&[i64]], coords: &[usize]) -> Option<i128> {
    let k = vectors.len();
    let mut m = [[0i128; 8]; 8];
    if k > 8 {
        return None;
    }
    for (j, v) in vectors.iter().enumerate() {
        for (i, &c) in coords.iter().enumerate() {
            m[i][j] = v[c] as i128;
        }
    }
    let mut sign = 1i128;
    let mut prev: i128 = 1;
    for t in 0..k.saturating_sub(1) {
        if m[t][t] == 0 {
            let p = (t + 1..k).find(|&i| m[i][t] != 0)?;
            m.swap(t, p);
            sign = -sign;
        }
        if m[t][t] == 0 {
            return Some(0);
        }
        for i in t + 1..k {
            for j in t + 1..k {
                let num = m[i][j].checked_mul(m[t][t])?.checked_sub(m[i][t].checked_mul(m[t][j])?)?;
                m[i][j] = num / prev;
            }
            m[i][t] = 0;
        }
        prev = m[t][t];
    }
    if k == 0 {
        return Some(1);
    }
    Some(sign * m[k - 1][k - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::naive;
    use proptest::prelude::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn snf_identity() {
        let a = IntMatrix::identity(2);
        let dec = smith_normal_form(&a);
        assert_eq!(dec.s, IntMatrix::identity(2));
        assert_eq!(dec.u, IntMatrix::identity(2));
        assert_eq!(dec.v, IntMatrix::identity(2));
    }

    #[test]
    fn snf_skew_two_by_two() {
        // gcd of entries is 2 and the determinant is 4, so diag(2, 2).
        let a = IntMatrix::from_rows(&[&[0, 2], &[-2, 0]]);
        let dec = smith_normal_form(&a);
        assert_eq!(dec.s, IntMatrix::from_rows(&[&[2, 0], &[0, 2]]));
        check_decomposition(&a, &dec);
    }

    #[test]
    fn snf_two_four_six_eight() {
        // gcd of 1x1 minors is 2; |det| = 8 forces the second factor to be 4.
        let a = IntMatrix::from_rows(&[&[2, 4], &[6, 8]]);
        let dec = smith_normal_form(&a);
        assert_eq!(dec.s, IntMatrix::from_rows(&[&[2, 0], &[0, 4]]));
        check_decomposition(&a, &dec);
    }

    #[test]
    fn snf_empty_shapes() {
        let a = IntMatrix::zero(0, 3);
        let dec = smith_normal_form(&a);
        assert_eq!(dec.s.rows(), 0);
        assert_eq!(kernel_basis(&a).cols(), 3);

        let b = IntMatrix::zero(3, 0);
        assert_eq!(cokernel_invariants(&b), AbelianInvariants::free(3));
    }

    #[test]
    fn cokernel_examples() {
        let z30 = IntMatrix::zero(3, 0);
        assert_eq!(cokernel_invariants(&z30), AbelianInvariants::free(3));

        let skew = IntMatrix::from_rows(&[&[0, 2], &[-2, 0]]);
        let inv = cokernel_invariants(&skew);
        assert_eq!(inv.torsion, vec![big(2), big(2)]);
        assert_eq!(inv.free_rank, 0);

        let id = IntMatrix::identity(2);
        assert!(cokernel_invariants(&id).is_trivial());
    }

    #[test]
    fn kernel_examples() {
        let row = IntMatrix::from_rows(&[&[1, 0]]);
        let k = kernel_basis(&row);
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0), vec![big(0), big(1)]);

        let k = kernel_basis(&IntMatrix::from_rows(&[&[2, 4]]));
        assert_eq!(k.cols(), 1);
        let col = k.column(0);
        // 2x + 4y = 0 and the basis is saturated, so (2, -1) up to sign.
        assert!(col == vec![big(2), big(-1)] || col == vec![big(-2), big(1)]);
        assert!(is_unimodular(&[col]).unwrap());

        let k = kernel_basis(&IntMatrix::identity(2));
        assert_eq!(k.cols(), 0);
    }

    #[test]
    fn unimodular_examples() {
        assert!(is_unimodular(&[vec![big(1), big(0)]]).unwrap());
        assert!(!is_unimodular(&[vec![big(2), big(0)]]).unwrap());
        assert!(!is_unimodular(&[vec![big(1), big(2)], vec![big(2), big(4)]]).unwrap());
        assert!(is_unimodular(&[vec![big(1), big(2)], vec![big(0), big(1)]]).unwrap());
        assert!(matches!(
            is_unimodular(&[vec![big(1)], vec![big(1), big(0)]]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn fast_unimodularity_matches_exact() {
        let sets: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![1, 0, 0], vec![0, 2, 0]],
            vec![vec![1, 1, 1], vec![0, 1, 2]],
            vec![vec![2, 4], vec![1, 2]],
            vec![vec![1, 2, 3, 4], vec![0, 1, 0, 1], vec![1, 0, 1, 0]],
            vec![vec![3, 5], vec![2, 3]],
        ];
        for set in sets {
            let refs: Vec<&[i64]> = set.iter().map(|v| v.as_slice()).collect();
            let fast = jointly_unimodular_i64(&refs);
            let vecs: Vec<Vec<BigInt>> = set
                .iter()
                .map(|v| v.iter().map(|&x| big(x)).collect())
                .collect();
            assert_eq!(fast, is_unimodular(&vecs).unwrap(), "set {set:?}");
        }
    }

    fn check_decomposition(a: &IntMatrix, dec: &SmithDecomposition) {
        let uav = dec.u.mul(a).unwrap().mul(&dec.v).unwrap();
        assert_eq!(uav, dec.s);
        assert_eq!(dec.u.determinant().unwrap().abs(), BigInt::one());
        assert_eq!(dec.v.determinant().unwrap().abs(), BigInt::one());
        assert_eq!(
            dec.u.mul(&dec.u_inv).unwrap(),
            IntMatrix::identity(a.rows())
        );
        assert_eq!(
            dec.v_inv.mul(&dec.v).unwrap(),
            IntMatrix::identity(a.cols())
        );
        let diag: Vec<_> = (0..a.rows().min(a.cols()))
            .map(|i| dec.s.get(i, i).clone())
            .collect();
        for w in diag.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].mod_floor(&w[0]).is_zero(), "chain broken: {diag:?}");
            } else {
                assert!(w[1].is_zero());
            }
        }
        for i in 0..dec.s.rows() {
            for j in 0..dec.s.cols() {
                if i != j {
                    assert!(dec.s.get(i, j).is_zero());
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn snf_decomposition_properties(
            rows in 1usize..=8,
            cols in 1usize..=8,
            seed in any::<u64>(),
        ) {
            let mut state = seed;
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 33) as i64 % 10) - 4
            };
            let entries: Vec<BigInt> = (0..rows * cols).map(|_| big(next())).collect();
            let a = IntMatrix::new(rows, cols, entries).unwrap();
            let dec = smith_normal_form(&a);
            check_decomposition(&a, &dec);
        }

        #[test]
        fn snf_matches_minor_gcd_oracle(
            rows in 1usize..=5,
            cols in 1usize..=5,
            seed in any::<u64>(),
        ) {
            let mut state = seed;
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 33) as i64 % 19) - 9
            };
            let entries: Vec<BigInt> = (0..rows * cols).map(|_| big(next())).collect();
            let a = IntMatrix::new(rows, cols, entries).unwrap();
            prop_assert_eq!(a.invariant_factors(), naive::invariant_factors_by_minor_gcd(&a));
        }

        #[test]
        fn kernel_is_saturated_and_annihilated(
            rows in 1usize..=5,
            cols in 2usize..=6,
            seed in any::<u64>(),
        ) {
            let mut state = seed;
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 33) as i64 % 7) - 3
            };
            let entries: Vec<BigInt> = (0..rows * cols).map(|_| big(next())).collect();
            let a = IntMatrix::new(rows, cols, entries).unwrap();
            let k = kernel_basis(&a);
            prop_assert_eq!(k.rows(), cols);
            if k.cols() > 0 {
                let prod = a.mul(&k).unwrap();
                prop_assert!(prod.is_zero());
                prop_assert!(is_unimodular(&k.columns()).unwrap());
            }
            prop_assert_eq!(k.cols(), cols - a.rank());
        }

        #[test]
        fn cokernel_invariant_under_unimodular_change(
            n in 1usize..=5,
            seed in any::<u64>(),
        ) {
            let mut state = seed;
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 33) as i64 % 9) - 4
            };
            let entries: Vec<BigInt> = (0..n * n).map(|_| big(next())).collect();
            let a = IntMatrix::new(n, n, entries).unwrap();
            let p = naive::random_unimodular(n, seed ^ 0x9e3779b97f4a7c15, 4);
            let q = naive::random_unimodular(n, seed ^ 0x517cc1b727220a95, 4);
            let b = p.mul(&a).unwrap().mul(&q).unwrap();
            prop_assert_eq!(cokernel_invariants(&a), cokernel_invariants(&b));
        }
    }
}
