//! Integer matrices and the lattice kernels built on them: column Hermite
//! normal form, integer kernels, Smith normal form and determinants.
//!
//! Everything works over `BigInt`; the matrices that show up in this crate
//! are tiny (rank of a quantum torus, number of parameters) so the pivoting
//! is the naive one.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = v.clone().into();
            }
        }
        m
    }

    /// Builds a `rows x cols.len()` matrix whose columns are the given vectors.
    pub fn from_columns<T: Into<BigInt> + Clone>(rows: usize, cols: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone().into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    /// Column vectors converted to `i64`; panics on overflow.
    pub fn columns_i64(&self) -> Vec<Vec<i64>> {
        self.columns()
            .into_iter()
            .map(|c| c.iter().map(|v| i64::try_from(v).expect("entry exceeds i64")).collect())
            .collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for (nj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                m[(i, nj)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, c)];
            self[(i, c)] = v;
        }
    }

}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Result of column-style Hermite reduction: `a * transform = echelon`,
/// with `transform` unimodular.
#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    pub echelon: IntMatrix,
    pub transform: IntMatrix,
    /// Number of nonzero columns; they come first in `echelon`.
    pub rank: usize,
}

/// Column Hermite normal form. The first `rank` columns of the result are in
/// echelon shape with positive pivots; entries left of a pivot (in its row)
/// are reduced into `[0, pivot)`. The remaining columns are zero.
pub fn column_hnf(a: &IntMatrix) -> ColumnEchelon {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.cols);
    let mut pivot_col = 0;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for r in 0..h.rows {
        if pivot_col >= h.cols {
            break;
        }
        // gcd-eliminate row r over columns pivot_col..
        loop {
            // find the nonzero entry of smallest magnitude
            let mut best: Option<usize> = None;
            for c in pivot_col..h.cols {
                if !h[(r, c)].is_zero()
                    && best.is_none_or(|b| h[(r, c)].abs() < h[(r, b)].abs())
                {
                    best = Some(c);
                }
            }
            let Some(b) = best else { break };
            h.swap_cols(pivot_col, b);
            u.swap_cols(pivot_col, b);
            let mut done = true;
            for c in pivot_col + 1..h.cols {
                if h[(r, c)].is_zero() {
                    continue;
                }
                let k = -h[(r, c)].div_floor(&h[(r, pivot_col)]);
                h.add_col_multiple(c, pivot_col, &k);
                u.add_col_multiple(c, pivot_col, &k);
                if !h[(r, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, pivot_col)].is_zero() {
            continue;
        }
        if h[(r, pivot_col)].is_negative() {
            h.negate_col(pivot_col);
            u.negate_col(pivot_col);
        }
        pivots.push((r, pivot_col));
        pivot_col += 1;
    }
    // reduce entries left of each pivot
    for &(r, pc) in &pivots {
        let p = h[(r, pc)].clone();
        for c in 0..pc {
            let k = -h[(r, c)].div_floor(&p);
            h.add_col_multiple(c, pc, &k);
            u.add_col_multiple(c, pc, &k);
        }
    }
    ColumnEchelon { rank: pivot_col, echelon: h, transform: u }
}

/// Basis (as columns) of the integer kernel `{ m : a m = 0 }`, in canonical
/// Hermite form.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let ech = column_hnf(a);
    let idx: Vec<usize> = (ech.rank..a.cols).collect();
    let raw = ech.transform.select_columns(&idx);
    hermite_basis(&raw)
}

/// Canonical basis of the lattice spanned by the columns of `b`: the nonzero
/// columns of its column HNF. Two generating sets span the same lattice iff
/// their Hermite bases are equal.
pub fn hermite_basis(b: &IntMatrix) -> IntMatrix {
    let ech = column_hnf(b);
    let idx: Vec<usize> = (0..ech.rank).collect();
    ech.echelon.select_columns(&idx)
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &IntMatrix) -> BigInt {
    assert_eq!(a.rows, a.cols, "determinant of non-square matrix");
    let n = a.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            m.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
        }
        prev = m[(k, k)].clone();
    }
    sign * &m[(n - 1, n - 1)]
}

pub fn is_unimodular(a: &IntMatrix) -> bool {
    a.rows == a.cols && determinant(a).abs().is_one()
}

/// Smith normal form `left * a * right = diag`, with `left`, `right`
/// unimodular and the diagonal entries nonnegative, each dividing the next.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diag: IntMatrix,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl Smith {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.diag.rows.min(self.diag.cols);
        (0..k).map(|i| self.diag[(i, i)].clone()).filter(|d| !d.is_zero()).collect()
    }
}

/// Alternates column and row Hermite reduction until the matrix is
/// diagonal; Hermite reduction keeps entries bounded, where naive pivoting
/// blows up on dense input. Divisibility is then forced by gcd steps.
pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let mut d = a.clone();
    let mut left = IntMatrix::identity(a.rows);
    let mut right = IntMatrix::identity(a.cols);
    loop {
        let e = column_hnf(&d);
        d = e.echelon;
        right = right.mul(&e.transform);
        if !is_diagonal(&d) {
            let e = column_hnf(&d.transpose());
            d = e.echelon.transpose();
            left = e.transform.transpose().mul(&left);
            if !is_diagonal(&d) {
                continue;
            }
        }
        // d_i must divide d_j for i < j; otherwise add row j to row i and
        // reduce again, which replaces d_i by gcd(d_i, d_j)
        let k = d.rows.min(d.cols);
        let bad = (0..k).find_map(|i| {
            (i + 1..k).find(|&j| !d[(i, i)].is_zero() && !d[(j, j)].is_multiple_of(&d[(i, i)])).map(|j| (i, j))
        });
        match bad {
            Some((i, j)) => {
                let one = BigInt::one();
                d.add_row_multiple(i, j, &one);
                left.add_row_multiple(i, j, &one);
            }
            None => break,
        }
    }
    Smith { diag: d, left, right }
}

fn is_diagonal(m: &IntMatrix) -> bool {
    (0..m.rows).all(|i| (0..m.cols).all(|j| i == j || m[(i, j)].is_zero()))
}

/// Inverse of a unimodular matrix (exact; panics if not unimodular).
pub fn unimodular_inverse(a: &IntMatrix) -> IntMatrix {
    assert!(is_unimodular(a), "matrix is not unimodular");
    let n = a.rows;
    // column-reduce [a] and apply the same ops to identity: a * u = I => u = a^-1
    let ech = column_hnf(a);
    // echelon of a unimodular matrix is lower triangular with unit pivots,
    // reduce below-diagonal entries to get I
    let mut h = ech.echelon;
    let mut u = ech.transform;
    for r in (0..n).rev() {
        for c in 0..n {
            if c != r && !h[(r, c)].is_zero() {
                let k = -h[(r, c)].clone();
                h.add_col_multiple(c, r, &k);
                u.add_col_multiple(c, r, &k);
            }
        }
    }
    debug_assert_eq!(h, IntMatrix::identity(n));
    u
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn hnf_of_identity_is_identity() {
        let e = column_hnf(&IntMatrix::identity(3));
        assert_eq!(e.rank, 3);
        assert_eq!(e.echelon, IntMatrix::identity(3));
    }

    #[test]
    fn transform_is_consistent() {
        let a = m(&[vec![2, 4, 6], vec![1, 3, 5]]);
        let e = column_hnf(&a);
        assert_eq!(a.mul(&e.transform), e.echelon);
        assert!(is_unimodular(&e.transform));
        assert_eq!(e.rank, 2);
    }

    #[test]
    fn kernel_of_row() {
        // x + y = 0
        let k = integer_kernel(&m(&[vec![1, 1]]));
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert_eq!(v[0].clone() + v[1].clone(), BigInt::zero());
        assert!(!v[0].is_zero());
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x + 4y = 0 has kernel generated by (2,-1), not a multiple
        let k = integer_kernel(&m(&[vec![2, 4]]));
        let v = k.columns_i64();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0][0].abs(), 2);
        assert_eq!(v[0][1].abs(), 1);
    }

    #[test]
    fn hermite_basis_is_canonical() {
        let a = m(&[vec![1, 0], vec![1, 1]]);
        let b = m(&[vec![1, 1], vec![1, 2]]);
        assert_eq!(hermite_basis(&a), hermite_basis(&b));
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&m(&[vec![2, 1], vec![1, 1]])), BigInt::from(1));
        assert_eq!(determinant(&m(&[vec![0, 1], vec![1, 0]])), BigInt::from(-1));
        assert_eq!(
            determinant(&m(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]])),
            BigInt::from(-3)
        );
        assert_eq!(determinant(&m(&[vec![0, 0], vec![1, 1]])), BigInt::zero());
    }

    #[test]
    fn smith_diagonal_divides() {
        let a = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.left.mul(&a).mul(&s.right), s.diag);
        assert!(is_unimodular(&s.left) && is_unimodular(&s.right));
        let f = s.invariant_factors();
        assert_eq!(f, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[vec![2, 1], vec![1, 1]]);
        let inv = unimodular_inverse(&a);
        assert_eq!(a.mul(&inv), IntMatrix::identity(2));
    }
}
