//! Exact integer and rational linear algebra.
//!
//! Everything here works on `BigInt` / `BigRational`; the quantities involved
//! (products of parameter differences) grow like `tau^d` and have no business
//! near a float.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from equally long rows.
    ///
    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Self {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_columns(cols: &[Vec<BigInt>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
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

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Row vector times matrix: `v^T * self`.
    pub fn vec_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.rows, v.len(), "dimension mismatch");
        (0..self.cols)
            .map(|j| {
                v.iter()
                    .enumerate()
                    .fold(BigInt::zero(), |acc, (i, x)| acc + x * &self[(i, j)])
            })
            .collect()
    }

    /// `row[dst] -= factor * row[src]`.
    pub fn sub_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = factor * &self[(src, j)];
            self[(dst, j)] -= t;
        }
    }

    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        bareiss_determinant(self.clone())
    }

    /// Submatrix keeping the listed rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
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
        f.debug_list()
            .entries((0..self.rows).map(|i| {
                self.row(i)
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            }))
            .finish()
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Divides out the content. The zero vector is returned unchanged.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = gcd_all(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn big(values: &[i64]) -> Vec<BigInt> {
    values.iter().map(|&x| BigInt::from(x)).collect()
}

/// Fraction-free Gaussian elimination.
fn bareiss_determinant(mut m: IntMatrix) -> BigInt {
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                m.data.swap(k * n + j, p * n + j);
            }
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

/// Generator of the one-dimensional kernel of an `r x (r+1)` integer matrix
/// of full row rank, via signed maximal minors. Not normalized.
pub fn cofactor_kernel(m: &IntMatrix) -> Vec<BigInt> {
    assert_eq!(m.cols, m.rows + 1, "expected an r x (r+1) matrix");
    let all_rows: Vec<usize> = (0..m.rows).collect();
    (0..m.cols)
        .map(|skip| {
            let cols: Vec<usize> = (0..m.cols).filter(|&j| j != skip).collect();
            let minor = m.select(&all_rows, &cols).determinant();
            if skip % 2 == 0 {
                minor
            } else {
                -minor
            }
        })
        .collect()
}

/// Rational row reduction of the augmented system `a x = b`.
///
/// Returns `None` when the system is inconsistent, otherwise one solution with
/// free variables set to zero together with the rank.
pub fn solve_rational(a: &IntMatrix, b: &[BigInt]) -> Option<(Vec<BigRational>, usize)> {
    assert_eq!(a.rows, b.len(), "dimension mismatch");
    let (rows, cols) = (a.rows, a.cols);
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            a.row(i)
                .iter()
                .chain(std::iter::once(&b[i]))
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some((x, pivots.len()))
}

/// Coefficients of `target` in the basis given by the columns of `basis`
/// (square, nonsingular).
pub fn coordinates_in_basis(basis: &IntMatrix, target: &[BigInt]) -> Option<Vec<BigRational>> {
    match solve_rational(basis, target) {
        Some((x, rank)) if rank == basis.cols => Some(x),
        _ => None,
    }
}

/// Row-style Hermite normal form: the nonzero rows of the result are an
/// upper-echelon basis of the row lattice with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`.
pub fn hermite_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let Some(width) = rows.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut work: Vec<Vec<BigInt>> = rows.to_vec();
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    let mut pivot_cols = Vec::new();
    for col in 0..width {
        // Euclid on the active rows until at most one has a nonzero entry here.
        loop {
            let mut active: Vec<usize> = (0..work.len())
                .filter(|&i| !work[i][col].is_zero())
                .collect();
            if active.len() <= 1 {
                break;
            }
            active.sort_by(|&i, &j| work[i][col].abs().cmp(&work[j][col].abs()));
            let p = active[0];
            for &i in &active[1..] {
                let q = work[i][col].div_floor(&work[p][col]);
                let prow = work[p].clone();
                for (x, y) in work[i].iter_mut().zip(&prow) {
                    *x -= &q * y;
                }
            }
        }
        if let Some(p) = (0..work.len()).find(|&i| !work[i][col].is_zero()) {
            let mut row = work.swap_remove(p);
            if row[col].is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            basis.push(row);
            pivot_cols.push(col);
        }
        work.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    for k in 0..basis.len() {
        let pc = pivot_cols[k];
        for i in 0..k {
            let q = basis[i][pc].div_floor(&basis[k][pc]);
            if !q.is_zero() {
                let prow = basis[k].clone();
                for (x, y) in basis[i].iter_mut().zip(&prow) {
                    *x -= &q * y;
                }
            }
        }
    }
    basis
}

/// Membership of `v` in the lattice spanned by a row HNF basis.
pub fn in_row_lattice(hnf: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let mut rest = v.to_vec();
    for row in hnf {
        let Some(pc) = row.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        if rest[..pc].iter().any(|x| !x.is_zero()) {
            return false;
        }
        let (q, r) = rest[pc].div_rem(&row[pc]);
        if !r.is_zero() {
            return false;
        }
        for (x, y) in rest.iter_mut().zip(row) {
            *x -= &q * y;
        }
    }
    rest.iter().all(Zero::is_zero)
}

/// Index of a rank-`r` sublattice inside its saturation (the gcd of all
/// `r x r` minors of the row matrix). Zero when the rows are dependent.
pub fn saturation_index(rows: &[Vec<BigInt>]) -> BigInt {
    let m = IntMatrix::from_rows(rows.to_vec());
    let r = m.rows;
    let all_rows: Vec<usize> = (0..r).collect();
    let mut g = BigInt::zero();
    for cols in combinations(m.cols, r) {
        g = g.gcd(&m.select(&all_rows, &cols).determinant());
        if g.is_one() {
            break;
        }
    }
    g
}

/// Inverse of a unimodular matrix, computed by adjugate.
pub fn unimodular_inverse(m: &IntMatrix) -> Option<IntMatrix> {
    let n = m.rows;
    let det = m.determinant();
    if !det.abs().is_one() {
        return None;
    }
    let mut inv = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            let minor = m.select(&rows, &cols).determinant();
            let cof = if (i + j) % 2 == 0 { minor } else { -minor };
            inv[(i, j)] = cof * &det;
        }
    }
    Some(inv)
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Integer value of a rational, if it has one.
pub fn as_integer(q: &BigRational) -> Option<BigInt> {
    q.is_integer().then(|| q.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = IntMatrix::from_i64_rows(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // 2(3*-2 - 4*5) + 1(1*-2 - 0) = -52 - 2
        assert_eq!(m.determinant(), BigInt::from(-54));
        let singular = IntMatrix::from_i64_rows(&[&[0, 1], &[0, 2]]);
        assert_eq!(singular.determinant(), BigInt::zero());
    }

    #[test]
    fn determinant_needs_pivot_swap() {
        let m = IntMatrix::from_i64_rows(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(m.determinant(), BigInt::from(-2));
    }

    #[test]
    fn hnf_of_segment_lattice() {
        let h = hermite_rows(&[big(&[1, 0]), big(&[1, 2])]);
        assert_eq!(h, vec![big(&[1, 0]), big(&[0, 2])]);
        assert!(in_row_lattice(&h, &big(&[3, 4])));
        assert!(!in_row_lattice(&h, &big(&[3, 5])));
    }

    #[test]
    fn hnf_drops_dependent_rows() {
        let h = hermite_rows(&[big(&[2, 4, 6]), big(&[1, 2, 3]), big(&[0, 0, 0])]);
        assert_eq!(h, vec![big(&[1, 2, 3])]);
    }

    #[test]
    fn saturation_index_detects_sublattice() {
        assert_eq!(saturation_index(&[big(&[2, 0, 0])]), BigInt::from(2));
        assert_eq!(
            saturation_index(&[big(&[1, 1, 0]), big(&[0, 1, 1])]),
            BigInt::one()
        );
        assert_eq!(
            saturation_index(&[big(&[1, 1, 0]), big(&[2, 2, 0])]),
            BigInt::zero()
        );
    }

    #[test]
    fn inconsistent_system_is_rejected() {
        let a = IntMatrix::from_i64_rows(&[&[1, 1], &[2, 2]]);
        assert!(solve_rational(&a, &big(&[1, 3])).is_none());
        let (x, rank) = solve_rational(&a, &big(&[1, 2])).unwrap();
        assert_eq!(rank, 1);
        assert_eq!(x[0], BigRational::one());
    }

    #[test]
    fn unimodular_inverse_round_trips() {
        let m = IntMatrix::from_i64_rows(&[&[1, 0, 0], &[-3, 1, 0], &[2, -4, 1]]);
        let inv = unimodular_inverse(&m).unwrap();
        assert_eq!(m.mul(&inv), IntMatrix::identity(3));
        assert!(unimodular_inverse(&IntMatrix::from_i64_rows(&[&[2]])).is_none());
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(3, 5), BigInt::zero());
    }
}
