//! Parameters of an integral cyclic polytope, its moment matrix, and the
//! triangular (Newton-basis) form the rest of the crate leans on.
//!
//! Public functions take and return 1-based vertex indices, matching the
//! usual `[n] = {1, ..., n}` vocabulary. Storage is 0-based: `tau()[i - 1]`
//! is the parameter of vertex `i`, and column `i - 1` of a matrix is `v_i`.

use crate::arith::{unimodular_inverse, IntMatrix};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Dimension `d` and strictly increasing integer parameters `tau_1 < ... < tau_n`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct CycloParams {
    d: usize,
    #[serde(with = "crate::json::int_vec")]
    tau: Vec<BigInt>,
}

#[derive(Deserialize)]
struct RawParams {
    d: usize,
    #[serde(with = "crate::json::int_vec")]
    tau: Vec<BigInt>,
}

impl TryFrom<RawParams> for CycloParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        Self::new(raw.d, raw.tau)
    }
}

impl CycloParams {
    pub fn new(d: usize, tau: Vec<BigInt>) -> Result<Self> {
        if d < 1 {
            return Err(Error::ZeroDimension);
        }
        if tau.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotIncreasing);
        }
        if tau.len() < d + 1 {
            return Err(Error::TooFewParameters {
                needed: d + 1,
                got: tau.len(),
            });
        }
        Ok(Self { d, tau })
    }

    pub fn from_i64(d: usize, tau: &[i64]) -> Result<Self> {
        Self::new(d, tau.iter().map(|&t| BigInt::from(t)).collect())
    }

    /// Parameters `0, g_1, g_1 + g_2, ...` for a gap sequence.
    pub fn from_gaps(d: usize, gaps: &[BigInt]) -> Result<Self> {
        let mut tau = Vec::with_capacity(gaps.len() + 1);
        let mut t = BigInt::zero();
        tau.push(t.clone());
        for g in gaps {
            t += g;
            tau.push(t.clone());
        }
        Self::new(d, tau)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.tau.len()
    }

    pub fn tau(&self) -> &[BigInt] {
        &self.tau
    }

    /// `tau_i` for 1-based `i`.
    pub fn tau_at(&self, i: usize) -> &BigInt {
        &self.tau[i - 1]
    }

    /// Consecutive differences `tau_{i+1} - tau_i`.
    pub fn gaps(&self) -> Vec<BigInt> {
        self.tau.windows(2).map(|w| &w[1] - &w[0]).collect()
    }

    /// `Delta_{ij} = tau_j - tau_i` (1-based).
    pub fn delta(&self, i: usize, j: usize) -> BigInt {
        &self.tau[j - 1] - &self.tau[i - 1]
    }

    /// `prod_{k=1}^{i} Delta_{k,j}` (1-based; the empty product for `i = 0`).
    pub fn delta_tilde(&self, i: usize, j: usize) -> BigInt {
        (1..=i).fold(BigInt::one(), |acc, k| acc * self.delta(k, j))
    }

    /// Homogenized vertex `v_i = (1, tau_i, ..., tau_i^d)` (1-based).
    pub fn vertex(&self, i: usize) -> Vec<BigInt> {
        moment_column(&self.tau[i - 1], self.d)
    }

    pub fn vertices(&self) -> Vec<Vec<BigInt>> {
        (1..=self.n()).map(|i| self.vertex(i)).collect()
    }

    /// Same dimension, parameters restricted to the given 1-based indices
    /// (which must be increasing).
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        let mut tau = Vec::with_capacity(indices.len());
        for &i in indices {
            if i == 0 || i > self.n() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    n: self.n(),
                });
            }
            tau.push(self.tau[i - 1].clone());
        }
        Self::new(self.d, tau)
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n() {
            Err(Error::IndexOutOfRange {
                index: i,
                n: self.n(),
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for CycloParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CycloParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let taus: Vec<String> = self.tau.iter().map(ToString::to_string).collect();
        write!(f, "C_{}({})", self.d, taus.join(","))
    }
}

fn moment_column(t: &BigInt, d: usize) -> Vec<BigInt> {
    let mut col = Vec::with_capacity(d + 1);
    let mut p = BigInt::one();
    for _ in 0..=d {
        col.push(p.clone());
        p *= t;
    }
    col
}

/// The `(d+1) x n` matrix with columns `v_1, ..., v_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentMatrix(IntMatrix);

impl MomentMatrix {
    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    /// Column `v_i` (1-based).
    pub fn column(&self, i: usize) -> Vec<BigInt> {
        self.0.column(i - 1)
    }
}

pub fn moment_matrix(p: &CycloParams) -> MomentMatrix {
    MomentMatrix(IntMatrix::from_columns(&p.vertices()))
}

/// Both difference tables, indexed 1-based like the parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaTable {
    n: usize,
    delta: Vec<BigInt>,
    delta_tilde: Vec<BigInt>,
}

impl DeltaTable {
    pub fn new(p: &CycloParams) -> Self {
        let n = p.n();
        let mut delta = Vec::with_capacity(n * n);
        let mut delta_tilde = Vec::with_capacity((n + 1) * n);
        for i in 1..=n {
            for j in 1..=n {
                delta.push(p.delta(i, j));
            }
        }
        for i in 0..=n {
            for j in 1..=n {
                delta_tilde.push(p.delta_tilde(i, j));
            }
        }
        Self {
            n,
            delta,
            delta_tilde,
        }
    }

    pub fn delta(&self, i: usize, j: usize) -> &BigInt {
        &self.delta[(i - 1) * self.n + (j - 1)]
    }

    pub fn delta_tilde(&self, i: usize, j: usize) -> &BigInt {
        &self.delta_tilde[i * self.n + (j - 1)]
    }
}

/// Triangular form `U * M` of the moment matrix together with the unimodular
/// factor `U` that produces it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformedMatrix {
    entries: IntMatrix,
    unimodular_factor: IntMatrix,
    inverse_factor: IntMatrix,
}

impl TransformedMatrix {
    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn unimodular_factor(&self) -> &IntMatrix {
        &self.unimodular_factor
    }

    /// `U^{-1}`; maps transformed coordinates back to moment coordinates.
    pub fn inverse_factor(&self) -> &IntMatrix {
        &self.inverse_factor
    }

    /// Column `i` (1-based).
    pub fn column(&self, i: usize) -> Vec<BigInt> {
        self.entries.column(i - 1)
    }

    pub fn to_transformed(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.unimodular_factor.mul_vec(x)
    }

    pub fn to_original(&self, y: &[BigInt]) -> Vec<BigInt> {
        self.inverse_factor.mul_vec(y)
    }
}

/// Row-reduces the moment matrix to triangular form. Step `r` subtracts
/// `tau_r` times row `i-1` from row `i` for `i = d, ..., r`; afterwards row
/// `i` evaluates `prod_{k<=i} (t - tau_k)` at each parameter.
pub fn transform(p: &CycloParams) -> TransformedMatrix {
    let d = p.d();
    let mut m = moment_matrix(p).0;
    let mut u = IntMatrix::identity(d + 1);
    for r in 1..=d {
        let t = p.tau_at(r).clone();
        for i in (r..=d).rev() {
            m.sub_row_multiple(i, i - 1, &t);
            u.sub_row_multiple(i, i - 1, &t);
        }
    }
    let inverse_factor = unimodular_inverse(&u).expect("row operations are unimodular");
    TransformedMatrix {
        entries: m,
        unimodular_factor: u,
        inverse_factor,
    }
}

/// `(tau_1, ..., tau_n) -> (-tau_n, ..., -tau_1)`.
pub fn reverse_negate(p: &CycloParams) -> CycloParams {
    let tau = p.tau.iter().rev().map(|t| -t).collect();
    CycloParams { d: p.d, tau }
}

pub fn translate(p: &CycloParams, m: &BigInt) -> CycloParams {
    let tau = p.tau.iter().map(|t| t + m).collect();
    CycloParams { d: p.d, tau }
}

/// Representative of the orbit under translation and reversal: `tau_1 = 0`
/// and the gap sequence no larger (lexicographically) than its reverse.
pub fn canonical_form(p: &CycloParams) -> CycloParams {
    let gaps = p.gaps();
    let reversed: Vec<BigInt> = gaps.iter().rev().cloned().collect();
    let chosen = if reversed < gaps { reversed } else { gaps };
    CycloParams::from_gaps(p.d, &chosen).expect("gaps of valid parameters stay valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::big;

    fn p(d: usize, tau: &[i64]) -> CycloParams {
        CycloParams::from_i64(d, tau).unwrap()
    }

    #[test]
    fn validation() {
        assert!(CycloParams::from_i64(2, &[0, 1, 3]).is_ok());
        assert_eq!(
            CycloParams::from_i64(2, &[0, 0, 3]),
            Err(Error::NotIncreasing)
        );
        assert_eq!(
            CycloParams::from_i64(3, &[0, 1, 2]),
            Err(Error::TooFewParameters { needed: 4, got: 3 })
        );
        assert_eq!(CycloParams::from_i64(0, &[0]), Err(Error::ZeroDimension));
    }

    #[test]
    fn moment_matrix_columns() {
        let m = moment_matrix(&p(2, &[0, 1, 3]));
        assert_eq!(m.column(1), big(&[1, 0, 0]));
        assert_eq!(m.column(2), big(&[1, 1, 1]));
        assert_eq!(m.column(3), big(&[1, 3, 9]));
        let m = moment_matrix(&p(1, &[0, 2]));
        assert_eq!(m.matrix().columns(), vec![big(&[1, 0]), big(&[1, 2])]);
        let m = moment_matrix(&p(3, &[0, 1, 2, 3, 4]));
        assert_eq!((m.matrix().rows(), m.matrix().cols()), (4, 5));
        assert_eq!(m.column(5), big(&[1, 4, 16, 64]));
    }

    #[test]
    fn transform_small_cases() {
        let t = transform(&p(2, &[0, 1, 3]));
        assert_eq!(
            t.entries().columns(),
            vec![big(&[1, 0, 0]), big(&[1, 1, 0]), big(&[1, 3, 6])]
        );
        let t = transform(&p(2, &[0, 1, 2, 3]));
        assert_eq!(
            t.entries().columns(),
            vec![
                big(&[1, 0, 0]),
                big(&[1, 1, 0]),
                big(&[1, 2, 2]),
                big(&[1, 3, 6])
            ]
        );
    }

    #[test]
    fn transform_factor_is_unimodular() {
        let q = p(3, &[-2, 1, 5, 6, 11]);
        let t = transform(&q);
        assert!(t.unimodular_factor().determinant() == BigInt::one());
        assert_eq!(
            &t.unimodular_factor().mul(moment_matrix(&q).matrix()),
            t.entries()
        );
        let x = big(&[3, -1, 4, 7]);
        assert_eq!(t.to_original(&t.to_transformed(&x)), x);
    }

    #[test]
    fn reversal_and_translation() {
        let q = p(2, &[0, 1, 3]);
        let r = reverse_negate(&q);
        assert_eq!(r, p(2, &[-3, -1, 0]));
        assert_eq!(r.gaps(), big(&[2, 1]));
        assert_eq!(reverse_negate(&r), q);
        assert_eq!(translate(&q, &BigInt::from(5)), p(2, &[5, 6, 8]));
        assert_eq!(translate(&q, &BigInt::from(5)).gaps(), q.gaps());
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(canonical_form(&p(2, &[5, 6, 8])), p(2, &[0, 1, 3]));
        assert_eq!(canonical_form(&p(2, &[0, 2, 3])), p(2, &[0, 1, 3]));
        assert_eq!(canonical_form(&p(2, &[0, 1, 3])), p(2, &[0, 1, 3]));
    }

    #[test]
    fn delta_table_entries() {
        let q = p(2, &[0, 1, 3, 7]);
        let t = DeltaTable::new(&q);
        assert_eq!(t.delta(1, 3), &BigInt::from(3));
        assert_eq!(t.delta(3, 1), &BigInt::from(-3));
        // (7 - 0)(7 - 1)
        assert_eq!(t.delta_tilde(2, 4), &BigInt::from(42));
        assert_eq!(t.delta_tilde(0, 4), &BigInt::one());
        assert_eq!(t.delta_tilde(2, 2), &BigInt::zero());
    }
}
