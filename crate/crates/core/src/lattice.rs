//! Lattice points in dilations of the homogenized polytope, Ehrhart counts,
//! and the h*-vector.
//!
//! Points are enumerated in an integral coordinate frame of the caller's
//! choosing (the triangular frame by default) and mapped back to moment
//! coordinates. Each coordinate range is cut down by a Fourier-Motzkin
//! projection of the facet system before descending, and by the box spanned
//! by the vertices; leaves are re-checked against the full facet system, so
//! the projection only ever prunes.

use crate::arith::{dot, primitive, IntMatrix};
use crate::error::{Error, Result};
use crate::face::{facet_hyperplanes, transformed_facet_hyperplanes, Frame};
use crate::params::{transform, CycloParams};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Default cap on candidate points visited by one enumeration.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Environment variable that overrides [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "CYCLOTORIC_BUDGET";

/// Rows kept per projection level; extra rows are dropped (bounds only loosen).
const PROJECTION_ROW_CAP: usize = 2_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumConfig {
    pub budget: u64,
}

impl Default for EnumConfig {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
        }
    }
}

impl EnumConfig {
    /// Default budget unless `CYCLOTORIC_BUDGET` holds a positive integer.
    pub fn from_env() -> Self {
        let budget = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .filter(|&b| b > 0)
            .unwrap_or(DEFAULT_BUDGET);
        Self { budget }
    }
}

/// A point of `Z^{d+1}` in moment coordinates; `coords[0]` is the degree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint {
    #[serde(with = "crate::json::int_vec")]
    pub coords: Vec<BigInt>,
}

impl LatticePoint {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Self { coords }
    }

    pub fn degree(&self) -> &BigInt {
        &self.coords[0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HStarVector {
    #[serde(with = "crate::json::int_vec")]
    pub h: Vec<BigInt>,
}

impl HStarVector {
    pub fn sum(&self) -> BigInt {
        self.h.iter().sum()
    }

    /// Symmetric after trimming trailing zeros.
    pub fn is_palindromic(&self) -> bool {
        let end = self.h.iter().rposition(|x| !x.is_zero()).map_or(0, |i| i + 1);
        let core = &self.h[..end];
        core.iter().eq(core.iter().rev())
    }
}

/// Integer arithmetic the walker can run on.
trait Scalar: Clone + Ord + Integer + Signed {
    fn from_big(x: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i128 {
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Lattice points of a pointed rational cone sliced at a fixed degree.
///
/// `forms` are the facet inequalities `m · y >= 0` in frame coordinates,
/// `y_0` is the degree, and `back` maps frame coordinates to moment
/// coordinates.
#[derive(Clone, Debug)]
pub(crate) struct ConeWalker {
    forms: Vec<Vec<BigInt>>,
    /// `levels[m]`: inequalities in `y_0..=y_m` only.
    levels: Vec<Vec<Vec<BigInt>>>,
    /// Per-coordinate `[min, max]` over the degree-1 vertices.
    vertex_box: Vec<(BigInt, BigInt)>,
    back: IntMatrix,
}

impl ConeWalker {
    pub(crate) fn new(forms: Vec<Vec<BigInt>>, vertices: &[Vec<BigInt>], back: IntMatrix) -> Self {
        let dim = forms[0].len();
        let mut levels = vec![Vec::new(); dim];
        levels[dim - 1] = dedup_rows(forms.iter().map(|f| primitive(f)).collect());
        for m in (1..dim).rev() {
            levels[m - 1] = eliminate(&levels[m], m);
        }
        let vertex_box = (0..dim)
            .map(|c| {
                let vals = vertices.iter().map(|v| &v[c]);
                (
                    vals.clone().min().unwrap().clone(),
                    vals.max().unwrap().clone(),
                )
            })
            .collect();
        Self {
            forms,
            levels,
            vertex_box,
            back,
        }
    }

    /// Frame-coordinate points of degree `k` (sorted), or interior ones only.
    pub(crate) fn frame_points(
        &self,
        k: u64,
        interior_only: bool,
        cfg: &EnumConfig,
    ) -> Result<Vec<Vec<BigInt>>> {
        if self.fits_i128(k) {
            self.walk::<i128>(k, interior_only, cfg)
        } else {
            self.walk::<BigInt>(k, interior_only, cfg)
        }
    }

    /// Moment-coordinate points of degree `k`, in lexicographic order.
    pub(crate) fn points(
        &self,
        k: u64,
        interior_only: bool,
        cfg: &EnumConfig,
    ) -> Result<Vec<LatticePoint>> {
        let mut out: Vec<LatticePoint> = self
            .frame_points(k, interior_only, cfg)?
            .iter()
            .map(|y| LatticePoint::new(self.back.mul_vec(y)))
            .collect();
        out.sort();
        Ok(out)
    }

    fn coordinate_bound(&self, k: u64) -> BigInt {
        self.vertex_box
            .iter()
            .map(|(lo, hi)| lo.abs().max(hi.abs()))
            .max()
            .unwrap_or_default()
            * BigInt::from(k)
    }

    fn fits_i128(&self, k: u64) -> bool {
        let coeff = self
            .levels
            .iter()
            .flatten()
            .chain(&self.forms)
            .flatten()
            .map(|x| x.abs())
            .max()
            .unwrap_or_default();
        let dim = BigInt::from(self.forms[0].len() as u64 + 1);
        let worst = coeff * (self.coordinate_bound(k) + 1u32) * dim;
        worst.bits() < 120
    }

    fn walk<T: Scalar>(
        &self,
        k: u64,
        interior_only: bool,
        cfg: &EnumConfig,
    ) -> Result<Vec<Vec<BigInt>>> {
        let conv = |rows: &[Vec<BigInt>]| -> Vec<Vec<T>> {
            rows.iter()
                .map(|r| r.iter().map(|x| T::from_big(x).unwrap()).collect())
                .collect()
        };
        let levels: Vec<Vec<Vec<T>>> = self.levels.iter().map(|l| conv(l)).collect();
        let forms = conv(&self.forms);
        let kk = BigInt::from(k);
        let boxes: Vec<(T, T)> = self
            .vertex_box
            .iter()
            .map(|(lo, hi)| {
                (
                    T::from_big(&(lo * &kk)).unwrap(),
                    T::from_big(&(hi * &kk)).unwrap(),
                )
            })
            .collect();
        let mut state = Walk {
            levels,
            forms,
            boxes,
            interior_only,
            budget: cfg.budget,
            visited: 0,
            prefix: vec![T::from_big(&kk).unwrap()],
            out: Vec::new(),
        };
        state.descend()?;
        Ok(state.out)
    }
}

struct Walk<T> {
    levels: Vec<Vec<Vec<T>>>,
    forms: Vec<Vec<T>>,
    boxes: Vec<(T, T)>,
    interior_only: bool,
    budget: u64,
    visited: u64,
    prefix: Vec<T>,
    out: Vec<Vec<BigInt>>,
}

impl<T: Scalar> Walk<T> {
    fn partial(row: &[T], prefix: &[T]) -> T {
        row.iter()
            .zip(prefix)
            .fold(T::zero(), |acc, (a, y)| acc + a.clone() * y.clone())
    }

    fn descend(&mut self) -> Result<()> {
        let m = self.prefix.len();
        if m == self.boxes.len() {
            let ok = self.forms.iter().all(|f| {
                let v = Self::partial(f, &self.prefix);
                if self.interior_only {
                    v.is_positive()
                } else {
                    !v.is_negative()
                }
            });
            if ok {
                self.out.push(self.prefix.iter().map(Scalar::to_big).collect());
            }
            return Ok(());
        }
        let (mut lo, mut hi) = self.boxes[m].clone();
        for row in &self.levels[m] {
            let a = &row[m];
            if a.is_zero() {
                continue;
            }
            let rest = -Self::partial(&row[..m], &self.prefix);
            if a.is_positive() {
                let b = ceil_div(&rest, a);
                if b > lo {
                    lo = b;
                }
            } else {
                let b = rest.div_floor(a);
                if b < hi {
                    hi = b;
                }
            }
        }
        let mut y = lo;
        while y <= hi {
            self.visited += 1;
            if self.visited > self.budget {
                return Err(Error::BudgetExceeded {
                    budget: self.budget,
                });
            }
            self.prefix.push(y.clone());
            self.descend()?;
            self.prefix.pop();
            y = y + T::one();
        }
        Ok(())
    }
}

fn ceil_div<T: Scalar>(a: &T, b: &T) -> T {
    -((-a.clone()).div_floor(b))
}

fn dedup_rows(rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let set: BTreeSet<Vec<BigInt>> = rows
        .into_iter()
        .filter(|r| {
            // Drop rows that only constrain the degree and hold for every k >= 0.
            !(r[1..].iter().all(Zero::is_zero) && !r[0].is_negative())
        })
        .collect();
    set.into_iter().take(PROJECTION_ROW_CAP).collect()
}

/// Projects out coordinate `m`; the result has length `m`.
fn eliminate(rows: &[Vec<BigInt>], m: usize) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for r in rows {
        match r[m].sign() {
            num_bigint::Sign::Plus => pos.push(r),
            num_bigint::Sign::Minus => neg.push(r),
            num_bigint::Sign::NoSign => out.push(r[..m].to_vec()),
        }
    }
    for a in &pos {
        for b in &neg {
            let (ca, cb) = (-&b[m], a[m].clone());
            let combined: Vec<BigInt> = (0..m).map(|i| &a[i] * &ca + &b[i] * &cb).collect();
            out.push(primitive(&combined));
        }
    }
    dedup_rows(out)
}

fn walker_for(p: &CycloParams, frame: Frame) -> ConeWalker {
    match frame {
        Frame::Original => {
            let forms = facet_hyperplanes(p)
                .iter()
                .map(|h| h.homogeneous_form())
                .collect();
            ConeWalker::new(forms, &p.vertices(), IntMatrix::identity(p.d() + 1))
        }
        Frame::Transformed => {
            let t = transform(p);
            let forms = transformed_facet_hyperplanes(p, &t)
                .iter()
                .map(|h| h.homogeneous_form())
                .collect();
            let vertices: Vec<_> = (1..=p.n()).map(|i| t.column(i)).collect();
            ConeWalker::new(forms, &vertices, t.inverse_factor().clone())
        }
    }
}

/// Lattice points of the `k`-th dilation, in moment coordinates and
/// lexicographic order, enumerated through the triangular frame.
pub fn enumerate_points(
    p: &CycloParams,
    k: u64,
    interior_only: bool,
    cfg: &EnumConfig,
) -> Result<Vec<LatticePoint>> {
    enumerate_points_in_frame(p, k, interior_only, Frame::Transformed, cfg)
}

/// As [`enumerate_points`], walking the chosen frame. Both frames return the
/// same set.
pub fn enumerate_points_in_frame(
    p: &CycloParams,
    k: u64,
    interior_only: bool,
    frame: Frame,
    cfg: &EnumConfig,
) -> Result<Vec<LatticePoint>> {
    walker_for(p, frame).points(k, interior_only, cfg)
}

/// Reusable enumerator for repeated dilations of one polytope.
#[derive(Clone, Debug)]
pub struct PointEnumerator {
    walker: ConeWalker,
}

impl PointEnumerator {
    pub fn new(p: &CycloParams) -> Self {
        Self {
            walker: walker_for(p, Frame::Transformed),
        }
    }

    pub fn points(&self, k: u64, interior_only: bool, cfg: &EnumConfig) -> Result<Vec<LatticePoint>> {
        self.walker.points(k, interior_only, cfg)
    }

    pub fn count(&self, k: u64, interior_only: bool, cfg: &EnumConfig) -> Result<u64> {
        Ok(self.walker.frame_points(k, interior_only, cfg)?.len() as u64)
    }
}

/// `L(0), ..., L(k_max)`.
pub fn ehrhart_counts(p: &CycloParams, k_max: u64, cfg: &EnumConfig) -> Result<Vec<u64>> {
    let e = PointEnumerator::new(p);
    (0..=k_max).map(|k| e.count(k, false, cfg)).collect()
}

/// Binomial transform of `L(0..=d)`.
pub fn h_star_from_counts(d: usize, counts: &[u64]) -> HStarVector {
    let h = (0..=d)
        .map(|j| {
            (0..=j).fold(BigInt::zero(), |acc, i| {
                let term = crate::arith::binomial(d as u64 + 1, i as u64) * counts[j - i];
                if i % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            })
        })
        .collect();
    HStarVector { h }
}

pub fn h_star(p: &CycloParams, cfg: &EnumConfig) -> Result<HStarVector> {
    let counts = ehrhart_counts(p, p.d() as u64, cfg)?;
    let h = h_star_from_counts(p.d(), &counts);
    assert!(
        h.h.iter().all(|x| !x.is_negative()) && h.h[0].is_one(),
        "h*-vector {:?} of {p} violates nonnegativity; enumeration is broken",
        h.h
    );
    Ok(h)
}

pub fn interior_count(p: &CycloParams, k: u64, cfg: &EnumConfig) -> Result<u64> {
    PointEnumerator::new(p).count(k, true, cfg)
}

/// Whether `x` satisfies every facet inequality of `p` (strictly, if asked).
pub fn in_cone(p: &CycloParams, x: &[BigInt], strict: bool) -> bool {
    facet_hyperplanes(p).iter().all(|h| {
        let v = dot(&h.homogeneous_form(), x);
        if strict {
            v.is_positive()
        } else {
            !v.is_negative()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::big;

    fn p(d: usize, tau: &[i64]) -> CycloParams {
        CycloParams::from_i64(d, tau).unwrap()
    }

    fn cfg() -> EnumConfig {
        EnumConfig::default()
    }

    #[test]
    fn triangle_points() {
        let q = p(2, &[0, 1, 3]);
        assert_eq!(enumerate_points(&q, 1, false, &cfg()).unwrap().len(), 7);
        let inner = enumerate_points(&q, 1, true, &cfg()).unwrap();
        assert_eq!(inner, vec![LatticePoint::new(big(&[1, 1, 2]))]);
        assert_eq!(
            enumerate_points(&q, 0, false, &cfg()).unwrap(),
            vec![LatticePoint::new(big(&[0, 0, 0]))]
        );
        assert_eq!(interior_count(&q, 0, &cfg()).unwrap(), 0);
        let q = p(2, &[0, 1, 2]);
        assert_eq!(enumerate_points(&q, 1, false, &cfg()).unwrap().len(), 4);
        assert_eq!(interior_count(&q, 1, &cfg()).unwrap(), 0);
    }

    #[test]
    fn ehrhart_and_h_star() {
        assert_eq!(ehrhart_counts(&p(2, &[0, 1, 3]), 2, &cfg()).unwrap(), vec![1, 7, 19]);
        assert_eq!(ehrhart_counts(&p(2, &[0, 1, 2]), 2, &cfg()).unwrap(), vec![1, 4, 9]);
        let l = ehrhart_counts(&p(1, &[0, 3]), 5, &cfg()).unwrap();
        assert_eq!(l, (0..=5).map(|k| 3 * k + 1).collect::<Vec<u64>>());
        assert_eq!(h_star(&p(2, &[0, 1, 3]), &cfg()).unwrap().h, big(&[1, 4, 1]));
        assert_eq!(h_star(&p(2, &[0, 1, 2]), &cfg()).unwrap().h, big(&[1, 1, 0]));
        assert_eq!(h_star(&p(1, &[0, 1]), &cfg()).unwrap().h, big(&[1, 0]));
    }

    #[test]
    fn wide_triangle_has_witness_points_inside() {
        // Transformed frame of C_2(0,2,4) contains (1,1,1) and (1,2,2).
        assert!(interior_count(&p(2, &[0, 2, 4]), 1, &cfg()).unwrap() >= 2);
    }

    #[test]
    fn budget_is_enforced() {
        let tiny = EnumConfig { budget: 3 };
        assert_eq!(
            enumerate_points(&p(2, &[0, 1, 3]), 2, false, &tiny),
            Err(Error::BudgetExceeded { budget: 3 })
        );
    }

    #[test]
    fn frames_agree() {
        let q = p(3, &[-1, 0, 2, 3, 5]);
        for k in 0..=2 {
            assert_eq!(
                enumerate_points_in_frame(&q, k, false, Frame::Original, &cfg()).unwrap(),
                enumerate_points_in_frame(&q, k, false, Frame::Transformed, &cfg()).unwrap()
            );
        }
    }

    #[test]
    fn palindromes() {
        assert!(HStarVector { h: big(&[1, 4, 1]) }.is_palindromic());
        assert!(HStarVector { h: big(&[1, 1, 0]) }.is_palindromic());
        assert!(!HStarVector { h: big(&[1, 2, 0, 0]) }.is_palindromic());
    }
}
