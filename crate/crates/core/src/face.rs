//! Faces of the boundary complex of a cyclic polytope: subset decompositions,
//! types `(r, s)`, Gale evenness, exact facet normals, and the closed-form
//! halfspaces of the simplex case.

use crate::arith::{cofactor_kernel, combinations, dot, primitive, IntMatrix};
use crate::error::{Error, Result};
use crate::params::{CycloParams, TransformedMatrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// `W = Y1 ⊔ X_1 ⊔ ... ⊔ X_t ⊔ Y2` with end sets `Y1`, `Y2` and maximal
/// contiguous interior blocks `X_i`. All indices are 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetDecomposition {
    pub y1: Vec<usize>,
    pub blocks: Vec<Vec<usize>>,
    pub y2: Vec<usize>,
}

impl SubsetDecomposition {
    /// Elements in increasing order.
    pub fn reassemble(&self) -> Vec<usize> {
        self.y1
            .iter()
            .chain(self.blocks.iter().flatten())
            .chain(self.y2.iter())
            .copied()
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FaceType {
    pub r: usize,
    pub s: usize,
}

/// Coordinate frame a hyperplane or point is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    /// Moment coordinates `(1, t, t^2, ..., t^d)`.
    Original,
    /// Triangular coordinates `U * x`.
    Transformed,
}

impl Frame {
    fn name(self) -> &'static str {
        match self {
            Frame::Original => "original",
            Frame::Transformed => "transformed",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = ">=")]
    Geq,
    #[serde(rename = "<=")]
    Leq,
}

/// `normal · x  (sense)  rhs · x_0`.
///
/// The right-hand side is homogenized by the degree coordinate, so at
/// `x_0 = 1` this is the affine inequality as written and at `x_0 = k` it
/// describes the `k`-th dilation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperplane {
    #[serde(with = "crate::json::int_vec")]
    pub normal: Vec<BigInt>,
    #[serde(with = "crate::json::int")]
    pub rhs: BigInt,
    pub sense: Sense,
    pub facet_indices: Option<Vec<usize>>,
    pub frame: Frame,
}

impl Hyperplane {
    /// Signed slack in the `>=` convention: positive strictly inside, zero on
    /// the hyperplane.
    pub fn slack(&self, x: &[BigInt], frame: Frame) -> Result<BigInt> {
        if frame != self.frame {
            return Err(Error::FrameMismatch {
                hyperplane: self.frame.name(),
                point: frame.name(),
            });
        }
        let lhs = dot(&self.normal, x) - &self.rhs * &x[0];
        Ok(match self.sense {
            Sense::Geq => lhs,
            Sense::Leq => -lhs,
        })
    }

    /// The same halfspace as a linear form `m · x >= 0` over homogeneous
    /// coordinates.
    pub fn homogeneous_form(&self) -> Vec<BigInt> {
        let mut m = self.normal.clone();
        m[0] -= &self.rhs;
        if self.sense == Sense::Leq {
            for x in m.iter_mut() {
                *x = -x.clone();
            }
        }
        m
    }
}

fn normalize_subset(w: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut v = w.to_vec();
    v.sort_unstable();
    for pair in v.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::RepeatedIndex(pair[0]));
        }
    }
    if let Some(&bad) = v.iter().find(|&&i| i == 0 || i > n) {
        return Err(Error::IndexOutOfRange { index: bad, n });
    }
    Ok(v)
}

pub fn decompose(w: &[usize], n: usize) -> Result<SubsetDecomposition> {
    let w = normalize_subset(w, n)?;
    let mut out = SubsetDecomposition::default();
    let mut rest: &[usize] = &w;
    let prefix = rest.iter().enumerate().take_while(|&(k, &i)| i == k + 1).count();
    out.y1 = rest[..prefix].to_vec();
    rest = &rest[prefix..];
    let suffix = rest
        .iter()
        .rev()
        .enumerate()
        .take_while(|&(k, &i)| i == n - k)
        .count();
    out.y2 = rest[rest.len() - suffix..].to_vec();
    rest = &rest[..rest.len() - suffix];
    for &i in rest {
        match out.blocks.last_mut() {
            Some(block) if *block.last().unwrap() + 1 == i => block.push(i),
            _ => out.blocks.push(vec![i]),
        }
    }
    Ok(out)
}

pub fn face_type(w: &[usize], n: usize) -> Result<FaceType> {
    let dec = decompose(w, n)?;
    Ok(FaceType {
        r: dec.reassemble().len(),
        s: dec.blocks.iter().filter(|b| b.len() % 2 == 1).count(),
    })
}

/// Whether `W` is a face of the boundary complex (the empty set included).
pub fn is_face(w: &[usize], p: &CycloParams) -> Result<bool> {
    let t = face_type(w, p.n())?;
    Ok(t.r <= p.d() && t.s <= p.d() - t.r)
}

/// All facets as sorted `d`-subsets, in lexicographic order.
pub fn facets(p: &CycloParams) -> Vec<Vec<usize>> {
    combinations(p.n(), p.d())
        .into_iter()
        .map(|c| c.into_iter().map(|i| i + 1).collect::<Vec<_>>())
        .filter(|w| face_type(w, p.n()).map(|t| t.s == 0).unwrap_or(false))
        .collect()
}

/// Primitive inward normal of the hyperplane through `{v_i : i ∈ W}`, in
/// moment coordinates. Errors unless every other vertex lies strictly on the
/// positive side.
pub fn facet_hyperplane(w: &[usize], p: &CycloParams) -> Result<Hyperplane> {
    let w = normalize_subset(w, p.n())?;
    if w.len() != p.d() {
        return Err(Error::NotAFacet(w));
    }
    let rows = IntMatrix::from_rows(w.iter().map(|&i| p.vertex(i)).collect());
    let mut normal = primitive(&cofactor_kernel(&rows));
    let mut others: Vec<BigInt> = (1..=p.n())
        .filter(|i| !w.contains(i))
        .map(|j| dot(&normal, &p.vertex(j)))
        .collect();
    if others.first().is_some_and(Signed::is_negative) {
        normal.iter_mut().for_each(|x| *x = -x.clone());
        others.iter_mut().for_each(|x| *x = -x.clone());
    }
    if !others.iter().all(Signed::is_positive) {
        return Err(Error::NotAFacet(w));
    }
    Ok(Hyperplane {
        normal,
        rhs: BigInt::zero(),
        sense: Sense::Geq,
        facet_indices: Some(w),
        frame: Frame::Original,
    })
}

/// Facet hyperplanes of every facet, in the order of [`facets`].
pub fn facet_hyperplanes(p: &CycloParams) -> Vec<Hyperplane> {
    facets(p)
        .iter()
        .map(|w| facet_hyperplane(w, p).expect("Gale facets have separating normals"))
        .collect()
}

/// The facet hyperplanes re-expressed in the triangular frame
/// (`m_T = m · U^{-1}`).
pub fn transformed_facet_hyperplanes(p: &CycloParams, t: &TransformedMatrix) -> Vec<Hyperplane> {
    facet_hyperplanes(p)
        .into_iter()
        .map(|h| Hyperplane {
            normal: t.inverse_factor().vec_mul(&h.normal),
            frame: Frame::Transformed,
            ..h
        })
        .collect()
}

/// The `d + 1` supporting halfspaces of a simplex `C_d(tau_1, ..., tau_{d+1})`
/// in transformed coordinates. Entry `i` (0-based `i - 1`) is the facet
/// opposite `v_i`: the first is `a_1 · x <= prod_{j>=2} Delta_{1j}`, the
/// others are `a_i · x >= 0`.
pub fn simplex_halfspaces(p: &CycloParams) -> Result<Vec<Hyperplane>> {
    let d = p.d();
    if p.n() != d + 1 {
        return Err(Error::WrongVertexCount {
            expected: "d+1".into(),
            got: p.n(),
        });
    }
    let mut out = Vec::with_capacity(d + 1);
    for i in 1..=d + 1 {
        let mut a = vec![BigInt::zero(); d + 1];
        // x_m coefficient: +-prod_{j=m+2}^{d+1} Delta_{ij}, alternating from a
        // positive leading entry at x_{max(i-1, 1)}.
        let lead = (i - 1).max(1);
        for m in lead..=d {
            let mag = (m + 2..=d + 1).fold(BigInt::one(), |acc, j| acc * p.delta(i, j));
            a[m] = if (m - lead) % 2 == 0 { mag } else { -mag };
        }
        let facet: Vec<usize> = (1..=d + 1).filter(|&j| j != i).collect();
        let (rhs, sense) = if i == 1 {
            let rhs = (2..=d + 1).fold(BigInt::one(), |acc, j| acc * p.delta(1, j));
            (rhs, Sense::Leq)
        } else {
            (BigInt::zero(), Sense::Geq)
        };
        out.push(Hyperplane {
            normal: a,
            rhs,
            sense,
            facet_indices: Some(facet),
            frame: Frame::Transformed,
        });
    }
    Ok(out)
}

/// Partitions `[n] = F ⊔ G` with `1 ∈ F` and neither part a face; only
/// defined for `n = d + 2`.
pub fn nonface_partitions(p: &CycloParams) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    let n = p.n();
    if n != p.d() + 2 {
        return Err(Error::WrongVertexCount {
            expected: "d+2".into(),
            got: n,
        });
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << (n - 1)) {
        let mut f = vec![1];
        let mut g = Vec::new();
        for i in 2..=n {
            if mask >> (i - 2) & 1 == 1 {
                f.push(i);
            } else {
                g.push(i);
            }
        }
        if !is_face(&f, p)? && !is_face(&g, p)? {
            out.push((f, g));
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::big;
    use crate::params::transform;

    fn p(d: usize, tau: &[i64]) -> CycloParams {
        CycloParams::from_i64(d, tau).unwrap()
    }

    #[test]
    fn decompositions() {
        let dec = decompose(&[1, 2, 5, 6, 7, 9], 10).unwrap();
        assert_eq!(dec.y1, vec![1, 2]);
        assert_eq!(dec.blocks, vec![vec![5, 6, 7], vec![9]]);
        assert!(dec.y2.is_empty());

        let all: Vec<usize> = (1..=6).collect();
        let dec = decompose(&all, 6).unwrap();
        assert_eq!(dec.y1, all);
        assert!(dec.blocks.is_empty() && dec.y2.is_empty());

        let dec = decompose(&[3], 5).unwrap();
        assert_eq!(dec.blocks, vec![vec![3]]);
        assert!(dec.y1.is_empty() && dec.y2.is_empty());

        assert_eq!(decompose(&[], 4).unwrap(), SubsetDecomposition::default());
        assert_eq!(
            decompose(&[2, 7], 6),
            Err(Error::IndexOutOfRange { index: 7, n: 6 })
        );
    }

    #[test]
    fn types() {
        assert_eq!(
            face_type(&[1, 2, 5, 6, 7, 9], 10).unwrap(),
            FaceType { r: 6, s: 2 }
        );
        assert_eq!(face_type(&[1, 2], 4).unwrap(), FaceType { r: 2, s: 0 });
        assert_eq!(face_type(&[2, 4], 4).unwrap(), FaceType { r: 2, s: 1 });
    }

    #[test]
    fn face_predicate() {
        assert!(!is_face(&[1, 3], &p(2, &[0, 1, 2, 3])).unwrap());
        assert!(is_face(&[2, 3], &p(3, &[0, 1, 2, 3, 4])).unwrap());
        assert!(is_face(&[], &p(2, &[0, 1, 3])).unwrap());
        assert!(!is_face(&[1, 2, 3], &p(2, &[0, 1, 3])).unwrap());
    }

    #[test]
    fn facet_lists() {
        let f = facets(&p(2, &[0, 1, 2, 3]));
        assert_eq!(f, vec![vec![1, 2], vec![1, 4], vec![2, 3], vec![3, 4]]);
        assert_eq!(
            facets(&p(2, &[0, 1, 3])),
            vec![vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        let f = facets(&p(4, &[0, 1, 2, 3, 4, 5]));
        assert!(f.contains(&vec![1, 2, 3, 4]));
        assert!(!f.contains(&vec![1, 2, 3, 5]));
    }

    #[test]
    fn facet_normals() {
        let q = p(2, &[0, 1, 3]);
        let h = facet_hyperplane(&[2, 3], &q).unwrap();
        assert_eq!(h.normal, big(&[3, -4, 1]));
        assert_eq!(h.rhs, BigInt::zero());
        let h = facet_hyperplane(&[1, 2], &q).unwrap();
        assert_eq!(h.normal, big(&[0, -1, 1]));
        let h = facet_hyperplane(&[1], &p(1, &[0, 2])).unwrap();
        assert_eq!(h.normal, big(&[0, 1]));
        assert_eq!(
            facet_hyperplane(&[1, 3], &p(2, &[0, 1, 2, 3])),
            Err(Error::NotAFacet(vec![1, 3]))
        );
    }

    #[test]
    fn simplex_halfspace_formulas() {
        let q = p(2, &[0, 1, 3]);
        let hs = simplex_halfspaces(&q).unwrap();
        assert_eq!(hs[0].normal, big(&[0, 3, -1]));
        assert_eq!(hs[0].rhs, BigInt::from(3));
        assert_eq!(hs[0].sense, Sense::Leq);
        assert_eq!(hs[1].normal, big(&[0, 2, -1]));
        assert_eq!(hs[1].sense, Sense::Geq);
        assert_eq!(hs[2].normal, big(&[0, 0, 1]));

        // H_3 for d = 3 reads Delta_34 x_2 - x_3 >= 0.
        let q = p(3, &[0, 1, 3, 7]);
        let hs = simplex_halfspaces(&q).unwrap();
        assert_eq!(hs[2].normal, big(&[0, 0, 4, -1]));
        for h in &hs {
            assert!(h.normal.last().unwrap().abs().is_one());
        }
        assert!(simplex_halfspaces(&p(2, &[0, 1, 2, 3])).is_err());
    }

    #[test]
    fn simplex_halfspaces_cut_out_the_simplex() {
        let q = p(3, &[0, 2, 3, 7]);
        let t = transform(&q);
        let hs = simplex_halfspaces(&q).unwrap();
        for (k, h) in hs.iter().enumerate() {
            for j in 1..=4 {
                let s = h.slack(&t.column(j), Frame::Transformed).unwrap();
                if j == k + 1 {
                    assert!(s.is_positive());
                } else {
                    assert!(s.is_zero());
                }
            }
        }
    }

    #[test]
    fn mixed_frames_are_refused() {
        let q = p(2, &[0, 1, 3]);
        let h = facet_hyperplane(&[1, 2], &q).unwrap();
        assert!(matches!(
            h.slack(&big(&[1, 1, 1]), Frame::Transformed),
            Err(Error::FrameMismatch { .. })
        ));
    }

    #[test]
    fn nonface_partition_is_odd_even() {
        assert_eq!(
            nonface_partitions(&p(2, &[0, 1, 2, 3])).unwrap(),
            vec![(vec![1, 3], vec![2, 4])]
        );
        assert_eq!(
            nonface_partitions(&p(3, &[0, 1, 2, 3, 4])).unwrap(),
            vec![(vec![1, 3, 5], vec![2, 4])]
        );
        assert_eq!(
            nonface_partitions(&p(4, &[0, 1, 2, 3, 4, 5])).unwrap(),
            vec![(vec![1, 3, 5], vec![2, 4, 6])]
        );
    }
}
