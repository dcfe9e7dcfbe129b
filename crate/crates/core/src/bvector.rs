//! Divided-difference vectors `b_S` and the constructive `(R1)` machinery
//! built from them. All vectors here are in moment coordinates.

use crate::arith::{
    as_integer, coordinates_in_basis, dot, saturation_index, IntMatrix,
};
use crate::error::{Error, Result};
use crate::face::facet_hyperplane;
use crate::params::CycloParams;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// `b_S = sum_{i in S} v_i / prod_{j in S \ {i}} Delta_{ij}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BVector {
    pub index_set: Vec<usize>,
    #[serde(with = "crate::json::int_vec")]
    pub value: Vec<BigInt>,
}

fn sorted_distinct(s: &[usize], p: &CycloParams) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let mut v = s.to_vec();
    v.sort_unstable();
    if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::RepeatedIndex(w[0]));
    }
    for &i in &v {
        p.check_index(i)?;
    }
    Ok(v)
}

/// Coefficient of `v_i` in `b_S`.
fn coefficient(i: usize, s: &[usize], p: &CycloParams) -> BigRational {
    let denom = s
        .iter()
        .filter(|&&j| j != i)
        .fold(BigInt::one(), |acc, &j| acc * p.delta(i, j));
    BigRational::new(BigInt::one(), denom)
}

fn rational_combination(terms: &[(BigRational, Vec<BigInt>)], len: usize) -> Vec<BigRational> {
    let mut acc = vec![BigRational::zero(); len];
    for (c, v) in terms {
        for (a, x) in acc.iter_mut().zip(v) {
            *a += c * BigRational::from_integer(x.clone());
        }
    }
    acc
}

fn bvec_rational(s: &[usize], p: &CycloParams) -> Vec<BigRational> {
    let terms: Vec<_> = s
        .iter()
        .map(|&i| (coefficient(i, s, p), p.vertex(i)))
        .collect();
    rational_combination(&terms, p.d() + 1)
}

pub fn bvec(s: &[usize], p: &CycloParams) -> Result<BVector> {
    let s = sorted_distinct(s, p)?;
    let value = bvec_rational(&s, p)
        .iter()
        .map(|q| as_integer(q).expect("b-vectors are integral"))
        .collect();
    Ok(BVector { index_set: s, value })
}

/// The same vector through the sorted alternating form
/// `sum_k (-1)^{k+1} v_{i_k} / prod |Delta_{i_k j}|`.
pub fn bvec_alternating(s: &[usize], p: &CycloParams) -> Result<Vec<BigRational>> {
    let s = sorted_distinct(s, p)?;
    let terms: Vec<_> = s
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let mag = s
                .iter()
                .filter(|&&j| j != i)
                .fold(BigInt::one(), |acc, &j| acc * p.delta(i, j).abs());
            let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            (BigRational::new(sign, mag), p.vertex(i))
        })
        .collect();
    Ok(rational_combination(&terms, p.d() + 1))
}

/// Checks `b_S = b_{S\{a}} / Delta_{ba} + b_{S\{b}} / Delta_{ab}` exactly.
pub fn bvec_recursion_check(s: &[usize], a: usize, b: usize, p: &CycloParams) -> Result<bool> {
    let s = sorted_distinct(s, p)?;
    if a == b {
        return Err(Error::RepeatedIndex(a));
    }
    if !s.contains(&a) || !s.contains(&b) {
        return Err(Error::InvalidArgument(format!(
            "{a} and {b} must both lie in {s:?}"
        )));
    }
    let without = |x: usize| -> Vec<usize> { s.iter().copied().filter(|&i| i != x).collect() };
    let lhs = bvec_rational(&s, p);
    let left = bvec_rational(&without(a), p);
    let right = bvec_rational(&without(b), p);
    let da = BigRational::from_integer(p.delta(b, a));
    let db = BigRational::from_integer(p.delta(a, b));
    Ok(lhs
        .iter()
        .zip(left.iter().zip(&right))
        .all(|(l, (x, y))| *l == x / &da + y / &db))
}

/// Rows `b_{i1}, b_{i1 i2}, ..., b_{i1 ... i_{d+1}}` for the given order.
pub fn basis_matrix(indices: &[usize], p: &CycloParams) -> Result<IntMatrix> {
    if indices.len() != p.d() + 1 {
        return Err(Error::InvalidArgument(format!(
            "need d+1 = {} indices, got {}",
            p.d() + 1,
            indices.len()
        )));
    }
    sorted_distinct(indices, p)?;
    let rows = (1..=indices.len())
        .map(|k| bvec(&indices[..k], p).map(|b| b.value))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntMatrix::from_rows(rows))
}

/// Primitive integer support form of a facet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportForm {
    pub facet_indices: Vec<usize>,
    #[serde(with = "crate::json::int_vec")]
    pub normal: Vec<BigInt>,
}

impl SupportForm {
    pub fn value_on(&self, x: &[BigInt]) -> BigInt {
        dot(&self.normal, x)
    }
}

pub fn support_form(w: &[usize], p: &CycloParams) -> Result<SupportForm> {
    let h = facet_hyperplane(w, p)?;
    Ok(SupportForm {
        facet_indices: h.facet_indices.expect("facet hyperplanes carry their indices"),
        normal: h.normal,
    })
}

pub fn support_forms(p: &CycloParams) -> Vec<SupportForm> {
    crate::face::facets(p)
        .iter()
        .map(|w| support_form(w, p).expect("Gale facets have support forms"))
        .collect()
}

/// `c_j = sum_{l=j}^{d} b_{i_l ... i_d}` for `j = 1..d`.
pub fn facet_chain_basis(w: &[usize], p: &CycloParams) -> Result<Vec<Vec<BigInt>>> {
    let form = support_form(w, p)?;
    let idx = &form.facet_indices;
    let d = idx.len();
    let tails: Vec<Vec<BigInt>> = (0..d)
        .map(|l| bvec(&idx[l..], p).map(|b| b.value))
        .collect::<Result<_>>()?;
    let mut out = vec![vec![BigInt::zero(); p.d() + 1]; d];
    for j in 0..d {
        for tail in &tails[j..] {
            for (acc, x) in out[j].iter_mut().zip(tail) {
                *acc += x;
            }
        }
    }
    Ok(out)
}

/// Index of the chain basis inside `Z^{d+1} ∩ {σ_W = 0}`; 1 means it spans.
pub fn chain_basis_index(w: &[usize], p: &CycloParams) -> Result<BigInt> {
    let form = support_form(w, p)?;
    let basis = facet_chain_basis(w, p)?;
    if basis.iter().any(|c| !form.value_on(c).is_zero()) {
        return Ok(BigInt::zero());
    }
    Ok(saturation_index(&basis))
}

/// Output of [`r1_witness`] together with the facts that certify it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct R1Witness {
    pub facet: Vec<usize>,
    pub apex: usize,
    pub point: Vec<BigInt>,
    /// `σ_W(point)`; should be 1.
    pub sigma: BigInt,
    /// Coefficients of `point` over `v_i`, `i ∈ W ∪ {apex}` (sorted order).
    pub coefficients: Vec<BigRational>,
    /// All coefficients nonnegative and every support form nonnegative.
    pub in_cone: bool,
}

impl R1Witness {
    pub fn holds(&self) -> bool {
        self.sigma.is_one() && self.in_cone
    }
}

/// Point `x` of the cone with `σ_W(x) = 1`, built from b-vectors over
/// `S = W ∪ {k}`: take every other element of `S` starting beside `k`,
/// sum the tail b-vectors of that subset, then add or subtract `b_S`
/// according to the parity of `k`'s position.
pub fn r1_witness(w: &[usize], k: usize, p: &CycloParams) -> Result<R1Witness> {
    r1_witness_with(w, k, p, &support_forms(p))
}

/// [`r1_witness`] with the support forms of every facet precomputed.
pub fn r1_witness_with(w: &[usize], k: usize, p: &CycloParams, forms: &[SupportForm]) -> Result<R1Witness> {
    let form = support_form(w, p)?;
    let facet = form.facet_indices.clone();
    p.check_index(k)?;
    if facet.contains(&k) {
        return Err(Error::ApexInFacet(k));
    }
    let mut s = facet.clone();
    s.push(k);
    s.sort_unstable();
    // 1-based position of k in S.
    let pos = s.iter().position(|&i| i == k).unwrap() + 1;
    // Odd position for k: keep the even positions, and vice versa (0-based parity).
    let parity = if pos % 2 == 1 { 1 } else { 0 };
    let chosen: Vec<usize> = s
        .iter()
        .enumerate()
        .filter(|(q, _)| q % 2 == parity)
        .map(|(_, &i)| i)
        .collect();
    let mut x = vec![BigInt::zero(); p.d() + 1];
    for l in 0..chosen.len() {
        for (acc, y) in x.iter_mut().zip(bvec(&chosen[l..], p)?.value) {
            *acc += y;
        }
    }
    let bs = bvec(&s, p)?.value;
    for (acc, y) in x.iter_mut().zip(&bs) {
        if pos % 2 == 1 {
            *acc += y;
        } else {
            *acc -= y;
        }
    }
    let sigma = form.value_on(&x);
    let basis = IntMatrix::from_columns(&s.iter().map(|&i| p.vertex(i)).collect::<Vec<_>>());
    let coefficients = coordinates_in_basis(&basis, &x).expect("d+1 vertices are independent");
    let in_cone = coefficients.iter().all(|c| !c.is_negative())
        && forms.iter().all(|f| !f.value_on(&x).is_negative());
    Ok(R1Witness {
        facet,
        apex: k,
        point: x,
        sigma,
        coefficients,
        in_cone,
    })
}
