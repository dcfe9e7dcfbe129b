//! The toric ring `K[P]` generated by all lattice points of `P` in degree
//! one: membership, normality, `(R1)`, the closed-form Gorenstein predicate,
//! an exact Gorenstein oracle and the explicit interior witnesses.

use crate::arith::{as_integer, solve_rational, IntMatrix};
use crate::bvector::{chain_basis_index, r1_witness_with, support_forms};
use crate::error::{Error, Result};
use crate::face::{facets, simplex_halfspaces, Frame};
use crate::lattice::{h_star, in_cone, interior_count, EnumConfig, HStarVector, LatticePoint, PointEnumerator};
use crate::params::{reverse_negate, transform, CycloParams};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};

/// Membership in the semigroup generated by the degree-1 lattice points.
#[derive(Clone, Debug)]
pub struct KpSemigroup {
    generators: Vec<Vec<BigInt>>,
    p: CycloParams,
    memo: HashMap<Vec<BigInt>, bool>,
}

impl KpSemigroup {
    pub fn new(p: &CycloParams, cfg: &EnumConfig) -> Result<Self> {
        let generators = PointEnumerator::new(p)
            .points(1, false, cfg)?
            .into_iter()
            .map(|x| x.coords)
            .collect();
        Ok(Self {
            generators,
            p: p.clone(),
            memo: HashMap::new(),
        })
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    /// Degree-descending search: peel off one generator and recurse.
    pub fn contains(&mut self, z: &[BigInt]) -> bool {
        if z[0].is_negative() {
            return false;
        }
        if z[0].is_zero() {
            return z.iter().all(Zero::is_zero);
        }
        if !in_cone(&self.p, z, false) {
            return false;
        }
        if let Some(&hit) = self.memo.get(z) {
            return hit;
        }
        let mut found = false;
        for i in 0..self.generators.len() {
            let rest: Vec<BigInt> = z.iter().zip(&self.generators[i]).map(|(a, b)| a - b).collect();
            if self.contains(&rest) {
                found = true;
                break;
            }
        }
        self.memo.insert(z.to_vec(), found);
        found
    }
}

/// Whether `z` is a nonnegative integer combination of degree-1 points of `P`.
pub fn member_kp(z: &[BigInt], p: &CycloParams) -> Result<bool> {
    Ok(KpSemigroup::new(p, &EnumConfig::from_env())?.contains(z))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normality {
    pub normal: bool,
    pub witness: Option<LatticePoint>,
    /// Degrees `2..=checked_degree` were compared.
    pub checked_degree: usize,
}

/// Compares the degree-`k` part of the semigroup with `kP ∩ Z^{d+1}` for
/// `k <= max_degree` (default `d`).
///
/// Degree `d` suffices: a cone point lies in a simplicial subcone spanned by
/// `d + 1` vertices, and removing the integer parts of its coefficients
/// leaves a lattice point of degree at most `d`.
pub fn is_normal_kp(p: &CycloParams, max_degree: Option<usize>, cfg: &EnumConfig) -> Result<Normality> {
    let max_degree = max_degree.unwrap_or(p.d());
    let e = PointEnumerator::new(p);
    let gens: Vec<Vec<BigInt>> = e.points(1, false, cfg)?.into_iter().map(|x| x.coords).collect();
    let mut prev: HashSet<Vec<BigInt>> = gens.iter().cloned().collect();
    for k in 2..=max_degree {
        let mut cur = HashSet::new();
        for z in e.points(k as u64, false, cfg)? {
            let reachable = gens.iter().any(|g| {
                let rest: Vec<BigInt> = z.coords.iter().zip(g).map(|(a, b)| a - b).collect();
                prev.contains(&rest)
            });
            if !reachable {
                return Ok(Normality {
                    normal: false,
                    witness: Some(z),
                    checked_degree: k,
                });
            }
            cur.insert(z.coords);
        }
        prev = cur;
    }
    Ok(Normality {
        normal: true,
        witness: None,
        checked_degree: max_degree,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct R1Check {
    pub holds: bool,
    pub failures: Vec<String>,
}

/// Every facet: the chain basis spans the facet lattice, and some apex
/// yields a cone point at height one above the facet.
pub fn verify_r1(p: &CycloParams) -> R1Check {
    let mut failures = Vec::new();
    let forms = support_forms(p);
    for w in facets(p) {
        match chain_basis_index(&w, p) {
            Ok(i) if i.is_one() => {}
            Ok(i) => failures.push(format!("facet {w:?}: chain basis index {i}")),
            Err(e) => failures.push(format!("facet {w:?}: {e}")),
        }
        let ok = (1..=p.n())
            .filter(|k| !w.contains(k))
            .any(|k| r1_witness_with(&w, k, p, &forms).is_ok_and(|x| x.holds()));
        if !ok {
            failures.push(format!("facet {w:?}: no apex gives sigma = 1 inside the cone"));
        }
    }
    R1Check {
        holds: failures.is_empty(),
        failures,
    }
}

/// Closed form: Gorenstein exactly for triangles with gaps `(1, 2)` or `(2, 1)`.
pub fn gorenstein_theorem(p: &CycloParams) -> bool {
    if p.d() != 2 || p.n() != 3 {
        return false;
    }
    let g = p.gaps();
    let (one, two) = (BigInt::one(), BigInt::from(2));
    (g[0] == one && g[1] == two) || (g[0] == two && g[1] == one)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GorensteinStatus {
    Gorenstein,
    NotGorenstein,
    /// The support-form system is solvable but normality is not known.
    Undetermined,
}

impl GorensteinStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Gorenstein => "gorenstein",
            Self::NotGorenstein => "not_gorenstein",
            Self::Undetermined => "undetermined",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GorensteinOracle {
    pub status: GorensteinStatus,
    /// Integer `c` with `σ_F(c) = 1` on every facet, when it exists.
    pub generator: Option<LatticePoint>,
    pub h_star_palindromic: Option<bool>,
}

/// Solves `σ_F(c) = 1` over all facets exactly. No integer solution means
/// the interior ideal is not principal; a solution decides Gorenstein only
/// once the semigroup is known to be normal.
pub fn gorenstein_oracle(p: &CycloParams, normal: Option<bool>, h_star: Option<&HStarVector>) -> GorensteinOracle {
    let forms = support_forms(p);
    let a = IntMatrix::from_rows(forms.iter().map(|f| f.normal.clone()).collect());
    let ones = vec![BigInt::one(); forms.len()];
    let generator = solve_rational(&a, &ones)
        .and_then(|(x, _)| x.iter().map(as_integer).collect::<Option<Vec<_>>>())
        .map(LatticePoint::new);
    let status = match (&generator, normal) {
        (None, _) | (Some(_), Some(false)) => GorensteinStatus::NotGorenstein,
        (Some(_), Some(true)) => GorensteinStatus::Gorenstein,
        (Some(_), None) => GorensteinStatus::Undetermined,
    };
    GorensteinOracle {
        status,
        generator,
        h_star_palindromic: h_star.map(HStarVector::is_palindromic),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GorensteinWitnesses {
    pub branch: String,
    /// Parameter subset spanning the sub-simplex that carries the points.
    pub sub_simplex: Vec<usize>,
    /// Whether the sub-simplex was reversed before reading off the points.
    pub reversed: bool,
    /// Points in the triangular frame of the (possibly reversed) sub-simplex.
    pub frame_points: Vec<LatticePoint>,
    /// The same points in moment coordinates of `P`.
    pub points: Vec<LatticePoint>,
    /// Halfspace slacks of each point in the sub-simplex.
    #[serde(with = "crate::json::int_vecs")]
    pub slacks: Vec<Vec<BigInt>>,
    /// No explicit points for this branch; only the oracle can decide.
    pub oracle_needed: bool,
    pub verified: bool,
}

enum Plan {
    Points {
        branch: &'static str,
        reversed: bool,
        points: Vec<Vec<BigInt>>,
    },
    OracleNeeded(&'static str),
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn flipped(plan: Plan) -> Plan {
    match plan {
        Plan::Points {
            branch,
            reversed,
            points,
        } => Plan::Points {
            branch,
            reversed: !reversed,
            points,
        },
        other => other,
    }
}

/// Branch table on a simplex `q` (`n = d + 1`).
fn plan_simplex(q: &CycloParams) -> Result<Plan> {
    let d = q.d();
    let g = q.gaps();
    let one = BigInt::one();
    let two = BigInt::from(2);
    let dl = |j: usize| q.delta(1, j);
    Ok(match d {
        1 => Plan::OracleNeeded("segment"),
        2 => {
            if g[0] < g[1] {
                return Ok(flipped(plan_simplex(&reverse_negate(q))?));
            }
            if g[1] >= two {
                Plan::Points {
                    branch: "triangle_wide",
                    reversed: false,
                    points: vec![ints(&[1, 1, 1]), ints(&[1, 2, 2])],
                }
            } else if g[0] >= BigInt::from(3) {
                Plan::Points {
                    branch: "triangle_long_short",
                    reversed: false,
                    points: vec![ints(&[1, 2, 1]), ints(&[1, 3, 1])],
                }
            } else if g[0] == two {
                return Err(Error::NoWitnessExpected);
            } else {
                Plan::OracleNeeded("triangle_unit_gaps")
            }
        }
        3 => {
            if g[1] >= two {
                let base = |q2: i64| vec![one.clone(), dl(2) + 1, dl(3) + 1, BigInt::from(q2)];
                Plan::Points {
                    branch: "tetra_wide_middle",
                    reversed: false,
                    points: vec![base(1), base(2)],
                }
            } else if g[0] >= two && g[2] >= two {
                Plan::Points {
                    branch: "tetra_wide_ends",
                    reversed: false,
                    points: vec![ints(&[1, 2, 2, 1]), ints(&[1, 2, 2, 2])],
                }
            } else if g[0] >= two {
                Plan::Points {
                    branch: "tetra_wide_first",
                    reversed: false,
                    points: vec![
                        vec![one.clone(), dl(2), dl(2), one.clone()],
                        vec![one.clone(), dl(2) + 1, dl(2) + 2, BigInt::from(3)],
                    ],
                }
            } else if g[2] >= two {
                return Ok(flipped(plan_simplex(&reverse_negate(q))?));
            } else {
                Plan::OracleNeeded("tetra_unit_gaps")
            }
        }
        _ if d % 2 == 0 => {
            let alpha = |qq: i64| {
                let mut v = vec![one.clone()];
                v.extend((2..d).map(|j| dl(j) + 1));
                v.push(dl(d));
                v.push(BigInt::from(qq));
                v
            };
            Plan::Points {
                branch: "even_alpha",
                reversed: false,
                points: vec![alpha(1), alpha(2)],
            }
        }
        _ => {
            let beta = |qq: i64| {
                let mut v = vec![one.clone()];
                v.extend((2..=d).map(|j| dl(j) + 1));
                v.push(dl(d + 1) - qq);
                v
            };
            Plan::Points {
                branch: "odd_beta",
                reversed: false,
                points: vec![beta(1), beta(2)],
            }
        }
    })
}

/// Two or more lattice points strictly inside `P` in degree one, read off a
/// sub-simplex, which rule out the Gorenstein property.
pub fn gorenstein_witnesses(p: &CycloParams) -> Result<GorensteinWitnesses> {
    if gorenstein_theorem(p) {
        return Err(Error::NoWitnessExpected);
    }
    let (d, n) = (p.d(), p.n());
    let sub_simplex: Vec<usize> = match (d, n) {
        (2, 4) => vec![1, 3, 4],
        (2, m) if m >= 5 => vec![1, 4, 5],
        (3, m) if m >= 5 => vec![1, 3, 4, 5],
        _ => (1..=d + 1).collect(),
    };
    let empty = |branch: &str| GorensteinWitnesses {
        branch: branch.to_string(),
        sub_simplex: sub_simplex.clone(),
        reversed: false,
        frame_points: Vec::new(),
        points: Vec::new(),
        slacks: Vec::new(),
        oracle_needed: true,
        verified: false,
    };
    if (d, n) == (2, 4) && p.gaps().iter().all(One::is_one) {
        return Ok(empty("quad_unit_gaps"));
    }
    let sub = p.restrict(&sub_simplex)?;
    let (branch, reversed, frame_points) = match plan_simplex(&sub)? {
        Plan::OracleNeeded(b) => return Ok(empty(b)),
        Plan::Points {
            branch,
            reversed,
            points,
        } => (branch, reversed, points),
    };
    let q = if reversed { reverse_negate(&sub) } else { sub };
    let halfspaces = simplex_halfspaces(&q)?;
    let t = transform(&q);
    let mut slacks = Vec::new();
    let mut points = Vec::new();
    for x in &frame_points {
        slacks.push(
            halfspaces
                .iter()
                .map(|h| h.slack(x, Frame::Transformed))
                .collect::<Result<Vec<_>>>()?,
        );
        let mut y = t.to_original(x);
        if reversed {
            for (m, c) in y.iter_mut().enumerate() {
                if m % 2 == 1 {
                    *c = -c.clone();
                }
            }
        }
        points.push(y);
    }
    let distinct = points.iter().collect::<HashSet<_>>().len() >= 2;
    let verified = distinct
        && slacks.iter().flatten().all(Signed::is_positive)
        && points.iter().all(|x| in_cone(p, x, true));
    Ok(GorensteinWitnesses {
        branch: branch.to_string(),
        sub_simplex,
        reversed,
        frame_points: frame_points.into_iter().map(LatticePoint::new).collect(),
        points: points.into_iter().map(LatticePoint::new).collect(),
        slacks,
        oracle_needed: false,
        verified,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KpOptions {
    pub max_degree: Option<usize>,
    pub oracle: bool,
    pub enumeration: EnumConfig,
}

impl Default for KpOptions {
    fn default() -> Self {
        Self {
            max_degree: None,
            oracle: true,
            enumeration: EnumConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingReportKP {
    pub params: CycloParams,
    pub normal: bool,
    pub nonnormal_witness: Option<LatticePoint>,
    pub normality_degree: usize,
    pub cohen_macaulay: bool,
    pub s2: bool,
    pub r1: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub r1_failures: Vec<String>,
    pub seminormal: bool,
    pub gorenstein_theorem: bool,
    pub gorenstein_oracle: Option<GorensteinOracle>,
    pub gorenstein_witnesses: Option<GorensteinWitnesses>,
    pub discrepancy: Option<String>,
    pub h_star: HStarVector,
    pub interior_k1: u64,
}

impl RingReportKP {
    /// Theorem and oracle disagree (an undetermined oracle never disagrees).
    pub fn theorem_oracle_conflict(&self) -> bool {
        self.gorenstein_oracle.as_ref().is_some_and(|o| match o.status {
            GorensteinStatus::Gorenstein => !self.gorenstein_theorem,
            GorensteinStatus::NotGorenstein => self.gorenstein_theorem,
            GorensteinStatus::Undetermined => false,
        })
    }

    pub fn witness_failure(&self) -> bool {
        self.gorenstein_witnesses
            .as_ref()
            .is_some_and(|w| !w.oracle_needed && !w.verified)
    }
}

pub fn classify_kp(p: &CycloParams, opts: &KpOptions) -> Result<RingReportKP> {
    let cfg = &opts.enumeration;
    let normality = is_normal_kp(p, opts.max_degree, cfg)?;
    let h = h_star(p, cfg)?;
    let interior_k1 = interior_count(p, 1, cfg)?;
    let r1 = verify_r1(p);
    let theorem = gorenstein_theorem(p);
    let oracle = opts
        .oracle
        .then(|| gorenstein_oracle(p, Some(normality.normal), Some(&h)));
    let witnesses = if theorem { None } else { Some(gorenstein_witnesses(p)?) };
    let n = normality.normal;
    let mut report = RingReportKP {
        params: p.clone(),
        normal: n,
        nonnormal_witness: normality.witness,
        normality_degree: normality.checked_degree,
        cohen_macaulay: n,
        s2: n,
        r1: r1.holds,
        r1_failures: r1.failures,
        seminormal: n,
        gorenstein_theorem: theorem,
        gorenstein_oracle: oracle,
        gorenstein_witnesses: witnesses,
        discrepancy: None,
        h_star: h,
        interior_k1,
    };
    let mut notes = Vec::new();
    if report.theorem_oracle_conflict() {
        let o = report.gorenstein_oracle.as_ref().unwrap();
        notes.push(format!(
            "closed form says gorenstein={theorem}, exact oracle says {}",
            o.status.as_str()
        ));
    }
    if report.witness_failure() {
        notes.push("an explicit interior witness failed verification".to_string());
    }
    if !report.r1 {
        notes.push("(R1) certificate failed".to_string());
    }
    if !notes.is_empty() {
        report.discrepancy = Some(notes.join("; "));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::big;

    fn p(d: usize, tau: &[i64]) -> CycloParams {
        CycloParams::from_i64(d, tau).unwrap()
    }

    #[test]
    fn membership_basics() {
        let q = p(2, &[0, 1, 3]);
        let sum: Vec<BigInt> = q.vertex(1).iter().zip(q.vertex(2)).map(|(a, b)| a + b).collect();
        assert!(member_kp(&sum, &q).unwrap());
        assert!(!member_kp(&big(&[0, 1, 0]), &q).unwrap());
        assert!(member_kp(&big(&[0, 0, 0]), &q).unwrap());
        assert!(member_kp(&big(&[1, 1, 2]), &q).unwrap());
        assert!(member_kp(&big(&[1, 1, 3]), &q).unwrap());
        assert!(!member_kp(&big(&[1, 1, 4]), &q).unwrap());
    }

    #[test]
    fn normality_small() {
        let cfg = EnumConfig::default();
        for tau in [&[0, 1, 3][..], &[0, 2, 4], &[0, 1, 2, 3], &[0, 1, 4, 5]] {
            assert!(is_normal_kp(&p(2, tau), None, &cfg).unwrap().normal);
        }
        assert!(is_normal_kp(&p(1, &[0, 5]), None, &cfg).unwrap().normal);
        assert!(is_normal_kp(&p(3, &[0, 1, 2, 3]), None, &cfg).unwrap().normal);
    }

    #[test]
    fn r1_examples() {
        assert!(verify_r1(&p(2, &[0, 1, 3])).holds);
        assert!(verify_r1(&p(3, &[0, 1, 2, 3, 5])).holds);
    }

    #[test]
    fn theorem_predicate() {
        assert!(gorenstein_theorem(&p(2, &[0, 1, 3])));
        assert!(gorenstein_theorem(&p(2, &[0, 2, 3])));
        assert!(!gorenstein_theorem(&p(3, &[0, 1, 2, 3])));
        assert!(!gorenstein_theorem(&p(2, &[0, 1, 2])));
        assert!(!gorenstein_theorem(&p(1, &[0, 2])));
    }

    #[test]
    fn oracle_examples() {
        let o = gorenstein_oracle(&p(2, &[0, 1, 3]), Some(true), None);
        assert_eq!(o.status, GorensteinStatus::Gorenstein);
        assert_eq!(o.generator, Some(LatticePoint::new(big(&[1, 1, 2]))));
        let o = gorenstein_oracle(&p(2, &[0, 2, 4]), Some(true), None);
        assert_eq!(o.status, GorensteinStatus::NotGorenstein);
        assert_eq!(o.generator, None);
        let o = gorenstein_oracle(&p(2, &[0, 2, 4]), None, None);
        assert_eq!(o.status, GorensteinStatus::NotGorenstein);
    }

    #[test]
    fn witness_branches() {
        let w = gorenstein_witnesses(&p(2, &[0, 2, 4])).unwrap();
        assert!(w.verified);
        assert_eq!(w.frame_points, vec![LatticePoint::new(big(&[1, 1, 1])), LatticePoint::new(big(&[1, 2, 2]))]);
        for tau in [&[0, 1, 4][..], &[0, 3, 4], &[0, 2, 5], &[0, 1, 2, 4], &[0, 1, 2, 3, 4], &[0, 1, 3, 4, 6, 7]] {
            let w = gorenstein_witnesses(&p(2, tau)).unwrap();
            assert!(w.verified, "{tau:?}: {w:?}");
        }
        for tau in [&[0, 1, 3, 4][..], &[0, 2, 3, 4], &[0, 1, 2, 4], &[0, 2, 4, 5], &[0, 1, 2, 3, 4]] {
            let w = gorenstein_witnesses(&p(3, tau)).unwrap();
            assert!(w.verified, "{tau:?}: {w:?}");
        }
        assert!(gorenstein_witnesses(&p(4, &[0, 1, 2, 3, 4])).unwrap().verified);
        assert!(gorenstein_witnesses(&p(5, &[0, 1, 2, 3, 4, 5])).unwrap().verified);
        assert!(gorenstein_witnesses(&p(2, &[0, 1, 2])).unwrap().oracle_needed);
        assert!(gorenstein_witnesses(&p(2, &[0, 1, 2, 3])).unwrap().oracle_needed);
        assert!(gorenstein_witnesses(&p(3, &[0, 1, 2, 3])).unwrap().oracle_needed);
        assert_eq!(gorenstein_witnesses(&p(2, &[0, 1, 3])), Err(Error::NoWitnessExpected));
    }

    #[test]
    fn classify_examples() {
        let r = classify_kp(&p(2, &[0, 1, 3]), &KpOptions::default()).unwrap();
        assert!(r.normal && r.cohen_macaulay && r.r1 && r.gorenstein_theorem);
        assert_eq!(r.gorenstein_oracle.as_ref().unwrap().status, GorensteinStatus::Gorenstein);
        assert_eq!(r.h_star.h, big(&[1, 4, 1]));
        assert_eq!(r.interior_k1, 1);
        assert!(r.discrepancy.is_none());
        let r = classify_kp(&p(2, &[0, 2, 4]), &KpOptions::default()).unwrap();
        assert!(r.normal && !r.gorenstein_theorem);
        assert_eq!(r.gorenstein_oracle.as_ref().unwrap().status, GorensteinStatus::NotGorenstein);
        assert!(r.discrepancy.is_none());
    }
}
