//! The semigroup `Q` generated by the vertices alone and its ring `K[Q]`.

use crate::arith::{coordinates_in_basis, as_integer, dot, gcd_all, hermite_rows, in_row_lattice, primitive, IntMatrix};
use crate::error::{Error, Result};
use crate::face::facet_hyperplane;
use crate::lattice::{ConeWalker, EnumConfig, LatticePoint};
use crate::params::{moment_matrix, CycloParams};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Row HNF basis of `ZQ`, the lattice spanned by the vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorLattice {
    #[serde(with = "crate::json::int_vecs")]
    pub hnf_basis: Vec<Vec<BigInt>>,
    #[serde(with = "crate::json::int")]
    pub index_in_ambient: BigInt,
}

impl GeneratorLattice {
    pub fn contains(&self, x: &[BigInt]) -> bool {
        in_row_lattice(&self.hnf_basis, x)
    }

    /// Coordinates `y` with `x = sum_i y_i * hnf_basis[i]`, if `x ∈ ZQ`.
    pub fn coordinates(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let bt = IntMatrix::from_rows(self.hnf_basis.clone()).transpose();
        coordinates_in_basis(&bt, x)?.iter().map(as_integer).collect()
    }
}

pub fn generator_lattice(p: &CycloParams) -> GeneratorLattice {
    let hnf_basis = hermite_rows(&p.vertices());
    assert_eq!(hnf_basis.len(), p.d() + 1, "vertices of a cyclic polytope span full rank");
    let index_in_ambient = hnf_basis
        .iter()
        .enumerate()
        .map(|(i, r)| r[i].clone())
        .product();
    GeneratorLattice {
        hnf_basis,
        index_in_ambient,
    }
}

/// The single relation `u - v` among the vertices when `n = d + 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelBinomial {
    #[serde(with = "crate::json::int_vec")]
    pub c: Vec<BigInt>,
    pub u_support: Vec<usize>,
    pub v_support: Vec<usize>,
    #[serde(with = "crate::json::int_vec")]
    pub u_exponents: Vec<BigInt>,
    #[serde(with = "crate::json::int_vec")]
    pub v_exponents: Vec<BigInt>,
    pub u_squarefree: bool,
    pub v_squarefree: bool,
    #[serde(with = "crate::json::int")]
    pub degree: BigInt,
}

impl KernelBinomial {
    /// `x1^a1 x3^a3 ...` style rendering of both sides.
    pub fn monomials(&self) -> (String, String) {
        let render = |support: &[usize], exps: &[BigInt]| {
            support
                .iter()
                .zip(exps)
                .map(|(i, e)| if e.is_one() { format!("x{i}") } else { format!("x{i}^{e}") })
                .collect::<Vec<_>>()
                .join("*")
        };
        (
            render(&self.u_support, &self.u_exponents),
            render(&self.v_support, &self.v_exponents),
        )
    }
}

/// `c_i ∝ 1 / prod_{j != i} Delta_{ij}`, made primitive with `c_1 > 0`.
pub fn kernel_binomial(p: &CycloParams) -> Result<KernelBinomial> {
    let n = p.n();
    if n != p.d() + 2 {
        return Err(Error::WrongVertexCount {
            expected: "d+2".into(),
            got: n,
        });
    }
    let weights: Vec<BigRational> = (1..=n)
        .map(|i| {
            let den = (1..=n)
                .filter(|&j| j != i)
                .fold(BigInt::one(), |acc, j| acc * p.delta(i, j));
            BigRational::new(BigInt::one(), den)
        })
        .collect();
    let lcm = weights
        .iter()
        .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let scaled: Vec<BigInt> = weights
        .iter()
        .map(|w| (w * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut c = primitive(&scaled);
    if c[0].is_negative() {
        c.iter_mut().for_each(|x| *x = -x.clone());
    }
    let mut kb = KernelBinomial {
        c: c.clone(),
        u_support: Vec::new(),
        v_support: Vec::new(),
        u_exponents: Vec::new(),
        v_exponents: Vec::new(),
        u_squarefree: false,
        v_squarefree: false,
        degree: BigInt::zero(),
    };
    for (i, x) in c.iter().enumerate() {
        if x.is_positive() {
            kb.u_support.push(i + 1);
            kb.u_exponents.push(x.clone());
        } else if x.is_negative() {
            kb.v_support.push(i + 1);
            kb.v_exponents.push(-x);
        }
    }
    kb.u_squarefree = kb.u_exponents.iter().all(One::is_one);
    kb.v_squarefree = kb.v_exponents.iter().all(One::is_one);
    kb.degree = kb.u_exponents.iter().sum();
    Ok(kb)
}

/// Least `s` in `[d+2, n]` with `Delta~_{d,d+1}` not dividing `Delta~_{d,s}`.
pub fn divisibility_test(p: &CycloParams) -> Result<Option<usize>> {
    let (d, n) = (p.d(), p.n());
    if n < d + 3 {
        return Err(Error::WrongVertexCount {
            expected: "at least d+3".into(),
            got: n,
        });
    }
    let div = p.delta_tilde(d, d + 1);
    Ok((d + 2..=n).find(|&s| !p.delta_tilde(d, s).is_multiple_of(&div)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tristate {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteForceKQ {
    pub normal: Tristate,
    pub witness: Option<LatticePoint>,
    pub checked_degree: usize,
}

fn walker_in_zq(p: &CycloParams, lattice: &GeneratorLattice) -> ConeWalker {
    let b = IntMatrix::from_rows(lattice.hnf_basis.clone());
    let forms = crate::face::facet_hyperplanes(p)
        .iter()
        .map(|h| b.mul_vec(&h.homogeneous_form()))
        .collect();
    let vertices: Vec<Vec<BigInt>> = p
        .vertices()
        .iter()
        .map(|v| lattice.coordinates(v).expect("vertices lie in ZQ"))
        .collect();
    ConeWalker::new(forms, &vertices, b.transpose())
}

/// Compares `cone ∩ ZQ` with `Q` degree by degree up to `max_degree`
/// (default `d`, enough by the same simplicial-subcone argument as for
/// `K[P]`). Budget exhaustion gives `Unknown`, never a wrong answer.
pub fn is_normal_kq_bruteforce(p: &CycloParams, max_degree: Option<usize>, cfg: &EnumConfig) -> BruteForceKQ {
    let max_degree = max_degree.unwrap_or(p.d());
    let lattice = generator_lattice(p);
    let walker = walker_in_zq(p, &lattice);
    let vertices = p.vertices();
    let mut level: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    level.insert(vec![BigInt::zero(); p.d() + 1]);
    let mut spent: u64 = 0;
    let unknown = |k: usize| BruteForceKQ {
        normal: Tristate::Unknown,
        witness: None,
        checked_degree: k.saturating_sub(1),
    };
    for k in 1..=max_degree {
        let mut next = BTreeSet::new();
        for q in &level {
            for v in &vertices {
                next.insert(q.iter().zip(v).map(|(a, b)| a + b).collect::<Vec<_>>());
            }
        }
        spent += next.len() as u64;
        if spent > cfg.budget {
            return unknown(k);
        }
        level = next;
        let left = EnumConfig {
            budget: cfg.budget - spent,
        };
        let points = match walker.points(k as u64, false, &left) {
            Ok(pts) => pts,
            Err(_) => return unknown(k),
        };
        spent += points.len() as u64;
        if let Some(z) = points.into_iter().find(|z| !level.contains(&z.coords)) {
            return BruteForceKQ {
                normal: Tristate::No,
                witness: Some(z),
                checked_degree: k,
            };
        }
    }
    BruteForceKQ {
        normal: if max_degree >= p.d() { Tristate::Yes } else { Tristate::Unknown },
        witness: None,
        checked_degree: max_degree,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KqCase {
    SimplexRegular,
    CurveD1,
    PrincipalD2,
    General,
}

impl KqCase {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::SimplexRegular => "simplex_regular",
            Self::CurveD1 => "curve_d1",
            Self::PrincipalD2 => "principal_d2",
            Self::General => "general",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KqEvidence {
    Regularity,
    EqualSpacing,
    KernelBinomial,
    DivisibilityWitness { s: usize },
    BruteforceWitness { z: LatticePoint },
    /// Brute force found no gap up to the sufficient degree.
    BruteforceExhaustive { max_degree: usize },
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingReportKQ {
    pub params: CycloParams,
    pub case: KqCase,
    pub normal: Tristate,
    pub complete_intersection: bool,
    pub evidence: KqEvidence,
    #[serde(with = "crate::json::opt_int_vec")]
    pub kernel: Option<Vec<BigInt>>,
    pub binomial: Option<KernelBinomial>,
    #[serde(with = "crate::json::int")]
    pub lattice_index: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KqOptions {
    pub use_bruteforce: bool,
    pub max_degree: Option<usize>,
    pub enumeration: EnumConfig,
}

impl Default for KqOptions {
    fn default() -> Self {
        Self {
            use_bruteforce: true,
            max_degree: None,
            enumeration: EnumConfig::default(),
        }
    }
}

pub fn classify_kq(p: &CycloParams, opts: &KqOptions) -> Result<RingReportKQ> {
    let (d, n) = (p.d(), p.n());
    let mut report = RingReportKQ {
        params: p.clone(),
        case: KqCase::General,
        normal: Tristate::Unknown,
        complete_intersection: n == d + 2,
        evidence: KqEvidence::None,
        kernel: None,
        binomial: None,
        lattice_index: generator_lattice(p).index_in_ambient,
    };
    if n == d + 2 {
        let kb = kernel_binomial(p)?;
        report.kernel = Some(kb.c.clone());
        report.binomial = Some(kb);
    }
    if n == d + 1 {
        report.case = KqCase::SimplexRegular;
        report.normal = Tristate::Yes;
        report.evidence = KqEvidence::Regularity;
    } else if d == 1 {
        let g = p.gaps();
        report.case = KqCase::CurveD1;
        report.normal = if g.iter().all(|x| x == &g[0]) { Tristate::Yes } else { Tristate::No };
        report.evidence = KqEvidence::EqualSpacing;
    } else if n == d + 2 {
        report.case = KqCase::PrincipalD2;
        let kb = report.binomial.as_ref().unwrap();
        if !kb.u_squarefree && !kb.v_squarefree {
            report.normal = Tristate::No;
            report.evidence = KqEvidence::KernelBinomial;
        }
    } else if let Some(s) = divisibility_test(p)? {
        report.normal = Tristate::No;
        report.evidence = KqEvidence::DivisibilityWitness { s };
    } else if opts.use_bruteforce {
        let bf = is_normal_kq_bruteforce(p, opts.max_degree, &opts.enumeration);
        report.normal = bf.normal;
        report.evidence = match (bf.normal, bf.witness) {
            (Tristate::No, Some(z)) => KqEvidence::BruteforceWitness { z },
            (Tristate::Yes, _) => KqEvidence::BruteforceExhaustive {
                max_degree: bf.checked_degree,
            },
            _ => KqEvidence::None,
        };
    }
    Ok(report)
}

/// Facet support form normalized on `ZQ` rather than `Z^{d+1}`:
/// `σ = normal / divisor` takes the value 1 somewhere on `ZQ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZqSupportForm {
    pub facet_indices: Vec<usize>,
    #[serde(with = "crate::json::int_vec")]
    pub normal: Vec<BigInt>,
    #[serde(with = "crate::json::int")]
    pub divisor: BigInt,
}

impl ZqSupportForm {
    /// Exact on `ZQ`; panics off the lattice.
    pub fn value_on(&self, x: &[BigInt]) -> BigInt {
        let (q, r) = dot(&self.normal, x).div_rem(&self.divisor);
        assert!(r.is_zero(), "point is outside ZQ");
        q
    }
}

pub fn zq_support_form(w: &[usize], p: &CycloParams) -> Result<ZqSupportForm> {
    let h = facet_hyperplane(w, p)?;
    let lattice = generator_lattice(p);
    let values: Vec<BigInt> = lattice.hnf_basis.iter().map(|b| dot(&h.normal, b)).collect();
    Ok(ZqSupportForm {
        facet_indices: h.facet_indices.unwrap(),
        normal: h.normal,
        divisor: gcd_all(&values),
    })
}

/// `MomentMatrix · c`, for checking kernel vectors.
pub fn moment_times(p: &CycloParams, c: &[BigInt]) -> Vec<BigInt> {
    moment_matrix(p).matrix().mul_vec(c)
}
