//! Exact combinatorics and toric-ring classification for lattice cyclic
//! polytopes `C_d(tau)`, the convex hull of the moment-curve points
//! `(tau_i, tau_i^2, ..., tau_i^d)` for strictly increasing integers `tau`.
//!
//! Two monoid algebras are studied: `K[P]`, generated by all lattice points
//! of `P` in degree one, and `K[Q]`, generated by the vertices alone.

pub mod arith;
pub mod bvector;
pub mod error;
pub mod face;
pub mod json;
pub mod kp;
pub mod kq;
pub mod lattice;
pub mod params;
pub mod scan;

pub use bvector::{bvec, facet_chain_basis, r1_witness, support_form, BVector, R1Witness, SupportForm};
pub use error::{Error, Result};
pub use face::{
    decompose, face_type, facet_hyperplane, facet_hyperplanes, facets, is_face, nonface_partitions,
    simplex_halfspaces, FaceType, Frame, Hyperplane, Sense, SubsetDecomposition,
};
pub use kp::{
    classify_kp, gorenstein_oracle, gorenstein_theorem, gorenstein_witnesses, is_normal_kp, member_kp,
    verify_r1, GorensteinOracle, GorensteinStatus, GorensteinWitnesses, KpOptions, Normality,
    RingReportKP,
};
pub use kq::{
    classify_kq, divisibility_test, generator_lattice, is_normal_kq_bruteforce, kernel_binomial,
    BruteForceKQ, GeneratorLattice, KernelBinomial, KqCase, KqEvidence, KqOptions, RingReportKQ,
    Tristate,
};
pub use lattice::{
    ehrhart_counts, enumerate_points, h_star, interior_count, EnumConfig, HStarVector, LatticePoint,
};
pub use params::{
    canonical_form, moment_matrix, reverse_negate, transform, translate, CycloParams, DeltaTable,
    MomentMatrix, TransformedMatrix,
};
pub use scan::{
    classify_instance, findings_for, run_scan, ClassifyOptions, Finding, FindingKind, NRange, RecordStatus,
    Rings, ScanOutput, ScanRecord, ScanSpec, ScanSummary,
};
