//! Classification of single instances and of whole parameter families, with
//! findings aggregation and JSONL/CSV rendering.

use crate::error::{Error, Result};
use crate::kp::{classify_kp, KpOptions, RingReportKP};
use crate::kq::{classify_kq, KqOptions, RingReportKQ, Tristate};
use crate::lattice::EnumConfig;
use crate::params::CycloParams;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FindingKind {
    TheoremOracleDiscrepancy,
    WitnessVerificationFailure,
    Conjecture45UnknownInstance,
    Conjecture48CiInstance,
}

impl FindingKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::TheoremOracleDiscrepancy => "theorem_oracle_discrepancy",
            Self::WitnessVerificationFailure => "witness_verification_failure",
            Self::Conjecture45UnknownInstance => "conjecture45_unknown_instance",
            Self::Conjecture48CiInstance => "conjecture48_ci_instance",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub kind: FindingKind,
    pub params: CycloParams,
    pub details: String,
    pub evidence: serde_json::Value,
}

/// Findings implied by the reports of one instance.
pub fn findings_for(p: &CycloParams, kp: Option<&RingReportKP>, kq: Option<&RingReportKQ>) -> Vec<Finding> {
    let mut out = Vec::new();
    let mut push = |kind, details: String, evidence| {
        out.push(Finding {
            kind,
            params: p.clone(),
            details,
            evidence,
        })
    };
    if let Some(r) = kp {
        if r.theorem_oracle_conflict() {
            let o = r.gorenstein_oracle.as_ref().unwrap();
            let scope = if p.d() == 1 {
                "segment outside the closed form's stated range"
            } else if r.gorenstein_witnesses.as_ref().is_some_and(|w| w.oracle_needed) {
                "branch settled without explicit witnesses"
            } else {
                "closed form and oracle disagree"
            };
            push(
                FindingKind::TheoremOracleDiscrepancy,
                format!(
                    "{scope}: gorenstein_theorem={}, oracle={}",
                    r.gorenstein_theorem,
                    o.status.as_str()
                ),
                json!({
                    "gorenstein_theorem": r.gorenstein_theorem,
                    "oracle": o,
                    "normal": r.normal,
                    "h_star": r.h_star,
                    "interior_k1": r.interior_k1,
                }),
            );
        }
        if r.witness_failure() {
            push(
                FindingKind::WitnessVerificationFailure,
                "explicit interior witness is not strictly interior".into(),
                json!({ "witnesses": r.gorenstein_witnesses }),
            );
        }
        if !r.r1 {
            push(
                FindingKind::WitnessVerificationFailure,
                "(R1) certificate failed".into(),
                json!({ "r1_failures": r.r1_failures }),
            );
        }
    }
    if let Some(r) = kq {
        let (d, n) = (p.d(), p.n());
        if n >= d + 3 && r.normal == Tristate::Unknown {
            push(
                FindingKind::Conjecture45UnknownInstance,
                "normality of K[Q] left open by the divisibility test and brute force".into(),
                json!({ "evidence": r.evidence }),
            );
        }
        if d >= 2 && n > d + 2 && r.normal == Tristate::Yes {
            push(
                FindingKind::Conjecture48CiInstance,
                "K[Q] certified normal, hence Cohen-Macaulay".into(),
                json!({ "evidence": r.evidence }),
            );
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rings {
    pub kp: bool,
    pub kq: bool,
}

impl Rings {
    pub const BOTH: Rings = Rings { kp: true, kq: true };
    pub const KP: Rings = Rings { kp: true, kq: false };
    pub const KQ: Rings = Rings { kp: false, kq: true };
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub rings: Rings,
    pub oracle: bool,
    pub max_degree: Option<usize>,
    pub budget: u64,
    pub bruteforce: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            rings: Rings::BOTH,
            oracle: true,
            max_degree: None,
            budget: EnumConfig::default().budget,
            bruteforce: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordStatus {
    Ok,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub schema: u32,
    pub params: CycloParams,
    #[serde(with = "crate::json::int_vec")]
    pub gaps: Vec<BigInt>,
    pub status: RecordStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kp: Option<RingReportKP>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kq: Option<RingReportKQ>,
    pub findings: Vec<Finding>,
}

impl ScanRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

/// Classifies one instance; budget exhaustion is returned as an error.
pub fn classify_instance(p: &CycloParams, opts: &ClassifyOptions) -> Result<ScanRecord> {
    let enumeration = EnumConfig { budget: opts.budget };
    let kp = if opts.rings.kp {
        Some(classify_kp(
            p,
            &KpOptions {
                max_degree: opts.max_degree,
                oracle: opts.oracle,
                enumeration,
            },
        )?)
    } else {
        None
    };
    let kq = if opts.rings.kq {
        Some(classify_kq(
            p,
            &KqOptions {
                use_bruteforce: opts.bruteforce,
                max_degree: opts.max_degree,
                enumeration,
            },
        )?)
    } else {
        None
    };
    let findings = findings_for(p, kp.as_ref(), kq.as_ref());
    Ok(ScanRecord {
        schema: SCHEMA_VERSION,
        params: p.clone(),
        gaps: p.gaps(),
        status: RecordStatus::Ok,
        reason: None,
        kp,
        kq,
        findings,
    })
}

/// Absolute bounds on `n`, or bounds relative to `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NRange {
    Absolute(usize, usize),
    /// `n` from `d + lo` to `d + hi`.
    Offset(usize, usize),
}

impl NRange {
    pub fn bounds(self, d: usize) -> (usize, usize) {
        let (lo, hi) = match self {
            NRange::Absolute(lo, hi) => (lo, hi),
            NRange::Offset(lo, hi) => (d + lo, d + hi),
        };
        (lo.max(d + 1), hi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanSpec {
    pub d_range: (usize, usize),
    pub n_range: NRange,
    pub max_gap: u64,
    pub classify: ClassifyOptions,
}

impl ScanSpec {
    pub fn validate(&self) -> Result<()> {
        let (dl, dh) = self.d_range;
        if dl == 0 || dl > dh {
            return Err(Error::InvalidArgument(format!("empty or invalid d range {dl}..{dh}")));
        }
        let (nl, nh) = match self.n_range {
            NRange::Absolute(a, b) | NRange::Offset(a, b) => (a, b),
        };
        if nl > nh {
            return Err(Error::InvalidArgument(format!("empty n range {nl}..{nh}")));
        }
        if self.max_gap == 0 {
            return Err(Error::InvalidArgument("max gap must be at least 1".into()));
        }
        Ok(())
    }

    /// Canonical instances (`tau_1 = 0`, gap tuple no larger than its
    /// reverse) in `(d, n, gaps)` lexicographic order.
    pub fn instances(&self) -> Vec<CycloParams> {
        let mut out = Vec::new();
        for d in self.d_range.0..=self.d_range.1 {
            let (lo, hi) = self.n_range.bounds(d);
            for n in lo..=hi {
                for gaps in gap_tuples(n - 1, self.max_gap) {
                    let rev: Vec<u64> = gaps.iter().rev().copied().collect();
                    if gaps <= rev {
                        let g: Vec<BigInt> = gaps.iter().map(|&x| BigInt::from(x)).collect();
                        out.push(CycloParams::from_gaps(d, &g).expect("positive gaps"));
                    }
                }
            }
        }
        out
    }
}

fn gap_tuples(len: usize, max_gap: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=max_gap).map(move |g| {
                    let mut v = prefix.clone();
                    v.push(g);
                    v
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub schema: u32,
    pub instances: usize,
    pub ok: usize,
    pub skipped: usize,
    pub counts: BTreeMap<String, usize>,
    pub findings: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanOutput {
    pub records: Vec<ScanRecord>,
    pub summary: ScanSummary,
}

impl ScanOutput {
    pub fn jsonl(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            s.push_str(&r.to_json_line());
            s.push('\n');
        }
        s
    }

    pub fn findings(&self) -> Vec<&Finding> {
        self.records.iter().flat_map(|r| &r.findings).collect()
    }

    pub fn findings_jsonl(&self) -> String {
        let mut s = String::new();
        for f in self.findings() {
            s.push_str(&serde_json::to_string(f).expect("findings serialize"));
            s.push('\n');
        }
        s
    }

    pub fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "d",
            "n",
            "gaps",
            "normal",
            "cm",
            "gorenstein_theorem",
            "gorenstein_oracle",
            "kq_case",
            "kq_normal",
            "findings_count",
        ])
        .expect("in-memory csv");
        for r in &self.records {
            let gaps = r.gaps.iter().map(ToString::to_string).collect::<Vec<_>>().join("-");
            let kp = r.kp.as_ref();
            let flag = |f: fn(&RingReportKP) -> bool| kp.map(|k| f(k).to_string()).unwrap_or_default();
            let oracle = kp
                .and_then(|k| k.gorenstein_oracle.as_ref())
                .map(|o| o.status.as_str().to_string())
                .unwrap_or_default();
            let (case, normal) = r
                .kq
                .as_ref()
                .map(|q| (q.case.as_str().to_string(), tristate_str(q.normal).to_string()))
                .unwrap_or_default();
            w.write_record([
                r.params.d().to_string(),
                r.params.n().to_string(),
                gaps,
                flag(|k| k.normal),
                flag(|k| k.cohen_macaulay),
                flag(|k| k.gorenstein_theorem),
                oracle,
                case,
                normal,
                r.findings.len().to_string(),
            ])
            .expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
    }
}

pub fn tristate_str(t: Tristate) -> &'static str {
    match t {
        Tristate::Yes => "yes",
        Tristate::No => "no",
        Tristate::Unknown => "unknown",
    }
}

fn scan_one(p: &CycloParams, opts: &ClassifyOptions) -> ScanRecord {
    classify_instance(p, opts).unwrap_or_else(|e| ScanRecord {
        schema: SCHEMA_VERSION,
        params: p.clone(),
        gaps: p.gaps(),
        status: RecordStatus::Skipped,
        reason: Some(e.to_string()),
        kp: None,
        kq: None,
        findings: Vec::new(),
    })
}

fn summarize(records: &[ScanRecord]) -> ScanSummary {
    let mut s = ScanSummary {
        schema: SCHEMA_VERSION,
        instances: records.len(),
        ..Default::default()
    };
    let bump = |m: &mut BTreeMap<String, usize>, key: String| *m.entry(key).or_default() += 1;
    for r in records {
        match r.status {
            RecordStatus::Ok => s.ok += 1,
            RecordStatus::Skipped => s.skipped += 1,
        }
        if let Some(k) = &r.kp {
            bump(&mut s.counts, format!("kp_normal_{}", k.normal));
            bump(&mut s.counts, format!("gorenstein_theorem_{}", k.gorenstein_theorem));
            if let Some(o) = &k.gorenstein_oracle {
                bump(&mut s.counts, format!("gorenstein_oracle_{}", o.status.as_str()));
            }
            if k.r1 {
                bump(&mut s.counts, "r1_true".into());
            }
        }
        if let Some(q) = &r.kq {
            bump(&mut s.counts, format!("kq_normal_{}", tristate_str(q.normal)));
            bump(&mut s.counts, format!("kq_case_{}", q.case.as_str()));
        }
        for f in &r.findings {
            bump(&mut s.findings, f.kind.as_str().to_string());
        }
    }
    s
}

/// Runs the scan on `threads` workers (0 means machine parallelism). The
/// record order depends only on the spec.
pub fn run_scan(spec: &ScanSpec, threads: usize) -> Result<ScanOutput> {
    spec.validate()?;
    let instances = spec.instances();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let records: Vec<ScanRecord> =
        pool.install(|| instances.par_iter().map(|p| scan_one(p, &spec.classify)).collect());
    let summary = summarize(&records);
    Ok(ScanOutput { records, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(d: (usize, usize), n: NRange, max_gap: u64, rings: Rings) -> ScanSpec {
        ScanSpec {
            d_range: d,
            n_range: n,
            max_gap,
            classify: ClassifyOptions {
                rings,
                ..Default::default()
            },
        }
    }

    #[test]
    fn canonical_instances() {
        let s = spec((2, 2), NRange::Absolute(3, 3), 2, Rings::KP);
        let gaps: Vec<Vec<BigInt>> = s.instances().iter().map(CycloParams::gaps).collect();
        assert_eq!(gaps, vec![crate::arith::big(&[1, 1]), crate::arith::big(&[1, 2]), crate::arith::big(&[2, 2])]);
    }

    #[test]
    fn small_scan() {
        let out = run_scan(&spec((2, 2), NRange::Absolute(3, 3), 2, Rings::KP), 2).unwrap();
        let theorem: Vec<bool> = out
            .records
            .iter()
            .map(|r| r.kp.as_ref().unwrap().gorenstein_theorem)
            .collect();
        assert_eq!(theorem, vec![false, true, false]);
        assert_eq!(out.csv().lines().count(), 4);
    }

    #[test]
    fn budget_skips() {
        let mut s = spec((2, 2), NRange::Absolute(3, 3), 1, Rings::KP);
        s.classify.budget = 1;
        let out = run_scan(&s, 1).unwrap();
        assert_eq!(out.records[0].status, RecordStatus::Skipped);
        assert_eq!(out.summary.skipped, 1);
    }

    #[test]
    fn offsets() {
        assert_eq!(NRange::Offset(2, 2).bounds(3), (5, 5));
        assert_eq!(NRange::Absolute(1, 4).bounds(2), (3, 4));
    }
}
