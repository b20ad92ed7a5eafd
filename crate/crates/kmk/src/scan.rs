//! Positivity scans: run the sign-alternation check over selections of
//! pairs, with the pullback route as a verifying shadow and the x-variable
//! round trip asserted on every entry.
//!
//! Failures are report data, never exceptions: a counterexample would be
//! the most important output of a scan, so the scan always completes and
//! the caller decides what a failure means (the command line maps it to
//! exit code 2). Entries merge deterministically ordered by
//! (l(u), u, l(v), v, l(w), w) regardless of the parallel execution order.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Deserialize;

use crate::bruhat::{enumerate_interval, DEFAULT_ELEMENT_CAP};
use crate::engine::{ConstantTable, PhiTable};
use crate::error::{Error, Result};
use crate::parabolic::{
    parabolic_constants_cosets, parabolic_constants_pullback, required_borel_bound,
};
use crate::root_datum::{build_realization, RootDatum};
use crate::weyl::WeylElement;
use crate::xpoly::{back_substitute, sign_verdict, to_x_polynomial, SignVerdict, XPolynomial};

/// Pair selection for one job.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairSelection {
    All,
    Explicit(Vec<(String, String)>),
}

/// One scan job: a root system, a parabolic subset, a length cap, and the
/// pairs to run.
#[derive(Debug, Clone)]
pub struct ScanJob {
    pub gcm_spec: String,
    /// Node labels of the parabolic subset.
    pub parabolic: Vec<String>,
    pub max_length: usize,
    pub pairs: PairSelection,
    /// Pullback shadow; `None` means automatic (on up to length cap 6).
    pub shadow: Option<bool>,
    pub element_cap: usize,
}

impl ScanJob {
    pub fn new(gcm_spec: &str, parabolic_labels: &[&str], max_length: usize) -> ScanJob {
        ScanJob {
            gcm_spec: gcm_spec.to_string(),
            parabolic: parabolic_labels.iter().map(|s| s.to_string()).collect(),
            max_length,
            pairs: PairSelection::All,
            shadow: None,
            element_cap: DEFAULT_ELEMENT_CAP,
        }
    }

    pub fn shadow_enabled(&self) -> bool {
        self.shadow.unwrap_or(self.max_length <= 6)
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub jobs: Vec<ScanJob>,
}

// Raw TOML shapes kept separate from the working types.
#[derive(Deserialize)]
struct RawConfig {
    version: Option<u32>,
    #[serde(default)]
    job: Vec<RawJob>,
}

#[derive(Deserialize)]
struct RawJob {
    #[serde(rename = "type")]
    gcm_spec: String,
    #[serde(default)]
    parabolic: Vec<toml::Value>,
    max_length: usize,
    pairs: Option<Vec<Vec<String>>>,
    shadow: Option<bool>,
    element_cap: Option<usize>,
}

/// Parses a scan configuration from TOML text.
pub fn parse_config(text: &str) -> Result<ScanConfig> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| Error::Parse(format!("bad scan config: {e}")))?;
    if let Some(v) = raw.version {
        if v != 1 {
            return Err(Error::Parse(format!("unsupported config version {v}")));
        }
    }
    if raw.job.is_empty() {
        return Err(Error::Parse("config declares no jobs".into()));
    }
    let mut jobs = Vec::new();
    for rj in raw.job {
        let parabolic = rj
            .parabolic
            .iter()
            .map(|v| match v {
                toml::Value::String(s) => Ok(s.clone()),
                toml::Value::Integer(i) => Ok(i.to_string()),
                _ => Err(Error::Parse("parabolic entries must be labels".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        let pairs = match rj.pairs {
            None => PairSelection::All,
            Some(list) => {
                let mut out = Vec::new();
                for p in list {
                    if p.len() != 2 {
                        return Err(Error::Parse("each pair needs two words".into()));
                    }
                    out.push((p[0].clone(), p[1].clone()));
                }
                PairSelection::Explicit(out)
            }
        };
        jobs.push(ScanJob {
            gcm_spec: rj.gcm_spec,
            parabolic,
            max_length: rj.max_length,
            pairs,
            shadow: rj.shadow,
            element_cap: rj.element_cap.unwrap_or(DEFAULT_ELEMENT_CAP),
        });
    }
    Ok(ScanConfig { jobs })
}

/// Verdict and expansion data for one (u, v, w) entry.
#[derive(Debug, Clone)]
pub struct EntryReport {
    pub u: WeylElement,
    pub v: WeylElement,
    pub w: WeylElement,
    pub d_rt: crate::rt::RTElement,
    pub d_x: XPolynomial,
    pub parity: usize,
    pub verdict: SignVerdict,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

/// Results of one job.
#[derive(Debug, Clone)]
pub struct JobReport {
    pub job: ScanJob,
    pub pair_count: usize,
    pub entries: Vec<EntryReport>,
    pub route_mismatches: Vec<String>,
    /// Wall time of the job; excluded from serialized data sections.
    pub elapsed: std::time::Duration,
    pub interval_size: usize,
}

impl JobReport {
    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| !e.passed()).count() + self.route_mismatches.len()
    }
}

#[derive(Debug, Clone)]
pub struct ScanReport {
    pub jobs: Vec<JobReport>,
}

impl ScanReport {
    pub fn total_entries(&self) -> usize {
        self.jobs.iter().map(|j| j.entries.len()).sum()
    }

    pub fn total_failures(&self) -> usize {
        self.jobs.iter().map(|j| j.failures()).sum()
    }

    pub fn all_pass(&self) -> bool {
        self.total_failures() == 0
    }
}

/// Turns a constant table into verdict entries: expand, round-trip, check
/// the bookkeeping sign identity, and test the sign. Exposed so harness
/// tests can corrupt a table and watch the verdict fail.
pub fn verdict_entries(rd: &RootDatum, table: &ConstantTable) -> Result<Vec<EntryReport>> {
    let n = rd.rank();
    let mut out = Vec::new();
    for (w, d) in &table.entries {
        let xp = to_x_polynomial(d, n)?;
        if &back_substitute(&xp, n) != d {
            return Err(Error::NonClearingEntry(format!(
                "x-variable round trip failed at {}",
                w.display(rd)
            )));
        }
        let parity = table.u.length() + table.v.length() + w.length();
        let verdict = sign_verdict(&xp, parity);
        debug_assert!(bookkeeping_consistent(&xp, parity, &verdict));
        out.push(EntryReport {
            u: table.u.clone(),
            v: table.v.clone(),
            w: w.clone(),
            d_rt: d.clone(),
            d_x: xp,
            parity,
            verdict,
        });
    }
    Ok(out)
}

/// The offset-coefficient identity: with c(j) = (-1)^{|j|} d(j), the sign
/// pattern (-1)^{|j| + l(w) - l(u) - l(v)} c(j) >= 0 is the same test as
/// the verdict on d.
fn bookkeeping_consistent(xp: &XPolynomial, parity: usize, verdict: &SignVerdict) -> bool {
    let mut all_nonneg = true;
    for (j, d) in xp.terms() {
        let weight: u32 = j.iter().sum();
        let c = if weight % 2 == 1 { -d.clone() } else { d.clone() };
        let sign_exp = (weight as usize + parity) % 2;
        let signed = if sign_exp == 1 { -c } else { c };
        if signed < BigInt::zero() {
            all_nonneg = false;
        }
    }
    all_nonneg == verdict.passed()
}

fn scan_job(job: &ScanJob) -> Result<JobReport> {
    let start = std::time::Instant::now();
    let gcm = crate::gcm::parse_gcm_spec(&job.gcm_spec)?;
    let rd = build_realization(gcm);
    let mut y = Vec::new();
    for label in &job.parabolic {
        let Some(idx) = rd.gcm().index_of_label(label) else {
            return Err(Error::Usage(format!("unknown node label {label:?}")));
        };
        y.push(idx);
    }
    y.sort_unstable();
    y.dedup();
    crate::root_datum::parabolic_type(&rd, &y)?;

    let widened = required_borel_bound(&rd, &y, job.max_length, job.element_cap)?;
    let table = PhiTable::build(&rd, widened, job.element_cap)?;
    let quotient = enumerate_interval(&rd, job.max_length, Some(&y), job.element_cap)?;

    let pairs: Vec<(WeylElement, WeylElement)> = match &job.pairs {
        PairSelection::All => {
            let mut out = Vec::new();
            for u in quotient.elements() {
                for v in quotient.elements() {
                    out.push((u.clone(), v.clone()));
                }
            }
            out
        }
        PairSelection::Explicit(list) => {
            let mut out = Vec::new();
            for (us, vs) in list {
                out.push((rd.parse_word(us)?, rd.parse_word(vs)?));
            }
            out
        }
    };

    let shadow = job.shadow_enabled();
    let results: Vec<Result<(Vec<EntryReport>, Option<String>)>> = pairs
        .par_iter()
        .map(|(u, v)| {
            let primary = parabolic_constants_cosets(&table, &y, u, v, job.max_length)?;
            let mismatch = if shadow {
                let check = parabolic_constants_pullback(&table, &y, u, v, job.max_length)?;
                if primary.agrees_with(&check) {
                    None
                } else {
                    Some(format!(
                        "route mismatch at ({}, {})",
                        u.display(&rd),
                        v.display(&rd)
                    ))
                }
            } else {
                None
            };
            let entries = verdict_entries(&rd, &primary)?;
            Ok((entries, mismatch))
        })
        .collect();

    let mut entries = Vec::new();
    let mut route_mismatches = Vec::new();
    for r in results {
        let (mut e, mismatch) = r?;
        entries.append(&mut e);
        if let Some(m) = mismatch {
            route_mismatches.push(m);
        }
    }
    entries.sort_by(|a, b| {
        (a.u.length(), a.u.word(), a.v.length(), a.v.word(), a.w.length(), a.w.word()).cmp(&(
            b.u.length(),
            b.u.word(),
            b.v.length(),
            b.v.word(),
            b.w.length(),
            b.w.word(),
        ))
    });
    route_mismatches.sort();

    Ok(JobReport {
        job: job.clone(),
        pair_count: pairs.len(),
        entries,
        route_mismatches,
        elapsed: start.elapsed(),
        interval_size: table.interval().len(),
    })
}

/// Runs every job of a configuration; failures land in the report.
pub fn positivity_scan(cfg: &ScanConfig) -> Result<ScanReport> {
    let mut jobs = Vec::new();
    for job in &cfg.jobs {
        jobs.push(scan_job(job)?);
    }
    Ok(ScanReport { jobs })
}

// ---- report rendering ----

impl ScanReport {
    pub fn to_json(&self) -> serde_json::Value {
        let jobs: Vec<serde_json::Value> = self.jobs.iter().map(job_json).collect();
        serde_json::json!({
            "version": crate::engine::SCHEMA_VERSION,
            "jobs": jobs,
            "summary": {
                "entries": self.total_entries(),
                "failures": self.total_failures(),
                "pass": self.all_pass(),
            },
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("type,parabolic,u,v,w,d_rt,d_x,verdict\n");
        for job in &self.jobs {
            let gcm = crate::gcm::parse_gcm_spec(&job.job.gcm_spec).expect("validated before");
            let rd = build_realization(gcm);
            for e in &job.entries {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    job.job.gcm_spec,
                    job.job.parabolic.join("+"),
                    e.u.display(&rd),
                    e.v.display(&rd),
                    e.w.display(&rd),
                    e.d_rt.display(&rd),
                    e.d_x.display(&rd),
                    if e.passed() { "pass" } else { "fail" },
                ));
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for job in &self.jobs {
            let gcm = crate::gcm::parse_gcm_spec(&job.job.gcm_spec).expect("validated before");
            let rd = build_realization(gcm);
            out.push_str(&format!(
                "scan {} parabolic={{{}}} max_length={} ({} pairs, {} entries)\n",
                job.job.gcm_spec,
                job.job.parabolic.join(","),
                job.job.max_length,
                job.pair_count,
                job.entries.len(),
            ));
            for e in &job.entries {
                out.push_str(&format!(
                    "  d[{} ; {} -> {}] = {}  |  x: {}  [{}]\n",
                    e.u.display(&rd),
                    e.v.display(&rd),
                    e.w.display(&rd),
                    e.d_rt.display(&rd),
                    e.d_x.display(&rd),
                    if e.passed() { "pass" } else { "FAIL" },
                ));
            }
            for m in &job.route_mismatches {
                out.push_str(&format!("  ROUTE MISMATCH: {m}\n"));
            }
        }
        out.push_str(&format!(
            "total: {} entries, {} failures\n",
            self.total_entries(),
            self.total_failures()
        ));
        out
    }
}

fn job_json(job: &JobReport) -> serde_json::Value {
    let gcm = crate::gcm::parse_gcm_spec(&job.job.gcm_spec).expect("validated before");
    let rd = build_realization(gcm);
    let entries: Vec<serde_json::Value> = job
        .entries
        .iter()
        .map(|e| {
            let verdict = match &e.verdict {
                SignVerdict::Pass => serde_json::json!({"pass": true}),
                SignVerdict::Fail { witness, coefficient } => serde_json::json!({
                    "pass": false,
                    "witness": witness,
                    "coefficient": coefficient.to_string(),
                }),
            };
            serde_json::json!({
                "u": e.u.display(&rd),
                "v": e.v.display(&rd),
                "w": e.w.display(&rd),
                "d_rt": e.d_rt.display(&rd),
                "d_rt_terms": e.d_rt.to_json(),
                "d_x": e.d_x.display(&rd),
                "d_x_terms": e.d_x.to_json(),
                "parity": e.parity,
                "verdict": verdict,
            })
        })
        .collect();
    serde_json::json!({
        "inputs": {
            "type": job.job.gcm_spec,
            "parabolic": job.job.parabolic,
            "max_length": job.job.max_length,
            "pairs": match &job.job.pairs {
                PairSelection::All => serde_json::Value::String("all".into()),
                PairSelection::Explicit(list) => serde_json::json!(list
                    .iter()
                    .map(|(a, b)| vec![a.clone(), b.clone()])
                    .collect::<Vec<_>>()),
            },
            "shadow": job.job.shadow_enabled(),
        },
        "entries": entries,
        "route_mismatches": job.route_mismatches,
        "summary": {
            "pairs": job.pair_count,
            "entries": job.entries.len(),
            "failures": job.failures(),
            "interval_size": job.interval_size,
        },
    })
}
