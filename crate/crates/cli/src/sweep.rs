//! Parameter sweeps with a persisted, idempotent result store. Cells are
//! independent; the store is merged and sorted canonically before flushing,
//! so reruns and different parallelism widths produce identical bytes.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use brauerkit::error::{Error, Result};
use brauerkit::json::{locality_from_json, locality_to_json, verdict_to_json, LocalityJson, VerdictJson};
use brauerkit::obstruction::{build_subspace_system, divisibility_obstruction, BrauerScenario};
use brauerkit::ring::Locality;
use brauerkit::Verdict;

use crate::reports::{emit, verify_cell_verdict, OutputOptions};
use crate::SweepArgs;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TSpec {
    List(Vec<usize>),
    Rule(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ESpec {
    List(Vec<u64>),
    Rule(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    pub g: Vec<usize>,
    /// Explicit list or the rule "g-1".
    pub t: TSpec,
    pub n: Vec<u64>,
    /// Explicit degrees or the rule "powers" (n^(t-1) and n^t per cell);
    /// defaults to "powers".
    #[serde(default)]
    pub e: Option<ESpec>,
    /// Localities to run; defaults to ["global"].
    #[serde(default)]
    pub locality: Option<Vec<LocalityJson>>,
    /// Store path (JSON lines, sorted canonically).
    pub out: String,
    /// Worker threads; defaults to one.
    #[serde(default)]
    pub width: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRecord {
    pub command: String,
    pub key: String,
    pub g: usize,
    pub t: usize,
    pub n: u64,
    pub e: u64,
    pub locality: LocalityJson,
    /// "obstructed" | "solvable" | "skipped".
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<String>,
    /// What the prime-power sharpness statement predicts for this cell, when
    /// it applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_prediction: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictJson>,
}

fn fnv1a64(data: &str) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for byte in data.as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

fn locality_tag(l: &Locality) -> String {
    match l {
        Locality::Global => "global".into(),
        Locality::LocalAt(ell) => format!("local-{ell}"),
    }
}

fn cell_key(g: usize, t: usize, n: u64, e: u64, locality: &Locality) -> String {
    format!("{:016x}", fnv1a64(&format!("{g}/{t}/{n}/{e}/{}", locality_tag(locality))))
}

fn factorial(k: u64) -> u64 {
    (2..=k).product::<u64>().max(1)
}

struct Cell {
    g: usize,
    t: usize,
    n: u64,
    e: u64,
    locality: Locality,
}

fn run_cell(cell: &Cell) -> SweepRecord {
    let Cell { g, t, n, e, locality } = *cell;
    let key = cell_key(g, t, n, e, &locality);
    let base = SweepRecord {
        command: "sweep-record".into(),
        key,
        g,
        t,
        n,
        e,
        locality: locality_to_json(locality),
        status: String::new(),
        violation: None,
        skip_reason: None,
        predicted: None,
        matches_prediction: None,
        verdict: None,
    };
    let skip = |reason: String| SweepRecord {
        status: "skipped".into(),
        skip_reason: Some(reason),
        ..base.clone()
    };
    if t == 0 || t >= g {
        return skip(format!("t={t} outside 1..g-1"));
    }
    if e == 0 {
        return skip("e must be positive".into());
    }
    let scenario = match BrauerScenario::standard(g, t, n, locality) {
        Ok(s) => s,
        Err(err) => return skip(err.to_string()),
    };
    let system = match build_subspace_system(&scenario, e) {
        Ok(s) => s,
        Err(err) => return skip(err.to_string()),
    };
    let verdict = match divisibility_obstruction(&scenario, e) {
        Ok(v) => v,
        Err(err) => return skip(err.to_string()),
    };
    let predicted = if e == n.pow(t as u32 - 1) && factorial(t as u64 - 1) % n != 0 {
        Some("obstructed".to_string())
    } else if e == n.pow(t as u32) {
        Some("solvable".to_string())
    } else {
        None
    };
    let status = verdict.variant_name().to_string();
    let matches_prediction = predicted.as_ref().map(|p| p == &status);
    let violation = match &verdict {
        Verdict::Obstructed { violation, .. } => {
            Some(brauerkit::arith::format_rational(violation))
        }
        Verdict::Solvable { .. } => None,
    };
    SweepRecord {
        status,
        violation,
        predicted,
        matches_prediction,
        verdict: Some(verdict_to_json(&verdict, &system.labels().cols)),
        ..base
    }
}

pub fn verify_record(value: &serde_json::Value) -> Result<()> {
    let record: SweepRecord = serde_json::from_value(value.clone())
        .map_err(|e| Error::Input(format!("bad sweep record: {e}")))?;
    if record.status == "skipped" {
        return Ok(());
    }
    let locality = locality_from_json(&record.locality)?;
    let verdict = record
        .verdict
        .as_ref()
        .ok_or_else(|| Error::Internal("decided sweep record lacks its verdict".into()))?;
    verify_cell_verdict(record.g, record.t, record.n, record.e, locality, verdict)
}

pub fn cmd_sweep(args: SweepArgs, output: &OutputOptions) -> Result<()> {
    let path = args
        .spec
        .ok_or_else(|| Error::Input("missing required flag --spec".into()))?;
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::Input(format!("cannot read {path}: {e}")))?;
    let spec: SweepSpec =
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("bad sweep spec: {e}")))?;

    let localities: Vec<Locality> = match &spec.locality {
        None => vec![Locality::Global],
        Some(list) => list
            .iter()
            .map(locality_from_json)
            .collect::<Result<Vec<_>>>()?,
    };
    let mut cells: Vec<Cell> = Vec::new();
    for &g in &spec.g {
        let ts: Vec<usize> = match &spec.t {
            TSpec::List(list) => list.clone(),
            TSpec::Rule(rule) if rule == "g-1" => vec![g.saturating_sub(1)],
            TSpec::Rule(rule) => {
                return Err(Error::Input(format!("unknown t rule {rule:?}")));
            }
        };
        for &t in &ts {
            for &n in &spec.n {
                let es: Vec<u64> = match &spec.e {
                    None => power_degrees(n, t),
                    Some(ESpec::Rule(rule)) if rule == "powers" => power_degrees(n, t),
                    Some(ESpec::Rule(rule)) => {
                        return Err(Error::Input(format!("unknown e rule {rule:?}")));
                    }
                    Some(ESpec::List(list)) => list.clone(),
                };
                for &e in &es {
                    for &locality in &localities {
                        cells.push(Cell { g, t, n, e, locality });
                    }
                }
            }
        }
    }

    let width = spec.width.unwrap_or(1).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(width)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let records: Vec<SweepRecord> = pool.install(|| cells.par_iter().map(run_cell).collect());

    // Merge with any existing store: identical keys replaced, never
    // duplicated; flush sorted by parameters.
    let mut by_key: BTreeMap<(usize, usize, u64, u64, String, String), SweepRecord> =
        BTreeMap::new();
    if let Ok(existing) = std::fs::read_to_string(&spec.out) {
        for line in existing.lines().filter(|l| !l.trim().is_empty()) {
            if let Ok(record) = serde_json::from_str::<SweepRecord>(line) {
                by_key.insert(sort_key(&record), record);
            }
        }
    }
    for record in records {
        by_key.insert(sort_key(&record), record);
    }
    let mut lines = String::new();
    for record in by_key.values() {
        lines.push_str(
            &serde_json::to_string(record)
                .map_err(|e| Error::Internal(format!("serialize record: {e}")))?,
        );
        lines.push('\n');
    }
    std::fs::write(&spec.out, lines)
        .map_err(|e| Error::Input(format!("cannot write {}: {e}", spec.out)))?;

    let total = by_key.len();
    let count = |status: &str| by_key.values().filter(|r| r.status == status).count();
    let mismatches = by_key
        .values()
        .filter(|r| r.matches_prediction == Some(false))
        .count();
    #[derive(Serialize)]
    struct SweepSummary {
        command: String,
        store: String,
        total: usize,
        obstructed: usize,
        solvable: usize,
        skipped: usize,
        prediction_mismatches: usize,
    }
    let summary_report = SweepSummary {
        command: "sweep".into(),
        store: spec.out.clone(),
        total,
        obstructed: count("obstructed"),
        solvable: count("solvable"),
        skipped: count("skipped"),
        prediction_mismatches: mismatches,
    };
    let summary = vec![
        format!(
            "sweep: {total} record(s) -> {} ({} obstructed, {} solvable, {} skipped)",
            spec.out,
            summary_report.obstructed,
            summary_report.solvable,
            summary_report.skipped
        ),
        format!("  prediction mismatches: {mismatches}"),
    ];
    emit(&summary_report, &summary, output)
}

fn power_degrees(n: u64, t: usize) -> Vec<u64> {
    let mut out = vec![n.pow(t as u32)];
    if t >= 1 {
        out.insert(0, n.pow(t as u32 - 1));
    }
    out.dedup();
    out
}

fn sort_key(record: &SweepRecord) -> (usize, usize, u64, u64, String, String) {
    let locality = match &record.locality {
        LocalityJson::Name(s) => s.clone(),
        LocalityJson::Local { ell } => format!("local-{ell}"),
    };
    (record.g, record.t, record.n, record.e, locality, record.key.clone())
}
