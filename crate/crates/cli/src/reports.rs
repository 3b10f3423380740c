//! Report assembly, printing, and offline re-verification. Every persisted
//! report embeds its scenario and verdict so `verify` can rebuild the system
//! deterministically and re-check the certificate with plain arithmetic.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use brauerkit::arith::format_rational;
use brauerkit::bounds::{cycle_exponent, UpperBoundInputs};
use brauerkit::congruence::{verify_congruence, CongruenceSystem};
use brauerkit::error::{Error, Result};
use brauerkit::json::{
    class_from_json, counterexample_report_to_json, locality_from_json, parse_standard_spec,
    sb_class_to_json, scenario_from_json, scenario_to_json, sharpness_report_to_json,
    verdict_from_json, verdict_to_json, ClassJson, CounterexampleReportJson, ScenarioJson,
    SharpnessReportJson, VerdictJson,
};
use brauerkit::obstruction::{
    build_subspace_system, kresch_check, kresch_system,
    sharp_threefold_check, sharp_threefold_system, sharpness_certificate, threefold_check,
    threefold_system, vanishing_degrees, BrauerScenario,
};
use brauerkit::ring::{standard_class, ExteriorClass, Locality, ProductRing};
use brauerkit::severi::{
    delta_class, fibral_degree, hodge_index_wrt_p, ihc_counterexample, itc_counterexample,
    tate_index_wrt_p,
};
use brauerkit::solver::verify_verdict;

use crate::{
    HodgeIndexArgs, IhcArgs, ItcArgs, KreschArgs, ObstructArgs, SharpnessArgs,
    ThreefoldArgs, UpperBoundArgs, VanishingArgs, VerifyArgs,
};

pub struct OutputOptions {
    pub json: bool,
    pub out: Option<PathBuf>,
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::Input(format!("missing required flag --{flag}")))
}

/// Resolves a class spec: "standard(t)", "@file.json", or inline JSON.
pub fn resolve_b(spec: &str, ring: &ProductRing) -> Result<ExteriorClass> {
    let spec = spec.trim();
    if spec.starts_with("standard(") {
        return standard_class(ring, parse_standard_spec(spec)?);
    }
    let text = if let Some(path) = spec.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read class file {path}: {e}")))?
    } else {
        spec.to_string()
    };
    let json: ClassJson = serde_json::from_str(&text)
        .map_err(|e| Error::Input(format!("bad class JSON: {e}")))?;
    let class = class_from_json(&json)?;
    if class.factors() != ring.factors() {
        return Err(Error::Input("class factor count disagrees with --g".into()));
    }
    Ok(class)
}

pub fn scenario_from_flags(
    g: usize,
    b_spec: &str,
    n: u64,
    ell: Option<u64>,
) -> Result<BrauerScenario> {
    let locality = match ell {
        Some(ell) => Locality::LocalAt(ell),
        None => Locality::Global,
    };
    let ring = ProductRing::new(g, locality)?;
    let b = resolve_b(b_spec, &ring)?;
    BrauerScenario::new(ring, b, n)
}

/// Writes/prints the report; the summary goes to stdout unless --json asked
/// for the full document there.
pub fn emit<T: Serialize>(report: &T, summary: &[String], output: &OutputOptions) -> Result<()> {
    let text = serde_json::to_string_pretty(report)
        .map_err(|e| Error::Internal(format!("serialize report: {e}")))?;
    if let Some(path) = &output.out {
        std::fs::write(path, format!("{text}\n"))
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    if output.json {
        println!("{text}");
    } else {
        for line in summary {
            println!("{line}");
        }
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ObstructReport {
    pub command: String,
    pub scenario: ScenarioJson,
    pub e: u64,
    pub rows: usize,
    pub cols: usize,
    pub verdict: VerdictJson,
}

pub fn cmd_obstruct(args: ObstructArgs, output: &OutputOptions) -> Result<()> {
    let g = require(args.g, "g")?;
    let b = require(args.b, "b")?;
    let n = require(args.n, "n")?;
    let e = require(args.e, "e")?;
    let scenario = scenario_from_flags(g, &b, n, args.ell)?;
    let system = build_subspace_system(&scenario, e)?;
    let verdict = brauerkit::solver::decide(&system)?;
    if !verify_verdict(&system, &verdict) {
        return Err(Error::Internal("verdict failed re-verification".into()));
    }
    let report = ObstructReport {
        command: "obstruct".into(),
        scenario: scenario_to_json(&scenario),
        e,
        rows: system.rows(),
        cols: system.cols(),
        verdict: verdict_to_json(&verdict, &system.labels().cols),
    };
    let summary = vec![
        format!(
            "obstruct: g={g} n={n} e={e} locality={} -> {}",
            scenario.locality(),
            verdict.variant_name()
        ),
        match &verdict {
            brauerkit::Verdict::Obstructed { violation, .. } => {
                format!(
                    "  certificate pairing {} is not integral; index does not divide {e}",
                    format_rational(violation)
                )
            }
            brauerkit::Verdict::Solvable { .. } => {
                format!("  witness found over {} unknowns; no obstruction at {e}", system.cols())
            }
        },
    ];
    emit(&report, &summary, output)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SharpnessEnvelope {
    pub command: String,
    pub report: SharpnessReportJson,
}

pub fn cmd_sharpness(args: SharpnessArgs, output: &OutputOptions) -> Result<()> {
    let g = require(args.g, "g")?;
    let t = require(args.t, "t")?;
    let n = require(args.n, "n")?;
    let locality = match args.ell {
        Some(ell) => Locality::LocalAt(ell),
        None => Locality::Global,
    };
    let report = sharpness_certificate(g, t, n, locality)?;
    let scenario = BrauerScenario::standard(g, t, n, locality)?;
    let system = build_subspace_system(&scenario, report.tested_degree)?;
    let json = SharpnessEnvelope {
        command: "sharpness".into(),
        report: sharpness_report_to_json(&report, &system.labels().cols),
    };
    let summary = vec![
        format!(
            "sharpness: g={g} t={t} n={n} locality={locality} tested e={}",
            report.tested_degree
        ),
        format!("  verdict: {}", report.verdict.variant_name()),
        format!("  conclusion: {}", json.report.conclusion),
    ];
    emit(&json, &summary, output)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub command: String,
    pub scenario: ScenarioJson,
    pub modulus: String,
    pub verdict: VerdictJson,
}

fn congruence_command(
    command: &str,
    scenario: &BrauerScenario,
    system: &CongruenceSystem,
    verdict: &brauerkit::Verdict,
    output: &OutputOptions,
) -> Result<()> {
    let report = CongruenceReport {
        command: command.into(),
        scenario: scenario_to_json(scenario),
        modulus: system.modulus().to_string(),
        verdict: verdict_to_json(verdict, &system.labels().cols),
    };
    let summary = vec![format!(
        "{command}: g={} n={} modulus {} -> {}",
        scenario.g(),
        scenario.n(),
        system.modulus(),
        verdict.variant_name()
    )];
    emit(&report, &summary, output)
}

pub fn cmd_kresch(args: KreschArgs, output: &OutputOptions) -> Result<()> {
    let g = require(args.g, "g")?;
    let b = require(args.b, "b")?;
    let n = args.n.unwrap_or(2);
    let scenario = scenario_from_flags(g, &b, n, None)?;
    let system = kresch_system(&scenario)?;
    let verdict = kresch_check(&scenario)?;
    congruence_command("kresch", &scenario, &system, &verdict, output)
}

pub fn cmd_threefold(args: ThreefoldArgs, output: &OutputOptions) -> Result<()> {
    let b = require(args.b, "b")?;
    let n = require(args.n, "n")?;
    let scenario = scenario_from_flags(3, &b, n, None)?;
    if args.sharp {
        let system = sharp_threefold_system(&scenario)?;
        let verdict = sharp_threefold_check(&scenario)?;
        congruence_command("threefold-sharp", &scenario, &system, &verdict, output)
    } else {
        let system = threefold_system(&scenario)?;
        let verdict = threefold_check(&scenario)?;
        congruence_command("threefold", &scenario, &system, &verdict, output)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VanishingReport {
    pub command: String,
    pub dim: usize,
    pub n: u64,
    pub lcm: String,
    pub obs: String,
}

pub fn cmd_vanishing(args: VanishingArgs, output: &OutputOptions) -> Result<()> {
    let dim = require(args.dim, "dim")?;
    let n = require(args.n, "n")?;
    let (lcm, obs) = vanishing_degrees(dim, n)?;
    let report = VanishingReport {
        command: "vanishing".into(),
        dim,
        n,
        lcm: lcm.to_string(),
        obs: obs.to_string(),
    };
    let summary = vec![format!("vanishing: dim={dim} n={n} -> lcm degree {lcm}, index form {obs}")];
    emit(&report, &summary, output)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CounterexampleEnvelope {
    pub command: String,
    pub report: CounterexampleReportJson,
}

pub fn cmd_ihc(args: IhcArgs, output: &OutputOptions) -> Result<()> {
    let g = require(args.g, "g")?;
    let n = require(args.n, "n")?;
    let report = ihc_counterexample(g, n)?;
    let scenario = BrauerScenario::standard(report.g, report.t, report.n, report.locality)?;
    let system = build_subspace_system(&scenario, report.obstructed_degree)?;
    let json = CounterexampleEnvelope {
        command: "ihc".into(),
        report: counterexample_report_to_json(&report, &system.labels().cols),
    };
    let summary = vec![
        format!(
            "ihc: g={g} n={n} -> relative dimension {}, fibral degree {}",
            report.rel_dim, report.fibral_degree
        ),
        format!("  {}", report.conclusion),
    ];
    emit(&json, &summary, output)
}

pub fn cmd_itc(args: ItcArgs, output: &OutputOptions) -> Result<()> {
    let ell = require(args.ell, "ell")?;
    let p = args.p.unwrap_or(if ell == 2 { 3 } else { 2 });
    let report = itc_counterexample(ell, p)?;
    let scenario = BrauerScenario::standard(report.g, report.t, report.n, report.locality)?;
    let system = build_subspace_system(&scenario, report.obstructed_degree)?;
    let json = CounterexampleEnvelope {
        command: "itc".into(),
        report: counterexample_report_to_json(&report, &system.labels().cols),
    };
    let summary = vec![
        format!(
            "itc: ell={ell} p={p} -> dim P = {} = {ell}^{ell} + {ell}, relative dimension {}",
            report.dim_p, report.rel_dim
        ),
        format!("  {}", report.conclusion),
    ];
    emit(&json, &summary, output)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct HodgeIndexReport {
    pub command: String,
    pub scenario: ScenarioJson,
    pub rel_dim: usize,
    pub index: String,
}

pub fn cmd_hodge_index(args: HodgeIndexArgs, output: &OutputOptions) -> Result<()> {
    let g = require(args.g, "g")?;
    let b = require(args.b, "b")?;
    let n = require(args.n, "n")?;
    let r = require(args.r, "r")?;
    let scenario = scenario_from_flags(g, &b, n, args.ell)?;
    let index = match args.ell {
        Some(ell) => tate_index_wrt_p(&scenario, r, ell)?,
        None => hodge_index_wrt_p(&scenario, r)?,
    };
    let report = HodgeIndexReport {
        command: "hodge-index".into(),
        scenario: scenario_to_json(&scenario),
        rel_dim: r,
        index: index.to_string(),
    };
    let summary = vec![format!(
        "hodge-index: g={g} n={n} r={r} locality={} -> generator {index}",
        scenario.locality()
    )];
    emit(&report, &summary, output)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct UpperBoundEnvelope {
    pub command: String,
    pub inputs: UpperBoundInputs,
    pub multiplier: u64,
    pub max_prime: u64,
    pub splitting_degree: String,
    pub galois_bound: String,
    pub conjugate_count: u64,
    pub exponent: u64,
}

pub fn cmd_upper_bound(args: UpperBoundArgs, output: &OutputOptions) -> Result<()> {
    let path = require(args.r#in, "in")?;
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::Input(format!("cannot read {path}: {e}")))?;
    let inputs: UpperBoundInputs =
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("bad inputs JSON: {e}")))?;
    let report = cycle_exponent(&inputs)?;
    let json = UpperBoundEnvelope {
        command: "upper-bound".into(),
        inputs: report.inputs.clone(),
        multiplier: report.multiplier,
        max_prime: report.max_prime,
        splitting_degree: report.splitting_degree.to_string(),
        galois_bound: report.galois_bound.to_string(),
        conjugate_count: report.conjugate_count,
        exponent: report.exponent,
    };
    let summary = vec![
        format!(
            "upper-bound: m={} d={} C={} N={}",
            report.multiplier, report.splitting_degree, report.galois_bound, report.conjugate_count
        ),
        format!("  index divides period^{}", report.exponent),
    ];
    emit(&json, &summary, output)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn check(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Internal(format!("verification failed: {what}")))
    }
}

fn verify_obstruct(report: &ObstructReport) -> Result<()> {
    let scenario = scenario_from_json(&report.scenario)?;
    let system = build_subspace_system(&scenario, report.e)?;
    check(
        system.rows() == report.rows && system.cols() == report.cols,
        "system dimensions drifted",
    )?;
    let verdict = verdict_from_json(&report.verdict, &system.labels().cols)?;
    check(verify_verdict(&system, &verdict), "embedded verdict does not verify")
}

fn verify_sharpness(envelope: &SharpnessEnvelope) -> Result<()> {
    let r = &envelope.report;
    let locality = locality_from_json(&r.locality)?;
    let scenario = BrauerScenario::standard(r.g, r.t, r.n, locality)?;
    let system = build_subspace_system(&scenario, r.tested_degree)?;
    let verdict = verdict_from_json(&r.verdict, &system.labels().cols)?;
    check(verify_verdict(&system, &verdict), "embedded sharpness verdict does not verify")
}

fn verify_congruence_report(report: &CongruenceReport) -> Result<()> {
    let scenario = scenario_from_json(&report.scenario)?;
    let system = match report.command.as_str() {
        "kresch" => kresch_system(&scenario)?,
        "threefold" => threefold_system(&scenario)?,
        "threefold-sharp" => sharp_threefold_system(&scenario)?,
        other => return Err(Error::Input(format!("unknown congruence report {other:?}"))),
    };
    check(system.modulus().to_string() == report.modulus, "modulus drifted")?;
    let verdict = verdict_from_json(&report.verdict, &system.labels().cols)?;
    check(verify_congruence(&system, &verdict), "embedded congruence verdict does not verify")
}

fn verify_counterexample(envelope: &CounterexampleEnvelope) -> Result<()> {
    let r = &envelope.report;
    let locality = locality_from_json(&r.locality)?;
    let scenario = BrauerScenario::standard(r.g, r.t, r.n, locality)?;
    let delta = delta_class(&scenario, r.rel_dim)?;
    check(
        serde_json::to_value(sb_class_to_json(&delta)).ok() == serde_json::to_value(&r.delta).ok(),
        "delta class drifted",
    )?;
    check(delta.is_integral(locality), "delta is not integral")?;
    check(
        fibral_degree(&delta)?.to_string() == r.fibral_degree,
        "fibral degree drifted",
    )?;
    let system = build_subspace_system(&scenario, r.obstructed_degree)?;
    let verdict = verdict_from_json(&r.verdict, &system.labels().cols)?;
    check(verify_verdict(&system, &verdict), "embedded certificate does not verify")?;
    check(!verdict.is_solvable(), "counterexample verdict must be an obstruction")
}

fn verify_vanishing(report: &VanishingReport) -> Result<()> {
    let (lcm, obs) = vanishing_degrees(report.dim, report.n)?;
    check(lcm.to_string() == report.lcm && obs.to_string() == report.obs, "degrees drifted")
}

fn verify_hodge_index(report: &HodgeIndexReport) -> Result<()> {
    let scenario = scenario_from_json(&report.scenario)?;
    let index = match scenario.locality() {
        Locality::Global => hodge_index_wrt_p(&scenario, report.rel_dim)?,
        Locality::LocalAt(ell) => tate_index_wrt_p(&scenario, report.rel_dim, ell)?,
    };
    check(index.to_string() == report.index, "index drifted")
}

fn verify_upper_bound(report: &UpperBoundEnvelope) -> Result<()> {
    let recomputed = cycle_exponent(&report.inputs)?;
    check(
        recomputed.exponent == report.exponent
            && recomputed.splitting_degree.to_string() == report.splitting_degree
            && recomputed.galois_bound.to_string() == report.galois_bound,
        "exponent drifted",
    )
}

fn verify_value(value: &serde_json::Value) -> Result<String> {
    let command = value
        .get("command")
        .and_then(|c| c.as_str())
        .ok_or_else(|| Error::Input("report has no command tag".into()))?
        .to_string();
    let reparse = |e: serde_json::Error| Error::Input(format!("bad {command} report: {e}"));
    match command.as_str() {
        "obstruct" => verify_obstruct(&serde_json::from_value(value.clone()).map_err(reparse)?)?,
        "sharpness" => verify_sharpness(&serde_json::from_value(value.clone()).map_err(reparse)?)?,
        "kresch" | "threefold" | "threefold-sharp" => {
            verify_congruence_report(&serde_json::from_value(value.clone()).map_err(reparse)?)?
        }
        "ihc" | "itc" => {
            verify_counterexample(&serde_json::from_value(value.clone()).map_err(reparse)?)?
        }
        "vanishing" => verify_vanishing(&serde_json::from_value(value.clone()).map_err(reparse)?)?,
        "hodge-index" => {
            verify_hodge_index(&serde_json::from_value(value.clone()).map_err(reparse)?)?
        }
        "upper-bound" => {
            verify_upper_bound(&serde_json::from_value(value.clone()).map_err(reparse)?)?
        }
        "sweep-record" => crate::sweep::verify_record(value)?,
        other => return Err(Error::Input(format!("unknown report command {other:?}"))),
    }
    Ok(command)
}

pub fn cmd_verify(args: VerifyArgs, output: &OutputOptions) -> Result<()> {
    let path = require(args.r#in, "in")?;
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::Input(format!("cannot read {path}: {e}")))?;
    let mut checked: Vec<String> = Vec::new();
    if let Ok(value) = serde_json::from_str::<serde_json::Value>(&text) {
        checked.push(verify_value(&value)?);
    } else {
        // JSON-lines store.
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let value: serde_json::Value = serde_json::from_str(line)
                .map_err(|e| Error::Input(format!("{path}:{}: bad JSON: {e}", lineno + 1)))?;
            checked.push(verify_value(&value)?);
        }
    }
    #[derive(Serialize)]
    struct VerifySummary {
        command: String,
        file: String,
        checked: usize,
        all_valid: bool,
    }
    let report = VerifySummary {
        command: "verify".into(),
        file: path.clone(),
        checked: checked.len(),
        all_valid: true,
    };
    let summary = vec![format!("verify: {} record(s) in {path} all check out", checked.len())];
    emit(&report, &summary, output)?;
    Ok(())
}

/// Re-export for sweep verification.
pub(crate) fn verify_cell_verdict(
    g: usize,
    t: usize,
    n: u64,
    e: u64,
    locality: Locality,
    verdict_json: &VerdictJson,
) -> Result<()> {
    let scenario = BrauerScenario::standard(g, t, n, locality)?;
    let system = build_subspace_system(&scenario, e)?;
    let verdict = verdict_from_json(verdict_json, &system.labels().cols)?;
    check(verify_verdict(&system, &verdict), "sweep record verdict does not verify")
}
