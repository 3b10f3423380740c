//! JSON interchange: classes, scenarios, verdicts, and reports. Rationals are
//! always exact fraction strings ("num" or "num/den"), never decimals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{format_rational, parse_rational};
use crate::error::{input, Error, Result};
use crate::obstruction::{BrauerScenario, SharpnessConclusion, SharpnessReport};
use crate::ring::{ExteriorClass, Locality, Monomial, ProductRing};
use crate::severi::{CounterexampleKind, CounterexampleReport, SeveriBrauerClass};
use crate::solver::Verdict;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub monomial: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassJson {
    pub g: usize,
    pub terms: Vec<TermJson>,
}

fn generator_index(name: &str, g: usize) -> Result<usize> {
    let (kind, num) = name.split_at(1);
    let factor: usize = num
        .parse()
        .map_err(|_| Error::Input(format!("bad generator name {name:?}")))?;
    if factor == 0 || factor > g {
        return input(format!("generator {name:?} out of range for g={g}"));
    }
    match kind {
        "x" => Ok(2 * (factor - 1)),
        "y" => Ok(2 * (factor - 1) + 1),
        _ => input(format!("bad generator name {name:?}")),
    }
}

pub fn class_to_json(class: &ExteriorClass) -> ClassJson {
    ClassJson {
        g: class.factors(),
        terms: class
            .terms()
            .map(|(m, c)| TermJson {
                coeff: format_rational(c),
                monomial: m.generator_names(),
            })
            .collect(),
    }
}

pub fn class_from_json(json: &ClassJson) -> Result<ExteriorClass> {
    let g = json.g;
    if g == 0 || g > ProductRing::MAX_FACTORS {
        return input(format!("bad factor count {g}"));
    }
    let mut out = ExteriorClass::zero(g);
    for term in &json.terms {
        let coeff = parse_rational(&term.coeff)?;
        if coeff.is_zero() {
            return input("explicit zero coefficient in class term");
        }
        let mut indices = Vec::with_capacity(term.monomial.len());
        for name in &term.monomial {
            indices.push(generator_index(name, g)?);
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return input("monomial generators must be strictly ascending in canonical order");
        }
        let mono = Monomial::from_indices(&indices)?;
        let prior = out.coefficient(mono);
        if !prior.is_zero() {
            return input(format!("monomial {mono} appears twice"));
        }
        out = out.add(&ExteriorClass::monomial(g, mono, coeff))?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LocalityJson {
    Name(String),
    Local { ell: u64 },
}

pub fn locality_to_json(locality: Locality) -> LocalityJson {
    match locality {
        Locality::Global => LocalityJson::Name("global".into()),
        Locality::LocalAt(ell) => LocalityJson::Local { ell },
    }
}

pub fn locality_from_json(json: &LocalityJson) -> Result<Locality> {
    match json {
        LocalityJson::Name(s) if s == "global" => Ok(Locality::Global),
        LocalityJson::Name(s) => input(format!("unknown locality {s:?}")),
        LocalityJson::Local { ell } => Ok(Locality::LocalAt(*ell)),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BFieldJson {
    Standard(String),
    Explicit(ClassJson),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioJson {
    pub g: usize,
    pub n: u64,
    pub locality: LocalityJson,
    pub b: BFieldJson,
}

pub fn scenario_to_json(scenario: &BrauerScenario) -> ScenarioJson {
    ScenarioJson {
        g: scenario.g(),
        n: scenario.n(),
        locality: locality_to_json(scenario.locality()),
        b: BFieldJson::Explicit(class_to_json(scenario.b())),
    }
}

/// Parses "standard(t)" into t.
pub fn parse_standard_spec(s: &str) -> Result<usize> {
    let body = s
        .trim()
        .strip_prefix("standard(")
        .and_then(|rest| rest.strip_suffix(')'))
        .ok_or_else(|| Error::Input(format!("bad class spec {s:?}")))?;
    body.trim()
        .parse()
        .map_err(|_| Error::Input(format!("bad class spec {s:?}")))
}

pub fn scenario_from_json(json: &ScenarioJson) -> Result<BrauerScenario> {
    let locality = locality_from_json(&json.locality)?;
    let ring = ProductRing::new(json.g, locality)?;
    let b = match &json.b {
        BFieldJson::Standard(spec) => {
            let t = parse_standard_spec(spec)?;
            crate::ring::standard_class(&ring, t)?
        }
        BFieldJson::Explicit(class) => {
            let c = class_from_json(class)?;
            if c.factors() != json.g {
                return input("class factor count disagrees with scenario");
            }
            c
        }
    };
    BrauerScenario::new(ring, b, json.n)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    pub entries: Vec<String>,
    pub violation: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictJson {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<(String, String, String)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateJson>,
}

/// Witness coordinates are keyed by (degree index j, Hodge basis position);
/// zero coordinates are omitted.
pub fn verdict_to_json(verdict: &Verdict, col_labels: &[(usize, usize)]) -> VerdictJson {
    match verdict {
        Verdict::Solvable { witness } => VerdictJson {
            status: "solvable".into(),
            witness: Some(
                witness
                    .iter()
                    .zip(col_labels)
                    .filter(|(w, _)| !w.is_zero())
                    .map(|(w, (j, mu))| (j.to_string(), mu.to_string(), format_rational(w)))
                    .collect(),
            ),
            certificate: None,
        },
        Verdict::Obstructed { certificate, violation } => VerdictJson {
            status: "obstructed".into(),
            witness: None,
            certificate: Some(CertificateJson {
                entries: certificate.iter().map(|x| x.to_string()).collect(),
                violation: format_rational(violation),
            }),
        },
    }
}

pub fn verdict_from_json(json: &VerdictJson, col_labels: &[(usize, usize)]) -> Result<Verdict> {
    match json.status.as_str() {
        "solvable" => {
            let sparse = json
                .witness
                .as_ref()
                .ok_or_else(|| Error::Input("solvable verdict without witness".into()))?;
            let mut witness = vec![BigRational::zero(); col_labels.len()];
            for (j, mu, val) in sparse {
                let j: usize = j
                    .parse()
                    .map_err(|_| Error::Input(format!("bad witness degree {j:?}")))?;
                let mu: usize = mu
                    .parse()
                    .map_err(|_| Error::Input(format!("bad witness position {mu:?}")))?;
                let pos = col_labels
                    .iter()
                    .position(|&(lj, lmu)| lj == j && lmu == mu)
                    .ok_or_else(|| Error::Input(format!("no unknown labeled ({j}, {mu})")))?;
                witness[pos] = parse_rational(val)?;
            }
            Ok(Verdict::Solvable { witness })
        }
        "obstructed" => {
            let cert = json
                .certificate
                .as_ref()
                .ok_or_else(|| Error::Input("obstructed verdict without certificate".into()))?;
            let entries = cert
                .entries
                .iter()
                .map(|s| {
                    s.parse::<BigInt>()
                        .map_err(|_| Error::Input(format!("bad certificate entry {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Verdict::Obstructed {
                certificate: entries,
                violation: parse_rational(&cert.violation)?,
            })
        }
        other => input(format!("unknown verdict status {other:?}")),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SbTermJson {
    pub h_power: usize,
    pub class: ClassJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SbClassJson {
    pub g: usize,
    pub rel_dim: usize,
    pub coeffs: Vec<SbTermJson>,
}

pub fn sb_class_to_json(class: &SeveriBrauerClass) -> SbClassJson {
    SbClassJson {
        g: class.base_factors(),
        rel_dim: class.rel_dim(),
        coeffs: class
            .terms()
            .map(|(j, a)| SbTermJson { h_power: j, class: class_to_json(a) })
            .collect(),
    }
}

pub fn sb_class_from_json(json: &SbClassJson) -> Result<SeveriBrauerClass> {
    let mut out = SeveriBrauerClass::zero(json.g, json.rel_dim);
    for term in &json.coeffs {
        let class = class_from_json(&term.class)?;
        if !out.coefficient(term.h_power).is_zero() {
            return input(format!("h-power {} appears twice", term.h_power));
        }
        out.set_coefficient(term.h_power, class)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SharpnessReportJson {
    pub g: usize,
    pub t: usize,
    pub n: u64,
    pub locality: LocalityJson,
    pub upper_bound: String,
    pub tested_degree: u64,
    pub verdict: VerdictJson,
    pub conclusion: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<String>,
}

pub fn sharpness_report_to_json(
    report: &SharpnessReport,
    col_labels: &[(usize, usize)],
) -> SharpnessReportJson {
    let (conclusion, index) = match &report.conclusion {
        SharpnessConclusion::ExactIndex(i) => ("index-exact".to_string(), Some(i.to_string())),
        SharpnessConclusion::NotDividing(e) => {
            (format!("index does not divide {e}"), None)
        }
        SharpnessConclusion::Inconclusive(why) => (format!("inconclusive: {why}"), None),
    };
    SharpnessReportJson {
        g: report.g,
        t: report.t,
        n: report.n,
        locality: locality_to_json(report.locality),
        upper_bound: report.upper_bound.to_string(),
        tested_degree: report.tested_degree,
        verdict: verdict_to_json(&report.verdict, col_labels),
        conclusion,
        index,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CounterexampleReportJson {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub characteristic: Option<u64>,
    pub g: usize,
    pub t: usize,
    pub n: u64,
    pub rel_dim: usize,
    pub dim_p: usize,
    pub locality: LocalityJson,
    pub delta: SbClassJson,
    pub fibral_degree: String,
    pub obstructed_degree: u64,
    pub verdict: VerdictJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index_exact: Option<String>,
    pub conclusion: String,
}

pub fn counterexample_report_to_json(
    report: &CounterexampleReport,
    col_labels: &[(usize, usize)],
) -> CounterexampleReportJson {
    let (kind, ell, characteristic) = match report.kind {
        CounterexampleKind::IntegralHodge => ("integral-hodge".to_string(), None, None),
        CounterexampleKind::IntegralTate { ell, characteristic } => {
            ("integral-tate".to_string(), Some(ell), Some(characteristic))
        }
    };
    CounterexampleReportJson {
        kind,
        ell,
        characteristic,
        g: report.g,
        t: report.t,
        n: report.n,
        rel_dim: report.rel_dim,
        dim_p: report.dim_p,
        locality: locality_to_json(report.locality),
        delta: sb_class_to_json(&report.delta),
        fibral_degree: report.fibral_degree.to_string(),
        obstructed_degree: report.obstructed_degree,
        verdict: verdict_to_json(&report.verdict, col_labels),
        index_exact: report.index_exact.as_ref().map(|x| x.to_string()),
        conclusion: report.conclusion.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::standard_class;

    #[test]
    fn class_round_trip_matches_spec_format() {
        let ring = ProductRing::new(3, Locality::Global).unwrap();
        let b = standard_class(&ring, 2).unwrap();
        let half = b.scale(&BigRational::new(BigInt::from(-1), BigInt::from(2)));
        let json = class_to_json(&half);
        let text = serde_json::to_string(&json).unwrap();
        assert!(text.contains("\"coeff\":\"-1/2\""));
        assert!(text.contains("\"monomial\":[\"x1\",\"y2\"]"));
        let back = class_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, half);
    }

    #[test]
    fn class_json_rejects_bad_input() {
        let bad = ClassJson {
            g: 3,
            terms: vec![TermJson { coeff: "1".into(), monomial: vec!["y1".into(), "x1".into()] }],
        };
        assert!(class_from_json(&bad).is_err());
        let zero = ClassJson {
            g: 3,
            terms: vec![TermJson { coeff: "0".into(), monomial: vec!["x1".into()] }],
        };
        assert!(class_from_json(&zero).is_err());
        let oob = ClassJson {
            g: 2,
            terms: vec![TermJson { coeff: "1".into(), monomial: vec!["x3".into()] }],
        };
        assert!(class_from_json(&oob).is_err());
    }

    #[test]
    fn scenario_accepts_standard_sugar() {
        let text = r#"{"g":3,"n":2,"locality":"global","b":"standard(2)"}"#;
        let json: ScenarioJson = serde_json::from_str(text).unwrap();
        let sc = scenario_from_json(&json).unwrap();
        let ring = ProductRing::new(3, Locality::Global).unwrap();
        assert_eq!(sc.b(), &standard_class(&ring, 2).unwrap());
        // Emission is always explicit.
        let out = serde_json::to_string(&scenario_to_json(&sc)).unwrap();
        assert!(out.contains("\"terms\""));
        // Local variant.
        let text = r#"{"g":3,"n":9,"locality":{"ell":3},"b":"standard(2)"}"#;
        let sc = scenario_from_json(&serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(sc.locality(), Locality::LocalAt(3));
    }

    #[test]
    fn verdict_round_trip() {
        let labels = vec![(1usize, 0usize), (1, 1), (2, 0)];
        let v = Verdict::Solvable {
            witness: vec![
                BigRational::zero(),
                BigRational::new(BigInt::from(1), BigInt::from(2)),
                BigRational::zero(),
            ],
        };
        let json = verdict_to_json(&v, &labels);
        assert_eq!(json.status, "solvable");
        assert_eq!(json.witness.as_ref().unwrap().len(), 1);
        let back = verdict_from_json(&json, &labels).unwrap();
        assert_eq!(back, v);

        let v = Verdict::Obstructed {
            certificate: vec![BigInt::from(0), BigInt::from(2), BigInt::from(-1)],
            violation: BigRational::new(BigInt::from(1), BigInt::from(2)),
        };
        let json = verdict_to_json(&v, &labels);
        let text = serde_json::to_string(&json).unwrap();
        assert!(text.contains("\"violation\":\"1/2\""));
        let back = verdict_from_json(&serde_json::from_str(&text).unwrap(), &labels).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn sb_class_round_trip() {
        let sc = BrauerScenario::standard(3, 2, 2, Locality::Global).unwrap();
        let delta = crate::severi::delta_class(&sc, 3).unwrap();
        let json = sb_class_to_json(&delta);
        let back = sb_class_from_json(&json).unwrap();
        assert_eq!(back, delta);
    }
}
