//! JSON form of certificates. States, modes and scalars are stored as text
//! in the same notation the display functions produce.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Certificate, Claim, NullCoefficients, NullVector, Rule, Step, StepParams};
use crate::algebra::{AlgebraSpec, Mode, State};
use crate::error::CertificateError;
use crate::scalar::Poly;

#[derive(Serialize, Deserialize)]
struct CertDoc {
    coefficients: BTreeMap<String, Poly>,
    nulls: Vec<NullDoc>,
    steps: Vec<StepDoc>,
    targets: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct NullDoc {
    id: String,
    a: usize,
    b: usize,
}

#[derive(Serialize, Deserialize)]
struct ClaimDoc {
    vector: String,
    space: String,
}

#[derive(Serialize, Deserialize)]
struct StepDoc {
    id: usize,
    claim: ClaimDoc,
    rule: String,
    uses: Vec<usize>,
    params: ParamsDoc,
    depends_on: BTreeSet<String>,
}

#[derive(Serialize, Deserialize)]
struct NullFactor {
    null: String,
    factor: Poly,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ParamsDoc {
    Prefix { mode: String },
    Nulls { nulls: Vec<NullFactor> },
    Bracket { left: String, right: String, on: String },
    Coefficients { coefficients: Vec<Poly> },
    Empty {},
}

pub fn certificate_to_json(cert: &Certificate, spec: &AlgebraSpec) -> String {
    let state = |s: &State| s.display(spec).to_string();
    let mode = |m: &Mode| m.display(spec).to_string();
    let doc = CertDoc {
        coefficients: NullCoefficients::NAMES
            .iter()
            .map(|n| (n.to_string(), cert.coefficients.get(n).expect("known name").clone()))
            .collect(),
        nulls: cert.nulls.iter().map(|n| NullDoc { id: n.id.clone(), a: n.a, b: n.b }).collect(),
        steps: cert
            .steps
            .iter()
            .map(|s| StepDoc {
                id: s.id,
                claim: ClaimDoc { vector: state(&s.claim.vector), space: format!("C{}", s.claim.space) },
                rule: s.rule.name().to_string(),
                uses: s.uses.clone(),
                params: match &s.params {
                    StepParams::None => ParamsDoc::Empty {},
                    StepParams::Prefix { mode: m } => ParamsDoc::Prefix { mode: mode(m) },
                    StepParams::Nulls(list) => ParamsDoc::Nulls {
                        nulls: list.iter().map(|(n, f)| NullFactor { null: n.clone(), factor: f.clone() }).collect(),
                    },
                    StepParams::Bracket { left, right, on } => {
                        ParamsDoc::Bracket { left: mode(left), right: mode(right), on: state(on) }
                    }
                    StepParams::Coefficients(c) => ParamsDoc::Coefficients { coefficients: c.clone() },
                },
                depends_on: s.depends_on.clone(),
            })
            .collect(),
        targets: cert.targets.clone(),
    };
    serde_json::to_string_pretty(&doc).expect("certificate documents serialize")
}

pub fn certificate_from_json(text: &str, spec: &AlgebraSpec) -> Result<Certificate, CertificateError> {
    let malformed = |e: String| CertificateError::Malformed(e);
    let doc: CertDoc = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    let mut coefficients = NullCoefficients::default();
    for (name, value) in doc.coefficients {
        *coefficients.get_mut(&name).ok_or_else(|| malformed(format!("unknown coefficient {name}")))? = value;
    }
    let mut steps = Vec::with_capacity(doc.steps.len());
    for s in doc.steps {
        let rule = Rule::from_name(&s.rule).ok_or_else(|| malformed(format!("unknown rule {}", s.rule)))?;
        let space = s
            .claim
            .space
            .strip_prefix('C')
            .and_then(|n| n.parse::<u32>().ok())
            .ok_or_else(|| malformed(format!("bad space {}", s.claim.space)))?;
        let params = match s.params {
            ParamsDoc::Empty {} => StepParams::None,
            ParamsDoc::Prefix { mode } => StepParams::Prefix { mode: Mode::parse(&mode, spec)? },
            ParamsDoc::Nulls { nulls } => StepParams::Nulls(nulls.into_iter().map(|n| (n.null, n.factor)).collect()),
            ParamsDoc::Bracket { left, right, on } => StepParams::Bracket {
                left: Mode::parse(&left, spec)?,
                right: Mode::parse(&right, spec)?,
                on: State::parse(&on, spec)?,
            },
            ParamsDoc::Coefficients { coefficients } => StepParams::Coefficients(coefficients),
        };
        steps.push(Step {
            id: s.id,
            claim: Claim { vector: State::parse(&s.claim.vector, spec)?, space },
            rule,
            uses: s.uses,
            params,
            depends_on: s.depends_on,
        });
    }
    let nulls = doc.nulls.into_iter().map(|n| NullVector { id: n.id, a: n.a, b: n.b }).collect();
    Ok(Certificate { coefficients, nulls, steps, targets: doc.targets })
}
