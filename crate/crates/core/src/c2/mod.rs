//! Replayable certificates for C_n membership of vacuum-module vectors.
//!
//! A certificate is an ordered list of steps. Each step claims that a
//! [`State`] lies in `C_n(V)` and names the rule that justifies it, the
//! earlier steps it relies on and the rule parameters. Null vectors are
//! declared in the certificate body and rebuilt from its coefficient table,
//! so verification needs nothing beyond the algebra spec.

mod json;
mod nulls;
mod triplet;

use std::collections::{BTreeMap, BTreeSet};

pub use json::{certificate_from_json, certificate_to_json};
pub use nulls::{null_vector, NullCoefficients, NullVector};
pub use triplet::certify_triplet_p2;

use crate::algebra::{convert_index, AlgebraSpec, Engine, IndexDirection, Mode, State};
use crate::error::CertificateError;
use crate::scalar::Poly;

/// Justification of a single membership claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Every word starts with a mode of math index `<= -n`.
    ManifestMember,
    /// `v_m C_n ⊂ C_n` for math index `m <= 0`.
    PrefixInvariance,
    /// Differs from the sum of the used claims by declared null vectors.
    SingularRewrite,
    /// A commutator of two modes whose every channel is a `C_n` mode.
    WeightBoundedBracket,
    /// A linear combination of earlier claims.
    LinearCombination,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::ManifestMember => "ManifestMember",
            Rule::PrefixInvariance => "PrefixInvariance",
            Rule::SingularRewrite => "SingularRewrite",
            Rule::WeightBoundedBracket => "WeightBoundedBracket",
            Rule::LinearCombination => "LinearCombination",
        }
    }

    pub fn from_name(name: &str) -> Option<Rule> {
        [
            Rule::ManifestMember,
            Rule::PrefixInvariance,
            Rule::SingularRewrite,
            Rule::WeightBoundedBracket,
            Rule::LinearCombination,
        ]
        .into_iter()
        .find(|r| r.name() == name)
    }
}

/// Rule-specific data of a step.
#[derive(Clone, Debug, PartialEq)]
pub enum StepParams {
    None,
    /// The mode applied to the single used claim.
    Prefix { mode: Mode },
    /// Null vectors with factors: `vector - sum(uses) = sum factor * null`.
    Nulls(Vec<(String, Poly)>),
    /// `vector = left (right on) - right (left on)`.
    Bracket { left: Mode, right: Mode, on: State },
    /// One coefficient per used claim.
    Coefficients(Vec<Poly>),
}

/// `vector ∈ C_space(V)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Claim {
    pub vector: State,
    pub space: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub id: usize,
    pub claim: Claim,
    pub rule: Rule,
    pub uses: Vec<usize>,
    pub params: StepParams,
    /// Names of null-vector coefficients this step relies on, directly or through its uses.
    pub depends_on: BTreeSet<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub coefficients: NullCoefficients,
    pub nulls: Vec<NullVector>,
    pub steps: Vec<Step>,
    pub targets: Vec<usize>,
}

impl Certificate {
    pub fn step(&self, id: usize) -> Option<&Step> {
        self.steps.iter().find(|s| s.id == id)
    }

    /// Steps whose claims are flagged as results.
    pub fn target_steps(&self) -> impl Iterator<Item = &Step> {
        self.targets.iter().filter_map(|t| self.step(*t))
    }
}

/// Whether the word's leftmost mode has math index `<= -n` (for `n = 1` the
/// field must also have positive weight, which every declared field has).
pub fn manifest_member(word: &[Mode], n: u32, spec: &AlgebraSpec) -> bool {
    let Some(first) = word.first() else {
        return false;
    };
    let h = spec.weight(first.field);
    h > 0 && convert_index(first.index, h, IndexDirection::PhysicsToMath) <= -(n as i64)
}

/// Outcome of replaying a certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub valid: bool,
    pub checked: usize,
    pub failure: Option<CertificateError>,
}

/// Replays every step in order; stops at the first failure.
pub fn verify_certificate(cert: &Certificate, spec: &AlgebraSpec) -> VerificationReport {
    let engine = Engine::new(spec.clone());
    let mut checked = 0;
    let result = (|| {
        let nulls = build_nulls(cert, &engine)?;
        let mut seen: BTreeMap<usize, &Step> = BTreeMap::new();
        for step in &cert.steps {
            if seen.contains_key(&step.id) {
                return Err(fail(step, "duplicate step id"));
            }
            for u in &step.uses {
                if !seen.contains_key(u) {
                    return Err(fail(step, &format!("uses step {u}, which is not an earlier claim")));
                }
            }
            for u in &step.uses {
                if seen[u].claim.space < step.claim.space {
                    return Err(fail(step, &format!("step {u} proves membership in a larger space")));
                }
            }
            check_step(step, &seen, &nulls, &engine)?;
            seen.insert(step.id, step);
            checked += 1;
        }
        for t in &cert.targets {
            if !seen.contains_key(t) {
                return Err(CertificateError::Malformed(format!("target {t} is not a step")));
            }
        }
        Ok(())
    })();
    VerificationReport { valid: result.is_ok(), checked, failure: result.err() }
}

fn fail(step: &Step, msg: &str) -> CertificateError {
    CertificateError::Step { step: step.id, msg: msg.to_string() }
}

fn build_nulls(cert: &Certificate, engine: &Engine) -> Result<BTreeMap<String, State>, CertificateError> {
    let mut out = BTreeMap::new();
    for n in &cert.nulls {
        if out.insert(n.id.clone(), null_vector(engine, &cert.coefficients, n.a, n.b)?).is_some() {
            return Err(CertificateError::Malformed(format!("null vector {} declared twice", n.id)));
        }
    }
    Ok(out)
}

fn residual_msg(engine: &Engine, what: &str, residual: &State) -> String {
    format!("{what}; residual {}", residual.display(engine.spec()))
}

fn check_step(
    step: &Step,
    seen: &BTreeMap<usize, &Step>,
    nulls: &BTreeMap<String, State>,
    engine: &Engine,
) -> Result<(), CertificateError> {
    let spec = engine.spec();
    let n = step.claim.space;
    let v = &step.claim.vector;
    let used = |i: usize| &seen[&step.uses[i]].claim.vector;
    match (step.rule, &step.params) {
        (Rule::ManifestMember, StepParams::None) => {
            if !step.uses.is_empty() {
                return Err(fail(step, "manifest claims use no other steps"));
            }
            if let Some((w, _)) = v.terms().find(|(w, _)| !manifest_member(w, n, spec)) {
                let offending = State::word(w.clone(), Poly::one());
                return Err(fail(step, &residual_msg(engine, "word is not manifest", &offending)));
            }
            Ok(())
        }
        (Rule::PrefixInvariance, StepParams::Prefix { mode }) => {
            if step.uses.len() != 1 {
                return Err(fail(step, "prefix invariance uses exactly one claim"));
            }
            let h = spec.weight(mode.field);
            if !spec.is_generator(mode.field) || convert_index(mode.index, h, IndexDirection::PhysicsToMath) > 0 {
                return Err(fail(step, "prefix mode must be a generator mode of math index <= 0"));
            }
            let image = engine.apply_mode(*mode, used(0))?;
            let residual = v - &image;
            if !residual.is_zero() {
                return Err(fail(step, &residual_msg(engine, "claim differs from the prefixed vector", &residual)));
            }
            Ok(())
        }
        (Rule::SingularRewrite, StepParams::Nulls(list)) => {
            if list.is_empty() {
                return Err(fail(step, "singular rewrite names no null vector"));
            }
            let mut residual = v.clone();
            for i in 0..step.uses.len() {
                residual -= used(i);
            }
            for (id, factor) in list {
                let null = nulls.get(id).ok_or_else(|| fail(step, &format!("unknown null vector {id}")))?;
                residual.add_scaled(null, &-factor.clone());
            }
            if !residual.is_zero() {
                return Err(fail(step, &residual_msg(engine, "claim is not congruent modulo the null vectors", &residual)));
            }
            Ok(())
        }
        (Rule::WeightBoundedBracket, StepParams::Bracket { left, right, on }) => {
            if !step.uses.is_empty() {
                return Err(fail(step, "bracket claims use no other steps"));
            }
            check_bracket_bound(step, *left, *right, spec)?;
            let lr = engine.apply_mode(*left, &engine.apply_mode(*right, on)?)?;
            let rl = engine.apply_mode(*right, &engine.apply_mode(*left, on)?)?;
            let residual = &(v - &lr) + &rl;
            if !residual.is_zero() {
                return Err(fail(step, &residual_msg(engine, "claim differs from the commutator action", &residual)));
            }
            Ok(())
        }
        (Rule::LinearCombination, StepParams::Coefficients(coeffs)) => {
            if coeffs.len() != step.uses.len() || coeffs.is_empty() {
                return Err(fail(step, "one coefficient per used claim is required"));
            }
            let mut residual = v.clone();
            for (i, c) in coeffs.iter().enumerate() {
                residual.add_scaled(used(i), &-c.clone());
            }
            if !residual.is_zero() {
                return Err(fail(step, &residual_msg(engine, "claim is not the stated combination", &residual)));
            }
            Ok(())
        }
        (rule, _) => Err(fail(step, &format!("parameters do not match rule {}", rule.name()))),
    }
}

/// Every channel of `[left, right]` is a mode `phi_{m+n}` with `1 <= h_phi <=
/// h_l + h_r - 1`; each must have math index `<= -n`, and the central term
/// must be absent.
fn check_bracket_bound(step: &Step, left: Mode, right: Mode, spec: &AlgebraSpec) -> Result<(), CertificateError> {
    let (hl, hr) = (spec.weight(left.field), spec.weight(right.field));
    let total = left.index + right.index;
    if total == 0 {
        return Err(fail(step, "central term may contribute"));
    }
    for h in 1..hl + hr {
        if convert_index(total, h, IndexDirection::PhysicsToMath) > -(step.claim.space as i64) {
            return Err(fail(step, &format!("a weight-{h} channel at index {total} is not manifest")));
        }
    }
    Ok(())
}

/// Transitive closure of coefficient dependencies for a list of steps.
pub(crate) fn close_dependencies(steps: &mut [Step]) {
    let mut acc: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
    for step in steps.iter_mut() {
        let mut deps = step.depends_on.clone();
        for u in &step.uses {
            if let Some(d) = acc.get(u) {
                deps.extend(d.iter().cloned());
            }
        }
        step.depends_on = deps.clone();
        acc.insert(step.id, deps);
    }
}
