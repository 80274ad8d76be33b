use std::fmt::Write;

use serde_json::{json, Value};
use walg_core::algebra::OperatorSum;
use walg_core::c2::{Certificate, VerificationReport};
use walg_core::derivation::{ConstantSolution, DerivationReport, SingularCheck};
use walg_core::qseries::QSeries;
use walg_core::scalar::fmt_rat;
use walg_core::{AlgebraSpec, Mode};

use crate::Format;

pub fn json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

pub fn bracket(sum: &OperatorSum, a: Mode, b: Mode, spec: &AlgebraSpec, format: Format) -> String {
    let terms: Vec<(String, String)> =
        sum.modes.iter().map(|(m, c)| (m.display(spec).to_string(), c.to_string())).collect();
    match format {
        Format::Json => json(&json!({
            "left": a.display(spec).to_string(),
            "right": b.display(spec).to_string(),
            "modes": terms.iter().map(|(m, c)| json!([m, c])).collect::<Vec<_>>(),
            "central": sum.central.to_string(),
        })),
        Format::Text => {
            let mut parts: Vec<String> = terms.iter().map(|(m, c)| format!("({c}) {m}")).collect();
            if !sum.central.is_zero() {
                parts.push(format!("({})", sum.central));
            }
            let rhs = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
            format!("[{}, {}] = {rhs}\n", a.display(spec), b.display(spec))
        }
    }
}

pub fn series(s: &QSeries, format: Format) -> String {
    match format {
        Format::Json => json(&s.to_json()),
        Format::Text => format!("# exponent: coefficient (valid below level {})\n{s}", fmt_rat(&s.cutoff())),
    }
}

pub fn derivation(r: &DerivationReport, format: Format) -> String {
    match format {
        Format::Json => json(&json!({
            "p": r.p,
            "delta": r.delta,
            "bookkeeping": r.bookkeeping.to_string(),
            "beta_ww_prime": fmt_rat(&r.beta_ww_prime),
            "gamma_ww": r.gamma_ww.to_string(),
            "beta": r.beta.to_string(),
            "gamma": r.gamma.to_string(),
            "B_quasiprimary": r.b_quasiprimary.to_string(),
            "gamma_sum": r.gamma_sum.to_string(),
            "xi": r.xi.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "B_primary": r.b_primary.to_string(),
            "alpha_zero_consistent": r.alpha_zero_consistent,
            "difference": r.difference.to_string(),
            "L2_of_product_nonzero": r.l2_of_product != "0",
            "p_values": r.p_values.iter().map(|(k, v)| json!([k, fmt_rat(v)])).collect::<Vec<_>>(),
            "assumptions": r.assumptions,
            "audit": r.audit.iter().map(|a| json!({"step": a.step, "kept": a.kept, "discarded": a.discarded})).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "p = {}, delta = {}, bookkeeping = {}", r.p, r.delta, r.bookkeeping);
            let _ = writeln!(out, "beta'_WW          {}", fmt_rat(&r.beta_ww_prime));
            let _ = writeln!(out, "beta              {}", r.beta);
            let _ = writeln!(out, "gamma             {}", r.gamma);
            let _ = writeln!(out, "sum gamma_X       {}", r.gamma_sum);
            for (i, x) in r.xi.iter().enumerate() {
                let _ = writeln!(out, "xi_{}              {x}", i + 1);
            }
            let _ = writeln!(out, "{:<18}{:<18}{}", "", "from L_2 N_-2D", "from L_2 N_-2D-1");
            let _ = writeln!(out, "{:<18}{:<18}{}", "B", r.b_quasiprimary.to_string(), r.b_primary);
            let _ = writeln!(out, "difference        {}", r.difference);
            let _ = writeln!(out, "alpha = 0 consistent: {}", r.alpha_zero_consistent);
            let _ = writeln!(out, "L_2 of N(W,W) alone vanishes at length delta-1: {}", r.l2_of_product == "0");
            for (k, v) in &r.p_values {
                let _ = writeln!(out, "{k} = {}", fmt_rat(v));
            }
            for a in &r.assumptions {
                let _ = writeln!(out, "assumption: {a}");
            }
            out
        }
    }
}

pub fn certificate(cert: &Certificate, report: &VerificationReport, spec: &AlgebraSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "steps: {}, checked: {}, valid: {}", cert.steps.len(), report.checked, report.valid);
    if let Some(f) = &report.failure {
        let _ = writeln!(out, "failure: {f}");
    }
    for s in cert.target_steps() {
        let deps: Vec<&str> = s.depends_on.iter().map(String::as_str).collect();
        let terms = s.claim.vector.len();
        let lead = s.claim.vector.terms().next().map(|(w, _)| {
            w.iter().map(|m| m.display(spec).to_string()).collect::<Vec<_>>().join(" ")
        });
        let _ = writeln!(
            out,
            "target {:>3}  C{}  {:<22} {:>4} terms, leading word {}  depends on [{}]",
            s.id,
            s.claim.space,
            s.rule.name(),
            terms,
            lead.unwrap_or_default(),
            deps.join(", ")
        );
    }
    out
}

pub fn singular(check: &SingularCheck, format: Format) -> String {
    match format {
        Format::Json => json(&json!({"holds": check.holds, "failures": check.failures})),
        Format::Text => {
            let mut out = format!("singular: {}\n", check.holds);
            for f in &check.failures {
                let _ = writeln!(out, "{f}");
            }
            out
        }
    }
}

fn solution_json(s: &ConstantSolution) -> Value {
    json!({
        "equations": s.equations,
        "unknowns": s.unknowns.iter().map(|u| u.to_string()).collect::<Vec<_>>(),
        "solved": s.solved.iter().map(|(k, v)| json!([k.to_string(), v.to_string()])).collect::<Vec<_>>(),
        "free": s.free.iter().map(|u| u.to_string()).collect::<Vec<_>>(),
        "nonzero_solution": s.has_nonzero_solution(),
    })
}

pub fn solutions(family: &ConstantSolution, fixed: &ConstantSolution, format: Format) -> String {
    match format {
        Format::Json => json(&json!({"symbolic": solution_json(family), "published_table": solution_json(fixed)})),
        Format::Text => {
            let mut out = String::new();
            for (title, s) in [("all coefficients symbolic", family), ("published null-vector table", fixed)] {
                let _ = writeln!(out, "{title}: {} equations in {} unknowns", s.equations, s.unknowns.len());
                for (k, v) in &s.solved {
                    let _ = writeln!(out, "  {k} = {v}");
                }
                let free: Vec<String> = s.free.iter().map(|u| u.to_string()).collect();
                let _ = writeln!(out, "  free: [{}]", free.join(", "));
            }
            let _ = writeln!(out, "nonzero solution: {}", family.has_nonzero_solution());
            out
        }
    }
}
