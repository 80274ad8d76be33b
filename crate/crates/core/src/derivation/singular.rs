//! Annihilation of the level-6 vectors `N^ab` of the c = -2 triplet algebra
//! by `L_1` and `L_2`.

use std::collections::BTreeMap;

use crate::algebra::presets::{triplet_p2, TripletConstants};
use crate::algebra::{AlgebraSpec, Engine, State};
use crate::c2::{null_vector, NullCoefficients};
use crate::error::DerivationError;
use crate::scalar::{solve_linear_family, Poly, Sym};

/// Outcome of a numeric check.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularCheck {
    pub holds: bool,
    /// `"L_n N^ab: <state>"` for every nonvanishing image.
    pub failures: Vec<String>,
}

/// Solution family of the annihilation equations.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantSolution {
    pub equations: usize,
    pub unknowns: Vec<Sym>,
    /// Pivot unknowns in terms of the free ones.
    pub solved: BTreeMap<Sym, Poly>,
    pub free: Vec<Sym>,
}

impl ConstantSolution {
    /// The equations are homogeneous, so a nonzero solution exists iff some
    /// unknown is free.
    pub fn has_nonzero_solution(&self) -> bool {
        !self.free.is_empty()
    }
}

/// `L_n N^ab` for n = 1, 2 and all a, b.
fn images(engine: &Engine, k: &NullCoefficients) -> Result<Vec<(String, State)>, DerivationError> {
    let t = engine.spec().lookup("T")?;
    let mut out = Vec::new();
    for a in 1..=3 {
        for b in 1..=3 {
            let n = null_vector(engine, k, a, b)?;
            for m in [1, 2] {
                let image = engine.apply_mode(crate::algebra::Mode::new(t, m), &n)?;
                out.push((format!("L_{m} N{a}{b}"), image));
            }
        }
    }
    Ok(out)
}

fn non_imaginary_symbols(p: &Poly) -> Vec<String> {
    p.symbols().into_iter().filter(|s| !s.is_imaginary()).map(|s| s.name().to_string()).collect()
}

/// Whether `L_1` and `L_2` annihilate every `N^ab` (full states, no projection).
/// The spec must carry numeric constants.
pub fn verify_singular_p2(spec: &AlgebraSpec, k: &NullCoefficients) -> Result<SingularCheck, DerivationError> {
    let engine = Engine::new(spec.clone());
    let mut failures = Vec::new();
    for (label, image) in images(&engine, k)? {
        for (_, c) in image.terms() {
            let syms = non_imaginary_symbols(c);
            if !syms.is_empty() {
                return Err(DerivationError::NotNumeric(format!("{label} involves {}", syms.join(", "))));
            }
        }
        if !image.is_zero() {
            failures.push(format!("{label}: {}", image.display(engine.spec())));
        }
    }
    Ok(SingularCheck { holds: failures.is_empty(), failures })
}

/// Treats the `[W, W]` constants (and the null-vector coefficients when `k`
/// is `None`) as unknowns and solves the annihilation equations. Real and
/// imaginary parts are separate equations since every unknown is real.
pub fn solve_triplet_constants(k: Option<&NullCoefficients>) -> Result<ConstantSolution, DerivationError> {
    let spec = triplet_p2(&TripletConstants::symbolic());
    let engine = Engine::new(spec);
    let coeffs = k.cloned().unwrap_or_else(NullCoefficients::symbolic);
    let mut unknowns: Vec<Sym> = TripletConstants::symbols().iter().map(|s| Sym::new(s)).collect();
    if k.is_none() {
        unknowns.extend(NullCoefficients::NAMES.iter().map(|s| Sym::new(s)));
    }
    let i = Sym::imaginary();
    let mut equations = Vec::new();
    for (_, image) in images(&engine, &coeffs)? {
        for (_, c) in image.terms() {
            for part in [c.coeff_of(&i, 0), c.coeff_of(&i, 1)] {
                if !part.is_zero() {
                    equations.push(part);
                }
            }
        }
    }
    let (solved, free) = solve_linear_family(&equations, &unknowns)?;
    Ok(ConstantSolution { equations: equations.len(), unknowns, solved, free })
}

/// Numeric `[W, W]` constants at c = -2 for the given null-vector table.
///
/// The level-6 equations fix `cT`, `cL`, `kW` and `kV`; `dW` never enters
/// them and is set from the invariant-form relation `C_WW^T = 2Δ d_WW / c`.
pub fn derived_triplet_constants(k: &NullCoefficients) -> Result<TripletConstants, DerivationError> {
    let sol = solve_triplet_constants(Some(k))?;
    let get = |name: &str| {
        sol.solved
            .get(&Sym::new(name))
            .filter(|v| v.as_constant().is_some())
            .cloned()
            .ok_or_else(|| DerivationError::NotNumeric(format!("{name} is not fixed by the annihilation equations")))
    };
    let c_t = get("cT")?;
    let d_w = c_t.scale(&crate::scalar::rat(-2, 6));
    Ok(TripletConstants { d_w, c_t, c_lambda: get("cL")?, k_w: get("kW")?, k_v: get("kV")? })
}
