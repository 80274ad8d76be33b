use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::poly::{Poly, Sym};
use super::rat::Rat;
use crate::error::ScalarError;

/// Solves a system that is linear in `unknowns`. Coefficients of the unknowns
/// may involve other symbols only if a constant pivot is available, since
/// there is no division by polynomials.
pub fn solve_linear(equations: &[Poly], unknowns: &[Sym]) -> Result<BTreeMap<Sym, Poly>, ScalarError> {
    let (solved, free) = solve_linear_family(equations, unknowns)?;
    if !free.is_empty() {
        return Err(ScalarError::Underdetermined { free });
    }
    Ok(solved)
}

/// Like [`solve_linear`] but returns the solution family: pivot unknowns
/// expressed through the free ones, plus the list of free unknowns.
pub fn solve_linear_family(
    equations: &[Poly],
    unknowns: &[Sym],
) -> Result<(BTreeMap<Sym, Poly>, Vec<Sym>), ScalarError> {
    for eq in equations {
        for (m, _) in eq.terms() {
            let deg: u32 = unknowns.iter().map(|u| m.degree_in(u)).sum();
            if deg > 1 {
                let u = unknowns.iter().find(|u| m.degree_in(u) > 0).unwrap();
                return Err(ScalarError::NonLinear { unknown: u.clone() });
            }
        }
    }

    let mut eqs: Vec<Poly> = equations.iter().filter(|e| !e.is_zero()).cloned().collect();
    let mut solved: Vec<(Sym, Poly)> = Vec::new();

    loop {
        let pivot = eqs.iter().enumerate().find_map(|(ei, e)| {
            unknowns
                .iter()
                .filter(|u| !solved.iter().any(|(s, _)| s == *u))
                .find_map(|u| match e.coeff_of(u, 1).as_constant() {
                    Some(c) if !c.is_zero() => Some((ei, u.clone(), c)),
                    _ => None,
                })
        });
        let Some((ei, u, c)) = pivot else { break };
        let eq = eqs.remove(ei);
        // eq = c*u + rest  =>  u = -rest / c
        let rest = &eq - &Poly::sym(&u).scale(&c);
        let value = rest.scale(&(-Rat::one() / c));
        for e in eqs.iter_mut() {
            *e = e.substitute(&u, &value);
        }
        eqs.retain(|e| !e.is_zero());
        for (_, v) in solved.iter_mut() {
            *v = v.substitute(&u, &value);
        }
        solved.push((u, value));
    }

    let free: Vec<Sym> = unknowns
        .iter()
        .filter(|u| !solved.iter().any(|(s, _)| s == *u))
        .cloned()
        .collect();

    if let Some(residual) = eqs.iter().find(|e| unknowns.iter().all(|u| e.degree_in(u) == 0)) {
        return Err(ScalarError::Inconsistent {
            residual: residual.clone(),
        });
    }
    if !eqs.is_empty() {
        return Err(ScalarError::NonConstantPivot {
            residual: eqs[0].clone(),
        });
    }
    Ok((solved.into_iter().collect(), free))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat::rat;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn single_equation() {
        let b = Sym::new("B");
        let sol = solve_linear(&[p("2*B + C")], &[b.clone()]).unwrap();
        assert_eq!(sol[&b], p("C").scale(&rat(-1, 2)));
    }

    #[test]
    fn triangular_system_with_parameters() {
        let (x, b) = (Sym::new("xi1"), Sym::new("B"));
        let sol = solve_linear(&[p("xi1 - 3*B - C")], &[x.clone()]).unwrap();
        assert_eq!(sol[&x], p("3*B + C"));
        let sol = solve_linear(&[p("xi1 - 3*B - C"), p("B + C/2")], &[x.clone(), b.clone()]).unwrap();
        assert_eq!(sol[&x], p("-C/2"));
        assert_eq!(sol[&b], p("-C/2"));
    }

    #[test]
    fn failure_modes() {
        let b = Sym::new("B");
        assert!(matches!(
            solve_linear(&[p("B + 1"), p("B - 1")], &[b.clone()]),
            Err(ScalarError::Inconsistent { .. })
        ));
        assert!(matches!(
            solve_linear(&[p("B + x")], &[b.clone(), Sym::new("x")]),
            Err(ScalarError::Underdetermined { .. })
        ));
        assert!(matches!(
            solve_linear(&[p("B^2 - 1")], &[b.clone()]),
            Err(ScalarError::NonLinear { .. })
        ));
        assert!(matches!(
            solve_linear(&[p("C*B - 1")], &[b]),
            Err(ScalarError::NonConstantPivot { .. })
        ));
    }
}
