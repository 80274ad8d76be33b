use std::collections::BTreeSet;

use super::{close_dependencies, null_vector, Certificate, Claim, NullCoefficients, NullVector, Rule, Step, StepParams};
use crate::algebra::{Engine, Mode, State};
use crate::error::CertificateError;
use crate::scalar::Poly;

struct Builder<'a> {
    engine: &'a Engine,
    steps: Vec<Step>,
}

impl Builder<'_> {
    fn push(&mut self, vector: State, rule: Rule, uses: Vec<usize>, params: StepParams, deps: &[&str]) -> usize {
        let id = self.steps.len();
        self.steps.push(Step {
            id,
            claim: Claim { vector, space: 2 },
            rule,
            uses,
            params,
            depends_on: deps.iter().map(|d| d.to_string()).collect::<BTreeSet<_>>(),
        });
        id
    }

    fn vector(&self, id: usize) -> &State {
        &self.steps[id].claim.vector
    }

    fn prefix(&mut self, mode: Mode, on: usize) -> Result<usize, CertificateError> {
        let v = self.engine.apply_mode(mode, self.vector(on))?;
        Ok(self.push(v, Rule::PrefixInvariance, vec![on], StepParams::Prefix { mode }, &[]))
    }

    fn combine(&mut self, parts: &[(usize, Poly)], deps: &[&str]) -> usize {
        let mut v = State::zero();
        for (id, c) in parts {
            v.add_scaled(self.vector(*id), c);
        }
        let uses = parts.iter().map(|(id, _)| *id).collect();
        let coeffs = parts.iter().map(|(_, c)| c.clone()).collect();
        self.push(v, Rule::LinearCombination, uses, StepParams::Coefficients(coeffs), deps)
    }
}

/// Certificate that the listed vectors of the c = -2 triplet vacuum module lie in `C_2(V)`.
///
/// Targets: `W^a_-3 W^b_-3 Ω` and `((W^a_-3)^2 - (W^b_-3)^2) Ω` for each
/// cyclic pair, `(W^a_-3)^m Ω` for m = 3, 4, 5 and every a, and `L_-2^6 Ω`.
/// Only the nonvanishing of the `L_-2^3` coefficient is used.
pub fn certify_triplet_p2(engine: &Engine, k: &NullCoefficients) -> Result<Certificate, CertificateError> {
    if k.l2_cubed.is_zero() {
        return Err(CertificateError::Malformed("the L_-2^3 coefficient must be nonzero".into()));
    }
    let w = |a: usize| engine.mode(&format!("W{a}"), -3);
    let l2 = engine.mode("T", -2)?;
    let mut nulls: Vec<NullVector> = (1..=3).map(|a| NullVector::new(a, a)).collect();
    for a in 1..=3 {
        nulls.push(NullVector::new(a, a % 3 + 1));
    }
    let find_null = |a: usize, b: usize| format!("N{a}{b}");
    let mut b = Builder { engine, steps: Vec::new() };
    let mut targets = Vec::new();
    let vac_words = |modes: &[Mode]| engine.normal_order(modes);

    for a in 1..=3usize {
        let c = a % 3 + 1;
        let (wa, wc) = (w(a)?, w(c)?);
        // W^a W^c Ω is congruent to minus the manifest epsilon part.
        let pair = vac_words(&[wa, wc])?;
        let null = null_vector(engine, k, a, c)?;
        let rest = &pair - &null;
        let m = b.push(rest, Rule::ManifestMember, vec![], StepParams::None, &["w4_l2", "w6"]);
        let p = b.push(
            pair,
            Rule::SingularRewrite,
            vec![m],
            StepParams::Nulls(vec![(find_null(a, c), Poly::one())]),
            &[],
        );
        targets.push(p);
        // Squares differ by N^aa - N^cc.
        let sq = &vac_words(&[wa, wa])? - &vac_words(&[wc, wc])?;
        let d = b.push(
            sq,
            Rule::SingularRewrite,
            vec![],
            StepParams::Nulls(vec![(find_null(a, a), Poly::one()), (find_null(c, c), -Poly::one())]),
            &["l2_cubed", "l3_squared", "l4_l2", "l6"],
        );
        targets.push(d);
        let x = b.prefix(wa, d)?;
        let q = b.prefix(wc, p)?;
        let on = vac_words(&[wc])?;
        let lr = engine.apply_mode(wa, &engine.apply_mode(wc, &on)?)?;
        let rl = engine.apply_mode(wc, &engine.apply_mode(wa, &on)?)?;
        let y = b.push(
            &lr - &rl,
            Rule::WeightBoundedBracket,
            vec![],
            StepParams::Bracket { left: wa, right: wc, on },
            &[],
        );
        let cube = b.combine(&[(x, Poly::one()), (q, Poly::one()), (y, Poly::one())], &[]);
        targets.push(cube);
        let four = b.prefix(wa, cube)?;
        targets.push(four);
        let five = b.prefix(wa, four)?;
        targets.push(five);
    }

    // ((W^1)^2 - k L^3) Ω is congruent to the manifest Virasoro tail of N^11.
    let wa = w(1)?;
    let k1 = k.l2_cubed.clone();
    let inv = Poly::constant(k1.as_constant().ok_or_else(|| {
        CertificateError::Malformed("the L_-2^3 coefficient must be a number".into())
    })?.recip());
    let mut sq_minus = vac_words(&[wa, wa])?;
    sq_minus.add_scaled(&vac_words(&[l2, l2, l2])?, &-k1.clone());
    let tail = &sq_minus - &null_vector(engine, k, 1, 1)?;
    let r = b.push(tail, Rule::ManifestMember, vec![], StepParams::None, &["l3_squared", "l4_l2", "l6"]);
    let a_id = b.push(
        sq_minus,
        Rule::SingularRewrite,
        vec![r],
        StepParams::Nulls(vec![(find_null(1, 1), Poly::one())]),
        &["l2_cubed"],
    );
    let four = targets[3];
    let wa1 = b.prefix(wa, a_id)?;
    let wwa = b.prefix(wa, wa1)?;
    let w2l3 = b.combine(&[(four, inv.clone()), (wwa, -inv.clone())], &["l2_cubed"]);
    let la = b.prefix(l2, a_id)?;
    let lla = b.prefix(l2, la)?;
    let llla = b.prefix(l2, lla)?;
    let square = b.combine(&[(wwa, Poly::one()), (llla, -k1.clone())], &["l2_cubed"]);
    // L^3 (W^1)^2 Ω differs from (W^1)^2 L^3 Ω by manifest words.
    let l3w2 = engine.apply_mode(l2, &engine.apply_mode(l2, &engine.apply_mode(l2, &vac_words(&[wa, wa])?)?)?)?;
    let g = b.push(&l3w2 - b.vector(w2l3), Rule::ManifestMember, vec![], StepParams::None, &[]);
    let l3w2_id = b.combine(&[(w2l3, Poly::one()), (g, Poly::one())], &[]);
    let inv2 = &inv * &inv;
    let l6 = b.combine(
        &[
            (square, inv2.clone()),
            (four, -inv2.clone()),
            (w2l3, &inv2 * &k1),
            (l3w2_id, &inv2 * &k1),
        ],
        &["l2_cubed"],
    );
    targets.push(l6);

    close_dependencies(&mut b.steps);
    Ok(Certificate { coefficients: k.clone(), nulls, steps: b.steps, targets })
}
