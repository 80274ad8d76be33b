//! The length-(Δ−1) argument for the level-2Δ singular vector `N^aa` of the
//! triplet algebra at `c_{p,1}`, carried out for concrete `p`.
//!
//! All states live in the vacuum module of [`single_w`] with symbolic
//! `C = C_WW^{N(T^(Δ-1))}`. The unknown aggregate `B` enters as the symbol
//! `B`. "Projection" keeps every word containing a `W` mode and every
//! Virasoro word of length at least `Δ − 1`; Virasoro modes never lengthen a
//! Virasoro word, so discarded words cannot feed back into the kept ones.

mod singular;

use std::fmt;

use crate::algebra::presets::{single_w, SingleWConstants};
use crate::algebra::{p_poly, Engine, FieldExpr, FieldId, Mode, State, Word};
use crate::error::DerivationError;
use crate::scalar::{solve_linear, Poly, Rat, Sym};

pub use singular::{derived_triplet_constants, solve_triplet_constants, verify_singular_p2, ConstantSolution, SingularCheck};

/// Largest supported `p`.
pub const MAX_P: i64 = 5;

/// Which part of `N(W,W)_{-2Δ-1} Ω` the ξ-matching is taken against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Bookkeeping {
    /// Only the correction terms of the quasi-primary product; the
    /// `N^(Δ)(W,W)_{-2Δ-1} Ω` part is added back in full at the `L_2` step.
    #[default]
    AsPublished,
    /// The full product on both sides; nothing is added back.
    Uniform,
}

impl std::str::FromStr for Bookkeeping {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "published" | "as-published" => Ok(Bookkeeping::AsPublished),
            "uniform" => Ok(Bookkeeping::Uniform),
            _ => Err(format!("unknown bookkeeping {s:?}; expected published or uniform")),
        }
    }
}

impl fmt::Display for Bookkeeping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bookkeeping::AsPublished => "published",
            Bookkeeping::Uniform => "uniform",
        })
    }
}

/// Words dropped by one projection step.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditEntry {
    pub step: String,
    pub kept: usize,
    pub discarded: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivationReport {
    pub p: i64,
    pub delta: i64,
    pub bookkeeping: Bookkeeping,
    pub beta_ww_prime: Rat,
    pub gamma_ww: Poly,
    pub beta: Poly,
    pub gamma: Poly,
    pub b_quasiprimary: Poly,
    pub gamma_sum: Poly,
    pub xi: [Poly; 3],
    pub b_primary: Poly,
    pub difference: Poly,
    pub alpha_zero_consistent: bool,
    /// `L_2` image of the product alone at length Δ−1; nonzero means "not primary".
    pub l2_of_product: String,
    pub p_values: Vec<(String, Rat)>,
    pub assumptions: Vec<String>,
    pub intermediate: Vec<(String, String)>,
    pub audit: Vec<AuditEntry>,
}

/// One `p`: the algebra, its engine and the symbols.
pub struct Derivation {
    pub p: i64,
    pub delta: i64,
    engine: Engine,
    t: FieldId,
    w: FieldId,
    audit: parking_lot::Mutex<Vec<AuditEntry>>,
}

fn sym(name: &str) -> Poly {
    Poly::var(name)
}

impl Derivation {
    pub fn new(p: i64) -> Result<Self, DerivationError> {
        if !(2..=MAX_P).contains(&p) {
            return Err(DerivationError::UnsupportedP(p, MAX_P));
        }
        let delta = 2 * p - 1;
        let engine = Engine::new(single_w(delta, &SingleWConstants::symbolic()));
        let t = engine.spec().lookup("T")?;
        let w = engine.spec().lookup("W")?;
        Ok(Derivation { p, delta, engine, t, w, audit: parking_lot::Mutex::new(Vec::new()) })
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    /// `L_{-k1} L_{-k2} ... Ω` in canonical order.
    pub fn vir_word(&self, parts: &[i64]) -> Word {
        let mut w: Word = parts.iter().map(|k| Mode::new(self.t, -k)).collect();
        w.sort();
        w
    }

    /// `[head..., 2, 2, ...]` padded with `L_-2` to `Δ − 1` modes.
    fn padded(&self, head: &[i64]) -> Option<Word> {
        let len = (self.delta - 1) as usize;
        if head.len() > len {
            return None;
        }
        let mut parts = head.to_vec();
        parts.resize(len, 2);
        Some(self.vir_word(&parts))
    }

    pub fn project(&self, step: &str, s: &State) -> State {
        let min = (self.delta - 1) as usize;
        let t = self.t;
        let kept = s.filter(|w| w.len() >= min || w.iter().any(|m| m.field != t));
        self.audit.lock().push(AuditEntry { step: step.into(), kept: kept.len(), discarded: s.len() - kept.len() });
        kept
    }

    fn l(&self, n: i64, s: &State) -> Result<State, DerivationError> {
        Ok(self.engine.apply_mode(Mode::new(self.t, n), s)?)
    }

    /// `N(W, W)_n Ω`, unprojected.
    pub fn product_state(&self, n: i64) -> Result<State, DerivationError> {
        Ok(self.engine.field_mode_apply(&FieldExpr::qp_nop(self.w, self.w, 0), n, &State::vacuum())?)
    }

    /// `N^(Δ)(W, W)_n Ω`, unprojected.
    pub fn plain_product_state(&self, n: i64) -> Result<State, DerivationError> {
        let f = FieldExpr::nprod(self.delta, FieldExpr::field(self.w), FieldExpr::field(self.w));
        Ok(self.engine.field_mode_apply(&f, n, &State::vacuum())?)
    }

    fn ww(&self) -> Result<State, DerivationError> {
        let wm = Mode::new(self.w, -self.delta);
        Ok(self.engine.normal_order(&[wm, wm])?)
    }

    fn beta_word(&self) -> Word {
        self.padded(&[4]).expect("delta >= 3")
    }

    fn gamma_word(&self) -> Word {
        self.padded(&[3, 3]).expect("delta >= 3")
    }

    /// The three Virasoro words of weight 2Δ+1 and length Δ−1.
    pub fn xi_words(&self) -> [Option<Word>; 3] {
        [self.padded(&[5]), self.padded(&[4, 3]), self.padded(&[3, 3, 3])]
    }

    fn take_c_multiple(&self, value: &Poly, what: &str) -> Result<Rat, DerivationError> {
        let c = Sym::new("C");
        let rest = value - &value.coeff_of(&c, 1).mul_poly(&sym("C"));
        match value.coeff_of(&c, 1).as_constant() {
            Some(r) if rest.is_zero() => Ok(r),
            _ => Err(DerivationError::Matching(what.into(), value.clone())),
        }
    }

    /// `(β_WW, γ_WW, β′_WW)`: length-(Δ−1) coefficients of `N(W,W)_{-2Δ} Ω`.
    pub fn beta_gamma_ww(&self) -> Result<(Poly, Poly, Rat), DerivationError> {
        let s = self.project("product at -2Δ", &self.product_state(-2 * self.delta)?);
        let beta = s.coeff(&self.beta_word());
        let gamma = s.coeff(&self.gamma_word());
        let prime = self.take_c_multiple(&beta, "beta_ww")?;
        Ok((beta, gamma, prime))
    }

    /// `L_2` of `(W² + (β′C + B) L_-4 L_-2^{Δ-2}) Ω`, projected.
    fn l2_of_ansatz(&self, prime: &Rat, b: &Poly) -> Result<State, DerivationError> {
        let mut ansatz = self.ww()?;
        let beta = &sym("C").scale(prime) + b;
        ansatz.add_term(self.beta_word(), beta);
        let image = self.l(2, &ansatz)?;
        Ok(self.project("L2 of the B ansatz", &image))
    }

    /// `B` from the vanishing of the `L_-2^{Δ-1} Ω` coefficient of the `L_2` image.
    pub fn solve_b_quasiprimary(&self) -> Result<Poly, DerivationError> {
        let (_, _, prime) = self.beta_gamma_ww()?;
        let image = self.l2_of_ansatz(&prime, &sym("B"))?;
        let top = self.padded(&[]).expect("empty head");
        solve_for_b(image.coeff(&top))
    }

    /// `L_2` of the product state alone, projected; nonzero because the
    /// product is quasi-primary but not primary.
    pub fn l2_of_product(&self) -> Result<State, DerivationError> {
        let s = self.project("product at -2Δ", &self.product_state(-2 * self.delta)?);
        let image = self.l(2, &s)?;
        Ok(self.project("L2 of the product", &image))
    }

    /// `Σ γ_X` from `L_1`-annihilation of `B L_-4 L_-2^{Δ-2} + G L_-3^2 L_-2^{Δ-3}`.
    pub fn gamma_sum(&self, b: &Poly) -> Result<Poly, DerivationError> {
        let mut x = State::word(self.beta_word(), b.clone());
        x.add_term(self.gamma_word(), sym("G"));
        let image = self.project("L1 of the X aggregate", &self.l(1, &x)?);
        let eqs: Vec<Poly> = image.terms().map(|(_, c)| c.clone()).collect();
        let g = Sym::new("G");
        let sol = solve_linear(&eqs, std::slice::from_ref(&g))?;
        Ok(sol[&g].clone())
    }

    /// The ansatz `(W² + β L_-4 L_-2^{Δ-2} + γ L_-3^2 L_-2^{Δ-3}) Ω`.
    pub fn ansatz(&self, beta: &Poly, gamma: &Poly) -> Result<State, DerivationError> {
        let mut s = self.ww()?;
        s.add_term(self.beta_word(), beta.clone());
        s.add_term(self.gamma_word(), gamma.clone());
        Ok(s)
    }

    /// Right-hand side of the ξ-matching, before the ξ terms.
    fn descent_base(&self, mode: Bookkeeping) -> Result<State, DerivationError> {
        let n = -2 * self.delta - 1;
        let full = self.product_state(n)?;
        let base = match mode {
            Bookkeeping::Uniform => full,
            Bookkeeping::AsPublished => &full - &self.plain_product_state(n)?,
        };
        Ok(self.project("product at -2Δ-1", &base))
    }

    /// `L_-1` of the ansatz matched against the product at `-2Δ-1` plus
    /// `Σ ξ_i` times the three weight-(2Δ+1) words. Returns `L_-1` of the
    /// ansatz (projected) and the ξ.
    pub fn descend_and_solve_xi(
        &self,
        beta: &Poly,
        gamma: &Poly,
        mode: Bookkeeping,
    ) -> Result<(State, [Poly; 3]), DerivationError> {
        let lhs = self.project("L-1 of the ansatz", &self.l(-1, &self.ansatz(beta, gamma)?)?);
        let base = self.descent_base(mode)?;
        let mut residual = &lhs - &base;
        let mut xi: [Poly; 3] = Default::default();
        for (slot, word) in xi.iter_mut().zip(self.xi_words()) {
            if let Some(word) = word {
                *slot = residual.coeff(&word);
                residual.add_term(word, -slot.clone());
            }
        }
        if mode == Bookkeeping::AsPublished {
            // The plain product is left out of the base; its W words remain.
            let plain = self.plain_product_state(-2 * self.delta - 1)?;
            residual -= &plain.filter(|w| w.iter().any(|m| m.field == self.w));
        }
        if let Some((word, c)) = residual.terms().next() {
            let name = State::word(word.clone(), Poly::one()).display(self.engine.spec()).to_string();
            return Err(DerivationError::Matching(name, c.clone()));
        }
        Ok((lhs, xi))
    }

    /// `N^aa_{-2Δ-1} Ω` at length Δ−1 as used by the primary-field step.
    pub fn descended_null(&self, xi: &[Poly; 3], mode: Bookkeeping) -> Result<State, DerivationError> {
        let mut s = self.descent_base(mode)?;
        for (c, word) in xi.iter().zip(self.xi_words()) {
            if let Some(word) = word {
                s.add_term(word, c.clone());
            }
        }
        if mode == Bookkeeping::AsPublished {
            let plain = self.plain_product_state(-2 * self.delta - 1)?;
            s += &self.project("plain product at -2Δ-1", &plain);
        }
        Ok(s)
    }

    /// `B` from the `L_-3 L_-2^{Δ-2} Ω` coefficient of `L_2 N^aa_{-2Δ-1} Ω`.
    pub fn solve_b_primary(&self, xi: &[Poly; 3], mode: Bookkeeping) -> Result<Poly, DerivationError> {
        let s = self.descended_null(xi, mode)?;
        let image = self.project("L2 of the descended vector", &self.l(2, &s)?);
        let word = self.padded(&[3]).expect("delta >= 3");
        solve_for_b(image.coeff(&word))
    }

    pub fn report(&self, mode: Bookkeeping) -> Result<DerivationReport, DerivationError> {
        self.audit.lock().clear();
        let spec = self.engine.spec();
        let d = self.delta;
        let (_, gamma_ww, prime) = self.beta_gamma_ww()?;
        let b_qp = self.solve_b_quasiprimary()?;
        let b = sym("B");
        let gamma_sum = self.gamma_sum(&b)?;
        let beta = &sym("C").scale(&prime) + &b;
        let gamma = &gamma_ww + &gamma_sum;
        let (descended, xi) = self.descend_and_solve_xi(&beta, &gamma, mode)?;
        let b_primary = self.solve_b_primary(&xi, mode)?;
        let difference = &b_qp - &b_primary;
        let l2_of_product = self.l2_of_product()?.display(spec).to_string();
        let hh = 2 * d - 2;
        let p_values = vec![
            (format!("p_{{{d},{d},{hh}}}({},{})", 2 - d, -d), p_poly(d, d, hh, 2 - d, -d)?),
            (format!("p_{{{d},{d},{hh}}}({},{})", 1 - d, -d), p_poly(d, d, hh, 1 - d, -d)?),
            (format!("p_{{{d},{d},{hh}}}({},{})", 2 - d, -d - 1), p_poly(d, d, hh, 2 - d, -d - 1)?),
            (format!("p_{{{d},{d},{hh}}}({},{})", -d, -d - 1), p_poly(d, d, hh, -d, -d - 1)?),
        ];
        let assumptions = vec![
            "alpha = 0 (the hypothesis being refuted)".to_string(),
            "weight 2Δ-1 fields with one derivative have vanishing C_WW constants".to_string(),
            "only the T and N(T^(Δ-1)) channels of [W, W] reach length Δ-1".to_string(),
        ];
        let intermediate = vec![
            ("L_-1 of the ansatz".to_string(), descended.display(spec).to_string()),
            (
                "N^aa_{-2Δ-1} at length Δ-1".to_string(),
                self.descended_null(&xi, mode)?.display(spec).to_string(),
            ),
        ];
        Ok(DerivationReport {
            p: self.p,
            delta: d,
            bookkeeping: mode,
            beta_ww_prime: prime,
            gamma_ww,
            beta,
            gamma,
            b_quasiprimary: b_qp,
            gamma_sum,
            xi,
            alpha_zero_consistent: difference.is_zero(),
            b_primary,
            difference,
            l2_of_product,
            p_values,
            assumptions,
            intermediate,
            audit: self.audit.lock().clone(),
        })
    }
}

fn solve_for_b(eq: Poly) -> Result<Poly, DerivationError> {
    let b = Sym::new("B");
    let sol = solve_linear(&[eq], std::slice::from_ref(&b))?;
    Ok(sol[&b].clone())
}

/// Standalone forms of the pipeline steps.
pub fn beta_gamma_ww(p: i64) -> Result<(Poly, Poly, Rat), DerivationError> {
    Derivation::new(p)?.beta_gamma_ww()
}

pub fn solve_b_quasiprimary(p: i64) -> Result<Poly, DerivationError> {
    Derivation::new(p)?.solve_b_quasiprimary()
}

pub fn gamma_sum(p: i64, b: &Poly) -> Result<Poly, DerivationError> {
    Derivation::new(p)?.gamma_sum(b)
}

/// ξ for the ansatz with `β = β_WW + B`, `γ = γ_WW + Σγ_X`.
pub fn descend_and_solve_xi(p: i64, b: &Poly, mode: Bookkeeping) -> Result<(State, [Poly; 3]), DerivationError> {
    let d = Derivation::new(p)?;
    let (beta_ww, gamma_ww, _) = d.beta_gamma_ww()?;
    let gamma = &gamma_ww + &d.gamma_sum(b)?;
    d.descend_and_solve_xi(&(&beta_ww + b), &gamma, mode)
}

pub fn solve_b_primary(p: i64, xi: &[Poly; 3], mode: Bookkeeping) -> Result<Poly, DerivationError> {
    Derivation::new(p)?.solve_b_primary(xi, mode)
}

pub fn alpha_nonzero_report(p: i64, mode: Bookkeeping) -> Result<DerivationReport, DerivationError> {
    Derivation::new(p)?.report(mode)
}
