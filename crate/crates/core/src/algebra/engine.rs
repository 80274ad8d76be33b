//! PBW normal ordering on the vacuum Verma module.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use parking_lot::RwLock;

use super::ppoly::channel_coefficient;
use super::spec::{AlgebraSpec, FieldExpr, FieldId};
use super::state::{word_weight, Mode, State, Word};
use crate::error::AlgebraError;
use crate::scalar::{binom_int, factorial, int, Poly, Rat};

/// Right-hand side of a mode commutator: a sum of modes plus a central term.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OperatorSum {
    pub modes: BTreeMap<Mode, Poly>,
    pub central: Poly,
}

impl OperatorSum {
    pub fn is_zero(&self) -> bool {
        self.central.is_zero() && self.modes.is_empty()
    }

    fn add_mode(&mut self, mode: Mode, coeff: Poly) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.modes.entry(mode).or_default();
        *slot += &coeff;
        if slot.is_zero() {
            self.modes.remove(&mode);
        }
    }
}

impl std::ops::Add<&OperatorSum> for &OperatorSum {
    type Output = OperatorSum;
    fn add(self, rhs: &OperatorSum) -> OperatorSum {
        let mut out = self.clone();
        out.central += &rhs.central;
        for (m, c) in &rhs.modes {
            out.add_mode(*m, c.clone());
        }
        out
    }
}

/// How to treat structure constants that a quasi-primary normal-ordered
/// product would need but the spec does not declare.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ChannelPolicy {
    /// Undeclared channels are omitted.
    #[default]
    Declared,
    /// Every field of the spec with `h(ijk) >= 1` must be declared for the pair.
    Strict,
}

/// Rewriting schedule for [`Engine::normal_order_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    /// Apply modes to the vacuum right to left (the memoized path).
    Fold,
    /// Resolve the leftmost out-of-order adjacent pair first.
    LeftmostInversion,
    /// Resolve the rightmost out-of-order adjacent pair first.
    RightmostInversion,
}

type ApplyKey = (Mode, Word);

/// Rewriting engine bound to one algebra spec. Caches are internal and
/// synchronized, so a shared reference can be used from several threads.
pub struct Engine {
    spec: Arc<AlgebraSpec>,
    policy: ChannelPolicy,
    apply_cache: RwLock<HashMap<ApplyKey, Arc<State>>>,
    qp_cache: RwLock<HashMap<(FieldId, FieldId, u32), Arc<FieldExpr>>>,
}

impl Engine {
    pub fn new(spec: AlgebraSpec) -> Self {
        Engine::from_arc(Arc::new(spec))
    }

    pub fn from_arc(spec: Arc<AlgebraSpec>) -> Self {
        Engine {
            spec,
            policy: ChannelPolicy::Declared,
            apply_cache: RwLock::new(HashMap::new()),
            qp_cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn with_policy(mut self, policy: ChannelPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn mode(&self, name: &str, index: i64) -> Result<Mode, AlgebraError> {
        Ok(Mode::new(self.spec.lookup(name)?, index))
    }

    pub fn cache_len(&self) -> usize {
        self.apply_cache.read().len()
    }

    /// `[a, b]` from the declared `d_ij` and `C_ij^k`.
    pub fn bracket(&self, a: Mode, b: Mode) -> Result<OperatorSum, AlgebraError> {
        let spec = &*self.spec;
        let (i, j) = (a.field, b.field);
        if !spec.has_bracket(i, j) {
            return Err(AlgebraError::MissingBracket(spec.name(i).into(), spec.name(j).into()));
        }
        let (hi, hj) = (spec.weight(i), spec.weight(j));
        let (m, n) = (a.index, b.index);
        let mut out = OperatorSum::default();
        if m + n == 0 {
            if let Some(d) = spec.d(i, j) {
                out.central = d.scale(&binom_int(hi + m - 1, (2 * hi - 1) as u32));
            }
        }
        for (k, c) in spec.channels(i, j).unwrap_or_default() {
            let p = channel_coefficient(hi, hj, spec.weight(k), m, n)?;
            out.add_mode(Mode::new(k, m + n), c.scale(&p));
        }
        Ok(out)
    }

    /// `m . s` as a canonical state.
    pub fn apply_mode(&self, m: Mode, s: &State) -> Result<State, AlgebraError> {
        let mut out = State::zero();
        for (w, c) in s.terms() {
            let r = self.apply_word(m, w)?;
            out.add_scaled(&r, c);
        }
        Ok(out)
    }

    /// Applies the modes of `word` to the vacuum, rightmost first.
    pub fn normal_order(&self, word: &[Mode]) -> Result<State, AlgebraError> {
        let mut s = State::vacuum();
        for m in word.iter().rev() {
            s = self.apply_mode(*m, &s)?;
            if s.is_zero() {
                break;
            }
        }
        Ok(s)
    }

    pub fn normal_order_with(&self, word: &[Mode], schedule: Schedule) -> Result<State, AlgebraError> {
        match schedule {
            Schedule::Fold => self.normal_order(word),
            Schedule::LeftmostInversion => self.bubble(word, true),
            Schedule::RightmostInversion => self.bubble(word, false),
        }
    }

    fn apply_word(&self, m: Mode, w: &[Mode]) -> Result<Arc<State>, AlgebraError> {
        let spec = &*self.spec;
        if word_weight(w) < m.index {
            return Ok(Arc::new(State::zero()));
        }
        let generator = spec.is_generator(m.field);
        if generator {
            let creation = m.index <= -spec.weight(m.field);
            if w.is_empty() {
                return Ok(Arc::new(if creation {
                    State::from_modes(&[m])
                } else {
                    State::zero()
                }));
            }
            if creation && m <= w[0] {
                let mut word = Word::with_capacity(w.len() + 1);
                word.push(m);
                word.extend_from_slice(w);
                return Ok(Arc::new(State::word(word, Poly::one())));
            }
        }
        let key = (m, Word::from_slice(w));
        if let Some(hit) = self.apply_cache.read().get(&key) {
            return Ok(hit.clone());
        }
        let result = if generator {
            let (first, rest) = (w[0], &w[1..]);
            let inner = self.apply_word(m, rest)?;
            let mut out = self.apply_mode(first, &inner)?;
            let br = self.bracket(m, first)?;
            for (mode, c) in &br.modes {
                out.add_scaled(&*self.apply_word(*mode, rest)?, c);
            }
            if !br.central.is_zero() {
                out.add_term(Word::from_slice(rest), br.central.clone());
            }
            out
        } else {
            let def = spec.definition(m.field).expect("composite fields carry a definition");
            self.field_word(def, m.index, w)?
        };
        let result = Arc::new(result);
        self.apply_cache.write().insert(key, result.clone());
        Ok(result)
    }

    /// Mode `f_n` of a field expression applied to a state.
    pub fn field_mode_apply(&self, f: &FieldExpr, n: i64, s: &State) -> Result<State, AlgebraError> {
        let mut out = State::zero();
        for (w, c) in s.terms() {
            out.add_scaled(&self.field_word(f, n, w)?, c);
        }
        Ok(out)
    }

    fn field_word(&self, f: &FieldExpr, n: i64, w: &[Mode]) -> Result<State, AlgebraError> {
        let w0 = word_weight(w);
        if w0 < n {
            return Ok(State::zero());
        }
        match f {
            FieldExpr::Identity => Ok(if n == 0 {
                State::word(Word::from_slice(w), Poly::one())
            } else {
                State::zero()
            }),
            FieldExpr::Field(id) => Ok((*self.apply_word(Mode::new(*id, n), w)?).clone()),
            FieldExpr::Derivative(g, k) => {
                let h = g.weight(&self.spec)?;
                let mut factor = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
                for j in 0..*k as i64 {
                    factor *= int(n + h + j);
                }
                if factor.is_zero() {
                    return Ok(State::zero());
                }
                Ok(self.field_word(g, n, w)?.scale(&Poly::constant(factor)))
            }
            FieldExpr::Nprod { order, left, right } => {
                let mut out = State::zero();
                let single = State::word(Word::from_slice(w), Poly::one());
                for k in -w0..*order {
                    let inner = self.field_word(right, -k, w)?;
                    if !inner.is_zero() {
                        out += &self.field_mode_apply(left, n + k, &inner)?;
                    }
                }
                for k in *order..=(w0 - n) {
                    let inner = self.field_mode_apply(left, n + k, &single)?;
                    if !inner.is_zero() {
                        out += &self.field_mode_apply(right, -k, &inner)?;
                    }
                }
                Ok(out)
            }
            FieldExpr::QPNop {
                left,
                right,
                derivatives,
            } => {
                let expanded = self.qp_nop(*left, *right, *derivatives)?;
                self.field_word(&expanded, n, w)
            }
            FieldExpr::LinComb(terms) => {
                let mut out = State::zero();
                for (c, g) in terms {
                    out.add_scaled(&self.field_word(g, n, w)?, c);
                }
                Ok(out)
            }
        }
    }

    /// Expansion of the quasi-primary normal-ordered product `N(phi_j, d^n phi_i)`.
    pub fn qp_nop(&self, j: FieldId, i: FieldId, n: u32) -> Result<FieldExpr, AlgebraError> {
        if let Some(hit) = self.qp_cache.read().get(&(j, i, n)) {
            return Ok((**hit).clone());
        }
        let spec = &*self.spec;
        let (hi, hj) = (spec.weight(i), spec.weight(j));
        let ni = n as i64;
        let big_h = hi + hj + ni;
        let total = 2 * (big_h - 1);
        let mut terms = Vec::new();
        // Quasi-primary projection of the r = 0 term, sum_s (-1)^s L_{-1}^s L_1^s / (s! (2H-2)_s).
        for r in 0..=n {
            let sign = if r % 2 == 0 { int(1) } else { int(-1) };
            let coeff = sign * binom_int(ni, r) * binom_int(2 * hi + ni - 1, r) / binom_int(total, r);
            let body = FieldExpr::nprod(
                hi + ni - r as i64,
                FieldExpr::Field(j),
                FieldExpr::Field(i).derivative(n - r),
            );
            terms.push((Poly::constant(coeff), body.derivative(r)));
        }
        let channels = spec.channels(i, j).unwrap_or_default();
        if self.policy == ChannelPolicy::Strict {
            for k in spec.field_ids() {
                if hi + hj - spec.weight(k) >= 1 && !channels.iter().any(|(kk, _)| *kk == k) {
                    return Err(AlgebraError::MissingConstant {
                        i: spec.name(i).into(),
                        j: spec.name(j).into(),
                        k: spec.name(k).into(),
                    });
                }
            }
        }
        // Singular terms reached by the projection once s exceeds n.
        for (k, c) in channels {
            let hk = spec.weight(k);
            let h = hi + hj - hk;
            let mut coeff = Rat::zero();
            for s in (ni + 1)..=(ni + h) {
                let l = h + ni - s;
                let sign = if s % 2 == 0 { int(1) } else { int(-1) };
                let ope = rising(hi - hj + hk, l) / (rising(2 * hk, l) * factorial_rat(l));
                coeff += sign * falling(2 * hi + ni - 1, s) * ope / (factorial_rat(s) * falling(total, s));
            }
            coeff *= factorial_rat(ni);
            if !coeff.is_zero() {
                terms.push((c.scale(&coeff), FieldExpr::Field(k).derivative((h + ni) as u32)));
            }
        }
        let expr = FieldExpr::LinComb(terms);
        self.qp_cache.write().insert((j, i, n), Arc::new(expr.clone()));
        Ok(expr)
    }

    /// The field whose `-h` mode creates `s` from the vacuum.
    pub fn field_of_state(&self, s: &State) -> Result<FieldExpr, AlgebraError> {
        s.weight()?;
        let mut terms = Vec::new();
        for (w, c) in s.terms() {
            terms.push((c.clone(), self.field_of_word(w)));
        }
        Ok(FieldExpr::LinComb(terms))
    }

    fn field_of_word(&self, w: &[Mode]) -> FieldExpr {
        let Some((first, rest)) = w.split_first() else {
            return FieldExpr::Identity;
        };
        let h = self.spec.weight(first.field);
        let k = (-first.index - h) as u32;
        let scale = Poly::constant(Rat::new(BigInt::one(), factorial(k)));
        let head = FieldExpr::Field(first.field).derivative(k);
        let body = if rest.is_empty() {
            head
        } else {
            FieldExpr::nprod(h + k as i64, self.field_of_word(rest), head)
        };
        FieldExpr::LinComb(vec![(scale, body)])
    }

    fn bubble(&self, word: &[Mode], leftmost: bool) -> Result<State, AlgebraError> {
        let spec = &*self.spec;
        let mut out = State::zero();
        let mut work: BTreeMap<Word, Poly> = BTreeMap::new();
        work.insert(Word::from_slice(word), Poly::one());
        let creation = |m: &Mode| m.is_creation(spec);
        while let Some((w, c)) = work.pop_first() {
            let push = |work: &mut BTreeMap<Word, Poly>, w: Word, c: Poly| {
                if c.is_zero() {
                    return;
                }
                let slot = work.entry(w.clone()).or_default();
                *slot += &c;
                if slot.is_zero() {
                    work.remove(&w);
                }
            };
            if let Some(pos) = w.iter().position(|m| !spec.is_generator(m.field)) {
                let tail = self.normal_order(&w[pos..])?;
                for (tw, tc) in tail.terms() {
                    let mut nw = Word::from_slice(&w[..pos]);
                    nw.extend_from_slice(tw);
                    push(&mut work, nw, &c * tc);
                }
                continue;
            }
            if w.last().is_some_and(|m| !creation(m)) || word_weight(&w) < 0 {
                continue;
            }
            let inversion = |i: &usize| {
                let (x, y) = (&w[*i], &w[*i + 1]);
                (!creation(x) && creation(y)) || (creation(x) && creation(y) && x > y)
            };
            let mut positions = 0..w.len().saturating_sub(1);
            let found = if leftmost {
                positions.find(inversion)
            } else {
                positions.rev().find(inversion)
            };
            let Some(i) = found else {
                out.add_term(w, c);
                continue;
            };
            let mut swapped = w.clone();
            swapped.swap(i, i + 1);
            push(&mut work, swapped, c.clone());
            let br = self.bracket(w[i], w[i + 1])?;
            for (mode, bc) in &br.modes {
                let mut nw = Word::from_slice(&w[..i]);
                nw.push(*mode);
                nw.extend_from_slice(&w[i + 2..]);
                push(&mut work, nw, &c * bc);
            }
            if !br.central.is_zero() {
                let mut nw = Word::from_slice(&w[..i]);
                nw.extend_from_slice(&w[i + 2..]);
                push(&mut work, nw, &c * &br.central);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn vir() -> Engine {
        Engine::new(AlgebraSpec::virasoro(Poly::var("c")))
    }

    #[test]
    fn small_brackets() {
        let e = vir();
        let l = |n| e.mode("T", n).unwrap();
        let br = e.bracket(l(2), l(-2)).unwrap();
        assert_eq!(br.central, Poly::var("c").scale(&rat(1, 2)));
        assert_eq!(br.modes.get(&l(0)), Some(&Poly::from_int(4)));
    }

    #[test]
    fn vacuum_rules() {
        let e = vir();
        let l = |n| e.mode("T", n).unwrap();
        let s = State::from_modes(&[l(-2)]);
        assert!(e.apply_mode(l(1), &s).unwrap().is_zero());
        assert_eq!(e.apply_mode(l(2), &s).unwrap(), State::vacuum().scale(&Poly::var("c").scale(&rat(1, 2))));
        assert!(e.normal_order(&[l(2), l(-3)]).unwrap().is_zero());
        let s = e.normal_order(&[l(-2), l(-4)]).unwrap();
        let mut want = State::from_modes(&[l(-4), l(-2)]);
        want.add_term([l(-6)].into_iter().collect(), Poly::from_int(2));
        assert_eq!(s, want);
    }

    #[test]
    fn derivative_mode() {
        let e = vir();
        let t = e.spec().lookup("T").unwrap();
        let f = FieldExpr::Field(t).derivative(1);
        let got = e.field_mode_apply(&f, -3, &State::vacuum()).unwrap();
        assert_eq!(got, State::from_modes(&[Mode::new(t, -3)]));
    }

    #[test]
    fn missing_bracket() {
        let mut spec = AlgebraSpec::virasoro(Poly::from_int(0));
        spec.add_generator("W", 3).unwrap();
        let e = Engine::new(spec);
        let w = e.mode("W", -3).unwrap();
        let t = e.mode("T", 1).unwrap();
        assert!(matches!(e.bracket(t, w), Err(AlgebraError::MissingBracket(..))));
    }

    #[test]
    fn strict_policy() {
        let mut spec = AlgebraSpec::virasoro(Poly::var("c"));
        let t = spec.lookup("T").unwrap();
        let w = spec.add_generator("W", 3).unwrap();
        spec.add_constant(t, w, w, Poly::from_int(3)).unwrap();
        let e = Engine::new(spec.clone()).with_policy(ChannelPolicy::Strict);
        assert!(matches!(e.qp_nop(t, w, 0), Err(AlgebraError::MissingConstant { .. })));
        let e = Engine::new(spec);
        assert!(e.qp_nop(t, w, 0).is_ok());
    }
}

fn rising(x: i64, k: i64) -> Rat {
    (0..k).fold(int(1), |acc, t| acc * int(x + t))
}

fn falling(x: i64, k: i64) -> Rat {
    (0..k).fold(int(1), |acc, t| acc * int(x - t))
}

fn factorial_rat(k: i64) -> Rat {
    Rat::from_integer(factorial(k as u32))
}
