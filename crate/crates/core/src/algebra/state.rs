use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use super::spec::{AlgebraSpec, FieldId};
use crate::error::AlgebraError;
use crate::scalar::{Poly, Rat, Sym};

/// Mode `phi_index` in the physics convention `phi(x) = sum phi_n x^(-n-h)`.
///
/// Field order is `(index, field)`, which is exactly the canonical PBW order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub index: i64,
    pub field: FieldId,
}

impl Mode {
    pub fn new(field: FieldId, index: i64) -> Self {
        Mode { index, field }
    }

    /// True when the mode may appear in a canonical word, i.e. `index <= -h`.
    pub fn is_creation(&self, spec: &AlgebraSpec) -> bool {
        spec.is_generator(self.field) && self.index <= -spec.weight(self.field)
    }

    pub fn display<'a>(&'a self, spec: &'a AlgebraSpec) -> impl fmt::Display + 'a {
        ModeDisplay(self, spec)
    }

    /// Parses `NAME(index)`, the form produced by [`Mode::display`].
    pub fn parse(text: &str, spec: &AlgebraSpec) -> Result<Mode, AlgebraError> {
        let text = text.trim();
        let bad = || AlgebraError::StateSyntax(text.to_string());
        let open = text.rfind('(').ok_or_else(bad)?;
        let idx = text[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let index: i64 = idx.trim().parse().map_err(|_| bad())?;
        Ok(Mode::new(spec.lookup(&text[..open])?, index))
    }
}

struct ModeDisplay<'a>(&'a Mode, &'a AlgebraSpec);

impl fmt::Display for ModeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.1.name(self.0.field), self.0.index)
    }
}

/// Modes applied left to right to the vacuum.
pub type Word = SmallVec<[Mode; 8]>;

pub fn word_weight(word: &[Mode]) -> i64 {
    -word.iter().map(|m| m.index).sum::<i64>()
}

pub fn is_canonical(word: &[Mode], spec: &AlgebraSpec) -> bool {
    word.iter().all(|m| m.is_creation(spec)) && word.windows(2).all(|w| w[0] <= w[1])
}

/// All canonical words of the given weight over the generators of `spec`,
/// in ascending word order.
pub fn canonical_words(spec: &AlgebraSpec, weight: i64) -> Vec<Word> {
    let mut modes: Vec<Mode> = spec
        .generators()
        .flat_map(|g| (spec.weight(g)..=weight).map(move |k| Mode::new(g, -k)))
        .collect();
    modes.sort();
    let mut out = Vec::new();
    let mut word = Word::new();
    fn rec(modes: &[Mode], start: usize, left: i64, word: &mut Word, out: &mut Vec<Word>) {
        if left == 0 {
            out.push(word.clone());
            return;
        }
        for (i, m) in modes.iter().enumerate().skip(start) {
            if -m.index <= left {
                word.push(*m);
                rec(modes, i, left + m.index, word, out);
                word.pop();
            }
        }
    }
    rec(&modes, 0, weight, &mut word, &mut out);
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexDirection {
    PhysicsToMath,
    MathToPhysics,
}

/// `n_math = n_phys + h - 1`.
pub fn convert_index(n: i64, weight: i64, direction: IndexDirection) -> i64 {
    match direction {
        IndexDirection::PhysicsToMath => n + weight - 1,
        IndexDirection::MathToPhysics => n - weight + 1,
    }
}

/// Finite linear combination of PBW words applied to the vacuum.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct State {
    terms: BTreeMap<Word, Poly>,
}

impl State {
    pub fn zero() -> Self {
        State::default()
    }

    pub fn vacuum() -> Self {
        State::word(Word::new(), Poly::one())
    }

    pub fn word(word: Word, coeff: Poly) -> Self {
        let mut s = State::zero();
        s.add_term(word, coeff);
        s
    }

    pub fn from_modes(modes: &[Mode]) -> Self {
        State::word(modes.iter().copied().collect(), Poly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Poly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &[Mode]) -> Poly {
        self.terms.get(word).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, word: Word, coeff: Poly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &State, factor: &Poly) {
        if factor.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c * factor);
        }
    }

    pub fn add_scaled_rat(&mut self, other: &State, factor: &Rat) {
        self.add_scaled(other, &Poly::constant(factor.clone()));
    }

    pub fn scale(&self, factor: &Poly) -> State {
        let mut out = State::zero();
        out.add_scaled(self, factor);
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> State {
        let mut out = State::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    pub fn substitute_all(&self, assignment: &BTreeMap<Sym, Poly>) -> State {
        self.map_coeffs(|c| c.substitute_all(assignment))
    }

    /// Common weight of all words, `None` for the zero state.
    pub fn weight(&self) -> Result<Option<i64>, AlgebraError> {
        let mut it = self.terms.keys().map(|w| word_weight(w));
        let Some(first) = it.next() else {
            return Ok(None);
        };
        if it.any(|w| w != first) {
            return Err(AlgebraError::InhomogeneousState);
        }
        Ok(Some(first))
    }

    pub fn max_weight(&self) -> Option<i64> {
        self.terms.keys().map(|w| word_weight(w)).max()
    }

    /// Keeps exactly the words with at least `min_len` modes.
    pub fn project_min_length(&self, min_len: usize) -> State {
        self.filter(|w| w.len() >= min_len)
    }

    pub fn filter(&self, keep: impl Fn(&Word) -> bool) -> State {
        State {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Words built only from the given field.
    pub fn only_field(&self, field: FieldId) -> State {
        self.filter(|w| w.iter().all(|m| m.field == field))
    }

    pub fn display<'a>(&'a self, spec: &'a AlgebraSpec) -> impl fmt::Display + 'a {
        StateDisplay(self, spec)
    }

    /// Parses the format produced by [`State::display`]. Words are normalized
    /// only in the sense that equal words merge; no reordering takes place.
    pub fn parse(text: &str, spec: &AlgebraSpec) -> Result<State, AlgebraError> {
        let text = text.trim();
        let mut out = State::zero();
        if text == "0" {
            return Ok(out);
        }
        for term in split_top_level(text) {
            let term = term.trim();
            let bad = || AlgebraError::StateSyntax(term.to_string());
            let rest = term.strip_prefix('(').ok_or_else(bad)?;
            let close = matching_paren(rest).ok_or_else(bad)?;
            let coeff: Poly = rest[..close].parse()?;
            let body = rest[close + 1..].trim();
            let body = body.strip_suffix("|0>").ok_or_else(bad)?;
            let mut word = Word::new();
            for tok in body.split_whitespace() {
                let open = tok.rfind('(').ok_or_else(bad)?;
                let idx = tok[open + 1..].strip_suffix(')').ok_or_else(bad)?;
                let index: i64 = idx.parse().map_err(|_| bad())?;
                word.push(Mode::new(spec.lookup(&tok[..open])?, index));
            }
            out.add_term(word, coeff);
        }
        Ok(out)
    }
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 1usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' if depth == 0 && i > 0 && bytes[i - 1] == b' ' && bytes.get(i + 1) == Some(&b' ') => {
                parts.push(&s[start..i - 1]);
                start = i + 2;
            }
            _ => {}
        }
        i += 1;
    }
    parts.push(&s[start..]);
    parts
}

struct StateDisplay<'a>(&'a State, &'a AlgebraSpec);

impl fmt::Display for StateDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            return f.write_str("0");
        }
        for (idx, (w, c)) in self.0.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for m in w {
                write!(f, " {}", m.display(self.1))?;
            }
            f.write_str(" |0>")?;
        }
        Ok(())
    }
}

impl std::ops::AddAssign<&State> for State {
    fn add_assign(&mut self, rhs: &State) {
        self.add_scaled(rhs, &Poly::one());
    }
}

impl std::ops::SubAssign<&State> for State {
    fn sub_assign(&mut self, rhs: &State) {
        self.add_scaled(rhs, &Poly::from_int(-1));
    }
}

impl std::ops::Sub<&State> for &State {
    type Output = State;
    fn sub(self, rhs: &State) -> State {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl std::ops::Add<&State> for &State {
    type Output = State;
    fn add(self, rhs: &State) -> State {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> AlgebraSpec {
        let mut spec = AlgebraSpec::virasoro(Poly::from_int(-2));
        spec.add_generator("W+", 3).unwrap();
        spec
    }

    #[test]
    fn index_conversion() {
        assert_eq!(convert_index(-2, 2, IndexDirection::PhysicsToMath), -1);
        assert_eq!(convert_index(-3, 3, IndexDirection::PhysicsToMath), -1);
        assert_eq!(convert_index(-2, 2, IndexDirection::MathToPhysics), -3);
    }

    #[test]
    fn projection() {
        let spec = spec();
        let t = spec.lookup("T").unwrap();
        let l = |n| Mode::new(t, n);
        let mut s = State::vacuum();
        s.add_term([l(-4), l(-2), l(-2), l(-2)].into_iter().collect(), Poly::var("beta"));
        s.add_term([l(-4), l(-4), l(-2)].into_iter().collect(), Poly::var("delta"));
        let p = s.project_min_length(4);
        assert_eq!(p.len(), 1);
        assert_eq!(p.coeff(&[l(-4), l(-2), l(-2), l(-2)]), Poly::var("beta"));
        assert_eq!(s.project_min_length(0), s);
        assert!(State::vacuum().project_min_length(1).is_zero());
    }

    #[test]
    fn display_round_trip() {
        let spec = spec();
        let t = spec.lookup("T").unwrap();
        let w = spec.lookup("W+").unwrap();
        let mut s = State::vacuum().scale(&"C + I/2".parse().unwrap());
        s.add_term([Mode::new(w, -4), Mode::new(t, -2)].into_iter().collect(), Poly::from_int(-2));
        let text = s.display(&spec).to_string();
        assert_eq!(text, "(I/2 + C) |0> + (-2) W+(-4) T(-2) |0>".replace("I/2 + C", &"C + I/2".parse::<Poly>().unwrap().to_string()));
        assert_eq!(State::parse(&text, &spec).unwrap(), s);
        assert_eq!(State::parse("0", &spec).unwrap(), State::zero());
        assert!(State::parse("(1) X(-2) |0>", &spec).is_err());
    }

    #[test]
    fn enumerates_words() {
        let spec = spec();
        assert_eq!(canonical_words(&spec, 0).len(), 1);
        assert_eq!(canonical_words(&spec, 1).len(), 0);
        // four pure T words; W(-6), W(-4) T(-2), T(-3) W(-3), W(-3) W(-3)
        let words = canonical_words(&spec, 6);
        assert!(words.iter().all(|w| is_canonical(w, &spec) && word_weight(w) == 6));
        assert_eq!(words.len(), 8);
    }

    #[test]
    fn canonical_order() {
        let spec = spec();
        let t = spec.lookup("T").unwrap();
        let w = spec.lookup("W+").unwrap();
        assert!(is_canonical(&[Mode::new(t, -3), Mode::new(w, -3)], &spec));
        assert!(!is_canonical(&[Mode::new(w, -3), Mode::new(t, -3)], &spec));
        assert!(!is_canonical(&[Mode::new(w, -2)], &spec));
    }
}
