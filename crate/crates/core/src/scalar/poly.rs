use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use super::rat::{int, Rat};

/// Name of the reserved imaginary unit symbol.
pub const IMAGINARY_UNIT: &str = "I";

/// A named indeterminate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym(Arc<str>);

impl Sym {
    pub fn new(name: &str) -> Self {
        Sym(Arc::from(name))
    }

    pub fn imaginary() -> Self {
        Sym::new(IMAGINARY_UNIT)
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_imaginary(&self) -> bool {
        &*self.0 == IMAGINARY_UNIT
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Product of symbol powers, sorted by symbol name. The imaginary unit never
/// appears with a power above one.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[(Sym, u32); 2]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(s: Sym) -> Self {
        let mut v = SmallVec::new();
        v.push((s, 1));
        Monomial(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = &(Sym, u32)> {
        self.0.iter()
    }

    pub fn degree_in(&self, s: &Sym) -> u32 {
        self.0
            .iter()
            .find(|(t, _)| t == s)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    fn without(&self, s: &Sym) -> Monomial {
        Monomial(self.0.iter().filter(|(t, _)| t != s).cloned().collect())
    }

    /// Product of two monomials together with the sign produced by `I^2 = -1`.
    fn mul(&self, other: &Monomial) -> (Monomial, bool) {
        let mut out: SmallVec<[(Sym, u32); 2]> = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let next = match (self.0.get(i), other.0.get(j)) {
                (Some(a), Some(b)) if a.0 == b.0 => {
                    i += 1;
                    j += 1;
                    (a.0.clone(), a.1 + b.1)
                }
                (Some(a), Some(b)) if a.0 < b.0 => {
                    i += 1;
                    a.clone()
                }
                (Some(a), None) => {
                    i += 1;
                    a.clone()
                }
                (_, Some(b)) => {
                    j += 1;
                    b.clone()
                }
                (None, None) => unreachable!(),
            };
            out.push(next);
        }
        let mut negate = false;
        out.retain(|(s, e)| {
            if s.is_imaginary() {
                if *e / 2 % 2 == 1 {
                    negate = true;
                }
                *e %= 2;
                *e == 1
            } else {
                true
            }
        });
        (Monomial(out), negate)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (s, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Multivariate polynomial with exact rational coefficients over named
/// symbols, with `I` acting as the imaginary unit.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(r: Rat) -> Self {
        let mut p = Poly::zero();
        if !r.is_zero() {
            p.terms.insert(Monomial::one(), r);
        }
        p
    }

    pub fn from_int(v: i64) -> Self {
        Poly::constant(int(v))
    }

    pub fn sym(s: &Sym) -> Self {
        Poly::term(Rat::one(), Monomial::var(s.clone()))
    }

    pub fn var(name: &str) -> Self {
        Poly::sym(&Sym::new(name))
    }

    pub fn i() -> Self {
        Poly::sym(&Sym::imaginary())
    }

    pub fn term(coeff: Rat, mono: Monomial) -> Self {
        let mut p = Poly::zero();
        p.add_term(mono, coeff);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value of a symbol-free polynomial.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn symbols(&self) -> BTreeSet<Sym> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().map(|(s, _)| s.clone()))
            .collect()
    }

    pub fn degree_in(&self, s: &Sym) -> u32 {
        self.terms.keys().map(|m| m.degree_in(s)).max().unwrap_or(0)
    }

    /// Coefficient of `s^power`, viewing the polynomial as univariate in `s`.
    pub fn coeff_of(&self, s: &Sym, power: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.degree_in(s) == power {
                out.add_term(m.without(s), c.clone());
            }
        }
        out
    }

    /// Whether every term carries at least one factor of `s`.
    pub fn divisible_by(&self, s: &Sym) -> bool {
        self.terms.keys().all(|m| m.degree_in(s) > 0)
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, factor: &Rat) {
        if factor.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * factor);
        }
    }

    pub fn scale(&self, factor: &Rat) -> Poly {
        if factor.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn mul_poly(&self, other: &Poly) -> Poly {
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let (m, negate) = ma.mul(mb);
                let c = ca * cb;
                out.add_term(m, if negate { -c } else { c });
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul_poly(self))
    }

    /// Replaces every occurrence of `s` by `value`.
    pub fn substitute(&self, s: &Sym, value: &Poly) -> Poly {
        let deg = self.degree_in(s);
        if deg == 0 {
            return self.clone();
        }
        let mut out = Poly::zero();
        for k in 0..=deg {
            let c = self.coeff_of(s, k);
            if !c.is_zero() {
                out += &c.mul_poly(&value.pow(k));
            }
        }
        out
    }

    pub fn substitute_all(&self, assignment: &BTreeMap<Sym, Poly>) -> Poly {
        assignment
            .iter()
            .fold(self.clone(), |acc, (s, v)| acc.substitute(s, v))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl From<Rat> for Poly {
    fn from(r: Rat) -> Self {
        Poly::constant(r)
    }
}

impl From<i64> for Poly {
    fn from(v: i64) -> Self {
        Poly::from_int(v)
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_poly(rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat::rat;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn imaginary_unit_squares_to_minus_one() {
        assert_eq!(&Poly::i() * &Poly::i(), Poly::from_int(-1));
        assert_eq!(Poly::i().pow(3), -Poly::i());
        assert_eq!(Poly::i().pow(4), Poly::one());
    }

    #[test]
    fn basic_ring_operations() {
        assert_eq!(&p("C + B") + &p("C - B"), p("2*C"));
        assert_eq!(p("3/2*C").scale(&rat(2, 3)), p("C"));
        assert_eq!(&p("C + B") * &p("C - B"), p("C^2 - B^2"));
        assert!((&p("B") - &p("B")).is_zero());
    }

    #[test]
    fn display_is_ordered_and_signed() {
        assert_eq!(p("C - 11/18*B").to_string(), "-11/18*B + C");
        assert_eq!(p("-C").to_string(), "-C");
        assert_eq!(p("2 + I*x^2").to_string(), "2 + I*x^2");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn substitution_and_coefficients() {
        let q = p("xi1 - 3*B - C");
        let s = q.substitute(&Sym::new("xi1"), &p("3*B + C"));
        assert!(s.is_zero());
        assert_eq!(p("B^2*C + 4*C").coeff_of(&Sym::new("C"), 1), p("B^2 + 4"));
        assert!(p("13/12*C").divisible_by(&Sym::new("C")));
        assert!(!p("C + 1").divisible_by(&Sym::new("C")));
    }
}
