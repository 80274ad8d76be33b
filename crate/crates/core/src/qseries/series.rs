use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::QSeriesError;
use crate::scalar::{fmt_rat, int, lcm, Rat};

/// Truncated series `sum_n a_n q^(offset + n/D)`, exact for `n <= cutoff`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    denom: u64,
    offset: Rat,
    coeffs: BTreeMap<u64, Rat>,
    cutoff: u64,
}

impl QSeries {
    /// The zero series, valid up to `cutoff` lattice steps above `offset`.
    pub fn zero(denom: u64, offset: Rat, cutoff: u64) -> Self {
        assert!(denom > 0, "lattice denominator must be positive");
        QSeries { denom, offset, coeffs: BTreeMap::new(), cutoff }
    }

    /// `q^offset`, valid to `cutoff` lattice steps.
    pub fn one(denom: u64, offset: Rat, cutoff: u64) -> Self {
        let mut s = Self::zero(denom, offset, cutoff);
        s.set(0, int(1));
        s
    }

    /// Integer-lattice series from `(power, coefficient)` pairs, exact up to `q^cutoff`.
    pub fn from_powers(cutoff: u64, terms: impl IntoIterator<Item = (u64, Rat)>) -> Self {
        let mut s = Self::zero(1, Rat::zero(), cutoff);
        for (n, c) in terms {
            if n <= cutoff {
                let cur = s.coeff_index(n);
                s.set(n, cur + c);
            }
        }
        s
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn offset(&self) -> &Rat {
        &self.offset
    }

    /// Highest level, relative to the offset, at which coefficients are exact.
    pub fn cutoff(&self) -> Rat {
        Rat::new(BigInt::from(self.cutoff), BigInt::from(self.denom))
    }

    /// Nonzero coefficients keyed by lattice index.
    pub fn coeffs(&self) -> &BTreeMap<u64, Rat> {
        &self.coeffs
    }

    fn coeff_index(&self, n: u64) -> Rat {
        self.coeffs.get(&n).cloned().unwrap_or_else(Rat::zero)
    }

    fn set(&mut self, n: u64, c: Rat) {
        if c.is_zero() {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, c);
        }
    }

    /// Same series on a lattice whose denominator is a multiple of the current one.
    pub fn rescale(&self, denom: u64) -> Self {
        assert!(denom % self.denom == 0, "target lattice must refine the current one");
        let f = denom / self.denom;
        QSeries {
            denom,
            offset: self.offset.clone(),
            coeffs: self.coeffs.iter().map(|(n, c)| (n * f, c.clone())).collect(),
            cutoff: self.cutoff * f,
        }
    }

    /// Multiply by `q^shift`.
    pub fn shift(&self, shift: &Rat) -> Self {
        let mut s = self.clone();
        s.offset += shift;
        s
    }

    /// Move the offset onto the lowest nonzero exponent.
    pub fn normalized(&self) -> Self {
        let Some(&first) = self.coeffs.keys().next() else {
            return self.clone();
        };
        QSeries {
            denom: self.denom,
            offset: &self.offset + Rat::new(BigInt::from(first), BigInt::from(self.denom)),
            coeffs: self.coeffs.iter().map(|(n, c)| (n - first, c.clone())).collect(),
            cutoff: self.cutoff - first,
        }
    }

    pub fn scale(&self, k: &Rat) -> Self {
        let mut s = Self::zero(self.denom, self.offset.clone(), self.cutoff);
        for (n, c) in &self.coeffs {
            s.set(*n, c * k);
        }
        s
    }

    fn lattice_steps(&self, delta: &Rat) -> Option<i64> {
        let steps = delta * int(self.denom as i64);
        steps.is_integer().then(|| steps.to_integer().to_i64()).flatten()
    }

    /// Sum of two series on their common lattice.
    pub fn try_add(&self, other: &QSeries) -> Result<QSeries, QSeriesError> {
        let d = lcm(self.denom, other.denom);
        let (a, b) = (self.rescale(d), other.rescale(d));
        let (lo, hi) = if a.offset <= b.offset { (a, b) } else { (b, a) };
        let gap = lo
            .lattice_steps(&(&hi.offset - &lo.offset))
            .ok_or_else(|| QSeriesError::OffLattice(fmt_rat(&(&hi.offset - &lo.offset))))?
            as u64;
        let cutoff = lo.cutoff.min(hi.cutoff + gap);
        let mut out = QSeries::zero(d, lo.offset.clone(), cutoff);
        for (n, c) in &lo.coeffs {
            if *n <= cutoff {
                out.set(*n, c.clone());
            }
        }
        for (n, c) in &hi.coeffs {
            let m = n + gap;
            if m <= cutoff {
                let cur = out.coeff_index(m);
                out.set(m, cur + c);
            }
        }
        Ok(out)
    }

    /// Product; exact up to the smaller of the two cutoffs.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let d = lcm(self.denom, other.denom);
        let (a, b) = (self.rescale(d), other.rescale(d));
        let cutoff = a.cutoff.min(b.cutoff);
        let mut acc: BTreeMap<u64, Rat> = BTreeMap::new();
        for (i, x) in &a.coeffs {
            if *i > cutoff {
                break;
            }
            for (j, y) in &b.coeffs {
                if i + j > cutoff {
                    break;
                }
                *acc.entry(i + j).or_insert_with(Rat::zero) += x * y;
            }
        }
        let mut out = QSeries::zero(d, &a.offset + &b.offset, cutoff);
        for (n, c) in acc {
            out.set(n, c);
        }
        out
    }

    /// Multiplicative inverse; requires a nonzero leading coefficient at index 0.
    pub fn inverse(&self) -> Result<QSeries, QSeriesError> {
        let a0 = self.coeff_index(0);
        if a0.is_zero() {
            return Err(QSeriesError::Argument("series has no constant term to invert".into()));
        }
        let inv0 = a0.recip();
        let mut out = QSeries::zero(self.denom, -self.offset.clone(), self.cutoff);
        let mut b: Vec<Rat> = vec![Rat::zero(); self.cutoff as usize + 1];
        b[0] = inv0.clone();
        for n in 1..=self.cutoff as usize {
            let mut s = Rat::zero();
            for (k, ak) in self.coeffs.range(1..=n as u64) {
                let bk = &b[n - *k as usize];
                if !bk.is_zero() {
                    s += ak * bk;
                }
            }
            b[n] = -(s * &inv0);
        }
        for (n, c) in b.into_iter().enumerate() {
            out.set(n as u64, c);
        }
        Ok(out)
    }

    /// Coefficient of `q^(offset + level)`.
    pub fn coeff_at_level(&self, level: &Rat) -> Result<Rat, QSeriesError> {
        let n = self.lattice_steps(level).ok_or_else(|| QSeriesError::OffLattice(fmt_rat(level)))?;
        if n < 0 {
            return Ok(Rat::zero());
        }
        if n as u64 > self.cutoff {
            return Err(QSeriesError::BeyondCutoff { level: fmt_rat(level), cutoff: fmt_rat(&self.cutoff()) });
        }
        Ok(self.coeff_index(n as u64))
    }

    /// Nonzero terms as `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> Vec<(Rat, Rat)> {
        let d = BigInt::from(self.denom);
        self.coeffs
            .iter()
            .map(|(n, c)| (&self.offset + Rat::new(BigInt::from(*n), d.clone()), c.clone()))
            .collect()
    }

    /// One `exponent: coefficient` line per nonzero term.
    pub fn lines(&self) -> Vec<String> {
        self.terms().iter().map(|(e, c)| format!("{}: {}", fmt_rat(e), fmt_rat(c))).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Doc {
            offset: String,
            denominator: u64,
            cutoff: String,
            terms: Vec<[String; 2]>,
        }
        serde_json::to_value(Doc {
            offset: fmt_rat(&self.offset),
            denominator: self.denom,
            cutoff: fmt_rat(&self.cutoff()),
            terms: self.terms().iter().map(|(e, c)| [fmt_rat(e), fmt_rat(c)]).collect(),
        })
        .expect("plain strings serialize")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Difference of coefficients at the same level; both series must share their offset.
pub fn diff_at_level(a: &QSeries, b: &QSeries, level: &Rat) -> Result<Rat, QSeriesError> {
    if a.offset != b.offset {
        return Err(QSeriesError::Argument(format!(
            "offsets differ: {} vs {}",
            fmt_rat(&a.offset),
            fmt_rat(&b.offset)
        )));
    }
    Ok(a.coeff_at_level(level)? - b.coeff_at_level(level)?)
}

/// `a - b`, exact up to the smaller cutoff.
pub fn sub(a: &QSeries, b: &QSeries) -> Result<QSeries, QSeriesError> {
    a.try_add(&b.scale(&-Rat::one()))
}
