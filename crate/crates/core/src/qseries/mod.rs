//! Exact truncated q-series and the characters built from them.
//!
//! Every character is normalized so its offset is the exponent of the vacuum
//! term; "level" means the integer distance above that exponent.

mod series;

pub use series::{diff_at_level, sub, QSeries};

use num_traits::Zero;

use crate::algebra::presets::central_charge_p1;
use crate::error::QSeriesError;
use crate::scalar::{int, lcm, rat, Rat};

/// `prod_{n >= 1} (1 - q^n)` to order `cutoff`.
pub fn phi(cutoff: u64) -> QSeries {
    phi_trunc_raw(1, cutoff)
}

/// `prod_{n >= k} (1 - q^n)` to order `cutoff`.
pub fn phi_trunc(k: u64, cutoff: u64) -> Result<QSeries, QSeriesError> {
    if k < 2 {
        return Err(QSeriesError::Argument(format!("truncation index must be at least 2, got {k}")));
    }
    Ok(phi_trunc_raw(k, cutoff))
}

fn phi_trunc_raw(k: u64, cutoff: u64) -> QSeries {
    let mut c = vec![Rat::zero(); cutoff as usize + 1];
    c[0] = int(1);
    for n in k..=cutoff {
        let n = n as usize;
        for i in (n..c.len()).rev() {
            let prev = c[i - n].clone();
            c[i] -= prev;
        }
    }
    QSeries::from_powers(cutoff, c.into_iter().enumerate().map(|(i, x)| (i as u64, x)))
}

/// Coefficients of `prod_{h in weights} prod_{n >= h} (1 - q^n)^{-1}` to order `cutoff`.
fn inverse_phi_product(weights: &[u64], cutoff: u64) -> Vec<Rat> {
    let mut c = vec![Rat::zero(); cutoff as usize + 1];
    c[0] = int(1);
    for &h in weights {
        for n in h.max(1)..=cutoff {
            let n = n as usize;
            for i in n..c.len() {
                let prev = c[i - n].clone();
                c[i] += prev;
            }
        }
    }
    c
}

/// Partition numbers `p(0..=cutoff)`, read off `1/phi`.
pub fn partition_counts(cutoff: u64) -> Vec<Rat> {
    inverse_phi_product(&[1], cutoff)
}

/// Vacuum Verma character `q^{-c/24} prod_i phi_{h_i}^{-1}`, one factor per
/// generator weight (the list includes 2 for the stress tensor).
pub fn verma_character(weights: &[u64], c: &Rat, cutoff: u64) -> Result<QSeries, QSeriesError> {
    if weights.iter().any(|&h| h == 0) {
        return Err(QSeriesError::Argument("generator weights must be positive".into()));
    }
    let coeffs = inverse_phi_product(weights, cutoff);
    let s = QSeries::from_powers(cutoff, coeffs.into_iter().enumerate().map(|(i, x)| (i as u64, x)));
    Ok(s.shift(&(-c / int(24))))
}

fn check_p(p: i64) -> Result<(), QSeriesError> {
    if p < 2 {
        return Err(QSeriesError::Argument(format!("p must be at least 2, got {p}")));
    }
    Ok(())
}

/// Exponent lattice denominator `lcm(24, 4p)`.
pub fn lattice_denominator(p: i64) -> u64 {
    lcm(24, 4 * p as u64)
}

/// Vacuum exponent `-c_{p,1}/24`.
pub fn vacuum_exponent(p: i64) -> Rat {
    -central_charge_p1(p) / int(24)
}

/// Theta-sum indices `n` whose term `q^{(2np+p-1)^2/(4p)}` lands at or below
/// `cutoff` levels above the vacuum, widened by `extra` on each side.
pub fn theta_range(p: i64, cutoff: u64, extra: i64) -> std::ops::RangeInclusive<i64> {
    let level = |n: i64| n * (n * p + p - 1);
    let mut hi = 0;
    while level(hi + 1) <= cutoff as i64 {
        hi += 1;
    }
    let mut lo = 0;
    while level(lo - 1) <= cutoff as i64 {
        lo -= 1;
    }
    (lo - extra)..=(hi + extra)
}

/// `sum_{n in range} (2n+1) q^{(2np+p-1)^2/(4p) - 1/24}` on the lattice `lcm(24, 4p)`.
pub fn theta_sum(p: i64, range: std::ops::RangeInclusive<i64>, cutoff: u64) -> Result<QSeries, QSeriesError> {
    check_p(p)?;
    let d = lattice_denominator(p);
    let base = vacuum_exponent(p);
    let mut s = QSeries::zero(d, base.clone(), cutoff * d);
    for n in range {
        let e = rat((2 * n * p + p - 1).pow(2), 4 * p) - rat(1, 24);
        let term = QSeries::one(d, e, cutoff * d).scale(&int(2 * n + 1));
        let term = QSeries::zero(d, base.clone(), cutoff * d).try_add(&term)?;
        s = s.try_add(&term)?;
    }
    Ok(s)
}

/// Triplet character `q^{-1/24} phi^{-1} sum_n (2n+1) q^{(2np+p-1)^2/(4p)}`.
pub fn triplet_character(p: i64, cutoff: u64) -> Result<QSeries, QSeriesError> {
    check_p(p)?;
    let theta = theta_sum(p, theta_range(p, cutoff, 0), cutoff)?;
    let inv_phi = phi(cutoff).inverse()?;
    Ok(theta.mul(&inv_phi))
}

/// Verma character of the triplet algebra: one weight-2 and three weight-`2p-1` generators at `c_{p,1}`.
pub fn triplet_verma_character(p: i64, cutoff: u64) -> Result<QSeries, QSeriesError> {
    check_p(p)?;
    let delta = (2 * p - 1) as u64;
    let s = verma_character(&[2, delta, delta, delta], &central_charge_p1(p), cutoff)?;
    Ok(s.rescale(lattice_denominator(p)))
}

/// `q^{-c/24} (1/phi_2 + 3 q^{2p-1} (1-q^3) / (phi phi_{2p-1}^2))`.
pub fn chi_tilde(p: i64, cutoff: u64) -> Result<QSeries, QSeriesError> {
    check_p(p)?;
    let delta = (2 * p - 1) as u64;
    let first = inverse_phi_product(&[2], cutoff);
    let second = inverse_phi_product(&[1, delta, delta], cutoff);
    let mut c = first;
    for (i, x) in second.iter().enumerate() {
        let shifted = i as u64 + delta;
        if shifted as usize <= cutoff as usize {
            c[shifted as usize] += x * int(3);
        }
        if shifted + 3 <= cutoff {
            c[shifted as usize + 3] -= x * int(3);
        }
    }
    let s = QSeries::from_powers(cutoff, c.into_iter().enumerate().map(|(i, x)| (i as u64, x)));
    Ok(s.shift(&vacuum_exponent(p)).rescale(lattice_denominator(p)))
}

/// The characters addressable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharacterKind {
    Verma,
    Triplet,
    ChiTilde,
}

impl std::str::FromStr for CharacterKind {
    type Err = QSeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "verma" => Ok(CharacterKind::Verma),
            "triplet" => Ok(CharacterKind::Triplet),
            "chi-tilde" | "chi_tilde" | "tilde" => Ok(CharacterKind::ChiTilde),
            other => Err(QSeriesError::Argument(format!("unknown character '{other}'"))),
        }
    }
}

pub fn character(kind: CharacterKind, p: i64, cutoff: u64) -> Result<QSeries, QSeriesError> {
    match kind {
        CharacterKind::Verma => triplet_verma_character(p, cutoff),
        CharacterKind::Triplet => triplet_character(p, cutoff),
        CharacterKind::ChiTilde => chi_tilde(p, cutoff),
    }
}

/// `q^{c/24} phi(q) chi(q)`: the bracketed series of the partial expansions.
pub fn bracket_series(chi: &QSeries) -> QSeries {
    let cutoff = chi.cutoff();
    let levels = (cutoff.floor().to_integer()).try_into().unwrap_or(0u64);
    let s = chi.mul(&phi(levels));
    s.shift(&-s.offset().clone())
}

/// Coefficient at an integer level of a character for the triplet family.
pub fn level_coeff(s: &QSeries, level: i64) -> Result<Rat, QSeriesError> {
    s.coeff_at_level(&int(level))
}
