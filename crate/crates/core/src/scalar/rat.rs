use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational number. Always stored in lowest terms with a positive denominator.
pub type Rat = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rat {
    Rat::from_integer(BigInt::from(value))
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Renders as `p/q`, or `p` when the denominator is one.
pub fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

/// Parses `p`, `-p` or `p/q` (optionally signed). Whitespace around the
/// slash is not accepted.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rat::new(n, d))
}

/// Least common multiple of two positive integers.
pub fn lcm(a: u64, b: u64) -> u64 {
    a / num_integer::gcd(a, b) * b
}
