use num_bigint::BigInt;
use num_traits::One;

use super::rat::Rat;

/// Generalized binomial coefficient `x(x-1)...(x-k+1)/k!` for any integer `x`.
pub fn binom_int(x: i64, k: u32) -> Rat {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k as i64 {
        num *= BigInt::from(x - j);
        den *= BigInt::from(j + 1);
    }
    Rat::new(num, den)
}

/// Generalized binomial with a rational upper argument.
pub fn binom_rat(x: &Rat, k: u32) -> Rat {
    let mut acc = Rat::one();
    for j in 0..k as i64 {
        acc *= x - Rat::from_integer(BigInt::from(j));
        acc /= Rat::from_integer(BigInt::from(j + 1));
    }
    acc
}

pub fn factorial(k: u32) -> BigInt {
    (1..=k as u64).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}
