//! Exact scalars: rationals, polynomials over named symbols with a formal
//! imaginary unit, generalized binomials and a small linear solver.

mod binom;
mod parse;
mod poly;
mod rat;
mod solve;

pub use binom::{binom_int, binom_rat, factorial};
pub use parse::parse_poly;
pub use poly::{Monomial, Poly, Sym, IMAGINARY_UNIT};
pub use rat::{fmt_rat, int, is_integer, lcm, parse_rat, rat, Rat};
pub use solve::{solve_linear, solve_linear_family};
