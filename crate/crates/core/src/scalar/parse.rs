use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::Poly;
use super::rat::Rat;
use crate::error::ScalarError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ScalarError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Num(src[start..i].parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ScalarError::Parse {
                pos: i,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.len)
    }

    fn err(&self, msg: impl Into<String>) -> ScalarError {
        ScalarError::Parse {
            pos: self.offset(),
            msg: msg.into(),
        }
    }

    fn expr(&mut self) -> Result<Poly, ScalarError> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Op('-')) => {
                negate = true;
                self.pos += 1;
            }
            Some(Tok::Op('+')) => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.term()?;
            if c == '+' {
                acc += &t;
            } else {
                acc -= &t;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, ScalarError> {
        let mut acc = self.factor()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.factor()?;
            if c == '*' {
                acc = &acc * &rhs;
            } else {
                let d = rhs
                    .as_constant()
                    .ok_or_else(|| self.err("division by a non-constant"))?;
                if d.is_zero() {
                    return Err(self.err("division by zero"));
                }
                acc = acc.scale(&(Rat::from_integer(1.into()) / d));
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ScalarError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(self.err("expected a natural exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, ScalarError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(Rat::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Poly::var(&name))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.err("expected ')'")),
                }
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            _ => Err(self.err("expected a number, symbol or '('")),
        }
    }
}

/// Parses expressions such as `-11/18*C + 3*B`, `(2*x - 1)^2` or `I/2`.
pub fn parse_poly(src: &str) -> Result<Poly, ScalarError> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(ScalarError::Parse {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        len: src.len(),
    };
    let out = p.expr()?;
    if p.pos != toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

impl FromStr for Poly {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_poly(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat::rat;

    #[test]
    fn parses_rationals_and_symbols() {
        assert_eq!(parse_poly("8/9").unwrap(), Poly::constant(rat(8, 9)));
        assert_eq!(parse_poly("-2").unwrap(), Poly::from_int(-2));
        let p = parse_poly("(C + B)^2 - C^2 - B^2").unwrap();
        assert_eq!(p, parse_poly("2*B*C").unwrap());
        assert_eq!(parse_poly("I*I").unwrap(), Poly::from_int(-1));
        assert_eq!(parse_poly("c/2").unwrap(), Poly::var("c").scale(&rat(1, 2)));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_poly("").is_err());
        assert!(parse_poly("1/x").is_err());
        assert!(parse_poly("1/0").is_err());
        assert!(parse_poly("2 $ 3").is_err());
        assert!(parse_poly("(1 + 2").is_err());
        assert!(parse_poly("1 2").is_err());
    }
}
