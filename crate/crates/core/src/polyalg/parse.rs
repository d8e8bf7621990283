//! Text form of polynomials.
//!
//! Grammar: variables X, Y0, Y1, Y2 (and the internal Z, W, C, T, U1, U2),
//! integer literals, the symbols `i` and `pi`, binary `+ - * / ^`, unary minus
//! and parentheses. Multiplication must be written out. Division and negative
//! powers are allowed only for invertible constants such as `2/3` or `pi^(-1)`.

use rug::Integer;

use super::poly::{MultiPoly, Var};
use super::scalar::CoefScalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Integer),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let n = text.parse::<Integer>().map_err(|e| Error::Parse { pos: start, msg: e.to_string() })?;
            out.push((start, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(&Tok::Op('/')) {
                let pos = self.pos();
                self.at += 1;
                let d = self.unary()?;
                let inv = d.constant_value().and_then(|c| c.inv()).ok_or_else(|| Error::Parse {
                    pos,
                    msg: "can only divide by a nonzero monomial constant".into(),
                })?;
                acc = acc.scale(&inv);
            } else if matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('('))) {
                return self.err("implicit multiplication is not allowed; write `*`");
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.pos();
        let paren = self.eat('(');
        let neg = self.eat('-');
        let e = match self.peek() {
            Some(Tok::Num(n)) => n.to_i64().filter(|v| *v <= 10_000),
            _ => return self.err("expected an integer exponent"),
        }
        .ok_or_else(|| Error::Parse { pos, msg: "exponent too large".into() })?;
        self.at += 1;
        if paren && !self.eat(')') {
            return self.err("expected `)`");
        }
        if neg {
            let c = base
                .constant_value()
                .and_then(|c| c.powi(-e))
                .ok_or_else(|| Error::Parse { pos, msg: "negative powers need a nonzero monomial constant".into() })?;
            Ok(MultiPoly::constant(c))
        } else {
            Ok(base.pow(e as u32))
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(MultiPoly::constant(CoefScalar::from_integer(&n)))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                match name.as_str() {
                    "i" => Ok(MultiPoly::constant(CoefScalar::i())),
                    "pi" => Ok(MultiPoly::constant(CoefScalar::pi_pow(1))),
                    _ => Var::from_name(&name).map(MultiPoly::var).ok_or(Error::UnknownSymbol { pos, name }),
                }
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a polynomial. Errors carry the character position.
pub fn parse_poly(text: &str) -> Result<MultiPoly> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.chars().count() };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_polynomials() {
        let h = parse_poly("Y1^2 - Y0*Y2").unwrap();
        assert_eq!(h.to_string(), "-Y0*Y2 + Y1^2");
        let p = parse_poly("4*pi^2*Y0 + Y2").unwrap();
        assert_eq!(p.len(), 2);
        let c = parse_poly("Y0*Y2 - (2/3)*Y1^2").unwrap();
        assert_eq!(parse_poly(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn alpha_literal() {
        let a = parse_poly("2/(pi*i)").unwrap();
        let b = parse_poly("-2*i*pi^(-1)").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors_have_positions() {
        match parse_poly("Y0 + 2 Y1") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("{other:?}"),
        }
        match parse_poly("Y0 + Q") {
            Err(Error::UnknownSymbol { pos, name }) => {
                assert_eq!(pos, 5);
                assert_eq!(name, "Q");
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_poly("Y0/Y1").is_err());
        assert!(parse_poly("(Y0").is_err());
        assert!(parse_poly("").is_err());
    }
}
