//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr  = term (('+' | '-') term)*
//! term  = unary (('*' unary) | ('/' integer))*
//! unary = ('-' | '+') unary | power
//! power = atom ('^' integer)?
//! atom  = integer | identifier | '(' expr ')'
//! ```
//!
//! `-x^2` is `-(x^2)`. Multiplication is always explicit; exponents are
//! nonnegative decimal integers; decimals are rejected (write `num/den`).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ParseError;
use crate::ratpoly::Monomial;
use crate::{MultiPoly, Rational};

/// Largest accepted exponent.
const MAX_EXPONENT: u32 = 1 << 16;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize)>,
}

impl<'a> Lexer<'a> {
    fn run(text: &'a str) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut lx = Lexer {
            text,
            toks: Vec::new(),
        };
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => i += 1,
                b'0'..=b'9' => {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i < bytes.len() && bytes[i] == b'.' {
                        return Err(ParseError::new(
                            i,
                            "decimal literals are not supported; write num/den",
                        ));
                    }
                    let v: BigInt = text[start..i].parse().expect("digits");
                    lx.toks.push((Tok::Int(v), start));
                }
                b'.' => {
                    return Err(ParseError::new(
                        i,
                        "decimal literals are not supported; write num/den",
                    ))
                }
                b'+' | b'-' | b'*' | b'/' | b'^' | b'(' | b')' => {
                    lx.toks.push((Tok::Sym(c as char), i));
                    i += 1;
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = i;
                    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                    {
                        i += 1;
                    }
                    lx.toks
                        .push((Tok::Ident(text[start..i].to_string()), start));
                }
                _ => {
                    let ch = lx.text[i..].chars().next().expect("in bounds");
                    return Err(ParseError::new(i, format!("unexpected character '{ch}'")));
                }
            }
        }
        lx.toks.push((Tok::End, text.len()));
        Ok(lx.toks)
    }
}

struct Parser<'v> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'v [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn at(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn constant(&self, c: Rational) -> MultiPoly {
        MultiPoly::constant(self.vars.to_vec(), c)
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Sym('-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Sym('/') => {
                    self.bump();
                    let at = self.at();
                    match self.bump().0 {
                        Tok::Int(d) if d.is_zero() => {
                            return Err(ParseError::new(at, "division by zero"))
                        }
                        Tok::Int(d) => acc = acc.scale(&Rational::new(BigInt::one(), d)),
                        _ => {
                            return Err(ParseError::new(
                                at,
                                "only division by an integer literal is allowed",
                            ))
                        }
                    }
                }
                Tok::Int(_) | Tok::Ident(_) | Tok::Sym('(') => {
                    return Err(ParseError::new(
                        self.at(),
                        "implicit multiplication is not allowed; use '*'",
                    ))
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly, ParseError> {
        match self.peek() {
            Tok::Sym('-') => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Tok::Sym('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() != &Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        let at = self.at();
        let n = match self.bump().0 {
            Tok::Int(n) => n,
            Tok::Sym('-') => return Err(ParseError::new(at, "negative exponents are not allowed")),
            _ => {
                return Err(ParseError::new(
                    at,
                    "exponent must be a nonnegative integer",
                ))
            }
        };
        if self.peek() == &Tok::Sym('/') {
            return Err(ParseError::new(
                self.at(),
                "fractional exponents are not allowed",
            ));
        }
        let n: u32 = u32::try_from(&n)
            .ok()
            .filter(|&n| n <= MAX_EXPONENT)
            .ok_or_else(|| ParseError::new(at, format!("exponent exceeds {MAX_EXPONENT}")))?;
        let mut acc = self.constant(Rational::one());
        for _ in 0..n {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<MultiPoly, ParseError> {
        let (tok, at) = self.bump();
        match tok {
            Tok::Int(v) => Ok(self.constant(Rational::from_integer(v))),
            Tok::Ident(name) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => Ok(MultiPoly::var(self.vars.to_vec(), i)),
                None => Err(ParseError::new(
                    at,
                    format!(
                        "unknown variable '{name}' (declared: {})",
                        self.vars.join(", ")
                    ),
                )),
            },
            Tok::Sym('(') => {
                let inner = self.expr()?;
                let close = self.at();
                match self.bump().0 {
                    Tok::Sym(')') => Ok(inner),
                    _ => Err(ParseError::new(close, "expected ')'")),
                }
            }
            Tok::End => Err(ParseError::new(at, "unexpected end of input")),
            Tok::Sym(c) => Err(ParseError::new(at, format!("unexpected '{c}'"))),
        }
    }
}

/// Parses `text` over the ordered variable list `vars`.
pub fn parse_poly(text: &str, vars: &[String]) -> Result<MultiPoly, ParseError> {
    let toks = Lexer::run(text)?;
    if toks.len() == 1 {
        return Err(ParseError::new(0, "empty expression"));
    }
    let mut parser = Parser { toks, pos: 0, vars };
    let p = parser.expr()?;
    match parser.peek() {
        Tok::End => Ok(p),
        Tok::Sym(')') => Err(ParseError::new(parser.at(), "unmatched ')'")),
        _ => Err(ParseError::new(parser.at(), "unexpected token")),
    }
}

/// Monomial helper for tests and callers building polynomials by hand.
pub fn monomial(exps: &[u32]) -> Monomial {
    Monomial(exps.to_vec())
}
