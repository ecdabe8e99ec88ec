//! Tokenizer and recursive-descent parser for the polynomial DSL.
//!
//! ```text
//! poly    := term (("+"|"-") term)*
//! term    := coeff ("*" powprod)? | powprod
//! powprod := var ("^" uint)? ("*" var ("^" uint)?)*
//! coeff   := int | int "/" uint
//! ```
//! A leading sign on the first term is accepted. Variable names are resolved
//! by a caller-supplied function so the same grammar serves `x<k>`, `t`, `u`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Num(text[start..i].parse().expect("digits"))));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            other => {
                return Err(Error::Syntax { pos: start, msg: format!("unexpected character '{other}'") });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

/// One parsed term: coefficient and exponent vector.
pub type RawTerm = (BigRational, Vec<u32>);

/// Resolves an identifier (with its byte position) to a 0-based variable slot.
pub type Resolver<'a> = dyn Fn(&str, usize) -> Result<usize> + 'a;

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    nvars: usize,
    resolve: &'a Resolver<'a>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.here(), msg: msg.into() })
    }

    fn uint(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected unsigned integer"),
        }
    }

    fn small_uint(&mut self) -> Result<u32> {
        let at = self.here();
        let n = self.uint()?;
        u32::try_from(n).map_err(|_| Error::Syntax { pos: at, msg: "exponent too large".into() })
    }

    fn factor(&mut self, exps: &mut [u32]) -> Result<()> {
        let at = self.here();
        let name = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return self.err("expected variable"),
        };
        self.pos += 1;
        let slot = (self.resolve)(&name, at)?;
        let e = if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            self.small_uint()?
        } else {
            1
        };
        exps[slot] += e;
        Ok(())
    }

    fn powprod(&mut self, exps: &mut [u32]) -> Result<()> {
        self.factor(exps)?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            self.factor(exps)?;
        }
        Ok(())
    }

    fn term(&mut self) -> Result<RawTerm> {
        let mut exps = vec![0u32; self.nvars];
        match self.peek() {
            Some(Tok::Num(_)) => {
                let num = self.uint()?;
                let mut coeff = BigRational::from_integer(num);
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    let at = self.here();
                    let den = self.uint()?;
                    if den.is_zero() {
                        return Err(Error::Syntax { pos: at, msg: "zero denominator".into() });
                    }
                    coeff /= BigRational::from_integer(den);
                }
                if self.peek() == Some(&Tok::Star) {
                    self.pos += 1;
                    self.powprod(&mut exps)?;
                }
                Ok((coeff, exps))
            }
            Some(Tok::Ident(_)) => {
                self.powprod(&mut exps)?;
                Ok((BigRational::one(), exps))
            }
            _ => self.err("expected term"),
        }
    }

    fn poly(&mut self) -> Result<Vec<RawTerm>> {
        let mut out = Vec::new();
        let mut sign = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -1
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let (c, e) = self.term()?;
            out.push((if sign < 0 { -c } else { c }, e));
            match self.peek() {
                None => break,
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                Some(_) => return self.err("expected '+' or '-'"),
            }
            self.pos += 1;
        }
        Ok(out)
    }
}

/// Parses `text` into raw terms over `nvars` variable slots.
pub fn parse_terms(text: &str, nvars: usize, resolve: &Resolver<'_>) -> Result<Vec<RawTerm>> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Syntax { pos: 0, msg: "empty polynomial".into() });
    }
    let mut p = Parser { toks, pos: 0, end: text.len(), nvars, resolve };
    p.poly()
}

/// Resolver for `x1..xN`.
pub fn indexed_vars(nvars: usize) -> impl Fn(&str, usize) -> Result<usize> {
    move |name: &str, pos: usize| {
        let digits = name
            .strip_prefix('x')
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
            .ok_or_else(|| Error::Syntax { pos, msg: format!("unknown variable '{name}'") })?;
        let index: usize = digits
            .parse()
            .map_err(|_| Error::Syntax { pos, msg: format!("bad variable '{name}'") })?;
        if index == 0 || index > nvars {
            return Err(Error::VariableOutOfRange { index, ambient: nvars });
        }
        Ok(index - 1)
    }
}

/// Resolver for a fixed list of single names, e.g. `["t"]`.
pub fn named_vars<'a>(names: &'a [&'a str]) -> impl Fn(&str, usize) -> Result<usize> + 'a {
    move |name: &str, pos: usize| {
        names
            .iter()
            .position(|n| *n == name)
            .ok_or_else(|| Error::Syntax { pos, msg: format!("unknown variable '{name}'") })
    }
}
