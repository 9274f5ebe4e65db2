//! Recursive-descent parser for the expression grammar.

use num_traits::Zero;

use super::CFExpr;
use crate::error::{Error, Result};
use crate::exact::{Int, Rational};

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Num(Int),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: Int = text[start..i].parse().expect("digits");
                toks.push((Tok::Num(n), start));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(text[start..i].to_string()), start));
            }
            other => {
                return Err(Error::SyntaxError {
                    pos: i,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(toks)
}

/// All identifiers occurring in `text`, except `x` and `g`, in first-seen
/// order. Used to auto-detect polynomial variables.
pub(crate) fn scan_identifiers(text: &str) -> Result<Vec<String>> {
    let mut names = Vec::new();
    for (tok, _) in lex(text)? {
        if let Tok::Ident(name) = tok {
            if name != "x" && name != "g" && !names.contains(&name) {
                names.push(name);
            }
        }
    }
    Ok(names)
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    params: &'a [&'a str],
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t);
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        match self.toks.get(self.pos) {
            Some((t, _)) if *t == tok => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(Error::SyntaxError { pos: self.here(), msg: format!("expected {what}") }),
        }
    }

    fn expr(&mut self) -> Result<CFExpr> {
        let mut acc = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            neg(self.term()?)
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = CFExpr::Add(acc.into(), self.term()?.into());
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = CFExpr::Sub(acc.into(), self.term()?.into());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<CFExpr> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = CFExpr::Mul(acc.into(), self.factor()?.into());
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let pos = self.here();
                    acc = div(acc, self.factor()?, pos)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<CFExpr> {
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let pos = self.here();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let e = u32::try_from(n).map_err(|_| Error::SyntaxError {
                        pos,
                        msg: "exponent too large".to_string(),
                    })?;
                    Ok(CFExpr::Pow(base.into(), e))
                }
                _ => Err(Error::SyntaxError {
                    pos,
                    msg: "exponent must be a nonnegative integer".to_string(),
                }),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<CFExpr> {
        let pos = self.here();
        match self.bump().cloned() {
            Some(Tok::Num(n)) => Ok(CFExpr::Lit(Rational::from_integer(n))),
            Some(Tok::Ident(name)) => match name.as_str() {
                "x" => Ok(CFExpr::X),
                "g" => Ok(CFExpr::SelfRef),
                _ if self.params.contains(&name.as_str()) => Ok(CFExpr::Param(name)),
                _ => Err(Error::UnknownIdentifier { name, pos }),
            },
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(Error::SyntaxError { pos, msg: "expected a value".to_string() }),
        }
    }
}

fn neg(e: CFExpr) -> CFExpr {
    match e {
        CFExpr::Lit(q) => CFExpr::Lit(-q),
        other => CFExpr::Neg(other.into()),
    }
}

fn div(a: CFExpr, b: CFExpr, pos: usize) -> Result<CFExpr> {
    match (&a, &b) {
        (CFExpr::Lit(x), CFExpr::Lit(y)) => {
            if y.is_zero() {
                Err(Error::SyntaxError { pos, msg: "division by zero in constant".to_string() })
            } else {
                Ok(CFExpr::Lit(x / y))
            }
        }
        _ => Ok(CFExpr::Div(a.into(), b.into())),
    }
}

/// Parse `text` against the grammar; identifiers must be `x`, `g` or one of
/// `params`. Literal quotients like `23359/3` fold into rational literals.
pub fn parse(text: &str, params: &[&str]) -> Result<CFExpr> {
    let toks = lex(text)?;
    let mut p = Parser { toks: &toks, pos: 0, params, end: text.len() };
    let e = p.expr()?;
    if p.pos != toks.len() {
        return Err(Error::SyntaxError {
            pos: p.here(),
            msg: "unexpected trailing input".to_string(),
        });
    }
    Ok(e)
}
