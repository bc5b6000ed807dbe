//! A small expression language for bound functions of one variable `n`.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' factor)?            (right associative)
//! atom   := integer | 'n' | func '(' args ')' | '(' expr ')'
//! func   := ceil | floor | exp | log | max | min
//! ```
//!
//! `exp`/`log` are the natural exponential and logarithm; `max`/`min` take
//! two arguments. Integer constants are unbounded. Printing produces a
//! canonical form that re-parses to the identical tree.

use crate::error::{Error, Result};
use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ExprAst {
    Int(BigInt),
    Var,
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Div(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, Box<ExprAst>),
    Neg(Box<ExprAst>),
    Ceil(Box<ExprAst>),
    Floor(Box<ExprAst>),
    Exp(Box<ExprAst>),
    Log(Box<ExprAst>),
    Max(Box<ExprAst>, Box<ExprAst>),
    Min(Box<ExprAst>, Box<ExprAst>),
}

pub fn parse_expr(text: &str) -> Result<ExprAst> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!(
            "trailing input at token {}",
            p.pos
        )));
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let s = &text[start..i];
                let v = s
                    .parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("bad integer {s}: {e}")))?;
                out.push(Tok::Int(v));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                    i += 1;
                }
                out.push(Tok::Ident(String::from(&text[start..i])));
            }
            _ => {
                return Err(Error::Parse(format!(
                    "unexpected character {c:?} at byte {i}"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<()> {
        match self.bump() {
            Some(ref got) if got == t => Ok(()),
            got => Err(Error::Parse(format!("expected {what}, got {got:?}"))),
        }
    }

    fn expr(&mut self) -> Result<ExprAst> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = ExprAst::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = ExprAst::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = ExprAst::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = ExprAst::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<ExprAst> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.pos += 1;
            let inner = self.factor()?;
            return Ok(ExprAst::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprAst> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            let exp = self.factor()?;
            return Ok(ExprAst::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ExprAst> {
        match self.bump() {
            Some(Tok::Int(v)) => Ok(ExprAst::Int(v)),
            Some(Tok::Ident(name)) => match name.as_str() {
                "n" => Ok(ExprAst::Var),
                "ceil" | "floor" | "exp" | "log" => {
                    self.expect(&Tok::LParen, "(")?;
                    let a = self.expr()?;
                    self.expect(&Tok::RParen, ")")?;
                    let b = Box::new(a);
                    Ok(match name.as_str() {
                        "ceil" => ExprAst::Ceil(b),
                        "floor" => ExprAst::Floor(b),
                        "exp" => ExprAst::Exp(b),
                        _ => ExprAst::Log(b),
                    })
                }
                "max" | "min" => {
                    self.expect(&Tok::LParen, "(")?;
                    let a = self.expr()?;
                    self.expect(&Tok::Comma, ",")?;
                    let b = self.expr()?;
                    self.expect(&Tok::RParen, ")")?;
                    if name == "max" {
                        Ok(ExprAst::Max(Box::new(a), Box::new(b)))
                    } else {
                        Ok(ExprAst::Min(Box::new(a), Box::new(b)))
                    }
                }
                other => Err(Error::Parse(format!("unknown identifier {other:?}"))),
            },
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(&Tok::RParen, ")")?;
                Ok(e)
            }
            got => Err(Error::Parse(format!("expected atom, got {got:?}"))),
        }
    }
}

// Printing precedence levels; parenthesization keeps round-trips exact.
fn prec(e: &ExprAst) -> u8 {
    match e {
        ExprAst::Add(..) | ExprAst::Sub(..) => 1,
        ExprAst::Mul(..) | ExprAst::Div(..) => 2,
        ExprAst::Neg(..) => 3,
        ExprAst::Pow(..) => 4,
        _ => 5,
    }
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(
            f: &mut fmt::Formatter<'_>,
            e: &ExprAst,
            min_prec: u8,
        ) -> fmt::Result {
            if prec(e) < min_prec {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            ExprAst::Int(v) => write!(f, "{v}"),
            ExprAst::Var => write!(f, "n"),
            ExprAst::Add(a, b) => {
                child(f, a, 1)?;
                write!(f, " + ")?;
                child(f, b, 2)
            }
            ExprAst::Sub(a, b) => {
                child(f, a, 1)?;
                write!(f, " - ")?;
                child(f, b, 2)
            }
            ExprAst::Mul(a, b) => {
                child(f, a, 2)?;
                write!(f, "*")?;
                child(f, b, 3)
            }
            ExprAst::Div(a, b) => {
                child(f, a, 2)?;
                write!(f, "/")?;
                child(f, b, 3)
            }
            ExprAst::Neg(a) => {
                write!(f, "-")?;
                child(f, a, 3)
            }
            ExprAst::Pow(a, b) => {
                child(f, a, 5)?;
                write!(f, "^")?;
                child(f, b, 3)
            }
            ExprAst::Ceil(a) => write!(f, "ceil({a})"),
            ExprAst::Floor(a) => write!(f, "floor({a})"),
            ExprAst::Exp(a) => write!(f, "exp({a})"),
            ExprAst::Log(a) => write!(f, "log({a})"),
            ExprAst::Max(a, b) => write!(f, "max({a}, {b})"),
            ExprAst::Min(a, b) => write!(f, "min({a}, {b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn roundtrip(s: &str) -> ExprAst {
        let t = parse_expr(s).unwrap();
        let printed = t.to_string();
        let t2 = parse_expr(&printed)
            .unwrap_or_else(|e| panic!("reparse of {printed:?}: {e}"));
        assert_eq!(t, t2, "print/parse mismatch: {s:?} -> {printed:?}");
        t
    }

    #[test]
    fn parses_and_roundtrips() {
        for s in [
            "n + 1",
            "2*2^n",
            "ceil(3^(n/2))",
            "max(n + 1, exp(3*n/10))",
            "min(2^n, 3^n)",
            "floor(n/2) - -n",
            "2^n^2",
            "-(n + 1)*2",
            "(n + 1)/(n + 2)",
            "log(n + 2)",
            "2^-n",
        ] {
            roundtrip(s);
        }
    }

    #[test]
    fn structure_checks() {
        // Precedence: 1 + 2*3^n parses as 1 + (2*(3^n)).
        use ExprAst::*;
        let t = parse_expr("1 + 2*3^n").unwrap();
        let want = Add(
            Box::new(Int(1.into())),
            Box::new(Mul(
                Box::new(Int(2.into())),
                Box::new(Pow(Box::new(Int(3.into())), Box::new(Var))),
            )),
        );
        assert_eq!(t, want);
        // Right-associative power.
        let t = parse_expr("2^n^2").unwrap();
        let want = Pow(
            Box::new(Int(2.into())),
            Box::new(Pow(Box::new(Var), Box::new(Int(2.into())))),
        );
        assert_eq!(t, want);
        // Unary minus binds below power: -2^n = -(2^n).
        let t = parse_expr("-2^n").unwrap();
        let want = Neg(Box::new(Pow(Box::new(Int(2.into())), Box::new(Var))));
        assert_eq!(t, want);
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "n n", "2 +", "foo(n)", "max(n)", "(n", "n)", "3..2"] {
            assert!(parse_expr(s).is_err(), "{s:?} should fail");
        }
    }
}
