//! Parser and evaluator for algebra expressions.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | atom
//! atom   := INT | 'h' | 's' INT | 'X' INT | '(' expr ')'
//! ```
//!
//! Juxtaposition is rejected: `s1 s2` is a parse error, `s1*s2` is a product.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::element::AlgebraElement;
use super::hpoly::HPoly;
use crate::compositions::Composition;
use crate::error::{Error, Result};

/// Parse tree of an expression. Generator indices are 1-based as written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpressionAst {
    /// An integer literal.
    Int(BigInt),
    /// The parameter ħ, written `h`.
    Hbar,
    /// A dot generator `X<j>`.
    X(usize),
    /// A crossing generator `s<i>`.
    S(usize),
    /// Unary minus.
    Neg(Box<ExpressionAst>),
    /// Sum.
    Add(Box<ExpressionAst>, Box<ExpressionAst>),
    /// Difference.
    Sub(Box<ExpressionAst>, Box<ExpressionAst>),
    /// Product, left factor on top.
    Mul(Box<ExpressionAst>, Box<ExpressionAst>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    H,
    S(usize),
    X(usize),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
}

fn err(pos: usize, message: impl Into<String>) -> Error {
    Error::Parse { pos, message: message.into() }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let read_digits = |i: &mut usize| -> String {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        chars[start..*i].iter().collect()
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((pos, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((pos, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((pos, Tok::Star));
                i += 1;
            }
            '(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            'h' => {
                out.push((pos, Tok::H));
                i += 1;
            }
            's' | 'X' => {
                i += 1;
                let digits = read_digits(&mut i);
                let idx: usize = digits.parse().map_err(|_| err(pos, format!("expected an index after '{c}'")))?;
                if idx == 0 {
                    return Err(err(pos, "generator indices start at 1"));
                }
                out.push((pos, if c == 's' { Tok::S(idx) } else { Tok::X(idx) }));
            }
            d if d.is_ascii_digit() => {
                let digits = read_digits(&mut i);
                out.push((pos, Tok::Int(digits.parse().expect("digit string"))));
            }
            other => return Err(err(pos, format!("unexpected character '{other}'"))),
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
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<ExpressionAst> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    lhs = ExpressionAst::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    lhs = ExpressionAst::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ExpressionAst> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.at += 1;
            lhs = ExpressionAst::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<ExpressionAst> {
        if let Some(Tok::Minus) = self.peek() {
            self.at += 1;
            return Ok(ExpressionAst::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<ExpressionAst> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return Err(err(pos, "unexpected end of input"));
        };
        self.at += 1;
        match tok {
            Tok::Int(n) => Ok(ExpressionAst::Int(n)),
            Tok::H => Ok(ExpressionAst::Hbar),
            Tok::S(i) => Ok(ExpressionAst::S(i)),
            Tok::X(j) => Ok(ExpressionAst::X(j)),
            Tok::LParen => {
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.at += 1;
                        Ok(inner)
                    }
                    _ => Err(err(self.pos(), "expected ')'")),
                }
            }
            other => Err(err(pos, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses an expression.
pub fn parse_expression(src: &str) -> Result<ExpressionAst> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, at: 0, end: src.chars().count() };
    let ast = p.expr()?;
    if p.at < p.toks.len() {
        return Err(err(p.pos(), "expected an operator"));
    }
    Ok(ast)
}

impl ExpressionAst {
    /// Evaluates the expression in `NH_τ`.
    pub fn evaluate(&self, tau: &Composition) -> Result<AlgebraElement> {
        let n = tau.n_total();
        Ok(match self {
            ExpressionAst::Int(k) => AlgebraElement::scalar(tau.clone(), HPoly::constant(BigRational::from_integer(k.clone()))),
            ExpressionAst::Hbar => AlgebraElement::hbar(tau.clone()),
            ExpressionAst::X(j) => {
                if *j > n {
                    return Err(Error::GeneratorOutOfRange { generator: format!("X{j}"), strands: n });
                }
                AlgebraElement::x(tau.clone(), j - 1)?
            }
            ExpressionAst::S(i) => {
                if *i >= n {
                    return Err(Error::GeneratorOutOfRange { generator: format!("s{i}"), strands: n });
                }
                AlgebraElement::s(tau.clone(), i - 1)?
            }
            ExpressionAst::Neg(a) => a.evaluate(tau)?.neg(),
            ExpressionAst::Add(a, b) => a.evaluate(tau)?.add(&b.evaluate(tau)?)?.with_blocks(tau.clone())?,
            ExpressionAst::Sub(a, b) => a.evaluate(tau)?.sub(&b.evaluate(tau)?)?.with_blocks(tau.clone())?,
            ExpressionAst::Mul(a, b) => a.evaluate(tau)?.mul(&b.evaluate(tau)?)?.with_blocks(tau.clone())?,
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            ExpressionAst::Add(..) | ExpressionAst::Sub(..) => 1,
            ExpressionAst::Mul(..) => 2,
            ExpressionAst::Neg(..) => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for ExpressionAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &ExpressionAst, min: u8| -> fmt::Result {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            ExpressionAst::Int(n) => write!(f, "{n}"),
            ExpressionAst::Hbar => f.write_str("h"),
            ExpressionAst::X(j) => write!(f, "X{j}"),
            ExpressionAst::S(i) => write!(f, "s{i}"),
            ExpressionAst::Neg(a) => {
                f.write_str("-")?;
                wrap(f, a, 3)
            }
            ExpressionAst::Add(a, b) => {
                wrap(f, a, 1)?;
                f.write_str(" + ")?;
                wrap(f, b, 2)
            }
            ExpressionAst::Sub(a, b) => {
                wrap(f, a, 1)?;
                f.write_str(" - ")?;
                wrap(f, b, 2)
            }
            ExpressionAst::Mul(a, b) => {
                wrap(f, a, 2)?;
                f.write_str("*")?;
                wrap(f, b, 3)
            }
        }
    }
}

/// Parses and evaluates an expression in `NH_τ`.
pub fn evaluate(tau: &Composition, src: &str) -> Result<AlgebraElement> {
    parse_expression(src)?.evaluate(tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nh(n: usize) -> Composition {
        Composition::single(n)
    }

    #[test]
    fn evaluates_defining_relations() {
        assert_eq!(evaluate(&nh(2), "s1*X1").unwrap().to_string(), "X2*s1 + h");
        assert_eq!(evaluate(&nh(2), "s1*s1").unwrap().to_string(), "0");
        assert_eq!(evaluate(&nh(3), "s1*s2*s1 - s2*s1*s2").unwrap().to_string(), "0");
    }

    #[test]
    fn precedence_and_parentheses() {
        assert_eq!(evaluate(&nh(2), "2*(1 + h) - 2 - 2*h").unwrap().to_string(), "0");
        assert_eq!(evaluate(&nh(2), "-X1 + X1").unwrap().to_string(), "0");
    }

    #[test]
    fn juxtaposition_is_an_error_with_position() {
        match parse_expression("s1 s2") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_expression("s1 +"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_expression("(s1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_expression("s0"), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse_expression("y"), Err(Error::Parse { pos: 0, .. })));
    }

    #[test]
    fn out_of_range_indices_are_reported() {
        assert!(evaluate(&nh(2), "s2").is_err());
        assert!(evaluate(&nh(2), "X3").is_err());
        assert!(evaluate(&"1,2".parse().unwrap(), "s1").is_err());
    }

    #[test]
    fn printing_round_trips() {
        for src in ["s1*X1", "-(h + 2)*X1*X1*s1", "s2*s1 - 3*h*h", "(s1 + s2)*(s1 - X3)"] {
            let ast = parse_expression(src).unwrap();
            assert_eq!(parse_expression(&ast.to_string()).unwrap(), ast, "{src}");
            let value = ast.evaluate(&nh(3)).unwrap();
            assert_eq!(evaluate(&nh(3), &value.to_string()).unwrap(), value, "{src}");
        }
    }
}
