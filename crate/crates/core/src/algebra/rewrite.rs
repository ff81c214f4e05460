//! Term rewriting of generator words into dots-above normal form.
//!
//! A word is a product of generators read left to right, the leftmost factor
//! sitting on top. Rewriting moves every dot above every crossing using the
//! dot-pass relations, merges adjacent crossings with the nil law, and sorts
//! dots. Each dot-pass either keeps the crossing count and moves a dot up or
//! removes a crossing, so rewriting terminates.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::element::{nil_product, AlgebraElement, DottedDiagram};
use super::hpoly::HPoly;
use crate::compositions::Composition;
use crate::error::{Error, Result};
use crate::perm::Perm;

/// A generator or scalar appearing in a word. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Token {
    /// The dot on strand `j`.
    X(usize),
    /// The crossing of strands `i` and `i + 1`.
    S(usize),
    /// An integer scalar.
    Scalar(BigInt),
    /// The central parameter ħ.
    Hbar,
}

/// A product of generators on a fixed number of strands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorWord {
    strands: usize,
    tokens: Vec<Token>,
}

impl GeneratorWord {
    /// Builds a word, checking generator indices.
    pub fn new(strands: usize, tokens: Vec<Token>) -> Result<Self> {
        for t in &tokens {
            let bad = match t {
                Token::X(j) => (*j >= strands).then(|| format!("X{}", j + 1)),
                Token::S(i) => (*i + 1 >= strands).then(|| format!("s{}", i + 1)),
                _ => None,
            };
            if let Some(generator) = bad {
                return Err(Error::GeneratorOutOfRange { generator, strands });
            }
        }
        Ok(GeneratorWord { strands, tokens })
    }

    /// Number of strands.
    pub fn strands(&self) -> usize {
        self.strands
    }

    /// The tokens, top factor first.
    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .tokens
            .iter()
            .map(|t| match t {
                Token::X(j) => format!("X{}", j + 1),
                Token::S(i) => format!("s{}", i + 1),
                Token::Scalar(n) => n.to_string(),
                Token::Hbar => "h".to_string(),
            })
            .collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Which redex the rewriter contracts first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// The redex closest to the top of the diagram.
    Leftmost,
    /// The redex closest to the bottom of the diagram.
    Rightmost,
}

#[derive(Clone, Debug)]
enum Factor {
    Dot(usize),
    Cross(Perm),
}

#[derive(Clone, Debug)]
struct Term {
    coeff: BigRational,
    hexp: u32,
    factors: Vec<Factor>,
}

enum Step {
    Replace(Vec<Term>),
    Normal,
}

fn redex_at(factors: &[Factor], p: usize) -> bool {
    match (&factors[p], &factors[p + 1]) {
        (Factor::Cross(_), Factor::Cross(_)) => true,
        (Factor::Cross(_), Factor::Dot(_)) => true,
        (Factor::Dot(j), Factor::Dot(i)) => j > i,
        (Factor::Dot(_), Factor::Cross(_)) => false,
    }
}

fn splice(term: &Term, p: usize, replacement: Vec<Factor>, coeff: BigRational, extra_h: u32) -> Term {
    let mut factors = term.factors[..p].to_vec();
    factors.extend(replacement);
    factors.extend_from_slice(&term.factors[p + 2..]);
    Term { coeff: &term.coeff * coeff, hexp: term.hexp + extra_h, factors }
}

fn cross_factor(p: Perm) -> Vec<Factor> {
    if p.is_identity() {
        Vec::new()
    } else {
        vec![Factor::Cross(p)]
    }
}

fn contract(term: &Term, p: usize, n: usize) -> Vec<Term> {
    match (&term.factors[p], &term.factors[p + 1]) {
        (Factor::Cross(u), Factor::Cross(v)) => match nil_product(u, v) {
            Some(uv) => vec![splice(term, p, cross_factor(uv), BigRational::one(), 0)],
            None => Vec::new(),
        },
        (Factor::Cross(u), Factor::Dot(j)) => {
            let i = u.right_descent().expect("crossing factors are never the identity");
            let si = Perm::simple(n, i);
            let shorter = u.compose(&si);
            let moved = if *j == i {
                i + 1
            } else if *j == i + 1 {
                i
            } else {
                *j
            };
            let mut passed = cross_factor(shorter.clone());
            passed.push(Factor::Dot(moved));
            passed.push(Factor::Cross(si));
            let mut out = vec![splice(term, p, passed, BigRational::one(), 0)];
            let sign = if *j == i {
                Some(1)
            } else if *j == i + 1 {
                Some(-1)
            } else {
                None
            };
            if let Some(sign) = sign {
                out.push(splice(term, p, cross_factor(shorter), BigRational::from_integer(sign.into()), 1));
            }
            out
        }
        (Factor::Dot(j), Factor::Dot(i)) => {
            vec![splice(term, p, vec![Factor::Dot(*i), Factor::Dot(*j)], BigRational::one(), 0)]
        }
        (Factor::Dot(_), Factor::Cross(_)) => unreachable!("not a redex"),
    }
}

fn step(term: &Term, strategy: Strategy, n: usize) -> Step {
    if term.factors.len() < 2 {
        return Step::Normal;
    }
    let positions: Box<dyn Iterator<Item = usize>> = match strategy {
        Strategy::Leftmost => Box::new(0..term.factors.len() - 1),
        Strategy::Rightmost => Box::new((0..term.factors.len() - 1).rev()),
    };
    for p in positions {
        if redex_at(&term.factors, p) {
            return Step::Replace(contract(term, p, n));
        }
    }
    Step::Normal
}

/// Rewrites a word to normal form with the given strategy.
pub fn normal_form_with(word: &GeneratorWord, strategy: Strategy) -> Result<AlgebraElement> {
    let n = word.strands;
    let mut start = Term { coeff: BigRational::one(), hexp: 0, factors: Vec::new() };
    for t in &word.tokens {
        match t {
            Token::X(j) => start.factors.push(Factor::Dot(*j)),
            Token::S(i) => start.factors.push(Factor::Cross(Perm::simple(n, *i))),
            Token::Scalar(c) => start.coeff *= BigRational::from_integer(c.clone()),
            Token::Hbar => start.hexp += 1,
        }
    }
    let mut acc: BTreeMap<DottedDiagram, HPoly> = BTreeMap::new();
    let mut stack = vec![start];
    while let Some(term) = stack.pop() {
        if term.coeff.is_zero() {
            continue;
        }
        match step(&term, strategy, n) {
            Step::Replace(next) => stack.extend(next),
            Step::Normal => {
                let mut dots = vec![0; n];
                let mut perm = Perm::identity(n);
                for f in &term.factors {
                    match f {
                        Factor::Dot(j) => dots[*j] += 1,
                        Factor::Cross(p) => perm = p.clone(),
                    }
                }
                acc.entry(DottedDiagram { dots, perm }).or_default().add_term(term.hexp, &term.coeff);
            }
        }
    }
    AlgebraElement::from_terms(Composition::single(n.max(1)), acc.into_iter().filter(|(_, c)| !c.is_zero()))
}

/// Rewrites a word to normal form by contracting leftmost redexes first.
pub fn normal_form(word: &GeneratorWord) -> Result<AlgebraElement> {
    normal_form_with(word, Strategy::Leftmost)
}
