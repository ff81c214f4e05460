//! Compositions, their binary presentations, refinement, and the
//! classification of pairs of two-part compositions.

use std::fmt;
use std::ops::{Range, RangeInclusive};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An ordered tuple of positive integers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition {
    parts: Vec<usize>,
}

/// A bit string, most significant bit first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BinaryString {
    bits: Vec<bool>,
}

impl Composition {
    /// Builds a composition, rejecting zero parts.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidComposition(format!("{parts:?} has a zero part")));
        }
        Ok(Composition { parts })
    }

    /// The empty composition of 0.
    pub fn empty() -> Self {
        Composition { parts: Vec::new() }
    }

    /// The one-part composition `(n)`.
    pub fn single(n: usize) -> Self {
        assert!(n > 0, "single-part composition of zero");
        Composition { parts: vec![n] }
    }

    /// The composition `(1, .., 1)` of `n`.
    pub fn ones(n: usize) -> Self {
        Composition { parts: vec![1; n] }
    }

    /// The parts in order.
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// Whether this is the empty composition.
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of the parts.
    pub fn n_total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// The binary presentation `0^{n1-1} 1 0^{n2-1} 1 .. 0^{nk-1}`.
    pub fn psi(&self) -> BinaryString {
        let mut bits = Vec::with_capacity(self.n_total().saturating_sub(1));
        for (k, &p) in self.parts.iter().enumerate() {
            if k > 0 {
                bits.push(true);
            }
            bits.extend(std::iter::repeat(false).take(p - 1));
        }
        BinaryString { bits }
    }

    /// Whether `finer` refines `self`, i.e. `self ≤ finer`.
    pub fn is_refined_by(&self, finer: &Composition) -> Result<bool> {
        refines(self, finer)
    }

    /// Block index ranges, 1-based and inclusive.
    pub fn blocks(&self) -> Vec<RangeInclusive<usize>> {
        self.block_ranges().into_iter().map(|r| r.start + 1..=r.end).collect()
    }

    /// Block index ranges, 0-based and half open.
    pub fn block_ranges(&self) -> Vec<Range<usize>> {
        let mut start = 0;
        self.parts
            .iter()
            .map(|&p| {
                let r = start..start + p;
                start += p;
                r
            })
            .collect()
    }

    /// Index of the block containing the 0-based position `i`.
    pub fn block_of(&self, i: usize) -> usize {
        let mut end = 0;
        for (k, &p) in self.parts.iter().enumerate() {
            end += p;
            if i < end {
                return k;
            }
        }
        panic!("position {i} outside a composition of {}", self.n_total());
    }

    /// The composition with its parts in reverse order.
    pub fn reversed(&self) -> Composition {
        let mut parts = self.parts.clone();
        parts.reverse();
        Composition { parts }
    }

    /// Whether the parts read the same in both directions.
    pub fn is_palindrome(&self) -> bool {
        self.parts.iter().eq(self.parts.iter().rev())
    }

    /// Concatenation of parts.
    pub fn concat(&self, other: &Composition) -> Composition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Composition { parts }
    }

    /// The finest common coarsening of two compositions of the same total.
    pub fn common_coarsening(&self, other: &Composition) -> Result<Composition> {
        if self.n_total() != other.n_total() {
            return Err(Error::TotalMismatch(self.n_total(), other.n_total()));
        }
        if self.is_empty() {
            return Ok(Composition::empty());
        }
        let a = self.psi();
        let b = other.psi();
        let bits = a.bits.iter().zip(&b.bits).map(|(x, y)| *x && *y).collect();
        Ok(psi_inv(&BinaryString { bits }))
    }

    /// All compositions of `total`, ordered by their binary presentation.
    pub fn all(total: usize) -> Vec<Composition> {
        if total == 0 {
            return vec![Composition::empty()];
        }
        let n = total - 1;
        (0..1u64 << n).map(|mask| psi_inv(&BinaryString::from_mask(mask, n))).collect()
    }

    /// All two-part compositions `(a, total - a)`.
    pub fn two_part(total: usize) -> Vec<Composition> {
        (1..total).map(|a| Composition { parts: vec![a, total - a] }).collect()
    }
}

impl FromStr for Composition {
    type Err = Error;

    /// Parses comma separated parts such as `"2,3"`; surrounding parentheses are allowed.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.trim().is_empty() {
            return Ok(Composition::empty());
        }
        let parts: std::result::Result<Vec<usize>, _> = t.split(',').map(|p| p.trim().parse::<usize>()).collect();
        match parts {
            Ok(p) => Composition::new(p),
            Err(_) => Err(Error::InvalidComposition(s.to_string())),
        }
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Composition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Composition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Composition::new(v).map_err(serde::de::Error::custom)
    }
}

impl BinaryString {
    /// Wraps a bit vector.
    pub fn new(bits: Vec<bool>) -> Self {
        BinaryString { bits }
    }

    /// The `n` low bits of `mask`, bit `n - 1 - k` of the mask becoming position `k`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        BinaryString { bits: (0..n).map(|k| mask >> (n - 1 - k) & 1 == 1).collect() }
    }

    /// The bits in reading order.
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Number of bits.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    /// Whether there are no bits.
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Coordinatewise comparison `self ≤ other`.
    pub fn dominated_by(&self, other: &BinaryString) -> bool {
        self.len() == other.len() && self.bits.iter().zip(&other.bits).all(|(a, b)| !a || *b)
    }

    /// The string read backwards.
    pub fn reversed(&self) -> BinaryString {
        BinaryString { bits: self.bits.iter().rev().copied().collect() }
    }

    /// Whether the string reads the same backwards.
    pub fn is_palindrome(&self) -> bool {
        self.bits.iter().eq(self.bits.iter().rev())
    }
}

impl FromStr for BinaryString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidBits(s.to_string())),
            })
            .collect::<Result<Vec<bool>>>()
            .map(BinaryString::new)
    }
}

impl fmt::Display for BinaryString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// The binary presentation of a composition of `n + 1 ≥ 1`.
pub fn psi(sigma: &Composition) -> Result<BinaryString> {
    if sigma.is_empty() {
        return Err(Error::EmptyComposition);
    }
    Ok(sigma.psi())
}

/// The unique composition whose binary presentation is `b`.
pub fn psi_inv(b: &BinaryString) -> Composition {
    let mut parts = vec![1];
    for &bit in &b.bits {
        if bit {
            parts.push(1);
        } else {
            *parts.last_mut().expect("parts is never empty") += 1;
        }
    }
    Composition { parts }
}

/// Whether `tau` refines `sigma`.
pub fn refines(sigma: &Composition, tau: &Composition) -> Result<bool> {
    if sigma.n_total() != tau.n_total() {
        return Err(Error::TotalMismatch(sigma.n_total(), tau.n_total()));
    }
    let mut boundaries = std::collections::BTreeSet::new();
    let mut acc = 0;
    for &p in tau.parts() {
        acc += p;
        boundaries.insert(acc);
    }
    let mut acc = 0;
    for &p in sigma.parts() {
        acc += p;
        if !boundaries.contains(&acc) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Block index ranges, 1-based and inclusive.
pub fn blocks(sigma: &Composition) -> Vec<RangeInclusive<usize>> {
    sigma.blocks()
}

/// The cases of a pair `((a,b),(c,d))` of two-part compositions.
///
/// The `Mirror*` variants cover `a < c`; they carry the parameters of the
/// pair obtained by reversing both compositions, which falls under `a > c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum PairCase {
    /// `((c, c+m), (c, c+m))`.
    AcUnbal { c: usize, m: usize },
    /// `((a, a), (a, a))`.
    Aa { a: usize },
    /// `((b+m, b), (b+m, b))`.
    CaUnbal { b: usize, m: usize },
    /// `((c+l, c), (c, c+l))`.
    Swap { c: usize, l: usize },
    /// `((b+m+l, b), (b+m, b+l))`.
    OverLeft { b: usize, m: usize, l: usize },
    /// `((c+l, c+m), (c, c+m+l))`.
    OverRight { c: usize, m: usize, l: usize },
    /// Reversal of a `Swap` pair.
    MirrorSwap { c: usize, l: usize },
    /// Reversal of an `OverLeft` pair.
    MirrorOverLeft { b: usize, m: usize, l: usize },
    /// Reversal of an `OverRight` pair.
    MirrorOverRight { c: usize, m: usize, l: usize },
}

impl PairCase {
    /// Short tag name.
    pub fn tag(&self) -> &'static str {
        match self {
            PairCase::AcUnbal { .. } => "AC_Unbal",
            PairCase::Aa { .. } => "AA",
            PairCase::CaUnbal { .. } => "CA_Unbal",
            PairCase::Swap { .. } => "Swap",
            PairCase::OverLeft { .. } => "OverLeft",
            PairCase::OverRight { .. } => "OverRight",
            PairCase::MirrorSwap { .. } => "MirrorSwap",
            PairCase::MirrorOverLeft { .. } => "MirrorOverLeft",
            PairCase::MirrorOverRight { .. } => "MirrorOverRight",
        }
    }

    /// Whether the case is handled through the reversal symmetry.
    pub fn is_mirror(&self) -> bool {
        matches!(self, PairCase::MirrorSwap { .. } | PairCase::MirrorOverLeft { .. } | PairCase::MirrorOverRight { .. })
    }

    /// For mirror cases, the case of the reversed pair; otherwise the case itself.
    pub fn unmirrored(&self) -> PairCase {
        match *self {
            PairCase::MirrorSwap { c, l } => PairCase::Swap { c, l },
            PairCase::MirrorOverLeft { b, m, l } => PairCase::OverLeft { b, m, l },
            PairCase::MirrorOverRight { c, m, l } => PairCase::OverRight { c, m, l },
            other => other,
        }
    }

    /// The pair described by the parameters.
    pub fn reconstruct(&self) -> (Composition, Composition) {
        let two = |x: usize, y: usize| Composition { parts: vec![x, y] };
        match *self {
            PairCase::AcUnbal { c, m } => (two(c, c + m), two(c, c + m)),
            PairCase::Aa { a } => (two(a, a), two(a, a)),
            PairCase::CaUnbal { b, m } => (two(b + m, b), two(b + m, b)),
            PairCase::Swap { c, l } => (two(c + l, c), two(c, c + l)),
            PairCase::OverLeft { b, m, l } => (two(b + m + l, b), two(b + m, b + l)),
            PairCase::OverRight { c, m, l } => (two(c + l, c + m), two(c, c + m + l)),
            PairCase::MirrorSwap { .. } | PairCase::MirrorOverLeft { .. } | PairCase::MirrorOverRight { .. } => {
                let (ab, cd) = self.unmirrored().reconstruct();
                (ab.reversed(), cd.reversed())
            }
        }
    }

    /// The named parameters, in declaration order.
    pub fn parameters(&self) -> Vec<(&'static str, usize)> {
        match *self {
            PairCase::AcUnbal { c, m } => vec![("c", c), ("m", m)],
            PairCase::Aa { a } => vec![("a", a)],
            PairCase::CaUnbal { b, m } => vec![("b", b), ("m", m)],
            PairCase::Swap { c, l } | PairCase::MirrorSwap { c, l } => vec![("c", c), ("l", l)],
            PairCase::OverLeft { b, m, l } | PairCase::MirrorOverLeft { b, m, l } => vec![("b", b), ("m", m), ("l", l)],
            PairCase::OverRight { c, m, l } | PairCase::MirrorOverRight { c, m, l } => {
                vec![("c", c), ("m", m), ("l", l)]
            }
        }
    }
}

impl fmt::Display for PairCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.parameters().iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}({})", self.tag(), params.join(", "))
    }
}

fn two_parts(sigma: &Composition) -> Result<(usize, usize)> {
    match sigma.parts() {
        &[x, y] => Ok((x, y)),
        _ => Err(Error::NotTwoParts(sigma.to_string())),
    }
}

fn classify_unmirrored(a: usize, b: usize, c: usize, d: usize) -> Option<PairCase> {
    use std::cmp::Ordering::*;
    match a.cmp(&c) {
        Equal => Some(match b.cmp(&a) {
            Greater => PairCase::AcUnbal { c, m: b - c },
            Equal => PairCase::Aa { a },
            Less => PairCase::CaUnbal { b, m: a - b },
        }),
        Greater => Some(match b.cmp(&c) {
            Equal => PairCase::Swap { c, l: a - c },
            Less => PairCase::OverLeft { b, m: c - b, l: d - b },
            Greater => PairCase::OverRight { c, m: b - c, l: a - c },
        }),
        Less => None,
    }
}

/// Classifies a pair of two-part compositions of the same total.
pub fn classify_pair(ab: &Composition, cd: &Composition) -> Result<PairCase> {
    let (a, b) = two_parts(ab)?;
    let (c, d) = two_parts(cd)?;
    if a + b != c + d {
        return Err(Error::TotalMismatch(a + b, c + d));
    }
    if let Some(case) = classify_unmirrored(a, b, c, d) {
        return Ok(case);
    }
    let mirrored = classify_unmirrored(b, a, d, c).expect("reversal turns a < c into a > c");
    Ok(match mirrored {
        PairCase::Swap { c, l } => PairCase::MirrorSwap { c, l },
        PairCase::OverLeft { b, m, l } => PairCase::MirrorOverLeft { b, m, l },
        PairCase::OverRight { c, m, l } => PairCase::MirrorOverRight { c, m, l },
        other => unreachable!("reversed pair with a < c classified as {other}"),
    })
}

/// Parses the command-line pair syntax `"a,b;c,d"`.
pub fn parse_pair(s: &str) -> Result<(Composition, Composition)> {
    let mut halves = s.split(';');
    let (Some(x), Some(y), None) = (halves.next(), halves.next(), halves.next()) else {
        return Err(Error::InvalidComposition(format!("expected \"a,b;c,d\", got {s:?}")));
    };
    let ab: Composition = x.parse()?;
    let cd: Composition = y.parse()?;
    two_parts(&ab)?;
    two_parts(&cd)?;
    if ab.n_total() != cd.n_total() {
        return Err(Error::TotalMismatch(ab.n_total(), cd.n_total()));
    }
    Ok((ab, cd))
}
