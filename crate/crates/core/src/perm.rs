//! Permutations in one-line notation.
//!
//! Internally a permutation of `{0, .., n-1}` is stored as the vector of its
//! images. Every public constructor and printer uses the 1-based one-line
//! convention, so `Perm::from_one_line(&[3, 1, 2])` sends strand 1 to 3.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A permutation stored by its images.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<usize>);

impl Perm {
    /// The identity permutation on `n` points.
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// The simple transposition exchanging the 0-based positions `i` and `i + 1`.
    pub fn simple(n: usize, i: usize) -> Self {
        assert!(i + 1 < n, "simple transposition {i} out of range for {n} points");
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(i, i + 1);
        Perm(v)
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    /// Builds a permutation from 1-based one-line notation.
    pub fn from_one_line(one_line: &[usize]) -> Result<Self> {
        if one_line.contains(&0) {
            return Err(Error::InvalidPermutation(format!("{one_line:?}")));
        }
        Self::from_images(one_line.iter().map(|x| x - 1).collect())
    }

    /// Parses a compact digit string such as `"312"` (only for degree at most 9).
    pub fn parse_digits(s: &str) -> Result<Self> {
        let digits: Option<Vec<usize>> = s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect();
        match digits {
            Some(d) => Self::from_one_line(&d),
            None => Err(Error::InvalidPermutation(s.to_string())),
        }
    }

    /// Number of points.
    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// The 0-based images.
    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// Image of a 0-based point.
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// The 1-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.0.iter().map(|x| x + 1).collect()
    }

    /// Whether this is the identity.
    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// The composite `self ∘ other`, applying `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "composing permutations of different degree");
        Perm(other.0.iter().map(|&x| self.0[x]).collect())
    }

    /// The inverse permutation.
    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    /// Coxeter length, the number of inversions.
    pub fn length(&self) -> usize {
        let v = &self.0;
        let mut count = 0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if v[i] > v[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Smallest `i` with `w(i) > w(i + 1)`, so that `w = (w ∘ s_i) ∘ s_i` shortens.
    pub fn right_descent(&self) -> Option<usize> {
        self.0.windows(2).position(|w| w[0] > w[1])
    }

    /// Smallest `i` such that `s_i ∘ w` is shorter than `w`.
    pub fn left_descent(&self) -> Option<usize> {
        self.inverse().right_descent()
    }

    /// A reduced word `[i_1, .., i_l]` (0-based) with `w = s_{i_1} ∘ .. ∘ s_{i_l}`.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length());
        let mut w = self.clone();
        while let Some(i) = w.right_descent() {
            word.push(i);
            w.0.swap(i, i + 1);
        }
        word.reverse();
        word
    }

    /// Whether the block structure given by `ranges` is preserved setwise.
    pub fn preserves_ranges(&self, ranges: &[std::ops::Range<usize>]) -> bool {
        ranges.iter().all(|r| r.clone().all(|i| r.contains(&self.0[i])))
    }

    /// Conjugation by the longest element, `w0 ∘ w ∘ w0`, i.e. reading the diagram mirrored.
    pub fn mirror(&self) -> Perm {
        let n = self.degree();
        Perm((0..n).map(|j| n - 1 - self.0[n - 1 - j]).collect())
    }

    /// Conjugation `relabel ∘ self ∘ relabel⁻¹`, transporting strand labels along `relabel`.
    pub fn conjugate(&self, relabel: &Perm) -> Perm {
        relabel.compose(self).compose(&relabel.inverse())
    }

    /// Embeds this permutation into `total` points, acting on `offset..offset + degree`.
    pub fn embed(&self, offset: usize, total: usize) -> Perm {
        assert!(offset + self.degree() <= total);
        let mut v: Vec<usize> = (0..total).collect();
        for (i, &x) in self.0.iter().enumerate() {
            v[offset + i] = offset + x;
        }
        Perm(v)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() <= 9 {
            for x in self.one_line() {
                write!(f, "{x}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.one_line().iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm({self})")
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_line().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Perm::from_one_line(&v).map_err(serde::de::Error::custom)
    }
}
