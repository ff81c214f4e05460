//! Dotted strand diagrams and elements of the NilHecke algebras `NH_τ`.
//!
//! A basis element `X_1^{k_1} .. X_n^{k_n} · s_w` is a permutation diagram
//! with dots placed above it. Products stack diagrams: in `a · b` the factor
//! `a` sits on top, so strands are read bottom to top and the underlying
//! permutation of a product of pure crossings is `perm(a) ∘ perm(b)`.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::hpoly::{fmt_rational, HPoly};
use crate::compositions::{refines, Composition};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::shuffles::enumerate_shuffles;

/// Exponents of `X_1, .., X_n`.
pub type Dots = Vec<u32>;

/// The basis element `X^dots · s_perm`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DottedDiagram {
    /// Dot exponents, one per strand, counted at the top.
    pub dots: Dots,
    /// The underlying permutation.
    pub perm: Perm,
}

impl DottedDiagram {
    /// A diagram with the given dots above the given permutation.
    pub fn new(dots: Dots, perm: Perm) -> Result<Self> {
        if dots.len() != perm.degree() {
            return Err(Error::StrandMismatch(dots.len(), perm.degree()));
        }
        Ok(DottedDiagram { dots, perm })
    }

    /// The undotted diagram of a permutation.
    pub fn crossing(perm: Perm) -> Self {
        DottedDiagram { dots: vec![0; perm.degree()], perm }
    }

    /// The identity diagram on `n` strands.
    pub fn identity(n: usize) -> Self {
        Self::crossing(Perm::identity(n))
    }

    /// Number of strands.
    pub fn strands(&self) -> usize {
        self.perm.degree()
    }

    /// Total number of dots.
    pub fn dot_degree(&self) -> u32 {
        self.dots.iter().sum()
    }
}

/// An element of `NH_τ`, stored inside `NH_n` with `n = |τ|`.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    blocks: Composition,
    terms: BTreeMap<DottedDiagram, HPoly>,
}

/// Multiplies pure crossings by the nil law: `s_u s_v = s_{uv}` when lengths add, else 0.
pub fn nil_product(u: &Perm, v: &Perm) -> Option<Perm> {
    let uv = u.compose(v);
    (uv.length() == u.length() + v.length()).then_some(uv)
}

/// Divided difference `∂_i` of a dot monomial, as signed monomials.
pub(crate) fn divided_difference(dots: &[u32], i: usize) -> Vec<(i64, Dots)> {
    let (p, q) = (dots[i], dots[i + 1]);
    if p == q {
        return Vec::new();
    }
    let (sign, hi, lo) = if p > q { (1, p, q) } else { (-1, q, p) };
    (0..hi - lo)
        .map(|r| {
            let mut d = dots.to_vec();
            d[i] = lo + r;
            d[i + 1] = lo + (hi - lo - 1 - r);
            (sign, d)
        })
        .collect()
}

fn swap_dots(dots: &[u32], i: usize) -> Dots {
    let mut d = dots.to_vec();
    d.swap(i, i + 1);
    d
}

/// Rewrites `s_u · X^dots` into `Σ c · X^g · s_w`.
fn pass_dots_up(u: &Perm, dots: &[u32]) -> BTreeMap<(Dots, Perm), HPoly> {
    let mut out = BTreeMap::new();
    let Some(i) = u.right_descent() else {
        out.insert((dots.to_vec(), u.clone()), HPoly::one());
        return out;
    };
    let n = u.degree();
    let si = Perm::simple(n, i);
    let shorter = u.compose(&si);
    let mut add = |key: (Dots, Perm), c: HPoly| {
        let entry: &mut HPoly = out.entry(key.clone()).or_default();
        entry.add_assign_ref(&c);
        if entry.is_zero() {
            out.remove(&key);
        }
    };
    for ((g, w), c) in pass_dots_up(&shorter, &swap_dots(dots, i)) {
        if let Some(wsi) = nil_product(&w, &si) {
            add((g, wsi), c);
        }
    }
    for (sign, h) in divided_difference(dots, i) {
        let hbar = HPoly::integer(sign).shift(1);
        for ((g, w), c) in pass_dots_up(&shorter, &h) {
            add((g, w), &c * &hbar);
        }
    }
    out
}

/// Rewrites `X^dots · s_α` into `Σ c · s_β · X^b`, pushing dots below the crossings.
fn pass_dots_down(dots: &[u32], alpha: &Perm) -> BTreeMap<(Perm, Dots), HPoly> {
    let mut out = BTreeMap::new();
    let Some(i) = alpha.left_descent() else {
        out.insert((alpha.clone(), dots.to_vec()), HPoly::one());
        return out;
    };
    let n = alpha.degree();
    let si = Perm::simple(n, i);
    let shorter = si.compose(alpha);
    let mut add = |key: (Perm, Dots), c: HPoly| {
        let entry: &mut HPoly = out.entry(key.clone()).or_default();
        entry.add_assign_ref(&c);
        if entry.is_zero() {
            out.remove(&key);
        }
    };
    for ((beta, b), c) in pass_dots_down(&swap_dots(dots, i), &shorter) {
        if let Some(sib) = nil_product(&si, &beta) {
            add((sib, b), c);
        }
    }
    for (sign, h) in divided_difference(dots, i) {
        let hbar = HPoly::integer(sign).shift(1);
        for ((beta, b), c) in pass_dots_down(&h, &shorter) {
            add((beta, b), &c * &hbar);
        }
    }
    out
}

impl AlgebraElement {
    /// The zero element of `NH_blocks`.
    pub fn zero(blocks: Composition) -> Self {
        AlgebraElement { blocks, terms: BTreeMap::new() }
    }

    /// The unit of `NH_blocks`.
    pub fn one(blocks: Composition) -> Self {
        Self::scalar(blocks, HPoly::one())
    }

    /// A scalar multiple of the unit.
    pub fn scalar(blocks: Composition, c: HPoly) -> Self {
        let n = blocks.n_total();
        let mut e = Self::zero(blocks);
        e.add_term(DottedDiagram::identity(n), &c);
        e
    }

    /// The central element ħ.
    pub fn hbar(blocks: Composition) -> Self {
        Self::scalar(blocks, HPoly::hbar())
    }

    /// A single basis element with coefficient 1.
    pub fn basis(blocks: Composition, d: DottedDiagram) -> Result<Self> {
        Self::from_terms(blocks, [(d, HPoly::one())])
    }

    /// An undotted crossing diagram.
    pub fn crossing(blocks: Composition, perm: Perm) -> Result<Self> {
        Self::basis(blocks, DottedDiagram::crossing(perm))
    }

    /// Builds an element from terms, validating strand counts and block preservation.
    pub fn from_terms(blocks: Composition, terms: impl IntoIterator<Item = (DottedDiagram, HPoly)>) -> Result<Self> {
        let n = blocks.n_total();
        let ranges = blocks.block_ranges();
        let mut e = Self::zero(blocks);
        for (d, c) in terms {
            if d.strands() != n {
                return Err(Error::StrandMismatch(d.strands(), n));
            }
            if !d.perm.preserves_ranges(&ranges) {
                return Err(Error::BlockViolation(e.blocks.to_string()));
            }
            e.add_term(d, &c);
        }
        Ok(e)
    }

    /// The dot generator `X_j` (0-based strand `j`).
    pub fn x(blocks: Composition, j: usize) -> Result<Self> {
        let n = blocks.n_total();
        if j >= n {
            return Err(Error::GeneratorOutOfRange { generator: format!("X{}", j + 1), strands: n });
        }
        let mut dots = vec![0; n];
        dots[j] = 1;
        Self::basis(blocks, DottedDiagram { dots, perm: Perm::identity(n) })
    }

    /// The crossing generator `s_i` between 0-based strands `i` and `i + 1`.
    pub fn s(blocks: Composition, i: usize) -> Result<Self> {
        let n = blocks.n_total();
        if i + 1 >= n {
            return Err(Error::GeneratorOutOfRange { generator: format!("s{}", i + 1), strands: n });
        }
        Self::crossing(blocks, Perm::simple(n, i))
    }

    /// Block structure `τ` of the subalgebra `NH_τ` containing this element.
    pub fn blocks(&self) -> &Composition {
        &self.blocks
    }

    /// Number of strands.
    pub fn strand_count(&self) -> usize {
        self.blocks.n_total()
    }

    /// Nonzero terms in basis order.
    pub fn terms(&self) -> impl Iterator<Item = (&DottedDiagram, &HPoly)> {
        self.terms.iter()
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Whether the element is zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of a basis element.
    pub fn coeff(&self, d: &DottedDiagram) -> HPoly {
        self.terms.get(d).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, d: DottedDiagram, c: &HPoly) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(d.clone()).or_default();
        entry.add_assign_ref(c);
        if entry.is_zero() {
            self.terms.remove(&d);
        }
    }

    /// Reinterprets the element in a coarser or finer block algebra, checking membership.
    pub fn with_blocks(&self, blocks: Composition) -> Result<Self> {
        Self::from_terms(blocks, self.terms.iter().map(|(d, c)| (d.clone(), c.clone())))
    }

    /// Sum of two elements.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let blocks = self.joint_blocks(other)?;
        let mut out = Self { blocks, terms: self.terms.clone() };
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c);
        }
        Ok(out)
    }

    /// Difference of two elements.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Additive inverse.
    pub fn neg(&self) -> Self {
        self.scale(&HPoly::integer(-1))
    }

    /// Multiplication by a central ħ-polynomial.
    pub fn scale(&self, c: &HPoly) -> Self {
        let mut out = Self::zero(self.blocks.clone());
        for (d, x) in &self.terms {
            out.add_term(d.clone(), &(x * c));
        }
        out
    }

    fn joint_blocks(&self, other: &Self) -> Result<Composition> {
        if self.strand_count() != other.strand_count() {
            return Err(Error::StrandMismatch(self.strand_count(), other.strand_count()));
        }
        self.blocks.common_coarsening(&other.blocks)
    }

    /// The product `self · other`, with `self` stacked on top.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let blocks = self.joint_blocks(other)?;
        let mut out = Self::zero(blocks);
        for (da, ca) in &self.terms {
            for (db, cb) in &other.terms {
                let c = ca * cb;
                for ((g, w), cw) in pass_dots_up(&da.perm, &db.dots) {
                    let Some(perm) = nil_product(&w, &db.perm) else { continue };
                    let dots = da.dots.iter().zip(&g).map(|(x, y)| x + y).collect();
                    out.add_term(DottedDiagram { dots, perm }, &(&c * &cw));
                }
            }
        }
        Ok(out)
    }

    /// Terms sorted for display: longer permutations first, then more dots, then lower ħ-degree.
    fn display_terms(&self) -> Vec<(&DottedDiagram, u32, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().flat_map(|(d, c)| c.terms().map(move |(e, q)| (d, e, q))).collect();
        v.sort_by_key(|(d, e, _)| (Reverse(d.perm.length()), d.perm.clone(), Reverse(d.dot_degree()), Reverse(d.dots.clone()), *e));
        v
    }
}

fn monomial_factors(d: &DottedDiagram, hexp: u32) -> Vec<String> {
    let mut factors = vec!["h".to_string(); hexp as usize];
    for (j, &k) in d.dots.iter().enumerate() {
        for _ in 0..k {
            factors.push(format!("X{}", j + 1));
        }
    }
    for i in d.perm.reduced_word() {
        factors.push(format!("s{}", i + 1));
    }
    factors
}

impl fmt::Display for AlgebraElement {
    /// Canonical normal form such as `X2*s1 + h`; the output re-parses to the same element.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.display_terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (d, e, q)) in terms.into_iter().enumerate() {
            match (k == 0, q.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            let mag = q.abs();
            let mut factors = monomial_factors(d, e);
            if !mag.is_one() || factors.is_empty() {
                factors.insert(0, fmt_rational(&mag));
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NH{}[{self}]", self.blocks)
    }
}

/// The minimal-length representative `α` and remainder `w'` with `w = α ∘ w'`, `w' ∈ S_τ`.
pub fn parabolic_split(w: &Perm, tau: &Composition) -> (Perm, Perm) {
    let mut alpha = vec![0; w.degree()];
    for r in tau.block_ranges() {
        let mut imgs: Vec<usize> = r.clone().map(|i| w.apply(i)).collect();
        imgs.sort_unstable();
        for (i, x) in r.zip(imgs) {
            alpha[i] = x;
        }
    }
    let alpha = Perm::from_images(alpha).expect("sorted block images form a permutation");
    let rest = alpha.inverse().compose(w);
    (alpha, rest)
}

/// The decomposition `x = Σ_α α · y_α` of `NH_σ` as a free right `NH_τ`-module.
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// The pairs `(α, y_α)` over all `α ∈ S_{σ,τ}` in shuffle order.
    pub summands: Vec<(Perm, AlgebraElement)>,
}

impl Decomposition {
    /// The coefficient element at a shuffle.
    pub fn get(&self, alpha: &Perm) -> Option<&AlgebraElement> {
        self.summands.iter().find(|(a, _)| a == alpha).map(|(_, y)| y)
    }

    /// Multiplies the summands back together.
    pub fn recombine(&self, sigma: &Composition) -> Result<AlgebraElement> {
        let mut acc = AlgebraElement::zero(sigma.clone());
        for (alpha, y) in &self.summands {
            let a = AlgebraElement::crossing(sigma.clone(), alpha.clone())?;
            acc = acc.add(&a.mul(y)?)?;
        }
        acc.with_blocks(sigma.clone())
    }
}

/// Decomposes `x ∈ NH_σ` over the free right `NH_τ`-basis `S_{σ,τ}`.
pub fn module_decompose(sigma: &Composition, tau: &Composition, x: &AlgebraElement) -> Result<Decomposition> {
    if !refines(sigma, tau)? {
        return Err(Error::NotRefinement { coarser: sigma.to_string(), finer: tau.to_string() });
    }
    if x.strand_count() != sigma.n_total() {
        return Err(Error::StrandMismatch(x.strand_count(), sigma.n_total()));
    }
    let x = x.with_blocks(sigma.clone())?;
    let shuffles = enumerate_shuffles(sigma, tau)?;
    let mut parts: BTreeMap<Perm, AlgebraElement> = BTreeMap::new();
    for (d, c) in x.terms() {
        let (alpha, rest) = parabolic_split(&d.perm, tau);
        let below = AlgebraElement::crossing(tau.clone(), rest)?;
        for ((beta, b), cb) in pass_dots_down(&d.dots, &alpha) {
            let (top, inner) = parabolic_split(&beta, tau);
            let y = AlgebraElement::crossing(tau.clone(), inner)?
                .mul(&AlgebraElement::basis(tau.clone(), DottedDiagram { dots: b, perm: Perm::identity(beta.degree()) })?)?
                .mul(&below)?
                .scale(&(c * &cb));
            let slot = parts.entry(top).or_insert_with(|| AlgebraElement::zero(tau.clone()));
            *slot = slot.add(&y)?;
        }
    }
    let mut summands = Vec::with_capacity(shuffles.len());
    for alpha in shuffles.perms() {
        let y = parts.remove(alpha).unwrap_or_else(|| AlgebraElement::zero(tau.clone()));
        summands.push((alpha.clone(), y));
    }
    if let Some((beta, _)) = parts.into_iter().find(|(_, y)| !y.is_zero()) {
        return Err(Error::NotInSet(format!("decomposition produced the non-shuffle {beta}")));
    }
    Ok(Decomposition { summands })
}

/// The block-swapping isomorphism `NH_{(a,b)} → NH_{(b,a)}`.
#[derive(Clone, Debug)]
pub struct FlipIso {
    source: Composition,
    target: Composition,
    relabel: Perm,
}

impl FlipIso {
    /// Source algebra blocks `(a, b)`.
    pub fn source(&self) -> &Composition {
        &self.source
    }

    /// Target algebra blocks `(b, a)`.
    pub fn target(&self) -> &Composition {
        &self.target
    }

    /// The strand relabelling moving the first block to the end.
    pub fn relabel(&self) -> &Perm {
        &self.relabel
    }

    /// Applies the isomorphism to an element of `NH_{(a,b)}`.
    pub fn apply(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        let x = x.with_blocks(self.source.clone())?;
        let mut out = AlgebraElement::zero(self.target.clone());
        for (d, c) in x.terms() {
            let mut dots = vec![0; d.dots.len()];
            for (p, &k) in d.dots.iter().enumerate() {
                dots[self.relabel.apply(p)] = k;
            }
            out.add_term(DottedDiagram { dots, perm: d.perm.conjugate(&self.relabel) }, c);
        }
        Ok(out)
    }
}

/// The tensor-flip isomorphism for a two-part composition `(a, b)`.
pub fn flip_iso(sigma: &Composition) -> Result<FlipIso> {
    let &[a, b] = sigma.parts() else {
        return Err(Error::NotTwoParts(sigma.to_string()));
    };
    let relabel = Perm::from_images((0..a + b).map(|p| if p < a { p + b } else { p - a }).collect())?;
    Ok(FlipIso { source: sigma.clone(), target: sigma.reversed(), relabel })
}

/// The residual permutation sending the first `a`-block of `(a, b)` past the `b`-block.
pub fn full_block_crossing(sigma: &Composition) -> Result<Perm> {
    Ok(flip_iso(sigma)?.relabel)
}

impl AlgebraElement {
    /// Evaluates ħ and the dots at zero, keeping only undotted constant terms.
    pub fn nil_coxeter_part(&self) -> Vec<(Perm, BigRational)> {
        self.terms
            .iter()
            .filter(|(d, _)| d.dot_degree() == 0)
            .map(|(d, c)| (d.perm.clone(), c.coeff(0)))
            .filter(|(_, q)| !q.is_zero())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(s: &str) -> Composition {
        s.parse().unwrap()
    }

    fn nh(n: usize) -> Composition {
        Composition::single(n)
    }

    #[test]
    fn bigons_vanish() {
        let s = AlgebraElement::s(nh(2), 0).unwrap();
        assert!(s.mul(&s).unwrap().is_zero());
    }

    #[test]
    fn crossing_times_dot() {
        let s = AlgebraElement::s(nh(2), 0).unwrap();
        let x1 = AlgebraElement::x(nh(2), 0).unwrap();
        assert_eq!(s.mul(&x1).unwrap().to_string(), "X2*s1 + h");
        let x2 = AlgebraElement::x(nh(2), 1).unwrap();
        assert_eq!(s.mul(&x2).unwrap().to_string(), "X1*s1 - h");
    }

    #[test]
    fn braid_relation() {
        let s1 = AlgebraElement::s(nh(3), 0).unwrap();
        let s2 = AlgebraElement::s(nh(3), 1).unwrap();
        let l = s1.mul(&s2).unwrap().mul(&s1).unwrap();
        let r = s2.mul(&s1).unwrap().mul(&s2).unwrap();
        assert!(l.sub(&r).unwrap().is_zero());
        assert_eq!(l.to_string(), "s1*s2*s1");
    }

    #[test]
    fn divided_difference_matches_definition() {
        assert_eq!(divided_difference(&[1, 0], 0), vec![(1, vec![0, 0])]);
        assert_eq!(divided_difference(&[0, 1], 0), vec![(-1, vec![0, 0])]);
        assert_eq!(divided_difference(&[2, 0], 0), vec![(1, vec![0, 1]), (1, vec![1, 0])]);
        assert!(divided_difference(&[1, 1], 0).is_empty());
    }

    #[test]
    fn decomposition_basis_of_nh3_over_nh12() {
        let x = AlgebraElement::one(nh(3));
        let d = module_decompose(&nh(3), &comp("1,2"), &x).unwrap();
        let names: Vec<String> = d.summands.iter().map(|(a, _)| a.to_string()).collect();
        assert_eq!(names, vec!["123", "213", "312"]);
        assert_eq!(d.summands[0].1, AlgebraElement::one(comp("1,2")));
        assert!(d.summands[1].1.is_zero() && d.summands[2].1.is_zero());
    }

    #[test]
    fn decomposition_recombines_dotted_elements() {
        let blocks = nh(3);
        let d = DottedDiagram::new(vec![2, 0, 1], Perm::parse_digits("321").unwrap()).unwrap();
        let x = AlgebraElement::basis(blocks.clone(), d).unwrap();
        let dec = module_decompose(&blocks, &comp("1,2"), &x).unwrap();
        assert_eq!(dec.recombine(&blocks).unwrap(), x);
    }

    #[test]
    fn flip_examples() {
        let flip = flip_iso(&comp("2,1")).unwrap();
        let xi = AlgebraElement::s(comp("2,1"), 0).unwrap();
        let ix = AlgebraElement::s(comp("1,2"), 1).unwrap();
        assert_eq!(flip.apply(&xi).unwrap(), ix);
        let dots = DottedDiagram::new(vec![1, 2, 3], Perm::identity(3)).unwrap();
        let img = flip.apply(&AlgebraElement::basis(comp("2,1"), dots).unwrap()).unwrap();
        let want = DottedDiagram::new(vec![3, 1, 2], Perm::identity(3)).unwrap();
        assert_eq!(img, AlgebraElement::basis(comp("1,2"), want).unwrap());
        assert!(flip_iso(&comp("1,1,1")).is_err());
    }

    #[test]
    fn full_block_crossings() {
        assert_eq!(full_block_crossing(&comp("1,2")).unwrap().to_string(), "312");
        assert_eq!(full_block_crossing(&comp("2,2")).unwrap().to_string(), "3412");
        assert_eq!(full_block_crossing(&comp("2,1")).unwrap().to_string(), "231");
    }

    #[test]
    fn block_membership_is_enforced() {
        assert!(AlgebraElement::s(comp("1,2"), 0).is_err());
        assert!(AlgebraElement::s(comp("1,2"), 1).is_ok());
        assert!(AlgebraElement::x(nh(2), 2).is_err());
    }
}
