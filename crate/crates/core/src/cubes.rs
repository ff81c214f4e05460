//! Bifactorization cubes for the pair cases and the vertices of their
//! Beck–Chevalley cubes, expressed as restriction/induction functor words.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::compositions::{classify_pair, psi_inv, refines, BinaryString, Composition, PairCase};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::shuffles::{enumerate_shuffles, shuffle_count};

/// A coordinate direction of a bifactorization cube or of its Beck–Chevalley cube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    /// The first boundary axis, selecting the source pair.
    Left,
    /// The second boundary axis, selecting the target pair.
    Right,
    /// A palindromic axis, occurring symmetrically around the center; numbered from the outside in.
    Mirror(usize),
    /// The axis splitting off the unbalanced tail.
    Tail,
    /// A padding axis that does not occur in the vertex formula.
    Pad(usize),
    /// The axis separating the two layers of a Beck–Chevalley cube.
    Layer,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Left => write!(f, "d1"),
            Axis::Right => write!(f, "d2"),
            Axis::Mirror(k) => write!(f, "e{k}"),
            Axis::Tail => write!(f, "z"),
            Axis::Pad(k) => write!(f, "h{k}"),
            Axis::Layer => write!(f, "layer"),
        }
    }
}

impl Serialize for Axis {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A bifactorization cube: a map from `{0,1}^d` to compositions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubeSpec {
    /// The source composition `(a, b)`.
    pub source: Composition,
    /// The target composition `(c, d)`.
    pub target: Composition,
    /// The classification of the pair.
    pub case: PairCase,
    /// Axis labels in coordinate order.
    pub axes: Vec<Axis>,
}

fn mirror_axes(k: usize) -> impl Iterator<Item = Axis> {
    (1..k).map(Axis::Mirror)
}

fn case_axes(case: PairCase) -> Vec<Axis> {
    let mut axes = vec![Axis::Left, Axis::Right];
    match case.unmirrored() {
        PairCase::AcUnbal { c, m } => {
            axes.extend(mirror_axes(c));
            axes.push(Axis::Tail);
            axes.extend((1..m).map(Axis::Pad));
        }
        PairCase::Aa { a } => axes.extend(mirror_axes(a)),
        PairCase::CaUnbal { b, .. } | PairCase::OverLeft { b, .. } => {
            axes.push(Axis::Tail);
            axes.extend(mirror_axes(b));
        }
        PairCase::Swap { c, .. } => axes.extend(mirror_axes(c)),
        PairCase::OverRight { c, .. } => {
            axes.extend(mirror_axes(c));
            axes.push(Axis::Tail);
        }
        _ => unreachable!("unmirrored cases only"),
    }
    axes
}

/// Builds the bifactorization cube of a pair; `a < c` pairs use the reversal of the `a > c` formulas.
pub fn build_bifactorization(source: &Composition, target: &Composition) -> Result<CubeSpec> {
    let case = classify_pair(source, target)?;
    Ok(CubeSpec { source: source.clone(), target: target.clone(), case, axes: case_axes(case) })
}

impl CubeSpec {
    /// The cube dimension.
    pub fn dimension(&self) -> usize {
        self.axes.len()
    }

    /// Whether the vertex formula is the reversal of an `a > c` formula.
    pub fn mirrored(&self) -> bool {
        self.case.is_mirror()
    }

    /// The cube of the reversed pair.
    pub fn reversed(&self) -> Result<CubeSpec> {
        build_bifactorization(&self.source.reversed(), &self.target.reversed())
    }

    /// The axes of the Beck–Chevalley cube other than the layer axis.
    pub fn inner_axes(&self) -> &[Axis] {
        &self.axes[2..]
    }

    /// Position of an axis in coordinate order.
    pub fn axis_position(&self, axis: Axis) -> Option<usize> {
        self.axes.iter().position(|&a| a == axis)
    }

    /// The binary presentation of the vertex at `x`.
    pub fn vertex_string(&self, x: &[bool]) -> Result<BinaryString> {
        if x.len() != self.dimension() {
            return Err(Error::IndexLength { got: x.len(), expected: self.dimension() });
        }
        let bit = |axis: Axis| x[self.axis_position(axis).expect("axis of this cube")];
        let mirrors = |k: usize| (1..k).map(|j| bit(Axis::Mirror(j))).collect::<Vec<bool>>();
        let rev = |v: &[bool]| v.iter().rev().copied().collect::<Vec<bool>>();
        let zeros = |k: usize| vec![false; k.saturating_sub(1)];
        let (d1, d2) = (bit(Axis::Left), bit(Axis::Right));
        let mut s = Vec::new();
        match self.case.unmirrored() {
            PairCase::AcUnbal { c, m } => {
                let e = mirrors(c);
                s.extend(&e);
                s.push(d1 || d2);
                s.extend(rev(&e));
                s.push(bit(Axis::Tail));
                s.extend(zeros(m));
            }
            PairCase::Aa { a } => {
                let e = mirrors(a);
                s.extend(&e);
                s.push(d1 || d2);
                s.extend(rev(&e));
            }
            PairCase::CaUnbal { b, m } => {
                let e = mirrors(b);
                s.extend(zeros(m));
                s.push(bit(Axis::Tail));
                s.extend(&e);
                s.push(d1 || d2);
                s.extend(rev(&e));
            }
            PairCase::Swap { c, l } => {
                let e = mirrors(c);
                s.extend(&e);
                s.push(d1);
                s.extend(zeros(l));
                s.push(d2);
                s.extend(rev(&e));
            }
            PairCase::OverLeft { b, m, l } => {
                let e = mirrors(b);
                s.extend(zeros(m));
                s.push(bit(Axis::Tail));
                s.extend(&e);
                s.push(d1);
                s.extend(zeros(l));
                s.push(d2);
                s.extend(rev(&e));
            }
            PairCase::OverRight { c, m, l } => {
                let e = mirrors(c);
                s.extend(&e);
                s.push(d1);
                s.extend(zeros(l));
                s.push(d2);
                s.extend(rev(&e));
                s.push(bit(Axis::Tail));
                s.extend(zeros(m));
            }
            _ => unreachable!("unmirrored cases only"),
        }
        if self.mirrored() {
            s.reverse();
        }
        Ok(BinaryString::new(s))
    }

    /// The composition at vertex `x`.
    pub fn vertex(&self, x: &[bool]) -> Result<Composition> {
        Ok(psi_inv(&self.vertex_string(x)?))
    }

    /// All vertex indices in colex order (first coordinate fastest).
    pub fn indices(&self) -> Vec<Vec<bool>> {
        colex_indices(self.dimension())
    }

    /// Checks that every edge joins a composition to one of its refinements.
    pub fn check_edges(&self) -> Result<()> {
        for x in self.indices() {
            for k in 0..x.len() {
                if x[k] {
                    continue;
                }
                let mut y = x.clone();
                y[k] = true;
                let (u, v) = (self.vertex(&x)?, self.vertex(&y)?);
                if !refines(&u, &v)? {
                    return Err(Error::NotRefinement { coarser: u.to_string(), finer: v.to_string() });
                }
            }
        }
        Ok(())
    }
}

/// All bit vectors of length `d` in colex order.
pub fn colex_indices(d: usize) -> Vec<Vec<bool>> {
    (0..1u64 << d).map(|mask| (0..d).map(|k| mask >> k & 1 == 1).collect()).collect()
}

/// The direction of one step of a functor word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Step {
    /// Restriction to a finer (or equal) composition.
    Res,
    /// Induction to a coarser composition.
    Ind,
}

/// A composite of restrictions and inductions, applied from the first row to the last.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctorWord {
    /// The compositions visited.
    pub rows: Vec<Composition>,
    /// The step between each pair of consecutive rows.
    pub steps: Vec<Step>,
}

impl FunctorWord {
    /// Derives the step directions from the rows.
    pub fn from_rows(rows: Vec<Composition>) -> Result<Self> {
        let mut steps = Vec::with_capacity(rows.len().saturating_sub(1));
        for w in rows.windows(2) {
            if refines(&w[0], &w[1])? {
                steps.push(Step::Res);
            } else if refines(&w[1], &w[0])? {
                steps.push(Step::Ind);
            } else {
                return Err(Error::NotRefinement { coarser: w[0].to_string(), finer: w[1].to_string() });
            }
        }
        Ok(FunctorWord { rows, steps })
    }

    /// The `(coarser, finer)` pairs of the induction steps in application order.
    pub fn inductions(&self) -> Vec<(Composition, Composition)> {
        self.steps
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == Step::Ind)
            .map(|(k, _)| (self.rows[k + 1].clone(), self.rows[k].clone()))
            .collect()
    }

    /// Spells the word with one letter per nontrivial step, last step leftmost; `None` if a step has no name.
    pub fn spell(&self, name: impl Fn(&Composition, &Composition) -> Option<char>) -> Option<String> {
        let mut letters = Vec::new();
        for (k, step) in self.steps.iter().enumerate() {
            let (u, v) = (&self.rows[k], &self.rows[k + 1]);
            if u == v {
                continue;
            }
            letters.push(match step {
                Step::Res => name(u, v)?.to_string(),
                Step::Ind => format!("{}*", name(v, u)?),
            });
        }
        if letters.is_empty() {
            return Some("Id".into());
        }
        letters.reverse();
        Some(letters.concat())
    }
}

impl fmt::Display for FunctorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        write!(f, "{}", rows.join(" / "))
    }
}

/// Names of the restriction functors along the edges of the three-strand cube.
pub fn three_strand_letter(coarser: &Composition, finer: &Composition) -> Option<char> {
    match (coarser.parts(), finer.parts()) {
        ([3], [2, 1]) => Some('H'),
        ([3], [1, 2]) => Some('I'),
        ([1, 2], [1, 1, 1]) => Some('F'),
        ([2, 1], [1, 1, 1]) => Some('G'),
        _ => None,
    }
}

/// A vertex of a Beck–Chevalley cube.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BCVertex {
    /// The inner index bits.
    pub beta: Vec<bool>,
    /// The layer bit.
    pub layer: bool,
    /// The five-row functor word.
    pub word: FunctorWord,
    /// The free rank of the vertex value over the input module.
    pub rank: u64,
}

/// The vertex `(β, layer)` of the Beck–Chevalley cube of `cube`.
pub fn bc_vertex(cube: &CubeSpec, beta: &[bool], layer: bool) -> Result<BCVertex> {
    let inner = cube.dimension() - 2;
    if beta.len() != inner {
        return Err(Error::IndexLength { got: beta.len(), expected: inner });
    }
    let at = |d1: bool, d2: bool, rest: &[bool]| {
        let mut x = vec![d1, d2];
        x.extend_from_slice(rest);
        cube.vertex(&x)
    };
    let zero = vec![false; inner];
    let rows =
        vec![at(false, true, &zero)?, at(false, true, beta)?, at(layer, layer, beta)?, at(true, false, beta)?, at(true, false, &zero)?];
    let word = FunctorWord::from_rows(rows)?;
    let mut v = BCVertex { beta: beta.to_vec(), layer, word, rank: 0 };
    v.rank = vertex_rank(&v)?;
    Ok(v)
}

/// The free rank: the product of the shuffle counts of the induction steps.
pub fn vertex_rank(v: &BCVertex) -> Result<u64> {
    let mut rank: u64 = 1;
    for (coarser, finer) in v.word.inductions() {
        let count = u64::try_from(shuffle_count(&coarser, &finer)?).map_err(|_| Error::LimitExceeded("vertex rank".into()))?;
        rank = rank.checked_mul(count).ok_or_else(|| Error::LimitExceeded("vertex rank".into()))?;
    }
    Ok(rank)
}

/// A set of composed diagrams together with their factorizations along the induction steps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiagramSet {
    elements: BTreeMap<Perm, Vec<Perm>>,
}

impl DiagramSet {
    /// Number of diagrams.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Whether the set is empty.
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Membership of a composed diagram.
    pub fn contains(&self, w: &Perm) -> bool {
        self.elements.contains_key(w)
    }

    /// The factors of a composed diagram, first-applied first.
    pub fn factors(&self, w: &Perm) -> Option<&[Perm]> {
        self.elements.get(w).map(Vec::as_slice)
    }

    /// The composed diagrams in lexicographic order.
    pub fn perms(&self) -> impl Iterator<Item = &Perm> {
        self.elements.keys()
    }

    /// Composed diagrams with their factors.
    pub fn iter(&self) -> impl Iterator<Item = (&Perm, &[Perm])> {
        self.elements.iter().map(|(w, f)| (w, f.as_slice()))
    }

    /// Whether every diagram of `self` occurs in `other`.
    pub fn is_subset(&self, other: &DiagramSet) -> bool {
        self.elements.keys().all(|w| other.contains(w))
    }

    /// The diagrams of `self` not in `other`, keeping the factorizations of `self`.
    pub fn difference(&self, other: &DiagramSet) -> DiagramSet {
        DiagramSet { elements: self.elements.iter().filter(|(w, _)| !other.contains(w)).map(|(w, f)| (w.clone(), f.clone())).collect() }
    }
}

/// The diagrams `E_last ∘ … ∘ E_first` over the shuffle sets of the induction steps; fails if two products coincide.
pub fn vertex_diagrams(word: &FunctorWord) -> Result<DiagramSet> {
    let n = word.rows.first().map_or(0, Composition::n_total);
    let mut elements: BTreeMap<Perm, Vec<Perm>> = BTreeMap::from([(Perm::identity(n), Vec::new())]);
    for (coarser, finer) in word.inductions() {
        let shuffles = enumerate_shuffles(&coarser, &finer)?;
        let mut next = BTreeMap::new();
        for (p, factors) in &elements {
            for e in shuffles.perms() {
                let mut f = factors.clone();
                f.push(e.clone());
                if next.insert(e.compose(p), f).is_some() {
                    return Err(Error::NotInSet(format!("composition of shuffles is not injective for {word}")));
                }
            }
        }
        elements = next;
    }
    Ok(DiagramSet { elements })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(s: &str) -> Composition {
        s.parse().unwrap()
    }

    fn cube(a: &str, b: &str) -> CubeSpec {
        build_bifactorization(&comp(a), &comp(b)).unwrap()
    }

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn dimensions_follow_the_case_table() {
        assert_eq!(cube("2,3", "2,3").dimension(), 4);
        assert_eq!(cube("2,2", "2,2").dimension(), 3);
        assert_eq!(cube("3,1", "3,1").dimension(), 3);
        assert_eq!(cube("3,2", "2,3").dimension(), 3);
        assert_eq!(cube("4,1", "2,3").dimension(), 3);
        assert_eq!(cube("2,3", "1,4").dimension(), 3);
        assert_eq!(cube("1,2", "2,1").dimension(), 2);
    }

    #[test]
    fn vertex_examples() {
        let q = cube("2,3", "2,3");
        assert_eq!(q.vertex(&bits("0000")).unwrap(), comp("5"));
        assert_eq!(q.vertex(&bits("0100")).unwrap(), comp("2,3"));
        let sq = cube("1,2", "2,1");
        assert_eq!(sq.vertex(&bits("00")).unwrap(), comp("3"));
        assert_eq!(sq.vertex(&bits("10")).unwrap(), comp("2,1"));
        assert_eq!(sq.vertex(&bits("01")).unwrap(), comp("1,2"));
        assert_eq!(sq.vertex(&bits("11")).unwrap(), comp("1,1,1"));
    }

    #[test]
    fn edges_are_refinements() {
        for total in 2..=6 {
            for a in Composition::two_part(total) {
                for b in Composition::two_part(total) {
                    build_bifactorization(&a, &b).unwrap().check_edges().unwrap();
                }
            }
        }
    }

    #[test]
    fn three_strand_words() {
        let sq = cube("1,2", "2,1");
        let name = |v: &BCVertex| v.word.spell(three_strand_letter).unwrap();
        assert_eq!(name(&bc_vertex(&sq, &[], false).unwrap()), "HI*");
        assert_eq!(name(&bc_vertex(&sq, &[], true).unwrap()), "G*F");
        let q = cube("1,2", "1,2");
        assert_eq!(name(&bc_vertex(&q, &[false], false).unwrap()), "II*");
        assert_eq!(name(&bc_vertex(&q, &[true], false).unwrap()), "F*GG*F");
        assert_eq!(name(&bc_vertex(&q, &[false], true).unwrap()), "Id");
        assert_eq!(name(&bc_vertex(&q, &[true], true).unwrap()), "F*F");
        assert_eq!(bc_vertex(&sq, &[], false).unwrap().word.to_string(), "(1,2) / (1,2) / (3) / (2,1) / (2,1)");
    }

    #[test]
    fn ranks_of_the_five_strand_example() {
        let q = cube("2,3", "2,3");
        let ranks = |layer| -> Vec<u64> { ["00", "10", "01", "11"].iter().map(|b| bc_vertex(&q, &bits(b), layer).unwrap().rank).collect() };
        assert_eq!(ranks(false), vec![10, 12, 18, 24]);
        assert_eq!(ranks(true), vec![1, 6, 3, 12]);
    }

    #[test]
    fn diagram_sets_match_ranks() {
        let q = cube("2,3", "2,3");
        for x in colex_indices(3) {
            let v = bc_vertex(&q, &x[..2], x[2]).unwrap();
            assert_eq!(vertex_diagrams(&v.word).unwrap().len() as u64, v.rank);
        }
    }

    #[test]
    fn index_length_is_checked() {
        assert!(bc_vertex(&cube("2,3", "2,3"), &[false], false).is_err());
        assert!(cube("2,3", "2,3").vertex(&[false]).is_err());
    }
}
