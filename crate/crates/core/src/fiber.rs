//! Iterated total fibers of Beck–Chevalley cubes in the diagram-set model.
//!
//! Every vertex value is free over the input module on a set of composed
//! shuffle diagrams, and every collapsed edge is a split surjection whose
//! kernel is free on the difference of the two diagram sets.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::full_block_crossing;
use crate::compositions::{classify_pair, BinaryString, Composition, PairCase};
use crate::cubes::{bc_vertex, build_bifactorization, colex_indices, vertex_diagrams, Axis, CubeSpec, DiagramSet};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::shuffles::{anycross, mincross, LevelParams, Variant};

/// A Beck–Chevalley cube after collapsing some of its axes.
#[derive(Clone, Debug)]
pub struct IntermediateCube {
    /// The bifactorization cube the vertices come from.
    pub cube: CubeSpec,
    /// Remaining axes in index order, the layer axis last while present.
    pub axes: Vec<Axis>,
    /// Diagram sets keyed by the index bits over the remaining axes.
    pub sets: BTreeMap<Vec<bool>, DiagramSet>,
}

/// One row of a rank table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    /// Index bits over the remaining axes, in axis order.
    pub index_bits: String,
    /// Free rank of the vertex.
    pub rank: u64,
}

/// The ranks of all vertices at one level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelTable {
    /// Number of remaining axes.
    pub level: usize,
    /// Entries in colex order: first axis fastest, last axis slowest.
    pub entries: Vec<TableEntry>,
}

impl LevelTable {
    /// The ranks in entry order.
    pub fn ranks(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.rank).collect()
    }
}

fn bit_string(bits: &[bool]) -> String {
    BinaryString::new(bits.to_vec()).to_string()
}

impl IntermediateCube {
    /// Number of remaining axes.
    pub fn level(&self) -> usize {
        self.axes.len()
    }

    /// The diagram set at an index.
    pub fn set(&self, index: &[bool]) -> Option<&DiagramSet> {
        self.sets.get(index)
    }

    /// The rank table of this level.
    pub fn table(&self) -> LevelTable {
        let entries = colex_indices(self.axes.len())
            .into_iter()
            .map(|x| TableEntry { index_bits: bit_string(&x), rank: self.sets[&x].len() as u64 })
            .collect();
        LevelTable { level: self.level(), entries }
    }
}

/// The initial intermediate cube of a bifactorization cube: all Beck–Chevalley vertices.
pub fn initial_cube_of(cube: &CubeSpec) -> Result<IntermediateCube> {
    let mut axes = cube.inner_axes().to_vec();
    axes.push(Axis::Layer);
    let inner = axes.len() - 1;
    let sets = colex_indices(axes.len())
        .into_par_iter()
        .map(|x| {
            let v = bc_vertex(cube, &x[..inner], x[inner])?;
            Ok((x, vertex_diagrams(&v.word)?))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(IntermediateCube { cube: cube.clone(), axes, sets })
}

/// The cube on which a pair is computed: the pair itself, or its reversal for `a < c`.
pub fn computation_cube(source: &Composition, target: &Composition) -> Result<CubeSpec> {
    let cube = build_bifactorization(source, target)?;
    if cube.mirrored() {
        cube.reversed()
    } else {
        Ok(cube)
    }
}

/// The initial intermediate cube of a pair.
pub fn initial_cube(source: &Composition, target: &Composition) -> Result<IntermediateCube> {
    initial_cube_of(&computation_cube(source, target)?)
}

/// Collapses one axis: each vertex becomes the kernel of its edge along `axis`.
pub fn take_fiber_along(cube: &IntermediateCube, axis: Axis) -> Result<IntermediateCube> {
    let k = cube.axes.iter().position(|&a| a == axis).ok_or_else(|| Error::AxisMissing(axis.to_string()))?;
    let sets = cube
        .sets
        .par_iter()
        .filter(|(x, _)| !x[k])
        .map(|(x, top)| {
            let mut y = x.clone();
            y[k] = true;
            let bottom = &cube.sets[&y];
            if !bottom.is_subset(top) {
                return Err(Error::SectionFailure { axis: axis.to_string(), index: bit_string(x) });
            }
            let mut rest = x.clone();
            rest.remove(k);
            Ok((rest, top.difference(bottom)))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let mut axes = cube.axes.clone();
    axes.remove(k);
    Ok(IntermediateCube { cube: cube.cube.clone(), axes, sets })
}

/// The collapse order: the layer axis, the palindromic axes from the innermost out, then the remaining axes.
pub fn collapse_order(cube: &CubeSpec) -> Vec<Axis> {
    let mut order = vec![Axis::Layer];
    let mut mirrors: Vec<Axis> = cube.inner_axes().iter().copied().filter(|a| matches!(a, Axis::Mirror(_))).collect();
    mirrors.reverse();
    order.extend(mirrors);
    order.extend(cube.inner_axes().iter().copied().filter(|a| !matches!(a, Axis::Mirror(_))));
    order
}

/// A second valid order that reverses the trailing non-palindromic axes, if there are at least two.
pub fn alternate_collapse_order(cube: &CubeSpec) -> Option<Vec<Axis>> {
    let mut order = collapse_order(cube);
    let start = order.iter().position(|a| matches!(a, Axis::Tail | Axis::Pad(_)))?;
    if order.len() - start < 2 {
        return None;
    }
    order[start..].reverse();
    Some(order)
}

/// The outcome of a total-fiber computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    /// The total fiber is zero.
    Vanishes,
    /// The total fiber is free of rank one on the full block crossing, twisted by the block flip.
    FlipEquivalence {
        /// The residual diagram.
        residual: Perm,
        /// The blocks swapped by the flip, as the source composition.
        flip_source: Composition,
        /// The flipped blocks.
        flip_target: Composition,
    },
    /// Any other residual; this falsifies an axiom.
    Other {
        /// The residual rank.
        rank: u64,
        /// The residual diagrams.
        residual: Vec<Perm>,
    },
}

impl Verdict {
    /// Short name of the verdict.
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Vanishes => "Vanishes",
            Verdict::FlipEquivalence { .. } => "FlipEquivalence",
            Verdict::Other { .. } => "Other",
        }
    }
}

/// The full record of a total-fiber computation for one pair.
#[derive(Clone, Debug, Serialize)]
pub struct FiberReport {
    /// The source composition `(a, b)`.
    pub source: Composition,
    /// The target composition `(c, d)`.
    pub target: Composition,
    /// The pair classification.
    pub case: PairCase,
    /// Whether the computation ran on the reversed pair.
    pub mirrored: bool,
    /// The order in which axes were collapsed.
    pub collapse_order: Vec<Axis>,
    /// Rank tables from the initial cube down to the total fiber.
    pub level_tables: Vec<LevelTable>,
    /// The verdict.
    pub verdict: Verdict,
    /// Residual diagrams in the orientation of the original pair.
    pub residual: Vec<Perm>,
    /// Wall-clock time of the computation.
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Iterates the collapses in `order`, returning every intermediate cube.
pub fn collapse_all(start: IntermediateCube, order: &[Axis]) -> Result<Vec<IntermediateCube>> {
    let mut cubes = vec![start];
    for &axis in order {
        let next = take_fiber_along(cubes.last().expect("nonempty"), axis)?;
        cubes.push(next);
    }
    Ok(cubes)
}

fn classify_residual(source: &Composition, target: &Composition, residual: &[Perm]) -> Result<Verdict> {
    if residual.is_empty() {
        return Ok(Verdict::Vanishes);
    }
    if *target == source.reversed() {
        let crossing = full_block_crossing(source)?;
        if residual == [crossing.clone()] {
            return Ok(Verdict::FlipEquivalence { residual: crossing, flip_source: source.clone(), flip_target: target.clone() });
        }
    }
    Ok(Verdict::Other { rank: residual.len() as u64, residual: residual.to_vec() })
}

/// The total fiber of a pair, collapsing in `order` (the default order if `None`).
pub fn total_fiber_with_order(source: &Composition, target: &Composition, order: Option<&[Axis]>) -> Result<FiberReport> {
    let started = Instant::now();
    let case = classify_pair(source, target)?;
    let cube = computation_cube(source, target)?;
    let default = collapse_order(&cube);
    let order = order.unwrap_or(&default).to_vec();
    let cubes = collapse_all(initial_cube_of(&cube)?, &order)?;
    let last = cubes.last().expect("nonempty");
    let mut residual: Vec<Perm> = last.sets[&Vec::new()].perms().cloned().collect();
    if case.is_mirror() {
        residual = residual.iter().map(Perm::mirror).collect();
        residual.sort();
    }
    let verdict = classify_residual(source, target, &residual)?;
    Ok(FiberReport {
        source: source.clone(),
        target: target.clone(),
        case,
        mirrored: case.is_mirror(),
        collapse_order: order,
        level_tables: cubes.iter().map(IntermediateCube::table).collect(),
        verdict,
        residual,
        elapsed: started.elapsed(),
    })
}

/// The total fiber of a pair in the default collapse order.
pub fn total_fiber(source: &Composition, target: &Composition) -> Result<FiberReport> {
    total_fiber_with_order(source, target, None)
}

/// Recomputes a pair in the alternate collapse order and compares residuals; `true` when no alternate order exists.
pub fn cross_check_order(source: &Composition, target: &Composition) -> Result<bool> {
    let cube = computation_cube(source, target)?;
    let Some(order) = alternate_collapse_order(&cube) else { return Ok(true) };
    let a = total_fiber(source, target)?;
    let b = total_fiber_with_order(source, target, Some(&order))?;
    Ok(a.verdict == b.verdict && a.residual == b.residual)
}

/// The total fibers of all pairs of two-part compositions of `total`, computed in parallel.
pub fn sweep(total: usize) -> Result<Vec<FiberReport>> {
    let pairs: Vec<(Composition, Composition)> = Composition::two_part(total)
        .into_iter()
        .flat_map(|a| Composition::two_part(total).into_iter().map(move |b| (a.clone(), b)))
        .collect();
    pairs.par_iter().map(|(a, b)| total_fiber(a, b)).collect()
}

/// Compares the engine's diagram sets for `((c, c+m), (c, c+m))` with the products of Anycross and Mincross at every level.
pub fn check_level_sets(c: usize, m: usize) -> Result<bool> {
    let pair = Composition::new(vec![c, c + m])?;
    let cube = build_bifactorization(&pair, &pair)?;
    let order = collapse_order(&cube);
    let cubes = collapse_all(initial_cube_of(&cube)?, &order)?;
    for (level, stage) in cubes.iter().enumerate().take(c + 1) {
        let mirrors = if level == 0 { c - 1 } else { c - level };
        for (x, set) in &stage.sets {
            let (eps, rest) = x.split_at(mirrors);
            let beta_c = rest[0];
            let (bits, variant) = if level == 0 {
                (eps.to_vec(), if *rest.last().expect("layer bit") { Variant::TauPrime } else { Variant::Tau })
            } else if level < c {
                let (last, init) = eps.split_last().expect("an undecided palindromic bit");
                (init.to_vec(), if *last { Variant::TauPrime } else { Variant::Tau })
            } else {
                (Vec::new(), Variant::Tau)
            };
            let p = LevelParams::new(c, m, level, bits, beta_c)?;
            let a = anycross(&p, variant)?;
            let f = mincross(&p, variant)?;
            let mut products: Vec<Perm> = a.perms().iter().flat_map(|e| f.perms().iter().map(move |t| e.compose(t))).collect();
            products.sort();
            products.dedup();
            let expected: Vec<&Perm> = set.perms().collect();
            if products.len() != a.len() * f.len() || products.iter().collect::<Vec<_>>() != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(s: &str) -> Composition {
        s.parse().unwrap()
    }

    #[test]
    fn five_strand_tables() {
        let r = total_fiber(&comp("2,3"), &comp("2,3")).unwrap();
        let tables: Vec<Vec<u64>> = r.level_tables.iter().map(LevelTable::ranks).collect();
        assert_eq!(tables, vec![vec![10, 12, 18, 24, 1, 6, 3, 12], vec![9, 6, 15, 12], vec![3, 3], vec![0]]);
        assert_eq!(r.verdict, Verdict::Vanishes);
    }

    #[test]
    fn three_strand_flip() {
        let r = total_fiber(&comp("1,2"), &comp("2,1")).unwrap();
        assert!(r.mirrored);
        assert_eq!(r.level_tables[0].ranks(), vec![3, 2]);
        assert_eq!(r.residual, vec![Perm::parse_digits("312").unwrap()]);
        assert_eq!(r.verdict.name(), "FlipEquivalence");
    }

    #[test]
    fn four_strand_square_flip() {
        let r = total_fiber(&comp("2,2"), &comp("2,2")).unwrap();
        assert_eq!(r.residual, vec![Perm::parse_digits("3412").unwrap()]);
        assert_eq!(r.verdict.name(), "FlipEquivalence");
    }

    #[test]
    fn missing_axis_is_an_error() {
        let c = initial_cube(&comp("1,2"), &comp("2,1")).unwrap();
        assert!(take_fiber_along(&c, Axis::Tail).is_err());
    }

    #[test]
    fn level_sets_small() {
        assert!(check_level_sets(2, 1).unwrap());
        assert!(check_level_sets(1, 2).unwrap());
    }

    #[test]
    fn alternate_order_agrees() {
        assert!(cross_check_order(&comp("1,3"), &comp("1,3")).unwrap());
        assert!(cross_check_order(&comp("2,3"), &comp("2,3")).unwrap());
    }
}
