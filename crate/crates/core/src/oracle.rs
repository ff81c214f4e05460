//! Exact matrix realization of Beck–Chevalley cubes on finite-dimensional
//! modules, used to cross-check the diagram-set model and the structural axioms.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{flip_iso, full_block_crossing, generators, nilcoxeter_module, AlgebraElement, FiniteModule, Induction};
use crate::compositions::{psi_inv, refines, BinaryString, Composition};
use crate::cubes::{bc_vertex, build_bifactorization, colex_indices, vertex_diagrams, Axis, BCVertex, CubeSpec, Step};
use crate::error::{Error, Result};
use crate::fiber::{collapse_order, FiberReport, LevelTable, TableEntry, Verdict};
use crate::linalg::{Matrix, SparseEliminator, SparseRow};
use crate::perm::Perm;
use crate::shuffles::enumerate_shuffles;

/// A Beck–Chevalley vertex evaluated on a module: `Ind^{r5}_{r4} Res Ind Res (T)`.
#[derive(Clone, Debug)]
pub struct RealizedVertex {
    /// The vertex.
    pub vertex: BCVertex,
    /// The module; its outer induction holds the inner induced module.
    pub module: FiniteModule,
}

impl RealizedVertex {
    /// Dimension of the vertex value.
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    fn outer(&self) -> &Induction {
        self.module.induction().expect("realized vertices are induced")
    }

    fn inner(&self) -> &Induction {
        self.outer().inner.induction().expect("realized vertices are doubly induced")
    }
}

/// Evaluates a vertex on `t`, a module over the first row of its functor word.
pub fn realize_vertex(vertex: BCVertex, t: &FiniteModule) -> Result<RealizedVertex> {
    let r = &vertex.word.rows;
    if t.blocks() != &r[0] {
        return Err(Error::DimensionMismatch(format!("module over {} applied to a word starting at {}", t.blocks(), r[0])));
    }
    let base = t.restrict(&r[1])?;
    let inner = if vertex.layer { base.restrict(&r[2])?.induce(&r[3])? } else { base.induce(&r[2])?.restrict(&r[3])? };
    let module = inner.induce(&r[4])?;
    Ok(RealizedVertex { vertex, module })
}

/// How a realized edge acts on the nested mapping spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MapKind {
    /// Restriction of both arguments.
    Restriction,
    /// Standard extension into a new outer mapping space.
    Extension,
    /// Evaluation of the inner mapping space at the unit.
    Evaluation,
}

/// An edge of a Beck–Chevalley cube as a matrix acting on row vectors.
#[derive(Clone, Debug)]
pub struct RealizedMap {
    /// The matrix, of shape `dim(top) × dim(bottom)`.
    pub matrix: Matrix,
    /// The kind of map.
    pub kind: MapKind,
}

fn is_trivial(ind: &Induction) -> bool {
    ind.sigma == ind.tau
}

/// The edge `γ ↦ ((E, F) ↦ γ(E)(F))` between two adjacent vertices.
pub fn realize_edge(top: &RealizedVertex, bottom: &RealizedVertex) -> Result<RealizedMap> {
    let (tout, tin) = (top.outer(), top.inner());
    let (bout, bin) = (bottom.outer(), bottom.inner());
    if tout.sigma != bout.sigma || !refines(&tin.sigma, &bin.sigma)? || bin.inner.dim() != tin.inner.dim() {
        return Err(Error::DimensionMismatch("vertices are not adjacent".into()));
    }
    let d = bin.inner.dim();
    let f_count = bin.shuffles.len();
    let mut matrix = Matrix::zeros(top.dim(), bottom.dim());
    let inner_evals = bin
        .shuffles
        .iter()
        .map(|f| tout.inner.evaluation_matrix(&AlgebraElement::crossing(tin.sigma.clone(), f.clone())?))
        .collect::<Result<Vec<_>>>()?;
    for (a, e) in bout.shuffles.iter().enumerate() {
        let outer_eval = top.module.evaluation_matrix(&AlgebraElement::crossing(tout.sigma.clone(), e.clone())?)?;
        for (b, inner_eval) in inner_evals.iter().enumerate() {
            matrix.set_block(0, (a * f_count + b) * d, &outer_eval.mul(inner_eval)?);
        }
    }
    let kind = if is_trivial(tout) && !is_trivial(bout) {
        MapKind::Extension
    } else if is_trivial(bin) && !is_trivial(tin) {
        MapKind::Evaluation
    } else {
        MapKind::Restriction
    };
    Ok(RealizedMap { matrix, kind })
}

/// All vertices of a Beck–Chevalley cube evaluated on one module.
#[derive(Clone, Debug)]
pub struct RealizedCube {
    /// The bifactorization cube.
    pub cube: CubeSpec,
    /// Index axes, the layer axis last.
    pub axes: Vec<Axis>,
    /// Realized vertices keyed by index bits.
    pub vertices: BTreeMap<Vec<bool>, RealizedVertex>,
}

/// Realizes every vertex of the Beck–Chevalley cube of `cube` on `t`.
pub fn realize_cube(cube: &CubeSpec, t: &FiniteModule) -> Result<RealizedCube> {
    let mut axes = cube.inner_axes().to_vec();
    axes.push(Axis::Layer);
    let inner = axes.len() - 1;
    let vertices = colex_indices(axes.len())
        .into_par_iter()
        .map(|x| {
            let v = bc_vertex(cube, &x[..inner], x[inner])?;
            Ok((x, realize_vertex(v, t)?))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(RealizedCube { cube: cube.clone(), axes, vertices })
}

impl RealizedCube {
    /// The edge leaving `from` along the axis at position `k`.
    pub fn edge(&self, from: &[bool], k: usize) -> Result<RealizedMap> {
        if from[k] {
            return Err(Error::DimensionMismatch("edges leave the 0 side of an axis".into()));
        }
        let mut to = from.to_vec();
        to[k] = true;
        realize_edge(&self.vertices[from], &self.vertices[&to])
    }
}

/// Iterated kernels of a realized cube.
#[derive(Clone, Debug)]
pub struct OracleFiber {
    /// Kernel dimensions per level, in the same layout as the engine's rank tables.
    pub tables: Vec<LevelTable>,
    /// Whether every collapsed edge restricted to the current kernels was a surjection onto the next kernel.
    pub split_surjective: bool,
    /// A basis of the total fiber inside the all-zero vertex, one vector per row.
    pub kernel: Matrix,
}

fn dims_table(level: usize, state: &BTreeMap<Vec<bool>, Matrix>) -> LevelTable {
    let entries = colex_indices(level)
        .into_iter()
        .map(|x| TableEntry { index_bits: BinaryString::new(x.clone()).to_string(), rank: state[&x].rows() as u64 })
        .collect();
    LevelTable { level, entries }
}

/// Collapses the axes of a realized cube in `order`, taking exact kernels.
pub fn oracle_total_fiber(rc: &RealizedCube, order: &[Axis]) -> Result<OracleFiber> {
    let mut axes = rc.axes.clone();
    let mut positions: Vec<usize> = (0..axes.len()).collect();
    let mut state: BTreeMap<Vec<bool>, Matrix> = rc.vertices.iter().map(|(x, v)| (x.clone(), Matrix::identity(v.dim()))).collect();
    let mut tables = vec![dims_table(axes.len(), &state)];
    let mut split_surjective = true;
    for &axis in order {
        let k = axes.iter().position(|&a| a == axis).ok_or_else(|| Error::AxisMissing(axis.to_string()))?;
        let full_k = positions[k];
        let results = state
            .par_iter()
            .filter(|(x, _)| !x[k])
            .map(|(x, top)| {
                let mut y = x.clone();
                y[k] = true;
                let bottom = &state[&y];
                let mut full = vec![false; rc.axes.len()];
                for (bit, &p) in x.iter().zip(&positions) {
                    full[p] = *bit;
                }
                let edge = rc.edge(&full, full_k)?;
                let image = top.mul(&edge.matrix)?;
                let onto = image.rank() == bottom.rows() && Matrix::vstack(&[&image, bottom])?.rank() == bottom.rows();
                let kernel = image.left_kernel().mul(top)?;
                let mut rest = x.clone();
                rest.remove(k);
                Ok((rest, kernel, onto))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut next = BTreeMap::new();
        for (rest, kernel, onto) in results {
            split_surjective &= onto;
            next.insert(rest, kernel);
        }
        state = next;
        axes.remove(k);
        positions.remove(k);
        tables.push(dims_table(axes.len(), &state));
    }
    let kernel = if axes.is_empty() { state.remove(&Vec::new()).expect("single vertex") } else { Matrix::zeros(0, 0) };
    Ok(OracleFiber { tables, split_surjective, kernel })
}

/// The oracle run for a pair on the nil-Coxeter module of its source, in the default collapse order.
pub fn oracle_fiber_for_pair(source: &Composition, target: &Composition) -> Result<OracleFiber> {
    oracle_fiber_on(source, target, &nilcoxeter_module(source))
}

/// The oracle run for a pair on a module `t` over the source blocks, in the default collapse order.
pub fn oracle_fiber_on(source: &Composition, target: &Composition, t: &FiniteModule) -> Result<OracleFiber> {
    let cube = build_bifactorization(source, target)?;
    let rc = realize_cube(&cube, t)?;
    oracle_total_fiber(&rc, &collapse_order(&cube))
}

/// Whether the oracle kernel dimensions equal the engine ranks times `dim T`, level by level.
pub fn oracle_matches_engine(report: &FiberReport) -> Result<bool> {
    oracle_matches_engine_on(report, &nilcoxeter_module(&report.source))
}

/// [`oracle_matches_engine`] with an explicit coefficient module over the source blocks.
pub fn oracle_matches_engine_on(report: &FiberReport, t: &FiniteModule) -> Result<bool> {
    let oracle = oracle_fiber_on(&report.source, &report.target, t)?;
    let dim_t = t.dim() as u64;
    let scaled: Vec<Vec<u64>> = report.level_tables.iter().map(|t| t.ranks().iter().map(|r| r * dim_t).collect()).collect();
    let realized: Vec<Vec<u64>> = oracle.tables.iter().map(LevelTable::ranks).collect();
    Ok(oracle.split_surjective && scaled == realized)
}

fn nested_factors(v: &BCVertex, factors: &[Perm]) -> (Perm, Perm) {
    let n = v.word.rows[0].n_total();
    let mut it = factors.iter();
    let inner_step = v.word.steps[1] == Step::Ind || v.word.steps[2] == Step::Ind;
    let f = if inner_step { it.next().cloned() } else { None };
    let e = if v.word.steps[3] == Step::Ind { it.next().cloned() } else { None };
    (f.unwrap_or_else(|| Perm::identity(n)), e.unwrap_or_else(|| Perm::identity(n)))
}

fn flip_action(report: &FiberReport, twisted: bool) -> Result<bool> {
    let Verdict::FlipEquivalence { residual, .. } = &report.verdict else {
        return Err(Error::VerdictMismatch(format!("expected FlipEquivalence, got {}", report.verdict.name())));
    };
    let (source, target) = (&report.source, &report.target);
    if !twisted && source != target {
        return Err(Error::VerdictMismatch("the untwisted comparison needs equal blocks".into()));
    }
    let cube = build_bifactorization(source, target)?;
    let t = nilcoxeter_module(source);
    let rc = realize_cube(&cube, &t)?;
    let fiber = oracle_total_fiber(&rc, &collapse_order(&cube))?;
    let zero = vec![false; rc.axes.len()];
    let v = &rc.vertices[&zero];
    let diagrams = vertex_diagrams(&v.vertex.word)?;
    let factors = diagrams.factors(residual).ok_or_else(|| Error::NotInSet(format!("residual {residual} is not a vertex diagram")))?;
    let (f, e) = nested_factors(&v.vertex, factors);
    let outer_eval = v.module.evaluation_matrix(&AlgebraElement::crossing(v.outer().sigma.clone(), e)?)?;
    let inner_eval = v.outer().inner.evaluation_matrix(&AlgebraElement::crossing(v.inner().sigma.clone(), f)?)?;
    let ev = outer_eval.mul(&inner_eval)?;
    let k = &fiber.kernel;
    let k_ev = k.mul(&ev)?;
    if k.rows() != t.dim() || k_ev.rank() != t.dim() {
        return Ok(false);
    }
    let flip = flip_iso(target)?;
    for g in generators(target) {
        let image = if twisted { flip.apply(&g)? } else { g.with_blocks(source.clone())? };
        let lhs = k.mul(&v.module.act(&g)?)?.mul(&ev)?;
        let rhs = k_ev.mul(&t.act(&image)?)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    debug_assert_eq!(*residual, full_block_crossing(source)?);
    Ok(true)
}

/// Checks that the total fiber, evaluated at the residual diagram, intertwines the action with its flip.
pub fn flip_action_check(report: &FiberReport) -> Result<bool> {
    flip_action(report, true)
}

/// The same comparison without the flip; a negative control for equal blocks.
pub fn flip_action_check_untwisted(report: &FiberReport) -> Result<bool> {
    flip_action(report, false)
}

/// A commutative square of linear maps `A → B`, `A → C`, `B → D`, `C → D`.
#[derive(Clone, Debug)]
pub struct Square {
    /// `A → B`.
    pub top: Matrix,
    /// `A → C`.
    pub left: Matrix,
    /// `B → D`.
    pub right: Matrix,
    /// `C → D`.
    pub bottom: Matrix,
}

impl Square {
    /// Replaces the top map.
    pub fn with_top(mut self, top: Matrix) -> Square {
        self.top = top;
        self
    }

    /// Whether the square commutes and `0 → A → B ⊕ C → D → 0` is exact.
    pub fn is_bicartesian(&self) -> bool {
        let (Ok(tr), Ok(lb)) = (self.top.mul(&self.right), self.left.mul(&self.bottom)) else { return false };
        if tr != lb {
            return false;
        }
        let (a, b, c, d) = (self.top.rows(), self.top.cols(), self.left.cols(), self.right.cols());
        let minus = self.bottom.scale(&-BigRational::one());
        let (Ok(into), Ok(out)) = (Matrix::hstack(&[&self.top, &self.left]), Matrix::vstack(&[&self.right, &minus])) else {
            return false;
        };
        into.rank() == a && out.rank() == d && a + d == b + c
    }
}

/// The Beck–Chevalley square of `((1,2),(1,2))` on a module over `NH_{1,2}`.
pub fn three_strand_square(t: &FiniteModule) -> Result<Square> {
    let pair: Composition = Composition::new(vec![1, 2])?;
    let cube = build_bifactorization(&pair, &pair)?;
    let rc = realize_cube(&cube, t)?;
    let at = |x: [bool; 2], k| rc.edge(&x, k).map(|m| m.matrix);
    Ok(Square { top: at([false, false], 0)?, left: at([false, false], 1)?, right: at([true, false], 1)?, bottom: at([false, true], 0)? })
}

/// The top map `(A, B, C) ↦ (A, A·IX, B, C)` written out in the realized coordinates, optionally without the `A·IX` term.
pub fn explicit_top_map(t: &FiniteModule, with_correction: bool) -> Result<Matrix> {
    let d = t.dim();
    let mut m = Matrix::zeros(3 * d, 4 * d);
    let id = Matrix::identity(d);
    m.set_block(0, 0, &id);
    if with_correction {
        let ix = AlgebraElement::s(t.blocks().clone(), 1)?;
        m.set_block(0, 2 * d, &t.act(&ix)?);
    }
    m.set_block(d, d, &id);
    m.set_block(2 * d, 3 * d, &id);
    Ok(m)
}

/// Whether the `((1,2),(1,2))` Beck–Chevalley square on `t` is bicartesian.
pub fn check_bicartesian(t: &FiniteModule) -> Result<bool> {
    Ok(three_strand_square(t)?.is_bicartesian())
}

/// Matrices `F` with `R_a(g) F = F R_b(g)` for all `g`, one flattened solution per row.
pub fn intertwiners(a: &FiniteModule, b: &FiniteModule, gens: &[AlgebraElement]) -> Result<Matrix> {
    let (p, q) = (a.dim(), b.dim());
    let mut system = SparseEliminator::new(p * q);
    for g in gens {
        let (ra, rb) = (a.act(g)?, b.act(g)?);
        for i in 0..p {
            for j in 0..q {
                let mut row = SparseRow::new();
                for k in 0..p {
                    let x = ra.get(i, k);
                    if !x.is_zero() {
                        *row.entry(k * q + j).or_insert_with(BigRational::zero) += x;
                    }
                }
                for k in 0..q {
                    let x = rb.get(k, j);
                    if !x.is_zero() {
                        *row.entry(i * q + k).or_insert_with(BigRational::zero) -= x;
                    }
                }
                system.add_equation(row);
            }
        }
    }
    Ok(system.solution_basis())
}

fn unflatten(row: &[BigRational], p: usize, q: usize) -> Result<Matrix> {
    Matrix::from_rows((0..p).map(|i| row[i * q..(i + 1) * q].to_vec()).collect(), q)
}

/// Checks that `f ↦ (m ↦ (α ↦ f(m α)))` is a bijection `Hom_τ(Res M, N) → Hom_σ(M, Ind N)`.
pub fn check_adjunction(sigma: &Composition, tau: &Composition, m: &FiniteModule, n: &FiniteModule) -> Result<bool> {
    if !refines(sigma, tau)? {
        return Err(Error::NotRefinement { coarser: sigma.to_string(), finer: tau.to_string() });
    }
    if m.blocks() != sigma || n.blocks() != tau {
        return Err(Error::DimensionMismatch("modules act through the wrong algebras".into()));
    }
    let res_hom = intertwiners(&m.restrict(tau)?, n, &generators(tau))?;
    let ind = n.induce(sigma)?;
    let ind_hom = intertwiners(m, &ind, &generators(sigma))?;
    if res_hom.rows() != ind_hom.rows() {
        return Ok(false);
    }
    let shuffles = &ind.induction().expect("induced").shuffles;
    let alphas = shuffles.iter().map(|a| m.act(&AlgebraElement::crossing(sigma.clone(), a.clone())?)).collect::<Result<Vec<_>>>()?;
    let gens = generators(sigma);
    let actions = gens.iter().map(|g| Ok((m.act(g)?, ind.act(g)?))).collect::<Result<Vec<_>>>()?;
    let mut images = Vec::with_capacity(res_hom.rows());
    for r in 0..res_hom.rows() {
        let f = unflatten(res_hom.row(r), m.dim(), n.dim())?;
        let blocks = alphas.iter().map(|ra| ra.mul(&f)).collect::<Result<Vec<_>>>()?;
        let fhat = Matrix::hstack(&blocks.iter().collect::<Vec<_>>())?;
        for (rm, rind) in &actions {
            if rm.mul(&fhat)? != fhat.mul(rind)? {
                return Ok(false);
            }
        }
        images.push((0..fhat.rows()).flat_map(|i| fhat.row(i).to_vec()).collect::<Vec<_>>());
    }
    let stacked = Matrix::from_rows(images, m.dim() * ind.dim())?;
    Ok(stacked.rank() == res_hom.rows())
}

/// Checks that inducing along `d0 ≥ d1` commutes with restricting along `c0 ≥ c1`.
pub fn check_far_commutativity(c0: &Composition, c1: &Composition, d0: &Composition, d1: &Composition) -> Result<bool> {
    if !refines(c0, c1)? {
        return Err(Error::NotRefinement { coarser: c0.to_string(), finer: c1.to_string() });
    }
    if !refines(d0, d1)? {
        return Err(Error::NotRefinement { coarser: d0.to_string(), finer: d1.to_string() });
    }
    let (c0d0, c0d1, c1d0, c1d1) = (c0.concat(d0), c0.concat(d1), c1.concat(d0), c1.concat(d1));
    if enumerate_shuffles(&c0d0, &c0d1)?.perms() != enumerate_shuffles(&c1d0, &c1d1)?.perms() {
        return Ok(false);
    }
    let t = nilcoxeter_module(&c0d1);
    let lhs = t.induce(&c0d0)?.restrict(&c1d0)?;
    let rhs = t.restrict(&c1d1)?.induce(&c1d0)?;
    Ok(lhs.same_action(&rhs))
}

/// Checks that restricting to the refinements of block `i` (1-based) reproduces that block's cube.
pub fn check_recursiveness(total: usize, composition: &Composition, i: usize) -> Result<bool> {
    if composition.n_total() != total || composition.is_empty() {
        return Err(Error::InvalidComposition(format!("{composition} is not a composition of {total}")));
    }
    if i == 0 || i > composition.len() {
        return Err(Error::InvalidComposition(format!("block {i} of {composition} does not exist")));
    }
    let parts = composition.parts();
    let offset: usize = parts[..i - 1].iter().sum();
    let width = parts[i - 1];
    let base = composition.psi();
    let embed = |bits: &[bool]| {
        let mut full = base.bits().to_vec();
        full[offset..offset + bits.len()].copy_from_slice(bits);
        psi_inv(&BinaryString::new(full))
    };
    let local = |bits: &[bool]| psi_inv(&BinaryString::new(bits.to_vec()));
    let around = |inner: &Composition| {
        let mut v = parts[..i - 1].to_vec();
        v.extend_from_slice(inner.parts());
        v.extend_from_slice(&parts[i..]);
        Composition::new(v)
    };
    for bits in colex_indices(width - 1) {
        let vertex = embed(&bits);
        if vertex != around(&local(&bits))? {
            return Ok(false);
        }
        for k in (0..bits.len()).filter(|&k| !bits[k]) {
            let mut finer = bits.clone();
            finer[k] = true;
            let global = enumerate_shuffles(&vertex, &embed(&finer))?;
            let block = enumerate_shuffles(&local(&bits), &local(&finer))?;
            let lifted: Vec<Perm> = block.perms().iter().map(|w| w.embed(offset, total)).collect();
            if global.perms() != lifted.as_slice() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::total_fiber;

    fn comp(s: &str) -> Composition {
        s.parse().unwrap()
    }

    #[test]
    fn three_strand_square_is_bicartesian() {
        let t = nilcoxeter_module(&comp("1,2"));
        let sq = three_strand_square(&t).unwrap();
        assert_eq!((sq.top.rows(), sq.top.cols(), sq.left.cols(), sq.right.cols()), (6, 8, 2, 4));
        assert!(sq.is_bicartesian());
        assert_eq!(sq.top, explicit_top_map(&t, true).unwrap());
        assert!(!sq.clone().with_top(explicit_top_map(&t, false).unwrap()).is_bicartesian());
        assert!(check_bicartesian(&FiniteModule::zero(&comp("1,2"))).unwrap());
    }

    #[test]
    fn three_strand_flip_kernel() {
        let r = total_fiber(&comp("1,2"), &comp("2,1")).unwrap();
        assert!(flip_action_check(&r).unwrap());
        assert!(oracle_matches_engine(&r).unwrap());
    }

    #[test]
    fn untwisted_control_fails_on_equal_blocks() {
        let r = total_fiber(&comp("2,2"), &comp("2,2")).unwrap();
        assert!(flip_action_check(&r).unwrap());
        assert!(!flip_action_check_untwisted(&r).unwrap());
    }

    #[test]
    fn adjunction_examples() {
        for (s, t) in [("2", "1,1"), ("3", "1,2"), ("2,1", "2,1")] {
            let (s, t) = (comp(s), comp(t));
            assert!(check_adjunction(&s, &t, &nilcoxeter_module(&s), &nilcoxeter_module(&t)).unwrap());
        }
    }

    #[test]
    fn far_commutativity_examples() {
        assert!(check_far_commutativity(&comp("2"), &comp("1,1"), &comp("2"), &comp("1,1")).unwrap());
        assert!(check_far_commutativity(&comp("2"), &comp("2"), &comp("3"), &comp("1,2")).unwrap());
        assert!(check_far_commutativity(&comp("1,1"), &comp("2"), &comp("2"), &comp("2")).is_err());
    }

    #[test]
    fn recursiveness_examples() {
        assert!(check_recursiveness(5, &comp("2,3"), 2).unwrap());
        assert!(check_recursiveness(4, &comp("1,2,1"), 2).unwrap());
        assert!(check_recursiveness(3, &comp("3"), 1).unwrap());
        assert!(check_recursiveness(4, &comp("1,2"), 1).is_err());
    }
}
