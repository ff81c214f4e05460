//! Finite-dimensional right modules over `NH_τ`, given by generator matrices.
//!
//! A module stores the right action of every generator `X_j`, `s_i` (inside a
//! block), and ħ as a matrix acting on row vectors, so `v.(ab) = v R(a) R(b)`.
//! Induced modules keep their induction data, which allows evaluating a
//! vector `φ ∈ Hom_{NH_τ}(NH_σ, N)` at an arbitrary element of `NH_σ`.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::element::{module_decompose, nil_product, AlgebraElement, DottedDiagram};
use super::hpoly::HPoly;
use crate::compositions::{refines, Composition};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::perm::Perm;
use crate::shuffles::{block_permutations, enumerate_shuffles};

/// The data of an induced module `Ind^σ_τ N = Map(S_{σ,τ}, N)`.
#[derive(Clone, Debug)]
pub struct Induction {
    /// The coarser composition.
    pub sigma: Composition,
    /// The finer composition.
    pub tau: Composition,
    /// The shuffles indexing the coordinate blocks.
    pub shuffles: Vec<Perm>,
    /// The coefficient module over `NH_τ`.
    pub inner: FiniteModule,
}

/// A finite-dimensional right module over `NH_blocks`.
#[derive(Clone, Debug)]
pub struct FiniteModule {
    blocks: Composition,
    dim: usize,
    x: Vec<Matrix>,
    s: BTreeMap<usize, Matrix>,
    hbar: Matrix,
    induction: Option<Arc<Induction>>,
}

/// The generators `X_j`, `s_i` (inside blocks), and ħ of `NH_τ`.
pub fn generators(tau: &Composition) -> Vec<AlgebraElement> {
    let n = tau.n_total();
    let mut out: Vec<AlgebraElement> = (0..n).map(|j| AlgebraElement::x(tau.clone(), j).expect("index in range")).collect();
    out.extend(crossing_indices(tau).into_iter().map(|i| AlgebraElement::s(tau.clone(), i).expect("crossing inside a block")));
    out.push(AlgebraElement::hbar(tau.clone()));
    out
}

/// The 0-based indices `i` with `s_i ∈ NH_τ`.
pub fn crossing_indices(tau: &Composition) -> Vec<usize> {
    tau.block_ranges().into_iter().flat_map(|r| r.start..r.end.saturating_sub(1)).collect()
}

/// The regular nil-Coxeter module of `NH_τ`: basis `S_τ`, dots and ħ acting by zero.
pub fn nilcoxeter_module(tau: &Composition) -> FiniteModule {
    let basis = block_permutations(tau);
    let index: BTreeMap<&Perm, usize> = basis.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let n = tau.n_total();
    let dim = basis.len();
    let mut s = BTreeMap::new();
    for i in crossing_indices(tau) {
        let si = Perm::simple(n, i);
        let mut m = Matrix::zeros(dim, dim);
        for (k, w) in basis.iter().enumerate() {
            if let Some(ws) = nil_product(w, &si) {
                m.set(k, index[&ws], num_traits::One::one());
            }
        }
        s.insert(i, m);
    }
    FiniteModule { blocks: tau.clone(), dim, x: vec![Matrix::zeros(dim, dim); n], s, hbar: Matrix::zeros(dim, dim), induction: None }
}

fn dot_vectors(n: usize, below: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                let used: u32 = v.iter().sum();
                (0..below - used).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

/// The regular module of `NH_τ` modulo all basis elements whose dot degree plus ħ-degree reaches `degree`.
pub fn truncated_polynomial_module(tau: &Composition, degree: u32) -> Result<FiniteModule> {
    if degree == 0 {
        return Ok(FiniteModule::zero(tau));
    }
    let n = tau.n_total();
    let mut basis: Vec<(DottedDiagram, u32)> = Vec::new();
    for w in block_permutations(tau) {
        for dots in dot_vectors(n, degree) {
            let used: u32 = dots.iter().sum();
            for k in 0..degree - used {
                basis.push((DottedDiagram::new(dots.clone(), w.clone())?, k));
            }
        }
    }
    let index: BTreeMap<(&DottedDiagram, u32), usize> = basis.iter().enumerate().map(|(i, (d, k))| ((d, *k), i)).collect();
    let dim = basis.len();
    let action = |g: &AlgebraElement| -> Result<Matrix> {
        let mut m = Matrix::zeros(dim, dim);
        for (row, (d, k)) in basis.iter().enumerate() {
            let b = AlgebraElement::from_terms(tau.clone(), [(d.clone(), HPoly::monomial(num_traits::One::one(), *k))])?;
            for (e, c) in b.mul(g)?.terms() {
                for (h, q) in c.terms() {
                    if let Some(&col) = index.get(&(e, h)) {
                        m.add_at(row, col, q);
                    }
                }
            }
        }
        Ok(m)
    };
    let x = (0..n).map(|j| action(&AlgebraElement::x(tau.clone(), j)?)).collect::<Result<Vec<_>>>()?;
    let s = crossing_indices(tau)
        .into_iter()
        .map(|i| Ok((i, action(&AlgebraElement::s(tau.clone(), i)?)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let hbar = action(&AlgebraElement::hbar(tau.clone()))?;
    FiniteModule::from_generators(tau, x, s, hbar)
}

impl FiniteModule {
    /// The zero module over `NH_τ`.
    pub fn zero(tau: &Composition) -> Self {
        let n = tau.n_total();
        let s = crossing_indices(tau).into_iter().map(|i| (i, Matrix::zeros(0, 0))).collect();
        FiniteModule { blocks: tau.clone(), dim: 0, x: vec![Matrix::zeros(0, 0); n], s, hbar: Matrix::zeros(0, 0), induction: None }
    }

    /// Builds a module from explicit generator matrices.
    pub fn from_generators(tau: &Composition, x: Vec<Matrix>, s: BTreeMap<usize, Matrix>, hbar: Matrix) -> Result<Self> {
        let dim = hbar.rows();
        let expected: Vec<usize> = crossing_indices(tau);
        if x.len() != tau.n_total() || s.keys().copied().collect::<Vec<_>>() != expected {
            return Err(Error::DimensionMismatch("generator list does not match the block structure".into()));
        }
        if x.iter().chain(s.values()).chain(std::iter::once(&hbar)).any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::DimensionMismatch("generator matrices must be square of equal size".into()));
        }
        Ok(FiniteModule { blocks: tau.clone(), dim, x, s, hbar, induction: None })
    }

    /// Block structure of the acting algebra.
    pub fn blocks(&self) -> &Composition {
        &self.blocks
    }

    /// Dimension over the rationals.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Induction data when the module was produced by [`FiniteModule::induce`].
    pub fn induction(&self) -> Option<&Induction> {
        self.induction.as_deref()
    }

    /// Matrix of `X_j`.
    pub fn x_matrix(&self, j: usize) -> &Matrix {
        &self.x[j]
    }

    /// Matrix of `s_i`, if `s_i` lies in the acting algebra.
    pub fn s_matrix(&self, i: usize) -> Option<&Matrix> {
        self.s.get(&i)
    }

    /// Matrix of ħ.
    pub fn hbar_matrix(&self) -> &Matrix {
        &self.hbar
    }

    /// The right action of an element of `NH_blocks`.
    pub fn act(&self, x: &AlgebraElement) -> Result<Matrix> {
        if x.strand_count() != self.blocks.n_total() {
            return Err(Error::StrandMismatch(x.strand_count(), self.blocks.n_total()));
        }
        let x = x.with_blocks(self.blocks.clone())?;
        let mut total = Matrix::zeros(self.dim, self.dim);
        for (d, c) in x.terms() {
            let mut m = Matrix::identity(self.dim);
            for (j, &k) in d.dots.iter().enumerate() {
                for _ in 0..k {
                    m = m.mul(&self.x[j])?;
                }
            }
            for i in d.perm.reduced_word() {
                m = m.mul(&self.s[&i])?;
            }
            let mut h_pow = Matrix::identity(self.dim);
            let mut e_done = 0;
            for (e, q) in c.terms() {
                while e_done < e {
                    h_pow = h_pow.mul(&self.hbar)?;
                    e_done += 1;
                }
                total = total.add(&h_pow.mul(&m)?.scale(q))?;
            }
        }
        Ok(total)
    }

    /// Restriction to `NH_τ'` for a refinement `τ'` of the acting blocks.
    pub fn restrict(&self, finer: &Composition) -> Result<FiniteModule> {
        if !refines(&self.blocks, finer)? {
            return Err(Error::NotRefinement { coarser: self.blocks.to_string(), finer: finer.to_string() });
        }
        let keep = crossing_indices(finer);
        Ok(FiniteModule {
            blocks: finer.clone(),
            dim: self.dim,
            x: self.x.clone(),
            s: self.s.iter().filter(|(i, _)| keep.contains(i)).map(|(i, m)| (*i, m.clone())).collect(),
            hbar: self.hbar.clone(),
            induction: self.induction.clone(),
        })
    }

    /// The induced module `Ind^σ_τ(self) = Hom_{NH_τ}(NH_σ, self)` with `(φ.x)(n) = φ(x n)`.
    pub fn induce(&self, sigma: &Composition) -> Result<FiniteModule> {
        let tau = self.blocks.clone();
        let shuffles = enumerate_shuffles(sigma, &tau)?.perms().to_vec();
        let r = shuffles.len();
        let d = self.dim;
        let dim = r * d;
        let action = |g: &AlgebraElement| -> Result<Matrix> {
            let mut m = Matrix::zeros(dim, dim);
            for (a, alpha) in shuffles.iter().enumerate() {
                let prod = g.mul(&AlgebraElement::crossing(sigma.clone(), alpha.clone())?)?;
                let dec = module_decompose(sigma, &tau, &prod)?;
                for (b, (_, y)) in dec.summands.iter().enumerate() {
                    if !y.is_zero() {
                        m.set_block(b * d, a * d, &self.act(y)?);
                    }
                }
            }
            Ok(m)
        };
        let n = sigma.n_total();
        let x = (0..n).map(|j| action(&AlgebraElement::x(sigma.clone(), j)?)).collect::<Result<Vec<_>>>()?;
        let s = crossing_indices(sigma)
            .into_iter()
            .map(|i| Ok((i, action(&AlgebraElement::s(sigma.clone(), i)?)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let hbar = action(&AlgebraElement::hbar(sigma.clone()))?;
        let induction = Induction { sigma: sigma.clone(), tau, shuffles, inner: self.clone() };
        Ok(FiniteModule { blocks: sigma.clone(), dim, x, s, hbar, induction: Some(Arc::new(induction)) })
    }

    /// For an induced module, the matrix of `φ ↦ φ(n)` into the coefficient module.
    pub fn evaluation_matrix(&self, n: &AlgebraElement) -> Result<Matrix> {
        let ind = self.induction().ok_or_else(|| Error::DimensionMismatch("evaluation needs an induced module".into()))?;
        let d = ind.inner.dim;
        let dec = module_decompose(&ind.sigma, &ind.tau, n)?;
        let mut m = Matrix::zeros(self.dim, d);
        for (b, (_, y)) in dec.summands.iter().enumerate() {
            if !y.is_zero() {
                m.set_block(b * d, 0, &ind.inner.act(y)?);
            }
        }
        Ok(m)
    }

    /// Checks the defining relations on the generator matrices.
    pub fn satisfies_relations(&self) -> bool {
        let n = self.blocks.n_total();
        let h = &self.hbar;
        let mut ok = true;
        let commute = |a: &Matrix, b: &Matrix| a.mul(b).ok() == b.mul(a).ok();
        for (i, si) in &self.s {
            ok &= si.mul(si).map(|m| m.is_zero()).unwrap_or(false);
            let (xi, xi1) = (&self.x[*i], &self.x[*i + 1]);
            let lhs1 = xi.mul(si).and_then(|a| a.sub(&si.mul(xi1)?));
            let lhs2 = si.mul(xi).and_then(|a| a.sub(&xi1.mul(si)?));
            ok &= lhs1.ok().as_ref() == Some(h) && lhs2.ok().as_ref() == Some(h);
            for j in 0..n {
                if j != *i && j != *i + 1 {
                    ok &= commute(si, &self.x[j]);
                }
            }
            if let Some(sn) = self.s.get(&(i + 1)) {
                let l = si.mul(sn).and_then(|a| a.mul(si));
                let r = sn.mul(si).and_then(|a| a.mul(sn));
                ok &= l.is_ok() && l.ok() == r.ok();
            }
            for (k, sk) in &self.s {
                if k > &(i + 1) {
                    ok &= commute(si, sk);
                }
            }
            ok &= commute(si, h);
        }
        for a in &self.x {
            ok &= commute(a, h);
            for b in &self.x {
                ok &= commute(a, b);
            }
        }
        ok
    }

    /// Whether all generator matrices coincide with those of `other`.
    pub fn same_action(&self, other: &FiniteModule) -> bool {
        self.blocks == other.blocks && self.dim == other.dim && self.x == other.x && self.s == other.s && self.hbar == other.hbar
    }

    /// Whether ħ acts by zero.
    pub fn hbar_acts_trivially(&self) -> bool {
        self.hbar.is_zero()
    }
}

impl PartialEq for FiniteModule {
    fn eq(&self, other: &Self) -> bool {
        self.same_action(other)
    }
}

/// Dimension of the nil-Coxeter module of `NH_τ`, the product of `τ_i!`.
pub fn nilcoxeter_dim(tau: &Composition) -> usize {
    tau.parts().iter().map(|&p| (1..=p).product::<usize>()).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(s: &str) -> Composition {
        s.parse().unwrap()
    }

    #[test]
    fn truncated_modules_satisfy_the_relations() {
        for (tau, degree, dim) in [("2", 1, 2), ("2", 2, 8), ("1,2", 2, 10), ("3", 2, 30), ("2,1", 3, 30)] {
            let t = truncated_polynomial_module(&comp(tau), degree).unwrap();
            assert_eq!(t.dim(), dim, "{tau} {degree}");
            assert!(t.satisfies_relations(), "{tau} {degree}");
            assert_eq!(t.hbar_acts_trivially(), degree == 1);
        }
        assert!(truncated_polynomial_module(&comp("2,1"), 1).unwrap().same_action(&nilcoxeter_module(&comp("2,1"))));
        assert_eq!(truncated_polynomial_module(&comp("2"), 0).unwrap().dim(), 0);
    }

    #[test]
    fn nilcoxeter_dimensions() {
        assert_eq!(nilcoxeter_module(&comp("1,2")).dim(), 2);
        assert_eq!(nilcoxeter_module(&comp("2,3")).dim(), 12);
        assert_eq!(nilcoxeter_dim(&comp("2,3")), 12);
    }

    #[test]
    fn nilcoxeter_relations_hold() {
        for t in ["3", "2,2", "1,3", "4"] {
            assert!(nilcoxeter_module(&comp(t)).satisfies_relations(), "{t}");
        }
    }

    #[test]
    fn induced_modules_satisfy_relations() {
        let n = nilcoxeter_module(&comp("1,2"));
        let ind = n.induce(&comp("3")).unwrap();
        assert_eq!(ind.dim(), 6);
        assert!(ind.satisfies_relations());
        let n = nilcoxeter_module(&comp("1,1,1"));
        let ind = n.induce(&comp("2,1")).unwrap();
        assert_eq!(ind.dim(), 2);
        assert!(ind.satisfies_relations());
    }

    #[test]
    fn action_is_multiplicative() {
        let m = nilcoxeter_module(&comp("3"));
        let s1 = AlgebraElement::s(comp("3"), 0).unwrap();
        let s2 = AlgebraElement::s(comp("3"), 1).unwrap();
        let prod = s1.mul(&s2).unwrap();
        assert_eq!(m.act(&prod).unwrap(), m.act(&s1).unwrap().mul(&m.act(&s2).unwrap()).unwrap());
    }
}
