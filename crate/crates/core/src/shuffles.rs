//! Shuffle enumeration, the Anycross and Mincross sets of the iteration
//! levels, and the δ-decomposition of pairs of shuffles.

use serde::Serialize;

use crate::compositions::{psi_inv, refines, BinaryString, Composition};
use crate::error::{Error, Result};
use crate::perm::Perm;

/// The `(σ, τ)`-shuffles in lexicographic one-line order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShuffleSet {
    sigma: Composition,
    tau: Composition,
    perms: Vec<Perm>,
}

impl ShuffleSet {
    /// The coarser composition.
    pub fn sigma(&self) -> &Composition {
        &self.sigma
    }

    /// The finer composition.
    pub fn tau(&self) -> &Composition {
        &self.tau
    }

    /// Elements in lexicographic order.
    pub fn perms(&self) -> &[Perm] {
        &self.perms
    }

    /// Number of shuffles.
    pub fn len(&self) -> usize {
        self.perms.len()
    }

    /// Whether the set is empty.
    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    /// Membership test.
    pub fn contains(&self, w: &Perm) -> bool {
        self.perms.binary_search(w).is_ok()
    }

    /// Keeps only the elements satisfying a predicate.
    pub fn filtered(&self, keep: impl Fn(&Perm) -> bool) -> ShuffleSet {
        ShuffleSet { sigma: self.sigma.clone(), tau: self.tau.clone(), perms: self.perms.iter().filter(|w| keep(w)).cloned().collect() }
    }
}

/// Groups the parts of `tau` by the part of `sigma` they subdivide.
fn grouping(sigma: &Composition, tau: &Composition) -> Result<Vec<Vec<usize>>> {
    if !refines(sigma, tau)? {
        return Err(Error::NotRefinement { coarser: sigma.to_string(), finer: tau.to_string() });
    }
    let mut groups = Vec::with_capacity(sigma.len());
    let mut parts = tau.parts().iter();
    for &s in sigma.parts() {
        let mut group = Vec::new();
        let mut acc = 0;
        while acc < s {
            let &p = parts.next().expect("refinement covers every part");
            group.push(p);
            acc += p;
        }
        groups.push(group);
    }
    Ok(groups)
}

fn assign_subsets(available: &[usize], sizes: &[usize], prefix: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
    let Some((&size, rest)) = sizes.split_first() else {
        out.push(prefix.clone());
        return;
    };
    let mut chosen = Vec::with_capacity(size);
    fn combos(
        available: &[usize],
        start: usize,
        size: usize,
        chosen: &mut Vec<usize>,
        rest: &[usize],
        prefix: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if chosen.len() == size {
            let remaining: Vec<usize> = available.iter().copied().filter(|x| !chosen.contains(x)).collect();
            prefix.push(chosen.clone());
            assign_subsets(&remaining, rest, prefix, out);
            prefix.pop();
            return;
        }
        for k in start..available.len() {
            chosen.push(available[k]);
            combos(available, k + 1, size, chosen, rest, prefix, out);
            chosen.pop();
        }
    }
    combos(available, 0, size, &mut chosen, rest, prefix, out);
}

/// Enumerates `S_{σ,τ}`: permutations sending each `τ`-part into its `σ`-part, increasing on each `τ`-part.
pub fn enumerate_shuffles(sigma: &Composition, tau: &Composition) -> Result<ShuffleSet> {
    let groups = grouping(sigma, tau)?;
    let n = sigma.n_total();
    let mut partial: Vec<Vec<usize>> = vec![vec![0; n]];
    let mut src = 0;
    for (range, sizes) in sigma.block_ranges().into_iter().zip(&groups) {
        let available: Vec<usize> = range.collect();
        let mut assignments = Vec::new();
        assign_subsets(&available, sizes, &mut Vec::new(), &mut assignments);
        let mut next = Vec::with_capacity(partial.len() * assignments.len());
        for images in &partial {
            for assignment in &assignments {
                let mut v = images.clone();
                let mut pos = src;
                for subset in assignment {
                    for &t in subset {
                        v[pos] = t;
                        pos += 1;
                    }
                }
                next.push(v);
            }
        }
        partial = next;
        src += sizes.iter().sum::<usize>();
    }
    let mut perms: Vec<Perm> = partial.into_iter().map(|v| Perm::from_images(v).expect("shuffle images are a bijection")).collect();
    perms.sort();
    Ok(ShuffleSet { sigma: sigma.clone(), tau: tau.clone(), perms })
}

/// The number of `(σ,τ)`-shuffles, a product of multinomial coefficients.
pub fn shuffle_count(sigma: &Composition, tau: &Composition) -> Result<u128> {
    let groups = grouping(sigma, tau)?;
    let fact = |k: usize| (1..=k as u128).product::<u128>();
    Ok(groups.iter().map(|g| fact(g.iter().sum()) / g.iter().map(|&p| fact(p)).product::<u128>()).product())
}

/// All permutations preserving every block of `τ`, in lexicographic order.
pub fn block_permutations(tau: &Composition) -> Vec<Perm> {
    let ones = Composition::ones(tau.n_total());
    enumerate_shuffles(tau, &ones).expect("(1,..,1) refines every composition").perms
}

/// Which of the two compositions at a level is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    /// The composition `τ`, inner bit 0.
    Tau,
    /// The composition `τ'`, inner bit 1.
    TauPrime,
}

/// The data of one iteration level for the case `((c, c+m), (c, c+m))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelParams {
    /// Case parameter `c`.
    pub c: usize,
    /// Case parameter `m`.
    pub m: usize,
    /// The level `i`, between 0 and `c`.
    pub level: usize,
    /// The outer bits `β_1 .. β_{c-1-i}`.
    pub bits: Vec<bool>,
    /// The bit `β_c` deciding whether the tail `m` is a separate block.
    pub beta_c: bool,
    /// `τ`, a composition of `c`.
    pub tau: Composition,
    /// `τ'`, defined for `1 ≤ i < c`.
    pub tau_prime: Option<Composition>,
    /// `τ̃`.
    pub tau_tilde: Composition,
    /// `τ̃'`.
    pub tau_tilde_prime: Composition,
    /// `σ̃`, merging the two inner blocks of `τ̃`.
    pub sigma_tilde: Composition,
    /// `σ̃'`, merging the two interior `i`-blocks of `τ̃'`.
    pub sigma_tilde_prime: Composition,
    inner: usize,
    inner_prime: Option<usize>,
}

fn with_tail(mut right: Vec<usize>, m: usize, beta_c: bool) -> Vec<usize> {
    if beta_c {
        right.push(m);
    } else {
        *right.last_mut().expect("right half is nonempty") += m;
    }
    right
}

fn merge_at(parts: &[usize], k: usize) -> Vec<usize> {
    let mut out = parts[..k - 1].to_vec();
    out.push(parts[k - 1] + parts[k]);
    out.extend_from_slice(&parts[k + 1..]);
    out
}

fn comp(parts: Vec<usize>) -> Composition {
    Composition::new(parts).expect("level compositions have positive parts")
}

impl LevelParams {
    /// Derives the intermediate compositions of level `level`.
    pub fn new(c: usize, m: usize, level: usize, bits: Vec<bool>, beta_c: bool) -> Result<Self> {
        if c == 0 || m == 0 {
            return Err(Error::InvalidLevel(format!("c = {c} and m = {m} must be positive")));
        }
        if level > c {
            return Err(Error::LevelOutOfRange { level, max: c });
        }
        let expected = if level == c { 0 } else { c - 1 - level };
        if bits.len() != expected {
            return Err(Error::IndexLength { got: bits.len(), expected });
        }
        let i = level;
        let base: Vec<usize> = if level < c { psi_inv(&BinaryString::new(bits.clone())).parts().to_vec() } else { Vec::new() };
        let mut left = base.clone();
        match left.last_mut() {
            Some(last) => *last += i,
            None => left.push(i),
        }
        let mirror = |v: &[usize]| v.iter().rev().copied().collect::<Vec<_>>();
        let mut tt = left.clone();
        tt.extend(with_tail(mirror(&left), m, beta_c));
        let inner = left.len();
        let st = merge_at(&tt, inner);
        let (tau_prime, ttp, stp, inner_prime) = if i >= 1 && i < c {
            let mut lp = base.clone();
            lp.push(i);
            let mut ttp = lp.clone();
            ttp.extend(with_tail(mirror(&lp), m, beta_c));
            let stp = merge_at(&ttp, lp.len());
            (Some(comp(lp.clone())), ttp, stp, Some(lp.len()))
        } else {
            (None, tt.clone(), tt.clone(), None)
        };
        Ok(LevelParams {
            c,
            m,
            level,
            bits,
            beta_c,
            tau: comp(left),
            tau_prime: if i == 0 { Some(comp(base)) } else { tau_prime },
            tau_tilde: comp(tt),
            tau_tilde_prime: comp(ttp),
            sigma_tilde: comp(st),
            sigma_tilde_prime: comp(stp),
            inner,
            inner_prime,
        })
    }

    /// The pair `(c, c+m)` shared by all levels.
    pub fn outer(&self) -> Composition {
        comp(vec![self.c, self.c + self.m])
    }

    fn tilde(&self, v: Variant) -> &Composition {
        match v {
            Variant::Tau => &self.tau_tilde,
            Variant::TauPrime => &self.tau_tilde_prime,
        }
    }

    fn check_variant(&self, v: Variant) -> Result<()> {
        if v == Variant::TauPrime && self.level == self.c {
            return Err(Error::InvalidLevel("τ' is not defined at the terminal level".into()));
        }
        Ok(())
    }
}

/// Number of strands of the left inner block of `tilde` landing in the right part of the merged block.
fn crossing_count(t: &Perm, tilde: &Composition, inner: usize) -> usize {
    let ranges = tilde.block_ranges();
    let left = &ranges[inner - 1];
    let cut = left.start + left.len();
    left.clone().filter(|&x| t.apply(x) >= cut).count()
}

/// `Anycross^i = S_{(c, c+m), τ̃}` (or with `τ̃'` for the primed variant).
pub fn anycross(p: &LevelParams, v: Variant) -> Result<ShuffleSet> {
    p.check_variant(v)?;
    enumerate_shuffles(&p.outer(), p.tilde(v))
}

/// `Mincross^i`: the shuffles in `S_{σ̃,τ̃}` crossing at least `i` innermost strands; for `τ'` the singleton total crossing of the interior `i`-blocks.
pub fn mincross(p: &LevelParams, v: Variant) -> Result<ShuffleSet> {
    p.check_variant(v)?;
    match v {
        Variant::Tau => {
            let all = enumerate_shuffles(&p.sigma_tilde, &p.tau_tilde)?;
            Ok(all.filtered(|t| crossing_count(t, &p.tau_tilde, p.inner) >= p.level))
        }
        Variant::TauPrime => {
            let all = enumerate_shuffles(&p.sigma_tilde_prime, &p.tau_tilde_prime)?;
            Ok(match p.inner_prime {
                Some(k) => all.filtered(|t| crossing_count(t, &p.tau_tilde_prime, k) >= p.level),
                None => all,
            })
        }
    }
}

/// Whether the `j` innermost strands of the left inner block of `τ̃` land in the right half (and symmetrically).
pub fn crosses_at_least(t: &Perm, p: &LevelParams, j: usize) -> bool {
    crossing_count(t, &p.tau_tilde, p.inner) >= j
}

/// A pair `(E, F)` together with its product `E ∘ F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaPair {
    /// The Anycross factor.
    pub e: Perm,
    /// The Mincross factor.
    pub f: Perm,
    /// The composite `E ∘ F`.
    pub product: Perm,
}

/// The δ-decomposition of `(E, F) ∈ Anycross_{τ'} × Mincross_{τ'}` into a pair at `τ`.
pub fn delta_decompose(e: &Perm, f: &Perm, p: &LevelParams) -> Result<DeltaPair> {
    if p.level == 0 || p.level >= p.c {
        return Err(Error::InvalidLevel(format!("δ is defined for 1 ≤ i < c, got i = {}", p.level)));
    }
    if !anycross(p, Variant::TauPrime)?.contains(e) {
        return Err(Error::NotInSet(format!("{e} is not in Anycross'")));
    }
    if !mincross(p, Variant::TauPrime)?.contains(f) {
        return Err(Error::NotInSet(format!("{f} is not in Mincross'")));
    }
    let mut images = vec![0; e.degree()];
    for r in p.tau_tilde.block_ranges() {
        let mut img: Vec<usize> = r.clone().map(|x| e.apply(x)).collect();
        img.sort_unstable();
        for (x, y) in r.zip(img) {
            images[x] = y;
        }
    }
    let e1 = Perm::from_images(images)?;
    let e2 = e1.inverse().compose(e);
    let t = e2.compose(f);
    if t.length() != e2.length() + f.length() {
        return Err(Error::NotInSet(format!("E2 ∘ F = {t} has a bigon")));
    }
    if !anycross(p, Variant::Tau)?.contains(&e1) || !mincross(p, Variant::Tau)?.contains(&t) {
        return Err(Error::NotInSet(format!("δ({e}, {f}) = ({e1}, {t}) leaves the level sets")));
    }
    Ok(DeltaPair { e: e1, f: t, product: e.compose(f) })
}
