//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons only.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nilschober_core::algebra::{flip_iso, nilcoxeter_module, normal_form, normal_form_with, DottedDiagram, GeneratorWord, Strategy, Token};
use nilschober_core::cubes::{colex_indices, three_strand_letter};
use nilschober_core::fiber::{check_level_sets, sweep};
use nilschober_core::oracle::{
    check_adjunction, check_far_commutativity, check_recursiveness, explicit_top_map, flip_action_check, oracle_fiber_for_pair,
    oracle_matches_engine, three_strand_square,
};
use nilschober_core::shuffles::{anycross, delta_decompose, mincross, shuffle_count, LevelParams, Variant};
use nilschober_core::{
    bc_vertex, build_bifactorization, enumerate_shuffles, psi, psi_inv, refines, total_fiber, AlgebraElement, BinaryString, Composition,
    HPoly, Perm, Verdict,
};

type Outcome = Result<(), String>;

type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn err(e: nilschober_core::Error) -> String {
    e.to_string()
}

fn comp(parts: &[usize]) -> Composition {
    Composition::new(parts.to_vec()).expect("positive parts")
}

fn two_part_pairs(total: usize) -> Vec<(Composition, Composition)> {
    let halves: Vec<Composition> = (1..total).map(|a| comp(&[a, total - a])).collect();
    halves.iter().flat_map(|x| halves.iter().map(move |y| (x.clone(), y.clone()))).collect()
}

/// Partial sums of a composition, excluding the total.
fn cuts(sigma: &Composition) -> BTreeSet<usize> {
    let mut acc = 0;
    let mut out = BTreeSet::new();
    for &p in &sigma.parts()[..sigma.len().saturating_sub(1)] {
        acc += p;
        out.insert(acc);
    }
    out
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// The crossing sending the first block of `(a, b)` to the top right and the second to the top left.
fn block_crossing(a: usize, b: usize) -> Perm {
    Perm::from_images((0..a + b).map(|i| if i < a { i + b } else { i - a }).collect()).expect("bijection")
}

fn inversions(images: &[usize]) -> usize {
    (0..images.len()).flat_map(|i| (i + 1..images.len()).map(move |j| (i, j))).filter(|&(i, j)| images[i] > images[j]).count()
}

fn rank_tables() -> Outcome {
    let r = total_fiber(&comp(&[2, 3]), &comp(&[2, 3])).map_err(err)?;
    let got: Vec<Vec<u64>> = r.level_tables.iter().map(|t| t.ranks()).collect();
    let want: Vec<Vec<u64>> = vec![vec![10, 12, 18, 24, 1, 6, 3, 12], vec![9, 6, 15, 12], vec![3, 3], vec![0]];
    ensure(got == want, || format!("tables {got:?}"))?;
    ensure(r.verdict == Verdict::Vanishes, || format!("verdict {}", r.verdict.name()))
}

fn defect_vanishing() -> Outcome {
    let mut count = 0;
    for total in 2..=6 {
        for r in sweep(total).map_err(err)? {
            if r.target == r.source.reversed() {
                continue;
            }
            ensure(r.verdict == Verdict::Vanishes, || format!("{} {} gives {}", r.source, r.target, r.verdict.name()))?;
            count += 1;
        }
    }
    ensure(count == (2..=6).map(|t| (t - 1) * (t - 1) - (t - 1)).sum::<usize>(), || format!("{count} pairs"))
}

fn twist_invertibility() -> Outcome {
    for total in 2..=6 {
        for a in 1..total {
            let b = total - a;
            let r = total_fiber(&comp(&[a, b]), &comp(&[b, a])).map_err(err)?;
            let Verdict::FlipEquivalence { residual, .. } = &r.verdict else {
                return Err(format!("({a},{b}) gives {}", r.verdict.name()));
            };
            ensure(*residual == block_crossing(a, b), || format!("({a},{b}) residual {residual}"))?;
            if total <= 4 {
                ensure(flip_action_check(&r).map_err(err)?, || format!("({a},{b}) flip action"))?;
            }
        }
    }
    Ok(())
}

fn oracle_equivalence() -> Outcome {
    for total in 2..=4 {
        for (x, y) in two_part_pairs(total) {
            let r = total_fiber(&x, &y).map_err(err)?;
            ensure(oracle_matches_engine(&r).map_err(err)?, || format!("{x} {y}"))?;
        }
    }
    Ok(())
}

fn three_strand_examples() -> Outcome {
    let spell = |src: &[usize], tgt: &[usize], beta: &[bool], layer: bool| -> Result<String, String> {
        let cube = build_bifactorization(&comp(src), &comp(tgt)).map_err(err)?;
        let v = bc_vertex(&cube, beta, layer).map_err(err)?;
        v.word.spell(three_strand_letter).ok_or_else(|| format!("unnamed word {}", v.word))
    };
    for (src, tgt, beta, layer, want) in [
        (&[1, 2][..], &[2, 1][..], &[][..], false, "HI*"),
        (&[1, 2], &[2, 1], &[], true, "G*F"),
        (&[1, 2], &[1, 2], &[false], false, "II*"),
        (&[1, 2], &[1, 2], &[false], true, "Id"),
    ] {
        let got = spell(src, tgt, beta, layer)?;
        ensure(got == want, || format!("{src:?} {tgt:?} {beta:?} {layer}: {got}"))?;
    }
    let t = nilcoxeter_module(&comp(&[1, 2]));
    let square = three_strand_square(&t).map_err(err)?;
    ensure(square.is_bicartesian(), || "square is not bicartesian".into())?;
    let top = explicit_top_map(&t, true).map_err(err)?;
    ensure(square.top == top, || "top map differs from (A, A·IX, B, C)".into())?;
    let swap = (comp(&[1, 2]), comp(&[2, 1]));
    let r = total_fiber(&swap.0, &swap.1).map_err(err)?;
    let kernel = oracle_fiber_for_pair(&swap.0, &swap.1).map_err(err)?.kernel;
    ensure(kernel.rows() == t.dim(), || format!("kernel dimension {}", kernel.rows()))?;
    ensure(flip_action_check(&r).map_err(err)?, || "kernel is not the flip module".into())
}

fn random_element(rng: &mut ChaCha8Rng, n: usize) -> AlgebraElement {
    let blocks = Composition::single(n);
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(rng);
        let mut dots = vec![0u32; n];
        for _ in 0..rng.gen_range(0..=3) {
            dots[rng.gen_range(0..n)] += 1;
        }
        let mut coeff = HPoly::zero();
        for e in 0..=2 {
            let q = BigRational::from_integer(BigInt::from(rng.gen_range(-3i64..=3)));
            coeff = &coeff + &HPoly::monomial(q, e);
        }
        let diagram = DottedDiagram::new(dots, Perm::from_images(images).expect("shuffled")).expect("matching strands");
        terms.push((diagram, coeff));
    }
    AlgebraElement::from_terms(blocks, terms).expect("valid terms")
}

fn word(n: usize, tokens: Vec<Token>) -> Result<GeneratorWord, String> {
    GeneratorWord::new(n, tokens).map_err(err)
}

fn algebra_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for k in 0..500 {
        let n = rng.gen_range(1..=4);
        let (a, b, c) = (random_element(&mut rng, n), random_element(&mut rng, n), random_element(&mut rng, n));
        let left = a.mul(&b).and_then(|ab| ab.mul(&c)).map_err(err)?;
        let right = b.mul(&c).and_then(|bc| a.mul(&bc)).map_err(err)?;
        ensure(left == right, || format!("triple {k} on {n} strands"))?;
    }

    let n = 4;
    let nf = |tokens: Vec<Token>| -> Result<AlgebraElement, String> { normal_form(&word(n, tokens)?).map_err(err) };
    let blocks = Composition::single(n);
    let hbar = AlgebraElement::hbar(blocks.clone());
    for i in 0..n - 1 {
        ensure(nf(vec![Token::S(i), Token::S(i)])?.is_zero(), || format!("s{}^2", i + 1))?;
        let x_up = nf(vec![Token::X(i + 1), Token::S(i)])?;
        let x_down = nf(vec![Token::X(i), Token::S(i)])?;
        ensure(nf(vec![Token::S(i), Token::X(i)])? == x_up.add(&hbar).map_err(err)?, || format!("s{0} X{0}", i + 1))?;
        ensure(nf(vec![Token::S(i), Token::X(i + 1)])? == x_down.sub(&hbar).map_err(err)?, || format!("s{} X{}", i + 1, i + 2))?;
        if i + 2 < n {
            let l = nf(vec![Token::S(i), Token::S(i + 1), Token::S(i)])?;
            let r = nf(vec![Token::S(i + 1), Token::S(i), Token::S(i + 1)])?;
            ensure(l == r && !l.is_zero(), || format!("braid at {}", i + 1))?;
        }
    }
    for _ in 0..200 {
        let len = rng.gen_range(0..=6);
        let tokens: Vec<Token> =
            (0..len).map(|_| if rng.gen_bool(0.5) { Token::S(rng.gen_range(0..n - 1)) } else { Token::X(rng.gen_range(0..n)) }).collect();
        let w = word(n, tokens.clone())?;
        let mut product = AlgebraElement::one(blocks.clone());
        for t in &tokens {
            let g = match t {
                Token::S(i) => AlgebraElement::s(blocks.clone(), *i),
                Token::X(j) => AlgebraElement::x(blocks.clone(), *j),
                _ => unreachable!("only generators are drawn"),
            }
            .map_err(err)?;
            product = product.mul(&g).map_err(err)?;
        }
        let top = normal_form_with(&w, Strategy::Leftmost).map_err(err)?;
        let bottom = normal_form_with(&w, Strategy::Rightmost).map_err(err)?;
        ensure(top == product && bottom == product, || format!("rewriting {w}"))?;
    }

    let mut s4: Vec<Vec<usize>> = Vec::new();
    let mut images: Vec<usize> = (0..4).collect();
    permutations(&mut images, 0, &mut s4);
    for u in &s4 {
        for v in &s4 {
            let uv: Vec<usize> = (0..4).map(|i| u[v[i]]).collect();
            let pu = AlgebraElement::crossing(blocks.clone(), Perm::from_images(u.clone()).map_err(err)?).map_err(err)?;
            let pv = AlgebraElement::crossing(blocks.clone(), Perm::from_images(v.clone()).map_err(err)?).map_err(err)?;
            let got = pu.mul(&pv).map_err(err)?;
            let want = if inversions(&uv) == inversions(u) + inversions(v) {
                AlgebraElement::crossing(blocks.clone(), Perm::from_images(uv).map_err(err)?).map_err(err)?
            } else {
                AlgebraElement::zero(blocks.clone())
            };
            ensure(got == want, || format!("nil law for {u:?} {v:?}"))?;
        }
    }

    let nh3 = Composition::single(3);
    let w = AlgebraElement::crossing(nh3.clone(), Perm::from_images(vec![2, 0, 1]).map_err(err)?).map_err(err)?;
    let flip = flip_iso(&comp(&[2, 1])).map_err(err)?;
    for images in [vec![0, 1, 2], vec![1, 0, 2]] {
        let basis = AlgebraElement::crossing(comp(&[2, 1]), Perm::from_images(images).map_err(err)?).map_err(err)?;
        let flipped = flip.apply(&basis).map_err(err)?;
        let lhs = basis.with_blocks(nh3.clone()).and_then(|x| x.mul(&w)).map_err(err)?;
        let rhs = flipped.with_blocks(nh3.clone()).and_then(|x| w.mul(&x)).map_err(err)?;
        ensure(lhs == rhs && !lhs.is_zero(), || format!("N·W for {basis}"))?;
    }
    Ok(())
}

fn permutations(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for j in k..v.len() {
        v.swap(k, j);
        permutations(v, k + 1, out);
        v.swap(k, j);
    }
}

fn multinomial_count(sigma: &Composition, tau: &Composition) -> u128 {
    let mut parts = tau.parts().iter();
    let mut count = 1;
    for &block in sigma.parts() {
        let mut filled = 0;
        let mut denom = 1;
        while filled < block {
            let p = *parts.next().expect("tau refines sigma");
            filled += p;
            denom *= factorial(p);
        }
        count *= factorial(block) / denom;
    }
    count
}

fn is_shuffle(w: &Perm, sigma: &Composition, tau: &Composition) -> bool {
    let sigma_cuts = cuts(sigma);
    let block_of = |x: usize| sigma_cuts.iter().filter(|&&c| c <= x).count();
    let mut start = 0;
    tau.parts().iter().all(|&p| {
        let r = start..start + p;
        start += p;
        r.clone().all(|x| block_of(w.apply(x)) == block_of(x)) && r.clone().skip(1).all(|x| w.apply(x - 1) < w.apply(x))
    })
}

fn strands_crossing(t: &Perm, tilde: &Composition, inner: usize) -> usize {
    let start: usize = tilde.parts()[..inner - 1].iter().sum();
    let end = start + tilde.parts()[inner - 1];
    (start..end).filter(|&x| t.apply(x) >= end).count()
}

fn combinatorics() -> Outcome {
    for n in 0..=6 {
        let all = Composition::all(n + 1);
        ensure(all.len() == 1 << n, || format!("{} compositions of {}", all.len(), n + 1))?;
        let mut seen = BTreeSet::new();
        for sigma in &all {
            let bits = psi(sigma).map_err(err)?;
            let ones: BTreeSet<usize> = bits.bits().iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| k + 1).collect();
            ensure(ones == cuts(sigma) && bits.len() == n, || format!("ψ({sigma})"))?;
            ensure(psi_inv(&bits) == *sigma && seen.insert(bits.bits().to_vec()), || format!("ψ⁻¹ψ({sigma})"))?;
        }
        for mask in 0..1u64 << n {
            let b = BinaryString::from_mask(mask, n);
            ensure(psi(&psi_inv(&b)).map_err(err)? == b, || format!("ψψ⁻¹({mask:b})"))?;
        }
        for coarse in &all {
            for fine in &all {
                let subset = cuts(coarse).is_subset(&cuts(fine));
                let (cb, fb) = (coarse.psi(), fine.psi());
                let dominated = cb.bits().iter().zip(fb.bits()).all(|(&c, &f)| !c || f);
                ensure(refines(coarse, fine).map_err(err)? == subset && subset == dominated, || format!("order on {coarse} {fine}"))?;
            }
        }
    }

    for total in 1..=7 {
        for sigma in Composition::all(total) {
            for tau in Composition::all(total) {
                if !cuts(&sigma).is_subset(&cuts(&tau)) {
                    continue;
                }
                let want = multinomial_count(&sigma, &tau);
                let set = enumerate_shuffles(&sigma, &tau).map_err(err)?;
                ensure(shuffle_count(&sigma, &tau).map_err(err)? == want && set.len() as u128 == want, || format!("|S({sigma},{tau})|"))?;
                let distinct: BTreeSet<&Perm> = set.perms().iter().collect();
                ensure(distinct.len() == set.len(), || format!("repeats in S({sigma},{tau})"))?;
                ensure(set.perms().iter().all(|w| is_shuffle(w, &sigma, &tau)), || format!("non-shuffle in S({sigma},{tau})"))?;
            }
        }
    }

    for c in 1..=3 {
        for m in 1..=2 {
            ensure(check_level_sets(c, m).map_err(err)?, || format!("level sets c={c} m={m}"))?;
            let terminal = LevelParams::new(c, m, c, vec![], false).map_err(err)?;
            let count = anycross(&terminal, Variant::Tau).map_err(err)?.len() * mincross(&terminal, Variant::Tau).map_err(err)?.len();
            ensure(count as u128 == multinomial_count(&comp(&[c + m]), &comp(&[c, m])), || format!("terminal c={c} m={m}"))?;
            for i in 1..c {
                for bits in colex_indices(c - 1 - i) {
                    for beta in [false, true] {
                        delta_stratum(&LevelParams::new(c, m, i, bits.clone(), beta).map_err(err)?)?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn delta_stratum(p: &LevelParams) -> Outcome {
    let label = || format!("c={} m={} i={} bits={:?} beta={}", p.c, p.m, p.level, p.bits, p.beta_c);
    let mut image = BTreeSet::new();
    let mut domain = 0;
    for e in anycross(p, Variant::TauPrime).map_err(err)?.perms() {
        for f in mincross(p, Variant::TauPrime).map_err(err)?.perms() {
            let d = delta_decompose(e, f, p).map_err(|x| format!("{}: {x}", label()))?;
            ensure(d.e.compose(&d.f) == d.product && d.product == e.compose(f), || format!("{}: product", label()))?;
            image.insert((d.e, d.f));
            domain += 1;
        }
    }
    ensure(image.len() == domain, || format!("{}: δ is not injective", label()))?;
    let inner = p.tau.len();
    let mut stratum = BTreeSet::new();
    for e in anycross(p, Variant::Tau).map_err(err)?.perms() {
        for t in enumerate_shuffles(&p.sigma_tilde, &p.tau_tilde).map_err(err)?.perms() {
            if strands_crossing(t, &p.tau_tilde, inner) == p.level {
                stratum.insert((e.clone(), t.clone()));
            }
        }
    }
    ensure(image == stratum, || format!("{}: image is not the exact stratum", label()))
}

fn structural_axioms() -> Outcome {
    for total in 1..=4 {
        for sigma in Composition::all(total) {
            for tau in Composition::all(total) {
                if !cuts(&sigma).is_subset(&cuts(&tau)) {
                    continue;
                }
                let ok = check_adjunction(&sigma, &tau, &nilcoxeter_module(&sigma), &nilcoxeter_module(&tau)).map_err(err)?;
                ensure(ok, || format!("adjunction {sigma} {tau}"))?;
            }
        }
    }
    for p in 1..5 {
        for q in 1..=5 - p {
            for c0 in Composition::all(p) {
                for c1 in Composition::all(p).into_iter().filter(|c1| cuts(&c0).is_subset(&cuts(c1))) {
                    for d0 in Composition::all(q) {
                        for d1 in Composition::all(q).into_iter().filter(|d1| cuts(&d0).is_subset(&cuts(d1))) {
                            let ok = check_far_commutativity(&c0, &c1, &d0, &d1).map_err(err)?;
                            ensure(ok, || format!("far commutativity {c0} {c1} {d0} {d1}"))?;
                        }
                    }
                }
            }
        }
    }
    for total in 1..=5 {
        for sigma in Composition::all(total) {
            for i in 1..=sigma.len() {
                ensure(check_recursiveness(total, &sigma, i).map_err(err)?, || format!("recursiveness {sigma} block {i}"))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("rank tables of ((2,3),(2,3))", rank_tables),
        ("defect vanishing sweep", defect_vanishing),
        ("twist invertibility sweep", twist_invertibility),
        ("oracle equivalence", oracle_equivalence),
        ("three-strand examples", three_strand_examples),
        ("algebra properties", algebra_properties),
        ("combinatorics", combinatorics),
        ("structural axioms", structural_axioms),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS {} {name} ({secs:.2} s)", k + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {} {name} ({secs:.2} s): {why}", k + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
