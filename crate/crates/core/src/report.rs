//! The JSON report of an axiom sweep and the orchestration of its checks.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::nilcoxeter_module;
use crate::compositions::{refines, Composition, PairCase};
use crate::cubes::{bc_vertex, build_bifactorization, colex_indices};
use crate::error::{Error, Result};
use crate::fiber::{total_fiber, FiberReport, LevelTable, Verdict};
use crate::oracle::{check_adjunction, check_far_commutativity, check_recursiveness, flip_action_check, oracle_matches_engine};

/// Version of the report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Largest strand count accepted by a sweep.
pub const MAX_STRANDS: usize = 6;

/// Default largest strand count for the matrix oracle.
pub const DEFAULT_MAX_ORACLE: usize = 4;

/// The outcome of one check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    /// Whether the check passed.
    pub passed: bool,
    /// What was checked, or what failed.
    pub detail: String,
}

impl CheckResult {
    fn pass(detail: impl Into<String>) -> Self {
        CheckResult { passed: true, detail: detail.into() }
    }

    fn fail(detail: impl Into<String>) -> Self {
        CheckResult { passed: false, detail: detail.into() }
    }

    fn from_bool(ok: bool, what: &str) -> Self {
        if ok {
            Self::pass(what)
        } else {
            Self::fail(format!("failed: {what}"))
        }
    }

    fn from_result(r: Result<bool>, what: &str) -> Self {
        match r {
            Ok(ok) => Self::from_bool(ok, what),
            Err(e) => Self::fail(format!("error in {what}: {e}")),
        }
    }
}

/// The five axiom checks of one pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomChecks {
    /// Induction is right adjoint to restriction on the steps of the pair's words.
    pub adjunctability: CheckResult,
    /// Restriction to a block reproduces the smaller cube.
    pub recursiveness: CheckResult,
    /// Induction and restriction along disjoint blocks commute.
    pub far_commutativity: CheckResult,
    /// Pairs `(c, d) = (b, a)` have an invertible twist.
    pub twist_invertibility: CheckResult,
    /// All other pairs have a vanishing total fiber.
    pub defect_vanishing: CheckResult,
}

impl AxiomChecks {
    /// Whether every check passed.
    pub fn all_passed(&self) -> bool {
        [&self.adjunctability, &self.recursiveness, &self.far_commutativity, &self.twist_invertibility, &self.defect_vanishing]
            .iter()
            .all(|c| c.passed)
    }
}

/// The report entry of one pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairReport {
    /// The pair in command-line syntax.
    pub pair: String,
    /// The source composition.
    pub source: Composition,
    /// The target composition.
    pub target: Composition,
    /// The pair classification.
    pub case: PairCase,
    /// Whether the computation ran on the reversed pair.
    pub mirrored: bool,
    /// Axis labels in collapse order.
    pub collapse_order: Vec<String>,
    /// Rank tables from the initial cube down to the total fiber.
    pub level_tables: Vec<LevelTable>,
    /// Verdict name.
    pub verdict: String,
    /// Residual diagrams as one-line arrays.
    pub residual_permutations: Vec<Vec<usize>>,
    /// The axiom checks.
    pub checks: AxiomChecks,
}

/// Optional wall-clock measurements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    /// Total time in milliseconds.
    pub total_ms: f64,
    /// Per-pair time of the fiber computation in milliseconds.
    pub pairs_ms: BTreeMap<String, f64>,
}

/// The document written by an axiom sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    /// Layout version.
    pub schema_version: u32,
    /// Strand count `n + 1`.
    pub n_total: usize,
    /// Per-pair entries in lexicographic pair order.
    pub pairs: Vec<PairReport>,
    /// Timing, present only on request.
    pub timing: Option<Timing>,
}

/// Options of a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    /// Largest strand count for the matrix oracle.
    pub max_oracle: usize,
    /// Whether to record timing.
    pub timing: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { max_oracle: DEFAULT_MAX_ORACLE, timing: false }
    }
}

/// Formats a pair in command-line syntax.
pub fn pair_label(source: &Composition, target: &Composition) -> String {
    let join = |c: &Composition| c.parts().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
    format!("{};{}", join(source), join(target))
}

fn induction_steps(source: &Composition, target: &Composition) -> Result<BTreeSet<(Composition, Composition)>> {
    let cube = build_bifactorization(source, target)?;
    let inner = cube.dimension() - 2;
    let mut steps = BTreeSet::new();
    for x in colex_indices(inner + 1) {
        steps.extend(bc_vertex(&cube, &x[..inner], x[inner])?.word.inductions());
    }
    Ok(steps)
}

fn adjunctability(source: &Composition, target: &Composition, oracle: bool) -> CheckResult {
    if !oracle {
        return CheckResult::pass("not checked above the oracle limit");
    }
    let run = || -> Result<bool> {
        for (coarser, finer) in induction_steps(source, target)? {
            if !check_adjunction(&coarser, &finer, &nilcoxeter_module(&coarser), &nilcoxeter_module(&finer))? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    CheckResult::from_result(run(), "Hom(Res M, N) = Hom(M, Ind N) on every induction step")
}

fn recursiveness(source: &Composition, target: &Composition) -> CheckResult {
    let total = source.n_total();
    let run = || -> Result<bool> {
        for c in [source, target] {
            for i in 1..=c.len() {
                if !check_recursiveness(total, c, i)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    };
    CheckResult::from_result(run(), "restriction to each block of both compositions")
}

fn refinement_pairs(total: usize) -> Vec<(Composition, Composition)> {
    let all = Composition::all(total);
    let mut out = Vec::new();
    for coarse in &all {
        for fine in &all {
            if refines(coarse, fine).unwrap_or(false) {
                out.push((coarse.clone(), fine.clone()));
            }
        }
    }
    out
}

fn far_commutativity(source: &Composition, oracle: bool) -> CheckResult {
    if !oracle {
        return CheckResult::pass("not checked above the oracle limit");
    }
    let (a, b) = (source.parts()[0], source.parts()[1]);
    let run = || -> Result<bool> {
        for (c0, c1) in refinement_pairs(a) {
            for (d0, d1) in refinement_pairs(b) {
                if !check_far_commutativity(&c0, &c1, &d0, &d1)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    };
    CheckResult::from_result(run(), "all refinement pairs of both source blocks")
}

fn twist_invertibility(report: &FiberReport, oracle: bool) -> CheckResult {
    if report.target != report.source.reversed() {
        return CheckResult::pass("not applicable");
    }
    if !matches!(report.verdict, Verdict::FlipEquivalence { .. }) {
        return CheckResult::fail(format!("expected FlipEquivalence, got {}", report.verdict.name()));
    }
    if !oracle {
        return CheckResult::pass("flip residual found; oracle skipped above the limit");
    }
    let run = || -> Result<bool> { Ok(oracle_matches_engine(report)? && flip_action_check(report)?) };
    CheckResult::from_result(run(), "flip residual, oracle kernel dimensions and flip-twisted action")
}

fn defect_vanishing(report: &FiberReport, oracle: bool) -> CheckResult {
    if report.target == report.source.reversed() {
        return CheckResult::pass("not applicable");
    }
    if report.verdict != Verdict::Vanishes {
        return CheckResult::fail(format!("expected Vanishes, got {} with residual {:?}", report.verdict.name(), report.residual));
    }
    if !oracle {
        return CheckResult::pass("total fiber vanishes; oracle skipped above the limit");
    }
    CheckResult::from_result(oracle_matches_engine(report), "total fiber vanishes and oracle kernel dimensions match")
}

fn pair_report(source: &Composition, target: &Composition, opts: CheckOptions) -> Result<(PairReport, f64)> {
    let report = total_fiber(source, target)?;
    let oracle = source.n_total() <= opts.max_oracle;
    let checks = AxiomChecks {
        adjunctability: adjunctability(source, target, oracle),
        recursiveness: recursiveness(source, target),
        far_commutativity: far_commutativity(source, oracle),
        twist_invertibility: twist_invertibility(&report, oracle),
        defect_vanishing: defect_vanishing(&report, oracle),
    };
    let entry = PairReport {
        pair: pair_label(source, target),
        source: source.clone(),
        target: target.clone(),
        case: report.case,
        mirrored: report.mirrored,
        collapse_order: report.collapse_order.iter().map(|a| a.to_string()).collect(),
        level_tables: report.level_tables.clone(),
        verdict: report.verdict.name().to_string(),
        residual_permutations: report.residual.iter().map(|w| w.one_line()).collect(),
        checks,
    };
    Ok((entry, report.elapsed.as_secs_f64() * 1e3))
}

/// Runs the axiom checks for all pairs of `n + 1` strands, or for one pair.
pub fn run_checks(n: usize, only: Option<&(Composition, Composition)>, opts: CheckOptions) -> Result<ReportDocument> {
    let total = n + 1;
    if !(2..=MAX_STRANDS).contains(&total) {
        return Err(Error::LimitExceeded(format!("n + 1 = {total} must lie between 2 and {MAX_STRANDS}")));
    }
    let started = Instant::now();
    let pairs: Vec<(Composition, Composition)> = match only {
        Some((a, b)) => {
            if a.n_total() != total || b.n_total() != total {
                return Err(Error::TotalMismatch(a.n_total().max(b.n_total()), total));
            }
            crate::compositions::classify_pair(a, b)?;
            vec![(a.clone(), b.clone())]
        }
        None => Composition::two_part(total)
            .into_iter()
            .flat_map(|a| Composition::two_part(total).into_iter().map(move |b| (a.clone(), b)))
            .collect(),
    };
    let results = pairs.par_iter().map(|(a, b)| pair_report(a, b, opts)).collect::<Result<Vec<_>>>()?;
    let timing = opts.timing.then(|| Timing {
        total_ms: started.elapsed().as_secs_f64() * 1e3,
        pairs_ms: results.iter().map(|(p, ms)| (p.pair.clone(), *ms)).collect(),
    });
    Ok(ReportDocument { schema_version: SCHEMA_VERSION, n_total: total, pairs: results.into_iter().map(|(p, _)| p).collect(), timing })
}

impl ReportDocument {
    /// Whether every check of every pair passed.
    pub fn all_passed(&self) -> bool {
        self.pairs.iter().all(|p| p.checks.all_passed())
    }

    /// Deterministic JSON with sorted keys.
    pub fn to_json(&self) -> Result<String> {
        let value = serde_json::to_value(self).map_err(|e| Error::Parse { pos: 0, message: e.to_string() })?;
        let mut s = serde_json::to_string_pretty(&value).map_err(|e| Error::Parse { pos: 0, message: e.to_string() })?;
        s.push('\n');
        Ok(s)
    }

    /// Parses and validates a document.
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: ReportDocument = serde_json::from_str(s).map_err(|e| Error::Parse { pos: e.column(), message: e.to_string() })?;
        doc.validate()?;
        Ok(doc)
    }

    /// Checks the structural invariants of the document.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::VerdictMismatch(m));
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!("schema_version {} is not {SCHEMA_VERSION}", self.schema_version));
        }
        for p in &self.pairs {
            if p.source.n_total() != self.n_total || p.target.n_total() != self.n_total {
                return bad(format!("{}: strand count differs from {}", p.pair, self.n_total));
            }
            if p.pair != pair_label(&p.source, &p.target) {
                return bad(format!("{}: label does not match the compositions", p.pair));
            }
            for (k, t) in p.level_tables.iter().enumerate() {
                if k > 0 && t.level + 1 != p.level_tables[k - 1].level {
                    return bad(format!("{}: levels are not consecutive", p.pair));
                }
                if t.entries.len() != 1 << t.level {
                    return bad(format!("{}: level {} has {} entries", p.pair, t.level, t.entries.len()));
                }
            }
            let Some(last) = p.level_tables.last().filter(|t| t.level == 0) else {
                return bad(format!("{}: tables do not end at level 0", p.pair));
            };
            let rank = last.entries[0].rank as usize;
            if rank != p.residual_permutations.len() {
                return bad(format!("{}: final rank {rank} but {} residuals", p.pair, p.residual_permutations.len()));
            }
            let consistent = match p.verdict.as_str() {
                "Vanishes" => rank == 0,
                "FlipEquivalence" => rank == 1,
                "Other" => rank > 0,
                _ => false,
            };
            if !consistent {
                return bad(format!("{}: verdict {} with final rank {rank}", p.pair, p.verdict));
            }
            for w in &p.residual_permutations {
                let mut sorted = w.clone();
                sorted.sort_unstable();
                if sorted != (1..=self.n_total).collect::<Vec<_>>() {
                    return bad(format!("{}: {w:?} is not a permutation", p.pair));
                }
            }
        }
        Ok(())
    }
}
