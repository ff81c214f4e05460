//! `nilschober`: axiom sweeps, algebra evaluation, shuffle queries and diagram rendering.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

use nilschober_core::cubes::three_strand_letter;
use nilschober_core::oracle::{explicit_top_map, flip_action_check, oracle_fiber_for_pair, three_strand_square};
use nilschober_core::render::{render_level, SvgLayout};
use nilschober_core::report::{DEFAULT_MAX_ORACLE, MAX_STRANDS};
use nilschober_core::{
    algebra::nilcoxeter_module, bc_vertex, build_bifactorization, enumerate_shuffles, evaluate, parse_pair, run_checks, total_fiber,
    CheckOptions, Composition, Error, ReportDocument,
};

const THREADS_VAR: &str = "NILSCHOBER_THREADS";

#[derive(Parser, Debug)]
#[command(name = "nilschober", version, about = "Exact checks of the nil-Hecke schober axioms on two-part compositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Runs the five axiom checks for every pair of two-part compositions of n + 1, or for one pair.
    Check {
        /// Strand count minus one.
        #[arg(long)]
        n: usize,
        /// Restricts the sweep to one pair, written "a,b;c,d".
        #[arg(long)]
        pair: Option<String>,
        /// Writes the JSON report to this path.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Largest strand count on which the matrix oracle runs.
        #[arg(long, default_value_t = DEFAULT_MAX_ORACLE)]
        max_oracle: usize,
        /// Records wall-clock timings in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Prints the normal form of an algebra expression.
    Eval {
        /// Block composition of the algebra, e.g. "3" or "2,1".
        #[arg(long)]
        tau: String,
        /// The expression, e.g. "s1*X1".
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Counts or lists the shuffles of a refinement.
    #[command(group(ArgGroup::new("mode").required(true).args(["count", "list"])))]
    Shuffles {
        /// The coarser composition.
        #[arg(long)]
        sigma: String,
        /// The finer composition.
        #[arg(long)]
        tau: String,
        /// Prints the number of shuffles.
        #[arg(long)]
        count: bool,
        /// Prints the shuffles in one-line notation, one per line.
        #[arg(long)]
        list: bool,
    },
    /// Writes one SVG file per vertex of an intermediate cube.
    Render {
        /// The pair, written "a,b;c,d".
        #[arg(long)]
        pair: String,
        /// Number of remaining axes.
        #[arg(long)]
        level: usize,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
    },
    /// Runs a worked example through the matrix oracle.
    Oracle {
        /// The example name.
        #[arg(long, value_parser = ["nh3-square"])]
        example: String,
    },
}

/// Why a command did not succeed.
#[derive(Debug)]
enum Failure {
    /// An axiom check failed.
    Axiom(String),
    /// The input was malformed, out of range, or a file could not be written.
    Usage(String),
}

impl Failure {
    fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Axiom(_) => ExitCode::from(1),
            Failure::Usage(_) => ExitCode::from(2),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SectionFailure { .. } | Error::VerdictMismatch(_) => Failure::Axiom(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn io_failure(path: &std::path::Path, e: std::io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Usage(format!("{THREADS_VAR} must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| Failure::Usage(e.to_string()))
}

fn composition(s: &str) -> Result<Composition, Failure> {
    s.parse::<Composition>().map_err(Failure::from)
}

fn ranks_line(doc: &ReportDocument, k: usize) -> String {
    doc.pairs[k]
        .level_tables
        .iter()
        .map(|t| t.ranks().iter().map(|r| r.to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(" | ")
}

fn check(n: usize, pair: Option<String>, json: Option<PathBuf>, max_oracle: usize, timing: bool) -> Result<(), Failure> {
    if !(2..=MAX_STRANDS).contains(&(n + 1)) {
        return Err(Failure::Usage(format!("--n {n} gives {} strands; supported range is 2..={MAX_STRANDS}", n + 1)));
    }
    let only = pair.as_deref().map(parse_pair).transpose()?;
    let doc = run_checks(n, only.as_ref(), CheckOptions { max_oracle, timing })?;
    for (k, p) in doc.pairs.iter().enumerate() {
        let status = if p.checks.all_passed() { "ok" } else { "FAILED" };
        println!("{:<9} {:<28} {:<16} {}  [{}]", p.pair, p.case.to_string(), p.verdict, status, ranks_line(&doc, k));
    }
    if let Some(path) = json {
        fs::write(&path, doc.to_json()?).map_err(|e| io_failure(&path, e))?;
        println!("report written to {}", path.display());
    }
    let failures: Vec<String> = doc
        .pairs
        .iter()
        .flat_map(|p| {
            let c = &p.checks;
            [
                ("adjunctability", &c.adjunctability),
                ("recursiveness", &c.recursiveness),
                ("far_commutativity", &c.far_commutativity),
                ("twist_invertibility", &c.twist_invertibility),
                ("defect_vanishing", &c.defect_vanishing),
            ]
            .into_iter()
            .filter(|(_, r)| !r.passed)
            .map(move |(name, r)| format!("{} {name}: {}", p.pair, r.detail))
        })
        .collect();
    if failures.is_empty() {
        println!("all axiom checks passed for n + 1 = {}", doc.n_total);
        Ok(())
    } else {
        Err(Failure::Axiom(failures.join("\n")))
    }
}

fn eval(tau: &str, expr: &str) -> Result<(), Failure> {
    println!("{}", evaluate(&composition(tau)?, expr)?);
    Ok(())
}

fn shuffles(sigma: &str, tau: &str, count: bool) -> Result<(), Failure> {
    let set = enumerate_shuffles(&composition(sigma)?, &composition(tau)?)?;
    if count {
        println!("{}", set.len());
    } else {
        for w in set.perms() {
            println!("{w}");
        }
    }
    Ok(())
}

fn render(pair: &str, level: usize, out: PathBuf) -> Result<(), Failure> {
    let (source, target) = parse_pair(pair)?;
    let files = render_level(&source, &target, level, &SvgLayout::default())?;
    fs::create_dir_all(&out).map_err(|e| io_failure(&out, e))?;
    for f in files {
        let path = out.join(&f.file_name);
        fs::write(&path, &f.svg).map_err(|e| io_failure(&path, e))?;
        let index = if f.index_bits.is_empty() { "-".to_string() } else { f.index_bits };
        println!("{} index {index} diagrams {}", path.display(), f.diagrams);
    }
    Ok(())
}

fn nh3_square() -> Result<(), Failure> {
    let mut failed = Vec::new();
    let mut report = |name: &str, ok: bool| {
        println!("{:<44} {}", name, if ok { "ok" } else { "FAILED" });
        if !ok {
            failed.push(name.to_string());
        }
    };
    let (one_two, two_one) = (composition("1,2")?, composition("2,1")?);
    for (target, bits, layer) in
        [(&two_one, &[][..], false), (&two_one, &[], true), (&one_two, &[false], false), (&one_two, &[false], true)]
    {
        let cube = build_bifactorization(&one_two, target)?;
        let v = bc_vertex(&cube, bits, layer)?;
        let word = v.word.spell(three_strand_letter).unwrap_or_else(|| v.word.to_string());
        let index: String = bits.iter().chain([&layer]).map(|&b| if b { '1' } else { '0' }).collect();
        println!("(1,2) -> {target} vertex {index}: {:<10} rank {}", word, v.rank);
    }
    let t = nilcoxeter_module(&one_two);
    let square = three_strand_square(&t)?;
    report("square for ((1,2),(1,2)) is bicartesian", square.is_bicartesian());
    report("top map is (A, B, C) -> (A, A*IX, B, C)", square.top == explicit_top_map(&t, true)?);
    report("uncorrected top map is not bicartesian", !square.clone().with_top(explicit_top_map(&t, false)?).is_bicartesian());
    let fiber = total_fiber(&one_two, &two_one)?;
    let kernel = oracle_fiber_for_pair(&one_two, &two_one)?.kernel;
    report("kernel for ((1,2),(2,1)) has dimension dim T", kernel.rows() == t.dim());
    report("kernel for ((1,2),(2,1)) is the flip module", flip_action_check(&fiber)?);
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Axiom(failed.join("\n")))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Check { n, pair, json, max_oracle, timing } => check(n, pair, json, max_oracle, timing),
        Command::Eval { tau, expr } => eval(&tau, &expr),
        Command::Shuffles { sigma, tau, count, .. } => shuffles(&sigma, &tau, count),
        Command::Render { pair, level, out } => render(&pair, level, out),
        Command::Oracle { .. } => nh3_square(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Axiom(m) | Failure::Usage(m)) = &f;
            eprintln!("error: {m}");
            f.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn engine_errors_map_to_exit_codes() {
        let axiom = Failure::from(Error::SectionFailure { axis: "d1".into(), index: "0".into() });
        assert!(matches!(axiom, Failure::Axiom(_)));
        assert_eq!(axiom.exit_code(), ExitCode::from(1));
        let usage = Failure::from(Error::TotalMismatch(4, 5));
        assert!(matches!(usage, Failure::Usage(_)));
        assert_eq!(usage.exit_code(), ExitCode::from(2));
    }

    #[test]
    fn command_line_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
