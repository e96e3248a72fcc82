//! Argument handling and the subcommands.
//!
//! Exit codes: 0 success (or "found"), 1 a negative verdict ("none",
//! failed lemma precondition, refuted verify row), 2 usage or input errors,
//! 3 node budget exhausted, 4 I/O errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rturan_core::collection::{Collection, RainbowMatching, RainbowWitness};
use rturan_core::constructions::{claimed_value, construct, ConstructionId, FormulaId};
use rturan_core::detect::{find_family_copy, find_rainbow_copy};
use rturan_core::family::PatternFamily;
use rturan_core::lemmas::{
    greedy_extend, greedy_from_degrees, m2_structure, star_cover, strong_color_exact, strong_color_sufficient,
    very_strong_color, LemmaError, M2Structure, StarCover,
};
use rturan_core::pattern::parse_pattern;
use rturan_core::search::{extremal, ExtremalQuery, Mode, SearchError, DEFAULT_BUDGET};

use crate::codec::{self, CodecError};
use crate::parallel::RayonExecutor;
use crate::params::parse_params;
use crate::verify::{run_all, run_suite, Row, Runner, Status, SuiteId, VerifyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Environment variable overriding the default node budget.
pub const BUDGET_ENV: &str = "RTURAN_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "rturan", version, about = "Rainbow Turan problems for graph collections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct SearchOpts {
    /// node budget; defaults to $RTURAN_BUDGET, then a built-in limit
    #[arg(long)]
    budget: Option<u64>,
    /// worker threads for the search
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Look for a rainbow copy of a pattern (or any member of a family)
    Detect {
        #[arg(long)]
        collection: PathBuf,
        /// a pattern such as K3 or a family such as {K3,M2}
        #[arg(long)]
        pattern: String,
    },
    /// Run one of the lemma procedures on a collection
    Lemma {
        #[command(subcommand)]
        which: LemmaCommand,
    },
    /// Emit a construction as .rcol
    Construct {
        #[arg(long)]
        id: String,
        /// key=value list, e.g. n=8,t=3,s=2,p=2
        #[arg(long, default_value = "")]
        params: String,
        /// output file; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a closed-form value
    Formula {
        #[arg(long)]
        id: String,
        #[arg(long, default_value = "")]
        params: String,
    },
    /// Compute an extremal value exactly
    Compute {
        #[arg(long)]
        mode: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        /// forbidden family, e.g. "{K3,M2}"
        #[arg(long)]
        forbid: String,
        /// write the optimal collection here
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        search: SearchOpts,
    },
    /// Run one verification suite
    Verify {
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        search: SearchOpts,
    },
    /// Run every suite and write a TSV report
    Report {
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        search: SearchOpts,
    },
}

#[derive(Subcommand, Debug)]
enum LemmaCommand {
    /// Strong-colour test, exact and by the sufficient conditions
    Strong {
        #[arg(long)]
        collection: PathBuf,
        /// colour, numbered from 1
        #[arg(long)]
        color: usize,
        #[arg(long)]
        s: usize,
    },
    /// Very-strong-colour test
    VeryStrong {
        #[arg(long)]
        collection: PathBuf,
        #[arg(long)]
        color: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: usize,
    },
    /// Structure of a collection without a rainbow M2
    M2 {
        #[arg(long)]
        collection: PathBuf,
    },
    /// Rainbow star at a vertex or the cover that blocks it
    Starcover {
        #[arg(long)]
        collection: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        p: usize,
    },
    /// Greedy rainbow matching of size q
    Greedy {
        #[arg(long)]
        collection: PathBuf,
        #[arg(long)]
        q: usize,
        /// starting matching as u-v:colour entries, e.g. 0-1:1
        #[arg(long)]
        initial: Option<String>,
        /// centres as colour:vertex entries; without them the centres are
        /// chosen by degree
        #[arg(long)]
        centers: Option<String>,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

impl From<CodecError> for Failure {
    fn from(e: CodecError) -> Self {
        let code = if matches!(e, CodecError::Io(_)) { EXIT_IO } else { EXIT_USAGE };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        let code = if matches!(e, SearchError::BudgetExceeded { .. }) { EXIT_BUDGET } else { EXIT_USAGE };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Search { cause, params } => {
                let f = Failure::from(cause);
                Failure {
                    message: format!("{params}: {}", f.message),
                    ..f
                }
            }
            e => Failure::usage(e),
        }
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the command line `args` (program name first) and returns the exit
/// code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Detect { collection, pattern } => detect(&collection, &pattern, out),
        Command::Lemma { which } => lemma(which, out),
        Command::Construct { id, params, out: path } => construct_cmd(&id, &params, path.as_deref(), out),
        Command::Formula { id, params } => formula(&id, &params, out),
        Command::Compute {
            mode,
            n,
            t,
            forbid,
            out: path,
            search,
        } => compute(&mode, n, t, &forbid, path.as_deref(), &search, out, err),
        Command::Verify { suite, search } => verify(&suite, &search, out),
        Command::Report { out: path, search } => report(&path, &search, out),
    }
}

fn budget(opts: &SearchOpts) -> Result<u64, Failure> {
    if let Some(b) = opts.budget {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{BUDGET_ENV} must be a node count, got {text:?}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn executor(opts: &SearchOpts) -> Result<RayonExecutor, Failure> {
    if opts.workers == 0 {
        return Err(Failure::usage("--workers must be at least 1"));
    }
    RayonExecutor::new(opts.workers).map_err(|e| Failure::usage(e.to_string()))
}

fn family(spec: &str) -> Result<PatternFamily, Failure> {
    PatternFamily::parse(spec).map_err(Failure::usage)
}

fn witness_text(w: &RainbowWitness) -> String {
    let vmap: Vec<String> = w.vmap.iter().enumerate().map(|(x, v)| format!("{x}:{v}")).collect();
    let mut text = format!("vmap {}\n", vmap.join(" "));
    for ((x, y), c) in w.pattern.edges().zip(&w.cmap) {
        let (u, v) = (w.vmap[x].min(w.vmap[y]), w.vmap[x].max(w.vmap[y]));
        text.push_str(&format!("edge {u} {v} color {}\n", c + 1));
    }
    text
}

fn matching_text(m: &RainbowMatching) -> String {
    m.edges
        .iter()
        .zip(&m.colors)
        .map(|((u, v), c)| format!("edge {u} {v} color {}\n", c + 1))
        .collect()
}

fn detect(path: &Path, pattern: &str, out: &mut dyn Write) -> Outcome {
    let c = codec::read(path)?;
    let found = if pattern.trim_start().starts_with('{') {
        find_family_copy(&c, &family(pattern)?)
    } else {
        find_rainbow_copy(&c, &parse_pattern(pattern).map_err(Failure::usage)?)
    };
    match found {
        Some(w) => {
            write!(out, "{}", witness_text(&w))?;
            Ok(EXIT_OK)
        }
        None => {
            writeln!(out, "none")?;
            Ok(EXIT_NEGATIVE)
        }
    }
}

/// Converts a one-based colour from the command line.
fn color_arg(c: &Collection, color: usize) -> Result<usize, Failure> {
    if color == 0 || color > c.t() {
        return Err(Failure::usage(format!("colour {color} out of range 1..={}", c.t())));
    }
    Ok(color - 1)
}

fn lemma_failure(e: LemmaError) -> Failure {
    let code = if matches!(e, LemmaError::PreconditionViolated { .. }) { EXIT_NEGATIVE } else { EXIT_USAGE };
    Failure {
        code,
        message: e.to_string(),
    }
}

/// Parses `a:b` pairs separated by commas.
fn pairs(text: &str, what: &str) -> Result<Vec<(String, usize)>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|entry| {
            let (a, b) = entry
                .trim()
                .rsplit_once(':')
                .ok_or_else(|| Failure::usage(format!("bad {what} entry {entry:?}")))?;
            let b = b.parse().map_err(|_| Failure::usage(format!("bad {what} entry {entry:?}")))?;
            Ok((a.to_string(), b))
        })
        .collect()
}

fn number(text: &str, what: &str) -> Result<usize, Failure> {
    text.trim().parse().map_err(|_| Failure::usage(format!("bad {what} {text:?}")))
}

fn lemma(which: LemmaCommand, out: &mut dyn Write) -> Outcome {
    match which {
        LemmaCommand::Strong { collection, color, s } => {
            let c = codec::read(&collection)?;
            let i = color_arg(&c, color)?;
            let exact = strong_color_exact(&c, i, s).map_err(lemma_failure)?;
            let evidence = strong_color_sufficient(&c, i, s).map_err(lemma_failure)?;
            writeln!(out, "exact {exact}\nsufficient {evidence:?}")?;
            Ok(if exact { EXIT_OK } else { EXIT_NEGATIVE })
        }
        LemmaCommand::VeryStrong { collection, color, r, m } => {
            let c = codec::read(&collection)?;
            let i = color_arg(&c, color)?;
            let verdict = very_strong_color(&c, i, r, m).map_err(lemma_failure)?;
            writeln!(out, "very-strong {verdict}")?;
            Ok(if verdict { EXIT_OK } else { EXIT_NEGATIVE })
        }
        LemmaCommand::M2 { collection } => {
            let c = codec::read(&collection)?;
            match m2_structure(&c).map_err(lemma_failure)? {
                M2Structure::CommonVertex(v) => writeln!(out, "common-vertex {v}")?,
                M2Structure::AllButOneSmall(Some(i)) => writeln!(out, "all-but-one-small {}", i + 1)?,
                M2Structure::AllButOneSmall(None) => writeln!(out, "all-but-one-small none")?,
                M2Structure::HasRainbowM2(w) => write!(out, "rainbow-m2\n{}", witness_text(&w))?,
            }
            Ok(EXIT_OK)
        }
        LemmaCommand::Starcover { collection, vertex, p } => {
            let c = codec::read(&collection)?;
            match star_cover(&c, vertex, p).map_err(lemma_failure)? {
                StarCover::Witness(w) => write!(out, "star\n{}", witness_text(&w))?,
                StarCover::Cover { edges, exempt } => {
                    let edges: Vec<String> = edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
                    let exempt: Vec<String> = exempt.iter().map(|i| (i + 1).to_string()).collect();
                    writeln!(out, "cover {}\nexempt {}", edges.join(" "), exempt.join(" "))?;
                }
            }
            Ok(EXIT_OK)
        }
        LemmaCommand::Greedy {
            collection,
            q,
            initial,
            centers,
        } => {
            let c = codec::read(&collection)?;
            let m = match centers {
                None if initial.is_none() => greedy_from_degrees(&c, q).map_err(lemma_failure)?,
                _ => {
                    let mut m0 = RainbowMatching::default();
                    for (edge, color) in pairs(initial.as_deref().unwrap_or(""), "initial")? {
                        let (u, v) = edge
                            .split_once('-')
                            .ok_or_else(|| Failure::usage(format!("bad edge {edge:?}")))?;
                        m0.edges.push((number(u, "vertex")?, number(v, "vertex")?));
                        m0.colors.push(color_arg(&c, color)?);
                    }
                    let mut list = Vec::new();
                    for (color, v) in pairs(centers.as_deref().unwrap_or(""), "centre")? {
                        list.push((color_arg(&c, number(&color, "colour")?)?, v));
                    }
                    greedy_extend(&c, &m0, &list, q).map_err(lemma_failure)?
                }
            };
            write!(out, "{}", matching_text(&m))?;
            Ok(EXIT_OK)
        }
    }
}

fn construct_cmd(id: &str, params: &str, path: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let id: ConstructionId = id.parse().map_err(Failure::usage)?;
    let p = parse_params(params).map_err(|e| match e {
        crate::params::ParamError::Inner(inner) => Failure::from(inner),
        e => Failure::usage(e),
    })?;
    let built = construct(id, &p).map_err(Failure::usage)?;
    match path {
        Some(path) => codec::write(&built.collection, path)?,
        None => write!(out, "{}", codec::encode(&built.collection))?,
    }
    Ok(EXIT_OK)
}

fn formula(id: &str, params: &str, out: &mut dyn Write) -> Outcome {
    let id: FormulaId = id.parse().map_err(Failure::usage)?;
    let p = parse_params(params).map_err(Failure::usage)?;
    let v = claimed_value(id, &p).map_err(Failure::usage)?;
    writeln!(out, "{v}")?;
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn compute(
    mode: &str,
    n: usize,
    t: usize,
    forbid: &str,
    path: Option<&Path>,
    opts: &SearchOpts,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let mode: Mode = mode.parse().map_err(Failure::usage)?;
    let q = ExtremalQuery::new(mode, n, t, family(forbid)?).with_budget(budget(opts)?);
    let r = extremal(&q, &executor(opts)?)?;
    writeln!(out, "{}", r.value)?;
    writeln!(err, "nodes {} exact {}", r.nodes, r.exact)?;
    if let Some(path) = path {
        match &r.witness {
            Some(w) => codec::write(w, path)?,
            None => writeln!(err, "no collection avoids the family; nothing written")?,
        }
    }
    Ok(if r.exact { EXIT_OK } else { EXIT_BUDGET })
}

fn verdict(rows: &[Row]) -> i32 {
    if rows.iter().any(|r| r.status.is_failure()) {
        EXIT_NEGATIVE
    } else if rows.iter().any(|r| r.status == Status::Budget) {
        EXIT_BUDGET
    } else {
        EXIT_OK
    }
}

fn verify(suite: &str, opts: &SearchOpts, out: &mut dyn Write) -> Outcome {
    let id: SuiteId = suite.parse().map_err(Failure::usage)?;
    let ex = executor(opts)?;
    let runner = Runner {
        executor: &ex,
        budget: budget(opts)?,
    };
    let rows = run_suite(id, &runner)?;
    writeln!(out, "params\tclaimed\tcomputed\tstatus")?;
    for r in &rows {
        writeln!(out, "{}\t{}\t{}\t{}", r.params, r.claimed, r.computed, r.status.name())?;
    }
    Ok(verdict(&rows))
}

fn report(path: &Path, opts: &SearchOpts, out: &mut dyn Write) -> Outcome {
    let ex = executor(opts)?;
    let runner = Runner {
        executor: &ex,
        budget: budget(opts)?,
    };
    let rows = run_all(&runner)?;
    let mut text = String::from(Row::TSV_HEADER);
    text.push('\n');
    for r in &rows {
        text.push_str(&r.tsv());
        text.push('\n');
    }
    fs::write(path, text)?;
    let failures = rows.iter().filter(|r| r.status.is_failure()).count();
    writeln!(out, "{} rows, {failures} refuted, written to {}", rows.len(), path.display())?;
    Ok(verdict(&rows))
}
