//! Argument parsing and dispatch. Every subcommand produces a [`Report`];
//! `--json` prints it verbatim and the default output renders it as text.

use std::ffi::OsString;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rinehart_core::bialgebra;
use rinehart_core::enveloping::DEFAULT_TRUNCATION;
use rinehart_core::polyring::{OrderKind, RingCtx};
use rinehart_core::report::{CheckReport, Status};
use rinehart_core::sample::Sampler;
use rinehart_core::sheafkit::{self, FinitePoset, Open};
use serde::Serialize;
use serde_json::json;

use crate::ast::Expr;
use crate::error::{CliError, Result};
use crate::fixture;
use crate::json;
use crate::parser;
use crate::report::{Item, Report, TOOL, VERSION};
use crate::session::{self, Options, Session};
use crate::suite;

#[derive(Parser, Debug)]
#[command(name = "rinehart", version, about = "Exact computations with Lie-Rinehart algebras and their enveloping algebras")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Largest polynomial degree probed by operator evaluations.
    #[arg(long, global = true, default_value_t = DEFAULT_TRUNCATION)]
    trunc: u32,
    /// Monomial order, overriding the one declared in the session.
    #[arg(long, global = true)]
    order: Option<OrderKind>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Include the elapsed time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Logarithmic derivations of a hypersurface.
    #[command(subcommand)]
    Logder(LogderCmd),
    /// Lie-Rinehart presentations.
    #[command(subcommand)]
    Lr(LrCmd),
    /// PBW normal forms in the enveloping algebra.
    #[command(subcommand)]
    Pbw(PbwCmd),
    /// Coproduct, primitives and jets.
    #[command(subcommand)]
    Hopf(HopfCmd),
    /// Presheaves on finite posets.
    #[command(subcommand)]
    Sheaf(SheafCmd),
    /// Run the commands listed in a session file.
    Run(SessionArg),
    /// Run the built-in verification suite.
    PaperSuite,
}

#[derive(Args, Debug)]
struct SessionArg {
    #[arg(long)]
    session: PathBuf,
}

#[derive(Args, Debug)]
struct ElementArgs {
    #[arg(long)]
    session: PathBuf,
    /// Element expression, e.g. "D*x".
    #[arg(long)]
    el: String,
}

#[derive(Subcommand, Debug)]
enum LogderCmd {
    /// Basis of the logarithmic derivations with coefficients of bounded degree.
    Solve {
        /// Ring such as "Q[x,y]/(x*y)".
        #[arg(long)]
        ring: String,
        #[arg(long)]
        deg: u32,
    },
    /// Solve and compare with the generators of a session.
    Check {
        #[arg(long)]
        session: PathBuf,
        #[arg(long)]
        deg: u32,
        /// Divisor to use instead of the modulus of the session ring.
        #[arg(long)]
        divisor: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum LrCmd {
    /// Check the Lie-Rinehart axioms and the declared syzygies.
    Verify(SessionArg),
}

#[derive(Subcommand, Debug)]
enum PbwCmd {
    Nf(ElementArgs),
    /// Product of the given elements, left to right.
    Mult {
        #[arg(long)]
        session: PathBuf,
        #[arg(long, required = true, num_args = 1)]
        el: Vec<String>,
    },
    Symbol {
        #[command(flatten)]
        element: ElementArgs,
        #[arg(long)]
        n: usize,
    },
    /// Symmetrize a symmetric tensor written as a commutative polynomial in the generators.
    Symmetrize(ElementArgs),
}

#[derive(Subcommand, Debug)]
enum HopfCmd {
    Coproduct(ElementArgs),
    Primitive(ElementArgs),
    Level {
        #[command(flatten)]
        element: ElementArgs,
        #[arg(long)]
        max: Option<usize>,
    },
    SolvePrimitives {
        #[arg(long)]
        session: PathBuf,
        /// Coefficient degree bound.
        #[arg(long)]
        deg: u32,
        /// Word length bound.
        #[arg(long)]
        n: usize,
    },
    /// Products of dual-basis jets of the given order.
    Jets {
        #[arg(long)]
        session: PathBuf,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
}

#[derive(Args, Debug)]
struct LemmaArgs {
    /// Fixture file; without one, randomized fixtures are generated.
    #[arg(long)]
    fixture: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    samples: usize,
}

#[derive(Subcommand, Debug)]
enum SheafCmd {
    /// Sheaf condition, stalks and sheafification of a fixture.
    Check {
        #[arg(long)]
        fixture: PathBuf,
    },
    /// Stalkwise isomorphisms sheafify to isomorphisms.
    Lemma1(LemmaArgs),
    /// Local isomorphisms are stalkwise isomorphisms.
    Lemma2(LemmaArgs),
}

/// What a run printed and how it exited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn expr(src: &str, flag: &str) -> Result<Expr> {
    parser::parse_expr(src).map_err(|error| CliError::ParseArg { flag: flag.to_string(), error })
}

fn load(path: &Path, opts: &Options) -> Result<Session> {
    Session::from_file(path, opts.order)
}

fn element_command(name: &str, a: &ElementArgs, extra: Vec<Expr>, opts: &Options) -> Result<Vec<Item>> {
    let s = load(&a.session, opts)?;
    let mut args = vec![expr(&a.el, "--el")?];
    args.extend(extra);
    s.execute(name, &args, opts)
}

fn count(n: usize) -> Expr {
    Expr::Num(rinehart_core::polyring::integer(n as i64))
}

fn dispatch(cmd: &Command, opts: &Options) -> Result<Vec<Item>> {
    match cmd {
        Command::Logder(LogderCmd::Solve { ring, deg }) => {
            let decl = parser::parse_ring_spec(ring).map_err(|error| CliError::ParseArg { flag: "--ring".into(), error })?;
            let ring = session::build_ring(&decl, opts.order)?;
            Ok(vec![session::logder_solve(&ring, *deg)?])
        }
        Command::Logder(LogderCmd::Check { session, deg, divisor }) => {
            let s = load(session, opts)?;
            let ring = match divisor {
                Some(d) => {
                    let f = s.eval_poly(&expr(d, "--divisor")?)?;
                    RingCtx::new(s.ring().vars().to_vec(), Some(f), s.ring().order().clone())?
                }
                None => s.ring().clone(),
            };
            Ok(vec![session::logder_check(&ring, *deg, s.presentation())?])
        }
        Command::Lr(LrCmd::Verify(a)) => load(&a.session, opts)?.execute("verify", &[], opts),
        Command::Pbw(PbwCmd::Nf(a)) => element_command("nf", a, vec![], opts),
        Command::Pbw(PbwCmd::Mult { session, el }) => {
            let s = load(session, opts)?;
            let args = el.iter().map(|e| expr(e, "--el")).collect::<Result<Vec<_>>>()?;
            if args.len() == 1 {
                return s.execute("nf", &args, opts);
            }
            s.execute("mult", &args, opts)
        }
        Command::Pbw(PbwCmd::Symbol { element, n }) => element_command("symbol", element, vec![count(*n)], opts),
        Command::Pbw(PbwCmd::Symmetrize(a)) => element_command("symmetrize", a, vec![], opts),
        Command::Hopf(HopfCmd::Coproduct(a)) => element_command("coproduct", a, vec![], opts),
        Command::Hopf(HopfCmd::Primitive(a)) => element_command("primitive", a, vec![], opts),
        Command::Hopf(HopfCmd::Level { element, max }) => {
            element_command("level", element, max.iter().map(|&m| count(m)).collect(), opts)
        }
        Command::Hopf(HopfCmd::SolvePrimitives { session, deg, n }) => {
            let s = load(session, opts)?;
            let alg = s.algebra()?;
            let basis = bialgebra::solve_primitives(alg, *deg, *n)?;
            let shown: Vec<String> = basis.iter().map(|u| alg.display(u)).collect();
            let text = format!("dimension {}: {}", basis.len(), shown.join(", "));
            let data = json!({ "dimension": basis.len(), "basis": basis.iter().map(|u| json::element(alg, u)).collect::<Vec<_>>() });
            Ok(vec![Item::value("solve-primitives", text, data)])
        }
        Command::Hopf(HopfCmd::Jets { session, n }) => load(session, opts)?.jets(*n),
        Command::Sheaf(SheafCmd::Check { fixture }) => sheaf_check(&fixture::load(fixture)?),
        Command::Sheaf(SheafCmd::Lemma1(a)) => lemma(1, a, opts),
        Command::Sheaf(SheafCmd::Lemma2(a)) => lemma(2, a, opts),
        Command::Run(a) => load(&a.session, opts)?.run_all(opts),
        Command::PaperSuite => Ok(suite::run(opts.seed).iter().map(suite::Criterion::item).collect()),
    }
}

fn describe_dims(poset: &FinitePoset, dim: impl Fn(Open) -> usize, opens: &[Open]) -> String {
    opens.iter().map(|&u| format!("{}: {}", poset.describe(u), dim(u))).collect::<Vec<_>>().join(", ")
}

fn sheaf_check(fx: &fixture::Fixture) -> Result<Vec<Item>> {
    let f = &fx.presheaf;
    let poset = &fx.poset;
    let opens = poset.opens();
    let mut items = Vec::new();
    let is_sheaf = sheafkit::is_sheaf(f);
    let mut item = Item::value("sheaf", if is_sheaf { "yes" } else { "no" }, json!({ "sheaf": is_sheaf }));
    if let Some(u) = sheafkit::sheaf_witness(f) {
        item = item.with_witness(format!("sheaf condition fails on {}", poset.describe(u)));
    }
    items.push(item);
    let stalks: Vec<(String, usize)> = (0..poset.len()).map(|x| (poset.names()[x].clone(), f.dim(poset.up_set(x)))).collect();
    let text = stalks.iter().map(|(n, d)| format!("{n}: {d}")).collect::<Vec<_>>().join(", ");
    let data = json!(stalks.iter().map(|(n, d)| json!({ "point": n, "dim": d })).collect::<Vec<_>>());
    items.push(Item::value("stalks", text, data));
    let sh = sheafkit::sheafify(f);
    let dims = |u: Open| sh.sheaf.dim(u);
    let data = json!(opens.iter().map(|&u| json!({ "open": poset.open_names(u), "dim": dims(u) })).collect::<Vec<_>>());
    items.push(Item::value("sheafification", describe_dims(poset, dims, opens), data));
    let checks = [
        ("sheafification is a sheaf", sheafkit::is_sheaf(&sh.sheaf)),
        ("idempotence", sheafkit::is_isomorphism(&sheafkit::sheafify(&sh.sheaf).unit)),
        ("stalk preservation", (0..poset.len()).all(|x| sh.unit.stalk_map(x).is_invertible())),
    ];
    for (name, ok) in checks {
        items.push(Item::check(name, Status::from_bool(ok), "", serde_json::Value::Null));
    }
    Ok(items)
}

fn run_lemma(which: u8, psi: &sheafkit::PresheafMorphism, cover: &[Open]) -> CheckReport {
    if which == 1 {
        sheafkit::check_lemma_stalkwise_to_sheaf(psi)
    } else {
        sheafkit::check_lemma_local_to_stalkwise(psi, cover)
    }
}

fn lemma(which: u8, a: &LemmaArgs, opts: &Options) -> Result<Vec<Item>> {
    let prefix = format!("lemma{which}");
    if let Some(path) = &a.fixture {
        let fx = fixture::load(path)?;
        let psi = fx.morphism.as_ref().ok_or_else(|| CliError::user("the fixture declares no morphism"))?;
        let cover = fx.cover.clone().unwrap_or_else(|| (0..fx.poset.len()).map(|x| fx.poset.up_set(x)).collect());
        return Ok(Item::from_checks(&prefix, &run_lemma(which, psi, &cover)));
    }
    let mut sampler = Sampler::new(opts.seed);
    let mut items = Vec::new();
    for (shape, poset) in sheafkit::fixture_shapes() {
        let cover: Vec<Open> = (0..poset.len()).map(|x| poset.up_set(x)).collect();
        let mut tallies: Vec<(String, Status, usize, Option<String>)> = Vec::new();
        for _ in 0..a.samples {
            let psi = if which == 1 {
                sheafkit::random_lemma1_fixture(&poset, &mut sampler)
            } else {
                sheafkit::random_lemma2_fixture(&poset, &mut sampler)
            };
            for c in run_lemma(which, &psi, &cover).checks {
                let pos = match tallies.iter().position(|t| t.0 == c.name) {
                    Some(p) => p,
                    None => {
                        tallies.push((c.name.clone(), Status::Pass, 0, None));
                        tallies.len() - 1
                    }
                };
                let t = &mut tallies[pos];
                if c.status == Status::Pass {
                    t.2 += 1;
                } else if t.1 == Status::Pass || c.status == Status::Fail {
                    t.1 = c.status;
                    t.3 = t.3.take().or(c.witness);
                }
            }
        }
        for (name, status, passed, witness) in tallies {
            let mut item = Item::check(
                format!("{prefix} {shape}: {name}"),
                status,
                format!("{passed}/{} fixtures", a.samples),
                json!({ "shape": shape, "samples": a.samples, "passed": passed }),
            );
            item.witnesses.extend(witness);
            items.push(item);
        }
    }
    Ok(items)
}

fn error_json(command: &str, e: &CliError) -> String {
    #[derive(Serialize)]
    struct Detail<'a> {
        kind: &'static str,
        message: String,
        line: Option<usize>,
        column: Option<usize>,
        expected: &'a [String],
    }
    #[derive(Serialize)]
    struct ErrorReport<'a> {
        tool: &'static str,
        version: &'static str,
        command: &'a str,
        status: &'static str,
        error: Detail<'a>,
    }
    let report = ErrorReport {
        tool: TOOL,
        version: VERSION,
        command,
        status: "error",
        error: Detail {
            kind: e.kind(),
            message: e.message(),
            line: e.pos().map(|p| p.line),
            column: e.pos().map(|p| p.col),
            expected: e.expected(),
        },
    };
    serde_json::to_string_pretty(&report).expect("serializable")
}

/// Parses `args` (including the program name), runs the command and
/// collects its output.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let command: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let command = command.join(" ");
    let opts = Options { truncation: cli.trunc, order: cli.order, seed: cli.seed };
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(|| dispatch(&cli.command, &opts)))
        .unwrap_or_else(|_| Err(CliError::Internal("internal invariant violated".into())));
    match result {
        Ok(items) => {
            let mut report = Report::new(command, items);
            if cli.timing {
                report.timing_ms = Some(start.elapsed().as_millis());
            }
            let code = if report.status() == Status::Fail { 1 } else { 0 };
            let stdout = if cli.json { report.to_json() + "\n" } else { report.to_text() };
            Outcome { code, stdout, stderr: String::new() }
        }
        Err(e) => {
            if cli.json {
                Outcome { code: e.exit_code(), stdout: error_json(&command, &e) + "\n", stderr: String::new() }
            } else {
                Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") }
            }
        }
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    use std::io::Write;
    let out = execute(args);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    out.code
}
