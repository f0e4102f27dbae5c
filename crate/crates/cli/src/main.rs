use std::path::{Path, PathBuf};
use std::process;

use clap::{Parser, Subcommand};
use pfext_cli::acceptance;
use pfext_cli::compare::compare;
use pfext_cli::corpus;
use pfext_cli::summary::render;
use pfext_cli::{Command, ExitCode, Failure, Options, Overrides, ProblemFile, ReportFile};

#[derive(Parser)]
#[command(name = "pfext", version, about = "Monodromy and extension classes of inhomogeneous Fuchsian equations")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Output file (directory for `corpus run`); JSON goes to stdout otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    precision_target: Option<f64>,
    #[arg(long, global = true)]
    theta: Option<f64>,
    /// Maximal Taylor order per continuation step.
    #[arg(long, global = true)]
    taylor_order: Option<usize>,
    #[arg(long, global = true)]
    clearance: Option<f64>,
    #[arg(long, global = true)]
    tol_class: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Record per-stage wall-clock timings in reports.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Singular points, exponents and the Fuchsian verdict.
    Analyze { file: PathBuf },
    /// Loop plan, monodromy matrices and consistency checks.
    Monodromy { file: PathBuf },
    /// Both cocycle routes, the class verdict and route agreement.
    Extension { file: PathBuf },
    /// Whether two extension reports carry the same class.
    Compare { a: PathBuf, b: PathBuf },
    #[command(subcommand)]
    Corpus(CorpusCmd),
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// Run every corpus problem, then the acceptance criteria.
    Run {
        /// Run the problem files in this directory instead of the embedded corpus.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Print the embedded corpus problem names.
    List,
}

fn main() {
    let cli = Cli::parse();
    let code = match execute(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {f}");
            f.code
        }
    };
    process::exit(code.code());
}

fn overrides(cli: &Cli) -> Overrides {
    Overrides {
        precision_target: cli.precision_target,
        theta: cli.theta,
        taylor_order: cli.taylor_order,
        clearance: cli.clearance,
        tol_class: cli.tol_class,
        seed: cli.seed,
    }
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::new(ExitCode::Numerical, "IoError", format!("{}: {e}", path.display())))
}

fn emit(cli: &Cli, json: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => write(path, json),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn single(cli: &Cli, file: &Path, command: Command) -> Result<ExitCode, Failure> {
    let problem = ProblemFile::load(file)?.with_overrides(&overrides(cli));
    let report = pfext_cli::run(&problem, command, Options { timings: cli.timings });
    eprintln!("{}", render(&report));
    emit(cli, &report.to_json())?;
    Ok(exit_of(report.exit_code))
}

fn exit_of(code: i32) -> ExitCode {
    [
        ExitCode::Success,
        ExitCode::NotEqual,
        ExitCode::Parse,
        ExitCode::NonFuchsian,
        ExitCode::Numerical,
        ExitCode::Inconclusive,
    ]
    .into_iter()
    .find(|c| c.code() == code)
    .unwrap_or(ExitCode::Numerical)
}

fn load_report(path: &Path) -> Result<ReportFile, Failure> {
    ReportFile::from_json(&std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?)
}

fn execute(cli: &Cli) -> Result<ExitCode, Failure> {
    match &cli.command {
        Cmd::Analyze { file } => single(cli, file, Command::Analyze),
        Cmd::Monodromy { file } => single(cli, file, Command::Monodromy),
        Cmd::Extension { file } => single(cli, file, Command::Extension),
        Cmd::Compare { a, b } => {
            let c = compare(&load_report(a)?, &load_report(b)?, cli.tol_class)?;
            match (&c.reason, &c.verdict) {
                (Some(reason), _) => println!("not comparable: {reason}"),
                (None, Some(v)) if c.equal => println!("equal (difference {v}, residual {:.1e})", c.residual.unwrap_or(0.0)),
                (None, v) => println!(
                    "not equal (difference {}, residual {:.1e})",
                    v.as_deref().unwrap_or("?"),
                    c.residual.unwrap_or(0.0)
                ),
            }
            if let Some(path) = &cli.out {
                write(path, &(serde_json::to_string_pretty(&c).expect("serializes") + "\n"))?;
            }
            Ok(exit_of(c.exit_code))
        }
        Cmd::Corpus(CorpusCmd::List) => {
            for (name, _) in corpus::FILES {
                println!("{name}");
            }
            Ok(ExitCode::Success)
        }
        Cmd::Corpus(CorpusCmd::Run { dir }) => {
            let problems = match dir {
                Some(d) => corpus::load_dir(d)?,
                None => corpus::problems(),
            };
            let outcomes = corpus::run(&problems, &overrides(cli), Options { timings: cli.timings });
            if let Some(out) = &cli.out {
                std::fs::create_dir_all(out).map_err(|e| Failure::io(out, e))?;
                for o in &outcomes {
                    write(&out.join(format!("{}.json", o.problem.name)), &o.report.to_json())?;
                }
            }
            let mut ok = true;
            for o in &outcomes {
                ok &= o.expected;
                let verdict = o.report.extension.as_ref().map_or("-", |e| e.class.verdict.as_str());
                println!(
                    "{} {:<16} {:<10} exit {} class {}",
                    if o.expected { "ok  " } else { "FAIL" },
                    o.problem.name,
                    o.report.command,
                    o.report.exit_code,
                    verdict
                );
            }
            if dir.is_none() {
                for c in acceptance::evaluate(&outcomes, cli.seed.unwrap_or(acceptance::DEFAULT_SEED)) {
                    ok &= c.pass;
                    println!("{}", c.line());
                }
            }
            Ok(if ok { ExitCode::Success } else { ExitCode::Numerical })
        }
    }
}
