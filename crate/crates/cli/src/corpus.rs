//! The reference corpus shipped with the binary.

use std::path::Path;

use rayon::prelude::*;

use crate::exit::Failure;
use crate::pipeline::{self, Command, Options};
use crate::problem::{Overrides, ProblemFile};
use crate::report::ReportFile;

pub const FILES: &[(&str, &str)] = &[
    ("log", include_str!("../corpus/log.toml")),
    ("exact", include_str!("../corpus/exact.toml")),
    ("euler_third", include_str!("../corpus/euler_third.toml")),
    ("euler_half", include_str!("../corpus/euler_half.toml")),
    ("euler_inhom", include_str!("../corpus/euler_inhom.toml")),
    ("legendre", include_str!("../corpus/legendre.toml")),
    ("legendre_g1", include_str!("../corpus/legendre_g1.toml")),
    ("hypergeometric", include_str!("../corpus/hypergeometric.toml")),
    ("airy", include_str!("../corpus/airy.toml")),
    ("derivation", include_str!("../corpus/derivation.toml")),
];

pub fn problems() -> Vec<ProblemFile> {
    FILES
        .iter()
        .map(|(name, src)| ProblemFile::from_toml(src).unwrap_or_else(|e| panic!("corpus file {name}: {e}")))
        .collect()
}

pub fn problem(name: &str) -> Option<ProblemFile> {
    problems().into_iter().find(|p| p.name == name)
}

/// Problem files (`*.toml`) in a directory, sorted by file name.
pub fn load_dir(dir: &Path) -> Result<Vec<ProblemFile>, Failure> {
    let entries = std::fs::read_dir(dir).map_err(|e| Failure::io(dir, e))?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    paths.iter().map(|p| ProblemFile::load(p)).collect()
}

/// Extension for problems with an inhomogeneity, monodromy otherwise.
pub fn command_for(p: &ProblemFile) -> Command {
    if p.inhomogeneity.is_some() {
        Command::Extension
    } else {
        Command::Monodromy
    }
}

pub struct Outcome {
    pub problem: ProblemFile,
    pub report: ReportFile,
    /// Whether the report meets the problem's `[expect]` table.
    pub expected: bool,
}

/// Runs every problem concurrently; results keep the input order.
pub fn run(problems: &[ProblemFile], overrides: &Overrides, options: Options) -> Vec<Outcome> {
    problems
        .par_iter()
        .map(|p| {
            let p = p.clone().with_overrides(overrides);
            let report = pipeline::run(&p, command_for(&p), options);
            let expected = p.expect.as_ref().map_or(report.exit_code == 0, |e| e.matches(&report));
            Outcome {
                problem: p,
                report,
                expected,
            }
        })
        .collect()
}
