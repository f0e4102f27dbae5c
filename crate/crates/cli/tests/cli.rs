use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::Command;

use pfext_cli::report::{Place, ReportFile};
use pfext_cli::ProblemFile;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(format!("{name}.toml"))
}

fn pfext(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pfext")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn report(command: &str, file: &Path, extra: &[&str]) -> (i32, ReportFile) {
    let mut args = vec![command, file.to_str().unwrap()];
    args.extend_from_slice(extra);
    let (code, stdout, stderr) = pfext(&args);
    let r = ReportFile::from_json(&stdout).unwrap_or_else(|e| panic!("{e}\n{stderr}"));
    assert_eq!(r.exit_code, code);
    (code, r)
}

fn write_problem(dir: &Path, p: &ProblemFile) -> PathBuf {
    let path = dir.join(format!("{}.toml", p.name));
    std::fs::write(&path, toml::to_string(p).unwrap()).unwrap();
    path
}

fn near(a: [f64; 2], b: [f64; 2], tol: f64) -> bool {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt() < tol
}

#[test]
fn analyze_legendre_exponents() {
    let (code, r) = report("analyze", &corpus("legendre"), &[]);
    assert_eq!(code, 0);
    let a = r.analysis.unwrap();
    assert!(a.fuchsian);
    let expect = [([0.0, 0.0], 0.0), ([1.0, 0.0], 0.0)];
    for (z, e) in expect {
        let p = a.points.iter().find(|p| p.location == Place::Finite(z)).unwrap();
        assert!(p.exponents.iter().all(|x| near(*x, [e, 0.0], 1e-9)), "{:?}", p.exponents);
    }
    let inf = a.points.iter().find(|p| p.location == Place::Named("infinity".into())).unwrap();
    assert!(inf.exponents.iter().all(|x| near(*x, [0.5, 0.0], 1e-9)));
    assert!(r.monodromy.is_none());
}

#[test]
fn airy_is_rejected_downstream() {
    let (code, r) = report("extension", &corpus("airy"), &[]);
    // no inhomogeneity: the extension command refuses before analysis
    assert_eq!(code, 2);
    assert!(r.analysis.is_none());
    let (code, r) = report("monodromy", &corpus("airy"), &[]);
    assert_eq!(code, 3);
    assert!(!r.analysis.unwrap().fuchsian);
    assert_eq!(r.skipped.len(), 1);
    assert!(r.skipped[0].reason.contains("infinity"));
    assert_eq!(r.diagnostics[0].kind, "NonFuchsian");
}

#[test]
fn derivation_short_circuits() {
    let (code, r) = report("monodromy", &corpus("derivation"), &[]);
    assert_eq!(code, 0);
    let m = r.monodromy.unwrap();
    assert!(m.generators.is_empty());
    assert!(m.short_circuit.is_some());
}

#[test]
fn euler_third_monodromy() {
    let (code, r) = report("monodromy", &corpus("euler_third"), &[]);
    assert_eq!(code, 0);
    let m = r.monodromy.unwrap();
    let w = [(2.0 * PI / 3.0).cos(), (2.0 * PI / 3.0).sin()];
    assert!(near(m.generators[0].matrix[0][0], w, 1e-12));
    assert!(m.consistency.pass);
}

#[test]
fn oversized_clearance_is_diagnosed() {
    let (code, r) = report("monodromy", &corpus("legendre"), &["--clearance", "5"]);
    assert_eq!(code, 4);
    assert_eq!(r.diagnostics[0].kind, "PathTooCloseToSingularity");
    assert_eq!(r.problem.numerics.clearance, Some(5.0));
}

#[test]
fn log_extension_both_routes() {
    let (code, r) = report("extension", &corpus("log"), &[]);
    assert_eq!(code, 0);
    let e = r.extension.unwrap();
    assert!(near(e.continuation.vectors[0][0], [0.0, 2.0 * PI], 1e-9));
    assert!(near(e.block.cocycle.vectors[0][0], [0.0, 2.0 * PI], 1e-9));
    assert_eq!(e.class.verdict, "nontrivial");
    assert!(e.class.witness.is_none());
    assert!(e.relation.pass && e.lifting_probe.pass);
}

#[test]
fn exact_extension_is_trivial_with_witness() {
    let (code, r) = report("extension", &corpus("exact"), &[]);
    assert_eq!(code, 0);
    let e = r.extension.unwrap();
    assert_eq!(e.class.verdict, "trivial");
    assert!(e.class.witness.is_some());
}

#[test]
fn legendre_g1_routes_agree() {
    let (code, r) = report("extension", &corpus("legendre_g1"), &[]);
    assert_eq!(code, 0);
    let e = r.extension.unwrap();
    assert!(e.agreement.pass, "{:?}", e.agreement);
    assert!(e.agreement.max_difference <= e.agreement.combined_error);
    assert!(e.block.bottom_row_deviation.iter().all(|d| *d < 1e-7));
    assert_eq!(e.class.twist, Some(1));
}

#[test]
fn compare_self_and_shifted_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let (code, _, _) = pfext(&["extension", corpus("legendre_g1").to_str().unwrap(), "--out", a.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, stdout, _) = pfext(&["compare", a.to_str().unwrap(), a.to_str().unwrap()]);
    assert_eq!(code, 0, "{stdout}");

    let mut shifted = ProblemFile::load(&corpus("legendre_g1")).unwrap();
    shifted.name = "legendre_g1_shifted".into();
    shifted.initial_jet = Some(vec!["1/2 - i".into(), "3".into()]);
    let path = write_problem(dir.path(), &shifted);
    let (code, _, _) = pfext(&["extension", path.to_str().unwrap(), "--out", b.to_str().unwrap()]);
    assert_eq!(code, 0);
    let ra = ReportFile::from_json(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let rb = ReportFile::from_json(&std::fs::read_to_string(&b).unwrap()).unwrap();
    let va = &ra.extension.unwrap().continuation.vectors;
    let vb = &rb.extension.unwrap().continuation.vectors;
    assert!(va.iter().flatten().zip(vb.iter().flatten()).any(|(x, y)| !near(*x, *y, 1e-3)));
    let (code, stdout, _) = pfext(&["compare", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.starts_with("equal"));
}

#[test]
fn compare_distinct_classes() {
    let dir = tempfile::tempdir().unwrap();
    let out = |name: &str| dir.path().join(format!("{name}.json"));
    let mut double = ProblemFile::load(&corpus("log")).unwrap();
    double.name = "log_double".into();
    double.inhomogeneity = Some("2/t".into());
    let double_path = write_problem(dir.path(), &double);
    for (name, path) in [("log", corpus("log")), ("exact", corpus("exact")), ("log_double", double_path)] {
        let (code, _, _) = pfext(&["extension", path.to_str().unwrap(), "--out", out(name).to_str().unwrap()]);
        assert_eq!(code, 0);
    }
    let (code, stdout, _) = pfext(&["compare", out("log").to_str().unwrap(), out("exact").to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stdout.starts_with("not comparable"), "{stdout}");
    let (code, stdout, _) = pfext(&["compare", out("log").to_str().unwrap(), out("log_double").to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stdout.starts_with("not equal"), "{stdout}");
}

#[test]
fn reports_are_deterministic() {
    let (_, a, _) = pfext(&["extension", corpus("hypergeometric").to_str().unwrap()]);
    let (_, b, _) = pfext(&["extension", corpus("hypergeometric").to_str().unwrap()]);
    assert_eq!(a, b);
    assert!(!a.contains("timings_ms"));
    let (_, c, _) = pfext(&["extension", corpus("hypergeometric").to_str().unwrap(), "--timings"]);
    assert!(ReportFile::from_json(&c).unwrap().timings_ms.is_some());
}

#[test]
fn echo_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (_, first) = report("extension", &corpus("hypergeometric"), &["--theta", "0.3", "--seed", "7"]);
    let path = write_problem(dir.path(), &first.problem);
    let (_, second) = report("extension", &path, &[]);
    assert_eq!(first.problem, second.problem);
    let (e1, e2) = (first.extension.unwrap(), second.extension.unwrap());
    assert_eq!(e1.class.verdict, e2.class.verdict);
    assert_eq!(e1.agreement.pass, e2.agreement.pass);
    assert_eq!(e1.lifting_probe.jet, e2.lifting_probe.jet);
}

#[test]
fn seed_changes_probe_only() {
    let (_, a) = report("extension", &corpus("legendre_g1"), &["--seed", "1"]);
    let (_, b) = report("extension", &corpus("legendre_g1"), &["--seed", "2"]);
    let (ea, eb) = (a.extension.unwrap(), b.extension.unwrap());
    assert_ne!(ea.lifting_probe.jet, eb.lifting_probe.jet);
    assert_eq!(ea.continuation, eb.continuation);
    assert!(ea.lifting_probe.pass && eb.lifting_probe.pass);
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = ProblemFile {
        name: "bad".into(),
        operator: "t*D +".into(),
        ..Default::default()
    };
    let (code, r) = report("analyze", &write_problem(dir.path(), &bad), &[]);
    assert_eq!(code, 2);
    assert_eq!(r.diagnostics[0].kind, "ParseError");
    let junk = dir.path().join("junk.toml");
    std::fs::write(&junk, "operator = [").unwrap();
    let (code, stdout, stderr) = pfext(&["analyze", junk.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty() && stderr.starts_with("error"));
}

#[test]
fn corpus_list_and_directory_run() {
    let (code, stdout, _) = pfext(&["corpus", "list"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().count(), pfext_cli::corpus::FILES.len());

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reports");
    for name in ["euler_half", "airy"] {
        std::fs::copy(corpus(name), dir.path().join(format!("{name}.toml"))).unwrap();
    }
    let (code, stdout, _) = pfext(&["corpus", "run", "--dir", dir.path().to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{stdout}");
    assert_eq!(stdout.lines().count(), 2);
    assert!(out.join("airy.json").exists() && out.join("euler_half.json").exists());
}
