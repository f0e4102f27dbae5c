//! Human-readable summaries of reports.

use crate::report::{Place, ReportFile, C};

fn z(c: C) -> String {
    format!("{:.6}{:+.6}i", c[0], c[1])
}

fn place(p: &Place) -> String {
    match p {
        Place::Finite(c) => z(*c),
        Place::Named(n) => n.clone(),
    }
}

/// Multi-line summary of a report.
pub fn render(r: &ReportFile) -> String {
    let mut out = vec![format!("{} [{}] exit {}", r.problem.name, r.command, r.exit_code)];
    if let Some(a) = &r.analysis {
        out.push(format!("  order {}, Fuchsian {}", a.order, a.fuchsian));
        for p in &a.points {
            let e: Vec<String> = p.exponents.iter().map(|c| z(*c)).collect();
            out.push(format!("  {} {}: exponents [{}]", place(&p.location), p.kind, e.join(", ")));
        }
    }
    if let Some(m) = &r.monodromy {
        out.push(format!("  base {}, {} generators", z(m.plan.base), m.generators.len()));
        if let Some(s) = &m.short_circuit {
            out.push(format!("  {s}"));
        }
        for (g, t) in m.generators.iter().zip(&m.traces) {
            out.push(format!("  loop at {}: trace {}, error {:.1e}", z(g.point), z(*t), g.error));
        }
        out.push(format!(
            "  relation residual {:.1e}, consistency {}, unipotent {}, irreducible {:?}",
            m.relation_residual, m.consistency.pass, m.admissibility.unipotent_pass, m.admissibility.irreducible
        ));
    }
    if let Some(e) = &r.extension {
        for (k, v) in e.continuation.vectors.iter().enumerate() {
            let v: Vec<String> = v.iter().map(|c| z(*c)).collect();
            out.push(format!("  a_{k} = [{}]", v.join(", ")));
        }
        out.push(format!("  class {} (residual {:.1e})", e.class.verdict, e.class.residual));
        out.push(format!(
            "  routes: difference {:.1e}, combined error {:.1e}, {}",
            e.agreement.max_difference,
            e.agreement.combined_error,
            if e.agreement.pass { "agree" } else { "DISAGREE" }
        ));
    }
    for s in &r.skipped {
        out.push(format!("  skipped {}: {}", s.stage, s.reason));
    }
    for d in &r.diagnostics {
        out.push(format!("  {d}"));
    }
    out.join("\n")
}
