//! Report-building helpers shared by the subcommands.

use std::fmt::Write as _;

use orbidisc::diagnostics::Diagnosis;
use orbidisc::element::LieAlgebraElement;
use orbidisc::matrix::LaurentMatrix;
use orbidisc::rational::Rational;

/// Prints `title: VERDICT` plus one indented line per finding, and clears
/// `ok` unless the verdict holds.  Returns whether it held.
pub fn verdict_block(out: &mut String, ok: &mut bool, title: &str, d: &Diagnosis) -> bool {
    let _ = writeln!(out, "{title}: {}", d.verdict());
    for v in &d.violations {
        let _ = writeln!(out, "  violation: {v}");
    }
    for u in &d.unverified {
        let _ = writeln!(out, "  unverified: {u}");
    }
    let holds = d.holds();
    if !holds {
        *ok = false;
    }
    holds
}

pub fn element_block(out: &mut String, title: &str, xi: &LieAlgebraElement) {
    let _ = writeln!(out, "{title}:");
    for line in xi.render_lines() {
        let _ = writeln!(out, "  {line}");
    }
}

pub fn matrix_block(out: &mut String, title: &str, prefix: &str, m: &LaurentMatrix) {
    let _ = writeln!(out, "{title}:");
    for i in 0..m.size() {
        for j in 0..m.size() {
            let _ = writeln!(out, "  {}[{}][{}] = {}", prefix, i + 1, j + 1, m.entry(i, j));
        }
    }
}

pub fn residue_block(out: &mut String, title: &str, rows: &[Vec<Rational>]) {
    let _ = writeln!(out, "{title}:");
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "  [{}]", cells.join(", "));
    }
}

pub fn rational_list(values: &[Rational]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(", "))
}
