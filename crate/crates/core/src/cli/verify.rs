//! `verify`: moduli oracle, factorization and golden critical stretches.

use std::io::Write;

use crate::checks::{factorization_gate, golden_values, moduli_gate};
use crate::dispersion::SearchOptions;
use crate::error::Result;

/// Writes one line per check; returns whether all of them passed.
pub fn run_suite<W: Write>(out: &mut W, opts: &SearchOptions) -> Result<bool> {
    let mut ok = true;
    let mut line = |pass: bool, name: &str, detail: String| {
        ok &= pass;
        let _ = writeln!(out, "{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    };
    let m = moduli_gate()?;
    line(
        m.passed(),
        "moduli-oracle",
        format!("{} points, max rel {:.2e}, off-pattern {:.2e}", m.points, m.max_rel, m.max_off_pattern),
    );
    let f = factorization_gate()?;
    line(
        f.passed(),
        "factorization",
        format!(
            "{} points, coefficients {:.2e}, roots {:.2e}, near lambda=1 residual {:.2e} (forward {:.2e})",
            f.points, f.max_coeff, f.max_root, f.near_residual, f.near_root
        ),
    );
    for g in golden_values(opts)? {
        let found = g.found.map_or("none".to_string(), |v| format!("{v:.6}"));
        line(g.passed(), &format!("golden {}", g.label), format!("{found} (expected {} +- {})", g.expected, g.tolerance));
    }
    Ok(ok)
}
