//! Writer for the CPLEX LP text format, for cross-checking models with
//! external tools.

use std::fmt::Write;

use crate::problem::{LinearProgram, Sense};

fn sanitize(name: &str, fallback: &str) -> String {
    let cleaned: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || "_.[]".contains(c) { c } else { '_' })
        .collect();
    match cleaned.chars().next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => cleaned,
        _ => format!("{fallback}{cleaned}"),
    }
}

fn term(out: &mut String, coef: f64, var: &str, first: bool) {
    let sign = if coef < 0.0 { "-" } else if first { "" } else { "+" };
    let mag = coef.abs();
    if first {
        if sign.is_empty() {
            let _ = write!(out, "{mag} {var}");
        } else {
            let _ = write!(out, "- {mag} {var}");
        }
    } else {
        let _ = write!(out, "{sign} {mag} {var}");
    }
}

/// Renders `lp` in LP format. Binary-flagged variables (bounds `[0, 1]`) are
/// listed in a `Binaries` section when `binaries` is set.
pub fn to_lp_format(lp: &LinearProgram, binaries: bool) -> String {
    let names: Vec<String> = lp
        .vars
        .iter()
        .enumerate()
        .map(|(j, v)| sanitize(&v.name, &format!("x{j}_")))
        .collect();
    let mut out = String::from("\\ generated by chargenet-kernel\nMinimize\n obj:");
    let mut first = true;
    for (j, v) in lp.vars.iter().enumerate() {
        if v.cost != 0.0 {
            out.push(' ');
            term(&mut out, v.cost, &names[j], first);
            first = false;
        }
    }
    if first {
        out.push_str(" 0");
    }
    out.push_str("\nSubject To\n");
    for (i, row) in lp.rows.iter().enumerate() {
        let _ = write!(out, " {}:", sanitize(&row.name, &format!("r{i}_")));
        let mut first = true;
        for &(j, a) in &row.coeffs {
            out.push(' ');
            term(&mut out, a, &names[j], first);
            first = false;
        }
        if first {
            let _ = write!(out, " 0 {}", names.first().map(String::as_str).unwrap_or("x0"));
        }
        let op = match row.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        };
        let _ = writeln!(out, " {op} {}", row.rhs);
    }
    out.push_str("Bounds\n");
    for (j, v) in lp.vars.iter().enumerate() {
        let lo = if v.lower.is_finite() { v.lower.to_string() } else { "-inf".into() };
        let hi = if v.upper.is_finite() { v.upper.to_string() } else { "+inf".into() };
        if v.lower.is_infinite() && v.upper.is_infinite() {
            let _ = writeln!(out, " {} free", names[j]);
        } else {
            let _ = writeln!(out, " {lo} <= {} <= {hi}", names[j]);
        }
    }
    if binaries {
        let bins: Vec<&str> = lp
            .vars
            .iter()
            .zip(&names)
            .filter(|(v, _)| v.lower >= 0.0 && v.upper <= 1.0)
            .map(|(_, n)| n.as_str())
            .collect();
        if !bins.is_empty() {
            out.push_str("Binaries\n");
            for chunk in bins.chunks(8) {
                let _ = writeln!(out, " {}", chunk.join(" "));
            }
        }
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_sections() {
        let mut lp = LinearProgram::new();
        let a = lp.add_binary("x[s1]", 10.0);
        let b = lp.add_binary("x[s2]", 50.0);
        lp.add_row("cover 0", vec![(a, 1.0), (b, 1.0)], Sense::Ge, 1.0);
        let text = to_lp_format(&lp, true);
        assert!(text.contains("Minimize\n obj: 10 x[s1] + 50 x[s2]"));
        assert!(text.contains(" cover_0: 1 x[s1] + 1 x[s2] >= 1"));
        assert!(text.contains("Binaries\n x[s1] x[s2]"));
        assert!(text.ends_with("End\n"));
    }
}
