//! Rendering command results as JSON, CSV, DOT or plain text.

use std::io::Write;

use serde::Serialize;
use ssnbhd::report::NeighborhoodReport;

use crate::commands::{GraphExport, OracleReport, OrdersReport, Table1Row, VerifyRow};
use crate::config::{CliError, Format};

fn unsupported(format: Format, what: &str) -> CliError {
    CliError::Config(format!("format {format:?} is not available for {what}").to_lowercase())
}

fn json<T: Serialize + ?Sized>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

/// Reports are re-parsed from their own JSON and revalidated before being
/// written, so every emitted report satisfies the degree and count invariants.
pub fn reports(out: &mut dyn Write, format: Format, reports: &[NeighborhoodReport]) -> Result<(), CliError> {
    for r in reports {
        let back: NeighborhoodReport = serde_json::from_str(&r.to_json())?;
        back.validate()?;
    }
    match format {
        Format::Json if reports.len() == 1 => json(out, &reports[0]),
        Format::Json => json(out, reports),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "p", "ell", "vertex_j", "engine", "loops", "distinct_count", "fp_count", "neighbor_j",
                "multiplicity", "in_prime_field",
            ])?;
            for r in reports {
                let head = [
                    r.p.to_string(),
                    r.ell.to_string(),
                    r.vertex_j.clone(),
                    format!("{:?}", r.engine).to_lowercase(),
                    r.loops.to_string(),
                    r.distinct_count.to_string(),
                    r.fp_count.to_string(),
                ];
                if r.neighbors.is_empty() {
                    w.write_record(head.iter().cloned().chain(["".into(), "".into(), "".into()]))?;
                }
                for n in &r.neighbors {
                    w.write_record(head.iter().cloned().chain([
                        n.j.clone(),
                        n.multiplicity.to_string(),
                        n.in_prime_field.to_string(),
                    ]))?;
                }
            }
            w.flush()?;
            Ok(())
        }
        Format::Dot => {
            writeln!(out, "digraph neighborhood {{")?;
            for r in reports {
                let v = quote(&r.vertex_j);
                writeln!(out, "  {v} [label={v}];")?;
                if r.loops > 0 {
                    writeln!(out, "  {v} -> {v} [mult={}];", r.loops)?;
                }
                for n in &r.neighbors {
                    let w = quote(&n.j);
                    writeln!(out, "  {w} [label={w}];")?;
                    writeln!(out, "  {v} -> {w} [mult={}];", n.multiplicity)?;
                }
            }
            writeln!(out, "}}")?;
            Ok(())
        }
        Format::Text => {
            for r in reports {
                writeln!(
                    out,
                    "p = {}, ℓ = {}, j = {} ({:?}): {} loop(s), {} neighbor(s), {} in F_p",
                    r.p, r.ell, r.vertex_j, r.engine, r.loops, r.distinct_count, r.fp_count
                )?;
                for n in &r.neighbors {
                    let field = if n.in_prime_field { "F_p" } else { "F_p²" };
                    writeln!(out, "  {:<24} × {}  ({field})", n.j, n.multiplicity)?;
                }
            }
            Ok(())
        }
    }
}

fn flag(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "-",
    }
}

fn profile(r: &NeighborhoodReport) -> String {
    let m: Vec<String> = r.multiplicities().iter().map(|m| m.to_string()).collect();
    format!("[{}]", m.join(" "))
}

pub fn verify(out: &mut dyn Write, format: Format, rows: &[VerifyRow]) -> Result<(), CliError> {
    match format {
        Format::Json => json(out, rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "p", "ell", "vertex", "loop_bound", "neighbor_bound", "loops", "distinct_count",
                "multiplicities", "fp_count", "engines_agree", "formula_holds",
            ])?;
            for r in rows {
                let g = &r.geometric;
                w.write_record([
                    r.p.to_string(),
                    r.ell.to_string(),
                    r.vertex.clone(),
                    r.loop_bound.to_string(),
                    r.neighbor_bound.to_string(),
                    g.loops.to_string(),
                    g.distinct_count.to_string(),
                    profile(g),
                    g.fp_count.to_string(),
                    r.agreement.map_or(String::new(), |a| a.all().to_string()),
                    r.formula.map_or(String::new(), |f| f.all().to_string()),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            writeln!(
                out,
                "{:>6} {:>3} {:>5} {:>5} {:>8} {:<16} {:>3} {:>6} {:>8}",
                "p", "ℓ", "j", "loops", "distinct", "multiplicities", "F_p", "agree", "formula"
            )?;
            for r in rows {
                let g = &r.geometric;
                let formula = match r.formula {
                    Some(f) if !r.neighbor_bound => format!("{} (p≤bound)", flag(Some(f.all()))),
                    f => flag(f.map(|f| f.all())).to_string(),
                };
                writeln!(
                    out,
                    "{:>6} {:>3} {:>5} {:>5} {:>8} {:<16} {:>3} {:>6} {:>8}",
                    r.p,
                    r.ell,
                    r.vertex,
                    g.loops,
                    g.distinct_count,
                    profile(g),
                    g.fp_count,
                    flag(r.agreement.map(|a| a.all())),
                    formula
                )?;
            }
            let bad = rows.iter().filter(|r| !r.engines_agree()).count();
            writeln!(out, "{} case(s), {} engine disagreement(s)", rows.len(), bad)?;
            Ok(())
        }
        Format::Dot => Err(unsupported(format, "verify")),
    }
}

pub fn table1(out: &mut dyn Write, format: Format, rows: &[Table1Row]) -> Result<(), CliError> {
    let show = |v: Option<u64>| v.map_or("none".to_string(), |v| v.to_string());
    match format {
        Format::Json => json(out, rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["ell", "P1", "P1_bound_prime", "P2", "P2_bound_prime", "bound", "discrepancies"])?;
            for r in rows {
                w.write_record([
                    r.ell.to_string(),
                    show(r.p1.value),
                    show(r.p1.bound_prime),
                    show(r.p2.value),
                    show(r.p2.bound_prime),
                    r.bound.clone(),
                    r.discrepancies.join("; "),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            writeln!(out, "{:>4} {:>7} {:>7} {:>7} {:>7} {:>6}  notes", "ℓ", "P1", "P1'", "P2", "P2'", "Bound")?;
            for r in rows {
                writeln!(
                    out,
                    "{:>4} {:>7} {:>7} {:>7} {:>7} {:>6}  {}",
                    r.ell,
                    show(r.p1.value),
                    show(r.p1.bound_prime),
                    show(r.p2.value),
                    show(r.p2.bound_prime),
                    r.bound,
                    r.discrepancies.join("; ")
                )?;
            }
            Ok(())
        }
        Format::Dot => Err(unsupported(format, "table1")),
    }
}

pub fn oracle(out: &mut dyn Write, format: Format, reports: &[OracleReport]) -> Result<(), CliError> {
    let multiset = |v: &[(String, usize)]| -> String {
        v.iter().map(|(j, m)| format!("{j}^{m}")).collect::<Vec<_>>().join(" ")
    };
    match format {
        Format::Json => json(out, reports),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["p", "ell", "j", "roots", "codomains", "match"])?;
            for r in reports {
                for row in &r.rows {
                    w.write_record([
                        r.p.to_string(),
                        r.ell.to_string(),
                        row.j.clone(),
                        multiset(&row.roots),
                        multiset(&row.codomains),
                        row.matches.to_string(),
                    ])?;
                }
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            for r in reports {
                let ok = r.rows.iter().filter(|x| x.matches).count();
                writeln!(
                    out,
                    "p = {}, ℓ = {}: {}/{} vertices match (from j = {}, {} supersingular in total)",
                    r.p,
                    r.ell,
                    ok,
                    r.rows.len(),
                    r.start,
                    r.supersingular_count
                )?;
                for row in r.rows.iter().filter(|x| !x.matches) {
                    writeln!(out, "  MISMATCH at j = {}: Φ roots {} vs codomains {}", row.j, multiset(&row.roots), multiset(&row.codomains))?;
                }
            }
            Ok(())
        }
        Format::Dot => Err(unsupported(format, "oracle-check")),
    }
}

pub fn graph_dot(g: &GraphExport) -> String {
    let mut s = format!("digraph isogeny_graph {{\n  // p = {}, ell = {}\n", g.p, g.ell);
    for v in &g.vertices {
        let q = quote(&v.j);
        s += &format!("  {q} [label={q}];\n");
        if v.loops > 0 {
            s += &format!("  {q} -> {q} [mult={}];\n", v.loops);
        }
    }
    for e in &g.edges {
        s += &format!("  {} -> {} [mult={}];\n", quote(&e.from), quote(&e.to), e.mult);
    }
    s += "}\n";
    s
}

pub fn graph(out: &mut dyn Write, format: Format, g: &GraphExport) -> Result<(), CliError> {
    match format {
        Format::Json => json(out, g),
        Format::Dot => Ok(write!(out, "{}", graph_dot(g))?),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["from", "to", "mult"])?;
            for v in g.vertices.iter().filter(|v| v.loops > 0) {
                w.write_record([v.j.clone(), v.j.clone(), v.loops.to_string()])?;
            }
            for e in &g.edges {
                w.write_record([e.from.clone(), e.to.clone(), e.mult.to_string()])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            writeln!(
                out,
                "p = {}, ℓ = {}: {} vertices from j = {}{} (supersingular count {}), {} directed edges, {} symmetry violation(s)",
                g.p,
                g.ell,
                g.vertices.len(),
                g.start,
                if g.truncated { ", truncated" } else { "" },
                g.supersingular_count,
                g.edges.len(),
                g.symmetry_violations
            )?;
            for v in &g.vertices {
                let nbrs: Vec<String> = g
                    .edges
                    .iter()
                    .filter(|e| e.from == v.j)
                    .map(|e| format!("{}×{}", e.to, e.mult))
                    .collect();
                writeln!(out, "  {:<16} loops {}  -> {}", v.j, v.loops, nbrs.join(", "))?;
            }
            Ok(())
        }
    }
}

pub fn orders(out: &mut dyn Write, format: Format, r: &OrdersReport) -> Result<(), CliError> {
    match format {
        Format::Json => json(out, r),
        Format::Text => {
            for o in &r.orders {
                writeln!(
                    out,
                    "j = {}: discriminant {}, maximal {}, contains √−p {}",
                    o.vertex, o.discriminant, o.maximal, o.contains_sqrt_minus_p
                )?;
            }
            if let Some(c) = &r.e0_bases {
                writeln!(
                    out,
                    "alternative End(E0) basis: same lattice {}, contained {}, contains {}",
                    c.lattices_equal, c.alternative_in_standard, c.standard_in_alternative
                )?;
            }
            Ok(())
        }
        Format::Csv | Format::Dot => Err(unsupported(format, "orders")),
    }
}
