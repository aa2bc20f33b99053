//! The computations behind each subcommand. Everything here returns plain
//! serializable data; formatting lives in [`crate::output`].

use serde::{Deserialize, Serialize};
use ssnbhd::arith::{jacobi, primes_between};
use ssnbhd::ec::curve_from_j;
use ssnbhd::ff::{Field, Fp2, QuadraticField};
use ssnbhd::isogeny::{bfs_graph, neighborhood, supersingular_count, Graph};
use ssnbhd::quat::order::{compare_e0_bases, E0BasisComparison};
use ssnbhd::quat::{predicted_neighborhood, standard_order, OrderKind};
use ssnbhd::report::{Agreement, NeighborhoodReport};

use crate::config::{admissible, check_ell, check_prime, check_vertex, run_parallel, vertex_j, CliError};
use crate::modpoly::ModPoly;

pub fn geometric_report(kind: OrderKind, p: u64, ell: u64, seed: u64) -> Result<NeighborhoodReport, CliError> {
    check_vertex(kind, p)?;
    check_ell(ell, p)?;
    let field = QuadraticField::new(p)?;
    let nb = neighborhood(&field, &vertex_j(&field, kind), ell, seed)?;
    let mut report = nb.report(&field);
    // name the vertex by its characteristic-zero invariant, as the quaternion side does
    report.vertex_j = kind.vertex_label().to_string();
    Ok(report)
}

pub fn quaternion_report(kind: OrderKind, p: u64, ell: u64) -> Result<NeighborhoodReport, CliError> {
    check_vertex(kind, p)?;
    check_ell(ell, p)?;
    Ok(predicted_neighborhood(kind, p, ell)?.report)
}

/// The shape the loop and neighborhood theorems give for `ℓ > 3` once `p`
/// is past the respective bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    pub loops: usize,
    pub distinct_count: usize,
    pub multiplicity: usize,
    pub fp_count: usize,
}

pub fn expectation(kind: OrderKind, p: u64, ell: u64) -> Expectation {
    match kind {
        OrderKind::E1728 => Expectation {
            loops: if ell % 4 == 1 { 2 } else { 0 },
            // ½(ℓ − (−1)^((ℓ−1)/2))
            distinct_count: if ell % 4 == 1 { (ell - 1) / 2 } else { (ell + 1) / 2 } as usize,
            multiplicity: 2,
            fp_count: (1 + jacobi(ell as i64, p)) as usize,
        },
        OrderKind::E0 => Expectation {
            loops: if ell % 3 == 1 { 2 } else { 0 },
            // ⅓(ℓ − (ℓ/3))
            distinct_count: if ell % 3 == 1 { (ell - 1) / 3 } else { (ell + 1) / 3 } as usize,
            multiplicity: 3,
            fp_count: (1 + jacobi(-(p as i64), ell)) as usize,
        },
    }
}

/// `p > 4ℓ` (resp. `3ℓ`): the loop count is determined.
pub fn loop_bound(kind: OrderKind, p: u64, ell: u64) -> bool {
    p > kind_factor(kind) * ell
}

/// `p > 4ℓ²` (resp. `3ℓ²`): the whole neighborhood shape is determined.
pub fn neighbor_bound(kind: OrderKind, p: u64, ell: u64) -> bool {
    p > kind_factor(kind) * ell * ell
}

fn kind_factor(kind: OrderKind) -> u64 {
    match kind {
        OrderKind::E0 => 3,
        OrderKind::E1728 => 4,
    }
}

/// Which predicted quantities a report reproduces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaCheck {
    pub loops: bool,
    pub distinct_count: bool,
    pub multiplicities: bool,
    pub fp_count: bool,
}

impl FormulaCheck {
    pub fn of(report: &NeighborhoodReport, e: &Expectation) -> Self {
        FormulaCheck {
            loops: report.loops == e.loops,
            distinct_count: report.distinct_count == e.distinct_count,
            multiplicities: report.neighbors.iter().all(|n| n.multiplicity == e.multiplicity),
            fp_count: report.fp_count == e.fp_count,
        }
    }

    pub fn all(&self) -> bool {
        self.loops && self.distinct_count && self.multiplicities && self.fp_count
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub p: u64,
    pub ell: u64,
    pub vertex: String,
    pub loop_bound: bool,
    pub neighbor_bound: bool,
    pub geometric: NeighborhoodReport,
    /// Absent for `ℓ ≤ 3`, where the quaternion engine does not apply.
    pub quaternion: Option<NeighborhoodReport>,
    pub agreement: Option<Agreement>,
    pub expected: Option<Expectation>,
    pub formula: Option<FormulaCheck>,
}

impl VerifyRow {
    pub fn engines_agree(&self) -> bool {
        self.agreement.is_none_or(|a| a.all())
    }
}

pub fn verify_one(kind: OrderKind, p: u64, ell: u64, seed: u64) -> Result<VerifyRow, CliError> {
    let geometric = geometric_report(kind, p, ell, seed)?;
    let (quaternion, agreement, expected, formula) = if ell > 3 {
        let q = quaternion_report(kind, p, ell)?;
        let e = expectation(kind, p, ell);
        let a = geometric.compare(&q);
        let f = FormulaCheck::of(&geometric, &e);
        (Some(q), Some(a), Some(e), Some(f))
    } else {
        (None, None, None, None)
    };
    Ok(VerifyRow {
        p,
        ell,
        vertex: kind.vertex_label().to_string(),
        loop_bound: loop_bound(kind, p, ell),
        neighbor_bound: neighbor_bound(kind, p, ell),
        geometric,
        quaternion,
        agreement,
        expected,
        formula,
    })
}

/// Every admissible `(vertex, p, ℓ)` with `p` in the list, in `(p, ℓ, vertex)` order.
pub fn verify_cases(primes: &[u64], ells: &[u64], kinds: &[OrderKind]) -> Vec<(OrderKind, u64, u64)> {
    let mut out = Vec::new();
    for &p in primes {
        for &ell in ells {
            for &kind in kinds {
                if admissible(kind, p, ell) {
                    out.push((kind, p, ell));
                }
            }
        }
    }
    out
}

pub fn verify(cases: &[(OrderKind, u64, u64)], seed: u64, jobs: usize) -> Result<Vec<VerifyRow>, CliError> {
    run_parallel(jobs, cases, |&(kind, p, ell)| verify_one(kind, p, ell, seed))
        .into_iter()
        .collect()
}

/// Largest prime below the bound whose neighborhood is smaller than the
/// formula, for one vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Entry {
    pub ell: u64,
    pub vertex: String,
    pub formula: usize,
    pub value: Option<u64>,
    /// Largest admissible prime below `4ℓ²` (resp. `3ℓ²`).
    pub bound_prime: Option<u64>,
    pub bound_satisfied: bool,
    pub primes_scanned: usize,
}

pub fn table1_entry(kind: OrderKind, ell: u64, seed: u64, jobs: usize) -> Result<Table1Entry, CliError> {
    if ell <= 3 || check_ell(ell, 0).is_err() {
        return Err(CliError::Config(format!("ℓ = {ell} must be a prime greater than 3")));
    }
    let limit = kind_factor(kind) * ell * ell;
    let mut candidates: Vec<u64> = primes_between(5, limit - 1)
        .into_iter()
        .filter(|&p| admissible(kind, p, ell))
        .collect();
    candidates.reverse();
    let formula = expectation(kind, candidates.first().copied().unwrap_or(5), ell).distinct_count;
    let counts: Vec<usize> = run_parallel(jobs, &candidates, |&p| {
        geometric_report(kind, p, ell, seed).map(|r| r.distinct_count)
    })
    .into_iter()
    .collect::<Result<_, _>>()?;
    let value = candidates
        .iter()
        .zip(&counts)
        .find(|(_, c)| **c < formula)
        .map(|(p, _)| *p);
    let bound_prime = candidates.first().copied();
    Ok(Table1Entry {
        ell,
        vertex: kind.vertex_label().to_string(),
        formula,
        value,
        bound_prime,
        bound_satisfied: value.is_some() && value == bound_prime,
        primes_scanned: candidates.len(),
    })
}

/// Published `(ℓ, P₁, P₂, Bound)` values the scan is compared against.
pub const REFERENCE_TABLE: [(u64, u64, u64, &str); 5] = [
    (5, 83, 47, "I"),
    (7, 191, 71, "I"),
    (11, 479, 311, "I"),
    (13, 659, 479, "×"),
    (17, 1151, 839, "I"),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Row {
    pub ell: u64,
    pub p1: Table1Entry,
    pub p2: Table1Entry,
    /// `I`, `II`, `I,II` or `×`, from the computed entries.
    pub bound: String,
    pub reference: Option<(u64, u64, String)>,
    /// Fields that differ from the reference row.
    pub discrepancies: Vec<String>,
}

pub fn table1_row(ell: u64, seed: u64, jobs: usize) -> Result<Table1Row, CliError> {
    let p1 = table1_entry(OrderKind::E1728, ell, seed, jobs)?;
    let p2 = table1_entry(OrderKind::E0, ell, seed, jobs)?;
    let bound = match (p1.bound_satisfied, p2.bound_satisfied) {
        (true, true) => "I,II",
        (true, false) => "I",
        (false, true) => "II",
        (false, false) => "×",
    }
    .to_string();
    let reference = REFERENCE_TABLE
        .iter()
        .find(|r| r.0 == ell)
        .map(|r| (r.1, r.2, r.3.to_string()));
    let mut discrepancies = Vec::new();
    if let Some((r1, r2, rb)) = &reference {
        if p1.value != Some(*r1) {
            discrepancies.push(format!("P1: computed {:?}, reference {r1}", p1.value));
        }
        if p2.value != Some(*r2) {
            discrepancies.push(format!("P2: computed {:?}, reference {r2}", p2.value));
        }
        if bound != *rb {
            discrepancies.push(format!("Bound: computed {bound}, reference {rb}"));
        }
    }
    Ok(Table1Row {
        ell,
        p1,
        p2,
        bound,
        reference,
        discrepancies,
    })
}

/// A supersingular starting vertex: 1728 or 0 when available, otherwise the
/// least supersingular `j ∈ F_p`.
pub fn start_vertex(field: &QuadraticField, seed: u64) -> Result<Fp2, CliError> {
    let p = field.p();
    if p % 4 == 3 {
        return Ok(field.from_i64(1728));
    }
    if p % 3 == 2 {
        return Ok(field.zero());
    }
    for c in 1..p as i64 {
        let j = field.from_i64(c);
        if j == field.from_i64(1728) {
            continue;
        }
        if curve_from_j(field, &j).is_supersingular(seed)? {
            return Ok(j);
        }
    }
    Err(CliError::Config(format!("no supersingular j in F_{p}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRow {
    pub j: String,
    /// Roots of `Φ_ℓ(j, X)` with multiplicity.
    pub roots: Vec<(String, usize)>,
    /// Codomains of the `ℓ + 1` isogenies, loops included.
    pub codomains: Vec<(String, usize)>,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub p: u64,
    pub ell: u64,
    pub start: String,
    pub supersingular_count: usize,
    pub rows: Vec<OracleRow>,
    pub all_match: bool,
}

/// Compare `Φ_ℓ(j, X)` against the geometric neighborhood at every vertex
/// reached by a breadth-first search, up to `max_vertices`.
pub fn oracle_check(poly: &ModPoly, p: u64, seed: u64, max_vertices: usize) -> Result<OracleReport, CliError> {
    check_prime(p)?;
    let ell = poly.ell();
    check_ell(ell, p)?;
    let field = QuadraticField::new(p)?;
    let start = start_vertex(&field, seed)?;
    let g = bfs_graph(&field, &start, ell, max_vertices, seed)?;
    let show = |v: &[(Fp2, usize)]| -> Vec<(String, usize)> { v.iter().map(|(j, m)| (field.format(j), *m)).collect() };
    let mut rows = Vec::new();
    for v in &g.vertices {
        let Some(nb) = g.neighborhoods.get(v) else { continue };
        let roots = poly.roots_at(&field, v);
        let mut codomains = nb.neighbors.clone();
        if nb.loops > 0 {
            codomains.push((*v, nb.loops));
        }
        codomains.sort();
        rows.push(OracleRow {
            j: field.format(v),
            matches: roots == codomains,
            roots: show(&roots),
            codomains: show(&codomains),
        });
    }
    Ok(OracleReport {
        p,
        ell,
        start: field.format(&start),
        supersingular_count: supersingular_count(p),
        all_match: rows.iter().all(|r| r.matches),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphVertex {
    pub j: String,
    pub loops: usize,
    pub in_prime_field: bool,
    pub expanded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub from: String,
    pub to: String,
    pub mult: usize,
}

/// A breadth-first component, with one directed edge per neighbor relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphExport {
    pub p: u64,
    pub ell: u64,
    pub start: String,
    pub truncated: bool,
    pub supersingular_count: usize,
    pub vertices: Vec<GraphVertex>,
    pub edges: Vec<GraphEdge>,
    /// Edges where `m(a→b)·|Aut(b)| ≠ m(b→a)·|Aut(a)|`.
    pub symmetry_violations: usize,
}

pub fn graph(p: u64, ell: u64, start: Option<OrderKind>, seed: u64, max_vertices: usize) -> Result<GraphExport, CliError> {
    check_prime(p)?;
    check_ell(ell, p)?;
    let field = QuadraticField::new(p)?;
    let start = match start {
        Some(kind) => {
            check_vertex(kind, p)?;
            vertex_j(&field, kind)
        }
        None => start_vertex(&field, seed)?,
    };
    let g = bfs_graph(&field, &start, ell, max_vertices, seed)?;
    Ok(export_graph(&field, &g, &start))
}

fn export_graph(field: &QuadraticField, g: &Graph, start: &Fp2) -> GraphExport {
    let vertices = g
        .vertices
        .iter()
        .map(|v| GraphVertex {
            j: field.format(v),
            loops: g.loops(v),
            in_prime_field: field.is_in_prime_field(v),
            expanded: g.neighborhoods.contains_key(v),
        })
        .collect();
    let mut edges = Vec::new();
    for v in &g.vertices {
        let Some(nb) = g.neighborhoods.get(v) else { continue };
        for (w, m) in &nb.neighbors {
            edges.push(GraphEdge {
                from: field.format(v),
                to: field.format(w),
                mult: *m,
            });
        }
    }
    GraphExport {
        p: g.p,
        ell: g.ell,
        start: field.format(start),
        truncated: g.truncated,
        supersingular_count: supersingular_count(g.p),
        vertices,
        edges,
        symmetry_violations: g.symmetry_violations(field).len(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSummary {
    pub vertex: String,
    pub discriminant: String,
    pub maximal: bool,
    pub contains_sqrt_minus_p: bool,
    pub hnf: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrdersReport {
    pub p: u64,
    pub orders: Vec<OrderSummary>,
    /// Present when `j = 0` is supersingular.
    pub e0_bases: Option<E0BasisComparison>,
}

pub fn orders(p: u64) -> Result<OrdersReport, CliError> {
    check_prime(p)?;
    let mut out = Vec::new();
    for kind in [OrderKind::E1728, OrderKind::E0] {
        if !kind.admits(p) {
            continue;
        }
        let o = standard_order(kind, p)?;
        out.push(OrderSummary {
            vertex: kind.vertex_label().to_string(),
            discriminant: o.discriminant().to_string(),
            maximal: o.is_maximal(),
            contains_sqrt_minus_p: o.has_sqrt_minus_p(),
            hnf: o.lattice().to_json(),
        });
    }
    if out.is_empty() {
        return Err(CliError::Config(format!(
            "neither j = 0 nor j = 1728 is supersingular for p = {p}"
        )));
    }
    let e0_bases = if OrderKind::E0.admits(p) {
        Some(compare_e0_bases(p)?)
    } else {
        None
    };
    Ok(OrdersReport {
        p,
        orders: out,
        e0_bases,
    })
}
