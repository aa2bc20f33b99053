//! Acceptance suite. Prints one PASS/FAIL line per criterion, followed by
//! indented details, and exits nonzero when any criterion fails. Every
//! comparison is exact.

use std::process::ExitCode;
use std::time::Instant;

use ssnbhd::arith::{jacobi, primes_between};
use ssnbhd::ff::{Field, QuadraticField};
use ssnbhd::isogeny::supersingular_count;
use ssnbhd::quat::ideal::{epsilon, IdealLabel, XEll};
use ssnbhd::quat::{standard_order, OrderKind, Theta};
use ssnbhd::report::NeighborhoodReport;
use ssnbhd_cli::commands::{self, VerifyRow, REFERENCE_TABLE};
use ssnbhd_cli::config::{admissible, vertex_j};
use ssnbhd_cli::modpoly::ModPoly;

const ELLS: [u64; 4] = [5, 7, 11, 13];
const P_MAX: u64 = 1000;
const ORACLE_PRIMES: [u64; 4] = [47, 103, 167, 311];
const ORACLE_SAMPLE: usize = 20;
const KINDS: [OrderKind; 2] = [OrderKind::E1728, OrderKind::E0];

struct Outcome {
    id: &'static str,
    title: &'static str,
    pass: bool,
    details: Vec<String>,
}

fn sweep() -> Vec<VerifyRow> {
    let primes = primes_between(5, P_MAX);
    let cases = commands::verify_cases(&primes, &ELLS, &KINDS);
    commands::verify(&cases, 0, 0).expect("sweep runs")
}

fn kind_of(row: &VerifyRow) -> OrderKind {
    if row.vertex == "0" {
        OrderKind::E0
    } else {
        OrderKind::E1728
    }
}

fn describe(r: &NeighborhoodReport) -> String {
    format!("loops {}, neighbor multiplicities {:?}", r.loops, r.multiplicities())
}

fn table1() -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    for &(ell, r1, r2, rb) in &REFERENCE_TABLE {
        let optional = !ELLS.contains(&ell);
        let row = commands::table1_row(ell, 0, 0).expect("table1 runs");
        let ok = row.p1.value == Some(r1) && row.p2.value == Some(r2);
        if !optional {
            pass &= ok;
        }
        details.push(format!(
            "ℓ={ell}{}: P1={:?} (want {r1}), P2={:?} (want {r2}) {}; Bound computed {} vs reference {rb}{}",
            if optional { " (optional)" } else { "" },
            row.p1.value.unwrap_or(0),
            row.p2.value.unwrap_or(0),
            if ok { "ok" } else { "MISMATCH" },
            row.bound,
            if row.bound == rb {
                String::new()
            } else {
                format!(
                    "  [flag: P1={:?} equals the largest admissible prime below 4ℓ², {:?}]",
                    row.p1.value.unwrap_or(0),
                    row.p1.bound_prime.unwrap_or(0)
                )
            }
        ));
    }
    Outcome {
        id: "1",
        title: "P1/P2 scan reproduces the reference table for ℓ ∈ {5,7,11,13} (exact)",
        pass,
        details,
    }
}

fn loops(rows: &[VerifyRow]) -> Outcome {
    let checked: Vec<&VerifyRow> = rows.iter().filter(|r| r.loop_bound).collect();
    let bad: Vec<String> = checked
        .iter()
        .filter(|r| !r.formula.unwrap().loops)
        .map(|r| format!("p={} ℓ={} j={}: {}", r.p, r.ell, r.vertex, describe(&r.geometric)))
        .collect();
    let mut details = vec![format!("{} cases with p > 4ℓ (j=1728) or p > 3ℓ (j=0), p ≤ {P_MAX}", checked.len())];
    details.extend(bad.iter().cloned());
    Outcome {
        id: "2",
        title: "loop count is 2 or 0 by the residue of ℓ (exact)",
        pass: bad.is_empty() && !checked.is_empty(),
        details,
    }
}

fn shape(rows: &[VerifyRow]) -> Outcome {
    let checked: Vec<&VerifyRow> = rows.iter().filter(|r| r.neighbor_bound).collect();
    let bad: Vec<String> = checked
        .iter()
        .filter(|r| {
            let f = r.formula.unwrap();
            !(f.distinct_count && f.multiplicities && f.fp_count)
        })
        .map(|r| {
            let e = r.expected.unwrap();
            format!(
                "p={} ℓ={} j={}: {} with {} in F_p; want {} × {} with {} in F_p",
                r.p,
                r.ell,
                r.vertex,
                describe(&r.geometric),
                r.geometric.fp_count,
                e.distinct_count,
                e.multiplicity,
                e.fp_count
            )
        })
        .collect();
    let mut details = vec![format!(
        "{} cases with p > 4ℓ² (j=1728) or p > 3ℓ² (j=0), p ≤ {P_MAX}",
        checked.len()
    )];
    for ell in ELLS {
        for kind in KINDS {
            let n = checked.iter().filter(|r| r.ell == ell && kind_of(r) == kind).count();
            details.push(format!("  ℓ={ell} j={}: {n} primes", kind.vertex_label()));
        }
    }
    details.extend(bad.iter().cloned());
    Outcome {
        id: "3",
        title: "distinct neighbors, multiplicities and F_p count match the formulas (exact)",
        pass: bad.is_empty() && !checked.is_empty(),
        details,
    }
}

fn roots_string(field: &QuadraticField, roots: &[(ssnbhd::ff::Fp2, usize)]) -> String {
    roots
        .iter()
        .map(|(j, m)| format!("{}^{m}", field.format(j)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn small_cases() -> Outcome {
    type Check = fn(&NeighborhoodReport) -> bool;
    let cases: [(OrderKind, u64, u64, &str, Check); 5] = [
        (OrderKind::E1728, 7, 2, "3 loops", |r| r.loops == 3 && r.distinct_count == 0),
        (OrderKind::E0, 5, 2, "3 loops", |r| r.loops == 3 && r.distinct_count == 0),
        (OrderKind::E0, 5, 3, "4 loops", |r| r.loops == 4 && r.distinct_count == 0),
        (OrderKind::E1728, 7, 3, "one neighbor with 4 edges", |r| {
            r.loops == 0 && r.multiplicities() == [4]
        }),
        (OrderKind::E1728, 11, 3, "two neighbors with 2 edges each", |r| {
            r.loops == 0 && r.multiplicities() == [2, 2]
        }),
    ];
    let mut pass = true;
    let mut details = Vec::new();
    for (kind, p, ell, want, check) in cases {
        let r = commands::geometric_report(kind, p, ell, 0).expect("small case runs");
        let field = QuadraticField::new(p).unwrap();
        let j = vertex_j(&field, kind);
        let roots = ModPoly::builtin(ell).unwrap().roots_at(&field, &j);
        let ok = check(&r);
        pass &= ok;
        details.push(format!(
            "{} p={p} ℓ={ell} j={}: want {want}; observed {}; Φ_{ell}(j, X) roots mod p: {} (j ≡ {})",
            if ok { "ok  " } else { "FAIL" },
            kind.vertex_label(),
            describe(&r),
            roots_string(&field, &roots),
            field.format(&j)
        ));
        if !ok {
            let why = match p {
                7 => "1728 ≡ 6 ≡ −1 mod 7, so the fourfold root of Φ₃(X, 1728) ≡ (X+1)⁴ is the vertex itself: \
                      4 loops and no other vertex. The expectation is unattainable."
                    .to_string(),
                11 => format!(
                    "only {} supersingular invariants exist mod 11 (0 and 1728 ≡ 1); Φ₃(X, 1728) ≡ X²(X−1)², \
                     so 1728 has 2 loops and meets j = 0 twice. A factorization (X²+X+10)² would need the \
                     non-supersingular roots 3 and 7. The expectation is unattainable.",
                    supersingular_count(11)
                ),
                _ => String::new(),
            };
            details.push(format!("       analysis: {why}"));
        }
    }
    let mut bad = Vec::new();
    let mut n = 0;
    for p in primes_between(9, P_MAX).into_iter().filter(|p| p % 4 == 3) {
        let r = commands::geometric_report(OrderKind::E1728, p, 2, 0).unwrap();
        n += 1;
        if !(r.loops == 1 && r.multiplicities() == [2]) {
            bad.push(p);
        }
    }
    pass &= bad.is_empty();
    details.push(format!(
        "{} p>8 ℓ=2 j=1728: 1 loop and one neighbor with 2 edges for {}/{n} primes ≤ {P_MAX}{}",
        if bad.is_empty() { "ok  " } else { "FAIL" },
        n - bad.len(),
        if bad.is_empty() { String::new() } else { format!("; exceptions {bad:?}") }
    ));
    Outcome {
        id: "4",
        title: "small characteristic and ℓ ∈ {2,3} cases (exact)",
        pass,
        details,
    }
}

fn engines(rows: &[VerifyRow]) -> Outcome {
    let bad: Vec<String> = rows
        .iter()
        .filter(|r| !r.engines_agree())
        .map(|r| {
            format!(
                "p={} ℓ={} j={}: geometric {} / quaternion {}",
                r.p,
                r.ell,
                r.vertex,
                describe(&r.geometric),
                describe(r.quaternion.as_ref().unwrap())
            )
        })
        .collect();
    let below = rows.iter().filter(|r| !r.neighbor_bound).count();
    let mut details = vec![format!(
        "{} cases (all admissible p ≤ {P_MAX}, ℓ ∈ {ELLS:?}, both vertices), {below} of them at or below the bound",
        rows.len()
    )];
    details.extend(bad.iter().cloned());
    Outcome {
        id: "5",
        title: "geometric and quaternion engines agree on loops, distinct count, profile and F_p count (exact)",
        pass: bad.is_empty() && !rows.is_empty(),
        details,
    }
}

fn patterns(rows: &[VerifyRow]) -> Outcome {
    let mut bad = Vec::new();
    let mut direct = 0;
    for r in rows.iter().filter(|r| r.neighbor_bound) {
        let kind = kind_of(r);
        let (p, ell) = (r.p, r.ell);
        let (mult, with_loop, fp) = match kind {
            OrderKind::E1728 => (2, ell % 4 == 1, (1 + jacobi(ell as i64, p)) as usize),
            OrderKind::E0 => (3, ell % 3 == 1, (1 + jacobi(-(p as i64), ell)) as usize),
        };
        let g = &r.geometric;
        let others = (ell as usize + 1 - if with_loop { 2 } else { 0 }) / mult;
        let ok = g.loops == if with_loop { 2 } else { 0 }
            && g.neighbors.iter().all(|n| n.multiplicity == mult)
            && g.distinct_count == others
            && g.fp_count == fp
            && g.distinct_count - g.fp_count == others - fp;
        if !ok {
            bad.push(format!("p={p} ℓ={ell} j={}: {}", r.vertex, describe(g)));
        }
        // where a coefficient table is bundled, read the pattern off Φ_ℓ(j, X) itself
        if let Ok(phi) = ModPoly::builtin(ell) {
            direct += 1;
            let field = QuadraticField::new(p).unwrap();
            let j = vertex_j(&field, kind);
            let roots = phi.roots_at(&field, &j);
            let own = roots.iter().find(|(x, _)| *x == j).map_or(0, |(_, m)| *m);
            let rest: Vec<_> = roots.iter().filter(|(x, _)| *x != j).collect();
            let in_fp = rest.iter().filter(|(x, _)| field.is_in_prime_field(x)).count();
            let ok = own == if with_loop { 2 } else { 0 }
                && rest.len() == others
                && rest.iter().all(|(_, m)| *m == mult)
                && in_fp == fp;
            if !ok {
                bad.push(format!("p={p} ℓ={ell} j={}: Φ roots {}", r.vertex, roots_string(&field, &roots)));
            }
        }
    }
    let mut details = vec![format!(
        "{} cases above the bound; {direct} also factored directly from Φ₅ and Φ₇",
        rows.iter().filter(|r| r.neighbor_bound).count()
    )];
    details.extend(bad.iter().cloned());
    Outcome {
        id: "6",
        title: "factorization patterns of Φ_ℓ(1728, X) and Φ_ℓ(0, X) with the F_p / F_p² split (exact)",
        pass: bad.is_empty(),
        details,
    }
}

fn oracle() -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    for ell in [2, 3, 5] {
        let phi = ModPoly::builtin(ell).unwrap();
        for p in ORACLE_PRIMES {
            let total = supersingular_count(p);
            let r = commands::oracle_check(&phi, p, 0, total).expect("oracle runs");
            let matched = r.rows.iter().filter(|x| x.matches).count();
            let enough = r.rows.len() >= ORACLE_SAMPLE.min(total);
            let ok = r.all_match && enough;
            pass &= ok;
            details.push(format!(
                "{} ℓ={ell} p={p}: {matched}/{} vertices match ({total} supersingular j in total)",
                if ok { "ok  " } else { "FAIL" },
                r.rows.len()
            ));
        }
    }
    Outcome {
        id: "7",
        title: "neighbor multisets equal root multisets of Φ₂, Φ₃, Φ₅ at every sampled vertex (exact)",
        pass,
        details,
    }
}

fn invariants(rows: &[VerifyRow]) -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    let mut record = |name: &str, ok: bool, note: String| {
        pass &= ok;
        details.push(format!("{} {name}: {note}", if ok { "ok  " } else { "FAIL" }));
    };

    // degree sum and JSON round trip on every report of the sweep
    let reports: Vec<&NeighborhoodReport> = rows
        .iter()
        .flat_map(|r| std::iter::once(&r.geometric).chain(r.quaternion.as_ref()))
        .collect();
    let bad = reports
        .iter()
        .filter(|r| {
            let back: NeighborhoodReport = serde_json::from_str(&r.to_json()).unwrap();
            back != ***r || back.validate().is_err()
        })
        .count();
    record(
        "loops + Σ multiplicities = ℓ + 1, JSON round trip",
        bad == 0,
        format!("{} reports, {bad} failures", reports.len()),
    );

    // weighted symmetry m(a→b)|Aut(b)| = m(b→a)|Aut(a)| over whole components
    let mut edges = 0;
    let mut violations = 0;
    let mut over = Vec::new();
    for p in ORACLE_PRIMES {
        for ell in [2, 3, 5, 7] {
            let g = commands::graph(p, ell, None, 0, supersingular_count(p)).unwrap();
            edges += g.edges.len();
            violations += g.symmetry_violations;
            if g.truncated || g.vertices.len() > p as usize / 12 + 2 {
                over.push((p, ell));
            }
        }
    }
    record(
        "edge multiplicity symmetry on BFS components",
        violations == 0 && over.is_empty(),
        format!("{edges} directed edges over p ∈ {ORACLE_PRIMES:?}, ℓ ∈ [2, 3, 5, 7]; {violations} violations; bound or budget exceeded for {over:?}"),
    );

    let mut theta_cases = 0;
    let mut theta_bad = Vec::new();
    let mut disc_cases = 0;
    let mut disc_bad = Vec::new();
    for p in primes_between(5, P_MAX) {
        for kind in KINDS.into_iter().filter(|k| k.admits(p)) {
            let o = standard_order(kind, p).unwrap();
            disc_cases += 1;
            if o.discriminant() != num_bigint::BigInt::from(p * p) {
                disc_bad.push((p, kind.vertex_label()));
            }
            for ell in ELLS.into_iter().filter(|&l| admissible(kind, p, l)) {
                theta_cases += 1;
                if !Theta::new(&o, kind, ell).unwrap().is_homomorphism(&o) {
                    theta_bad.push((p, ell, kind.vertex_label()));
                }
            }
        }
    }
    record(
        "θ is multiplicative on the order basis",
        theta_bad.is_empty(),
        format!("{theta_cases} (p, ℓ, vertex) cases; failures {theta_bad:?}"),
    );
    record(
        "discriminant of the standard orders is p²",
        disc_bad.is_empty(),
        format!("{disc_cases} orders; failures {disc_bad:?}"),
    );

    let mut orbit_cases = 0;
    let mut orbit_bad = Vec::new();
    let mut witness_bad = Vec::new();
    for p in [83u64, 107, 227, 467, 983] {
        for kind in KINDS.into_iter().filter(|k| k.admits(p)) {
            for ell in ELLS {
                let x = XEll::build(standard_order(kind, p).unwrap(), kind, ell).unwrap();
                orbit_cases += 1;
                let mut sizes: Vec<usize> = x.orbits().unwrap().iter().map(|o| o.len()).collect();
                sizes.sort();
                let split = match kind {
                    OrderKind::E1728 => ell % 4 == 1,
                    OrderKind::E0 => ell % 3 == 1,
                };
                let want = if split { vec![1, 1, ell as usize - 1] } else { vec![ell as usize + 1] };
                if sizes != want {
                    orbit_bad.push((p, ell, kind.vertex_label(), sizes));
                }
                // I·ε = I_0, and the two are equivalent through a norm-one witness
                let i_inf = &x.get(IdealLabel::Infinity).lattice;
                let i_0 = &x.get(IdealLabel::Finite(0)).lattice;
                let moved = i_inf.right_mul(x.algebra(), &epsilon(kind)).unwrap();
                if moved != *i_0 || x.equivalence_witness(i_0, i_inf).is_none() {
                    witness_bad.push((p, ell, kind.vertex_label()));
                }
            }
        }
    }
    record(
        "orbit sizes of the unit action on X_ℓ ({ℓ+1} inert, {1,1,ℓ−1} split)",
        orbit_bad.is_empty(),
        format!("{orbit_cases} cases; failures {orbit_bad:?}"),
    );
    record(
        "I·i = I_0 (j=1728) and I·ε = I_0 (j=0), equivalent ideals",
        witness_bad.is_empty(),
        format!("{orbit_cases} cases; failures {witness_bad:?}"),
    );
    Outcome {
        id: "8",
        title: "structural invariants (exact)",
        pass,
        details,
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let rows = sweep();
    let mut outcomes = Vec::new();
    for (f, label) in [
        (Box::new(table1) as Box<dyn Fn() -> Outcome>, "1"),
        (Box::new(|| loops(&rows)), "2"),
        (Box::new(|| shape(&rows)), "3"),
        (Box::new(small_cases), "4"),
        (Box::new(|| engines(&rows)), "5"),
        (Box::new(|| patterns(&rows)), "6"),
        (Box::new(oracle), "7"),
        (Box::new(|| invariants(&rows)), "8"),
    ] {
        let t = Instant::now();
        let o = f();
        debug_assert_eq!(o.id, label);
        println!(
            "[{}] criterion {}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.id,
            o.title,
            t.elapsed().as_secs_f64()
        );
        for d in &o.details {
            println!("       {d}");
        }
        outcomes.push(o);
    }
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    println!(
        "acceptance: {}/{} criteria pass in {:.1}s{}",
        outcomes.len() - failed.len(),
        outcomes.len(),
        start.elapsed().as_secs_f64(),
        if failed.is_empty() { String::new() } else { format!("; failing: {}", failed.join(", ")) }
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
