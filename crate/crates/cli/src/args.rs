//! Command-line definition and dispatch.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ssnbhd::arith::primes_between;
use ssnbhd::isogeny::supersingular_count;
use ssnbhd::quat::OrderKind;

use crate::commands;
use crate::config::{check_prime, CliError, Format, VertexArg};
use crate::modpoly::ModPoly;
use crate::output;

#[derive(Debug, Parser)]
#[command(
    name = "ssnbhd",
    version,
    about = "Neighborhoods of j = 0 and j = 1728 in supersingular ℓ-isogeny graphs over F_p²"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for the randomized polynomial factorization.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for sweeps; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub ell: u64,
    #[arg(long, value_enum, default_value = "1728")]
    pub vertex: VertexArg,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    /// A single prime; alternatively give --p-min and --p-max.
    #[arg(long, conflicts_with_all = ["p_min", "p_max"])]
    pub p: Option<u64>,
    #[arg(long, requires = "p_max")]
    pub p_min: Option<u64>,
    #[arg(long, requires = "p_min")]
    pub p_max: Option<u64>,
}

impl RangeArgs {
    fn primes(&self) -> Result<Vec<u64>, CliError> {
        match (self.p, self.p_min, self.p_max) {
            (Some(p), _, _) => {
                check_prime(p)?;
                Ok(vec![p])
            }
            (None, Some(lo), Some(hi)) if lo <= hi => Ok(primes_between(lo.max(5), hi)),
            (None, Some(lo), Some(hi)) => Err(CliError::Config(format!("empty range {lo}..{hi}"))),
            _ => Err(CliError::Config("give --p or both --p-min and --p-max".into())),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Geometric neighborhood of a vertex from kernel polynomials.
    Neighborhood(PointArgs),
    /// Neighborhood predicted from ideal classes of norm ℓ (ℓ > 3).
    Predict(PointArgs),
    /// Run both engines, compare them and check the theorem formulas.
    Verify {
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        ell: Vec<u64>,
        #[arg(long, value_enum, default_value = "both")]
        vertex: VertexArg,
    },
    /// Largest primes below 4ℓ² and 3ℓ² where the neighborhood is smaller than the formula.
    Table1 {
        #[arg(long, value_delimiter = ',', default_values_t = [5u64, 7, 11, 13])]
        ell: Vec<u64>,
    },
    /// Compare neighborhoods with the roots of the classical modular polynomial.
    OracleCheck {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u64>,
        /// Which bundled table to use (2, 3, 5 or 7) when no file is given.
        #[arg(long, required_unless_present = "modpoly_file")]
        ell: Option<u64>,
        #[arg(long)]
        modpoly_file: Option<PathBuf>,
        /// Vertices to check per prime; defaults to all supersingular j.
        #[arg(long)]
        max_vertices: Option<usize>,
    },
    /// Breadth-first export of the ℓ-isogeny graph.
    Graph {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: u64,
        /// Starting vertex, 0 or 1728; a supersingular j in F_p by default.
        #[arg(long, value_enum)]
        vertex: Option<VertexArg>,
        #[arg(long)]
        max_vertices: Option<usize>,
    },
    /// Standard maximal orders for j = 1728 and j = 0 and the alternative End(E0) basis.
    Orders {
        #[arg(long)]
        p: u64,
    },
}

fn single_kind(v: VertexArg) -> Result<OrderKind, CliError> {
    match v {
        VertexArg::Zero => Ok(OrderKind::E0),
        VertexArg::J1728 => Ok(OrderKind::E1728),
        VertexArg::Both => Err(CliError::Config("graph needs a single start vertex".into())),
    }
}

/// Run a parsed command line, writing results to `out`. Returns the process
/// exit status: 0 on success, 1 when a comparison found a mismatch.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let (seed, format, jobs) = (cli.seed, cli.format, cli.jobs);
    match &cli.command {
        Command::Neighborhood(a) => {
            let reports = a
                .vertex
                .kinds()
                .into_iter()
                .map(|k| commands::geometric_report(k, a.p, a.ell, seed))
                .collect::<Result<Vec<_>, _>>()?;
            output::reports(out, format, &reports)?;
            Ok(0)
        }
        Command::Predict(a) => {
            let reports = a
                .vertex
                .kinds()
                .into_iter()
                .map(|k| commands::quaternion_report(k, a.p, a.ell))
                .collect::<Result<Vec<_>, _>>()?;
            output::reports(out, format, &reports)?;
            Ok(0)
        }
        Command::Verify { range, ell, vertex } => {
            let primes = range.primes()?;
            let kinds = vertex.kinds();
            if range.p.is_some() {
                for &k in &kinds {
                    for &l in ell {
                        commands::geometric_report(k, primes[0], l, seed).map(|_| ())?;
                    }
                }
            }
            let cases = commands::verify_cases(&primes, ell, &kinds);
            let rows = commands::verify(&cases, seed, jobs)?;
            output::verify(out, format, &rows)?;
            Ok(if rows.iter().all(|r| r.engines_agree()) { 0 } else { 1 })
        }
        Command::Table1 { ell } => {
            let rows = ell
                .iter()
                .map(|&l| commands::table1_row(l, seed, jobs))
                .collect::<Result<Vec<_>, _>>()?;
            output::table1(out, format, &rows)?;
            Ok(0)
        }
        Command::OracleCheck {
            p,
            ell,
            modpoly_file,
            max_vertices,
        } => {
            let poly = match (modpoly_file, ell) {
                (Some(path), _) => ModPoly::load(path)?,
                (None, Some(l)) => ModPoly::builtin(*l)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            if let (Some(path), Some(l)) = (modpoly_file, ell) {
                if poly.ell() != *l {
                    return Err(CliError::Config(format!(
                        "{} holds Φ_{}, not Φ_{l}",
                        path.display(),
                        poly.ell()
                    )));
                }
            }
            let mut reports = Vec::new();
            for &q in p {
                check_prime(q)?;
                let budget = max_vertices.unwrap_or_else(|| supersingular_count(q));
                reports.push(commands::oracle_check(&poly, q, seed, budget)?);
            }
            output::oracle(out, format, &reports)?;
            Ok(if reports.iter().all(|r| r.all_match) { 0 } else { 1 })
        }
        Command::Graph {
            p,
            ell,
            vertex,
            max_vertices,
        } => {
            check_prime(*p)?;
            let start = vertex.map(single_kind).transpose()?;
            let budget = max_vertices.unwrap_or_else(|| supersingular_count(*p));
            let g = commands::graph(*p, *ell, start, seed, budget)?;
            output::graph(out, format, &g)?;
            Ok(0)
        }
        Command::Orders { p } => {
            output::orders(out, format, &commands::orders(*p)?)?;
            Ok(0)
        }
    }
}
