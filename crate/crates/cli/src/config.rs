//! Validation of run parameters and the error type shared by every command.

use clap::ValueEnum;
use rayon::prelude::*;
use ssnbhd::arith::is_prime_u64;
use ssnbhd::ec::EcError;
use ssnbhd::ff::{FieldError, Fp2, Field, QuadraticField};
use ssnbhd::isogeny::IsogenyError;
use ssnbhd::quat::{OrderKind, QuatError};
use ssnbhd::report::ReportError;
use thiserror::Error;

use crate::modpoly::ModPolyError;

/// Anything that stops a command from producing its result. These exit with
/// status 2; verification mismatches are data and exit with status 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("p = {p} is not admissible for j = {j}: need {need}")]
    Congruence {
        p: u64,
        j: &'static str,
        need: &'static str,
    },
    #[error(transparent)]
    Isogeny(#[from] IsogenyError),
    #[error(transparent)]
    Curve(#[from] EcError),
    #[error(transparent)]
    Quat(#[from] QuatError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    ModPoly(#[from] ModPolyError),
    #[error("serialized report failed revalidation: {0}")]
    Report(#[from] ReportError),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VertexArg {
    #[value(name = "0")]
    Zero,
    #[value(name = "1728")]
    J1728,
    Both,
}

impl VertexArg {
    pub fn kinds(self) -> Vec<OrderKind> {
        match self {
            VertexArg::Zero => vec![OrderKind::E0],
            VertexArg::J1728 => vec![OrderKind::E1728],
            VertexArg::Both => vec![OrderKind::E1728, OrderKind::E0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

pub fn vertex_j(field: &QuadraticField, kind: OrderKind) -> Fp2 {
    match kind {
        OrderKind::E0 => field.zero(),
        OrderKind::E1728 => field.from_i64(1728),
    }
}

pub fn check_prime(p: u64) -> Result<(), CliError> {
    if p <= 3 || !is_prime_u64(p) {
        return Err(CliError::Config(format!("p = {p} must be a prime greater than 3")));
    }
    Ok(())
}

pub fn check_vertex(kind: OrderKind, p: u64) -> Result<(), CliError> {
    check_prime(p)?;
    if !kind.admits(p) {
        let need = match kind {
            OrderKind::E0 => "p ≡ 2 mod 3",
            OrderKind::E1728 => "p ≡ 3 mod 4",
        };
        return Err(CliError::Congruence {
            p,
            j: kind.vertex_label(),
            need,
        });
    }
    Ok(())
}

pub fn check_ell(ell: u64, p: u64) -> Result<(), CliError> {
    if !is_prime_u64(ell) {
        return Err(CliError::Config(format!("ℓ = {ell} is not prime")));
    }
    if ell == p {
        return Err(CliError::Config(format!("ℓ must differ from p = {p}")));
    }
    Ok(())
}

pub fn admissible(kind: OrderKind, p: u64, ell: u64) -> bool {
    check_vertex(kind, p).is_ok() && check_ell(ell, p).is_ok()
}

/// Map `f` over `items` on a pool of `jobs` threads (0 picks the default),
/// keeping input order in the result.
pub fn run_parallel<T, R, F>(jobs: usize, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    pool.install(|| items.par_iter().map(&f).collect())
}
