use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tenuniq::bounds::{FieldSelection, ProblemDims, DEFAULT_RANK_CAP};
use tenuniq::certify::DEFAULT_FALSIFY_TRIALS;
use tenuniq::Field;

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "tenuniq",
    version,
    about = "Uniqueness certification for CPD and INDSCAL decompositions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generic-uniqueness rank bounds for given dimensions.
    Bounds(BoundsArgs),
    /// Deterministic uniqueness certificate for a factor file.
    Certify(CertifyArgs),
    /// Compound Khatri-Rao conditions on random instances.
    GenericCheck(GenericCheckArgs),
    /// Repeated ALS fits of a random tensor.
    Empirical(EmpiricalArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldChoice {
    Real,
    Complex,
}

impl From<FieldChoice> for Field {
    fn from(f: FieldChoice) -> Self {
        match f {
            FieldChoice::Real => Field::Real,
            FieldChoice::Complex => Field::Complex,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSelectionChoice {
    Real,
    Complex,
    Both,
}

impl From<FieldSelectionChoice> for FieldSelection {
    fn from(f: FieldSelectionChoice) -> Self {
        match f {
            FieldSelectionChoice::Real => FieldSelection::Real,
            FieldSelectionChoice::Complex => FieldSelection::Complex,
            FieldSelectionChoice::Both => FieldSelection::Both,
        }
    }
}

/// `IxJxK`, or `IxK` for SFS problems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimsSpec(pub Vec<usize>);

fn parse_dims(s: &str) -> Result<DimsSpec, String> {
    let parts: Vec<usize> = s
        .split(['x', 'X'])
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad dimension '{p}': {e}"))
        })
        .collect::<Result<_, _>>()?;
    if !(2..=3).contains(&parts.len()) {
        return Err(format!("expected IxJxK or IxK, got '{s}'"));
    }
    Ok(DimsSpec(parts))
}

impl DimsSpec {
    /// `IxK` and `IxIxK` are accepted with `sfs`; only `IxJxK` without.
    pub fn resolve(&self, sfs: bool) -> Result<ProblemDims, CliError> {
        let d = &self.0;
        let dims = match (d.len(), sfs) {
            (2, true) => ProblemDims::sfs(d[0], d[1])?,
            (3, true) if d[0] == d[1] => ProblemDims::sfs(d[0], d[2])?,
            (3, true) => {
                return Err(CliError::Usage(format!(
                    "SFS dimensions need I = J, got {}x{}x{}",
                    d[0], d[1], d[2]
                )))
            }
            (3, false) => ProblemDims::cpd(d[0], d[1], d[2])?,
            _ => return Err(CliError::Usage("IxK dimensions require --sfs".into())),
        };
        Ok(dims)
    }
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// Dimensions as IxJxK, or IxK with --sfs.
    #[arg(long, value_parser = parse_dims)]
    pub dims: DimsSpec,
    /// Symmetric frontal slices (INDSCAL).
    #[arg(long)]
    pub sfs: bool,
    /// Largest rank scanned.
    #[arg(long, default_value_t = DEFAULT_RANK_CAP)]
    pub max_rank: usize,
    #[arg(long, value_enum, default_value_t = FieldSelectionChoice::Both)]
    pub field: FieldSelectionChoice,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// Factor file (JSON).
    pub input: PathBuf,
    /// Relative singular-value threshold for numerical rank.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_FALSIFY_TRIALS)]
    pub falsify_trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct GenericCheckArgs {
    #[arg(long, value_parser = parse_dims)]
    pub dims: DimsSpec,
    #[arg(long)]
    pub sfs: bool,
    #[arg(long)]
    pub rank: usize,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = FieldChoice::Real)]
    pub field: FieldChoice,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct EmpiricalArgs {
    #[arg(long, value_parser = parse_dims)]
    pub dims: DimsSpec,
    #[arg(long)]
    pub sfs: bool,
    #[arg(long)]
    pub rank: usize,
    /// Random ALS starts.
    #[arg(long, default_value_t = 20)]
    pub inits: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = FieldChoice::Real)]
    pub field: FieldChoice,
    /// Sweeps per ALS run.
    #[arg(long, default_value_t = 2000)]
    pub max_iters: usize,
    /// Stop when the relative residual changes by less than this.
    #[arg(long, default_value_t = 1e-9)]
    pub fit_tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}
