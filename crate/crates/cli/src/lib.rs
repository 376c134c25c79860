//! Command-line front end for `wkt-core`.
//!
//! Every successful invocation prints one JSON document with sorted keys.
//! Exit codes: 0 success, 2 input error, 3 cap exceeded, 4 nothing found.

pub mod cache;
mod commands;
mod output;
mod parse;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use wkt_core::blocks::BlockError;
use wkt_core::classgrp::ClassGroupError;
use wkt_core::decide::DecideError;
use wkt_core::factor::FactorError;
use wkt_core::groups::GroupError;
use wkt_core::hilbertian::HilbertianError;
use wkt_core::numon::NumonError;

pub const CACHE_ENV: &str = "WKT_CACHE_DIR";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    NotFound(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Cap(_) => 3,
            CliError::NotFound(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Cap(_) => "cap_exceeded",
            CliError::NotFound(_) => "not_found",
        }
    }

    pub(crate) fn from_numon(e: NumonError) -> Self {
        e.into()
    }
}

impl From<NumonError> for CliError {
    fn from(e: NumonError) -> Self {
        match e {
            NumonError::MonoidTooLarge { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::SizeCapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<FactorError> for CliError {
    fn from(e: FactorError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<BlockError> for CliError {
    fn from(e: BlockError) -> Self {
        match e {
            BlockError::GroupTooLarge { .. } | BlockError::CapExceeded(_) => CliError::Cap(e.to_string()),
            BlockError::Group(g) => g.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ClassGroupError> for CliError {
    fn from(e: ClassGroupError) -> Self {
        match e {
            ClassGroupError::SizeCapExceeded { .. } => CliError::Cap(e.to_string()),
            ClassGroupError::Group(g) => g.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<DecideError> for CliError {
    fn from(e: DecideError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<HilbertianError> for CliError {
    fn from(e: HilbertianError) -> Self {
        match e {
            HilbertianError::NotFound { .. } => CliError::NotFound(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "wkt", version, about = "Numerical monoids, block monoids, class groups and semigroup-ring decisions")]
pub struct Cli {
    /// Directory holding the result cache (overrides WKT_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Print a table instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Numerical monoids and their ideals.
    #[command(subcommand)]
    Numon(NumonCmd),
    /// Direct sums of numerical monoids.
    #[command(subcommand)]
    Affine(AffineCmd),
    /// Factorizations and lengths in numerical monoids.
    #[command(subcommand)]
    Factor(FactorCmd),
    /// Zero-sum sequences and block monoids.
    #[command(subcommand)]
    Blocks(BlocksCmd),
    /// Class groups of semigroup rings.
    #[command(subcommand)]
    Classgroup(ClassgroupCmd),
    /// Decide ring properties of D[Γ].
    #[command(subcommand)]
    Decide(DecideCmd),
    /// Irreducible polynomials with a prescribed prefix.
    #[command(subcommand)]
    Hilbertian(HilbertianCmd),
    /// Finite abelian groups and torsion-free group types.
    #[command(subcommand)]
    Groups(GroupsCmd),
}

#[derive(Debug, Args)]
pub struct Gens {
    /// Generators, comma separated.
    #[arg(long)]
    pub gens: String,
}

#[derive(Debug, Subcommand)]
pub enum NumonCmd {
    Info(Gens),
    Apery {
        #[command(flatten)]
        gens: Gens,
        #[arg(long)]
        element: u64,
    },
    /// Star operations on the ideal generated by --ideal.
    Ideal {
        #[command(flatten)]
        gens: Gens,
        /// Ideal generators, comma separated (may be negative).
        #[arg(long, allow_hyphen_values = true)]
        ideal: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum AffineCmd {
    Info {
        /// Components separated by '/', e.g. 2,3/3,5.
        #[arg(long)]
        monoid: String,
    },
    Lengths {
        #[arg(long)]
        monoid: String,
        /// One coordinate per component.
        #[arg(long)]
        element: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum FactorCmd {
    Factorizations {
        #[command(flatten)]
        gens: Gens,
        #[arg(long)]
        element: u64,
    },
    Lengths {
        #[command(flatten)]
        gens: Gens,
        #[arg(long)]
        element: u64,
    },
    Delta {
        #[command(flatten)]
        gens: Gens,
        #[arg(long)]
        bound: u64,
    },
    Uk {
        #[command(flatten)]
        gens: Gens,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        bound: u64,
    },
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Cyclic orders, e.g. 2,2.
    #[arg(long)]
    pub group: String,
    /// Subset G0, elements separated by ';' (default: the whole group).
    #[arg(long)]
    pub g0: Option<String>,
}

#[derive(Debug, Args)]
pub struct TBlockArgs {
    /// T-block data as JSON: {"group", "g0", "components": [{"monoid", "class"}]}.
    #[arg(long)]
    pub spec: String,
    /// Largest block length searched.
    #[arg(long)]
    pub cap: usize,
    /// Largest value of each t coordinate searched.
    #[arg(long)]
    pub t_max: u64,
}

#[derive(Debug, Subcommand)]
pub enum BlocksCmd {
    Atoms(GroupArgs),
    Davenport {
        #[arg(long)]
        group: String,
    },
    Lengths {
        #[command(flatten)]
        group: GroupArgs,
        /// Block elements separated by ';'.
        #[arg(long)]
        block: String,
    },
    Factorizations {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        block: String,
    },
    Delta {
        #[arg(long)]
        group: String,
        #[arg(long)]
        cap: usize,
    },
    Uk {
        #[arg(long)]
        group: String,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        cap: usize,
    },
    TblockValidate {
        #[arg(long)]
        spec: String,
        /// JSON: {"block": {"1": 2}, "t": [3]}.
        #[arg(long)]
        element: String,
    },
    TblockAtoms(TBlockArgs),
    TblockLengths {
        #[command(flatten)]
        args: TBlockArgs,
        #[arg(long)]
        element: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum ClassgroupCmd {
    /// C_v(F_p[S]) by unit-group coset enumeration.
    Numerical {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        gens: Gens,
    },
    /// C_v(K[S_1 + ... + S_n]) as a direct sum.
    Sum {
        /// fp:P, q or field:LABEL.
        #[arg(long)]
        field: String,
        /// numerical:… or affine:….
        #[arg(long)]
        monoid: String,
    },
}

#[derive(Debug, Args)]
pub struct Pair {
    /// z, q, fp:P, field:C[:ph], order:LABEL, custom:{…} or JSON.
    #[arg(long)]
    pub domain: String,
    /// numerical:2,3, n0, affine:2,3/1, custom:{…} or JSON.
    #[arg(long)]
    pub monoid: String,
}

#[derive(Debug, Subcommand)]
pub enum DecideCmd {
    /// K[G] weakly Krull for a field of the given characteristic.
    Kg {
        #[arg(long = "char")]
        characteristic: u64,
        /// z, z^N, frac:P or JSON.
        #[arg(long)]
        group: String,
    },
    WeaklyKrull(Pair),
    Wfd(Pair),
    GeneralizedKrull(Pair),
}

#[derive(Debug, Subcommand)]
pub enum HilbertianCmd {
    Find {
        #[arg(long)]
        p: u64,
        /// a_0,…,a_n with a_0 nonzero.
        #[arg(long)]
        prefix: String,
        #[arg(long)]
        max_degree: usize,
    },
    Irreducible {
        #[arg(long)]
        p: u64,
        /// Coefficients, constant term first.
        #[arg(long)]
        coeffs: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum GroupsCmd {
    /// Z^n modulo the given relations.
    Snf {
        /// Rows separated by ';', entries by ','.
        #[arg(long, allow_hyphen_values = true)]
        relations: String,
        #[arg(long)]
        generators: usize,
    },
    /// A finite abelian group modulo the subgroup generated by --subgroup.
    Quotient {
        #[arg(long)]
        group: String,
        #[arg(long)]
        subgroup: String,
    },
    /// Type (0,0,0,…), the except-p variant and condition (i').
    Type {
        #[arg(long)]
        group: String,
        #[arg(long)]
        p: Option<u64>,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs with the cache directory taken from the environment.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(argv, std::env::var_os(CACHE_ENV).map(PathBuf::from))
}

/// Runs with an explicit value for the cache environment variable.
pub fn run_with_env<I, T>(argv: I, env_cache_dir: Option<PathBuf>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let mut stderr = String::new();
    let cache = if cli.no_cache {
        None
    } else {
        cli.cache_dir.clone().or(env_cache_dir).and_then(|dir| match cache::Cache::open(&dir) {
            Ok(c) => Some(c),
            Err(e) => {
                stderr.push_str(&format!("warning: cache disabled: {e}\n"));
                None
            }
        })
    };
    let result = commands::plan(&cli.command).and_then(|plan| {
        let key = cache::request_key(&plan.op, &plan.input);
        let mut warnings = Vec::new();
        let cached = cache.as_ref().and_then(|c| c.get(&key, &mut warnings));
        for w in warnings {
            stderr.push_str(&format!("warning: {w}\n"));
        }
        match cached {
            Some(v) => Ok(v),
            None => {
                let v = (plan.compute)()?;
                if let Some(c) = &cache {
                    if let Err(e) = c.put(&key, &v) {
                        stderr.push_str(&format!("warning: {e}\n"));
                    }
                }
                Ok(v)
            }
        }
    });
    match result {
        Ok(v) => {
            let stdout = if cli.pretty { output::pretty(&v) } else { output::json(&v) };
            Outcome { code: 0, stdout, stderr }
        }
        Err(e) => {
            stderr.push_str(&format!("error: {e}\n"));
            let doc = serde_json::json!({"error": {"kind": e.kind(), "message": e.to_string()}});
            Outcome { code: e.exit_code(), stdout: output::json(&doc), stderr }
        }
    }
}
