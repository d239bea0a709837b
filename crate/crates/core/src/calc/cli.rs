//! Command-line front end for `dzcalc`.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use super::report::{emit_report, EmitMode};
use super::spec::{is_prime_power, load_spec};
use super::table::{default_table, load_parameter_table};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Machine,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "dzcalc", about = "Wall parameters and Hecke presentations for depth-zero blocks")]
pub struct Args {
    /// Block specification (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    /// Parameter table (JSON); overrides `options.table` of the block specification.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Residue field cardinality; overrides `options.q`.
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    pub emit: Emit,
    /// Cross-check oracle-resolved walls against the finite-group computations.
    #[arg(long)]
    pub check_oracle: bool,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Exit status for an error: 2 for certificate failures, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Certificate(_) => 2,
        _ => 1,
    }
}

pub fn execute(args: &Args) -> Result<String> {
    let mut spec = load_spec(&args.spec)?;
    if let Some(q) = args.q {
        if !is_prime_power(q) {
            return Err(Error::Spec(format!("q = {q} is not a prime power")));
        }
        spec.q = Some(q);
    }
    spec.check_oracle |= args.check_oracle;
    let table = match args.table.as_ref().or(spec.table.as_ref()) {
        Some(p) => load_parameter_table(p)?,
        None => default_table(),
    };
    let report = super::run_pipeline(&spec, &table)?;
    let mode = match args.emit {
        Emit::Text => EmitMode::Text,
        Emit::Machine => EmitMode::Machine,
    };
    Ok(emit_report(&report, mode))
}

pub fn run(args: &Args) -> i32 {
    let out = match execute(args) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("dzcalc: {e}");
            return exit_code(&e);
        }
    };
    match &args.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, out) {
                eprintln!("dzcalc: {}: {e}", p.display());
                return 1;
            }
        }
        None => print!("{out}"),
    }
    0
}
