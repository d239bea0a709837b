//! The end-to-end calculator: block specifications in, Hecke presentations out.

pub mod cli;
pub mod pipeline;
pub mod report;
pub mod spec;
pub mod table;

pub use pipeline::{analyze, quotient_at_wall, run_pipeline, subsystem_label, Analysis};
pub use report::{emit_report, EmitMode, Report};
pub use spec::{load_spec, parse_spec, BlockSpec};
pub use table::{default_table, load_parameter_table, parse_parameter_table, ParameterTable, TableEntry, TableKey};
