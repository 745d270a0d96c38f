//! IO companion to `votesim-core`: run configuration format, CSV output, and
//! worker-pool parallel sweeps.

pub mod config;
pub mod output;
pub mod parallel;

pub use config::{parse_config, Mode, RunSpec, SpecError};
pub use output::{
    sweep_csv, trace_csv, write_sweep_csv, write_trace, OutputError, METADATA_SUFFIX,
    SWEEP_CSV_HEADER, TRACE_CSV_HEADER,
};
pub use parallel::sweep_parallel;
