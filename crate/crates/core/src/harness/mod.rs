//! Configuration-driven runner: profiles and config files, test-function
//! bundles, identity suites, convergence sweeps and report files.

mod bundle;
mod config;
mod emit;
mod suite;
mod sweep;

pub use bundle::{BundleName, FunctionDescriptor, TestFunctionBundle, ALIAS_THRESHOLD};
pub use config::{
    load_config, parse_config, Profile, ReportFormat, RunConfig, DEFAULT_BUDGET_SECONDS, MAX_FACTOR_POINTS, MIN_GRID,
};
pub use emit::{emit_report, read_reports, write_reports, write_sweep, ReportRecord, CSV_HEADER};
pub use suite::{convolution_identities, convolution_tolerance, run_suite, tolerance, Suite};
pub use sweep::{refine_spec, sweep_convergence, SweepAxis, SweepRow, SweepTable, SweepTarget, SWEEP_FLOOR};
