//! Command-line front end for `fracsis`: JSON scenarios, CSV output, plot
//! scripts and a self-validation suite.

pub mod cli;
pub mod error;
pub mod output;
pub mod plot;
pub mod run;
pub mod scenario;
pub mod validate;

pub use cli::{execute, Cli};
pub use error::CliError;
pub use output::{emit_csv, format_sig, parse_csv};
pub use plot::emit_plot_script;
pub use run::{run_member, run_scenario, RunOutput};
pub use scenario::{Member, ModelKind, Scenario};
pub use validate::{validate, validate_with, Check, Report, ValidateOptions};
