//! Front end for the `engine` binary: job specs and subcommands.

pub mod run;
pub mod spec;

pub use run::{run, Command, Report, RunError};
pub use spec::{load, parse_spec, serialize_spec, validate, Job, JobSpec, SpecError};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
