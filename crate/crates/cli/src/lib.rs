//! Job files in, presentations and reports out.

pub mod job;
pub mod run;

pub use job::{parse_job, render_job, Command, JobDescription, JobError};
pub use run::{run_job, JobReport, Overrides};
