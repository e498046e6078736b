//! File IO, report rendering, built-in fixtures and the command line on top
//! of [`eqsim_core`].

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod load;
pub mod report;

pub use eqsim_core as core;
pub use error::{Error, Result};
pub use report::{fixture_table, render, render_all, Format, RenderedReport};
