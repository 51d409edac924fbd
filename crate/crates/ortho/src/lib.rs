//! File formats and the command-line front end for `ortho-core`.

pub mod cli;
pub mod formats;
pub mod selftest;

pub use cli::run;
