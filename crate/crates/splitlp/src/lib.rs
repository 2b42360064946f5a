//! File formats, the ratio sweep harness and the `splitlp` command line on
//! top of `splitlp-core`.

pub mod cli;
pub mod dot;
pub mod sweep;

pub use cli::run;
