//! Configuration and output plumbing for the `pareto-bandits` command line
//! tool. The binary in this crate is a thin dispatcher over these modules
//! and the `pareto-bandits` library.

pub mod config;
pub mod output;
