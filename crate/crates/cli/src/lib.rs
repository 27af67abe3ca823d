//! Configuration, sweep tables, plots and subcommands behind the `ptk` binary.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;
pub mod svg;
