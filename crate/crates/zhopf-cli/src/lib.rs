//! Command-line front end for the zero-Hopf averaging kernel: the system
//! DSL, the average/analyze/formula commands, and run manifests.

pub mod commands;
pub mod dsl;
