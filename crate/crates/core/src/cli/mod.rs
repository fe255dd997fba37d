//! Instance files, fixtures, generators and the check suite behind the
//! `partact` binary.

pub mod commands;
pub mod fixtures;
pub mod format;
pub mod generate;
pub mod suite;
