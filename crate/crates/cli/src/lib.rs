//! Command-line front end for the critfan analysis pipeline.

pub mod commands;
pub mod report;
pub mod selftest;
pub mod simulate;
pub mod spec;
