//! Command-line front end for `rinehart-core`: the session language, report
//! rendering and the built-in verification suite.

pub mod app;
pub mod ast;
pub mod error;
pub mod fixture;
pub mod json;
pub mod parser;
pub mod report;
pub mod session;
pub mod suite;
