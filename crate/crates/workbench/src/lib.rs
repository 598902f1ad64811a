//! File formats, DOT export, seeded corpora and property suites for finite
//! fans, plus the `fanforge` command-line front end.

pub mod cli;
pub mod corpus;
pub mod dot;
pub mod formats;
pub mod suite;
