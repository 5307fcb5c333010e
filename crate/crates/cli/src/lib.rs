//! Command-line front end for `posetlab`: poset generation, flag vectors,
//! ab/cd-indexes, R-labeling search and the reproduction report.

pub mod commands;
pub mod verify;
