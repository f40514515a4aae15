//! HTTP review service and command line front end.

pub mod api;
pub mod cli;
