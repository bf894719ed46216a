//! Command-line front end and JSON service over `fspl-core`.

pub mod cli;
pub mod service;

pub use cli::{run, Cli};
pub use service::{router, AppState, ServiceConfig};
