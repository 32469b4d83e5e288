//! Command-line and HTTP adapters over `chunksel-core`.

pub mod cli;
pub mod error;
pub mod http;

pub use cli::{run, Io};
