//! The `limiter` command line, as a library so the commands can be tested
//! without spawning a process.

pub mod args;
pub mod lattice;
pub mod render;
pub mod validate;

pub use args::{Cli, Command, Format, GridArgs};
