//! Command implementations, JSON formats and the regression set behind
//! the `affclass` binary. Exposed as a library so integration tests can
//! drive the commands and checks directly.

pub mod commands;
pub mod formats;
pub mod selfcheck;
