//! Scenario files and command plumbing for the `cechweil` binary; exposed
//! as a library so integration tests can drive scenarios directly.

pub mod expr;
pub mod scenario;
