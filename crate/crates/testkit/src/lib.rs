//! Test support for the registry: reference evaluators that share no code
//! with the engine under test, seeded generators, and golden fixtures.

pub mod fixtures;
pub mod gen;
pub mod oracle;
