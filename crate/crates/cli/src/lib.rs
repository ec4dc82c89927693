//! Document model and manifest machinery behind the `opq` binary, exposed so
//! integration tests can exercise the spec round-trip directly.

pub mod manifest;
pub mod spec;
