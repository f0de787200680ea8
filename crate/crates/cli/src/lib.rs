//! Report assembly, artifact writers, and figure series for the
//! `credit-cycle` binary. Kept as a library so integration tests can parse
//! and round-trip the emitted artifacts with the same types that wrote them.

pub mod figures;
pub mod output;
pub mod report;
