//! File formats, parallel execution, verification suites and the command
//! line for the rainbow Turán toolkit.

pub mod cli;
pub mod codec;
pub mod parallel;
pub mod params;
pub mod verify;

pub use rturan_core as core;
