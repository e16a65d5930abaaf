//! Succinct total search problems: functions, instances, verifiers, solvers
//! and reductions.

pub mod function;
pub mod io;
pub mod problems;
pub mod reductions;
pub mod solvers;

pub use function::{BitVec, Circuit, Function, FunctionError};
