//! Structured DNNF circuits, bottom-up compilation traces and Tseitin
//! formulas, with a brute-force oracle for small instances.

pub mod cnf;
pub mod compiler;
pub mod oracle;
pub mod partition;
pub mod scalar;
pub mod strdnnf;
pub mod tseitin;
pub mod vtree;

pub use cnf::{Assignment, Clause, Cnf, Lit, Var};
pub use compiler::{compile, CompilationTrace, Strategy};
pub use scalar::Scalar;
pub use strdnnf::StrDnnf;
pub use vtree::{Shape, Vtree};
pub use tseitin::ChargedGraph;

pub use partition::PartitionParams;

/// Constants in exact rational arithmetic.
pub type ExactParams = PartitionParams<num_rational::BigRational>;
/// Constants in `f64`.
pub type FloatParams = PartitionParams<f64>;
pub type ExactCharges = partition::ChargeState<num_rational::BigRational>;
pub type FloatCharges = partition::ChargeState<f64>;
