//! Exact combinatorial differential calculus for torsors, gerbes and crossed modules
//! with matrix structure groups.

pub mod algebra;
pub mod classical;
pub mod crossed;
pub mod dataset;
pub mod error;
pub mod forms;
pub mod generate;
pub mod gerbe_suite;
pub mod group;
pub mod matrix;
pub mod nerve;
pub mod report;
pub mod runner;
pub mod sample;
pub mod torsor;

pub use algebra::{AlgebraContext, AlgebraElement, Frame, Mono, Q};
pub use error::{Error, Result};
pub use group::{AmbientAutomorphism, GroupConnection, GroupElement, GroupFlavor};
pub use matrix::Matrix;
pub use forms::{AmbientForm, GroupForm};
pub use report::{CheckRecord, Report, Verdict};
