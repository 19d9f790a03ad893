//! Exact counting, brute-force oracles and certified bounds for the
//! distance distribution of Reed-Solomon codes over small finite fields.

pub mod aj;
pub mod bounds;
pub mod budget;
pub mod classes;
pub mod combinatorics;
mod enumerate;
pub mod distance;
pub mod error;
pub mod gf;
pub mod interval;
pub mod poly;
pub mod region;
pub mod scalar;
pub mod verify;

pub use budget::Budget;
pub use classes::{DistTable, LeadClass, MomentReport};
pub use error::{Error, Result};
pub use gf::{Elem, FieldSpec};
pub use interval::Interval;
pub use poly::{EvalSet, Poly};
pub use scalar::Scalar;
