//! Exact and numerical checks for strongly singular masas: reduced words and
//! subgroup graphs in free groups, exact group-algebra arithmetic with
//! conditional expectations, asymptotic-homomorphism decay certificates,
//! affine groups over finite fields, and finite-dimensional matrix models.

pub mod affine;
pub mod algebra;
pub mod asymptotics;
pub mod matrix;
pub mod report;
pub mod scalar;
pub mod stallings;
pub mod suites;
pub mod words;

pub use algebra::{AlgebraError, Element, GroupUnitary};
pub use scalar::GaussRat;
pub use stallings::{CyclicSubgroup, Index, Subgroup, SubgroupGraph};
pub use words::{enumerate_ball, Letter, Word, WordError};
