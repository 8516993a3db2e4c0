//! Exact arithmetic on finitely presented abelian groups.

pub mod functors;
pub mod matrix;
pub mod presentation;
pub mod smith;
pub mod snf;

pub use functors::{exterior_square, sym_quotient, tensor, tor1, Bilinear};
pub use matrix::{IntMatrix, SparseMatrix, SparseRow};
pub use presentation::{
    cokernel, describe_factors, is_exact, kernel, AbElement, AbHom, AbPresentation, ExactnessCertificate,
    ExactnessWitness, WellDefined,
};
pub use smith::{Backend, SmithData};
pub use snf::{smith_normal_form, Snf};
