//! Exact computations with pre-Bloch groups, Milnor K-groups and group
//! homology over explicit finite commutative rings.

pub mod abgrp;
pub mod bloch;
pub mod confcx;
pub mod error;
pub mod homcalc;
pub mod int;
pub mod report;
pub mod rings;
pub mod suites;

pub use error::{Error, Result};
pub use int::Int;
