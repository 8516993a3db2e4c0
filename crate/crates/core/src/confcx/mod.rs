//! The configuration complex of lines in general position in `R²`.

mod complex;
mod lines;

pub use complex::{
    complex_exactness, frames, orbit_decomposition, orbit_table, orbits, verify_pre_bloch_coinvariants,
    DegreeExactness, Formula1Certificate, Frame, Frames, OrbitComplex, OrbitLabel, OrbitTable, Orbits,
    DEFAULT_FRAME_BUDGET,
};
pub use lines::{canonical_line, gl2_elements, gl2_generators, lines, Lines, Mat2};

#[cfg(test)]
mod tests;
