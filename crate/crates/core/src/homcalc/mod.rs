//! Homology of finite groups through the bar complex, and the explicit
//! chain-level identities built on it.

pub mod chain;
pub mod group;
pub mod homology;
pub mod identities;
pub mod section4;
pub mod torus;

pub use chain::{bar_boundary, c_cycle, shuffle, BarChain, ChainJson};
pub use group::{abelian_types, gl2_order, FiniteGroup, GroupSpec, GroupTable, MatrixGroup};
pub use homology::{
    boundary_matrix, cyclic_homology_periodic, rank_mod_p, BarHomology, BoundaryCertificate, BoundaryVerdict, Homology,
    ModpBasis, DEFAULT_INTEGRAL_BUDGET, DEFAULT_TUPLE_BUDGET,
};
pub use identities::{
    exhaustive_commuting_checks, exterior_to_h2, random_commuting_checks, shuffle_checks, ExteriorComparison,
    IdentityTally,
};
pub use section4::{
    verify_degree_two, verify_degree_two_at, verify_delta3, DegreeTwoCheck, Delta3Check, TermDiff, TorusContext,
};
pub use torus::{
    cup_chain, cup_doubling, inc_chain, phi_chain, phi_expansion, reduced_h3, verify_torus_identities, ReducedH3,
    TorusIdentityCheck, TorusVerdict,
};

#[cfg(test)]
mod tests;
