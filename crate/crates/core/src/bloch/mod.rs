//! Pre-Bloch and Bloch groups, Milnor K-theory and the exact sequence
//! relating them.

mod milnor;
mod prebloch;
mod relative;
mod report;

pub use milnor::{
    k2_cokernel, milnor_k, milnor_k_with_budget, milnor_symbolic, pairs_to_symbols, sym_to_k2, Comparison, MilnorK,
    SymbolIndex, DEFAULT_SYMBOL_BUDGET,
};
pub use prebloch::{
    admissible, admissible_pairs, bloch_group, canonical_unit, five_term, five_term_args, five_term_identity,
    five_term_identity_in, lambda_map, pre_bloch, pre_bloch_ordered, sym_square, unit_from_vec, unit_tensor_square,
    unit_vec, PreBloch, QElement, SymSquare,
};
pub use relative::{induced_map, relative_group, RelativeFunctor, RelativeGroup};
pub use report::{
    bw_report, bw_report_with_budget, BwReport, Certificate, Generators, GroupSummary, Groups, REPORT_SCHEMA,
};

#[cfg(test)]
mod tests;
