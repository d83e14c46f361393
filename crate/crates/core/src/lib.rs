//! Analysis of finite k-valued functions `K^n -> K`: essential variables,
//! identification minors and the essential arity gap, subfunctions and
//! separable sets, normal forms of symmetric functions with non-trivial gap,
//! and exhaustive censuses that check structural claims about them.

pub mod census;
pub mod document;
pub mod error;
pub mod function;
pub mod minors;
pub mod subfunctions;
pub mod suites;
pub mod symmetric;
pub mod util;

pub use census::{census, enumerate_symmetric, symmetric_space_size, Census, Mode, RunOptions, DEFAULT_BUDGET};
pub use document::FunctionDocument;
pub use error::{Error, Result};
pub use function::{classify_tuple, embeds, index_of, tuple_of, FiniteFunction, ScTerm, TupleClass};
pub use minors::{all_minors, essential_vars, gap, gap_index, gap_profile, identify, ClassLabel, GapProfile};
pub use subfunctions::{
    all_subfunctions, dominants, restrict, separable_sets, sub_bound, sub_count, weak_dominants, SeparabilityReport,
};
pub use suites::{run_suite, suite_names, SuiteReport, SUITES};
pub use symmetric::{
    compress, construct_gap2_ternary, construct_gap_n, construct_linear, expand, extract_decomposition, is_symmetric,
    orbit_sum, recompose, DecompositionPair, Gap2Family, GapNSpec, LinearSpec, SymmetricSpec, TernaryGap2Spec,
};
