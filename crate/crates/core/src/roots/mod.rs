//! Root-system combinatorics for the compact simple Lie groups.

mod survey;
mod system;

pub use survey::{
    classical_spaces, even_subsystem_type, heights_by_type, max_height_for, symmetric_space_survey, ClassicalSpace,
    KType, SurveyEntry,
};
pub use system::{
    big_cell_fiber_dim, canonical_reduce, free_function_count, grading, group_max_uniton, height_of, morse_index,
    odd_canonical_reduce, CanonicalElement, RootError, RootSystem, RootType,
};
