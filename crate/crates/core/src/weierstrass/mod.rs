//! Extended solutions `Φ = exp C · γ_ξ` for `U_n` from free meromorphic data.

mod build;
mod series;
mod spec;

use alloc::string::String;
use alloc::vec::Vec;

use crate::scalar::NonRationalAntiderivative;

pub use build::{
    build_from_free_functions, closed_form_full_flag_c0, even_grassmannian_build, flag_steps, free_from_list,
    spec_from_c0_exponential, subset_exponents, transform_subset, veronese_solution,
};
pub use series::{exp_loop, exp_nilpotent, left_log_derivative, log_unipotent};
pub use spec::{big_cell_slots, free_slots, height, validate_exponents, ExtendedSolutionSpec, Slot};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum BuildError {
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("slot {slot}: {source}")]
    NonRationalAntiderivative { slot: String, source: NonRationalAntiderivative },
    #[error("frame is degenerate: a trailing minor vanishes identically")]
    DegenerateFrame,
    #[error("empty subset of flag steps")]
    EmptySubset,
    #[error("{0} is not a flag step of the exponents")]
    NotAFlagStep(usize),
    #[error("slot {0} is at an odd power of λ")]
    OddSlotData(String),
    #[error("{0} is not a free slot")]
    NotAFreeSlot(String),
    #[error("expected {expected} free functions, got {got}")]
    FreeCountMismatch { expected: usize, got: usize },
    #[error("exponents {0:?} must be non-increasing and end in 0")]
    InvalidExponents(Vec<i32>),
    #[error("slot {0} is not strictly upper triangular")]
    MisplacedSlot(String),
    #[error("malformed slot name {0:?}")]
    BadSlotName(String),
}
