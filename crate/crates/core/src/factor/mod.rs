//! Loop-group factorizations: Iwasawa splitting, Bruhat cells, the C*-flow
//! and uniton factorization.

mod bruhat;
mod iwasawa;
mod maps;

use alloc::vec::Vec;

use crate::loops::LoopError;

pub use bruhat::{bruhat_cell, BruhatCell};
pub use iwasawa::{unitarize, IwasawaFactors, UnitarizeOptions};
pub use maps::{
    big_cell_check, cstar_flow, flow_limit, harmonic_map_at, harmonic_map_of, projector_form_defect,
    uniton_factorize, WeierstrassData,
};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum FactorError {
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error("loop is singular on the unit circle")]
    SingularOnCircle,
    #[error("spectral factorization did not converge by order {order} (residual {residual:e})")]
    NoConvergence { order: usize, residual: f64 },
    #[error("determinant is not a monomial in λ")]
    NonMonomialDeterminant,
    #[error("exponents {0:?} are not canonical")]
    NotCanonical(Vec<i32>),
    #[error("Φ⁻¹Φ_z has a nonzero λ^{power} term")]
    NotInBigCellForm { power: i32 },
}
