//! Harmonic maps from the two-sphere into unitary groups, built from loop
//! group data.
//!
//! The pipeline runs from freely chosen rational functions of `z`, through
//! an exact extended solution `Φ = exp C · γ_ξ` (a Laurent polynomial loop
//! in `λ`), to a numeric unitary loop obtained by Iwasawa splitting, whose
//! value at `λ = −1` is the harmonic map. Around it sit the root-system
//! combinatorics that bound uniton numbers, Bruhat-cell identification,
//! the C*-flow, uniton factorization and a set of independent checkers.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod scalar;
pub mod matrix;
pub mod loops;
pub mod roots;
pub mod weierstrass;
pub mod factor;
pub mod verify;
