//! Finite exponential/logarithm series for nilpotent data.

use crate::loops::{ExactLoop, LoopMat};
use crate::matrix::Mat;
use crate::scalar::Scalar;

use super::BuildError;

fn inv_int<S: Scalar>(k: i64) -> S {
    S::from_i64(k).inv().expect("nonzero integer")
}

/// `Σ_{k<n} N^k/k!` for nilpotent `N`.
pub fn exp_nilpotent<S: Scalar>(nil: &Mat<S>) -> Result<Mat<S>, BuildError> {
    let n = nil.rows();
    let mut out = Mat::identity(n);
    let mut term = Mat::identity(n);
    for k in 1..=n {
        term = (&term * nil).scale(&inv_int(k as i64));
        if term.is_zero() {
            return Ok(out);
        }
        out = &out + &term;
    }
    Err(BuildError::NotNilpotent)
}

/// `log U = Σ_{k≥1} (−1)^{k+1} (U − I)^k / k` for unipotent `U`.
pub fn log_unipotent<S: Scalar>(u: &Mat<S>) -> Result<Mat<S>, BuildError> {
    let n = u.rows();
    let x = u - &Mat::identity(n);
    let mut out = Mat::zeros(n, n);
    let mut power = Mat::identity(n);
    for k in 1..=n {
        power = &power * &x;
        if power.is_zero() {
            return Ok(out);
        }
        let c: S = inv_int(k as i64);
        let term = power.scale(&if k % 2 == 1 { c } else { -c });
        out = &out + &term;
    }
    Err(BuildError::NotNilpotent)
}

/// `exp C` for a loop `C` whose powers vanish beyond `C^{n−1}`.
pub fn exp_loop<S: Scalar>(c: &LoopMat<S>) -> Result<LoopMat<S>, BuildError> {
    let n = c.n();
    let mut out = LoopMat::identity(n);
    let mut term = LoopMat::identity(n);
    for k in 1..=n {
        term = term.multiply(c).expect("same size").map_coeffs(|m| m.scale(&inv_int(k as i64)));
        if term.is_zero() {
            return Ok(out);
        }
        out = out.add(&term).expect("same size");
    }
    Err(BuildError::NotNilpotent)
}

/// `(exp C)⁻¹ (exp C)_z`, as `exp(−C) · ∂_z exp C`.
pub fn left_log_derivative(c: &ExactLoop) -> ExactLoop {
    let neg = c.map_coeffs(|m| -m.clone());
    let inv = exp_loop(&neg).expect("strictly upper triangular data is nilpotent");
    let e = exp_loop(c).expect("strictly upper triangular data is nilpotent");
    inv.multiply(&e.differentiate_z()).expect("same size")
}
