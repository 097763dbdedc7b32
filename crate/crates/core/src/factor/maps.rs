use alloc::vec::Vec;

use num_complex::Complex64;

use crate::loops::{ExactLoop, LoopMat, NumLoop};
use crate::matrix::{CMat, Mat};
use crate::roots::CanonicalElement;
use crate::scalar::{RatFun, Scalar};
use crate::weierstrass::{flag_steps, left_log_derivative, subset_exponents, ExtendedSolutionSpec};

use super::iwasawa::{unitarize, UnitarizeOptions};
use super::FactorError;

/// `φ(z) = Φ_u(z, −1)` for an exact loop `Φ`.
pub fn harmonic_map_at(l: &ExactLoop, z: Complex64, opts: &UnitarizeOptions) -> Result<CMat, FactorError> {
    let psi = l.eval_z(Some(z))?;
    let split = unitarize(&psi, opts)?;
    Ok(split.unitary_part.eval_at(&Complex64::new(-1.0, 0.0))?)
}

/// [`harmonic_map_at`] for the assembled loop of `spec`.
pub fn harmonic_map_of(spec: &ExtendedSolutionSpec, z: Complex64, opts: &UnitarizeOptions) -> Result<CMat, FactorError> {
    harmonic_map_at(&spec.assemble_loop(), z, opts)
}

/// `Φ^t`: the unitary part of `Φ(z, e^{−t}λ)`.
pub fn cstar_flow(l: &ExactLoop, t: f64, z: Complex64, opts: &UnitarizeOptions) -> Result<NumLoop, FactorError> {
    let psi = l.eval_z(Some(z))?.scale_lambda(libm::exp(-t));
    Ok(unitarize(&psi, opts)?.unitary_part)
}

/// `A(0)·γ_ξ`, the `t → ∞` limit of the flow: only `C_0` is kept.
pub fn flow_limit(spec: &ExtendedSolutionSpec) -> ExtendedSolutionSpec {
    spec.s1_part()
}

/// Factors `Φ_1, Φ_1⁻¹Φ_2, …` with `Φ_j` the unitary part of
/// `A·γ_{d_1}⋯γ_{d_j}`, one flag step `d` at a time in ascending order.
/// Each factor has the form `π + λπ^⊥`.
pub fn uniton_factorize(spec: &ExtendedSolutionSpec, z: Complex64, opts: &UnitarizeOptions) -> Result<Vec<NumLoop>, FactorError> {
    let k = spec.exponents();
    let canonical = CanonicalElement::from_exponents(k).is_some_and(|xi| xi.is_canonical());
    if !canonical {
        return Err(FactorError::NotCanonical(k.to_vec()));
    }
    let n = spec.n();
    let frame = spec.frame().eval_z(Some(z))?;
    let mut chain = frame.clone();
    let mut prev: Option<NumLoop> = None;
    let mut factors = Vec::new();
    for d in flag_steps(k) {
        let step = subset_exponents(n, &[d].into_iter().collect());
        chain = chain.multiply(&LoopMat::gamma(&step))?;
        let phi = unitarize(&chain, opts)?.unitary_part;
        let factor = match &prev {
            None => phi.clone(),
            Some(p) => p.circle_adjoint()?.multiply(&phi)?,
        };
        factors.push(factor);
        prev = Some(phi);
    }
    Ok(factors)
}

/// Distance of a numeric loop from the form `π + λπ^⊥` with `π` a
/// Hermitian projection.
pub fn projector_form_defect(f: &NumLoop) -> f64 {
    let n = f.n();
    let outside = (f.lo()..=f.hi()).filter(|&k| k != 0 && k != 1).map(|k| f.coeff(k).frobenius()).fold(0.0, f64::max);
    let p = f.coeff(0);
    let q = f.coeff(1);
    let idempotent = (&(&p * &p) - &p).frobenius();
    let hermitian = p.dist(&p.adjoint_c());
    let complement = (&(&p + &q) - &CMat::identity(n)).frobenius();
    outside.max(idempotent).max(hermitian).max(complement)
}

/// The rational matrix `V` with `Φ⁻¹Φ_z = λ⁻¹V`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassData {
    pub v: Mat<RatFun>,
}

/// Computes `Φ⁻¹Φ_z = γ⁻¹ (A⁻¹A_z) γ` exactly and checks that only `λ⁻¹`
/// survives. Entry `(a, b)` of the `λ^i` coefficient of `A⁻¹A_z` lands at
/// power `i − (k_a − k_b)`.
pub fn big_cell_check(spec: &ExtendedSolutionSpec) -> Result<WeierstrassData, FactorError> {
    let k = spec.exponents();
    let n = spec.n();
    let l = left_log_derivative(&spec.c_loop());
    let mut v = Mat::zeros(n, n);
    for i in l.lo()..=l.hi() {
        let c = l.coeff(i);
        for a in 0..n {
            for b in 0..n {
                if c[(a, b)].is_zero() {
                    continue;
                }
                let power = i - (k[a] - k[b]);
                if power != -1 {
                    return Err(FactorError::NotInBigCellForm { power });
                }
                v[(a, b)] = c[(a, b)].clone();
            }
        }
    }
    Ok(WeierstrassData { v })
}
