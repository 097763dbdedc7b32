//! Independent checkers for extended solutions and the maps they produce.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::factor::FactorError;
use crate::loops::{LoopError, LoopMat};
use crate::matrix::{CMat, Mat};
use crate::roots::{canonical_reduce, group_max_uniton, height_of, CanonicalElement, RootError, RootSystem, RootType};
use crate::scalar::{RatFun, Scalar};
use crate::weierstrass::{left_log_derivative, ExtendedSolutionSpec};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("spec has data at positive powers of λ")]
    NotS1Invariant,
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Root(#[from] RootError),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Evidence {
    /// The checked quantity vanishes identically.
    ExactZero,
    /// A nonzero entry that violates the condition.
    Witness(String),
    /// Holds for structural reasons, nothing to compute.
    ByConstruction,
    /// Numerical residual.
    Residual(f64),
    /// Integer comparison `(observed, bound)`.
    Integers(i64, i64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerificationReport {
    pub context: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(context: impl Into<String>) -> Self {
        VerificationReport { context: context.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, name: impl Into<String>, pass: bool, evidence: Evidence) {
        self.checks.push(Check { name: name.into(), pass, evidence });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Appends the checks of `other`.
    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.context)?;
        for c in &self.checks {
            writeln!(f, "  [{}] {}: {:?}", if c.pass { "pass" } else { "FAIL" }, c.name, c.evidence)?;
        }
        Ok(())
    }
}

/// First entry of `m` whose grade `k_a − k_b` exceeds `bound`.
fn grade_witness(m: &Mat<RatFun>, exponents: &[i32], bound: i32) -> Option<String> {
    let n = exponents.len();
    for a in 0..n {
        for b in 0..n {
            let grade = exponents[a] - exponents[b];
            if grade > bound && !m[(a, b)].is_zero() {
                return Some(format!("g_{} entry [{},{}] = {}", grade, a + 1, b + 1, m[(a, b)]));
            }
        }
    }
    None
}

/// Exact check that `Φ = exp C · γ` is an extended solution: the `λ^i`
/// coefficient of `A⁻¹A_z` lies in `f_{i+1}` (grades `≤ i + 1`) for
/// `0 ≤ i ≤ r − 2`. `C` is holomorphic, so the `z̄` conditions hold.
pub fn check_extended(spec: &ExtendedSolutionSpec) -> VerificationReport {
    let k = spec.exponents();
    let mut report = VerificationReport::new(format!("extended solution, exponents {:?}", k));
    let l = left_log_derivative(&spec.c_loop());
    let r = spec.height() as i32;
    for i in 0..=r - 2 {
        let name = format!("lambda^{} coefficient in f_{}", i, i + 1);
        match grade_witness(&l.coeff(i), k, i + 1) {
            None => report.push(name, true, Evidence::ExactZero),
            Some(w) => report.push(name, false, Evidence::Witness(w)),
        }
    }
    report.push("antiholomorphic conditions", true, Evidence::ByConstruction);
    report
}

/// Exact check that `(exp C_0)⁻¹(exp C_0)_z ∈ f_1`.
pub fn check_superhorizontal(spec: &ExtendedSolutionSpec) -> Result<VerificationReport, VerifyError> {
    if !spec.is_s1_invariant() {
        return Err(VerifyError::NotS1Invariant);
    }
    let k = spec.exponents();
    let mut report = VerificationReport::new(format!("super-horizontal, exponents {:?}", k));
    let l = left_log_derivative(&spec.c_loop()).coeff(0);
    match grade_witness(&l, k, 1) {
        None => report.push("derivative in f_1", true, Evidence::ExactZero),
        Some(w) => report.push("derivative in f_1", false, Evidence::Witness(w)),
    }
    Ok(report)
}

/// Uniton numbers attached to a spec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitonNumbers {
    /// `λ`-width of `Ad Φ` for generic `z`.
    pub ad_width: u32,
    /// Height of the exponents.
    pub height: u32,
    /// `r(SU_n) = n − 1`.
    pub group_bound: u32,
    /// Height of the canonical reduction of the exponents.
    pub canonical_bound: u32,
}

impl UnitonNumbers {
    pub fn report(&self) -> VerificationReport {
        let mut report = VerificationReport::new("uniton numbers");
        report.push(
            "ad width equals height",
            self.ad_width == self.height,
            Evidence::Integers(self.ad_width as i64, self.height as i64),
        );
        report.push(
            "ad width within group bound",
            self.ad_width <= self.group_bound,
            Evidence::Integers(self.ad_width as i64, self.group_bound as i64),
        );
        report
    }
}

pub fn uniton_number_report(spec: &ExtendedSolutionSpec) -> Result<UnitonNumbers, VerifyError> {
    let ad_width = spec.assemble_loop().ad_width()?;
    let n = spec.n();
    let (group_bound, canonical_bound) = if n < 2 {
        (0, 0)
    } else {
        let rs = RootSystem::new(RootType::A, n - 1)?;
        let xi = CanonicalElement::from_exponents(spec.exponents()).expect("validated exponents");
        (group_max_uniton(&rs), height_of(&rs, &canonical_reduce(&xi))?)
    };
    Ok(UnitonNumbers { ad_width, height: spec.height(), group_bound, canonical_bound })
}

/// `side × side` grid on `[−half, half]²`.
pub fn square_grid(side: usize, half: f64) -> Vec<Complex64> {
    let step = if side > 1 { 2.0 * half / (side - 1) as f64 } else { 0.0 };
    let start = if side > 1 { -half } else { 0.0 };
    let mut out = Vec::with_capacity(side * side);
    for i in 0..side {
        for j in 0..side {
            out.push(Complex64::new(start + step * i as f64, start + step * j as f64));
        }
    }
    out
}

/// `max ‖∂_z̄(φ⁻¹φ_z) + ∂_z(φ⁻¹φ_z̄)‖_F` over the grid, evaluated as
/// `½(∂_x(φ⁻¹φ_x) + ∂_y(φ⁻¹φ_y))` with second-order central differences
/// of step `h`.
pub fn harmonicity_residual<E>(
    mut map: impl FnMut(Complex64) -> Result<CMat, E>,
    grid: &[Complex64],
    h: f64,
) -> Result<f64, E> {
    let mut worst = 0.0f64;
    for &z in grid {
        let c = map(z)?;
        let n = c.rows();
        let c_inv = c.inverse().unwrap_or_else(|| CMat::identity(n).scale(&Complex64::new(f64::NAN, 0.0)));
        let mut total = CMat::zeros(n, n);
        for dir in [Complex64::new(h, 0.0), Complex64::new(0.0, h)] {
            let p = map(z + dir)?;
            let m = map(z - dir)?;
            let d1 = (&p - &m).scale(&Complex64::new(0.5 / h, 0.0));
            let d2 = (&(&p + &m) - &c.scale(&Complex64::new(2.0, 0.0))).scale(&Complex64::new(1.0 / (h * h), 0.0));
            let first = &c_inv * &d1;
            total = &(&total + &(&c_inv * &d2)) - &(&first * &first);
        }
        let r = 0.5 * total.frobenius();
        worst = if r.is_nan() { f64::INFINITY } else { worst.max(r) };
    }
    Ok(worst)
}

/// `diag(e^{i|z|²}, 1, …, 1)`: unitary but not harmonic.
pub fn control_map(n: usize, z: Complex64) -> CMat {
    let mut m = CMat::identity(n);
    m[(0, 0)] = Complex64::new(0.0, z.norm_sqr()).exp();
    m
}

/// `T(L) = L` (exactly, or to `1e−9` relative for numeric loops), and for
/// invariant loops `L(−1)² = I` (to `1e−8` numerically).
pub fn check_t_invariant<S: Scalar>(l: &LoopMat<S>) -> VerificationReport {
    let mut report = VerificationReport::new("T-invariance");
    let twisted = match l.twist_t() {
        Ok(t) => t,
        Err(e) => {
            report.push("T(L) = L", false, Evidence::Witness(format!("{}", e)));
            return report;
        }
    };
    let diff = twisted.sub(l).expect("same size");
    let invariant = if S::EXACT {
        report.push("T(L) = L", diff.is_zero(), if diff.is_zero() { Evidence::ExactZero } else { Evidence::Witness(format!("λ^{} coefficient differs", diff.lo())) });
        diff.is_zero()
    } else {
        let scale = l.coeffs().iter().map(|c| c.frobenius()).fold(1.0, f64::max);
        let r = diff.coeffs().iter().map(|c| c.frobenius()).fold(0.0, f64::max) / scale;
        report.push("T(L) = L", r <= 1e-9, Evidence::Residual(r));
        r <= 1e-9
    };
    if invariant {
        let at = l.eval_at(&-S::one()).expect("invertible at −1");
        let sq = &(&at * &at) - &Mat::identity(l.n());
        if S::EXACT {
            let ok = sq.is_zero();
            report.push("L(-1)^2 = I", ok, if ok { Evidence::ExactZero } else { Evidence::Witness(String::from("L(-1)^2 - I is nonzero")) });
        } else {
            let r = sq.frobenius();
            report.push("L(-1)^2 = I", r <= 1e-8, Evidence::Residual(r));
        }
    }
    report
}
