//! Iwasawa splitting `Ψ = Φ_u Φ_+` by matrix spectral factorization.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::loops::{circle_points, LoopMat, NumLoop};
use crate::matrix::CMat;

use super::FactorError;

/// Tolerance and truncation bound for the Toeplitz iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitarizeOptions {
    /// Relative residual `max_k ‖F_k − (G~G)_k‖ / ‖F_0‖` to reach.
    pub tol: f64,
    /// Largest truncation order tried.
    pub max_order: usize,
    /// Circle points used for the reported residuals.
    pub samples: usize,
}

impl Default for UnitarizeOptions {
    fn default() -> Self {
        UnitarizeOptions { tol: 1e-9, max_order: 4096, samples: 64 }
    }
}

impl UnitarizeOptions {
    /// Tighter setting for finite-difference work on the resulting maps.
    pub fn precise() -> Self {
        UnitarizeOptions { tol: 1e-13, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IwasawaFactors {
    /// Based unitary loop, `Φ_u(1) = I`.
    pub unitary_part: NumLoop,
    /// Non-negative powers only.
    pub plus_part: NumLoop,
    /// `max ‖Φ_u*Φ_u − I‖` over the sampled circle points.
    pub residual_unitarity: f64,
    /// `max ‖Ψ − Φ_uΦ_+‖ / max ‖Ψ‖` over the sampled circle points.
    pub residual_split: f64,
    /// Truncation order at which the iteration stopped.
    pub order: usize,
}

/// Lower-triangular inverse.
fn lower_inverse(l: &CMat) -> CMat {
    let n = l.rows();
    let mut inv = CMat::zeros(n, n);
    for j in 0..n {
        inv[(j, j)] = l[(j, j)].inv();
        for i in j + 1..n {
            let mut s = Complex64::new(0.0, 0.0);
            for k in j..i {
                s += l[(i, k)] * inv[(k, j)];
            }
            inv[(i, j)] = -s / l[(i, i)];
        }
    }
    inv
}

/// One block row of the banded Cholesky factor: blocks `L_{i, i−d..=i}`
/// (missing leading blocks for `i < d` are zero) and `L_{ii}⁻¹`.
struct Row {
    blocks: Vec<CMat>,
    diag_inv: CMat,
}

/// Spectral factor `G = Σ_{p≤d} λ^p G_p` of `F = Σ_{|k|≤d} λ^k F_k`
/// (`F_{−k} = F_k*`), with `F = G~G` and `G` invertible on the closed disc.
///
/// Bauer's method: the block Toeplitz matrix `T_{ij} = F_{j−i}` has a banded
/// Cholesky factor whose last block row tends to `(G_d*, …, G_0*)`.
pub(crate) fn spectral_factor(f: &[CMat], opts: &UnitarizeOptions) -> Result<(Vec<CMat>, usize), FactorError> {
    let d = f.len() - 1;
    let n = f[0].rows();
    let scale = f[0].frobenius().max(f64::MIN_POSITIVE);
    let zero = CMat::zeros(n, n);
    let t = |i: usize, j: usize| -> CMat { if j >= i { f[j - i].clone() } else { f[i - j].adjoint_c() } };
    let mut rows: VecDeque<Row> = VecDeque::with_capacity(d + 1);
    let mut checkpoint = 16 * d.max(1);
    let mut last_residual = f64::INFINITY;
    for i in 0..=opts.max_order {
        let mut blocks: Vec<CMat> = Vec::with_capacity(d + 1);
        // blocks[q] = L_{i, i−d+q}
        for q in 0..=d {
            let Some(j) = (i + q).checked_sub(d) else {
                blocks.push(zero.clone());
                continue;
            };
            let mut s = t(i, j);
            // Σ_m L_{im} L_{jm}* over i−d ≤ m < j, m ≥ j−d.
            let m_lo = j.saturating_sub(d).max(i.saturating_sub(d));
            for m in m_lo..j {
                let lim = &blocks[m + d - i];
                let ljm = if j == i { lim } else { &rows[rows.len() - (i - j)].blocks[m + d - j] };
                s = &s - &(lim * &ljm.adjoint_c());
            }
            if j < i {
                let row_j = &rows[rows.len() - (i - j)];
                blocks.push(&s * &row_j.diag_inv.adjoint_c());
            } else {
                // Symmetrize against rounding before factoring.
                let h = (&s + &s.adjoint_c()).scale(&Complex64::new(0.5, 0.0));
                let l = h.cholesky().ok_or(FactorError::SingularOnCircle)?;
                blocks.push(l);
            }
        }
        let diag_inv = lower_inverse(&blocks[d]);
        if rows.len() == d {
            rows.pop_front();
        }
        if d > 0 {
            rows.push_back(Row { blocks: blocks.clone(), diag_inv });
        }
        if i == checkpoint || i == opts.max_order {
            let g: Vec<CMat> = (0..=d).map(|p| blocks[d - p].adjoint_c()).collect();
            let residual = (0..=d)
                .map(|k| {
                    let mut acc = f[k].clone();
                    for p in 0..=d - k {
                        acc = &acc - &(&g[p].adjoint_c() * &g[p + k]);
                    }
                    acc.frobenius()
                })
                .fold(0.0, f64::max)
                / scale;
            if residual <= opts.tol {
                return Ok((g, i));
            }
            last_residual = residual;
            checkpoint *= 2;
        }
    }
    Err(FactorError::NoConvergence { order: opts.max_order, residual: last_residual })
}

/// Splits a numeric loop, invertible on the unit circle, as `Ψ = Φ_u Φ_+`
/// with `Φ_u` unitary on the circle and based at `λ = 1`, and `Φ_+`
/// holomorphic on the disc.
pub fn unitarize(psi: &NumLoop, opts: &UnitarizeOptions) -> Result<IwasawaFactors, FactorError> {
    let n = psi.n();
    if psi.is_zero() {
        return Err(FactorError::SingularOnCircle);
    }
    // |det| against the Hadamard bound, so that scaling columns does not matter.
    for l in circle_points(opts.samples) {
        let v = psi.eval_at(&l)?;
        let bound: f64 = (0..n).map(|j| libm::sqrt((0..n).map(|i| v[(i, j)].norm_sqr()).sum::<f64>())).product();
        if !(v.det().norm() > 1e-13 * bound) {
            return Err(FactorError::SingularOnCircle);
        }
    }

    // F = Ψ~Ψ is unchanged by a scalar shift, so work with λ^{−lo}Ψ.
    let lo = psi.lo();
    let d = (psi.hi() - lo) as usize;
    let p: Vec<CMat> = (0..=d).map(|k| psi.coeff(lo + k as i32)).collect();
    let f: Vec<CMat> = (0..=d)
        .map(|k| {
            let mut acc = CMat::zeros(n, n);
            for q in 0..=d - k {
                acc = &acc + &(&p[q].adjoint_c() * &p[q + k]);
            }
            acc
        })
        .collect();
    let (g, order) = spectral_factor(&f, opts)?;

    // H = G⁻¹ as a power series; Φ′ = λ^{lo} P·H. When det Ψ is a monomial,
    // det G is constant and Φ′ has degree at most n·d in the shifted frame.
    let g0_inv = g[0].inverse().ok_or(FactorError::SingularOnCircle)?;
    let top = n * d.max(1);
    let mut h: Vec<CMat> = Vec::with_capacity(top + 1);
    for m in 0..=top {
        if m == 0 {
            h.push(g0_inv.clone());
            continue;
        }
        let mut acc = CMat::zeros(n, n);
        for q in 1..=m.min(d) {
            acc = &acc + &(&g[q] * &h[m - q]);
        }
        h.push(-(&g0_inv * &acc));
    }
    let phi_coeffs: Vec<CMat> = (0..=top)
        .map(|m| {
            let mut acc = CMat::zeros(n, n);
            for q in 0..=m.min(d) {
                acc = &acc + &(&p[q] * &h[m - q]);
            }
            acc
        })
        .collect();
    let phi = LoopMat::new(n, lo, phi_coeffs)?;
    let g_loop = LoopMat::new(n, 0, g)?;
    let one = Complex64::new(1.0, 0.0);
    let base = phi.eval_at(&one)?;
    let base_inv = base.inverse().ok_or(FactorError::SingularOnCircle)?;
    let unitary_part = phi.right_mul(&base_inv);
    let plus_part = g_loop.left_mul(&base);

    let mut residual_unitarity = 0.0f64;
    let mut split = 0.0f64;
    let mut psi_max = 0.0f64;
    for l in circle_points(opts.samples) {
        let u = unitary_part.eval_at(&l)?;
        residual_unitarity = residual_unitarity.max(u.unitarity_defect());
        let v = psi.eval_at(&l)?;
        split = split.max(v.dist(&(&u * &plus_part.eval_at(&l)?)));
        psi_max = psi_max.max(v.frobenius());
    }
    Ok(IwasawaFactors {
        unitary_part,
        plus_part,
        residual_unitarity,
        residual_split: split / psi_max.max(f64::MIN_POSITIVE),
        order,
    })
}
