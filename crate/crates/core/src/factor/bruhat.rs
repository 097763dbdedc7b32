use alloc::vec;
use alloc::vec::Vec;

use crate::loops::ExactLoop;
use crate::scalar::{RatFun, Scalar};

use super::FactorError;

/// Exponents `ξ` with `L ∈ Λ⁺ · γ_ξ · Λ⁺` (generic `z`), non-increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruhatCell {
    pub exponents: Vec<i32>,
}

/// Truncated power series in `λ`, coefficients `λ⁰ … λ^{prec−1}`.
type Series = Vec<RatFun>;

fn valuation(a: &Series) -> Option<usize> {
    a.iter().position(|c| !c.is_zero())
}

fn mul_trunc(a: &[RatFun], b: &[RatFun], prec: usize) -> Series {
    let mut out = vec![RatFun::zero(); prec];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate().take(prec.saturating_sub(i)) {
            if !y.is_zero() {
                out[i + j] = out[i + j].clone() + &(x.clone() * y);
            }
        }
    }
    out
}

/// `λ`-adic valuations of the Smith form of a polynomial matrix whose
/// determinant is `c·λ^m`, computed over `K[λ]/λ^{m+1}`. There every
/// invariant factor is `λ^e` with `e ≤ m`, and a pivot of least valuation
/// divides everything else in its row and column.
fn local_smith(mut m: Vec<Vec<Series>>, prec: usize) -> Result<Vec<usize>, FactorError> {
    let n = m.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(k) {
            for (j, e) in row.iter().enumerate().skip(k) {
                if let Some(v) = valuation(e) {
                    if best.is_none_or(|(_, _, bv)| v < bv) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let (pi, pj, v) = best.ok_or(FactorError::NonMonomialDeterminant)?;
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        // Fraction-free: row_i ← u·row_i − (a_ik/λ^v)·row_k with u = pivot/λ^v
        // a unit. Every entry of the block has valuation ≥ v, so truncating
        // the shifted factors at λ^{prec−v} keeps the products exact mod λ^prec.
        let unit = m[k][k][v..].to_vec();
        let pivot_row = m[k].clone();
        for row in m.iter_mut().skip(k + 1) {
            if valuation(&row[k]).is_none() {
                continue;
            }
            let q = row[k][v..].to_vec();
            for (t, s) in row.iter_mut().zip(pivot_row.iter()).skip(k) {
                let scaled = mul_trunc(&unit, t, prec);
                let d = mul_trunc(&q, s, prec);
                *t = scaled.into_iter().zip(d).map(|(a, b)| a - b).collect();
            }
        }
        out.push(v);
    }
    Ok(out)
}

/// Cell of an exact loop whose determinant is `c(z)·λ^m`, from the Smith
/// normal form of `λ^s L` over `K[λ]`, `K` the rational functions of `z`.
pub fn bruhat_cell(l: &ExactLoop) -> Result<BruhatCell, FactorError> {
    let (_, det_power) = l.det_monomial().map_err(|_| FactorError::NonMonomialDeterminant)?;
    let n = l.n();
    let s = -l.lo();
    let prec = (det_power + n as i32 * s) as usize + 1;
    let m: Vec<Vec<Series>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..prec).map(|p| l.coeffs().get(p).map_or_else(RatFun::zero, |c| c[(i, j)].clone())).collect())
                .collect()
        })
        .collect();
    let mut exponents: Vec<i32> = local_smith(m, prec)?.into_iter().map(|d| d as i32 - s).collect();
    exponents.sort_unstable_by(|a, b| b.cmp(a));
    Ok(BruhatCell { exponents })
}
