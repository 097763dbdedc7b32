#![allow(dead_code)]

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use uniton_core::loops::{LoopMat, NumLoop};
use uniton_core::matrix::{CMat, Mat};
use uniton_core::scalar::{GPoly, GaussianRational, RatFun};
use uniton_core::weierstrass::{build_from_free_functions, free_slots, ExtendedSolutionSpec, Slot};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian-integer polynomial of degree ≤ `deg`, coefficients in [−2, 2].
pub fn random_poly(rng: &mut impl Rng, deg: usize) -> RatFun {
    let coeffs = (0..=deg)
        .map(|_| GaussianRational::from_fracs(rng.gen_range(-2..=2), 1, rng.gen_range(-1..=1), 1))
        .collect();
    RatFun::from_poly(GPoly::new(coeffs))
}

/// Nonconstant polynomial of degree ≤ `deg`.
pub fn random_nonconstant(rng: &mut impl Rng, deg: usize) -> RatFun {
    loop {
        let p = random_poly(rng, deg.max(1));
        if !p.is_constant() {
            return p;
        }
    }
}

/// Non-increasing exponents of length `n` ending in 0 with height ≤ `max_height`.
pub fn random_exponents(rng: &mut impl Rng, n: usize, max_height: i32) -> Vec<i32> {
    loop {
        let mut k = vec![0i32; n];
        for j in (0..n - 1).rev() {
            k[j] = k[j + 1] + rng.gen_range(0..=1);
        }
        if k[0] >= 1 && k[0] <= max_height {
            return k;
        }
    }
}

pub fn random_free(rng: &mut impl Rng, exponents: &[i32], even: bool, deg: usize) -> BTreeMap<Slot, RatFun> {
    free_slots(exponents, even).into_iter().map(|s| (s, random_poly(rng, deg))).collect()
}

pub fn random_spec(rng: &mut impl Rng, n: usize, deg: usize) -> ExtendedSolutionSpec {
    let k = random_exponents(rng, n, (n - 1) as i32);
    build_from_free_functions(&k, &random_free(rng, &k, false, deg)).expect("polynomial data integrates")
}

pub fn random_z(rng: &mut impl Rng) -> Complex64 {
    let r: f64 = rng.gen_range(0.1..0.9);
    let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(r, t)
}

/// Unitary part of `Ψ` from the subspace `W ⊖ λW`, `W = Ψ·H_+`, computed by
/// orthogonal projection on a truncated coefficient space.
pub fn grassmannian_oracle(psi: &NumLoop) -> NumLoop {
    let n = psi.n();
    let lo = psi.lo();
    let hi = psi.hi();
    let top = hi + 2 * n as i32 * (hi - lo + 1) + 4;
    let dim = (top - lo + 1) as usize * n;
    let columns = |shift0: i32| -> DMatrix<Complex64> {
        let count = (top - lo + 1) as usize;
        let mut m = DMatrix::zeros(dim, count * n);
        for s in 0..count {
            let shift = shift0 + s as i32;
            for k in lo..=hi {
                let p = k + shift;
                if p > top {
                    continue;
                }
                let c = psi.coeff(k);
                for j in 0..n {
                    for i in 0..n {
                        m[((p - lo) as usize * n + i, s * n + j)] = c[(i, j)];
                    }
                }
            }
        }
        m
    };
    let w = columns(0);
    let q = orthonormal_columns(&columns(1), 1e-10);
    let residual = &w - &q * (q.adjoint() * &w);
    let basis = orthonormal_columns(&residual, 1e-8);
    assert_eq!(basis.ncols(), n, "W ⊖ λW has the wrong dimension");
    let coeffs: Vec<CMat> = (lo..=top)
        .map(|p| Mat::from_fn(n, n, |i, j| basis[((p - lo) as usize * n + i, j)]))
        .collect();
    let phi = LoopMat::new(n, lo, coeffs).unwrap();
    let base = phi.eval_at(&Complex64::new(1.0, 0.0)).unwrap().inverse().unwrap();
    phi.right_mul(&base)
}

/// Orthonormal basis of the column space by modified Gram–Schmidt with
/// column pivoting and one reorthogonalization pass; columns whose
/// remaining norm falls below `rel_tol` times the largest are dropped.
pub fn orthonormal_columns(m: &DMatrix<Complex64>, rel_tol: f64) -> DMatrix<Complex64> {
    let mut cols: Vec<_> = m.column_iter().map(|c| c.into_owned()).collect();
    let scale = cols.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut basis: Vec<nalgebra::DVector<Complex64>> = Vec::new();
    loop {
        let Some((idx, norm)) = cols.iter().enumerate().map(|(i, c)| (i, c.norm())).max_by(|a, b| a.1.partial_cmp(&b.1).unwrap()) else {
            break;
        };
        if norm <= rel_tol * scale {
            break;
        }
        let mut v = cols.swap_remove(idx);
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&v);
                v -= b * proj;
            }
        }
        let v = v.normalize();
        for c in cols.iter_mut() {
            let proj = v.dotc(c);
            *c -= &v * proj;
        }
        basis.push(v);
    }
    DMatrix::from_columns(&basis)
}
