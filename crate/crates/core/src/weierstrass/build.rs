use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::matrix::Mat;
use crate::scalar::{integrate_rational, GaussianRational, RatFun, Scalar};

use super::series::{left_log_derivative, log_unipotent};
use super::spec::{free_slots, height, validate_exponents, ExtendedSolutionSpec, Slot};
use super::BuildError;

/// Pairs the free slots (in their canonical order) with a list of values.
pub fn free_from_list(exponents: &[i32], even_only: bool, values: Vec<RatFun>) -> Result<BTreeMap<Slot, RatFun>, BuildError> {
    let slots = free_slots(exponents, even_only);
    if slots.len() != values.len() {
        return Err(BuildError::FreeCountMismatch { expected: slots.len(), got: values.len() });
    }
    Ok(slots.into_iter().zip(values).collect())
}

fn solve(exponents: &[i32], free: &BTreeMap<Slot, RatFun>, even_only: bool) -> Result<ExtendedSolutionSpec, BuildError> {
    validate_exponents(exponents)?;
    let expected: BTreeSet<Slot> = free_slots(exponents, even_only).into_iter().collect();
    for slot in free.keys() {
        if !expected.contains(slot) {
            let name = slot.name(exponents);
            return Err(if even_only && slot.i % 2 == 1 { BuildError::OddSlotData(name) } else { BuildError::NotAFreeSlot(name) });
        }
    }
    if free.len() != expected.len() {
        return Err(BuildError::FreeCountMismatch { expected: expected.len(), got: free.len() });
    }

    let n = exponents.len();
    let r = height(exponents);
    let mut spec = ExtendedSolutionSpec::new(exponents.to_vec(), free.clone(), even_only)?;
    // The λ^i, grade-j component of (exp C)⁻¹(exp C)_z is (c^j_i)_z plus terms
    // in slots that come earlier in (i, j) order; it must vanish for j ≥ i + 2.
    for i in 0..r {
        if even_only && i % 2 == 1 {
            continue;
        }
        for j in i + 2..=r {
            let targets: Vec<Slot> = (0..n)
                .flat_map(|a| (0..n).map(move |b| Slot::new(i, a, b)))
                .filter(|s| s.grade(exponents) == j as i32)
                .collect();
            if targets.is_empty() {
                continue;
            }
            let rest = left_log_derivative(&spec.c_loop()).coeff(i as i32);
            for slot in targets {
                let rhs = -rest[(slot.a, slot.b)].clone();
                let value = integrate_rational(&rhs)
                    .map_err(|source| BuildError::NonRationalAntiderivative { slot: slot.name(exponents), source })?;
                spec = spec.with_slot(slot, value)?;
            }
        }
    }
    Ok(spec)
}

/// Solves for the determined slots of `C` from the free data `c^{i+1}_i`,
/// integrating one slot at a time with zero integration constants.
pub fn build_from_free_functions(exponents: &[i32], free: &BTreeMap<Slot, RatFun>) -> Result<ExtendedSolutionSpec, BuildError> {
    solve(exponents, free, false)
}

/// Variant with data only at even powers of `λ`; the assembled loop is
/// fixed by the twist `T` after normalization at `λ = 1`.
pub fn even_grassmannian_build(exponents: &[i32], free: &BTreeMap<Slot, RatFun>) -> Result<ExtendedSolutionSpec, BuildError> {
    solve(exponents, free, true)
}

/// `exp C_0` for the full flag generated by `f = (f_1, …, f_n)`.
///
/// The frame `A = (f^{(n−1)} ⋯ f′ f)` factors as `A = E·P` with `E` unit
/// upper triangular and `P` lower triangular; since `γ⁻¹Pγ` has only
/// non-negative powers of `λ`, `Aγ` and `Eγ` lie in the same `Λ⁺`-orbit
/// and `E = exp C_0`. Fails when a trailing principal minor of `A` vanishes.
pub fn closed_form_full_flag_c0(f: &[RatFun]) -> Result<Mat<RatFun>, BuildError> {
    let n = f.len();
    if n == 0 {
        return Err(BuildError::DegenerateFrame);
    }
    let mut derivs = Vec::with_capacity(n);
    derivs.push(f.to_vec());
    for k in 1..n {
        let prev: &Vec<RatFun> = &derivs[k - 1];
        derivs.push(prev.iter().map(|x| x.differentiate()).collect());
    }
    // Column c holds f^{(n−1−c)}.
    let frame = Mat::from_fn(n, n, |a, c| derivs[n - 1 - c][a].clone());
    // LU without pivoting of the index-reversed frame.
    let rev = |i: usize| n - 1 - i;
    let b = Mat::from_fn(n, n, |i, j| frame[(rev(i), rev(j))].clone());
    let mut l: Mat<RatFun> = Mat::identity(n);
    let mut u: Mat<RatFun> = Mat::zeros(n, n);
    for k in 0..n {
        for j in k..n {
            let mut s = b[(k, j)].clone();
            for m in 0..k {
                s = s - l[(k, m)].clone() * &u[(m, j)];
            }
            u[(k, j)] = s;
        }
        let pivot = u[(k, k)].inv().ok_or(BuildError::DegenerateFrame)?;
        for i in k + 1..n {
            let mut s = b[(i, k)].clone();
            for m in 0..k {
                s = s - l[(i, m)].clone() * &u[(m, k)];
            }
            l[(i, k)] = s * &pivot;
        }
    }
    Ok(Mat::from_fn(n, n, |i, j| l[(rev(i), rev(j))].clone()))
}

/// Full-flag, `S¹`-invariant spec with `C_0 = log(exp C_0)`.
pub fn spec_from_c0_exponential(e: &Mat<RatFun>) -> Result<ExtendedSolutionSpec, BuildError> {
    let n = e.rows();
    let c0 = log_unipotent(e)?;
    let exponents: Vec<i32> = (0..n).rev().map(|k| k as i32).collect();
    let mut slots = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            if !c0[(a, b)].is_zero() {
                slots.insert(Slot::new(0, a, b), c0[(a, b)].clone());
            }
        }
    }
    ExtendedSolutionSpec::new(exponents, slots, false)
}

/// The rational normal curve `f = (z^{n−1}/(n−1)!, …, z, 1)` as a
/// full-flag solution; its uniton number is `n − 1`.
pub fn veronese_solution(n: usize) -> Result<ExtendedSolutionSpec, BuildError> {
    if n < 2 {
        return Err(BuildError::InvalidExponents(Vec::from([0])));
    }
    let mut f = Vec::with_capacity(n);
    let mut fact = 1i64;
    let mut comps = Vec::with_capacity(n);
    for k in 0..n {
        if k > 0 {
            fact *= k as i64;
        }
        let mut p = RatFun::one();
        for _ in 0..k {
            p = p * &RatFun::z();
        }
        comps.push(p * &RatFun::constant(GaussianRational::from_ratio(1, fact)));
    }
    for k in (0..n).rev() {
        f.push(comps[k].clone());
    }
    spec_from_c0_exponential(&closed_form_full_flag_c0(&f)?)
}

/// Exponents of `ξ_J` for a set `J` of flag dimensions `d ∈ {1, …, n−1}`:
/// `k_a = #{d ∈ J : a ≤ n − d}` (1-based `a`).
pub fn subset_exponents(n: usize, subset: &BTreeSet<usize>) -> Vec<i32> {
    (1..=n).map(|a| subset.iter().filter(|&&d| a + d <= n).count() as i32).collect()
}

/// Flag dimensions at which the exponents jump.
pub fn flag_steps(exponents: &[i32]) -> BTreeSet<usize> {
    let n = exponents.len();
    (1..n).filter(|&d| exponents[n - d - 1] > exponents[n - d]).collect()
}

/// Same frame `A = exp C`, exponents replaced by those of `ξ_J`.
pub fn transform_subset(spec: &ExtendedSolutionSpec, subset: &BTreeSet<usize>) -> Result<ExtendedSolutionSpec, BuildError> {
    if subset.is_empty() {
        return Err(BuildError::EmptySubset);
    }
    let steps = flag_steps(spec.exponents());
    if let Some(&d) = subset.iter().find(|d| !steps.contains(d)) {
        return Err(BuildError::NotAFlagStep(d));
    }
    spec.with_exponents(subset_exponents(spec.n(), subset))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GPoly;

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_integer(n)
    }

    fn poly(cs: &[i64]) -> RatFun {
        RatFun::from_poly(GPoly::new(cs.iter().map(|&c| g(c)).collect()))
    }

    #[test]
    fn zero_free_data_gives_gamma() {
        let k = [3, 2, 1, 0];
        let free = free_from_list(&k, false, alloc::vec![RatFun::zero(); 6]).unwrap();
        let spec = build_from_free_functions(&k, &free).unwrap();
        assert!(spec.slots().is_empty());
        assert_eq!(spec.assemble_loop(), spec.gamma());
    }

    #[test]
    fn u4_ode_for_e1() {
        let k = [3, 2, 1, 0];
        let a1 = poly(&[1, 2]);
        let a2 = poly(&[0, 1, 1]);
        let a3 = poly(&[3, 0, 0, 1]);
        let d1 = poly(&[0, 0, 1]);
        let d2 = poly(&[1, -1]);
        let f1 = poly(&[2, 0, 1]);
        let free: BTreeMap<Slot, RatFun> = [
            (Slot::new(0, 0, 1), a1.clone()),
            (Slot::new(0, 1, 2), a2.clone()),
            (Slot::new(0, 2, 3), a3.clone()),
            (Slot::new(1, 0, 2), d1.clone()),
            (Slot::new(1, 1, 3), d2.clone()),
            (Slot::new(2, 0, 3), f1.clone()),
        ]
        .into_iter()
        .collect();
        let spec = build_from_free_functions(&k, &free).unwrap();
        let e1 = spec.get(&Slot::new(1, 0, 3));
        let half = RatFun::constant(GaussianRational::from_ratio(1, 2));
        let rhs = (a1.clone() * &d2.differentiate() - a1.differentiate() * &d2 + d1.clone() * &a3.differentiate()
            - d1.differentiate() * &a3)
            * &half;
        assert_eq!(e1.differentiate(), rhs);
    }

    #[test]
    fn u3_corner_derivative() {
        // With a1 = α'/β' and a2 = β, the corner of exp C_0 has derivative α'.
        let k = [2, 1, 0];
        let beta_p = poly(&[1, 1]);
        let alpha_p = beta_p.clone() * &poly(&[0, 2]);
        let beta = crate::scalar::integrate_rational(&beta_p).unwrap();
        let a1 = alpha_p.clone() * &beta_p.inv().unwrap();
        let free = free_from_list(&k, false, alloc::vec![a1.clone(), beta.clone(), RatFun::zero()]).unwrap();
        let spec = build_from_free_functions(&k, &free).unwrap();
        let e = crate::weierstrass::exp_nilpotent(&spec.c0()).unwrap();
        assert_eq!(e[(0, 1)], a1);
        assert_eq!(e[(1, 2)], beta);
        assert_eq!(e[(0, 2)].differentiate(), alpha_p);
    }

    #[test]
    fn closed_form_small_cases() {
        let alpha = poly(&[0, 1, 3]);
        let e = closed_form_full_flag_c0(&[alpha.clone(), RatFun::one()]).unwrap();
        assert_eq!(e[(0, 1)], alpha);
        assert!(closed_form_full_flag_c0(&[RatFun::one(), RatFun::one()]).is_err());
        // n = 3: entries α'/β', α on the first row and β on the second.
        let beta = poly(&[0, 0, 1]);
        let e3 = closed_form_full_flag_c0(&[alpha.clone(), beta.clone(), RatFun::one()]).unwrap();
        assert_eq!(e3[(0, 1)], alpha.differentiate() * &beta.differentiate().inv().unwrap());
        assert_eq!(e3[(0, 2)], alpha);
        assert_eq!(e3[(1, 2)], beta);
    }

    #[test]
    fn closed_form_n4_delta() {
        let alpha = poly(&[0, 0, 0, 0, 1]);
        let beta = poly(&[0, 1, 0, 1]);
        let gamma = poly(&[0, 0, 1]);
        let e = closed_form_full_flag_c0(&[alpha.clone(), beta.clone(), gamma.clone(), RatFun::one()]).unwrap();
        let gp_inv = gamma.differentiate().inv().unwrap();
        let num = (alpha.differentiate() * &gp_inv).differentiate();
        let den = (beta.differentiate() * &gp_inv).differentiate();
        assert_eq!(e[(0, 1)], num * &den.inv().unwrap());
    }

    #[test]
    fn veronese_is_zn() {
        for n in 2..=5 {
            let spec = veronese_solution(n).unwrap();
            assert_eq!(spec.slots().len(), n - 1);
            for (s, v) in spec.slots() {
                assert_eq!(s.b, s.a + 1);
                assert_eq!(s.i, 0);
                assert_eq!(v, &RatFun::z());
            }
            let free = free_from_list(spec.exponents(), false, {
                let mut v = alloc::vec![RatFun::z(); n - 1];
                v.extend(core::iter::repeat_n(RatFun::zero(), free_slots(spec.exponents(), false).len() - (n - 1)));
                v
            })
            .unwrap();
            assert_eq!(build_from_free_functions(spec.exponents(), &free).unwrap(), spec);
        }
    }

    #[test]
    fn subset_exponent_convention() {
        let j: BTreeSet<usize> = [1].into_iter().collect();
        assert_eq!(subset_exponents(4, &j), alloc::vec![1, 1, 1, 0]);
        let j: BTreeSet<usize> = [3].into_iter().collect();
        assert_eq!(subset_exponents(4, &j), alloc::vec![1, 0, 0, 0]);
        let all: BTreeSet<usize> = [1, 2, 3].into_iter().collect();
        assert_eq!(subset_exponents(4, &all), alloc::vec![3, 2, 1, 0]);
        let spec = veronese_solution(3).unwrap();
        assert_eq!(transform_subset(&spec, &[1, 2].into_iter().collect()).unwrap(), spec);
        assert_eq!(transform_subset(&spec, &BTreeSet::new()), Err(BuildError::EmptySubset));
    }

    #[test]
    fn even_build_slots() {
        // r = 2: only λ⁰ slots.
        let k = [2, 1, 1, 0];
        let slots = free_slots(&k, true);
        assert!(slots.iter().all(|s| s.i == 0));
        let free = free_from_list(&k, true, slots.iter().map(|_| poly(&[0, 1])).collect()).unwrap();
        let spec = even_grassmannian_build(&k, &free).unwrap();
        assert!(spec.is_s1_invariant());
        // Odd data is refused.
        let mut bad = free.clone();
        bad.insert(Slot::new(1, 0, 3), RatFun::z());
        assert!(matches!(even_grassmannian_build(&k, &bad), Err(BuildError::OddSlotData(_))));
    }
}
