use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::loops::{ExactLoop, LoopMat};
use crate::matrix::Mat;
use crate::scalar::{RatFun, Scalar};

use super::series::exp_loop;
use super::BuildError;

/// Position of one coefficient of `C`: matrix entry `(a, b)` (0-based) at
/// power `λ^i`. Its grade `j = k_a − k_b` is fixed by the exponents.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Slot {
    pub i: u32,
    pub a: usize,
    pub b: usize,
}

impl Slot {
    pub fn new(i: u32, a: usize, b: usize) -> Self {
        Slot { i, a, b }
    }

    /// `k_a − k_b`.
    pub fn grade(&self, exponents: &[i32]) -> i32 {
        exponents[self.a] - exponents[self.b]
    }

    /// `c{j}_{i}[a,b]` with 1-based matrix indices.
    pub fn name(&self, exponents: &[i32]) -> String {
        format!("c{}_{}[{},{}]", self.grade(exponents), self.i, self.a + 1, self.b + 1)
    }

    /// Parses a slot name, checking the grade against `exponents`.
    pub fn parse(name: &str, exponents: &[i32]) -> Result<Self, BuildError> {
        let bad = || BuildError::BadSlotName(String::from(name));
        let rest = name.strip_prefix('c').ok_or_else(bad)?;
        let (head, idx) = rest.split_once('[').ok_or_else(bad)?;
        let (j, i) = head.split_once('_').ok_or_else(bad)?;
        let idx = idx.strip_suffix(']').ok_or_else(bad)?;
        let (a, b) = idx.split_once(',').ok_or_else(bad)?;
        let j = i32::from_str(j.trim()).map_err(|_| bad())?;
        let i = u32::from_str(i.trim()).map_err(|_| bad())?;
        let a = usize::from_str(a.trim()).map_err(|_| bad())?;
        let b = usize::from_str(b.trim()).map_err(|_| bad())?;
        let n = exponents.len();
        if a == 0 || b == 0 || a > n || b > n {
            return Err(bad());
        }
        let slot = Slot::new(i, a - 1, b - 1);
        if slot.grade(exponents) != j {
            return Err(bad());
        }
        Ok(slot)
    }
}

/// Checks `exponents` is non-increasing, nonempty and ends in 0.
pub fn validate_exponents(exponents: &[i32]) -> Result<(), BuildError> {
    let ok = !exponents.is_empty()
        && exponents.last() == Some(&0)
        && exponents.windows(2).all(|w| w[0] >= w[1]);
    if ok {
        Ok(())
    } else {
        Err(BuildError::InvalidExponents(exponents.to_vec()))
    }
}

/// Height `r = k_1 − k_n`.
pub fn height(exponents: &[i32]) -> u32 {
    match (exponents.first(), exponents.last()) {
        (Some(f), Some(l)) => (f - l).max(0) as u32,
        _ => 0,
    }
}

/// All big-cell slots `0 ≤ i < j ≤ r`, ordered by `(i, j)` and then row-major.
pub fn big_cell_slots(exponents: &[i32]) -> Vec<Slot> {
    let n = exponents.len();
    let r = height(exponents) as i32;
    let mut out = Vec::new();
    for i in 0..r {
        for j in i + 1..=r {
            for a in 0..n {
                for b in 0..n {
                    if exponents[a] - exponents[b] == j {
                        out.push(Slot::new(i as u32, a, b));
                    }
                }
            }
        }
    }
    out
}

/// Free slots `c^{i+1}_i`; with `even_only`, only even `i`.
pub fn free_slots(exponents: &[i32], even_only: bool) -> Vec<Slot> {
    big_cell_slots(exponents)
        .into_iter()
        .filter(|s| s.grade(exponents) == s.i as i32 + 1 && (!even_only || s.i % 2 == 0))
        .collect()
}

/// Exponents, the coefficients of `C = Σ_i λ^i C_i`, and the evenness flag.
///
/// `Φ = exp C · γ` with `γ = diag(λ^{k_1}, …, λ^{k_n})`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtendedSolutionSpec {
    exponents: Vec<i32>,
    slots: BTreeMap<Slot, RatFun>,
    even_only: bool,
}

impl ExtendedSolutionSpec {
    /// Validates that every slot is strictly upper triangular, and with
    /// `even_only` that no odd power occurs. Zero entries are dropped.
    pub fn new(exponents: Vec<i32>, slots: BTreeMap<Slot, RatFun>, even_only: bool) -> Result<Self, BuildError> {
        validate_exponents(&exponents)?;
        let n = exponents.len();
        let mut kept = BTreeMap::new();
        for (slot, f) in slots {
            if slot.a >= n || slot.b >= n || slot.a >= slot.b {
                return Err(BuildError::MisplacedSlot(slot.name(&exponents)));
            }
            if even_only && slot.i % 2 == 1 {
                return Err(BuildError::OddSlotData(slot.name(&exponents)));
            }
            if !f.is_zero() {
                kept.insert(slot, f);
            }
        }
        Ok(ExtendedSolutionSpec { exponents, slots: kept, even_only })
    }

    /// `C = 0`.
    pub fn trivial(exponents: Vec<i32>) -> Result<Self, BuildError> {
        ExtendedSolutionSpec::new(exponents, BTreeMap::new(), false)
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[i32] {
        &self.exponents
    }

    pub fn even_only(&self) -> bool {
        self.even_only
    }

    pub fn slots(&self) -> &BTreeMap<Slot, RatFun> {
        &self.slots
    }

    pub fn get(&self, slot: &Slot) -> RatFun {
        self.slots.get(slot).cloned().unwrap_or_default()
    }

    pub fn height(&self) -> u32 {
        height(&self.exponents)
    }

    /// True if every slot sits in the big-cell chart (`grade > i`).
    pub fn in_big_cell_chart(&self) -> bool {
        self.slots.keys().all(|s| s.grade(&self.exponents) > s.i as i32)
    }

    /// True if only `λ⁰` slots are present.
    pub fn is_s1_invariant(&self) -> bool {
        self.slots.keys().all(|s| s.i == 0)
    }

    /// `C` as a loop in `λ`.
    pub fn c_loop(&self) -> ExactLoop {
        let n = self.n();
        let top = self.slots.keys().map(|s| s.i).max();
        let Some(top) = top else { return LoopMat::zero(n) };
        let mut coeffs: Vec<Mat<RatFun>> = (0..=top).map(|_| Mat::zeros(n, n)).collect();
        for (s, f) in &self.slots {
            coeffs[s.i as usize][(s.a, s.b)] = f.clone();
        }
        LoopMat::new(n, 0, coeffs).expect("square coefficients")
    }

    /// `C_0`.
    pub fn c0(&self) -> Mat<RatFun> {
        self.c_loop().coeff(0)
    }

    /// `A = exp C`, polynomial in `λ`.
    pub fn frame(&self) -> ExactLoop {
        exp_loop(&self.c_loop()).expect("strictly upper triangular data is nilpotent")
    }

    pub fn gamma(&self) -> ExactLoop {
        LoopMat::gamma(&self.exponents)
    }

    /// `Φ = exp C · γ`.
    pub fn assemble_loop(&self) -> ExactLoop {
        self.frame().multiply(&self.gamma()).expect("same size")
    }

    /// `Φ · Φ(1)⁻¹`; `Φ(1) = A(1)` is unipotent.
    pub fn based_loop(&self) -> ExactLoop {
        let a1 = self.frame().eval_at(&RatFun::one()).expect("λ = 1 is in the domain");
        let inv = a1.inverse().expect("unipotent");
        self.assemble_loop().right_mul(&inv)
    }

    /// Same `C`, new exponents.
    pub fn with_exponents(&self, exponents: Vec<i32>) -> Result<Self, BuildError> {
        if exponents.len() != self.n() {
            return Err(BuildError::InvalidExponents(exponents));
        }
        ExtendedSolutionSpec::new(exponents, self.slots.clone(), self.even_only)
    }

    /// Keeps only the `λ⁰` slots.
    pub fn s1_part(&self) -> Self {
        ExtendedSolutionSpec {
            exponents: self.exponents.clone(),
            slots: self.slots.iter().filter(|(s, _)| s.i == 0).map(|(s, f)| (*s, f.clone())).collect(),
            even_only: self.even_only,
        }
    }

    /// A copy with one slot replaced.
    pub fn with_slot(&self, slot: Slot, value: RatFun) -> Result<Self, BuildError> {
        let mut slots = self.slots.clone();
        slots.insert(slot, value);
        ExtendedSolutionSpec::new(self.exponents.clone(), slots, self.even_only)
    }
}

impl fmt::Display for ExtendedSolutionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "exponents {:?}{}", self.exponents, if self.even_only { " (even)" } else { "" })?;
        for (s, v) in &self.slots {
            writeln!(f, "  {} = {}", s.name(&self.exponents), v)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slot_names_round_trip() {
        let k = [3, 2, 1, 0];
        let s = Slot::new(1, 0, 3);
        assert_eq!(s.name(&k), "c3_1[1,4]");
        assert_eq!(Slot::parse("c3_1[1,4]", &k).unwrap(), s);
        assert!(Slot::parse("c2_1[1,4]", &k).is_err());
        assert!(Slot::parse("c3_1[0,4]", &k).is_err());
    }

    #[test]
    fn slot_counts_for_full_flag() {
        let k = [3, 2, 1, 0];
        assert_eq!(big_cell_slots(&k).len(), 10);
        assert_eq!(free_slots(&k, false).len(), 6);
        assert_eq!(free_slots(&k, true).len(), 4);
    }

    #[test]
    fn zero_data_assembles_to_gamma() {
        let spec = ExtendedSolutionSpec::trivial(alloc::vec![2, 1, 0]).unwrap();
        assert_eq!(spec.assemble_loop(), LoopMat::gamma(&[2, 1, 0]));
    }

    #[test]
    fn u2_assembly() {
        let alpha = RatFun::z();
        let mut slots = BTreeMap::new();
        slots.insert(Slot::new(0, 0, 1), alpha.clone());
        let spec = ExtendedSolutionSpec::new(alloc::vec![1, 0], slots, false).unwrap();
        let l = spec.assemble_loop();
        // [[λ, α], [0, 1]]
        assert_eq!(l.lo(), 0);
        assert_eq!(l.coeff(0), Mat::from_fn(2, 2, |i, j| match (i, j) { (0, 1) => alpha.clone(), (1, 1) => RatFun::one(), _ => RatFun::zero() }));
        assert_eq!(l.coeff(1), Mat::from_fn(2, 2, |i, j| if i == 0 && j == 0 { RatFun::one() } else { RatFun::zero() }));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(validate_exponents(&[0, 1]).is_err());
        assert!(validate_exponents(&[2, 1]).is_err());
        let mut slots = BTreeMap::new();
        slots.insert(Slot::new(1, 0, 2), RatFun::z());
        assert!(matches!(
            ExtendedSolutionSpec::new(alloc::vec![2, 1, 0], slots, true),
            Err(BuildError::OddSlotData(_))
        ));
    }
}
