use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{Scalar, ToComplex};

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
///
/// The zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<K> {
    coeffs: Vec<K>,
}

impl<K: Scalar> Default for Poly<K> {
    fn default() -> Self {
        Poly::zero()
    }
}

impl<K: Scalar> Poly<K> {
    pub fn new(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(K::one())
    }

    pub fn constant(c: K) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c·x^k`.
    pub fn monomial(c: K, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![K::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly::monomial(K::one(), 1)
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<K> {
        self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> K {
        self.coeffs.get(k).cloned().unwrap_or_else(K::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&K> {
        self.coeffs.last()
    }

    /// Lowest power with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_monomial(&self) -> bool {
        match (self.valuation(), self.degree()) {
            (Some(v), Some(d)) => v == d,
            _ => false,
        }
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![K::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn monic(&self) -> Self {
        match self.leading().and_then(|l| l.inv()) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * K::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = K::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Euclidean division; `None` when `rhs` is zero or its leading
    /// coefficient is not invertible.
    pub fn div_rem(&self, rhs: &Self) -> Option<(Self, Self)> {
        let lead_inv = rhs.leading()?.inv()?;
        let dr = rhs.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dr {
            return Some((Poly::zero(), self.clone()));
        }
        let mut quot = vec![K::zero(); rem.len() - dr];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dr].clone() * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, r) in rhs.coeffs.iter().enumerate() {
                let t = c.clone() * r;
                rem[k + j] = rem[k + j].clone() - t;
            }
            quot[k] = c;
        }
        rem.truncate(dr);
        Some((Poly::new(quot), Poly::new(rem)))
    }

    /// Exact division, `None` if the remainder is nonzero.
    pub fn div_exact(&self, rhs: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(rhs)?;
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor over a field");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Extended Euclid: `(g, s, t)` with `s·self + t·rhs = g`, `g` monic.
    pub fn xgcd(&self, rhs: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), rhs.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor over a field");
            r0 = core::mem::replace(&mut r1, r);
            let s = s0 - &(&q * &s1);
            s0 = core::mem::replace(&mut s1, s);
            let t = t0 - &(&q * &t1);
            t0 = core::mem::replace(&mut t1, t);
        }
        match r0.leading().and_then(|l| l.inv()) {
            Some(inv) => (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)),
            None => (r0, s0, t0),
        }
    }

    /// Solve `s·a + t·b = c` with `deg s < deg b` (requires `gcd(a, b) | c`).
    pub fn diophantine(a: &Self, b: &Self, c: &Self) -> Option<(Self, Self)> {
        if b.is_constant() {
            return Some((Poly::zero(), c.scale(&b.leading()?.inv()?)));
        }
        let (g, s, t) = a.xgcd(b);
        let q = c.div_exact(&g)?;
        let (s, t) = (&s * &q, &t * &q);
        let (k, s_red) = s.div_rem(b)?;
        let t = t + &(&k * a);
        Some((s_red, t))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl<K: Scalar + ToComplex> Poly<K> {
    pub fn eval_complex(&self, z: Complex64) -> Option<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_complex(Some(z))?;
        }
        Some(acc)
    }
}

fn add_coeffs<K: Scalar>(a: &[K], b: &[K], negate_b: bool) -> Vec<K> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| {
            let x = a.get(k).cloned().unwrap_or_else(K::zero);
            match b.get(k) {
                Some(y) if negate_b => x - y,
                Some(y) => x + y,
                None => x,
            }
        })
        .collect()
}

impl<K: Scalar> Add<&Poly<K>> for Poly<K> {
    type Output = Poly<K>;
    fn add(self, rhs: &Poly<K>) -> Poly<K> {
        Poly::new(add_coeffs(&self.coeffs, &rhs.coeffs, false))
    }
}

impl<K: Scalar> Add for Poly<K> {
    type Output = Poly<K>;
    fn add(self, rhs: Poly<K>) -> Poly<K> {
        self + &rhs
    }
}

impl<K: Scalar> Add for &Poly<K> {
    type Output = Poly<K>;
    fn add(self, rhs: &Poly<K>) -> Poly<K> {
        Poly::new(add_coeffs(&self.coeffs, &rhs.coeffs, false))
    }
}

impl<K: Scalar> Sub<&Poly<K>> for Poly<K> {
    type Output = Poly<K>;
    fn sub(self, rhs: &Poly<K>) -> Poly<K> {
        Poly::new(add_coeffs(&self.coeffs, &rhs.coeffs, true))
    }
}

impl<K: Scalar> Sub for Poly<K> {
    type Output = Poly<K>;
    fn sub(self, rhs: Poly<K>) -> Poly<K> {
        self - &rhs
    }
}

impl<K: Scalar> Sub for &Poly<K> {
    type Output = Poly<K>;
    fn sub(self, rhs: &Poly<K>) -> Poly<K> {
        Poly::new(add_coeffs(&self.coeffs, &rhs.coeffs, true))
    }
}

impl<K: Scalar> Mul for &Poly<K> {
    type Output = Poly<K>;
    fn mul(self, rhs: &Poly<K>) -> Poly<K> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![K::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b;
            }
        }
        Poly::new(out)
    }
}

impl<K: Scalar> Mul<&Poly<K>> for Poly<K> {
    type Output = Poly<K>;
    fn mul(self, rhs: &Poly<K>) -> Poly<K> {
        &self * rhs
    }
}

impl<K: Scalar> Mul for Poly<K> {
    type Output = Poly<K>;
    fn mul(self, rhs: Poly<K>) -> Poly<K> {
        &self * &rhs
    }
}

impl<K: Scalar> Neg for Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        Poly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}
