//! Matrix-valued Laurent polynomials in the loop parameter `λ`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::matrix::{CMat, Mat};
use crate::scalar::{GaussianRational, Poly, RatFun, Scalar, ToComplex};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum LoopError {
    #[error("matrix sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("coefficients depend on z; evaluate at a numeric z first")]
    ExactKindUnsupported,
    #[error("z is a pole of the loop coefficients")]
    PoleAtZ,
    #[error("λ = 0 is not on the loop domain")]
    ZeroLambda,
    #[error("loop is singular at λ = −1")]
    SingularAtMinusOne,
    #[error("determinant is not a nonzero monomial in λ")]
    NotInvertibleLoop,
}

/// Relative threshold below which numeric coefficients are dropped.
pub const NUMERIC_TRIM: f64 = 1e-12;

/// `Σ_{k=lo}^{hi} λ^k A_k` with `n×n` coefficients `A_k`.
///
/// Trimmed: the extreme coefficients are nonzero. The zero loop has no
/// coefficients and `lo = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopMat<S> {
    n: usize,
    lo: i32,
    coeffs: Vec<Mat<S>>,
}

/// Exact loops with rational-function coefficients.
pub type ExactLoop = LoopMat<RatFun>;
/// Numeric loops.
pub type NumLoop = LoopMat<Complex64>;

fn negligible<S: Scalar>(m: &Mat<S>, max_norm: f64) -> bool {
    if S::EXACT {
        m.is_zero()
    } else {
        m.frobenius() <= NUMERIC_TRIM * max_norm
    }
}

impl<S: Scalar> LoopMat<S> {
    /// Builds and trims; every coefficient must be `n×n`.
    pub fn new(n: usize, lo: i32, coeffs: Vec<Mat<S>>) -> Result<Self, LoopError> {
        for c in &coeffs {
            if c.rows() != n || c.cols() != n {
                return Err(LoopError::SizeMismatch(n, c.rows().max(c.cols())));
            }
        }
        Ok(LoopMat { n, lo, coeffs }.trimmed())
    }

    fn trimmed(mut self) -> Self {
        let max_norm = if S::EXACT { 0.0 } else { self.coeffs.iter().map(|c| c.frobenius()).fold(0.0, f64::max) };
        while self.coeffs.last().is_some_and(|c| negligible(c, max_norm)) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| negligible(c, max_norm)).count();
        self.coeffs.drain(..lead);
        self.lo = if self.coeffs.is_empty() { 0 } else { self.lo + lead as i32 };
        self
    }

    pub fn zero(n: usize) -> Self {
        LoopMat { n, lo: 0, coeffs: Vec::new() }
    }

    pub fn constant(m: Mat<S>) -> Self {
        let n = m.rows();
        LoopMat::monomial(m, 0).unwrap_or_else(|_| LoopMat::zero(n))
    }

    /// `λ^k M`.
    pub fn monomial(m: Mat<S>, k: i32) -> Result<Self, LoopError> {
        let n = m.rows();
        LoopMat::new(n, k, vec![m])
    }

    pub fn identity(n: usize) -> Self {
        LoopMat::constant(Mat::identity(n))
    }

    /// `γ = diag(λ^{k_1}, …, λ^{k_n})`.
    pub fn gamma(exponents: &[i32]) -> Self {
        let n = exponents.len();
        if n == 0 {
            return LoopMat::zero(0);
        }
        let lo = *exponents.iter().min().unwrap();
        let hi = *exponents.iter().max().unwrap();
        let coeffs = (lo..=hi)
            .map(|k| Mat::from_fn(n, n, |i, j| if i == j && exponents[i] == k { S::one() } else { S::zero() }))
            .collect();
        LoopMat { n, lo, coeffs }.trimmed()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Highest power; equals `lo − 1` for the zero loop.
    pub fn hi(&self) -> i32 {
        self.lo + self.coeffs.len() as i32 - 1
    }

    pub fn coeffs(&self) -> &[Mat<S>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `λ^k` (zero outside the stored range).
    pub fn coeff(&self, k: i32) -> Mat<S> {
        let idx = k - self.lo;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Mat::zeros(self.n, self.n)
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    fn check_size(&self, rhs: &Self) -> Result<(), LoopError> {
        if self.n != rhs.n {
            Err(LoopError::SizeMismatch(self.n, rhs.n))
        } else {
            Ok(())
        }
    }

    /// Cauchy product of the coefficient sequences.
    pub fn multiply(&self, rhs: &Self) -> Result<Self, LoopError> {
        self.check_size(rhs)?;
        if self.is_zero() || rhs.is_zero() {
            return Ok(LoopMat::zero(self.n));
        }
        let len = self.coeffs.len() + rhs.coeffs.len() - 1;
        let mut out = vec![Mat::zeros(self.n, self.n); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Ok(LoopMat { n: self.n, lo: self.lo + rhs.lo, coeffs: out }.trimmed())
    }

    fn combine(&self, rhs: &Self, negate: bool) -> Result<Self, LoopError> {
        self.check_size(rhs)?;
        if self.is_zero() {
            return Ok(if negate { rhs.map_coeffs(|c| -c.clone()) } else { rhs.clone() });
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        let lo = self.lo.min(rhs.lo);
        let hi = self.hi().max(rhs.hi());
        let coeffs = (lo..=hi)
            .map(|k| if negate { &self.coeff(k) - &rhs.coeff(k) } else { &self.coeff(k) + &rhs.coeff(k) })
            .collect();
        Ok(LoopMat { n: self.n, lo, coeffs }.trimmed())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, LoopError> {
        self.combine(rhs, false)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, LoopError> {
        self.combine(rhs, true)
    }

    /// `λ^k · L`.
    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LoopMat { n: self.n, lo: self.lo + k, coeffs: self.coeffs.clone() }
    }

    /// Left multiplication by a constant matrix.
    pub fn left_mul(&self, m: &Mat<S>) -> Self {
        self.map_coeffs(|c| m * c)
    }

    /// Right multiplication by a constant matrix.
    pub fn right_mul(&self, m: &Mat<S>) -> Self {
        self.map_coeffs(|c| c * m)
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&Mat<S>) -> Mat<S>) -> Self {
        LoopMat { n: self.n, lo: self.lo, coeffs: self.coeffs.iter().map(&mut f).collect() }.trimmed()
    }

    /// Coefficientwise conversion to another scalar kind.
    pub fn convert<T: Scalar, E>(&self, mut f: impl FnMut(&S) -> Result<T, E>) -> Result<LoopMat<T>, E> {
        let coeffs = self.coeffs.iter().map(|c| c.try_map(&mut f)).collect::<Result<Vec<_>, E>>()?;
        Ok(LoopMat { n: self.n, lo: self.lo, coeffs }.trimmed())
    }

    /// Exact value at a scalar `λ0`.
    pub fn eval_at(&self, lambda: &S) -> Result<Mat<S>, LoopError> {
        let inv = if self.lo < 0 { Some(lambda.inv().ok_or(LoopError::ZeroLambda)?) } else { None };
        let pow = |k: i32| -> S {
            let (base, e) = if k < 0 { (inv.clone().unwrap(), (-k) as u32) } else { (lambda.clone(), k as u32) };
            (0..e).fold(S::one(), |acc, _| acc * &base)
        };
        let mut out = Mat::zeros(self.n, self.n);
        for (idx, c) in self.coeffs.iter().enumerate() {
            out = &out + &c.scale(&pow(self.lo + idx as i32));
        }
        Ok(out)
    }

    /// `L~(λ) = L(1/λ̄)*`: coefficient `A_k` becomes `A_k*` at power `−k`.
    pub fn circle_adjoint(&self) -> Result<Self, LoopError> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in self.coeffs.iter().rev() {
            coeffs.push(c.adjoint().ok_or(LoopError::ExactKindUnsupported)?);
        }
        Ok(LoopMat { n: self.n, lo: -self.hi(), coeffs }.trimmed())
    }

    /// `L(−λ)`.
    pub fn negate_lambda(&self) -> Self {
        let lo = self.lo;
        LoopMat {
            n: self.n,
            lo,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if (lo + i as i32).rem_euclid(2) == 1 { -c.clone() } else { c.clone() })
                .collect(),
        }
    }

    /// `T(L)(λ) = L(−λ)·L(−1)⁻¹`.
    pub fn twist_t(&self) -> Result<Self, LoopError> {
        let at_minus_one = self.eval_at(&-S::one())?;
        let inv = at_minus_one.inverse().ok_or(LoopError::SingularAtMinusOne)?;
        if !S::EXACT {
            let scale = at_minus_one.frobenius().max(1.0);
            if (&(&at_minus_one * &inv) - &Mat::identity(self.n)).frobenius() > 1e-8 * scale {
                return Err(LoopError::SingularAtMinusOne);
            }
        }
        Ok(self.negate_lambda().right_mul(&inv))
    }

    /// True if only even powers of `λ` occur.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(i, c)| (self.lo + i as i32) % 2 == 0 || c.is_zero())
    }

    /// Entries as polynomials after multiplying by `λ^{−lo}`.
    fn poly_entries(&self) -> Vec<Vec<Poly<S>>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| Poly::new(self.coeffs.iter().map(|c| c[(i, j)].clone()).collect()))
                    .collect()
            })
            .collect()
    }

    /// Determinant as `(λ-shift, polynomial)`: `det L = λ^{shift} · p(λ)`.
    pub fn det(&self) -> (i32, Poly<S>) {
        let entries = self.poly_entries();
        let idx: Vec<usize> = (0..self.n).collect();
        (self.lo * self.n as i32, poly_det(&entries, &idx, &idx))
    }

    /// `det L = c·λ^m`, returned as `(c, m)`.
    pub fn det_monomial(&self) -> Result<(S, i32), LoopError> {
        let (shift, p) = self.det();
        monomial_of(&p).map(|(c, k)| (c, shift + k as i32)).ok_or(LoopError::NotInvertibleLoop)
    }

    /// Laurent inverse `adj(L)/(c λ^m)`.
    pub fn inverse(&self) -> Result<Self, LoopError> {
        let (c, m) = self.det_monomial()?;
        let c_inv = c.inv().ok_or(LoopError::NotInvertibleLoop)?;
        let entries = self.poly_entries();
        let n = self.n;
        // Cofactor (j, i) goes to adj[(i, j)].
        let mut adj: Vec<Vec<Poly<S>>> = vec![vec![Poly::zero(); n]; n];
        let mut width = 0usize;
        for (i, row) in adj.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let mut p = poly_det(&entries, &rows, &cols);
                if (i + j) % 2 == 1 {
                    p = -p;
                }
                width = width.max(p.coeffs().len());
                *slot = p;
            }
        }
        // adj(λ^{-lo} L) = λ^{-(n-1) lo} adj(L).
        let adj_lo = self.lo * (n as i32 - 1);
        let coeffs = (0..width)
            .map(|k| Mat::from_fn(n, n, |i, j| adj[i][j].coeff(k) * &c_inv))
            .collect();
        Ok(LoopMat { n, lo: adj_lo - m, coeffs }.trimmed())
    }

    /// Width of `Ad(L): X ↦ L X L⁻¹` as a Laurent polynomial in `λ`.
    pub fn ad_width(&self) -> Result<u32, LoopError> {
        let inv = self.inverse()?;
        if self.is_zero() {
            return Err(LoopError::NotInvertibleLoop);
        }
        let lo = self.lo + inv.lo;
        let hi = self.hi() + inv.hi();
        // The operator coefficient T_s has entries Σ_{p+q=s} (L_p)_{ia} (M_q)_{bj}.
        let nonzero = |s: i32| -> bool {
            let terms: Vec<(Mat<S>, Mat<S>)> =
                (self.lo..=self.hi()).filter_map(|p| {
                    let q = s - p;
                    (q >= inv.lo && q <= inv.hi()).then(|| (self.coeff(p), inv.coeff(q)))
                })
                .collect();
            let n = self.n;
            let mut max_entry = 0.0f64;
            let mut entries = Vec::with_capacity(n * n * n * n);
            for i in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        for j in 0..n {
                            let mut acc = S::zero();
                            for (lp, mq) in &terms {
                                let x = &lp[(i, a)];
                                if x.is_zero() {
                                    continue;
                                }
                                acc = acc + x.clone() * &mq[(b, j)];
                            }
                            if S::EXACT {
                                if !acc.is_zero() {
                                    return true;
                                }
                            } else {
                                max_entry = max_entry.max(acc.magnitude());
                                entries.push(acc);
                            }
                        }
                    }
                }
            }
            if S::EXACT {
                return false;
            }
            let scale = self.coeffs.iter().map(|c| c.frobenius()).fold(0.0, f64::max)
                * inv.coeffs.iter().map(|c| c.frobenius()).fold(0.0, f64::max);
            max_entry > 1e-9 * scale.max(1e-300)
        };
        let mut width = 0u32;
        for s in (lo..=hi).rev() {
            if s <= 0 {
                break;
            }
            if nonzero(s) {
                width = width.max(s as u32);
                break;
            }
        }
        for s in lo..=hi {
            if s >= 0 {
                break;
            }
            if nonzero(s) {
                width = width.max((-s) as u32);
                break;
            }
        }
        Ok(width)
    }
}

impl<S: Scalar + ToComplex> LoopMat<S> {
    /// Numeric loop at a fixed `z` (or without `z` for constant coefficients).
    pub fn eval_z(&self, z: Option<Complex64>) -> Result<NumLoop, LoopError> {
        self.convert(|x| x.to_complex(z).ok_or(if z.is_some() { LoopError::PoleAtZ } else { LoopError::ExactKindUnsupported }))
    }

    /// Value at `(λ0, z0)`.
    pub fn evaluate(&self, lambda: Complex64, z: Option<Complex64>) -> Result<CMat, LoopError> {
        if lambda.norm() == 0.0 {
            return Err(LoopError::ZeroLambda);
        }
        self.eval_z(z)?.eval_at(&lambda)
    }
}

impl LoopMat<RatFun> {
    /// Exact specialization at a Gaussian-rational `z`.
    pub fn eval_z_exact(&self, z: &GaussianRational) -> Result<LoopMat<GaussianRational>, LoopError> {
        self.convert(|x| x.eval_exact(z).ok_or(LoopError::PoleAtZ))
    }

    /// Coefficientwise `z`-derivative.
    pub fn differentiate_z(&self) -> Self {
        self.map_coeffs(|c| c.map(|x| x.differentiate()))
    }
}

impl LoopMat<GaussianRational> {
    pub fn to_ratfun(&self) -> ExactLoop {
        self.convert::<_, core::convert::Infallible>(|x| Ok(RatFun::constant(x.clone()))).unwrap()
    }
}

impl NumLoop {
    /// `L(uλ)`.
    pub fn scale_lambda(&self, u: f64) -> Self {
        let lo = self.lo;
        LoopMat {
            n: self.n,
            lo,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.scale(&Complex64::new(libm::pow(u, (lo + i as i32) as f64), 0.0)))
                .collect(),
        }
        .trimmed()
    }

    /// `E = Σ_k k² ‖A_k‖²_F`.
    pub fn energy(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let k = (self.lo + i as i32) as f64;
                let f = c.frobenius();
                k * k * f * f
            })
            .sum()
    }

    /// Largest coefficientwise Frobenius distance.
    pub fn dist(&self, rhs: &Self) -> f64 {
        if self.n != rhs.n {
            return f64::INFINITY;
        }
        let lo = self.lo.min(rhs.lo);
        let hi = self.hi().max(rhs.hi());
        (lo..=hi).map(|k| self.coeff(k).dist(&rhs.coeff(k))).fold(0.0, f64::max)
    }

    /// `max_k ‖L(λ_k)~ L(λ_k) − I‖` over `samples` points of the unit circle.
    pub fn unitarity_defect(&self, samples: usize) -> f64 {
        circle_points(samples)
            .map(|l| self.eval_at(&l).map(|m| m.unitarity_defect()).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }
}

/// `samples` equally spaced points on the unit circle, starting off the
/// real axis so that neither `±1` is hit.
pub fn circle_points(samples: usize) -> impl Iterator<Item = Complex64> {
    (0..samples).map(move |k| {
        let t = 2.0 * core::f64::consts::PI * (k as f64 + 0.37) / samples as f64;
        Complex64::new(libm::cos(t), libm::sin(t))
    })
}

/// `Some((c, k))` if `p = c x^k` with `c ≠ 0`.
pub(crate) fn monomial_of<S: Scalar>(p: &Poly<S>) -> Option<(S, usize)> {
    if S::EXACT {
        return p.is_monomial().then(|| (p.leading().unwrap().clone(), p.degree().unwrap()));
    }
    let (k, c) = p
        .coeffs()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.magnitude().total_cmp(&b.1.magnitude()))?;
    let top = c.magnitude();
    if top == 0.0 {
        return None;
    }
    let rest = p.coeffs().iter().enumerate().filter(|&(j, _)| j != k).map(|(_, x)| x.magnitude()).fold(0.0, f64::max);
    (rest <= 1e-9 * top).then(|| (c.clone(), k))
}

/// Determinant of the minor on `rows × cols` by subset dynamic programming
/// (Laplace expansion without division).
pub(crate) fn poly_det<S: Scalar>(entries: &[Vec<Poly<S>>], rows: &[usize], cols: &[usize]) -> Poly<S> {
    let m = rows.len();
    if m == 0 {
        return Poly::one();
    }
    let full = 1usize << m;
    let mut dp: Vec<Poly<S>> = vec![Poly::zero(); full];
    dp[0] = Poly::one();
    for mask in 0..full {
        if dp[mask].is_zero() {
            continue;
        }
        let r = mask.count_ones() as usize;
        if r == m {
            continue;
        }
        let row = rows[r];
        for (jj, &col) in cols.iter().enumerate() {
            if mask & (1 << jj) != 0 {
                continue;
            }
            let e = &entries[row][col];
            if e.is_zero() {
                continue;
            }
            // Sign from the number of already-used columns to the right.
            let above = (mask >> (jj + 1)).count_ones();
            let term = &dp[mask] * e;
            let next = mask | (1 << jj);
            dp[next] = if above % 2 == 0 { &dp[next] + &term } else { &dp[next] - &term };
        }
    }
    dp[full - 1].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as G;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn gm(rows: &[&[i64]]) -> Mat<G> {
        Mat::from_fn(rows.len(), rows[0].len(), |i, j| G::from_integer(rows[i][j]))
    }

    fn diag_l1() -> LoopMat<G> {
        LoopMat::gamma(&[1, 0])
    }

    #[test]
    fn gamma_products() {
        let g = diag_l1();
        assert_eq!(g.multiply(&g).unwrap(), LoopMat::gamma(&[2, 0]));
        let id = LoopMat::identity(2);
        assert_eq!(id.multiply(&g).unwrap(), g);
    }

    #[test]
    fn circle_adjoint_of_gamma() {
        let g = diag_l1();
        let adj = g.circle_adjoint().unwrap();
        assert_eq!(adj, LoopMat::gamma(&[-1, 0]));
        assert_eq!(adj.circle_adjoint().unwrap(), g);
    }

    #[test]
    fn circle_adjoint_rejects_z_dependence() {
        let l = LoopMat::constant(Mat::from_fn(1, 1, |_, _| RatFun::z()));
        assert_eq!(l.circle_adjoint(), Err(LoopError::ExactKindUnsupported));
    }

    #[test]
    fn evaluate_gamma_at_minus_one() {
        let g: LoopMat<G> = LoopMat::gamma(&[3, 2, 1, 0]);
        let v = g.eval_at(&G::from_integer(-1)).unwrap();
        assert_eq!(v, Mat::diagonal(&[G::from_integer(-1), G::from_integer(1), G::from_integer(-1), G::from_integer(1)]));
    }

    #[test]
    fn evaluate_frame_loop() {
        // [[0,1],[1,z]]·diag(λ,1) at z = 2, λ = i.
        let frame = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) | (1, 0) => RatFun::one(),
            (1, 1) => RatFun::z(),
            _ => RatFun::zero(),
        });
        let l = LoopMat::constant(frame).multiply(&LoopMat::gamma(&[1, 0])).unwrap();
        let v = l.evaluate(c(0.0, 1.0), Some(c(2.0, 0.0))).unwrap();
        let want = CMat::from_rows(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0)]).unwrap();
        assert!(v.dist(&want) < 1e-15);
        assert_eq!(l.evaluate(c(0.0, 0.0), Some(c(2.0, 0.0))), Err(LoopError::ZeroLambda));
    }

    #[test]
    fn twist_examples() {
        let g: LoopMat<G> = LoopMat::gamma(&[2, 0]);
        assert_eq!(g.twist_t().unwrap(), g);
        let h = diag_l1();
        let t = h.twist_t().unwrap();
        // diag(−λ, 1)·diag(−1, 1)⁻¹ = diag(λ, 1)
        assert_eq!(t, h);
        assert_eq!(t.twist_t().unwrap(), h);
        let singular = LoopMat::new(1, 0, vec![gm(&[&[1]]), gm(&[&[1]])]).unwrap();
        assert_eq!(singular.twist_t(), Err(LoopError::SingularAtMinusOne));
    }

    #[test]
    fn projector_loop_identities() {
        // π = projection on (1,1)/√2, written with rationals: π = ½[[1,1],[1,1]].
        let half = G::from_ratio(1, 2);
        let pi = Mat::from_fn(2, 2, |_, _| half.clone());
        let perp = &Mat::identity(2) - &pi;
        let l = LoopMat::new(2, 0, vec![pi.clone(), perp.clone()]).unwrap();
        let adj = l.circle_adjoint().unwrap();
        assert_eq!(adj, LoopMat::new(2, -1, vec![perp.clone(), pi.clone()]).unwrap());
        assert_eq!(adj.multiply(&l).unwrap(), LoopMat::identity(2));
        // (p + λ⁻¹p^⊥)(π + λπ^⊥) with p = π has powers in {−1, 0, 1}.
        let prod = adj.multiply(&l).unwrap();
        assert!(prod.lo() >= -1 && prod.hi() <= 1);
    }

    #[test]
    fn inverse_and_width() {
        let half = G::from_ratio(1, 2);
        let pi = Mat::from_fn(2, 2, |_, _| half.clone());
        let perp = &Mat::identity(2) - &pi;
        let l = LoopMat::new(2, 0, vec![pi.clone(), perp.clone()]).unwrap();
        let inv = l.inverse().unwrap();
        assert_eq!(l.multiply(&inv).unwrap(), LoopMat::identity(2));
        assert_eq!(l.ad_width().unwrap(), 1);
        assert_eq!(LoopMat::<G>::identity(3).ad_width().unwrap(), 0);
        assert_eq!(LoopMat::<G>::identity(3).shift(4).ad_width().unwrap(), 0);
        assert_eq!(l.shift(-3).ad_width().unwrap(), 1);
        let bad = LoopMat::new(2, 0, vec![Mat::<G>::identity(2), Mat::identity(2)]).unwrap();
        assert_eq!(bad.inverse(), Err(LoopError::NotInvertibleLoop));
    }

    #[test]
    fn numeric_energy_of_gamma() {
        let g: NumLoop = LoopMat::<Complex64>::gamma(&[3, 1, 0]);
        assert!((g.energy() - 10.0).abs() < 1e-15);
        assert!(g.unitarity_defect(32) < 1e-14);
    }
}
