use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{Exact, GPoly, GaussianRational, Scalar, ToComplex};

/// A rational function `num(z)/den(z)` over the Gaussian rationals.
///
/// Always canonical: `den` is monic and coprime to `num`; zero is `0/1`.
/// Structural equality is therefore equality of functions.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFun {
    num: GPoly,
    den: GPoly,
}

impl Default for RatFun {
    fn default() -> Self {
        <RatFun as Scalar>::zero()
    }
}

impl RatFun {
    /// Builds `num/den` in canonical form; `None` if `den` is zero.
    pub fn new(num: GPoly, den: GPoly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RatFun::from_poly(GPoly::zero()));
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        };
        let lead = den.leading()?.inv()?;
        Some(RatFun { num: num.scale(&lead), den: den.scale(&lead) })
    }

    pub fn from_poly(p: GPoly) -> Self {
        RatFun { num: p, den: GPoly::one() }
    }

    pub fn constant(c: GaussianRational) -> Self {
        RatFun::from_poly(GPoly::constant(c))
    }

    /// The coordinate function `z`.
    pub fn z() -> Self {
        RatFun::from_poly(GPoly::x())
    }

    pub fn num(&self) -> &GPoly {
        &self.num
    }

    pub fn den(&self) -> &GPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_constant() && self.num.is_constant()
    }

    /// The value when constant.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn differentiate(&self) -> Self {
        if self.is_polynomial() {
            return RatFun::from_poly(self.num.derivative());
        }
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let den = &self.den * &self.den;
        RatFun::new(num, den).expect("nonzero denominator")
    }

    /// Exact value at a Gaussian-rational point, `None` at a pole.
    pub fn eval_exact(&self, z: &GaussianRational) -> Option<GaussianRational> {
        let d = self.den.eval(z);
        Scalar::div(&self.num.eval(z), &d)
    }

    /// Floating-point value at `z`, `None` at (or numerically on top of) a pole.
    pub fn eval_complex(&self, z: Complex64) -> Option<Complex64> {
        let n = self.num.eval_complex(z)?;
        if self.den.is_constant() {
            return Some(n);
        }
        let d = self.den.eval_complex(z)?;
        // Compare against the size of the terms that were summed.
        let scale: f64 = self
            .den
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c.to_c64().norm() * z.norm().powi(k as i32))
            .sum();
        if d.norm() <= 1e-13 * scale.max(1.0) {
            return None;
        }
        Some(n / d)
    }
}

impl Add<&RatFun> for RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.den == rhs.den {
            if self.den.is_constant() {
                return RatFun::from_poly(self.num + &rhs.num);
            }
            return RatFun::new(self.num + &rhs.num, self.den).expect("nonzero denominator");
        }
        // Work over lcm(d1, d2) to keep degrees down.
        let g = self.den.gcd(&rhs.den);
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        RatFun::new(num, &self.den * &d2).expect("nonzero denominator")
    }
}

impl Add for RatFun {
    type Output = RatFun;
    fn add(self, rhs: RatFun) -> RatFun {
        self + &rhs
    }
}

impl Sub<&RatFun> for RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs.clone())
    }
}

impl Sub for RatFun {
    type Output = RatFun;
    fn sub(self, rhs: RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Mul<&RatFun> for RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        if self.num.is_zero() || rhs.num.is_zero() {
            return <RatFun as Scalar>::zero();
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return RatFun::from_poly(&self.num * &rhs.num);
        }
        // Cross-cancel before multiplying to keep degrees small.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        RatFun::new(&n1 * &n2, &d1 * &d2).expect("nonzero denominator")
    }
}

impl Mul for RatFun {
    type Output = RatFun;
    fn mul(self, rhs: RatFun) -> RatFun {
        self * &rhs
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -self.num, den: self.den }
    }
}

impl Scalar for RatFun {
    const EXACT: bool = true;

    fn zero() -> Self {
        RatFun::from_poly(GPoly::zero())
    }
    fn one() -> Self {
        RatFun::from_poly(GPoly::one())
    }
    fn from_i64(n: i64) -> Self {
        RatFun::constant(GaussianRational::from_integer(n))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        RatFun::new(self.den.clone(), self.num.clone())
    }
    fn magnitude(&self) -> f64 {
        if self.num.is_zero() {
            0.0
        } else {
            1.0
        }
    }
    /// Only constants can be conjugated without leaving the field.
    fn conj(&self) -> Option<Self> {
        self.as_constant().map(|c| RatFun::constant(c.conjugate()))
    }
}

impl Exact for RatFun {}

impl ToComplex for RatFun {
    fn to_complex(&self, z: Option<Complex64>) -> Option<Complex64> {
        match z {
            Some(z) => self.eval_complex(z),
            None => self.as_constant().map(|c| c.to_c64()),
        }
    }
}

impl From<GaussianRational> for RatFun {
    fn from(c: GaussianRational) -> Self {
        RatFun::constant(c)
    }
}

impl From<GPoly> for RatFun {
    fn from(p: GPoly) -> Self {
        RatFun::from_poly(p)
    }
}

fn fmt_poly(p: &GPoly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    let mut first = true;
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if Scalar::is_zero(c) {
            continue;
        }
        if !first {
            f.write_str(" + ")?;
        }
        first = false;
        match k {
            0 => write!(f, "({c})")?,
            1 => write!(f, "({c})z")?,
            _ => write!(f, "({c})z^{k}")?,
        }
    }
    Ok(())
}

/// Human-readable form, e.g. `((1)z^2 + (-1)) / ((1)z)`.
impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            return fmt_poly(&self.num, f);
        }
        f.write_str("(")?;
        fmt_poly(&self.num, f)?;
        f.write_str(") / (")?;
        fmt_poly(&self.den, f)?;
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_integer(n)
    }

    fn poly(cs: &[i64]) -> GPoly {
        GPoly::new(cs.iter().map(|&c| g(c)).collect())
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFun {
        RatFun::new(poly(n), poly(d)).unwrap()
    }

    #[test]
    fn canonical_form_cancels_common_factors() {
        // (z^2 - 1) / (2z - 2) = (z + 1)/2
        let f = rf(&[-1, 0, 1], &[-2, 2]);
        assert_eq!(f.den(), &GPoly::one());
        assert_eq!(f.num(), &GPoly::new(vec![GaussianRational::from_ratio(1, 2); 2]));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(rf(&[0, 0, 1], &[1]).differentiate(), rf(&[0, 2], &[1]));
        assert_eq!(RatFun::one().differentiate(), RatFun::zero());
        // d/dz 1/(z-1) = -1/(z-1)^2
        assert_eq!(rf(&[1], &[-1, 1]).differentiate(), rf(&[-1], &[1, -2, 1]));
    }

    #[test]
    fn field_operations() {
        let f = rf(&[1, 2], &[3, 0, 1]);
        let h = rf(&[0, 1], &[-1, 1]);
        assert_eq!((f.clone() + &h) - &h, f);
        assert_eq!(f.clone() * &f.inv().unwrap(), RatFun::one());
        assert!(RatFun::zero().inv().is_none());
    }

    #[test]
    fn evaluation_detects_poles() {
        let f = rf(&[1], &[-1, 1]);
        assert!(f.eval_complex(Complex64::new(1.0, 0.0)).is_none());
        let v = f.eval_complex(Complex64::new(3.0, 0.0)).unwrap();
        assert!((v - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!(f.eval_exact(&g(1)).is_none());
        assert_eq!(f.eval_exact(&g(3)), Some(GaussianRational::from_ratio(1, 2)));
    }
}
