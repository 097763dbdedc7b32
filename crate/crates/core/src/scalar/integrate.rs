//! Antiderivatives of rational functions by Hermite reduction.
//!
//! Only rational antiderivatives are produced. After the reduction
//! `∫ f = g + ∫ a/d*` with `d*` squarefree and `deg a < deg d*`, the
//! integrand has a rational antiderivative exactly when `a = 0`.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use super::{GPoly, GaussianRational, RatFun, Scalar};

/// Result of Hermite reduction: `∫ f = rational + ∫ log_num/log_den`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteReduction {
    pub rational: RatFun,
    pub log_num: GPoly,
    /// Squarefree and monic.
    pub log_den: GPoly,
}

/// The integrand has a logarithmic part.
///
/// When a simple pole of the leftover part lies in `Q(i)`, it is reported
/// together with its (nonzero) residue; otherwise only the leftover
/// fraction `log_num/log_den` serves as the certificate.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub struct NonRationalAntiderivative {
    pub pole: Option<GaussianRational>,
    pub residue: Option<GaussianRational>,
    pub log_num: GPoly,
    pub log_den: GPoly,
}

impl fmt::Display for NonRationalAntiderivative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.pole, &self.residue) {
            (Some(p), Some(r)) => write!(f, "antiderivative is not rational: residue {r} at z = {p}"),
            _ => write!(
                f,
                "antiderivative is not rational: logarithmic part {}",
                RatFun::new(self.log_num.clone(), self.log_den.clone()).unwrap_or_default()
            ),
        }
    }
}

fn integrate_poly(p: &GPoly) -> GPoly {
    let mut coeffs = Vec::with_capacity(p.coeffs().len() + 1);
    coeffs.push(GaussianRational::zero());
    for (k, c) in p.coeffs().iter().enumerate() {
        coeffs.push(c.clone() * GaussianRational::from_ratio(1, k as i64 + 1));
    }
    GPoly::new(coeffs)
}

/// Hermite reduction (linear variant) of `f`.
pub fn hermite_reduce(f: &RatFun) -> HermiteReduction {
    let (q, mut a) = f.num().div_rem(f.den()).expect("monic denominator");
    let mut rational = RatFun::from_poly(integrate_poly(&q));
    let d = f.den().clone();
    if a.is_zero() || d.is_constant() {
        return HermiteReduction { rational, log_num: GPoly::zero(), log_den: GPoly::one() };
    }

    let mut d_minus = d.gcd(&d.derivative());
    let d_star = d.div_exact(&d_minus).expect("gcd divides");
    while !d_minus.is_constant() {
        let d_minus2 = d_minus.gcd(&d_minus.derivative());
        let d_minus_star = d_minus.div_exact(&d_minus2).expect("gcd divides");
        let coef = -(&d_star * &d_minus.derivative()).div_exact(&d_minus).expect("exact in Hermite step");
        let (b, c) = GPoly::diophantine(&coef, &d_minus_star, &a).expect("coprime moduli");
        let shifted = (&b.derivative() * &d_star).div_exact(&d_minus_star).expect("exact in Hermite step");
        a = c - &shifted;
        rational = rational + &RatFun::new(b, d_minus.clone()).expect("nonzero denominator");
        d_minus = d_minus2;
    }
    let (_, a) = a.div_rem(&d_star).expect("monic denominator");
    HermiteReduction { rational, log_num: a, log_den: d_star }
}

/// Rational antiderivative of `f` with zero integration constant
/// (the result has no constant polynomial term).
pub fn integrate_rational(f: &RatFun) -> Result<RatFun, NonRationalAntiderivative> {
    let red = hermite_reduce(f);
    if red.log_num.is_zero() {
        return Ok(red.rational);
    }
    let (pole, residue) = match find_nonzero_residue(&red.log_num, &red.log_den) {
        Some((p, r)) => (Some(p), Some(r)),
        None => (None, None),
    };
    Err(NonRationalAntiderivative { pole, residue, log_num: red.log_num, log_den: red.log_den })
}

/// Looks for a Gaussian-rational root `p` of the squarefree `den` at which
/// `num/den` has nonzero residue `num(p)/den'(p)`.
fn find_nonzero_residue(num: &GPoly, den: &GPoly) -> Option<(GaussianRational, GaussianRational)> {
    let dd = den.derivative();
    let coeffs: Vec<Complex64> = den.coeffs().iter().map(|c| c.to_c64()).collect();
    for root in durand_kerner(&coeffs)? {
        for max_den in [1i64, 10, 1_000, 1_000_000] {
            let Some(p) = GaussianRational::approximate(root, max_den) else { continue };
            if Scalar::is_zero(&den.eval(&p)) {
                let residue = Scalar::div(&num.eval(&p), &dd.eval(&p))?;
                if !Scalar::is_zero(&residue) {
                    return Some((p, residue));
                }
                break;
            }
        }
    }
    None
}

/// All complex roots of a polynomial given lowest degree first.
pub(crate) fn durand_kerner(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = coeffs.len().checked_sub(1)?;
    if n == 0 {
        return Some(Vec::new());
    }
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius.sqrt()).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let zi = roots[i];
            let mut denom = Complex64::new(1.0, 0.0);
            for (j, zj) in roots.iter().enumerate() {
                if j != i {
                    denom *= zi - zj;
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-12, 0.0);
            }
            let step = eval(zi) / denom;
            roots[i] = zi - step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    Some(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn power_rule() {
        assert_eq!(integrate_rational(&rf(&[0, 2], &[1])).unwrap(), rf(&[0, 0, 1], &[1]));
    }

    #[test]
    fn inverse_square() {
        // ∫ 1/(z-1)^2 = -1/(z-1)
        let f = rf(&[1], &[1, -2, 1]);
        assert_eq!(integrate_rational(&f).unwrap(), rf(&[-1], &[-1, 1]));
    }

    #[test]
    fn simple_pole_is_rejected_with_residue() {
        let err = integrate_rational(&rf(&[1], &[0, 1])).unwrap_err();
        assert_eq!(err.pole, Some(g(0)));
        assert_eq!(err.residue, Some(g(1)));
    }

    #[test]
    fn irreducible_denominator_gives_certificate() {
        // 1/(z^2 - 2) has irrational poles.
        let err = integrate_rational(&rf(&[1], &[-2, 0, 1])).unwrap_err();
        assert!(err.pole.is_none());
        assert_eq!(err.log_den, poly(&[-2, 0, 1]));
    }

    #[test]
    fn gaussian_pole_is_located() {
        // 1/(z^2 + 1) = (i/2)/(z+i) - (i/2)/(z-i)
        let err = integrate_rational(&rf(&[1], &[1, 0, 1])).unwrap_err();
        let p = err.pole.unwrap();
        assert!(p == GaussianRational::i() || p == -GaussianRational::i());
    }

    #[test]
    fn higher_order_poles_round_trip() {
        // d/dz of (z^2+1)/((z-2)^3 z^2)
        let h = RatFun::new(poly(&[1, 0, 1]), &poly(&[-8, 12, -6, 1]) * &poly(&[0, 0, 1])).unwrap();
        let f = h.differentiate();
        let back = integrate_rational(&f).unwrap();
        assert_eq!(back.differentiate(), f);
        assert_eq!(back, h);
    }
}
