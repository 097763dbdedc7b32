//! Dense matrices over a [`Scalar`].

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::scalar::{Scalar, ToComplex};

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

/// Complex matrices, the numeric workhorse.
pub type CMat = Mat<Complex64>;

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// `None` if the data length does not match.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<S>) -> Option<Self> {
        (data.len() == rows * cols).then_some(Mat { rows, cols, data })
    }

    pub fn diagonal(d: &[S]) -> Self {
        let n = d.len();
        Mat::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { S::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| if i == j { self[(i, j)].is_one() } else { self[(i, j)].is_zero() }))
    }

    pub fn map<T>(&self, f: impl FnMut(&S) -> T) -> Mat<T> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<T, E>(&self, f: impl FnMut(&S) -> Result<T, E>) -> Result<Mat<T>, E> {
        Ok(Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_, _>>()? })
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| x.clone() * c)
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Conjugate transpose, when every entry can be conjugated.
    pub fn adjoint(&self) -> Option<Self> {
        let mut data = Vec::with_capacity(self.data.len());
        for i in 0..self.cols {
            for j in 0..self.rows {
                data.push(self[(j, i)].conj()?);
            }
        }
        Some(Mat { rows: self.cols, cols: self.rows, data })
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + &self[(i, i)])
    }

    /// `[self, rhs] = self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        &(self * rhs) - &(rhs * self)
    }

    /// Index of the pivot in column `col` among rows `from..`.
    fn pivot(&self, col: usize, from: usize) -> Option<usize> {
        if S::EXACT {
            (from..self.rows).find(|&r| !self[(r, col)].is_zero())
        } else {
            (from..self.rows)
                .filter(|&r| !self[(r, col)].is_zero())
                .max_by(|&a, &b| self[(a, col)].magnitude().total_cmp(&self[(b, col)].magnitude()))
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> S {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = S::one();
        for c in 0..n {
            let Some(p) = m.pivot(c, c) else { return S::zero() };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            let inv = piv.inv().expect("nonzero pivot");
            det = det * &piv;
            for r in c + 1..n {
                if m[(r, c)].is_zero() {
                    continue;
                }
                let f = m[(r, c)].clone() * &inv;
                for k in c..n {
                    let t = f.clone() * &m[(c, k)];
                    m[(r, k)] = m[(r, k)].clone() - t;
                }
            }
        }
        det
    }

    /// Solves `self·X = rhs`; `None` if singular.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert!(self.is_square() && rhs.rows == self.rows, "shape mismatch in solve");
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for c in 0..n {
            let p = a.pivot(c, c)?;
            a.swap_rows(p, c);
            b.swap_rows(p, c);
            let inv = a[(c, c)].inv()?;
            for k in c..n {
                a[(c, k)] = a[(c, k)].clone() * &inv;
            }
            for k in 0..b.cols {
                b[(c, k)] = b[(c, k)].clone() * &inv;
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for k in c..n {
                    let t = f.clone() * &a[(c, k)];
                    a[(r, k)] = a[(r, k)].clone() - t;
                }
                for k in 0..b.cols {
                    let t = f.clone() * &b[(c, k)];
                    b[(r, k)] = b[(r, k)].clone() - t;
                }
            }
        }
        Some(b)
    }

    pub fn inverse(&self) -> Option<Self> {
        self.solve(&Mat::identity(self.rows))
    }

    /// Square-root of the sum of squared entry magnitudes.
    pub fn frobenius(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|x| x.magnitude() * x.magnitude()).sum())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Mat::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }
}

impl<S: Scalar + ToComplex> Mat<S> {
    /// Numeric value, substituting `z` where needed.
    pub fn to_complex(&self, z: Option<Complex64>) -> Option<CMat> {
        let data = self.data.iter().map(|x| x.to_complex(z)).collect::<Option<Vec<_>>>()?;
        Some(Mat { rows: self.rows, cols: self.cols, data })
    }
}

impl CMat {
    /// Lower-triangular Cholesky factor of a Hermitian positive-definite matrix.
    pub fn cholesky(&self) -> Option<CMat> {
        let n = self.rows;
        let mut l = CMat::zeros(n, n);
        for j in 0..n {
            let mut d = self[(j, j)].re;
            for k in 0..j {
                d -= l[(j, k)].norm_sqr();
            }
            if d.is_nan() || d <= 0.0 {
                return None;
            }
            let d = libm::sqrt(d);
            l[(j, j)] = Complex64::new(d, 0.0);
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / d;
            }
        }
        Some(l)
    }

    pub fn adjoint_c(&self) -> CMat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Frobenius distance to `rhs`.
    pub fn dist(&self, rhs: &CMat) -> f64 {
        (self - rhs).frobenius()
    }

    /// `‖U*U − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        (&(&self.adjoint_c() * self) - &CMat::identity(self.rows)).frobenius()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.re.is_finite() && x.im.is_finite())
    }
}

impl<S> Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Add for &Mat<S> {
    type Output = Mat<S>;
    fn add(self, rhs: &Mat<S>) -> Mat<S> {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch in add");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b).collect(),
        }
    }
}

impl<S: Scalar> Sub for &Mat<S> {
    type Output = Mat<S>;
    fn sub(self, rhs: &Mat<S>) -> Mat<S> {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch in sub");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b).collect(),
        }
    }
}

impl<S: Scalar> Mul for &Mat<S> {
    type Output = Mat<S>;
    fn mul(self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let mut out: Mat<S> = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b;
                }
            }
        }
        out
    }
}

impl<S: Scalar> Add for Mat<S> {
    type Output = Mat<S>;
    fn add(self, rhs: Mat<S>) -> Mat<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for Mat<S> {
    type Output = Mat<S>;
    fn sub(self, rhs: Mat<S>) -> Mat<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Mul for Mat<S> {
    type Output = Mat<S>;
    fn mul(self, rhs: Mat<S>) -> Mat<S> {
        &self * &rhs
    }
}

impl<S: Scalar> Neg for Mat<S> {
    type Output = Mat<S>;
    fn neg(self) -> Mat<S> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.into_iter().map(|x| -x).collect() }
    }
}
