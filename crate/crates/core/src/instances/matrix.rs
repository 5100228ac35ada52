use num::complex::Complex64;
use num::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::instances::{linalg, ComplexScalars, Descriptor};
use crate::norm::{Arithmetic, NormScalar};
use crate::ring::{BanachRing, NormedGroup, RealAlgebra, Sample};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixNorm {
    /// `max_k sum_j |a_jk|`: the operator norm on the l1 power `A^n`.
    #[default]
    ColL1,
    /// Largest singular value; complex scalars only.
    Spectral,
}

/// `Mat_n(A)`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixAlgebra<R> {
    inner: R,
    n: usize,
    norm_kind: MatrixNorm,
}

impl<R: BanachRing> MatrixAlgebra<R> {
    pub fn new(inner: R, n: usize, norm_kind: MatrixNorm) -> Result<Self> {
        if n == 0 {
            return Err(Error::Descriptor("matrix size must be positive".into()));
        }
        if norm_kind == MatrixNorm::Spectral
            && inner.matrix_spectral_norm(1, &[inner.one()]).is_none()
        {
            return Err(Error::Unsupported(
                "spectral norm is only available over complex scalars".into(),
            ));
        }
        Ok(Self {
            inner,
            n,
            norm_kind,
        })
    }

    pub fn col_l1(inner: R, n: usize) -> Result<Self> {
        Self::new(inner, n, MatrixNorm::ColL1)
    }

    pub fn inner(&self) -> &R {
        &self.inner
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn norm_kind(&self) -> MatrixNorm {
        self.norm_kind
    }

    pub fn entry<'a>(&self, x: &'a [R::Elem], i: usize, j: usize) -> &'a R::Elem {
        &x[i * self.n + j]
    }

    pub fn from_fn(&self, mut f: impl FnMut(usize, usize) -> R::Elem) -> Vec<R::Elem> {
        let n = self.n;
        (0..n * n).map(|k| f(k / n, k % n)).collect()
    }

    /// Matrix unit `E_jk` with entry `1_inner`.
    pub fn unit(&self, j: usize, k: usize) -> Vec<R::Elem> {
        self.from_fn(|a, b| {
            if (a, b) == (j, k) {
                self.inner.one()
            } else {
                self.inner.zero()
            }
        })
    }

    pub fn diag(&self, d: &[R::Elem]) -> Vec<R::Elem> {
        assert_eq!(d.len(), self.n, "diagonal length");
        self.from_fn(|i, j| if i == j { d[i].clone() } else { self.inner.zero() })
    }

    /// Same inner instance and norm, size `n`.
    pub fn resized(&self, n: usize) -> Result<Self>
    where
        R: Clone,
    {
        Self::new(self.inner.clone(), n, self.norm_kind)
    }

    /// `diag(x, y)` in `Mat_{m+n}`.
    pub fn block_diag(&self, x: &[R::Elem], other: &Self, y: &[R::Elem]) -> Vec<R::Elem> {
        let (m, n) = (self.n, other.n);
        let s = m + n;
        (0..s * s)
            .map(|k| {
                let (i, j) = (k / s, k % s);
                if i < m && j < m {
                    x[i * m + j].clone()
                } else if i >= m && j >= m {
                    y[(i - m) * n + (j - m)].clone()
                } else {
                    self.inner.zero()
                }
            })
            .collect()
    }

    /// The `(bi, bj)` block of size `b` of `x`.
    pub fn block(&self, x: &[R::Elem], b: usize, bi: usize, bj: usize) -> Vec<R::Elem> {
        (0..b * b)
            .map(|k| x[(bi * b + k / b) * self.n + bj * b + k % b].clone())
            .collect()
    }
}

impl MatrixAlgebra<ComplexScalars> {
    pub fn complex(n: usize) -> Result<Self> {
        Self::col_l1(ComplexScalars, n)
    }

    pub fn complex_spectral(n: usize) -> Result<Self> {
        Self::new(ComplexScalars, n, MatrixNorm::Spectral)
    }

    pub fn trace(&self, x: &[Complex64]) -> Complex64 {
        (0..self.n).map(|i| x[i * self.n + i]).sum()
    }

    pub fn real_diag(&self, d: &[f64]) -> Vec<Complex64> {
        let d: Vec<Complex64> = d.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.diag(&d)
    }

    pub fn inverse(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        linalg::inverse(self.n, x)
    }

    pub fn adjoint(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.from_fn(|i, j| x[j * self.n + i].conj())
    }
}

impl<R: BanachRing> NormedGroup for MatrixAlgebra<R> {
    type Elem = Vec<R::Elem>;
    type Norm = R::Norm;

    fn zero(&self) -> Vec<R::Elem> {
        vec![self.inner.zero(); self.n * self.n]
    }

    fn add(&self, x: &Vec<R::Elem>, y: &Vec<R::Elem>) -> Vec<R::Elem> {
        x.iter().zip(y).map(|(a, b)| self.inner.add(a, b)).collect()
    }

    fn neg(&self, x: &Vec<R::Elem>) -> Vec<R::Elem> {
        x.iter().map(|a| self.inner.neg(a)).collect()
    }

    fn sub(&self, x: &Vec<R::Elem>, y: &Vec<R::Elem>) -> Vec<R::Elem> {
        x.iter().zip(y).map(|(a, b)| self.inner.sub(a, b)).collect()
    }

    fn norm(&self, x: &Vec<R::Elem>) -> R::Norm {
        match self.norm_kind {
            MatrixNorm::ColL1 => {
                let n = self.n;
                (0..n)
                    .map(|k| {
                        (0..n).fold(R::Norm::zero(), |acc, j| {
                            acc + self.inner.norm(&x[j * n + k])
                        })
                    })
                    .fold(R::Norm::zero(), NormScalar::max_of)
            }
            MatrixNorm::Spectral => self
                .inner
                .matrix_spectral_norm(self.n, x)
                .expect("spectral norm checked at construction"),
        }
    }

    fn arithmetic(&self) -> Arithmetic {
        match self.norm_kind {
            MatrixNorm::ColL1 => self.inner.arithmetic(),
            MatrixNorm::Spectral => Arithmetic::Floating,
        }
    }

    fn descriptor(&self) -> Descriptor {
        Descriptor::Matrix {
            n: self.n,
            norm: self.norm_kind,
            inner: Box::new(self.inner.descriptor()),
        }
    }

    fn elem_to_json(&self, x: &Vec<R::Elem>) -> Value {
        Value::Array(
            x.chunks(self.n)
                .map(|row| Value::Array(row.iter().map(|a| self.inner.elem_to_json(a)).collect()))
                .collect(),
        )
    }

    fn elem_from_json(&self, v: &Value) -> Result<Vec<R::Elem>> {
        let rows = v
            .as_array()
            .filter(|r| r.len() == self.n)
            .ok_or_else(|| Error::Element(format!("expected {} rows", self.n)))?;
        let mut out = Vec::with_capacity(self.n * self.n);
        for row in rows {
            let row = row
                .as_array()
                .filter(|r| r.len() == self.n)
                .ok_or_else(|| Error::Element(format!("expected rows of length {}", self.n)))?;
            for a in row {
                out.push(self.inner.elem_from_json(a)?);
            }
        }
        Ok(out)
    }
}

impl<R: BanachRing> BanachRing for MatrixAlgebra<R> {
    fn one(&self) -> Vec<R::Elem> {
        self.from_fn(|i, j| if i == j { self.inner.one() } else { self.inner.zero() })
    }

    fn mul(&self, x: &Vec<R::Elem>, y: &Vec<R::Elem>) -> Vec<R::Elem> {
        let n = self.n;
        let mut out = vec![self.inner.zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let a = &x[i * n + j];
                if self.inner.norm(a).is_zero() {
                    continue;
                }
                for k in 0..n {
                    let p = self.inner.mul(a, &y[j * n + k]);
                    out[i * n + k] = self.inner.add(&out[i * n + k], &p);
                }
            }
        }
        out
    }
}

impl<R: RealAlgebra> RealAlgebra for MatrixAlgebra<R> {
    fn scale(&self, x: &Vec<R::Elem>, c: f64) -> Vec<R::Elem> {
        x.iter().map(|a| self.inner.scale(a, c)).collect()
    }
}

impl<R: BanachRing + Sample> Sample for MatrixAlgebra<R> {
    fn sample<G: Rng + ?Sized>(&self, rng: &mut G) -> Vec<R::Elem> {
        (0..self.n * self.n).map(|_| self.inner.sample(rng)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integers::ScaledIntegers;
    use num::One;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn col_l1_norm() {
        let m = MatrixAlgebra::complex(2).unwrap();
        let x = vec![c(1.0), c(-2.0), c(3.0), c(0.5)];
        // columns: |1|+|3| = 4, |-2|+|0.5| = 2.5
        assert_eq!(m.norm(&x), 4.0);
        assert_eq!(m.norm(&m.one()), 1.0);
    }

    #[test]
    fn unit_entries_have_inner_unit_norm() {
        let z = ScaledIntegers::from_ratio(1, 1).unwrap();
        let m = MatrixAlgebra::col_l1(z, 3).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                assert!(m.norm(&m.unit(j, k)).is_one());
            }
        }
        let prod = m.mul(&m.unit(0, 1), &m.unit(1, 2));
        assert_eq!(prod, m.unit(0, 2));
        assert_eq!(m.mul(&m.unit(0, 1), &m.unit(0, 2)), m.zero());
    }

    #[test]
    fn spectral_requires_complex() {
        let z = ScaledIntegers::from_ratio(1, 1).unwrap();
        assert!(MatrixAlgebra::new(z, 2, MatrixNorm::Spectral).is_err());
        let s = MatrixAlgebra::complex_spectral(2).unwrap();
        let x = vec![c(0.0), c(2.0), c(0.0), c(0.0)];
        assert!((s.norm(&x) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn block_diag_and_block() {
        let m1 = MatrixAlgebra::complex(1).unwrap();
        let m2 = MatrixAlgebra::complex(2).unwrap();
        let x = vec![c(5.0)];
        let y = vec![c(1.0), c(2.0), c(3.0), c(4.0)];
        let d = m1.block_diag(&x, &m2, &y);
        let m3 = MatrixAlgebra::complex(3).unwrap();
        assert_eq!(*m3.entry(&d, 0, 0), c(5.0));
        assert_eq!(*m3.entry(&d, 2, 1), c(3.0));
        assert_eq!(*m3.entry(&d, 0, 2), c(0.0));
        let m4 = MatrixAlgebra::complex(4).unwrap();
        let dd = m2.block_diag(&y, &m2, &y);
        assert_eq!(m4.block(&dd, 2, 1, 1), y);
        assert_eq!(m4.block(&dd, 2, 0, 1), m2.zero());
    }

    #[test]
    fn json_roundtrip() {
        let m = MatrixAlgebra::complex(2).unwrap();
        let x = vec![c(1.0), Complex64::new(0.0, 2.0), c(3.0), c(4.0)];
        let v = m.elem_to_json(&x);
        assert_eq!(m.elem_from_json(&v).unwrap(), x);
        assert!(m.elem_from_json(&serde_json::json!([[1, 2]])).is_err());
        let plain = serde_json::json!([[1, 0], [0, 1]]);
        assert_eq!(m.elem_from_json(&plain).unwrap(), m.one());
    }
}
