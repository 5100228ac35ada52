use num::Zero;
use rand::Rng;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::instances::Descriptor;
use crate::norm::{Arithmetic, NormScalar};
use crate::ring::{BanachRing, NormedGroup, RealAlgebra, Sample};

/// `C(X; A)` for a finite grid `X` with the supremum norm.
///
/// For an infinite `X` this is only a sampling proxy; its norm is a lower
/// bound for the true supremum norm.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunctionAlgebra<R> {
    grid: Vec<f64>,
    inner: R,
}

impl<R: BanachRing> SampledFunctionAlgebra<R> {
    pub fn new(grid: Vec<f64>, inner: R) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::Descriptor("grid must be nonempty".into()));
        }
        Ok(Self { grid, inner })
    }

    /// The points `m / 2^level`, indexing `{0,1}^level` in binary.
    pub fn dyadic(level: u32, inner: R) -> Self {
        let size = 1usize << level;
        let grid = (0..size).map(|m| m as f64 / size as f64).collect();
        Self { grid, inner }
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn inner(&self) -> &R {
        &self.inner
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn from_fn(&self, f: impl Fn(f64) -> R::Elem) -> Vec<R::Elem> {
        self.grid.iter().map(|&x| f(x)).collect()
    }
}

impl<R: BanachRing> NormedGroup for SampledFunctionAlgebra<R> {
    type Elem = Vec<R::Elem>;
    type Norm = R::Norm;

    fn zero(&self) -> Vec<R::Elem> {
        vec![self.inner.zero(); self.grid.len()]
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
        x.iter()
            .map(|a| self.inner.norm(a))
            .fold(R::Norm::zero(), NormScalar::max_of)
    }

    fn arithmetic(&self) -> Arithmetic {
        self.inner.arithmetic()
    }

    fn descriptor(&self) -> Descriptor {
        Descriptor::Sampled {
            grid: self.grid.clone(),
            inner: Box::new(self.inner.descriptor()),
        }
    }

    fn elem_to_json(&self, x: &Vec<R::Elem>) -> Value {
        Value::Array(x.iter().map(|a| self.inner.elem_to_json(a)).collect())
    }

    fn elem_from_json(&self, v: &Value) -> Result<Vec<R::Elem>> {
        let items = v
            .as_array()
            .filter(|a| a.len() == self.grid.len())
            .ok_or_else(|| Error::Element(format!("expected {} samples", self.grid.len())))?;
        items.iter().map(|a| self.inner.elem_from_json(a)).collect()
    }
}

impl<R: BanachRing> BanachRing for SampledFunctionAlgebra<R> {
    fn one(&self) -> Vec<R::Elem> {
        vec![self.inner.one(); self.grid.len()]
    }

    fn mul(&self, x: &Vec<R::Elem>, y: &Vec<R::Elem>) -> Vec<R::Elem> {
        x.iter().zip(y).map(|(a, b)| self.inner.mul(a, b)).collect()
    }
}

impl<R: RealAlgebra> RealAlgebra for SampledFunctionAlgebra<R> {
    fn scale(&self, x: &Vec<R::Elem>, c: f64) -> Vec<R::Elem> {
        x.iter().map(|a| self.inner.scale(a, c)).collect()
    }
}

impl<R: BanachRing + Sample> Sample for SampledFunctionAlgebra<R> {
    fn sample<G: Rng + ?Sized>(&self, rng: &mut G) -> Vec<R::Elem> {
        self.grid.iter().map(|_| self.inner.sample(rng)).collect()
    }
}

#[cfg(test)]
mod tests {
    use num::complex::Complex64;

    use super::*;
    use crate::instances::ComplexScalars;

    #[test]
    fn sup_norm_and_pointwise_ops() {
        let s = SampledFunctionAlgebra::new(vec![0.0, 0.5, 1.0], ComplexScalars).unwrap();
        let x = s.from_fn(|t| Complex64::new(t, 0.0));
        assert_eq!(s.norm(&x), 1.0);
        let sq = s.mul(&x, &x);
        assert_eq!(sq[1], Complex64::new(0.25, 0.0));
        assert_eq!(s.norm(&s.one()), 1.0);
    }

    #[test]
    fn dyadic_grid() {
        let s = SampledFunctionAlgebra::dyadic(3, ComplexScalars);
        assert_eq!(s.len(), 8);
        assert_eq!(s.grid()[5], 5.0 / 8.0);
        assert!(SampledFunctionAlgebra::new(vec![], ComplexScalars).is_err());
    }
}
