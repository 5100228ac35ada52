use num::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::instances::Descriptor;
use crate::norm::{Arithmetic, NormScalar};
use crate::ring::{BanachRing, NormedGroup, RealAlgebra, Sample};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceMode {
    /// `sum |x_i|`, truncated convolution product, unit `delta_0`.
    L1,
    /// `max |x_i|`, coordinatewise product, unit `(1, 1, ...)`.
    Linf,
}

/// Sequences `(x_0, ..., x_{N-1})` in an inner instance.
///
/// In l1 mode the product is convolution truncated at `N`, i.e. the ring
/// `A[z]/(z^N)` with the l1 norm on coefficients; coordinatewise
/// multiplication would give the unit norm `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct SequenceAlgebra<R> {
    mode: SequenceMode,
    truncation: usize,
    inner: R,
}

impl<R: BanachRing> SequenceAlgebra<R> {
    pub fn new(mode: SequenceMode, truncation: usize, inner: R) -> Result<Self> {
        if truncation == 0 {
            return Err(Error::Descriptor("truncation must be positive".into()));
        }
        Ok(Self {
            mode,
            truncation,
            inner,
        })
    }

    pub fn mode(&self) -> SequenceMode {
        self.mode
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn inner(&self) -> &R {
        &self.inner
    }

    /// Entries at indices `< m` kept, the rest zeroed.
    pub fn head(&self, x: &[R::Elem], m: usize) -> Vec<R::Elem> {
        x.iter()
            .enumerate()
            .map(|(i, a)| if i < m { a.clone() } else { self.inner.zero() })
            .collect()
    }
}

impl<R: BanachRing> NormedGroup for SequenceAlgebra<R> {
    type Elem = Vec<R::Elem>;
    type Norm = R::Norm;

    fn zero(&self) -> Vec<R::Elem> {
        vec![self.inner.zero(); self.truncation]
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
        let norms = x.iter().map(|a| self.inner.norm(a));
        match self.mode {
            SequenceMode::L1 => norms.fold(R::Norm::zero(), |acc, v| acc + v),
            SequenceMode::Linf => norms.fold(R::Norm::zero(), NormScalar::max_of),
        }
    }

    fn arithmetic(&self) -> Arithmetic {
        self.inner.arithmetic()
    }

    fn descriptor(&self) -> Descriptor {
        Descriptor::Sequence {
            mode: self.mode,
            truncation: self.truncation,
            inner: Box::new(self.inner.descriptor()),
        }
    }

    fn elem_to_json(&self, x: &Vec<R::Elem>) -> Value {
        Value::Array(x.iter().map(|a| self.inner.elem_to_json(a)).collect())
    }

    fn elem_from_json(&self, v: &Value) -> Result<Vec<R::Elem>> {
        let items = v
            .as_array()
            .filter(|a| a.len() == self.truncation)
            .ok_or_else(|| Error::Element(format!("expected {} terms", self.truncation)))?;
        items.iter().map(|a| self.inner.elem_from_json(a)).collect()
    }
}

impl<R: BanachRing> BanachRing for SequenceAlgebra<R> {
    fn one(&self) -> Vec<R::Elem> {
        match self.mode {
            SequenceMode::L1 => {
                let mut x = self.zero();
                x[0] = self.inner.one();
                x
            }
            SequenceMode::Linf => vec![self.inner.one(); self.truncation],
        }
    }

    fn mul(&self, x: &Vec<R::Elem>, y: &Vec<R::Elem>) -> Vec<R::Elem> {
        match self.mode {
            SequenceMode::Linf => x.iter().zip(y).map(|(a, b)| self.inner.mul(a, b)).collect(),
            SequenceMode::L1 => {
                let n = self.truncation;
                let mut out = self.zero();
                for i in 0..n {
                    for j in 0..n - i {
                        let p = self.inner.mul(&x[i], &y[j]);
                        out[i + j] = self.inner.add(&out[i + j], &p);
                    }
                }
                out
            }
        }
    }
}

impl<R: RealAlgebra> RealAlgebra for SequenceAlgebra<R> {
    fn scale(&self, x: &Vec<R::Elem>, c: f64) -> Vec<R::Elem> {
        x.iter().map(|a| self.inner.scale(a, c)).collect()
    }
}

impl<R: BanachRing + Sample> Sample for SequenceAlgebra<R> {
    fn sample<G: Rng + ?Sized>(&self, rng: &mut G) -> Vec<R::Elem> {
        (0..self.truncation).map(|_| self.inner.sample(rng)).collect()
    }
}

#[cfg(test)]
mod tests {
    use num::complex::Complex64;

    use super::*;
    use crate::instances::ComplexScalars;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn l1_mode() {
        let s = SequenceAlgebra::new(SequenceMode::L1, 3, ComplexScalars).unwrap();
        let x = vec![c(1.0), c(-2.0), c(0.5)];
        assert_eq!(s.norm(&x), 3.5);
        assert_eq!(s.norm(&s.one()), 1.0);
        // (1 + z)^2 = 1 + 2z + z^2
        let y = vec![c(1.0), c(1.0), c(0.0)];
        assert_eq!(s.mul(&y, &y), vec![c(1.0), c(2.0), c(1.0)]);
        // z^2 * z = 0 after truncation
        let z = vec![c(0.0), c(1.0), c(0.0)];
        let z2 = s.mul(&z, &z);
        assert_eq!(s.mul(&z2, &z), s.zero());
    }

    #[test]
    fn linf_mode() {
        let s = SequenceAlgebra::new(SequenceMode::Linf, 3, ComplexScalars).unwrap();
        let x = vec![c(1.0), c(-2.0), c(0.5)];
        assert_eq!(s.norm(&x), 2.0);
        assert_eq!(s.mul(&x, &x), vec![c(1.0), c(4.0), c(0.25)]);
        assert_eq!(s.norm(&s.one()), 1.0);
        assert_eq!(s.head(&x, 1), vec![c(1.0), c(0.0), c(0.0)]);
    }
}
