//! Contracts for normed abelian groups and Banach rings.

use std::fmt::Debug;

use rand::Rng;
use serde_json::Value;

use crate::error::Result;
use crate::instances::Descriptor;
use crate::norm::{Arithmetic, NormScalar};

/// An abelian group with a norm: `|x + y| <= |x| + |y|`, `|-x| = |x|`,
/// `|0| = 0`.
pub trait NormedGroup: Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;
    type Norm: NormScalar;

    fn zero(&self) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn norm(&self, x: &Self::Elem) -> Self::Norm;
    fn arithmetic(&self) -> Arithmetic;
    fn descriptor(&self) -> Descriptor;
    fn elem_to_json(&self, x: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem>;

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.add(x, &self.neg(y))
    }

    /// `|x - y|` as a float.
    fn dist(&self, x: &Self::Elem, y: &Self::Elem) -> f64 {
        self.norm(&self.sub(x, y)).to_f64()
    }

    fn norm_f64(&self, x: &Self::Elem) -> f64 {
        self.norm(x).to_f64()
    }

    fn slack(&self) -> f64 {
        self.arithmetic().slack()
    }
}

/// A unital normed ring with `|xy| <= |x||y|` and `|1| <= 1`.
///
/// The axioms are not enforced by the type; `check_norm_axioms` audits them.
pub trait BanachRing: NormedGroup {
    fn one(&self) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    /// Operator (spectral) norm of an `n x n` matrix with entries in this
    /// ring, when the ring supports one. Only complex scalars do.
    fn matrix_spectral_norm(&self, _n: usize, _entries: &[Self::Elem]) -> Option<Self::Norm> {
        None
    }

    /// `x^2 - x`.
    fn idempotent_defect(&self, x: &Self::Elem) -> Self::Elem {
        self.sub(&self.mul(x, x), x)
    }

    /// `|xy - yx|`.
    fn commutator_norm(&self, x: &Self::Elem, y: &Self::Elem) -> f64 {
        self.dist(&self.mul(x, y), &self.mul(y, x))
    }
}

/// A Banach ring that is also a real vector space (every instance built on
/// complex scalars).
pub trait RealAlgebra: BanachRing {
    fn scale(&self, x: &Self::Elem, c: f64) -> Self::Elem;

    fn real(&self, c: f64) -> Self::Elem {
        self.scale(&self.one(), c)
    }

    /// `x + c y`.
    fn axpy(&self, x: &Self::Elem, c: f64, y: &Self::Elem) -> Self::Elem {
        self.add(x, &self.scale(y, c))
    }
}

/// Random sampling of elements for audits and experiments.
pub trait Sample: NormedGroup {
    fn sample<G: Rng + ?Sized>(&self, rng: &mut G) -> Self::Elem;
}
