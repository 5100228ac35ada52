use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Mul};

use num::{BigRational, One, ToPrimitive, Zero};

/// Absolute slack added to the right-hand side of every certified
/// inequality over floating-point instances.
pub const DEFAULT_SLACK: f64 = 1e-9;

/// Arithmetic semantics declared by an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Arithmetic {
    Exact,
    Floating,
}

impl Arithmetic {
    pub fn slack(self) -> f64 {
        match self {
            Arithmetic::Exact => 0.0,
            Arithmetic::Floating => DEFAULT_SLACK,
        }
    }

    pub fn combine(self, other: Arithmetic) -> Arithmetic {
        if self == Arithmetic::Exact && other == Arithmetic::Exact {
            Arithmetic::Exact
        } else {
            Arithmetic::Floating
        }
    }
}

/// Scalar type in which an instance reports norms.
///
/// Implemented by `f64` (floating instances), `BigRational` (exact
/// instances) and the mixed [`NormValue`].
pub trait NormScalar:
    Clone + Debug + PartialOrd + Zero + One + Add<Output = Self> + Mul<Output = Self> + Send + Sync
{
    fn to_f64(&self) -> f64;

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl NormScalar for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl NormScalar for BigRational {
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::INFINITY)
    }
}

/// A norm value that is either an exact rational or a float.
///
/// Arithmetic on two exact values stays exact; anything touching a float
/// becomes a float.
#[derive(Clone, Debug, PartialEq)]
pub enum NormValue {
    Exact(BigRational),
    Float(f64),
}

impl NormValue {
    pub fn is_exact(&self) -> bool {
        matches!(self, NormValue::Exact(_))
    }
}

impl From<f64> for NormValue {
    fn from(v: f64) -> Self {
        NormValue::Float(v)
    }
}

impl From<BigRational> for NormValue {
    fn from(v: BigRational) -> Self {
        NormValue::Exact(v)
    }
}

impl Add for NormValue {
    type Output = NormValue;

    fn add(self, rhs: NormValue) -> NormValue {
        match (self, rhs) {
            (NormValue::Exact(a), NormValue::Exact(b)) => NormValue::Exact(a + b),
            (a, b) => NormValue::Float(a.to_f64() + b.to_f64()),
        }
    }
}

impl Mul for NormValue {
    type Output = NormValue;

    fn mul(self, rhs: NormValue) -> NormValue {
        match (self, rhs) {
            (NormValue::Exact(a), NormValue::Exact(b)) => NormValue::Exact(a * b),
            (a, b) => NormValue::Float(a.to_f64() * b.to_f64()),
        }
    }
}

impl Zero for NormValue {
    fn zero() -> Self {
        NormValue::Exact(BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        match self {
            NormValue::Exact(a) => a.is_zero(),
            NormValue::Float(a) => *a == 0.0,
        }
    }
}

impl One for NormValue {
    fn one() -> Self {
        NormValue::Exact(BigRational::one())
    }
}

impl PartialOrd for NormValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (NormValue::Exact(a), NormValue::Exact(b)) => a.partial_cmp(b),
            (a, b) => a.to_f64().partial_cmp(&b.to_f64()),
        }
    }
}

impl NormScalar for NormValue {
    fn to_f64(&self) -> f64 {
        match self {
            NormValue::Exact(a) => NormScalar::to_f64(a),
            NormValue::Float(a) => *a,
        }
    }
}
