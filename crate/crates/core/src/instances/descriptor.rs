//! JSON instance descriptors and the dynamically typed ring they build.

use num::complex::Complex64;
use num::BigInt;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::instances::{
    ComplexScalars, MatrixAlgebra, MatrixNorm, SampledFunctionAlgebra, SequenceAlgebra,
    SequenceMode,
};
use crate::integers::{parse_rational, ScaledIntegers};
use crate::norm::{Arithmetic, NormValue};
use crate::ring::{BanachRing, NormedGroup, RealAlgebra, Sample};

fn complex_inner() -> Box<Descriptor> {
    Box::new(Descriptor::Complex)
}

/// `{"kind": "matrix", "n": 4, "norm": "col-l1", "inner": {"kind": "complex"}}`
/// and friends. `inner` defaults to complex scalars and `norm` to `col-l1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Descriptor {
    Complex,
    ScaledIntegers {
        r: String,
    },
    Matrix {
        n: usize,
        #[serde(default)]
        norm: MatrixNorm,
        #[serde(default = "complex_inner")]
        inner: Box<Descriptor>,
    },
    Sampled {
        grid: Vec<f64>,
        #[serde(default = "complex_inner")]
        inner: Box<Descriptor>,
    },
    Sequence {
        mode: SequenceMode,
        truncation: usize,
        #[serde(default = "complex_inner")]
        inner: Box<Descriptor>,
    },
}

impl Descriptor {
    pub fn build(&self) -> Result<DynRing> {
        Ok(match self {
            Descriptor::Complex => DynRing::Complex(ComplexScalars),
            Descriptor::ScaledIntegers { r } => {
                DynRing::Scaled(ScaledIntegers::new(parse_rational(r)?)?)
            }
            Descriptor::Matrix { n, norm, inner } => {
                DynRing::Matrix(Box::new(MatrixAlgebra::new(inner.build()?, *n, *norm)?))
            }
            Descriptor::Sampled { grid, inner } => DynRing::Sampled(Box::new(
                SampledFunctionAlgebra::new(grid.clone(), inner.build()?)?,
            )),
            Descriptor::Sequence {
                mode,
                truncation,
                inner,
            } => DynRing::Sequence(Box::new(SequenceAlgebra::new(
                *mode,
                *truncation,
                inner.build()?,
            )?)),
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Descriptor(e.to_string()))
    }

    /// The instances every norm audit covers by default.
    pub fn registered() -> Vec<Descriptor> {
        let matrix = |n, norm, inner: Descriptor| Descriptor::Matrix {
            n,
            norm,
            inner: Box::new(inner),
        };
        let z1 = Descriptor::ScaledIntegers { r: "1".into() };
        vec![
            Descriptor::Complex,
            z1.clone(),
            matrix(2, MatrixNorm::ColL1, Descriptor::Complex),
            matrix(4, MatrixNorm::ColL1, Descriptor::Complex),
            matrix(3, MatrixNorm::Spectral, Descriptor::Complex),
            matrix(3, MatrixNorm::ColL1, z1.clone()),
            matrix(2, MatrixNorm::ColL1, matrix(2, MatrixNorm::ColL1, Descriptor::Complex)),
            Descriptor::Sampled {
                grid: vec![0.0, 0.25, 0.5, 0.75, 1.0],
                inner: complex_inner(),
            },
            Descriptor::Sampled {
                grid: vec![0.0, 0.5, 1.0],
                inner: Box::new(matrix(2, MatrixNorm::ColL1, Descriptor::Complex)),
            },
            Descriptor::Sequence {
                mode: SequenceMode::L1,
                truncation: 6,
                inner: complex_inner(),
            },
            Descriptor::Sequence {
                mode: SequenceMode::Linf,
                truncation: 6,
                inner: complex_inner(),
            },
            Descriptor::Sequence {
                mode: SequenceMode::L1,
                truncation: 4,
                inner: Box::new(z1),
            },
        ]
    }
}

/// A ring assembled at runtime from a [`Descriptor`], with arbitrarily
/// nested matrix, sampled and sequence layers.
#[derive(Clone, Debug, PartialEq)]
pub enum DynRing {
    Complex(ComplexScalars),
    Scaled(ScaledIntegers),
    Matrix(Box<MatrixAlgebra<DynRing>>),
    Sampled(Box<SampledFunctionAlgebra<DynRing>>),
    Sequence(Box<SequenceAlgebra<DynRing>>),
}

/// Elements of a [`DynRing`]. Array elements are the row-major entries of
/// a matrix, the samples of a function, or the terms of a sequence.
#[derive(Clone, Debug, PartialEq)]
pub enum DynElem {
    Complex(Complex64),
    Int(BigInt),
    Array(Vec<DynElem>),
}

fn as_complex(x: &DynElem) -> &Complex64 {
    match x {
        DynElem::Complex(z) => z,
        other => panic!("expected a complex element, got {other:?}"),
    }
}

fn as_int(x: &DynElem) -> &BigInt {
    match x {
        DynElem::Int(z) => z,
        other => panic!("expected an integer element, got {other:?}"),
    }
}

fn as_array(x: &DynElem) -> &Vec<DynElem> {
    match x {
        DynElem::Array(v) => v,
        other => panic!("expected an array element, got {other:?}"),
    }
}

/// Dispatches a unary element operation through every layer.
macro_rules! dispatch_unary {
    ($self:expr, $x:expr, $method:ident) => {
        match $self {
            DynRing::Complex(r) => DynElem::Complex(r.$method(as_complex($x))),
            DynRing::Scaled(r) => DynElem::Int(r.$method(as_int($x))),
            DynRing::Matrix(r) => DynElem::Array(r.$method(as_array($x))),
            DynRing::Sampled(r) => DynElem::Array(r.$method(as_array($x))),
            DynRing::Sequence(r) => DynElem::Array(r.$method(as_array($x))),
        }
    };
}

macro_rules! dispatch_binary {
    ($self:expr, $x:expr, $y:expr, $method:ident) => {
        match $self {
            DynRing::Complex(r) => DynElem::Complex(r.$method(as_complex($x), as_complex($y))),
            DynRing::Scaled(r) => DynElem::Int(r.$method(as_int($x), as_int($y))),
            DynRing::Matrix(r) => DynElem::Array(r.$method(as_array($x), as_array($y))),
            DynRing::Sampled(r) => DynElem::Array(r.$method(as_array($x), as_array($y))),
            DynRing::Sequence(r) => DynElem::Array(r.$method(as_array($x), as_array($y))),
        }
    };
}

macro_rules! dispatch_nullary {
    ($self:expr, $method:ident) => {
        match $self {
            DynRing::Complex(r) => DynElem::Complex(r.$method()),
            DynRing::Scaled(r) => DynElem::Int(r.$method()),
            DynRing::Matrix(r) => DynElem::Array(r.$method()),
            DynRing::Sampled(r) => DynElem::Array(r.$method()),
            DynRing::Sequence(r) => DynElem::Array(r.$method()),
        }
    };
}

impl NormedGroup for DynRing {
    type Elem = DynElem;
    type Norm = NormValue;

    fn zero(&self) -> DynElem {
        dispatch_nullary!(self, zero)
    }

    fn add(&self, x: &DynElem, y: &DynElem) -> DynElem {
        dispatch_binary!(self, x, y, add)
    }

    fn neg(&self, x: &DynElem) -> DynElem {
        dispatch_unary!(self, x, neg)
    }

    fn sub(&self, x: &DynElem, y: &DynElem) -> DynElem {
        dispatch_binary!(self, x, y, sub)
    }

    fn norm(&self, x: &DynElem) -> NormValue {
        match self {
            DynRing::Complex(r) => NormValue::Float(r.norm(as_complex(x))),
            DynRing::Scaled(r) => NormValue::Exact(r.norm(as_int(x))),
            DynRing::Matrix(r) => r.norm(as_array(x)),
            DynRing::Sampled(r) => r.norm(as_array(x)),
            DynRing::Sequence(r) => r.norm(as_array(x)),
        }
    }

    fn arithmetic(&self) -> Arithmetic {
        match self {
            DynRing::Complex(r) => r.arithmetic(),
            DynRing::Scaled(r) => r.arithmetic(),
            DynRing::Matrix(r) => r.arithmetic(),
            DynRing::Sampled(r) => r.arithmetic(),
            DynRing::Sequence(r) => r.arithmetic(),
        }
    }

    fn descriptor(&self) -> Descriptor {
        match self {
            DynRing::Complex(r) => r.descriptor(),
            DynRing::Scaled(r) => r.descriptor(),
            DynRing::Matrix(r) => r.descriptor(),
            DynRing::Sampled(r) => r.descriptor(),
            DynRing::Sequence(r) => r.descriptor(),
        }
    }

    fn elem_to_json(&self, x: &DynElem) -> Value {
        match self {
            DynRing::Complex(r) => r.elem_to_json(as_complex(x)),
            DynRing::Scaled(r) => r.elem_to_json(as_int(x)),
            DynRing::Matrix(r) => r.elem_to_json(as_array(x)),
            DynRing::Sampled(r) => r.elem_to_json(as_array(x)),
            DynRing::Sequence(r) => r.elem_to_json(as_array(x)),
        }
    }

    fn elem_from_json(&self, v: &Value) -> Result<DynElem> {
        Ok(match self {
            DynRing::Complex(r) => DynElem::Complex(r.elem_from_json(v)?),
            DynRing::Scaled(r) => DynElem::Int(r.elem_from_json(v)?),
            DynRing::Matrix(r) => DynElem::Array(r.elem_from_json(v)?),
            DynRing::Sampled(r) => DynElem::Array(r.elem_from_json(v)?),
            DynRing::Sequence(r) => DynElem::Array(r.elem_from_json(v)?),
        })
    }
}

impl BanachRing for DynRing {
    fn one(&self) -> DynElem {
        dispatch_nullary!(self, one)
    }

    fn mul(&self, x: &DynElem, y: &DynElem) -> DynElem {
        dispatch_binary!(self, x, y, mul)
    }

    fn matrix_spectral_norm(&self, n: usize, entries: &[DynElem]) -> Option<NormValue> {
        match self {
            DynRing::Complex(r) => {
                let entries: Vec<Complex64> = entries.iter().map(|x| *as_complex(x)).collect();
                r.matrix_spectral_norm(n, &entries).map(NormValue::Float)
            }
            _ => None,
        }
    }
}

impl DynRing {
    /// Whether every layer bottoms out in complex scalars, so that real
    /// scaling is defined.
    pub fn is_real(&self) -> bool {
        match self {
            DynRing::Complex(_) => true,
            DynRing::Scaled(_) => false,
            DynRing::Matrix(r) => r.inner().is_real(),
            DynRing::Sampled(r) => r.inner().is_real(),
            DynRing::Sequence(r) => r.inner().is_real(),
        }
    }
}

/// Only meaningful when [`DynRing::is_real`] holds; scaling an integer
/// layer panics.
impl RealAlgebra for DynRing {
    fn scale(&self, x: &DynElem, c: f64) -> DynElem {
        match self {
            DynRing::Complex(r) => DynElem::Complex(r.scale(as_complex(x), c)),
            DynRing::Scaled(_) => panic!("integer layers have no real scaling"),
            DynRing::Matrix(r) => DynElem::Array(r.scale(as_array(x), c)),
            DynRing::Sampled(r) => DynElem::Array(r.scale(as_array(x), c)),
            DynRing::Sequence(r) => DynElem::Array(r.scale(as_array(x), c)),
        }
    }
}

impl Sample for DynRing {
    fn sample<G: Rng + ?Sized>(&self, rng: &mut G) -> DynElem {
        match self {
            DynRing::Complex(r) => DynElem::Complex(r.sample(rng)),
            DynRing::Scaled(r) => DynElem::Int(r.sample(rng)),
            DynRing::Matrix(r) => DynElem::Array(r.sample(rng)),
            DynRing::Sampled(r) => DynElem::Array(r.sample(rng)),
            DynRing::Sequence(r) => DynElem::Array(r.sample(rng)),
        }
    }
}
