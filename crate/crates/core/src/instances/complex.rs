use num::complex::Complex64;
use rand::Rng;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::instances::{linalg, Descriptor};
use crate::norm::Arithmetic;
use crate::ring::{BanachRing, NormedGroup, RealAlgebra, Sample};

/// The complex numbers with the modulus.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ComplexScalars;

pub(crate) fn complex_to_json(z: &Complex64) -> Value {
    serde_json::json!([z.re, z.im])
}

pub(crate) fn complex_from_json(v: &Value) -> Result<Complex64> {
    let num = |v: &Value| {
        v.as_f64()
            .ok_or_else(|| Error::Element(format!("not a number: {v}")))
    };
    match v {
        Value::Number(_) => Ok(Complex64::new(num(v)?, 0.0)),
        Value::Array(parts) if parts.len() == 2 => Ok(Complex64::new(num(&parts[0])?, num(&parts[1])?)),
        other => Err(Error::Element(format!(
            "expected a number or [re, im], got {other}"
        ))),
    }
}

impl NormedGroup for ComplexScalars {
    type Elem = Complex64;
    type Norm = f64;

    fn zero(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    fn add(&self, x: &Complex64, y: &Complex64) -> Complex64 {
        x + y
    }

    fn neg(&self, x: &Complex64) -> Complex64 {
        -x
    }

    fn sub(&self, x: &Complex64, y: &Complex64) -> Complex64 {
        x - y
    }

    fn norm(&self, x: &Complex64) -> f64 {
        x.norm()
    }

    fn arithmetic(&self) -> Arithmetic {
        Arithmetic::Floating
    }

    fn descriptor(&self) -> Descriptor {
        Descriptor::Complex
    }

    fn elem_to_json(&self, x: &Complex64) -> Value {
        complex_to_json(x)
    }

    fn elem_from_json(&self, v: &Value) -> Result<Complex64> {
        complex_from_json(v)
    }
}

impl BanachRing for ComplexScalars {
    fn one(&self) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn mul(&self, x: &Complex64, y: &Complex64) -> Complex64 {
        x * y
    }

    fn matrix_spectral_norm(&self, n: usize, entries: &[Complex64]) -> Option<f64> {
        Some(linalg::spectral_norm(n, entries))
    }
}

impl RealAlgebra for ComplexScalars {
    fn scale(&self, x: &Complex64, c: f64) -> Complex64 {
        x * c
    }
}

impl Sample for ComplexScalars {
    fn sample<G: Rng + ?Sized>(&self, rng: &mut G) -> Complex64 {
        Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
    }
}
