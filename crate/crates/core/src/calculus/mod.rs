//! Certified inversion, conjugation of nearby idempotents, and lifting of
//! almost-idempotents.

mod coefficients;
mod conjugate;
mod lift;
mod neumann;

pub use coefficients::{
    binomial, catalan, corrected_coefficient, integer_coefficients, printed_coefficient,
    scaled_coefficient, EXACT_COEFFICIENTS,
};
pub use conjugate::{app_conj_bound, app_conj_threshold, conjugating_unit};
pub use lift::{derived_distance_bound, h_bound, lift_idempotent, SeriesVariant};
pub use neumann::{invertibility_radius, neumann_inverse, quasi_inverse_mod_ideal, TERM_CAP};

use crate::certificate::Certificate;
use crate::ring::BanachRing;

/// A unit together with a certified inverse.
///
/// Certificates carry `residual-left` (`|u u_inv - 1|`) and
/// `residual-right` (`|u_inv u - 1|`).
#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedUnit<E> {
    pub u: E,
    pub u_inv: E,
    pub cert: Certificate,
}

impl<E: Clone> CertifiedUnit<E> {
    /// The identity, with zero residuals.
    pub fn identity<R: BanachRing<Elem = E>>(instance: &R) -> Self {
        let mut cert = Certificate::new();
        cert.check("residual-left", 0.0, instance.slack());
        cert.check("residual-right", 0.0, instance.slack());
        Self {
            u: instance.one(),
            u_inv: instance.one(),
            cert,
        }
    }

    pub fn valid(&self) -> bool {
        self.cert.valid()
    }

    /// `(|u u_inv - 1|, |u_inv u - 1|)` recomputed from the elements.
    pub fn residuals<R: BanachRing<Elem = E>>(&self, instance: &R) -> (f64, f64) {
        let one = instance.one();
        (
            instance.dist(&instance.mul(&self.u, &self.u_inv), &one),
            instance.dist(&instance.mul(&self.u_inv, &self.u), &one),
        )
    }

    /// Records measured residuals against `bound`.
    pub(crate) fn certify_residuals<R: BanachRing<Elem = E>>(
        &mut self,
        instance: &R,
        bound: f64,
    ) {
        let (left, right) = self.residuals(instance);
        self.cert.check("residual-left", left, bound);
        self.cert.check("residual-right", right, bound);
    }
}

/// An idempotent with its measured defect `|e^2 - e|`.
#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedIdempotent<E> {
    pub e: E,
    pub cert: Certificate,
}

impl<E: Clone> CertifiedIdempotent<E> {
    /// Measures the defect of `e` and records it against `tol`.
    pub fn measure<R: BanachRing<Elem = E>>(instance: &R, e: E, tol: f64) -> Self {
        let defect = instance.norm_f64(&instance.idempotent_defect(&e));
        let mut cert = Certificate::new();
        cert.check("defect", defect, tol + instance.slack());
        Self { e, cert }
    }

    pub fn defect(&self) -> f64 {
        self.cert.get("defect").map_or(f64::NAN, |d| d.lhs)
    }

    pub fn valid(&self) -> bool {
        self.cert.valid()
    }
}
