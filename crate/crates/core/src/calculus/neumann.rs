use crate::calculus::CertifiedUnit;
use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::ring::BanachRing;

/// Hard cap on the number of series terms.
pub const TERM_CAP: usize = 10_000;

/// Inverts `u` by the Neumann series `sum_{n<=N} (1-u)^n`.
///
/// With `q = |1-u| < 1`, `N` is the smallest index whose certified tail
/// `|(1-u)^{N+1}| / (1-q)` is at most `tol`. The measured power norm is
/// used, so nilpotent perturbations terminate exactly; it never exceeds
/// the textbook bound `q^{N+1}/(1-q)`, which is also recorded.
pub fn neumann_inverse<R: BanachRing>(
    instance: &R,
    u: &R::Elem,
    tol: f64,
) -> Result<CertifiedUnit<R::Elem>> {
    if !(tol > 0.0) {
        return Err(Error::Domain {
            what: "tolerance",
            value: tol,
            domain: "(0, inf)",
        });
    }
    let one = instance.one();
    let x = instance.sub(&one, u);
    let q = instance.norm_f64(&x);
    if !(q < 1.0) {
        return Err(Error::NotNeumannInvertible { distance: q });
    }

    let mut sum = one.clone();
    let mut power = one.clone();
    let mut geometric = q;
    let mut terms = 0usize;
    let tail = loop {
        let next = instance.mul(&power, &x);
        let measured = instance.norm_f64(&next).min(geometric);
        let tail = measured / (1.0 - q);
        if tail <= tol {
            break tail;
        }
        terms += 1;
        if terms > TERM_CAP {
            return Err(Error::TermCap { cap: TERM_CAP });
        }
        sum = instance.add(&sum, &next);
        power = next;
        geometric *= q;
    };

    let mut cert = Certificate::new();
    cert.check("precondition", q, 1.0);
    cert.check("tail-bound", tail, tol);
    cert.note("terms", terms as f64, TERM_CAP as f64);
    let mut unit = CertifiedUnit {
        u: u.clone(),
        u_inv: sum,
        cert,
    };
    unit.certify_residuals(instance, tail + instance.slack());
    Ok(unit)
}

/// Radius `eps = (1 - rho) / |u_inv|` with `rho = |u_inv u - 1|`: every
/// `v` with `|v - u| < eps` has `|1 - u_inv v| < 1` and is therefore
/// invertible by [`neumann_inverse`] applied to `u_inv v`.
pub fn invertibility_radius<R: BanachRing>(instance: &R, unit: &CertifiedUnit<R::Elem>) -> f64 {
    let rho = instance.dist(&instance.mul(&unit.u_inv, &unit.u), &instance.one());
    let inv_norm = instance.norm_f64(&unit.u_inv);
    if rho >= 1.0 || inv_norm == 0.0 {
        return 0.0;
    }
    (1.0 - rho) / inv_norm
}

/// Certifies `1 + a` invertible modulo an ideal containing `witness` by
/// inverting `1 + (a - witness)`, which needs `|a - witness| < 1`.
pub fn quasi_inverse_mod_ideal<R: BanachRing>(
    instance: &R,
    a: &R::Elem,
    witness: &R::Elem,
    tol: f64,
) -> Result<CertifiedUnit<R::Elem>> {
    let diff = instance.sub(a, witness);
    let distance = instance.norm_f64(&diff);
    if !(distance < 1.0) {
        return Err(Error::WitnessTooFar { distance });
    }
    let mut unit = neumann_inverse(instance, &instance.add(&instance.one(), &diff), tol)?;
    unit.cert.check("witness-distance", distance, 1.0);
    Ok(unit)
}

#[cfg(test)]
mod tests {
    use num::complex::Complex64;

    use super::*;
    use crate::instances::{ComplexScalars, MatrixAlgebra, SequenceAlgebra, SequenceMode};
    use crate::ring::NormedGroup;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_needs_no_terms() {
        let unit = neumann_inverse(&ComplexScalars, &c(1.0), 1e-12).unwrap();
        assert_eq!(unit.u_inv, c(1.0));
        assert_eq!(unit.cert.get("terms").unwrap().lhs, 0.0);
        assert!(unit.valid());
    }

    #[test]
    fn scalar_half() {
        let unit = neumann_inverse(&ComplexScalars, &c(0.5), 1e-12).unwrap();
        assert!((unit.u_inv - c(2.0)).norm() <= 1e-12);
        assert!(unit.valid());
    }

    #[test]
    fn nilpotent_perturbation_terminates_exactly() {
        let m = MatrixAlgebra::complex(2).unwrap();
        let nil = vec![c(0.0), c(0.5), c(0.0), c(0.0)];
        let u = m.sub(&m.one(), &nil);
        let unit = neumann_inverse(&m, &u, 1e-12).unwrap();
        assert_eq!(unit.u_inv, m.add(&m.one(), &nil));
        assert_eq!(unit.cert.get("terms").unwrap().lhs, 1.0);
        assert_eq!(unit.cert.get("residual-left").unwrap().lhs, 0.0);
    }

    #[test]
    fn rejects_far_from_one() {
        let err = neumann_inverse(&ComplexScalars, &c(-0.5), 1e-12).unwrap_err();
        assert!(matches!(err, Error::NotNeumannInvertible { .. }));
        assert!(neumann_inverse(&ComplexScalars, &c(1.0), 0.0).is_err());
    }

    #[test]
    fn radius_examples() {
        let id = CertifiedUnit::identity(&ComplexScalars);
        assert_eq!(invertibility_radius(&ComplexScalars, &id), 1.0);
        let two = CertifiedUnit {
            u: c(2.0),
            u_inv: c(0.5),
            cert: Certificate::new(),
        };
        assert_eq!(invertibility_radius(&ComplexScalars, &two), 2.0);
        let m = MatrixAlgebra::complex(2).unwrap();
        let d = CertifiedUnit {
            u: m.real_diag(&[1.0, 0.5]),
            u_inv: m.real_diag(&[1.0, 2.0]),
            cert: Certificate::new(),
        };
        assert_eq!(invertibility_radius(&m, &d), 0.5);
    }

    #[test]
    fn quasi_inverse_examples() {
        let zero = c(0.0);
        let unit = quasi_inverse_mod_ideal(&ComplexScalars, &zero, &zero, 1e-12).unwrap();
        assert_eq!(unit.u_inv, c(1.0));

        let s = SequenceAlgebra::new(SequenceMode::L1, 6, ComplexScalars).unwrap();
        let a = vec![c(0.7), c(-0.4), c(0.2), c(0.1), c(-0.1), c(0.1)];
        let head = s.head(&a, 3);
        assert!((s.norm(&s.sub(&a, &head)) - 0.3).abs() < 1e-15);
        let unit = quasi_inverse_mod_ideal(&s, &a, &head, 1e-12).unwrap();
        assert!(unit.valid());
        let (l, r) = unit.residuals(&s);
        assert!(l <= 1e-12 && r <= 1e-12);

        let far = vec![c(0.0), c(0.0), c(0.0), c(1.2), c(0.0), c(0.0)];
        let err = quasi_inverse_mod_ideal(&s, &far, &s.zero(), 1e-12).unwrap_err();
        assert!(matches!(err, Error::WitnessTooFar { .. }));
    }
}
