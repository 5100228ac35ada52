use crate::calculus::{neumann_inverse, CertifiedIdempotent, CertifiedUnit};
use crate::error::{Error, Result};
use crate::ring::BanachRing;

/// `2|e||e-f| + |e-f|^2`, the bound on `|u - 1|` for
/// `u = ef + (1-e)(1-f)`.
pub fn app_conj_bound(e_norm: f64, distance: f64) -> f64 {
    2.0 * e_norm * distance + distance * distance
}

/// The distance `d` solving `2|e| d + d^2 = level`.
pub fn app_conj_threshold(e_norm: f64, level: f64) -> f64 {
    (e_norm * e_norm + level).sqrt() - e_norm
}

/// The unit `u = ef + (1-e)(1-f)` with `eu = ef = uf`, inverted by a
/// Neumann series.
///
/// Requires `2|e||e-f| + |e-f|^2 < 1`. The `intertwine` entry allows
/// `tol (1 + |e| + |f|)` plus the terms the measured defects of `e` and
/// `f` contribute, since `eu - uf = (e^2-e)(2f-1) + (f^2-f)(1-2e)`.
pub fn conjugating_unit<R: BanachRing>(
    instance: &R,
    e: &CertifiedIdempotent<R::Elem>,
    f: &CertifiedIdempotent<R::Elem>,
    tol: f64,
) -> Result<CertifiedUnit<R::Elem>> {
    let (e_el, f_el) = (&e.e, &f.e);
    let distance = instance.dist(e_el, f_el);
    let e_norm = instance.norm_f64(e_el);
    let f_norm = instance.norm_f64(f_el);
    let bound = app_conj_bound(e_norm, distance);
    if !(bound < 1.0) {
        return Err(Error::NotProximate { bound });
    }

    let one = instance.one();
    let not_e = instance.sub(&one, e_el);
    let not_f = instance.sub(&one, f_el);
    let u = instance.add(&instance.mul(e_el, f_el), &instance.mul(&not_e, &not_f));

    let defect_e = instance.norm_f64(&instance.idempotent_defect(e_el));
    let defect_f = instance.norm_f64(&instance.idempotent_defect(f_el));
    let slack = instance.slack();

    let mut unit = neumann_inverse(instance, &u, tol)?;
    let intertwine = instance.dist(&instance.mul(e_el, &u), &instance.mul(&u, f_el));
    let allowance = tol * (1.0 + e_norm + f_norm)
        + defect_e * (1.0 + 2.0 * f_norm)
        + defect_f * (1.0 + 2.0 * e_norm)
        + slack;
    unit.cert.check("intertwine", intertwine, allowance);
    unit.cert.check(
        "unit-distance",
        instance.dist(&u, &one),
        bound + defect_e + defect_f + slack,
    );
    unit.cert.note("proximity", bound, 1.0);
    Ok(unit)
}

#[cfg(test)]
mod tests {
    use num::complex::Complex64;

    use super::*;
    use crate::instances::MatrixAlgebra;
    use crate::ring::NormedGroup;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn rotated_projector(theta: f64) -> Vec<Complex64> {
        let (s, co) = theta.sin_cos();
        vec![c(co * co), c(co * s), c(co * s), c(s * s)]
    }

    #[test]
    fn equal_idempotents_give_identity() {
        let m = MatrixAlgebra::complex(2).unwrap();
        let e = CertifiedIdempotent::measure(&m, m.real_diag(&[1.0, 0.0]), 1e-12);
        let unit = conjugating_unit(&m, &e, &e, 1e-12).unwrap();
        assert_eq!(unit.u, m.one());
        assert!(unit.valid());

        let z = CertifiedIdempotent::measure(&m, m.zero(), 1e-12);
        let unit = conjugating_unit(&m, &z, &z, 1e-12).unwrap();
        assert_eq!(unit.u, m.one());
    }

    #[test]
    fn rotation_by_small_angle() {
        let m = MatrixAlgebra::complex(2).unwrap();
        let e = CertifiedIdempotent::measure(&m, m.real_diag(&[1.0, 0.0]), 1e-12);
        let f = CertifiedIdempotent::measure(&m, rotated_projector(0.1), 1e-12);
        let unit = conjugating_unit(&m, &e, &f, 1e-12).unwrap();
        assert!(unit.valid(), "{:?}", unit.cert);
        assert!(unit.cert.get("intertwine").unwrap().lhs <= 1e-12);
    }

    #[test]
    fn far_idempotents_rejected() {
        let m = MatrixAlgebra::complex(2).unwrap();
        let e = CertifiedIdempotent::measure(&m, m.real_diag(&[1.0, 0.0]), 1e-12);
        let f = CertifiedIdempotent::measure(&m, m.real_diag(&[0.0, 1.0]), 1e-12);
        let err = conjugating_unit(&m, &e, &f, 1e-12).unwrap_err();
        assert!(matches!(err, Error::NotProximate { .. }));
    }

    #[test]
    fn threshold_solves_bound() {
        for &norm in &[0.0, 1.0, 2.5] {
            let d = app_conj_threshold(norm, 1.0);
            assert!((app_conj_bound(norm, d) - 1.0).abs() < 1e-14);
        }
    }
}
