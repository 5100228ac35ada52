use serde::{Deserialize, Serialize};

use crate::calculus::coefficients::scaled_coefficient;
use crate::calculus::{CertifiedIdempotent, TERM_CAP};
use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::ring::RealAlgebra;

/// Which lifting series to sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesVariant {
    /// `e = a - sum_{n>=1} 2^{2n-1} binom(1/2, n) s^n`, `s = a^2 - a`.
    ///
    /// Does not produce an idempotent in general: in the scalar model it
    /// sums to `a + (1 - sqrt(1 + 4s))/2`, and for `a = 0.1` gives
    /// `e = 0.2` with defect `0.16`. Kept to exhibit that.
    Printed,
    /// `e = a + (2a - 1) sum_{n>=1} 2^{2n-1} binom(-1/2, n) s^n`, i.e.
    /// `e = 1/2 + (2a - 1)(1 + 4s)^{-1/2} / 2`. Since `(2a-1)^2 = 1 + 4s`,
    /// this squares to itself.
    Corrected,
}

/// `h(t) = (1 - sqrt(1 - 4t)) / 2` on `[0, 1/4)`, evaluated as
/// `2t / (1 + sqrt(1 - 4t))` to avoid cancellation near zero.
pub fn h_bound(t: f64) -> Result<f64> {
    if !(0.0..0.25).contains(&t) {
        return Err(Error::Domain {
            what: "h(t)",
            value: t,
            domain: "[0, 1/4)",
        });
    }
    Ok(2.0 * t / (1.0 + (1.0 - 4.0 * t).sqrt()))
}

/// `|2a - 1| ((1 - 4t)^{-1/2} - 1) / 2`: the sum of the absolute values of
/// the corrected series' terms, hence a bound on `|e - a|`.
pub fn derived_distance_bound(two_a_minus_one_norm: f64, t: f64) -> f64 {
    let r = 1.0 - 4.0 * t;
    // (r^{-1/2} - 1) = (1 - r) / (sqrt(r) (1 + sqrt(r)))
    let s = r.sqrt();
    two_a_minus_one_norm * (4.0 * t / (s * (1.0 + s))) / 2.0
}

/// Lifts an almost-idempotent `a` (`t = |a^2 - a| < 1/4`) to an idempotent
/// polynomial in `a`.
///
/// The series is truncated at the first `N` whose certified tail
/// (first omitted term bound over `1 - 4t`) falls below a target chosen so
/// that the corrected variant's defect stays below `tol`. Entries:
/// `defect`, `commute`, `series-tail`, and the distance `|e - a|` against
/// `distance-derived` and `distance-h`. The bound belonging to the variant
/// gates validity (derived for corrected, `h(t)` for printed); the other
/// is advisory.
pub fn lift_idempotent<R: RealAlgebra>(
    instance: &R,
    a: &R::Elem,
    variant: SeriesVariant,
    tol: f64,
) -> Result<CertifiedIdempotent<R::Elem>> {
    if !(tol > 0.0) {
        return Err(Error::Domain {
            what: "tolerance",
            value: tol,
            domain: "(0, inf)",
        });
    }
    let s = instance.idempotent_defect(a);
    let t = instance.norm_f64(&s);
    if !(t < 0.25) {
        return Err(Error::DefectTooLarge { defect: t });
    }
    let two_a_minus_one = instance.sub(&instance.scale(a, 2.0), &instance.one());
    let m = instance.norm_f64(&two_a_minus_one);
    let derived = derived_distance_bound(m, t);
    let h = h_bound(t)?;

    // Perturbing the exact idempotent e* by r changes the defect by at most
    // |r| (2|e*| + 1 + |r|), and |e*| <= |a| + derived.
    let weight = match variant {
        SeriesVariant::Printed => 1.0,
        SeriesVariant::Corrected => m,
    };
    let e_star_bound = instance.norm_f64(a) + derived;
    let target = tol / (2.0 * e_star_bound + 2.0);
    let ratio = 4.0 * t;

    let mut terms = 0usize;
    let mut ratio_pow = ratio;
    let tail = loop {
        let next = scaled_coefficient(variant, terms + 1).abs() * ratio_pow;
        let tail = weight * next / (1.0 - ratio);
        if tail <= target || ratio_pow == 0.0 {
            break tail;
        }
        terms += 1;
        if terms > TERM_CAP {
            return Err(Error::TermCap { cap: TERM_CAP });
        }
        ratio_pow *= ratio;
    };

    // sum_{n=1}^{N} kappa_n (4s)^n with kappa_n = coefficient / 4^n
    let four_s = instance.scale(&s, 4.0);
    let mut series = instance.zero();
    let mut power = instance.one();
    for n in 1..=terms {
        power = instance.mul(&power, &four_s);
        series = instance.axpy(&series, scaled_coefficient(variant, n), &power);
    }
    let e = match variant {
        SeriesVariant::Printed => instance.sub(a, &series),
        SeriesVariant::Corrected => instance.add(a, &instance.mul(&two_a_minus_one, &series)),
    };

    let slack = instance.slack();
    let mut cert = Certificate::new();
    cert.check(
        "defect",
        instance.norm_f64(&instance.idempotent_defect(&e)),
        tol + slack,
    );
    cert.check("commute", instance.commutator_norm(&e, a), tol + slack);
    cert.check("series-tail", tail, target);
    let distance = instance.dist(&e, a);
    match variant {
        SeriesVariant::Corrected => {
            cert.check("distance-derived", distance, derived + tail + slack);
            cert.note("distance-h", distance, h + tail + slack);
        }
        SeriesVariant::Printed => {
            cert.check("distance-h", distance, h + tail + slack);
            cert.note("distance-derived", distance, derived + tail + slack);
        }
    }
    cert.note("input-defect", t, 0.25);
    cert.note("terms", terms as f64, TERM_CAP as f64);
    Ok(CertifiedIdempotent { e, cert })
}
