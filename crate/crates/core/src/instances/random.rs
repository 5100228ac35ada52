//! Seeded generators for test and experiment data.

use num::complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instances::{ComplexScalars, MatrixAlgebra};
use crate::ring::{BanachRing, NormedGroup, RealAlgebra, Sample};

const MAX_ATTEMPTS: usize = 16;

/// The deterministic generator for trial `index` of an experiment seeded
/// with `seed`: one ChaCha stream per trial.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A diagonal `{0,1}` matrix of the given rank with randomly placed ones.
pub fn permuted_diagonal<G: Rng + ?Sized>(
    m: &MatrixAlgebra<ComplexScalars>,
    rank: usize,
    rng: &mut G,
) -> Vec<Complex64> {
    let mut d: Vec<f64> = (0..m.size()).map(|i| if i < rank { 1.0 } else { 0.0 }).collect();
    d.shuffle(rng);
    m.real_diag(&d)
}

/// `1 + scale * g / |g|` for a random `g`; invertible by a Neumann series
/// whenever `scale < 1`.
pub fn random_near_identity<R, G>(instance: &R, scale: f64, rng: &mut G) -> R::Elem
where
    R: RealAlgebra + Sample,
    G: Rng + ?Sized,
{
    let g = instance.sample(rng);
    let norm = instance.norm_f64(&g);
    if norm == 0.0 {
        return instance.one();
    }
    instance.axpy(&instance.one(), scale / norm, &g)
}

/// A random idempotent `S D S^{-1}` with `D` a permuted `{0,1}` diagonal of
/// the given rank and `S` a random unit within `spread` of the identity.
pub fn random_idempotent<G: Rng + ?Sized>(
    m: &MatrixAlgebra<ComplexScalars>,
    rank: usize,
    spread: f64,
    rng: &mut G,
) -> Result<Vec<Complex64>> {
    let d = permuted_diagonal(m, rank, rng);
    let s = random_near_identity(m, spread, rng);
    let s_inv = m.inverse(&s)?;
    Ok(m.mul(&m.mul(&s, &d), &s_inv))
}

/// An element `a` of `Mat_n(C)` with `|a^2 - a|` in `[t/2, t]`.
///
/// Built as a conjugated `{0,1}` diagonal plus `lambda q` for a random
/// unit-norm `q`, with `lambda` found by bisection on the defect. `t = 0`
/// returns an exact permuted diagonal idempotent. Equal seeds give equal
/// outputs.
pub fn random_almost_idempotent(
    m: &MatrixAlgebra<ComplexScalars>,
    t: f64,
    seed: u64,
) -> Result<Vec<Complex64>> {
    if !(0.0..0.25).contains(&t) {
        return Err(Error::Domain {
            what: "target defect",
            value: t,
            domain: "[0, 1/4)",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rank = rng.random_range(0..=m.size());
    if t == 0.0 {
        return Ok(permuted_diagonal(m, rank, &mut rng));
    }
    let p = random_idempotent(m, rank, 0.3, &mut rng)?;
    let defect = |x: &Vec<Complex64>| m.norm_f64(&m.idempotent_defect(x));

    for _ in 0..MAX_ATTEMPTS {
        let q = random_near_identity(m, 1.0, &mut rng);
        let q = m.sub(&q, &m.one());
        let at = |lambda: f64| m.axpy(&p, lambda, &q);

        let mut lo = 0.0;
        let mut hi = t;
        let mut grown = 0;
        while defect(&at(hi)) < t / 2.0 && grown < 60 {
            lo = hi;
            hi *= 2.0;
            grown += 1;
        }
        for _ in 0..200 {
            let a = at(hi);
            let d = defect(&a);
            if (t / 2.0..=t).contains(&d) {
                return Ok(a);
            }
            let mid = 0.5 * (lo + hi);
            let dm = defect(&at(mid));
            if (t / 2.0..=t).contains(&dm) {
                return Ok(at(mid));
            }
            if dm < t / 2.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    Err(Error::GeneratorFailed {
        attempts: MAX_ATTEMPTS,
    })
}

/// A complex scalar with `|a^2 - a|` in `[t/2, t]`, on a random branch.
pub fn random_scalar_almost_idempotent(t: f64, seed: u64) -> Result<Complex64> {
    if !(0.0..0.25).contains(&t) {
        return Err(Error::Domain {
            what: "target defect",
            value: t,
            domain: "[0, 1/4)",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radius = t * rng.random_range(0.5..=1.0);
    let angle = rng.random_range(0.0..std::f64::consts::TAU);
    let s = Complex64::from_polar(radius, angle);
    // a^2 - a = s  =>  a = (1 -+ sqrt(1 + 4s)) / 2
    let root = (Complex64::new(1.0, 0.0) + 4.0 * s).sqrt();
    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    Ok((Complex64::new(1.0, 0.0) + sign * root) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_target_is_exact() {
        let m = MatrixAlgebra::complex(4).unwrap();
        let a = random_almost_idempotent(&m, 0.0, 5).unwrap();
        assert_eq!(m.idempotent_defect(&a), m.zero());
    }

    #[test]
    fn lands_in_band() {
        let m = MatrixAlgebra::complex(2).unwrap();
        let a = random_almost_idempotent(&m, 0.09, 11).unwrap();
        let d = m.norm_f64(&m.idempotent_defect(&a));
        assert!((0.045..=0.09).contains(&d), "defect {d}");
        for n in 1..=8 {
            let m = MatrixAlgebra::complex(n).unwrap();
            for seed in 0..10 {
                let a = random_almost_idempotent(&m, 0.2, seed).unwrap();
                let d = m.norm_f64(&m.idempotent_defect(&a));
                assert!((0.1..=0.2).contains(&d), "n={n} seed={seed} defect {d}");
            }
        }
    }

    #[test]
    fn reproducible() {
        let m = MatrixAlgebra::complex(3).unwrap();
        assert_eq!(
            random_almost_idempotent(&m, 0.1, 42).unwrap(),
            random_almost_idempotent(&m, 0.1, 42).unwrap()
        );
        assert!(random_almost_idempotent(&m, 0.25, 1).is_err());
    }

    #[test]
    fn scalar_generator() {
        for seed in 0..50 {
            let a = random_scalar_almost_idempotent(0.2, seed).unwrap();
            let d = (a * a - a).norm();
            assert!((0.1 - 1e-12..=0.2 + 1e-12).contains(&d));
        }
    }

    #[test]
    fn trial_streams_differ() {
        let a: u64 = trial_rng(7, 0).random();
        let b: u64 = trial_rng(7, 1).random();
        let c: u64 = trial_rng(7, 0).random();
        assert_ne!(a, b);
        assert_eq!(a, c);
    }
}
