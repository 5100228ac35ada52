use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::{BigInt, BigRational};
use proptest::prelude::*;

use idemkit::axioms::l1_coproduct_norm;
use idemkit::calculus::{h_bound, neumann_inverse, CertifiedIdempotent};
use idemkit::deloop::{compose, end_norm, EndOperator};
use idemkit::experiment::{Command, ExperimentConfig};
use idemkit::homotopy::{path_instance, path_trivialize, rotation_family};
use idemkit::instances::random::{random_idempotent, random_near_identity, trial_rng};
use idemkit::instances::{
    make_cantor_tower, make_uhf_tower, ComplexScalars, MatrixAlgebra, SampledFunctionAlgebra,
    Tower,
};
use idemkit::integers::{tensor_norm_int, ScaledIntegers};
use idemkit::k0::{are_equivalent, direct_sum, ClassKey, Classify};
use idemkit::{BanachRing, NormedGroup, Sample};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn rank_of(key: &ClassKey) -> u64 {
    match key {
        ClassKey::Rank { rank } => *rank,
        other => panic!("not a rank: {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_norm_nonincreasing_in_support(m in -40i64..=40, b in 1u64..8) {
        let (r, s) = (BigRational::new(1.into(), 2.into()), BigRational::from_integer(3.into()));
        if let (Ok(small), Ok(large)) = (tensor_norm_int(m, &r, &s, b), tensor_norm_int(m, &r, &s, b + 1)) {
            prop_assert!(large <= small);
        }
        if m.unsigned_abs() <= b {
            prop_assert_eq!(
                tensor_norm_int(m, &r, &s, b).unwrap(),
                &r * &s * BigRational::from_integer(BigInt::from(m.abs()))
            );
        }
    }

    #[test]
    fn l1_coproduct_is_additive(
        xs in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 0..6),
        ys in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 0..6),
    ) {
        let ring = ComplexScalars;
        let list = |v: &[(f64, f64)]| -> Vec<(Complex64, &ComplexScalars)> {
            v.iter().map(|&(a, b)| (Complex64::new(a, b), &ring)).collect()
        };
        let (a, b) = (list(&xs), list(&ys));
        let joined: Vec<_> = a.iter().chain(b.iter()).cloned().collect();
        let lhs = l1_coproduct_norm(&joined);
        let rhs = l1_coproduct_norm(&a) + l1_coproduct_norm(&b);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
    }

    #[test]
    fn tower_connect_is_unital_and_short(seed in any::<u64>(), level in 0usize..5) {
        fn check<T: Tower>(t: &T, i: usize, seed: u64) -> Result<(), TestCaseError> {
            let (here, next) = (t.level(i), t.level(i + 1));
            prop_assert_eq!(t.connect(i, &here.one()), next.one());
            let mut rng = trial_rng(seed, i as u64);
            for _ in 0..8 {
                let x = here.sample(&mut rng);
                prop_assert!(next.norm_f64(&t.connect(i, &x)) <= here.norm_f64(&x) + 1e-12);
            }
            Ok(())
        }
        check(&make_uhf_tower(5).unwrap(), level, seed)?;
        check(&make_cantor_tower(5).unwrap(), level, seed)?;
    }

    #[test]
    fn sampled_keys_exist_exactly_on_zero_one_values(
        values in prop::collection::vec(prop::sample::select(vec![0.0, 1.0, 0.5, 1.0 + 1e-3]), 1..8)
    ) {
        let grid: Vec<f64> = (0..values.len()).map(|i| i as f64).collect();
        let a = SampledFunctionAlgebra::new(grid, ComplexScalars).unwrap();
        let e: Vec<Complex64> = values.iter().map(|&v| c(v)).collect();
        let boolean = values.iter().all(|&v| v == 0.0 || v == 1.0);
        prop_assert_eq!(a.class_key(&e).is_ok(), boolean);
    }

    #[test]
    fn class_key_is_conjugation_invariant(seed in any::<u64>(), n in 1usize..6) {
        let m = MatrixAlgebra::complex(n).unwrap();
        let mut rng = trial_rng(seed, 0);
        let e = m.random_idempotent(&mut rng).unwrap();
        let u = neumann_inverse(&m, &random_near_identity(&m, 0.6, &mut rng), 1e-13).unwrap();
        let f = m.mul(&m.mul(&u.u_inv, &e), &u.u);
        prop_assert_eq!(m.class_key(&e).unwrap().0, m.class_key(&f).unwrap().0);
    }

    #[test]
    fn commutative_equivalence_is_equality(
        bits in prop::collection::vec((any::<bool>(), any::<bool>()), 1..7)
    ) {
        let grid: Vec<f64> = (0..bits.len()).map(|i| i as f64 / 8.0).collect();
        let a = SampledFunctionAlgebra::new(grid, ComplexScalars).unwrap();
        let to = |f: fn(&(bool, bool)) -> bool| -> Vec<Complex64> {
            bits.iter().map(|b| c(f(b) as u8 as f64)).collect()
        };
        let (e, f) = (to(|b| b.0), to(|b| b.1));
        let ec = CertifiedIdempotent::measure(&a, e.clone(), 1e-12);
        let fc = CertifiedIdempotent::measure(&a, f.clone(), 1e-12);
        let verdict = are_equivalent(&a, &ec, &fc, 1e-12).unwrap();
        prop_assert_eq!(verdict.is_yes(), e == f);
        prop_assert!(verdict.is_yes() || verdict.is_no());
    }

    #[test]
    fn direct_sum_adds_classes(seed in any::<u64>(), n in 1usize..4, k in 1usize..4) {
        let (left, right) = (MatrixAlgebra::complex(n).unwrap(), MatrixAlgebra::complex(k).unwrap());
        let mut rng = trial_rng(seed, 1);
        let e = CertifiedIdempotent::measure(&left, left.random_idempotent(&mut rng).unwrap(), 1e-10);
        let f = CertifiedIdempotent::measure(&right, right.random_idempotent(&mut rng).unwrap(), 1e-10);
        let (sum, ef) = direct_sum(&left, &e, &right, &f).unwrap();
        let rank = |m: &MatrixAlgebra<ComplexScalars>, x: &[Complex64]| rank_of(&m.class_key(&x.to_vec()).unwrap().0);
        prop_assert_eq!(rank(&sum, &ef.e), rank(&left, &e.e) + rank(&right, &f.e));
    }

    #[test]
    fn end_norm_is_submultiplicative(
        a in prop::collection::vec((0usize..6, 0usize..6, -9i64..=9), 0..12),
        b in prop::collection::vec((0usize..6, 0usize..6, -9i64..=9), 0..12),
    ) {
        let z = ScaledIntegers::from_ratio(1, 1).unwrap();
        let op = |entries: &[(usize, usize, i64)]| {
            EndOperator::new(&z, entries.iter().map(|&(r, col, v)| (col, vec![(r, BigInt::from(v))])))
        };
        let (x, y) = (op(&a), op(&b));
        prop_assert!(end_norm(&z, &compose(&z, &x, &y)) <= end_norm(&z, &x) * end_norm(&z, &y));
    }

    #[test]
    fn rotation_paths_respect_segment_bound(
        theta in -1.5f64..1.5,
        phi in -1.5f64..1.5,
    ) {
        let m = path_instance(3).unwrap();
        let p = m.real_diag(&[1.0, 0.0, 0.0]);
        let path = rotation_family(3, p.clone(), vec![(0, 1, theta), (1, 2, phi)]).unwrap();
        let r = path_trivialize(&m, &path, 20, 1e-10).unwrap();
        prop_assert!(r.valid(), "{:?}", r.cert);
        prop_assert!(r.cert.get("segment-count").unwrap().holds());
        // the composed unit conjugates the endpoints
        let (e0, e1) = (path.sample(0.0), path.sample(1.0));
        prop_assert!(m.dist(&m.mul(&e0, &r.unit.u), &m.mul(&r.unit.u, &e1)) <= 1e-9);
    }

    #[test]
    fn neumann_residuals_below_tail(seed in any::<u64>(), n in 1usize..8, scale in 0.0f64..0.9) {
        let m = MatrixAlgebra::complex(n).unwrap();
        let u = random_near_identity(&m, scale, &mut trial_rng(seed, 2));
        let unit = neumann_inverse(&m, &u, 1e-11).unwrap();
        let tail = unit.cert.get("tail-bound").unwrap().lhs;
        let (left, right) = unit.residuals(&m);
        prop_assert!(left <= tail + 1e-9 && right <= tail + 1e-9);
    }

    #[test]
    fn configs_round_trip(seed in any::<u64>(), trials in 1usize..1000, tol in 1e-14f64..1e-3, support in 1usize..5000) {
        let mut config = ExperimentConfig::new(Command::SwindleCheck { support });
        config.seed = seed;
        config.trials = trials;
        config.tol = tol;
        let json = serde_json::to_string(&config).unwrap();
        prop_assert_eq!(ExperimentConfig::from_json_str(&json).unwrap(), config);
    }
}

fn numeric_rank(m: &MatrixAlgebra<ComplexScalars>, e: &[Complex64]) -> usize {
    let n = m.size();
    let d = DMatrix::from_fn(n, n, |i, j| *m.entry(e, i, j));
    d.singular_values().iter().filter(|s| **s > 1e-8).count()
}

#[test]
fn two_by_two_idempotents_fall_into_three_classes() {
    let m = MatrixAlgebra::complex(2).unwrap();
    let mut keys = BTreeSet::new();
    let mut oracle = BTreeSet::new();
    for trial in 0..10_000u64 {
        let mut rng = trial_rng(99, trial);
        let rank = (trial % 3) as usize;
        let e = random_idempotent(&m, rank, 0.5, &mut rng).unwrap();
        let key = rank_of(&m.class_key(&e).unwrap().0);
        assert_eq!(key as usize, numeric_rank(&m, &e), "trial {trial}");
        keys.insert(key);
        oracle.insert(numeric_rank(&m, &e));
    }
    assert_eq!(keys.into_iter().collect::<Vec<_>>(), vec![0, 1, 2]);
    assert_eq!(oracle.len(), 3);
}

#[test]
fn h_bound_matches_catalan_partial_sums() {
    let mut catalan = vec![1.0f64];
    for n in 0..200 {
        let next = (0..=n).map(|i| catalan[i] * catalan[n - i]).sum();
        catalan.push(next);
    }
    for t in [0.01, 0.1, 0.2] {
        let h = h_bound(t).unwrap();
        let terms = 150;
        let partial: f64 = (1..=terms).map(|n| catalan[n - 1] * t.powi(n as i32)).sum();
        // C_{n-1} t^n <= (4t)^n / 4, so the tail is geometric
        let tail = (4.0 * t).powi(terms as i32 + 1) / 4.0 / (1.0 - 4.0 * t);
        assert!((h - partial).abs() <= tail + 1e-15, "t = {t}: {h} vs {partial}");
    }
}

fn excess_ulps(lhs: f64, rhs: f64) -> f64 {
    if lhs <= rhs {
        0.0
    } else {
        (lhs - rhs) / (f64::EPSILON * rhs.abs().max(f64::MIN_POSITIVE))
    }
}

#[test]
fn floating_norm_axioms_hold_within_four_ulps() {
    use idemkit::instances::Descriptor;
    for (index, d) in Descriptor::registered().iter().enumerate() {
        let ring = d.build().unwrap();
        if ring.arithmetic() != idemkit::Arithmetic::Floating {
            continue;
        }
        let mut rng = trial_rng(4, index as u64);
        let xs: Vec<_> = (0..15).map(|_| ring.sample(&mut rng)).collect();
        let mut worst: f64 = 0.0;
        for x in &xs {
            let nx = ring.norm_f64(x);
            worst = worst.max(excess_ulps(ring.norm_f64(&ring.neg(x)), nx));
            for y in &xs {
                let ny = ring.norm_f64(y);
                worst = worst.max(excess_ulps(ring.norm_f64(&ring.add(x, y)), nx + ny));
                worst = worst.max(excess_ulps(ring.norm_f64(&ring.mul(x, y)), nx * ny));
            }
        }
        worst = worst.max(excess_ulps(ring.norm_f64(&ring.one()), 1.0));
        assert!(worst <= 4.0, "{d:?}: {worst} ulps");
    }
}
