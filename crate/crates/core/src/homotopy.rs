//! Trivialization of continuous paths of idempotents by adaptive bisection.

use std::f64::consts::FRAC_PI_2;

use num::complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::calculus::{
    app_conj_bound, app_conj_threshold, conjugating_unit, CertifiedIdempotent, CertifiedUnit,
};
use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::instances::random::trial_rng;
use crate::instances::{ComplexScalars, MatrixAlgebra};
use crate::k0::{ClassKey, Classify};
use crate::par::{map_range, Execution};
use crate::ring::{BanachRing, NormedGroup};

/// Segments are accepted once `2|e(a)| d + d^2` drops below this.
pub const SEGMENT_THRESHOLD: f64 = 0.5;
/// Largest defect a path sample may have.
pub const SAMPLE_DEFECT_TOL: f64 = 1e-8;

/// A path `t -> e(t)` of idempotents on `[0, 1]` with a claimed Lipschitz
/// constant.
pub struct IdempotentPath<E> {
    sampler: Box<dyn Fn(f64) -> E + Send + Sync>,
    pub lipschitz_hint: f64,
}

impl<E> IdempotentPath<E> {
    pub fn new(sampler: impl Fn(f64) -> E + Send + Sync + 'static, lipschitz_hint: f64) -> Self {
        Self {
            sampler: Box::new(sampler),
            lipschitz_hint,
        }
    }

    pub fn sample(&self, t: f64) -> E {
        (self.sampler)(t)
    }
}

impl<E> std::fmt::Debug for IdempotentPath<E> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IdempotentPath")
            .field("lipschitz_hint", &self.lipschitz_hint)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub depth: usize,
    /// `|e(start) - e(end)|`.
    pub gap: f64,
    /// `2|e(start)| gap + gap^2`.
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathTrivialization<E> {
    /// `e(0) u = u e(1)`.
    pub unit: CertifiedUnit<E>,
    pub segments: Vec<Segment>,
    pub key: ClassKey,
    pub cert: Certificate,
}

impl<E> PathTrivialization<E> {
    pub fn valid(&self) -> bool {
        self.cert.valid()
    }
}

struct Bisection<'a, R: Classify> {
    instance: &'a R,
    path: &'a IdempotentPath<R::Elem>,
    max_depth: usize,
    segments: Vec<(Segment, R::Elem, R::Elem)>,
    keys: Vec<ClassKey>,
    max_norm: f64,
}

impl<R: Classify> Bisection<'_, R> {
    fn sample(&mut self, t: f64) -> Result<R::Elem> {
        let e = self.path.sample(t);
        let defect = self.instance.norm_f64(&self.instance.idempotent_defect(&e));
        if !(defect <= SAMPLE_DEFECT_TOL) {
            return Err(Error::NotIdempotent {
                defect,
                tol: SAMPLE_DEFECT_TOL,
            });
        }
        let (key, _) = self.instance.class_key(&e)?;
        if !self.keys.contains(&key) {
            self.keys.push(key);
        }
        self.max_norm = self.max_norm.max(self.instance.norm_f64(&e));
        Ok(e)
    }

    fn refine(&mut self, a: f64, b: f64, ea: R::Elem, eb: R::Elem, depth: usize) -> Result<()> {
        let gap = self.instance.dist(&ea, &eb);
        let hint = self.path.lipschitz_hint;
        let width = b - a;
        if gap > hint * width * (1.0 + 1e-9) + 1e-9 {
            return Err(Error::HintViolated {
                start: a,
                end: b,
                gap,
                width,
                hint,
            });
        }
        let ea_norm = self.instance.norm_f64(&ea);
        let bound = app_conj_bound(ea_norm, gap);
        if bound < SEGMENT_THRESHOLD {
            let segment = Segment {
                start: a,
                end: b,
                depth,
                gap,
                bound,
            };
            self.segments.push((segment, ea, eb));
            return Ok(());
        }
        if depth >= self.max_depth {
            return Err(Error::PathTooWild {
                start: a,
                end: b,
                gap,
                threshold: app_conj_threshold(ea_norm, SEGMENT_THRESHOLD),
            });
        }
        let mid = 0.5 * (a + b);
        let em = self.sample(mid)?;
        self.refine(a, mid, ea, em.clone(), depth + 1)?;
        self.refine(mid, b, em, eb, depth + 1)
    }
}

/// Bisects `[0, 1]` until adjacent samples are close enough to conjugate,
/// then composes the segment units into `u` with `e(0) u = u e(1)`.
pub fn path_trivialize<R: Classify>(
    instance: &R,
    path: &IdempotentPath<R::Elem>,
    max_depth: usize,
    tol: f64,
) -> Result<PathTrivialization<R::Elem>> {
    if !(tol > 0.0) {
        return Err(Error::Domain {
            what: "tolerance",
            value: tol,
            domain: "(0, inf)",
        });
    }
    let mut bisection = Bisection {
        instance,
        path,
        max_depth,
        segments: Vec::new(),
        keys: Vec::new(),
        max_norm: 0.0,
    };
    let e0 = bisection.sample(0.0)?;
    let e1 = bisection.sample(1.0)?;
    bisection.refine(0.0, 1.0, e0.clone(), e1.clone(), 0)?;

    let count = bisection.segments.len();
    let segment_tol = tol / (16.0 * count as f64);
    let mut cert = Certificate::new();
    let mut u = instance.one();
    let mut u_inv = instance.one();
    let mut segments = Vec::with_capacity(count);
    for (k, (segment, ea, eb)) in bisection.segments.into_iter().enumerate() {
        let ea = CertifiedIdempotent::measure(instance, ea, SAMPLE_DEFECT_TOL);
        let eb = CertifiedIdempotent::measure(instance, eb, SAMPLE_DEFECT_TOL);
        let unit = conjugating_unit(instance, &ea, &eb, segment_tol)?;
        cert.note(format!("segment-{k}-bound"), segment.bound, SEGMENT_THRESHOLD);
        cert.absorb(&format!("segment-{k}"), &unit.cert);
        u = instance.mul(&u, &unit.u);
        u_inv = instance.mul(&unit.u_inv, &u_inv);
        segments.push(segment);
    }

    let intertwine = instance.dist(&instance.mul(&e0, &u), &instance.mul(&u, &e1));
    cert.check("intertwine", intertwine, tol);
    let mut unit = CertifiedUnit {
        u,
        u_inv,
        cert: Certificate::new(),
    };
    unit.certify_residuals(instance, tol);
    cert.absorb("unit", &unit.cert);
    cert.check("rank-constant", (bisection.keys.len() - 1) as f64, 0.0);
    let hint = path.lipschitz_hint;
    let threshold = app_conj_threshold(bisection.max_norm, SEGMENT_THRESHOLD);
    if hint.is_finite() {
        cert.check(
            "segment-count",
            count as f64,
            2.0 * (hint / threshold).ceil() + 2.0,
        );
    } else {
        cert.note("segment-count", count as f64, f64::INFINITY);
    }
    Ok(PathTrivialization {
        unit,
        segments,
        key: bisection.keys.swap_remove(0),
        cert,
    })
}

/// `Mat_n(C)` with the operator norm, in which conjugation by unitaries is
/// isometric.
pub fn path_instance(n: usize) -> Result<MatrixAlgebra<ComplexScalars>> {
    MatrixAlgebra::complex_spectral(n)
}

fn givens(n: usize, p: usize, q: usize, angle: f64) -> Vec<Complex64> {
    let (s, c) = angle.sin_cos();
    let mut g = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        g[i * n + i] = Complex64::new(1.0, 0.0);
    }
    g[p * n + p] = Complex64::new(c, 0.0);
    g[q * n + q] = Complex64::new(c, 0.0);
    g[p * n + q] = Complex64::new(-s, 0.0);
    g[q * n + p] = Complex64::new(s, 0.0);
    g
}

/// `t -> G(t) p G(t)^*` for `G(t)` the ordered product of Givens rotations
/// by `angle * t`. Lipschitz with constant `2 sum |angle|`.
pub fn rotation_family(
    n: usize,
    p: Vec<Complex64>,
    rotations: Vec<(usize, usize, f64)>,
) -> Result<IdempotentPath<Vec<Complex64>>> {
    let m = path_instance(n)?;
    let hint = 2.0 * rotations.iter().map(|r| r.2.abs()).sum::<f64>();
    Ok(IdempotentPath::new(
        move |t| {
            let g = rotations.iter().fold(m.one(), |acc, &(a, b, angle)| {
                m.mul(&acc, &givens(n, a, b, angle * t))
            });
            m.mul(&m.mul(&g, &p), &m.adjoint(&g))
        },
        hint,
    ))
}

/// `R(pi t / 2) diag(1, 0, ...) R(pi t / 2)^{-1}`, a quarter turn of a
/// rank-one projector; its Lipschitz constant is `pi / 2`.
pub fn rotation_path(n: usize) -> Result<IdempotentPath<Vec<Complex64>>> {
    if n < 2 {
        return Err(Error::OutOfRange {
            what: "n",
            value: n as u64,
            min: 2,
            max: u64::MAX,
        });
    }
    let m = path_instance(n)?;
    let mut d = vec![0.0; n];
    d[0] = 1.0;
    let p = m.real_diag(&d);
    let path = rotation_family(n, p, vec![(0, 1, FRAC_PI_2)])?;
    Ok(IdempotentPath {
        lipschitz_hint: FRAC_PI_2,
        ..path
    })
}

pub fn constant_path<E: Clone + Send + Sync + 'static>(e: E) -> IdempotentPath<E> {
    IdempotentPath::new(move |_| e.clone(), 0.0)
}

/// `diag(1, 0, ...)` on `[0, 1/2)` and `0` after; no finite Lipschitz
/// constant.
pub fn jump_path(n: usize) -> Result<IdempotentPath<Vec<Complex64>>> {
    let m = path_instance(n)?;
    let mut d = vec![0.0; n];
    d[0] = 1.0;
    let before = m.real_diag(&d);
    let after = m.zero();
    Ok(IdempotentPath::new(
        move |t| if t < 0.5 { before.clone() } else { after.clone() },
        f64::INFINITY,
    ))
}

/// A random smooth path conjugating a random coordinate projector by
/// Givens rotations with angles in `[-1, 1]`.
pub fn random_path<G: Rng + ?Sized>(
    n: usize,
    rng: &mut G,
) -> Result<(IdempotentPath<Vec<Complex64>>, usize)> {
    let m = path_instance(n)?;
    let rank = if n > 1 { rng.random_range(1..n) } else { 1 };
    let p = crate::instances::random::permuted_diagonal(&m, rank, rng);
    let rotations = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .map(|(a, b)| (a, b, rng.random_range(-1.0..=1.0)))
        .collect();
    Ok((rotation_family(n, p, rotations)?, rank))
}

pub const MAX_PATH_SIZE: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct HomotopyTrial {
    pub trial: usize,
    pub rank: usize,
    pub segments: usize,
    pub max_segment_depth: usize,
    pub key_start: Option<ClassKey>,
    pub key_end: Option<ClassKey>,
    pub error: Option<String>,
    #[serde(skip)]
    pub cert: Certificate,
}

impl HomotopyTrial {
    pub fn failed(&self) -> bool {
        self.error.is_some() || !self.cert.valid() || self.key_start != self.key_end
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HomotopyReport {
    pub n: usize,
    pub trials: Vec<HomotopyTrial>,
    pub failures: usize,
}

/// Trivializes random smooth paths in `Mat_n(C)` and checks that the
/// endpoint classes agree.
pub fn homotopy_invariance_experiment(
    n: usize,
    trials: usize,
    seed: u64,
    max_depth: usize,
    tol: f64,
    exec: Execution,
) -> Result<HomotopyReport> {
    if !(1..=MAX_PATH_SIZE).contains(&n) {
        return Err(Error::OutOfRange {
            what: "n",
            value: n as u64,
            min: 1,
            max: MAX_PATH_SIZE as u64,
        });
    }
    let m = path_instance(n)?;
    let trials = map_range(exec, trials, |trial| {
        let mut rng = trial_rng(seed, trial as u64);
        let mut out = HomotopyTrial {
            trial,
            rank: 0,
            segments: 0,
            max_segment_depth: 0,
            key_start: None,
            key_end: None,
            error: None,
            cert: Certificate::new(),
        };
        let mut run = |out: &mut HomotopyTrial| -> Result<()> {
            let (path, rank) = random_path(n, &mut rng)?;
            out.rank = rank;
            out.key_start = Some(m.class_key(&path.sample(0.0))?.0);
            out.key_end = Some(m.class_key(&path.sample(1.0))?.0);
            let r = path_trivialize(&m, &path, max_depth, tol)?;
            out.segments = r.segments.len();
            out.max_segment_depth = r.segments.iter().map(|s| s.depth).max().unwrap_or(0);
            out.cert = r.cert;
            Ok(())
        };
        if let Err(err) = run(&mut out) {
            out.error = Some(err.to_string());
        }
        out
    });
    Ok(HomotopyReport {
        n,
        failures: trials.iter().filter(|t| t.failed()).count(),
        trials,
    })
}
