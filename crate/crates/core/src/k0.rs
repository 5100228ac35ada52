//! Idempotent classes `E(A)`, equivalence testing, direct sums and `K_0`
//! presentations for the instances with complete class keys.

use std::fmt;

use num::complex::Complex64;
use num::integer::Integer;
use rand::Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::calculus::{
    app_conj_bound, conjugating_unit, CertifiedIdempotent, CertifiedUnit,
};
use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::instances::random::random_idempotent;
use crate::instances::{linalg, ComplexScalars, MatrixAlgebra, SampledFunctionAlgebra};
use crate::ring::{BanachRing, NormedGroup, RealAlgebra};

/// Traces of idempotents are integers; this is how far from one a
/// computed trace may be.
pub const RANK_TOL: f64 = 1e-6;

/// A conjugation-invariant key for an idempotent class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClassKey {
    /// Rank (= trace) of an idempotent matrix over `C`.
    Rank { rank: u64 },
    /// Pointwise rank of an idempotent in a sampled commutative instance.
    Pointwise { values: Vec<u64> },
    /// Normalized trace `rank / size` on a UHF level, in lowest terms.
    NormalizedTrace { numer: u64, denom: u64 },
}

impl ClassKey {
    pub fn normalized_trace(rank: u64, size: u64) -> Self {
        let g = rank.gcd(&size).max(1);
        ClassKey::NormalizedTrace {
            numer: rank / g,
            denom: size / g,
        }
    }
}

/// Instances whose idempotent classes are decided by a complete key.
pub trait Classify: BanachRing {
    /// The key of `e`, with a certificate that the rounding behind it is
    /// sound. Fails if `e` is not numerically an idempotent.
    fn class_key(&self, e: &Self::Elem) -> Result<(ClassKey, Certificate)>;

    /// A unit conjugating `e` to `f` built from their structure, for
    /// idempotents with equal keys that are not close enough for the
    /// proximity construction.
    fn explicit_conjugator(
        &self,
        _e: &Self::Elem,
        _f: &Self::Elem,
        _tol: f64,
    ) -> Result<Option<CertifiedUnit<Self::Elem>>> {
        Ok(None)
    }

    fn k0(&self) -> K0Presentation;

    fn random_idempotent<G: Rng + ?Sized>(&self, rng: &mut G) -> Result<Self::Elem>;
}

fn round_rank(value: Complex64, max: u64, cert: &mut Certificate) -> Result<u64> {
    let rank = value.re.round();
    let gap = (value.re - rank).abs().max(value.im.abs());
    cert.check("rank-gap", gap, RANK_TOL);
    cert.note("rounding-gap", gap, 0.5);
    if gap > RANK_TOL || rank < 0.0 || rank > max as f64 {
        return Err(Error::NotIdempotent {
            defect: gap,
            tol: RANK_TOL,
        });
    }
    Ok(rank as u64)
}

impl Classify for ComplexScalars {
    fn class_key(&self, e: &Complex64) -> Result<(ClassKey, Certificate)> {
        let mut cert = Certificate::new();
        let rank = round_rank(*e, 1, &mut cert)?;
        Ok((ClassKey::Rank { rank }, cert))
    }

    fn k0(&self) -> K0Presentation {
        K0Presentation::matrices(1)
    }

    fn random_idempotent<G: Rng + ?Sized>(&self, rng: &mut G) -> Result<Complex64> {
        Ok(Complex64::new(if rng.random_bool(0.5) { 1.0 } else { 0.0 }, 0.0))
    }
}

/// Basis matrix `[range(e) | range(1 - e)]` (columns), so that
/// `e = S diag(1_r, 0) S^{-1}`.
fn adapted_basis(m: &MatrixAlgebra<ComplexScalars>, e: &[Complex64], rank: usize) -> Vec<Complex64> {
    let n = m.size();
    let not_e = m.sub(&m.one(), &e.to_vec());
    let range = linalg::independent_columns(n, e, rank);
    let kernel = linalg::independent_columns(n, &not_e, n - rank);
    let cols: Vec<(&[Complex64], usize)> = range
        .iter()
        .map(|&j| (e, j))
        .chain(kernel.iter().map(|&j| (not_e.as_slice(), j)))
        .collect();
    m.from_fn(|i, k| cols[k].0[i * n + cols[k].1])
}

impl Classify for MatrixAlgebra<ComplexScalars> {
    fn class_key(&self, e: &Vec<Complex64>) -> Result<(ClassKey, Certificate)> {
        let mut cert = Certificate::new();
        let rank = round_rank(self.trace(e), self.size() as u64, &mut cert)?;
        Ok((ClassKey::Rank { rank }, cert))
    }

    fn explicit_conjugator(
        &self,
        e: &Vec<Complex64>,
        f: &Vec<Complex64>,
        tol: f64,
    ) -> Result<Option<CertifiedUnit<Vec<Complex64>>>> {
        let (ke, _) = self.class_key(e)?;
        let (kf, _) = self.class_key(f)?;
        let ClassKey::Rank { rank } = ke else {
            return Ok(None);
        };
        if ke != kf {
            return Ok(None);
        }
        let s_e = adapted_basis(self, e, rank as usize);
        let s_f = adapted_basis(self, f, rank as usize);
        let (Ok(s_e_inv), Ok(s_f_inv)) = (self.inverse(&s_e), self.inverse(&s_f)) else {
            return Ok(None);
        };
        // e u = S_e D S_f^{-1} = u f
        let u = self.mul(&s_e, &s_f_inv);
        let u_inv = self.mul(&s_f, &s_e_inv);
        let mut unit = CertifiedUnit {
            u,
            u_inv,
            cert: Certificate::new(),
        };
        let scale = 1.0 + self.norm_f64(&unit.u) * self.norm_f64(&unit.u_inv);
        unit.certify_residuals(self, tol * scale + self.slack());
        let intertwine = self.dist(&self.mul(e, &unit.u), &self.mul(&unit.u, f));
        let allowance =
            tol * (1.0 + self.norm_f64(e) + self.norm_f64(f)) * (1.0 + self.norm_f64(&unit.u));
        unit.cert.check("intertwine", intertwine, allowance + self.slack());
        Ok(Some(unit))
    }

    fn k0(&self) -> K0Presentation {
        K0Presentation::matrices(self.size())
    }

    fn random_idempotent<G: Rng + ?Sized>(&self, rng: &mut G) -> Result<Vec<Complex64>> {
        let rank = rng.random_range(0..=self.size());
        random_idempotent(self, rank, 0.3, rng)
    }
}

impl Classify for SampledFunctionAlgebra<ComplexScalars> {
    fn class_key(&self, e: &Vec<Complex64>) -> Result<(ClassKey, Certificate)> {
        let mut cert = Certificate::new();
        let mut worst = Certificate::new();
        let values = e
            .iter()
            .map(|z| round_rank(*z, 1, &mut worst))
            .collect::<Result<Vec<u64>>>()?;
        let gap = worst.entries().iter().map(|e| e.lhs).fold(0.0, f64::max);
        cert.check("rank-gap", gap, RANK_TOL);
        Ok((ClassKey::Pointwise { values }, cert))
    }

    fn k0(&self) -> K0Presentation {
        let points = self.len();
        K0Presentation {
            group: K0Group::Free { rank: points },
            generators: (0..points)
                .map(|index| Generator::Point { index, points })
                .collect(),
            relations: Vec::new(),
            relations_truncated: false,
        }
    }

    fn random_idempotent<G: Rng + ?Sized>(&self, rng: &mut G) -> Result<Vec<Complex64>> {
        Ok((0..self.len())
            .map(|_| Complex64::new(if rng.random_bool(0.5) { 1.0 } else { 0.0 }, 0.0))
            .collect())
    }
}

/// Outcome of an equivalence test.
#[derive(Clone, Debug, PartialEq)]
pub enum Equivalence<E> {
    /// A certified `u` with `eu = uf`.
    Yes(CertifiedUnit<E>),
    /// Different class keys.
    No { left: ClassKey, right: ClassKey },
    Unknown,
}

impl<E> Equivalence<E> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Equivalence::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Equivalence::No { .. })
    }
}

/// Decides whether `e` and `f` are conjugate.
///
/// Differing keys answer "no". Otherwise the proximity unit
/// `ef + (1-e)(1-f)` is tried when `2|e||e-f| + |e-f|^2 < 1`, then the
/// instance's explicit construction. Never searches.
pub fn are_equivalent<R: Classify>(
    instance: &R,
    e: &CertifiedIdempotent<R::Elem>,
    f: &CertifiedIdempotent<R::Elem>,
    tol: f64,
) -> Result<Equivalence<R::Elem>> {
    let (ke, _) = instance.class_key(&e.e)?;
    let (kf, _) = instance.class_key(&f.e)?;
    if ke != kf {
        return Ok(Equivalence::No {
            left: ke,
            right: kf,
        });
    }
    let bound = app_conj_bound(instance.norm_f64(&e.e), instance.dist(&e.e, &f.e));
    if bound < 1.0 {
        if let Ok(unit) = conjugating_unit(instance, e, f, tol) {
            if unit.valid() {
                return Ok(Equivalence::Yes(unit));
            }
        }
    }
    match instance.explicit_conjugator(&e.e, &f.e, tol)? {
        Some(unit) if unit.valid() => Ok(Equivalence::Yes(unit)),
        _ => Ok(Equivalence::Unknown),
    }
}

/// `e (+) f` in `Mat_{m+n}`.
/// The sum algebra and the block-diagonal idempotent.
pub type DirectSum<R> = (MatrixAlgebra<R>, CertifiedIdempotent<Vec<<R as NormedGroup>::Elem>>);

pub fn direct_sum<R: BanachRing + Clone>(
    left: &MatrixAlgebra<R>,
    e: &CertifiedIdempotent<Vec<R::Elem>>,
    right: &MatrixAlgebra<R>,
    f: &CertifiedIdempotent<Vec<R::Elem>>,
) -> Result<DirectSum<R>> {
    if left.inner().descriptor() != right.inner().descriptor() {
        return Err(Error::InstanceMismatch(format!(
            "{:?} vs {:?}",
            left.inner().descriptor(),
            right.inner().descriptor()
        )));
    }
    if left.norm_kind() != right.norm_kind() {
        return Err(Error::InstanceMismatch("matrix norms differ".into()));
    }
    let sum = left.resized(left.size() + right.size())?;
    let block = left.block_diag(&e.e, right, &f.e);
    let tol = e.defect().max(0.0) + f.defect().max(0.0);
    let idem = CertifiedIdempotent::measure(&sum, block, tol);
    Ok((sum, idem))
}

/// The abelian groups `K_0` takes on supported instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum K0Group {
    Free { rank: usize },
    /// `Z[1/2] = colim(Z --2--> Z --2--> ...)`.
    DyadicRationals,
    /// Locally constant integer functions on the Cantor set.
    LocallyConstantCantor,
}

impl fmt::Display for K0Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            K0Group::Free { rank: 0 } => write!(f, "0"),
            K0Group::Free { rank: 1 } => write!(f, "Z"),
            K0Group::Free { rank } => write!(f, "Z^{rank}"),
            K0Group::DyadicRationals => write!(f, "Z[1/2]"),
            K0Group::LocallyConstantCantor => write!(f, "C(Cantor,Z)"),
        }
    }
}

impl Serialize for K0Group {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Generator {
    /// A rank-one idempotent in `Mat_size`.
    RankOne { size: usize },
    /// The indicator of one grid point.
    Point { index: usize, points: usize },
    /// A rank-one idempotent at a UHF level.
    UhfRankOne { level: usize },
    /// The indicator of a cylinder set at a Cantor level.
    Cylinder { level: usize, index: usize },
}

/// `[lhs] = sum [rhs]`, a merge imposed by stabilization or by the
/// connecting maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub lhs: Generator,
    pub rhs: Vec<Generator>,
}

/// Element of a [`K0Group`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupElement {
    Integers { values: Vec<i64> },
    Dyadic { numer: i64, denom: u64 },
    LocallyConstant { level: usize, values: Vec<i64> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct K0Presentation {
    pub group: K0Group,
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
    pub relations_truncated: bool,
}

impl K0Presentation {
    /// `K_0(Mat_n(C)) = Z`, generated by a rank-one class; stabilization
    /// `e -> e (+) 0` identifies it with the rank-one class of `Mat_{n+1}`.
    pub fn matrices(n: usize) -> Self {
        K0Presentation {
            group: K0Group::Free { rank: 1 },
            generators: vec![Generator::RankOne { size: n }],
            relations: vec![Relation {
                lhs: Generator::RankOne { size: n },
                rhs: vec![Generator::RankOne { size: n + 1 }],
            }],
            relations_truncated: false,
        }
    }

    /// The image of a class key in the group.
    pub fn class_map(&self, key: &ClassKey) -> Result<GroupElement> {
        match (&self.group, key) {
            (K0Group::Free { rank: 1 }, ClassKey::Rank { rank }) => Ok(GroupElement::Integers {
                values: vec![*rank as i64],
            }),
            (K0Group::Free { rank }, ClassKey::Pointwise { values }) if values.len() == *rank => {
                Ok(GroupElement::Integers {
                    values: values.iter().map(|&v| v as i64).collect(),
                })
            }
            (K0Group::DyadicRationals, ClassKey::NormalizedTrace { numer, denom }) => {
                Ok(GroupElement::Dyadic {
                    numer: *numer as i64,
                    denom: *denom,
                })
            }
            (K0Group::LocallyConstantCantor, ClassKey::Pointwise { values })
                if values.len().is_power_of_two() =>
            {
                Ok(GroupElement::LocallyConstant {
                    level: values.len().trailing_zeros() as usize,
                    values: values.iter().map(|&v| v as i64).collect(),
                })
            }
            (group, key) => Err(Error::Unsupported(format!(
                "class key {key:?} does not map into {group}"
            ))),
        }
    }
}

/// `K_0` of a supported instance.
pub fn k0_of_instance<R: Classify>(instance: &R) -> K0Presentation {
    instance.k0()
}

/// The class of a certified idempotent: its key and the certificate.
pub fn idempotent_class<R: Classify>(
    instance: &R,
    e: &CertifiedIdempotent<R::Elem>,
) -> Result<(ClassKey, Certificate)> {
    instance.class_key(&e.e)
}

/// `u^{-1} e u` for a certified unit.
pub fn conjugate<R: BanachRing>(
    instance: &R,
    unit: &CertifiedUnit<R::Elem>,
    e: &R::Elem,
) -> R::Elem {
    instance.mul(&instance.mul(&unit.u_inv, e), &unit.u)
}

/// Identity matrix scaled, used by tests and experiments.
pub fn scalar_matrix(m: &MatrixAlgebra<ComplexScalars>, c: f64) -> Vec<Complex64> {
    m.real(c)
}
