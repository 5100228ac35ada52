//! Finite shadows of the `l1`-endomorphism ring `End_A(l1(A))`: column-sparse
//! operators, the zeroth-entry corner, the finite collapse of `B e B`, and
//! the Eilenberg swindle bijection.

use std::collections::BTreeMap;

use num::{BigInt, One, Zero};
use serde::Serialize;

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::instances::MatrixAlgebra;
use crate::integers::ScaledIntegers;
use crate::norm::NormScalar;
use crate::ring::{BanachRing, NormedGroup};

pub const MAX_SWINDLE_SUPPORT: usize = 1 << 16;

/// A column-finite operator on `l1(A)`: column `j` is the image of the
/// basis vector `delta_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct EndOperator<E> {
    pub columns: BTreeMap<usize, Vec<(usize, E)>>,
    pub declared_norm: f64,
}

/// Max over columns of the `l1` column sum.
pub fn end_norm<R: NormedGroup>(inner: &R, op: &EndOperator<R::Elem>) -> R::Norm {
    op.columns
        .values()
        .map(|col| {
            col.iter()
                .fold(R::Norm::zero(), |acc, (_, x)| acc + inner.norm(x))
        })
        .fold(R::Norm::zero(), R::Norm::max_of)
}

impl<E: Clone + PartialEq> EndOperator<E> {
    /// Builds an operator, merging repeated rows and recording its norm.
    pub fn new<R: NormedGroup<Elem = E>>(
        inner: &R,
        columns: impl IntoIterator<Item = (usize, Vec<(usize, E)>)>,
    ) -> Self {
        let columns = columns
            .into_iter()
            .map(|(j, col)| (j, merge_rows(inner, col)))
            .filter(|(_, col)| !col.is_empty())
            .collect();
        let mut op = Self {
            columns,
            declared_norm: 0.0,
        };
        op.declared_norm = end_norm(inner, &op).to_f64();
        op
    }

    pub fn zero() -> Self {
        Self {
            columns: BTreeMap::new(),
            declared_norm: 0.0,
        }
    }

    /// The identity on coordinates `0..size`.
    pub fn identity<R: BanachRing<Elem = E>>(inner: &R, size: usize) -> Self {
        Self::new(inner, (0..size).map(|j| (j, vec![(j, inner.one())])))
    }

    /// The single entry `x` at `(row, col)`.
    pub fn entry<R: NormedGroup<Elem = E>>(inner: &R, row: usize, col: usize, x: E) -> Self {
        Self::new(inner, [(col, vec![(row, x)])])
    }

    pub fn get<R: NormedGroup<Elem = E>>(&self, inner: &R, row: usize, col: usize) -> E {
        self.columns
            .get(&col)
            .and_then(|c| c.iter().find(|(r, _)| *r == row))
            .map_or_else(|| inner.zero(), |(_, x)| x.clone())
    }

    /// The image of `delta_col`.
    pub fn column(&self, col: usize) -> &[(usize, E)] {
        self.columns.get(&col).map_or(&[], Vec::as_slice)
    }
}

fn merge_rows<R: NormedGroup>(inner: &R, col: Vec<(usize, R::Elem)>) -> Vec<(usize, R::Elem)> {
    let mut rows: BTreeMap<usize, R::Elem> = BTreeMap::new();
    for (r, x) in col {
        let merged = match rows.remove(&r) {
            Some(y) => inner.add(&y, &x),
            None => x,
        };
        rows.insert(r, merged);
    }
    rows.into_iter()
        .filter(|(_, x)| !inner.norm(x).is_zero())
        .collect()
}

/// `a b`, column by column.
pub fn compose<R: BanachRing>(
    inner: &R,
    a: &EndOperator<R::Elem>,
    b: &EndOperator<R::Elem>,
) -> EndOperator<R::Elem> {
    EndOperator::new(
        inner,
        b.columns.iter().map(|(&j, col)| {
            let image = col
                .iter()
                .flat_map(|(k, y)| a.column(*k).iter().map(move |(r, x)| (*r, inner.mul(x, y))))
                .collect();
            (j, image)
        }),
    )
}

/// The idempotent projecting onto one coordinate (the zeroth by default).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CornerIdempotent {
    pub index: usize,
}

impl CornerIdempotent {
    pub fn operator<R: BanachRing>(&self, inner: &R) -> EndOperator<R::Elem> {
        EndOperator::entry(inner, self.index, self.index, inner.one())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CornerRoundtrip<E> {
    pub entry: E,
    pub cert: Certificate,
}

/// The `(0,0)` entry of `b`, certifying `|e b e| = |b_00|` for the zeroth
/// corner `e`.
pub fn corner_roundtrip<R: BanachRing>(
    inner: &R,
    b: &EndOperator<R::Elem>,
) -> CornerRoundtrip<R::Elem> {
    let e = CornerIdempotent::default().operator(inner);
    let ebe = compose(inner, &compose(inner, &e, b), &e);
    let entry = b.get(inner, 0, 0);
    let lhs = end_norm(inner, &ebe);
    let rhs = inner.norm(&entry);
    let mut cert = Certificate::new();
    let gap = if lhs == rhs {
        0.0
    } else {
        (lhs.to_f64() - rhs.to_f64()).abs().max(f64::MIN_POSITIVE)
    };
    cert.check("corner-isometry", gap, inner.slack());
    cert.check("corner-entry", ebe.get(inner, 0, 0).ne(&entry) as u8 as f64, 0.0);
    CornerRoundtrip { entry, cert }
}

/// `sum_j E_j0 e E_0j = 1` in `Mat_n(inner)`, with `e = E_00`.
#[derive(Clone, Debug, Serialize)]
pub struct CollapseCertificate {
    pub n: usize,
    /// Matrix-unit positions `((j, 0), (0, j))` of each pair.
    pub pairs: Vec<((usize, usize), (usize, usize))>,
    pub exact: bool,
    pub cert: Certificate,
}

/// Writes the identity of `Mat_n` as a sum through the corner `E_00`: the
/// ideal generated by `e` is everything, so the quotient by it vanishes at
/// every finite truncation.
pub fn finite_collapse_certificate<R: BanachRing + Clone>(
    inner: &R,
    n: usize,
) -> Result<CollapseCertificate> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "collapse size",
            value: 0,
            min: 1,
            max: u64::MAX,
        });
    }
    let m = MatrixAlgebra::col_l1(inner.clone(), n)?;
    let e = m.unit(0, 0);
    let mut sum = m.zero();
    let mut pairs = Vec::with_capacity(n);
    for j in 0..n {
        let a = m.unit(j, 0);
        let b = m.unit(0, j);
        sum = m.add(&sum, &m.mul(&m.mul(&a, &e), &b));
        pairs.push(((j, 0), (0, j)));
    }
    let exact = sum == m.one();
    let mut cert = Certificate::new();
    cert.check("collapse", m.dist(&sum, &m.one()), 0.0);
    cert.check("exact", (!exact) as u8 as f64, 0.0);
    Ok(CollapseCertificate {
        n,
        pairs,
        exact,
        cert,
    })
}

/// The two summands of `l1 (+) l1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Summand {
    First,
    Second,
}

/// `V: N |_| N -> N`, first summand to even slots, second to odd.
pub fn swindle_index(summand: Summand, k: usize) -> usize {
    match summand {
        Summand::First => 2 * k,
        Summand::Second => 2 * k + 1,
    }
}

pub fn swindle_preimage(m: usize) -> (Summand, usize) {
    if m.is_multiple_of(2) {
        (Summand::First, m / 2)
    } else {
        (Summand::Second, m / 2)
    }
}

/// Coordinate `i` of copy `c` in `l1(N x N) = l1(N)`, as `2^c (2i + 1) - 1`.
pub fn copy_index(copy: u32, i: usize) -> usize {
    ((2 * i + 1) << copy) - 1
}

pub fn copy_preimage(m: usize) -> (u32, usize) {
    let c = (m + 1).trailing_zeros();
    (c, (((m + 1) >> c) - 1) / 2)
}

/// `T(b) = b (+) b (+) ...` applied to `delta_m`.
fn apply_t(b: &EndOperator<BigInt>, m: usize) -> Vec<(usize, BigInt)> {
    let (c, i) = copy_preimage(m);
    b.column(i)
        .iter()
        .map(|(r, x)| (copy_index(c, *r), x.clone()))
        .collect()
}

fn normalize(mut v: Vec<(usize, BigInt)>) -> Vec<(usize, BigInt)> {
    v.sort_by_key(|(r, _)| *r);
    let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(v.len());
    for (r, x) in v {
        match out.last_mut() {
            Some((last, y)) if *last == r => *y += x,
            _ => out.push((r, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SwindleReport {
    pub support: usize,
    pub checked: usize,
    pub collisions: usize,
    pub roundtrip_failures: usize,
    pub identity_failures: usize,
    pub cert: Certificate,
}

/// A fixed column-finite integer operator on the first `columns`
/// coordinates, used as the swindle input.
pub fn swindle_test_operator(columns: usize) -> EndOperator<BigInt> {
    let z = ScaledIntegers::new(One::one()).expect("unit scale");
    EndOperator::new(
        &z,
        (0..columns).map(|i| {
            (
                i,
                vec![
                    (i, BigInt::from(1)),
                    (i + 1, BigInt::from(2)),
                    (2 * i, BigInt::from(-1)),
                    (i / 3, BigInt::from(i as i64 % 5 - 2)),
                ],
            )
        }),
    )
}

/// Verifies `V (b (+) T(b)) V^{-1} = T(b)` and that `V` is a bijection, on
/// every basis vector with index below `support`.
pub fn swindle_conjugator(support: usize) -> Result<SwindleReport> {
    swindle_conjugator_with(&swindle_test_operator(support.min(MAX_SWINDLE_SUPPORT)), support)
}

pub fn swindle_conjugator_with(b: &EndOperator<BigInt>, support: usize) -> Result<SwindleReport> {
    if !(1..=MAX_SWINDLE_SUPPORT).contains(&support) {
        return Err(Error::OutOfRange {
            what: "swindle support",
            value: support as u64,
            min: 1,
            max: MAX_SWINDLE_SUPPORT as u64,
        });
    }
    let mut hit = vec![false; support];
    let mut collisions = 0;
    let mut roundtrip_failures = 0;
    for summand in [Summand::First, Summand::Second] {
        for k in 0..support.div_ceil(2) {
            let m = swindle_index(summand, k);
            if m >= support {
                continue;
            }
            if std::mem::replace(&mut hit[m], true) {
                collisions += 1;
            }
            if swindle_preimage(m) != (summand, k) {
                roundtrip_failures += 1;
            }
        }
    }
    collisions += hit.iter().filter(|h| !**h).count();

    let mut identity_failures = 0;
    for m in 0..support {
        if copy_index(copy_preimage(m).0, copy_preimage(m).1) != m {
            roundtrip_failures += 1;
        }
        let (summand, k) = swindle_preimage(m);
        let image: Vec<(usize, BigInt)> = match summand {
            Summand::First => b
                .column(k)
                .iter()
                .map(|(r, x)| (swindle_index(Summand::First, *r), x.clone()))
                .collect(),
            Summand::Second => apply_t(b, k)
                .into_iter()
                .map(|(r, x)| (swindle_index(Summand::Second, r), x))
                .collect(),
        };
        if normalize(image) != normalize(apply_t(b, m)) {
            identity_failures += 1;
        }
    }
    let mut cert = Certificate::new();
    cert.check("collisions", collisions as f64, 0.0);
    cert.check("roundtrip", roundtrip_failures as f64, 0.0);
    cert.check("swindle-identity", identity_failures as f64, 0.0);
    Ok(SwindleReport {
        support,
        checked: support,
        collisions,
        roundtrip_failures,
        identity_failures,
        cert,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::ComplexScalars;
    use num::complex::Complex64;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn norms() {
        let id = EndOperator::identity(&ComplexScalars, 10);
        assert_eq!(end_norm(&ComplexScalars, &id), 1.0);
        let a = Complex64::new(3.0, 4.0);
        let stacked = EndOperator::new(&ComplexScalars, [(0, vec![(0, a), (1, a)])]);
        assert_eq!(end_norm(&ComplexScalars, &stacked), 10.0);
        assert_eq!(end_norm(&ComplexScalars, &EndOperator::zero()), 0.0);
        assert_eq!(stacked.declared_norm, 10.0);
    }

    #[test]
    fn corner() {
        let e = CornerIdempotent::default().operator(&ComplexScalars);
        assert_eq!(end_norm(&ComplexScalars, &e), 1.0);
        assert_eq!(compose(&ComplexScalars, &e, &e), e);

        let id = EndOperator::identity(&ComplexScalars, 4);
        let r = corner_roundtrip(&ComplexScalars, &id);
        assert_eq!(r.entry, c(1.0));
        assert!(r.cert.valid());

        let b = EndOperator::new(
            &ComplexScalars,
            [
                (0, vec![(0, c(-2.5)), (3, c(7.0))]),
                (1, vec![(0, c(9.0))]),
            ],
        );
        let r = corner_roundtrip(&ComplexScalars, &b);
        assert_eq!(r.entry, c(-2.5));
        assert!(r.cert.valid());

        let r = corner_roundtrip(&ComplexScalars, &EndOperator::zero());
        assert_eq!(r.entry, c(0.0));
        assert!(r.cert.valid());
    }

    #[test]
    fn collapse_small() {
        let one = finite_collapse_certificate(&ComplexScalars, 1).unwrap();
        assert_eq!(one.pairs, vec![((0, 0), (0, 0))]);
        assert!(one.exact);
        let three = finite_collapse_certificate(&ComplexScalars, 3).unwrap();
        assert_eq!(three.pairs.len(), 3);
        assert!(three.exact && three.cert.valid());
        let m2 = MatrixAlgebra::complex(2).unwrap();
        assert!(finite_collapse_certificate(&m2, 3).unwrap().exact);
        assert!(finite_collapse_certificate(&ComplexScalars, 0).is_err());
    }

    #[test]
    fn swindle_slots() {
        assert_eq!(swindle_index(Summand::First, 0), 0);
        assert_eq!(swindle_index(Summand::Second, 5), 11);
        for m in 0..1000 {
            let (c, i) = copy_preimage(m);
            assert_eq!(copy_index(c, i), m);
        }
        let r = swindle_conjugator(512).unwrap();
        assert!(r.cert.valid(), "{r:?}");
        assert!(swindle_conjugator(0).is_err());
        assert!(swindle_conjugator(MAX_SWINDLE_SUPPORT + 1).is_err());
    }

    #[test]
    fn swindle_detects_wrong_bookkeeping() {
        // A non-diagonal T would break the identity; check the test can fail.
        let b = swindle_test_operator(16);
        let m = 6;
        let (summand, k) = swindle_preimage(m);
        assert_eq!(summand, Summand::First);
        let lhs: Vec<_> = b
            .column(k)
            .iter()
            .map(|(r, x)| (swindle_index(Summand::Second, *r), x.clone()))
            .collect();
        assert_ne!(normalize(lhs), normalize(apply_t(&b, m)));
    }
}
