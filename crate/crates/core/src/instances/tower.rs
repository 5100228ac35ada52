//! Directed systems `A_0 -> A_1 -> ...` of Banach rings with isometric
//! connecting maps.

use num::complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{ComplexScalars, Descriptor, MatrixAlgebra, SampledFunctionAlgebra};
use crate::error::{Error, Result};
use crate::k0::{
    ClassKey, Classify, Generator, K0Group, K0Presentation, Relation,
};
use crate::ring::{NormedGroup, RealAlgebra, Sample};

pub const MAX_UHF_DEPTH: usize = 12;
pub const MAX_CANTOR_DEPTH: usize = 16;
/// Relations listed in a tower presentation before truncating.
pub const MAX_RELATIONS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TowerDescriptor {
    Uhf { depth: usize },
    Cantor { depth: usize },
    Constant { instance: Descriptor, depth: usize },
}

impl TowerDescriptor {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Descriptor(e.to_string()))
    }
}

/// A finite stretch `A_0 -> ... -> A_depth` of a directed system.
///
/// `connect(i, x)` maps level `i` to `i + 1`. `restrict(i, y)` maps level
/// `i + 1` back to `i` and is a left inverse of `connect(i, .)`.
pub trait Tower: Sync {
    type Ring: RealAlgebra + Classify + Sample + Sync;

    fn depth(&self) -> usize;
    fn level(&self, i: usize) -> &Self::Ring;
    fn connect(&self, i: usize, x: &<Self::Ring as NormedGroup>::Elem)
        -> <Self::Ring as NormedGroup>::Elem;
    fn restrict(&self, i: usize, y: &<Self::Ring as NormedGroup>::Elem)
        -> <Self::Ring as NormedGroup>::Elem;
    /// The class in the colimit of an idempotent at level `i`.
    fn colimit_key(&self, i: usize, e: &<Self::Ring as NormedGroup>::Elem) -> Result<ClassKey>;
    /// `K_0` of the colimit.
    fn k0(&self) -> K0Presentation;
    fn descriptor(&self) -> TowerDescriptor;

    /// The image of `x` from level `from` at level `to >= from`.
    fn push(
        &self,
        from: usize,
        to: usize,
        x: &<Self::Ring as NormedGroup>::Elem,
    ) -> <Self::Ring as NormedGroup>::Elem {
        let mut y = x.clone();
        for i in from..to {
            y = self.connect(i, &y);
        }
        y
    }

    /// Restriction from level `from` down to `to <= from`.
    fn pull(
        &self,
        from: usize,
        to: usize,
        x: &<Self::Ring as NormedGroup>::Elem,
    ) -> <Self::Ring as NormedGroup>::Elem {
        let mut y = x.clone();
        for i in (to..from).rev() {
            y = self.restrict(i, &y);
        }
        y
    }

    /// Norm in the colimit of `x` at level `i`. The shipped towers have
    /// isometric connecting maps, so this is the level norm.
    fn limit_norm(&self, i: usize, x: &<Self::Ring as NormedGroup>::Elem) -> f64 {
        self.level(i).norm_f64(x)
    }

    /// Colimit distance between `x` at level `i` and `y` at level `j`.
    fn limit_dist(
        &self,
        i: usize,
        x: &<Self::Ring as NormedGroup>::Elem,
        j: usize,
        y: &<Self::Ring as NormedGroup>::Elem,
    ) -> f64 {
        let k = i.max(j);
        self.level(k).dist(&self.push(i, k, x), &self.push(j, k, y))
    }

    fn random_idempotent<G: Rng + ?Sized>(
        &self,
        i: usize,
        rng: &mut G,
    ) -> Result<<Self::Ring as NormedGroup>::Elem> {
        self.level(i).random_idempotent(rng)
    }
}

/// `Mat_1(C) -> Mat_2(C) -> Mat_4(C) -> ...` with `a -> diag(a, a)`.
#[derive(Clone, Debug)]
pub struct UhfTower {
    levels: Vec<MatrixAlgebra<ComplexScalars>>,
}

pub fn make_uhf_tower(depth: usize) -> Result<UhfTower> {
    if !(1..=MAX_UHF_DEPTH).contains(&depth) {
        return Err(Error::OutOfRange {
            what: "uhf depth",
            value: depth as u64,
            min: 1,
            max: MAX_UHF_DEPTH as u64,
        });
    }
    let levels = (0..=depth)
        .map(|i| MatrixAlgebra::complex(1 << i))
        .collect::<Result<_>>()?;
    Ok(UhfTower { levels })
}

impl Tower for UhfTower {
    type Ring = MatrixAlgebra<ComplexScalars>;

    fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    fn level(&self, i: usize) -> &Self::Ring {
        &self.levels[i]
    }

    fn connect(&self, i: usize, x: &Vec<Complex64>) -> Vec<Complex64> {
        let m = &self.levels[i];
        m.block_diag(x, m, x)
    }

    fn restrict(&self, i: usize, y: &Vec<Complex64>) -> Vec<Complex64> {
        let b = 1 << i;
        let big = &self.levels[i + 1];
        let top = big.block(y, b, 0, 0);
        let bottom = big.block(y, b, 1, 1);
        top.iter().zip(&bottom).map(|(p, q)| (p + q) * 0.5).collect()
    }

    fn colimit_key(&self, i: usize, e: &Vec<Complex64>) -> Result<ClassKey> {
        let (key, _) = self.levels[i].class_key(e)?;
        let ClassKey::Rank { rank } = key else {
            unreachable!("matrix keys are ranks")
        };
        Ok(ClassKey::normalized_trace(rank, 1 << i))
    }

    fn k0(&self) -> K0Presentation {
        let depth = self.depth();
        K0Presentation {
            group: K0Group::DyadicRationals,
            generators: (0..=depth).map(|level| Generator::UhfRankOne { level }).collect(),
            relations: (0..depth)
                .map(|level| Relation {
                    lhs: Generator::UhfRankOne { level },
                    rhs: vec![Generator::UhfRankOne { level: level + 1 }; 2],
                })
                .collect(),
            relations_truncated: false,
        }
    }

    fn descriptor(&self) -> TowerDescriptor {
        TowerDescriptor::Uhf {
            depth: self.depth(),
        }
    }
}

/// `C^1 -> C^2 -> C^4 -> ...`: functions on `{0,1}^i` pulled back along
/// the coordinate projections, with colimit `C(Cantor set)`.
#[derive(Clone, Debug)]
pub struct CantorTower {
    levels: Vec<SampledFunctionAlgebra<ComplexScalars>>,
}

pub fn make_cantor_tower(depth: usize) -> Result<CantorTower> {
    if depth > MAX_CANTOR_DEPTH {
        return Err(Error::OutOfRange {
            what: "cantor depth",
            value: depth as u64,
            min: 0,
            max: MAX_CANTOR_DEPTH as u64,
        });
    }
    let levels = (0..=depth)
        .map(|i| SampledFunctionAlgebra::dyadic(i as u32, ComplexScalars))
        .collect();
    Ok(CantorTower { levels })
}

/// Merges equal sibling pairs until none remain.
fn reduce_pointwise(mut values: Vec<u64>) -> Vec<u64> {
    while values.len() > 1 && values.chunks(2).all(|p| p[0] == p[1]) {
        values = values.chunks(2).map(|p| p[0]).collect();
    }
    values
}

impl Tower for CantorTower {
    type Ring = SampledFunctionAlgebra<ComplexScalars>;

    fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    fn level(&self, i: usize) -> &Self::Ring {
        &self.levels[i]
    }

    fn connect(&self, _i: usize, x: &Vec<Complex64>) -> Vec<Complex64> {
        (0..2 * x.len()).map(|m| x[m >> 1]).collect()
    }

    fn restrict(&self, _i: usize, y: &Vec<Complex64>) -> Vec<Complex64> {
        y.chunks(2).map(|p| (p[0] + p[1]) * 0.5).collect()
    }

    fn colimit_key(&self, i: usize, e: &Vec<Complex64>) -> Result<ClassKey> {
        let (key, _) = self.levels[i].class_key(e)?;
        let ClassKey::Pointwise { values } = key else {
            unreachable!("sampled keys are pointwise")
        };
        Ok(ClassKey::Pointwise {
            values: reduce_pointwise(values),
        })
    }

    fn k0(&self) -> K0Presentation {
        let depth = self.depth();
        let mut relations = Vec::new();
        let mut truncated = false;
        'outer: for level in 0..depth {
            for index in 0..1usize << level {
                if relations.len() == MAX_RELATIONS {
                    truncated = true;
                    break 'outer;
                }
                relations.push(Relation {
                    lhs: Generator::Cylinder { level, index },
                    rhs: vec![
                        Generator::Cylinder {
                            level: level + 1,
                            index: 2 * index,
                        },
                        Generator::Cylinder {
                            level: level + 1,
                            index: 2 * index + 1,
                        },
                    ],
                });
            }
        }
        K0Presentation {
            group: K0Group::LocallyConstantCantor,
            generators: (0..1usize << depth)
                .map(|index| Generator::Cylinder {
                    level: depth,
                    index,
                })
                .collect(),
            relations,
            relations_truncated: truncated,
        }
    }

    fn descriptor(&self) -> TowerDescriptor {
        TowerDescriptor::Cantor {
            depth: self.depth(),
        }
    }
}

/// `A -> A -> ...` with identity maps.
#[derive(Clone, Debug)]
pub struct ConstantTower<R> {
    ring: R,
    depth: usize,
}

impl<R> ConstantTower<R> {
    pub fn new(ring: R, depth: usize) -> Self {
        Self { ring, depth }
    }
}

impl<R: RealAlgebra + Classify + Sample + Sync> Tower for ConstantTower<R> {
    type Ring = R;

    fn depth(&self) -> usize {
        self.depth
    }

    fn level(&self, _i: usize) -> &R {
        &self.ring
    }

    fn connect(&self, _i: usize, x: &R::Elem) -> R::Elem {
        x.clone()
    }

    fn restrict(&self, _i: usize, y: &R::Elem) -> R::Elem {
        y.clone()
    }

    fn colimit_key(&self, _i: usize, e: &R::Elem) -> Result<ClassKey> {
        Ok(self.ring.class_key(e)?.0)
    }

    fn k0(&self) -> K0Presentation {
        self.ring.k0()
    }

    fn descriptor(&self) -> TowerDescriptor {
        TowerDescriptor::Constant {
            instance: self.ring.descriptor(),
            depth: self.depth,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::k0::GroupElement;
    use crate::ring::BanachRing;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn uhf_levels_and_maps() {
        let t = make_uhf_tower(1).unwrap();
        assert_eq!(t.level(0).size(), 1);
        assert_eq!(t.level(1).size(), 2);
        let x = vec![c(3.0)];
        assert_eq!(t.connect(0, &x), vec![c(3.0), c(0.0), c(0.0), c(3.0)]);
        assert_eq!(t.restrict(0, &t.connect(0, &x)), x);
        assert!(make_uhf_tower(13).is_err());
        assert!(make_uhf_tower(0).is_err());
    }

    #[test]
    fn uhf_connect_is_isometric_homomorphism() {
        let t = make_uhf_tower(3).unwrap();
        let mut rng = crate::instances::random::trial_rng(1, 0);
        let m = t.level(2);
        let x = m.sample(&mut rng);
        let y = m.sample(&mut rng);
        let big = t.level(3);
        assert!((big.norm_f64(&t.connect(2, &x)) - m.norm_f64(&x)).abs() < 1e-12);
        let lhs = t.connect(2, &m.mul(&x, &y));
        let rhs = big.mul(&t.connect(2, &x), &t.connect(2, &y));
        assert!(big.dist(&lhs, &rhs) < 1e-12);
        assert_eq!(t.connect(2, &m.one()), big.one());
    }

    #[test]
    fn uhf_key_is_normalized_trace() {
        let t = make_uhf_tower(6).unwrap();
        let mut d = vec![0.0; 64];
        d[3] = 1.0;
        d[40] = 1.0;
        let e = t.level(6).real_diag(&d);
        assert_eq!(
            t.colimit_key(6, &e).unwrap(),
            ClassKey::NormalizedTrace { numer: 1, denom: 32 }
        );
        let k = t.k0();
        assert_eq!(k.group.to_string(), "Z[1/2]");
        assert_eq!(
            k.class_map(&t.colimit_key(6, &e).unwrap()).unwrap(),
            GroupElement::Dyadic { numer: 1, denom: 32 }
        );
    }

    #[test]
    fn cantor_levels_and_keys() {
        let t = make_cantor_tower(0).unwrap();
        assert_eq!(t.depth(), 0);
        assert_eq!(t.level(0).len(), 1);
        let t = make_cantor_tower(3).unwrap();
        let x = vec![c(1.0), c(0.0)];
        let y = t.push(1, 3, &x);
        assert_eq!(y.len(), 8);
        assert_eq!(t.colimit_key(3, &y).unwrap(), t.colimit_key(1, &x).unwrap());
        assert_eq!(t.pull(3, 1, &y), x);
        assert!(make_cantor_tower(17).is_err());
        let k = t.k0();
        assert_eq!(k.group.to_string(), "C(Cantor,Z)");
        assert_eq!(k.relations.len(), 7);
        assert!(!k.relations_truncated);
    }

    #[test]
    fn constant_tower_is_identity() {
        let m = MatrixAlgebra::complex(2).unwrap();
        let t = ConstantTower::new(m.clone(), 3);
        let e = m.real_diag(&[1.0, 0.0]);
        assert_eq!(t.push(0, 3, &e), e);
        assert_eq!(t.colimit_key(2, &e).unwrap(), ClassKey::Rank { rank: 1 });
    }

    #[test]
    fn descriptors_parse() {
        let d = TowerDescriptor::from_json_str(r#"{"kind":"uhf","depth":6}"#).unwrap();
        assert_eq!(d, TowerDescriptor::Uhf { depth: 6 });
        assert!(TowerDescriptor::from_json_str(r#"{"kind":"uhf","depth":6,"x":1}"#).is_err());
        let d = TowerDescriptor::from_json_str(
            r#"{"kind":"constant","depth":2,"instance":{"kind":"complex"}}"#,
        )
        .unwrap();
        assert_eq!(
            d,
            TowerDescriptor::Constant {
                instance: Descriptor::Complex,
                depth: 2
            }
        );
    }
}
