//! Norm-axiom audits and the l1 coproduct norm.

use num::{One, Zero};

use crate::certificate::Certificate;
use crate::norm::NormScalar;
use crate::ring::{BanachRing, NormedGroup};

/// Worst case of an inequality family `lhs <= rhs`, tracked exactly in the
/// instance's norm scalar.
struct Worst<N> {
    lhs: N,
    rhs: N,
    failed: bool,
    gap: f64,
}

impl<N: NormScalar> Worst<N> {
    fn offer(slot: &mut Option<Self>, lhs: N, rhs: N, slack: f64) {
        let gap = lhs.to_f64() - rhs.to_f64();
        let failed = !(lhs <= rhs) && (slack == 0.0 || !(gap <= slack));
        let replace = match slot {
            None => true,
            Some(w) => (failed && !w.failed) || (failed == w.failed && gap > w.gap),
        };
        if replace {
            *slot = Some(Worst {
                lhs,
                rhs,
                failed,
                gap,
            });
        }
    }

    fn record(slot: Option<Self>, name: &str, slack: f64, cert: &mut Certificate) {
        let Some(w) = slot else { return };
        let lhs = w.lhs.to_f64();
        let mut rhs = w.rhs.to_f64();
        if !w.failed {
            rhs += slack;
        } else if lhs <= rhs {
            // exact failure hidden by rounding
            rhs = lhs - lhs.abs().max(f64::MIN_POSITIVE) * f64::EPSILON;
        }
        cert.check(name, lhs, rhs);
    }
}

/// Audits the normed-ring axioms on all unordered sample pairs.
///
/// Entries: `zero`, `symmetry`, `triangle`, `submultiplicative`,
/// `unit-norm`. Each records the worst case over the samples; exact
/// instances compare in exact arithmetic, floating instances get the
/// default slack on every right-hand side. Failures are recorded, not
/// raised.
pub fn check_norm_axioms<R: BanachRing>(instance: &R, samples: &[R::Elem]) -> Certificate {
    let slack = instance.slack();
    let mut cert = Certificate::new();

    let mut zero = None;
    Worst::offer(&mut zero, instance.norm(&instance.zero()), R::Norm::zero(), slack);
    Worst::record(zero, "zero", slack, &mut cert);

    let mut symmetry = None;
    for x in samples {
        let nx = instance.norm(x);
        let nneg = instance.norm(&instance.neg(x));
        Worst::offer(&mut symmetry, nneg.clone(), nx.clone(), slack);
        Worst::offer(&mut symmetry, nx, nneg, slack);
    }
    Worst::record(symmetry, "symmetry", slack, &mut cert);

    let norms: Vec<R::Norm> = samples.iter().map(|x| instance.norm(x)).collect();
    let mut triangle = None;
    let mut submult = None;
    for i in 0..samples.len() {
        for j in i..samples.len() {
            let (x, y) = (&samples[i], &samples[j]);
            let bound = norms[i].clone() + norms[j].clone();
            Worst::offer(&mut triangle, instance.norm(&instance.add(x, y)), bound, slack);
            let prod = norms[i].clone() * norms[j].clone();
            Worst::offer(&mut submult, instance.norm(&instance.mul(x, y)), prod.clone(), slack);
            if i != j {
                Worst::offer(&mut submult, instance.norm(&instance.mul(y, x)), prod, slack);
            }
        }
    }
    Worst::record(triangle, "triangle", slack, &mut cert);
    Worst::record(submult, "submultiplicative", slack, &mut cert);

    let mut unit = None;
    Worst::offer(&mut unit, instance.norm(&instance.one()), R::Norm::one(), slack);
    Worst::record(unit, "unit-norm", slack, &mut cert);

    cert
}

/// `sum_i |x_i|` for a finite list of components.
pub fn l1_coproduct_norm<G: NormedGroup>(components: &[(G::Elem, &G)]) -> G::Norm {
    components
        .iter()
        .fold(G::Norm::zero(), |acc, (x, g)| acc + g.norm(x))
}
