//! Transfer of idempotents and of their equivalences between the levels of
//! a tower and its colimit.

use rand::Rng;
use serde::Serialize;

use crate::calculus::{
    app_conj_bound, app_conj_threshold, conjugating_unit, h_bound, lift_idempotent,
    neumann_inverse, CertifiedIdempotent, CertifiedUnit, SeriesVariant,
};
use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::instances::random::{random_near_identity, trial_rng};
use crate::instances::Tower;
use crate::k0::{ClassKey, GroupElement};
use crate::par::{map_range, Execution};
use crate::ring::{BanachRing, NormedGroup, RealAlgebra, Sample};

/// Slack on the displayed transfer inequalities.
pub const TRANSFER_SLACK: f64 = 1e-9;

type Elem<T> = <<T as Tower>::Ring as NormedGroup>::Elem;

/// An element of the colimit given by a representative at some level and
/// a certified bound on the distance from its image to the intended limit.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitElement<E> {
    pub level: usize,
    pub representative: E,
    pub tail_bound: f64,
}

impl<E: Clone> LimitElement<E> {
    pub fn exact(level: usize, representative: E) -> Self {
        Self {
            level,
            representative,
            tail_bound: 0.0,
        }
    }

    /// Upper bound on the colimit norm.
    pub fn norm_bound<T>(&self, tower: &T) -> f64
    where
        T: Tower,
        T::Ring: NormedGroup<Elem = E>,
    {
        tower.limit_norm(self.level, &self.representative) + self.tail_bound
    }

    /// The representative moved to `level`.
    pub fn at<T>(&self, tower: &T, level: usize) -> E
    where
        T: Tower,
        T::Ring: NormedGroup<Elem = E>,
    {
        move_to(tower, self.level, level, &self.representative)
    }
}

fn move_to<T: Tower>(tower: &T, from: usize, to: usize, x: &Elem<T>) -> Elem<T> {
    if to >= from {
        tower.push(from, to, x)
    } else {
        tower.pull(from, to, x)
    }
}

/// `x + y`, with tails adding.
pub fn limit_add<T: Tower>(
    tower: &T,
    x: &LimitElement<Elem<T>>,
    y: &LimitElement<Elem<T>>,
) -> LimitElement<Elem<T>> {
    let k = x.level.max(y.level);
    LimitElement {
        level: k,
        representative: tower.level(k).add(&x.at(tower, k), &y.at(tower, k)),
        tail_bound: x.tail_bound + y.tail_bound,
    }
}

/// `x y`, with tail `|x| t_y + |y| t_x + t_x t_y`.
pub fn limit_mul<T: Tower>(
    tower: &T,
    x: &LimitElement<Elem<T>>,
    y: &LimitElement<Elem<T>>,
) -> LimitElement<Elem<T>> {
    let k = x.level.max(y.level);
    let (xs, ys) = (x.at(tower, k), y.at(tower, k));
    let ring = tower.level(k);
    LimitElement {
        level: k,
        tail_bound: ring.norm_f64(&xs) * y.tail_bound
            + ring.norm_f64(&ys) * x.tail_bound
            + x.tail_bound * y.tail_bound,
        representative: ring.mul(&xs, &ys),
    }
}

/// A unit of the colimit together with its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitUnit<E> {
    pub u: LimitElement<E>,
    pub u_inv: LimitElement<E>,
}

/// `min(0.01, d / 3)` where `2|e| d + d^2 = 1`, so that `h(eps) + eps`
/// stays below the proximity threshold.
pub fn default_eps(e_norm: f64) -> f64 {
    (app_conj_threshold(e_norm, 1.0) / 3.0).min(0.01)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurjectiveTransfer<E> {
    /// Level `i` of the transferred idempotent.
    pub level: usize,
    pub idempotent: CertifiedIdempotent<E>,
    /// Level at which `unit` conjugates the image of `idempotent` to the
    /// representative of the limit idempotent.
    pub unit_level: usize,
    pub unit: CertifiedUnit<E>,
    pub eps: f64,
    pub cert: Certificate,
}

impl<E> SurjectiveTransfer<E> {
    pub fn valid(&self) -> bool {
        self.cert.valid()
    }
}

fn check_eps(eps: f64, e_norm: f64) -> Result<()> {
    let reach = h_bound(eps).map(|h| h + eps).unwrap_or(f64::INFINITY);
    if !(eps > 0.0) || !(app_conj_bound(e_norm, reach) < 1.0) {
        return Err(Error::Domain {
            what: "eps",
            value: eps,
            domain: "(0, 1/4) with 2|e|(h(eps)+eps) + (h(eps)+eps)^2 < 1",
        });
    }
    Ok(())
}

/// Finds a level `i` and an idempotent `e_i` there whose image is
/// equivalent to the limit idempotent `e`.
///
/// Scans levels upward for `a_i` with `|g_i(a_i) - e| < eps` and
/// `|a_i^2 - a_i| < eps`, lifts it with the corrected series, certifies
/// `|g_i(e_i) - e| < h(eps) + eps` and conjugates the two.
pub fn transfer_surjective<T: Tower>(
    tower: &T,
    e: &LimitElement<Elem<T>>,
    eps: Option<f64>,
    tol: f64,
) -> Result<SurjectiveTransfer<Elem<T>>> {
    let depth = tower.depth();
    let k = e.level;
    if k > depth {
        return Err(Error::OutOfRange {
            what: "level",
            value: k as u64,
            min: 0,
            max: depth as u64,
        });
    }
    let top = tower.level(k);
    let e_norm = top.norm_f64(&e.representative) + e.tail_bound;
    let eps = eps.unwrap_or_else(|| default_eps(e_norm));
    check_eps(eps, e_norm)?;
    let rep_defect = top.norm_f64(&top.idempotent_defect(&e.representative));
    if !(rep_defect + 2.0 * e.tail_bound < eps) {
        return Err(Error::NotIdempotent {
            defect: rep_defect + 2.0 * e.tail_bound,
            tol: eps,
        });
    }

    let (i, a_i, distance, defect) = (0..=depth)
        .find_map(|i| {
            let a = e.at(tower, i);
            let distance = tower.limit_dist(i, &a, k, &e.representative) + e.tail_bound;
            if !(distance < eps) {
                return None;
            }
            let defect = tower.level(i).norm_f64(&tower.level(i).idempotent_defect(&a));
            (defect < eps).then_some((i, a, distance, defect))
        })
        .ok_or(Error::TowerTooShallow { depth })?;

    let ring = tower.level(i);
    let e_i = lift_idempotent(ring, &a_i, SeriesVariant::Corrected, tol)?;
    let reach = h_bound(eps)? + eps;
    let landed = tower.limit_dist(i, &e_i.e, k, &e.representative) + e.tail_bound;

    let mut cert = Certificate::new();
    cert.check("approximation", distance, eps);
    cert.check("approximate-defect", defect, eps);
    cert.check("surjectivity", landed, reach + TRANSFER_SLACK);
    cert.absorb("lift", &e_i.cert);

    let m = i.max(k);
    let ring_m = tower.level(m);
    let image = CertifiedIdempotent::measure(ring_m, tower.push(i, m, &e_i.e), tol);
    let target = CertifiedIdempotent::measure(ring_m, e.at(tower, m), eps);
    let unit = conjugating_unit(ring_m, &image, &target, tol)?;
    cert.absorb("unit", &unit.cert);

    Ok(SurjectiveTransfer {
        level: i,
        idempotent: e_i,
        unit_level: m,
        unit,
        eps,
        cert,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct InjectiveTransfer<E> {
    /// Level `j` at which `e_j u_j = u_j f_j`.
    pub level: usize,
    pub unit: CertifiedUnit<E>,
    /// Measured `|u_j^{-1} e_j u_j - f_j|` before the final correction.
    pub delta: f64,
    /// `eps |e| (eps + |u| + |u^{-1}|)`.
    pub bound: f64,
    pub cert: Certificate,
}

impl<E> InjectiveTransfer<E> {
    pub fn valid(&self) -> bool {
        self.cert.valid()
    }
}

/// Given idempotents `e_i`, `f_i` at level `i` whose images are conjugate
/// by the limit unit `u`, finds a level `j` and a unit there conjugating
/// their images.
///
/// Scans `j >= i` for approximations `u_j`, `u_j^{-1}` within `eps` of
/// `u`, `u^{-1}`, certifies `|u_j^{-1} e_j u_j - f_j| <= eps|e|(eps + |u|
/// + |u^{-1}|)` and closes the remaining gap with the proximity unit.
pub fn transfer_injective<T: Tower>(
    tower: &T,
    i: usize,
    e_i: &CertifiedIdempotent<Elem<T>>,
    f_i: &CertifiedIdempotent<Elem<T>>,
    u: &LimitUnit<Elem<T>>,
    eps: f64,
    tol: f64,
) -> Result<InjectiveTransfer<Elem<T>>> {
    let depth = tower.depth();
    if i > depth {
        return Err(Error::OutOfRange {
            what: "level",
            value: i as u64,
            min: 0,
            max: depth as u64,
        });
    }
    if !(eps > 0.0 && eps < 0.25) {
        return Err(Error::Domain {
            what: "eps",
            value: eps,
            domain: "(0, 1/4)",
        });
    }
    let e_norm = tower.limit_norm(i, &e_i.e);
    let u_norm = tower.limit_norm(u.u.level, &u.u.representative) + u.u.tail_bound;
    let u_inv_norm = tower.limit_norm(u.u_inv.level, &u.u_inv.representative) + u.u_inv.tail_bound;
    let bound = eps * e_norm * (eps + u_norm + u_inv_norm);

    for j in i..=depth {
        let ring = tower.level(j);
        let u_j = u.u.at(tower, j);
        let approx_u = tower.limit_dist(j, &u_j, u.u.level, &u.u.representative) + u.u.tail_bound;
        if !(approx_u < eps) {
            continue;
        }
        let v_j = u.u_inv.at(tower, j);
        let Ok(w) = neumann_inverse(ring, &ring.mul(&v_j, &u_j), tol) else {
            continue;
        };
        let u_j_inv = ring.mul(&w.u_inv, &v_j);
        let approx_v = tower.limit_dist(j, &u_j_inv, u.u_inv.level, &u.u_inv.representative)
            + u.u_inv.tail_bound;
        if !(approx_v < eps) {
            continue;
        }
        let e_j = tower.push(i, j, &e_i.e);
        let f_j = tower.push(i, j, &f_i.e);
        let g = ring.mul(&ring.mul(&u_j_inv, &e_j), &u_j);
        let delta = ring.dist(&g, &f_j);
        if !(app_conj_bound(ring.norm_f64(&g), delta) < 1.0) {
            continue;
        }

        let uj_norm = ring.norm_f64(&u_j);
        let uj_inv_norm = ring.norm_f64(&u_j_inv);
        let conditioning = 1.0 + uj_norm * uj_inv_norm;
        let g = CertifiedIdempotent::measure(ring, g, tol * conditioning * (1.0 + e_norm));
        let f_j = CertifiedIdempotent::measure(ring, f_j, tol);
        let close = conjugating_unit(ring, &g, &f_j, tol)?;

        let big_u = ring.mul(&u_j, &close.u);
        let big_u_inv = ring.mul(&close.u_inv, &u_j_inv);
        let one = ring.one();
        let rho_left = ring.dist(&ring.mul(&u_j, &u_j_inv), &one);
        let rho_right = ring.dist(&ring.mul(&u_j_inv, &u_j), &one);
        let c_norm = ring.norm_f64(&close.u);
        let c_inv_norm = ring.norm_f64(&close.u_inv);
        let allowed = |name: &str| close.cert.get(name).map_or(0.0, |x| x.rhs);
        let slack = ring.slack() * (1.0 + uj_norm * c_norm) * (1.0 + uj_inv_norm * c_inv_norm);

        let mut cert = Certificate::new();
        cert.check("approximation-u", approx_u, eps);
        cert.check("approximation-u-inv", approx_v, eps);
        cert.check("injectivity", delta, bound + TRANSFER_SLACK);
        cert.absorb("inverse", &w.cert);
        cert.absorb("close", &close.cert);
        // e U - U f = u_j (g c - c f) - (u_j u_j^{-1} - 1) e u_j c
        let e_j = &tower.push(i, j, &e_i.e);
        let intertwine = ring.dist(&ring.mul(e_j, &big_u), &ring.mul(&big_u, &f_j.e));
        cert.check(
            "intertwine",
            intertwine,
            uj_norm * allowed("intertwine") + rho_left * e_norm * uj_norm * c_norm + slack,
        );
        let (left, right) = (
            ring.dist(&ring.mul(&big_u, &big_u_inv), &one),
            ring.dist(&ring.mul(&big_u_inv, &big_u), &one),
        );
        cert.check(
            "residual-left",
            left,
            uj_norm * uj_inv_norm * allowed("residual-left") + rho_left + slack,
        );
        cert.check(
            "residual-right",
            right,
            c_norm * c_inv_norm * rho_right + allowed("residual-right") + slack,
        );
        let mut unit_cert = Certificate::new();
        unit_cert.check("residual-left", left, cert.get("residual-left").map_or(0.0, |x| x.rhs));
        unit_cert.check(
            "residual-right",
            right,
            cert.get("residual-right").map_or(0.0, |x| x.rhs),
        );
        return Ok(InjectiveTransfer {
            level: j,
            unit: CertifiedUnit {
                u: big_u,
                u_inv: big_u_inv,
                cert: unit_cert,
            },
            delta,
            bound,
            cert,
        });
    }
    Err(Error::TowerTooShallow { depth })
}

/// One round trip: a limit idempotent near a random finite-level class,
/// transferred down and classified again.
#[derive(Clone, Debug, Serialize)]
pub struct TransferTrial {
    pub trial: usize,
    pub source_level: usize,
    pub found_level: Option<usize>,
    pub limit_key: Option<ClassKey>,
    pub found_key: Option<ClassKey>,
    pub class: Option<GroupElement>,
    pub matched: bool,
    pub error: Option<String>,
    #[serde(skip)]
    pub cert: Certificate,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub trials: Vec<TransferTrial>,
    pub mismatches: usize,
    pub invalid_certificates: usize,
}

/// `eps / (16 (1 + |p|))`, scaled into `[1/4, 1]` at random: small enough
/// that conjugating by `1 + eta g` stays well inside `eps`.
fn perturbation_size<G: Rng + ?Sized>(eps: f64, p_norm: f64, rng: &mut G) -> f64 {
    eps / (16.0 * (1.0 + p_norm)) * rng.random_range(0.25..=1.0)
}

fn compare_trial<T: Tower>(
    tower: &T,
    trial: usize,
    seed: u64,
    eps: Option<f64>,
    tol: f64,
) -> TransferTrial {
    let mut rng = trial_rng(seed, trial as u64);
    let depth = tower.depth();
    let source = rng.random_range(0..=depth);
    let mut out = TransferTrial {
        trial,
        source_level: source,
        found_level: None,
        limit_key: None,
        found_key: None,
        class: None,
        matched: false,
        error: None,
        cert: Certificate::new(),
    };
    let run = |out: &mut TransferTrial, rng: &mut rand_chacha::ChaCha8Rng| -> Result<()> {
        let p = tower.random_idempotent(source, rng)?;
        let top = tower.level(depth);
        let pushed = tower.push(source, depth, &p);
        let p_norm = top.norm_f64(&pushed);
        let base = eps.unwrap_or_else(|| default_eps(p_norm + 1.0));
        let eta = perturbation_size(base, p_norm, rng);
        let w = random_near_identity(top, eta, rng);
        let w_inv = neumann_inverse(top, &w, tol)?;
        let e = top.mul(&top.mul(&w_inv.u_inv, &pushed), &w);
        let limit_key = tower.colimit_key(depth, &e)?;
        out.limit_key = Some(limit_key.clone());

        let transfer = transfer_surjective(tower, &LimitElement::exact(depth, e), eps, tol)?;
        let found_key = tower.colimit_key(transfer.level, &transfer.idempotent.e)?;
        out.found_level = Some(transfer.level);
        out.class = tower.k0().class_map(&found_key).ok();
        out.matched = found_key == limit_key;
        out.found_key = Some(found_key);
        out.cert = transfer.cert;
        Ok(())
    };
    if let Err(err) = run(&mut out, &mut rng) {
        out.error = Some(err.to_string());
    }
    out
}

/// Monte-Carlo check that transferring a limit idempotent to a finite
/// level preserves its class in `K_0` of the colimit.
pub fn k0_colimit_compare<T: Tower>(
    tower: &T,
    trials: usize,
    seed: u64,
    eps: Option<f64>,
    tol: f64,
    exec: Execution,
) -> CompareReport {
    let trials = map_range(exec, trials, |t| compare_trial(tower, t, seed, eps, tol));
    CompareReport {
        mismatches: trials.iter().filter(|t| !t.matched).count(),
        invalid_certificates: trials.iter().filter(|t| !t.cert.valid()).count(),
        trials,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InjectiveTrial {
    pub trial: usize,
    pub level: usize,
    pub found_level: Option<usize>,
    pub delta: f64,
    pub bound: f64,
    pub error: Option<String>,
    #[serde(skip)]
    pub cert: Certificate,
}

#[derive(Clone, Debug, Serialize)]
pub struct InjectivityReport {
    pub trials: Vec<InjectiveTrial>,
    pub violations: usize,
}

fn injective_trial<T: Tower>(tower: &T, trial: usize, seed: u64, eps: f64, tol: f64) -> InjectiveTrial {
    let mut rng = trial_rng(seed, trial as u64);
    let depth = tower.depth();
    let level = rng.random_range(0..depth.max(1)).min(depth);
    let mut out = InjectiveTrial {
        trial,
        level,
        found_level: None,
        delta: f64::NAN,
        bound: f64::NAN,
        error: None,
        cert: Certificate::new(),
    };
    let run = |out: &mut InjectiveTrial, rng: &mut rand_chacha::ChaCha8Rng| -> Result<()> {
        let ring = tower.level(level);
        let p = tower.random_idempotent(level, rng)?;
        let w = random_near_identity(ring, 0.25, rng);
        let w = neumann_inverse(ring, &w, tol)?;
        let f = ring.mul(&ring.mul(&w.u_inv, &p), &w.u);

        // B = 1 + eta c with c commuting with the image of f, so that
        // u = g(w) B still conjugates g(p) to g(f).
        let top = tower.level(depth);
        let f_top = tower.push(level, depth, &f);
        let not_f = top.sub(&top.one(), &f_top);
        let x = top.sample(rng);
        let y = top.sample(rng);
        let c = top.add(
            &top.mul(&top.mul(&f_top, &x), &f_top),
            &top.mul(&top.mul(&not_f, &y), &not_f),
        );
        let c_norm = top.norm_f64(&c);
        let w_norm = ring.norm_f64(&w.u);
        let w_inv_norm = ring.norm_f64(&w.u_inv);
        let eta = eps / (4.0 * (1.0 + w_norm) * (1.0 + w_inv_norm)) * rng.random_range(0.1..=1.0);
        let b = if c_norm > 0.0 {
            top.axpy(&top.one(), eta / c_norm, &c)
        } else {
            top.one()
        };
        let b = neumann_inverse(top, &b, tol)?;
        let unit = LimitUnit {
            u: LimitElement::exact(depth, top.mul(&tower.push(level, depth, &w.u), &b.u)),
            u_inv: LimitElement::exact(
                depth,
                top.mul(&b.u_inv, &tower.push(level, depth, &w.u_inv)),
            ),
        };
        let e_i = CertifiedIdempotent::measure(ring, p, tol);
        let f_i = CertifiedIdempotent::measure(ring, f, tol * (1.0 + w_norm * w_inv_norm));
        let transfer = transfer_injective(tower, level, &e_i, &f_i, &unit, eps, tol)?;
        out.found_level = Some(transfer.level);
        out.delta = transfer.delta;
        out.bound = transfer.bound;
        out.cert = transfer.cert;
        Ok(())
    };
    if let Err(err) = run(&mut out, &mut rng) {
        out.error = Some(err.to_string());
    }
    out
}

/// Random instances of the injectivity step: `f = w^{-1} e w` at a finite
/// level and a limit unit `u = g(w) B` with `B` near one at the top level.
/// Counts trials where the displayed inequality fails or no level works.
pub fn injectivity_experiment<T: Tower>(
    tower: &T,
    trials: usize,
    seed: u64,
    eps: f64,
    tol: f64,
    exec: Execution,
) -> InjectivityReport {
    let trials = map_range(exec, trials, |t| injective_trial(tower, t, seed, eps, tol));
    InjectivityReport {
        violations: trials
            .iter()
            .filter(|t| t.error.is_some() || !t.cert.valid())
            .count(),
        trials,
    }
}

#[cfg(test)]
mod tests {
    use num::complex::Complex64;

    use super::*;
    use crate::instances::{make_cantor_tower, make_uhf_tower, ConstantTower, MatrixAlgebra};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn level_zero_is_trivial() {
        let t = make_uhf_tower(3).unwrap();
        let e = LimitElement::exact(0, vec![c(1.0)]);
        let r = transfer_surjective(&t, &e, None, 1e-12).unwrap();
        assert_eq!(r.level, 0);
        assert_eq!(r.idempotent.e, vec![c(1.0)]);
        assert_eq!(r.unit.u, vec![c(1.0)]);
        assert!(r.valid());
    }

    #[test]
    fn cantor_cylinder_found_at_its_level() {
        let t = make_cantor_tower(6).unwrap();
        let mut x = vec![c(0.0); 8];
        x[5] = c(1.0);
        let e = LimitElement::exact(6, t.push(3, 6, &x));
        let r = transfer_surjective(&t, &e, None, 1e-12).unwrap();
        assert_eq!(r.level, 3);
        assert_eq!(r.idempotent.e, x);
        assert_eq!(r.unit.u, t.level(6).one());
    }

    #[test]
    fn uhf_rank_two_keeps_trace() {
        let t = make_uhf_tower(6).unwrap();
        let top = t.level(6);
        let mut rng = trial_rng(3, 0);
        let mut d = vec![0.0; 64];
        d[7] = 1.0;
        d[50] = 1.0;
        let p = top.real_diag(&d);
        let w = random_near_identity(top, 0.3, &mut rng);
        let w = neumann_inverse(top, &w, 1e-13).unwrap();
        let e = top.mul(&top.mul(&w.u_inv, &p), &w.u);
        let r = transfer_surjective(&t, &LimitElement::exact(6, e), Some(0.01), 1e-12).unwrap();
        assert!(r.valid(), "{:?}", r.cert.failures().collect::<Vec<_>>());
        assert_eq!(
            t.colimit_key(r.level, &r.idempotent.e).unwrap(),
            ClassKey::NormalizedTrace { numer: 1, denom: 32 }
        );
    }

    #[test]
    fn limit_arithmetic_tracks_tails() {
        let t = make_cantor_tower(2).unwrap();
        let x = LimitElement {
            level: 0,
            representative: vec![c(2.0)],
            tail_bound: 0.1,
        };
        let y = LimitElement {
            level: 1,
            representative: vec![c(1.0), c(-1.0)],
            tail_bound: 0.2,
        };
        let s = limit_add(&t, &x, &y);
        assert_eq!(s.level, 1);
        assert_eq!(s.representative, vec![c(3.0), c(1.0)]);
        assert!((s.tail_bound - 0.3).abs() < 1e-15);
        let p = limit_mul(&t, &x, &y);
        assert!((p.tail_bound - (2.0 * 0.2 + 1.0 * 0.1 + 0.02)).abs() < 1e-15);
    }

    #[test]
    fn injective_trivial_and_swap() {
        let t = make_uhf_tower(3).unwrap();
        let m = t.level(2);
        let e = CertifiedIdempotent::measure(m, m.real_diag(&[1.0, 0.0, 0.0, 0.0]), 0.0);
        let one = LimitUnit {
            u: LimitElement::exact(2, m.one()),
            u_inv: LimitElement::exact(2, m.one()),
        };
        let r = transfer_injective(&t, 2, &e, &e, &one, 0.01, 1e-12).unwrap();
        assert_eq!(r.level, 2);
        assert_eq!(r.unit.u, m.one());

        let f = CertifiedIdempotent::measure(m, m.real_diag(&[0.0, 1.0, 0.0, 0.0]), 0.0);
        let mut swap = m.zero();
        for (a, b) in [(0, 1), (1, 0), (2, 2), (3, 3)] {
            swap[a * 4 + b] = c(1.0);
        }
        let unit = LimitUnit {
            u: LimitElement::exact(2, swap.clone()),
            u_inv: LimitElement::exact(2, swap.clone()),
        };
        let r = transfer_injective(&t, 2, &e, &f, &unit, 0.01, 1e-12).unwrap();
        assert_eq!(r.level, 2);
        assert!(r.valid(), "{:?}", r.cert);
        assert_eq!(r.unit.u, swap);
    }

    #[test]
    fn injective_rejects_distinct_cylinders() {
        let t = make_cantor_tower(3).unwrap();
        let ring = t.level(1);
        let e = CertifiedIdempotent::measure(ring, vec![c(1.0), c(0.0)], 0.0);
        let f = CertifiedIdempotent::measure(ring, vec![c(0.0), c(1.0)], 0.0);
        let one = LimitUnit {
            u: LimitElement::exact(1, ring.one()),
            u_inv: LimitElement::exact(1, ring.one()),
        };
        let err = transfer_injective(&t, 1, &e, &f, &one, 0.01, 1e-12).unwrap_err();
        assert!(matches!(err, Error::TowerTooShallow { .. }));
    }

    #[test]
    fn constant_tower_compare() {
        let m = MatrixAlgebra::complex(2).unwrap();
        let t = ConstantTower::new(m, 2);
        let r = k0_colimit_compare(&t, 10, 1, None, 1e-12, Execution::Sequential);
        assert_eq!(r.mismatches, 0, "{:?}", r.trials);
    }

    #[test]
    fn small_experiments() {
        let t = make_uhf_tower(3).unwrap();
        let r = k0_colimit_compare(&t, 8, 2, None, 1e-12, Execution::Sequential);
        assert_eq!(r.mismatches, 0, "{:?}", r.trials);
        assert_eq!(r.invalid_certificates, 0);
        let r = injectivity_experiment(&t, 8, 2, 0.01, 1e-12, Execution::Sequential);
        assert_eq!(r.violations, 0, "{:?}", r.trials);
        let t = make_cantor_tower(4).unwrap();
        let r = k0_colimit_compare(&t, 8, 2, None, 1e-12, Execution::Sequential);
        assert_eq!(r.mismatches, 0, "{:?}", r.trials);
        let r = injectivity_experiment(&t, 8, 2, 0.01, 1e-12, Execution::Sequential);
        assert_eq!(r.violations, 0, "{:?}", r.trials);
    }
}
