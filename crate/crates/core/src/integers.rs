//! The scaled integers `Z_r` (`|n| = r|n|`) and the projective tensor norm
//! on `Z_r (x) Z_s`.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::instances::Descriptor;
use crate::norm::Arithmetic;
use crate::ring::{BanachRing, NormedGroup, Sample};

/// `Z` with the norm `r|n|`, computed exactly.
///
/// A normed group for every `r > 0`; a Banach ring (`|1| <= 1` and
/// submultiplicative) only for `r = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledIntegers {
    r: BigRational,
}

impl ScaledIntegers {
    pub fn new(r: BigRational) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::Descriptor(format!("scale must be positive, got {r}")));
        }
        Ok(Self { r })
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Descriptor("zero denominator".into()));
        }
        Self::new(BigRational::new(numer.into(), denom.into()))
    }

    pub fn scale(&self) -> &BigRational {
        &self.r
    }
}

/// Parses `"p/q"`, `"p"` or a decimal like `"0.5"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Descriptor(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits = format!("{int}{frac}");
        let p: BigInt = digits.parse().map_err(|_| bad())?;
        let q = num::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(p, q));
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl NormedGroup for ScaledIntegers {
    type Elem = BigInt;
    type Norm = BigRational;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn add(&self, x: &BigInt, y: &BigInt) -> BigInt {
        x + y
    }

    fn neg(&self, x: &BigInt) -> BigInt {
        -x
    }

    fn norm(&self, x: &BigInt) -> BigRational {
        &self.r * BigRational::from_integer(x.abs())
    }

    fn arithmetic(&self) -> Arithmetic {
        Arithmetic::Exact
    }

    fn descriptor(&self) -> Descriptor {
        Descriptor::ScaledIntegers {
            r: format_rational(&self.r),
        }
    }

    fn elem_to_json(&self, x: &BigInt) -> Value {
        match x.to_i64() {
            Some(v) => Value::from(v),
            None => Value::from(x.to_string()),
        }
    }

    fn elem_from_json(&self, v: &Value) -> Result<BigInt> {
        match v {
            Value::Number(n) => n
                .as_i64()
                .map(BigInt::from)
                .ok_or_else(|| Error::Element(format!("not an integer: {n}"))),
            Value::String(s) => s
                .parse()
                .map_err(|_| Error::Element(format!("not an integer: {s:?}"))),
            other => Err(Error::Element(format!("not an integer: {other}"))),
        }
    }
}

impl BanachRing for ScaledIntegers {
    fn one(&self) -> BigInt {
        BigInt::one()
    }

    fn mul(&self, x: &BigInt, y: &BigInt) -> BigInt {
        x * y
    }
}

impl Sample for ScaledIntegers {
    fn sample<G: Rng + ?Sized>(&self, rng: &mut G) -> BigInt {
        BigInt::from(rng.random_range(-20i64..=20))
    }
}

/// Projective tensor norm of `m` in `Z_r (x) Z_s`: the infimum of
/// `sum r|x_i| s|y_i|` over `m = sum x_i y_i`, restricted to at most
/// `support_bound` terms with `|x_i|, |y_i| <= support_bound`.
///
/// Since `sum |x_i y_i| >= |m|`, the infimum is `rs|m|` and is attained by
/// the one-term decomposition `m = m * 1` whenever `|m| <= support_bound`.
/// Larger `|m|` fall back to an exact search over the restricted set.
pub fn tensor_norm_int(
    m: i64,
    r: &BigRational,
    s: &BigRational,
    support_bound: u64,
) -> Result<BigRational> {
    if support_bound == 0 {
        return Err(Error::OutOfRange {
            what: "support_bound",
            value: 0,
            min: 1,
            max: u64::MAX,
        });
    }
    if !r.is_positive() || !s.is_positive() {
        return Err(Error::Descriptor("tensor scales must be positive".into()));
    }
    let scale = r * s;
    let abs_m = m.unsigned_abs();
    if abs_m <= support_bound {
        return Ok(scale * BigRational::from_integer(BigInt::from(abs_m)));
    }
    let cost = restricted_min_cost(m, support_bound)
        .ok_or(Error::NoDecomposition { m, bound: support_bound })?;
    Ok(scale * BigRational::from_integer(BigInt::from(cost)))
}

/// Minimal `sum |x_i y_i|` over decompositions of `m` with at most `b`
/// terms and `|x_i|, |y_i| <= b`.
fn restricted_min_cost(m: i64, b: u64) -> Option<u64> {
    let b = b as i64;
    let cap = b.checked_mul(b)?.checked_mul(b)?;
    if m.abs() > cap {
        return None;
    }
    let mut products: Vec<i64> = (1..=b)
        .flat_map(|x| (1..=b).map(move |y| x * y))
        .collect();
    products.sort_unstable();
    products.dedup();

    // Same-sign decompositions reach the lower bound |m|.
    let target = m.unsigned_abs() as usize;
    let mut terms = vec![u64::MAX; target + 1];
    terms[0] = 0;
    for v in 1..=target {
        for &p in products.iter().take_while(|&&p| p as usize <= v) {
            let prev = terms[v - p as usize];
            if prev != u64::MAX {
                terms[v] = terms[v].min(prev + 1);
            }
        }
    }
    if terms[target] <= b as u64 {
        return Some(target as u64);
    }

    // Mixed signs: exact search over the bounded value range.
    let span = cap as usize;
    let width = 2 * span + 1;
    let signed: Vec<i64> = products.iter().flat_map(|&p| [p, -p]).collect();
    let mut best = vec![u64::MAX; width];
    best[span] = 0;
    let mut answer = None;
    for _ in 0..b {
        let mut next = best.clone();
        for (idx, &c) in best.iter().enumerate() {
            if c == u64::MAX {
                continue;
            }
            let v = idx as i64 - span as i64;
            for &p in &signed {
                let w = v + p;
                if w.abs() > cap {
                    continue;
                }
                let j = (w + span as i64) as usize;
                next[j] = next[j].min(c + p.unsigned_abs());
            }
        }
        best = next;
        let c = best[(m + span as i64) as usize];
        if c != u64::MAX {
            answer = Some(answer.map_or(c, |a: u64| a.min(c)));
        }
    }
    answer
}
