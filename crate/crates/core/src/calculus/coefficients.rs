//! Exact series coefficients `2^{2n-1} binom(alpha, n)` for
//! `alpha = 1/2` (printed series) and `alpha = -1/2` (corrected series).

use std::sync::OnceLock;

use num::{BigInt, BigRational, One, ToPrimitive};

use crate::calculus::SeriesVariant;

/// Coefficients computed and checked exactly; higher orders use the
/// floating recurrence.
pub const EXACT_COEFFICIENTS: usize = 64;

/// `binom(alpha, n)` for rational `alpha`.
pub fn binomial(alpha: &BigRational, n: usize) -> BigRational {
    (0..n).fold(BigRational::one(), |acc, k| {
        let k = BigRational::from_integer(BigInt::from(k));
        acc * (alpha - &k) / (k + BigRational::one())
    })
}

pub fn catalan(n: usize) -> BigInt {
    // C_n = binom(2n, n) / (n + 1)
    let mut c = BigInt::one();
    for k in 0..n {
        c = c * BigInt::from(2 * (2 * k + 1)) / BigInt::from(k + 2);
    }
    c
}

fn power_of_two(e: usize) -> BigRational {
    BigRational::from_integer(num::pow(BigInt::from(2), e))
}

fn half(sign: i64) -> BigRational {
    BigRational::new(BigInt::from(sign), BigInt::from(2))
}

/// `2^{2n-1} binom(1/2, n)`, `n >= 1`.
pub fn printed_coefficient(n: usize) -> BigRational {
    assert!(n >= 1);
    power_of_two(2 * n - 1) * binomial(&half(1), n)
}

/// `2^{2n-1} binom(-1/2, n)`, `n >= 1`.
pub fn corrected_coefficient(n: usize) -> BigRational {
    assert!(n >= 1);
    power_of_two(2 * n - 1) * binomial(&half(-1), n)
}

fn build(variant: SeriesVariant) -> Vec<BigInt> {
    (1..=EXACT_COEFFICIENTS)
        .map(|n| {
            let c = match variant {
                SeriesVariant::Printed => printed_coefficient(n),
                SeriesVariant::Corrected => corrected_coefficient(n),
            };
            assert!(c.is_integer(), "coefficient {n} is not an integer: {c}");
            c.to_integer()
        })
        .collect()
}

/// The first [`EXACT_COEFFICIENTS`] coefficients (index 0 is `n = 1`),
/// asserted integral when the cache is built.
pub fn integer_coefficients(variant: SeriesVariant) -> &'static [BigInt] {
    static PRINTED: OnceLock<Vec<BigInt>> = OnceLock::new();
    static CORRECTED: OnceLock<Vec<BigInt>> = OnceLock::new();
    match variant {
        SeriesVariant::Printed => PRINTED.get_or_init(|| build(SeriesVariant::Printed)),
        SeriesVariant::Corrected => CORRECTED.get_or_init(|| build(SeriesVariant::Corrected)),
    }
}

fn scaled_table(variant: SeriesVariant) -> &'static [f64] {
    static PRINTED: OnceLock<Vec<f64>> = OnceLock::new();
    static CORRECTED: OnceLock<Vec<f64>> = OnceLock::new();
    let make = move || {
        integer_coefficients(variant)
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let scaled = BigRational::new(c.clone(), num::pow(BigInt::from(4), i + 1));
                scaled.to_f64().unwrap_or(0.0)
            })
            .collect()
    };
    match variant {
        SeriesVariant::Printed => PRINTED.get_or_init(make),
        SeriesVariant::Corrected => CORRECTED.get_or_init(make),
    }
}

/// `coefficient(n) / 4^n` as a float, `n >= 1`.
///
/// The scaled coefficients stay bounded (`|.| <= 1/2`) so the series can be
/// summed in powers of `4s` without overflow.
pub fn scaled_coefficient(variant: SeriesVariant, n: usize) -> f64 {
    assert!(n >= 1);
    let table = scaled_table(variant);
    if n <= table.len() {
        return table[n - 1];
    }
    // binom(alpha, k+1) = binom(alpha, k) (alpha - k) / (k + 1)
    let alpha = match variant {
        SeriesVariant::Printed => 0.5,
        SeriesVariant::Corrected => -0.5,
    };
    let mut v = table[table.len() - 1];
    for k in table.len()..n {
        v *= (alpha - k as f64) / (k as f64 + 1.0);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_printed_coefficients() {
        let got: Vec<i64> = integer_coefficients(SeriesVariant::Printed)[..6]
            .iter()
            .map(|c| c.to_i64().unwrap())
            .collect();
        assert_eq!(got, vec![1, -1, 2, -5, 14, -42]);
    }

    #[test]
    fn first_corrected_coefficients() {
        // (-1)^n binom(2n, n) / 2
        let got: Vec<i64> = integer_coefficients(SeriesVariant::Corrected)[..5]
            .iter()
            .map(|c| c.to_i64().unwrap())
            .collect();
        assert_eq!(got, vec![-1, 3, -10, 35, -126]);
    }

    #[test]
    fn catalan_numbers() {
        let got: Vec<BigInt> = (0..8).map(catalan).collect();
        let want: Vec<BigInt> = [1, 1, 2, 5, 14, 42, 132, 429]
            .into_iter()
            .map(BigInt::from)
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn recurrence_continues_table() {
        for variant in [SeriesVariant::Printed, SeriesVariant::Corrected] {
            let n = EXACT_COEFFICIENTS;
            let exact = scaled_coefficient(variant, n);
            // One step of the recurrence from n - 1 reproduces the table entry.
            let alpha = if variant == SeriesVariant::Printed { 0.5 } else { -0.5 };
            let prev = scaled_coefficient(variant, n - 1);
            let step = prev * (alpha - (n - 1) as f64) / n as f64;
            assert!((step - exact).abs() <= 1e-15 * exact.abs());
            assert!(scaled_coefficient(variant, 1000).abs() < 0.5);
        }
    }
}
