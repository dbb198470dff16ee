//! Exact arrangement-count sequences and their large-N asymptotics.
//!
//! Bell numbers B(N) count set partitions (distinguishable particles, all
//! binding) and are computed with the additive Bell-triangle scheme. Integer
//! partition numbers p(N) count partitions of N (identical particles, all
//! binding) and are computed with the pentagonal-number recurrence. Both are
//! exact arbitrary-precision integers; the asymptotic forms are evaluated in
//! log space so they remain usable far beyond the f64 range.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

/// Exact non-negative count, arbitrary precision.
pub type BigCount = BigUint;

/// Default cap on `n` for [`bell`].
pub const DEFAULT_BELL_CAP: u64 = 2000;
/// Default cap on `n` for [`partition_count`].
pub const DEFAULT_PARTITION_CAP: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatoricsError {
    #[error("n = {n} exceeds the configured cap {cap}")]
    CapExceeded { n: u64, cap: u64 },
    #[error("n = {n} is below the minimum {min} for this quantity")]
    BelowMinimum { n: u64, min: u64 },
}

/// Bell numbers B(0..=n) via the Bell triangle, under `cap`.
///
/// Row k of the triangle starts with B(k); each later entry adds the entry
/// above. This reproduces the binomial-sum recurrence with additions only.
pub fn bell_sequence(n: u64, cap: u64) -> Result<Vec<BigCount>, CombinatoricsError> {
    if n > cap {
        return Err(CombinatoricsError::CapExceeded { n, cap });
    }
    let n = n as usize;
    let mut sequence = Vec::with_capacity(n + 1);
    sequence.push(BigUint::from(1u32));
    let mut row = vec![BigUint::from(1u32)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().unwrap().clone());
        for value in &row {
            let sum = next.last().unwrap() + value;
            next.push(sum);
        }
        sequence.push(next[0].clone());
        row = next;
    }
    Ok(sequence)
}

/// Exact Bell number B(n) under the default cap.
pub fn bell(n: u64) -> Result<BigCount, CombinatoricsError> {
    bell_capped(n, DEFAULT_BELL_CAP)
}

pub fn bell_capped(n: u64, cap: u64) -> Result<BigCount, CombinatoricsError> {
    Ok(bell_sequence(n, cap)?.pop().unwrap())
}

/// Generalized pentagonal number omega(k) = (3k^2 - k)/2 for k > 0 and
/// (3k^2 + k)/2 for k < 0.
///
/// # Panics
/// Panics when `k == 0`.
pub fn pentagonal(k: i64) -> u64 {
    assert!(k != 0, "pentagonal number index must be nonzero");
    let k_abs = k.unsigned_abs();
    let square = 3 * k_abs * k_abs;
    if k > 0 {
        (square - k_abs) / 2
    } else {
        (square + k_abs) / 2
    }
}

/// Partition numbers p(0..=n) in one pass of the pentagonal recurrence:
/// p(N) = sum_{k>=1} (-1)^{k+1} [p(N - omega(k)) + p(N - omega(-k))],
/// with p(m) = 0 for m < 0.
pub fn partition_sequence(n: u64, cap: u64) -> Result<Vec<BigCount>, CombinatoricsError> {
    if n > cap {
        return Err(CombinatoricsError::CapExceeded { n, cap });
    }
    let n = n as usize;
    let mut table: Vec<BigUint> = Vec::with_capacity(n + 1);
    table.push(BigUint::from(1u32));
    for m in 1..=n {
        let mut positive = BigUint::zero();
        let mut negative = BigUint::zero();
        let mut k: i64 = 1;
        loop {
            let omega_plus = pentagonal(k) as usize;
            if omega_plus > m {
                break;
            }
            let sign_positive = k % 2 == 1;
            if sign_positive {
                positive += &table[m - omega_plus];
            } else {
                negative += &table[m - omega_plus];
            }
            let omega_minus = pentagonal(-k) as usize;
            if omega_minus <= m {
                if sign_positive {
                    positive += &table[m - omega_minus];
                } else {
                    negative += &table[m - omega_minus];
                }
            }
            k += 1;
        }
        table.push(positive - negative);
    }
    Ok(table)
}

/// Exact partition number p(n) under the default cap.
pub fn partition_count(n: u64) -> Result<BigCount, CombinatoricsError> {
    partition_count_capped(n, DEFAULT_PARTITION_CAP)
}

pub fn partition_count_capped(n: u64, cap: u64) -> Result<BigCount, CombinatoricsError> {
    Ok(partition_sequence(n, cap)?.pop().unwrap())
}

/// Which asymptotic form produced an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticMethod {
    BellAsymptotic,
    HardyRamanujan,
}

impl AsymptoticMethod {
    pub fn name(&self) -> &'static str {
        match self {
            AsymptoticMethod::BellAsymptotic => "bell-asymptotic",
            AsymptoticMethod::HardyRamanujan => "hardy-ramanujan",
        }
    }
}

/// An asymptotic estimate, carried in log space.
///
/// `value` is the exponentiated estimate when it is representable as a
/// finite f64; above that range only `log_value` is meaningful.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticEstimate {
    pub n: u64,
    pub method: AsymptoticMethod,
    pub log_value: f64,
    pub value: Option<f64>,
}

impl AsymptoticEstimate {
    fn from_log(n: u64, method: AsymptoticMethod, log_value: f64) -> Self {
        let value = if log_value < f64::MAX.ln() {
            Some(log_value.exp())
        } else {
            None
        };
        AsymptoticEstimate {
            n,
            method,
            log_value,
            value,
        }
    }
}

/// Solves K ln K = n by Newton iteration (equivalently K = e^{W(n)}).
///
/// Seeded at max(n/ln(n+1), 1.5); converges to relative tolerance 1e-12.
pub fn solve_k(n: f64) -> f64 {
    assert!(n >= 1.0, "K ln K = n requires n >= 1");
    let mut k = (n / (n + 1.0).ln()).max(1.5);
    for _ in 0..200 {
        let residual = k * k.ln() - n;
        let derivative = k.ln() + 1.0;
        let step = residual / derivative;
        k -= step;
        if step.abs() <= 1e-12 * k.abs() {
            break;
        }
    }
    k
}

/// Asymptotic Bell number B(n) ~ K^n e^{K-n-1} (1 + ln K)^{-1/2} with
/// K ln K = n.
pub fn bell_asymptotic(n: u64) -> AsymptoticEstimate {
    assert!(n >= 1, "asymptotic form requires n >= 1");
    let nf = n as f64;
    let k = solve_k(nf);
    let log_value = nf * k.ln() + (k - nf - 1.0) - 0.5 * (1.0 + k.ln()).ln();
    AsymptoticEstimate::from_log(n, AsymptoticMethod::BellAsymptotic, log_value)
}

/// Hardy-Ramanujan asymptotic p(n) ~ e^{sqrt(2/3) pi sqrt(n)} / (4 sqrt(3) n).
pub fn hardy_ramanujan(n: u64) -> AsymptoticEstimate {
    assert!(n >= 1, "asymptotic form requires n >= 1");
    let nf = n as f64;
    let log_value =
        (2.0f64 / 3.0).sqrt() * std::f64::consts::PI * nf.sqrt() - (4.0 * 3.0f64.sqrt() * nf).ln();
    AsymptoticEstimate::from_log(n, AsymptoticMethod::HardyRamanujan, log_value)
}

/// Natural log of an exact count, accurate for counts far beyond f64 range.
pub fn ln_big(value: &BigCount) -> f64 {
    assert!(!value.is_zero(), "ln of zero");
    let bits = value.bits();
    if bits <= 512 {
        value.to_f64().expect("fits f64 range").ln()
    } else {
        let shift = bits - 64;
        let top = (value >> shift).to_f64().expect("64-bit mantissa");
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// Integer approximation of e^{log_value}, used for order-of-magnitude
/// estimates whose exact computation would be wasteful.
pub(crate) fn biguint_from_log(log_value: f64) -> BigCount {
    if log_value < 0.0 {
        return BigUint::zero();
    }
    let bits = log_value / std::f64::consts::LN_2;
    if bits <= 52.0 {
        return BigUint::from(log_value.exp() as u64);
    }
    let int_bits = bits.floor();
    let mantissa = ((bits - int_bits).exp2() * (1u64 << 52) as f64) as u64;
    BigUint::from(mantissa) << ((int_bits as u64) - 52)
}

/// Diagnostic growth-law exponents (ln B(n) / (n ln n), ln p(n) / sqrt(n)).
pub fn growth_exponents(n: u64) -> Result<(f64, f64), CombinatoricsError> {
    growth_exponents_capped(n, DEFAULT_BELL_CAP, DEFAULT_PARTITION_CAP)
}

pub fn growth_exponents_capped(
    n: u64,
    bell_cap: u64,
    partition_cap: u64,
) -> Result<(f64, f64), CombinatoricsError> {
    if n < 4 {
        return Err(CombinatoricsError::BelowMinimum { n, min: 4 });
    }
    let nf = n as f64;
    let bell_exponent = ln_big(&bell_capped(n, bell_cap)?) / (nf * nf.ln());
    let partition_exponent = ln_big(&partition_count_capped(n, partition_cap)?) / nf.sqrt();
    Ok((bell_exponent, partition_exponent))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE_P: [u64; 10] = [1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
    const TABLE_B: [u64; 10] = [1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975];

    #[test]
    fn bell_base_and_small_values() {
        assert_eq!(bell(0).unwrap(), BigUint::from(1u32));
        assert_eq!(bell(3).unwrap(), BigUint::from(5u32));
        assert_eq!(bell(10).unwrap(), BigUint::from(115975u32));
        let seq = bell_sequence(10, DEFAULT_BELL_CAP).unwrap();
        for (i, expected) in TABLE_B.iter().enumerate() {
            assert_eq!(seq[i + 1], BigUint::from(*expected));
        }
    }

    #[test]
    fn partition_base_and_small_values() {
        assert_eq!(partition_count(0).unwrap(), BigUint::from(1u32));
        assert_eq!(partition_count(6).unwrap(), BigUint::from(11u32));
        assert_eq!(partition_count(10).unwrap(), BigUint::from(42u32));
        // Frozen from the coin-change dynamic-programming oracle.
        assert_eq!(partition_count(100).unwrap(), BigUint::from(190569292u64));
        let seq = partition_sequence(10, DEFAULT_PARTITION_CAP).unwrap();
        for (i, expected) in TABLE_P.iter().enumerate() {
            assert_eq!(seq[i + 1], BigUint::from(*expected));
        }
    }

    #[test]
    fn pentagonal_numbers() {
        assert_eq!(pentagonal(1), 1);
        assert_eq!(pentagonal(-1), 2);
        assert_eq!(pentagonal(2), 5);
        assert_eq!(pentagonal(-2), 7);
        assert_eq!(pentagonal(3), 12);
        assert_eq!(pentagonal(-3), 15);
    }

    #[test]
    fn caps_are_enforced() {
        assert!(matches!(
            bell_capped(11, 10),
            Err(CombinatoricsError::CapExceeded { n: 11, cap: 10 })
        ));
        assert!(matches!(
            partition_count_capped(101, 100),
            Err(CombinatoricsError::CapExceeded { n: 101, cap: 100 })
        ));
    }

    #[test]
    fn newton_solves_k_ln_k() {
        // Bisection oracle for K ln K = 1.
        let (mut lo, mut hi) = (1.0f64, 3.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.ln() < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let k1 = solve_k(1.0);
        assert!((k1 - lo).abs() < 1e-9, "newton {k1} vs bisection {lo}");
        assert!((k1 - 1.763).abs() < 1e-3);

        for n in [1u64, 2, 5, 10, 100, 1000, 1_000_000] {
            let k = solve_k(n as f64);
            let residual = (k * k.ln() - n as f64).abs();
            assert!(residual <= 1e-9 * n as f64, "residual {residual} at n={n}");
        }
    }

    #[test]
    fn bell_asymptotic_tracks_exact_values() {
        let est = bell_asymptotic(10);
        let exact = bell(10).unwrap().to_f64().unwrap();
        let ratio = est.value.unwrap() / exact;
        assert!(ratio > 0.9 && ratio < 1.1, "ratio {ratio}");

        let est100 = bell_asymptotic(100);
        let exact_log = ln_big(&bell(100).unwrap());
        let log_ratio = est100.log_value / exact_log;
        assert!((log_ratio - 1.0).abs() < 0.02, "log ratio {log_ratio}");
    }

    #[test]
    fn hardy_ramanujan_tracks_exact_values() {
        let est = hardy_ramanujan(100);
        let exact = partition_count(100).unwrap().to_f64().unwrap();
        let ratio = est.value.unwrap() / exact;
        assert!(ratio > 1.00 && ratio < 1.10, "ratio {ratio}");

        let est10 = hardy_ramanujan(10);
        assert!(est10.value.unwrap() > 0.0 && est10.value.unwrap().is_finite());

        let exact10 = partition_count(10).unwrap().to_f64().unwrap();
        let gap10 = (est10.value.unwrap() / exact10 - 1.0).abs();
        let exact10000 = partition_count(10_000).unwrap().to_f64().unwrap();
        let gap10000 = (hardy_ramanujan(10_000).value.unwrap() / exact10000 - 1.0).abs();
        let gap100 = (ratio - 1.0).abs();
        assert!(gap100 < gap10, "gap should shrink: {gap100} vs {gap10}");
        assert!(gap10000 < gap100, "gap should shrink: {gap10000} vs {gap100}");
    }

    #[test]
    fn growth_exponent_diagnostics() {
        let (b10, p10) = growth_exponents(10).unwrap();
        let expected_b = (115975f64).ln() / (10.0 * 10f64.ln());
        let expected_p = (42f64).ln() / 10f64.sqrt();
        assert!((b10 - expected_b).abs() < 1e-12);
        assert!((p10 - expected_p).abs() < 1e-12);

        // ln p(100) / 10 = ln(190569292) / 10, about 0.66 below
        // sqrt(2/3) pi because of the prefactor; the gap closes slowly.
        let (_, p100) = growth_exponents(100).unwrap();
        let oracle100 = (190569292f64).ln() / 10.0;
        assert!((p100 - oracle100).abs() < 1e-12, "p exponent {p100}");
        let p10000 = ln_big(&partition_count(10_000).unwrap()) / (10_000f64).sqrt();
        let limit = (2.0f64 / 3.0).sqrt() * std::f64::consts::PI;
        assert!(p10000 > p100 && p10000 < limit, "p exponent {p10000}");
        assert!(p10000 > 2.0 && p10000 < 2.6, "p exponent {p10000}");

        let (b4, p4) = growth_exponents(4).unwrap();
        assert!(b4 > 0.0 && p4 > 0.0);
    }

    #[test]
    fn value_switches_to_log_only_beyond_f64_range() {
        let est = bell_asymptotic(1000);
        assert!(est.value.is_none());
        assert!(est.log_value.is_finite() && est.log_value > 0.0);
    }

    #[test]
    fn ln_big_matches_f64_and_scales() {
        let small = BigUint::from(115975u64);
        assert!((ln_big(&small) - 115975f64.ln()).abs() < 1e-12);
        let huge = BigUint::from(3u8).pow(4000);
        let expected = 4000.0 * 3f64.ln();
        assert!((ln_big(&huge) - expected).abs() / expected < 1e-12);
    }

    #[test]
    fn biguint_from_log_roundtrips_magnitude() {
        for log in [0.5f64, 10.0, 80.0, 500.0, 5000.0] {
            let approx = biguint_from_log(log);
            if log > 1.0 {
                // Truncation to an integer costs at most ~e^{-log} in log space.
                let back = ln_big(&approx);
                let slack = 1e-9 * log + 2.0 * (-log).exp();
                assert!((back - log).abs() < slack, "{back} vs {log}");
            } else {
                assert!(approx <= BigUint::from(2u8));
            }
        }
    }
}
