//! Factorials and Laguerre polynomials.
//!
//! Everything downstream only ever needs Laguerre polynomials at non-positive
//! arguments, where every term of the power series is nonnegative. Those are
//! summed directly (in the log domain when magnitudes get large); the
//! three-term recurrence is reserved for positive arguments.

use std::ops::{Div, Mul};
use std::sync::OnceLock;

/// Largest `n` whose `ln(n!)` is served from the precomputed table.
pub const LOG_FACTORIAL_TABLE_MAX: usize = 2000;

/// Sign of a [`LogValue`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn of(x: f64) -> Self {
        if x > 0.0 {
            Sign::Positive
        } else if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    fn times(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Negative => -1.0,
            Sign::Zero => 0.0,
            Sign::Positive => 1.0,
        }
    }
}

/// A real number stored as `sign * exp(log_magnitude)`.
///
/// When `sign` is [`Sign::Zero`] the magnitude field is meaningless and is
/// never read.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogValue {
    pub log_magnitude: f64,
    pub sign: Sign,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { log_magnitude: f64::NEG_INFINITY, sign: Sign::Zero };
    pub const ONE: LogValue = LogValue { log_magnitude: 0.0, sign: Sign::Positive };

    pub fn positive(log_magnitude: f64) -> Self {
        LogValue { log_magnitude, sign: Sign::Positive }
    }

    pub fn from_f64(x: f64) -> Self {
        match Sign::of(x) {
            Sign::Zero => LogValue::ZERO,
            sign => LogValue { log_magnitude: x.abs().ln(), sign },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    /// Converts back to a float; may overflow to infinity or underflow to zero.
    pub fn to_f64(&self) -> f64 {
        match self.sign {
            Sign::Zero => 0.0,
            s => s.as_f64() * self.log_magnitude.exp(),
        }
    }

    pub fn sqrt(self) -> LogValue {
        match self.sign {
            Sign::Zero => LogValue::ZERO,
            Sign::Positive => LogValue::positive(0.5 * self.log_magnitude),
            Sign::Negative => panic!("square root of a negative LogValue"),
        }
    }

    /// Ratio of two values as a plain float, `self / other`.
    pub fn ratio(self, other: LogValue) -> f64 {
        (self / other).to_f64()
    }
}

impl Mul for LogValue {
    type Output = LogValue;

    // magnitudes multiply, so their logarithms add
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, other: LogValue) -> LogValue {
        match self.sign.times(other.sign) {
            Sign::Zero => LogValue::ZERO,
            sign => LogValue { log_magnitude: self.log_magnitude + other.log_magnitude, sign },
        }
    }
}

/// Dividing by zero yields zero only when the numerator is zero; otherwise it
/// panics.
impl Div for LogValue {
    type Output = LogValue;

    fn div(self, other: LogValue) -> LogValue {
        if self.is_zero() {
            return LogValue::ZERO;
        }
        assert!(!other.is_zero(), "LogValue division by zero");
        LogValue { log_magnitude: self.log_magnitude - other.log_magnitude, sign: self.sign.times(other.sign) }
    }
}

/// `ln(sum(exp(x_i)))`, ignoring `-inf` entries. Returns `-inf` for an empty
/// or all-`-inf` input.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = xs.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}

fn log_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(LOG_FACTORIAL_TABLE_MAX + 1);
        table.push(0.0);
        // Neumaier-compensated running sum of ln k.
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for k in 1..=LOG_FACTORIAL_TABLE_MAX {
            let term = (k as f64).ln();
            let t = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
            table.push(sum + comp);
        }
        table
    })
}

/// `ln(n!)`.
pub fn log_factorial(n: usize) -> f64 {
    if n <= LOG_FACTORIAL_TABLE_MAX {
        return log_factorial_table()[n];
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x
        + 0.5 * (2.0 * std::f64::consts::PI * x).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn log_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    log_factorial(n) - log_factorial(k) - log_factorial(n - k)
}

/// Laguerre polynomial `L_m(x)`.
pub fn laguerre(m: usize, x: f64) -> f64 {
    assoc_laguerre(m, 0, x)
}

/// Associated Laguerre polynomial `L_m^(k)(x)` for integer `k >= 0`.
pub fn assoc_laguerre(m: usize, k: usize, x: f64) -> f64 {
    if x <= 0.0 {
        // all terms nonnegative: t_n = (m+k)! / ((m-n)! n! (k+n)!) (-x)^n
        let mut term: f64 = (1..=k).map(|j| (m + j) as f64 / j as f64).product();
        let mut sum = term;
        for n in 0..m {
            term *= (m - n) as f64 * (-x) / ((n + 1) as f64 * (k + n + 1) as f64);
            sum += term;
        }
        sum
    } else {
        let kf = k as f64;
        let mut prev = 1.0;
        if m == 0 {
            return prev;
        }
        let mut cur = 1.0 + kf - x;
        for n in 1..m {
            let nf = n as f64;
            let next = ((2.0 * nf + 1.0 + kf - x) * cur - (nf + kf) * prev) / (nf + 1.0);
            prev = cur;
            cur = next;
        }
        cur
    }
}

/// `L_m^(k)(-x)` for `x >= 0`, as a [`LogValue`] (always positive).
pub fn log_assoc_laguerre_negarg(m: usize, k: usize, x: f64) -> LogValue {
    debug_assert!(x >= 0.0, "argument must be nonnegative, got {x}");
    if x == 0.0 {
        return LogValue::positive(log_binomial(m + k, m));
    }
    let ln_x = x.ln();
    let terms: Vec<f64> = (0..=m).map(|n| log_binomial(m + k, m - n) - log_factorial(n) + n as f64 * ln_x).collect();
    LogValue::positive(log_sum_exp(&terms))
}

/// `L_m(-x)` for `x >= 0`, as a [`LogValue`].
pub fn log_laguerre_negarg(m: usize, lambda_sq: f64) -> LogValue {
    log_assoc_laguerre_negarg(m, 0, lambda_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn laguerre_small_cases() {
        assert_eq!(laguerre(5, 0.0), 1.0);
        for x in [-1.0, 0.0, 2.0] {
            assert_relative_eq!(laguerre(1, x), 1.0 - x, epsilon = 1e-15);
        }
        assert_relative_eq!(laguerre(2, -1.0), 3.5, epsilon = 1e-14);
        // positive branch agrees with the closed form (x^2 - 4x + 2)/2
        assert_relative_eq!(laguerre(2, 3.0), (9.0 - 12.0 + 2.0) / 2.0, epsilon = 1e-14);
    }

    #[test]
    fn assoc_laguerre_cases() {
        assert_relative_eq!(assoc_laguerre(3, 0, -2.0), laguerre(3, -2.0), epsilon = 1e-14);
        assert_eq!(assoc_laguerre(0, 2, 5.0), 1.0);
        // exact rational oracle: 13/2
        assert_relative_eq!(assoc_laguerre(2, 1, -1.0), 6.5, epsilon = 1e-14);
        // positive-argument recurrence against (x^2 - 6x + 6)/2
        assert_relative_eq!(assoc_laguerre(2, 1, 1.5), (2.25 - 9.0 + 6.0) / 2.0, epsilon = 1e-14);
    }

    #[test]
    fn log_factorial_values() {
        assert_eq!(log_factorial(0), 0.0);
        assert_eq!(log_factorial(1), 0.0);
        assert_relative_eq!(log_factorial(10), 3628800f64.ln(), max_relative = 1e-14);
        // table and Stirling branch meet smoothly
        let a = log_factorial(LOG_FACTORIAL_TABLE_MAX);
        let b = log_factorial(LOG_FACTORIAL_TABLE_MAX + 1);
        assert_relative_eq!(b - a, ((LOG_FACTORIAL_TABLE_MAX + 1) as f64).ln(), max_relative = 1e-9);
    }

    #[test]
    fn log_laguerre_negarg_values() {
        assert_eq!(log_laguerre_negarg(0, 7.3).to_f64(), 1.0);
        assert_relative_eq!(log_laguerre_negarg(2, 1.0).log_magnitude, 3.5f64.ln(), max_relative = 1e-14);
        let big = log_laguerre_negarg(200, 999.0);
        assert_eq!(big.sign, Sign::Positive);
        // mpmath, 50 digits
        assert_relative_eq!(big.log_magnitude, 552.061_226_484_933_9, max_relative = 1e-13);
        // M! * L_M(-lambda^2) is the quantity that cannot be formed directly
        assert!((log_factorial(200) + big.log_magnitude).exp().is_infinite());
    }

    #[test]
    fn log_value_arithmetic() {
        let a = LogValue::from_f64(-4.0);
        let b = LogValue::from_f64(2.0);
        assert_relative_eq!((a * b).to_f64(), -8.0, epsilon = 1e-14);
        assert_relative_eq!((a / b).to_f64(), -2.0, epsilon = 1e-14);
        assert!((LogValue::ZERO * a).is_zero());
        assert!((LogValue::ZERO / a).is_zero());
        assert_relative_eq!(LogValue::from_f64(9.0).sqrt().to_f64(), 3.0, epsilon = 1e-14);
    }

    #[test]
    fn recurrence_consistency() {
        for m in 1..=100usize {
            for i in 0..=20 {
                let x = -50.0 + 5.0 * i as f64;
                let lhs = (m + 1) as f64 * laguerre(m + 1, x);
                let a = (2.0 * m as f64 + 1.0 - x) * laguerre(m, x);
                let b = m as f64 * laguerre(m - 1, x);
                let scale = lhs.abs().max(a.abs()).max(b.abs());
                assert!((lhs - (a - b)).abs() <= 1e-10 * scale, "m={m} x={x}");
            }
        }
    }

    #[test]
    fn log_and_direct_agree() {
        for m in [0usize, 1, 3, 10, 40, 100] {
            for x in [0.0, 0.01, 0.5, 1.0, 7.0, 30.0] {
                let direct = laguerre(m, -x);
                let logv = log_laguerre_negarg(m, x).to_f64();
                assert_relative_eq!(direct, logv, max_relative = 1e-10);
                assert!(direct >= 1.0);
            }
        }
    }
}
