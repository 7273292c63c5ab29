//! Exact and asymptotic closed forms for simple-loop counts under the
//! configuration model.
//!
//! The probability that a uniformly random rooted non-backtracking walk
//! of length `k` on a random graph closes into a simple loop is the
//! exact product
//!
//! ```text
//! p = prod_{j=1}^{k-1} (1 - ((d-1) + (j-1)(d-2)) / (dn - (2j-1)))
//!     * (d-1) / (dn - (2k-1)),
//! ```
//!
//! obtained by pairing half-edges lazily as the walk consumes them: at
//! step `j` exactly `(d-1) + (j-1)(d-2)` of the `dn - (2j-1)` unpaired
//! half-edges sit on already-visited vertices, and the closing step
//! must land on one of the `d-1` free half-edges of the start vertex.
//! Every oriented simple loop owns `k` rooted walks, so
//! `E[N_simp(k)] = n d (d-1)^(k-1) p / k` holds exactly, an identity the
//! test suite checks against exhaustive enumeration of all pairings,
//! with rational equality and no tolerance.
//!
//! All values here are exact `BigRational`s; floating point appears
//! only in the heuristic [`predicted_ratio`].

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TheoryError {
    #[error("parameters out of range: d = {d}, n = {n}, k = {k}")]
    InvalidParams { d: usize, n: usize, k: usize },
}

/// Exact closure probability `p` for one `(d, n, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactProbability {
    pub d: usize,
    pub n: usize,
    pub k: usize,
    pub value: BigRational,
    /// Set when `k > n` forced the value to 0 (no simple loop fits).
    pub truncated: bool,
}

fn ratio(num: i128, den: i128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// The exact product formula for `p`, the probability that a random
/// rooted non-backtracking walk on a configuration-model graph is a
/// simple closed loop. Returns 0 with the `truncated` flag for `k > n`.
pub fn exact_simple_closed_prob(
    d: usize,
    n: usize,
    k: usize,
) -> Result<ExactProbability, TheoryError> {
    if d < 1 || n < 1 || k < 1 || (d * n) % 2 != 0 {
        return Err(TheoryError::InvalidParams { d, n, k });
    }
    if k > n {
        return Ok(ExactProbability { d, n, k, value: BigRational::zero(), truncated: true });
    }
    let dn = (d * n) as i128;
    let (d, n, k, ki) = (d, n, k, k as i128);
    let mut p = BigRational::one();
    for j in 1..ki {
        let blocked = (d as i128 - 1) + (j - 1) * (d as i128 - 2);
        let unpaired = dn - (2 * j - 1);
        p *= BigRational::one() - ratio(blocked, unpaired);
    }
    p *= ratio(d as i128 - 1, dn - (2 * ki - 1));
    Ok(ExactProbability { d, n, k, value: p, truncated: false })
}

/// Exact expectation of the oriented simple-loop count at length `k`
/// over the configuration model: `n d (d-1)^(k-1) p / k`.
pub fn exact_expected_simple(d: usize, n: usize, k: usize) -> Result<BigRational, TheoryError> {
    let p = exact_simple_closed_prob(d, n, k)?;
    let mut walks = BigInt::from(n) * BigInt::from(d);
    walks *= BigInt::from(d.max(1) - 1).pow(k as u32 - 1);
    Ok(p.value * BigRational::new(walks, BigInt::from(k)))
}

/// The `n -> infinity` limit of the expected count, `(d-1)^k / k`.
pub fn asymptotic_count(d: usize, k: usize) -> BigRational {
    assert!(d >= 2 && k >= 1);
    BigRational::new(BigInt::from(d - 1).pow(k as u32), BigInt::from(k))
}

/// Heuristic transition predictor `k E[N_simp] / (d-1)^k`, the expected
/// share of the asymptotic count realized at finite `n`. Used to choose
/// experiment grids and thresholds, never in correctness assertions.
/// At `k = 1` the value `dn/(dn-1)` slightly exceeds 1 because the
/// primitive-count proxy in the denominator undercounts there.
pub fn predicted_ratio(d: usize, n: usize, k: usize) -> Result<f64, TheoryError> {
    let e = exact_expected_simple(d, n, k)?;
    let scale = BigRational::new(BigInt::from(k), BigInt::from(d - 1).pow(k as u32));
    Ok(rational_to_f64(&(e * scale)))
}

/// Universal bound `n d^r` on the primitive-loop count of any
/// `d`-regular graph on `n` vertices.
pub fn primitive_upper_bound(d: usize, n: usize, r: usize) -> BigUint {
    assert!(r >= 1);
    BigUint::from(n) * BigUint::from(d).pow(r as u32)
}

/// Lossy conversion for reporting; exact math stays rational.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of leading digits when the parts
        // individually overflow f64.
        let digits = |x: &BigInt| -> (f64, i64) {
            let s = x.magnitude().to_string();
            let lead: f64 = s[..s.len().min(17)].parse().unwrap_or(0.0);
            (lead, s.len() as i64 - s.len().min(17) as i64)
        };
        let (ln, en) = digits(r.numer());
        let (ld, ed) = digits(r.denom());
        let sign = if r.is_negative() { -1.0 } else { 1.0 };
        sign * (ln / ld) * 10f64.powi((en - ed) as i32)
    })
}

/// Decimal expansion of a rational to `sig` significant digits, plain
/// notation, round-half-away at the last digit.
pub fn format_decimal(r: &BigRational, sig: usize) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let abs = r.abs();
    // Decimal exponent e with |r| in [10^e, 10^(e+1)).
    let num_len = abs.numer().to_string().len() as i64;
    let den_len = abs.denom().to_string().len() as i64;
    let mut e = num_len - den_len;
    let pow10 = |p: i64| -> BigRational {
        let ten = BigInt::from(10).pow(p.unsigned_abs() as u32);
        if p >= 0 {
            BigRational::from_integer(ten)
        } else {
            BigRational::new(BigInt::one(), ten)
        }
    };
    if abs < pow10(e) {
        e -= 1;
    } else if abs >= pow10(e + 1) {
        e += 1;
    }
    // m = round(|r| * 10^(sig-1-e)) has exactly sig digits, except when
    // rounding carries it to 10^sig.
    let mut m = (abs * pow10(sig as i64 - 1 - e)).round().to_integer();
    if m.to_string().len() > sig {
        m /= BigInt::from(10);
        e += 1;
    }
    let digits = m.to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if e >= sig as i64 - 1 {
        out.push_str(&digits);
        for _ in 0..(e - (sig as i64 - 1)) {
            out.push('0');
        }
    } else if e >= 0 {
        let split = (e + 1) as usize;
        out.push_str(&digits[..split]);
        out.push('.');
        out.push_str(&digits[split..]);
    } else {
        out.push_str("0.");
        for _ in 0..(-e - 1) {
            out.push('0');
        }
        out.push_str(&digits);
    }
    out
}
