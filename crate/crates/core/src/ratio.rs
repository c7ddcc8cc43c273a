//! Exact rational helpers shared across the crate.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Ratio of two counts, as an exact rational.
pub fn ratio(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

pub fn small(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Huge numerators and denominators: scale both down to fit an f64.
    let n = q.numer().bits() as i64;
    let d = q.denom().bits() as i64;
    let shift = (n.max(d) - 1000).max(0) as usize;
    let nf = (q.numer() >> shift).to_f64().unwrap_or(0.0);
    let df = (q.denom() >> shift).to_f64().unwrap_or(1.0);
    nf / df
}

/// `p/q` when the denominator is not one, otherwise the integer.
pub fn fmt(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A rational strictly below `1/e`: the alternating series for `e^{-1}`
/// truncated after an odd term sits below the limit, and a further `10^-9`
/// is subtracted.
pub fn inv_e_lower_bound() -> BigRational {
    let mut sum = BigRational::zero();
    let mut fact = BigInt::one();
    for k in 0..=25u32 {
        if k > 0 {
            fact *= BigInt::from(k);
        }
        let term = BigRational::new(BigInt::one(), fact.clone());
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum - small(1, 1_000_000_000)
}

pub fn pow(base: &BigRational, exp: u32) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..exp {
        out *= base;
    }
    out
}

/// Numerator/denominator string pair used in JSON reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RationalRepr {
    fn from(q: &BigRational) -> Self {
        RationalRepr {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
}

impl RationalRepr {
    pub fn value(&self) -> Option<BigRational> {
        Some(BigRational::new(self.num.parse().ok()?, self.den.parse().ok()?))
    }
}
