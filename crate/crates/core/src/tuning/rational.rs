//! Exact positive fractions over 128-bit integers.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::TuningError;

/// A strictly positive fraction stored in lowest terms.
///
/// Every pitch ratio in the crate is one of these. Arithmetic is checked:
/// anything that would not fit in `u128` is reported instead of rounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    numer: u128,
    denom: u128,
}

pub(crate) fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub const ONE: Rational = Rational { numer: 1, denom: 1 };
    pub const TWO: Rational = Rational { numer: 2, denom: 1 };

    /// Builds `numer/denom` reduced to lowest terms.
    pub fn new(numer: u128, denom: u128) -> Result<Self, TuningError> {
        if numer == 0 || denom == 0 {
            return Err(TuningError::NonPositive { numer, denom });
        }
        let g = gcd(numer, denom);
        Ok(Rational {
            numer: numer / g,
            denom: denom / g,
        })
    }

    /// Const constructor for literals already in lowest terms.
    pub(crate) const fn raw(numer: u128, denom: u128) -> Self {
        Rational { numer, denom }
    }

    pub fn numer(&self) -> u128 {
        self.numer
    }

    pub fn denom(&self) -> u128 {
        self.denom
    }

    pub fn recip(self) -> Self {
        Rational {
            numer: self.denom,
            denom: self.numer,
        }
    }

    pub fn checked_mul(self, other: Rational) -> Result<Rational, TuningError> {
        // Cross-reduce first so intermediate products stay as small as possible.
        let g1 = gcd(self.numer, other.denom);
        let g2 = gcd(other.numer, self.denom);
        let numer = (self.numer / g1).checked_mul(other.numer / g2);
        let denom = (self.denom / g2).checked_mul(other.denom / g1);
        match (numer, denom) {
            (Some(numer), Some(denom)) => Ok(Rational { numer, denom }),
            _ => Err(TuningError::Overflow),
        }
    }

    pub fn checked_div(self, other: Rational) -> Result<Rational, TuningError> {
        self.checked_mul(other.recip())
    }

    /// `self^exp` for any signed exponent.
    pub fn checked_pow(self, exp: i32) -> Result<Rational, TuningError> {
        let base = if exp < 0 { self.recip() } else { self };
        let mut acc = Rational::ONE;
        for _ in 0..exp.unsigned_abs() {
            acc = acc.checked_mul(base)?;
        }
        Ok(acc)
    }

    /// Multiplies by `2^k`.
    pub fn checked_mul_pow2(self, k: i32) -> Result<Rational, TuningError> {
        let mut r = self;
        if k >= 0 {
            for _ in 0..k {
                r = r.double()?;
            }
        } else {
            for _ in 0..k.unsigned_abs() {
                r = r.halve()?;
            }
        }
        Ok(r)
    }

    fn double(self) -> Result<Rational, TuningError> {
        if self.denom % 2 == 0 {
            Ok(Rational {
                numer: self.numer,
                denom: self.denom / 2,
            })
        } else {
            let numer = self.numer.checked_mul(2).ok_or(TuningError::Overflow)?;
            Ok(Rational {
                numer,
                denom: self.denom,
            })
        }
    }

    fn halve(self) -> Result<Rational, TuningError> {
        if self.numer % 2 == 0 {
            Ok(Rational {
                numer: self.numer / 2,
                denom: self.denom,
            })
        } else {
            let denom = self.denom.checked_mul(2).ok_or(TuningError::Overflow)?;
            Ok(Rational {
                numer: self.numer,
                denom,
            })
        }
    }

    /// Brings the ratio into the octave `[1, 2)` by a power of two.
    ///
    /// Only fails when the reduced value itself needs more than 128 bits,
    /// which takes an operand within a factor of two of `u128::MAX`.
    pub fn octave_reduce(self) -> Result<Rational, TuningError> {
        // Both sides odd, then align bit lengths by shifting the shorter one.
        let mut numer = self.numer >> self.numer.trailing_zeros();
        let mut denom = self.denom >> self.denom.trailing_zeros();
        let nbits = 128 - numer.leading_zeros();
        let dbits = 128 - denom.leading_zeros();
        if nbits > dbits {
            denom <<= nbits - dbits;
        } else {
            numer <<= dbits - nbits;
        }
        // Same bit length, so numer/denom lies in (1/2, 2).
        if numer < denom {
            if denom % 2 == 0 {
                denom >>= 1;
            } else {
                numer = numer.checked_mul(2).ok_or(TuningError::Overflow)?;
            }
        }
        // Only one side carries a power of two and the other is odd, so the
        // pair is already coprime.
        Ok(Rational { numer, denom })
    }

    pub fn to_f64(self) -> f64 {
        self.numer as f64 / self.denom as f64
    }

    /// Size of the interval in cents: `1200 · log2(numer/denom)`.
    pub fn cents(self) -> f64 {
        // Split the logarithm so huge numerators keep full precision.
        1200.0 * (log2_u128(self.numer) - log2_u128(self.denom))
    }
}

fn log2_u128(x: u128) -> f64 {
    if x < (1u128 << 53) {
        (x as f64).log2()
    } else {
        let shift = (128 - x.leading_zeros()) - 53;
        ((x >> shift) as f64).log2() + shift as f64
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        // 256-bit cross multiplication to avoid overflow.
        let lhs = wide_mul(self.numer, other.denom);
        let rhs = wide_mul(other.numer, self.denom);
        lhs.cmp(&rhs)
    }
}

/// Full 256-bit product as (high, low).
fn wide_mul(a: u128, b: u128) -> (u128, u128) {
    let mask = u64::MAX as u128;
    let (a_hi, a_lo) = (a >> 64, a & mask);
    let (b_hi, b_lo) = (b >> 64, b & mask);
    let ll = a_lo * b_lo;
    let lh = a_lo * b_hi;
    let hl = a_hi * b_lo;
    let hh = a_hi * b_hi;
    let mid = (ll >> 64) + (lh & mask) + (hl & mask);
    let low = (ll & mask) | (mid << 64);
    let high = hh + (lh >> 64) + (hl >> 64) + (mid >> 64);
    (high, low)
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer, self.denom)
    }
}

impl FromStr for Rational {
    type Err = TuningError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TuningError::Parse(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: u128 = n.parse().map_err(|_| bad())?;
        let d: u128 = d.parse().map_err(|_| bad())?;
        Rational::new(n, d)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u128, d: u128) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn new_reduces_to_lowest_terms() {
        let x = r(18, 12);
        assert_eq!((x.numer(), x.denom()), (3, 2));
    }

    #[test]
    fn zero_is_rejected() {
        assert!(Rational::new(0, 3).is_err());
        assert!(Rational::new(3, 0).is_err());
    }

    #[test]
    fn octave_reduce_examples() {
        let oct = |x: Rational| x.octave_reduce().unwrap();
        assert_eq!(oct(r(3, 2)), r(3, 2));
        assert_eq!(oct(r(9, 4)), r(9, 8));
        assert_eq!(oct(r(1, 3)), r(4, 3));
        assert_eq!(oct(r(2, 1)), Rational::ONE);
        assert_eq!(oct(r(1, 1024)), Rational::ONE);
        assert_eq!(oct(r(1023, 512)), r(1023, 512));
        assert_eq!(oct(r(3, 1 << 100)), r(3, 2));
    }

    #[test]
    fn octave_reduce_huge_values() {
        let x = r(u128::MAX, 1).octave_reduce().unwrap();
        assert!(x >= Rational::ONE && x < Rational::TWO);
        let y = r(3, u128::MAX >> 1).octave_reduce().unwrap();
        assert!(y >= Rational::ONE && y < Rational::TWO);
        // 2^128 / (2^128 - 1) does not fit.
        assert_eq!(r(1, u128::MAX).octave_reduce(), Err(TuningError::Overflow));
    }

    #[test]
    fn mul_overflow_is_reported() {
        let big = r(u128::MAX, 1);
        assert_eq!(big.checked_mul(r(3, 1)), Err(TuningError::Overflow));
    }

    #[test]
    fn ordering_uses_exact_cross_products() {
        assert!(r(u128::MAX, u128::MAX - 1) < r(u128::MAX - 1, u128::MAX - 2));
        assert!(r(3, 2) < r(5, 3));
        assert_eq!(r(6, 4).cmp(&r(3, 2)), Ordering::Equal);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("21/16".parse::<Rational>().unwrap(), r(21, 16));
        assert_eq!("7".parse::<Rational>().unwrap(), r(7, 1));
        assert_eq!(r(15, 8).to_string(), "15/8");
        assert!("3/".parse::<Rational>().is_err());
        assert!("0/1".parse::<Rational>().is_err());
    }

    #[test]
    fn cents_of_unison_and_comma() {
        assert_eq!(Rational::ONE.cents(), 0.0);
        assert!((r(81, 80).cents() - 21.506).abs() < 1e-3);
        assert!((r(2, 1).cents() - 1200.0).abs() < 1e-12);
    }
}
