//! Exact scalar fields.
//!
//! Everything above this layer is generic over [`Scalar`]. Two families are
//! provided: prime fields `Fp<P>` (with `P < 2^31` a prime, fixed at compile
//! time) and the rationals `BigRational`.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// An exact field element.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Eq
    + Hash
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Characteristic of the field, 0 for the rationals.
    fn characteristic() -> u64;

    /// Number of elements, `None` when infinite.
    fn order() -> Option<u64>;

    fn from_i64(v: i64) -> Self;

    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;

    /// Parse a decimal string such as `"3"` or `"-1/2"`.
    fn parse_str(s: &str) -> Result<Self>;

    /// The `i`-th element in a fixed enumeration of the field.
    ///
    /// For finite fields this is a bijection `0..order -> F`; for the
    /// rationals it walks a small window of integers.
    fn nth_element(i: u64) -> Self;

    /// A uniformly random element (finite fields) or a small random integer.
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn is_zero_ref(&self) -> bool {
        self.is_zero()
    }
}

/// Element of the prime field `F_P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    pub const MODULUS: u32 = P;

    pub fn new(v: u64) -> Self {
        Fp((v % P as u64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp::<P>(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u32> Debug for Fp<P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Display for Fp<P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        let s = self.0 as u64 + rhs.0 as u64;
        Fp(if s >= P as u64 { s - P as u64 } else { s } as u32)
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        if self.0 >= rhs.0 {
            Fp(self.0 - rhs.0)
        } else {
            Fp((self.0 as u64 + P as u64 - rhs.0 as u64) as u32)
        }
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u64 * rhs.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Fp(P - self.0)
        }
    }
}

impl<const P: u32> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inverse().expect("division by zero in F_p")
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

/// Trial-division primality test; moduli are below 2^31.
pub const fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl<const P: u32> Scalar for Fp<P> {
    fn characteristic() -> u64 {
        P as u64
    }

    fn order() -> Option<u64> {
        Some(P as u64)
    }

    fn from_i64(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u32)
    }

    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P as u64 - 2))
        }
    }

    fn parse_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let parse = |t: &str| -> Result<Self> {
            let v = BigInt::from_str(t)
                .map_err(|_| Error::Parse(format!("invalid field element `{s}`")))?;
            let r = v.mod_floor_u32(P);
            Ok(Fp(r))
        };
        let n = parse(num)?;
        match den {
            None => Ok(n),
            Some(d) => {
                let d = parse(d)?;
                let inv = d
                    .inverse()
                    .ok_or_else(|| Error::Parse(format!("zero denominator in `{s}`")))?;
                Ok(n * inv)
            }
        }
    }

    fn nth_element(i: u64) -> Self {
        Fp::new(i)
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp(rng.gen_range(0..P))
    }
}

trait ModFloor {
    fn mod_floor_u32(&self, p: u32) -> u32;
}

impl ModFloor for BigInt {
    fn mod_floor_u32(&self, p: u32) -> u32 {
        use num_integer::Integer;
        let m = BigInt::from(p);
        let r = self.mod_floor(&m);
        r.to_string().parse::<u32>().unwrap_or(0)
    }
}

impl Scalar for BigRational {
    fn characteristic() -> u64 {
        0
    }

    fn order() -> Option<u64> {
        None
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn parse_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational `{s}`"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in `{s}`")));
                }
                Ok(BigRational::new(n, d))
            }
            None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
        }
    }

    fn nth_element(i: u64) -> Self {
        // 0, 1, -1, 2, -2, ...
        let k = i.div_ceil(2) as i64;
        Self::from_i64(if i % 2 == 1 { k } else { -k })
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::from_i64(rng.gen_range(-3..=3))
    }
}

/// Render a rational in the canonical `"n"` / `"n/d"` form.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else if q.is_negative() {
        format!("-{}/{}", q.numer().abs(), q.denom())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F7 = Fp<7>;

    #[test]
    fn prime_field_inverses() {
        for v in 1..7 {
            let x = F7::new(v);
            assert_eq!(x * x.inverse().unwrap(), F7::one());
        }
        assert!(F7::zero().inverse().is_none());
    }

    #[test]
    fn parse_field_strings() {
        assert_eq!(F7::parse_str("-1").unwrap(), F7::new(6));
        assert_eq!(F7::parse_str("1/2").unwrap(), F7::new(4));
        assert!(F7::parse_str("1/7").is_err());
        assert!(F7::parse_str("x").is_err());
        let q = BigRational::parse_str("-2/4").unwrap();
        assert_eq!(format_rational(&q), "-1/2");
        assert_eq!(q.to_string(), "-1/2");
    }

    #[test]
    fn enumeration_is_bijective_on_small_fields() {
        let elems: std::collections::HashSet<_> = (0..7).map(F7::nth_element).collect();
        assert_eq!(elems.len(), 7);
    }

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(3) && is_prime(2_147_483_647));
        assert!(!is_prime(1) && !is_prime(91));
    }
}
