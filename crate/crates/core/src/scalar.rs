//! Scalar field abstraction shared by polynomials and matrices.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// A commutative field of characteristic 0 (or a floating approximation of one).
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self;

    fn from_rational(q: &Rational) -> Self;

    /// Image in `F_p` under a reduction map defined on a local subring, or
    /// `None` outside that subring (or when the field has none).
    fn mod_p(&self, _p: u64) -> Option<u64> {
        None
    }
}

/// Fields with a decidable total order, used by Sturm sequences.
pub trait OrderedField: Field + PartialOrd {
    fn sign(&self) -> i32 {
        if self.is_zero() {
            0
        } else if *self > Self::zero() {
            1
        } else {
            -1
        }
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn mod_p(&self, p: u64) -> Option<u64> {
        rational_mod_p(self, p)
    }
}

/// `a/b mod p` when `p` does not divide `b`.
pub fn rational_mod_p(q: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = q.denom().mod_floor(&pb).to_u64()?;
    if den == 0 {
        return None;
    }
    let num = q.numer().mod_floor(&pb).to_u64()?;
    Some(((num as u128 * crate::modp::invm(den, p) as u128) % p as u128) as u64)
}

impl OrderedField for BigRational {}

macro_rules! float_field {
    ($t:ty) => {
        impl Field for $t {
            fn inv(&self) -> Option<Self> {
                if *self == 0.0 {
                    None
                } else {
                    Some(1.0 / *self)
                }
            }

            fn from_i64(n: i64) -> Self {
                n as $t
            }

            fn from_rational(q: &Rational) -> Self {
                q.to_f64().unwrap_or(f64::NAN) as $t
            }
        }

        impl OrderedField for $t {}
    };
}

float_field!(f64);
float_field!(f32);

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `p/q`, `p` or a signed variant of either.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Canonical text form: `p` or `p/q` with q > 0.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// p-adic order of a nonzero integer.
pub fn int_ord(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut k = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        m = q;
        k += 1;
    }
}

/// p-adic order of a rational; `None` for zero.
pub fn rat_ord(q: &Rational, p: &BigInt) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(int_ord(q.numer(), p) - int_ord(q.denom(), p))
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime_u64(k)).collect()
}

/// Exact k-th root of a nonnegative integer, if it exists.
pub fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact k-th root of a positive rational, if it exists.
pub fn exact_rat_root(q: &Rational, k: u32) -> Option<Rational> {
    let n = exact_root(q.numer(), k)?;
    let d = exact_root(q.denom(), k)?;
    Some(BigRational::new(n, d))
}

/// Integer power with signed exponent.
pub fn rat_powi(q: &Rational, e: i64) -> Rational {
    let p = num_traits::pow(q.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

pub fn lcm_denoms<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-6/4"), Some(rat(-3, 2)));
        assert_eq!(fmt_rational(&rat(-3, 2)), "-3/2");
        assert_eq!(fmt_rational(&int(7)), "7");
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn orders() {
        let p = BigInt::from(3);
        assert_eq!(rat_ord(&rat(27, 2), &p), Some(3));
        assert_eq!(rat_ord(&rat(2, 9), &p), Some(-2));
        assert_eq!(rat_ord(&int(0), &p), None);
    }

    #[test]
    fn roots() {
        assert_eq!(exact_rat_root(&rat(4, 9), 2), Some(rat(2, 3)));
        assert_eq!(exact_rat_root(&int(5), 2), None);
    }
}
