//! Rigorous rational enclosures of exponentials and floating logarithms of
//! big rationals with explicit error bounds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::Rational;

/// Largest dyadic `k / 2^bits` not exceeding `x`.
pub fn floor_dyadic(x: &Rational, bits: u32) -> Rational {
    let s = BigInt::one() << bits;
    let n = (x.numer() * &s).div_floor(x.denom());
    BigRational::new(n, s)
}

/// Smallest dyadic `k / 2^bits` not below `x`.
pub fn ceil_dyadic(x: &Rational, bits: u32) -> Rational {
    let s = BigInt::one() << bits;
    let n = (x.numer() * &s).div_ceil(x.denom());
    BigRational::new(n, s)
}

fn bit_len(x: &BigInt) -> i64 {
    x.bits() as i64
}

/// Rounds a positive rational down/up keeping roughly `bits` significant bits.
fn round_rel(x: &Rational, bits: u32, up: bool) -> Rational {
    let mag = bit_len(x.numer()) - bit_len(x.denom());
    let shift = bits as i64 - mag;
    if shift < 0 {
        let s = BigInt::one() << (-shift) as u32;
        let q = BigRational::new(x.numer().clone(), x.denom() * &s);
        let n = if up { q.ceil() } else { q.floor() };
        BigRational::from_integer(n.to_integer() * s)
    } else if up {
        ceil_dyadic(x, shift as u32)
    } else {
        floor_dyadic(x, shift as u32)
    }
}

/// `(lo, hi)` with `lo <= exp(q) <= hi`, relative width about `2^-bits`.
pub fn exp_enclosure(q: &Rational, bits: u32) -> (Rational, Rational) {
    if q.is_zero() {
        return (Rational::one(), Rational::one());
    }
    // halve until |x| <= 1/2
    let mut k = 0u32;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut x = q.clone();
    while x.abs() > half {
        x /= BigInt::from(2);
        k += 1;
    }
    let work = bits + k + 16;
    let xl = floor_dyadic(&x, work + 2);
    let xh = ceil_dyadic(&x, work + 2);
    let taylor = |y: &Rational, up: bool| -> Rational {
        let mut term = Rational::one();
        let mut sum = Rational::one();
        let mut j = 1u64;
        // |y| <= 1/2, terms shrink at least by 2 each step
        loop {
            term = round_rel(&(term * y / BigInt::from(j)), work + 8, up);
            sum += &term;
            if term.is_zero() || bit_len(term.denom()) - bit_len(term.numer()) > (work + 8) as i64 {
                break;
            }
            j += 1;
        }
        // tail bound |y|^{j+1}/(j+1)! * 2 <= 2 * |term|, plus per-term rounding
        let slack = term.abs() * BigInt::from(2)
            + BigRational::new(BigInt::from(j + 2), BigInt::one() << (work + 6));
        if up {
            sum + slack
        } else {
            sum - slack
        }
    };
    let mut lo = round_rel(&taylor(&xl, false), work, false);
    let mut hi = round_rel(&taylor(&xh, true), work, true);
    for _ in 0..k {
        lo = round_rel(&(&lo * &lo), work, false);
        hi = round_rel(&(&hi * &hi), work, true);
    }
    (lo, hi)
}

/// Decides the sign of `exp(q) - r` for positive `r`; never returns 0 unless
/// `q = 0` and `r = 1`.
pub fn cmp_exp_rational(q: &Rational, r: &Rational) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    if q.is_zero() {
        return Rational::one().cmp(r);
    }
    if r.is_one() {
        return if q.is_positive() { Greater } else { Less };
    }
    // fast path in floating point with generous margin
    let (lr, lerr) = ln_rational(r);
    if let Some(qf) = q.to_f64() {
        let margin = lerr + (qf.abs() + lr.abs() + 1.0) * 1e-12;
        if qf.is_finite() && lr.is_finite() {
            if qf > lr + margin {
                return Greater;
            }
            if qf < lr - margin {
                return Less;
            }
        }
    }
    // by Lindemann exp(q) is transcendental for rational q != 0, so refinement terminates
    let mut bits = 64;
    loop {
        let (lo, hi) = exp_enclosure(q, bits);
        if &lo > r {
            return Greater;
        }
        if &hi < r {
            return Less;
        }
        bits *= 2;
    }
}

/// `log2` of a positive big integer with absolute error bound.
pub fn log2_bigint(n: &BigInt) -> (f64, f64) {
    debug_assert!(n.is_positive());
    let b = n.bits();
    if b <= 53 {
        let v = n.to_f64().unwrap();
        return (v.log2(), 2.0 * f64::EPSILON);
    }
    let shift = b - 53;
    let top = (n >> shift).to_f64().unwrap();
    // truncation error < 2^-52 relative
    (top.log2() + shift as f64, 4.0 * f64::EPSILON + shift as f64 * f64::EPSILON)
}

/// Natural log of a positive rational with absolute error bound.
pub fn ln_rational(r: &Rational) -> (f64, f64) {
    let (a, ea) = log2_bigint(r.numer());
    let (b, eb) = log2_bigint(r.denom());
    let l2 = a - b;
    let ln = l2 * std::f64::consts::LN_2;
    (ln, (ea + eb + l2.abs() * f64::EPSILON) * 1.0 + ln.abs() * f64::EPSILON)
}

/// A rational strictly between two positive rationals, preferring small height.
pub fn rational_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo < hi);
    // Stern-Brocot style descent via continued fractions
    let mut bits = 1u32;
    loop {
        let c = ceil_dyadic(lo, bits);
        let c = if &c == lo { c + BigRational::new(BigInt::one(), BigInt::one() << bits) } else { c };
        if &c < hi {
            return c;
        }
        bits += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use std::cmp::Ordering::*;

    #[test]
    fn exp_one_enclosed() {
        let (lo, hi) = exp_enclosure(&int(1), 80);
        let e = std::f64::consts::E;
        assert!(lo.to_f64().unwrap() <= e && e <= hi.to_f64().unwrap());
        assert!((&hi - &lo).to_f64().unwrap() < 1e-20);
    }

    #[test]
    fn exp_large_negative() {
        let (lo, hi) = exp_enclosure(&int(-200), 64);
        let v = (-200f64).exp();
        assert!(lo.to_f64().unwrap() <= v * (1.0 + 1e-12));
        assert!(hi.to_f64().unwrap() >= v * (1.0 - 1e-12));
    }

    #[test]
    fn comparisons() {
        assert_eq!(cmp_exp_rational(&int(-1), &rat(1, 2)), Less);
        assert_eq!(cmp_exp_rational(&int(1), &rat(271828, 100000)), Greater);
        assert_eq!(cmp_exp_rational(&int(1), &rat(271829, 100000)), Less);
        assert_eq!(cmp_exp_rational(&int(0), &int(1)), Equal);
    }

    #[test]
    fn close_call_uses_enclosure() {
        // e rounded to 30 digits
        let r = BigRational::new(
            "2718281828459045235360287471352".parse().unwrap(),
            BigInt::from(10).pow(30),
        );
        assert_eq!(cmp_exp_rational(&int(1), &r), Greater);
    }

    #[test]
    fn between() {
        let m = rational_between(&rat(1, 3), &rat(1, 2));
        assert!(m > rat(1, 3) && m < rat(1, 2));
    }
}
