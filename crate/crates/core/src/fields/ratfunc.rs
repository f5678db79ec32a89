//! Rational functions `num/den` over a field, kept coprime with monic denominator.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::poly::Poly;
use crate::scalar::{Field, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc<F> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    /// Normalizes `num/den`; `None` when `den = 0`.
    pub fn new(num: Poly<F>, den: Poly<F>) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RatFunc { num, den: Poly::one() });
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        let lc = d.lc();
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero leading coefficient");
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Some(RatFunc { num: n, den: d })
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: F) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn var() -> Self {
        RatFunc::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<F> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_constant()
    }

    /// `ord_inf = deg(den) - deg(num)`; `None` for zero.
    pub fn ord_infinity(&self) -> Option<i64> {
        if self.num.is_zero() {
            None
        } else {
            Some(self.den.deg() - self.num.deg())
        }
    }

    /// Multiplicity of the irreducible `m` in `num` minus that in `den`; `None` for zero.
    pub fn ord_at(&self, m: &Poly<F>) -> Option<i64> {
        if self.num.is_zero() {
            return None;
        }
        Some(self.num.multiplicity(m) as i64 - self.den.multiplicity(m) as i64)
    }

    /// Value at a point of the base field, `None` at a pole.
    pub fn eval(&self, a: &F) -> Option<F> {
        let d = self.den.eval(a);
        let di = d.inv()?;
        Some(self.num.eval(a) * di)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Option<RatFunc<G>> {
        RatFunc::new(self.num.map(&f), self.den.map(&f))
    }

    pub fn pow(&self, k: i64) -> Option<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let e = k.unsigned_abs() as usize;
        Some(RatFunc { num: base.num.pow(e), den: base.den.pow(e) })
    }

    /// `self(g)` for a rational function `g` (substitution of the variable).
    pub fn compose(&self, g: &RatFunc<F>) -> Option<Self> {
        let ev = |p: &Poly<F>| -> RatFunc<F> {
            let mut acc = RatFunc::zero();
            for c in p.coeffs().iter().rev() {
                acc = acc * g.clone() + RatFunc::constant(c.clone());
            }
            acc
        };
        let d = ev(&self.den);
        if d.is_zero() {
            return None;
        }
        Some(ev(&self.num) / d)
    }
}

impl<F: Field> Zero for RatFunc<F> {
    fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<F: Field> One for RatFunc<F> {
    fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }
}

impl<F: Field> Add for RatFunc<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den).unwrap();
        }
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den).unwrap()
    }
}

impl<F: Field> Sub for RatFunc<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<F: Field> Mul for RatFunc<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        // cross-cancel first to keep intermediate degrees down
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = o.den.exact_div(&g1).unwrap();
        let n2 = o.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        RatFunc::new(&n1 * &n2, &d1 * &d2).unwrap()
    }
}

impl<F: Field> Neg for RatFunc<F> {
    type Output = Self;
    fn neg(self) -> Self {
        RatFunc { num: -self.num, den: self.den }
    }
}

impl<F: Field> Div for RatFunc<F> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.inv().expect("rational function division by zero")
    }
}

impl<F: Field> Field for RatFunc<F> {
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    fn from_i64(n: i64) -> Self {
        RatFunc::constant(F::from_i64(n))
    }

    fn from_rational(q: &Rational) -> Self {
        RatFunc::constant(F::from_rational(q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    type R = RatFunc<Rational>;

    fn p(v: &[i64]) -> Poly<Rational> {
        Poly::new(v.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn canonical_form() {
        let f = R::new(p(&[-2, 2]), p(&[-2, 0, 2])).unwrap(); // (2T-2)/(2T^2-2) = 1/(T+1)
        assert_eq!(f.num(), &p(&[1]));
        assert_eq!(f.den(), &p(&[1, 1]));
        assert!(R::new(p(&[1]), Poly::zero()).is_none());
        assert_eq!(R::zero().den(), &p(&[1]));
    }

    #[test]
    fn orders() {
        // (T-2)^3/(T+1)
        let f = R::new(p(&[-2, 1]).pow(3), p(&[1, 1])).unwrap();
        assert_eq!(f.ord_at(&p(&[-2, 1])), Some(3));
        assert_eq!(f.ord_infinity(), Some(-2));
        let g = R::new(p(&[1, 0, 1]), p(&[0, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(g.ord_infinity(), Some(3));
        assert_eq!(R::zero().ord_at(&p(&[0, 1])), None);
    }

    #[test]
    fn arithmetic() {
        let t = R::var();
        let one = R::one();
        let f = (t.clone() + one.clone()) / (t.clone() - one.clone());
        let g = f.clone() * f.inv().unwrap();
        assert_eq!(g, one);
        assert_eq!(f.eval(&int(3)), Some(int(2)));
        assert_eq!(f.eval(&int(1)), None);
    }
}
