//! Dense univariate polynomials over a [`Field`].

use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{Field, OrderedField};

/// Coefficients in ascending order; never has a zero leading coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<F> {
    c: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut c: Vec<F>) -> Self {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(F::one())
    }

    pub fn constant(a: F) -> Self {
        Poly::new(vec![a])
    }

    /// The indeterminate.
    pub fn x() -> Self {
        Poly::new(vec![F::zero(), F::one()])
    }

    pub fn monomial(a: F, k: usize) -> Self {
        let mut c = vec![F::zero(); k + 1];
        c[k] = a;
        Poly::new(c)
    }

    /// `x - a`
    pub fn linear(a: F) -> Self {
        Poly::new(vec![-a, F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.c
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> F {
        self.c.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with `deg 0 = -1`.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lc(&self) -> F {
        self.c.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.c.last().map_or(false, |x| x.is_one())
    }

    pub fn scale(&self, a: &F) -> Self {
        Poly::new(self.c.iter().map(|x| x.clone() * a.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        match self.lc().inv() {
            Some(i) => self.scale(&i),
            None => Poly::zero(),
        }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.c.iter().map(f).collect())
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for a in self.c.iter().rev() {
            acc = acc * x.clone() + a.clone();
        }
        acc
    }

    /// Horner evaluation in another ring that the coefficients lift into.
    pub fn eval_with<R>(&self, x: &R, lift: impl Fn(&F) -> R) -> R
    where
        R: Clone + Add<Output = R> + Mul<Output = R>,
    {
        let mut it = self.c.iter().rev();
        let mut acc = match it.next() {
            Some(a) => lift(a),
            None => lift(&F::zero()),
        };
        for a in it {
            acc = acc * x.clone() + lift(a);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a.clone() * F::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut r = Poly::one();
        let mut b = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                r = &r * &b;
            }
            k >>= 1;
            if k > 0 {
                b = &b * &b;
            }
        }
        r
    }

    /// `self(g(x))`
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Poly::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * g) + &Poly::constant(a.clone());
        }
        acc
    }

    /// `self(x + a)`
    pub fn shift(&self, a: &F) -> Self {
        self.compose(&Poly::new(vec![a.clone(), F::one()]))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let n = d.c.len() - 1;
        if self.c.len() <= n {
            return (Poly::zero(), self.clone());
        }
        let inv = d.lc().inv().expect("nonzero leading coefficient");
        let mut r = self.c.clone();
        let mut q = vec![F::zero(); r.len() - n];
        for k in (0..q.len()).rev() {
            let t = r[k + n].clone() * inv.clone();
            if !t.is_zero() {
                for (j, dj) in d.c.iter().enumerate() {
                    r[k + j] = r[k + j].clone() - t.clone() * dj.clone();
                }
            }
            q[k] = t;
        }
        r.truncate(n);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd (zero when both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        if self.coprime_mod_p(other) {
            return Poly::one();
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            // monic remainders keep coefficient growth down
            b = if r.is_zero() { r } else { r.monic() };
        }
        a.monic()
    }

    /// Sufficient test for coprimality: if `p` keeps both leading coefficients
    /// and the reductions are coprime, so are the polynomials (Gauss's lemma
    /// over the local ring at `p`).
    fn coprime_mod_p(&self, other: &Self) -> bool {
        if self.c.len() < 2 || other.c.len() < 2 {
            return false;
        }
        const PRIMES: [u64; 2] = [4294967291, 4294967279];
        'primes: for p in PRIMES {
            let mut red = [Vec::new(), Vec::new()];
            for (k, f) in [self, other].into_iter().enumerate() {
                for c in &f.c {
                    match c.mod_p(p) {
                        Some(x) => red[k].push(x),
                        None => continue 'primes,
                    }
                }
                if red[k].last() == Some(&0) {
                    continue 'primes;
                }
            }
            if crate::modp::gcd(&red[0], &red[1], p).len() == 1 {
                return true;
            }
        }
        false
    }

    /// `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lc().inv() {
            Some(i) => (r0.scale(&i), s0.scale(&i), t0.scale(&i)),
            None => (Poly::zero(), Poly::zero(), Poly::zero()),
        }
    }

    /// Inverse of `self` modulo `m`, if coprime.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.xgcd(m);
        if g.degree() == Some(0) {
            Some(s.rem(m))
        } else {
            None
        }
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree().unwrap_or(0) == 0
    }

    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides").monic()
    }

    /// Yun's squarefree decomposition of a monic-izable polynomial:
    /// returns `(a_i, i)` with `self = lc * prod a_i^i`.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let f = self.monic();
        let mut out = Vec::new();
        if f.degree().unwrap_or(0) == 0 {
            return out;
        }
        let d = f.derivative();
        let a = f.gcd(&d);
        let mut b = f.exact_div(&a).unwrap();
        let mut c = d.exact_div(&a).unwrap();
        let mut i = 1;
        loop {
            let bd = b.derivative();
            let cmb = &c - &bd;
            if b.degree() == Some(0) {
                break;
            }
            let g = b.gcd(&cmb);
            if g.degree().unwrap_or(0) > 0 {
                out.push((g.clone(), i));
            }
            let nb = b.exact_div(&g).unwrap();
            c = cmb.exact_div(&g).unwrap();
            b = nb;
            i += 1;
        }
        out
    }

    /// Multiplicity of the factor `m` in `self` (`self` nonzero, `m` nonconstant).
    pub fn multiplicity(&self, m: &Self) -> usize {
        let mut k = 0;
        let mut f = self.clone();
        while let Some(q) = f.exact_div(m) {
            if f.is_zero() {
                break;
            }
            f = q;
            k += 1;
        }
        k
    }

    /// Resultant by the Euclidean recursion.
    pub fn resultant(&self, other: &Self) -> F {
        if self.is_zero() || other.is_zero() {
            return F::zero();
        }
        let (da, db) = (self.c.len() - 1, other.c.len() - 1);
        if db == 0 {
            return pow_f(&other.lc(), da);
        }
        if da == 0 {
            return pow_f(&self.lc(), db);
        }
        if da < db {
            let r = other.resultant(self);
            return if (da * db) % 2 == 1 { -r } else { r };
        }
        let r = self.rem(other);
        if r.is_zero() {
            return F::zero();
        }
        let dr = r.c.len() - 1;
        let sign = if (da * db) % 2 == 1 { -F::one() } else { F::one() };
        sign * pow_f(&other.lc(), da - dr) * other.resultant(&r)
    }
}

fn pow_f<F: Field>(a: &F, k: usize) -> F {
    let mut r = F::one();
    for _ in 0..k {
        r = r * a.clone();
    }
    r
}

impl<F: OrderedField> Poly<F> {
    /// Canonical Sturm sequence `p, p', -rem, ...`.
    pub fn sturm_chain(&self) -> Vec<Self> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(-r);
        }
        seq
    }
}

impl<'a, F: Field> Add for &'a Poly<F> {
    type Output = Poly<F>;
    fn add(self, o: &Poly<F>) -> Poly<F> {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<'a, F: Field> Sub for &'a Poly<F> {
    type Output = Poly<F>;
    fn sub(self, o: &Poly<F>) -> Poly<F> {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<'a, F: Field> Mul for &'a Poly<F> {
    type Output = Poly<F>;
    fn mul(self, o: &Poly<F>) -> Poly<F> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![F::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(c)
    }
}

impl<'a, F: Field> Neg for &'a Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly::new(self.c.iter().map(|a| -a.clone()).collect())
    }
}

impl<F: Field> Add for Poly<F> {
    type Output = Poly<F>;
    fn add(self, o: Poly<F>) -> Poly<F> {
        &self + &o
    }
}

impl<F: Field> Sub for Poly<F> {
    type Output = Poly<F>;
    fn sub(self, o: Poly<F>) -> Poly<F> {
        &self - &o
    }
}

impl<F: Field> Mul for Poly<F> {
    type Output = Poly<F>;
    fn mul(self, o: Poly<F>) -> Poly<F> {
        &self * &o
    }
}

impl<F: Field> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        -&self
    }
}

impl<F: OrderedField> Poly<F> {
    pub fn sign_at(&self, x: &F) -> i32 {
        self.eval(x).sign()
    }
}

/// Number of sign changes of a Sturm chain evaluated at `x`.
pub fn sturm_variations<F: OrderedField>(chain: &[Poly<F>], x: &F) -> usize {
    let signs: Vec<i32> = chain
        .iter()
        .map(|p| p.sign_at(x))
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Rational};

    fn q(v: &[i64]) -> Poly<Rational> {
        Poly::new(v.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let a = q(&[-1, 0, 1]);
        let b = q(&[1, 1]);
        let (qq, r) = a.divrem(&b);
        assert_eq!(qq, q(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&q(&[-1, 1])), q(&[-1, 1]));
        let (g, s, t) = q(&[1, 0, 1]).xgcd(&q(&[0, 1]));
        assert_eq!(g, Poly::one());
        assert_eq!(&(&s * &q(&[1, 0, 1])) + &(&t * &q(&[0, 1])), Poly::one());
    }

    #[test]
    fn resultant_matches_root_product() {
        // Res(x^2 - 2, x - 3) = (3)^2 - 2 up to sign convention lc(a)^deg b prod b(roots a)
        let a = q(&[-2, 0, 1]);
        let b = q(&[-3, 1]);
        // prod over roots r of a of (r - 3) = (sqrt2 - 3)(-sqrt2 - 3) = 9 - 2 = 7
        assert_eq!(a.resultant(&b), int(7));
        assert_eq!(b.resultant(&a), int(7));
    }

    #[test]
    fn squarefree() {
        let f = &q(&[-1, 1]).pow(3) * &q(&[2, 1]);
        let d = f.squarefree_decomposition();
        assert_eq!(d, vec![(q(&[2, 1]), 1), (q(&[-1, 1]), 3)]);
        assert_eq!(f.multiplicity(&q(&[-1, 1])), 3);
    }

    #[test]
    fn shift_compose() {
        let f = q(&[0, 0, 1]);
        assert_eq!(f.shift(&rat(1, 1)), q(&[1, 2, 1]));
    }

    #[test]
    fn sturm_counts_real_roots() {
        let f = q(&[-2, 0, 1]);
        let ch = f.sturm_chain();
        let n = sturm_variations(&ch, &int(-10)) - sturm_variations(&ch, &int(10));
        assert_eq!(n, 2);
    }
}
