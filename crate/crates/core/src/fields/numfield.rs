//! Number fields `Q(alpha)` given by one monic irreducible minimal polynomial.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::factor::{is_irreducible_q, QPoly, MAX_DEGREE};
use crate::roots::{self, Ball, RootApprox, RootLoc};
use crate::scalar::{fmt_rational, Field, Rational};
use crate::xreal::XReal;

/// Relative error accepted from the floating fast path before falling back
/// to exact ball arithmetic.
pub const FAST_PATH_REL: f64 = 1.0 / (1u64 << 44) as f64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbeddingKind {
    Real,
    Complex,
}

#[derive(Clone, Debug)]
pub struct Embedding {
    pub id: usize,
    pub kind: EmbeddingKind,
    pub loc: RootLoc,
    pub approx: RootApprox,
}

#[derive(Debug)]
pub struct NumberField {
    minpoly: QPoly,
    gen: String,
    aliases: Vec<String>,
    embeddings: Vec<Embedding>,
}

impl PartialEq for NumberField {
    fn eq(&self, o: &Self) -> bool {
        self.minpoly == o.minpoly && self.gen == o.gen
    }
}

impl NumberField {
    /// Builds `Q[gen]/(minpoly)`; the polynomial is made monic and checked irreducible.
    pub fn new(minpoly: &QPoly, gen: &str) -> Result<Arc<Self>> {
        let n = minpoly.degree().ok_or(Error::Reducible("zero polynomial".into()))?;
        if n < 1 {
            return Err(Error::Reducible("constant minimal polynomial".into()));
        }
        if n > MAX_DEGREE {
            return Err(Error::UnsupportedShape(format!("degree {} above cap {}", n, MAX_DEGREE)));
        }
        let m = minpoly.monic();
        if !is_irreducible_q(&m)? {
            return Err(Error::Reducible(format!("{} is reducible over Q", fmt_poly(&m, "x"))));
        }
        let (real, upper) = roots::isolate_roots(&m)?;
        let mut embeddings = Vec::new();
        for (kind, loc) in real
            .into_iter()
            .map(|l| (EmbeddingKind::Real, l))
            .chain(upper.into_iter().map(|l| (EmbeddingKind::Complex, l)))
        {
            let approx = roots::root_approx(&m, &loc);
            embeddings.push(Embedding { id: embeddings.len(), kind, loc, approx });
        }
        Ok(Arc::new(NumberField { minpoly: m, gen: gen.to_string(), aliases: vec![], embeddings }))
    }

    /// Like [`NumberField::new`] but shares one instance per (polynomial, name).
    /// The cache only saves recomputation of root isolation.
    pub fn cached(minpoly: &QPoly, gen: &str) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<String, Arc<NumberField>>>> = OnceLock::new();
        let key = format!("{}|{}", gen, fmt_poly(&minpoly.monic(), "x"));
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(k) = cache.lock().unwrap().get(&key) {
            return Ok(k.clone());
        }
        let k = Self::new(minpoly, gen)?;
        Ok(cache.lock().unwrap().entry(key).or_insert(k).clone())
    }

    pub fn with_alias(minpoly: &QPoly, gen: &str, alias: &str) -> Result<Arc<Self>> {
        let f = Self::new(minpoly, gen)?;
        let mut inner = Arc::try_unwrap(f).expect("fresh field");
        inner.aliases.push(alias.to_string());
        Ok(Arc::new(inner))
    }

    pub fn minpoly(&self) -> &QPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg() as usize
    }

    pub fn gen_name(&self) -> &str {
        &self.gen
    }

    pub fn names_generator(&self, s: &str) -> bool {
        self.gen == s || self.aliases.iter().any(|a| a == s)
    }

    pub fn embeddings(&self) -> &[Embedding] {
        &self.embeddings
    }

    pub fn n_real(&self) -> usize {
        self.embeddings.iter().filter(|e| e.kind == EmbeddingKind::Real).count()
    }

    pub fn embedding(&self, id: usize) -> Result<&Embedding> {
        self.embeddings
            .get(id)
            .ok_or_else(|| Error::OutOfRange(format!("embedding {} of a field with {}", id, self.embeddings.len())))
    }

    /// Minimal polynomial has integer coefficients (needed for prime ideals).
    pub fn is_integral(&self) -> bool {
        self.minpoly.coeffs().iter().all(|c| c.is_integer())
    }

    /// Enclosure of `sigma_emb(x)` with radius at most `2^-bits`.
    pub fn embed_eval(&self, x: &QPoly, emb: usize, bits: u32) -> Result<Ball> {
        let e = self.embedding(emb)?;
        let x = &self.reduce(x);
        if x.is_constant() {
            return Ok(Ball::exact(roots::CQ::real(x.coeff(0))));
        }
        let mut b = bits + 4;
        loop {
            let ball = roots::ball_eval(x, &roots::root_ball(&self.minpoly, &e.loc, b));
            let bound = num_rational::BigRational::new(
                num_bigint::BigInt::one(),
                num_bigint::BigInt::one() << (bits + 1),
            );
            if ball.rad <= bound {
                return Ok(ball);
            }
            b += 16;
        }
    }

    /// `|sigma_emb(x)|`, exact for rational `x`.
    pub fn abs_at(&self, x: &QPoly, emb: usize) -> Result<XReal> {
        let e = self.embedding(emb)?;
        let x = &self.reduce(x);
        if x.is_zero() {
            return Ok(XReal::Zero);
        }
        if x.is_constant() {
            return Ok(XReal::rational(x.coeff(0).abs()));
        }
        if let Some((v, rel)) = roots::fast_abs(x, &e.approx, FAST_PATH_REL) {
            return Ok(XReal::approx(v, rel));
        }
        let (lo, hi) = roots::abs_enclosure(x, &self.minpoly, &e.loc, 1e-16);
        let (l, h) = (lo.to_f64().unwrap_or(0.0), hi.to_f64().unwrap_or(f64::INFINITY));
        if l > 0.0 && h.is_finite() && l.is_normal() {
            let mid = (l + h) / 2.0;
            return Ok(XReal::approx(mid, (h - l) / (2.0 * l) + 2.0 * f64::EPSILON));
        }
        // outside the f64 range: go through logarithms
        let (ll, le) = crate::bounds::ln_rational(&lo);
        let (hl, he) = crate::bounds::ln_rational(&hi);
        let mid = (ll + hl) / 2.0;
        let half = (hl - ll) / 2.0 + le + he;
        Ok(XReal::from_ln(mid, half))
    }

    pub fn reduce(&self, p: &QPoly) -> QPoly {
        p.rem(&self.minpoly)
    }
}

/// Element of `Q` (no field attached, constant polynomial) or of a number field.
#[derive(Clone)]
pub struct NfElem {
    nf: Option<Arc<NumberField>>,
    poly: QPoly,
}

impl NfElem {
    pub fn rational(q: Rational) -> Self {
        NfElem { nf: None, poly: QPoly::constant(q) }
    }

    /// Canonical element of `nf` represented by `p(gen)`.
    pub fn from_poly(nf: &Arc<NumberField>, p: &QPoly) -> Self {
        NfElem { nf: Some(nf.clone()), poly: nf.reduce(p) }
    }

    pub fn gen(nf: &Arc<NumberField>) -> Self {
        NfElem::from_poly(nf, &QPoly::x())
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.nf.as_ref()
    }

    pub fn poly(&self) -> &QPoly {
        &self.poly
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.poly.is_constant() {
            Some(self.poly.coeff(0))
        } else {
            None
        }
    }

    fn join(&self, o: &NfElem) -> Option<Arc<NumberField>> {
        match (&self.nf, &o.nf) {
            (Some(a), Some(b)) => {
                debug_assert!(Arc::ptr_eq(a, b) || **a == **b, "mixing elements of different number fields");
                Some(a.clone())
            }
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    pub fn pow(&self, k: i64) -> Option<NfElem> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = NfElem::rational(Rational::one());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b.clone();
            }
            b = b.clone() * b;
            e >>= 1;
        }
        Some(acc)
    }

    /// Field norm down to Q.
    pub fn norm(&self) -> Rational {
        match &self.nf {
            None => self.poly.coeff(0),
            Some(nf) => {
                // Res(f, g) = prod g(alpha_i) for monic f
                nf.minpoly.resultant(&self.poly)
            }
        }
    }

    pub fn fmt_with(&self, gen: &str) -> String {
        fmt_poly(&self.poly, gen)
    }
}

impl fmt::Debug for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.nf.as_ref().map_or("a", |n| n.gen.as_str());
        write!(f, "{}", fmt_poly(&self.poly, g))
    }
}

impl fmt::Display for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl PartialEq for NfElem {
    fn eq(&self, o: &Self) -> bool {
        self.poly == o.poly
    }
}

impl Zero for NfElem {
    fn zero() -> Self {
        NfElem::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

impl One for NfElem {
    fn one() -> Self {
        NfElem::rational(Rational::one())
    }
}

impl Add for NfElem {
    type Output = NfElem;
    fn add(self, o: NfElem) -> NfElem {
        NfElem { nf: self.join(&o), poly: &self.poly + &o.poly }
    }
}

impl Sub for NfElem {
    type Output = NfElem;
    fn sub(self, o: NfElem) -> NfElem {
        NfElem { nf: self.join(&o), poly: &self.poly - &o.poly }
    }
}

impl Mul for NfElem {
    type Output = NfElem;
    fn mul(self, o: NfElem) -> NfElem {
        let nf = self.join(&o);
        let p = &self.poly * &o.poly;
        let poly = match &nf {
            Some(f) => f.reduce(&p),
            None => p,
        };
        NfElem { nf, poly }
    }
}

impl Neg for NfElem {
    type Output = NfElem;
    fn neg(self) -> NfElem {
        NfElem { nf: self.nf, poly: -self.poly }
    }
}

impl Div for NfElem {
    type Output = NfElem;
    fn div(self, o: NfElem) -> NfElem {
        self * o.inv().expect("number field division by zero")
    }
}

impl Field for NfElem {
    fn inv(&self) -> Option<Self> {
        if self.poly.is_zero() {
            return None;
        }
        match &self.nf {
            None => Some(NfElem::rational(self.poly.coeff(0).recip())),
            Some(f) => {
                if self.poly.is_constant() {
                    return Some(NfElem { nf: self.nf.clone(), poly: QPoly::constant(self.poly.coeff(0).recip()) });
                }
                let i = self.poly.inv_mod(&f.minpoly)?;
                Some(NfElem { nf: self.nf.clone(), poly: i })
            }
        }
    }

    fn from_i64(n: i64) -> Self {
        NfElem::rational(Rational::from_i64(n))
    }

    fn from_rational(q: &Rational) -> Self {
        NfElem::rational(q.clone())
    }

    /// Only rational elements reduce; a gcd of rational polynomials does not
    /// depend on the field it is taken over.
    fn mod_p(&self, p: u64) -> Option<u64> {
        if !self.poly.is_constant() {
            return None;
        }
        crate::scalar::rational_mod_p(&self.poly.coeff(0), p)
    }
}

/// Renders a rational polynomial in the variable `v`, highest degree first.
pub fn fmt_poly(p: &QPoly, v: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match k {
            0 => String::new(),
            1 => v.to_string(),
            _ => format!("{}^{}", v, k),
        };
        if k == 0 {
            out.push_str(&fmt_rational(&a));
        } else if a.is_one() {
            out.push_str(&mono);
        } else if a.is_integer() {
            out.push_str(&format!("{}*{}", fmt_rational(&a), mono));
        } else {
            out.push_str(&format!("({})*{}", fmt_rational(&a), mono));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn q(v: &[i64]) -> QPoly {
        QPoly::new(v.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn sqrt2_arithmetic() {
        let k = NumberField::new(&q(&[-2, 0, 1]), "a").unwrap();
        let a = NfElem::gen(&k);
        assert_eq!(a.clone() * a.clone(), NfElem::from_i64(2));
        let x = a.clone() + NfElem::from_i64(1);
        let y = x.inv().unwrap();
        assert_eq!(x * y, NfElem::one());
        assert_eq!(a.norm(), int(-2));
    }

    #[test]
    fn reducible_rejected() {
        assert!(matches!(NumberField::new(&q(&[-4, 0, 1]), "a"), Err(Error::Reducible(_))));
    }

    #[test]
    fn embeddings_ordered() {
        let k = NumberField::new(&q(&[-2, 0, 1]), "a").unwrap();
        assert_eq!(k.n_real(), 2);
        let b = k.embed_eval(&QPoly::x(), 1, 50).unwrap();
        assert!((b.center.re.to_f64().unwrap() - 2f64.sqrt()).abs() < 1e-15);
        let c = k.embed_eval(&q(&[0, 0, 1]), 0, 50).unwrap();
        assert_eq!(c.rad, Rational::zero());
        let ki = NumberField::new(&q(&[1, 0, 1]), "i").unwrap();
        assert_eq!(ki.embeddings()[0].kind, EmbeddingKind::Complex);
        let v = ki.abs_at(&QPoly::new(vec![int(3), int(4)]), 0).unwrap();
        assert!((v.to_f64() - 5.0).abs() < 1e-14);
        assert_eq!(k.abs_at(&QPoly::constant(rat(-7, 2)), 0).unwrap(), XReal::rational(rat(7, 2)));
    }

    #[test]
    fn display() {
        assert_eq!(fmt_poly(&QPoly::new(vec![rat(-1, 2), int(0), int(3)]), "a"), "3*a^2 - 1/2");
    }
}
