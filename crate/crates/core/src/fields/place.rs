//! Places of the supported fields: primes and prime ideals of number fields,
//! embeddings, and the finite and infinite places of rational function fields.

use std::fmt;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::factor::{is_irreducible_q, QPoly};
use crate::modp::{self, Fp};
use crate::poly::Poly;
use crate::scalar::{is_prime_u64, lcm_denoms, rat_ord, Rational};

use super::element::{Element, FieldDescriptor, F1, F2};
use super::numfield::{fmt_poly, NfElem, NumberField};
use super::parse::parse_element;
use super::trager::{is_irreducible_over, KPoly};

/// A maximal ideal `(p, g(alpha))` of the ring of integers, from the
/// Kummer-Dedekind factorization of the minimal polynomial modulo `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeIdeal {
    pub p: u64,
    pub index: usize,
    /// Monic lift of the irreducible factor, coefficients in `0..p`.
    pub g: QPoly,
    pub e: usize,
    pub f: usize,
    /// Lift of `minpoly / g mod p`; `tau(alpha)/p` has valuation -1 here and is
    /// integral at the other primes above `p`.
    tau: QPoly,
}

fn fp_to_q(a: &Fp) -> QPoly {
    QPoly::new(a.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
}

fn q_to_fp(a: &QPoly, p: u64) -> Fp {
    let pb = BigInt::from(p);
    modp::trim(
        a.coeffs()
            .iter()
            .map(|c| {
                debug_assert!(c.is_integer());
                c.to_integer().mod_floor(&pb).to_u64().unwrap()
            })
            .collect(),
    )
}

/// Prime ideals above `p`, in the order of the factors of the minimal polynomial mod `p`.
pub fn prime_ideals_above(k: &NumberField, p: u64) -> Result<Vec<PrimeIdeal>> {
    if !is_prime_u64(p) {
        return Err(Error::InvalidPlace(format!("{} is not prime", p)));
    }
    if !k.is_integral() {
        return Err(Error::UnsupportedShape("prime ideals need an integral minimal polynomial".into()));
    }
    let f = k.minpoly();
    let fbar = q_to_fp(f, p);
    let fac = modp::factor(&fbar, p);
    // Dedekind criterion: Z[alpha] is p-maximal iff no repeated factor divides (G*H - f)/p
    let mut gh = QPoly::one();
    for (g, e) in &fac {
        gh = &gh * &fp_to_q(g).pow(*e);
    }
    let diff = &gh - f;
    let pq = Rational::from_integer(BigInt::from(p));
    let fq = q_to_fp(&diff.scale(&pq.recip()), p);
    for (g, e) in &fac {
        if *e >= 2 && modp::rem(&fq, g, p).is_empty() {
            return Err(Error::UnsupportedShape(format!(
                "Z[{}] is not maximal at {} (Dedekind criterion fails)",
                k.gen_name(),
                p
            )));
        }
    }
    Ok(fac
        .iter()
        .enumerate()
        .map(|(index, (g, e))| {
            let (t, r) = modp::divrem(&fbar, g, p);
            debug_assert!(r.is_empty());
            PrimeIdeal { p, index, g: fp_to_q(g), e: *e, f: modp::deg(g) as usize, tau: fp_to_q(&t) }
        })
        .collect())
}

impl PrimeIdeal {
    /// `v_P(x)` for `x = poly(alpha)`; `None` for zero.
    pub fn valuation(&self, k: &NumberField, x: &QPoly) -> Option<i64> {
        let x = k.reduce(x);
        if x.is_zero() {
            return None;
        }
        let d = lcm_denoms(x.coeffs());
        let dq = Rational::from_integer(d.clone());
        let pb = BigInt::from(self.p);
        let pq = Rational::from_integer(pb.clone());
        let mut y = x.scale(&dq);
        let mut v = 0i64;
        loop {
            let z = k.reduce(&(&y * &self.tau));
            let zq = z.scale(&pq.recip());
            if zq.coeffs().iter().all(|c| c.is_integer()) {
                y = zq;
                v += 1;
            } else {
                break;
            }
        }
        let vd = crate::scalar::int_ord(&d, &pb);
        Some(v - self.e as i64 * vd)
    }

    pub fn norm_exponent(&self) -> usize {
        self.f
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Place {
    /// Rational prime, on Q.
    Prime(u64),
    /// Prime ideal of a number field.
    Ideal(PrimeIdeal),
    /// Embedding index, on Q (index 0) or a number field.
    Arch(usize),
    /// Finite place of `F(T)` given by a monic irreducible polynomial over the constants.
    Poly(KPoly),
    /// Degree-one finite place `T - a` of `F(S)(T)`, `a` in `F(S)`.
    Point(F1),
    Infinity,
}

impl Place {
    pub fn is_archimedean(&self) -> bool {
        matches!(self, Place::Arch(_))
    }

    /// Degree of the residue field over the constants (residue degree `f` for prime ideals).
    pub fn degree(&self) -> usize {
        match self {
            Place::Poly(m) => m.deg() as usize,
            Place::Ideal(p) => p.f,
            _ => 1,
        }
    }

    /// The underlying rational prime for Q and number-field primes.
    pub fn prime(&self) -> Option<u64> {
        match self {
            Place::Prime(p) => Some(*p),
            Place::Ideal(i) => Some(i.p),
            _ => None,
        }
    }

    /// For `Poly` places over Q, the polynomial with rational coefficients.
    pub fn qpoly(&self) -> Option<QPoly> {
        match self {
            Place::Poly(m) => {
                let c: Option<Vec<Rational>> = m.coeffs().iter().map(|c| c.as_rational()).collect();
                c.map(QPoly::new)
            }
            _ => None,
        }
    }

    /// Point `a` of a degree-one place `T - a` over the constants.
    pub fn rational_point(&self) -> Option<NfElem> {
        match self {
            Place::Poly(m) if m.deg() == 1 => Some(-m.coeff(0)),
            _ => None,
        }
    }
}

/// Checks that `place` is a valid place of `field`.
pub fn check_place(field: &FieldDescriptor, place: &Place) -> Result<()> {
    let bad = |m: &str| Err(Error::InvalidPlace(m.to_string()));
    match (field, place) {
        (FieldDescriptor::Rationals, Place::Prime(p)) => {
            if is_prime_u64(*p) {
                Ok(())
            } else {
                bad(&format!("{} is not prime", p))
            }
        }
        (FieldDescriptor::Rationals, Place::Arch(0)) => Ok(()),
        (FieldDescriptor::Rationals, Place::Arch(i)) => bad(&format!("Q has one embedding, got {}", i)),
        (FieldDescriptor::NumberField(k), Place::Arch(i)) => k.embedding(*i).map(|_| ()),
        (FieldDescriptor::NumberField(k), Place::Ideal(pi)) => {
            let all = prime_ideals_above(k, pi.p)?;
            if all.get(pi.index) == Some(pi) {
                Ok(())
            } else {
                bad("prime ideal does not belong to this field")
            }
        }
        (FieldDescriptor::FunctionField { .. }, Place::Infinity) => Ok(()),
        (FieldDescriptor::FunctionField { base, .. }, Place::Poly(m)) if base.depth() == 0 => {
            if m.deg() < 1 || !m.is_monic() {
                return bad("place polynomial must be monic of positive degree");
            }
            let irreducible = match base.number_field() {
                None => {
                    let q = place.qpoly().ok_or(Error::FieldMismatch("coefficients outside Q".into()))?;
                    is_irreducible_q(&q)?
                }
                Some(k) => is_irreducible_over(k, m)?,
            };
            if irreducible {
                Ok(())
            } else {
                Err(Error::Reducible("place polynomial is reducible".into()))
            }
        }
        (FieldDescriptor::FunctionField { base, .. }, Place::Point(_)) if base.depth() == 1 => Ok(()),
        _ => bad("place does not match the field"),
    }
}

/// Parses a place: a prime `p` (or `p#i` for the i-th prime ideal above p),
/// `arch` / `arch#i`, `inf`, or a monic polynomial in the field variable.
pub fn parse_place(field: &FieldDescriptor, src: &str) -> Result<Place> {
    let s = src.trim();
    if let Some(rest) = s.strip_prefix("arch") {
        let i = match rest.strip_prefix('#') {
            Some(n) => n.parse().map_err(|_| Error::SyntaxError { pos: 5, msg: "bad embedding index".into() })?,
            None if rest.is_empty() => 0,
            None => return Err(Error::SyntaxError { pos: 4, msg: "bad place".into() }),
        };
        let pl = Place::Arch(i);
        check_place(field, &pl)?;
        return Ok(pl);
    }
    match field {
        FieldDescriptor::Rationals | FieldDescriptor::NumberField(_) => {
            let (ps, idx) = match s.split_once('#') {
                Some((a, b)) => (a, Some(b)),
                None => (s, None),
            };
            let p: u64 = ps.parse().map_err(|_| Error::SyntaxError { pos: 0, msg: format!("bad prime '{}'", ps) })?;
            let pl = match field {
                FieldDescriptor::NumberField(k) => {
                    let i: usize = match idx {
                        Some(b) => b.parse().map_err(|_| Error::SyntaxError { pos: ps.len() + 1, msg: "bad ideal index".into() })?,
                        None => 0,
                    };
                    let all = prime_ideals_above(k, p)?;
                    let n = all.len();
                    Place::Ideal(all.into_iter().nth(i).ok_or_else(|| Error::InvalidPlace(format!("only {} primes above {}", n, p)))?)
                }
                _ => {
                    if idx.is_some() {
                        return Err(Error::InvalidPlace("ideal index on Q".into()));
                    }
                    Place::Prime(p)
                }
            };
            check_place(field, &pl)?;
            Ok(pl)
        }
        FieldDescriptor::FunctionField { base, .. } => {
            if matches!(s, "inf" | "oo" | "infinity") {
                return Ok(Place::Infinity);
            }
            let e = parse_element(s, field)?;
            let pl = place_from_poly(field, base, &e)?;
            check_place(field, &pl)?;
            Ok(pl)
        }
    }
}

fn place_from_poly(field: &FieldDescriptor, base: &FieldDescriptor, e: &Element) -> Result<Place> {
    let not_poly = || Error::InvalidPlace(format!("{} is not a polynomial in the variable", field.fmt_element(e)));
    match base.depth() {
        0 => {
            let f = e.as_f1().ok_or_else(not_poly)?;
            if !f.is_poly() || f.num().deg() < 1 {
                return Err(not_poly());
            }
            Ok(Place::Poly(f.num().monic()))
        }
        _ => {
            let f = e.as_f2();
            if !f.is_poly() || f.num().deg() < 1 {
                return Err(not_poly());
            }
            if f.num().deg() > 1 {
                return Err(Error::UnsupportedShape("only degree-one places over a two-variable tower".into()));
            }
            let m = f.num().monic();
            Ok(Place::Point(-m.coeff(0)))
        }
    }
}

/// Order of `f` at a non-Archimedean place; `None` means `+inf` (f = 0).
pub fn ord_at_place(field: &FieldDescriptor, f: &Element, place: &Place) -> Result<Option<i64>> {
    let f = field.coerce(f)?;
    match place {
        Place::Prime(p) => {
            let q = f.as_rational().ok_or_else(|| Error::FieldMismatch("prime place needs a rational".into()))?;
            Ok(rat_ord(&q, &BigInt::from(*p)))
        }
        Place::Ideal(pi) => {
            let k = field.number_field().ok_or_else(|| Error::FieldMismatch("ideal on Q".into()))?;
            let x = f.as_nf().ok_or_else(|| Error::FieldMismatch("ideal place needs a constant".into()))?;
            Ok(pi.valuation(k, x.poly()))
        }
        Place::Arch(_) => Err(Error::InvalidPlace("Archimedean place has no order".into())),
        Place::Poly(m) => {
            let r = f.as_f1().ok_or_else(|| Error::FieldMismatch("depth mismatch".into()))?;
            Ok(r.ord_at(m))
        }
        Place::Point(a) => {
            let m = Poly::new(vec![-a.clone(), F1::one()]);
            Ok(f.as_f2().ord_at(&m))
        }
        Place::Infinity => Ok(match field.depth() {
            1 => f.as_f1().unwrap().ord_infinity(),
            2 => f.as_f2().ord_infinity(),
            _ => return Err(Error::InvalidPlace("infinite place on a number field".into())),
        }),
    }
}

/// Residue field of a place of a function field.
pub fn residue_field(field: &FieldDescriptor, place: &Place) -> Result<FieldDescriptor> {
    let base = field.base().ok_or_else(|| Error::UnsupportedShape("residue fields of number-field primes are finite fields".into()))?;
    match place {
        Place::Infinity | Place::Point(_) => Ok(base.clone()),
        Place::Poly(m) if m.deg() == 1 => Ok(base.clone()),
        Place::Poly(_) => match (base, place.qpoly()) {
            (FieldDescriptor::Rationals, Some(q)) => Ok(FieldDescriptor::NumberField(NumberField::cached(&q, "a")?)),
            _ => Err(Error::UnsupportedShape("residue field of a higher-degree place over a number field".into())),
        },
        _ => Err(Error::InvalidPlace("not a place of a function field".into())),
    }
}

/// Image of a unit at `place` in its residue field.
pub fn residue_evaluate(field: &FieldDescriptor, f: &Element, place: &Place) -> Result<Element> {
    match ord_at_place(field, f, place)? {
        Some(0) => {}
        _ => return Err(Error::NotAUnit),
    }
    let f = field.coerce(f)?;
    let rf = residue_field(field, place)?;
    let out = match place {
        Place::Poly(m) if m.deg() == 1 => {
            let a = -m.coeff(0);
            Element::Nf(f.as_f1().unwrap().eval(&a).ok_or(Error::NotAUnit)?)
        }
        Place::Poly(_) => {
            let FieldDescriptor::NumberField(k) = &rf else { unreachable!() };
            let r = f.as_f1().unwrap();
            let toq = |p: &KPoly| QPoly::new(p.coeffs().iter().map(|c| c.as_rational().unwrap()).collect());
            let n = NfElem::from_poly(k, &toq(r.num()));
            let d = NfElem::from_poly(k, &toq(r.den()));
            Element::Nf(n / d)
        }
        Place::Point(a) => Element::F1(f.as_f2().eval(a).ok_or(Error::NotAUnit)?),
        Place::Infinity => match field.depth() {
            1 => {
                let r = f.as_f1().unwrap();
                Element::Nf(r.num().lc() / r.den().lc())
            }
            _ => {
                let r = f.as_f2();
                Element::F1(r.num().lc() / r.den().lc())
            }
        },
        _ => return Err(Error::InvalidPlace("residue map needs a function-field place".into())),
    };
    rf.coerce(&out)
}

/// An element of order one at the place.
pub fn uniformizer(field: &FieldDescriptor, place: &Place) -> Result<Element> {
    Ok(match place {
        Place::Prime(p) => field.int(*p as i64),
        Place::Ideal(pi) => {
            let k = field.number_field().unwrap();
            if pi.e == 1 {
                field.int(pi.p as i64)
            } else {
                Element::Nf(NfElem::from_poly(k, &pi.g))
            }
        }
        Place::Poly(m) => Element::F1(F1::from_poly(m.clone())).lift_to(field.depth()),
        Place::Point(a) => Element::F2(F2::from_poly(Poly::new(vec![-a.clone(), F1::one()]))),
        Place::Infinity => field.variable().unwrap().inv()?,
        Place::Arch(_) => return Err(Error::InvalidPlace("Archimedean place has no uniformizer".into())),
    })
}

/// Canonical text for a place (round-trips through [`parse_place`]).
pub fn fmt_place(field: &FieldDescriptor, place: &Place) -> String {
    match place {
        Place::Prime(p) => p.to_string(),
        Place::Ideal(pi) => format!("{}#{}", pi.p, pi.index),
        Place::Arch(0) => "arch".into(),
        Place::Arch(i) => format!("arch#{}", i),
        Place::Infinity => "inf".into(),
        Place::Poly(m) => field.fmt_element(&Element::F1(F1::from_poly(m.clone()))),
        Place::Point(a) => field.fmt_element(&Element::F2(F2::from_poly(Poly::new(vec![-a.clone(), F1::one()])))),
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, fmt_poly(&self.g, "a"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::parse::parse_field;
    use crate::scalar::int;

    fn el(k: &FieldDescriptor, s: &str) -> Element {
        parse_element(s, k).unwrap()
    }

    #[test]
    fn orders_on_q_t() {
        let k = parse_field("Q(T)").unwrap();
        let f = el(&k, "(T-2)^3/(T+1)");
        let p = parse_place(&k, "T-2").unwrap();
        assert_eq!(ord_at_place(&k, &f, &p).unwrap(), Some(3));
        let g = el(&k, "(T^2+1)/T^5");
        assert_eq!(ord_at_place(&k, &g, &Place::Infinity).unwrap(), Some(3));
        assert_eq!(ord_at_place(&k, &k.zero(), &p).unwrap(), None);
        assert!(matches!(parse_place(&k, "T^2-1"), Err(Error::Reducible(_))));
    }

    #[test]
    fn residues() {
        let k = parse_field("Q(T)").unwrap();
        let p = parse_place(&k, "T-2").unwrap();
        let r = residue_evaluate(&k, &el(&k, "(T^2+1)/(T-3)"), &p).unwrap();
        assert_eq!(r.as_rational(), Some(int(-5)));
        assert_eq!(residue_evaluate(&k, &el(&k, "T-2"), &p), Err(Error::NotAUnit));
        let p2 = parse_place(&k, "T^2-2").unwrap();
        let r2 = residue_evaluate(&k, &el(&k, "T"), &p2).unwrap();
        let rf = residue_field(&k, &p2).unwrap();
        assert_eq!(rf.fmt_element(&r2), "a");
        assert_eq!(rf.fmt_element(&r2.mul(&r2)), "2");
    }

    #[test]
    fn gaussian_primes() {
        let k = parse_field("Q(i)").unwrap();
        let kk = k.number_field().unwrap().clone();
        let above5 = prime_ideals_above(&kk, 5).unwrap();
        assert_eq!(above5.len(), 2);
        let above3 = prime_ideals_above(&kk, 3).unwrap();
        assert_eq!((above3.len(), above3[0].f), (1, 2));
        let above2 = prime_ideals_above(&kk, 2).unwrap();
        assert_eq!((above2.len(), above2[0].e), (1, 2));
        // 2 + i generates one of the primes above 5
        let x = QPoly::new(vec![int(2), int(1)]);
        let v: Vec<_> = above5.iter().map(|p| p.valuation(&kk, &x).unwrap()).collect();
        assert_eq!(v.iter().sum::<i64>(), 1);
        assert_eq!(above2[0].valuation(&kk, &QPoly::constant(int(2))), Some(2));
        assert_eq!(above2[0].valuation(&kk, &QPoly::new(vec![int(1), int(1)])), Some(1));
        assert_eq!(above3[0].valuation(&kk, &QPoly::constant(crate::scalar::rat(1, 9))), Some(-2));
    }

    #[test]
    fn non_maximal_order_is_reported() {
        let k = parse_field("Q(sqrt5)").unwrap();
        assert!(matches!(prime_ideals_above(k.number_field().unwrap(), 2), Err(Error::UnsupportedShape(_))));
    }

    #[test]
    fn depth_two_points() {
        let k = parse_field("Q(S)(T)").unwrap();
        let p = parse_place(&k, "T - S").unwrap();
        let f = el(&k, "(T - S)^2 * (T + 1)");
        assert_eq!(ord_at_place(&k, &f, &p).unwrap(), Some(2));
        let r = residue_evaluate(&k, &el(&k, "T + 1"), &p).unwrap();
        assert_eq!(residue_field(&k, &p).unwrap().fmt_element(&r), "S + 1");
    }

    #[test]
    fn round_trip_places() {
        let k = parse_field("Q(T)").unwrap();
        for s in ["T - 2", "T^2 - 2", "inf", "T"] {
            let p = parse_place(&k, s).unwrap();
            assert_eq!(parse_place(&k, &fmt_place(&k, &p)).unwrap(), p);
        }
    }
}
