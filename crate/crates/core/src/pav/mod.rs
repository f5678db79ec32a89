//! Pseudo-absolute values: maps `K -> [0, +inf]` that are absolute values
//! on the residue field of a valuation ring of `K`.

mod axioms;
mod json;
pub mod sample;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fields::place::{check_place, ord_at_place, residue_evaluate, residue_field, Place};
use crate::fields::{Element, FieldDescriptor};
use crate::scalar::{fmt_rational, parse_rational, Rational};
use crate::xreal::XReal;

pub use axioms::{check_axioms_with, check_pav_axioms, AxiomReport, Violation};

/// The constant `c` in `exp(-c * ord)`: a positive rational, or `coef * ln(base)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Scale {
    Rat(Rational),
    Log { coef: Rational, base: u64 },
}

impl Scale {
    /// `c = ln p`, so that `|p| = 1/p` at the place `p`.
    pub fn log(base: u64) -> Scale {
        Scale::Log { coef: Rational::one(), base }
    }

    fn check(&self) -> Result<()> {
        let ok = match self {
            Scale::Rat(c) => c.is_positive(),
            Scale::Log { coef, base } => coef.is_positive() && *base >= 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::OutOfRange(format!("scale {} must be positive", self)))
        }
    }

    /// `exp(-c * k)`.
    pub fn value_at_ord(&self, k: i64) -> XReal {
        if k == 0 {
            return XReal::one();
        }
        match self {
            Scale::Rat(c) => XReal::exp(-(c * Rational::from_integer(BigInt::from(k)))),
            Scale::Log { coef, base } => {
                XReal::rational(Rational::from_integer(BigInt::from(*base))).powq(&-(coef * Rational::from_integer(BigInt::from(k))))
            }
        }
    }

    /// `t * c`.
    pub fn scaled(&self, t: &Rational) -> Scale {
        match self {
            Scale::Rat(c) => Scale::Rat(c * t),
            Scale::Log { coef, base } => Scale::Log { coef: coef * t, base: *base },
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scale::Rat(c) => Some(c),
            Scale::Log { .. } => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        match self {
            Scale::Rat(c) => c.to_f64().unwrap(),
            Scale::Log { coef, base } => coef.to_f64().unwrap() * (*base as f64).ln(),
        }
    }

    /// Accepts `q`, `log(b)`, `log b`, `ln(b)` and `q*log(b)`.
    pub fn parse(s: &str) -> Result<Scale> {
        let bad = || Error::SyntaxError { pos: 0, msg: format!("bad scale '{}'", s) };
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (coef, rest) = match t.split_once('*') {
            Some((a, b)) => (parse_rational(a).ok_or_else(bad)?, b.to_string()),
            None => (Rational::one(), t.clone()),
        };
        let arg = rest.strip_prefix("log").or_else(|| rest.strip_prefix("ln"));
        let sc = match arg {
            Some(a) => {
                let a = a.strip_prefix('(').and_then(|a| a.strip_suffix(')')).unwrap_or(a);
                Scale::Log { coef, base: a.parse().map_err(|_| bad())? }
            }
            None if !t.contains('*') => Scale::Rat(parse_rational(&t).ok_or_else(bad)?),
            None => return Err(bad()),
        };
        sc.check()?;
        Ok(sc)
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scale::Rat(c) => write!(f, "{}", fmt_rational(c)),
            Scale::Log { coef, base } if coef.is_one() => write!(f, "log({})", base),
            Scale::Log { coef, base } => write!(f, "{}*log({})", fmt_rational(coef), base),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PavKind {
    Trivial,
    /// `|sigma(f)|^eps` for the embedding `emb`.
    Arch { emb: usize, eps: Rational },
    /// `exp(-c * ord_place(f))`.
    Ultra { place: Place, c: Scale },
    /// Residually trivial: 0, 1 or infinity according to the sign of the order.
    UltraDegenerate { place: Place },
    /// Gauss valuation `min_i (v(c_i) + i*slope)` on `f = sum c_i (T - center)^i`.
    Gauss { base: Box<Pav>, center: Element, slope: Rational },
    /// Valuation of `place` composed with `residue` on its residue field.
    Composite { place: Place, residue: Box<Pav> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Pav {
    field: FieldDescriptor,
    kind: PavKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankInfo {
    pub rank: usize,
    pub rat_rank: usize,
}

impl RankInfo {
    const ZERO: RankInfo = RankInfo { rank: 0, rat_rank: 0 };
    const ONE: RankInfo = RankInfo { rank: 1, rat_rank: 1 };
}

impl Pav {
    pub fn trivial(field: &FieldDescriptor) -> Pav {
        Pav { field: field.clone(), kind: PavKind::Trivial }
    }

    pub fn arch(field: &FieldDescriptor, emb: usize, eps: Rational) -> Result<Pav> {
        if !eps.is_positive() || eps > Rational::one() {
            return Err(Error::OutOfRange(format!("Archimedean exponent {} outside (0, 1]", fmt_rational(&eps))));
        }
        if field.is_function_field() {
            return Err(Error::FieldMismatch("Archimedean points of a function field are composites".into()));
        }
        check_place(field, &Place::Arch(emb))?;
        Ok(Pav { field: field.clone(), kind: PavKind::Arch { emb, eps } })
    }

    pub fn ultra(field: &FieldDescriptor, place: Place, c: Scale) -> Result<Pav> {
        c.check()?;
        Self::check_finite_place(field, &place)?;
        Ok(Pav { field: field.clone(), kind: PavKind::Ultra { place, c } })
    }

    pub fn ultra_degenerate(field: &FieldDescriptor, place: Place) -> Result<Pav> {
        Self::check_finite_place(field, &place)?;
        Ok(Pav { field: field.clone(), kind: PavKind::UltraDegenerate { place } })
    }

    fn check_finite_place(field: &FieldDescriptor, place: &Place) -> Result<()> {
        if place.is_archimedean() {
            return Err(Error::InvalidPlace("Archimedean place for an ultrametric value".into()));
        }
        check_place(field, place)
    }

    /// Gauss extension of the ultrametric `base` on `F` to `field = F(T)`.
    pub fn gauss(field: &FieldDescriptor, base: Pav, center: Element, slope: Rational) -> Result<Pav> {
        if field.base() != Some(&base.field) {
            return Err(Error::FieldMismatch("Gauss base must live on the coefficient field".into()));
        }
        match &base.kind {
            PavKind::Trivial | PavKind::UltraDegenerate { .. } => {}
            PavKind::Ultra { c: Scale::Rat(_), .. } => {}
            PavKind::Ultra { .. } => {
                return Err(Error::UnsupportedShape("Gauss base needs a rational scale".into()));
            }
            _ => return Err(Error::NotUltrametric("Gauss base must be ultrametric".into())),
        }
        let center = base.field.coerce(&center)?;
        Ok(Pav { field: field.clone(), kind: PavKind::Gauss { base: Box::new(base), center, slope } })
    }

    /// Composite of the valuation at `place` with `residue` on the residue field.
    pub fn compose(field: &FieldDescriptor, place: Place, residue: Pav) -> Result<Pav> {
        if place.is_archimedean() || !field.is_function_field() {
            return Err(Error::InvalidPlace("composition needs a place of a function field".into()));
        }
        check_place(field, &place)?;
        let rf = residue_field(field, &place)?;
        if rf != residue.field {
            return Err(Error::FieldMismatch(format!("residue PAV on {} but residue field is {}", residue.field, rf)));
        }
        Ok(Pav { field: field.clone(), kind: PavKind::Composite { place, residue: Box::new(residue) } })
    }

    /// Composite at a degree-one place; the result restricts to `residue` on the constants.
    pub fn extend_by_generalisation(field: &FieldDescriptor, place: Place, residue: Pav) -> Result<Pav> {
        if place.degree() != 1 {
            return Err(Error::FieldMismatch("extension by generalisation needs a degree-one place".into()));
        }
        let v = Self::compose(field, place, residue)?;
        let PavKind::Composite { residue, .. } = &v.kind else { unreachable!() };
        let base = residue.field.clone();
        for c in sample::Sampler::new(&base, 7).take_elements(24) {
            let ord = v.eval(&field.constant(&c))?.cmp(&residue.eval(&c)?);
            if matches!(ord, crate::xreal::XOrd::Less | crate::xreal::XOrd::Greater) {
                return Err(Error::FieldMismatch("composite does not restrict to the residue PAV".into()));
            }
        }
        Ok(v)
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn kind(&self) -> &PavKind {
        &self.kind
    }

    pub fn is_archimedean(&self) -> bool {
        match &self.kind {
            PavKind::Arch { .. } => true,
            PavKind::Composite { residue, .. } => residue.is_archimedean(),
            _ => false,
        }
    }

    pub fn is_ultrametric(&self) -> bool {
        !self.is_archimedean()
    }

    /// `|f|`.
    pub fn eval(&self, f: &Element) -> Result<XReal> {
        let f = self.field.coerce(f)?;
        if f.is_zero() {
            return Ok(XReal::Zero);
        }
        match &self.kind {
            PavKind::Trivial => Ok(XReal::one()),
            PavKind::Arch { emb, eps } => {
                let x = f.as_nf().expect("number field element");
                let a = match x.as_rational() {
                    Some(q) => XReal::rational(q.abs()),
                    None => x.field().unwrap().abs_at(x.poly(), *emb)?,
                };
                Ok(if eps.is_one() { a } else { a.pow(eps) })
            }
            PavKind::Ultra { place, c } => {
                let k = ord_at_place(&self.field, &f, place)?.expect("nonzero");
                Ok(c.value_at_ord(k))
            }
            PavKind::UltraDegenerate { place } => {
                let k = ord_at_place(&self.field, &f, place)?.expect("nonzero");
                Ok(degenerate_value(k.signum()))
            }
            PavKind::Gauss { base, center, slope } => {
                let w = gauss_valuation(&self.field, base, center, slope, &f)?;
                Ok(match &base.kind {
                    PavKind::UltraDegenerate { .. } => degenerate_value(if w.is_positive() {
                        1
                    } else if w.is_negative() {
                        -1
                    } else {
                        0
                    }),
                    _ => XReal::exp(-w),
                })
            }
            PavKind::Composite { place, residue } => {
                let k = ord_at_place(&self.field, &f, place)?.expect("nonzero");
                match k.signum() {
                    1 => Ok(XReal::Zero),
                    -1 => Ok(XReal::Infinity),
                    _ => residue.eval(&residue_evaluate(&self.field, &f, place)?),
                }
            }
        }
    }

    /// `|f| < inf`. Decided from order data, never from magnitudes.
    pub fn in_finiteness_ring(&self, f: &Element) -> Result<bool> {
        Ok(!self.eval(f)?.is_infinite())
    }

    /// `|f| = 0`.
    pub fn in_kernel(&self, f: &Element) -> Result<bool> {
        Ok(self.eval(f)?.is_zero())
    }

    pub fn rank(&self) -> RankInfo {
        match &self.kind {
            PavKind::Trivial | PavKind::Arch { .. } => RankInfo::ZERO,
            PavKind::Ultra { .. } | PavKind::UltraDegenerate { .. } => RankInfo::ONE,
            PavKind::Gauss { base, slope, .. } => {
                if matches!(base.kind, PavKind::Trivial) && slope.is_zero() {
                    RankInfo::ZERO
                } else {
                    // rational slope: the value group stays inside Q
                    RankInfo::ONE
                }
            }
            PavKind::Composite { residue, .. } => {
                let r = residue.rank();
                RankInfo { rank: r.rank + 1, rat_rank: r.rat_rank + 1 }
            }
        }
    }

    /// Valuation `-ln|f|` of the total valuation ring of the point, as an exact
    /// rational for rank-one ultrametric points with rational scale.
    pub fn valuation(&self, f: &Element) -> Result<Option<Rational>> {
        let f = self.field.coerce(f)?;
        if f.is_zero() {
            return Ok(None);
        }
        Ok(match &self.kind {
            PavKind::Ultra { place, c: Scale::Rat(c) } => {
                let k = ord_at_place(&self.field, &f, place)?.unwrap();
                Some(c * Rational::from_integer(BigInt::from(k)))
            }
            PavKind::Gauss { base, center, slope } => Some(gauss_valuation(&self.field, base, center, slope, &f)?),
            PavKind::Trivial => Some(Rational::zero()),
            _ => None,
        })
    }
}

fn degenerate_value(sign: i64) -> XReal {
    match sign {
        1 => XReal::Zero,
        0 => XReal::one(),
        _ => XReal::Infinity,
    }
}

/// Base valuation of a coefficient: `c * ord` (ord for the degenerate base, 0 for trivial).
fn base_valuation(base: &Pav, c: &Element) -> Result<Option<Rational>> {
    if c.is_zero() {
        return Ok(None);
    }
    Ok(Some(match &base.kind {
        PavKind::Trivial => Rational::zero(),
        PavKind::UltraDegenerate { place } => Rational::from_integer(BigInt::from(ord_at_place(&base.field, c, place)?.unwrap())),
        PavKind::Ultra { place, c: Scale::Rat(s) } => s * Rational::from_integer(BigInt::from(ord_at_place(&base.field, c, place)?.unwrap())),
        _ => return Err(Error::NotUltrametric("archimedean coefficient valuation".into())),
    }))
}

/// Coefficients of `p(T + a)` as base-level elements.
pub(crate) fn shifted_coeffs(field: &FieldDescriptor, p_num: bool, f: &Element, a: &Element) -> Vec<Element> {
    match field.depth() {
        1 => {
            let r = f.as_f1().unwrap();
            let p = if p_num { r.num() } else { r.den() };
            p.shift(&a.as_nf().unwrap()).coeffs().iter().cloned().map(Element::Nf).collect()
        }
        _ => {
            let r = f.as_f2();
            let p = if p_num { r.num() } else { r.den() };
            p.shift(&a.as_f1().unwrap()).coeffs().iter().cloned().map(Element::F1).collect()
        }
    }
}

fn poly_gauss(base: &Pav, coeffs: &[Element], slope: &Rational) -> Result<Rational> {
    let mut best: Option<Rational> = None;
    for (i, c) in coeffs.iter().enumerate() {
        if let Some(v) = base_valuation(base, c)? {
            let w = v + slope * Rational::from_integer(BigInt::from(i));
            if best.as_ref().map_or(true, |b| w < *b) {
                best = Some(w);
            }
        }
    }
    Ok(best.expect("nonzero polynomial"))
}

fn gauss_valuation(field: &FieldDescriptor, base: &Pav, center: &Element, slope: &Rational, f: &Element) -> Result<Rational> {
    let num = shifted_coeffs(field, true, f, center);
    let den = shifted_coeffs(field, false, f, center);
    Ok(poly_gauss(base, &num, slope)? - poly_gauss(base, &den, slope)?)
}

impl fmt::Display for Pav {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{parse_element, parse_field, parse_place};
    use crate::scalar::{int, rat};
    use crate::xreal::XOrd;

    fn el(k: &FieldDescriptor, s: &str) -> Element {
        parse_element(s, k).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let q = FieldDescriptor::Rationals;
        let a = Pav::arch(&q, 0, int(1)).unwrap();
        assert_eq!(a.eval(&el(&q, "-7/2")).unwrap(), XReal::rational(rat(7, 2)));
        assert!(matches!(Pav::arch(&q, 0, int(2)), Err(Error::OutOfRange(_))));

        let qt = parse_field("Q(T)").unwrap();
        let u = Pav::ultra(&qt, parse_place(&qt, "T-2").unwrap(), Scale::Rat(int(1))).unwrap();
        assert_eq!(u.eval(&el(&qt, "(T-2)^3/(T+1)")).unwrap(), XReal::exp(int(-3)));

        let c = Pav::compose(&qt, parse_place(&qt, "T").unwrap(), a.clone()).unwrap();
        assert_eq!(c.eval(&el(&qt, "(2*T+6)/(T-1)")).unwrap(), XReal::rational(int(6)));
        assert!(c.in_kernel(&el(&qt, "T")).unwrap());
    }

    #[test]
    fn membership() {
        let qt = parse_field("Q(T)").unwrap();
        let d = Pav::ultra_degenerate(&qt, parse_place(&qt, "T-2").unwrap()).unwrap();
        assert!(!d.in_finiteness_ring(&el(&qt, "1/(T-2)")).unwrap());
        let t = Pav::trivial(&qt);
        assert!(t.in_finiteness_ring(&el(&qt, "T^3-7")).unwrap());
        assert!(!t.in_kernel(&el(&qt, "T^3-7")).unwrap());
    }

    #[test]
    fn gauss_examples() {
        let q = FieldDescriptor::Rationals;
        let qx = parse_field("Q(X)").unwrap();
        let ord3 = Pav::ultra(&q, Place::Prime(3), Scale::Rat(int(1))).unwrap();
        let g = Pav::gauss(&qx, ord3.clone(), q.int(0), rat(1, 2)).unwrap();
        assert_eq!(g.eval(&el(&qx, "9*X^2+3*X+27")).unwrap(), XReal::exp(rat(-3, 2)));
        assert_eq!(g.rank(), RankInfo { rank: 1, rat_rank: 1 });
        let g1 = Pav::gauss(&qx, ord3, q.int(1), rat(1, 2)).unwrap();
        assert_eq!(g1.eval(&el(&qx, "X-1")).unwrap(), XReal::exp(rat(-1, 2)));
        let arch = Pav::arch(&q, 0, int(1)).unwrap();
        assert!(matches!(Pav::gauss(&qx, arch, q.int(0), int(1)), Err(Error::NotUltrametric(_))));
    }

    #[test]
    fn trivial_gauss_matches_place() {
        let q = FieldDescriptor::Rationals;
        let qt = parse_field("Q(T)").unwrap();
        let g = Pav::gauss(&qt, Pav::trivial(&q), q.int(0), int(1)).unwrap();
        let u = Pav::ultra(&qt, parse_place(&qt, "T").unwrap(), Scale::Rat(int(1))).unwrap();
        for f in sample::Sampler::new(&qt, 3).take_elements(60) {
            assert_eq!(g.eval(&f).unwrap(), u.eval(&f).unwrap(), "{}", qt.fmt_element(&f));
        }
    }

    #[test]
    fn ranks() {
        let q = FieldDescriptor::Rationals;
        let qt = parse_field("Q(T)").unwrap();
        let u5 = Pav::ultra(&q, Place::Prime(5), Scale::Rat(int(1))).unwrap();
        let c = Pav::compose(&qt, parse_place(&qt, "T").unwrap(), u5).unwrap();
        assert_eq!(c.rank().rank, 2);
        assert_eq!(Pav::arch(&q, 0, rat(1, 2)).unwrap().rank().rank, 0);
    }

    #[test]
    fn composites_over_extensions() {
        let qt = parse_field("Q(T)").unwrap();
        let p = parse_place(&qt, "T^2-2").unwrap();
        let rf = residue_field(&qt, &p).unwrap();
        let real = rf.number_field().unwrap().n_real();
        assert_eq!(real, 2);
        let v = Pav::compose(&qt, p.clone(), Pav::arch(&rf, 1, int(1)).unwrap()).unwrap();
        let x = v.eval(&el(&qt, "T")).unwrap();
        assert_eq!(x.cmp(&XReal::approx(2f64.sqrt(), 1e-15)), XOrd::Indeterminate);
        assert!(Pav::compose(&qt, p, Pav::trivial(&FieldDescriptor::Rationals)).is_err());

        // trivial residue at T agrees with the degenerate place
        let z = parse_place(&qt, "T").unwrap();
        let c = Pav::extend_by_generalisation(&qt, z.clone(), Pav::trivial(&FieldDescriptor::Rationals)).unwrap();
        let d = Pav::ultra_degenerate(&qt, z).unwrap();
        for f in sample::Sampler::new(&qt, 5).take_elements(60) {
            assert_eq!(c.eval(&f).unwrap(), d.eval(&f).unwrap());
        }
    }

    #[test]
    fn log_scale() {
        let q = FieldDescriptor::Rationals;
        let u = Pav::ultra(&q, Place::Prime(5), Scale::log(5)).unwrap();
        assert_eq!(u.eval(&q.rational(rat(50, 3))).unwrap(), XReal::rational(rat(1, 25)));
        assert_eq!(Scale::parse("log(5)").unwrap(), Scale::log(5));
        assert_eq!(Scale::parse("1/2*log(3)").unwrap().to_string(), "1/2*log(3)");
        assert!(Scale::parse("-1").is_err());
    }
}
