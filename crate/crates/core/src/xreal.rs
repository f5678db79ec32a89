//! The extended half-line `[0, +inf]` with two exact lanes (rationals and
//! `e^q`) and an approximate lane carrying a relative error bound.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::bounds::{cmp_exp_rational, log2_bigint};
use crate::error::{Error, Result};
use crate::scalar::{exact_rat_root, fmt_rational, parse_rational, rat_powi, Rational};

const ULP: f64 = f64::EPSILON; // 2^-52

/// Default relative error bound reported for approximate payloads.
pub const DEFAULT_RELERR: f64 = 1.0 / (1u64 << 50) as f64;

/// Positive binary float `m * 2^e` (`1 <= m < 2`) with relative error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Approx {
    m: f64,
    e: i64,
    rel: f64,
}

impl Approx {
    pub fn new(v: f64, rel: f64) -> Self {
        assert!(v > 0.0 && v.is_finite(), "approximate payload must be positive and finite");
        Self::from_parts(v, 0, rel)
    }

    fn from_parts(mut m: f64, mut e: i64, rel: f64) -> Self {
        debug_assert!(m > 0.0);
        let k = m.log2().floor() as i64;
        if k != 0 {
            m *= 2f64.powi(-k as i32);
            e += k;
        }
        while m >= 2.0 {
            m /= 2.0;
            e += 1;
        }
        while m < 1.0 {
            m *= 2.0;
            e -= 1;
        }
        Approx { m, e, rel }
    }

    /// From a base-2 logarithm with absolute error `err`.
    fn from_log2(l: f64, err: f64, rel_in: f64) -> Self {
        let e = l.floor();
        let m = 2f64.powf(l - e);
        let rel_calc = (err * std::f64::consts::LN_2).exp_m1() * 1.01 + 2.0 * ULP;
        Approx::from_parts(m, e as i64, rel_in + rel_calc + rel_in * rel_calc)
    }

    pub fn relerr(&self) -> f64 {
        self.rel
    }

    pub fn mantissa(&self) -> f64 {
        self.m
    }

    pub fn exponent(&self) -> i64 {
        self.e
    }

    pub fn log2(&self) -> f64 {
        self.e as f64 + self.m.log2()
    }

    /// Nearest f64 (0 or inf outside the representable range).
    pub fn to_f64(&self) -> f64 {
        if self.e > 1023 {
            f64::INFINITY
        } else if self.e < -1074 {
            0.0
        } else {
            self.m * 2f64.powi(self.e as i32)
        }
    }

    fn mul(&self, o: &Approx) -> Approx {
        let rel = self.rel + o.rel + self.rel * o.rel + ULP;
        Approx::from_parts(self.m * o.m, self.e + o.e, rel)
    }

    fn add(&self, o: &Approx) -> Approx {
        let (a, b) = if self.e >= o.e { (self, o) } else { (o, self) };
        let d = a.e - b.e;
        let rel = a.rel.max(b.rel) + ULP;
        if d > 1000 {
            return Approx { m: a.m, e: a.e, rel: rel + 2f64.powi(-990) };
        }
        Approx::from_parts(a.m + b.m * 2f64.powi(-(d as i32)), a.e, rel)
    }

    fn powf(&self, s: f64, s_rel: f64) -> Approx {
        let l = self.log2();
        let ls = l * s;
        let rel_in = (s.abs() * self.rel.ln_1p()).exp_m1() * 1.0001;
        if self.e.abs() < 900 && ls.abs() < 900.0 {
            // linear domain: sqrt is correctly rounded, pow is within one ulp
            let v = self.m * 2f64.powi(self.e as i32);
            let r = if s == 0.5 { v.sqrt() } else { v.powf(s) };
            let rel = rel_in + ULP + (ls * std::f64::consts::LN_2).abs() * s_rel * 1.01;
            return Approx::from_parts(r, 0, rel);
        }
        let err = (s.abs() * (l.abs() + 1.0) + ls.abs() + 4.0) * ULP + ls.abs() * s_rel;
        Approx::from_log2(ls, err, rel_in)
    }

    fn inv(&self) -> Approx {
        let rel = self.rel / (1.0 - self.rel) + ULP;
        Approx::from_parts(1.0 / self.m, -self.e, rel)
    }

    /// Interval comparison; `None` when the enclosures overlap.
    fn cmp(&self, o: &Approx) -> Option<Ordering> {
        let up = |x: &Approx| x.m * (1.0 + x.rel) * (1.0 + 4.0 * ULP);
        let lo = |x: &Approx| x.m * (1.0 - x.rel) * (1.0 - 4.0 * ULP);
        let d = self.e - o.e;
        if d > 2 {
            return if lo(self) * 4.0 > up(o) * 2.0 { Some(Ordering::Greater) } else { None };
        }
        if d < -2 {
            return if up(self) * 2.0 < lo(o) * 4.0 { Some(Ordering::Less) } else { None };
        }
        let sc = 2f64.powi(d as i32);
        if up(self) * sc < lo(o) {
            Some(Ordering::Less)
        } else if lo(self) * sc > up(o) {
            Some(Ordering::Greater)
        } else {
            None
        }
    }
}

/// Strictly positive real payload.
#[derive(Clone, Debug, PartialEq)]
pub enum PosReal {
    Rational(Rational),
    /// `e^q`
    Exp(Rational),
    Approx(Approx),
}

#[derive(Clone, Debug, PartialEq)]
pub enum XReal {
    Zero,
    Finite(PosReal),
    Infinity,
}

/// Outcome of [`XReal::cmp`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XOrd {
    Less,
    Equal,
    Greater,
    Indeterminate,
}

impl XOrd {
    fn from_ord(o: Ordering) -> Self {
        match o {
            Ordering::Less => XOrd::Less,
            Ordering::Equal => XOrd::Equal,
            Ordering::Greater => XOrd::Greater,
        }
    }

    pub fn reverse(self) -> Self {
        match self {
            XOrd::Less => XOrd::Greater,
            XOrd::Greater => XOrd::Less,
            o => o,
        }
    }
}

fn approx_of_rational(q: &Rational) -> Approx {
    let (a, ea) = log2_bigint(q.numer());
    let (b, eb) = log2_bigint(q.denom());
    if q.numer().bits() <= 53 && q.denom().bits() <= 53 {
        let v = q.numer().to_f64().unwrap() / q.denom().to_f64().unwrap();
        if v.is_normal() {
            return Approx::from_parts(v, 0, ULP);
        }
    }
    Approx::from_log2(a - b, ea + eb + (a - b).abs() * ULP, 0.0)
}

fn approx_of_exp(q: &Rational) -> Approx {
    let qf = q.to_f64().unwrap_or(f64::NAN);
    let l = qf * std::f64::consts::LOG2_E;
    Approx::from_log2(l, (l.abs() * 3.0 + 1.0) * ULP, 0.0)
}

impl PosReal {
    pub fn to_approx(&self) -> Approx {
        match self {
            PosReal::Rational(q) => approx_of_rational(q),
            PosReal::Exp(q) => approx_of_exp(q),
            PosReal::Approx(a) => *a,
        }
    }

    fn is_exact(&self) -> bool {
        !matches!(self, PosReal::Approx(_))
    }
}

impl XReal {
    pub fn one() -> Self {
        XReal::Finite(PosReal::Rational(Rational::one()))
    }

    /// Nonnegative rational; zero maps to `Zero`.
    pub fn rational(q: Rational) -> Self {
        assert!(!q.is_negative(), "XReal::rational of a negative number");
        if q.is_zero() {
            XReal::Zero
        } else {
            XReal::Finite(PosReal::Rational(q))
        }
    }

    /// `e^q`, with `e^0` normalized to the rational 1.
    pub fn exp(q: Rational) -> Self {
        if q.is_zero() {
            XReal::one()
        } else {
            XReal::Finite(PosReal::Exp(q))
        }
    }

    pub fn approx(v: f64, rel: f64) -> Self {
        if v == 0.0 {
            return XReal::Zero;
        }
        XReal::Finite(PosReal::Approx(Approx::new(v, rel)))
    }

    /// Positive value given by its natural logarithm with absolute error `err`.
    pub fn from_ln(l: f64, err: f64) -> Self {
        let ln2 = std::f64::consts::LN_2;
        XReal::from_approx(Approx::from_log2(l / ln2, err / ln2 + (l / ln2).abs() * ULP, 0.0))
    }

    pub fn from_approx(a: Approx) -> Self {
        XReal::Finite(PosReal::Approx(a))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, XReal::Zero)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, XReal::Infinity)
    }

    pub fn is_finite_positive(&self) -> bool {
        matches!(self, XReal::Finite(_))
    }

    pub fn is_exact(&self) -> bool {
        match self {
            XReal::Finite(p) => p.is_exact(),
            _ => true,
        }
    }

    /// Rational payload, if the value is an exact rational (including 0).
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            XReal::Zero => Some(Rational::zero()),
            XReal::Finite(PosReal::Rational(q)) => Some(q.clone()),
            _ => None,
        }
    }

    /// Nearest f64.
    pub fn to_f64(&self) -> f64 {
        match self {
            XReal::Zero => 0.0,
            XReal::Infinity => f64::INFINITY,
            XReal::Finite(p) => match p {
                PosReal::Rational(q) => q.to_f64().unwrap_or_else(|| p.to_approx().to_f64()),
                _ => p.to_approx().to_f64(),
            },
        }
    }

    /// Natural logarithm as f64 (`-inf` for 0, `+inf` for infinity).
    pub fn ln(&self) -> f64 {
        match self {
            XReal::Zero => f64::NEG_INFINITY,
            XReal::Infinity => f64::INFINITY,
            XReal::Finite(PosReal::Exp(q)) => q.to_f64().unwrap_or(f64::NAN),
            XReal::Finite(p) => p.to_approx().log2() * std::f64::consts::LN_2,
        }
    }

    /// Multiplication with the pseudo-absolute-value law: `0 * inf` is undefined.
    pub fn mul(&self, o: &XReal) -> Result<XReal> {
        use XReal::*;
        Ok(match (self, o) {
            (Zero, Infinity) | (Infinity, Zero) => return Err(Error::UndefinedProduct),
            (Zero, _) | (_, Zero) => Zero,
            (Infinity, _) | (_, Infinity) => Infinity,
            (Finite(a), Finite(b)) => Finite(match (a, b) {
                (PosReal::Rational(x), PosReal::Rational(y)) => PosReal::Rational(x * y),
                (PosReal::Exp(x), PosReal::Exp(y)) => {
                    let s = x + y;
                    if s.is_zero() {
                        PosReal::Rational(Rational::one())
                    } else {
                        PosReal::Exp(s)
                    }
                }
                (PosReal::Rational(x), PosReal::Exp(_)) | (PosReal::Exp(_), PosReal::Rational(x))
                    if x.is_one() =>
                {
                    if let PosReal::Exp(q) = if matches!(a, PosReal::Exp(_)) { a } else { b } {
                        PosReal::Exp(q.clone())
                    } else {
                        unreachable!()
                    }
                }
                _ => PosReal::Approx(a.to_approx().mul(&b.to_approx())),
            }),
        })
    }

    pub fn add(&self, o: &XReal) -> XReal {
        use XReal::*;
        match (self, o) {
            (Zero, x) | (x, Zero) => x.clone(),
            (Infinity, _) | (_, Infinity) => Infinity,
            (Finite(a), Finite(b)) => Finite(match (a, b) {
                (PosReal::Rational(x), PosReal::Rational(y)) => PosReal::Rational(x + y),
                _ => PosReal::Approx(a.to_approx().add(&b.to_approx())),
            }),
        }
    }

    /// Multiplicative inverse: `0 <-> inf`.
    pub fn inv(&self) -> XReal {
        match self {
            XReal::Zero => XReal::Infinity,
            XReal::Infinity => XReal::Zero,
            XReal::Finite(p) => XReal::Finite(match p {
                PosReal::Rational(q) => PosReal::Rational(q.recip()),
                PosReal::Exp(q) => PosReal::Exp(-q),
                PosReal::Approx(a) => PosReal::Approx(a.inv()),
            }),
        }
    }

    /// `self^e` for a positive rational exponent.
    pub fn pow(&self, e: &Rational) -> XReal {
        assert!(e.is_positive(), "XReal::pow requires a positive exponent");
        match self {
            XReal::Zero => XReal::Zero,
            XReal::Infinity => XReal::Infinity,
            XReal::Finite(p) => XReal::Finite(pos_pow(p, e)),
        }
    }

    /// `self^e` for any rational exponent on finite positive values
    /// (zero and infinity swap under negative exponents).
    pub fn powq(&self, e: &Rational) -> XReal {
        if e.is_zero() {
            return match self {
                XReal::Finite(_) => XReal::one(),
                x => x.clone(),
            };
        }
        if e.is_negative() {
            self.inv().pow(&-e)
        } else {
            self.pow(e)
        }
    }

    /// Three-way comparison; exact lanes never report `Indeterminate`.
    pub fn cmp(&self, o: &XReal) -> XOrd {
        use XReal::*;
        match (self, o) {
            (Zero, Zero) | (Infinity, Infinity) => XOrd::Equal,
            (Zero, _) | (_, Infinity) => XOrd::Less,
            (_, Zero) | (Infinity, _) => XOrd::Greater,
            (Finite(a), Finite(b)) => cmp_pos(a, b),
        }
    }

    pub fn max(&self, o: &XReal) -> XReal {
        match self.cmp(o) {
            XOrd::Less => o.clone(),
            XOrd::Greater | XOrd::Equal => self.clone(),
            XOrd::Indeterminate => {
                // keep the payload with the larger nominal value and widen its bound
                let (a, b) = (self.to_approx_or_none(), o.to_approx_or_none());
                match (a, b) {
                    (Some(x), Some(y)) => {
                        let (hi, lo) = if x.log2() >= y.log2() { (x, y) } else { (y, x) };
                        let gap = (hi.log2() - lo.log2()).abs() * std::f64::consts::LN_2;
                        XReal::from_approx(Approx { rel: hi.rel.max(lo.rel) + gap.exp_m1(), ..hi })
                    }
                    _ => self.clone(),
                }
            }
        }
    }

    fn to_approx_or_none(&self) -> Option<Approx> {
        match self {
            XReal::Finite(p) => Some(p.to_approx()),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            XReal::Zero => json!({"kind": "zero"}),
            XReal::Infinity => json!({"kind": "inf"}),
            XReal::Finite(PosReal::Rational(q)) => {
                json!({"kind": "rat", "num": int_json(q.numer()), "den": int_json(q.denom())})
            }
            XReal::Finite(PosReal::Exp(q)) => {
                json!({"kind": "exp", "q_num": int_json(q.numer()), "q_den": int_json(q.denom())})
            }
            XReal::Finite(PosReal::Approx(a)) => {
                let v = a.to_f64();
                if v.is_normal() {
                    json!({"kind": "approx", "val": v, "relerr": a.rel})
                } else {
                    json!({"kind": "approx", "val": a.m, "exp2": a.e, "relerr": a.rel})
                }
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<XReal> {
        let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| Error::Json("xreal needs kind".into()))?;
        let big = |k: &str| -> Result<BigInt> {
            match v.get(k) {
                Some(Value::Number(n)) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| Error::Json(format!("{} must be an integer", k))),
                Some(Value::String(s)) => s.parse().map_err(|_| Error::Json(format!("bad integer {}", s))),
                _ => Err(Error::Json(format!("missing {}", k))),
            }
        };
        match kind {
            "zero" => Ok(XReal::Zero),
            "inf" => Ok(XReal::Infinity),
            "rat" => {
                let d = big("den")?;
                if d.is_zero() {
                    return Err(Error::Json("zero denominator".into()));
                }
                let q = BigRational::new(big("num")?, d);
                if !q.is_positive() {
                    return Err(Error::Json("rat payload must be positive".into()));
                }
                Ok(XReal::rational(q))
            }
            "exp" => {
                let d = big("q_den")?;
                if d.is_zero() {
                    return Err(Error::Json("zero denominator".into()));
                }
                Ok(XReal::exp(BigRational::new(big("q_num")?, d)))
            }
            "approx" => {
                let val = v.get("val").and_then(Value::as_f64).ok_or_else(|| Error::Json("approx needs val".into()))?;
                let rel = v.get("relerr").and_then(Value::as_f64).unwrap_or(DEFAULT_RELERR);
                if !(val > 0.0) || !(0.0..1.0).contains(&rel) {
                    return Err(Error::Json("approx payload out of range".into()));
                }
                let e = v.get("exp2").and_then(Value::as_i64).unwrap_or(0);
                Ok(XReal::from_approx(Approx::from_parts(val, e, rel)))
            }
            k => Err(Error::Json(format!("unknown xreal kind {}", k))),
        }
    }

    /// Parses the text forms `0`, `inf`, `p/q`, `exp(q)`, `e^q`.
    pub fn parse(s: &str) -> Result<XReal> {
        let s = s.trim();
        if s == "0" {
            return Ok(XReal::Zero);
        }
        if s == "inf" || s == "+inf" {
            return Ok(XReal::Infinity);
        }
        let inner = s
            .strip_prefix("exp(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| s.strip_prefix("e^").map(|r| r.trim_matches(|c| c == '(' || c == ')')));
        if let Some(q) = inner {
            let q = parse_rational(q).ok_or_else(|| Error::Json(format!("bad exponent {}", q)))?;
            return Ok(XReal::exp(q));
        }
        match parse_rational(s) {
            Some(q) if q.is_positive() => Ok(XReal::rational(q)),
            _ => Err(Error::Json(format!("bad xreal {}", s))),
        }
    }
}

fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(x) => json!(x),
        None => json!(n.to_string()),
    }
}

/// f64 exponent and its relative rounding error (0 when exact).
fn exponent_f64(e: &Rational) -> (f64, f64) {
    let s = e.to_f64().unwrap();
    let exact = e.denom().bits() <= 60
        && (e.denom() & (e.denom() - BigInt::one())).is_zero()
        && e.numer().bits() <= 53;
    (s, if exact { 0.0 } else { ULP / 2.0 })
}

fn pos_pow(p: &PosReal, e: &Rational) -> PosReal {
    match p {
        PosReal::Exp(q) => PosReal::Exp(q * e),
        PosReal::Rational(r) => {
            if r.is_one() {
                return PosReal::Rational(Rational::one());
            }
            if e.is_integer() {
                if let Some(k) = e.to_integer().to_i64() {
                    return PosReal::Rational(rat_powi(r, k));
                }
            }
            if let Some(d) = e.denom().to_u32() {
                if let Some(root) = exact_rat_root(r, d) {
                    if let Some(k) = e.numer().to_i64() {
                        return PosReal::Rational(rat_powi(&root, k));
                    }
                }
            }
            let (s, s_rel) = exponent_f64(e);
            PosReal::Approx(approx_of_rational(r).powf(s, s_rel))
        }
        PosReal::Approx(a) => {
            let (s, s_rel) = exponent_f64(e);
            PosReal::Approx(a.powf(s, s_rel))
        }
    }
}

fn cmp_pos(a: &PosReal, b: &PosReal) -> XOrd {
    use PosReal::*;
    match (a, b) {
        (Rational(x), Rational(y)) => XOrd::from_ord(x.cmp(y)),
        (Exp(x), Exp(y)) => XOrd::from_ord(x.cmp(y)),
        (Exp(q), Rational(r)) => XOrd::from_ord(cmp_exp_rational(q, r)),
        (Rational(r), Exp(q)) => XOrd::from_ord(cmp_exp_rational(q, r).reverse()),
        _ => match a.to_approx().cmp(&b.to_approx()) {
            Some(o) => XOrd::from_ord(o),
            None => XOrd::Indeterminate,
        },
    }
}

impl fmt::Display for XReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XReal::Zero => write!(f, "0"),
            XReal::Infinity => write!(f, "inf"),
            XReal::Finite(PosReal::Rational(q)) => write!(f, "{}", fmt_rational(q)),
            XReal::Finite(PosReal::Exp(q)) => write!(f, "exp({})", fmt_rational(q)),
            XReal::Finite(PosReal::Approx(a)) => {
                let v = a.to_f64();
                if v.is_normal() {
                    write!(f, "~{:e}", v)
                } else {
                    write!(f, "~{}*2^{}", a.m, a.e)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn fin(q: Rational) -> XReal {
        XReal::rational(q)
    }

    #[test]
    fn multiplication_law() {
        assert_eq!(XReal::Zero.mul(&XReal::Infinity), Err(Error::UndefinedProduct));
        assert_eq!(fin(int(2)).mul(&XReal::Infinity).unwrap(), XReal::Infinity);
        assert_eq!(XReal::exp(int(-1)).mul(&XReal::exp(int(-2))).unwrap(), XReal::exp(int(-3)));
        assert_eq!(XReal::exp(int(1)).mul(&XReal::exp(int(-1))).unwrap(), XReal::one());
    }

    #[test]
    fn addition() {
        assert_eq!(fin(rat(1, 3)).add(&fin(rat(2, 3))), XReal::one());
        assert_eq!(XReal::Infinity.add(&fin(int(5))), XReal::Infinity);
        assert_eq!(XReal::Zero.add(&XReal::exp(int(2))), XReal::exp(int(2)));
    }

    #[test]
    fn powers() {
        assert_eq!(XReal::exp(int(-3)).pow(&rat(1, 2)), XReal::exp(rat(-3, 2)));
        assert_eq!(XReal::Zero.pow(&rat(7, 2)), XReal::Zero);
        let r = fin(int(5)).pow(&rat(1, 2));
        match r {
            XReal::Finite(PosReal::Approx(a)) => {
                assert!((a.to_f64() - 5f64.sqrt()).abs() < 1e-15);
                assert!(a.relerr() <= DEFAULT_RELERR, "{:?}", a);
            }
            other => panic!("expected approx, got {:?}", other),
        }
        assert_eq!(fin(rat(4, 9)).pow(&rat(3, 2)), fin(rat(8, 27)));
    }

    #[test]
    fn comparisons() {
        assert_eq!(XReal::one().cmp(&XReal::exp(int(0))), XOrd::Equal);
        assert_eq!(XReal::Zero.cmp(&XReal::Infinity), XOrd::Less);
        assert_eq!(XReal::exp(int(-1)).cmp(&fin(rat(1, 2))), XOrd::Less);
        let a = XReal::approx(1.0, 1e-3);
        assert_eq!(a.cmp(&XReal::approx(1.0005, 1e-3)), XOrd::Indeterminate);
        assert_eq!(a.cmp(&XReal::approx(1.5, 1e-3)), XOrd::Less);
    }

    #[test]
    fn tiny_values_stay_representable() {
        let tiny = fin(BigRational::new(BigInt::one(), BigInt::one() << 60000u32));
        let r = tiny.pow(&rat(1, 200));
        let ln = r.ln();
        assert!((ln - (-60000.0 * std::f64::consts::LN_2 / 200.0)).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip() {
        for x in [XReal::Zero, XReal::Infinity, fin(rat(-3, -7)), XReal::exp(rat(-3, 1)), XReal::approx(2.5, 1e-12)] {
            assert_eq!(XReal::from_json(&x.to_json()).unwrap(), x);
        }
    }
}
