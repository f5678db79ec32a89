//! Field descriptors (Q, number fields, rational function fields of depth at
//! most two) and their elements.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::factor::QPoly;
use crate::poly::Poly;
use crate::scalar::{fmt_rational, Field, Rational};

use super::numfield::{fmt_poly, NfElem, NumberField};
use super::ratfunc::RatFunc;

pub type F1 = RatFunc<NfElem>;
pub type F2 = RatFunc<F1>;

/// Deepest supported nesting of function fields.
pub const MAX_DEPTH: usize = 2;

#[derive(Clone, Debug, PartialEq)]
pub enum FieldDescriptor {
    Rationals,
    NumberField(Arc<NumberField>),
    FunctionField { base: Box<FieldDescriptor>, var: String },
}

impl FieldDescriptor {
    pub fn function_field(base: FieldDescriptor, var: &str) -> Result<Self> {
        if base.depth() >= MAX_DEPTH {
            return Err(Error::UnsupportedShape(format!("function field nesting deeper than {}", MAX_DEPTH)));
        }
        if base.names().iter().any(|n| n == var) {
            return Err(Error::SyntaxError { pos: 0, msg: format!("variable name {} already in use", var) });
        }
        Ok(FieldDescriptor::FunctionField { base: Box::new(base), var: var.to_string() })
    }

    pub fn depth(&self) -> usize {
        match self {
            FieldDescriptor::FunctionField { base, .. } => base.depth() + 1,
            _ => 0,
        }
    }

    /// The constant number field (`None` for Q).
    pub fn number_field(&self) -> Option<&Arc<NumberField>> {
        match self {
            FieldDescriptor::Rationals => None,
            FieldDescriptor::NumberField(k) => Some(k),
            FieldDescriptor::FunctionField { base, .. } => base.number_field(),
        }
    }

    /// The field of constants at the bottom of the tower.
    pub fn constants(&self) -> FieldDescriptor {
        match self {
            FieldDescriptor::FunctionField { base, .. } => base.constants(),
            other => other.clone(),
        }
    }

    pub fn base(&self) -> Option<&FieldDescriptor> {
        match self {
            FieldDescriptor::FunctionField { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn var(&self) -> Option<&str> {
        match self {
            FieldDescriptor::FunctionField { var, .. } => Some(var),
            _ => None,
        }
    }

    pub fn is_function_field(&self) -> bool {
        matches!(self, FieldDescriptor::FunctionField { .. })
    }

    /// Identifiers bound in this field (generator and variables).
    pub fn names(&self) -> Vec<String> {
        match self {
            FieldDescriptor::Rationals => vec![],
            FieldDescriptor::NumberField(k) => vec![k.gen_name().to_string()],
            FieldDescriptor::FunctionField { base, var } => {
                let mut v = base.names();
                v.push(var.clone());
                v
            }
        }
    }

    pub fn zero(&self) -> Element {
        Element::zero(self.depth())
    }

    pub fn one(&self) -> Element {
        Element::one(self.depth())
    }

    pub fn rational(&self, q: Rational) -> Element {
        Element::Nf(NfElem::rational(q)).lift_to(self.depth())
    }

    pub fn int(&self, n: i64) -> Element {
        self.rational(Rational::from_i64(n))
    }

    /// Generator of the constant number field, lifted into this field.
    pub fn generator(&self) -> Option<Element> {
        self.number_field().map(|k| Element::Nf(NfElem::gen(k)).lift_to(self.depth()))
    }

    /// The outermost variable as an element.
    pub fn variable(&self) -> Option<Element> {
        match self.depth() {
            1 => Some(Element::F1(F1::var())),
            2 => Some(Element::F2(F2::var())),
            _ => None,
        }
    }

    /// Embeds an element of the base field as a constant.
    pub fn constant(&self, e: &Element) -> Element {
        e.clone().lift_to(self.depth())
    }

    /// Brings an element into the canonical level of this field.
    pub fn coerce(&self, e: &Element) -> Result<Element> {
        if e.level() > self.depth() {
            return Err(Error::FieldMismatch(format!("element of depth {} in a field of depth {}", e.level(), self.depth())));
        }
        Ok(e.clone().lift_to(self.depth()))
    }

    pub fn fmt_element(&self, e: &Element) -> String {
        let e = e.clone().lift_to(self.depth());
        let gen = self.number_field().map_or("a".to_string(), |k| k.gen_name().to_string());
        match (&e, self) {
            (Element::Nf(x), _) => x.fmt_with(&gen),
            (Element::F1(f), FieldDescriptor::FunctionField { var, .. }) => fmt_ratfunc(f, var, &|c| c.fmt_with(&gen)),
            (Element::F2(f), FieldDescriptor::FunctionField { base, var }) => {
                let inner = base.var().unwrap_or("S").to_string();
                fmt_ratfunc(f, var, &|c: &F1| fmt_ratfunc(c, &inner, &|x| x.fmt_with(&gen)))
            }
            _ => unreachable!("element level matches field depth"),
        }
    }
}

fn fmt_poly_generic<F: Field>(p: &Poly<F>, v: &str, coef: &dyn Fn(&F) -> String) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => v.to_string(),
            _ => format!("{}^{}", v, k),
        };
        let s = coef(c);
        let (neg, body) = match s.strip_prefix('-') {
            Some(b) if !b.contains(' ') => (true, b.to_string()),
            _ => (false, s.clone()),
        };
        let sign = if neg { "-" } else { "" };
        parts.push(if k == 0 {
            if body.contains(' ') {
                format!("({})", body)
            } else {
                format!("{}{}", sign, body)
            }
        } else if body == "1" {
            format!("{}{}", sign, mono)
        } else if body.contains(' ') || body.contains('/') {
            format!("{}({})*{}", sign, body, mono)
        } else {
            format!("{}{}*{}", sign, body, mono)
        });
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(p);
        }
    }
    out
}

fn fmt_ratfunc<F: Field>(f: &RatFunc<F>, v: &str, coef: &dyn Fn(&F) -> String) -> String {
    let n = fmt_poly_generic(f.num(), v, coef);
    if f.den().is_constant() {
        return n;
    }
    let d = fmt_poly_generic(f.den(), v, coef);
    let wrap = |s: String, p: &Poly<F>| if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 { format!("({})", s) } else { s };
    format!("{}/{}", wrap(n, f.num()), wrap(d, f.den()))
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::NumberField(k) => {
                write!(f, "Q[{}]/({})", k.gen_name(), fmt_poly(k.minpoly(), k.gen_name()))
            }
            FieldDescriptor::FunctionField { base, var } => write!(f, "{}({})", base, var),
        }
    }
}

/// Element at a tower level: 0 = Q or number field, 1 = `F(T)`, 2 = `F(S)(T)`.
#[derive(Clone, Debug)]
pub enum Element {
    Nf(NfElem),
    F1(F1),
    F2(F2),
}

impl PartialEq for Element {
    fn eq(&self, o: &Self) -> bool {
        let l = self.level().max(o.level());
        match (self.clone().lift_to(l), o.clone().lift_to(l)) {
            (Element::Nf(a), Element::Nf(b)) => a == b,
            (Element::F1(a), Element::F1(b)) => a == b,
            (Element::F2(a), Element::F2(b)) => a == b,
            _ => false,
        }
    }
}

impl Element {
    pub fn zero(level: usize) -> Self {
        Element::Nf(NfElem::zero()).lift_to(level)
    }

    pub fn one(level: usize) -> Self {
        Element::Nf(NfElem::one()).lift_to(level)
    }

    pub fn level(&self) -> usize {
        match self {
            Element::Nf(_) => 0,
            Element::F1(_) => 1,
            Element::F2(_) => 2,
        }
    }

    pub fn lift_to(self, level: usize) -> Self {
        let mut e = self;
        while e.level() < level {
            e = match e {
                Element::Nf(x) => Element::F1(F1::constant(x)),
                Element::F1(x) => Element::F2(F2::constant(x)),
                Element::F2(_) => unreachable!(),
            };
        }
        e
    }

    /// Drops constant levels as far as possible.
    pub fn lower(&self) -> Element {
        match self {
            Element::F2(f) => match f.as_constant() {
                Some(c) => Element::F1(c).lower(),
                None => self.clone(),
            },
            Element::F1(f) => match f.as_constant() {
                Some(c) => Element::Nf(c),
                None => self.clone(),
            },
            Element::Nf(_) => self.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Element::Nf(x) => x.is_zero(),
            Element::F1(x) => x.is_zero(),
            Element::F2(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Element::one(0)
    }

    pub fn as_nf(&self) -> Option<NfElem> {
        match self.lower() {
            Element::Nf(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.as_nf().and_then(|x| x.as_rational())
    }

    pub fn as_f1(&self) -> Option<F1> {
        match self.clone().lower() {
            Element::Nf(x) => Some(F1::constant(x)),
            Element::F1(x) => Some(x),
            Element::F2(_) => None,
        }
    }

    pub fn as_f2(&self) -> F2 {
        match self.clone().lift_to(2) {
            Element::F2(x) => x,
            _ => unreachable!(),
        }
    }

    fn binop(
        &self,
        o: &Element,
        f0: impl Fn(NfElem, NfElem) -> NfElem,
        f1: impl Fn(F1, F1) -> F1,
        f2: impl Fn(F2, F2) -> F2,
    ) -> Element {
        let l = self.level().max(o.level());
        match (self.clone().lift_to(l), o.clone().lift_to(l)) {
            (Element::Nf(a), Element::Nf(b)) => Element::Nf(f0(a, b)),
            (Element::F1(a), Element::F1(b)) => Element::F1(f1(a, b)),
            (Element::F2(a), Element::F2(b)) => Element::F2(f2(a, b)),
            _ => unreachable!(),
        }
    }

    pub fn add(&self, o: &Element) -> Element {
        self.binop(o, |a, b| a + b, |a, b| a + b, |a, b| a + b)
    }

    pub fn sub(&self, o: &Element) -> Element {
        self.binop(o, |a, b| a - b, |a, b| a - b, |a, b| a - b)
    }

    pub fn mul(&self, o: &Element) -> Element {
        self.binop(o, |a, b| a * b, |a, b| a * b, |a, b| a * b)
    }

    pub fn neg(&self) -> Element {
        match self {
            Element::Nf(x) => Element::Nf(-x.clone()),
            Element::F1(x) => Element::F1(-x.clone()),
            Element::F2(x) => Element::F2(-x.clone()),
        }
    }

    pub fn inv(&self) -> Result<Element> {
        let r = match self {
            Element::Nf(x) => x.inv().map(Element::Nf),
            Element::F1(x) => x.inv().map(Element::F1),
            Element::F2(x) => x.inv().map(Element::F2),
        };
        r.ok_or(Error::DivisionByZero)
    }

    pub fn div(&self, o: &Element) -> Result<Element> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Element> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut acc = Element::one(self.level());
        let mut b = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Ok(acc)
    }
}

macro_rules! element_op {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr for Element {
            type Output = Element;
            fn $m(self, o: Element) -> Element {
                Element::$m(&self, &o)
            }
        }
    };
}

element_op!(Add, add);
element_op!(Sub, sub);
element_op!(Mul, mul);

impl std::ops::Div for Element {
    type Output = Element;
    fn div(self, o: Element) -> Element {
        Element::div(&self, &o).expect("division by zero")
    }
}

impl std::ops::Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element::neg(&self)
    }
}

impl num_traits::Zero for Element {
    fn zero() -> Self {
        Element::zero(0)
    }
    fn is_zero(&self) -> bool {
        Element::is_zero(self)
    }
}

impl num_traits::One for Element {
    fn one() -> Self {
        Element::one(0)
    }
}

/// Levels mix freely: operands are lifted to the deeper level.
impl crate::scalar::Field for Element {
    fn inv(&self) -> Option<Self> {
        Element::inv(self).ok()
    }
    fn from_i64(n: i64) -> Self {
        Element::Nf(NfElem::rational(Rational::from_integer(n.into())))
    }
    fn from_rational(q: &Rational) -> Self {
        Element::Nf(NfElem::rational(q.clone()))
    }
}

/// Convenience: `Q`-polynomial in the generator as a number field element.
pub fn nf_elem(k: &Arc<NumberField>, p: &QPoly) -> Element {
    Element::Nf(NfElem::from_poly(k, p))
}

/// Human-readable rational.
pub fn fmt_q(q: &Rational) -> String {
    fmt_rational(q)
}
