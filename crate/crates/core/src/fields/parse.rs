//! Parsers for field descriptors and element expressions.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := ('-')? base ('^' integer)?
//! base   := integer | identifier | '(' expr ')'
//! ```
//!
//! A rational `p/q` is the quotient of two integer literals.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::factor::QPoly;
use crate::scalar::{exact_root, Rational};

use super::element::{Element, FieldDescriptor, F1, F2};
use super::numfield::{NfElem, NumberField};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let cs: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[s..i].iter().collect();
            out.push((s, Tok::Int(t.parse().unwrap())));
        } else if c.is_alphabetic() || c == '_' {
            let s = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push((s, Tok::Ident(cs[s..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::SyntaxError { pos: i, msg: format!("unexpected character '{}'", c) });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
    field: &'a FieldDescriptor,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::SyntaxError { pos: self.pos(), msg: msg.to_string() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Element> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Element> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.factor()?);
            } else if self.eat('/') {
                let d = self.factor()?;
                acc = acc.div(&d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Element> {
        if self.eat('-') {
            return Ok(self.factor()?.neg());
        }
        let b = self.base()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let k = match self.peek() {
                Some(Tok::Int(n)) => n.to_i64(),
                _ => return self.err("expected integer exponent"),
            };
            let Some(k) = k.filter(|k| *k <= 10_000) else {
                return self.err("exponent too large");
            };
            self.i += 1;
            return b.pow(if neg { -k } else { k });
        }
        Ok(b)
    }

    fn base(&mut self) -> Result<Element> {
        let level = self.field.depth();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.i += 1;
                Ok(self.field.rational(Rational::from_integer(n)))
            }
            Some(Tok::Op('(')) => {
                self.i += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                let e = resolve(self.field, &name).map(|e| e.lift_to(level));
                match e {
                    Some(e) => {
                        self.i += 1;
                        Ok(e)
                    }
                    None => self.err(&format!("unknown identifier '{}'", name)),
                }
            }
            Some(Tok::Op(c)) => self.err(&format!("unexpected '{}'", c)),
            None => self.err("unexpected end of input"),
        }
    }
}

fn resolve(field: &FieldDescriptor, name: &str) -> Option<Element> {
    match field {
        FieldDescriptor::Rationals => None,
        FieldDescriptor::NumberField(k) => k.names_generator(name).then(|| Element::Nf(NfElem::gen(k))),
        FieldDescriptor::FunctionField { base, var } => {
            if var == name {
                return Some(match base.depth() {
                    0 => Element::F1(F1::var()),
                    _ => Element::F2(F2::var()),
                });
            }
            resolve(base, name)
        }
    }
}

/// Parses an element expression in `field`.
pub fn parse_element(src: &str, field: &FieldDescriptor) -> Result<Element> {
    let toks = lex(src)?;
    let mut p = Parser { toks, i: 0, end: src.chars().count(), field };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e.lift_to(field.depth()))
}

/// Parses a rational polynomial in the single variable `var`.
pub fn parse_qpoly(src: &str, var: &str) -> Result<QPoly> {
    let f = FieldDescriptor::function_field(FieldDescriptor::Rationals, var)?;
    let e = parse_element(src, &f)?;
    match e.as_f1() {
        Some(r) if r.is_poly() => {
            let inv = r.den().coeff(0).as_rational().unwrap().recip();
            Ok(r.num().map(|c| c.as_rational().unwrap() * &inv))
        }
        _ => Err(Error::SyntaxError { pos: 0, msg: "expected a polynomial".into() }),
    }
}

fn bad(pos: usize, msg: &str) -> Error {
    Error::SyntaxError { pos, msg: msg.to_string() }
}

/// Parses a field string: `Q`, `Q(i)`, `Q(sqrtN)`, `Q(cbrtN)`, `Q[a]/(poly)`,
/// followed by up to two `(Var)` function-field adjunctions, e.g. `Q(i)(T)`, `Q(S)(T)`.
pub fn parse_field(src: &str) -> Result<FieldDescriptor> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut rest = s.strip_prefix('Q').ok_or_else(|| bad(0, "field must start with Q"))?;
    let mut field = FieldDescriptor::Rationals;
    let mut pos = 1;
    if let Some(r) = rest.strip_prefix('[') {
        let close = r.find(']').ok_or_else(|| bad(pos, "expected ']'"))?;
        let gen = &r[..close];
        if gen.is_empty() || !gen.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(bad(pos + 1, "bad generator name"));
        }
        let r2 = r[close + 1..].strip_prefix("/(").ok_or_else(|| bad(pos + close + 2, "expected '/('"))?;
        let end = matching_paren(r2).ok_or_else(|| bad(pos + close + 4, "unbalanced parentheses"))?;
        let m = parse_qpoly(&r2[..end], gen)?;
        field = FieldDescriptor::NumberField(NumberField::new(&m, gen)?);
        let used = 1 + close + 1 + 2 + end + 1;
        rest = &rest[used..];
        pos += used;
    }
    let mut vars = 0;
    while let Some(r) = rest.strip_prefix('(') {
        let end = r.find(')').ok_or_else(|| bad(pos, "expected ')'"))?;
        let inner = &r[..end];
        if field == FieldDescriptor::Rationals && vars == 0 {
            if let Some(k) = named_number_field(inner, pos)? {
                field = FieldDescriptor::NumberField(k);
                rest = &r[end + 1..];
                pos += end + 2;
                continue;
            }
        }
        if inner.is_empty() || !inner.chars().all(|c| c.is_alphanumeric() || c == '_') || !inner.starts_with(char::is_alphabetic) {
            return Err(bad(pos + 1, "bad variable name"));
        }
        field = FieldDescriptor::function_field(field, inner)?;
        vars += 1;
        rest = &r[end + 1..];
        pos += end + 2;
    }
    if !rest.is_empty() {
        return Err(bad(pos, "trailing characters in field"));
    }
    Ok(field)
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 1i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

fn named_number_field(inner: &str, pos: usize) -> Result<Option<std::sync::Arc<NumberField>>> {
    let q = |v: &[i64]| QPoly::new(v.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect());
    if inner == "i" {
        return Ok(Some(NumberField::new(&q(&[1, 0, 1]), "i")?));
    }
    for (prefix, k) in [("sqrt", 2u32), ("cbrt", 3u32)] {
        if let Some(n) = inner.strip_prefix(prefix) {
            let n: BigInt = n.parse().map_err(|_| bad(pos + 1 + prefix.len(), "expected integer radicand"))?;
            let perfect = if n.is_negative() && k == 2 { false } else { exact_root(&n.abs(), k).is_some() };
            if perfect {
                return Err(Error::Reducible(format!("{}{} is rational", prefix, n)));
            }
            let mut c = vec![Rational::from_integer(-n.clone())];
            c.extend(std::iter::repeat(Rational::from_integer(BigInt::from(0))).take(k as usize - 1));
            c.push(Rational::from_integer(BigInt::from(1)));
            return Ok(Some(NumberField::with_alias(&QPoly::new(c), "a", inner)?));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn parse_rational_function() {
        let k = parse_field("Q(T)").unwrap();
        let e = parse_element("(T^2+1)/(T-2)", &k).unwrap();
        let f = e.as_f1().unwrap();
        assert_eq!(f.num().deg(), 2);
        assert_eq!(f.den().coeff(0).as_rational(), Some(int(-2)));
        assert_eq!(k.fmt_element(&e), "(T^2 + 1)/(T - 2)");
    }

    #[test]
    fn reduces_modulo_minpoly() {
        let k = parse_field("Q[a]/(a^2-2)").unwrap();
        assert!(parse_element("a^2 - 2", &k).unwrap().is_zero());
        let k2 = parse_field("Q(sqrt2)").unwrap();
        assert!(parse_element("sqrt2^2 - 2", &k2).unwrap().is_zero());
    }

    #[test]
    fn errors() {
        let k = parse_field("Q").unwrap();
        assert_eq!(parse_element("1/0", &k), Err(Error::DivisionByZero));
        assert!(matches!(parse_element("1 +", &k), Err(Error::SyntaxError { pos: 3, .. })));
        assert!(matches!(parse_element("x", &k), Err(Error::SyntaxError { pos: 0, .. })));
        assert!(matches!(parse_field("Q(sqrt4)"), Err(Error::Reducible(_))));
        assert!(matches!(parse_field("Q(A)(B)(C)"), Err(Error::UnsupportedShape(_))));
    }

    #[test]
    fn towers() {
        let k = parse_field("Q(i)(T)").unwrap();
        assert_eq!(k.depth(), 1);
        let e = parse_element("(i*T + 1)^2", &k).unwrap();
        assert_eq!(k.fmt_element(&e), "-T^2 + 2*i*T + 1");
        let k2 = parse_field("Q(S)(T)").unwrap();
        let e2 = parse_element("T/S - 1/S", &k2).unwrap();
        assert_eq!(k2.fmt_element(&e2), "(1/S)*T - 1/S");
        assert_eq!(format!("{}", parse_field("Q(cbrt2)(T)").unwrap()), "Q[a]/(a^3 - 2)(T)");
    }
}
