//! Axiom harness: `|1| = 1`, `|0| = 0`, the triangle inequality and
//! multiplicativity wherever the product is defined.

use crate::error::{Error, Result};
use crate::fields::{Element, FieldDescriptor};
use crate::xreal::{XOrd, XReal};

use super::Pav;

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    /// `"i"` (units), `"ii"` (triangle), `"iii"` (product) or `"inv"` (`|f| = inf => |1/f| = 0`).
    pub axiom: &'static str,
    pub witness: Vec<String>,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AxiomReport {
    pub samples: usize,
    pub violations: Vec<Violation>,
    /// Triangle checks where approximate bounds overlapped.
    pub warnings: usize,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_pav_axioms(v: &Pav, samples: &[(Element, Element)]) -> Result<AxiomReport> {
    check_axioms_with(v.field(), |f| v.eval(f), samples)
}

/// Runs the axiom checks against an arbitrary evaluator on `field`.
pub fn check_axioms_with(
    field: &FieldDescriptor,
    eval: impl Fn(&Element) -> Result<XReal>,
    samples: &[(Element, Element)],
) -> Result<AxiomReport> {
    let mut rep = AxiomReport { samples: samples.len(), ..Default::default() };
    let fmt = |e: &Element| field.fmt_element(e);
    let one = eval(&field.one())?;
    if one.cmp(&XReal::one()) != XOrd::Equal {
        rep.violations.push(Violation { axiom: "i", witness: vec!["1".into()], values: vec![one.to_string()] });
    }
    let zero = eval(&field.zero())?;
    if !zero.is_zero() {
        rep.violations.push(Violation { axiom: "i", witness: vec!["0".into()], values: vec![zero.to_string()] });
    }
    for (a, b) in samples {
        let (va, vb) = (eval(a)?, eval(b)?);
        let s = a.add(b);
        let vs = eval(&s)?;
        match vs.cmp(&va.add(&vb)) {
            XOrd::Greater => rep.violations.push(Violation {
                axiom: "ii",
                witness: vec![fmt(a), fmt(b)],
                values: vec![va.to_string(), vb.to_string(), vs.to_string()],
            }),
            XOrd::Indeterminate => rep.warnings += 1,
            _ => {}
        }
        match va.mul(&vb) {
            Ok(prod) => {
                let vp = eval(&a.mul(b))?;
                if matches!(vp.cmp(&prod), XOrd::Less | XOrd::Greater) {
                    rep.violations.push(Violation {
                        axiom: "iii",
                        witness: vec![fmt(a), fmt(b)],
                        values: vec![va.to_string(), vb.to_string(), vp.to_string()],
                    });
                }
            }
            Err(Error::UndefinedProduct) => {}
            Err(e) => return Err(e),
        }
        for x in [a, b] {
            if !x.is_zero() && eval(x)?.is_infinite() {
                let vi = eval(&x.inv()?)?;
                if !vi.is_zero() {
                    rep.violations.push(Violation { axiom: "inv", witness: vec![fmt(x)], values: vec![vi.to_string()] });
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::super::sample::Sampler;
    use super::*;
    use crate::fields::{parse_field, parse_place};
    use crate::pav::Scale;
    use crate::scalar::int;

    #[test]
    fn place_value_passes() {
        let k = parse_field("Q(T)").unwrap();
        let v = Pav::ultra(&k, parse_place(&k, "T-2").unwrap(), Scale::Rat(int(1))).unwrap();
        let pairs = Sampler::new(&k, 11).take_pairs(200);
        let r = check_pav_axioms(&v, &pairs).unwrap();
        assert!(r.passed(), "{:?}", r.violations.first());
        assert_eq!(r.samples, 200);
    }

    #[test]
    fn truncated_absolute_value_breaks_products() {
        // min(|x|, 1) is subadditive on Q but not multiplicative
        let q = FieldDescriptor::Rationals;
        let arch = Pav::arch(&q, 0, int(1)).unwrap();
        let bad = |f: &Element| -> Result<XReal> {
            let x = arch.eval(f)?;
            Ok(if x.cmp(&XReal::one()) == XOrd::Greater { XReal::one() } else { x })
        };
        let pairs = Sampler::new(&q, 2).take_pairs(100);
        let r = check_axioms_with(&q, bad, &pairs).unwrap();
        assert!(r.violations.iter().any(|v| v.axiom == "iii"));
        assert!(r.violations.iter().all(|v| v.axiom == "iii"));
    }
}
