//! Power sums `lambda_N = sum_j alpha_j^N` of the roots of a monic polynomial,
//! and the estimate `limsup |lambda_N|^(1/N)` of the largest root size.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::factor::{factor_q, QPoly};
use crate::fields::{Element, FieldDescriptor, NumberField};
use crate::pav::Pav;
use crate::scalar::Rational;
use crate::xreal::XReal;

use super::{extensions_over, ExtensionProblem, MAX_EXT_DEGREE};

#[derive(Clone, Debug, PartialEq)]
pub struct PowerSumSequence {
    /// Monic polynomial, ascending coefficients.
    pub coeffs: Vec<Element>,
    /// `lambda_1 .. lambda_N`.
    pub sums: Vec<Element>,
}

impl PowerSumSequence {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `lambda_N` for `N >= 1`.
    pub fn get(&self, n: usize) -> &Element {
        &self.sums[n - 1]
    }

    /// Re-checks `lambda_N = sum_{k=N-d}^{N-1} (-1)^(N-1+k) e_(N-k) lambda_k` for `N > d`,
    /// with `e_j` the elementary symmetric functions of the roots.
    pub fn verify_recurrence(&self) -> bool {
        let d = self.degree();
        let e = |j: usize| {
            let c = &self.coeffs[d - j];
            if j % 2 == 0 {
                c.clone()
            } else {
                c.neg()
            }
        };
        (d + 1..=self.sums.len()).all(|n| {
            let mut acc = self.coeffs[0].mul(&Element::zero(0));
            for k in n - d..n {
                let t = e(n - k).mul(self.get(k));
                acc = if (n - 1 + k) % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            acc == *self.get(n)
        })
    }
}

/// `lambda_1 .. lambda_count` by Newton's identities.
pub fn newton_power_sums(coeffs: &[Element], count: usize) -> Result<PowerSumSequence> {
    let d = coeffs.len().checked_sub(1).filter(|&d| d >= 1).ok_or_else(|| Error::UnsupportedShape("degree must be at least 1".into()))?;
    if !coeffs[d].is_one() {
        return Err(Error::UnsupportedShape("polynomial must be monic".into()));
    }
    // c(j) is the coefficient of x^(d-j)
    let c = |j: usize| &coeffs[d - j];
    let mut p: Vec<Element> = Vec::with_capacity(count);
    for n in 1..=count {
        let mut acc = Element::zero(0);
        for j in 1..=d.min(n - 1) {
            acc = acc.sub(&c(j).mul(&p[n - j - 1]));
        }
        if n <= d {
            acc = acc.sub(&c(n).mul(&Element::Nf(crate::fields::NfElem::rational(Rational::from_integer(BigInt::from(n))))));
        }
        p.push(acc);
    }
    Ok(PowerSumSequence { coeffs: coeffs.to_vec(), sums: p })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimsupReport {
    /// `sup |lambda_N|^(1/N)` over the window, skipping `lambda_N = 0`.
    pub estimate: XReal,
    pub window: (usize, usize),
    /// `max_j |alpha_j|`, when the extensions of the base are computable.
    pub exact: Option<XReal>,
    pub gap: Option<f64>,
}

/// Window policy: `N` in `[n_max/2, n_max]`.
pub fn limsup_max_estimate(coeffs: &[Element], base: &Pav, n_max: usize) -> Result<LimsupReport> {
    if n_max < 10 {
        return Err(Error::OutOfRange("N_max must be at least 10".into()));
    }
    let seq = newton_power_sums(coeffs, n_max)?;
    let lo = n_max / 2;
    let mut est: Option<XReal> = None;
    for n in lo..=n_max {
        let l = seq.get(n);
        if l.is_zero() {
            continue;
        }
        let v = base.eval(l)?.powq(&Rational::new(BigInt::from(1), BigInt::from(n)));
        est = Some(match est {
            None => v,
            Some(e) => e.max(&v),
        });
    }
    let estimate = est.unwrap_or(XReal::Zero);
    let exact = exact_max(coeffs, base).ok();
    let gap = exact.as_ref().map(|x| (estimate.to_f64() - x.to_f64()).abs());
    Ok(LimsupReport { estimate, window: (lo, n_max), exact, gap })
}

/// `max_{w | v} |alpha|_w` over the irreducible factors, via [`extensions_over`].
fn exact_max(coeffs: &[Element], base: &Pav) -> Result<XReal> {
    let q: Option<Vec<Rational>> = coeffs.iter().map(|c| c.as_rational()).collect();
    let q = QPoly::new(q.ok_or_else(|| Error::UnsupportedShape("non-rational coefficients".into()))?);
    let field = base.field();
    let mut best = XReal::Zero;
    for (g, _) in factor_q(&q)?.1 {
        let d = g.deg() as usize;
        let v = if d == 1 {
            let root = -g.coeff(0) / g.coeff(1);
            base.eval(&field.rational(root))?
        } else {
            if d > MAX_EXT_DEGREE {
                return Err(Error::UnsupportedShape("factor above the degree cap".into()));
            }
            let k = NumberField::cached(&g, "a")?;
            let l = match field {
                FieldDescriptor::Rationals => FieldDescriptor::NumberField(k.clone()),
                FieldDescriptor::FunctionField { var, .. } => FieldDescriptor::function_field(FieldDescriptor::NumberField(k.clone()), var)?,
                _ => return Err(Error::UnsupportedShape("base must be Q or Q(T)".into())),
            };
            let alpha = l.generator().unwrap();
            let mut m = XReal::Zero;
            for e in extensions_over(&ExtensionProblem::new(base.clone(), l)?)? {
                m = m.max(&e.pav.eval(&alpha)?);
            }
            m
        };
        best = best.max(&v);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::place::Place;
    use crate::pav::Scale;
    use crate::scalar::{int, rat};
    use crate::xreal::XOrd;

    fn poly(v: &[i64]) -> Vec<Element> {
        let q = FieldDescriptor::Rationals;
        v.iter().map(|&x| q.int(x)).collect()
    }

    fn ints(s: &PowerSumSequence) -> Vec<Rational> {
        s.sums.iter().map(|e| e.as_rational().unwrap()).collect()
    }

    #[test]
    fn power_sum_examples() {
        let s = newton_power_sums(&poly(&[-1, -2, 1]), 3).unwrap();
        assert_eq!(ints(&s), vec![int(2), int(6), int(14)]);
        let s = newton_power_sums(&poly(&[1, 0, 1]), 4).unwrap();
        assert_eq!(ints(&s), vec![int(0), int(-2), int(0), int(2)]);
        let s = newton_power_sums(&poly(&[-1, 1]), 6).unwrap();
        assert!(ints(&s).iter().all(|x| *x == int(1)));
        let s = newton_power_sums(&poly(&[3, -1, 4, 1, 1]), 30).unwrap();
        assert!(s.verify_recurrence());
    }

    #[test]
    fn limsup_examples() {
        let q = FieldDescriptor::Rationals;
        let arch = Pav::arch(&q, 0, int(1)).unwrap();
        let r = limsup_max_estimate(&poly(&[-1, -2, 1]), &arch, 50).unwrap();
        assert!((r.estimate.to_f64() - (1.0 + 2f64.sqrt())).abs() < 1e-9);
        assert!(r.gap.unwrap() < 1e-9);

        let p3 = Pav::ultra(&q, Place::Prime(3), Scale::log(3)).unwrap();
        let r = limsup_max_estimate(&poly(&[-3, 1]), &p3, 20).unwrap();
        assert_eq!(r.estimate, XReal::rational(rat(1, 3)));
        assert_eq!(r.exact, Some(XReal::rational(rat(1, 3))));

        let r = limsup_max_estimate(&poly(&[1, 0, 1]), &arch, 50).unwrap();
        assert_eq!(r.estimate.cmp(&XReal::rational(int(1))), XOrd::Greater);
        assert!(r.estimate.to_f64() <= 2f64.powf(1.0 / 26.0) + 1e-12);
        assert!((r.exact.unwrap().to_f64() - 1.0).abs() < 1e-12);
    }
}
