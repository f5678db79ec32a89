//! Factorization over a number field by Trager's norm method.

use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::factor::{factor_q, QPoly};
use crate::poly::Poly;
use crate::scalar::{Field, Rational};

use super::numfield::{NfElem, NumberField};

pub type KPoly = Poly<NfElem>;

/// Lifts a rational polynomial into `K[x]`.
pub fn lift(k: &Arc<NumberField>, p: &QPoly) -> KPoly {
    Poly::new(p.coeffs().iter().map(|c| NfElem::from_poly(k, &QPoly::constant(c.clone()))).collect())
}

/// `sum_k c_k(y) (x0 - s y)^k` as a polynomial in `y`.
fn specialize(g: &KPoly, x0: &Rational, s: i64) -> QPoly {
    let lin = QPoly::new(vec![x0.clone(), Rational::from_i64(-s)]);
    let mut acc = QPoly::zero();
    for c in g.coeffs().iter().rev() {
        acc = &(&acc * &lin) + c.poly();
    }
    acc
}

fn interpolate(xs: &[Rational], ys: &[Rational]) -> QPoly {
    // Newton divided differences
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut p = QPoly::constant(coef[n - 1].clone());
    for i in (0..n - 1).rev() {
        p = &(&p * &QPoly::linear(xs[i].clone())) + &QPoly::constant(coef[i].clone());
    }
    p
}

/// `N(x) = Res_y(m(y), g(x - s y, y))`, computed by evaluation and interpolation.
pub fn shifted_norm(k: &NumberField, g: &KPoly, s: i64) -> QPoly {
    let d = k.degree() * g.deg().max(0) as usize;
    let xs: Vec<Rational> = (0..=d as i64).map(Rational::from_i64).collect();
    let ys: Vec<Rational> = xs.iter().map(|x| k.minpoly().resultant(&specialize(g, x, s))).collect();
    interpolate(&xs, &ys)
}

fn kmonic(g: &KPoly) -> KPoly {
    g.monic()
}

/// Monic irreducible factors over `K` of a squarefree `g`, with multiplicity 1 each.
fn factor_squarefree(k: &Arc<NumberField>, g: &KPoly) -> Result<Vec<KPoly>> {
    if g.deg() <= 1 {
        return Ok(vec![kmonic(g)]);
    }
    for s in 0..40i64 {
        let n = shifted_norm(k, g, s);
        if !n.is_squarefree() {
            continue;
        }
        let (_, fs) = factor_q(&n)?;
        let mut out = Vec::new();
        // x -> x + s*alpha undoes the shift
        let shift = KPoly::new(vec![NfElem::gen(k).scale_i(s), NfElem::one()]);
        for (h, _) in fs {
            let hk = lift(k, &h).compose(&shift);
            let f = g.gcd(&hk);
            if f.deg() > 0 {
                out.push(kmonic(&f));
            }
        }
        return Ok(out);
    }
    Err(Error::UnsupportedShape("no squarefree norm found".into()))
}

/// Factorization of a nonzero `g` over `K` into monic irreducibles with multiplicities.
pub fn factor_over(k: &Arc<NumberField>, g: &KPoly) -> Result<Vec<(KPoly, usize)>> {
    if g.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut out = Vec::new();
    for (h, e) in g.monic().squarefree_decomposition() {
        for f in factor_squarefree(k, &h)? {
            out.push((f, e));
        }
    }
    sort_kfactors(&mut out);
    Ok(out)
}

fn sort_kfactors(v: &mut [(KPoly, usize)]) {
    v.sort_by(|a, b| {
        a.0.deg().cmp(&b.0.deg()).then_with(|| {
            let key = |p: &KPoly| -> Vec<Vec<Rational>> {
                p.coeffs().iter().rev().map(|c| c.poly().coeffs().to_vec()).collect()
            };
            key(&a.0).cmp(&key(&b.0))
        })
    });
}

pub fn is_irreducible_over(k: &Arc<NumberField>, g: &KPoly) -> Result<bool> {
    let f = factor_over(k, g)?;
    Ok(f.len() == 1 && f[0].1 == 1)
}

/// Roots in `K` of a rational polynomial, in canonical factor order.
pub fn roots_in(k: &Arc<NumberField>, p: &QPoly) -> Result<Vec<NfElem>> {
    Ok(factor_over(k, &lift(k, p))?
        .into_iter()
        .filter(|(f, _)| f.deg() == 1)
        .map(|(f, _)| -f.coeff(0))
        .collect())
}

impl NfElem {
    fn scale_i(&self, s: i64) -> NfElem {
        self.clone() * NfElem::from_i64(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use num_traits::Zero;

    fn q(v: &[i64]) -> QPoly {
        QPoly::new(v.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn x2_plus_1_over_gaussian() {
        let k = NumberField::new(&q(&[1, 0, 1]), "i").unwrap();
        let f = factor_over(&k, &lift(&k, &q(&[1, 0, 1]))).unwrap();
        assert_eq!(f.len(), 2);
        let r = roots_in(&k, &q(&[1, 0, 1])).unwrap();
        assert_eq!(r.len(), 2);
        for x in r {
            assert!((x.clone() * x + NfElem::one()).is_zero());
        }
    }

    #[test]
    fn cube_root_field_has_one_cube_root() {
        let k = NumberField::new(&q(&[-2, 0, 0, 1]), "a").unwrap();
        let f = factor_over(&k, &lift(&k, &q(&[-2, 0, 0, 1]))).unwrap();
        let degs: Vec<i64> = f.iter().map(|(g, _)| g.deg()).collect();
        assert_eq!(degs, vec![1, 2]);
    }

    #[test]
    fn x4_plus_1_over_sqrt2() {
        // x^4 + 1 = (x^2 + sqrt2 x + 1)(x^2 - sqrt2 x + 1)
        let k = NumberField::new(&q(&[-2, 0, 1]), "a").unwrap();
        let f = factor_over(&k, &lift(&k, &q(&[1, 0, 0, 0, 1]))).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|(g, e)| g.deg() == 2 && *e == 1));
        let t2m2 = lift(&k, &q(&[-2, 0, 1]));
        assert!(!is_irreducible_over(&k, &t2m2).unwrap());
        assert!(is_irreducible_over(&k, &lift(&k, &q(&[-3, 0, 1]))).unwrap());
    }
}
