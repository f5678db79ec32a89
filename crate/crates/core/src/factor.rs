//! Factorization of polynomials over Q (Zassenhaus with Hensel lifting).

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::modp::{self, Fp};
use crate::poly::Poly;
use crate::scalar::{lcm_denoms, Rational};

pub type QPoly = Poly<Rational>;

/// Largest degree accepted by the factorizer.
pub const MAX_DEGREE: usize = 16;

type ZPoly = Vec<BigInt>;

fn ztrim(mut a: ZPoly) -> ZPoly {
    while a.last().map_or(false, |x| x.is_zero()) {
        a.pop();
    }
    a
}

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    ztrim(c)
}

fn zmod(a: &ZPoly, m: &BigInt) -> ZPoly {
    ztrim(a.iter().map(|x| x.mod_floor(m)).collect())
}

fn zsym(a: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    ztrim(
        a.iter()
            .map(|x| {
                let r = x.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Exact division by a monic integer polynomial.
fn zdiv_monic(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let n = b.len() - 1;
    if a.len() < b.len() {
        return if a.is_empty() { Some(Vec::new()) } else { None };
    }
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); a.len() - n];
    for k in (0..q.len()).rev() {
        let t = r[k + n].clone();
        if !t.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[k + j] -= &t * bj;
            }
        }
        q[k] = t;
    }
    if r.iter().all(|x| x.is_zero()) {
        Some(ztrim(q))
    } else {
        None
    }
}

fn to_fp(a: &ZPoly, p: u64) -> Fp {
    let pb = BigInt::from(p);
    modp::trim(a.iter().map(|x| x.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn from_fp(a: &Fp) -> ZPoly {
    a.iter().map(|&x| BigInt::from(x)).collect()
}

/// Lifts `f = g*h mod p` (g, h monic, coprime mod p) to modulus `p^k`.
fn hensel_pair(f: &ZPoly, g: &Fp, h: &Fp, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (_, s, t) = modp::xgcd(g, h, p);
    let pb = BigInt::from(p);
    let mut gz = from_fp(g);
    let mut hz = from_fp(h);
    let mut pk = pb.clone();
    let target = num_traits::pow(pb.clone(), k as usize);
    for _ in 1..k {
        let diff: ZPoly = {
            let gh = zmul(&gz, &hz);
            let n = f.len().max(gh.len());
            (0..n)
                .map(|i| {
                    f.get(i).cloned().unwrap_or_default() - gh.get(i).cloned().unwrap_or_default()
                })
                .collect()
        };
        let e: ZPoly = diff.iter().map(|x| x.mod_floor(&target) / &pk).collect();
        let e = to_fp(&e, p);
        let a = modp::rem(&modp::mul(&t, &e, p), g, p);
        let b = modp::rem(&modp::mul(&s, &e, p), h, p);
        for (i, x) in a.iter().enumerate() {
            gz[i] += &pk * BigInt::from(*x);
        }
        for (i, x) in b.iter().enumerate() {
            hz[i] += &pk * BigInt::from(*x);
        }
        pk *= &pb;
        gz = zmod(&gz, &target);
        hz = zmod(&hz, &target);
    }
    (gz, hz)
}

fn hensel_all(f: &ZPoly, fs: &[Fp], p: u64, k: u32) -> Vec<ZPoly> {
    if fs.len() == 1 {
        let m = num_traits::pow(BigInt::from(p), k as usize);
        return vec![zmod(f, &m)];
    }
    let g = fs[0].clone();
    let h = fs[1..].iter().fold(vec![1u64], |acc, x| modp::mul(&acc, x, p));
    let (gz, hz) = hensel_pair(f, &g, &h, p, k);
    let mut out = vec![gz];
    out.extend(hensel_all(&hz, &fs[1..], p, k));
    out
}

fn norm_bound(f: &ZPoly) -> BigInt {
    let n = f.len() - 1;
    let s: BigInt = f.iter().map(|x| x.abs()).sum();
    (s + 1) << n
}

fn subsets_of(n: usize, k: usize) -> Vec<Vec<usize>> {
    crate::linalg::subsets(n, k)
}

/// Factors a squarefree monic integer polynomial into monic irreducibles.
fn zassenhaus(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    let mut p = 3u64;
    while tried < 5 {
        if crate::scalar::is_prime_u64(p) {
            let fp = to_fp(f, p);
            if modp::deg(&fp) == n as i64 {
                let d = modp::derivative(&fp, p);
                if modp::deg(&modp::gcd(&fp, &d, p)) == 0 {
                    let fs: Vec<Fp> = modp::factor(&fp, p).into_iter().map(|(g, _)| g).collect();
                    if best.as_ref().map_or(true, |(_, b)| fs.len() < b.len()) {
                        best = Some((p, fs));
                    }
                    tried += 1;
                }
            }
        }
        p += 2;
    }
    let (p, fs) = best.unwrap();
    if fs.len() == 1 {
        return vec![f.clone()];
    }
    let bound = norm_bound(f) * 2;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut m = pb.clone();
    while m <= bound {
        m *= &pb;
        k += 1;
    }
    let lifted = hensel_all(f, &fs, p, k);
    let mut remaining: Vec<ZPoly> = lifted;
    let mut g = f.clone();
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= remaining.len() {
        let mut found = false;
        for sub in subsets_of(remaining.len(), s) {
            let cand = sub.iter().fold(vec![BigInt::one()], |acc, &i| zmod(&zmul(&acc, &remaining[i]), &m));
            let cand = zsym(&cand, &m);
            if let Some(q) = zdiv_monic(&g, &cand) {
                out.push(cand);
                g = q;
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !sub.contains(i))
                    .map(|(_, x)| x)
                    .collect();
                found = true;
                break;
            }
        }
        if !found {
            s += 1;
        }
    }
    if g.len() > 1 {
        out.push(g);
    }
    out
}

/// Factorization of a nonzero rational polynomial:
/// `(lc, [(monic irreducible, multiplicity)])`, factors sorted by degree then coefficients.
pub fn factor_q(f: &QPoly) -> Result<(Rational, Vec<(QPoly, usize)>)> {
    let Some(n) = f.degree() else {
        return Err(Error::DivisionByZero);
    };
    if n > MAX_DEGREE {
        return Err(Error::UnsupportedShape(format!("degree {} exceeds factorization cap {}", n, MAX_DEGREE)));
    }
    let lc = f.lc();
    let mut out = Vec::new();
    for (g, e) in f.squarefree_decomposition() {
        for h in factor_squarefree_monic(&g) {
            out.push((h, e));
        }
    }
    sort_factors(&mut out);
    Ok((lc, out))
}

pub(crate) fn sort_factors(v: &mut [(QPoly, usize)]) {
    v.sort_by(|a, b| {
        a.0.deg().cmp(&b.0.deg()).then_with(|| {
            let ka: Vec<_> = a.0.coeffs().iter().rev().cloned().collect();
            let kb: Vec<_> = b.0.coeffs().iter().rev().cloned().collect();
            ka.cmp(&kb)
        })
    });
}

/// Monic irreducible factors of a squarefree monic rational polynomial.
pub fn factor_squarefree_monic(g: &QPoly) -> Vec<QPoly> {
    let n = g.degree().unwrap_or(0);
    if n <= 1 {
        return vec![g.clone()];
    }
    // x -> x / D makes the polynomial integral and monic
    let d = lcm_denoms(g.coeffs());
    let mut z: ZPoly = Vec::with_capacity(n + 1);
    for (i, c) in g.coeffs().iter().enumerate() {
        let scaled = c * BigRational::from_integer(num_traits::pow(d.clone(), n - i));
        debug_assert!(scaled.is_integer());
        z.push(scaled.to_integer());
    }
    let dq = BigRational::from_integer(d);
    zassenhaus(&z)
        .into_iter()
        .map(|h| {
            let k = h.len() - 1;
            let c: Vec<Rational> = h
                .iter()
                .enumerate()
                .map(|(i, x)| BigRational::from_integer(x.clone()) / num_traits::pow(dq.clone(), k - i))
                .collect();
            Poly::new(c)
        })
        .collect()
}

pub fn is_irreducible_q(f: &QPoly) -> Result<bool> {
    let (_, fs) = factor_q(f)?;
    Ok(fs.len() == 1 && fs[0].1 == 1)
}

/// Integer polynomial with positive content removed, sign normalized.
pub fn primitive_integer(f: &QPoly) -> Vec<BigInt> {
    let d = lcm_denoms(f.coeffs());
    let v: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(d.clone())).to_integer())
        .collect();
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v;
    }
    let sgn = if v.last().map_or(false, |x| x.sign() == Sign::Minus) { -g } else { g };
    v.into_iter().map(|x| x / &sgn).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn q(v: &[i64]) -> QPoly {
        Poly::new(v.iter().map(|&x| int(x)).collect())
    }

    fn product(fs: &[(QPoly, usize)]) -> QPoly {
        fs.iter().fold(Poly::one(), |acc, (g, e)| &acc * &g.pow(*e))
    }

    #[test]
    fn swinnerton_dyer_like() {
        // x^4 - 10x^2 + 1 is irreducible but splits mod every prime
        assert!(is_irreducible_q(&q(&[1, 0, -10, 0, 1])).unwrap());
    }

    #[test]
    fn products_factor_back() {
        let f = &(&q(&[-2, 0, 1]) * &q(&[1, 1]).pow(2)) * &q(&[5, 0, 0, 1]);
        let (lc, fs) = factor_q(&f.scale(&rat(3, 2))).unwrap();
        assert_eq!(lc, rat(3, 2));
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&fs), f);
    }

    #[test]
    fn rational_coefficients() {
        let f = &Poly::new(vec![rat(-1, 4), int(0), int(1)]) * &Poly::new(vec![rat(1, 3), int(1)]);
        let (_, fs) = factor_q(&f).unwrap();
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&fs), f);
    }

    #[test]
    fn cyclotomic_12() {
        let f = q(&[-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        let (_, fs) = factor_q(&f).unwrap();
        assert_eq!(fs.len(), 6);
        assert_eq!(product(&fs), f);
    }

    #[test]
    fn degree_cap() {
        let f = Poly::monomial(int(1), 17);
        assert!(matches!(factor_q(&f), Err(Error::UnsupportedShape(_))));
    }
}
