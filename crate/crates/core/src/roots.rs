//! Root isolation for squarefree rational polynomials and certified
//! evaluation of polynomials at isolated roots.
//!
//! Real roots are isolated with Sturm chains. Non-real roots are located by
//! Aberth iteration in floating point, then certified in exact Gaussian
//! rational arithmetic: a disc `D(z, n|p(z)/p'(z)|)` always contains a root,
//! and pairwise disjoint discs in the upper half plane, one per expected
//! non-real pair, pin each root down uniquely.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bounds::floor_dyadic;
use crate::error::{Error, Result};
use crate::factor::QPoly;
use crate::poly::sturm_variations;
use crate::scalar::Rational;

/// Gaussian rational.
#[derive(Clone, Debug, PartialEq)]
pub struct CQ {
    pub re: Rational,
    pub im: Rational,
}

impl CQ {
    pub fn new(re: Rational, im: Rational) -> Self {
        CQ { re, im }
    }

    pub fn real(re: Rational) -> Self {
        CQ { re, im: Rational::zero() }
    }

    pub fn zero() -> Self {
        CQ::real(Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &CQ) -> CQ {
        CQ::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &CQ) -> CQ {
        CQ::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &CQ) -> CQ {
        CQ::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }

    pub fn scale(&self, q: &Rational) -> CQ {
        CQ::new(&self.re * q, &self.im * q)
    }

    pub fn norm2(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn div(&self, o: &CQ) -> Option<CQ> {
        let n = o.norm2();
        if n.is_zero() {
            return None;
        }
        let re = (&self.re * &o.re + &self.im * &o.im) / &n;
        let im = (&self.im * &o.re - &self.re * &o.im) / &n;
        Some(CQ::new(re, im))
    }

    /// Upper bound for the modulus.
    pub fn abs_upper(&self) -> Rational {
        self.re.abs() + self.im.abs()
    }

    /// Lower bound for the modulus.
    pub fn abs_lower(&self) -> Rational {
        std::cmp::max(self.re.abs(), self.im.abs())
    }

    pub fn round(&self, bits: u32) -> CQ {
        CQ::new(round_dyadic(&self.re, bits), round_dyadic(&self.im, bits))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    pub fn from_c64(z: Complex64) -> CQ {
        CQ::new(
            BigRational::from_float(z.re).unwrap_or_else(Rational::zero),
            BigRational::from_float(z.im).unwrap_or_else(Rational::zero),
        )
    }
}

fn round_dyadic(x: &Rational, bits: u32) -> Rational {
    let half = BigRational::new(BigInt::one(), BigInt::one() << (bits + 1));
    floor_dyadic(&(x + half), bits)
}

/// Closed complex disc `|x - center| <= rad`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: CQ,
    pub rad: Rational,
}

impl Ball {
    pub fn exact(c: CQ) -> Self {
        Ball { center: c, rad: Rational::zero() }
    }

    /// Upper bound on the modulus of every point.
    pub fn abs_upper(&self) -> Rational {
        self.center.abs_upper() + &self.rad
    }

    /// Lower bound on the modulus of every point (may be 0).
    pub fn abs_lower(&self) -> Rational {
        let l = self.center.abs_lower() - &self.rad;
        if l.is_negative() {
            Rational::zero()
        } else {
            l
        }
    }

    /// Axis-aligned enclosure `([re_lo, re_hi], [im_lo, im_hi])`.
    pub fn rect(&self) -> ((Rational, Rational), (Rational, Rational)) {
        let c = &self.center;
        ((&c.re - &self.rad, &c.re + &self.rad), (&c.im - &self.rad, &c.im + &self.rad))
    }
}

pub fn eval_cq(p: &QPoly, z: &CQ) -> CQ {
    let mut acc = CQ::zero();
    for a in p.coeffs().iter().rev() {
        acc = acc.mul(z);
        acc.re += a;
    }
    acc
}

/// Coefficients `b_k` with `p(c + h) = sum b_k h^k`.
pub fn taylor_at(p: &QPoly, c: &CQ) -> Vec<CQ> {
    let mut a: Vec<CQ> = p.coeffs().iter().map(|x| CQ::real(x.clone())).collect();
    let n = a.len();
    if n == 0 {
        return vec![CQ::zero()];
    }
    for k in 0..n - 1 {
        for j in (k..n - 1).rev() {
            let t = a[j + 1].mul(c);
            a[j] = a[j].add(&t);
        }
    }
    a
}

/// Enclosure of `{g(x) : x in b}`.
pub fn ball_eval(g: &QPoly, b: &Ball) -> Ball {
    if b.rad.is_zero() {
        return Ball::exact(eval_cq(g, &b.center));
    }
    let t = taylor_at(g, &b.center);
    let mut err = Rational::zero();
    let mut rk = Rational::one();
    for bk in t.iter().skip(1) {
        rk = &rk * &b.rad;
        err += bk.abs_upper() * &rk;
    }
    Ball { center: t[0].clone(), rad: err }
}

/// Location of one root of a squarefree polynomial.
#[derive(Clone, Debug, PartialEq)]
pub enum RootLoc {
    /// Open interval with a sign change, or a degenerate exact root when `lo == hi`.
    Real { lo: Rational, hi: Rational },
    /// Disc in the upper half plane containing exactly one root.
    Complex { center: CQ, rad: Rational },
}

/// Strict bound on the moduli of the roots.
pub fn cauchy_bound(p: &QPoly) -> Rational {
    let lc = p.lc();
    let m = p.coeffs()[..p.coeffs().len() - 1]
        .iter()
        .map(|c| (c / &lc).abs())
        .max()
        .unwrap_or_else(Rational::zero);
    m + Rational::one()
}

/// Isolating intervals of the real roots, ascending.
pub fn isolate_real_roots(p: &QPoly) -> Vec<RootLoc> {
    let Some(n) = p.degree() else { return vec![] };
    if n == 0 {
        return vec![];
    }
    let chain = p.sturm_chain();
    let b = cauchy_bound(p);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let cnt = sturm_variations(&chain, &lo) as i64 - sturm_variations(&chain, &hi) as i64;
        if cnt == 0 {
            continue;
        }
        if cnt == 1 {
            if p.eval(&hi).is_zero() {
                out.push(RootLoc::Real { lo: hi.clone(), hi });
            } else {
                out.push(RootLoc::Real { lo, hi });
            }
            continue;
        }
        let mut mid = (&lo + &hi) / BigInt::from(2);
        // keep interior split points off the roots so the left endpoint stays a non-root
        let mut k = 3;
        while p.eval(&mid).is_zero() {
            mid = &lo + (&hi - &lo) / BigInt::from(k);
            k += 1;
        }
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out.sort_by(|a, b| match (a, b) {
        (RootLoc::Real { lo: x, .. }, RootLoc::Real { lo: y, .. }) => x.cmp(y),
        _ => unreachable!(),
    });
    out
}

fn real_ball(p: &QPoly, lo: &Rational, hi: &Rational, bits: u32) -> Ball {
    if lo == hi {
        return Ball::exact(CQ::real(lo.clone()));
    }
    let target = BigRational::new(BigInt::one(), BigInt::one() << bits);
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    let slo = p.sign_at(&lo);
    let two = BigInt::from(2);
    while &hi - &lo > target {
        let mid = (&lo + &hi) / &two;
        let s = p.sign_at(&mid);
        if s == 0 {
            return Ball::exact(CQ::real(mid));
        }
        if s == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ball { center: CQ::real((&lo + &hi) / &two), rad: (&hi - &lo) / &two }
}

/// Certified radius `n |p(z)| / |p'(z)|` (upper bound); `None` if `p'(z) = 0`.
fn newton_radius(p: &QPoly, dp: &QPoly, z: &CQ) -> Option<Rational> {
    let v = eval_cq(p, z);
    if v.is_zero() {
        return Some(Rational::zero());
    }
    let d = eval_cq(dp, z).abs_lower();
    if d.is_zero() {
        return None;
    }
    let n = Rational::from_integer(BigInt::from(p.deg()));
    Some(n * v.abs_upper() / d)
}

fn complex_ball(p: &QPoly, center: &CQ, rad: &Rational, bits: u32) -> Ball {
    let target = BigRational::new(BigInt::one(), BigInt::one() << bits);
    if rad <= &target {
        return Ball { center: center.clone(), rad: rad.clone() };
    }
    let dp = p.derivative();
    let mut z = center.clone();
    let mut work = 64u32.max(bits / 2);
    for _ in 0..400 {
        let v = eval_cq(p, &z);
        let d = eval_cq(&dp, &z);
        if let Some(step) = v.div(&d) {
            z = z.sub(&step).round(work);
        }
        if let Some(r) = newton_radius(p, &dp, &z) {
            let inside = z.sub(center).abs_upper() + &r <= *rad;
            if inside && r <= target {
                return Ball { center: z, rad: r };
            }
        }
        work = (work * 2).min(bits + 16);
    }
    panic!("Newton refinement failed to converge inside a certified disc");
}

/// Enclosure of the isolated root with radius at most `2^-bits`.
pub fn root_ball(p: &QPoly, loc: &RootLoc, bits: u32) -> Ball {
    match loc {
        RootLoc::Real { lo, hi } => real_ball(p, lo, hi, bits),
        RootLoc::Complex { center, rad } => complex_ball(p, center, rad, bits),
    }
}

fn aberth(p: &[f64], rot: f64) -> Vec<Complex64> {
    let n = p.len() - 1;
    let lc = p[n];
    let a: Vec<f64> = p.iter().map(|c| c / lc).collect();
    let rho = (0..n)
        .map(|k| a[k].abs().powf(1.0 / (n - k) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + rot;
            Complex64::from_polar(rho, th)
        })
        .collect();
    let evald = |x: Complex64| {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for c in a.iter().rev() {
            d = d * x + v;
            v = v * x + c;
        }
        (v, d)
    };
    for _ in 0..800 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (v, d) = evald(z[k]);
            if v.norm() == 0.0 {
                continue;
            }
            let w = v / d;
            let s: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let corr = w / (Complex64::new(1.0, 0.0) - w * s);
            if corr.is_finite() {
                z[k] -= corr;
                moved = moved.max(corr.norm() / z[k].norm().max(1e-300));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn certify_upper(p: &QPoly, approx: &[Complex64], bits: u32) -> Option<Vec<RootLoc>> {
    let dp = p.derivative();
    let mut discs = Vec::new();
    for &a in approx {
        let mut z = CQ::from_c64(a);
        for _ in 0..(bits / 16 + 8) {
            let step = eval_cq(p, &z).div(&eval_cq(&dp, &z))?;
            z = z.sub(&step).round(bits);
        }
        let r = newton_radius(p, &dp, &z)?;
        if r >= z.im {
            return None;
        }
        discs.push((z, r));
    }
    for i in 0..discs.len() {
        for j in i + 1..discs.len() {
            let d = discs[i].0.sub(&discs[j].0).abs_lower();
            if d <= &discs[i].1 + &discs[j].1 {
                return None;
            }
        }
    }
    Some(discs.into_iter().map(|(center, rad)| RootLoc::Complex { center, rad }).collect())
}

/// Isolating discs of the roots with positive imaginary part, sorted by
/// approximate `(re, im)`.
pub fn isolate_upper_roots(p: &QPoly, n_real: usize) -> Result<Vec<RootLoc>> {
    let n = p.deg() as usize;
    let m = (n - n_real) / 2;
    if m == 0 {
        return Ok(vec![]);
    }
    let coeffs: Vec<f64> = p.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::UnsupportedShape("coefficients outside floating range".into()));
    }
    for attempt in 0..6 {
        let mut z = aberth(&coeffs, 0.4 + 0.37 * attempt as f64);
        z.sort_by(|a, b| b.im.partial_cmp(&a.im).unwrap_or(std::cmp::Ordering::Equal));
        let top: Vec<Complex64> = z.into_iter().take(m).collect();
        for bits in [80u32, 200, 600] {
            if let Some(mut locs) = certify_upper(p, &top, bits) {
                locs.sort_by(|a, b| {
                    let (RootLoc::Complex { center: x, .. }, RootLoc::Complex { center: y, .. }) = (a, b) else {
                        unreachable!()
                    };
                    (&x.re, &x.im).cmp(&(&y.re, &y.im))
                });
                return Ok(locs);
            }
        }
    }
    Err(Error::UnsupportedShape("could not certify complex roots".into()))
}

/// All root locations: real roots ascending, then upper-half-plane roots.
pub fn isolate_roots(p: &QPoly) -> Result<(Vec<RootLoc>, Vec<RootLoc>)> {
    let real = isolate_real_roots(p);
    let upper = isolate_upper_roots(p, real.len())?;
    Ok((real, upper))
}

/// Floating approximation of an isolated root with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootApprox {
    pub z: Complex64,
    pub err: f64,
}

pub fn root_approx(p: &QPoly, loc: &RootLoc) -> RootApprox {
    let b = root_ball(p, loc, 80);
    let z = b.center.to_c64();
    let err = (b.rad.to_f64().unwrap_or(1.0) + z.norm() * f64::EPSILON) * 1.01 + 1e-300;
    RootApprox { z, err }
}

/// Fast `|g(alpha)|` with relative error bound, or `None` when the floating
/// bound exceeds `max_rel` (callers fall back to exact balls).
pub fn fast_abs(g: &QPoly, r: &RootApprox, max_rel: f64) -> Option<(f64, f64)> {
    let u = f64::EPSILON / 2.0;
    let n = g.coeffs().len();
    let mut c = Vec::with_capacity(n);
    for q in g.coeffs() {
        let v = q.to_f64()?;
        if !v.is_finite() {
            return None;
        }
        c.push(v);
    }
    let mut v = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        v = v * r.z + a;
    }
    let rr = r.z.norm() + r.err;
    let (mut s, mut s1) = (0.0f64, 0.0f64);
    let mut pw = 1.0f64;
    for (k, &a) in c.iter().enumerate() {
        s += a.abs() * pw * rr;
        if k + 1 < n {
            s1 += (k + 1) as f64 * c[k + 1].abs() * pw;
        }
        pw *= rr;
    }
    let s = s / rr.max(1e-300);
    let e = ((4 * n + 8) as f64 * u * s + r.err * s1) * 1.05 + 1e-290;
    let a = v.norm();
    if !a.is_finite() || a <= 2.0 * e {
        return None;
    }
    let rel = e / (a - e) + 2.0 * u;
    if rel > max_rel {
        return None;
    }
    Some((a, rel))
}

/// `|g(alpha)|` as a rational enclosure `(lo, hi)` with `hi/lo - 1 <= rel`.
/// Requires `g(alpha) != 0`.
pub fn abs_enclosure(g: &QPoly, p: &QPoly, loc: &RootLoc, rel: f64) -> (Rational, Rational) {
    let mut bits = 64u32;
    loop {
        let b = ball_eval(g, &root_ball(p, loc, bits));
        let n2 = b.center.norm2();
        let c = n2.to_f64().unwrap_or(0.0).sqrt();
        let r = b.rad.to_f64().unwrap_or(f64::INFINITY);
        if c.is_finite() && c > 0.0 && r < c * rel / 4.0 {
            let lo = b.abs_lower();
            let hi = b.abs_upper();
            if lo.is_positive() {
                return (lo, hi);
            }
        }
        bits *= 2;
        assert!(bits < 1 << 16, "abs_enclosure: value not separated from zero");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn q(v: &[i64]) -> QPoly {
        QPoly::new(v.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn real_roots_of_x2_minus_2() {
        let p = q(&[-2, 0, 1]);
        let r = isolate_real_roots(&p);
        assert_eq!(r.len(), 2);
        let b = root_ball(&p, &r[1], 50);
        let v = b.center.re.to_f64().unwrap();
        assert!((v - 2f64.sqrt()).abs() < 1e-14);
        assert!(b.rad <= BigRational::new(BigInt::one(), BigInt::one() << 50));
    }

    #[test]
    fn rational_root_is_exact() {
        let p = q(&[0, -1, 0, 1]); // x^3 - x
        let r = isolate_real_roots(&p);
        assert_eq!(r.len(), 3);
        for (l, want) in r.iter().zip([-1.0, 0.0, 1.0]) {
            let b = root_ball(&p, l, 60);
            assert!((b.center.re.to_f64().unwrap() - want).abs() < 1e-17);
        }
    }

    #[test]
    fn complex_roots_certified() {
        let p = q(&[1, 0, 0, 0, 1]); // x^4 + 1
        let (re, up) = isolate_roots(&p).unwrap();
        assert!(re.is_empty());
        assert_eq!(up.len(), 2);
        let b = root_ball(&p, &up[0], 100);
        let z = b.center.to_c64();
        assert!((z.re + 0.5f64.sqrt()).abs() < 1e-15 && (z.im - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn mixed_roots() {
        let p = q(&[-2, 0, 0, 1]); // x^3 - 2
        let (re, up) = isolate_roots(&p).unwrap();
        assert_eq!((re.len(), up.len()), (1, 1));
    }

    #[test]
    fn fast_and_exact_agree() {
        let p = q(&[-2, 0, 1]);
        let r = isolate_real_roots(&p);
        let g = QPoly::new(vec![rat(1, 3), int(5)]); // 1/3 + 5a
        let ap = root_approx(&p, &r[0]);
        let (v, rel) = fast_abs(&g, &ap, 1e-10).unwrap();
        let (lo, hi) = abs_enclosure(&g, &p, &r[0], 1e-14);
        let (lo, hi) = (lo.to_f64().unwrap(), hi.to_f64().unwrap());
        assert!(v * (1.0 + rel) >= lo && v * (1.0 - rel) <= hi);
        assert!((v - (5.0 * 2f64.sqrt() - 1.0 / 3.0)).abs() < 1e-13);
    }

    #[test]
    fn taylor_shift() {
        let p = q(&[1, 2, 3]);
        let t = taylor_at(&p, &CQ::real(int(1)));
        // 3(h+1)^2 + 2(h+1) + 1 = 3h^2 + 8h + 6
        let re: Vec<_> = t.iter().map(|c| c.re.clone()).collect();
        assert_eq!(re, vec![int(6), int(8), int(3)]);
    }
}
