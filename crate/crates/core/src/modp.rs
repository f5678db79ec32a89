//! Polynomials over the prime field F_p and their factorization
//! (squarefree split, distinct-degree and equal-degree factorization).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Ascending coefficients in `0..p`, trimmed.
pub type Fp = Vec<u64>;

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powm(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, b, p);
        }
        b = mulm(b, b, p);
        e >>= 1;
    }
    r
}

pub fn invm(a: u64, p: u64) -> u64 {
    powm(a, p - 2, p)
}

pub fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn deg(a: &Fp) -> i64 {
    a.len() as i64 - 1
}

pub fn add(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub fn sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub fn mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + mulm(x, y, p)) % p;
        }
    }
    trim(c)
}

pub fn scale(a: &Fp, s: u64, p: u64) -> Fp {
    trim(a.iter().map(|&x| mulm(x, s, p)).collect())
}

pub fn monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        Some(&l) => scale(a, invm(l, p), p),
        None => Vec::new(),
    }
}

pub fn divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let n = b.len() - 1;
    if a.len() <= n {
        return (Vec::new(), a.clone());
    }
    let inv = invm(*b.last().unwrap(), p);
    let mut r = a.clone();
    let mut q = vec![0u64; a.len() - n];
    for k in (0..q.len()).rev() {
        let t = mulm(r[k + n], inv, p);
        if t != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + p - mulm(t, bj, p)) % p;
            }
        }
        q[k] = t;
    }
    r.truncate(n);
    (trim(q), trim(r))
}

pub fn rem(a: &Fp, b: &Fp, p: u64) -> Fp {
    divrem(a, b, p).1
}

pub fn gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

/// `(g, s, t)` with `s a + t b = g` monic.
pub fn xgcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, r);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        s0 = std::mem::replace(&mut s1, s);
        let t = sub(&t0, &mul(&q, &t1, p), p);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = invm(*r0.last().unwrap(), p);
    (scale(&r0, inv, p), scale(&s0, inv, p), scale(&t0, inv, p))
}

pub fn derivative(a: &Fp, p: u64) -> Fp {
    trim(a.iter().enumerate().skip(1).map(|(i, &x)| mulm(x, i as u64 % p, p)).collect())
}

/// `b^e mod m` where `e` is given as little-endian u64 limbs.
pub fn powmod(b: &Fp, e: &[u64], m: &Fp, p: u64) -> Fp {
    let mut r = vec![1u64];
    let mut base = rem(b, m, p);
    for &limb in e {
        let mut l = limb;
        for _ in 0..64 {
            if l & 1 == 1 {
                r = rem(&mul(&r, &base, p), m, p);
            }
            base = rem(&mul(&base, &base, p), m, p);
            l >>= 1;
        }
    }
    rem(&r, m, p)
}

fn x_pow_q(m: &Fp, q_limbs: &[u64], p: u64) -> Fp {
    powmod(&vec![0, 1], q_limbs, m, p)
}

/// `a(b) mod m`
fn compose_mod(a: &Fp, b: &Fp, m: &Fp, p: u64) -> Fp {
    let mut acc: Fp = Vec::new();
    for &c in a.iter().rev() {
        acc = add(&rem(&mul(&acc, b, p), m, p), &trim(vec![c]), p);
    }
    acc
}

/// p-th root of a polynomial whose derivative vanishes.
fn pth_root(a: &Fp, p: u64) -> Fp {
    let step = p as usize;
    trim(a.iter().step_by(step).copied().collect())
}

/// Squarefree factorization over F_p: `(g, e)` with `a = lc * prod g^e`.
pub fn squarefree(a: &Fp, p: u64) -> Vec<(Fp, usize)> {
    let f = monic(a, p);
    let mut out = Vec::new();
    sqf_rec(&f, p, 1, &mut out);
    out.sort();
    merge(out)
}

fn merge(mut v: Vec<(Fp, usize)>) -> Vec<(Fp, usize)> {
    v.sort();
    let mut out: Vec<(Fp, usize)> = Vec::new();
    for (g, e) in v {
        match out.last_mut() {
            Some((h, k)) if *h == g => *k += e,
            _ => out.push((g, e)),
        }
    }
    out
}

fn sqf_rec(f: &Fp, p: u64, mult: usize, out: &mut Vec<(Fp, usize)>) {
    if deg(f) < 1 {
        return;
    }
    let d = derivative(f, p);
    if d.is_empty() {
        sqf_rec(&pth_root(f, p), p, mult * p as usize, out);
        return;
    }
    let mut c = gcd(f, &d, p);
    let mut w = divrem(f, &c, p).0;
    let mut i = 1;
    while deg(&w) >= 1 {
        let y = gcd(&w, &c, p);
        let z = divrem(&w, &y, p).0;
        if deg(&z) >= 1 {
            out.push((monic(&z, p), i * mult));
        }
        i += 1;
        w = y;
        c = divrem(&c, &w, p).0;
    }
    if deg(&c) >= 1 {
        sqf_rec(&pth_root(&c, p), p, mult * p as usize, out);
    }
}

/// Distinct-degree factorization of a monic squarefree polynomial.
pub fn ddf(f: &Fp, p: u64) -> Vec<(Fp, usize)> {
    let mut out = Vec::new();
    let mut g = f.clone();
    let mut xp = x_pow_q(&g, &[p], p);
    let mut h = vec![0u64, 1];
    let mut d = 0;
    while deg(&g) >= 2 * (d as i64 + 1) {
        d += 1;
        h = compose_mod(&h, &xp, &g, p);
        let t = gcd(&g, &sub(&h, &vec![0, 1], p), p);
        if deg(&t) >= 1 {
            out.push((t.clone(), d));
            g = divrem(&g, &t, p).0;
            h = rem(&h, &g, p);
            xp = rem(&xp, &g, p);
        }
    }
    if deg(&g) >= 1 {
        let dg = deg(&g) as usize;
        out.push((g, dg));
    }
    out
}

/// Splits a product of distinct irreducibles of degree `d`.
pub fn edf(f: &Fp, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let n = deg(f) as usize;
    if n == d {
        return vec![f.clone()];
    }
    loop {
        let a: Fp = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if deg(&a) < 1 {
            continue;
        }
        let g = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = a.clone();
            let mut s = a.clone();
            for _ in 1..d {
                s = rem(&mul(&s, &s, p), f, p);
                t = add(&t, &s, p);
            }
            gcd(&t, f, p)
        } else {
            let e = exponent_limbs(p, d);
            let b = powmod(&a, &e, f, p);
            gcd(&sub(&b, &vec![1], p), f, p)
        };
        if deg(&g) >= 1 && deg(&g) < n as i64 {
            let h = divrem(f, &g, p).0;
            let mut r = edf(&g, d, p, rng);
            r.extend(edf(&monic(&h, p), d, p, rng));
            return r;
        }
    }
}

/// Limbs of `(p^d - 1) / 2`.
fn exponent_limbs(p: u64, d: usize) -> Vec<u64> {
    use num_bigint::BigUint;
    let q = num_traits::pow(BigUint::from(p), d);
    let e: BigUint = (q - 1u32) / 2u32;
    e.to_u64_digits()
}

/// Full factorization into monic irreducibles with multiplicities, sorted.
pub fn factor(a: &Fp, p: u64) -> Vec<(Fp, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ p);
    let mut out = Vec::new();
    for (g, e) in squarefree(a, p) {
        for (h, d) in ddf(&g, p) {
            for f in edf(&h, d, p, &mut rng) {
                out.push((f, e));
            }
        }
    }
    out.sort_by(|x, y| (deg(&x.0), &x.0).cmp(&(deg(&y.0), &y.0)));
    out
}

pub fn is_irreducible(a: &Fp, p: u64) -> bool {
    let f = factor(a, p);
    f.len() == 1 && f[0].1 == 1
}

pub fn from_i64s(v: &[i64], p: u64) -> Fp {
    trim(v.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prod(fs: &[(Fp, usize)], p: u64) -> Fp {
        let mut r = vec![1];
        for (g, e) in fs {
            for _ in 0..*e {
                r = mul(&r, g, p);
            }
        }
        r
    }

    #[test]
    fn x2_plus_1_mod_5_and_3() {
        let f = from_i64s(&[1, 0, 1], 5);
        let fs = factor(&f, 5);
        assert_eq!(fs, vec![(vec![2, 1], 1), (vec![3, 1], 1)]);
        assert!(is_irreducible(&from_i64s(&[1, 0, 1], 3), 3));
        assert_eq!(factor(&from_i64s(&[1, 0, 1], 2), 2), vec![(vec![1, 1], 2)]);
    }

    #[test]
    fn factor_reassembles() {
        for &p in &[2u64, 3, 7, 97] {
            let f = from_i64s(&[3, -1, 0, 5, 1, 1, 0, 2, 1], p);
            let fs = factor(&f, p);
            assert_eq!(prod(&fs, p), monic(&f, p));
            for (g, _) in &fs {
                assert!(deg(g) >= 1);
            }
        }
    }

    #[test]
    fn pth_power_input() {
        // (x+1)^6 over F_3
        let mut f = vec![1u64];
        for _ in 0..6 {
            f = mul(&f, &vec![1, 1], 3);
        }
        assert_eq!(factor(&f, 3), vec![(vec![1, 1], 6)]);
    }
}
