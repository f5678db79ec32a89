//! Verification suites. Each suite runs a fixed, seeded batch of checks and
//! returns a [`SuiteReport`] whose payload is identical across runs.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::extension::{local_degree_sum, newton_power_sums, limsup_max_estimate, orbit_is_transitive, ExtensionProblem};
use crate::fields::place::prime_ideals_above;
use crate::fields::{parse_element, parse_field, parse_place, residue_field, Element, FieldDescriptor, Place, RatFunc};
use crate::linalg::Matrix;
use crate::pav::sample::Sampler;
use crate::pav::{check_pav_axioms, Pav, Scale};
use crate::pnorm::{hadamard_check, PseudoNorm};
use crate::reduction::{check_diagram, diagram_bases, gauss_radius_ladder, strictly_decreasing, taxonomy_over};
use crate::scalar::{fmt_rational, rat, Rational};
use crate::spaces::{
    check_convergence, density_point, density_target, disc_density_sequence, epsilon_check, point_from_branch, power_flow,
    separate, verify_separation, Branch, BranchCoords, FlowExp, Param, SpaceModel,
};
use crate::xreal::{XOrd, XReal};

pub const SUITES: [&str; 9] = [
    "axioms-all",
    "degree-sum",
    "newton-limsup",
    "galois-orbits",
    "pnorm",
    "separation",
    "flow-laws",
    "disc-density",
    "reduction-diagram",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Indeterminate,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub status: Status,
    pub checks: usize,
    /// One entry per failed or undecided check.
    pub witnesses: Vec<Value>,
    pub payload: Value,
}

impl SuiteReport {
    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "status": self.status.name(),
            "checks": self.checks,
            "witnesses": self.witnesses,
            "payload": self.payload,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteOptions {
    /// Tolerance for comparisons on approximate lanes.
    pub tol: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { tol: 1e-9 }
    }
}

/// Collects check outcomes. Failures win over undecided checks.
#[derive(Default)]
struct Tally {
    checks: usize,
    failed: Vec<Value>,
    undecided: Vec<Value>,
}

impl Tally {
    fn pass(&mut self) {
        self.checks += 1;
    }

    fn fail(&mut self, w: Value) {
        self.checks += 1;
        self.failed.push(w);
    }

    fn undecided(&mut self, w: Value) {
        self.checks += 1;
        self.undecided.push(w);
    }

    fn check(&mut self, ok: bool, w: impl FnOnce() -> Value) {
        if ok {
            self.pass()
        } else {
            self.fail(w())
        }
    }

    fn absorb(&mut self, o: Tally) {
        self.checks += o.checks;
        self.failed.extend(o.failed);
        self.undecided.extend(o.undecided);
    }

    fn finish(self, suite: &str, payload: Value) -> SuiteReport {
        let status = if !self.failed.is_empty() {
            Status::Fail
        } else if !self.undecided.is_empty() {
            Status::Indeterminate
        } else {
            Status::Pass
        };
        let mut witnesses = self.failed;
        witnesses.extend(self.undecided);
        SuiteReport { suite: suite.to_string(), status, checks: self.checks, witnesses, payload }
    }
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    match name {
        "axioms-all" => axioms_all(),
        "degree-sum" => degree_sum(),
        "newton-limsup" => newton_limsup(opts),
        "galois-orbits" => galois_orbits(),
        "pnorm" => pnorm_suite(opts),
        "separation" => separation_suite(),
        "flow-laws" => flow_laws(opts),
        "disc-density" => disc_density(),
        "reduction-diagram" => reduction_diagram(),
        _ => Err(Error::OutOfRange(format!("unknown suite '{}'; known: {}", name, SUITES.join(", ")))),
    }
}

fn field(s: &str) -> FieldDescriptor {
    parse_field(s).expect("built-in field")
}

fn el(f: &FieldDescriptor, s: &str) -> Element {
    parse_element(s, f).expect("built-in element")
}

fn err_json(e: &Error) -> Value {
    json!({"error": e.to_string()})
}

/// Agreement of two values: `Some(bool)` when decided exactly, otherwise
/// a log-scale comparison within `tol`.
fn agree(a: &XReal, b: &XReal, tol: f64) -> (bool, bool) {
    match a.cmp(b) {
        XOrd::Equal => (true, true),
        XOrd::Less | XOrd::Greater if a.is_exact() && b.is_exact() => (true, false),
        _ => {
            if a.is_finite_positive() && b.is_finite_positive() {
                (false, (a.ln() - b.ln()).abs() <= tol)
            } else {
                (false, false)
            }
        }
    }
}

// ---------------------------------------------------------------- axioms-all

/// Ultrametric constructors at `place`: genuine with `c = 1` and `c = ln 5`, and degenerate.
fn ultra_family(f: &FieldDescriptor, place: &Place) -> Result<Vec<Pav>> {
    Ok(vec![
        Pav::ultra(f, place.clone(), Scale::Rat(Rational::one()))?,
        Pav::ultra(f, place.clone(), Scale::log(5))?,
        Pav::ultra_degenerate(f, place.clone())?,
    ])
}

fn arch_family(f: &FieldDescriptor) -> Result<Vec<Pav>> {
    let n = f.number_field().map_or(1, |k| k.embeddings().len());
    let mut out = Vec::new();
    for emb in 0..n {
        for eps in [Rational::one(), rat(1, 2)] {
            out.push(Pav::arch(f, emb, eps)?);
        }
    }
    Ok(out)
}

fn places_above(f: &FieldDescriptor, p: u64) -> Result<Vec<Place>> {
    match f {
        FieldDescriptor::Rationals => Ok(vec![Place::Prime(p)]),
        FieldDescriptor::NumberField(k) => Ok(prime_ideals_above(k, p)?.into_iter().map(Place::Ideal).collect()),
        _ => Err(Error::UnsupportedShape("constants expected".into())),
    }
}

/// Every constructor over the constants `k`: trivial, Archimedean and ultrametric at primes above 5.
fn constant_family(k: &FieldDescriptor) -> Result<Vec<Pav>> {
    let mut out = vec![Pav::trivial(k)];
    out.extend(arch_family(k)?);
    for pl in places_above(k, 5)? {
        out.extend(ultra_family(k, &pl)?);
    }
    Ok(out)
}

/// The twelve cases: `(label, field, PAVs)`.
pub fn axiom_matrix() -> Result<Vec<(String, FieldDescriptor, Vec<Pav>)>> {
    let mut cases = Vec::new();
    for (fs, p) in [("Q", 2), ("Q", 3), ("Q", 5), ("Q(i)", 5), ("Q(sqrt2)", 2)] {
        let f = field(fs);
        let mut pavs = vec![Pav::trivial(&f)];
        for pl in places_above(&f, p)? {
            pavs.extend(ultra_family(&f, &pl)?);
        }
        cases.push((format!("{} @ {}", fs, p), f, pavs));
    }
    for fs in ["Q", "Q(i)", "Q(sqrt2)"] {
        let f = field(fs);
        let mut pavs = vec![Pav::trivial(&f)];
        pavs.extend(arch_family(&f)?);
        cases.push((format!("{} @ arch", fs), f, pavs));
    }
    let qt = field("Q(T)");
    let q = FieldDescriptor::Rationals;
    let u5 = Pav::ultra(&q, Place::Prime(5), Scale::Rat(Rational::one()))?;
    let gauss: [(&str, Vec<Pav>); 4] = [
        ("T", vec![Pav::gauss(&qt, Pav::trivial(&q), q.int(0), Rational::one())?, Pav::gauss(&qt, u5.clone(), q.int(0), rat(1, 2))?]),
        ("T - 2", vec![
            Pav::gauss(&qt, Pav::trivial(&q), q.int(2), rat(1, 2))?,
            Pav::gauss(&qt, Pav::ultra_degenerate(&q, Place::Prime(5))?, q.int(2), Rational::one())?,
        ]),
        ("T^2 - 2", vec![Pav::gauss(&qt, Pav::ultra(&q, Place::Prime(3), Scale::Rat(rat(1, 2)))?, q.int(1), rat(2, 1))?]),
        ("inf", vec![Pav::gauss(&qt, Pav::trivial(&q), q.int(0), rat(-1, 1))?, Pav::gauss(&qt, u5, q.int(0), rat(-1, 1))?]),
    ];
    for (pl, g) in gauss {
        let place = parse_place(&qt, pl)?;
        let mut pavs = vec![Pav::trivial(&qt)];
        pavs.extend(ultra_family(&qt, &place)?);
        for w in constant_family(&residue_field(&qt, &place)?)? {
            pavs.push(Pav::compose(&qt, place.clone(), w)?);
        }
        pavs.extend(g);
        cases.push((format!("Q(T) @ {}", pl), qt.clone(), pavs));
    }
    Ok(cases)
}

fn axioms_all() -> Result<SuiteReport> {
    const PAIRS: usize = 500;
    let cases = axiom_matrix()?;
    let jobs: Vec<(usize, Pav, Vec<(Element, Element)>)> = cases
        .iter()
        .enumerate()
        .flat_map(|(i, (_, f, pavs))| {
            let pairs = Sampler::new(f, 0xa110 + i as u64).take_pairs(PAIRS);
            pavs.iter().map(move |v| (i, v.clone(), pairs.clone())).collect::<Vec<_>>()
        })
        .collect();
    let results: Vec<Tally> = jobs
        .par_iter()
        .map(|(i, v, pairs)| {
            let mut t = Tally::default();
            let w = |extra: Value| json!({"case": cases[*i].0, "pav": v.to_json(), "detail": extra});
            match check_pav_axioms(v, pairs) {
                Ok(r) if r.passed() => t.pass(),
                Ok(r) => {
                    let vs: Vec<Value> = r.violations.iter().take(5).map(|x| json!({"axiom": x.axiom, "witness": x.witness, "values": x.values})).collect();
                    t.fail(w(json!(vs)))
                }
                Err(e) => t.fail(w(err_json(&e))),
            }
            t
        })
        .collect();
    let mut t = Tally::default();
    results.into_iter().for_each(|r| t.absorb(r));
    let counts: Vec<Value> = cases.iter().map(|(l, _, p)| json!({"case": l, "pavs": p.len()})).collect();
    Ok(t.finish("axioms-all", json!({"cases": counts, "pairs_per_pav": PAIRS})))
}

// ---------------------------------------------------------------- degree-sum

/// `(extension, base)` pairs for the sum formula.
pub fn degree_sum_problems() -> Result<Vec<ExtensionProblem>> {
    let q = FieldDescriptor::Rationals;
    let deg = |p: u64| Pav::ultra_degenerate(&q, Place::Prime(p));
    let mut out = Vec::new();
    let table: [(&str, &[u64]); 4] = [
        ("Q(i)", &[5, 3, 2]),
        ("Q(sqrt2)", &[7, 3, 2]),
        ("Q(cbrt2)", &[5, 2, 3]),
        ("Q[a]/(a^6 + 108)", &[7, 5]),
    ];
    for (fs, primes) in table {
        let l = field(fs);
        for &p in primes {
            out.push(ExtensionProblem::new(deg(p)?, l.clone())?);
        }
        out.push(ExtensionProblem::new(Pav::arch(&q, 0, Rational::one())?, l.clone())?);
        out.push(ExtensionProblem::new(Pav::trivial(&q), l.clone())?);
    }
    out.push(ExtensionProblem::new(Pav::ultra(&q, Place::Prime(5), Scale::log(5))?, field("Q(i)"))?);
    Ok(out)
}

fn degree_sum() -> Result<SuiteReport> {
    let probs = degree_sum_problems()?;
    let sums: Vec<Result<Rational>> = probs.par_iter().map(local_degree_sum).collect();
    let mut t = Tally::default();
    let mut rows = Vec::new();
    for (p, s) in probs.iter().zip(sums) {
        let row = match &s {
            Ok(s) => json!({"ext": p.ext.to_string(), "base": p.base.to_json(), "sum": fmt_rational(s)}),
            Err(e) => json!({"ext": p.ext.to_string(), "base": p.base.to_json(), "error": e.to_string()}),
        };
        t.check(matches!(&s, Ok(s) if s.is_one()), || row.clone());
        rows.push(row);
    }
    Ok(t.finish("degree-sum", json!({"problems": rows})))
}

// ---------------------------------------------------------------- newton-limsup

fn newton_limsup(opts: &SuiteOptions) -> Result<SuiteReport> {
    let q = FieldDescriptor::Rationals;
    let mut t = Tally::default();

    // lambda_N = (1+r2)^N + (1-r2)^N satisfies lambda_N = 2 lambda_(N-1) + lambda_(N-2)
    let n = 50;
    let arch = Pav::arch(&q, 0, Rational::one())?;
    let poly = [q.int(-1), q.int(-2), q.int(1)];
    let seq = newton_power_sums(&poly, n)?;
    let (mut a, mut b) = (BigInt::from(2), BigInt::from(2));
    for _ in 2..=n {
        let c = &b * 2 + &a;
        a = b;
        b = c;
    }
    let lam = seq.get(n).as_rational();
    t.check(lam == Some(Rational::from_integer(b.clone())), || json!({"case": "pell", "lambda_50": lam.as_ref().map(fmt_rational), "oracle": b.to_string()}));
    let est = arch.eval(seq.get(n))?.powq(&rat(1, n as i64));
    let gap = (est.to_f64() - (1.0 + 2f64.sqrt())).abs();
    t.check(gap <= opts.tol, || json!({"case": "pell", "gap": gap}));
    let rep = limsup_max_estimate(&poly, &arch, n)?;
    let window_gap = rep.gap.unwrap_or(f64::INFINITY);
    t.check(window_gap <= opts.tol, || json!({"case": "pell window", "gap": window_gap}));

    let p3 = Pav::ultra(&q, Place::Prime(3), Scale::log(3))?;
    let seq3 = newton_power_sums(&[q.int(-3), q.int(1)], n)?;
    let third = XReal::rational(rat(1, 3));
    for k in 1..=n {
        let v = p3.eval(seq3.get(k))?.powq(&rat(1, k as i64));
        t.check(v.cmp(&third) == XOrd::Equal && v.is_exact(), || json!({"case": "3-adic", "n": k, "value": v.to_json()}));
    }
    Ok(t.finish(
        "newton-limsup",
        json!({"arch": {"n": n, "estimate": est.to_f64(), "gap": gap, "window_gap": window_gap}, "three_adic": {"n_max": n, "value": third.to_json()}}),
    ))
}

// ---------------------------------------------------------------- galois-orbits

fn galois_orbits() -> Result<SuiteReport> {
    let q = FieldDescriptor::Rationals;
    let mut t = Tally::default();
    let mut rows = Vec::new();
    for (fs, primes) in [("Q(i)", vec![5u64, 3]), ("Q(sqrt2)", vec![7, 5, 3])] {
        let l = field(fs);
        let mut bases: Vec<Pav> = primes.iter().map(|&p| Pav::ultra(&q, Place::Prime(p), Scale::log(p))).collect::<Result<_>>()?;
        bases.push(Pav::arch(&q, 0, Rational::one())?);
        for b in bases {
            let prob = ExtensionProblem::new(b.clone(), l.clone())?;
            match orbit_is_transitive(&prob) {
                Ok(r) => {
                    let full = r.certificate.len() == r.group_size && r.orbit == (0..r.extensions).collect::<Vec<_>>();
                    let row = json!({"ext": fs, "base": b.to_json(), "report": r.to_json()});
                    t.check(r.transitive && full, || row.clone());
                    rows.push(row);
                }
                Err(e) => t.fail(json!({"ext": fs, "base": b.to_json(), "error": e.to_string()})),
            }
        }
    }
    Ok(t.finish("galois-orbits", json!({"cases": rows})))
}

// ---------------------------------------------------------------- pnorm

fn pnorm_pavs() -> Result<(Vec<Pav>, Vec<Pav>)> {
    let q = FieldDescriptor::Rationals;
    let qt = field("Q(T)");
    let ultra = vec![
        Pav::ultra(&q, Place::Prime(3), Scale::Rat(Rational::one()))?,
        Pav::ultra(&q, Place::Prime(5), Scale::log(5))?,
        Pav::ultra_degenerate(&qt, parse_place(&qt, "T")?)?,
        Pav::ultra(&qt, parse_place(&qt, "T - 2")?, Scale::Rat(rat(1, 2)))?,
    ];
    let herm = vec![
        Pav::arch(&q, 0, Rational::one())?,
        Pav::arch(&q, 0, rat(1, 2))?,
        Pav::arch(&field("Q(sqrt2)"), 0, Rational::one())?,
    ];
    Ok((ultra, herm))
}

fn random_weight(rng: &mut ChaCha8Rng) -> XReal {
    if rng.gen_bool(0.5) {
        XReal::rational(rat(rng.gen_range(1..=9), rng.gen_range(1..=9)))
    } else {
        XReal::exp(rat(rng.gen_range(-4..=4), 2))
    }
}

fn unit(d: usize, i: usize) -> Vec<Element> {
    (0..d).map(|j| if i == j { Element::one(0) } else { Element::zero(0) }).collect()
}

fn coerce_vec(f: &FieldDescriptor, v: Vec<Element>) -> Vec<Element> {
    v.into_iter().map(|x| f.coerce(&x).expect("coercible")).collect()
}

/// Numerator of a rational function; keeps wedge minors polynomial.
fn numerator(e: &Element) -> Element {
    match e {
        Element::F1(f) => Element::F1(RatFunc::from_poly(f.num().clone())),
        other => other.clone(),
    }
}

fn pnorm_case(idx: usize, n: &PseudoNorm, seed: u64, tol: f64) -> Tally {
    let mut t = Tally::default();
    let d = n.dim();
    let f = n.pav().field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampler = Sampler::new(&f, seed);
    let w = |what: &str, extra: Value| json!({"norm": idx, "check": what, "detail": extra});
    let eq_weights = |a: &[XReal], b: &[XReal]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.cmp(y) == XOrd::Equal);

    let dd = n.dual().dual();
    t.check(eq_weights(dd.weights(), n.weights()), || w("double dual", n.to_json()));

    for mask in 1..(1u32 << d) - 1 {
        let killed: Vec<usize> = (0..d).filter(|i| mask >> i & 1 == 1).collect();
        let kept: Vec<usize> = (0..d).filter(|i| mask >> i & 1 == 0).collect();
        let gens = Matrix::from_cols(killed.iter().map(|&i| coerce_vec(&f, unit(d, i))).collect());
        let ann = Matrix::from_cols(kept.iter().map(|&i| coerce_vec(&f, unit(d, i))).collect());
        let res = n.quotient(&gens).and_then(|qn| Ok((qn.norm.dual(), n.dual().restrict(&ann)?, qn.map)));
        let (qd, rd, map) = match res {
            Ok(x) => x,
            Err(e) => {
                t.fail(w("dual-quotient", json!({"killed": killed, "error": e.to_string()})));
                continue;
            }
        };
        t.check(eq_weights(qd.weights(), rd.weights()), || w("dual-quotient weights", json!({"killed": killed})));
        // a functional on the quotient, pulled back along the projection
        for _ in 0..4 {
            let phi: Vec<Element> = (0..kept.len()).map(|_| sampler.element()).collect();
            let pulled = map.transpose().mul_vec(&phi);
            let ok = match (qd.eval(&phi), n.dual().eval(&pulled)) {
                (Ok(a), Ok(b)) => a.cmp(&b) == XOrd::Equal || (!a.is_exact() || !b.is_exact()) && agree(&a, &b, tol).1,
                _ => false,
            };
            t.check(ok, || w("dual-quotient functional", json!({"killed": killed})));
        }
    }

    // orthogonal decompositions: scaled, permuted adapted basis vectors
    for _ in 0..5 {
        let r = rng.gen_range(1..=d);
        let mut idx_set: Vec<usize> = (0..d).collect();
        idx_set.shuffle(&mut rng);
        let xs: Vec<Vec<Element>> = idx_set[..r]
            .iter()
            .map(|&i| {
                // scalars of finite nonzero size, so that each x_i lies in E_v
                let s = loop {
                    let s = sampler.nonzero();
                    if n.pav().eval(&s).is_ok_and(|v| v.is_finite_positive()) {
                        break s;
                    }
                };
                unit(d, i).iter().map(|u| f.coerce(u).unwrap().mul(&s)).collect()
            })
            .collect();
        match hadamard_check(n, &xs) {
            Ok(h) => {
                let ok = h.is_equality() || h.relation == XOrd::Indeterminate && h.product.as_ref().is_some_and(|p| agree(&h.det_norm, p, tol).1);
                t.check(ok, || w("hadamard equality", h.to_json()));
            }
            Err(e) => t.fail(w("hadamard equality", err_json(&e))),
        }
    }
    for _ in 0..100 {
        let r = rng.gen_range(1..=d);
        let xs: Vec<Vec<Element>> = (0..r).map(|_| sampler.take_elements(d).iter().map(numerator).collect()).collect();
        match hadamard_check(n, &xs) {
            Ok(h) => match h.relation {
                XOrd::Less | XOrd::Equal => t.pass(),
                XOrd::Greater => t.fail(w("hadamard inequality", h.to_json())),
                XOrd::Indeterminate => match &h.product {
                    Some(p) if p.is_finite_positive() && h.det_norm.is_finite_positive() && h.det_norm.ln() <= p.ln() + tol => t.pass(),
                    _ => t.undecided(w("hadamard inequality", h.to_json())),
                },
            },
            Err(Error::RankDeficient) => t.pass(),
            Err(e) => t.fail(w("hadamard inequality", err_json(&e))),
        }
    }

    for _ in 0..200 {
        let x = sampler.take_elements(d);
        let res = n.eval(&x).and_then(|v| {
            let a = n.coordinates(&x)?;
            let mut fin = true;
            let mut ker = true;
            for c in &a {
                fin &= n.pav().in_finiteness_ring(c)?;
                ker &= n.pav().in_kernel(c)?;
            }
            Ok((v, fin, ker))
        });
        match res {
            Ok((v, fin, ker)) => {
                t.check(!v.is_infinite() == fin, || w("finiteness", json!({"value": v.to_json()})));
                t.check(v.is_zero() == ker, || w("kernel", json!({"value": v.to_json()})));
            }
            Err(e) => t.fail(w("membership", err_json(&e))),
        }
    }
    t
}

fn pnorm_suite(opts: &SuiteOptions) -> Result<SuiteReport> {
    let (ultra, herm) = pnorm_pavs()?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x9a0b);
    let mut norms = Vec::new();
    for i in 0..100 {
        let pool = if i % 2 == 0 { &ultra } else { &herm };
        let pav = &pool[(i / 2) % pool.len()];
        let d = rng.gen_range(2..=4);
        let weights = (0..d).map(|_| random_weight(&mut rng)).collect();
        norms.push(PseudoNorm::diagonal(pav, weights)?);
    }
    let results: Vec<Tally> = norms.par_iter().enumerate().map(|(i, n)| pnorm_case(i, n, 0x5000 + i as u64, opts.tol)).collect();
    let mut t = Tally::default();
    results.into_iter().for_each(|r| t.absorb(r));
    let flavors: Vec<&str> = norms.iter().map(|n| n.flavor().name()).collect();
    let ultra_count = flavors.iter().filter(|f| **f == "ultra_sup").count();
    Ok(t.finish("pnorm", json!({"norms": norms.len(), "ultra_sup": ultra_count, "herm_l2": norms.len() - ultra_count})))
}

// ---------------------------------------------------------------- separation

type Coords = (SpaceModel, BranchCoords);

fn mq(b: Branch, p: Param) -> Coords {
    (SpaceModel::MQ, BranchCoords::new(b, p))
}

fn fin(q: Rational) -> Param {
    Param::Finite(Scale::Rat(q))
}

/// Deterministic pairs by category, drawn round-robin until `count`.
pub fn separation_pairs(count: usize) -> Result<Vec<(String, Coords, Coords)>> {
    let disc = SpaceModel::disc(&FieldDescriptor::Rationals, "T", rat(3, 1))?;
    let q = FieldDescriptor::Rationals;
    let dp = |b: Branch, p: Param| (disc.clone(), BranchCoords::new(b, p));
    let epss = [rat(1, 1), rat(1, 2), rat(1, 3), rat(2, 3)];
    let primes = [2u64, 3, 5, 7];
    let cs = |p: u64| vec![Param::Finite(Scale::Rat(Rational::one())), Param::Finite(Scale::log(p)), fin(rat(1, 2)), fin(rat(2, 1))];
    let zs: Vec<Element> = ["0", "1", "2", "-1", "1/2"].iter().map(|s| el(&q, s)).collect();
    let dcs = [fin(rat(1, 1)), fin(rat(2, 1)), fin(rat(1, 3))];

    let mut cats: Vec<(&str, Vec<(Coords, Coords)>)> = Vec::new();
    let mut c = Vec::new();
    for e in &epss {
        for &p in &primes {
            for x in cs(p) {
                c.push((mq(Branch::Arch { emb: 0 }, fin(e.clone())), mq(Branch::Prime(p), x)));
            }
        }
    }
    cats.push(("arch-vs-ultra", c));
    let mut c = Vec::new();
    for (i, &p) in primes.iter().enumerate() {
        for &r in &primes[i + 1..] {
            for (x, y) in cs(p).into_iter().zip(cs(r).into_iter().rev()) {
                c.push((mq(Branch::Prime(p), x), mq(Branch::Prime(r), y)));
            }
        }
    }
    cats.push(("different-prime", c));
    let mut c = Vec::new();
    for &p in &primes {
        let all = cs(p);
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                c.push((mq(Branch::Prime(p), all[i].clone()), mq(Branch::Prime(p), all[j].clone())));
            }
        }
    }
    cats.push(("same-prime-different-c", c));
    let mut c = Vec::new();
    for &p in &primes {
        for x in cs(p) {
            c.push((mq(Branch::Prime(p), x.clone()), mq(Branch::Prime(p), Param::Infinite)));
            c.push((mq(Branch::Prime(p), x), mq(Branch::Prime(p), Param::Zero)));
        }
        c.push((mq(Branch::Prime(p), Param::Infinite), mq(Branch::Arch { emb: 0 }, Param::Zero)));
    }
    for e in &epss {
        c.push((mq(Branch::Arch { emb: 0 }, fin(e.clone())), mq(Branch::Arch { emb: 0 }, Param::Zero)));
    }
    cats.push(("flow-endpoint", c));

    let mut c = Vec::new();
    for z in &zs {
        for e in &epss {
            for w in &zs {
                c.push((dp(Branch::ArchAt(z.clone()), fin(e.clone())), dp(Branch::PointAt(w.clone()), dcs[0].clone())));
            }
        }
    }
    cats.push(("disc arch-vs-ultra", c));
    let mut c = Vec::new();
    for (i, z) in zs.iter().enumerate() {
        for w in &zs[i + 1..] {
            for x in &dcs {
                c.push((dp(Branch::PointAt(z.clone()), x.clone()), dp(Branch::PointAt(w.clone()), x.clone())));
            }
        }
    }
    cats.push(("disc different-point", c));
    let mut c = Vec::new();
    for z in &zs {
        for i in 0..dcs.len() {
            for j in i + 1..dcs.len() {
                c.push((dp(Branch::PointAt(z.clone()), dcs[i].clone()), dp(Branch::PointAt(z.clone()), dcs[j].clone())));
            }
        }
    }
    cats.push(("disc same-point-different-c", c));
    let mut c = Vec::new();
    for z in &zs {
        for x in &dcs {
            c.push((dp(Branch::PointAt(z.clone()), x.clone()), dp(Branch::PointAt(z.clone()), Param::Infinite)));
        }
        c.push((dp(Branch::PointAt(z.clone()), Param::Infinite), dp(Branch::PointAt(z.clone()), Param::Zero)));
        c.push((dp(Branch::ArchAt(z.clone()), fin(rat(1, 2))), dp(Branch::ArchAt(z.clone()), Param::Zero)));
    }
    cats.push(("disc flow-endpoint", c));

    let mut rng = ChaCha8Rng::seed_from_u64(0x5e9a);
    for (_, c) in cats.iter_mut() {
        c.shuffle(&mut rng);
    }
    let mut out = Vec::with_capacity(count);
    let mut round = 0;
    while out.len() < count {
        let before = out.len();
        for (name, c) in &cats {
            if out.len() < count && round < c.len() {
                out.push((name.to_string(), c[round].0.clone(), c[round].1.clone()));
            }
        }
        if out.len() == before {
            break;
        }
        round += 1;
    }
    Ok(out)
}

fn separation_suite() -> Result<SuiteReport> {
    let pairs = separation_pairs(100)?;
    let results: Vec<(Tally, Value)> = pairs
        .par_iter()
        .map(|(cat, (m1, c1), (m2, c2))| {
            let mut t = Tally::default();
            let w = |extra: Value| json!({"category": cat, "x": c1.to_json(m1), "y": c2.to_json(m2), "detail": extra});
            let run = || -> Result<(bool, Value)> {
                let (v1, v2) = (point_from_branch(m1, c1)?, point_from_branch(m2, c2)?);
                let s = separate(&v1, &v2)?;
                Ok((verify_separation(&v1, &v2, &s)?, s.to_json(v1.field())))
            };
            let row = match run() {
                Ok((ok, s)) => {
                    t.check(ok, || w(s.clone()));
                    s
                }
                Err(e) => {
                    t.fail(w(err_json(&e)));
                    err_json(&e)
                }
            };
            (t, json!({"category": cat, "x": c1.to_json(m1), "y": c2.to_json(m2), "witness": row}))
        })
        .collect();
    let mut t = Tally::default();
    let mut rows = Vec::new();
    for (r, row) in results {
        t.absorb(r);
        rows.push(row);
    }
    Ok(t.finish("separation", json!({"pairs": rows})))
}

// ---------------------------------------------------------------- flow-laws

/// `(x, a, b)` triples.
pub fn flow_triples() -> Result<Vec<(Pav, FlowExp, FlowExp)>> {
    let q = FieldDescriptor::Rationals;
    let qt = field("Q(T)");
    let fe = |a: i64, b: i64| FlowExp::Finite(rat(a, b));
    let t_pl = parse_place(&qt, "T")?;
    let r2 = parse_place(&qt, "T^2 - 2")?;
    let k2 = residue_field(&qt, &r2)?;
    let p3 = places_above(&k2, 3)?.remove(0);
    let xs = [
        Pav::ultra(&q, Place::Prime(3), Scale::Rat(Rational::one()))?,
        Pav::ultra(&q, Place::Prime(5), Scale::log(5))?,
        Pav::arch(&q, 0, rat(1, 2))?,
        Pav::ultra(&qt, parse_place(&qt, "T - 2")?, Scale::Rat(Rational::one()))?,
        Pav::gauss(&qt, Pav::trivial(&q), q.int(0), Rational::one())?,
        Pav::gauss(&qt, Pav::ultra(&q, Place::Prime(5), Scale::Rat(Rational::one()))?, q.int(1), rat(1, 2))?,
        Pav::compose(&qt, t_pl.clone(), Pav::arch(&q, 0, rat(1, 2))?)?,
        Pav::compose(&qt, r2, Pav::ultra(&k2, p3, Scale::log(3))?)?,
        Pav::compose(&qt, t_pl, Pav::ultra(&q, Place::Prime(2), Scale::Rat(rat(1, 3)))?)?,
        Pav::ultra_degenerate(&qt, Place::Infinity)?,
    ];
    let exps = [
        (fe(2, 1), fe(1, 3)),
        (fe(1, 2), fe(3, 2)),
        (fe(2, 3), fe(3, 1)),
        (fe(3, 1), FlowExp::Infinite),
        (fe(1, 2), fe(0, 1)),
        (fe(3, 2), fe(2, 3)),
    ];
    let mut out = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        for j in 0..2 {
            let (a, b) = exps[(2 * i + j) % exps.len()].clone();
            let (a, b) = if x.is_archimedean() { (fe(1, 2), fe(3, 2)) } else { (a, b) };
            out.push((x.clone(), a, b));
        }
    }
    Ok(out)
}

fn exp_mul(a: &FlowExp, b: &FlowExp) -> FlowExp {
    match (a, b) {
        (FlowExp::Finite(x), FlowExp::Finite(y)) => FlowExp::Finite(x * y),
        (FlowExp::Finite(x), _) | (_, FlowExp::Finite(x)) if x.is_zero() => FlowExp::Finite(Rational::zero()),
        _ => FlowExp::Infinite,
    }
}

fn exp_str(e: &FlowExp) -> String {
    match e {
        FlowExp::Finite(q) => fmt_rational(q),
        FlowExp::Infinite => "inf".into(),
    }
}

fn flow_laws(opts: &SuiteOptions) -> Result<SuiteReport> {
    let triples = flow_triples()?;
    let results: Vec<(Tally, usize)> = triples
        .par_iter()
        .enumerate()
        .map(|(i, (x, a, b))| {
            let mut t = Tally::default();
            let mut exact = 0;
            let w = |extra: Value| json!({"triple": i, "x": x.to_json(), "a": exp_str(a), "b": exp_str(b), "detail": extra});
            let pts = power_flow(x, a).and_then(|xa| Ok((power_flow(&xa, b)?, power_flow(x, &exp_mul(a, b))?, xa)));
            let (lhs, rhs, xa) = match pts {
                Ok(p) => p,
                Err(e) => {
                    t.fail(w(err_json(&e)));
                    return (t, 0);
                }
            };
            for (k, f) in Sampler::new(x.field(), 0xf10 + i as u64).take_elements(50).iter().enumerate() {
                match (lhs.eval(f), rhs.eval(f)) {
                    (Ok(u), Ok(v)) => {
                        let (lane, ok) = agree(&u, &v, opts.tol);
                        exact += lane as usize;
                        t.check(ok, || w(json!({"fn": k, "lhs": u.to_json(), "rhs": v.to_json()})));
                    }
                    (Err(e), _) | (_, Err(e)) => t.fail(w(err_json(&e))),
                }
            }
            for p in [x, &xa, &lhs] {
                match epsilon_check(p, opts.tol) {
                    Ok(c) => t.check(c.ok, || w(json!({"eps": fmt_rational(&c.exact), "numeric": c.numeric, "exact_lane": c.exact_lane}))),
                    Err(e) => t.fail(w(err_json(&e))),
                }
            }
            (t, exact)
        })
        .collect();
    let mut t = Tally::default();
    let mut exact = 0;
    for (r, e) in results {
        t.absorb(r);
        exact += e;
    }
    Ok(t.finish("flow-laws", json!({"triples": triples.len(), "functions": 50, "exact_comparisons": exact})))
}

// ---------------------------------------------------------------- disc-density

pub const DENSITY_LADDER: [usize; 8] = [1, 2, 5, 10, 20, 50, 100, 200];

/// Twenty polynomials in `u = T - z`.
pub fn density_functions(model: &SpaceModel, z: &Element) -> Result<Vec<Element>> {
    let f = model.field();
    let zs = f.constants().fmt_element(z);
    let u = format!("(T - ({}))", zs);
    let forms = [
        "U", "U^2", "U^3", "U*(U - 1)", "U*(U + 1)", "U^2*(U + 1)", "U - 1", "U + 1", "U^2 + 1", "U + 2", "2*U", "3*U", "U - 3", "U + 3", "2", "3",
        "(U - 1)^2", "U^3 - 1", "U + 1/2", "U^2 - 2",
    ];
    forms.iter().map(|s| parse_element(&s.replace('U', &u), &f)).collect()
}

fn disc_density() -> Result<SuiteReport> {
    let q = FieldDescriptor::Rationals;
    let model = SpaceModel::disc(&q, "T", rat(3, 1))?;
    let cases = [(q.int(0), fin(rat(1, 1))), (q.int(2), fin(rat(1, 2))), (q.int(0), Param::Infinite)];
    let mut t = Tally::default();
    let mut rows = Vec::new();
    for (z, c) in &cases {
        let mut seq = Vec::new();
        for &n in &DENSITY_LADDER {
            let term = disc_density_sequence(&model, z, c, n)?;
            seq.push((n, density_point(&model, &term)?));
        }
        let target = density_target(&model, z, c)?;
        let fns = density_functions(&model, z)?;
        let rep = check_convergence(&seq, &target, &fns, 1e-6)?;
        let row = json!({"z": q.fmt_element(z), "c": c.to_string(), "n": DENSITY_LADDER[DENSITY_LADDER.len() - 1], "report": rep.to_json()});
        t.check(rep.passed, || row.clone());
        rows.push(row);
    }
    Ok(t.finish("disc-density", json!({"cases": rows, "tol": 1e-6})))
}

// ---------------------------------------------------------------- reduction-diagram

fn reduction_diagram() -> Result<SuiteReport> {
    let mut t = Tally::default();
    let mut counts = Vec::new();
    for v in diagram_bases() {
        let members = taxonomy_over(&v)?;
        let field = FieldDescriptor::function_field(v.field().clone(), "T")?;
        let results: Vec<Result<_>> = members.par_iter().map(|w| check_diagram(w, &v)).collect();
        for (w, r) in members.iter().zip(results) {
            match r {
                Ok(d) => t.check(d.commutes, || json!({"base": v.to_json(), "point": w.to_json(), "report": d.to_json(&field)})),
                Err(e) => t.fail(json!({"base": v.to_json(), "point": w.to_json(), "error": e.to_string()})),
            }
        }
        counts.push(json!({"base": v.to_json(), "members": members.len()}));
    }
    let gammas = [rat(0, 1), rat(1, 2), rat(1, 1), rat(2, 1), rat(3, 1)];
    let mut ladders = Vec::new();
    for v in [diagram_bases().remove(0), diagram_bases().remove(2)] {
        let radii = gauss_radius_ladder(&v, &gammas)?;
        let row = json!({"base": v.to_json(), "radii": radii.iter().map(XReal::to_json).collect::<Vec<_>>()});
        t.check(strictly_decreasing(&radii), || row.clone());
        ladders.push(row);
    }
    Ok(t.finish("reduction-diagram", json!({"taxonomy": counts, "ladders": ladders})))
}
