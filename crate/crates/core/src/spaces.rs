//! Classified spaces of PAVs: the branch model of `M_Q`, disc models `V_R`
//! over `F(T)`, power flows, `eps(x)`, separation witnesses, disc density
//! sequences and the specification map.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fields::place::{fmt_place, parse_place, residue_field, uniformizer, Place};
use crate::fields::{parse_element, Element, FieldDescriptor};
use crate::pav::{Pav, PavKind, Scale};
use crate::scalar::{fmt_rational, parse_rational, Rational};
use crate::xreal::{XOrd, XReal};

#[derive(Clone, Debug, PartialEq)]
pub enum SpaceModel {
    /// `M_Q`, homeomorphic to `M(Z, ||.||_inf)`.
    MQ,
    /// `V_R` on `F(T)`: points `z` of `F` with `|z| <= R` at the first embedding.
    Disc { field: FieldDescriptor, radius: Rational },
}

impl SpaceModel {
    pub fn disc(base: &FieldDescriptor, var: &str, radius: Rational) -> Result<SpaceModel> {
        if !radius.is_positive() {
            return Err(Error::OutOfRange("radius must be positive".into()));
        }
        if base.depth() != 0 {
            return Err(Error::FieldMismatch("disc models need a number field of constants".into()));
        }
        Ok(SpaceModel::Disc { field: FieldDescriptor::function_field(base.clone(), var)?, radius })
    }

    pub fn field(&self) -> FieldDescriptor {
        match self {
            SpaceModel::MQ => FieldDescriptor::Rationals,
            SpaceModel::Disc { field, .. } => field.clone(),
        }
    }

    /// Rejects points outside the closed disc of radius `R`.
    fn check_point(&self, z: &Element) -> Result<()> {
        let SpaceModel::Disc { field, radius } = self else {
            return Err(Error::OutOfRange("points only exist in disc models".into()));
        };
        let base = field.base().unwrap();
        let z = base.coerce(z)?;
        let size = Pav::arch(base, 0, Rational::one())?.eval(&z)?;
        if size.cmp(&XReal::rational(radius.clone())) == XOrd::Greater {
            return Err(Error::OutOfRange(format!("point {} lies outside the disc of radius {}", base.fmt_element(&z), fmt_rational(radius))));
        }
        Ok(())
    }

    fn point_place(&self, z: &Element) -> Result<Place> {
        self.check_point(z)?;
        let field = self.field();
        let base = field.base().unwrap();
        parse_place(&field, &format!("{} - ({})", field.var().unwrap(), base.fmt_element(z)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Branch {
    /// The Archimedean branch of `M_Q`, embedding `emb`.
    Arch { emb: usize },
    /// `f -> |f(z)|^eps` in a disc model.
    ArchAt(Element),
    /// The `p`-adic branch of `M_Q`.
    Prime(u64),
    /// `exp(-c * ord_z)` in a disc model.
    PointAt(Element),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Param {
    Zero,
    Finite(Scale),
    Infinite,
}

impl Param {
    pub fn parse(s: &str) -> Result<Param> {
        match s.trim() {
            "0" => Ok(Param::Zero),
            "inf" | "+inf" => Ok(Param::Infinite),
            t => Ok(Param::Finite(Scale::parse(t)?)),
        }
    }

    pub fn rational(q: Rational) -> Result<Param> {
        if q.is_zero() {
            Ok(Param::Zero)
        } else if q.is_positive() {
            Ok(Param::Finite(Scale::Rat(q)))
        } else {
            Err(Error::OutOfRange("parameters are non-negative".into()))
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Zero => write!(f, "0"),
            Param::Finite(s) => write!(f, "{}", s),
            Param::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchCoords {
    pub branch: Branch,
    pub param: Param,
}

impl BranchCoords {
    pub fn new(branch: Branch, param: Param) -> BranchCoords {
        BranchCoords { branch, param }
    }

    pub fn to_json(&self, model: &SpaceModel) -> Value {
        let base = model.field().constants();
        let b = match &self.branch {
            Branch::Arch { emb: 0 } => "arch".to_string(),
            Branch::Arch { emb } => format!("arch#{}", emb),
            Branch::ArchAt(z) => format!("arch@{}", base.fmt_element(z)),
            Branch::Prime(p) => p.to_string(),
            Branch::PointAt(z) => format!("na@{}", base.fmt_element(z)),
        };
        json!({"branch": b, "param": self.param.to_string()})
    }

    /// `{"branch": "arch" | "arch#i" | "p" | "arch@z" | "na@z", "param": "0" | "inf" | scale}`.
    pub fn from_json(model: &SpaceModel, v: &Value) -> Result<BranchCoords> {
        let s = |k: &str| -> Result<String> {
            match v.get(k) {
                Some(Value::String(s)) => Ok(s.clone()),
                Some(Value::Number(n)) => Ok(n.to_string()),
                _ => Err(Error::Json(format!("missing field '{}'", k))),
            }
        };
        let b = s("branch")?;
        let base = model.field().constants();
        let branch = if let Some(z) = b.strip_prefix("arch@") {
            Branch::ArchAt(parse_element(z, &base)?)
        } else if let Some(z) = b.strip_prefix("na@") {
            Branch::PointAt(parse_element(z, &base)?)
        } else if b == "arch" {
            Branch::Arch { emb: 0 }
        } else if let Some(i) = b.strip_prefix("arch#") {
            Branch::Arch { emb: i.parse().map_err(|_| Error::Json(format!("bad branch {}", b)))? }
        } else {
            Branch::Prime(b.parse().map_err(|_| Error::Json(format!("bad branch {}", b)))?)
        };
        Ok(BranchCoords { branch, param: Param::parse(&s("param")?)? })
    }
}

/// The point with the given branch coordinates.
pub fn point_from_branch(model: &SpaceModel, coords: &BranchCoords) -> Result<Pav> {
    let field = model.field();
    let arch_eps = |p: &Param| -> Result<Option<Rational>> {
        match p {
            Param::Zero => Ok(None),
            Param::Finite(Scale::Rat(e)) if *e <= Rational::one() => Ok(Some(e.clone())),
            _ => Err(Error::OutOfRange(format!("Archimedean parameter {} must lie in [0, 1]", p))),
        }
    };
    match (&coords.branch, model) {
        (Branch::Arch { emb }, SpaceModel::MQ) => match arch_eps(&coords.param)? {
            None => Ok(Pav::trivial(&field)),
            Some(e) => Pav::arch(&field, *emb, e),
        },
        (Branch::Prime(p), SpaceModel::MQ) => {
            let place = parse_place(&field, &p.to_string())?;
            ultra_branch(&field, place, &coords.param)
        }
        (Branch::ArchAt(z), SpaceModel::Disc { .. }) => {
            let place = model.point_place(z)?;
            match arch_eps(&coords.param)? {
                None => Ok(Pav::trivial(&field)),
                Some(e) => {
                    let k = residue_field(&field, &place)?;
                    Pav::compose(&field, place, Pav::arch(&k, 0, e)?)
                }
            }
        }
        (Branch::PointAt(z), SpaceModel::Disc { .. }) => {
            let place = model.point_place(z)?;
            ultra_branch(&field, place, &coords.param)
        }
        _ => Err(Error::OutOfRange("branch does not belong to this model".into())),
    }
}

fn ultra_branch(field: &FieldDescriptor, place: Place, p: &Param) -> Result<Pav> {
    match p {
        Param::Zero => Ok(Pav::trivial(field)),
        Param::Finite(c) => Pav::ultra(field, place, c.clone()),
        Param::Infinite => Pav::ultra_degenerate(field, place),
    }
}

/// `eps(x)`: the exponent of the Archimedean part, 0 for ultrametric `x`.
pub fn epsilon_of(x: &Pav) -> Rational {
    match x.kind() {
        PavKind::Arch { eps, .. } => eps.clone(),
        PavKind::Composite { residue, .. } => epsilon_of(residue),
        _ => Rational::zero(),
    }
}

/// `max(0, ln|2|_x) / ln 2` in floating point.
pub fn epsilon_numeric(x: &Pav) -> Result<f64> {
    let two = x.field().int(2);
    let v = x.eval(&two)?;
    Ok(if v.is_zero() { 0.0 } else { v.ln().max(0.0) / std::f64::consts::LN_2 })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonCheck {
    pub exact: Rational,
    pub numeric: f64,
    /// Decided exactly (rational or exponential value of `|2|`).
    pub exact_lane: bool,
    pub ok: bool,
}

/// Compares [`epsilon_of`] with the formula, exactly when `|2|_x` is exact.
pub fn epsilon_check(x: &Pav, tol: f64) -> Result<EpsilonCheck> {
    use crate::xreal::PosReal;
    let exact = epsilon_of(x);
    let numeric = epsilon_numeric(x)?;
    let v = x.eval(&x.field().int(2))?;
    let lane = match &v {
        XReal::Zero => Some(exact.is_zero()),
        XReal::Finite(PosReal::Rational(q)) => Some(if *q <= Rational::one() {
            exact.is_zero()
        } else {
            // q = 2^(a/b)  <=>  q^b = 2^a
            let (a, b) = (exact.numer().to_u32(), exact.denom().to_u32());
            match (a, b) {
                (Some(a), Some(b)) if a > 0 => num_traits::pow(q.clone(), b as usize) == Rational::from_integer(BigInt::from(2).pow(a)),
                _ => false,
            }
        }),
        XReal::Finite(PosReal::Exp(q)) if !q.is_positive() => Some(exact.is_zero()),
        _ => None,
    };
    let (exact_lane, ok) = match lane {
        Some(ok) => (true, ok),
        None => (false, (numeric - exact.to_f64().unwrap()).abs() <= tol),
    };
    Ok(EpsilonCheck { exact, numeric, exact_lane, ok })
}

#[derive(Clone, Debug, PartialEq)]
pub enum FlowExp {
    Finite(Rational),
    Infinite,
}

impl FlowExp {
    pub fn parse(s: &str) -> Result<FlowExp> {
        match s.trim() {
            "inf" | "+inf" => Ok(FlowExp::Infinite),
            t => {
                let q = parse_rational(t).ok_or_else(|| Error::SyntaxError { pos: 0, msg: format!("bad exponent '{}'", t) })?;
                if q.is_negative() {
                    return Err(Error::OutOfRange("flow exponents are non-negative".into()));
                }
                Ok(FlowExp::Finite(q))
            }
        }
    }
}

/// `x^s`: `|f|_{x^s} = |f|_x^s`, with `x^0` trivial and `x^inf` the
/// residually trivial point (`0`, `1`, `inf` as `|f|_x <, =, > 1`).
pub fn power_flow(x: &Pav, s: &FlowExp) -> Result<Pav> {
    let field = x.field();
    let s = match s {
        FlowExp::Finite(s) if s.is_zero() => return Ok(Pav::trivial(field)),
        FlowExp::Finite(s) => s,
        FlowExp::Infinite => return infinite_flow(x),
    };
    match x.kind() {
        PavKind::Trivial | PavKind::UltraDegenerate { .. } => Ok(x.clone()),
        PavKind::Arch { emb, eps } => {
            let e = eps * s;
            if e > Rational::one() {
                return Err(Error::OutOfRange(format!("eps(x^s) = {} exceeds 1", fmt_rational(&e))));
            }
            Pav::arch(field, *emb, e)
        }
        PavKind::Ultra { place, c } => Pav::ultra(field, place.clone(), c.scaled(s)),
        PavKind::Gauss { base, center, slope } => {
            let b = power_flow(base, &FlowExp::Finite(s.clone()))?;
            let slope = if matches!(base.kind(), PavKind::UltraDegenerate { .. }) { slope.clone() } else { slope * s };
            Pav::gauss(field, b, center.clone(), slope)
        }
        PavKind::Composite { place, residue } => {
            Pav::compose(field, place.clone(), power_flow(residue, &FlowExp::Finite(s.clone()))?)
        }
    }
}

fn infinite_flow(x: &Pav) -> Result<Pav> {
    let field = x.field();
    match x.kind() {
        PavKind::Trivial | PavKind::UltraDegenerate { .. } => Ok(x.clone()),
        PavKind::Arch { .. } => Err(Error::NotUltrametric("the infinite flow needs an ultrametric point".into())),
        PavKind::Ultra { place, .. } => Pav::ultra_degenerate(field, place.clone()),
        PavKind::Gauss { base, center, slope } => match base.kind() {
            PavKind::UltraDegenerate { .. } => Ok(x.clone()),
            PavKind::Ultra { place, c: Scale::Rat(c) } => {
                Pav::gauss(field, Pav::ultra_degenerate(base.field(), place.clone())?, center.clone(), slope / c)
            }
            PavKind::Trivial => {
                if slope.is_zero() {
                    Ok(Pav::trivial(field))
                } else if slope.is_positive() {
                    let var = field.var().unwrap();
                    let p = parse_place(field, &format!("{} - ({})", var, field.constants().fmt_element(center)))?;
                    Pav::ultra_degenerate(field, p)
                } else {
                    Pav::ultra_degenerate(field, Place::Infinity)
                }
            }
            _ => Err(Error::UnsupportedShape("Gauss point over this base".into())),
        },
        PavKind::Composite { place, residue } => Pav::compose(field, place.clone(), infinite_flow(residue)?),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Separation {
    pub f: Element,
    pub t: Rational,
    /// `|f|_1 > t > |f|_2` instead of `|f|_1 < t < |f|_2`.
    pub reversed: bool,
    pub values: (XReal, XReal),
    /// Candidates tried, this one included.
    pub tried: usize,
}

impl Separation {
    pub fn to_json(&self, field: &FieldDescriptor) -> Value {
        json!({
            "f": field.fmt_element(&self.f),
            "t": fmt_rational(&self.t),
            "reversed": self.reversed,
            "values": [self.values.0.to_json(), self.values.1.to_json()],
            "tried": self.tried,
        })
    }
}

const SMALL_PRIMES: [i64; 25] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

fn involved(v: &Pav, places: &mut Vec<Place>, points: &mut Vec<Element>) {
    match v.kind() {
        PavKind::Ultra { place, .. } | PavKind::UltraDegenerate { place } => places.push(place.clone()),
        PavKind::Gauss { base, center, .. } => {
            points.push(center.clone());
            involved(base, places, points);
        }
        PavKind::Composite { place, residue } => {
            places.push(place.clone());
            if let Some(z) = place.rational_point() {
                points.push(Element::Nf(z));
            }
            // residue places live on the residue field; only constants carry over
            if let PavKind::Ultra { place: Place::Prime(p), .. } | PavKind::UltraDegenerate { place: Place::Prime(p) } = residue.kind() {
                places.push(Place::Prime(*p));
            }
        }
        _ => {}
    }
}

/// Atoms of the deterministic search set: primes up to 97 and their inverses,
/// uniformizers of the involved places and shifts of `T` by involved points.
/// The search runs over the atoms, then over their pairwise products.
pub fn separation_atoms(v1: &Pav, v2: &Pav) -> Result<Vec<Element>> {
    let field = v1.field();
    let mut atoms: Vec<Element> = Vec::new();
    let push = |atoms: &mut Vec<Element>, e: Element| {
        if !e.is_zero() && !atoms.contains(&e) {
            atoms.push(e);
        }
    };
    for p in SMALL_PRIMES {
        push(&mut atoms, field.int(p));
        push(&mut atoms, field.int(p).inv()?);
    }
    let (mut places, mut points) = (Vec::new(), Vec::new());
    involved(v1, &mut places, &mut points);
    involved(v2, &mut places, &mut points);
    for pl in &places {
        let u = match pl {
            Place::Prime(p) => field.int(*p as i64),
            _ => match uniformizer(field, pl) {
                Ok(u) => u,
                Err(_) => continue,
            },
        };
        push(&mut atoms, u.inv()?);
        push(&mut atoms, u);
    }
    if let Some(t) = field.variable() {
        for k in [0, 1, -1, 2] {
            push(&mut atoms, t.sub(&field.int(k)));
        }
        push(&mut atoms, t.inv()?);
        for z in &points {
            for k in [0, 1, -1] {
                push(&mut atoms, t.sub(z).sub(&field.int(k)));
            }
        }
    }
    Ok(atoms)
}

/// A rational strictly between `a < b`, certified by exact comparison.
fn between(a: &XReal, b: &XReal) -> Option<Rational> {
    let t = match (a, b) {
        (XReal::Zero, XReal::Infinity) => Rational::one(),
        (XReal::Zero, _) => Rational::from_float(b.to_f64() / 2.0)?,
        (_, XReal::Infinity) => Rational::from_float(a.to_f64() * 2.0)?,
        _ => Rational::from_float(((a.ln() + b.ln()) / 2.0).exp())?,
    };
    let tx = XReal::rational(t.clone());
    if t.is_positive() && a.cmp(&tx) == XOrd::Less && b.cmp(&tx) == XOrd::Greater {
        Some(t)
    } else {
        None
    }
}

/// Finds `f` and `t` with `t` strictly between `|f|_1` and `|f|_2`.
pub fn separate(v1: &Pav, v2: &Pav) -> Result<Separation> {
    if v1.field() != v2.field() {
        return Err(Error::FieldMismatch("points live on different fields".into()));
    }
    let atoms = separation_atoms(v1, v2)?;
    let n = atoms.len();
    let pairs = (0..n).flat_map(|i| (i..n).map(move |j| (i, j)));
    let cands = atoms.iter().cloned().chain(pairs.map(|(i, j)| atoms[i].mul(&atoms[j])));
    for (k, f) in cands.enumerate() {
        let f = &f;
        let (a, b) = (v1.eval(f)?, v2.eval(f)?);
        let found = match a.cmp(&b) {
            XOrd::Less => between(&a, &b).map(|t| (t, false)),
            XOrd::Greater => between(&b, &a).map(|t| (t, true)),
            _ => None,
        };
        if let Some((t, reversed)) = found {
            let s = Separation { f: f.clone(), t, reversed, values: (a, b), tried: k + 1 };
            debug_assert!(verify_separation(v1, v2, &s)?);
            return Ok(s);
        }
    }
    Err(Error::NotSeparated { budget: n + n * (n + 1) / 2 })
}

/// Re-evaluates a witness.
pub fn verify_separation(v1: &Pav, v2: &Pav, s: &Separation) -> Result<bool> {
    let t = XReal::rational(s.t.clone());
    let (a, b) = (v1.eval(&s.f)?.cmp(&t), v2.eval(&s.f)?.cmp(&t));
    Ok(if s.reversed { a == XOrd::Greater && b == XOrd::Less } else { a == XOrd::Less && b == XOrd::Greater })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityTerm {
    pub n: usize,
    pub eps: Rational,
    pub z_n: Element,
    /// `z_n - z`.
    pub r: Rational,
}

/// Dyadic rational within relative `2^-50` of `exp(-x)`.
fn dyadic_exp_neg(x: f64) -> Rational {
    let k = (-x / std::f64::consts::LN_2).floor();
    let frac = -x - k * std::f64::consts::LN_2;
    let m = (frac.exp() * 2f64.powi(52)).round() as i64;
    let e = k as i64 - 52;
    let two = BigInt::from(2);
    if e >= 0 {
        Rational::from_integer(BigInt::from(m) * two.pow(e as u32))
    } else {
        Rational::new(BigInt::from(m), two.pow((-e) as u32))
    }
}

/// `eps_n = 1/n`, `z_n = z + r_n` with `|r_n|` within a factor 2 of `exp(-c n)`,
/// or `|r_n| <= exp(-n^2)` when `c = inf`; then `eps_n ln|z_n - z| -> -c`.
pub fn disc_density_sequence(model: &SpaceModel, z: &Element, c: &Param, n: usize) -> Result<DensityTerm> {
    let SpaceModel::Disc { field, .. } = model else {
        return Err(Error::OutOfRange("density sequences live in disc models".into()));
    };
    if n == 0 {
        return Err(Error::OutOfRange("n starts at 1".into()));
    }
    let r = match c {
        Param::Zero => return Err(Error::OutOfRange("c must be positive".into())),
        Param::Finite(s) => dyadic_exp_neg(s.to_f64() * n as f64),
        Param::Infinite => {
            let bits = ((n * n) as f64 / std::f64::consts::LN_2).ceil() as u32;
            Rational::new(BigInt::one(), BigInt::from(2).pow(bits))
        }
    };
    let base = field.base().unwrap();
    let z_n = base.coerce(z)?.add(&base.rational(r.clone()));
    Ok(DensityTerm { n, eps: Rational::new(BigInt::one(), BigInt::from(n)), z_n, r })
}

/// The Archimedean point `f -> |f(z_n)|^(eps_n)` of a density term.
pub fn density_point(model: &SpaceModel, term: &DensityTerm) -> Result<Pav> {
    point_from_branch(model, &BranchCoords::new(Branch::ArchAt(term.z_n.clone()), Param::rational(term.eps.clone())?))
}

/// The limit of a density sequence: `exp(-c ord_z)`, or its degenerate form.
pub fn density_target(model: &SpaceModel, z: &Element, c: &Param) -> Result<Pav> {
    point_from_branch(model, &BranchCoords::new(Branch::PointAt(z.clone()), c.clone()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub fn_id: usize,
    pub value: f64,
    pub target: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Largest final-index gap over finite targets.
    pub max_gap: f64,
    /// Test functions whose final value misses its target.
    pub failures: Vec<usize>,
    pub passed: bool,
}

impl ConvergenceReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,fn_id,value,target,gap\n");
        for r in &self.rows {
            s.push_str(&format!("{},{},{:e},{:e},{:e}\n", r.n, r.fn_id, r.value, r.target, r.gap));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({"max_gap": self.max_gap, "failures": self.failures, "passed": self.passed, "rows": self.rows.len()})
    }
}

/// Checks `|f|_{v_n} -> |f|_target` at the last index: finite targets within
/// `tol`, zero targets by `<= tol`, infinite targets by `>= 1/tol`.
pub fn check_convergence(seq: &[(usize, Pav)], target: &Pav, fns: &[Element], tol: f64) -> Result<ConvergenceReport> {
    let last = seq.last().map(|s| s.0);
    let tol_x = XReal::rational(Rational::from_float(tol).ok_or_else(|| Error::OutOfRange("bad tolerance".into()))?);
    let (mut rows, mut max_gap, mut failures) = (Vec::new(), 0f64, Vec::new());
    for (id, f) in fns.iter().enumerate() {
        let tv = target.eval(f)?;
        for (n, v) in seq {
            let val = v.eval(f)?;
            let gap = match &tv {
                XReal::Zero => val.to_f64(),
                XReal::Infinity => 1.0 / val.to_f64(),
                t => (val.to_f64() - t.to_f64()).abs(),
            };
            rows.push(ConvergenceRow { n: *n, fn_id: id, value: val.to_f64(), target: tv.to_f64(), gap });
            if Some(*n) == last {
                let ok = match &tv {
                    XReal::Zero => val.cmp(&tol_x) != XOrd::Greater,
                    XReal::Infinity => val.cmp(&tol_x.inv()) != XOrd::Less,
                    _ => {
                        max_gap = max_gap.max(gap);
                        gap <= tol
                    }
                };
                if !ok {
                    failures.push(id);
                }
            }
        }
    }
    let passed = failures.is_empty();
    Ok(ConvergenceReport { rows, max_gap, failures, passed })
}

/// Finiteness ring `A_v` as a symbolic descriptor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FinitenessRing {
    FullField,
    LocalRingAtPlace(String),
    /// Composite valuation rings, outermost place first.
    CompositeChain(Vec<String>),
    /// `{f : w(f) >= 0}` for a Gauss valuation over a residually trivial base.
    GaussRing { place: String, center: String, slope: String },
}

impl FinitenessRing {
    pub fn to_json(&self) -> Value {
        match self {
            FinitenessRing::FullField => json!({"kind": "full_field"}),
            FinitenessRing::LocalRingAtPlace(p) => json!({"kind": "local_ring", "place": p}),
            FinitenessRing::CompositeChain(ps) => json!({"kind": "composite_chain", "places": ps}),
            FinitenessRing::GaussRing { place, center, slope } => {
                json!({"kind": "gauss_ring", "place": place, "center": center, "slope": slope})
            }
        }
    }
}

/// The specification map `v -> A_v`.
pub fn specification(v: &Pav) -> FinitenessRing {
    let field = v.field();
    match v.kind() {
        PavKind::Trivial | PavKind::Arch { .. } | PavKind::Ultra { .. } => FinitenessRing::FullField,
        PavKind::UltraDegenerate { place } => FinitenessRing::LocalRingAtPlace(fmt_place(field, place)),
        PavKind::Gauss { base, center, slope } => match base.kind() {
            PavKind::UltraDegenerate { place } => FinitenessRing::GaussRing {
                place: fmt_place(base.field(), place),
                center: base.field().fmt_element(center),
                slope: fmt_rational(slope),
            },
            _ => FinitenessRing::FullField,
        },
        PavKind::Composite { place, residue } => {
            let head = fmt_place(field, place);
            match specification(residue) {
                FinitenessRing::FullField => FinitenessRing::LocalRingAtPlace(head),
                FinitenessRing::LocalRingAtPlace(p) => FinitenessRing::CompositeChain(vec![head, p]),
                FinitenessRing::CompositeChain(mut ps) => {
                    ps.insert(0, head);
                    FinitenessRing::CompositeChain(ps)
                }
                g @ FinitenessRing::GaussRing { .. } => g,
            }
        }
    }
}

/// An integral structure `(A, ||.||_A)` named by the space it classifies to.
#[derive(Clone, Debug, PartialEq)]
pub enum IntegralStructure {
    /// `Z` with `max(|.|_inf, |.|_0)`.
    IntegersHybrid,
    /// Germs of analytic functions on a closed disc, with the hybrid norm.
    DiscGerms { base: FieldDescriptor, var: String, radius: Rational },
}

impl IntegralStructure {
    pub fn parse(ring: &str, norm: &str) -> Result<IntegralStructure> {
        if norm != "hybrid" {
            return Err(Error::UnsupportedShape(format!("norm '{}' (only the hybrid norm is classified)", norm)));
        }
        if ring == "Z" {
            return Ok(IntegralStructure::IntegersHybrid);
        }
        let rest = ring.strip_prefix("germs(").and_then(|r| r.strip_suffix(')'));
        let (base, radius) = rest.and_then(|r| r.split_once(',')).ok_or_else(|| Error::UnsupportedShape(format!("ring '{}'", ring)))?;
        let radius = parse_rational(radius.trim()).ok_or_else(|| Error::OutOfRange("radius".into()))?;
        let base = crate::fields::parse_field(base.trim())?;
        Ok(IntegralStructure::DiscGerms { base, var: "T".into(), radius })
    }

    pub fn space_model(&self) -> Result<SpaceModel> {
        match self {
            IntegralStructure::IntegersHybrid => Ok(SpaceModel::MQ),
            IntegralStructure::DiscGerms { base, var, radius } => SpaceModel::disc(base, var, radius.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::parse_field;
    use crate::scalar::{int, rat};

    fn disc() -> SpaceModel {
        SpaceModel::disc(&FieldDescriptor::Rationals, "T", int(3)).unwrap()
    }

    fn coords(b: Branch, p: Param) -> BranchCoords {
        BranchCoords::new(b, p)
    }

    #[test]
    fn branch_points() {
        let v = point_from_branch(&SpaceModel::MQ, &coords(Branch::Prime(5), Param::Infinite)).unwrap();
        assert!(matches!(v.kind(), PavKind::UltraDegenerate { .. }));
        for b in [Branch::Prime(5), Branch::Arch { emb: 0 }] {
            let v = point_from_branch(&SpaceModel::MQ, &coords(b, Param::Zero)).unwrap();
            assert_eq!(v.kind(), &PavKind::Trivial);
        }
        assert!(point_from_branch(&SpaceModel::MQ, &coords(Branch::Arch { emb: 0 }, Param::rational(int(2)).unwrap())).is_err());

        let m = disc();
        let f = m.field();
        let v = point_from_branch(&m, &coords(Branch::ArchAt(f.constants().int(2)), Param::rational(rat(1, 2)).unwrap())).unwrap();
        let g = parse_element("T^2 + 1", &f).unwrap();
        assert!((v.eval(&g).unwrap().to_f64() - 5f64.sqrt()).abs() < 1e-12);
        assert_eq!(v.eval(&parse_element("T - 2", &f).unwrap()).unwrap(), XReal::Zero);
        assert!(point_from_branch(&m, &coords(Branch::ArchAt(f.constants().int(7)), Param::rational(int(1)).unwrap())).is_err());

        let c = coords(Branch::PointAt(f.constants().int(-1)), Param::parse("log(5)").unwrap());
        assert_eq!(BranchCoords::from_json(&m, &c.to_json(&m)).unwrap(), c);
    }

    #[test]
    fn epsilon() {
        let q = FieldDescriptor::Rationals;
        assert_eq!(epsilon_of(&Pav::arch(&q, 0, rat(1, 2)).unwrap()), rat(1, 2));
        let p2 = Pav::ultra(&q, Place::Prime(2), Scale::log(2)).unwrap();
        assert_eq!(epsilon_of(&p2), int(0));
        for v in [p2, Pav::trivial(&q), Pav::arch(&q, 0, int(1)).unwrap(), Pav::arch(&q, 0, rat(1, 3)).unwrap()] {
            assert!(epsilon_check(&v, 1e-9).unwrap().ok);
        }
        assert!(epsilon_check(&Pav::arch(&q, 0, int(1)).unwrap(), 1e-9).unwrap().exact_lane);
    }

    #[test]
    fn flows() {
        let f = parse_field("Q(T)").unwrap();
        let x = Pav::ultra(&f, parse_place(&f, "T-2").unwrap(), Scale::Rat(int(1))).unwrap();
        let y = power_flow(&x, &FlowExp::Finite(int(3))).unwrap();
        assert_eq!(y, Pav::ultra(&f, parse_place(&f, "T-2").unwrap(), Scale::Rat(int(3))).unwrap());
        let q = FieldDescriptor::Rationals;
        let p5 = Pav::ultra(&q, Place::Prime(5), Scale::log(5)).unwrap();
        assert_eq!(power_flow(&p5, &FlowExp::Infinite).unwrap(), Pav::ultra_degenerate(&q, Place::Prime(5)).unwrap());
        assert_eq!(power_flow(&p5, &FlowExp::Finite(int(0))).unwrap(), Pav::trivial(&q));
        let a = Pav::arch(&q, 0, rat(1, 2)).unwrap();
        assert!(matches!(power_flow(&a, &FlowExp::Finite(int(3))), Err(Error::OutOfRange(_))));
        assert!(matches!(power_flow(&a, &FlowExp::Infinite), Err(Error::NotUltrametric(_))));

        let g = Pav::gauss(&f, Pav::ultra(&q, Place::Prime(5), Scale::Rat(int(2))).unwrap(), q.int(1), rat(1, 2)).unwrap();
        let gi = power_flow(&g, &FlowExp::Infinite).unwrap();
        assert_eq!(power_flow(&gi, &FlowExp::Infinite).unwrap(), gi);
        let pi = power_flow(&p5, &FlowExp::Infinite).unwrap();
        assert_eq!(power_flow(&pi, &FlowExp::Infinite).unwrap(), pi);
        for s in ["T - 1", "5", "(T-1)^2/5", "T - 6", "(T-1)/25", "T + 3"] {
            let e = parse_element(s, &f).unwrap();
            let v = g.eval(&e).unwrap();
            let expect = match v.cmp(&XReal::one()) {
                XOrd::Less => XReal::Zero,
                XOrd::Equal => XReal::one(),
                _ => XReal::Infinity,
            };
            assert_eq!(gi.eval(&e).unwrap(), expect, "{}", s);
        }
    }

    #[test]
    fn separation() {
        let q = FieldDescriptor::Rationals;
        let a = Pav::arch(&q, 0, int(1)).unwrap();
        let p5 = Pav::ultra(&q, Place::Prime(5), Scale::log(5)).unwrap();
        let s = separate(&a, &p5).unwrap();
        assert!(verify_separation(&a, &p5, &s).unwrap());
        let p3 = Pav::ultra(&q, Place::Prime(3), Scale::Rat(int(1))).unwrap();
        let s = separate(&p5, &p3).unwrap();
        assert!(verify_separation(&p5, &p3, &s).unwrap());
        assert!(matches!(separate(&p5, &p5), Err(Error::NotSeparated { .. })));

        let m = disc();
        let f = m.field();
        let u = point_from_branch(&m, &coords(Branch::ArchAt(f.constants().int(1)), Param::rational(int(1)).unwrap())).unwrap();
        let w = point_from_branch(&m, &coords(Branch::ArchAt(f.constants().int(1)), Param::rational(rat(1, 2)).unwrap())).unwrap();
        let s = separate(&u, &w).unwrap();
        assert!(verify_separation(&u, &w, &s).unwrap());
    }

    #[test]
    fn density_terms() {
        let m = disc();
        let z = FieldDescriptor::Rationals.int(0);
        let t = disc_density_sequence(&m, &z, &Param::rational(int(1)).unwrap(), 3).unwrap();
        assert_eq!(t.eps, rat(1, 3));
        let r = t.r.to_f64().unwrap();
        let e3 = (-3f64).exp();
        assert!(r >= e3 / 2.0 && r <= 2.0 * e3);
        let t = disc_density_sequence(&m, &z, &Param::Infinite, 2).unwrap();
        assert!(t.r.to_f64().unwrap() <= (-4f64).exp());

        let f = m.field();
        let c = Param::rational(int(1)).unwrap();
        let seq: Vec<(usize, Pav)> = [10, 50, 200]
            .iter()
            .map(|&n| (n, density_point(&m, &disc_density_sequence(&m, &z, &c, n).unwrap()).unwrap()))
            .collect();
        let target = density_target(&m, &z, &c).unwrap();
        let fns = vec![parse_element("T", &f).unwrap()];
        let rep = check_convergence(&seq, &target, &fns, 1e-6).unwrap();
        assert!(rep.passed, "{:?}", rep);
        // units converge only like 1/n
        let fns = vec![parse_element("T - 5", &f).unwrap()];
        let rep = check_convergence(&seq, &target, &fns, 1e-6).unwrap();
        assert!(!rep.passed && rep.max_gap < 1e-2);
    }

    #[test]
    fn specification_map() {
        let q = FieldDescriptor::Rationals;
        assert_eq!(specification(&Pav::arch(&q, 0, int(1)).unwrap()), FinitenessRing::FullField);
        let f = parse_field("Q(T)").unwrap();
        let v = Pav::ultra_degenerate(&f, parse_place(&f, "T-2").unwrap()).unwrap();
        assert_eq!(specification(&v), FinitenessRing::LocalRingAtPlace("T - 2".into()));
        let c = Pav::compose(&f, parse_place(&f, "T").unwrap(), Pav::ultra_degenerate(&q, Place::Prime(5)).unwrap()).unwrap();
        assert_eq!(specification(&c), FinitenessRing::CompositeChain(vec!["T".into(), "5".into()]));
        let c = Pav::compose(&f, parse_place(&f, "T").unwrap(), Pav::ultra(&q, Place::Prime(5), Scale::log(5)).unwrap()).unwrap();
        assert_eq!(specification(&c), FinitenessRing::LocalRingAtPlace("T".into()));
    }

    #[test]
    fn integral_structures() {
        assert_eq!(IntegralStructure::parse("Z", "hybrid").unwrap().space_model().unwrap(), SpaceModel::MQ);
        let m = IntegralStructure::parse("germs(Q, 2)", "hybrid").unwrap().space_model().unwrap();
        assert!(matches!(m, SpaceModel::Disc { .. }));
        assert!(IntegralStructure::parse("Z", "sup").is_err());
    }
}
