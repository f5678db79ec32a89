//! Pseudo-norms `||.||_v` on `K^d` given by an adapted basis and a diagonal
//! residue norm, with restriction, quotient, dual, tensor, exterior powers
//! and determinant.
//!
//! With coordinates `a = B^{-1} x` in the adapted basis `B`:
//! - `UltraSup`: `||x|| = max_i |a_i|_v w_i`
//! - `HermL2`: `||x|| = (sum_i (|a_i|_v w_i)^(2/eps))^(eps/2)`, where `eps` is the
//!   exponent of the Archimedean absolute value (`eps = 1` gives the plain L2 form).
//!
//! Coordinates outside `A_v` have `|a_i|_v = inf` and coordinates in `m_v` have
//! `|a_i|_v = 0`, so both formulas agree with the residue norm on residues.

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fields::numfield::EmbeddingKind;
use crate::fields::{parse_element, Element, FieldDescriptor};
use crate::linalg::{subsets, Matrix};
use crate::pav::{Pav, PavKind};
use crate::scalar::{Field, Rational};
use crate::xreal::{XOrd, XReal};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    UltraSup,
    HermL2,
}

impl Flavor {
    pub fn for_pav(v: &Pav) -> Flavor {
        if v.is_archimedean() {
            Flavor::HermL2
        } else {
            Flavor::UltraSup
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Flavor::UltraSup => "ultra_sup",
            Flavor::HermL2 => "herm_l2",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PseudoNorm {
    pav: Pav,
    basis: Matrix<Element>,
    inv: Matrix<Element>,
    weights: Vec<XReal>,
    flavor: Flavor,
    /// Squared Hermitian weights `W_i^2 = w_i^(2/eps)` as elements of `K`, when exact.
    sq: Option<Vec<Element>>,
}

/// A quotient pseudo-norm together with the projection from ambient coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Quotient {
    pub norm: PseudoNorm,
    /// `(d - r) x d`, ambient vector to quotient coordinates.
    pub map: Matrix<Element>,
}

impl Quotient {
    pub fn project(&self, x: &[Element]) -> Result<Vec<Element>> {
        check_dim(self.map.cols(), x.len())?;
        Ok(self.map.mul_vec(x))
    }

    /// `||x mod F||`.
    pub fn eval_class(&self, x: &[Element]) -> Result<XReal> {
        self.norm.eval(&self.project(x)?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HadamardReport {
    pub det_norm: XReal,
    /// `prod ||x_i||`, `None` when a `0 * inf` product occurs.
    pub product: Option<XReal>,
    pub relation: XOrd,
}

impl HadamardReport {
    /// `||eta||_det <= prod ||x_i||`; an indeterminate comparison counts as a pass.
    pub fn holds(&self) -> bool {
        self.product.is_none() || self.relation != XOrd::Greater
    }

    pub fn is_equality(&self) -> bool {
        self.relation == XOrd::Equal
    }

    pub fn to_json(&self) -> Value {
        json!({
            "det_norm": self.det_norm.to_json(),
            "product": self.product.as_ref().map(XReal::to_json),
            "relation": ord_name(self.relation),
            "holds": self.holds(),
        })
    }
}

pub fn ord_name(o: XOrd) -> &'static str {
    match o {
        XOrd::Less => "less",
        XOrd::Equal => "equal",
        XOrd::Greater => "greater",
        XOrd::Indeterminate => "indeterminate",
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

fn eps_of(v: &Pav) -> Rational {
    match v.kind() {
        PavKind::Arch { eps, .. } => eps.clone(),
        PavKind::Composite { residue, .. } => eps_of(residue),
        _ => Rational::one(),
    }
}

fn xmul(a: &XReal, b: &XReal) -> XReal {
    a.mul(b).expect("finite weights")
}

/// Exact `w^(2/eps)` when it is rational.
fn exact_square(w: &XReal, eps: &Rational) -> Option<Element> {
    let two = Rational::from_integer(BigInt::from(2));
    w.pow(&(two / eps)).as_rational().map(|q| <Element as Field>::from_rational(&q))
}

/// Result of orthogonalizing generators in adapted coordinates.
struct Ortho {
    /// Orthogonal vectors, adapted coordinates.
    vecs: Vec<Vec<Element>>,
    /// The same vectors as combinations of the generators.
    comb: Vec<Vec<Element>>,
    weights: Vec<XReal>,
    sq: Option<Vec<Element>>,
    /// Pivot rows (ultrametric elimination and coordinate subspaces).
    pivots: Option<Vec<usize>>,
}

impl PseudoNorm {
    /// `basis` columns are the adapted basis; the flavor follows the PAV.
    pub fn new(pav: &Pav, basis: Matrix<Element>, weights: Vec<XReal>) -> Result<PseudoNorm> {
        let d = basis.rows();
        check_dim(d, basis.cols())?;
        check_dim(d, weights.len())?;
        if let Some(w) = weights.iter().find(|w| !w.is_finite_positive()) {
            return Err(Error::OutOfRange(format!("weight {} is not finite positive", w)));
        }
        let field = pav.field();
        let rows = basis.to_rows().iter().map(|r| r.iter().map(|e| field.coerce(e)).collect()).collect::<Result<Vec<_>>>()?;
        let basis = Matrix::from_rows(rows);
        let inv = basis.inverse().ok_or(Error::RankDeficient)?;
        let flavor = Flavor::for_pav(pav);
        let sq = match flavor {
            Flavor::HermL2 => {
                let eps = eps_of(pav);
                weights.iter().map(|w| exact_square(w, &eps)).collect()
            }
            Flavor::UltraSup => None,
        };
        Ok(PseudoNorm { pav: pav.clone(), basis, inv, weights, flavor, sq })
    }

    pub fn diagonal(pav: &Pav, weights: Vec<XReal>) -> Result<PseudoNorm> {
        let n = weights.len();
        PseudoNorm::new(pav, Matrix::identity(n), weights)
    }

    fn raw(pav: &Pav, basis: Matrix<Element>, inv: Matrix<Element>, weights: Vec<XReal>, sq: Option<Vec<Element>>) -> PseudoNorm {
        PseudoNorm { pav: pav.clone(), basis, inv, weights, flavor: Flavor::for_pav(pav), sq }
    }

    pub fn pav(&self) -> &Pav {
        &self.pav
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn basis(&self) -> &Matrix<Element> {
        &self.basis
    }

    pub fn weights(&self) -> &[XReal] {
        &self.weights
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// Coordinates of `x` in the adapted basis.
    pub fn coordinates(&self, x: &[Element]) -> Result<Vec<Element>> {
        check_dim(self.dim(), x.len())?;
        let x: Vec<Element> = x.iter().map(|e| self.pav.field().coerce(e)).collect::<Result<_>>()?;
        Ok(self.inv.mul_vec(&x))
    }

    pub fn eval(&self, x: &[Element]) -> Result<XReal> {
        let a = self.coordinates(x)?;
        self.combine(&a)
    }

    /// The residue norm applied to adapted coordinates.
    fn combine(&self, a: &[Element]) -> Result<XReal> {
        let mut terms = Vec::with_capacity(a.len());
        for (ai, w) in a.iter().zip(&self.weights) {
            let t = self.pav.eval(ai)?;
            if t.is_infinite() {
                return Ok(XReal::Infinity);
            }
            terms.push(xmul(&t, w));
        }
        Ok(match self.flavor {
            Flavor::UltraSup => terms.iter().fold(XReal::Zero, |m, t| m.max(t)),
            Flavor::HermL2 => {
                let eps = eps_of(&self.pav);
                let two = Rational::from_integer(BigInt::from(2));
                let s = terms.iter().fold(XReal::Zero, |s, t| s.add(&t.pow(&(two.clone() / &eps))));
                s.pow(&(eps / two))
            }
        })
    }

    fn to_adapted(&self, gens: &Matrix<Element>) -> Result<Vec<Vec<Element>>> {
        check_dim(self.dim(), gens.rows())?;
        if gens.cols() == 0 {
            return Err(Error::RankDeficient);
        }
        let field = self.pav.field();
        let mut cols = Vec::with_capacity(gens.cols());
        for j in 0..gens.cols() {
            let c: Vec<Element> = gens.col(j).iter().map(|e| field.coerce(e)).collect::<Result<_>>()?;
            cols.push(self.inv.mul_vec(&c));
        }
        if Matrix::from_cols(cols.clone()).rank() < cols.len() {
            return Err(Error::RankDeficient);
        }
        Ok(cols)
    }

    /// Columns each supported on one coordinate, all coordinates distinct.
    fn coordinate_ortho(&self, cols: &[Vec<Element>]) -> Result<Option<Ortho>> {
        let mut pivots = Vec::new();
        for c in cols {
            let nz: Vec<usize> = (0..c.len()).filter(|&i| !c[i].is_zero()).collect();
            if nz.len() != 1 || pivots.contains(&nz[0]) {
                return Ok(None);
            }
            pivots.push(nz[0]);
        }
        let mut weights = Vec::new();
        for (c, &p) in cols.iter().zip(&pivots) {
            weights.push(xmul(&self.pav.eval(&c[p])?, &self.weights[p]));
        }
        let sq = self.sq.as_ref().map(|s| cols.iter().zip(&pivots).map(|(c, &p)| c[p].mul(&c[p]).mul(&s[p])).collect());
        let r = cols.len();
        let comb = (0..r).map(|j| unit(r, j)).collect();
        Ok(Some(Ortho { vecs: cols.to_vec(), comb, weights, sq, pivots: Some(pivots) }))
    }

    /// `true` when `|a_k| w_k > |a_i| w_i`, decided as `|a_k / a_i| w_k > w_i`.
    fn beats(&self, ak: &Element, wk: &XReal, ai: &Element, wi: &XReal) -> Result<bool> {
        let r = self.pav.eval(&ak.div(ai)?)?;
        Ok(r.mul(wk).map_or(true, |x| x.cmp(wi) == XOrd::Greater))
    }

    /// Tropical elimination: pivot on the dominant entry of each column
    /// (lowest row on ties), normalize, clear the pivot row everywhere else.
    fn ultra_ortho(&self, cols: &[Vec<Element>]) -> Result<Ortho> {
        let r = cols.len();
        let mut vecs = cols.to_vec();
        let mut comb: Vec<Vec<Element>> = (0..r).map(|j| unit(r, j)).collect();
        let mut pivots = Vec::with_capacity(r);
        for j in 0..r {
            let mut best: Option<usize> = None;
            for i in 0..self.dim() {
                if vecs[j][i].is_zero() {
                    continue;
                }
                best = match best {
                    None => Some(i),
                    Some(b) if self.beats(&vecs[j][i], &self.weights[i], &vecs[j][b], &self.weights[b])? => Some(i),
                    keep => keep,
                };
            }
            let p = best.ok_or(Error::RankDeficient)?;
            let s = vecs[j][p].inv()?;
            vecs[j] = scale(&vecs[j], &s);
            comb[j] = scale(&comb[j], &s);
            for l in 0..r {
                if l != j && !vecs[l][p].is_zero() {
                    let t = vecs[l][p].clone();
                    vecs[l] = axpy(&vecs[l], &t, &vecs[j]);
                    comb[l] = axpy(&comb[l], &t, &comb[j]);
                }
            }
            pivots.push(p);
        }
        let weights = pivots.iter().map(|&p| self.weights[p].clone()).collect();
        Ok(Ortho { vecs, comb, weights, sq: None, pivots: Some(pivots) })
    }

    fn hermitian_ready(&self) -> Result<&[Element]> {
        let real = match self.pav.kind() {
            PavKind::Arch { emb, .. } => match self.pav.field().number_field() {
                None => true,
                Some(k) => k.embedding(*emb)?.kind == EmbeddingKind::Real,
            },
            _ => false,
        };
        if !real {
            return Err(Error::UnsupportedShape("Gram-Schmidt needs a real embedding".into()));
        }
        self.sq
            .as_deref()
            .ok_or_else(|| Error::UnsupportedShape("Gram-Schmidt needs exact squared weights".into()))
    }

    fn inner(sq: &[Element], x: &[Element], y: &[Element]) -> Element {
        x.iter().zip(y).zip(sq).fold(Element::zero(0), |s, ((a, b), w)| s.add(&a.mul(b).mul(w)))
    }

    /// Gram-Schmidt with exact inner products; zero remainders are skipped
    /// when `skip_dependent` is set and rejected otherwise.
    fn herm_ortho(&self, cols: &[Vec<Element>], skip_dependent: bool) -> Result<Ortho> {
        let sq = self.hermitian_ready()?.to_vec();
        let r = cols.len();
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        let (mut vecs, mut comb, mut grams): (Vec<Vec<Element>>, Vec<Vec<Element>>, Vec<Element>) = (vec![], vec![], vec![]);
        for (j, v) in cols.iter().enumerate() {
            let mut u = v.clone();
            let mut c = unit(r, j);
            for ((uk, ck), gk) in vecs.iter().zip(&comb).zip(&grams) {
                let t = Self::inner(&sq, v, uk).div(gk)?;
                u = axpy(&u, &t, uk);
                c = axpy(&c, &t, ck);
            }
            if u.iter().all(Element::is_zero) {
                if skip_dependent {
                    continue;
                }
                return Err(Error::RankDeficient);
            }
            grams.push(Self::inner(&sq, &u, &u));
            vecs.push(u);
            comb.push(c);
        }
        let weights = grams.iter().map(|g| Ok(self.pav.eval(g)?.pow(&half))).collect::<Result<_>>()?;
        Ok(Ortho { vecs, comb, weights, sq: Some(grams), pivots: None })
    }

    fn ortho(&self, cols: &[Vec<Element>]) -> Result<Ortho> {
        if let Some(o) = self.coordinate_ortho(cols)? {
            return Ok(o);
        }
        match self.flavor {
            Flavor::UltraSup => self.ultra_ortho(cols),
            Flavor::HermL2 => self.herm_ortho(cols, false),
        }
    }

    /// Restriction to the span of the columns of `gens`. The result lives on
    /// `K^r` with coordinates relative to those columns.
    pub fn restrict(&self, gens: &Matrix<Element>) -> Result<PseudoNorm> {
        let cols = self.to_adapted(gens)?;
        let o = self.ortho(&cols)?;
        let basis = Matrix::from_cols(o.comb);
        let inv = basis.inverse().ok_or(Error::RankDeficient)?;
        Ok(PseudoNorm::raw(&self.pav, basis, inv, o.weights, o.sq))
    }

    /// Quotient by the span of the columns of `gens`.
    pub fn quotient(&self, gens: &Matrix<Element>) -> Result<Quotient> {
        let d = self.dim();
        let cols = self.to_adapted(gens)?;
        if cols.len() >= d {
            return Err(Error::OutOfRange("the killed subspace must be proper".into()));
        }
        let coord = self.coordinate_ortho(&cols)?;
        let (rows, weights, sq) = match (self.flavor, coord) {
            (Flavor::HermL2, None) => {
                let mut all = cols.clone();
                all.extend((0..d).map(|i| unit(d, i)));
                let o = self.herm_ortho(&all, true)?;
                let grams = o.sq.unwrap();
                let sq = self.sq.as_ref().unwrap();
                let mut rows = Vec::new();
                for (u, g) in o.vecs.iter().zip(&grams).skip(cols.len()) {
                    let gi = g.inv()?;
                    rows.push(u.iter().zip(sq).map(|(a, s)| a.mul(s).mul(&gi)).collect::<Vec<_>>());
                }
                let n = cols.len();
                (rows, o.weights[n..].to_vec(), Some(grams[n..].to_vec()))
            }
            (_, coord) => {
                let o = match coord {
                    Some(o) => o,
                    None => self.ultra_ortho(&cols)?,
                };
                let pivots = o.pivots.unwrap();
                // x -> x - sum_k x[p_k] u_k / u_k[p_k], read off on the free rows
                let mut proj = Matrix::<Element>::identity(d);
                for (u, &p) in o.vecs.iter().zip(&pivots) {
                    let s = u[p].inv()?;
                    for i in 0..d {
                        let v = proj.get(i, p).sub(&u[i].mul(&s));
                        proj.set(i, p, v);
                    }
                }
                let free: Vec<usize> = (0..d).filter(|i| !pivots.contains(i)).collect();
                let rows = free.iter().map(|&i| proj.row(i)).collect();
                let weights = free.iter().map(|&i| self.weights[i].clone()).collect();
                let sq = self.sq.as_ref().map(|s| free.iter().map(|&i| s[i].clone()).collect());
                (rows, weights, sq)
            }
        };
        let map = Matrix::from_rows(rows).mul(&self.inv);
        let n = weights.len();
        let norm = PseudoNorm::raw(&self.pav, Matrix::identity(n), Matrix::identity(n), weights, sq);
        Ok(Quotient { norm, map })
    }

    /// Dual norm on `(K^d)^*`, coordinates in the dual of the standard basis.
    pub fn dual(&self) -> PseudoNorm {
        let basis = self.inv.transpose();
        let inv = self.basis.transpose();
        let weights = self.weights.iter().map(XReal::inv).collect();
        let sq = self.sq.as_ref().map(|s| s.iter().map(|x| x.inv().expect("nonzero")).collect());
        PseudoNorm::raw(&self.pav, basis, inv, weights, sq)
    }

    pub fn tensor(&self, o: &PseudoNorm) -> Result<PseudoNorm> {
        if self.pav != o.pav {
            return Err(Error::PavMismatch);
        }
        let basis = self.basis.kronecker(&o.basis);
        let inv = self.inv.kronecker(&o.inv);
        let mut weights = Vec::new();
        for a in &self.weights {
            for b in &o.weights {
                weights.push(xmul(a, b));
            }
        }
        let sq = match (&self.sq, &o.sq) {
            (Some(s), Some(t)) => Some(s.iter().flat_map(|a| t.iter().map(move |b| a.mul(b))).collect()),
            _ => None,
        };
        Ok(PseudoNorm::raw(&self.pav, basis, inv, weights, sq))
    }

    /// `Lambda^i`, on the wedge basis `e_S` for lexicographic `i`-subsets `S`.
    pub fn exterior(&self, i: usize) -> Result<PseudoNorm> {
        let d = self.dim();
        if i == 0 || i > d {
            return Err(Error::OutOfRange(format!("exterior power {} of a {}-dimensional space", i, d)));
        }
        let subs = subsets(d, i);
        let basis = self.basis.compound(i);
        let inv = self.inv.compound(i);
        let weights = subs
            .iter()
            .map(|s| s.iter().fold(XReal::one(), |acc, &k| xmul(&acc, &self.weights[k])))
            .collect();
        let sq = self.sq.as_ref().map(|sq| {
            subs.iter().map(|s| s.iter().fold(Element::one(0), |acc, &k| acc.mul(&sq[k]))).collect()
        });
        Ok(PseudoNorm::raw(&self.pav, basis, inv, weights, sq))
    }

    pub fn det(&self) -> PseudoNorm {
        self.exterior(self.dim()).expect("top exterior power")
    }

    pub fn to_json(&self) -> Value {
        let field = self.pav.field();
        let basis: Vec<Vec<String>> =
            self.basis.to_rows().iter().map(|r| r.iter().map(|e| field.fmt_element(e)).collect()).collect();
        json!({
            "pav": self.pav.to_json(),
            "basis": basis,
            "weights": self.weights.iter().map(XReal::to_json).collect::<Vec<_>>(),
            "flavor": self.flavor.name(),
        })
    }

    /// `basis` defaults to the identity; weights are XReal objects or text like `"exp(-1)"`.
    pub fn from_json(field: &FieldDescriptor, v: &Value) -> Result<PseudoNorm> {
        let pav = Pav::from_json(field, v.get("pav").ok_or_else(|| Error::Json("missing field 'pav'".into()))?)?;
        let ws = v.get("weights").and_then(Value::as_array).ok_or_else(|| Error::Json("missing array 'weights'".into()))?;
        let weights = ws
            .iter()
            .map(|w| match w {
                Value::String(s) => XReal::parse(s),
                Value::Number(n) => XReal::parse(&n.to_string()),
                _ => XReal::from_json(w),
            })
            .collect::<Result<Vec<_>>>()?;
        let basis = match v.get("basis") {
            None => Matrix::identity(weights.len()),
            Some(b) => {
                let rows = b.as_array().ok_or_else(|| Error::Json("basis must be an array of rows".into()))?;
                let mut out = Vec::new();
                for r in rows {
                    let r = r.as_array().ok_or_else(|| Error::Json("basis rows must be arrays".into()))?;
                    let row = r
                        .iter()
                        .map(|e| match e {
                            Value::String(s) => parse_element(s, field),
                            Value::Number(n) => parse_element(&n.to_string(), field),
                            _ => Err(Error::Json(format!("bad basis entry {}", e))),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    out.push(row);
                }
                if out.iter().any(|r| r.len() != out.len()) {
                    return Err(Error::Json("basis must be square".into()));
                }
                Matrix::from_rows(out)
            }
        };
        let n = PseudoNorm::new(&pav, basis, weights)?;
        if let Some(f) = v.get("flavor").and_then(Value::as_str) {
            if f != n.flavor.name() {
                return Err(Error::Json(format!("flavor {} does not match the absolute value", f)));
            }
        }
        Ok(n)
    }
}

fn unit(n: usize, j: usize) -> Vec<Element> {
    (0..n).map(|i| if i == j { Element::one(0) } else { Element::zero(0) }).collect()
}

fn scale(v: &[Element], s: &Element) -> Vec<Element> {
    v.iter().map(|x| x.mul(s)).collect()
}

/// `v - t * w`.
fn axpy(v: &[Element], t: &Element, w: &[Element]) -> Vec<Element> {
    v.iter().zip(w).map(|(a, b)| a.sub(&t.mul(b))).collect()
}

/// `x_1 ^ ... ^ x_r` in wedge coordinates: the `r x r` minors of `[x_1 .. x_r]`.
pub fn wedge(xs: &[Vec<Element>]) -> Vec<Element> {
    let m = Matrix::from_cols(xs.to_vec());
    m.compound(xs.len()).col(0)
}

/// Compares `||x_1 ^ ... ^ x_r||` in `Lambda^r N` with `prod ||x_i||`.
pub fn hadamard_check(n: &PseudoNorm, xs: &[Vec<Element>]) -> Result<HadamardReport> {
    if xs.is_empty() {
        return Err(Error::OutOfRange("need at least one vector".into()));
    }
    for x in xs {
        check_dim(n.dim(), x.len())?;
    }
    let eta = wedge(xs);
    if eta.iter().all(Element::is_zero) {
        return Err(Error::RankDeficient);
    }
    let det_norm = n.exterior(xs.len())?.eval(&eta)?;
    let mut product = Some(XReal::one());
    for x in xs {
        let v = n.eval(x)?;
        product = product.and_then(|p| p.mul(&v).ok());
    }
    let relation = product.as_ref().map_or(XOrd::Indeterminate, |p| det_norm.cmp(p));
    Ok(HadamardReport { det_norm, product, relation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{parse_field, place::Place};
    use crate::pav::Scale;
    use crate::scalar::{int, rat};

    fn e(k: i64) -> XReal {
        XReal::exp(int(k))
    }

    fn el(f: &FieldDescriptor, s: &str) -> Element {
        parse_element(s, f).unwrap()
    }

    fn vecs(f: &FieldDescriptor, v: &[&str]) -> Vec<Element> {
        v.iter().map(|s| el(f, s)).collect()
    }

    fn cols(f: &FieldDescriptor, c: &[&[&str]]) -> Matrix<Element> {
        Matrix::from_cols(c.iter().map(|v| vecs(f, v)).collect())
    }

    fn qt() -> FieldDescriptor {
        parse_field("Q(T)").unwrap()
    }

    fn arch_q() -> Pav {
        Pav::arch(&FieldDescriptor::Rationals, 0, int(1)).unwrap()
    }

    fn ultra_q() -> Pav {
        Pav::ultra(&FieldDescriptor::Rationals, Place::Prime(3), Scale::Rat(int(1))).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let f = qt();
        let deg = Pav::ultra_degenerate(&f, parse_place_t(&f, "T")).unwrap();
        let n = PseudoNorm::diagonal(&deg, vec![XReal::one(), e(-1)]).unwrap();
        assert_eq!(n.flavor(), Flavor::UltraSup);
        assert_eq!(n.eval(&vecs(&f, &["1/T", "0"])).unwrap(), XReal::Infinity);
        assert_eq!(n.eval(&vecs(&f, &["T", "T^2"])).unwrap(), XReal::Zero);
        assert_eq!(n.eval(&vecs(&f, &["3", "T+1"])).unwrap(), XReal::one());
        assert_eq!(n.eval(&vecs(&f, &["T", "1"])).unwrap(), e(-1));
        assert!(matches!(n.eval(&vecs(&f, &["1"])), Err(Error::DimensionMismatch { .. })));

        // the genuine place: A_v is all of K
        let v = Pav::ultra(&f, parse_place_t(&f, "T"), Scale::Rat(int(1))).unwrap();
        let n = PseudoNorm::diagonal(&v, vec![XReal::one(), e(-1)]).unwrap();
        assert_eq!(n.eval(&vecs(&f, &["1/T", "0"])).unwrap(), e(1));
        assert_eq!(n.eval(&vecs(&f, &["T", "T^2"])).unwrap(), e(-1));
        assert_eq!(n.eval(&vecs(&f, &["3", "T+1"])).unwrap(), XReal::one());
    }

    fn parse_place_t(f: &FieldDescriptor, s: &str) -> Place {
        crate::fields::parse_place(f, s).unwrap()
    }

    #[test]
    fn restriction() {
        let q = FieldDescriptor::Rationals;
        let n = PseudoNorm::diagonal(&ultra_q(), vec![XReal::one(), e(-1), e(-2)]).unwrap();
        let r = n.restrict(&cols(&q, &[&["1", "0", "0"]])).unwrap();
        assert_eq!(r.weights(), &[XReal::one()]);
        let s = cols(&q, &[&["1", "1", "0"], &["0", "0", "1"]]);
        let r = n.restrict(&s).unwrap();
        assert_eq!(r.weights(), &[XReal::one(), e(-2)]);
        // agreement with the ambient norm through the inclusion
        for (a, b) in [(1, 1), (3, 0), (1, 9), (2, 5), (0, 7)] {
            let c = vecs(&q, &[&a.to_string(), &b.to_string()]);
            assert_eq!(r.eval(&c).unwrap(), n.eval(&s.mul_vec(&c)).unwrap());
        }
        let full = n.restrict(&Matrix::identity(3)).unwrap();
        assert_eq!(full.weights(), n.weights());
        assert!(matches!(n.restrict(&cols(&q, &[&["1", "1", "0"], &["2", "2", "0"]])), Err(Error::RankDeficient)));
    }

    #[test]
    fn skewed_restriction_matches_brute_force() {
        let q = FieldDescriptor::Rationals;
        let n = PseudoNorm::diagonal(&ultra_q(), vec![XReal::one(), e(1), e(-1)]).unwrap();
        let s = cols(&q, &[&["3", "1", "9"], &["1", "1/3", "2"]]);
        let r = n.restrict(&s).unwrap();
        for a in -4..5 {
            for b in [-9, -3, -1, 1, 2, 6, 27] {
                let c = vecs(&q, &[&a.to_string(), &b.to_string()]);
                assert_eq!(r.eval(&c).unwrap(), n.eval(&s.mul_vec(&c)).unwrap(), "{} {}", a, b);
            }
        }
    }

    #[test]
    fn quotients() {
        let q = FieldDescriptor::Rationals;
        let n = PseudoNorm::diagonal(&ultra_q(), vec![XReal::rational(int(3)), e(-1)]).unwrap();
        let k = n.quotient(&cols(&q, &[&["0", "1"]])).unwrap();
        assert_eq!(k.norm.weights(), &[XReal::rational(int(3))]);

        let n = PseudoNorm::diagonal(&ultra_q(), vec![XReal::one(), e(-1)]).unwrap();
        let k = n.quotient(&cols(&q, &[&["1", "1"]])).unwrap();
        assert_eq!(k.eval_class(&vecs(&q, &["1", "0"])).unwrap(), e(-1));

        let h = PseudoNorm::diagonal(&arch_q(), vec![XReal::one(), XReal::one()]).unwrap();
        let k = h.quotient(&cols(&q, &[&["1", "1"]])).unwrap();
        let v = k.eval_class(&vecs(&q, &["1", "0"])).unwrap();
        assert!((v.to_f64() - 0.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(k.eval_class(&vecs(&q, &["2", "2"])).unwrap(), XReal::Zero);
    }

    #[test]
    fn ultra_quotient_is_infimum_over_lifts() {
        let q = FieldDescriptor::Rationals;
        let n = PseudoNorm::diagonal(&ultra_q(), vec![XReal::one(), e(-1), e(1)]).unwrap();
        let f = vecs(&q, &["1", "3", "1/3"]);
        let k = n.quotient(&Matrix::from_cols(vec![f.clone()])).unwrap();
        for x in [["1", "0", "0"], ["0", "1", "0"], ["2", "5", "9"], ["1/3", "1", "0"]] {
            let x = vecs(&q, &x);
            let class = k.eval_class(&x).unwrap();
            let mut best = XReal::Infinity;
            for t in ["0", "1", "-1", "3", "1/3", "2", "9", "1/9", "-3", "4/3", "-1/3"] {
                let t = el(&q, t);
                let lift: Vec<Element> = x.iter().zip(&f).map(|(a, b)| a.sub(&t.mul(b))).collect();
                let v = n.eval(&lift).unwrap();
                assert_ne!(v.cmp(&class), XOrd::Less);
                if v.cmp(&best) == XOrd::Less {
                    best = v;
                }
            }
            assert_eq!(best, class);
        }
    }

    #[test]
    fn hermitian_restriction_over_a_real_field() {
        let f = parse_field("Q(sqrt2)").unwrap();
        let v = Pav::arch(&f, 0, int(1)).unwrap();
        let n = PseudoNorm::diagonal(&v, vec![XReal::one(), XReal::rational(int(2))]).unwrap();
        let s = cols(&f, &[&["1", "sqrt2"]]);
        let r = n.restrict(&s).unwrap();
        // |(1, sqrt2)|^2 = 1 + 2*4 = 9
        assert_eq!(r.weights(), &[XReal::rational(int(3))]);
        let k = n.quotient(&s).unwrap();
        let x = vecs(&f, &["1", "0"]);
        // distance from e1 to the line: sqrt(1 - 1/9)
        assert!((k.eval_class(&x).unwrap().to_f64() - (8f64 / 9.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn dual_tensor_exterior() {
        let n = PseudoNorm::diagonal(&ultra_q(), vec![XReal::one(), e(-1)]).unwrap();
        assert_eq!(n.dual().weights(), &[XReal::one(), e(1)]);
        assert_eq!(n.dual().dual(), n);
        let h = PseudoNorm::diagonal(&arch_q(), vec![XReal::one(), XReal::one(), XReal::one()]).unwrap();
        assert_eq!(h.dual().weights(), h.weights());
        let ext = h.exterior(2).unwrap();
        assert_eq!(ext.weights(), h.weights());
        assert_eq!(ext.flavor(), Flavor::HermL2);

        let m = PseudoNorm::diagonal(&ultra_q(), vec![e(-2)]).unwrap();
        assert_eq!(n.tensor(&m).unwrap().weights(), &[e(-2), e(-3)]);
        assert_eq!(n.tensor(&h), Err(Error::PavMismatch));
        let t = PseudoNorm::diagonal(&ultra_q(), vec![XReal::one(), e(-1), e(-2)]).unwrap();
        assert_eq!(t.det().weights(), &[e(-3)]);
        assert!(t.exterior(4).is_err());
    }

    #[test]
    fn dual_pairs_with_nonstandard_basis() {
        let q = FieldDescriptor::Rationals;
        let b = cols(&q, &[&["1", "2"], &["1/3", "5"]]);
        let n = PseudoNorm::new(&ultra_q(), b.clone(), vec![e(1), rat_x(1, 3)]).unwrap();
        let d = n.dual();
        // phi(x) <= ||phi|| * ||x||
        for phi in [["1", "0"], ["0", "1"], ["3", "-1"], ["1/3", "7"]] {
            let phi = vecs(&q, &phi);
            let np = d.eval(&phi).unwrap();
            for x in [["1", "0"], ["1", "1"], ["9", "2"], ["1/9", "4"]] {
                let x = vecs(&q, &x);
                let px = phi.iter().zip(&x).fold(Element::zero(0), |s, (a, b)| s.add(&a.mul(b)));
                let lhs = ultra_q().eval(&px).unwrap();
                let rhs = np.mul(&n.eval(&x).unwrap()).unwrap();
                assert_ne!(lhs.cmp(&rhs), XOrd::Greater);
            }
        }
        // each dual basis vector attains the bound on its partner
        for j in 0..2 {
            assert_eq!(d.eval(&d.basis().col(j)).unwrap(), n.weights()[j].inv());
        }
    }

    fn rat_x(a: i64, b: i64) -> XReal {
        XReal::rational(rat(a, b))
    }

    #[test]
    fn hadamard() {
        let q = FieldDescriptor::Rationals;
        let n = PseudoNorm::diagonal(&ultra_q(), vec![XReal::one(), e(-1)]).unwrap();
        let r = hadamard_check(&n, &[vecs(&q, &["1", "1"]), vecs(&q, &["0", "1"])]).unwrap();
        assert_eq!(r.det_norm, e(-1));
        assert!(r.is_equality());
        let r = hadamard_check(&n, &[vecs(&q, &["1", "2"]), vecs(&q, &["3", "1"])]).unwrap();
        assert!(r.holds());

        let f = qt();
        let deg = Pav::ultra_degenerate(&f, parse_place_t(&f, "T")).unwrap();
        let n = PseudoNorm::diagonal(&deg, vec![XReal::one(), e(-1)]).unwrap();
        let r = hadamard_check(&n, &[vecs(&f, &["T", "0"]), vecs(&f, &["0", "1"])]).unwrap();
        assert_eq!(r.det_norm, XReal::Zero);
        assert!(r.holds());
    }

    #[test]
    fn json_round_trip() {
        let f = qt();
        let v = Pav::ultra(&f, parse_place_t(&f, "T - 2"), Scale::Rat(int(1))).unwrap();
        let n = PseudoNorm::new(&v, cols(&f, &[&["1", "T"], &["0", "1/(T+1)"]]), vec![XReal::one(), e(-1)]).unwrap();
        let back = PseudoNorm::from_json(&f, &n.to_json()).unwrap();
        assert_eq!(back, n);
        let short = json!({"pav": {"kind": "arch"}, "weights": ["1", "2"]});
        let h = PseudoNorm::from_json(&FieldDescriptor::Rationals, &short).unwrap();
        assert_eq!(h.flavor(), Flavor::HermL2);
        let bad = json!({"pav": {"kind": "arch"}, "weights": ["1"], "flavor": "ultra_sup"});
        assert!(PseudoNorm::from_json(&FieldDescriptor::Rationals, &bad).is_err());
    }
}
