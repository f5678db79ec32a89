//! Automorphisms of the constant field and their right action `w -> w o sigma` on PAVs.

use std::sync::Arc;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::factor::QPoly;
use crate::fields::place::{prime_ideals_above, Place};
use crate::fields::trager::roots_in;
use crate::fields::{Element, FieldDescriptor, NfElem, NumberField, F1};
use crate::pav::sample::Sampler;
use crate::pav::{Pav, PavKind};
use crate::roots::{Ball, CQ};
use crate::xreal::XOrd;

use super::{extensions_over, ExtensionProblem};

/// Field automorphism fixing `Q`, given by the image of the generator.
#[derive(Clone, Debug, PartialEq)]
pub struct Automorphism {
    field: Arc<NumberField>,
    image: NfElem,
}

impl Automorphism {
    pub fn identity(k: &Arc<NumberField>) -> Self {
        Automorphism { field: k.clone(), image: NfElem::gen(k) }
    }

    /// Checks that `image` is a root of the minimal polynomial.
    pub fn from_image(k: &Arc<NumberField>, image: NfElem) -> Result<Self> {
        let v = k.minpoly().eval_with(&image, |c| NfElem::rational(c.clone()));
        if !v.is_zero() {
            return Err(Error::NotGalois(format!("{} is not a conjugate of {}", image, k.gen_name())));
        }
        Ok(Automorphism { field: k.clone(), image })
    }

    pub fn image(&self) -> &NfElem {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image == NfElem::gen(&self.field)
    }

    pub fn apply_nf(&self, x: &NfElem) -> NfElem {
        if x.as_rational().is_some() {
            return x.clone();
        }
        x.poly().eval_with(&self.image, |c| NfElem::rational(c.clone()))
    }

    fn apply_f1(&self, f: &F1) -> F1 {
        f.map(|c| self.apply_nf(c)).expect("automorphisms preserve nonzero denominators")
    }

    /// Acts on constants, leaving the function-field variables fixed.
    pub fn apply(&self, e: &Element) -> Element {
        match e {
            Element::Nf(x) => Element::Nf(self.apply_nf(x)),
            Element::F1(f) => Element::F1(self.apply_f1(f)),
            Element::F2(f) => Element::F2(f.map(|c| self.apply_f1(c)).unwrap()),
        }
    }

    /// `self o other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism { field: self.field.clone(), image: self.apply_nf(&other.image) }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut prev = Automorphism::identity(&self.field);
        let mut cur = self.clone();
        while !cur.is_identity() {
            prev = cur.clone();
            cur = self.compose(&cur);
        }
        prev
    }

    pub fn to_json(&self) -> Value {
        let g = self.field.gen_name();
        json!({"gen": g, "image": self.image.fmt_with(g)})
    }
}

/// All automorphisms, identity first then in canonical root order.
pub fn automorphisms(k: &Arc<NumberField>) -> Result<Vec<Automorphism>> {
    let mut v: Vec<Automorphism> =
        roots_in(k, k.minpoly())?.into_iter().map(|r| Automorphism { field: k.clone(), image: r }).collect();
    v.sort_by_key(|a| !a.is_identity());
    Ok(v)
}

/// The automorphism group of the constants of `field`; `NotGalois` unless it has full size.
pub fn galois_group(field: &FieldDescriptor) -> Result<Vec<Automorphism>> {
    let k = field.number_field().ok_or_else(|| Error::NotGalois("no constant extension".into()))?;
    let g = automorphisms(k)?;
    if g.len() != k.degree() {
        return Err(Error::NotGalois(format!("{} automorphisms for degree {}", g.len(), k.degree())));
    }
    Ok(g)
}

fn balls_overlap(a: &Ball, b: &Ball) -> bool {
    a.center.sub(&b.center).abs_lower() <= &a.rad + &b.rad
}

/// Index of the embedding `tau_emb o sigma`.
fn twisted_embedding(sigma: &Automorphism, emb: usize) -> Result<usize> {
    let k = &sigma.field;
    let mut bits = 64;
    loop {
        let target = k.embed_eval(sigma.image.poly(), emb, bits)?;
        let conj = Ball { center: CQ::new(target.center.re.clone(), -target.center.im.clone()), rad: target.rad.clone() };
        let gen = QPoly::x();
        let mut hits = Vec::new();
        for e in k.embeddings() {
            let b = k.embed_eval(&gen, e.id, bits)?;
            if balls_overlap(&b, &target) || balls_overlap(&b, &conj) {
                hits.push(e.id);
            }
        }
        match hits.len() {
            1 => return Ok(hits[0]),
            0 => return Err(Error::NotGalois("image of the generator matches no embedding".into())),
            _ if bits > 2048 => return Err(Error::NotGalois("embeddings not separated".into())),
            _ => bits *= 2,
        }
    }
}

/// The prime `Q` with `sigma(Q) = P`, so that `ord_P(sigma x) = ord_Q(x)`.
fn pulled_back_ideal(sigma: &Automorphism, place: &Place) -> Result<Place> {
    let Place::Ideal(pi) = place else { unreachable!() };
    let k = &sigma.field;
    for q in prime_ideals_above(k, pi.p)? {
        // Q = (p, g(alpha)); g(alpha) = 0 for an inert prime
        let img = sigma.apply_nf(&NfElem::from_poly(k, &q.g));
        if img.poly().is_zero() || pi.valuation(k, img.poly()).is_some_and(|v| v > 0) {
            return Ok(Place::Ideal(q));
        }
    }
    Err(Error::InvalidPlace("no conjugate prime found".into()))
}

fn pulled_back_place(sigma: &Automorphism, place: &Place) -> Result<Place> {
    let inv = sigma.inverse();
    Ok(match place {
        Place::Ideal(_) => pulled_back_ideal(sigma, place)?,
        Place::Poly(m) => Place::Poly(m.map(|c| inv.apply_nf(c))),
        Place::Point(a) => Place::Point(inv.apply_f1(a)),
        other => other.clone(),
    })
}

/// The PAV `f -> |sigma(f)|_w`, computed in closed form.
pub fn galois_act(sigma: &Automorphism, w: &Pav) -> Result<Pav> {
    let field = w.field();
    if field.number_field().map(|k| **k != *sigma.field).unwrap_or(true) {
        return Err(Error::FieldMismatch("automorphism of a different field".into()));
    }
    match w.kind() {
        PavKind::Trivial => Ok(w.clone()),
        PavKind::Arch { emb, eps } => Pav::arch(field, twisted_embedding(sigma, *emb)?, eps.clone()),
        PavKind::Ultra { place, c } => Pav::ultra(field, pulled_back_place(sigma, place)?, c.clone()),
        PavKind::UltraDegenerate { place } => Pav::ultra_degenerate(field, pulled_back_place(sigma, place)?),
        PavKind::Composite { place, residue } => {
            if place.degree() != 1 || matches!(place, Place::Point(_)) {
                return Err(Error::UnsupportedShape("Galois action on composites at higher-degree places".into()));
            }
            Pav::compose(field, pulled_back_place(sigma, place)?, galois_act(sigma, residue)?)
        }
        PavKind::Gauss { base, center, slope } => {
            let a = sigma.inverse().apply(center);
            Pav::gauss(field, galois_act(sigma, base)?, a, slope.clone())
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitReport {
    pub transitive: bool,
    pub group_size: usize,
    /// Indices into the extension set reached from extension 0.
    pub orbit: Vec<usize>,
    pub extensions: usize,
    /// `(sigma, source index, target index)` for every group element applied to extension 0.
    pub certificate: Vec<(Automorphism, usize, usize)>,
}

impl OrbitReport {
    pub fn to_json(&self) -> Value {
        json!({
            "transitive": self.transitive,
            "group_size": self.group_size,
            "orbit": self.orbit,
            "extensions": self.extensions,
            "certificate": self.certificate.iter().map(|(s, a, b)| json!({"sigma": s.to_json(), "from": a, "to": b})).collect::<Vec<_>>(),
        })
    }
}

/// Evaluation agreement on a deterministic sample set.
pub(crate) fn agree_on_samples(a: &Pav, b: &Pav, n: usize) -> Result<bool> {
    for f in Sampler::new(a.field(), 29).take_elements(n) {
        if matches!(a.eval(&f)?.cmp(&b.eval(&f)?), XOrd::Less | XOrd::Greater) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Orbit of the first extension under the Galois group, matched against the extension set.
pub fn orbit_is_transitive(prob: &ExtensionProblem) -> Result<OrbitReport> {
    let group = galois_group(&prob.ext)?;
    let ext = extensions_over(prob)?;
    let mut orbit = Vec::new();
    let mut certificate = Vec::new();
    for s in &group {
        let img = galois_act(s, &ext[0].pav)?;
        let mut hit = None;
        for (j, e) in ext.iter().enumerate() {
            if agree_on_samples(&img, &e.pav, 50)? {
                hit = Some(j);
                break;
            }
        }
        let j = hit.ok_or_else(|| Error::NotAnExtension("Galois image is not an extension of the base".into()))?;
        certificate.push((s.clone(), 0, j));
        if !orbit.contains(&j) {
            orbit.push(j);
        }
    }
    orbit.sort();
    Ok(OrbitReport { transitive: orbit.len() == ext.len(), group_size: group.len(), orbit, extensions: ext.len(), certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{parse_element, parse_field};
    use crate::scalar::int;

    fn sigma(field: &FieldDescriptor, img: &str) -> Automorphism {
        let k = field.number_field().unwrap();
        let x = parse_element(img, &FieldDescriptor::NumberField(k.clone())).unwrap().as_nf().unwrap();
        Automorphism::from_image(k, x).unwrap()
    }

    #[test]
    fn conjugation_swaps_split_primes() {
        let q = FieldDescriptor::Rationals;
        let l = parse_field("Q(i)").unwrap();
        let prob = ExtensionProblem::new(Pav::ultra_degenerate(&q, Place::Prime(5)).unwrap(), l.clone()).unwrap();
        let ext = extensions_over(&prob).unwrap();
        let s = sigma(&l, "-i");
        assert_eq!(galois_act(&s, &ext[0].pav).unwrap(), ext[1].pav);
        let x = parse_element("2+i", &l).unwrap();
        let v: Vec<_> = ext.iter().map(|e| e.pav.eval(&x).unwrap()).collect();
        assert_ne!(v[0], v[1]);
        assert_eq!(galois_act(&sigma(&l, "i"), &ext[0].pav).unwrap(), ext[0].pav);
        let r = orbit_is_transitive(&prob).unwrap();
        assert!(r.transitive);
        assert_eq!(r.orbit.len(), 2);
    }

    #[test]
    fn real_embeddings_swap() {
        let l = parse_field("Q(sqrt2)").unwrap();
        let w = Pav::arch(&l, 0, int(1)).unwrap();
        let s = sigma(&l, "-a");
        assert_eq!(galois_act(&s, &w).unwrap(), Pav::arch(&l, 1, int(1)).unwrap());
        let f = parse_element("1+a", &l).unwrap();
        let lhs = galois_act(&s, &w).unwrap().eval(&f).unwrap();
        let rhs = w.eval(&s.apply(&f)).unwrap();
        assert!(!matches!(lhs.cmp(&rhs), XOrd::Less | XOrd::Greater));
    }

    #[test]
    fn orbit_sizes() {
        let q = FieldDescriptor::Rationals;
        let qi = parse_field("Q(i)").unwrap();
        let r2 = parse_field("Q(sqrt2)").unwrap();
        let t = orbit_is_transitive(&ExtensionProblem::new(Pav::trivial(&q), r2).unwrap()).unwrap();
        assert_eq!((t.transitive, t.orbit.len()), (true, 1));
        let a = orbit_is_transitive(&ExtensionProblem::new(Pav::arch(&q, 0, int(1)).unwrap(), qi).unwrap()).unwrap();
        assert_eq!((a.transitive, a.orbit.len()), (true, 1));
        let c = parse_field("Q(cbrt2)").unwrap();
        assert!(matches!(
            orbit_is_transitive(&ExtensionProblem::new(Pav::trivial(&q), c).unwrap()),
            Err(Error::NotGalois(_))
        ));
    }

    #[test]
    fn right_action_on_function_field_points() {
        let qt = parse_field("Q(T)").unwrap();
        let l = parse_field("Q(i)(T)").unwrap();
        let q = FieldDescriptor::Rationals;
        let base = Pav::compose(&qt, crate::fields::parse_place(&qt, "T").unwrap(), Pav::ultra_degenerate(&q, Place::Prime(13)).unwrap())
            .unwrap();
        let prob = ExtensionProblem::new(base, l.clone()).unwrap();
        let ext = extensions_over(&prob).unwrap();
        let g = galois_group(&l).unwrap();
        for w in &ext {
            for s in &g {
                for t in &g {
                    let lhs = galois_act(&s.compose(t), &w.pav).unwrap();
                    let rhs = galois_act(t, &galois_act(s, &w.pav).unwrap()).unwrap();
                    assert!(agree_on_samples(&lhs, &rhs, 30).unwrap());
                }
            }
        }
        assert!(orbit_is_transitive(&prob).unwrap().transitive);
        // closed form agrees with precomposition
        for w in &ext {
            for s in &g {
                let act = galois_act(s, &w.pav).unwrap();
                for f in Sampler::new(&l, 3).take_elements(40) {
                    assert_eq!(act.eval(&f).unwrap(), w.pav.eval(&s.apply(&f)).unwrap());
                }
            }
        }
    }
}
