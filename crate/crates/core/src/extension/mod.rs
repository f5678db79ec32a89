//! Extensions of PAVs along finite constant extensions `L/K`, with
//! `K = Q` or `K = Q(T)` and `L = Q(alpha)` or `Q(alpha)(T)`.

mod galois;
mod newton;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fields::numfield::EmbeddingKind;
use crate::fields::place::{prime_ideals_above, Place};
use crate::fields::trager::{factor_over, lift};
use crate::fields::{FieldDescriptor, NumberField};
use crate::pav::{Pav, PavKind};
use crate::scalar::Rational;

pub use galois::{automorphisms, galois_act, galois_group, orbit_is_transitive, Automorphism, OrbitReport};
pub use newton::{limsup_max_estimate, newton_power_sums, LimsupReport, PowerSumSequence};

/// Largest supported `[L:K]`.
pub const MAX_EXT_DEGREE: usize = 8;

#[derive(Clone, Debug)]
pub struct ExtensionProblem {
    pub base: Pav,
    pub ext: FieldDescriptor,
}

/// One PAV on `L` above the base, tagged with its maximal ideal `w`, the index `i`
/// of the residue absolute value above `w`, and the two degrees of the sum formula.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionEntry {
    pub pav: Pav,
    pub w: usize,
    pub i: usize,
    pub local_degree: usize,
    pub residue_degree: usize,
}

impl ExtensionEntry {
    pub fn to_json(&self) -> Value {
        json!({
            "pav": self.pav.to_json(),
            "w": self.w,
            "i": self.i,
            "local_degree": self.local_degree,
            "residue_degree": self.residue_degree,
        })
    }
}

/// Entry before renumbering: `w` is a path through nested maximal ideals.
struct Raw {
    pav: Pav,
    w: Vec<usize>,
    local: usize,
    res: usize,
}

impl ExtensionProblem {
    pub fn new(base: Pav, ext: FieldDescriptor) -> Result<Self> {
        let k = base.field();
        let shape_ok = match (k, &ext) {
            (FieldDescriptor::Rationals, FieldDescriptor::NumberField(_)) => true,
            (FieldDescriptor::FunctionField { base: kb, var: kv }, FieldDescriptor::FunctionField { base: lb, var: lv }) => {
                **kb == FieldDescriptor::Rationals && matches!(**lb, FieldDescriptor::NumberField(_)) && kv == lv
            }
            _ => false,
        };
        if !shape_ok {
            return Err(Error::UnsupportedShape(format!("extension {} over {} is not a constant extension of Q or Q(T)", ext, k)));
        }
        let n = ext.number_field().unwrap().degree();
        if n > MAX_EXT_DEGREE {
            return Err(Error::UnsupportedShape(format!("degree {} above the cap {}", n, MAX_EXT_DEGREE)));
        }
        Ok(ExtensionProblem { base, ext })
    }

    pub fn degree(&self) -> usize {
        self.constants().degree()
    }

    pub fn constants(&self) -> &Arc<NumberField> {
        self.ext.number_field().unwrap()
    }
}

/// All PAVs on `L` extending the base, sorted by `(w, i)`.
pub fn extensions_over(prob: &ExtensionProblem) -> Result<Vec<ExtensionEntry>> {
    let raw = extend(&prob.base, &prob.ext, prob.constants())?;
    let mut keys: Vec<Vec<usize>> = raw.iter().map(|r| r.w.clone()).collect();
    keys.sort();
    keys.dedup();
    let mut out: Vec<ExtensionEntry> = Vec::with_capacity(raw.len());
    for r in raw {
        let w = keys.binary_search(&r.w).unwrap();
        let i = out.iter().filter(|e| e.w == w).count();
        out.push(ExtensionEntry { pav: r.pav, w, i, local_degree: r.local, residue_degree: r.res });
    }
    out.sort_by_key(|e| (e.w, e.i));
    Ok(out)
}

/// `sum_w (1/#W) sum_i local_degree / residue_degree`.
pub fn local_degree_sum(prob: &ExtensionProblem) -> Result<Rational> {
    let ext = extensions_over(prob)?;
    let nw = ext.iter().map(|e| e.w).max().map_or(0, |m| m + 1);
    let mut s = Rational::zero();
    for e in &ext {
        s += Rational::new(BigInt::from(e.local_degree), BigInt::from(e.residue_degree * nw));
    }
    Ok(s)
}

fn extend(v: &Pav, l: &FieldDescriptor, k: &Arc<NumberField>) -> Result<Vec<Raw>> {
    let n = k.degree();
    let one = |pav: Pav| vec![Raw { pav, w: vec![0], local: n, res: n }];
    match v.kind() {
        PavKind::Trivial => Ok(one(Pav::trivial(l))),
        PavKind::Arch { eps, .. } => {
            // embeddings of L over the single embedding of Q
            Ok(k.embeddings()
                .iter()
                .map(|e| Raw {
                    pav: Pav::arch(l, e.id, eps.clone()).unwrap(),
                    w: vec![0],
                    local: if e.kind == EmbeddingKind::Real { 1 } else { 2 },
                    res: n,
                })
                .collect())
        }
        PavKind::Ultra { place: Place::Prime(p), c } => Ok(prime_ideals_above(k, *p)?
            .into_iter()
            .map(|pi| {
                let (e, f) = (pi.e, pi.f);
                let c = c.scaled(&Rational::new(BigInt::one(), BigInt::from(e)));
                Raw { pav: Pav::ultra(l, Place::Ideal(pi), c).unwrap(), w: vec![0], local: e * f, res: n }
            })
            .collect()),
        PavKind::UltraDegenerate { place: Place::Prime(p) } => Ok(prime_ideals_above(k, *p)?
            .into_iter()
            .enumerate()
            .map(|(j, pi)| {
                let f = pi.f;
                Raw { pav: Pav::ultra_degenerate(l, Place::Ideal(pi)).unwrap(), w: vec![j], local: f, res: f }
            })
            .collect()),
        PavKind::Ultra { place, c } => Ok(places_above(place, k)?
            .into_iter()
            .map(|(pl, d)| Raw { pav: Pav::ultra(l, pl, c.clone()).unwrap(), w: vec![0], local: d, res: n })
            .collect()),
        PavKind::UltraDegenerate { place } => Ok(places_above(place, k)?
            .into_iter()
            .enumerate()
            .map(|(j, (pl, d))| Raw { pav: Pav::ultra_degenerate(l, pl).unwrap(), w: vec![j], local: d, res: d })
            .collect()),
        PavKind::Composite { place, residue } => {
            if place.degree() != 1 {
                return Err(Error::UnsupportedShape("composite extension needs a degree-one place".into()));
            }
            let lc = FieldDescriptor::NumberField(k.clone());
            let lifted = lift_place(place, k);
            extend(residue, &lc, k)?
                .into_iter()
                .map(|r| Ok(Raw { pav: Pav::compose(l, lifted.clone(), r.pav)?, ..r }))
                .collect()
        }
        PavKind::Gauss { base, center, slope } => {
            let lc = FieldDescriptor::NumberField(k.clone());
            extend(base, &lc, k)?
                .into_iter()
                .map(|r| Ok(Raw { pav: Pav::gauss(l, r.pav, center.clone(), slope.clone())?, ..r }))
                .collect()
        }
    }
}

fn lift_place(place: &Place, k: &Arc<NumberField>) -> Place {
    match place.qpoly() {
        Some(q) => Place::Poly(lift(k, &q)),
        None => place.clone(),
    }
}

/// Places of `L(T)` above a place of `Q(T)`, with local degrees `n deg(m_j) / deg(m)`.
fn places_above(place: &Place, k: &Arc<NumberField>) -> Result<Vec<(Place, usize)>> {
    let n = k.degree();
    match place {
        Place::Infinity => Ok(vec![(Place::Infinity, n)]),
        Place::Poly(m) => {
            let q = place.qpoly().ok_or_else(|| Error::UnsupportedShape("place over a number field".into()))?;
            let dm = m.deg() as usize;
            Ok(factor_over(k, &lift(k, &q))?
                .into_iter()
                .map(|(g, _)| {
                    let d = g.deg() as usize;
                    (Place::Poly(g), n * d / dm)
                })
                .collect())
        }
        _ => Err(Error::UnsupportedShape("place of this kind has no function-field lift".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{parse_field, parse_place};
    use crate::pav::sample::Sampler;
    use crate::pav::Scale;
    use crate::scalar::{int, rat};
    use crate::xreal::XOrd;

    fn problem(base: Pav, ext: &str) -> ExtensionProblem {
        ExtensionProblem::new(base, parse_field(ext).unwrap()).unwrap()
    }

    fn restricts(prob: &ExtensionProblem) {
        let k = prob.base.field().clone();
        let elems = Sampler::new(&k, 17).take_elements(50);
        for e in extensions_over(prob).unwrap() {
            for f in &elems {
                let a = e.pav.eval(f).unwrap();
                let b = prob.base.eval(f).unwrap();
                assert!(!matches!(a.cmp(&b), XOrd::Less | XOrd::Greater), "{} vs {} at {}", a, b, k.fmt_element(f));
            }
        }
    }

    #[test]
    fn number_field_examples() {
        let q = FieldDescriptor::Rationals;
        let p5 = problem(Pav::ultra_degenerate(&q, Place::Prime(5)).unwrap(), "Q(i)");
        let e = extensions_over(&p5).unwrap();
        assert_eq!(e.len(), 2);
        assert!(e.iter().all(|x| x.residue_degree == 1));
        assert_eq!(local_degree_sum(&p5).unwrap(), int(1));

        let p3 = problem(Pav::ultra_degenerate(&q, Place::Prime(3)).unwrap(), "Q(i)");
        let e = extensions_over(&p3).unwrap();
        assert_eq!((e.len(), e[0].local_degree, e[0].residue_degree), (1, 2, 2));

        let a = problem(Pav::arch(&q, 0, int(1)).unwrap(), "Q(sqrt2)");
        let e = extensions_over(&a).unwrap();
        assert_eq!(e.iter().map(|x| x.local_degree).collect::<Vec<_>>(), vec![1, 1]);
        assert_eq!(local_degree_sum(&a).unwrap(), int(1));

        let ai = problem(Pav::arch(&q, 0, int(1)).unwrap(), "Q(i)");
        let e = extensions_over(&ai).unwrap();
        assert_eq!((e.len(), e[0].local_degree), (1, 2));

        let t = problem(Pav::trivial(&q), "Q(sqrt2)");
        assert_eq!(extensions_over(&t).unwrap().len(), 1);
        for p in [&p5, &p3, &a, &ai, &t] {
            restricts(p);
        }
    }

    #[test]
    fn genuine_p_adic_splits_into_local_degrees() {
        let q = FieldDescriptor::Rationals;
        for (p, ext) in [(2, "Q(i)"), (5, "Q(i)"), (7, "Q(sqrt2)"), (3, "Q(cbrt2)"), (5, "Q(cbrt2)")] {
            let prob = problem(Pav::ultra(&q, Place::Prime(p), Scale::log(p)).unwrap(), ext);
            assert_eq!(local_degree_sum(&prob).unwrap(), int(1), "{} {}", p, ext);
            restricts(&prob);
        }
    }

    #[test]
    fn function_field_examples() {
        let qt = parse_field("Q(T)").unwrap();
        let q = FieldDescriptor::Rationals;
        let bases = vec![
            Pav::ultra(&qt, parse_place(&qt, "T^2-2").unwrap(), Scale::Rat(int(1))).unwrap(),
            Pav::ultra_degenerate(&qt, parse_place(&qt, "T^2+1").unwrap()).unwrap(),
            Pav::ultra_degenerate(&qt, Place::Infinity).unwrap(),
            Pav::compose(&qt, parse_place(&qt, "T-2").unwrap(), Pav::arch(&q, 0, rat(1, 2)).unwrap()).unwrap(),
            Pav::compose(&qt, parse_place(&qt, "T").unwrap(), Pav::ultra_degenerate(&q, Place::Prime(5)).unwrap()).unwrap(),
            Pav::gauss(&qt, Pav::ultra(&q, Place::Prime(5), Scale::Rat(int(1))).unwrap(), q.int(0), rat(1, 2)).unwrap(),
        ];
        for ext in ["Q(i)(T)", "Q(sqrt2)(T)"] {
            for b in &bases {
                let prob = problem(b.clone(), ext);
                assert_eq!(local_degree_sum(&prob).unwrap(), int(1), "{} over {}", ext, b);
                restricts(&prob);
            }
        }
        let split = problem(bases[0].clone(), "Q(sqrt2)(T)");
        assert_eq!(extensions_over(&split).unwrap().len(), 2);
    }

    #[test]
    fn shape_checks() {
        let q = FieldDescriptor::Rationals;
        assert!(ExtensionProblem::new(Pav::trivial(&q), parse_field("Q(T)").unwrap()).is_err());
        assert!(ExtensionProblem::new(Pav::trivial(&q), parse_field("Q[a]/(a^9-2)").unwrap()).is_err());
    }
}
