//! Center and reduction of PAVs on `Q(T)` over a base PAV `v` on `Q`, on the
//! model `P^1` with charts `T` and `1/T`.
//!
//! The special fibre lives over `O_v / m` where `O_v = {|a|_v <= 1}` for
//! ultrametric `v` (so `F_p` for `p`-adic bases and `Q` for the trivial one)
//! and over `Q` itself for Archimedean `v`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::extension::{extensions_over, ExtensionProblem};
use crate::factor::QPoly;
use crate::fields::place::{fmt_place, parse_place, residue_field, Place};
use crate::fields::{Element, FieldDescriptor};
use crate::modp;
use crate::pav::sample::Sampler;
use crate::pav::{Pav, PavKind, Scale};
use crate::scalar::{fmt_rational, Rational};
use crate::xreal::{XOrd, XReal};

/// A monic irreducible polynomial over the residue field of the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FibrePoly {
    Q(Vec<Rational>),
    Fp { p: u64, coeffs: Vec<u64> },
}

impl FibrePoly {
    fn from_q(q: &QPoly) -> FibrePoly {
        let lc = q.lc();
        FibrePoly::Q(q.coeffs().iter().map(|c| c / &lc).collect())
    }

    fn fmt(&self) -> String {
        let terms = |c: Vec<String>| -> String {
            let mut out = Vec::new();
            for (i, c) in c.iter().enumerate().rev() {
                if c == "0" {
                    continue;
                }
                let (neg, body) = match c.strip_prefix('-') {
                    Some(b) => (true, b),
                    None => (false, c.as_str()),
                };
                let mono = match i {
                    0 => String::new(),
                    1 => "T".into(),
                    _ => format!("T^{}", i),
                };
                let m = match (body, mono.is_empty()) {
                    (_, true) => body.to_string(),
                    ("1", false) => mono,
                    (_, false) => format!("{}*{}", body, mono),
                };
                if out.is_empty() {
                    out.push(if neg { format!("-{}", m) } else { m });
                } else {
                    out.push(format!("{} {}", if neg { "-" } else { "+" }, m));
                }
            }
            if out.is_empty() {
                "0".into()
            } else {
                out.join(" ")
            }
        };
        match self {
            FibrePoly::Q(c) => terms(c.iter().map(fmt_rational).collect()),
            FibrePoly::Fp { p, coeffs } => format!("{} mod {}", terms(coeffs.iter().map(u64::to_string).collect()), p),
        }
    }
}

/// A point of the special fibre of `P^1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Center {
    Generic,
    Closed(FibrePoly),
    Infinity,
}

impl Center {
    pub fn to_json(&self) -> Value {
        match self {
            Center::Generic => json!({"center": "generic"}),
            Center::Closed(p) => json!({"center": p.fmt()}),
            Center::Infinity => json!({"center": "inf"}),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BerkP1Point {
    /// Type-1 point: a place of `Q(T)` with an absolute value on its residue field.
    Classical { place: Place, residue: Pav },
    /// Gauss point of the disc around the place with the given radius in `(0, 1]`.
    DiscPoint { center: Place, radius: XReal },
    InfinityPoint,
}

impl BerkP1Point {
    pub fn to_json(&self, field: &FieldDescriptor) -> Value {
        let b = match self {
            BerkP1Point::Classical { place, residue } => {
                json!({"kind": "classical", "center": fmt_place(field, place), "abs": residue.to_json()})
            }
            BerkP1Point::DiscPoint { center, radius } => {
                json!({"kind": "disc", "center": fmt_place(field, center), "radius": radius.to_json()})
            }
            BerkP1Point::InfinityPoint => json!({"kind": "infinity"}),
        };
        json!({ "berk": b })
    }
}

enum Base {
    Trivial,
    Arch,
    Adic(u64),
    /// Residually trivial `p`-adic base: centers only.
    AdicDegenerate(u64),
}

fn classify_base(v: &Pav) -> Result<Base> {
    if *v.field() != FieldDescriptor::Rationals {
        return Err(Error::UnsupportedShape("reduction is implemented over Q(T) only".into()));
    }
    Ok(match v.kind() {
        PavKind::Trivial => Base::Trivial,
        PavKind::Arch { .. } => Base::Arch,
        PavKind::Ultra { place: Place::Prime(p), .. } => Base::Adic(*p),
        PavKind::UltraDegenerate { place: Place::Prime(p) } => Base::AdicDegenerate(*p),
        _ => return Err(Error::UnsupportedShape("base PAV".into())),
    })
}

/// `v'` restricted to 50 sample constants agrees with `v`.
pub fn check_extends(vprime: &Pav, v: &Pav) -> Result<()> {
    let f = vprime.field();
    if f.base() != Some(v.field()) {
        return Err(Error::NotAnExtension("v' must live on F(T) over the field of v".into()));
    }
    let mut s = Sampler::new(v.field(), 0x5eed);
    for c in s.take_elements(50) {
        let (a, b) = (vprime.eval(&f.constant(&c))?, v.eval(&c)?);
        if matches!(a.cmp(&b), XOrd::Less | XOrd::Greater) {
            return Err(Error::NotAnExtension(format!("|{}| is {} upstairs and {} below", v.field().fmt_element(&c), a, b)));
        }
    }
    Ok(())
}

fn t_of(field: &FieldDescriptor) -> Element {
    field.variable().expect("function field")
}

fn place_polys(v: &Pav, out: &mut Vec<QPoly>) {
    match v.kind() {
        PavKind::Ultra { place, .. } | PavKind::UltraDegenerate { place } | PavKind::Composite { place, .. } => {
            if let Some(q) = place.qpoly() {
                out.push(q);
            }
        }
        PavKind::Gauss { center, .. } => {
            if let Some(a) = center.as_rational() {
                out.push(QPoly::new(vec![-a, Rational::one()]));
            }
        }
        _ => {}
    }
}

fn qpoly_elem(field: &FieldDescriptor, q: &QPoly) -> Element {
    let t = t_of(field);
    q.coeffs().iter().rev().fold(field.zero(), |acc, c| acc.mul(&t).add(&field.rational(c.clone())))
}

/// The center of `v'` on `P^1`, found by evaluation: the chart is `1/T` when
/// `|T|' > 1`, otherwise the center is cut out by `{g : |g|' < 1}`
/// (`{g : |g|' = 0}` for Archimedean `v'`).
pub fn center_on_p1(vprime: &Pav, v: &Pav) -> Result<Center> {
    check_extends(vprime, v)?;
    let base = classify_base(v)?;
    let field = vprime.field();
    let tv = vprime.eval(&t_of(field))?;
    let arch = vprime.is_archimedean();
    if tv.is_infinite() || (!arch && tv.cmp(&XReal::one()) == XOrd::Greater) {
        return Ok(Center::Infinity);
    }
    let hits = |g: &Element| -> Result<bool> {
        let x = vprime.eval(g)?;
        Ok(if arch { x.is_zero() } else { x.cmp(&XReal::one()) == XOrd::Less })
    };
    match base {
        Base::Adic(p) | Base::AdicDegenerate(p) => {
            let max_deg = if p.pow(3) <= 2000 { 3 } else if p * p <= 2000 { 2 } else { 1 };
            for d in 1..=max_deg {
                for idx in 0..p.pow(d as u32) {
                    let mut coeffs: Vec<u64> = (0..d).map(|i| (idx / p.pow(i as u32)) % p).collect();
                    coeffs.push(1);
                    let lift = QPoly::new(coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect());
                    if hits(&qpoly_elem(field, &lift))? {
                        return Ok(Center::Closed(FibrePoly::Fp { p, coeffs }));
                    }
                }
            }
            Ok(Center::Generic)
        }
        Base::Trivial | Base::Arch => {
            let mut cands = Vec::new();
            place_polys(vprime, &mut cands);
            for k in -3..=3 {
                cands.push(QPoly::new(vec![Rational::from_integer(BigInt::from(k)), Rational::one()]));
            }
            cands.sort_by_key(|q| q.deg());
            for q in cands {
                if hits(&qpoly_elem(field, &q))? {
                    return Ok(Center::Closed(FibrePoly::from_q(&q)));
                }
            }
            Ok(Center::Generic)
        }
    }
}

fn unclassifiable(vprime: &Pav) -> Error {
    Error::Unclassifiable(vprime.to_string())
}

/// Classification of `v'` as a point of the Berkovich line over the
/// completed residue field of `v`.
pub fn reduce_to_berk_p1(vprime: &Pav, v: &Pav) -> Result<BerkP1Point> {
    check_extends(vprime, v)?;
    let base = classify_base(v)?;
    if matches!(base, Base::AdicDegenerate(_)) {
        return Err(unclassifiable(vprime));
    }
    let field = vprime.field();
    let is_arch = matches!(base, Base::Arch);
    match vprime.kind() {
        PavKind::Composite { place: Place::Infinity, .. } => Ok(BerkP1Point::InfinityPoint),
        PavKind::Composite { place, residue } => Ok(BerkP1Point::Classical { place: place.clone(), residue: (**residue).clone() }),
        _ if is_arch => Err(unclassifiable(vprime)),
        PavKind::Trivial => Ok(BerkP1Point::DiscPoint { center: parse_place(field, "T")?, radius: XReal::one() }),
        PavKind::Ultra { place: Place::Infinity, .. } | PavKind::UltraDegenerate { place: Place::Infinity } => {
            Ok(BerkP1Point::InfinityPoint)
        }
        PavKind::Ultra { place, c } => Ok(BerkP1Point::DiscPoint { center: place.clone(), radius: c.value_at_ord(1) }),
        PavKind::UltraDegenerate { place } => {
            let k = residue_field(field, place)?;
            Ok(BerkP1Point::Classical { place: place.clone(), residue: Pav::trivial(&k) })
        }
        PavKind::Gauss { center, slope, .. } => {
            if slope.is_negative() {
                return Ok(BerkP1Point::InfinityPoint);
            }
            let a = center.as_rational().ok_or_else(|| unclassifiable(vprime))?;
            let c = parse_place(field, &format!("T - ({})", fmt_rational(&a)))?;
            Ok(BerkP1Point::DiscPoint { center: c, radius: XReal::exp(-slope) })
        }
        _ => Err(unclassifiable(vprime)),
    }
}

fn mod_p(q: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let d = q.denom().mod_floor(&pb).to_u64()?;
    if d == 0 {
        return None;
    }
    let n = q.numer().mod_floor(&pb).to_u64()?;
    Some(n * modp::invm(d, p) % p)
}

/// The scheme point under a Berkovich point, read off its data alone.
pub fn scheme_point(b: &BerkP1Point, v: &Pav) -> Result<Center> {
    let base = classify_base(v)?;
    let closed_q = |pl: &Place| -> Result<Center> {
        let q = pl.qpoly().ok_or_else(|| Error::UnsupportedShape("place over Q expected".into()))?;
        Ok(Center::Closed(FibrePoly::from_q(&q)))
    };
    match (b, base) {
        (BerkP1Point::InfinityPoint, _) => Ok(Center::Infinity),
        (BerkP1Point::Classical { place, .. }, Base::Trivial | Base::Arch) => closed_q(place),
        (BerkP1Point::DiscPoint { center, radius }, Base::Trivial) => {
            if radius.cmp(&XReal::one()) == XOrd::Less {
                closed_q(center)
            } else {
                Ok(Center::Generic)
            }
        }
        (BerkP1Point::DiscPoint { center, radius }, Base::Adic(p)) => {
            let a = center.rational_point().and_then(|a| a.as_rational()).ok_or_else(|| Error::UnsupportedShape("disc center".into()))?;
            match mod_p(&a, p) {
                None => Ok(Center::Infinity),
                Some(_) if radius.cmp(&XReal::one()) != XOrd::Less => Ok(Center::Generic),
                Some(r) => Ok(Center::Closed(FibrePoly::Fp { p, coeffs: vec![(p - r) % p, 1] })),
            }
        }
        (BerkP1Point::Classical { place, residue }, Base::Adic(p)) => {
            if let Some(a) = place.rational_point().and_then(|a| a.as_rational()) {
                return Ok(match mod_p(&a, p) {
                    None => Center::Infinity,
                    Some(r) => Center::Closed(FibrePoly::Fp { p, coeffs: vec![(p - r) % p, 1] }),
                });
            }
            let alpha = residue.field().generator().ok_or_else(|| Error::UnsupportedShape("residue field".into()))?;
            if residue.eval(&alpha)?.cmp(&XReal::one()) == XOrd::Greater {
                return Ok(Center::Infinity);
            }
            match residue.kind() {
                PavKind::Ultra { place: Place::Ideal(q), .. } | PavKind::UltraDegenerate { place: Place::Ideal(q) } => {
                    let g: Option<Vec<u64>> = q.g.coeffs().iter().map(|c| mod_p(c, p)).collect();
                    let g = g.ok_or_else(|| Error::UnsupportedShape("ideal generator".into()))?;
                    Ok(Center::Closed(FibrePoly::Fp { p, coeffs: modp::monic(&g, p) }))
                }
                _ => Err(Error::Unclassifiable(residue.to_string())),
            }
        }
        (_, Base::AdicDegenerate(_)) => Err(Error::Unclassifiable("residually trivial base".into())),
        (BerkP1Point::DiscPoint { .. }, Base::Arch) => Err(Error::Unclassifiable("disc point over an Archimedean base".into())),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagramReport {
    pub center: Center,
    pub berk: BerkP1Point,
    pub scheme_point: Center,
    pub commutes: bool,
}

impl DiagramReport {
    pub fn to_json(&self, field: &FieldDescriptor) -> Value {
        json!({
            "center": self.center.to_json()["center"],
            "berk": self.berk.to_json(field)["berk"],
            "scheme_point": self.scheme_point.to_json()["center"],
            "commutes": self.commutes,
        })
    }
}

/// Center versus the scheme point of the reduction.
pub fn check_diagram(vprime: &Pav, v: &Pav) -> Result<DiagramReport> {
    let center = center_on_p1(vprime, v)?;
    let berk = reduce_to_berk_p1(vprime, v)?;
    let sp = scheme_point(&berk, v)?;
    let commutes = sp == center;
    Ok(DiagramReport { center, berk, scheme_point: sp, commutes })
}

/// The three base PAVs of the diagram check: trivial, Archimedean, 5-adic.
pub fn diagram_bases() -> Vec<Pav> {
    let q = FieldDescriptor::Rationals;
    vec![
        Pav::trivial(&q),
        Pav::arch(&q, 0, Rational::one()).unwrap(),
        Pav::ultra(&q, Place::Prime(5), Scale::Rat(Rational::one())).unwrap(),
    ]
}

fn composites(field: &FieldDescriptor, v: &Pav, place: &str) -> Result<Vec<Pav>> {
    let pl = parse_place(field, place)?;
    let k = residue_field(field, &pl)?;
    let residues = if k == *v.field() {
        vec![v.clone()]
    } else {
        extensions_over(&ExtensionProblem::new(v.clone(), k)?)?.into_iter().map(|e| e.pav).collect()
    };
    residues.into_iter().map(|w| Pav::compose(field, pl.clone(), w)).collect()
}

/// Every supported extension shape of `v` to `Q(T)`: composites at degree-one,
/// degree-two and infinite places, Gauss points, and the places of `Q(T)`
/// itself over a trivial base.
pub fn taxonomy_over(v: &Pav) -> Result<Vec<Pav>> {
    let field = FieldDescriptor::function_field(v.field().clone(), "T")?;
    let q = v.field();
    let r = |a: i64, b: i64| Rational::new(BigInt::from(a), BigInt::from(b));
    let mut out = Vec::new();
    for pl in ["T - 2", "T + 1/3", "T^2 - 2", "T^2 + 1", "inf"] {
        out.extend(composites(&field, v, pl)?);
    }
    match v.kind() {
        PavKind::Trivial => {
            out.push(Pav::trivial(&field));
            for (pl, c) in [("T - 2", Scale::Rat(Rational::one())), ("T", Scale::log(5)), ("T^2 - 2", Scale::Rat(r(1, 2))), ("inf", Scale::Rat(Rational::one()))] {
                out.push(Pav::ultra(&field, parse_place(&field, pl)?, c)?);
            }
            for pl in ["T", "T^2 + 1", "inf"] {
                out.push(Pav::ultra_degenerate(&field, parse_place(&field, pl)?)?);
            }
            for (a, s) in [(2, r(1, 1)), (0, r(0, 1)), (1, r(-1, 1))] {
                out.push(Pav::gauss(&field, v.clone(), q.int(a), s)?);
            }
        }
        PavKind::Ultra { .. } => {
            for (a, s) in [(q.int(0), r(1, 2)), (q.int(1), r(0, 1)), (q.rational(r(1, 5)), r(1, 1)), (q.int(3), r(2, 1)), (q.int(0), r(-1, 1))] {
                out.push(Pav::gauss(&field, v.clone(), a, s)?);
            }
        }
        _ => {}
    }
    Ok(out)
}

/// Disc radii `exp(-gamma)` of Gauss points over `v` centred at 0.
pub fn gauss_radius_ladder(v: &Pav, gammas: &[Rational]) -> Result<Vec<XReal>> {
    let field = FieldDescriptor::function_field(v.field().clone(), "T")?;
    let mut out = Vec::new();
    for g in gammas {
        let w = Pav::gauss(&field, v.clone(), v.field().int(0), g.clone())?;
        match reduce_to_berk_p1(&w, v)? {
            BerkP1Point::DiscPoint { radius, .. } => out.push(radius),
            other => return Err(Error::Unclassifiable(format!("{:?}", other))),
        }
    }
    Ok(out)
}

/// Strictly decreasing under exact comparison.
pub fn strictly_decreasing(xs: &[XReal]) -> bool {
    xs.windows(2).all(|w| w[0].cmp(&w[1]) == XOrd::Greater)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::parse_field;
    use crate::scalar::{int, rat};

    fn qt() -> FieldDescriptor {
        parse_field("Q(T)").unwrap()
    }

    #[test]
    fn center_examples() {
        let f = qt();
        let q = FieldDescriptor::Rationals;
        let arch = Pav::arch(&q, 0, int(1)).unwrap();
        let c = Pav::compose(&f, parse_place(&f, "T-2").unwrap(), arch.clone()).unwrap();
        assert_eq!(center_on_p1(&c, &arch).unwrap(), Center::Closed(FibrePoly::Q(vec![int(-2), int(1)])));
        assert_eq!(
            reduce_to_berk_p1(&c, &arch).unwrap(),
            BerkP1Point::Classical { place: parse_place(&f, "T-2").unwrap(), residue: arch.clone() }
        );

        let triv = Pav::trivial(&q);
        let inf = Pav::ultra(&f, Place::Infinity, Scale::Rat(int(1))).unwrap();
        assert_eq!(center_on_p1(&inf, &triv).unwrap(), Center::Infinity);

        let p5 = Pav::ultra(&q, Place::Prime(5), Scale::Rat(int(1))).unwrap();
        let g = Pav::gauss(&f, p5.clone(), q.int(0), rat(1, 2)).unwrap();
        assert_eq!(center_on_p1(&g, &p5).unwrap(), Center::Closed(FibrePoly::Fp { p: 5, coeffs: vec![0, 1] }));
    }

    #[test]
    fn reduction_examples() {
        let f = qt();
        let q = FieldDescriptor::Rationals;
        let triv = Pav::trivial(&q);
        let g = Pav::gauss(&f, triv.clone(), q.int(0), int(1)).unwrap();
        assert_eq!(
            reduce_to_berk_p1(&g, &triv).unwrap(),
            BerkP1Point::DiscPoint { center: parse_place(&f, "T").unwrap(), radius: XReal::exp(int(-1)) }
        );
        // the place T with c = 1 is the same seminorm as that Gauss point
        let u = Pav::ultra(&f, parse_place(&f, "T").unwrap(), Scale::Rat(int(1))).unwrap();
        assert_eq!(reduce_to_berk_p1(&u, &triv).unwrap(), reduce_to_berk_p1(&g, &triv).unwrap());

        let p5 = Pav::ultra(&q, Place::Prime(5), Scale::Rat(int(1))).unwrap();
        assert!(matches!(center_on_p1(&g, &p5), Err(Error::NotAnExtension(_))));
        let arch = Pav::arch(&q, 0, int(1)).unwrap();
        assert!(matches!(reduce_to_berk_p1(&u, &arch), Err(Error::NotAnExtension(_))));
    }

    #[test]
    fn diagram_commutes_over_taxonomy() {
        for v in diagram_bases() {
            let members = taxonomy_over(&v).unwrap();
            assert!(members.len() >= 5);
            for w in members {
                let r = check_diagram(&w, &v).unwrap();
                assert!(r.commutes, "{} over {}: {:?}", w, v, r);
            }
        }
    }

    #[test]
    fn radius_ladder() {
        let q = FieldDescriptor::Rationals;
        let p5 = Pav::ultra(&q, Place::Prime(5), Scale::Rat(int(1))).unwrap();
        let gs = [int(0), rat(1, 4), rat(1, 2), int(1), int(2)];
        let radii = gauss_radius_ladder(&p5, &gs).unwrap();
        assert!(strictly_decreasing(&radii));
        assert_eq!(radii[0], XReal::one());
    }
}
