use pavforge_core::fields::{parse_element, parse_field, parse_place};
use pavforge_core::linalg::Matrix;
use pavforge_core::pav::sample::Sampler;
use pavforge_core::pav::Scale;
use pavforge_core::scalar::{int, rat};
use pavforge_core::spaces::{epsilon_of, power_flow, FlowExp};
use pavforge_core::xreal::XOrd;
use pavforge_core::{Element, FieldDescriptor, Pav, PseudoNorm, Scalar, ScalarPoly, XReal};
use proptest::prelude::*;

fn q() -> FieldDescriptor {
    parse_field("Q").unwrap()
}

fn qt() -> FieldDescriptor {
    parse_field("Q(T)").unwrap()
}

fn pavs() -> Vec<Pav> {
    let (k, kt) = (q(), qt());
    vec![
        Pav::ultra(&k, parse_place(&k, "3").unwrap(), Scale::Rat(int(1))).unwrap(),
        Pav::ultra(&k, parse_place(&k, "5").unwrap(), Scale::log(5)).unwrap(),
        Pav::arch(&k, 0, int(1)).unwrap(),
        Pav::arch(&k, 0, rat(1, 2)).unwrap(),
        Pav::ultra(&kt, parse_place(&kt, "T-2").unwrap(), Scale::Rat(rat(1, 2))).unwrap(),
        Pav::ultra_degenerate(&kt, parse_place(&kt, "T^2-2").unwrap()).unwrap(),
    ]
}

// overlapping enclosures compare as Indeterminate
fn close(a: &XReal, b: &XReal) -> bool {
    a.is_finite_positive() && b.is_finite_positive() && (a.ln() - b.ln()).abs() < 1e-9
}

fn same(a: &XReal, b: &XReal) -> bool {
    match a.cmp(b) {
        XOrd::Equal => true,
        _ => close(a, b),
    }
}

fn at_most(a: &XReal, b: &XReal) -> bool {
    matches!(a.cmp(b), XOrd::Less | XOrd::Equal) || close(a, b)
}

fn small_rat() -> impl Strategy<Value = Scalar> {
    (1i64..7, 1i64..7).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplicative_on_samples(seed in any::<u64>(), which in 0usize..6) {
        let v = &pavs()[which];
        let mut s = Sampler::new(v.field(), seed);
        let (f, g) = (s.element(), s.element());
        let (a, b, ab) = (v.eval(&f).unwrap(), v.eval(&g).unwrap(), v.eval(&f.mul(&g)).unwrap());
        if let Ok(p) = a.mul(&b) {
            prop_assert!(same(&p, &ab), "{:?} * {:?} vs {:?}", a, b, ab);
        }
    }

    #[test]
    fn ultrametric_inequality(seed in any::<u64>(), which in prop::sample::select(vec![0usize, 1, 4, 5])) {
        let v = &pavs()[which];
        let mut s = Sampler::new(v.field(), seed);
        let (f, g) = (s.element(), s.element());
        let m = v.eval(&f).unwrap().max(&v.eval(&g).unwrap());
        prop_assert!(at_most(&v.eval(&f.add(&g)).unwrap(), &m));
    }

    #[test]
    fn finiteness_and_kernel_match_values(seed in any::<u64>(), which in 0usize..6) {
        let v = &pavs()[which];
        let f = Sampler::new(v.field(), seed).element();
        let x = v.eval(&f).unwrap();
        prop_assert_eq!(v.in_finiteness_ring(&f).unwrap(), !x.is_infinite());
        prop_assert_eq!(v.in_kernel(&f).unwrap(), x.is_zero());
    }

    #[test]
    fn flow_composes(seed in any::<u64>(), which in 0usize..6, a in small_rat(), b in small_rat()) {
        let v = &pavs()[which];
        // an Archimedean exponent pushing eps past 1 leaves the space
        let Ok(va) = power_flow(v, &FlowExp::Finite(a.clone())) else { return Ok(()) };
        let Ok(vab) = power_flow(&va, &FlowExp::Finite(b.clone())) else { return Ok(()) };
        let d = power_flow(v, &FlowExp::Finite(&a * &b)).unwrap();
        let f = Sampler::new(v.field(), seed).element();
        prop_assert!(same(&vab.eval(&f).unwrap(), &d.eval(&f).unwrap()));
    }

    #[test]
    fn flow_value_is_power(seed in any::<u64>(), which in 0usize..6, s in small_rat()) {
        let v = &pavs()[which];
        let Ok(w) = power_flow(v, &FlowExp::Finite(s.clone())) else { return Ok(()) };
        let f = Sampler::new(v.field(), seed).element();
        let x = v.eval(&f).unwrap();
        prop_assume!(x.is_finite_positive());
        prop_assert!(same(&w.eval(&f).unwrap(), &x.pow(&s)));
    }

    #[test]
    fn epsilon_vanishes_off_archimedean(which in 0usize..6) {
        let v = &pavs()[which];
        prop_assert_eq!(epsilon_of(v) == int(0), !v.is_archimedean());
    }

    #[test]
    fn pnorm_homogeneous(seed in any::<u64>(), which in prop::sample::select(vec![0usize, 1, 4]), w in prop::collection::vec(small_rat(), 3)) {
        let v = &pavs()[which];
        let n = PseudoNorm::diagonal(v, w.into_iter().map(XReal::rational).collect()).unwrap();
        let mut s = Sampler::new(v.field(), seed);
        let x: Vec<Element> = (0..3).map(|_| s.element()).collect();
        let l = s.nonzero();
        let lx: Vec<Element> = x.iter().map(|e| l.mul(e)).collect();
        let lhs = n.eval(&lx).unwrap();
        if let Ok(rhs) = v.eval(&l).unwrap().mul(&n.eval(&x).unwrap()) {
            prop_assert!(same(&lhs, &rhs));
        }
    }

    #[test]
    fn double_dual_bounded(seed in any::<u64>(), which in prop::sample::select(vec![0usize, 1, 2, 4]), w in prop::collection::vec(small_rat(), 2)) {
        let v = &pavs()[which];
        let n = PseudoNorm::diagonal(v, w.into_iter().map(XReal::rational).collect()).unwrap();
        let mut s = Sampler::new(v.field(), seed);
        let x: Vec<Element> = (0..2).map(|_| s.element()).collect();
        prop_assert!(at_most(&n.dual().dual().eval(&x).unwrap(), &n.eval(&x).unwrap()));
    }

    #[test]
    fn gcd_of_multiples(a in prop::collection::vec(-9i64..9, 1..5), b in prop::collection::vec(-9i64..9, 1..5), h in prop::collection::vec(-9i64..9, 1..4)) {
        let p = |c: &Vec<i64>| ScalarPoly::new(c.iter().map(|&x| int(x)).collect());
        let (a, b, h) = (p(&a), p(&b), p(&h));
        prop_assume!(!a.is_zero() && !b.is_zero() && !h.is_zero());
        let (fa, fb) = (&a * &h, &b * &h);
        let g = fa.gcd(&fb);
        prop_assert!(g.is_monic());
        prop_assert!(g.divides(&fa) && g.divides(&fb));
        prop_assert!(h.divides(&g));
        prop_assert_eq!(g, (&a.gcd(&b) * &h.monic()).monic());
    }

    #[test]
    fn det_multiplicative(a in prop::collection::vec(-5i64..5, 9), b in prop::collection::vec(-5i64..5, 9)) {
        let m = |c: &Vec<i64>| Matrix::from_rows(c.chunks(3).map(|r| r.iter().map(|&x| int(x)).collect()).collect());
        let (a, b) = (m(&a), m(&b));
        prop_assert_eq!(a.mul(&b).det(), a.det() * b.det());
    }
}

#[test]
fn expression_zero_denominator() {
    assert!(parse_element("1/(T-T)", &qt()).is_err());
}
