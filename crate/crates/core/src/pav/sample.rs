//! Deterministic sample elements for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fields::{Element, FieldDescriptor, F1};
use crate::scalar::rat;

const SMALL_PRIMES: [i64; 4] = [2, 3, 5, 7];

/// Element generator biased towards elements with nonzero order at the usual places
/// (small primes, `T`, `T - 2`, `T^2 - 2`, infinity).
pub struct Sampler {
    field: FieldDescriptor,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(field: &FieldDescriptor, seed: u64) -> Sampler {
        Sampler { field: field.clone(), rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn small_int(&mut self) -> i64 {
        let mut n: i64 = self.rng.gen_range(1..=4);
        for _ in 0..self.rng.gen_range(0..3) {
            n *= SMALL_PRIMES[self.rng.gen_range(0..4)];
        }
        if self.rng.gen_bool(0.5) {
            -n
        } else {
            n
        }
    }

    fn rational(&mut self) -> Element {
        let n = self.small_int();
        let d = self.small_int().abs();
        Element::Nf(crate::fields::NfElem::rational(rat(n, d)))
    }

    fn constant(&mut self, field: &FieldDescriptor) -> Element {
        match field {
            FieldDescriptor::Rationals => self.rational(),
            FieldDescriptor::NumberField(_) => {
                let g = field.generator().unwrap();
                let mut x = self.rational();
                let mut gp = g.clone();
                for _ in 1..field.number_field().unwrap().degree() {
                    if self.rng.gen_bool(0.6) {
                        x = x.add(&self.rational().mul(&gp));
                    }
                    gp = gp.mul(&g);
                }
                x
            }
            FieldDescriptor::FunctionField { base, .. } => {
                let b = (**base).clone();
                self.function(&b, 1)
            }
        }
    }

    fn atoms(field: &FieldDescriptor) -> Vec<Element> {
        let t = field.variable().unwrap();
        let c = |n: i64| field.int(n);
        let mut v = vec![
            t.clone(),
            t.sub(&c(1)),
            t.sub(&c(2)),
            t.add(&c(1)),
            t.mul(&t).sub(&c(2)),
            t.mul(&t).add(&c(1)),
        ];
        if field.depth() == 2 {
            let s = Element::F1(F1::var()).lift_to(2);
            v.push(t.sub(&s));
            v.push(s.clone());
            v.push(s.sub(&c(1)));
            v.push(t.add(&s.mul(&s)));
        }
        v
    }

    fn function(&mut self, field: &FieldDescriptor, budget: u32) -> Element {
        let atoms = Self::atoms(field);
        let base = field.base().unwrap().clone();
        let mut f = field.constant(&self.constant_shallow(&base));
        for a in &atoms {
            if self.rng.gen_bool(0.25) {
                let e: i64 = [-2, -1, 1, 1, 2][self.rng.gen_range(0..5)];
                f = f.mul(&a.pow(e).unwrap());
            }
        }
        if budget > 0 && self.rng.gen_bool(0.3) {
            // a generic polynomial summand
            let t = field.variable().unwrap();
            let mut p = field.constant(&self.constant_shallow(&base));
            let mut tp = t.clone();
            for _ in 0..self.rng.gen_range(1..3) {
                p = p.add(&field.constant(&self.constant_shallow(&base)).mul(&tp));
                tp = tp.mul(&t);
            }
            f = f.add(&p);
            if f.is_zero() {
                f = p;
            }
        }
        f
    }

    fn constant_shallow(&mut self, field: &FieldDescriptor) -> Element {
        match field {
            FieldDescriptor::FunctionField { .. } => self.function(field, 0),
            _ => self.constant(field),
        }
    }

    /// A sample element; zero with small probability.
    pub fn element(&mut self) -> Element {
        if self.rng.gen_ratio(1, 25) {
            return self.field.zero();
        }
        self.nonzero()
    }

    pub fn nonzero(&mut self) -> Element {
        let field = self.field.clone();
        loop {
            let e = match &field {
                FieldDescriptor::FunctionField { .. } => self.function(&field, 1),
                _ => self.constant(&field),
            };
            if !e.is_zero() {
                return field.coerce(&e).unwrap();
            }
        }
    }

    pub fn take_elements(&mut self, n: usize) -> Vec<Element> {
        (0..n).map(|_| self.nonzero()).collect()
    }

    pub fn take_pairs(&mut self, n: usize) -> Vec<(Element, Element)> {
        (0..n).map(|_| (self.element(), self.element())).collect()
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}
