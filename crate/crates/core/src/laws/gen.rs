//! Seeded random instances for the law suites.
//!
//! Exact truncations of polynomial recurrences blow up quickly: a state
//! update that squares the state doubles the degree every tick. Every
//! generated cell therefore keeps its next state (and any output that is fed
//! back through a trace) affine in the state and fed-back slots, with
//! constant coefficients, optionally times one external input. Outputs that
//! leave the loop are unrestricted up to the degree bound.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::base::{Activation, BaseMorphism, BaseTag, FinMap, Monomial, Poly, PolyMap, SmoothMap};
use crate::caus::StatefulSeq;
use crate::error::Result;
use crate::obj::{Obj, Point, Slot};
use crate::rational::Rational;
use crate::seq::Seq;
use crate::square::TwoCell;

pub struct Gen {
    rng: ChaCha8Rng,
    base: BaseTag,
    /// Total degree bound for polynomial components.
    pub degree: u32,
    /// Largest object (number of slots) drawn by [`Gen::obj`].
    pub max_dim: usize,
    /// Allow fed-back terms of the form `c · s · x` with `x` external.
    pub bilinear: bool,
}

impl Gen {
    pub fn new(seed: u64, base: BaseTag) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            base,
            degree: 2,
            max_dim: 2,
            bilinear: false,
        }
    }

    pub fn base(&self) -> BaseTag {
        self.base
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// An object with between `min` and `max_dim` slots.
    pub fn obj(&mut self, min: usize) -> Obj {
        let n = self.rng.gen_range(min..=self.max_dim.max(min));
        self.obj_of_len(n)
    }

    pub fn obj_of_len(&mut self, n: usize) -> Obj {
        match self.base {
            BaseTag::Poly | BaseTag::Smooth => Obj::real(n),
            BaseTag::Fin => {
                let slots = (0..n)
                    .map(|_| match self.below(4) {
                        0 => Slot::Fin(2),
                        1 => Slot::Fin(3),
                        2 => Slot::Cyclic(2),
                        _ => Slot::Cyclic(3),
                    })
                    .collect();
                Obj::from_slots(slots)
            }
        }
    }

    /// An additive object: the Fin base only has addition on cyclic slots.
    pub fn additive_obj(&mut self, min: usize) -> Obj {
        match self.base {
            BaseTag::Fin => {
                let n = self.rng.gen_range(min..=self.max_dim.max(min));
                let slots = (0..n)
                    .map(|_| Slot::Cyclic(2 + self.below(2) as u32))
                    .collect();
                Obj::from_slots(slots)
            }
            _ => self.obj(min),
        }
    }

    /// Small coefficients, mostly integers.
    pub fn coeff(&mut self) -> Rational {
        const CHOICES: [(i64, i64); 7] =
            [(1, 1), (-1, 1), (2, 1), (-2, 1), (3, 1), (1, 2), (-3, 2)];
        let (p, q) = *CHOICES.choose(&mut self.rng).expect("non-empty");
        Rational::new(p, q)
    }

    pub fn point(&mut self, obj: &Obj) -> Point {
        match self.base {
            BaseTag::Poly => Point::Rat(
                (0..obj.len())
                    .map(|_| Rational::new(self.rng.gen_range(-4..=4), self.rng.gen_range(1..=2)))
                    .collect(),
            ),
            BaseTag::Smooth => Point::Real(
                (0..obj.len())
                    .map(|_| self.rng.gen_range(-1.5..1.5))
                    .collect(),
            ),
            BaseTag::Fin => Point::Fin(
                obj.slots()
                    .iter()
                    .map(|s| self.rng.gen_range(0..s.cardinality().unwrap_or(1)))
                    .collect(),
            ),
        }
    }

    pub fn constant(&mut self, obj: &Obj) -> Result<BaseMorphism> {
        let p = self.point(obj);
        BaseMorphism::constant(self.base, obj, &p)
    }

    pub(crate) fn monomial(&mut self, vars: &[u32], max_degree: u32) -> Monomial {
        if vars.is_empty() {
            return Monomial::one();
        }
        let d = self.rng.gen_range(0..=max_degree);
        let pairs = (0..d)
            .map(|_| (*vars.choose(&mut self.rng).expect("non-empty"), 1))
            .collect();
        Monomial::from_pairs(pairs)
    }

    /// A polynomial in `nvars` variables. When `affine` is set, the first
    /// `looped` variables occur at most linearly and never multiplied
    /// together.
    pub(crate) fn poly(&mut self, nvars: usize, looped: usize, affine: bool) -> Poly {
        let all: Vec<u32> = (0..nvars as u32).collect();
        let free: Vec<u32> = (looped as u32..nvars as u32).collect();
        let mut p = Poly::zero();
        for _ in 0..1 + self.below(3) {
            let c = self.coeff();
            let m = if affine && looped > 0 && self.chance(0.5) {
                let v = self.below(looped) as u32;
                let mut pairs = vec![(v, 1)];
                if self.bilinear && !free.is_empty() && self.chance(0.3) {
                    pairs.push((*free.choose(&mut self.rng).expect("non-empty"), 1));
                }
                Monomial::from_pairs(pairs)
            } else if affine {
                self.monomial(&free, self.degree)
            } else {
                self.monomial(&all, self.degree)
            };
            p.add_assign(&Poly::term(c, m));
        }
        p
    }

    /// A morphism `dom -> cod` whose first `loop_out` outputs are affine in
    /// the first `loop_in` inputs.
    pub fn shaped(
        &mut self,
        dom: &Obj,
        cod: &Obj,
        loop_in: usize,
        loop_out: usize,
    ) -> Result<BaseMorphism> {
        match self.base {
            BaseTag::Poly => {
                let comps = (0..cod.len())
                    .map(|j| self.poly(dom.len(), loop_in, j < loop_out))
                    .collect();
                Ok(BaseMorphism::Poly(PolyMap::new(dom.clone(), comps)?))
            }
            BaseTag::Smooth => {
                let comps = (0..cod.len())
                    .map(|j| self.poly(dom.len(), loop_in, j < loop_out))
                    .collect();
                let p = SmoothMap::poly(PolyMap::new(dom.clone(), comps)?);
                if !cod.is_empty() && self.chance(0.5) {
                    let act = *[Activation::Tanh, Activation::Sigmoid, Activation::Softplus]
                        .choose(&mut self.rng)
                        .expect("non-empty");
                    Ok(BaseMorphism::Smooth(
                        SmoothMap::activation(act, cod.len()).after(&p),
                    ))
                } else {
                    Ok(BaseMorphism::Smooth(p))
                }
            }
            BaseTag::Fin => {
                let rows = dom.cardinality().unwrap_or(0);
                let mut entries = Vec::with_capacity(rows * cod.len());
                for _ in 0..rows {
                    for s in cod.slots() {
                        entries.push(self.rng.gen_range(0..s.cardinality().unwrap_or(1)));
                    }
                }
                Ok(BaseMorphism::Fin(FinMap::table(
                    dom.clone(),
                    cod.clone(),
                    entries,
                )?))
            }
        }
    }

    /// An unconstrained morphism.
    pub fn morphism(&mut self, dom: &Obj, cod: &Obj) -> Result<BaseMorphism> {
        self.shaped(dom, cod, 0, 0)
    }

    /// A 2-cell whose next state and first `loop_cod` outputs are affine in
    /// its state and first `loop_dom` inputs.
    pub fn cell(
        &mut self,
        prv: &Obj,
        dom: &Obj,
        nxt: &Obj,
        cod: &Obj,
        loop_dom: usize,
        loop_cod: usize,
    ) -> Result<TwoCell> {
        let u = self.shaped(
            &prv.times(dom),
            &nxt.times(cod),
            prv.len() + loop_dom,
            nxt.len() + loop_cod,
        )?;
        TwoCell::new(prv.clone(), dom.clone(), nxt.clone(), cod.clone(), u)
    }

    /// A free 2-cell, for single-tick laws.
    pub fn free_cell(&mut self, prv: &Obj, dom: &Obj, nxt: &Obj, cod: &Obj) -> Result<TwoCell> {
        let u = self.morphism(&prv.times(dom), &nxt.times(cod))?;
        TwoCell::new(prv.clone(), dom.clone(), nxt.clone(), cod.clone(), u)
    }

    /// A random causal morphism that runs through `dom.len()` phases
    /// cyclically: tick `k` reads `dom[k % p]` and writes `cod[k % p]`, and
    /// the first `loop_dom[k % p]` input and `loop_cod[k % p]` output slots
    /// are meant to be fed back. State sizes vary per phase. A single phase
    /// gives a Mealy machine.
    pub fn circuit(
        &mut self,
        dom: &[Obj],
        cod: &[Obj],
        loop_dom: &[usize],
        loop_cod: &[usize],
    ) -> Result<StatefulSeq> {
        let p = dom.len();
        assert!(
            p > 0 && cod.len() == p && loop_dom.len() == p && loop_cod.len() == p,
            "phase lists must agree"
        );
        let states: Vec<Obj> = (0..p).map(|_| self.obj(0)).collect();
        let mut cells = Vec::with_capacity(p);
        for k in 0..p {
            let next = &states[(k + 1) % p];
            cells.push(self.cell(&states[k], &dom[k], next, &cod[k], loop_dom[k], loop_cod[k])?);
        }
        let init = self.constant(&states[0])?;
        let seq = if p == 1 {
            Seq::constant(cells.pop().expect("one cell"))
        } else {
            Seq::periodic(Vec::new(), cells)
        };
        StatefulSeq::new(init, seq)
    }

    /// A Mealy machine `dom -> cod` with no fed-back slots.
    pub fn mealy(&mut self, dom: &Obj, cod: &Obj) -> Result<StatefulSeq> {
        self.circuit(
            std::slice::from_ref(dom),
            std::slice::from_ref(cod),
            &[0],
            &[0],
        )
    }

    /// Either a Mealy machine or, with probability one half, a two-phase
    /// machine over the same objects.
    pub fn causal(&mut self, dom: &Obj, cod: &Obj) -> Result<StatefulSeq> {
        if self.chance(0.5) {
            self.mealy(dom, cod)
        } else {
            self.circuit(
                &[dom.clone(), dom.clone()],
                &[cod.clone(), cod.clone()],
                &[0, 0],
                &[0, 0],
            )
        }
    }

    /// Inputs for the first `n` ticks of `s`.
    pub fn inputs(&mut self, s: &StatefulSeq, n: usize) -> Result<Vec<Point>> {
        (0..n).map(|k| Ok(self.point(&s.dom_at(k)?))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caus::truncate;

    #[test]
    fn seeds_are_reproducible() {
        let draw = |seed| {
            let mut g = Gen::new(seed, BaseTag::Poly);
            let s = g.mealy(&Obj::real(2), &Obj::real(1)).unwrap();
            format!("{:?}", s)
        };
        assert_eq!(draw(3), draw(3));
        assert_ne!(draw(3), draw(4));
    }

    #[test]
    fn fed_back_outputs_stay_affine() {
        let mut g = Gen::new(11, BaseTag::Poly);
        g.degree = 3;
        for _ in 0..20 {
            let m = g.shaped(&Obj::real(4), &Obj::real(3), 2, 2).unwrap();
            let BaseMorphism::Poly(p) = m else {
                unreachable!()
            };
            for comp in &p.comps()[..2] {
                for (mono, _) in comp.terms() {
                    let looped: u32 = mono
                        .factors()
                        .iter()
                        .filter(|(v, _)| *v < 2)
                        .map(|(_, e)| e)
                        .sum();
                    assert!(looped <= 1, "{:?}", comp);
                }
            }
        }
    }

    #[test]
    fn truncation_degree_stays_bounded() {
        let mut g = Gen::new(5, BaseTag::Poly);
        for _ in 0..5 {
            let s = g.mealy(&Obj::real(1), &Obj::real(1)).unwrap();
            let BaseMorphism::Poly(p) = truncate(&s, 8).unwrap() else {
                unreachable!()
            };
            assert!(p.degree() <= 4, "degree {}", p.degree());
        }
    }

    #[test]
    fn phases_alternate() {
        let mut g = Gen::new(1, BaseTag::Fin);
        let (a, b) = (Obj::fin(2), Obj::fin(3));
        let s = g
            .circuit(
                &[a.clone(), b.clone()],
                &[b.clone(), a.clone()],
                &[0, 0],
                &[0, 0],
            )
            .unwrap();
        assert_eq!(s.dom_at(0).unwrap(), a);
        assert_eq!(s.dom_at(3).unwrap(), b);
        assert_eq!(s.cod_at(2).unwrap(), b);
    }
}
