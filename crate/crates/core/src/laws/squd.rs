//! Equations between 2-cells: the double-category laws, the boundary adjustment
//! rule, the eight properties of the per-tick derivative, and its
//! behaviour on vertical towers.

use crate::base::{BaseMorphism, BaseTag, Source, Structural};
use crate::error::Result;
use crate::laws::{cells, Gen, Outcome, Runner};
use crate::obj::Obj;
use crate::square::{cross, hcomp, squd, vcomp, vcomp_all, TwoCell};

struct Kit {
    tag: BaseTag,
}

impl Kit {
    fn st(&self, kind: Structural) -> Result<BaseMorphism> {
        BaseMorphism::structural(self.tag, kind)
    }

    fn v(&self, kind: Structural) -> Result<TwoCell> {
        Ok(TwoCell::lift_v(&self.st(kind)?))
    }

    fn h(&self, kind: Structural) -> Result<TwoCell> {
        Ok(TwoCell::lift_h(&self.st(kind)?))
    }

    fn id(&self, x: &Obj) -> Result<BaseMorphism> {
        BaseMorphism::id(self.tag, x)
    }

    /// `0_X × X : X -> X × X`
    fn zero_first(&self, x: &Obj) -> Result<BaseMorphism> {
        self.st(Structural::Zero(x.clone()))?.product(&self.id(x)?)
    }

    /// `+_X × X : X³ -> X²`
    fn plus_first(&self, x: &Obj) -> Result<BaseMorphism> {
        self.st(Structural::Plus(x.clone()))?.product(&self.id(x)?)
    }

    /// `X × Δ_X : X² -> X³`
    fn copy_second(&self, x: &Obj) -> Result<BaseMorphism> {
        self.id(x)?
            .product(&self.st(Structural::Diagonal(x.clone()))?)
    }

    /// `(∏ X_k)² -> ∏ (X_k × X_k)`, the inverse of `Unzip`.
    fn zip(&self, xs: &[Obj]) -> Result<BaseMorphism> {
        let total: usize = xs.iter().map(Obj::len).sum();
        let mut sources = Vec::new();
        let mut at = 0;
        for x in xs {
            for copy in 0..2 {
                sources.extend((0..x.len()).map(|i| Source::Slot(copy * total + at + i)));
            }
            at += x.len();
        }
        let whole = Obj::product(xs);
        let cod = Obj::product(xs.iter().map(|x| x.power(2)).collect::<Vec<_>>().iter());
        BaseMorphism::wiring(self.tag, &whole.power(2), &cod, &sources)
    }
}

fn o(g: &mut Gen) -> Obj {
    g.additive_obj(0)
}

pub(crate) fn run(r: &mut Runner, g: &mut Gen) -> Result<()> {
    let mode = r.mode();
    let kit = Kit { tag: g.base() };
    g.degree = 3;
    for case in 0..r.cases() {
        let (s, x, s2, y) = (o(g), o(g), o(g), o(g));
        let f = g.free_cell(&s, &x, &s2, &y)?;

        let outcome = (|| -> Outcome {
            let (t, z, t2, w) = (o(g), o(g), o(g), o(g));
            let a = g.free_cell(&t, &z, &t2, &w)?;
            let (s3, v, r1, r2) = (o(g), o(g), o(g), o(g));
            let b = g.free_cell(&s2, &w, &s3, &v)?;
            let c = g.free_cell(&r1, &y, &r2, &z)?;
            // f ⋄ c ⋄ ..: c reads f's output y and writes z, a reads z
            let lhs = hcomp(&a, &hcomp(&c, &f)?)?;
            let rhs = hcomp(&hcomp(&a, &c)?, &f)?;
            if let Some(e) = cells(&lhs, &rhs, mode)? {
                return Ok(Some(e));
            }
            let (q1, q2, q3) = (o(g), o(g), o(g));
            let below = g.free_cell(b.nxt(), &q1, &q2, &q3)?;
            cells(
                &vcomp(&f, &vcomp(&b, &below)?)?,
                &vcomp(&vcomp(&f, &b)?, &below)?,
                mode,
            )
        })();
        r.holds("associativity", case, outcome);

        let outcome = (|| -> Outcome {
            let units = [
                (hcomp(&TwoCell::id_h(kit.tag, &y)?, &f)?, f.clone()),
                (hcomp(&f, &TwoCell::id_h(kit.tag, &x)?)?, f.clone()),
                (vcomp(&TwoCell::id_v(kit.tag, &s)?, &f)?, f.clone()),
                (vcomp(&f, &TwoCell::id_v(kit.tag, &s2)?)?, f.clone()),
            ];
            for (a, b) in &units {
                if let Some(e) = cells(a, b, mode)? {
                    return Ok(Some(e));
                }
            }
            Ok(None)
        })();
        r.holds("identities", case, outcome);

        let outcome = (|| -> Outcome {
            // (k ⋄ f) ⨾ (m ⋄ h) = (k ⨾ m) ⋄ (f ⨾ h)
            let (t, t2, z) = (o(g), o(g), o(g));
            let k = g.free_cell(&t, &y, &t2, &z)?;
            let (x2, y2, s3) = (o(g), o(g), o(g));
            let h = g.free_cell(&s2, &x2, &s3, &y2)?;
            let (t3, z2) = (o(g), o(g));
            let m = g.free_cell(&t2, &y2, &t3, &z2)?;
            let lhs = vcomp(&hcomp(&k, &f)?, &hcomp(&m, &h)?)?;
            let rhs = hcomp(&vcomp(&k, &m)?, &vcomp(&f, &h)?)?;
            cells(&lhs, &rhs, mode)
        })();
        r.holds("interchange", case, outcome);

        let outcome = (|| -> Outcome {
            // U(φ₁^v ⨾ (ψ₂^h ⋄ f ⋄ ψ₁^h) ⨾ φ₂^v) = (φ₂ × ψ₂) ∘ Uf ∘ (φ₁ × ψ₁)
            let (t, w, t2, z) = (o(g), o(g), o(g), o(g));
            let phi1 = g.morphism(&t, &s)?;
            let phi2 = g.morphism(&s2, &t2)?;
            let psi1 = g.morphism(&w, &x)?;
            let psi2 = g.morphism(&y, &z)?;
            let inner = hcomp(
                &hcomp(&TwoCell::lift_h(&psi2), &f)?,
                &TwoCell::lift_h(&psi1),
            )?;
            let lhs = vcomp(
                &vcomp(&TwoCell::lift_v(&phi1), &inner)?,
                &TwoCell::lift_v(&phi2),
            )?;
            let u = phi1
                .product(&psi1)?
                .then(f.underlying())?
                .then(&phi2.product(&psi2)?)?;
            cells(&lhs, &TwoCell::new(t, w, t2, z, u)?, mode)
        })();
        r.holds("adjust", case, outcome);

        let outcome = (|| -> Outcome {
            let phi = g.morphism(&x, &y)?;
            if let Some(e) = cells(
                &squd(&TwoCell::lift_h(&phi))?,
                &TwoCell::lift_h(&phi.diff()?),
                mode,
            )? {
                return Ok(Some(e));
            }
            let rhs = phi.diff()?.product(&phi)?.after(&kit.copy_second(&x)?)?;
            cells(&squd(&TwoCell::lift_v(&phi))?, &TwoCell::lift_v(&rhs), mode)
        })();
        r.holds("squd-lifts", case, outcome);

        let outcome = (|| -> Outcome {
            let lhs = hcomp(
                &vcomp(&TwoCell::lift_v(&kit.zero_first(&s)?), &squd(&f)?)?,
                &TwoCell::lift_h(&kit.zero_first(&x)?),
            )?;
            let kill = kit
                .st(Structural::Zero(y.clone()))?
                .after(&kit.st(Structural::Terminal(y.clone()))?)?;
            let rhs = hcomp(
                &TwoCell::lift_h(&kill),
                &vcomp(&f, &TwoCell::lift_v(&kit.zero_first(&s2)?))?,
            )?;
            cells(&lhs, &rhs, mode)
        })();
        r.holds("squd-zero", case, outcome);

        let outcome = (|| -> Outcome {
            let lhs = hcomp(
                &vcomp(&TwoCell::lift_v(&kit.plus_first(&s)?), &squd(&f)?)?,
                &TwoCell::lift_h(&kit.plus_first(&x)?),
            )?;
            let d = squd(&f)?;
            let middle = hcomp(
                &hcomp(&kit.h(Structural::Plus(y.clone()))?, &cross(&d, &d)?)?,
                &kit.h(Structural::Alpha(x.clone()))?,
            )?;
            let rhs = vcomp_all(&[
                kit.v(Structural::Alpha(s.clone()))?,
                middle,
                kit.v(Structural::Beta(s2.clone()))?,
                TwoCell::lift_v(&kit.plus_first(&s2)?),
            ])?;
            cells(&lhs, &rhs, mode)
        })();
        r.holds("squd-additive", case, outcome);

        let outcome = (|| -> Outcome {
            let (z, s3, w) = (o(g), o(g), o(g));
            let h = g.free_cell(&s2, &z, &s3, &w)?;
            let lhs = squd(&vcomp(&f, &h)?)?;
            let rhs = hcomp(
                &vcomp(&squd(&f)?, &squd(&h)?)?,
                &kit.h(Structural::Delta(x.clone(), z))?,
            )?;
            cells(&lhs, &rhs, mode)
        })();
        r.holds("squd-vertical", case, outcome);

        let outcome = (|| -> Outcome {
            let (t, t2, z) = (o(g), o(g), o(g));
            let k = g.free_cell(&t, &y, &t2, &z)?;
            let lhs = vcomp(
                &squd(&hcomp(&k, &f)?)?,
                &kit.v(Structural::Gamma(s2.clone(), t2.clone()))?,
            )?;
            let chained = hcomp(
                &hcomp(&squd(&k)?, &cross(&squd(&f)?, &f)?)?,
                &TwoCell::lift_h(&kit.copy_second(&x)?),
            )?;
            let rhs = vcomp(&kit.v(Structural::Gamma(s.clone(), t))?, &chained)?;
            cells(&lhs, &rhs, mode)
        })();
        r.holds("squd-chain", case, outcome);

        let outcome = (|| -> Outcome {
            let (t, z, t2, w) = (o(g), o(g), o(g), o(g));
            let k = g.free_cell(&t, &z, &t2, &w)?;
            let lhs = vcomp(
                &squd(&cross(&f, &k)?)?,
                &kit.v(Structural::Delta(s2.clone(), t2))?,
            )?;
            let rhs = hcomp(
                &vcomp(
                    &kit.v(Structural::Delta(s.clone(), t))?,
                    &cross(&squd(&f)?, &squd(&k)?)?,
                )?,
                &kit.h(Structural::Delta(x.clone(), z))?,
            )?;
            cells(&lhs, &rhs, mode)
        })();
        r.holds("squd-cross", case, outcome);

        let outcome = (|| -> Outcome {
            let dd = squd(&squd(&f)?)?;
            let lhs = hcomp(
                &vcomp(&kit.v(Structural::Zeta(s.clone()))?, &dd)?,
                &kit.h(Structural::Zeta(x.clone()))?,
            )?;
            let rhs = vcomp(&squd(&f)?, &kit.v(Structural::Zeta(s2.clone()))?)?;
            cells(&lhs, &rhs, mode)
        })();
        r.holds("squd-second-zero", case, outcome);

        let outcome = (|| -> Outcome {
            let dd = squd(&squd(&f)?)?;
            let lhs = hcomp(
                &vcomp(&kit.v(Structural::Delta(s.clone(), s.clone()))?, &dd)?,
                &kit.h(Structural::Delta(x.clone(), x.clone()))?,
            )?;
            let rhs = vcomp(&dd, &kit.v(Structural::Delta(s2.clone(), s2.clone()))?)?;
            cells(&lhs, &rhs, mode)
        })();
        r.holds("squd-symmetric", case, outcome);

        let outcome = (|| -> Outcome {
            // squD(f_0 ⨾ .. ⨾ f_n) = (squD f_0 ⨾ .. ⨾ squD f_n) ⋄ zip^h
            let n = 1 + case % 4;
            let mut tower = Vec::with_capacity(n);
            let mut state = o(g);
            for _ in 0..n {
                let next = o(g);
                let (x, y) = (o(g), o(g));
                tower.push(g.free_cell(&state, &x, &next, &y)?);
                state = next;
            }
            let doms: Vec<Obj> = tower.iter().map(|c| c.dom().clone()).collect();
            let lhs = squd(&vcomp_all(&tower)?)?;
            let derived: Vec<TwoCell> = tower.iter().map(squd).collect::<Result<_>>()?;
            let rhs = hcomp(&vcomp_all(&derived)?, &TwoCell::lift_h(&kit.zip(&doms)?))?;
            cells(&lhs, &rhs, mode)
        })();
        r.holds("squd-tower", case, outcome);
    }
    Ok(())
}
