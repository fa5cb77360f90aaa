//! 2-cells of the double category of states and values.
//!
//! A [`TwoCell`] with boundary `(S, X, S', Y)` is a base morphism
//! `S × X -> S' × Y`: it reads the previous state `S` and an input value `X`,
//! and produces the next state `S'` and an output value `Y`. Horizontal
//! composition chains values within one tick, vertical composition chains
//! states across ticks.
//!
//! Argument order follows the usual notation: [`hcomp`]`(g, f)` runs `f`
//! first, [`vcomp`]`(f, h)` runs `f` first.

use std::fmt;

use crate::base::{BaseMorphism, BaseTag, EqualityMode, Source, Structural};
use crate::error::{check_obj, Error, Result};
use crate::obj::Obj;

#[derive(Clone)]
pub struct TwoCell {
    prv: Obj,
    dom: Obj,
    nxt: Obj,
    cod: Obj,
    underlying: BaseMorphism,
}

impl fmt::Debug for TwoCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TwoCell[{} | {} -> {} | {}]({:?})",
            self.prv, self.dom, self.nxt, self.cod, self.underlying
        )
    }
}

impl TwoCell {
    pub fn new(
        prv: Obj,
        dom: Obj,
        nxt: Obj,
        cod: Obj,
        underlying: BaseMorphism,
    ) -> Result<TwoCell> {
        check_obj("2-cell source", &prv.times(&dom), underlying.dom())?;
        check_obj("2-cell target", &nxt.times(&cod), underlying.cod())?;
        Ok(TwoCell {
            prv,
            dom,
            nxt,
            cod,
            underlying,
        })
    }

    pub fn prv(&self) -> &Obj {
        &self.prv
    }

    pub fn dom(&self) -> &Obj {
        &self.dom
    }

    pub fn nxt(&self) -> &Obj {
        &self.nxt
    }

    pub fn cod(&self) -> &Obj {
        &self.cod
    }

    pub fn underlying(&self) -> &BaseMorphism {
        &self.underlying
    }

    pub fn tag(&self) -> BaseTag {
        self.underlying.tag()
    }

    /// `φ^h`: a stateless cell acting on values.
    pub fn lift_h(phi: &BaseMorphism) -> TwoCell {
        TwoCell {
            prv: Obj::unit(),
            dom: phi.dom().clone(),
            nxt: Obj::unit(),
            cod: phi.cod().clone(),
            underlying: phi.clone(),
        }
    }

    /// `φ^v`: a cell acting on states only.
    pub fn lift_v(phi: &BaseMorphism) -> TwoCell {
        TwoCell {
            prv: phi.dom().clone(),
            dom: Obj::unit(),
            nxt: phi.cod().clone(),
            cod: Obj::unit(),
            underlying: phi.clone(),
        }
    }

    pub fn structural_h(tag: BaseTag, kind: Structural) -> Result<TwoCell> {
        Ok(TwoCell::lift_h(&BaseMorphism::structural(tag, kind)?))
    }

    pub fn structural_v(tag: BaseTag, kind: Structural) -> Result<TwoCell> {
        Ok(TwoCell::lift_v(&BaseMorphism::structural(tag, kind)?))
    }

    pub fn id_h(tag: BaseTag, x: &Obj) -> Result<TwoCell> {
        TwoCell::structural_h(tag, Structural::Id(x.clone()))
    }

    pub fn id_v(tag: BaseTag, s: &Obj) -> Result<TwoCell> {
        TwoCell::structural_v(tag, Structural::Id(s.clone()))
    }

    /// Same boundary and equal underlying morphisms.
    pub fn equal(&self, other: &TwoCell, mode: EqualityMode) -> Result<bool> {
        Ok(self.same_boundary(other) && self.underlying.equal(&other.underlying, mode)?)
    }

    pub fn same_boundary(&self, other: &TwoCell) -> bool {
        self.prv == other.prv
            && self.dom == other.dom
            && self.nxt == other.nxt
            && self.cod == other.cod
    }

    pub fn hcomp(&self, f: &TwoCell) -> Result<TwoCell> {
        hcomp(self, f)
    }

    pub fn vcomp(&self, h: &TwoCell) -> Result<TwoCell> {
        vcomp(self, h)
    }

    pub fn cross(&self, k: &TwoCell) -> Result<TwoCell> {
        cross(self, k)
    }
}

fn check_tags(a: &TwoCell, b: &TwoCell) -> Result<BaseTag> {
    if a.tag() == b.tag() {
        Ok(a.tag())
    } else {
        Err(Error::BaseMismatch {
            left: a.tag(),
            right: b.tag(),
        })
    }
}

fn sym(tag: BaseTag, a: &Obj, b: &Obj) -> Result<BaseMorphism> {
    BaseMorphism::structural(tag, Structural::Symmetry(a.clone(), b.clone()))
}

/// `g ⋄ f`: `f` then `g` along the shared value boundary.
///
/// `U(g ⋄ f) = (S' × Ug) ∘ (σ × Y) ∘ (T × Uf) ∘ (σ_{S,T} × X)`, where the
/// middle symmetry moves `T` back past `S'`.
pub fn hcomp(g: &TwoCell, f: &TwoCell) -> Result<TwoCell> {
    let tag = check_tags(g, f)?;
    check_obj("horizontal composition", &f.cod, &g.dom)?;
    let (s, t, s2, x, y) = (&f.prv, &g.prv, &f.nxt, &f.dom, &f.cod);
    let u = sym(tag, s, t)?
        .right_whisker(x)?
        .then(&f.underlying.left_whisker(t)?)?
        .then(&sym(tag, t, s2)?.right_whisker(y)?)?
        .then(&g.underlying.left_whisker(s2)?)?;
    TwoCell::new(s.times(t), x.clone(), s2.times(&g.nxt), g.cod.clone(), u)
}

/// `f ⨾ h`: `f` then `h` along the shared state boundary.
///
/// `U(f ⨾ h) = (S'' × σ) ∘ (Uh × Y) ∘ (S' × σ) ∘ (Uf × V)`.
pub fn vcomp(f: &TwoCell, h: &TwoCell) -> Result<TwoCell> {
    let tag = check_tags(f, h)?;
    check_obj("vertical composition", &f.nxt, &h.prv)?;
    let (s2, s3, y, v, w) = (&f.nxt, &h.nxt, &f.cod, &h.dom, &h.cod);
    let u = f
        .underlying
        .right_whisker(v)?
        .then(&sym(tag, y, v)?.left_whisker(s2)?)?
        .then(&h.underlying.right_whisker(y)?)?
        .then(&sym(tag, w, y)?.left_whisker(s3)?)?;
    TwoCell::new(f.prv.clone(), f.dom.times(v), s3.clone(), y.times(w), u)
}

/// Moves the prefix `t` of the values into the previous state and the prefix
/// `t2` of the outputs into the next state, without touching the underlying
/// morphism.
pub fn value_to_state(f: &TwoCell, t: &Obj, t2: &Obj) -> Result<TwoCell> {
    let x = f.dom.strip_prefix(t).ok_or_else(|| Error::PrefixMismatch {
        prefix: t.clone(),
        whole: f.dom.clone(),
    })?;
    let y = f
        .cod
        .strip_prefix(t2)
        .ok_or_else(|| Error::PrefixMismatch {
            prefix: t2.clone(),
            whole: f.cod.clone(),
        })?;
    Ok(TwoCell {
        prv: f.prv.times(t),
        dom: x,
        nxt: f.nxt.times(t2),
        cod: y,
        underlying: f.underlying.clone(),
    })
}

/// `f ⊠ k`: `f` and `k` side by side, states and values kept apart.
///
/// Built as `(conv (T × Y)^h ⨾ k) ⋄ (f ⨾ conv (S' × Z)^h)`, where `conv`
/// turns the first factor into state.
pub fn cross(f: &TwoCell, k: &TwoCell) -> Result<TwoCell> {
    let tag = check_tags(f, k)?;
    let (t, y, s2, z) = (&k.prv, &f.cod, &f.nxt, &k.dom);
    let pass_t = value_to_state(&TwoCell::id_h(tag, &t.times(y))?, t, t)?;
    let pass_s2 = value_to_state(&TwoCell::id_h(tag, &s2.times(z))?, s2, s2)?;
    hcomp(&vcomp(&pass_t, k)?, &vcomp(f, &pass_s2)?)
}

/// The same cell as [`cross`], assembled directly as
/// `perm ∘ (Uf × Uk) ∘ perm`.
pub fn cross_by_wiring(f: &TwoCell, k: &TwoCell) -> Result<TwoCell> {
    let tag = check_tags(f, k)?;
    let (s, t, x, z) = (f.prv.len(), k.prv.len(), f.dom.len(), k.dom.len());
    // S T X Z -> S X T Z
    let dom = f.prv.times(&k.prv).times(&f.dom).times(&k.dom);
    let inner: Vec<Source> = (0..s)
        .chain(s + t..s + t + x)
        .chain(s..s + t)
        .chain(s + t + x..s + t + x + z)
        .map(Source::Slot)
        .collect();
    let inner_cod = f.prv.times(&f.dom).times(&k.prv).times(&k.dom);
    let pre = BaseMorphism::wiring(tag, &dom, &inner_cod, &inner)?;
    // S' Y T' W -> S' T' Y W
    let (s2, y, t2, w) = (f.nxt.len(), f.cod.len(), k.nxt.len(), k.cod.len());
    let mid = f.nxt.times(&f.cod).times(&k.nxt).times(&k.cod);
    let outer: Vec<Source> = (0..s2)
        .chain(s2 + y..s2 + y + t2)
        .chain(s2..s2 + y)
        .chain(s2 + y + t2..s2 + y + t2 + w)
        .map(Source::Slot)
        .collect();
    let out_cod = f.nxt.times(&k.nxt).times(&f.cod).times(&k.cod);
    let post = BaseMorphism::wiring(tag, &mid, &out_cod, &outer)?;
    let u = pre
        .then(&f.underlying.product(&k.underlying)?)?
        .then(&post)?;
    TwoCell::new(
        f.prv.times(&k.prv),
        f.dom.times(&k.dom),
        f.nxt.times(&k.nxt),
        f.cod.times(&k.cod),
        u,
    )
}

/// `(s, s', x, x') ↦ (s, x, s', x')`, the interleaving that feeds a pair of
/// state copies and a pair of value copies into a derivative.
fn interleave(tag: BaseTag, s: &Obj, x: &Obj) -> Result<BaseMorphism> {
    let (a, b) = (s.len(), x.len());
    let sources: Vec<Source> = (0..a)
        .chain(2 * a..2 * a + b)
        .chain(a..2 * a)
        .chain(2 * a + b..2 * a + 2 * b)
        .map(Source::Slot)
        .collect();
    let dom = s.power(2).times(&x.power(2));
    let cod = s.times(x).power(2);
    BaseMorphism::wiring(tag, &dom, &cod, &sources)
}

/// The derivative of one tick, without the state copy: boundary
/// `(S × S, X × X, S', Y)`, tangents first in each pair.
pub fn squd0(f: &TwoCell) -> Result<TwoCell> {
    let tag = f.tag();
    let d = f.underlying.diff()?;
    let u = d.after(&interleave(tag, &f.prv, &f.dom)?)?;
    TwoCell::new(
        f.prv.power(2),
        f.dom.power(2),
        f.nxt.clone(),
        f.cod.clone(),
        u,
    )
}

/// The derivative of one tick: boundary `(S × S, X × X, S' × S', Y)`.
///
/// `((S × Δ_S)^v ⨾ (squd0 f ⊠ (!_Y^h ⋄ f))) ⋄ (X × Δ_X)^h`: the second
/// state copy is advanced by `f` itself, the first carries the tangent.
pub fn squd(f: &TwoCell) -> Result<TwoCell> {
    let tag = f.tag();
    let (s, x, y) = (&f.prv, &f.dom, &f.cod);
    let copy_state = TwoCell::lift_v(
        &BaseMorphism::structural(tag, Structural::Diagonal(s.clone()))?.left_whisker(s)?,
    );
    let copy_value = TwoCell::lift_h(
        &BaseMorphism::structural(tag, Structural::Diagonal(x.clone()))?.left_whisker(x)?,
    );
    let plain = hcomp(&TwoCell::lift_h(&BaseMorphism::terminal(tag, y)?), f)?;
    hcomp(
        &vcomp(&copy_state, &cross(&squd0(f)?, &plain)?)?,
        &copy_value,
    )
}

/// `i ⨾ s_0 ⨾ ... ⨾ s_n` as a single cell, for towers of cells.
pub fn vcomp_all(cells: &[TwoCell]) -> Result<TwoCell> {
    let (first, rest) = cells
        .split_first()
        .ok_or_else(|| Error::Invalid("empty vertical composite".into()))?;
    rest.iter().try_fold(first.clone(), |acc, c| vcomp(&acc, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{Poly, PolyMap};
    use crate::obj::Point;

    fn poly(dom: usize, comps: &[&str]) -> BaseMorphism {
        BaseMorphism::Poly(
            PolyMap::new(
                Obj::real(dom),
                comps.iter().map(|s| Poly::parse(s, dom).unwrap()).collect(),
            )
            .unwrap(),
        )
    }

    fn cell(s: usize, x: usize, s2: usize, y: usize, comps: &[&str]) -> TwoCell {
        TwoCell::new(
            Obj::real(s),
            Obj::real(x),
            Obj::real(s2),
            Obj::real(y),
            poly(s + x, comps),
        )
        .unwrap()
    }

    const EXACT: EqualityMode = EqualityMode::Exact;

    #[test]
    fn horizontal_composition_hand_trace() {
        // f: (s, x) ↦ (s + x, x); g: (t, y) ↦ (t, y²)
        let f = cell(1, 1, 1, 1, &["x0 + x1", "x1"]);
        let g = cell(1, 1, 1, 1, &["x0", "x1^2"]);
        let gf = hcomp(&g, &f).unwrap();
        assert_eq!(
            gf.underlying().eval(&Point::rat([1, 2, 3])).unwrap(),
            Point::rat([4, 2, 9])
        );
    }

    #[test]
    fn vertical_composition_hand_trace() {
        // f: (s, x) ↦ (s·x, s); h: (s', v) ↦ (s' + v, s'·v)
        let f = cell(1, 1, 1, 1, &["x0*x1", "x0"]);
        let h = cell(1, 1, 1, 1, &["x0 + x1", "x0*x1"]);
        let fh = vcomp(&f, &h).unwrap();
        assert_eq!(
            fh.underlying().eval(&Point::rat([2, 3, 4])).unwrap(),
            Point::rat([10, 2, 24])
        );
    }

    #[test]
    fn stateless_lifts_compose_like_morphisms() {
        let phi = poly(1, &["x0 + 1"]);
        let psi = poly(1, &["x0^2"]);
        let lhs = hcomp(&TwoCell::lift_h(&psi), &TwoCell::lift_h(&phi)).unwrap();
        let rhs = TwoCell::lift_h(&psi.after(&phi).unwrap());
        assert!(lhs.equal(&rhs, EXACT).unwrap());
    }

    #[test]
    fn identities_are_units() {
        let f = cell(1, 2, 2, 1, &["x0*x1", "x2 - x0", "x1*x2 + 1"]);
        let idh = TwoCell::id_h(BaseTag::Poly, &Obj::real(2)).unwrap();
        let idv = TwoCell::id_v(BaseTag::Poly, &Obj::real(2)).unwrap();
        assert!(
            hcomp(&TwoCell::id_h(BaseTag::Poly, &Obj::real(1)).unwrap(), &f)
                .unwrap()
                .equal(&f, EXACT)
                .unwrap()
        );
        assert!(hcomp(&f, &idh).unwrap().equal(&f, EXACT).unwrap());
        assert!(vcomp(&f, &idv).unwrap().equal(&f, EXACT).unwrap());
        assert!(
            vcomp(&TwoCell::id_v(BaseTag::Poly, &Obj::real(1)).unwrap(), &f)
                .unwrap()
                .equal(&f, EXACT)
                .unwrap()
        );
    }

    #[test]
    fn cross_agrees_with_direct_wiring() {
        let f = cell(1, 1, 2, 1, &["x0*x1", "x0 + x1", "x1^2"]);
        let k = cell(2, 1, 1, 2, &["x0 + x2", "x1*x2", "x0 - x1"]);
        let a = cross(&f, &k).unwrap();
        let b = cross_by_wiring(&f, &k).unwrap();
        assert!(a.equal(&b, EXACT).unwrap());
        // stateless case: f ⊠ k is the lift of the product
        let phi = poly(1, &["x0^3"]);
        let psi = poly(2, &["x0*x1"]);
        let c = cross(&TwoCell::lift_h(&phi), &TwoCell::lift_h(&psi)).unwrap();
        assert!(c
            .equal(&TwoCell::lift_h(&phi.product(&psi).unwrap()), EXACT)
            .unwrap());
    }

    #[test]
    fn value_to_state_checks_prefixes() {
        let f = cell(0, 2, 0, 1, &["x0 + x1"]);
        let g = value_to_state(&f, &Obj::real(1), &Obj::unit()).unwrap();
        assert_eq!(
            (g.prv().len(), g.dom().len(), g.nxt().len(), g.cod().len()),
            (1, 1, 0, 1)
        );
        assert!(matches!(
            value_to_state(&f, &Obj::real(3), &Obj::unit()),
            Err(Error::PrefixMismatch { .. })
        ));
    }

    #[test]
    fn squd_of_stateless_cube() {
        let f = TwoCell::lift_h(&poly(1, &["x0^3"]));
        let d = squd(&f).unwrap();
        // U(squD f)(Δ, x) = 3x²Δ at (1, 2)
        assert_eq!(
            d.underlying().eval(&Point::rat([1, 2])).unwrap(),
            Point::rat([12])
        );
        assert!(d
            .equal(&TwoCell::lift_h(&f.underlying().diff().unwrap()), EXACT)
            .unwrap());
    }

    #[test]
    fn squd_of_vertical_lift() {
        let phi = poly(2, &["x0*x1", "x1^2 - x0"]);
        let lhs = squd(&TwoCell::lift_v(&phi)).unwrap();
        let x = Obj::real(2);
        let rhs = phi
            .diff()
            .unwrap()
            .product(&phi)
            .unwrap()
            .after(
                &BaseMorphism::structural(BaseTag::Poly, Structural::Diagonal(x.clone()))
                    .unwrap()
                    .left_whisker(&x)
                    .unwrap(),
            )
            .unwrap();
        assert!(lhs.equal(&TwoCell::lift_v(&rhs), EXACT).unwrap());
    }
}
