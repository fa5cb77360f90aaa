//! Base Cartesian (differential) categories.
//!
//! Three interchangeable instances share one morphism type:
//!
//! * [`BaseTag::Poly`]: polynomial maps with exact rational coefficients;
//!   composition is substitution, `diff` is formal differentiation and
//!   equality is decided on normal forms.
//! * [`BaseTag::Smooth`]: smooth maps on `f64` vectors built from a small set
//!   of primitives, each with a hand-written differential.
//! * [`BaseTag::Fin`]: functions between finite sets, stored as lookup tables.
//!   There is no differential.
//!
//! The derivative of `f: X -> Y` has domain `X × X` and is read tangent
//! first: `Df(Δ, x) = Jf|_x · Δ`.

mod fin;
mod poly;
mod smooth;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use fin::FinMap;
pub use poly::{Monomial, Poly, PolyMap};
pub use smooth::{Activation, SmoothMap, SmoothView};

use crate::error::{check_obj, Error, Result};
use crate::obj::{Obj, Point};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseTag {
    Poly,
    Smooth,
    Fin,
}

impl BaseTag {
    pub fn has_differential(self) -> bool {
        !matches!(self, BaseTag::Fin)
    }

    /// The point of the unit object in this base's coordinate kind.
    pub fn empty_point(self) -> Point {
        match self {
            BaseTag::Poly => Point::Rat(Vec::new()),
            BaseTag::Smooth => Point::Real(Vec::new()),
            BaseTag::Fin => Point::Fin(Vec::new()),
        }
    }

    /// Whether `obj` is made of slots this base can carry.
    pub fn admits(self, obj: &Obj) -> bool {
        match self {
            BaseTag::Poly | BaseTag::Smooth => obj.is_real(),
            BaseTag::Fin => obj.is_finite(),
        }
    }
}

impl fmt::Display for BaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseTag::Poly => "poly",
            BaseTag::Smooth => "smooth",
            BaseTag::Fin => "fin",
        })
    }
}

impl std::str::FromStr for BaseTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<BaseTag> {
        match s {
            "poly" => Ok(BaseTag::Poly),
            "smooth" => Ok(BaseTag::Smooth),
            "fin" => Ok(BaseTag::Fin),
            other => Err(Error::Invalid(format!("unknown base `{}`", other))),
        }
    }
}

/// Where one output slot of a wiring morphism comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    Slot(usize),
    Zero,
}

/// The canonical morphisms available in every Cartesian left-additive base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structural {
    Id(Obj),
    /// `X × Y -> X`
    Proj0(Obj, Obj),
    /// `X × Y -> Y`
    Proj1(Obj, Obj),
    /// `X -> 1`
    Terminal(Obj),
    /// `X -> X × X`
    Diagonal(Obj),
    /// `X × Y -> Y × X`
    Symmetry(Obj, Obj),
    /// `X × X -> X`
    Plus(Obj),
    /// `1 -> X`
    Zero(Obj),
    /// `X × Y × X × Y -> X × X × Y × Y`, `(x, y, x', y') ↦ (x, x', y, y')`.
    Delta(Obj, Obj),
    /// `X³ -> X⁴`, `(a, b, c) ↦ (a, c, b, c)`.
    Alpha(Obj),
    /// `X⁴ -> X³`, `(a, b, c, d) ↦ (a, c, d)`.
    Beta(Obj),
    /// `X × Y × X × Y -> X × X × X × Y × Y`, `(a, b, c, d) ↦ (a, c, c, b, d)`.
    Gamma(Obj, Obj),
    /// `X × X -> X⁴`, `(a, b) ↦ (a, 0, 0, b)`.
    Zeta(Obj),
    /// `∏(X_k × X_k) -> (∏ X_k) × (∏ X_k)`.
    Unzip(Vec<Obj>),
}

impl Structural {
    pub fn dom(&self) -> Obj {
        use Structural::*;
        match self {
            Id(x) | Terminal(x) | Diagonal(x) => x.clone(),
            Proj0(x, y) | Proj1(x, y) | Symmetry(x, y) => x.times(y),
            Plus(x) | Zeta(x) => x.power(2),
            Zero(_) => Obj::unit(),
            Delta(x, y) | Gamma(x, y) => x.times(y).power(2),
            Alpha(x) => x.power(3),
            Beta(x) => x.power(4),
            Unzip(xs) => Obj::product(xs.iter().map(|x| x.power(2)).collect::<Vec<_>>().iter()),
        }
    }

    pub fn cod(&self) -> Obj {
        use Structural::*;
        match self {
            Id(x) | Plus(x) | Zero(x) => x.clone(),
            Proj0(x, _) => x.clone(),
            Proj1(_, y) => y.clone(),
            Terminal(_) => Obj::unit(),
            Diagonal(x) => x.power(2),
            Symmetry(x, y) => y.times(x),
            Delta(x, y) => x.power(2).times(&y.power(2)),
            Alpha(x) | Zeta(x) => x.power(4),
            Beta(x) => x.power(3),
            Gamma(x, y) => x.power(3).times(&y.power(2)),
            Unzip(xs) => Obj::product(xs).power(2),
        }
    }

    /// The slot wiring, for every kind except `Plus`.
    pub fn sources(&self) -> Option<Vec<Source>> {
        use Structural::*;
        let range = |start: usize, len: usize| (start..start + len).map(Source::Slot);
        let mut out = Vec::new();
        match self {
            Id(x) => out.extend(range(0, x.len())),
            Proj0(x, _) => out.extend(range(0, x.len())),
            Proj1(x, y) => out.extend(range(x.len(), y.len())),
            Terminal(_) => {}
            Diagonal(x) => {
                out.extend(range(0, x.len()));
                out.extend(range(0, x.len()));
            }
            Symmetry(x, y) => {
                out.extend(range(x.len(), y.len()));
                out.extend(range(0, x.len()));
            }
            Plus(_) => return None,
            Zero(x) => out.extend(std::iter::repeat_n(Source::Zero, x.len())),
            Delta(x, y) => {
                let (a, b) = (x.len(), y.len());
                out.extend(range(0, a));
                out.extend(range(a + b, a));
                out.extend(range(a, b));
                out.extend(range(2 * a + b, b));
            }
            Alpha(x) => {
                let n = x.len();
                for block in [0, 2, 1, 2] {
                    out.extend(range(block * n, n));
                }
            }
            Beta(x) => {
                let n = x.len();
                for block in [0, 2, 3] {
                    out.extend(range(block * n, n));
                }
            }
            Gamma(x, y) => {
                let (a, b) = (x.len(), y.len());
                out.extend(range(0, a));
                out.extend(range(a + b, a));
                out.extend(range(a + b, a));
                out.extend(range(a, b));
                out.extend(range(2 * a + b, b));
            }
            Zeta(x) => {
                let n = x.len();
                out.extend(range(0, n));
                out.extend(std::iter::repeat_n(Source::Zero, 2 * n));
                out.extend(range(n, n));
            }
            Unzip(xs) => {
                let mut starts = Vec::with_capacity(xs.len());
                let mut at = 0;
                for x in xs {
                    starts.push(at);
                    at += 2 * x.len();
                }
                for (x, &s) in xs.iter().zip(&starts) {
                    out.extend(range(s, x.len()));
                }
                for (x, &s) in xs.iter().zip(&starts) {
                    out.extend(range(s + x.len(), x.len()));
                }
            }
        }
        Some(out)
    }
}

/// How [`BaseMorphism::equal`] decides equality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EqualityMode {
    /// Normal forms for polynomials and tables. Smooth maps fall back to
    /// [`EqualityMode::default_sampled`].
    Exact,
    /// Compare at `samples` pseudo-random points drawn uniformly from
    /// `[-2, 2]` per coordinate; `|a - b| <= tol * max(1, |a|, |b|)`.
    Sampled { samples: usize, tol: f64, seed: u64 },
}

impl EqualityMode {
    pub fn default_sampled() -> EqualityMode {
        EqualityMode::Sampled {
            samples: 64,
            tol: 1e-9,
            seed: 0x5eed,
        }
    }
}

/// A morphism of one of the base categories. Cloning is cheap.
#[derive(Clone)]
pub enum BaseMorphism {
    Poly(PolyMap),
    Smooth(SmoothMap),
    Fin(FinMap),
}

impl fmt::Debug for BaseMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseMorphism::Poly(p) => write!(f, "{:?}", p),
            BaseMorphism::Smooth(s) => write!(f, "{:?}", s),
            BaseMorphism::Fin(t) => write!(f, "{:?}", t),
        }
    }
}

fn check_admits(tag: BaseTag, obj: &Obj) -> Result<()> {
    if tag.admits(obj) {
        Ok(())
    } else {
        Err(Error::ShapeMismatch(format!(
            "object {} does not live in the {} base",
            obj, tag
        )))
    }
}

impl BaseMorphism {
    pub fn tag(&self) -> BaseTag {
        match self {
            BaseMorphism::Poly(_) => BaseTag::Poly,
            BaseMorphism::Smooth(_) => BaseTag::Smooth,
            BaseMorphism::Fin(_) => BaseTag::Fin,
        }
    }

    pub fn dom(&self) -> &Obj {
        match self {
            BaseMorphism::Poly(p) => p.dom(),
            BaseMorphism::Smooth(s) => s.dom(),
            BaseMorphism::Fin(t) => t.dom(),
        }
    }

    pub fn cod(&self) -> &Obj {
        match self {
            BaseMorphism::Poly(p) => p.cod(),
            BaseMorphism::Smooth(s) => s.cod(),
            BaseMorphism::Fin(t) => t.cod(),
        }
    }

    /// A morphism that only copies, drops, permutes or zeroes slots.
    pub fn wiring(tag: BaseTag, dom: &Obj, cod: &Obj, sources: &[Source]) -> Result<BaseMorphism> {
        check_admits(tag, dom)?;
        check_admits(tag, cod)?;
        if sources.len() != cod.len() {
            return Err(Error::ShapeMismatch(format!(
                "wiring into {} needs {} sources, got {}",
                cod,
                cod.len(),
                sources.len()
            )));
        }
        for (k, s) in sources.iter().enumerate() {
            match s {
                Source::Slot(i) => {
                    if *i >= dom.len() || dom.slots()[*i] != cod.slots()[k] {
                        return Err(Error::ShapeMismatch(format!(
                            "wiring slot {} of {} cannot feed slot {} of {}",
                            i, dom, k, cod
                        )));
                    }
                }
                Source::Zero => {
                    if !cod.slots()[k].is_additive() {
                        return Err(Error::UnsupportedStructure(format!(
                            "zero into slot {} of {}, which has no monoid",
                            k, cod
                        )));
                    }
                }
            }
        }
        Ok(match tag {
            BaseTag::Poly => BaseMorphism::Poly(PolyMap::wiring(dom, sources)),
            BaseTag::Smooth => BaseMorphism::Smooth(SmoothMap::wiring(dom, sources)),
            BaseTag::Fin => BaseMorphism::Fin(FinMap::wiring(dom, cod, sources)),
        })
    }

    pub fn structural(tag: BaseTag, kind: Structural) -> Result<BaseMorphism> {
        let dom = kind.dom();
        let cod = kind.cod();
        match kind.sources() {
            Some(sources) => BaseMorphism::wiring(tag, &dom, &cod, &sources),
            None => {
                check_admits(tag, &cod)?;
                if !cod.is_additive() {
                    return Err(Error::UnsupportedStructure(format!(
                        "{} carries no addition",
                        cod
                    )));
                }
                Ok(match tag {
                    BaseTag::Poly => BaseMorphism::Poly(PolyMap::plus(cod.len())),
                    BaseTag::Smooth => BaseMorphism::Smooth(SmoothMap::plus(cod.len())),
                    BaseTag::Fin => BaseMorphism::Fin(FinMap::plus(&cod)),
                })
            }
        }
    }

    pub fn id(tag: BaseTag, x: &Obj) -> Result<BaseMorphism> {
        BaseMorphism::structural(tag, Structural::Id(x.clone()))
    }

    pub fn terminal(tag: BaseTag, x: &Obj) -> Result<BaseMorphism> {
        BaseMorphism::structural(tag, Structural::Terminal(x.clone()))
    }

    pub fn zero(tag: BaseTag, x: &Obj) -> Result<BaseMorphism> {
        BaseMorphism::structural(tag, Structural::Zero(x.clone()))
    }

    /// The global element `1 -> X` picking out `point`.
    pub fn constant(tag: BaseTag, cod: &Obj, point: &Point) -> Result<BaseMorphism> {
        check_admits(tag, cod)?;
        point.check_against(cod)?;
        Ok(match (tag, point) {
            (BaseTag::Poly, Point::Rat(v)) => BaseMorphism::Poly(PolyMap::constant(v)),
            (BaseTag::Poly, Point::Fin(v)) if v.is_empty() => {
                BaseMorphism::Poly(PolyMap::constant(&[]))
            }
            (BaseTag::Poly, Point::Real(v)) => BaseMorphism::Poly(PolyMap::constant(
                &v.iter()
                    .map(|x| {
                        Rational::from_f64(*x)
                            .ok_or_else(|| Error::Invalid(format!("non-finite constant {}", x)))
                    })
                    .collect::<Result<Vec<_>>>()?,
            )),
            (BaseTag::Smooth, Point::Real(v)) => {
                BaseMorphism::Smooth(SmoothMap::constant(v.clone()))
            }
            (BaseTag::Smooth, Point::Rat(v)) => BaseMorphism::Smooth(SmoothMap::constant(
                v.iter().map(Rational::to_f64).collect(),
            )),
            (BaseTag::Smooth, Point::Fin(v)) if v.is_empty() => {
                BaseMorphism::Smooth(SmoothMap::constant(vec![]))
            }
            (BaseTag::Fin, Point::Fin(v)) => {
                BaseMorphism::Fin(FinMap::table(Obj::unit(), cod.clone(), v.clone())?)
            }
            (BaseTag::Fin, p) if p.is_empty() => {
                BaseMorphism::Fin(FinMap::table(Obj::unit(), cod.clone(), vec![])?)
            }
            (tag, p) => {
                return Err(Error::ShapeMismatch(format!(
                    "point {} is not a point of the {} base",
                    p, tag
                )));
            }
        })
    }

    /// A polynomial map `R^dom -> R^comps.len()` from textual components in
    /// the variables `x0, x1, ..`.
    pub fn parse_poly(dom: usize, comps: &[&str]) -> Result<BaseMorphism> {
        let polys = comps
            .iter()
            .map(|s| Poly::parse(s, dom).map_err(Error::Invalid))
            .collect::<Result<Vec<_>>>()?;
        Ok(BaseMorphism::Poly(PolyMap::new(Obj::real(dom), polys)?))
    }

    fn mismatch(&self, other: &BaseMorphism) -> Error {
        Error::BaseMismatch {
            left: self.tag(),
            right: other.tag(),
        }
    }

    /// `self ∘ f`: first `f`, then `self`.
    pub fn after(&self, f: &BaseMorphism) -> Result<BaseMorphism> {
        check_obj("compose", self.dom(), f.cod())?;
        Ok(match (self, f) {
            (BaseMorphism::Poly(g), BaseMorphism::Poly(f)) => BaseMorphism::Poly(g.after(f)?),
            (BaseMorphism::Smooth(g), BaseMorphism::Smooth(f)) => BaseMorphism::Smooth(g.after(f)),
            (BaseMorphism::Fin(g), BaseMorphism::Fin(f)) => BaseMorphism::Fin(g.after(f)),
            _ => return Err(self.mismatch(f)),
        })
    }

    /// `g ∘ self`: first `self`, then `g`.
    pub fn then(&self, g: &BaseMorphism) -> Result<BaseMorphism> {
        g.after(self)
    }

    pub fn product(&self, h: &BaseMorphism) -> Result<BaseMorphism> {
        Ok(match (self, h) {
            (BaseMorphism::Poly(f), BaseMorphism::Poly(h)) => BaseMorphism::Poly(f.product(h)),
            (BaseMorphism::Smooth(f), BaseMorphism::Smooth(h)) => {
                BaseMorphism::Smooth(f.product(h))
            }
            (BaseMorphism::Fin(f), BaseMorphism::Fin(h)) => BaseMorphism::Fin(f.product(h)),
            _ => return Err(self.mismatch(h)),
        })
    }

    /// Product of a list; the empty product is `id_1`.
    pub fn product_all(tag: BaseTag, fs: &[BaseMorphism]) -> Result<BaseMorphism> {
        let mut acc = BaseMorphism::id(tag, &Obj::unit())?;
        for f in fs {
            acc = acc.product(f)?;
        }
        Ok(acc)
    }

    /// `⟨self, g⟩ = (self × g) ∘ Δ`.
    pub fn pair(&self, g: &BaseMorphism) -> Result<BaseMorphism> {
        check_obj("pairing", self.dom(), g.dom())?;
        let diag = BaseMorphism::structural(self.tag(), Structural::Diagonal(self.dom().clone()))?;
        self.product(g)?.after(&diag)
    }

    /// `X × self`, the identity on a left factor.
    pub fn left_whisker(&self, x: &Obj) -> Result<BaseMorphism> {
        BaseMorphism::id(self.tag(), x)?.product(self)
    }

    /// `self × X`.
    pub fn right_whisker(&self, x: &Obj) -> Result<BaseMorphism> {
        self.product(&BaseMorphism::id(self.tag(), x)?)
    }

    /// `self + g`, pointwise through the codomain monoid.
    pub fn add(&self, g: &BaseMorphism) -> Result<BaseMorphism> {
        let plus = BaseMorphism::structural(self.tag(), Structural::Plus(self.cod().clone()))?;
        plus.after(&self.pair(g)?)
    }

    pub fn diff(&self) -> Result<BaseMorphism> {
        match self {
            BaseMorphism::Poly(p) => Ok(BaseMorphism::Poly(p.diff())),
            BaseMorphism::Smooth(s) => Ok(BaseMorphism::Smooth(s.diff())),
            BaseMorphism::Fin(_) => Err(Error::NoDifferential(BaseTag::Fin)),
        }
    }

    pub fn eval(&self, x: &Point) -> Result<Point> {
        x.check_against(self.dom())?;
        match (self, x) {
            (BaseMorphism::Poly(p), Point::Rat(v)) => Ok(Point::Rat(p.eval(v))),
            (BaseMorphism::Poly(p), _) if x.is_empty() => Ok(Point::Rat(p.eval(&[]))),
            (BaseMorphism::Poly(p), Point::Real(v)) => Ok(Point::Real(p.eval_f64(v))),
            (BaseMorphism::Smooth(s), Point::Real(v)) => Ok(Point::Real(s.eval(v))),
            (BaseMorphism::Smooth(s), _) if x.is_empty() => Ok(Point::Real(s.eval(&[]))),
            (BaseMorphism::Smooth(s), Point::Rat(v)) => Ok(Point::Real(
                s.eval(&v.iter().map(Rational::to_f64).collect::<Vec<_>>()),
            )),
            (BaseMorphism::Fin(t), Point::Fin(v)) => Ok(Point::Fin(t.eval(v))),
            (BaseMorphism::Fin(t), _) if x.is_empty() => Ok(Point::Fin(t.eval(&[]))),
            _ => Err(Error::ShapeMismatch(format!(
                "cannot evaluate a {} morphism at {}",
                self.tag(),
                x
            ))),
        }
    }

    pub fn equal(&self, other: &BaseMorphism, mode: EqualityMode) -> Result<bool> {
        Ok(self.find_difference(other, mode)?.is_none())
    }

    /// `None` when the morphisms are equal under `mode`, otherwise a point
    /// where they differ.
    pub fn find_difference(
        &self,
        other: &BaseMorphism,
        mode: EqualityMode,
    ) -> Result<Option<Point>> {
        check_obj("equality (domain)", self.dom(), other.dom())?;
        check_obj("equality (codomain)", self.cod(), other.cod())?;
        match (self, other, mode) {
            (BaseMorphism::Poly(a), BaseMorphism::Poly(b), EqualityMode::Exact) => {
                Ok(poly_difference(a, b))
            }
            (BaseMorphism::Fin(a), BaseMorphism::Fin(b), _) => {
                Ok(a.find_difference(b)?.map(Point::Fin))
            }
            (BaseMorphism::Smooth(_), BaseMorphism::Smooth(_), EqualityMode::Exact) => {
                self.find_difference(other, EqualityMode::default_sampled())
            }
            (a, b, EqualityMode::Sampled { samples, tol, seed }) if a.tag() == b.tag() => {
                Ok(sampled_difference(a, b, samples, tol, seed))
            }
            _ => Err(self.mismatch(other)),
        }
    }
}

fn poly_difference(a: &PolyMap, b: &PolyMap) -> Option<Point> {
    let diffs: Vec<Poly> = a
        .comps()
        .iter()
        .zip(b.comps())
        .filter(|(p, q)| p != q)
        .map(|(p, q)| p.sub(q))
        .collect();
    if diffs.is_empty() {
        return None;
    }
    let n = a.dom().len();
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1ff);
    // A nonzero polynomial of degree d vanishes on at most a d/|S| fraction of
    // S^n, so widening the range quickly finds a witness.
    for round in 0..64 {
        let radius = 3 + 4 * round as i64;
        let x: Vec<Rational> = (0..n)
            .map(|_| Rational::from_int(rng.gen_range(-radius..=radius)))
            .collect();
        if diffs.iter().any(|d| !d.eval(&x).is_zero()) {
            return Some(Point::Rat(x));
        }
    }
    // Unreachable in practice; still report a difference rather than equality.
    Some(Point::Rat(vec![Rational::zero(); n]))
}

fn sampled_difference(
    a: &BaseMorphism,
    b: &BaseMorphism,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Option<Point> {
    let n = a.dom().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples.max(1) {
        let x = Point::Real((0..n).map(|_| rng.gen_range(-2.0..=2.0)).collect());
        let (ya, yb) = match (a.eval(&x), b.eval(&x)) {
            (Ok(Point::Real(ya)), Ok(Point::Real(yb))) => (ya, yb),
            _ => return Some(x),
        };
        let close = ya.iter().zip(&yb).all(|(p, q)| {
            let scale = 1f64.max(p.abs()).max(q.abs());
            (p - q).abs() <= tol * scale
        });
        if !close {
            return Some(x);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(dom: usize, comps: &[&str]) -> BaseMorphism {
        BaseMorphism::Poly(
            PolyMap::new(
                Obj::real(dom),
                comps.iter().map(|s| Poly::parse(s, dom).unwrap()).collect(),
            )
            .unwrap(),
        )
    }

    fn r1() -> Obj {
        Obj::real(1)
    }

    #[test]
    fn helper_morphisms_route_slots() {
        let delta = BaseMorphism::structural(BaseTag::Poly, Structural::Delta(r1(), r1())).unwrap();
        assert_eq!(
            delta.eval(&Point::rat([1, 2, 3, 4])).unwrap(),
            Point::rat([1, 3, 2, 4])
        );
        let alpha = BaseMorphism::structural(BaseTag::Poly, Structural::Alpha(r1())).unwrap();
        assert_eq!(
            alpha.eval(&Point::rat([1, 2, 3])).unwrap(),
            Point::rat([1, 3, 2, 3])
        );
        let beta = BaseMorphism::structural(BaseTag::Poly, Structural::Beta(r1())).unwrap();
        assert_eq!(
            beta.eval(&Point::rat([1, 2, 3, 4])).unwrap(),
            Point::rat([1, 3, 4])
        );
        let gamma = BaseMorphism::structural(BaseTag::Poly, Structural::Gamma(r1(), r1())).unwrap();
        assert_eq!(
            gamma.eval(&Point::rat([1, 2, 3, 4])).unwrap(),
            Point::rat([1, 3, 3, 2, 4])
        );
        let zeta = BaseMorphism::structural(BaseTag::Poly, Structural::Zeta(r1())).unwrap();
        assert_eq!(
            zeta.eval(&Point::rat([5, 6])).unwrap(),
            Point::rat([5, 0, 0, 6])
        );
        let unzip =
            BaseMorphism::structural(BaseTag::Poly, Structural::Unzip(vec![r1(), r1()])).unwrap();
        assert_eq!(
            unzip.eval(&Point::rat([1, 2, 3, 4])).unwrap(),
            Point::rat([1, 3, 2, 4])
        );
    }

    #[test]
    fn alpha_matches_its_defining_composite() {
        // α_X = δ_{X,X} ∘ (X × X × Δ_X)
        let x = Obj::real(2);
        let alpha = BaseMorphism::structural(BaseTag::Poly, Structural::Alpha(x.clone())).unwrap();
        let delta =
            BaseMorphism::structural(BaseTag::Poly, Structural::Delta(x.clone(), x.clone()))
                .unwrap();
        let diag =
            BaseMorphism::structural(BaseTag::Poly, Structural::Diagonal(x.clone())).unwrap();
        let rhs = delta
            .after(&diag.left_whisker(&x.power(2)).unwrap())
            .unwrap();
        assert!(alpha.equal(&rhs, EqualityMode::Exact).unwrap());
    }

    #[test]
    fn product_evaluates_componentwise() {
        let f = poly(1, &["2*x0"]);
        let h = poly(1, &["x0^3"]);
        assert_eq!(
            f.product(&h).unwrap().eval(&Point::rat([3, 2])).unwrap(),
            Point::rat([6, 8])
        );
    }

    #[test]
    fn symmetry_derivative_discards_base_point() {
        let s = BaseMorphism::structural(BaseTag::Poly, Structural::Symmetry(r1(), Obj::real(2)))
            .unwrap();
        let ds = s.diff().unwrap();
        let expected = s
            .product(&BaseMorphism::terminal(BaseTag::Poly, &Obj::real(3)).unwrap())
            .unwrap();
        assert!(ds.equal(&expected, EqualityMode::Exact).unwrap());
    }

    #[test]
    fn mixing_bases_is_an_error() {
        let p = BaseMorphism::id(BaseTag::Poly, &r1()).unwrap();
        let s = BaseMorphism::id(BaseTag::Smooth, &r1()).unwrap();
        assert!(matches!(p.after(&s), Err(Error::BaseMismatch { .. })));
        assert!(matches!(
            p.after(&BaseMorphism::id(BaseTag::Poly, &Obj::real(2)).unwrap()),
            Err(Error::BoundaryMismatch { .. })
        ));
    }

    #[test]
    fn sampled_equality_detects_small_perturbations() {
        let a = poly(1, &["x0"]);
        let b = poly(1, &["x0 + 1/1000*x0^2"]);
        let mode = EqualityMode::Sampled {
            samples: 32,
            tol: 1e-9,
            seed: 1,
        };
        assert!(!a.equal(&b, mode).unwrap());
        assert!(!a.equal(&b, EqualityMode::Exact).unwrap());
        assert!(poly(1, &["(x0+1)^2"])
            .equal(&poly(1, &["x0^2 + 2*x0 + 1"]), EqualityMode::Exact)
            .unwrap());
    }

    #[test]
    fn plus_needs_a_monoid() {
        assert!(matches!(
            BaseMorphism::structural(BaseTag::Fin, Structural::Plus(Obj::fin(2))),
            Err(Error::UnsupportedStructure(_))
        ));
        let plus =
            BaseMorphism::structural(BaseTag::Fin, Structural::Plus(Obj::cyclic(3))).unwrap();
        assert_eq!(
            plus.eval(&Point::Fin(vec![2, 2])).unwrap(),
            Point::Fin(vec![1])
        );
    }

    #[test]
    fn fin_has_no_differential() {
        let id = BaseMorphism::id(BaseTag::Fin, &Obj::fin(2)).unwrap();
        assert_eq!(id.diff().unwrap_err(), Error::NoDifferential(BaseTag::Fin));
    }
}
