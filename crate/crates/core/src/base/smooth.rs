//! Smooth maps `R^n -> R^m` on `f64` vectors.
//!
//! Maps are expression trees over a fixed set of primitives. Each primitive
//! has its differential written out as another tree, and composites are
//! differentiated with the chain and product rules, so `diff` never falls
//! back to numeric approximation and can be iterated.

use std::fmt;
use std::sync::Arc;

use crate::base::{PolyMap, Source};
use crate::obj::Obj;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Activation {
    Tanh,
    Sigmoid,
    /// `ln(1 + e^x)`, a smooth relu.
    Softplus,
}

impl Activation {
    pub fn name(self) -> &'static str {
        match self {
            Activation::Tanh => "tanh",
            Activation::Sigmoid => "sigmoid",
            Activation::Softplus => "softplus",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Tanh => x.tanh(),
            Activation::Sigmoid => 1.0 / (1.0 + (-x).exp()),
            Activation::Softplus => {
                // ln(1 + e^x) without overflow for large x
                if x > 0.0 {
                    x + (-x).exp().ln_1p()
                } else {
                    x.exp().ln_1p()
                }
            }
        }
    }
}

enum Node {
    Wiring(Vec<Source>),
    /// `(a, b) ↦ a + b` on `R^n × R^n`.
    Plus(usize),
    /// `x ↦ W x + b`, `W` row-major with `rows × cols` entries.
    Affine {
        rows: usize,
        cols: usize,
        w: Vec<f64>,
        b: Vec<f64>,
    },
    Poly(PolyMap),
    Pointwise(Activation),
    /// `(a, b) ↦ a ⊙ b` on `R^n × R^n`.
    Mul(usize),
    Const(Vec<f64>),
    /// `outer ∘ inner`
    Compose(SmoothMap, SmoothMap),
    Product(SmoothMap, SmoothMap),
}

/// The top node of a smooth map, for printing maps back out as circuits.
pub enum SmoothView<'a> {
    Wiring(&'a [Source]),
    Plus(usize),
    Affine {
        rows: usize,
        cols: usize,
        w: &'a [f64],
        b: &'a [f64],
    },
    Poly(&'a PolyMap),
    Pointwise(Activation, usize),
    Mul(usize),
    Const(&'a [f64]),
    Compose(&'a SmoothMap, &'a SmoothMap),
    Product(&'a SmoothMap, &'a SmoothMap),
}

#[derive(Clone)]
pub struct SmoothMap {
    dom: Obj,
    cod: Obj,
    node: Arc<Node>,
}

impl SmoothMap {
    fn make(dom: usize, cod: usize, node: Node) -> SmoothMap {
        SmoothMap {
            dom: Obj::real(dom),
            cod: Obj::real(cod),
            node: Arc::new(node),
        }
    }

    pub fn dom(&self) -> &Obj {
        &self.dom
    }

    pub fn cod(&self) -> &Obj {
        &self.cod
    }

    pub fn view(&self) -> SmoothView<'_> {
        match self.node.as_ref() {
            Node::Wiring(s) => SmoothView::Wiring(s),
            Node::Plus(n) => SmoothView::Plus(*n),
            Node::Affine { rows, cols, w, b } => SmoothView::Affine {
                rows: *rows,
                cols: *cols,
                w,
                b,
            },
            Node::Poly(p) => SmoothView::Poly(p),
            Node::Pointwise(a) => SmoothView::Pointwise(*a, self.dom.len()),
            Node::Mul(n) => SmoothView::Mul(*n),
            Node::Const(v) => SmoothView::Const(v),
            Node::Compose(g, f) => SmoothView::Compose(g, f),
            Node::Product(f, h) => SmoothView::Product(f, h),
        }
    }

    pub fn wiring(dom: &Obj, sources: &[Source]) -> SmoothMap {
        SmoothMap::make(dom.len(), sources.len(), Node::Wiring(sources.to_vec()))
    }

    pub fn identity(n: usize) -> SmoothMap {
        SmoothMap::make(n, n, Node::Wiring((0..n).map(Source::Slot).collect()))
    }

    pub fn plus(n: usize) -> SmoothMap {
        SmoothMap::make(2 * n, n, Node::Plus(n))
    }

    /// `x ↦ W x + b` for a matrix given by its rows.
    pub fn affine(rows: &[Vec<f64>], b: Vec<f64>) -> Option<SmoothMap> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) || b.len() != rows.len() {
            return None;
        }
        let w = rows.iter().flatten().copied().collect();
        Some(SmoothMap::make(
            cols,
            rows.len(),
            Node::Affine {
                rows: rows.len(),
                cols,
                w,
                b,
            },
        ))
    }

    pub fn activation(act: Activation, n: usize) -> SmoothMap {
        SmoothMap::make(n, n, Node::Pointwise(act))
    }

    pub fn mul(n: usize) -> SmoothMap {
        SmoothMap::make(2 * n, n, Node::Mul(n))
    }

    pub fn constant(values: Vec<f64>) -> SmoothMap {
        SmoothMap::make(0, values.len(), Node::Const(values))
    }

    pub fn poly(p: PolyMap) -> SmoothMap {
        SmoothMap::make(p.dom().len(), p.cod().len(), Node::Poly(p))
    }

    fn as_wiring(&self) -> Option<&[Source]> {
        match self.node.as_ref() {
            Node::Wiring(s) => Some(s),
            _ => None,
        }
    }

    fn is_identity(&self) -> bool {
        self.dom == self.cod
            && self
                .as_wiring()
                .is_some_and(|s| s.iter().enumerate().all(|(k, src)| *src == Source::Slot(k)))
    }

    /// `self ∘ f`; the caller has checked the boundary.
    pub fn after(&self, f: &SmoothMap) -> SmoothMap {
        if self.is_identity() {
            return f.clone();
        }
        if f.is_identity() {
            return self.clone();
        }
        if let (Some(outer), Some(inner)) = (self.as_wiring(), f.as_wiring()) {
            let sources: Vec<Source> = outer
                .iter()
                .map(|s| match s {
                    Source::Slot(i) => inner[*i],
                    Source::Zero => Source::Zero,
                })
                .collect();
            return SmoothMap::wiring(&f.dom, &sources);
        }
        SmoothMap {
            dom: f.dom.clone(),
            cod: self.cod.clone(),
            node: Arc::new(Node::Compose(self.clone(), f.clone())),
        }
    }

    pub fn product(&self, h: &SmoothMap) -> SmoothMap {
        if self.dom.is_empty() && self.cod.is_empty() {
            return h.clone();
        }
        if h.dom.is_empty() && h.cod.is_empty() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.as_wiring(), h.as_wiring()) {
            let off = self.dom.len();
            let sources: Vec<Source> = a
                .iter()
                .copied()
                .chain(b.iter().map(|s| match s {
                    Source::Slot(i) => Source::Slot(i + off),
                    Source::Zero => Source::Zero,
                }))
                .collect();
            return SmoothMap::wiring(&self.dom.times(&h.dom), &sources);
        }
        SmoothMap {
            dom: self.dom.times(&h.dom),
            cod: self.cod.times(&h.cod),
            node: Arc::new(Node::Product(self.clone(), h.clone())),
        }
    }

    fn proj0(n: usize, m: usize) -> SmoothMap {
        SmoothMap::make(n + m, n, Node::Wiring((0..n).map(Source::Slot).collect()))
    }

    fn proj1(n: usize, m: usize) -> SmoothMap {
        SmoothMap::make(
            n + m,
            m,
            Node::Wiring((n..n + m).map(Source::Slot).collect()),
        )
    }

    fn pair(&self, g: &SmoothMap) -> SmoothMap {
        let n = self.dom.len();
        let diag = SmoothMap::make(
            n,
            2 * n,
            Node::Wiring((0..n).chain(0..n).map(Source::Slot).collect()),
        );
        self.product(g).after(&diag)
    }

    /// `x ↦ act'(x)`, itself assembled from differentiable pieces.
    fn activation_slope(act: Activation, n: usize) -> SmoothMap {
        let neg_plus_one = SmoothMap::affine(
            &(0..n)
                .map(|i| (0..n).map(|j| if i == j { -1.0 } else { 0.0 }).collect())
                .collect::<Vec<_>>(),
            vec![1.0; n],
        )
        .expect("square matrix");
        let id = SmoothMap::identity(n);
        match act {
            // 1 - tanh²
            Activation::Tanh => {
                let t = SmoothMap::activation(Activation::Tanh, n);
                neg_plus_one.after(&SmoothMap::mul(n).after(&t.pair(&t)))
            }
            // σ (1 - σ)
            Activation::Sigmoid => {
                let s = SmoothMap::activation(Activation::Sigmoid, n);
                SmoothMap::mul(n).after(&id.pair(&neg_plus_one).after(&s))
            }
            Activation::Softplus => SmoothMap::activation(Activation::Sigmoid, n),
        }
    }

    /// `D self : X × X -> Y`, tangent first.
    pub fn diff(&self) -> SmoothMap {
        let n = self.dom.len();
        let m = self.cod.len();
        let tangent = SmoothMap::proj0(n, n);
        let point = SmoothMap::proj1(n, n);
        match self.node.as_ref() {
            Node::Wiring(sources) => SmoothMap::make(2 * n, m, Node::Wiring(sources.clone())),
            Node::Plus(_) => self.after(&tangent),
            Node::Affine { rows, cols, w, .. } => SmoothMap::make(
                *cols,
                *rows,
                Node::Affine {
                    rows: *rows,
                    cols: *cols,
                    w: w.clone(),
                    b: vec![0.0; *rows],
                },
            )
            .after(&tangent),
            Node::Poly(p) => SmoothMap::poly(p.diff()),
            Node::Pointwise(act) => SmoothMap::mul(n)
                .after(&tangent.pair(&SmoothMap::activation_slope(*act, n).after(&point))),
            Node::Mul(k) => {
                let k = *k;
                // slots: Δa, Δb, a, b  ->  (Δa, b, a, Δb)
                let sources = (0..k)
                    .chain(3 * k..4 * k)
                    .chain(2 * k..3 * k)
                    .chain(k..2 * k)
                    .map(Source::Slot)
                    .collect();
                let route = SmoothMap::make(4 * k, 4 * k, Node::Wiring(sources));
                let muls = SmoothMap::mul(k).product(&SmoothMap::mul(k));
                SmoothMap::plus(k).after(&muls.after(&route))
            }
            Node::Const(v) => {
                SmoothMap::make(0, v.len(), Node::Wiring(vec![Source::Zero; v.len()]))
            }
            Node::Compose(g, f) => g.diff().after(&f.diff().pair(&f.after(&point))),
            Node::Product(f, h) => {
                let (a, b) = (f.dom.len(), h.dom.len());
                // (Δx, Δv, x, v) -> (Δx, x, Δv, v)
                let sources = (0..a)
                    .chain(a + b..2 * a + b)
                    .chain(a..a + b)
                    .chain(2 * a + b..2 * a + 2 * b)
                    .map(Source::Slot)
                    .collect();
                let delta = SmoothMap::make(2 * (a + b), 2 * (a + b), Node::Wiring(sources));
                f.diff().product(&h.diff()).after(&delta)
            }
        }
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        match self.node.as_ref() {
            Node::Wiring(sources) => sources
                .iter()
                .map(|s| match s {
                    Source::Slot(i) => x[*i],
                    Source::Zero => 0.0,
                })
                .collect(),
            Node::Plus(n) => (0..*n).map(|i| x[i] + x[n + i]).collect(),
            Node::Affine { rows, cols, w, b } => (0..*rows)
                .map(|r| b[r] + (0..*cols).map(|c| w[r * cols + c] * x[c]).sum::<f64>())
                .collect(),
            Node::Poly(p) => p.eval_f64(x),
            Node::Pointwise(act) => x.iter().map(|v| act.apply(*v)).collect(),
            Node::Mul(n) => (0..*n).map(|i| x[i] * x[n + i]).collect(),
            Node::Const(v) => v.clone(),
            Node::Compose(g, f) => g.eval(&f.eval(x)),
            Node::Product(f, h) => {
                let (a, b) = x.split_at(f.dom.len());
                let mut out = f.eval(a);
                out.extend(h.eval(b));
                out
            }
        }
    }
}

impl fmt::Debug for SmoothMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node.as_ref() {
            Node::Wiring(s) => write!(f, "wire{:?}", s),
            Node::Plus(n) => write!(f, "plus{}", n),
            Node::Affine { rows, cols, .. } => write!(f, "affine{}x{}", rows, cols),
            Node::Poly(p) => write!(f, "{:?}", p),
            Node::Pointwise(a) => write!(f, "{}{}", a.name(), self.dom.len()),
            Node::Mul(n) => write!(f, "mul{}", n),
            Node::Const(v) => write!(f, "const{:?}", v),
            Node::Compose(g, h) => write!(f, "({:?} . {:?})", g, h),
            Node::Product(g, h) => write!(f, "({:?} x {:?})", g, h),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(f: &SmoothMap, x: &[f64], dx: &[f64]) -> Vec<f64> {
        let h = 1e-6;
        let plus: Vec<f64> = x.iter().zip(dx).map(|(a, d)| a + h * d).collect();
        let minus: Vec<f64> = x.iter().zip(dx).map(|(a, d)| a - h * d).collect();
        f.eval(&plus)
            .iter()
            .zip(f.eval(&minus))
            .map(|(p, m)| (p - m) / (2.0 * h))
            .collect()
    }

    fn check_against_fd(f: &SmoothMap, x: &[f64], dx: &[f64]) {
        let df = f.diff();
        let mut arg = dx.to_vec();
        arg.extend_from_slice(x);
        for (a, b) in df.eval(&arg).iter().zip(fd(f, x, dx)) {
            assert!(
                (a - b).abs() <= 1e-6 * (1.0f64).max(a.abs()),
                "{} vs {}",
                a,
                b
            );
        }
    }

    #[test]
    fn activations_match_finite_differences() {
        for act in [Activation::Tanh, Activation::Sigmoid, Activation::Softplus] {
            let f = SmoothMap::activation(act, 2);
            check_against_fd(&f, &[0.3, -1.2], &[1.0, 0.5]);
            // second derivative through the registered slope
            let d2 = f.diff();
            check_against_fd(&d2, &[1.0, -0.5, 0.3, -1.2], &[0.2, 0.1, 1.0, -1.0]);
        }
    }

    #[test]
    fn chain_and_product_rules() {
        let lin = SmoothMap::affine(&[vec![1.0, 2.0], vec![-1.0, 0.5]], vec![0.1, 0.2]).unwrap();
        let f = SmoothMap::activation(Activation::Tanh, 2).after(&lin);
        let g = SmoothMap::mul(1).product(&SmoothMap::activation(Activation::Sigmoid, 1));
        check_against_fd(&f, &[0.4, -0.7], &[1.0, 2.0]);
        check_against_fd(
            &g.after(&SmoothMap::identity(3)),
            &[0.4, -0.7, 1.1],
            &[1.0, 2.0, -1.0],
        );
        check_against_fd(&SmoothMap::mul(1).after(&f), &[0.4, -0.7], &[0.3, 0.9]);
    }

    #[test]
    fn tanh_derivative_at_zero_is_one() {
        let d = SmoothMap::activation(Activation::Tanh, 1).diff();
        assert!((d.eval(&[1.0, 0.0])[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn softplus_is_stable() {
        let f = SmoothMap::activation(Activation::Softplus, 1);
        assert!((f.eval(&[800.0])[0] - 800.0).abs() < 1e-9);
        assert!(f.eval(&[-800.0])[0] >= 0.0);
    }
}
