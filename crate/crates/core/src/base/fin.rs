//! Functions between finite sets.
//!
//! A point of a finite object is a tuple of indices; tuples are numbered in
//! mixed radix with the first slot most significant. Small maps are kept as
//! flat tables, larger ones stay lazy until they are evaluated.

use std::fmt;
use std::sync::Arc;

use crate::base::Source;
use crate::error::{Error, Result};
use crate::obj::{Obj, Slot};

/// Compositions and products whose domain has at most this many points are
/// tabulated eagerly.
const TABULATE_LIMIT: usize = 1 << 14;
/// Upper bound for exhaustive comparison.
const COMPARE_LIMIT: usize = 1 << 22;

enum Repr {
    /// Row `r` (a domain index) holds the codomain tuple at `r * cod.len()..`.
    Table(Vec<u32>),
    Wiring(Vec<Source>),
    /// Addition modulo `m` slot by slot.
    Plus,
    Compose(FinMap, FinMap),
    Product(FinMap, FinMap),
}

#[derive(Clone)]
pub struct FinMap {
    dom: Obj,
    cod: Obj,
    repr: Arc<Repr>,
}

fn modulus(slot: Slot) -> u32 {
    slot.cardinality().expect("finite slot")
}

fn decode(obj: &Obj, mut index: usize) -> Vec<u32> {
    let mut out = vec![0; obj.len()];
    for (k, slot) in obj.slots().iter().enumerate().rev() {
        let m = modulus(*slot) as usize;
        out[k] = (index % m) as u32;
        index /= m;
    }
    out
}

fn encode(obj: &Obj, point: &[u32]) -> usize {
    obj.slots().iter().zip(point).fold(0usize, |acc, (s, x)| {
        acc * modulus(*s) as usize + *x as usize
    })
}

impl FinMap {
    pub fn dom(&self) -> &Obj {
        &self.dom
    }

    pub fn cod(&self) -> &Obj {
        &self.cod
    }

    /// A lookup table listing the image of every domain point in order.
    pub fn table(dom: Obj, cod: Obj, entries: Vec<u32>) -> Result<FinMap> {
        let rows = dom
            .cardinality()
            .ok_or_else(|| Error::ShapeMismatch(format!("{} is not a finite object", dom)))?;
        if !cod.is_finite() {
            return Err(Error::ShapeMismatch(format!(
                "{} is not a finite object",
                cod
            )));
        }
        if entries.len() != rows * cod.len() {
            return Err(Error::ShapeMismatch(format!(
                "table for {} -> {} needs {} entries, got {}",
                dom,
                cod,
                rows * cod.len(),
                entries.len()
            )));
        }
        if !cod.is_empty() {
            for row in entries.chunks(cod.len()) {
                for (x, s) in row.iter().zip(cod.slots()) {
                    if *x >= modulus(*s) {
                        return Err(Error::ShapeMismatch(format!(
                            "table entry {} out of range for {}",
                            x, cod
                        )));
                    }
                }
            }
        }
        Ok(FinMap {
            dom,
            cod,
            repr: Arc::new(Repr::Table(entries)),
        })
    }

    /// Tabulates an arbitrary function on the points of `dom`.
    pub fn from_fn(dom: Obj, cod: Obj, f: impl Fn(&[u32]) -> Vec<u32>) -> Result<FinMap> {
        let rows = dom
            .cardinality()
            .ok_or_else(|| Error::ShapeMismatch(format!("{} is not a finite object", dom)))?;
        let mut entries = Vec::with_capacity(rows * cod.len());
        for r in 0..rows {
            let y = f(&decode(&dom, r));
            if y.len() != cod.len() {
                return Err(Error::ShapeMismatch(format!(
                    "function returned {} values for {}",
                    y.len(),
                    cod
                )));
            }
            entries.extend(y);
        }
        FinMap::table(dom, cod, entries)
    }

    pub(crate) fn wiring(dom: &Obj, cod: &Obj, sources: &[Source]) -> FinMap {
        FinMap {
            dom: dom.clone(),
            cod: cod.clone(),
            repr: Arc::new(Repr::Wiring(sources.to_vec())),
        }
    }

    pub(crate) fn plus(obj: &Obj) -> FinMap {
        FinMap {
            dom: obj.power(2),
            cod: obj.clone(),
            repr: Arc::new(Repr::Plus),
        }
    }

    fn small_domain(&self) -> bool {
        self.dom.cardinality().is_some_and(|n| n <= TABULATE_LIMIT)
    }

    fn tabulated(self) -> FinMap {
        if matches!(self.repr.as_ref(), Repr::Table(_) | Repr::Wiring(_)) || !self.small_domain() {
            return self;
        }
        let this = &self;
        FinMap::from_fn(self.dom.clone(), self.cod.clone(), |x| this.eval(x))
            .expect("well-typed map")
    }

    /// `self ∘ f`; the caller has checked the boundary.
    pub fn after(&self, f: &FinMap) -> FinMap {
        if let (Repr::Wiring(outer), Repr::Wiring(inner)) = (self.repr.as_ref(), f.repr.as_ref()) {
            let sources: Vec<Source> = outer
                .iter()
                .map(|s| match s {
                    Source::Slot(i) => inner[*i],
                    Source::Zero => Source::Zero,
                })
                .collect();
            return FinMap::wiring(&f.dom, &self.cod, &sources);
        }
        FinMap {
            dom: f.dom.clone(),
            cod: self.cod.clone(),
            repr: Arc::new(Repr::Compose(self.clone(), f.clone())),
        }
        .tabulated()
    }

    pub fn product(&self, h: &FinMap) -> FinMap {
        FinMap {
            dom: self.dom.times(&h.dom),
            cod: self.cod.times(&h.cod),
            repr: Arc::new(Repr::Product(self.clone(), h.clone())),
        }
        .tabulated()
    }

    pub fn eval(&self, x: &[u32]) -> Vec<u32> {
        match self.repr.as_ref() {
            Repr::Table(entries) => {
                let w = self.cod.len();
                let r = encode(&self.dom, x);
                entries[r * w..(r + 1) * w].to_vec()
            }
            Repr::Wiring(sources) => sources
                .iter()
                .map(|s| match s {
                    Source::Slot(i) => x[*i],
                    Source::Zero => 0,
                })
                .collect(),
            Repr::Plus => {
                let n = self.cod.len();
                (0..n)
                    .map(|i| (x[i] + x[n + i]) % modulus(self.cod.slots()[i]))
                    .collect()
            }
            Repr::Compose(g, f) => g.eval(&f.eval(x)),
            Repr::Product(f, h) => {
                let (a, b) = x.split_at(f.dom.len());
                let mut out = f.eval(a);
                out.extend(h.eval(b));
                out
            }
        }
    }

    /// Exhaustive comparison; `None` when the maps agree everywhere.
    pub fn find_difference(&self, other: &FinMap) -> Result<Option<Vec<u32>>> {
        let n = self
            .dom
            .cardinality()
            .filter(|n| *n <= COMPARE_LIMIT)
            .ok_or_else(|| {
                Error::Invalid(format!(
                    "domain {} is too large to compare exhaustively",
                    self.dom
                ))
            })?;
        for r in 0..n {
            let x = decode(&self.dom, r);
            if self.eval(&x) != other.eval(&x) {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }

    /// Every point of a finite object, in table order.
    pub fn points(obj: &Obj) -> impl Iterator<Item = Vec<u32>> + '_ {
        (0..obj.cardinality().unwrap_or(0)).map(move |r| decode(obj, r))
    }
}

impl fmt::Debug for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.repr.as_ref() {
            Repr::Table(t) if t.len() <= 32 => {
                write!(f, "table[{} -> {}]{:?}", self.dom, self.cod, t)
            }
            Repr::Table(_) => write!(f, "table[{} -> {}]", self.dom, self.cod),
            Repr::Wiring(s) => write!(f, "wire{:?}", s),
            Repr::Plus => write!(f, "plus[{}]", self.cod),
            Repr::Compose(g, h) => write!(f, "({:?} . {:?})", g, h),
            Repr::Product(g, h) => write!(f, "({:?} x {:?})", g, h),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_is_an_involution() {
        let not = FinMap::table(Obj::fin(2), Obj::fin(2), vec![1, 0]).unwrap();
        assert_eq!(not.eval(&[0]), vec![1]);
        let id = FinMap::wiring(&Obj::fin(2), &Obj::fin(2), &[Source::Slot(0)]);
        assert_eq!(not.after(&not).find_difference(&id).unwrap(), None);
    }

    #[test]
    fn product_table_has_all_rows() {
        let not = FinMap::table(Obj::fin(2), Obj::fin(2), vec![1, 0]).unwrap();
        let inc = FinMap::table(Obj::fin(3), Obj::fin(3), vec![1, 2, 0]).unwrap();
        let p = not.product(&inc);
        assert_eq!(p.dom().cardinality(), Some(6));
        assert_eq!(p.eval(&[1, 2]), vec![0, 0]);
        match p.repr.as_ref() {
            Repr::Table(t) => assert_eq!(t.len(), 12),
            _ => panic!("small products are tabulated"),
        }
    }

    #[test]
    fn mixed_radix_roundtrip() {
        let obj = Obj::fin(2).times(&Obj::fin(3)).times(&Obj::fin(4));
        for r in 0..24 {
            assert_eq!(encode(&obj, &decode(&obj, r)), r);
        }
        assert_eq!(decode(&obj, 23), vec![1, 2, 3]);
    }

    #[test]
    fn bad_tables_are_rejected() {
        assert!(FinMap::table(Obj::fin(2), Obj::fin(2), vec![1]).is_err());
        assert!(FinMap::table(Obj::fin(2), Obj::fin(2), vec![1, 2]).is_err());
    }
}
