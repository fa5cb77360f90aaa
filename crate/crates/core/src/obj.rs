//! Objects of the base categories and points of those objects.
//!
//! Products are strict: an [`Obj`] is a flat list of scalar slots, the unit
//! object is the empty list and `R^a × R^b` *is* `R^(a+b)`. Factor
//! boundaries therefore only matter through slot counts, and "T is a prefix
//! of T × X" is a statement about slot lists.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// One scalar coordinate of an object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Slot {
    /// A real coordinate (a factor of some `R^n`).
    Real,
    /// A finite set `{0, .., m-1}` with no additive structure.
    Fin(u32),
    /// A finite set `{0, .., m-1}` carrying addition modulo `m`.
    Cyclic(u32),
}

impl Slot {
    pub fn is_real(self) -> bool {
        matches!(self, Slot::Real)
    }

    pub fn is_finite(self) -> bool {
        !self.is_real()
    }

    pub fn cardinality(self) -> Option<u32> {
        match self {
            Slot::Real => None,
            Slot::Fin(m) | Slot::Cyclic(m) => Some(m),
        }
    }

    pub fn is_additive(self) -> bool {
        !matches!(self, Slot::Fin(_))
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Obj {
    slots: Vec<Slot>,
}

impl Obj {
    /// The terminal object `1`.
    pub fn unit() -> Obj {
        Obj { slots: Vec::new() }
    }

    pub fn real(n: usize) -> Obj {
        Obj {
            slots: vec![Slot::Real; n],
        }
    }

    pub fn fin(m: u32) -> Obj {
        Obj {
            slots: vec![Slot::Fin(m)],
        }
    }

    pub fn cyclic(m: u32) -> Obj {
        Obj {
            slots: vec![Slot::Cyclic(m)],
        }
    }

    pub fn from_slots(slots: Vec<Slot>) -> Obj {
        Obj { slots }
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_unit(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.slots.iter().all(|s| s.is_real())
    }

    pub fn is_finite(&self) -> bool {
        self.slots.iter().all(|s| s.is_finite())
    }

    pub fn is_additive(&self) -> bool {
        self.slots.iter().all(|s| s.is_additive())
    }

    pub fn times(&self, other: &Obj) -> Obj {
        let mut slots = self.slots.clone();
        slots.extend_from_slice(&other.slots);
        Obj { slots }
    }

    pub fn product<'a>(objs: impl IntoIterator<Item = &'a Obj>) -> Obj {
        let mut slots = Vec::new();
        for o in objs {
            slots.extend_from_slice(&o.slots);
        }
        Obj { slots }
    }

    /// `self × self × ...` (`n` copies).
    pub fn power(&self, n: usize) -> Obj {
        Obj {
            slots: self.slots.repeat(n),
        }
    }

    /// If `self = prefix × rest`, returns `rest`.
    pub fn strip_prefix(&self, prefix: &Obj) -> Option<Obj> {
        self.slots
            .strip_prefix(prefix.slots.as_slice())
            .map(|rest| Obj {
                slots: rest.to_vec(),
            })
    }

    /// If `self = rest × suffix`, returns `rest`.
    pub fn strip_suffix(&self, suffix: &Obj) -> Option<Obj> {
        self.slots
            .strip_suffix(suffix.slots.as_slice())
            .map(|rest| Obj {
                slots: rest.to_vec(),
            })
    }

    pub fn split_at(&self, n: usize) -> (Obj, Obj) {
        let (a, b) = self.slots.split_at(n);
        (Obj { slots: a.to_vec() }, Obj { slots: b.to_vec() })
    }

    /// Number of points of a finite object (`None` if it has real slots or overflows).
    pub fn cardinality(&self) -> Option<usize> {
        self.slots.iter().try_fold(1usize, |acc, s| {
            s.cardinality().and_then(|m| acc.checked_mul(m as usize))
        })
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slots.is_empty() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.slots.len() {
            match self.slots[i] {
                Slot::Real => {
                    let run = self.slots[i..].iter().take_while(|s| s.is_real()).count();
                    parts.push(format!("R{}", run));
                    i += run;
                }
                Slot::Fin(m) => {
                    parts.push(format!("F{}", m));
                    i += 1;
                }
                Slot::Cyclic(m) => {
                    parts.push(format!("Z{}", m));
                    i += 1;
                }
            }
        }
        let sep = if f.alternate() { "*" } else { "×" };
        write!(f, "{}", parts.join(sep))
    }
}

impl std::str::FromStr for Obj {
    type Err = Error;

    /// `1`, `R3`, `F2`, `Z5` and products of them joined by `*` or `×`.
    fn from_str(s: &str) -> Result<Obj> {
        let bad = || Error::Invalid(format!("not an object: `{}`", s));
        let mut slots = Vec::new();
        for part in s.split(['*', '×']) {
            let part = part.trim();
            if part == "1" {
                continue;
            }
            let mut chars = part.chars();
            let kind = chars.next().ok_or_else(bad)?;
            let n: u32 = chars.as_str().parse().map_err(|_| bad())?;
            match kind {
                'R' => slots.extend(std::iter::repeat_n(Slot::Real, n as usize)),
                'F' => slots.push(Slot::Fin(n)),
                'Z' if n > 0 => slots.push(Slot::Cyclic(n)),
                _ => return Err(bad()),
            }
        }
        Ok(Obj::from_slots(slots))
    }
}

impl fmt::Debug for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Obj({})", self)
    }
}

/// A point of an object: exact rationals, doubles, or finite indices.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Rat(Vec<Rational>),
    Real(Vec<f64>),
    Fin(Vec<u32>),
}

impl Point {
    pub fn len(&self) -> usize {
        match self {
            Point::Rat(v) => v.len(),
            Point::Real(v) => v.len(),
            Point::Fin(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rat<I: IntoIterator<Item = i64>>(values: I) -> Point {
        Point::Rat(values.into_iter().map(Rational::from_int).collect())
    }

    /// Concatenation; an empty point adopts the kind of the other operand.
    pub fn concat(&self, other: &Point) -> Result<Point> {
        Ok(match (self, other) {
            (a, b) if b.is_empty() => a.clone(),
            (a, b) if a.is_empty() => b.clone(),
            (Point::Rat(a), Point::Rat(b)) => Point::Rat([a.as_slice(), b].concat()),
            (Point::Real(a), Point::Real(b)) => Point::Real([a.as_slice(), b].concat()),
            (Point::Fin(a), Point::Fin(b)) => Point::Fin([a.as_slice(), b].concat()),
            _ => {
                return Err(Error::ShapeMismatch(
                    "cannot concatenate points of different kinds".into(),
                ))
            }
        })
    }

    pub fn split_at(&self, n: usize) -> (Point, Point) {
        match self {
            Point::Rat(v) => (Point::Rat(v[..n].to_vec()), Point::Rat(v[n..].to_vec())),
            Point::Real(v) => (Point::Real(v[..n].to_vec()), Point::Real(v[n..].to_vec())),
            Point::Fin(v) => (Point::Fin(v[..n].to_vec()), Point::Fin(v[n..].to_vec())),
        }
    }

    pub fn as_rat(&self) -> Option<&[Rational]> {
        match self {
            Point::Rat(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_real(&self) -> Option<&[f64]> {
        match self {
            Point::Real(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_fin(&self) -> Option<&[u32]> {
        match self {
            Point::Fin(v) => Some(v),
            _ => None,
        }
    }

    /// Checks arity and, for finite slots, index ranges against `obj`.
    pub fn check_against(&self, obj: &Obj) -> Result<()> {
        if self.len() != obj.len() {
            return Err(Error::ShapeMismatch(format!(
                "point has {} coordinates but {} has {}",
                self.len(),
                obj,
                obj.len()
            )));
        }
        if self.is_empty() {
            return Ok(());
        }
        match self {
            Point::Rat(_) | Point::Real(_) => {
                if !obj.is_real() {
                    return Err(Error::ShapeMismatch(format!(
                        "real point for non-real object {}",
                        obj
                    )));
                }
            }
            Point::Fin(v) => {
                for (x, s) in v.iter().zip(obj.slots()) {
                    match s.cardinality() {
                        Some(m) if *x < m => {}
                        Some(m) => {
                            return Err(Error::ShapeMismatch(format!(
                                "index {} out of range for a set of size {}",
                                x, m
                            )))
                        }
                        None => {
                            return Err(Error::ShapeMismatch(format!(
                                "finite point for real object {}",
                                obj
                            )))
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = match self {
            Point::Rat(v) => v.iter().map(|x| x.to_string()).collect(),
            Point::Real(v) => v.iter().map(|x| x.to_string()).collect(),
            Point::Fin(v) => v.iter().map(|x| x.to_string()).collect(),
        };
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for Point {
    /// Rationals as `"p/q"` strings so that values stay exact in JSON.
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Point::Rat(v) => serializer.collect_seq(v.iter().map(|x| x.to_string())),
            Point::Real(v) => serializer.collect_seq(v),
            Point::Fin(v) => serializer.collect_seq(v),
        }
    }
}
