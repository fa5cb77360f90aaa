//! ℕ-indexed sequences with finite descriptions.
//!
//! A [`Seq`] is either eventually periodic, stored as an explicit head
//! followed by a repeating cycle (constants and "prefix, then constant" are
//! the common special cases), or a pure generator function. Eventually
//! periodic sequences are fully known after `offset + period` entries, which
//! is what lets boundary checks and shim certificates run to completion.

use std::fmt;
use std::sync::Arc;

use crate::error::Result;

type GenFn<T> = Arc<dyn Fn(usize) -> Result<T> + Send + Sync>;

#[derive(Clone)]
enum Repr<T> {
    /// `head[0], head[1], .., cycle[0], cycle[1], .., cycle[0], ..`
    Eventually { head: Vec<T>, cycle: Vec<T> },
    Generator {
        f: GenFn<T>,
        period: Option<(usize, usize)>,
    },
}

#[derive(Clone)]
pub struct Seq<T> {
    repr: Repr<T>,
}

/// The information needed to know a sequence completely.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stabilization {
    /// Entries before the repeating part starts.
    pub offset: usize,
    pub period: usize,
}

impl Stabilization {
    pub fn known_after(&self) -> usize {
        self.offset + self.period
    }

    /// Finest stabilization compatible with both.
    pub fn join(self, other: Stabilization) -> Stabilization {
        Stabilization {
            offset: self.offset.max(other.offset),
            period: num_integer::lcm(self.period, other.period),
        }
    }
}

impl<T: Clone + Send + Sync + 'static> Seq<T> {
    pub fn constant(value: T) -> Seq<T> {
        Seq {
            repr: Repr::Eventually {
                head: Vec::new(),
                cycle: vec![value],
            },
        }
    }

    /// `head` followed by `tail` forever.
    pub fn prefix(head: Vec<T>, tail: T) -> Seq<T> {
        Seq {
            repr: Repr::Eventually {
                head,
                cycle: vec![tail],
            },
        }
    }

    /// `head` followed by `cycle` repeated forever; `cycle` must be non-empty.
    pub fn periodic(head: Vec<T>, cycle: Vec<T>) -> Seq<T> {
        assert!(
            !cycle.is_empty(),
            "a periodic sequence needs a non-empty cycle"
        );
        Seq {
            repr: Repr::Eventually { head, cycle },
        }
    }

    /// A sequence computed on demand. `period` declares that entries repeat
    /// with the given period from the given offset on.
    pub fn generator(
        f: impl Fn(usize) -> Result<T> + Send + Sync + 'static,
        period: Option<(usize, usize)>,
    ) -> Seq<T> {
        Seq {
            repr: Repr::Generator {
                f: Arc::new(f),
                period,
            },
        }
    }

    pub fn at(&self, k: usize) -> Result<T> {
        match &self.repr {
            Repr::Eventually { head, cycle } => Ok(if k < head.len() {
                head[k].clone()
            } else {
                cycle[(k - head.len()) % cycle.len()].clone()
            }),
            Repr::Generator { f, period } => match period {
                Some((offset, p)) if k >= offset + p => f(offset + (k - offset) % p),
                _ => f(k),
            },
        }
    }

    /// `None` for generators without a declared period.
    pub fn stabilization(&self) -> Option<Stabilization> {
        match &self.repr {
            Repr::Eventually { head, cycle } => Some(Stabilization {
                offset: head.len(),
                period: cycle.len(),
            }),
            Repr::Generator { period, .. } => {
                period.map(|(offset, period)| Stabilization { offset, period })
            }
        }
    }

    /// True for sequences that hold one value at every tick.
    pub fn is_constant(&self) -> bool {
        matches!(&self.repr, Repr::Eventually { head, cycle } if head.is_empty() && cycle.len() == 1)
    }

    pub fn is_generator(&self) -> bool {
        matches!(self.repr, Repr::Generator { .. })
    }

    /// Entries `0..n`.
    pub fn take(&self, n: usize) -> Result<Vec<T>> {
        (0..n).map(|k| self.at(k)).collect()
    }

    /// Rebuilds an eventually periodic sequence from its entries.
    fn materialize(stab: Stabilization, value: impl Fn(usize) -> Result<T>) -> Result<Seq<T>> {
        let head = (0..stab.offset).map(&value).collect::<Result<Vec<_>>>()?;
        let cycle = (stab.offset..stab.known_after())
            .map(&value)
            .collect::<Result<Vec<_>>>()?;
        Ok(Seq {
            repr: Repr::Eventually { head, cycle },
        })
    }

    /// Pointwise image. Eventually periodic inputs are mapped eagerly, so
    /// errors surface here; generators stay lazy.
    pub fn map<U: Clone + Send + Sync + 'static>(
        &self,
        f: impl Fn(&T) -> Result<U> + Send + Sync + 'static,
    ) -> Result<Seq<U>> {
        self.map_indexed(move |_, x| f(x))
    }

    /// Like [`Seq::map`], with the tick passed along. The result of `f` must
    /// not depend on the tick beyond diagnostics, since only one period of
    /// an eventually periodic sequence is evaluated.
    pub fn map_indexed<U: Clone + Send + Sync + 'static>(
        &self,
        f: impl Fn(usize, &T) -> Result<U> + Send + Sync + 'static,
    ) -> Result<Seq<U>> {
        match &self.repr {
            Repr::Eventually { .. } => {
                let stab = self.stabilization().expect("eventually periodic");
                Seq::<U>::materialize(stab, |k| f(k, &self.at(k)?))
            }
            Repr::Generator { .. } => {
                let this = self.clone();
                let period = self.stabilization().map(|s| (s.offset, s.period));
                Ok(Seq::generator(move |k| f(k, &this.at(k)?), period))
            }
        }
    }

    /// Pointwise combination of two sequences.
    pub fn zip<U, V>(
        &self,
        other: &Seq<U>,
        f: impl Fn(&T, &U) -> Result<V> + Send + Sync + 'static,
    ) -> Result<Seq<V>>
    where
        U: Clone + Send + Sync + 'static,
        V: Clone + Send + Sync + 'static,
    {
        self.zip_indexed(other, move |_, a, b| f(a, b))
    }

    pub fn zip_indexed<U, V>(
        &self,
        other: &Seq<U>,
        f: impl Fn(usize, &T, &U) -> Result<V> + Send + Sync + 'static,
    ) -> Result<Seq<V>>
    where
        U: Clone + Send + Sync + 'static,
        V: Clone + Send + Sync + 'static,
    {
        match (self.stabilization(), other.stabilization()) {
            (Some(a), Some(b)) if !self.is_generator() && !other.is_generator() => {
                Seq::<V>::materialize(a.join(b), |k| f(k, &self.at(k)?, &other.at(k)?))
            }
            (a, b) => {
                let (x, y) = (self.clone(), other.clone());
                let period = a.zip(b).map(|(a, b)| {
                    let j = a.join(b);
                    (j.offset, j.period)
                });
                Ok(Seq::generator(move |k| f(k, &x.at(k)?, &y.at(k)?), period))
            }
        }
    }

    /// `○`: the sequence without its first entry.
    pub fn tail(&self) -> Seq<T> {
        match &self.repr {
            Repr::Eventually { head, cycle } => {
                if head.is_empty() {
                    let mut rotated = cycle[1..].to_vec();
                    rotated.push(cycle[0].clone());
                    Seq {
                        repr: Repr::Eventually {
                            head: Vec::new(),
                            cycle: rotated,
                        },
                    }
                } else {
                    Seq {
                        repr: Repr::Eventually {
                            head: head[1..].to_vec(),
                            cycle: cycle.clone(),
                        },
                    }
                }
            }
            Repr::Generator { .. } => {
                let this = self.clone();
                let period = self
                    .stabilization()
                    .map(|s| (s.offset.saturating_sub(1), s.period));
                Seq::generator(move |k| this.at(k + 1), period)
            }
        }
    }

    /// Number of leading entries that determine the whole sequence, or
    /// `fallback` for generators without a declared period.
    pub fn horizon_or(&self, fallback: usize) -> usize {
        self.stabilization().map_or(fallback, |s| s.known_after())
    }
}

impl<T: fmt::Debug + Clone + Send + Sync + 'static> fmt::Debug for Seq<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Eventually { head, cycle } if head.is_empty() && cycle.len() == 1 => {
                write!(f, "[{:?}, ..]", cycle[0])
            }
            Repr::Eventually { head, cycle } => write!(f, "{:?} then repeat {:?}", head, cycle),
            Repr::Generator { period, .. } => write!(f, "<generator, period {:?}>", period),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eventually_periodic_indexing() {
        let s = Seq::periodic(vec![10, 11], vec![1, 2, 3]);
        assert_eq!(s.take(8).unwrap(), vec![10, 11, 1, 2, 3, 1, 2, 3]);
        assert_eq!(s.tail().take(4).unwrap(), vec![11, 1, 2, 3]);
        assert_eq!(s.tail().tail().tail().take(4).unwrap(), vec![2, 3, 1, 2]);
        assert!(Seq::constant(4).is_constant());
        assert!(!Seq::prefix(vec![1], 4).is_constant());
    }

    #[test]
    fn zip_joins_periods() {
        let a = Seq::periodic(vec![], vec![0, 1]);
        let b = Seq::periodic(vec![5], vec![0, 1, 2]);
        let c = a.zip(&b, |x, y| Ok(x * 10 + y)).unwrap();
        assert_eq!(
            c.stabilization(),
            Some(Stabilization {
                offset: 1,
                period: 6
            })
        );
        for k in 0..20 {
            assert_eq!(c.at(k).unwrap(), a.at(k).unwrap() * 10 + b.at(k).unwrap());
        }
    }

    #[test]
    fn generators_respect_declared_period() {
        let g = Seq::generator(|k| Ok(k * k), Some((2, 1)));
        assert_eq!(g.take(5).unwrap(), vec![0, 1, 4, 4, 4]);
        assert_eq!(g.tail().take(3).unwrap(), vec![1, 4, 4]);
        assert_eq!(
            g.tail().stabilization(),
            Some(Stabilization {
                offset: 1,
                period: 1
            })
        );
        let free = Seq::generator(Ok, None);
        assert_eq!(free.tail().take(3).unwrap(), vec![1, 2, 3]);
        assert_eq!(free.horizon_or(7), 7);
    }

    #[test]
    fn map_surfaces_errors_eagerly_for_finite_descriptors() {
        let s = Seq::prefix(vec![1, 0], 2);
        let r = s.map(|x| {
            if *x == 0 {
                Err(crate::error::Error::Invalid("zero".into()))
            } else {
                Ok(10 / x)
            }
        });
        assert!(r.is_err());
    }
}
