//! Reference computations that do not go through the sequence differential:
//! classical unroll-then-differentiate, finite differences, and the
//! encoding of causal stream functions as stateful sequences.

use std::sync::{Arc, Mutex};

use crate::base::{BaseMorphism, BaseTag, FinMap, Structural};
use crate::caus::{run, seq_d, unroll, StatefulSeq, Truncations};
use crate::error::{Error, Result};
use crate::obj::{Obj, Point};
use crate::rational::Rational;
use crate::seq::Seq;
use crate::square::TwoCell;

/// Central-difference step used throughout.
pub const FD_STEP: f64 = 1e-6;

/// `D(Un_k(s)) ∘ unzip : ∏_{n ≤ k} (X_n × X_n) -> Y_k`, the derivative of the
/// flattened unrolling, with its inputs regrouped tick by tick so that it can
/// be compared directly with `Un_k(seqD s)`.
pub fn bptt_diff(s: &StatefulSeq, k: usize) -> Result<BaseMorphism> {
    let d = unroll(s, k)?.diff()?;
    let xs = s.dom_seq()?.take(k + 1)?;
    let unzip = BaseMorphism::structural(s.tag(), Structural::Unzip(xs))?;
    d.after(&unzip)
}

/// Jacobian of `f` at `x` by central differences, one row per output.
pub fn fd_jacobian(f: &BaseMorphism, x: &[f64], h: f64) -> Result<Vec<Vec<f64>>> {
    if x.len() != f.dom().len() {
        return Err(Error::ShapeMismatch(format!(
            "{} coordinates given for a map out of {}",
            x.len(),
            f.dom()
        )));
    }
    let eval = |p: Vec<f64>| -> Result<Vec<f64>> {
        match f.eval(&Point::Real(p))? {
            Point::Real(v) => Ok(v),
            other => Err(Error::ShapeMismatch(format!(
                "expected real output, got {}",
                other
            ))),
        }
    };
    let mut cols = Vec::with_capacity(x.len());
    for j in 0..x.len() {
        let mut up = x.to_vec();
        let mut down = x.to_vec();
        up[j] += h;
        down[j] -= h;
        let (a, b) = (eval(up)?, eval(down)?);
        cols.push(
            a.iter()
                .zip(&b)
                .map(|(p, q)| (p - q) / (2.0 * h))
                .collect::<Vec<_>>(),
        );
    }
    let rows = f.cod().len();
    Ok((0..rows)
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect())
}

/// Which computation produces derivatives of unrollings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Run the differentiated sequence once; all ticks come out together.
    SeqD,
    /// Differentiate each flattened unrolling separately.
    Bptt,
}

/// Derivatives of the unrollings of one sequence, with the differentiated
/// sequence and the per-tick BPTT morphisms built once and reused.
pub struct Differentiator {
    seq: StatefulSeq,
    derived: StatefulSeq,
    bptt: Mutex<Vec<BaseMorphism>>,
}

impl Differentiator {
    pub fn new(s: &StatefulSeq) -> Result<Differentiator> {
        Ok(Differentiator {
            seq: s.clone(),
            derived: seq_d(s)?,
            bptt: Mutex::new(Vec::new()),
        })
    }

    pub fn derived(&self) -> &StatefulSeq {
        &self.derived
    }

    fn bptt_at(&self, k: usize) -> Result<BaseMorphism> {
        let mut cache = self.bptt.lock().expect("bptt cache poisoned");
        while cache.len() <= k {
            let n = cache.len();
            cache.push(bptt_diff(&self.seq, n)?);
        }
        Ok(cache[k].clone())
    }

    /// `D(Un_k)` at `(tangents, inputs)` for every `k < inputs.len()`.
    pub fn directional(
        &self,
        inputs: &[Point],
        tangents: &[Point],
        route: Route,
    ) -> Result<Vec<Point>> {
        if inputs.len() != tangents.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} inputs but {} tangents",
                inputs.len(),
                tangents.len()
            )));
        }
        let zipped = tangents
            .iter()
            .zip(inputs)
            .map(|(t, x)| t.concat(x))
            .collect::<Result<Vec<_>>>()?;
        match route {
            Route::SeqD => run(&self.derived, &zipped),
            Route::Bptt => {
                let mut flat = zipped.first().cloned().unwrap_or(Point::Rat(vec![]));
                let mut out = Vec::with_capacity(zipped.len());
                for (k, z) in zipped.iter().enumerate() {
                    if k > 0 {
                        flat = flat.concat(z)?;
                    }
                    out.push(self.bptt_at(k)?.eval(&flat)?);
                }
                Ok(out)
            }
        }
    }

    /// Columns of the Jacobian of `Un_k` at `inputs[..=k]`: column `j` is the
    /// derivative along the `j`-th coordinate of the flattened inputs.
    pub fn jacobian(&self, k: usize, inputs: &[Point], route: Route) -> Result<Vec<Point>> {
        let inputs = inputs.get(..=k).ok_or_else(|| {
            Error::ShapeMismatch(format!(
                "need {} input records, got {}",
                k + 1,
                inputs.len()
            ))
        })?;
        let total: usize = inputs.iter().map(Point::len).sum();
        let mut cols = Vec::with_capacity(total);
        for j in 0..total {
            let tangents = basis_tangent(inputs, j);
            cols.push(
                self.directional(inputs, &tangents, route)?
                    .pop()
                    .expect("k + 1 outputs"),
            );
        }
        Ok(cols)
    }
}

/// Zero tangents for `inputs`, except a one at flattened coordinate `j`.
fn basis_tangent(inputs: &[Point], j: usize) -> Vec<Point> {
    let mut offset = 0;
    inputs
        .iter()
        .map(|x| {
            let hit = (offset..offset + x.len()).contains(&j).then(|| j - offset);
            offset += x.len();
            match x {
                Point::Rat(v) => Point::Rat(
                    (0..v.len())
                        .map(|i| {
                            if Some(i) == hit {
                                Rational::one()
                            } else {
                                Rational::zero()
                            }
                        })
                        .collect(),
                ),
                _ => Point::Real(
                    (0..x.len())
                        .map(|i| if Some(i) == hit { 1.0 } else { 0.0 })
                        .collect(),
                ),
            }
        })
        .collect()
}

/// `Σ_i w_i ∂(Un_k)_i / ∂x_j` for every flattened input coordinate `j`,
/// one seqD run (or BPTT evaluation) per basis tangent.
pub fn gradient(
    s: &StatefulSeq,
    k: usize,
    inputs: &[Point],
    weights: &[f64],
    route: Route,
) -> Result<Vec<f64>> {
    let cols = Differentiator::new(s)?.jacobian(k, inputs, route)?;
    cols.iter()
        .map(|c| {
            let v = to_f64(c)?;
            if v.len() != weights.len() {
                return Err(Error::ShapeMismatch(format!(
                    "{} weights for {} outputs",
                    weights.len(),
                    v.len()
                )));
            }
            Ok(v.iter().zip(weights).map(|(a, w)| a * w).sum())
        })
        .collect()
}

pub(crate) fn to_f64(p: &Point) -> Result<Vec<f64>> {
    match p {
        Point::Rat(v) => Ok(v.iter().map(Rational::to_f64).collect()),
        Point::Real(v) => Ok(v.clone()),
        Point::Fin(v) if v.is_empty() => Ok(vec![]),
        Point::Fin(_) => Err(Error::ShapeMismatch(
            "finite point has no real coordinates".into(),
        )),
    }
}

/// A stream function presented by its action on finite prefixes: the
/// output must have the same length as the input.
pub type PrefixOracle = Arc<dyn Fn(&[Point]) -> Vec<Point> + Send + Sync>;

fn check_alphabet(a: &Obj) -> Result<()> {
    match a.cardinality() {
        Some(0) => Err(Error::AlphabetEmpty),
        Some(_) => Ok(()),
        None => Err(Error::ShapeMismatch(format!(
            "{} is not a finite alphabet",
            a
        ))),
    }
}

/// The history machine of a causal function: at tick `k` the state is the
/// whole input history `A^k`; the cell appends the new symbol and asks `f`
/// for its `k`-th output on the extended prefix.
///
/// Causality of `f` is the caller's obligation.
pub fn from_causal_function(f: PrefixOracle, a: &Obj, b: &Obj) -> Result<StatefulSeq> {
    check_alphabet(a)?;
    check_alphabet(b)?;
    let (a, b) = (a.clone(), b.clone());
    let width = a.len();
    let memo: Arc<Mutex<Vec<TwoCell>>> = Arc::new(Mutex::new(Vec::new()));
    let cells = Seq::generator(
        move |k| {
            let mut memo = memo.lock().expect("cell cache poisoned");
            while memo.len() <= k {
                let n = memo.len();
                let (prv, nxt) = (a.power(n), a.power(n + 1));
                let f = f.clone();
                let b_len = b.len();
                let table = FinMap::from_fn(prv.times(&a), nxt.times(&b), move |v| {
                    let prefix: Vec<Point> = v
                        .chunks(width.max(1))
                        .map(|c| Point::Fin(c.to_vec()))
                        .take(n + 1)
                        .collect();
                    let prefix = if width == 0 {
                        vec![Point::Fin(vec![]); n + 1]
                    } else {
                        prefix
                    };
                    let out = f(&prefix);
                    let y = match out.get(n) {
                        Some(Point::Fin(y)) if y.len() == b_len => y.clone(),
                        _ => vec![0; b_len],
                    };
                    [v, y.as_slice()].concat()
                })?;
                memo.push(TwoCell::new(
                    prv,
                    a.clone(),
                    nxt,
                    b.clone(),
                    BaseMorphism::Fin(table),
                )?);
            }
            Ok(memo[k].clone())
        },
        None,
    );
    StatefulSeq::new(BaseMorphism::id(BaseTag::Fin, &Obj::unit())?, cells)
}

/// The causal function computed by a sequence over finite sets:
/// `g(a)_{≤ n} = Tc_n(a_{≤ n})`.
pub struct CausalFunction {
    seq: StatefulSeq,
    truncations: Mutex<Vec<BaseMorphism>>,
}

pub fn to_causal_function(s: &StatefulSeq) -> Result<CausalFunction> {
    if s.tag() != BaseTag::Fin {
        return Err(Error::BaseMismatch {
            left: BaseTag::Fin,
            right: s.tag(),
        });
    }
    Ok(CausalFunction {
        seq: s.clone(),
        truncations: Mutex::new(Vec::new()),
    })
}

impl CausalFunction {
    pub fn apply(&self, prefix: &[Point]) -> Result<Vec<Point>> {
        let Some(n) = prefix.len().checked_sub(1) else {
            return Ok(Vec::new());
        };
        let tc = {
            let mut cache = self.truncations.lock().expect("truncation cache poisoned");
            if cache.len() <= n {
                let mut it = Truncations::new(&self.seq);
                cache.clear();
                for _ in 0..=n {
                    cache.push(it.next().expect("infinite iterator")?);
                }
            }
            cache[n].clone()
        };
        let mut flat = Point::Fin(vec![]);
        for x in prefix {
            flat = flat.concat(x)?;
        }
        let mut rest = tc.eval(&flat)?;
        let mut out = Vec::with_capacity(prefix.len());
        for k in 0..=n {
            let (y, tail) = rest.split_at(self.seq.cod_at(k)?.len());
            out.push(y);
            rest = tail;
        }
        Ok(out)
    }

    /// The same function as a [`PrefixOracle`]; evaluation errors become
    /// empty outputs.
    pub fn into_oracle(self) -> PrefixOracle {
        let this = Arc::new(self);
        Arc::new(move |p: &[Point]| this.apply(p).unwrap_or_default())
    }
}
