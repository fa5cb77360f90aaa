//! Causal stream functions between finite alphabets and sequences over the
//! finite base determine each other: both round trips are checked on every
//! input prefix up to a fixed length.

use std::collections::HashMap;
use std::sync::Arc;

use crate::base::BaseTag;
use crate::caus::{delay_gate, StatefulSeq};
use crate::error::Result;
use crate::laws::trace::phased;
use crate::laws::{Evidence, Gen, Outcome, Runner};
use crate::obj::{Obj, Point};
use crate::oracle::{from_causal_function, to_causal_function, PrefixOracle};

/// Longest prefix checked.
pub const PREFIX_LEN: usize = 6;

/// Every word of length `1..=max` over `{0..a}`.
fn words(a: u32, max: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..max {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..a).map(move |c| {
                    let mut v = w.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn symbols(word: &[u32]) -> Vec<Point> {
    word.iter().map(|&c| Point::Fin(vec![c])).collect()
}

/// Compares two stream functions on every prefix.
fn agree(
    a: u32,
    left: &dyn Fn(&[Point]) -> Result<Vec<Point>>,
    right: &dyn Fn(&[Point]) -> Result<Vec<Point>>,
) -> Outcome {
    for w in words(a, PREFIX_LEN) {
        let prefix = symbols(&w);
        let (l, r) = (left(&prefix)?, right(&prefix)?);
        if l != r {
            return Ok(Some(Evidence::Prefix {
                prefix,
                left: l,
                right: r,
            }));
        }
    }
    Ok(None)
}

/// A causal function given by an arbitrary table on prefixes.
fn random_oracle(g: &mut Gen, a: u32, b: u32) -> PrefixOracle {
    let table: HashMap<Vec<u32>, u32> = words(a, PREFIX_LEN)
        .into_iter()
        .map(|w| (w, g.below(b as usize) as u32))
        .collect();
    Arc::new(move |prefix: &[Point]| {
        let mut key = Vec::with_capacity(prefix.len());
        prefix
            .iter()
            .map(|x| {
                key.push(x.as_fin().and_then(|v| v.first().copied()).unwrap_or(0));
                Point::Fin(vec![table.get(&key).copied().unwrap_or(0)])
            })
            .collect()
    })
}

pub(crate) fn run(r: &mut Runner, g: &mut Gen) -> Result<()> {
    for case in 0..r.cases() {
        for a in 1..=3u32 {
            for b in 1..=3u32 {
                let (oa, ob) = (Obj::fin(a), Obj::fin(b));

                // sequence -> function -> sequence -> function
                let outcome = (|| -> Outcome {
                    let s = g.causal(&oa, &ob)?;
                    let f = to_causal_function(&s)?;
                    let back = to_causal_function(&from_causal_function(
                        to_causal_function(&s)?.into_oracle(),
                        &oa,
                        &ob,
                    )?)?;
                    agree(a, &|p| f.apply(p), &|p| back.apply(p))
                })();
                r.holds("sequence-roundtrip", case, outcome);

                // function -> sequence -> function
                let outcome = (|| -> Outcome {
                    let f = random_oracle(g, a, b);
                    let s = from_causal_function(f.clone(), &oa, &ob)?;
                    let back = to_causal_function(&s)?;
                    agree(a, &|p| Ok(f(p)), &|p| back.apply(p))
                })();
                r.holds("function-roundtrip", case, outcome);
            }
        }

        // the delay gate is the causal function that shifts by one tick
        let outcome = (|| -> Outcome {
            let a = 1 + g.below(3) as u32;
            let x = Obj::fin(a);
            let i = g.constant(&x)?;
            let first = i.eval(&BaseTag::Fin.empty_point())?;
            let gate: StatefulSeq = delay_gate(&phased(std::slice::from_ref(&x)), &i)?;
            let f = to_causal_function(&gate)?;
            let shift = move |p: &[Point]| -> Result<Vec<Point>> {
                Ok(std::iter::once(first.clone())
                    .chain(p.iter().cloned())
                    .take(p.len())
                    .collect())
            };
            agree(a, &|p| f.apply(p), &shift)
        })();
        r.holds("delay-is-shift", case, outcome);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_cover_every_length() {
        let ws = words(3, 3);
        assert_eq!(ws.len(), 3 + 9 + 27);
        assert!(ws.iter().any(|w| w == &vec![2, 0, 1]));
    }
}
