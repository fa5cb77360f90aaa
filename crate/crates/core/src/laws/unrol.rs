//! Unrolling the sequence derivative agrees with differentiating the
//! unrolling, and on the smooth base with finite differences.

use crate::base::BaseTag;
use crate::caus::{self, seq_d, unroll, StatefulSeq};
use crate::error::Result;
use crate::laws::{Evidence, Gen, Outcome, Runner};
use crate::obj::Point;
use crate::oracle::{bptt_diff, to_f64, Differentiator, Route, FD_STEP};

const REL_TOL: f64 = 1e-4;
const ABS_FLOOR: f64 = 1e-7;

pub(crate) fn run(r: &mut Runner, g: &mut Gen) -> Result<()> {
    let (h, mode) = (r.horizon(), r.mode());
    for case in 0..r.cases() {
        let (x, y) = (g.obj(1), g.obj(1));
        let s = g.mealy(&x, &y)?;

        let outcome = (|| -> Outcome {
            let ds = seq_d(&s)?;
            for k in 0..=h {
                let lhs = unroll(&ds, k)?;
                let rhs = bptt_diff(&s, k)?;
                if let Some(input) = lhs.find_difference(&rhs, mode)? {
                    return Ok(Some(Evidence::Cell {
                        left: lhs.eval(&input)?,
                        right: rhs.eval(&input)?,
                        input,
                    }));
                }
            }
            Ok(None)
        })();
        r.holds("unroll-vs-bptt", case, outcome);

        if g.base() == BaseTag::Smooth {
            for _ in 0..2 {
                let outcome = finite_differences(g, &s, h);
                r.holds("finite-differences", case, outcome);
            }
        }
    }
    Ok(())
}

/// Directional derivatives of every unrolling up to a random length,
/// against central differences of the outputs.
fn finite_differences(g: &mut Gen, s: &StatefulSeq, h: usize) -> Outcome {
    let n = 1 + g.below(h.max(1));
    let inputs = g.inputs(s, n)?;
    let tangents = g.inputs(s, n)?;
    let got = Differentiator::new(s)?.directional(&inputs, &tangents, Route::SeqD)?;
    let shifted = |sign: f64| -> Result<Vec<Point>> {
        inputs
            .iter()
            .zip(&tangents)
            .map(|(x, t)| {
                let (x, t) = (to_f64(x)?, to_f64(t)?);
                Ok(Point::Real(
                    x.iter()
                        .zip(&t)
                        .map(|(a, b)| a + sign * FD_STEP * b)
                        .collect(),
                ))
            })
            .collect()
    };
    let (up, down) = (
        caus::run(s, &shifted(1.0)?)?,
        caus::run(s, &shifted(-1.0)?)?,
    );
    for k in 0..n {
        let (a, b, d) = (to_f64(&up[k])?, to_f64(&down[k])?, to_f64(&got[k])?);
        for i in 0..d.len() {
            let fd = (a[i] - b[i]) / (2.0 * FD_STEP);
            if (fd - d[i]).abs() > (REL_TOL * fd.abs().max(d[i].abs())).max(ABS_FLOOR) {
                return Ok(Some(Evidence::Numeric {
                    what: format!("tick {} output {}", k, i),
                    left: d[i],
                    right: fd,
                    tolerance: REL_TOL,
                }));
            }
        }
    }
    Ok(None)
}
