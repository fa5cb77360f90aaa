use crate::caus::StatefulSeq;
use crate::error::{Error, Result};
use crate::obj::Point;

/// Feeds `inputs` through the recurrence tick by tick, threading the state
/// explicitly instead of building truncations.
pub fn run(s: &StatefulSeq, inputs: &[Point]) -> Result<Vec<Point>> {
    let tag = s.tag();
    let mut state = s.init().eval(&tag.empty_point())?;
    let mut outputs = Vec::with_capacity(inputs.len());
    for (k, x) in inputs.iter().enumerate() {
        let cell = s.cell(k)?;
        x.check_against(cell.dom()).map_err(|e| match e {
            Error::ShapeMismatch(msg) => {
                Error::ShapeMismatch(format!("input at tick {}: {}", k, msg))
            }
            other => other,
        })?;
        let out = cell.underlying().eval(&state.concat(x)?)?;
        let (next, y) = out.split_at(cell.nxt().len());
        state = next;
        outputs.push(y);
    }
    Ok(outputs)
}
