use crate::caus::StatefulSeq;
use crate::error::Result;
use crate::square::{squd, TwoCell};

/// `seqD(i, s) = (U squD(i^v), [squD s_k]) : X × X -> Y`.
///
/// The new initial state is `⟨0, i⟩`: the tangent register starts at zero,
/// the second register runs the original computation.
pub fn seq_d(s: &StatefulSeq) -> Result<StatefulSeq> {
    let init = squd(&TwoCell::lift_v(s.init()))?.underlying().clone();
    let cells = s.cells().map(squd)?;
    StatefulSeq::new(init, cells)
}
