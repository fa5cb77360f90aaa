use thiserror::Error;

use crate::base::BaseTag;
use crate::obj::Obj;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("boundary mismatch in {context}: expected {expected}, found {found}")]
    BoundaryMismatch {
        context: &'static str,
        expected: Obj,
        found: Obj,
    },
    #[error("cannot combine morphisms of the {left} and {right} bases")]
    BaseMismatch { left: BaseTag, right: BaseTag },
    #[error("unsupported structure: {0}")]
    UnsupportedStructure(String),
    #[error("the {0} base has no differential operator")]
    NoDifferential(BaseTag),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{prefix} is not a factor prefix of {whole}")]
    PrefixMismatch { prefix: Obj, whole: Obj },
    #[error("traced codomain at tick {tick} does not start with the next trace object {expected}")]
    TailMismatch { tick: usize, expected: Obj },
    #[error("alphabet must be non-empty")]
    AlphabetEmpty,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_obj(context: &'static str, expected: &Obj, found: &Obj) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::BoundaryMismatch {
            context,
            expected: expected.clone(),
            found: found.clone(),
        })
    }
}
