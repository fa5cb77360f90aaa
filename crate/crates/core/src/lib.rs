pub mod base;
pub mod caus;
pub mod dsl;
pub mod error;
pub mod laws;
pub mod obj;
pub mod oracle;
pub mod rational;
pub mod rnn;
pub mod seq;
pub mod square;
pub mod stream;

pub use base::{BaseMorphism, BaseTag, EqualityMode, Source, Structural};
pub use error::{Error, Result};
pub use obj::{Obj, Point, Slot};
pub use rational::Rational;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/streams.md")]
    mod streams {}
    #[doc = include_str!("../../../book/src/feedback.md")]
    mod feedback {}
    #[doc = include_str!("../../../book/src/derivatives.md")]
    mod derivatives {}
    #[doc = include_str!("../../../book/src/language.md")]
    mod language {}
    #[doc = include_str!("../../../book/src/checking.md")]
    mod checking {}
    #[doc = include_str!("../../../book/src/rnn.md")]
    mod rnn {}
}
