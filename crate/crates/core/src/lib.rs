pub mod error;
pub mod algebra;
pub mod bounds;
pub mod exact;
pub mod measures;
pub mod numeric;
pub mod representations;

pub use error::{Error, Result};

/// The guide under `book/`, compiled so its snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/measures.md")]
    mod measures {}
    #[doc = include_str!("../../../book/src/discriminants.md")]
    mod discriminants {}
    #[doc = include_str!("../../../book/src/representations.md")]
    mod representations {}
    #[doc = include_str!("../../../book/src/suites.md")]
    mod suites {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
