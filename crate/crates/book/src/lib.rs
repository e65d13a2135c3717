//! The guide under `book/`, compiled so that `cargo test --doc` runs every
//! snippet against the current library. One module per chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/semifields.md")]
pub mod semifields {}
#[doc = include_str!("../../../book/src/seeds.md")]
pub mod seeds {}
#[doc = include_str!("../../../book/src/tropical.md")]
pub mod tropical {}
#[doc = include_str!("../../../book/src/canonical.md")]
pub mod canonical {}
#[doc = include_str!("../../../book/src/dilogarithms.md")]
pub mod dilogarithms {}
#[doc = include_str!("../../../book/src/dirac.md")]
pub mod dirac {}
#[doc = include_str!("../../../book/src/periodicity.md")]
pub mod periodicity {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
