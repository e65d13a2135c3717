//! Semifields: the universal semifield ℚ₊(y), the tropical semifield
//! Trop(y), the positive reals ℝ₊ and the trivial semifield 𝟏.
//!
//! A semifield here is a *context* value implementing [`Semifield`]; its
//! elements are plain data. Contexts carry the ambient rank (and, for ℚ₊(y),
//! the term limit) so that arithmetic never mixes elements of different
//! semifields.

mod poly;
mod real;
mod tropical;
mod universal;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub use real::{PositiveReals, Trivial, TrivialElem};
pub use tropical::{Tropical, TropicalMonomial};
pub use universal::{Polynomial, SemifieldElement, Universal, DEFAULT_TERM_LIMIT};
pub(crate) use universal::default_names;

/// Which semifield a context (and its elements) belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SemifieldTag {
    Universal(usize),
    Tropical(usize),
    PositiveReal,
    Trivial,
}

impl fmt::Display for SemifieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemifieldTag::Universal(n) => write!(f, "Q+(y1..y{n})"),
            SemifieldTag::Tropical(n) => write!(f, "Trop(y1..y{n})"),
            SemifieldTag::PositiveReal => f.write_str("R+"),
            SemifieldTag::Trivial => f.write_str("1"),
        }
    }
}

/// An abelian multiplicative group with a commutative, associative addition
/// `⊕` over which multiplication distributes.
pub trait Semifield: Clone + fmt::Debug {
    type Elem: Clone + fmt::Debug;

    fn tag(&self) -> SemifieldTag;

    fn one(&self) -> Self::Elem;

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// The semifield addition `a ⊕ b`.
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> Result<bool>;

    fn pow(&self, a: &Self::Elem, e: i64) -> Result<Self::Elem> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut acc = self.one();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base)?;
        }
        Ok(acc)
    }
}

/// Semifields whose elements can be written as fractions in the ambient
/// field of a seed: n x-variables followed (when non-trivial) by n
/// coefficient variables.
pub trait AmbientCoefficients: Semifield {
    /// Number of variables of the ambient field for a seed of rank `n`.
    fn ambient_vars(&self, n: usize) -> usize;

    /// Writes `e` as an element of `ambient`.
    fn embed(&self, e: &Self::Elem, ambient: &Universal) -> Result<SemifieldElement>;

    /// The initial coefficient tuple `y_1, …, y_n` used by fresh seeds.
    fn initial(&self, n: usize) -> Result<Vec<Self::Elem>>;
}
