use std::fmt;

use serde::{Deserialize, Serialize};

use super::universal::{default_names, SemifieldElement, Universal};
use super::{AmbientCoefficients, Semifield, SemifieldTag};
use crate::error::{Error, Result};

/// A Laurent monomial `∏ y_i^{a_i}`, stored by its exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TropicalMonomial {
    exponents: Vec<i64>,
}

impl TropicalMonomial {
    pub fn new(exponents: Vec<i64>) -> Self {
        TropicalMonomial { exponents }
    }

    pub fn one(n: usize) -> Self {
        TropicalMonomial { exponents: vec![0; n] }
    }

    pub fn generator(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        TropicalMonomial { exponents: e }
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    pub fn into_exponents(self) -> Vec<i64> {
        self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }
}

impl fmt::Display for TropicalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names("y", self.len());
        let factors: Vec<String> = self
            .exponents
            .iter()
            .zip(&names)
            .filter(|(a, _)| **a != 0)
            .map(|(&a, y)| if a == 1 { y.clone() } else { format!("{y}^{a}") })
            .collect();
        if factors.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&factors.join("*"))
        }
    }
}

impl fmt::Debug for TropicalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exponents)
    }
}

/// The tropical semifield Trop(y₁, …, yₙ): Laurent monomials with
/// `∏ y^a ⊕ ∏ y^b = ∏ y^{min(a, b)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tropical {
    n: usize,
}

impl Tropical {
    pub fn new(n: usize) -> Self {
        Tropical { n }
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    fn check(&self, a: &TropicalMonomial) -> Result<()> {
        if a.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: a.len() });
        }
        Ok(())
    }

    fn zip(&self, a: &TropicalMonomial, b: &TropicalMonomial, f: impl Fn(i64, i64) -> Option<i64>) -> Result<TropicalMonomial> {
        self.check(a)?;
        self.check(b)?;
        let e = a
            .exponents
            .iter()
            .zip(&b.exponents)
            .map(|(&x, &y)| f(x, y).ok_or(Error::IntegerOverflow))
            .collect::<Result<_>>()?;
        Ok(TropicalMonomial { exponents: e })
    }
}

impl Semifield for Tropical {
    type Elem = TropicalMonomial;

    fn tag(&self) -> SemifieldTag {
        SemifieldTag::Tropical(self.n)
    }

    fn one(&self) -> TropicalMonomial {
        TropicalMonomial::one(self.n)
    }

    fn mul(&self, a: &TropicalMonomial, b: &TropicalMonomial) -> Result<TropicalMonomial> {
        self.zip(a, b, i64::checked_add)
    }

    fn inv(&self, a: &TropicalMonomial) -> Result<TropicalMonomial> {
        self.check(a)?;
        let e = a.exponents.iter().map(|x| x.checked_neg().ok_or(Error::IntegerOverflow)).collect::<Result<_>>()?;
        Ok(TropicalMonomial { exponents: e })
    }

    fn add(&self, a: &TropicalMonomial, b: &TropicalMonomial) -> Result<TropicalMonomial> {
        self.zip(a, b, |x, y| Some(x.min(y)))
    }

    fn equal(&self, a: &TropicalMonomial, b: &TropicalMonomial) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(a == b)
    }

    fn pow(&self, a: &TropicalMonomial, e: i64) -> Result<TropicalMonomial> {
        self.check(a)?;
        let v = a.exponents.iter().map(|x| x.checked_mul(e).ok_or(Error::IntegerOverflow)).collect::<Result<_>>()?;
        Ok(TropicalMonomial { exponents: v })
    }
}

impl AmbientCoefficients for Tropical {
    fn ambient_vars(&self, n: usize) -> usize {
        2 * n
    }

    fn embed(&self, e: &TropicalMonomial, ambient: &Universal) -> Result<SemifieldElement> {
        self.check(e)?;
        SemifieldElement::monomial(&e.exponents).embed(ambient.n_vars(), ambient.n_vars() - self.n)
    }

    fn initial(&self, n: usize) -> Result<Vec<TropicalMonomial>> {
        if n != self.n {
            return Err(Error::DimensionMismatch { expected: n, found: self.n });
        }
        Ok((0..n).map(|i| TropicalMonomial::generator(n, i)).collect())
    }
}
