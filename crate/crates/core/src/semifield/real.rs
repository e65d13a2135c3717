use super::universal::{SemifieldElement, Universal};
use super::{AmbientCoefficients, Semifield, SemifieldTag};
use crate::error::{Error, Result};

/// ℝ₊ with ordinary multiplication and addition, in `f64`.
///
/// Every operation checks that the result is positive and finite.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PositiveReals;

impl PositiveReals {
    pub fn check(&self, v: f64) -> Result<f64> {
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain { function: "R+", value: v })
        }
    }
}

impl Semifield for PositiveReals {
    type Elem = f64;

    fn tag(&self) -> SemifieldTag {
        SemifieldTag::PositiveReal
    }

    fn one(&self) -> f64 {
        1.0
    }

    fn mul(&self, a: &f64, b: &f64) -> Result<f64> {
        self.check(a * b)
    }

    fn inv(&self, a: &f64) -> Result<f64> {
        self.check(1.0 / self.check(*a)?)
    }

    fn add(&self, a: &f64, b: &f64) -> Result<f64> {
        self.check(a + b)
    }

    fn equal(&self, a: &f64, b: &f64) -> Result<bool> {
        Ok(a == b)
    }

    fn pow(&self, a: &f64, e: i64) -> Result<f64> {
        let e = i32::try_from(e).map_err(|_| Error::ResourceLimit(format!("exponent {e}")))?;
        self.check(a.powi(e))
    }
}

/// The unique element of the trivial semifield.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct TrivialElem;

/// The trivial semifield 𝟏 = {1}.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Trivial;

impl Semifield for Trivial {
    type Elem = TrivialElem;

    fn tag(&self) -> SemifieldTag {
        SemifieldTag::Trivial
    }

    fn one(&self) -> TrivialElem {
        TrivialElem
    }

    fn mul(&self, _: &TrivialElem, _: &TrivialElem) -> Result<TrivialElem> {
        Ok(TrivialElem)
    }

    fn inv(&self, _: &TrivialElem) -> Result<TrivialElem> {
        Ok(TrivialElem)
    }

    fn add(&self, _: &TrivialElem, _: &TrivialElem) -> Result<TrivialElem> {
        Ok(TrivialElem)
    }

    fn equal(&self, _: &TrivialElem, _: &TrivialElem) -> Result<bool> {
        Ok(true)
    }

    fn pow(&self, _: &TrivialElem, _: i64) -> Result<TrivialElem> {
        Ok(TrivialElem)
    }
}

impl AmbientCoefficients for Trivial {
    fn ambient_vars(&self, n: usize) -> usize {
        n
    }

    fn embed(&self, _: &TrivialElem, ambient: &Universal) -> Result<SemifieldElement> {
        Ok(SemifieldElement::one(ambient.n_vars()))
    }

    fn initial(&self, n: usize) -> Result<Vec<TrivialElem>> {
        Ok(vec![TrivialElem; n])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positivity_is_enforced() {
        let r = PositiveReals;
        assert_eq!(r.add(&1.5, &2.0).unwrap(), 3.5);
        assert!(r.inv(&0.0).is_err());
        assert!(r.mul(&1e300, &1e300).is_err());
        assert_eq!(r.pow(&2.0, -2).unwrap(), 0.25);
    }
}
