use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_integer::Integer;
use num_traits::One;

use super::poly::{self, IntPoly};
use super::tropical::TropicalMonomial;
use super::{AmbientCoefficients, Semifield, SemifieldTag};
use crate::error::{Error, Result};

/// Default cap on the number of monomials in any intermediate polynomial.
pub const DEFAULT_TERM_LIMIT: usize = 1_000_000;

/// A nonzero polynomial with positive integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial(IntPoly);

impl Polynomial {
    fn from_int(p: IntPoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::Invariant("zero polynomial in a semifield element".into()));
        }
        if !p.all_positive() {
            return Err(Error::Invariant("non-positive coefficient in a semifield element".into()));
        }
        Ok(Polynomial(p))
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs. Zero
    /// coefficients are dropped; the result must be nonzero.
    pub fn from_terms(n_vars: usize, terms: &[(Vec<u32>, u64)]) -> Result<Self> {
        let mut p = IntPoly::zero(n_vars);
        for (e, c) in terms {
            if e.len() != n_vars {
                return Err(Error::DimensionMismatch { expected: n_vars, found: e.len() });
            }
            p = p.add(&IntPoly::monomial(e.clone(), BigInt::from(*c)));
        }
        Self::from_int(p)
    }

    pub fn n_vars(&self) -> usize {
        self.0.n_vars()
    }

    /// Number of monomials.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.0.is_monomial()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], BigUint)> {
        self.0.terms().map(|(e, c)| (e.as_slice(), c.magnitude().clone()))
    }

    pub fn evaluate(&self, point: &[f64]) -> f64 {
        self.0.eval_f64(point)
    }

    /// Renders in graded order (total degree ascending, then lexicographic
    /// with the first variable largest).
    pub fn render(&self, names: &[String]) -> String {
        let mut terms: Vec<(&[u32], BigUint)> = self.terms().collect();
        terms.sort_by(|(a, _), (b, _)| grlex_ascending(a, b));
        let parts: Vec<String> = terms
            .iter()
            .map(|(e, c)| {
                let mut factors = Vec::new();
                for (i, &k) in e.iter().enumerate() {
                    match k {
                        0 => {}
                        1 => factors.push(names[i].clone()),
                        _ => factors.push(format!("{}^{}", names[i], k)),
                    }
                }
                if factors.is_empty() {
                    c.to_string()
                } else if c.is_one() {
                    factors.join("*")
                } else {
                    format!("{}*{}", c, factors.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

fn grlex_ascending(a: &[u32], b: &[u32]) -> Ordering {
    let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
    da.cmp(&db).then_with(|| b.cmp(a))
}

pub(crate) fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&default_names("y", self.n_vars())))
    }
}

/// An element `num/den` of the universal semifield ℚ₊(y₁, …, yₙ).
///
/// Values are kept reduced: no common monomial factor, coprime contents,
/// and common polynomial factors removed whenever they can be found without
/// leaving the subtraction-free world. Equality ([`SemifieldElement::semifield_eq`])
/// never depends on the reduction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SemifieldElement {
    num: Polynomial,
    den: Polynomial,
}

impl SemifieldElement {
    pub fn one(n_vars: usize) -> Self {
        SemifieldElement { num: Polynomial(IntPoly::one(n_vars)), den: Polynomial(IntPoly::one(n_vars)) }
    }

    /// The generator `y_i` (0-based).
    pub fn generator(n_vars: usize, i: usize) -> Result<Self> {
        if i >= n_vars {
            return Err(Error::IndexOutOfRange { index: i, n: n_vars });
        }
        Ok(SemifieldElement { num: Polynomial(IntPoly::var(n_vars, i)), den: Polynomial(IntPoly::one(n_vars)) })
    }

    /// The Laurent monomial `∏ y_i^{a_i}`.
    pub fn monomial(exponents: &[i64]) -> Self {
        let pos: Vec<u32> = exponents.iter().map(|&a| a.max(0) as u32).collect();
        let neg: Vec<u32> = exponents.iter().map(|&a| (-a).max(0) as u32).collect();
        SemifieldElement {
            num: Polynomial(IntPoly::monomial(pos, BigInt::one())),
            den: Polynomial(IntPoly::monomial(neg, BigInt::one())),
        }
    }

    pub fn from_parts(num: Polynomial, den: Polynomial) -> Result<Self> {
        if num.n_vars() != den.n_vars() {
            return Err(Error::DimensionMismatch { expected: num.n_vars(), found: den.n_vars() });
        }
        canonicalize(num.0, den.0)
    }

    pub fn n_vars(&self) -> usize {
        self.num.n_vars()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Total number of monomials in numerator and denominator.
    pub fn size(&self) -> usize {
        self.num.len() + self.den.len()
    }

    fn check_dims(&self, rhs: &Self) -> Result<()> {
        if self.n_vars() != rhs.n_vars() {
            return Err(Error::DimensionMismatch { expected: self.n_vars(), found: rhs.n_vars() });
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.mul_limited(rhs, DEFAULT_TERM_LIMIT)
    }

    pub fn mul_limited(&self, rhs: &Self, limit: usize) -> Result<Self> {
        self.check_dims(rhs)?;
        if self.is_one() {
            return Ok(rhs.clone());
        }
        if rhs.is_one() {
            return Ok(self.clone());
        }
        // Cross-cancel first so the products stay small.
        let (a, d) = cancel(&self.num.0, &rhs.den.0);
        let (c, b) = cancel(&rhs.num.0, &self.den.0);
        let num = a.mul(&c, limit)?;
        let den = b.mul(&d, limit)?;
        canonicalize(num, den)
    }

    pub fn inv(&self) -> Self {
        SemifieldElement { num: self.den.clone(), den: self.num.clone() }
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self> {
        self.pow_limited(e, DEFAULT_TERM_LIMIT)
    }

    pub fn pow_limited(&self, e: i64, limit: usize) -> Result<Self> {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let k = u32::try_from(e.unsigned_abs()).map_err(|_| Error::ResourceLimit(format!("exponent {e}")))?;
        // Powers of a reduced fraction are reduced.
        Ok(SemifieldElement {
            num: Polynomial(base.num.0.pow(k, limit)?),
            den: Polynomial(base.den.0.pow(k, limit)?),
        })
    }

    /// The semifield sum, i.e. the ordinary sum of rational functions.
    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.add_limited(rhs, DEFAULT_TERM_LIMIT)
    }

    pub fn add_limited(&self, rhs: &Self, limit: usize) -> Result<Self> {
        self.check_dims(rhs)?;
        let (a, b, c, d) = (&self.num.0, &self.den.0, &rhs.num.0, &rhs.den.0);
        if b == d {
            return canonicalize(a.add(c), b.clone());
        }
        let g = poly::gcd(b, d).unwrap_or_else(|| IntPoly::one(a.n_vars()));
        let (bg, dg) = if g.is_one() {
            (b.clone(), d.clone())
        } else {
            (b.exact_div(&g).expect("gcd divides"), d.exact_div(&g).expect("gcd divides"))
        };
        let num = a.mul(&dg, limit)?.add(&c.mul(&bg, limit)?);
        let den = b.mul(&dg, limit)?;
        canonicalize(num, den)
    }

    /// Equality in the fraction field, by cross-multiplication.
    pub fn semifield_eq(&self, rhs: &Self) -> Result<bool> {
        self.check_dims(rhs)?;
        if self == rhs {
            return Ok(true);
        }
        let l = self.num.0.mul(&rhs.den.0, usize::MAX)?;
        let r = rhs.num.0.mul(&self.den.0, usize::MAX)?;
        Ok(l == r)
    }

    /// Image under the tropicalization map `y_i ↦ y_i`.
    pub fn tropicalize(&self) -> TropicalMonomial {
        let a = self.num.0.min_exponents();
        let b = self.den.0.min_exponents();
        TropicalMonomial::new(a.iter().zip(&b).map(|(&x, &y)| x as i64 - y as i64).collect())
    }

    /// Image under the evaluation homomorphism into ℝ₊.
    pub fn evaluate(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.n_vars() {
            return Err(Error::DimensionMismatch { expected: self.n_vars(), found: point.len() });
        }
        if let Some(&bad) = point.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
            return Err(Error::Domain { function: "evaluate", value: bad });
        }
        Ok(self.num.evaluate(point) / self.den.evaluate(point))
    }

    /// Moves into `m` variables, sending variable `i` to `offset + i`.
    pub fn embed(&self, m: usize, offset: usize) -> Result<Self> {
        if offset + self.n_vars() > m {
            return Err(Error::DimensionMismatch { expected: m, found: offset + self.n_vars() });
        }
        Ok(SemifieldElement {
            num: Polynomial(self.num.0.embed(m, offset)),
            den: Polynomial(self.den.0.embed(m, offset)),
        })
    }

    pub fn render(&self, names: &[String]) -> String {
        let num = self.num.render(names);
        if self.den.is_one() {
            return num;
        }
        let num = if self.num.len() > 1 { format!("({num})") } else { num };
        // a product in the denominator needs parentheses too
        let den = self.den.render(names);
        let den = if self.den.len() > 1 || den.contains('*') { format!("({den})") } else { den };
        format!("{num}/{den}")
    }
}

impl fmt::Display for SemifieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&default_names("y", self.n_vars())))
    }
}

impl fmt::Debug for SemifieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Removes the common factor of `a` and `b` when it can be found.
fn cancel(a: &IntPoly, b: &IntPoly) -> (IntPoly, IntPoly) {
    if a.is_one() || b.is_one() {
        return (a.clone(), b.clone());
    }
    match poly::gcd(a, b) {
        Some(g) if !g.is_one() => match (a.exact_div(&g), b.exact_div(&g)) {
            (Some(x), Some(y)) if x.all_positive() && y.all_positive() => (x, y),
            _ => (a.clone(), b.clone()),
        },
        _ => (a.clone(), b.clone()),
    }
}

fn canonicalize(num: IntPoly, den: IntPoly) -> Result<SemifieldElement> {
    if num.is_zero() || den.is_zero() {
        return Err(Error::Invariant("zero numerator or denominator".into()));
    }
    // (i) common monomial factor
    let (mn, md) = (num.min_exponents(), den.min_exponents());
    let common: Vec<u32> = mn.iter().zip(&md).map(|(a, b)| *a.min(b)).collect();
    let (mut num, mut den) = if common.iter().any(|&v| v > 0) {
        (num.shift_down(&common), den.shift_down(&common))
    } else {
        (num, den)
    };
    // (ii) integer content
    let g = num.content().gcd(&den.content());
    if !g.is_one() {
        num = num.div_scalar(&g);
        den = den.div_scalar(&g);
    }
    // (iii) polynomial common factor, falling back to plain exact division
    if !num.is_monomial() && !den.is_monomial() {
        let reduced = match poly::gcd(&num, &den) {
            Some(g) if !g.is_one() => num.exact_div(&g).zip(den.exact_div(&g)),
            Some(_) => None,
            None => {
                if let Some(q) = num.exact_div(&den) {
                    Some((q, IntPoly::one(num.n_vars())))
                } else {
                    den.exact_div(&num).map(|q| (IntPoly::one(num.n_vars()), q))
                }
            }
        };
        if let Some((a, b)) = reduced {
            if a.all_positive() && b.all_positive() {
                num = a;
                den = b;
            }
        }
    }
    if let Some((_, c)) = den.leading() {
        if c.sign() == BigSign::Minus {
            return Err(Error::Invariant("negative denominator".into()));
        }
    }
    Ok(SemifieldElement { num: Polynomial::from_int(num)?, den: Polynomial::from_int(den)? })
}

/// The universal semifield ℚ₊(y₁, …, yₙ) as an arithmetic context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universal {
    n: usize,
    term_limit: usize,
}

impl Universal {
    pub fn new(n: usize) -> Self {
        Universal { n, term_limit: DEFAULT_TERM_LIMIT }
    }

    pub fn with_term_limit(n: usize, term_limit: usize) -> Self {
        Universal { n, term_limit }
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn term_limit(&self) -> usize {
        self.term_limit
    }

    pub fn generator(&self, i: usize) -> Result<SemifieldElement> {
        SemifieldElement::generator(self.n, i)
    }

    fn check(&self, a: &SemifieldElement) -> Result<()> {
        if a.n_vars() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: a.n_vars() });
        }
        Ok(())
    }

    fn check_size(&self, a: SemifieldElement) -> Result<SemifieldElement> {
        if a.num.len().max(a.den.len()) > self.term_limit {
            return Err(Error::TermLimit { limit: self.term_limit });
        }
        Ok(a)
    }
}

impl Semifield for Universal {
    type Elem = SemifieldElement;

    fn tag(&self) -> SemifieldTag {
        SemifieldTag::Universal(self.n)
    }

    fn one(&self) -> SemifieldElement {
        SemifieldElement::one(self.n)
    }

    fn mul(&self, a: &SemifieldElement, b: &SemifieldElement) -> Result<SemifieldElement> {
        self.check(a)?;
        self.check_size(a.mul_limited(b, self.term_limit)?)
    }

    fn inv(&self, a: &SemifieldElement) -> Result<SemifieldElement> {
        self.check(a)?;
        Ok(a.inv())
    }

    fn add(&self, a: &SemifieldElement, b: &SemifieldElement) -> Result<SemifieldElement> {
        self.check(a)?;
        self.check_size(a.add_limited(b, self.term_limit)?)
    }

    fn equal(&self, a: &SemifieldElement, b: &SemifieldElement) -> Result<bool> {
        self.check(a)?;
        a.semifield_eq(b)
    }

    fn pow(&self, a: &SemifieldElement, e: i64) -> Result<SemifieldElement> {
        self.check(a)?;
        self.check_size(a.pow_limited(e, self.term_limit)?)
    }
}

impl AmbientCoefficients for Universal {
    fn ambient_vars(&self, n: usize) -> usize {
        2 * n
    }

    fn embed(&self, e: &SemifieldElement, ambient: &Universal) -> Result<SemifieldElement> {
        self.check(e)?;
        e.embed(ambient.n_vars(), ambient.n_vars() - self.n)
    }

    fn initial(&self, n: usize) -> Result<Vec<SemifieldElement>> {
        if n != self.n {
            return Err(Error::DimensionMismatch { expected: n, found: self.n });
        }
        (0..n).map(|i| self.generator(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y(n: usize, i: usize) -> SemifieldElement {
        SemifieldElement::generator(n, i).unwrap()
    }

    fn one(n: usize) -> SemifieldElement {
        SemifieldElement::one(n)
    }

    #[test]
    fn addition_examples() {
        let s = one(2).add(&y(2, 0)).unwrap();
        assert_eq!(s.to_string(), "1 + y1");

        // y1/(1+y2) + y1 y2/(1+y2) = y1
        let d = one(2).add(&y(2, 1)).unwrap();
        let a = y(2, 0).mul(&d.inv()).unwrap();
        let b = y(2, 0).mul(&y(2, 1)).unwrap().mul(&d.inv()).unwrap();
        let sum = a.add(&b).unwrap();
        assert_eq!(sum, y(2, 0));
        assert!(sum.denominator().is_one());
    }

    #[test]
    fn multiplication_and_inverse() {
        let d = one(2).add(&y(2, 1)).unwrap();
        let a = y(2, 0).mul(&d.inv()).unwrap();
        assert_eq!(a.inv().to_string(), "(1 + y2)/y1");
        assert_eq!(y(2, 0).mul(&y(2, 1)).unwrap().to_string(), "y1*y2");
        assert!(a.mul(&a.inv()).unwrap().is_one());
    }

    #[test]
    fn equality_ignores_representation() {
        let f = one(2).add(&y(2, 0)).unwrap();
        // Build y1 (1+y1) / (1+y1) without reduction.
        let raw = SemifieldElement {
            num: Polynomial(y(2, 0).num.0.mul(&f.num.0, usize::MAX).unwrap()),
            den: f.num.clone(),
        };
        assert!(raw.semifield_eq(&y(2, 0)).unwrap());
        assert!(!y(2, 0).semifield_eq(&y(2, 1)).unwrap());
    }

    #[test]
    fn tropicalize_examples() {
        let f1 = one(2).add(&y(2, 0)).unwrap();
        let f2 = one(2).add(&y(2, 1)).unwrap();
        let a = y(2, 0).mul(&f2).unwrap().mul(&f1.inv()).unwrap();
        assert_eq!(a.tropicalize().exponents(), &[1, 0]);
        assert_eq!(y(2, 1).tropicalize().exponents(), &[0, 1]);
        assert_eq!(y(2, 0).inv().tropicalize().exponents(), &[-1, 0]);
    }

    #[test]
    fn evaluation_examples() {
        let f = one(1).add(&y(1, 0)).unwrap();
        let a = y(1, 0).mul(&f.inv()).unwrap();
        assert_eq!(a.evaluate(&[1.0]).unwrap(), 0.5);
        assert_eq!(f.evaluate(&[3.0]).unwrap(), 4.0);
        assert!(matches!(a.evaluate(&[0.0]), Err(Error::Domain { .. })));
        assert!(matches!(a.evaluate(&[1.0, 2.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(y(2, 0).add(&y(3, 0)), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(y(2, 0).mul(&y(3, 0)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn reduction_keeps_positive_coefficients() {
        // (1 + y^3)/(1 + y) must not reduce to 1 - y + y^2.
        let y1 = y(1, 0);
        let num = one(1).add(&y1.pow(3).unwrap()).unwrap();
        let den = one(1).add(&y1).unwrap();
        let q = num.mul(&den.inv()).unwrap();
        assert!(q.numerator().terms().all(|(_, c)| c > BigUint::from(0u32)));
        assert!(q.mul(&den).unwrap().semifield_eq(&num).unwrap());
    }

    #[test]
    fn render_order_is_graded() {
        let p = Polynomial::from_terms(2, &[(vec![1, 1], 1), (vec![0, 1], 2), (vec![1, 0], 1), (vec![0, 0], 1)]).unwrap();
        assert_eq!(p.render(&default_names("y", 2)), "1 + y1 + 2*y2 + y1*y2");
    }

    #[test]
    fn render_parenthesizes_products() {
        let one_plus = Polynomial::from_terms(2, &[(vec![0, 0], 1), (vec![1, 0], 1)]).unwrap();
        let e = SemifieldElement::from_parts(one_plus, Polynomial::from_terms(2, &[(vec![1, 1], 1)]).unwrap()).unwrap();
        assert_eq!(e.to_string(), "(1 + y1)/(y1*y2)");
        assert_eq!(SemifieldElement::monomial(&[1, -2]).to_string(), "y1/y2^2");
    }
}
