//! Seeds `(B, x, y)` and their mutations.
//!
//! The y-mutation is generic over any [`Semifield`]; the same code drives the
//! symbolic ℚ₊(y) engine, the tropical c-vector recursion and the ℝ₊
//! evaluations used by the dilogarithm checks.
//!
//! x-variables live in a concrete ambient field: fractions in `x₁…xₙ`
//! followed by `y₁…yₙ` (only `x₁…xₙ` for trivial coefficients). Because the
//! ⊕ of ℚ₊(y) is ordinary addition, this field contains everything the
//! mutation formulas produce.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{positive_part, ExchangeMatrix, Sign};
use crate::semifield::default_names;
use crate::semifield::{AmbientCoefficients, Semifield, SemifieldElement, Trivial, Universal};

fn check_index(k: usize, n: usize) -> Result<()> {
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    Ok(())
}

/// `1 ⊕ y^ε`.
fn one_plus<S: Semifield>(sf: &S, y: &S::Elem, eps: Sign) -> Result<S::Elem> {
    let t = sf.pow(y, eps.value())?;
    sf.add(&sf.one(), &t)
}

/// The y-mutation at `k` (0-based) with sign `eps`.
pub fn mutate_y<S: Semifield>(sf: &S, b: &ExchangeMatrix, y: &[S::Elem], k: usize, eps: Sign) -> Result<Vec<S::Elem>> {
    let r = rho_y(sf, b, y, k, eps)?;
    tau_y(sf, b, &r, k, eps)
}

/// Nontropical part on y: `ỹ_i = y_i (1 ⊕ y_k^ε)^{−b_ki}`.
pub fn rho_y<S: Semifield>(sf: &S, b: &ExchangeMatrix, y: &[S::Elem], k: usize, eps: Sign) -> Result<Vec<S::Elem>> {
    let n = b.n();
    if y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: y.len() });
    }
    check_index(k, n)?;
    let f = one_plus(sf, &y[k], eps)?;
    (0..n)
        .map(|i| {
            let bki = b.get(k, i);
            if bki == 0 {
                Ok(y[i].clone())
            } else {
                sf.mul(&y[i], &sf.pow(&f, -bki)?)
            }
        })
        .collect()
}

/// Tropical part on y: `y'_k = y_k^{−1}`, `y'_i = y_i y_k^{[ε b_ki]₊}`.
pub fn tau_y<S: Semifield>(sf: &S, b: &ExchangeMatrix, y: &[S::Elem], k: usize, eps: Sign) -> Result<Vec<S::Elem>> {
    let n = b.n();
    if y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: y.len() });
    }
    check_index(k, n)?;
    (0..n)
        .map(|i| {
            if i == k {
                return sf.inv(&y[k]);
            }
            let e = positive_part(eps.value() * b.get(k, i));
            if e == 0 {
                Ok(y[i].clone())
            } else {
                sf.mul(&y[i], &sf.pow(&y[k], e)?)
            }
        })
        .collect()
}

/// A seed with coefficients in the semifield `S`.
#[derive(Clone, Debug)]
pub struct Seed<S: AmbientCoefficients> {
    b: ExchangeMatrix,
    x: Vec<SemifieldElement>,
    y: Vec<S::Elem>,
    coefficients: S,
    ambient: Universal,
}

impl Seed<Universal> {
    /// The initial seed with coefficients in ℚ₊(y₁…yₙ).
    pub fn universal(b: ExchangeMatrix) -> Result<Self> {
        let n = b.n();
        Seed::initial(b, Universal::new(n))
    }
}

impl Seed<Trivial> {
    pub fn trivial(b: ExchangeMatrix) -> Result<Self> {
        Seed::initial(b, Trivial)
    }
}

impl<S: AmbientCoefficients> Seed<S> {
    /// The initial seed over `coefficients`: generators `x₁…xₙ` and the
    /// semifield's initial coefficients.
    pub fn initial(b: ExchangeMatrix, coefficients: S) -> Result<Self> {
        Self::initial_with_limit(b, coefficients, crate::semifield::DEFAULT_TERM_LIMIT)
    }

    /// As [`Seed::initial`], capping the size of ambient-field polynomials.
    pub fn initial_with_limit(b: ExchangeMatrix, coefficients: S, term_limit: usize) -> Result<Self> {
        let n = b.n();
        let ambient = Universal::with_term_limit(coefficients.ambient_vars(n), term_limit);
        let x = (0..n).map(|i| ambient.generator(i)).collect::<Result<_>>()?;
        let y = coefficients.initial(n)?;
        Ok(Seed { b, x, y, coefficients, ambient })
    }

    /// Assembles a seed from parts; `x` must live in the ambient field.
    pub fn from_parts(b: ExchangeMatrix, x: Vec<SemifieldElement>, y: Vec<S::Elem>, coefficients: S) -> Result<Self> {
        let n = b.n();
        let ambient = Universal::new(coefficients.ambient_vars(n));
        if x.len() != n || y.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len().min(y.len()) });
        }
        if let Some(bad) = x.iter().find(|e| e.n_vars() != ambient.n_vars()) {
            return Err(Error::DimensionMismatch { expected: ambient.n_vars(), found: bad.n_vars() });
        }
        Ok(Seed { b, x, y, coefficients, ambient })
    }

    pub fn n(&self) -> usize {
        self.b.n()
    }

    pub fn b(&self) -> &ExchangeMatrix {
        &self.b
    }

    pub fn x(&self) -> &[SemifieldElement] {
        &self.x
    }

    pub fn y(&self) -> &[S::Elem] {
        &self.y
    }

    pub fn coefficients(&self) -> &S {
        &self.coefficients
    }

    pub fn ambient(&self) -> &Universal {
        &self.ambient
    }

    /// `ŷ_i = y_i ∏_j x_j^{b_ji}` in the ambient field.
    pub fn yhat(&self) -> Result<Vec<SemifieldElement>> {
        (0..self.n()).map(|i| self.yhat_at(i)).collect()
    }

    fn yhat_at(&self, i: usize) -> Result<SemifieldElement> {
        let mut acc = self.coefficients.embed(&self.y[i], &self.ambient)?;
        for j in 0..self.n() {
            let e = self.b.get(j, i);
            if e != 0 {
                acc = self.ambient.mul(&acc, &self.ambient.pow(&self.x[j], e)?)?;
            }
        }
        Ok(acc)
    }

    /// `(1 + ŷ_k^ε) / (1 ⊕ y_k^ε)` in the ambient field.
    fn exchange_ratio(&self, k: usize, eps: Sign) -> Result<SemifieldElement> {
        let amb = &self.ambient;
        let num = one_plus(amb, &self.yhat_at(k)?, eps)?;
        let den = self.coefficients.embed(&one_plus(&self.coefficients, &self.y[k], eps)?, amb)?;
        amb.mul(&num, &amb.inv(&den)?)
    }

    /// The mutation `μ_k` computed with sign `eps`; the result does not
    /// depend on the sign.
    pub fn mutate(&self, k: usize, eps: Sign) -> Result<Self> {
        self.rho(k, eps)?.tau(k, eps, &self.b)
    }

    /// The nontropical part `ρ`: B unchanged, `x̃_k = x_k · ratio⁻¹`,
    /// `ỹ_i = y_i (1 ⊕ y_k^ε)^{−b_ki}`.
    pub fn rho(&self, k: usize, eps: Sign) -> Result<Self> {
        check_index(k, self.n())?;
        let ratio = self.exchange_ratio(k, eps)?;
        let mut x = self.x.clone();
        x[k] = self.ambient.mul(&x[k], &self.ambient.inv(&ratio)?)?;
        let y = rho_y(&self.coefficients, &self.b, &self.y, k, eps)?;
        Ok(Seed { b: self.b.clone(), x, y, coefficients: self.coefficients.clone(), ambient: self.ambient.clone() })
    }

    /// The tropical part `τ` relative to this seed's own matrix.
    pub fn tau_seed(&self, k: usize, eps: Sign) -> Result<Self> {
        self.tau(k, eps, &self.b)
    }

    fn tau(&self, k: usize, eps: Sign, b: &ExchangeMatrix) -> Result<Self> {
        check_index(k, self.n())?;
        let amb = &self.ambient;
        let mut xk = amb.inv(&self.x[k])?;
        for j in 0..self.n() {
            let e = positive_part(-eps.value() * b.get(j, k));
            if e != 0 {
                xk = amb.mul(&xk, &amb.pow(&self.x[j], e)?)?;
            }
        }
        let mut x = self.x.clone();
        x[k] = xk;
        let y = tau_y(&self.coefficients, b, &self.y, k, eps)?;
        Ok(Seed { b: b.mutate(k, eps)?, x, y, coefficients: self.coefficients.clone(), ambient: amb.clone() })
    }

    /// Mutates along a 0-based sequence with `eps` at every step.
    pub fn mutate_sequence(&self, seq: &[usize], eps: Sign) -> Result<Vec<Self>> {
        let mut out = vec![self.clone()];
        for &k in seq {
            let next = out.last().expect("nonempty").mutate(k, eps)?;
            out.push(next);
        }
        Ok(out)
    }

    /// Exact equality of `B`, `x` and `y`.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        if self.b != other.b {
            return Ok(false);
        }
        for (a, b) in self.x.iter().zip(&other.x) {
            if !a.semifield_eq(b)? {
                return Ok(false);
            }
        }
        for (a, b) in self.y.iter().zip(&other.y) {
            if !self.coefficients.equal(a, b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Variable names of the ambient field.
    pub fn default_labels(&self) -> Vec<String> {
        let n = self.n();
        let mut names = default_names("x", n);
        if self.ambient.n_vars() > n {
            names.extend(default_names("y", n));
        }
        names
    }

    /// A printable snapshot; `labels` overrides the ambient variable names.
    pub fn render(&self, labels: Option<&[String]>) -> Result<SeedView> {
        let defaults = self.default_labels();
        let names = match labels {
            Some(l) if l.len() == defaults.len() => l.to_vec(),
            Some(l) => return Err(Error::LengthMismatch { expected: defaults.len(), found: l.len() }),
            None => defaults,
        };
        let y = self
            .y
            .iter()
            .map(|e| Ok(self.coefficients.embed(e, &self.ambient)?.render(&names)))
            .collect::<Result<_>>()?;
        Ok(SeedView { b: self.b.rows(), x: self.x.iter().map(|e| e.render(&names)).collect(), y })
    }
}

/// A rendered seed, serialized deterministically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedView {
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
    pub x: Vec<String>,
    pub y: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientKind {
    Universal,
    Trivial,
}

/// JSON description of an initial seed.
///
/// `labels`, when given, names the ambient variables in order
/// (`x₁…xₙ`, then `y₁…yₙ` for universal coefficients).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSpec {
    #[serde(rename = "B")]
    pub b: ExchangeMatrix,
    #[serde(default = "default_kind")]
    pub coefficients: CoefficientKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

fn default_kind() -> CoefficientKind {
    CoefficientKind::Universal
}

/// A seed whose coefficient semifield is chosen at run time.
#[derive(Clone, Debug)]
pub enum AnySeed {
    Universal(Seed<Universal>),
    Trivial(Seed<Trivial>),
}

impl AnySeed {
    pub fn from_spec(spec: &SeedSpec) -> Result<Self> {
        Ok(match spec.coefficients {
            CoefficientKind::Universal => AnySeed::Universal(Seed::universal(spec.b.clone())?),
            CoefficientKind::Trivial => AnySeed::Trivial(Seed::trivial(spec.b.clone())?),
        })
    }

    pub fn mutate(&self, k: usize, eps: Sign) -> Result<Self> {
        Ok(match self {
            AnySeed::Universal(s) => AnySeed::Universal(s.mutate(k, eps)?),
            AnySeed::Trivial(s) => AnySeed::Trivial(s.mutate(k, eps)?),
        })
    }

    pub fn render(&self, labels: Option<&[String]>) -> Result<SeedView> {
        match self {
            AnySeed::Universal(s) => s.render(labels),
            AnySeed::Trivial(s) => s.render(labels),
        }
    }

    pub fn b(&self) -> &ExchangeMatrix {
        match self {
            AnySeed::Universal(s) => s.b(),
            AnySeed::Trivial(s) => s.b(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semifield::{PositiveReals, Tropical, TropicalMonomial};
    use proptest::prelude::*;

    fn a2() -> ExchangeMatrix {
        ExchangeMatrix::new(&[vec![0, 1], vec![-1, 0]]).unwrap()
    }

    #[test]
    fn y_mutation_example() {
        let s = Seed::universal(a2()).unwrap().mutate(0, Sign::Plus).unwrap();
        let v = s.render(None).unwrap();
        assert_eq!(v.y, vec!["1/y1", "y1*y2/(1 + y1)"]);
        let m = Seed::universal(a2()).unwrap().mutate(0, Sign::Minus).unwrap();
        assert!(s.equals(&m).unwrap());
    }

    #[test]
    fn yhat_examples() {
        let s = Seed::trivial(a2()).unwrap();
        let yh: Vec<String> = s.yhat().unwrap().iter().map(|e| e.render(&s.default_labels())).collect();
        assert_eq!(yh, vec!["1/x2", "x1"]);

        let z = Seed::universal(ExchangeMatrix::zeros(2)).unwrap();
        let yh: Vec<String> = z.yhat().unwrap().iter().map(|e| e.render(&z.default_labels())).collect();
        assert_eq!(yh, vec!["y1", "y2"]);
    }

    #[test]
    fn trivial_exchange_relation() {
        // x1 x1' = 1 + x2 for B = [[0,1],[-1,0]]
        let s = Seed::trivial(a2()).unwrap();
        let m = s.mutate(0, Sign::Plus).unwrap();
        assert_eq!(m.render(None).unwrap().x, vec!["(1 + x2)/x1", "x2"]);
    }

    #[test]
    fn rho_tau_decomposition() {
        let b = ExchangeMatrix::new(&[vec![0, 2, -1], vec![-1, 0, 1], vec![1, -2, 0]]).unwrap();
        let s = Seed::universal(b).unwrap();
        for k in 0..3 {
            for eps in Sign::BOTH {
                let direct = s.mutate(k, eps).unwrap();
                let composed = s.rho(k, eps).unwrap().tau(k, eps, s.b()).unwrap();
                assert!(direct.equals(&composed).unwrap());
                // τ alone only produces monomials
                let t = s.tau_seed(k, eps).unwrap();
                assert!(t.x().iter().all(|e| e.numerator().is_monomial() && e.denominator().is_monomial()));
            }
        }
    }

    #[test]
    fn seed_spec_json() {
        let spec: SeedSpec = serde_json::from_str(r#"{"B": [[0,1],[-1,0]], "coefficients": "trivial"}"#).unwrap();
        assert_eq!(spec.coefficients, CoefficientKind::Trivial);
        let s = AnySeed::from_spec(&spec).unwrap();
        assert_eq!(s.render(None).unwrap().x, vec!["x1", "x2"]);
        assert!(serde_json::from_str::<SeedSpec>(r#"{"B": [[0,1],[1,0]]}"#).is_err());
    }

    #[test]
    fn generic_y_mutation_in_other_semifields() {
        let t = Tropical::new(2);
        let y = t.initial(2).unwrap();
        let y1 = mutate_y(&t, &a2(), &y, 0, Sign::Plus).unwrap();
        assert_eq!(y1, vec![TropicalMonomial::new(vec![-1, 0]), TropicalMonomial::new(vec![1, 1])]);

        let r = PositiveReals;
        let y1 = mutate_y(&r, &a2(), &[1.0, 1.0], 0, Sign::Plus).unwrap();
        assert_eq!(y1, vec![1.0, 0.5]);
    }

    fn small_b(n: usize) -> impl Strategy<Value = ExchangeMatrix> {
        // skew-symmetric part times a symmetrizer of 1s and 2s
        (prop::collection::vec(-2i64..=2, n * n), prop::collection::vec(1i64..=2, n)).prop_map(move |(v, d)| {
            let mut rows = vec![vec![0; n]; n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let a = v[i * n + j];
                    // b_ij = a d_j / g, b_ji = -a d_i / g
                    let g = num_integer::gcd(d[i], d[j]);
                    rows[i][j] = a * d[j] / g;
                    rows[j][i] = -a * d[i] / g;
                }
            }
            ExchangeMatrix::new(&rows).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn sign_independence_and_involution(b in (2usize..=3).prop_flat_map(small_b), k in 0usize..3, pre in prop::collection::vec(0usize..3, 0..2)) {
            let n = b.n();
            let k = k % n;
            let mut s = Seed::universal(b).unwrap();
            for j in pre {
                s = s.mutate(j % n, Sign::Plus).unwrap();
            }
            let p = s.mutate(k, Sign::Plus).unwrap();
            let m = s.mutate(k, Sign::Minus).unwrap();
            prop_assert!(p.equals(&m).unwrap());
            prop_assert!(p.mutate(k, Sign::Plus).unwrap().equals(&s).unwrap());
        }

        #[test]
        fn symmetrizer_is_stable(b in (2usize..=4).prop_flat_map(small_b), seq in prop::collection::vec(0usize..4, 0..12)) {
            let d = b.skew_symmetrizer().unwrap();
            let mut cur = b.clone();
            for k in seq {
                cur = match cur.mutate(k % b.n(), Sign::Plus) {
                    Ok(next) => next,
                    // wild matrices leave i64 quickly
                    Err(Error::IntegerOverflow) => break,
                    Err(e) => return Err(TestCaseError::fail(e.to_string())),
                };
                prop_assert!(d.symmetrizes(&cur));
            }
        }

        #[test]
        fn yhat_mutates_like_y(b in (2usize..=3).prop_flat_map(small_b), k in 0usize..3, eps in prop::bool::ANY) {
            let k = k % b.n();
            let eps = if eps { Sign::Plus } else { Sign::Minus };
            let s = Seed::universal(b).unwrap();
            let after = s.mutate(k, eps).unwrap().yhat().unwrap();
            let rule = mutate_y(s.ambient(), s.b(), &s.yhat().unwrap(), k, eps).unwrap();
            for (a, r) in after.iter().zip(&rule) {
                prop_assert!(a.semifield_eq(r).unwrap());
            }
        }
    }

    /// Laurent phenomenon at rank 2: every x-variable produced by trivial
    /// coefficient mutation has a monomial denominator.
    #[test]
    fn rank_two_laurent() {
        for (b12, b21) in [(1, -1), (1, -2), (2, -1), (1, -3), (2, -2)] {
            let b = ExchangeMatrix::new(&[vec![0, b12], vec![b21, 0]]).unwrap();
            let mut s = Seed::trivial(b).unwrap();
            for step in 0..6 {
                s = s.mutate(step % 2, Sign::Plus).unwrap();
                for x in s.x() {
                    assert!(x.denominator().is_monomial(), "{b12},{b21} step {step}: {x}");
                }
            }
        }
    }
}
