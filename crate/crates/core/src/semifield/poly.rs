//! Sparse multivariate polynomials over ℤ.
//!
//! Terms are kept in a `BTreeMap` keyed by dense exponent vectors, so the
//! map order is lexicographic with variable 0 most significant and the last
//! entry is the leading term.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub(crate) type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct IntPoly {
    n: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

/// Attempts at the evaluation point before the heuristic gcd gives up.
const HEU_GCD_ATTEMPTS: usize = 6;

impl IntPoly {
    pub fn zero(n: usize) -> Self {
        IntPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: BigInt) -> Self {
        let mut p = Self::zero(n);
        if !c.is_zero() {
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, BigInt::one())
    }

    pub fn monomial(exps: Exponents, c: BigInt) -> Self {
        let n = exps.len();
        let mut p = Self::zero(n);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(e, BigInt::one())
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().map(|(e, c)| e.iter().all(|&v| v == 0) && c.is_one()).unwrap()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&v| v == 0))
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Exponents, &BigInt)> {
        self.terms.last_key_value()
    }

    pub fn all_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, rhs: &IntPoly) -> IntPoly {
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly { n: self.n, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, rhs: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn mul(&self, rhs: &IntPoly, limit: usize) -> Result<IntPoly> {
        let mut out = IntPoly::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
            if out.len() > limit {
                return Err(Error::TermLimit { limit });
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u32, limit: usize) -> Result<IntPoly> {
        let mut base = self.clone();
        let mut acc = IntPoly::one(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, limit)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, limit)?;
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        if c.is_zero() {
            return IntPoly::zero(self.n);
        }
        IntPoly { n: self.n, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    /// Divides every coefficient by `c`, assuming exactness.
    pub fn div_scalar(&self, c: &BigInt) -> IntPoly {
        IntPoly { n: self.n, terms: self.terms.iter().map(|(e, v)| (e.clone(), v / c)).collect() }
    }

    /// Gcd of the coefficients (non-negative).
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn max_norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// Componentwise minimum of exponent vectors (all zeros for the zero polynomial).
    pub fn min_exponents(&self) -> Exponents {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return vec![0; self.n] };
        let mut m = first.clone();
        for e in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        m
    }

    /// Divides by the monomial `y^m`, which must divide every term.
    pub fn shift_down(&self, m: &[u32]) -> IntPoly {
        IntPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(m).map(|(a, b)| a - b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn shift_up(&self, m: &[u32]) -> IntPoly {
        IntPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(m).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Re-embeds into `m` variables, placing variable `i` at `offset + i`.
    pub fn embed(&self, m: usize, offset: usize) -> IntPoly {
        IntPoly {
            n: m,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut v = vec![0; m];
                    v[offset..offset + self.n].copy_from_slice(e);
                    (v, c.clone())
                })
                .collect(),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &IntPoly) -> Option<IntPoly> {
        let (de, dc) = d.leading()?;
        let (de, dc) = (de.clone(), dc.clone());
        if d.is_monomial() {
            let mut out = IntPoly::zero(self.n);
            for (e, c) in &self.terms {
                if e.iter().zip(&de).any(|(a, b)| a < b) {
                    return None;
                }
                let (q, r) = c.div_rem(&dc);
                if !r.is_zero() {
                    return None;
                }
                out.terms.insert(e.iter().zip(&de).map(|(a, b)| a - b).collect(), q);
            }
            return Some(out);
        }
        let mut rem = self.clone();
        let mut quot = IntPoly::zero(self.n);
        while let Some((le, lc)) = rem.leading() {
            if le.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let (qc, r) = lc.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            let qe: Exponents = le.iter().zip(&de).map(|(a, b)| a - b).collect();
            for (e, c) in &d.terms {
                let te: Exponents = e.iter().zip(&qe).map(|(a, b)| a + b).collect();
                rem.add_term(te, -(c * &qc));
            }
            quot.terms.insert(qe, qc);
        }
        Some(quot)
    }

    /// Substitutes `value` for variable `var`.
    fn eval_var(&self, var: usize, value: &BigInt) -> IntPoly {
        let mut out = IntPoly::zero(self.n);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = std::mem::replace(&mut e2[var], 0);
            out.add_term(e2, c * value.pow(k));
        }
        out
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.to_f64().unwrap_or(f64::INFINITY);
                for (x, &k) in point.iter().zip(e) {
                    if k > 0 {
                        t *= x.powi(k as i32);
                    }
                }
                t
            })
            .sum()
    }

    fn constant_value(&self) -> BigInt {
        debug_assert!(self.is_constant());
        self.terms.values().next().cloned().unwrap_or_else(BigInt::zero)
    }

    fn leading_coeff(&self) -> BigInt {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigInt::zero)
    }
}

/// Greatest common divisor, normalized to a positive leading coefficient.
///
/// Returns `None` when the heuristic fails; callers must treat that as "no
/// known common factor", never as an error.
pub(crate) fn gcd(a: &IntPoly, b: &IntPoly) -> Option<IntPoly> {
    let n = a.n;
    if a.is_zero() {
        return Some(normalize_sign(b.clone()));
    }
    if b.is_zero() {
        return Some(normalize_sign(a.clone()));
    }
    let (ma, mb) = (a.min_exponents(), b.min_exponents());
    let mono: Exponents = ma.iter().zip(&mb).map(|(x, y)| *x.min(y)).collect();
    let (ca, cb) = (a.content(), b.content());
    let cont = ca.gcd(&cb);
    let fa = a.shift_down(&ma).div_scalar(&ca);
    let fb = b.shift_down(&mb).div_scalar(&cb);
    let core = if fa.is_constant() || fb.is_constant() {
        IntPoly::one(n)
    } else if fa == fb || fa == fb.neg() {
        normalize_sign(fa)
    } else {
        let (h, _, _) = heu_gcd(&fa, &fb, n)?;
        let c = h.content();
        normalize_sign(h.div_scalar(&c))
    };
    Some(core.shift_up(&mono).scale(&cont))
}

fn normalize_sign(p: IntPoly) -> IntPoly {
    if p.leading_coeff().is_negative() {
        p.neg()
    } else {
        p
    }
}

/// Heuristic gcd via evaluation and balanced ξ-adic interpolation, recursing
/// on the highest-numbered variable still in play.
fn heu_gcd(f: &IntPoly, g: &IntPoly, active: usize) -> Option<(IntPoly, IntPoly, IntPoly)> {
    let n = f.n;
    if active == 0 || (f.is_constant() && g.is_constant()) {
        let (fc, gc) = (f.constant_value(), g.constant_value());
        let h = fc.gcd(&gc);
        if h.is_zero() {
            return None;
        }
        return Some((IntPoly::constant(n, h.clone()), IntPoly::constant(n, &fc / &h), IntPoly::constant(n, &gc / &h)));
    }
    let var = active - 1;
    if f.terms.keys().all(|e| e[var] == 0) && g.terms.keys().all(|e| e[var] == 0) {
        return heu_gcd(f, g, var);
    }

    let cont = f.content().gcd(&g.content());
    let f = f.div_scalar(&cont);
    let g = g.div_scalar(&cont);

    let (fnorm, gnorm) = (f.max_norm(), g.max_norm());
    let two = BigInt::from(2);
    let bound: BigInt = &two * (&fnorm).min(&gnorm) + 29;
    let alt = &two * (&fnorm / f.leading_coeff().abs()).min(&gnorm / g.leading_coeff().abs()) + 2;
    let mut xi = bound.clone().min(BigInt::from(99) * bound.sqrt()).max(alt);

    for _ in 0..HEU_GCD_ATTEMPTS {
        let ff = f.eval_var(var, &xi);
        let gg = g.eval_var(var, &xi);
        if !ff.is_zero() && !gg.is_zero() {
            if let Some((h, cff, cfg)) = heu_gcd(&ff, &gg, var) {
                let h = interpolate(&h, &xi, var);
                let hc = h.content();
                let h = h.div_scalar(&hc);
                if let Some(cf) = f.exact_div(&h) {
                    if let Some(cg) = g.exact_div(&h) {
                        return Some((h.scale(&cont), cf, cg));
                    }
                }
                let cff = interpolate(&cff, &xi, var);
                if let Some(h) = f.exact_div(&cff) {
                    if let Some(cg) = g.exact_div(&h) {
                        return Some((h.scale(&cont), cff, cg));
                    }
                }
                let cfg = interpolate(&cfg, &xi, var);
                if let Some(h) = g.exact_div(&cfg) {
                    if let Some(cf) = f.exact_div(&h) {
                        return Some((h.scale(&cont), cf, cfg));
                    }
                }
            }
        }
        xi = BigInt::from(73794) * &xi * xi.sqrt().sqrt() / BigInt::from(27011);
    }
    None
}

/// Recovers a polynomial in `var` from its image at `var = xi`, reading
/// coefficients as balanced residues.
fn interpolate(h: &IntPoly, xi: &BigInt, var: usize) -> IntPoly {
    let n = h.n;
    let half = xi / 2;
    let mut out = IntPoly::zero(n);
    let mut rest = h.clone();
    let mut power: u32 = 0;
    while !rest.is_zero() {
        let mut digit = IntPoly::zero(n);
        for (e, c) in &rest.terms {
            let mut r = c.mod_floor(xi);
            if r > half {
                r -= xi;
            }
            digit.add_term(e.clone(), r);
        }
        for (e, c) in &digit.terms {
            let mut e2 = e.clone();
            e2[var] += power;
            out.add_term(e2, c.clone());
        }
        rest = rest.sub(&digit).div_scalar(xi);
        power += 1;
    }
    normalize_sign(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LIMIT: usize = 1_000_000;

    fn p(n: usize, terms: &[(&[u32], i64)]) -> IntPoly {
        let mut out = IntPoly::zero(n);
        for (e, c) in terms {
            out.add_term(e.to_vec(), BigInt::from(*c));
        }
        out
    }

    #[test]
    fn exact_division() {
        // (1 + y1)(1 + y2) / (1 + y2)
        let a = p(2, &[(&[0, 0], 1), (&[1, 0], 1)]);
        let b = p(2, &[(&[0, 0], 1), (&[0, 1], 1)]);
        let prod = a.mul(&b, LIMIT).unwrap();
        assert_eq!(prod.exact_div(&b).unwrap(), a);
        assert!(a.exact_div(&b).is_none());
        // y^3 + 1 = (y + 1)(y^2 - y + 1)
        let c = p(1, &[(&[3], 1), (&[0], 1)]);
        let d = p(1, &[(&[1], 1), (&[0], 1)]);
        assert_eq!(c.exact_div(&d).unwrap(), p(1, &[(&[2], 1), (&[1], -1), (&[0], 1)]));
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let f = p(3, &[(&[0, 0, 0], 1), (&[1, 0, 0], 1), (&[1, 1, 0], 2)]);
        let g1 = p(3, &[(&[0, 0, 0], 3), (&[0, 1, 1], 1)]);
        let g2 = p(3, &[(&[2, 0, 0], 1), (&[0, 0, 1], 5)]);
        let a = f.mul(&g1, LIMIT).unwrap();
        let b = f.mul(&g2, LIMIT).unwrap().scale(&BigInt::from(6));
        assert_eq!(gcd(&a, &b).unwrap(), f);
    }

    #[test]
    fn gcd_with_monomial_and_content() {
        let a = p(2, &[(&[1, 2], 4), (&[2, 2], 4)]);
        let b = p(2, &[(&[1, 1], 6)]);
        assert_eq!(gcd(&a, &b).unwrap(), p(2, &[(&[1, 1], 2)]));
    }

    #[test]
    fn coprime_gcd_is_one() {
        let a = p(2, &[(&[0, 0], 1), (&[1, 0], 1)]);
        let b = p(2, &[(&[0, 0], 1), (&[0, 1], 1)]);
        assert!(gcd(&a, &b).unwrap().is_one());
    }

    #[test]
    fn term_limit_is_enforced() {
        let a = p(2, &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]);
        assert!(matches!(a.pow(10, 20), Err(Error::TermLimit { limit: 20 })));
    }
}
