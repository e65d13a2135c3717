//! Integer matrices, exchange matrices and their skew-symmetrizers.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `[a]₊ = max(a, 0)`.
#[inline]
pub fn positive_part(a: i64) -> i64 {
    a.max(0)
}

/// A sign `ε ∈ {+1, −1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.value() as f64
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Dense square integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, data: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare { rows: n, row, len: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(IntMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Checked product `self · rhs`.
    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if rhs.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: rhs.n });
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc: i64 = 0;
                for l in 0..n {
                    let t = self.get(i, l).checked_mul(rhs.get(l, j)).ok_or(Error::IntegerOverflow)?;
                    acc = acc.checked_add(t).ok_or(Error::IntegerOverflow)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn max_abs(&self) -> i64 {
        self.data.iter().map(|v| v.abs()).max().unwrap_or(0)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(d)?;
        IntMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// A positive integer diagonal `D` with `DB` skew-symmetric.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SkewSymmetrizer(Vec<i64>);

impl SkewSymmetrizer {
    /// Validates `d` against `b`.
    pub fn new(d: Vec<i64>, b: &ExchangeMatrix) -> Result<Self> {
        if d.len() != b.n() {
            return Err(Error::DimensionMismatch { expected: b.n(), found: d.len() });
        }
        let s = SkewSymmetrizer(d);
        if !s.symmetrizes(b) {
            return Err(Error::BadSymmetrizer { d: s.0 });
        }
        Ok(s)
    }

    pub fn ones(n: usize) -> Self {
        SkewSymmetrizer(vec![1; n])
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    #[inline]
    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symmetrizes(&self, b: &ExchangeMatrix) -> bool {
        let n = b.n();
        self.0.len() == n
            && self.0.iter().all(|&d| d > 0)
            && (0..n).all(|i| {
                (0..n).all(|j| self.0[i] as i128 * b.get(i, j) as i128 == -(self.0[j] as i128) * b.get(j, i) as i128)
            })
    }
}

/// A skew-symmetrizable integer matrix `B = (b_ij)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExchangeMatrix(IntMatrix);

impl ExchangeMatrix {
    /// Builds an exchange matrix from rows, rejecting anything that is not
    /// square and skew-symmetrizable.
    pub fn new(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_int_matrix(IntMatrix::from_rows(rows)?)
    }

    pub fn from_int_matrix(m: IntMatrix) -> Result<Self> {
        let b = ExchangeMatrix(m);
        b.skew_symmetrizer()?;
        Ok(b)
    }

    pub fn zeros(n: usize) -> Self {
        ExchangeMatrix(IntMatrix::zeros(n))
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.0.get(i, j)
    }

    pub fn as_int_matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.0.rows()
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k >= self.n() {
            return Err(Error::IndexOutOfRange { index: k, n: self.n() });
        }
        Ok(())
    }

    /// The minimal skew-symmetrizer: on each connected component of the
    /// support graph the entries are coprime positive integers.
    pub fn skew_symmetrizer(&self) -> Result<SkewSymmetrizer> {
        let n = self.n();
        for i in 0..n {
            for j in 0..n {
                let (bij, bji) = (self.get(i, j), self.get(j, i));
                let bad = if i == j {
                    bij != 0
                } else {
                    (bij == 0) != (bji == 0) || (bij != 0 && bij.signum() == bji.signum())
                };
                if bad {
                    return Err(Error::NotSkewSymmetrizable { i, j, bij, bji });
                }
            }
        }

        let mut d: Vec<Option<Ratio<i128>>> = vec![None; n];
        for root in 0..n {
            if d[root].is_some() {
                continue;
            }
            d[root] = Some(Ratio::from_integer(1));
            let mut component = vec![root];
            let mut stack = vec![root];
            while let Some(i) = stack.pop() {
                let di = d[i].unwrap();
                for j in 0..n {
                    let bij = self.get(i, j);
                    if bij == 0 {
                        continue;
                    }
                    // d_i b_ij = -d_j b_ji
                    let dj = di * Ratio::new(-(bij as i128), self.get(j, i) as i128);
                    match d[j] {
                        None => {
                            d[j] = Some(dj);
                            component.push(j);
                            stack.push(j);
                        }
                        Some(existing) if existing != dj => {
                            return Err(Error::NotSkewSymmetrizable { i, j, bij, bji: self.get(j, i) });
                        }
                        Some(_) => {}
                    }
                }
            }
            let lcm = component.iter().fold(1i128, |acc, &i| acc.lcm(d[i].unwrap().denom()));
            let ints: Vec<i128> = component.iter().map(|&i| (d[i].unwrap() * lcm).to_integer()).collect();
            let g = ints.iter().fold(0i128, |acc, &v| acc.gcd(&v));
            for (&i, &v) in component.iter().zip(&ints) {
                d[i] = Some(Ratio::from_integer(v / g));
            }
        }
        let entries = d
            .into_iter()
            .map(|r| i64::try_from(r.unwrap().to_integer()).map_err(|_| Error::IntegerOverflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(SkewSymmetrizer(entries))
    }

    /// Matrix mutation at `k` (0-based) computed with sign `eps`.
    ///
    /// The result does not depend on `eps`.
    pub fn mutate(&self, k: usize, eps: Sign) -> Result<ExchangeMatrix> {
        self.check_index(k)?;
        let n = self.n();
        let e = eps.value();
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let bij = self.get(i, j);
                let v = if i == k || j == k {
                    -bij
                } else {
                    let (bik, bkj) = (self.get(i, k), self.get(k, j));
                    let t1 = positive_part(-e * bik).checked_mul(bkj).ok_or(Error::IntegerOverflow)?;
                    let t2 = bik.checked_mul(positive_part(e * bkj)).ok_or(Error::IntegerOverflow)?;
                    bij.checked_add(t1).and_then(|v| v.checked_add(t2)).ok_or(Error::IntegerOverflow)?
                };
                out.set(i, j, v);
            }
        }
        Ok(ExchangeMatrix(out))
    }

    /// Relabels indices: entry `(i, j)` of the result is `b_{σ⁻¹(i) σ⁻¹(j)}`.
    pub fn permuted(&self, sigma: &crate::Permutation) -> Result<ExchangeMatrix> {
        let n = self.n();
        if sigma.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: sigma.len() });
        }
        let inv = sigma.inverse();
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(inv.apply(i), inv.apply(j)));
            }
        }
        Ok(ExchangeMatrix(out))
    }
}

impl fmt::Debug for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExchangeMatrix({:?})", self.0)
    }
}

impl Serialize for ExchangeMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExchangeMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = IntMatrix::deserialize(d)?;
        ExchangeMatrix::from_int_matrix(m).map_err(serde::de::Error::custom)
    }
}

/// Matrices `B[0], …, B[T]` along a mutation sequence.
pub fn matrix_trace(b: &ExchangeMatrix, seq: &[usize]) -> Result<Vec<ExchangeMatrix>> {
    let mut out = Vec::with_capacity(seq.len() + 1);
    out.push(b.clone());
    for &k in seq {
        let next = out.last().unwrap().mutate(k, Sign::Plus)?;
        out.push(next);
    }
    Ok(out)
}
