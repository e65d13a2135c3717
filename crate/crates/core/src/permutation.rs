use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// A permutation of `{0, …, n−1}`.
///
/// Serialized as the 1-based image array `[σ(1), …, σ(n)]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// From 0-based images.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(Error::InvalidPermutation(images));
            }
            seen[v] = true;
        }
        Ok(Permutation(images))
    }

    /// From 1-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation(images.to_vec()));
        }
        Self::new(images.iter().map(|&v| v - 1).collect())
            .map_err(|_| Error::InvalidPermutation(images.to_vec()))
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|v| v + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Extends by fixing `m − n` trailing points.
    pub fn extend_identity(&self, m: usize) -> Permutation {
        let mut v = self.0.clone();
        v.extend(self.0.len()..m);
        Permutation(v)
    }

    /// The matrix `P` with `(P v)_i = v_{σ⁻¹(i)}`, i.e. `P_{σ(j), j} = 1`.
    pub fn matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.len());
        for (j, &i) in self.0.iter().enumerate() {
            m.set(i, j, 1);
        }
        m
    }

    /// Relabels a vector: `out_i = v_{σ⁻¹(i)}`.
    pub fn act<T: Clone>(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: v.len() });
        }
        let inv = self.inverse();
        Ok((0..v.len()).map(|i| v[inv.apply(i)].clone()).collect())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({:?})", self.one_based())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // cycle notation, fixed points omitted
        let mut seen = vec![false; self.len()];
        let mut wrote = false;
        for start in 0..self.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = vec![];
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push((i + 1).to_string());
                i = self.0[i];
            }
            write!(f, "({})", cycle.join(" "))?;
            wrote = true;
        }
        if !wrote {
            f.write_str("id")?;
        }
        Ok(())
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Permutation::from_one_based(&v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Permutation::new(vec![1, 0, 2]).is_ok());
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
        assert!(Permutation::from_one_based(&[3, 1]).is_err());
    }

    #[test]
    fn action_and_matrix_agree() {
        let s = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        let v = [10, 20, 30];
        let acted = s.act(&v).unwrap();
        // out_i = v_{σ⁻¹(i)}; σ⁻¹ = (3 1 2)
        assert_eq!(acted, vec![30, 10, 20]);
        let m = s.matrix();
        for i in 0..3 {
            let row: i64 = (0..3).map(|j| m.get(i, j) * v[j]).sum();
            assert_eq!(row, acted[i]);
        }
        assert_eq!(s.to_string(), "(1 2 3)");
        assert_eq!(Permutation::identity(2).to_string(), "id");
    }
}
