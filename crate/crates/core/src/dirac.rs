//! Dirac brackets on the small phase space and the commutation exponents of
//! the quantized variables. Everything here is exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{ExchangeMatrix, IntMatrix};

/// A square matrix over ℚ.
///
/// Serialized row by row as `[num, den]` pairs. Integers that do not fit in
/// `i64` are written as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    n: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(n: usize) -> Self {
        RationalMatrix { n, data: vec![BigRational::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        let n = m.n();
        let mut r = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                r.set(i, j, BigRational::from_integer(BigInt::from(m.get(i, j))));
            }
        }
        r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> Result<RationalMatrix> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: rhs.n });
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigRational::zero();
                for k in 0..n {
                    acc += self.get(i, k) * rhs.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// `diag(d) · self`.
    pub fn scale_rows(&self, d: &[i64]) -> RationalMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            let f = BigRational::from_integer(BigInt::from(d[i]));
            for j in 0..self.n {
                out.set(i, j, self.get(i, j) * &f);
            }
        }
        out
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_skew_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| *self.get(i, j) == -self.get(j, i)))
    }

    /// Gauss–Jordan elimination; returns the inverse and the determinant.
    fn invert(&self) -> (Option<RationalMatrix>, BigRational) {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return (None, BigRational::zero());
            };
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a.get(col, col).clone();
            det *= &p;
            for j in 0..n {
                a.set(col, j, a.get(col, j) / &p);
                inv.set(col, j, inv.get(col, j) / &p);
            }
            for r in 0..n {
                if r != col && !a.get(r, col).is_zero() {
                    let f = a.get(r, col).clone();
                    for j in 0..n {
                        let v = a.get(r, j) - &f * a.get(col, j);
                        a.set(r, j, v);
                        let w = inv.get(r, j) - &f * inv.get(col, j);
                        inv.set(r, j, w);
                    }
                }
            }
        }
        (Some(inv), det)
    }

    pub fn inverse(&self) -> Result<RationalMatrix> {
        self.invert().0.ok_or(Error::SingularMatrix)
    }

    pub fn determinant(&self) -> BigRational {
        self.invert().1
    }

    /// Entries as `(num, den)` in lowest terms, when all fit in `i64`.
    pub fn to_i64_pairs(&self) -> Option<Vec<Vec<(i64, i64)>>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| Some((self.get(i, j).numer().to_i64()?, self.get(i, j).denom().to_i64()?))).collect())
            .collect()
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

fn repr(v: &BigInt) -> IntRepr {
    v.to_i64().map(IntRepr::Small).unwrap_or_else(|| IntRepr::Big(v.to_string()))
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<(IntRepr, IntRepr)>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| (repr(self.get(i, j).numer()), repr(self.get(i, j).denom()))).collect())
            .collect();
        rows.serialize(s)
    }
}

fn check_d(b: &ExchangeMatrix, d: &[i64]) -> Result<()> {
    if d.len() != b.n() {
        return Err(Error::DimensionMismatch { expected: b.n(), found: d.len() });
    }
    if d.iter().any(|&v| v <= 0) {
        return Err(Error::BadSymmetrizer { d: d.to_vec() });
    }
    Ok(())
}

/// `Ω = B⁻¹`.
pub fn omega(b: &ExchangeMatrix) -> Result<RationalMatrix> {
    RationalMatrix::from_int(b.as_int_matrix()).inverse()
}

/// `D Ω`.
pub fn d_omega(b: &ExchangeMatrix, d: &[i64]) -> Result<RationalMatrix> {
    check_d(b, d)?;
    Ok(omega(b)?.scale_rows(d))
}

/// Whether `D B⁻¹` is skew-symmetric.
pub fn check_inverse_symmetrizer(b: &ExchangeMatrix, d: &[i64]) -> Result<bool> {
    Ok(d_omega(b, d)?.is_skew_symmetric())
}

/// Coefficients `c` of the Dirac brackets `{z_i, z_j}_D = c z_i z_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BracketExponents {
    /// `{x_i, x_j}_D`: `−2 d_i ω_ij`.
    pub xx: RationalMatrix,
    /// `{ŷ_i, ŷ_j}_D`: `2 d_i b_ij`.
    pub yy: RationalMatrix,
    /// `{ŷ_i, x_j}_D`: `2 d_i δ_ij`.
    pub yx: RationalMatrix,
}

pub fn bracket_exponents(b: &ExchangeMatrix, d: &[i64]) -> Result<BracketExponents> {
    check_d(b, d)?;
    let two_d: Vec<i64> = d.iter().map(|v| 2 * v).collect();
    let minus_two_d: Vec<i64> = d.iter().map(|v| -2 * v).collect();
    let xx = omega(b)?.scale_rows(&minus_two_d);
    let yy = RationalMatrix::from_int(b.as_int_matrix()).scale_rows(&two_d);
    let yx = RationalMatrix::identity(b.n()).scale_rows(&two_d);
    Ok(BracketExponents { xx, yy, yx })
}

/// `Y_i Y_j = q^{c_ij} Y_j Y_i` with `c_ij = 2 d_j b_ji`. Defined for every B.
pub fn y_commutation_exponents(b: &ExchangeMatrix, d: &[i64]) -> Result<IntMatrix> {
    check_d(b, d)?;
    let n = b.n();
    let mut m = IntMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let v = b.get(j, i).checked_mul(2 * d[j]).ok_or(Error::IntegerOverflow)?;
            m.set(i, j, v);
        }
    }
    Ok(m)
}

/// `X_i X_j = q^{c_ij} X_j X_i` with `c_ij = 2 d_i ω_ij`.
pub fn x_commutation_exponents(b: &ExchangeMatrix, d: &[i64]) -> Result<RationalMatrix> {
    check_d(b, d)?;
    let two_d: Vec<i64> = d.iter().map(|v| 2 * v).collect();
    Ok(omega(b)?.scale_rows(&two_d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuantumExponents {
    pub y_comm: IntMatrix,
    pub x_comm: RationalMatrix,
}

pub fn quantum_exponents(b: &ExchangeMatrix, d: &[i64]) -> Result<QuantumExponents> {
    Ok(QuantumExponents { y_comm: y_commutation_exponents(b, d)?, x_comm: x_commutation_exponents(b, d)? })
}

/// The determinant of an integer matrix, exactly.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let d = RationalMatrix::from_int(m).determinant();
    debug_assert!(d.is_integer());
    d.to_integer()
}

pub(crate) fn is_nonzero_det(m: &IntMatrix) -> bool {
    !determinant(m).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(rows: &[&[(i64, i64)]]) -> RationalMatrix {
        let n = rows.len();
        let mut m = RationalMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &(a, b)) in row.iter().enumerate() {
                m.set(i, j, BigRational::new(a.into(), b.into()));
            }
        }
        m
    }

    #[test]
    fn omega_examples() {
        let a2 = ExchangeMatrix::new(&[vec![0, 1], vec![-1, 0]]).unwrap();
        assert_eq!(omega(&a2).unwrap(), r(&[&[(0, 1), (-1, 1)], &[(1, 1), (0, 1)]]));
        let b2 = ExchangeMatrix::new(&[vec![0, 1], vec![-2, 0]]).unwrap();
        assert_eq!(omega(&b2).unwrap(), r(&[&[(0, 1), (-1, 2)], &[(1, 1), (0, 1)]]));
        assert!(matches!(omega(&ExchangeMatrix::zeros(2)), Err(Error::SingularMatrix)));
    }

    #[test]
    fn inverse_symmetrizer() {
        let b2 = ExchangeMatrix::new(&[vec![0, 1], vec![-2, 0]]).unwrap();
        assert!(check_inverse_symmetrizer(&b2, &[2, 1]).unwrap());
        assert!(!check_inverse_symmetrizer(&b2, &[1, 1]).unwrap());
    }

    #[test]
    fn rank_two_exponents() {
        let a2 = ExchangeMatrix::new(&[vec![0, 1], vec![-1, 0]]).unwrap();
        let e = bracket_exponents(&a2, &[1, 1]).unwrap();
        let skew2 = r(&[&[(0, 1), (2, 1)], &[(-2, 1), (0, 1)]]);
        assert_eq!(e.xx, skew2);
        assert_eq!(e.yy, skew2);
        assert_eq!(e.yx, r(&[&[(2, 1), (0, 1)], &[(0, 1), (2, 1)]]));
        let q = quantum_exponents(&a2, &[1, 1]).unwrap();
        assert_eq!(q.y_comm.rows(), vec![vec![0, -2], vec![2, 0]]);
        assert_eq!(q.x_comm, r(&[&[(0, 1), (-2, 1)], &[(2, 1), (0, 1)]]));
        // y part exists for singular B
        assert!(y_commutation_exponents(&ExchangeMatrix::zeros(2), &[1, 1]).is_ok());
        assert!(x_commutation_exponents(&ExchangeMatrix::zeros(2), &[1, 1]).is_err());
    }

    #[test]
    fn serialization_pairs() {
        let b2 = ExchangeMatrix::new(&[vec![0, 1], vec![-2, 0]]).unwrap();
        let js = serde_json::to_string(&omega(&b2).unwrap()).unwrap();
        assert_eq!(js, "[[[0,1],[-1,2]],[[1,1],[0,1]]]");
    }

    #[test]
    fn determinants() {
        let m = IntMatrix::from_rows(&[vec![0, 1, -1, 0], vec![-1, 0, 0, -1], vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        assert_eq!(determinant(&m), BigInt::from(1));
        assert!(!is_nonzero_det(&IntMatrix::zeros(3)));
    }
}
