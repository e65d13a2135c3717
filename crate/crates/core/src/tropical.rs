//! c-vectors, g-vectors and tropical signs.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{matrix_trace, positive_part, ExchangeMatrix, IntMatrix, Sign};
use crate::seed::mutate_y;
use crate::semifield::{AmbientCoefficients, Tropical, TropicalMonomial};

/// The sign of a sign-coherent nonzero vector.
pub fn tropical_sign(c: &[i64]) -> Result<Sign> {
    sign_at(c, 0, 0)
}

fn sign_at(c: &[i64], step: usize, column: usize) -> Result<Sign> {
    let pos = c.iter().any(|&v| v > 0);
    let neg = c.iter().any(|&v| v < 0);
    match (pos, neg) {
        (true, false) => Ok(Sign::Plus),
        (false, true) => Ok(Sign::Minus),
        _ => Err(Error::SignCoherenceViolation { step, column, vector: c.to_vec() }),
    }
}

fn c_matrix(y: &[TropicalMonomial]) -> IntMatrix {
    let n = y.len();
    let mut m = IntMatrix::zeros(n);
    for (i, yi) in y.iter().enumerate() {
        for (j, &v) in yi.exponents().iter().enumerate() {
            m.set(j, i, v);
        }
    }
    m
}

fn check_seq(n: usize, seq: &[usize]) -> Result<()> {
    match seq.iter().find(|&&k| k >= n) {
        Some(&k) => Err(Error::IndexOutOfRange { index: k, n }),
        None => Ok(()),
    }
}

/// `C[0], …, C[T]` for a 0-based mutation sequence. Column `i` of `C[s]` is
/// the exponent vector of the tropical `y_i[s]`. Every column of every
/// matrix is checked for sign-coherence.
pub fn c_matrix_trace(b: &ExchangeMatrix, seq: &[usize]) -> Result<Vec<IntMatrix>> {
    check_seq(b.n(), seq)?;
    let n = b.n();
    let trop = Tropical::new(n);
    let bs = matrix_trace(b, seq)?;
    let mut y = trop.initial(n)?;
    let mut out = vec![c_matrix(&y)];
    for (s, &k) in seq.iter().enumerate() {
        y = mutate_y(&trop, &bs[s], &y, k, Sign::Plus)?;
        let c = c_matrix(&y);
        for i in 0..n {
            sign_at(&c.column(i), s + 1, i)?;
        }
        out.push(c);
    }
    Ok(out)
}

/// `ε_s`: the sign of the c-vector of `y_{k_s}[s]`. Falls back to
/// [`check_sign_coherence`] when the c-matrices leave the `i64` range.
pub fn tropical_sign_sequence(b: &ExchangeMatrix, seq: &[usize]) -> Result<Vec<Sign>> {
    match c_matrix_trace(b, seq) {
        Ok(cs) => Ok(signs_from(&cs, seq)),
        Err(Error::IntegerOverflow) => check_sign_coherence(b, seq),
        Err(e) => Err(e),
    }
}

/// Sign-coherence of every c-vector along `seq` in arbitrary precision,
/// returning the tropical sign sequence.
///
/// Mutates the `2n × n` matrix `[B; C]` by the exchange-matrix rule, whose
/// lower block follows the tropical y-mutation.
pub fn check_sign_coherence(b: &ExchangeMatrix, seq: &[usize]) -> Result<Vec<Sign>> {
    check_seq(b.n(), seq)?;
    let n = b.n();
    let mut m: Vec<Vec<BigInt>> = (0..2 * n)
        .map(|r| (0..n).map(|j| BigInt::from(if r < n { b.get(r, j) } else if r - n == j { 1 } else { 0 })).collect())
        .collect();
    let mut signs = Vec::with_capacity(seq.len());
    for (s, &k) in seq.iter().enumerate() {
        signs.push(big_sign(&m, n, s, k)?);
        let mut next = m.clone();
        for (r, row) in next.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                if r == k || j == k {
                    *v = -&m[r][j];
                } else {
                    let (rk, kj) = (&m[r][k], &m[k][j]);
                    if rk.is_positive() && kj.is_positive() {
                        *v += rk * kj;
                    } else if rk.is_negative() && kj.is_negative() {
                        *v -= rk * kj;
                    }
                }
            }
        }
        m = next;
        for i in 0..n {
            big_sign(&m, n, s + 1, i)?;
        }
    }
    Ok(signs)
}

fn big_sign(m: &[Vec<BigInt>], n: usize, step: usize, column: usize) -> Result<Sign> {
    let col: Vec<&BigInt> = (n..2 * n).map(|r| &m[r][column]).collect();
    let pos = col.iter().any(|v| v.is_positive());
    let neg = col.iter().any(|v| v.is_negative());
    match (pos, neg) {
        (true, false) => Ok(Sign::Plus),
        (false, true) => Ok(Sign::Minus),
        _ => {
            let clamp = |v: &BigInt| v.to_i64().unwrap_or(if v.is_negative() { i64::MIN } else { i64::MAX });
            Err(Error::SignCoherenceViolation { step, column, vector: col.into_iter().map(clamp).collect() })
        }
    }
}

fn signs_from(cs: &[IntMatrix], seq: &[usize]) -> Vec<Sign> {
    seq.iter()
        .enumerate()
        .map(|(s, &k)| sign_at(&cs[s].column(k), s, k).expect("checked in c_matrix_trace"))
        .collect()
}

/// `G[0], …, G[T]` with the tropical sign sequence of `(b, seq)`.
pub fn g_matrix_trace(b: &ExchangeMatrix, seq: &[usize]) -> Result<Vec<IntMatrix>> {
    let signs = tropical_sign_sequence(b, seq)?;
    g_matrix_trace_with_signs(b, seq, &signs)
}

/// The g-vector recursion
/// `g_k[s+1] = −g_k[s] + Σ_j [−ε_s b_jk[s]]₊ g_j[s]` for explicit signs.
pub fn g_matrix_trace_with_signs(b: &ExchangeMatrix, seq: &[usize], signs: &[Sign]) -> Result<Vec<IntMatrix>> {
    if signs.len() != seq.len() {
        return Err(Error::LengthMismatch { expected: seq.len(), found: signs.len() });
    }
    check_seq(b.n(), seq)?;
    let n = b.n();
    let bs = matrix_trace(b, seq)?;
    let mut g = IntMatrix::identity(n);
    let mut out = vec![g.clone()];
    for (s, (&k, &eps)) in seq.iter().zip(signs).enumerate() {
        let mut col = g.column(k).iter().map(|v| v.checked_neg().ok_or(Error::IntegerOverflow)).collect::<Result<Vec<_>>>()?;
        for j in 0..n {
            let w = positive_part(-eps.value() * bs[s].get(j, k));
            if w != 0 {
                for (r, c) in col.iter_mut().enumerate() {
                    *c = w
                        .checked_mul(g.get(r, j))
                        .and_then(|t| c.checked_add(t))
                        .ok_or(Error::IntegerOverflow)?;
                }
            }
        }
        for (r, c) in col.into_iter().enumerate() {
            g.set(r, k, c);
        }
        out.push(g.clone());
    }
    Ok(out)
}

/// Everything tropical about a mutation sequence, for reports.
#[derive(Clone, Debug, Serialize)]
pub struct TropicalTrace {
    pub matrices: Vec<ExchangeMatrix>,
    pub c: Vec<IntMatrix>,
    pub g: Vec<IntMatrix>,
    pub signs: Vec<Sign>,
}

pub fn tropical_trace(b: &ExchangeMatrix, seq: &[usize]) -> Result<TropicalTrace> {
    let c = c_matrix_trace(b, seq)?;
    let signs = signs_from(&c, seq);
    let g = g_matrix_trace_with_signs(b, seq, &signs)?;
    Ok(TropicalTrace { matrices: matrix_trace(b, seq)?, c, g, signs })
}
