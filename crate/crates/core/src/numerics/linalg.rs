//! Small dense linear algebra: Cholesky factors and triangular solves.

use crate::error::{Error, Result};

/// Lower-triangular Cholesky factor `L` with `L·Lᵀ = S`.
///
/// Stored row-packed: row `i` holds `L[i][0..=i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerTriangularFactor {
    dim: usize,
    entries: Vec<f64>,
}

impl LowerTriangularFactor {
    #[inline]
    fn offset(i: usize) -> usize {
        i * (i + 1) / 2
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry `L[i][j]`; zero above the diagonal.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j > i {
            0.0
        } else {
            self.entries[Self::offset(i) + j]
        }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[Self::offset(i)..Self::offset(i) + i + 1]
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0.0; Self::offset(dim)];
        for i in 0..dim {
            entries[Self::offset(i) + i] = 1.0;
        }
        Self { dim, entries }
    }

    /// `L·z`.
    pub fn mul_vec(&self, z: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(z).map(|(l, v)| l * v).sum())
            .collect()
    }

    /// Solves `L·y = b`.
    pub fn solve_lower(&self, b: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        for i in 0..self.dim {
            let row = self.row(i);
            let s: f64 = row[..i].iter().zip(&y).map(|(l, v)| l * v).sum();
            y[i] = (b[i] - s) / row[i];
        }
        y
    }

    /// Solves `Lᵀ·x = b`.
    pub fn solve_upper_transposed(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        for i in (0..self.dim).rev() {
            x[i] /= self.get(i, i);
            let xi = x[i];
            for (j, l) in self.row(i)[..i].iter().enumerate() {
                x[j] -= l * xi;
            }
        }
        x
    }

    /// `L·Lᵀ` as a dense matrix.
    pub fn reconstruct(&self) -> Vec<Vec<f64>> {
        let d = self.dim;
        let mut out = vec![vec![0.0; d]; d];
        for i in 0..d {
            for j in 0..=i {
                let s: f64 = self.row(i)[..=j]
                    .iter()
                    .zip(self.row(j))
                    .map(|(a, b)| a * b)
                    .sum();
                out[i][j] = s;
                out[j][i] = s;
            }
        }
        out
    }
}

/// Cholesky factorisation of a symmetric matrix.
///
/// Fails with [`Error::NotPositiveDefinite`] when a pivot drops to
/// `1e-14 · max diagonal` or below.
pub fn cholesky_factor(s: &[Vec<f64>]) -> Result<LowerTriangularFactor> {
    let d = s.len();
    for row in s {
        if row.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: row.len(),
            });
        }
    }
    let max_diag = (0..d).map(|i| s[i][i].abs()).fold(0.0, f64::max);
    let floor = 1e-14 * max_diag;
    let mut entries = vec![0.0; d * (d + 1) / 2];
    for i in 0..d {
        let oi = LowerTriangularFactor::offset(i);
        for j in 0..=i {
            let oj = LowerTriangularFactor::offset(j);
            let s_ij = 0.5 * (s[i][j] + s[j][i]);
            let dot: f64 = (0..j).map(|k| entries[oi + k] * entries[oj + k]).sum();
            if i == j {
                let pivot = s_ij - dot;
                if !(pivot > floor) {
                    return Err(Error::NotPositiveDefinite { row: i, pivot });
                }
                entries[oi + i] = pivot.sqrt();
            } else {
                entries[oi + j] = (s_ij - dot) / entries[oj + j];
            }
        }
    }
    Ok(LowerTriangularFactor { dim: d, entries })
}

/// Dense `A·x` for a row-major matrix.
pub fn mat_vec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RandomStream;

    #[test]
    fn identity_factor() {
        let eye: Vec<Vec<f64>> = (0..3)
            .map(|i| (0..3).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let l = cholesky_factor(&eye).unwrap();
        assert_eq!(l, LowerTriangularFactor::identity(3));
    }

    #[test]
    fn two_by_two_by_hand() {
        let l = cholesky_factor(&[vec![4.0, 2.0], vec![2.0, 3.0]]).unwrap();
        assert!((l.get(0, 0) - 2.0).abs() < 1e-15);
        assert!((l.get(1, 0) - 1.0).abs() < 1e-15);
        assert!((l.get(1, 1) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(l.get(0, 1), 0.0);
    }

    #[test]
    fn indefinite_rejected() {
        let err = cholesky_factor(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::NotPositiveDefinite { row: 1, .. }));
    }

    #[test]
    fn random_round_trips_and_solves() {
        let mut rng = RandomStream::new(7);
        for case in 0..100 {
            let d = 1 + case % 15;
            let m: Vec<Vec<f64>> = (0..d)
                .map(|_| (0..d).map(|_| rng.normal()).collect())
                .collect();
            let a: Vec<Vec<f64>> = (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| {
                            let s: f64 = (0..d).map(|k| m[i][k] * m[j][k]).sum();
                            s + if i == j { 1e-3 } else { 0.0 }
                        })
                        .collect()
                })
                .collect();
            let l = cholesky_factor(&a).unwrap();
            let back = l.reconstruct();
            for i in 0..d {
                assert!(l.get(i, i) > 0.0);
                for j in 0..d {
                    assert!((back[i][j] - a[i][j]).abs() <= 1e-12 * (1.0 + a[i][j].abs()));
                }
            }
            let b: Vec<f64> = (0..d).map(|_| rng.normal()).collect();
            let y = l.solve_lower(&b);
            let ly = l.mul_vec(&y);
            for i in 0..d {
                assert!((ly[i] - b[i]).abs() < 1e-9);
            }
            let x = l.solve_upper_transposed(&b);
            // Lᵀx = b
            for i in 0..d {
                let s: f64 = (i..d).map(|k| l.get(k, i) * x[k]).sum();
                assert!((s - b[i]).abs() < 1e-9);
            }
        }
    }
}
