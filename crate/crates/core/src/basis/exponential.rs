use crate::error::{Error, Result};
use crate::numerics::{cholesky_factor, mat_vec, sample_unit_sphere, RandomStream};

/// `x ↦ e^{a·x}`, harmonic for a drifted Brownian motion when `a` lies on the
/// characteristic ellipsoid.
#[derive(Debug, Clone, PartialEq)]
pub struct Exponential {
    pub coef: Vec<f64>,
}

impl Exponential {
    #[inline]
    pub fn value(&self, x: &[f64]) -> f64 {
        self.coef.iter().zip(x).map(|(a, v)| a * v).sum::<f64>().exp()
    }
}

/// Roots `a₊ > 0 > a₋` of `½σ²a² + μa − r = 0`.
pub fn harmonic_exponents(rate: f64, drift: f64, vol: f64) -> Result<(f64, f64)> {
    if !(vol > 0.0) || !(rate > 0.0) {
        return Err(Error::InvalidParameter("harmonic exponents need σ > 0 and r > 0".into()));
    }
    let s2 = vol * vol;
    let disc = (drift * drift + 2.0 * s2 * rate).sqrt();
    Ok(((-drift + disc) / s2, (-drift - disc) / s2))
}

/// Centre and scale of the ellipsoid `½aᵀΣa + μᵀa = r`: returns
/// `(−Σ⁻¹μ, 2c)` with `c = r + ½μᵀΣ⁻¹μ`.
fn ellipsoid_data(cov: &[Vec<f64>], drift: &[f64], rate: f64) -> Result<(crate::numerics::LowerTriangularFactor, Vec<f64>, f64)> {
    if drift.len() != cov.len() {
        return Err(Error::DimensionMismatch { expected: cov.len(), got: drift.len() });
    }
    if !(rate > 0.0) {
        return Err(Error::InvalidParameter("ellipsoid harmonics need r > 0".into()));
    }
    let l = cholesky_factor(cov)?;
    let y = l.solve_lower(drift);
    let centre: Vec<f64> = l.solve_upper_transposed(&y).iter().map(|v| -v).collect();
    let c = rate + 0.5 * y.iter().map(|v| v * v).sum::<f64>();
    Ok((l, centre, 2.0 * c))
}

/// Maps a unit vector `u` onto the ellipsoid.
pub fn ellipsoid_point(cov: &[Vec<f64>], drift: &[f64], rate: f64, u: &[f64]) -> Result<Vec<f64>> {
    let (l, centre, two_c) = ellipsoid_data(cov, drift, rate)?;
    let v = l.solve_upper_transposed(u);
    Ok(centre.iter().zip(&v).map(|(c, v)| c + two_c.sqrt() * v).collect())
}

/// Residual `½aᵀΣa + μᵀa − r`.
pub fn ellipsoid_residual(cov: &[Vec<f64>], drift: &[f64], rate: f64, a: &[f64]) -> f64 {
    let sa = mat_vec(cov, a);
    0.5 * a.iter().zip(&sa).map(|(x, y)| x * y).sum::<f64>()
        + drift.iter().zip(a).map(|(m, x)| m * x).sum::<f64>()
        - rate
}

/// Draws `n` exponents on the ellipsoid from uniform directions.
pub fn sample_ellipsoid_exponents(
    cov: &[Vec<f64>],
    drift: &[f64],
    rate: f64,
    n: usize,
    stream: &mut RandomStream,
) -> Result<Vec<Vec<f64>>> {
    let (l, centre, two_c) = ellipsoid_data(cov, drift, rate)?;
    let d = centre.len();
    Ok((0..n)
        .map(|_| {
            let u = sample_unit_sphere(d, stream);
            let v = l.solve_upper_transposed(&u);
            centre.iter().zip(&v).map(|(c, v)| c + two_c.sqrt() * v).collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents() {
        let (p, m) = harmonic_exponents(0.1, 0.0, 1.0).unwrap();
        assert!((p - 0.4472).abs() < 1e-4 && p == -m);
        let (p, m) = harmonic_exponents(0.5, 1.0, 1.0).unwrap();
        assert!((p - (2f64.sqrt() - 1.0)).abs() < 1e-14);
        assert!((m + 1.0 + 2f64.sqrt()).abs() < 1e-14);
        assert!(harmonic_exponents(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn ellipsoid_samples_satisfy_equation() {
        let cov = vec![vec![1.0, 0.3, 0.0], vec![0.3, 2.0, -0.4], vec![0.0, -0.4, 0.5]];
        let mu = vec![0.1, -0.2, 0.05];
        let mut s = RandomStream::new(8);
        for a in sample_ellipsoid_exponents(&cov, &mu, 0.1, 200, &mut s).unwrap() {
            assert!(ellipsoid_residual(&cov, &mu, 0.1, &a).abs() < 1e-12);
        }
        let one = sample_ellipsoid_exponents(&[vec![1.0]], &[0.0], 0.1, 20, &mut s).unwrap();
        assert!(one.iter().all(|a| (a[0].abs() - 0.2f64.sqrt()).abs() < 1e-14));
    }
}
