//! Seeded random streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic random stream.
///
/// Backed by ChaCha8, whose output is specified bit-for-bit, so a seed
/// reproduces the same draws on every platform. Normals come from the
/// Box-Muller transform; the second variate of each pair is cached.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha8Rng,
    spare_normal: Option<f64>,
    counter: u64,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare_normal: None,
            counter: 0,
        }
    }

    /// Independent stream for task `index` under `seed` (ChaCha stream id).
    pub fn derived(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index.wrapping_add(1));
        Self {
            seed,
            rng,
            spare_normal: None,
            counter: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of draws emitted so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Uniform on `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.counter += 1;
        self.rng.gen::<f64>()
    }

    /// Uniform on `[lo, hi)`.
    #[inline]
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal draw.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            self.counter += 1;
            return z;
        }
        // 1 - u lies in (0, 1], so the log is finite.
        let u1 = 1.0 - self.rng.gen::<f64>();
        let u2 = self.rng.gen::<f64>();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        self.spare_normal = Some(radius * angle.sin());
        self.counter += 1;
        radius * angle.cos()
    }

    /// Exponential draw with the given rate.
    pub fn exponential(&mut self, rate: f64) -> f64 {
        let u = 1.0 - self.uniform();
        -u.ln() / rate
    }
}

/// Uniform point on the unit sphere in `R^d` by normalising a Gaussian vector.
pub fn sample_unit_sphere(d: usize, stream: &mut RandomStream) -> Vec<f64> {
    loop {
        let z: Vec<f64> = (0..d).map(|_| stream.normal()).collect();
        let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return z.into_iter().map(|v| v / norm).collect();
        }
    }
}
