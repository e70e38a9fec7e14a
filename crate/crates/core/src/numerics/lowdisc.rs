//! Halton low-discrepancy sequence.

const PRIMES: [u32; 64] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191,
    193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293,
    307, 311,
];

/// Largest dimension supported by [`Halton`].
pub const MAX_HALTON_DIM: usize = PRIMES.len();

/// Radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u32) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while index > 0 {
        out += f * (index % b) as f64;
        index /= b;
        f *= inv;
    }
    out
}

/// Halton points in `[0,1)^d` using the first `d` primes, optionally with a
/// per-coordinate random shift modulo 1.
#[derive(Debug, Clone)]
pub struct Halton {
    dim: usize,
    index: u64,
    shift: Vec<f64>,
}

impl Halton {
    /// Sequence starting at index 1 (index 0 is the origin).
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1 && dim <= MAX_HALTON_DIM, "Halton dimension {dim} out of range");
        Self {
            dim,
            index: 1,
            shift: vec![0.0; dim],
        }
    }

    /// Sequence with a Cranley-Patterson rotation.
    pub fn shifted(dim: usize, shift: Vec<f64>) -> Self {
        assert_eq!(shift.len(), dim);
        let mut h = Self::new(dim);
        h.shift = shift;
        h
    }

    pub fn skip(mut self, n: u64) -> Self {
        self.index += n;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn next_into(&mut self, out: &mut [f64]) {
        for (k, o) in out.iter_mut().enumerate().take(self.dim) {
            let v = radical_inverse(self.index, PRIMES[k]) + self.shift[k];
            *o = v - v.floor();
        }
        self.index += 1;
    }
}

impl Iterator for Halton {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        let mut p = vec![0.0; self.dim];
        self.next_into(&mut p);
        Some(p)
    }
}
