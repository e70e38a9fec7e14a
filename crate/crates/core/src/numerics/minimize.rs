//! Derivative-free minimisers for the inner (most violated constraint) problem.

use super::lowdisc::Halton;
use super::rng::RandomStream;

/// Axis-aligned box `[lo, hi]` in `R^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl SearchBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len(), "box bounds must have equal length");
        assert!(
            lo.iter().zip(&hi).all(|(a, b)| a <= b),
            "box lower bound exceeds upper bound"
        );
        Self { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn width(&self, k: usize) -> f64 {
        self.hi[k] - self.lo[k]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (a, b))| *v >= *a && *v <= *b)
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for (k, v) in x.iter_mut().enumerate() {
            *v = v.clamp(self.lo[k], self.hi[k]);
        }
    }

    /// Maps a point of the unit cube into the box.
    pub fn from_unit(&self, u: &[f64], out: &mut [f64]) {
        for k in 0..self.dim() {
            out[k] = self.lo[k] + u[k] * self.width(k);
        }
    }

    /// Corners of the box; only the first `cap_dims` coordinates are
    /// toggled, the rest sit at their midpoints.
    pub fn corners(&self, cap_dims: usize) -> Vec<Vec<f64>> {
        let m = self.dim();
        let toggled = m.min(cap_dims);
        let mid: Vec<f64> = (0..m).map(|k| 0.5 * (self.lo[k] + self.hi[k])).collect();
        (0..1usize << toggled)
            .map(|mask| {
                let mut p = mid.clone();
                for k in 0..toggled {
                    p[k] = if mask >> k & 1 == 1 { self.hi[k] } else { self.lo[k] };
                }
                p
            })
            .collect()
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search on `[a, b]`.
///
/// Returns `(x*, f(x*))`, the best point evaluated. Converges to the
/// minimiser when `f` is unimodal on the interval.
pub fn golden_section_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    let tol = tol.max(f64::EPSILON * (a.abs() + b.abs()));
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            if fd < best.1 {
                best = (d, fd);
            }
        }
    }
    best
}

/// Scans `n_grid` equispaced points of `[a, b]`, then refines around the
/// best few grid points with golden-section search. Returns up to `keep`
/// distinct local minima sorted by value.
pub fn grid_golden_minima<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    n_grid: usize,
    keep: usize,
    tol: f64,
) -> Vec<(f64, f64)> {
    let n = n_grid.max(3);
    let h = (b - a) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| a + h * i as f64).collect();
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    // Discrete local minima of the scan.
    let mut locals: Vec<usize> = (0..n)
        .filter(|&i| (i == 0 || fs[i] <= fs[i - 1]) && (i == n - 1 || fs[i] <= fs[i + 1]))
        .collect();
    locals.sort_by(|&i, &j| fs[i].total_cmp(&fs[j]));
    locals.truncate(keep.max(1));
    let mut out: Vec<(f64, f64)> = locals
        .into_iter()
        .map(|i| {
            let lo = xs[i.saturating_sub(1)];
            let hi = xs[(i + 1).min(n - 1)];
            let refined = golden_section_min(&mut f, lo, hi, tol);
            if refined.1 <= fs[i] {
                refined
            } else {
                (xs[i], fs[i])
            }
        })
        .collect();
    out.sort_by(|p, q| p.1.total_cmp(&q.1));
    out
}

/// Nelder-Mead settings.
#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    pub max_iter: usize,
    /// Initial simplex edge as a fraction of the box width per coordinate.
    pub initial_step: f64,
    /// Stop once the spread of vertex values drops below this.
    pub f_tol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            max_iter: 200,
            initial_step: 0.01,
            f_tol: 1e-12,
        }
    }
}

/// Nelder-Mead restricted to a box by projecting every trial vertex.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    f: &mut F,
    x0: &[f64],
    bounds: &SearchBox,
    opts: &NelderMeadOptions,
) -> (Vec<f64>, f64) {
    let m = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    simplex.push(x0.to_vec());
    for k in 0..m {
        let mut v = x0.to_vec();
        let step = opts.initial_step * bounds.width(k);
        v[k] = if v[k] + step <= bounds.hi[k] { v[k] + step } else { v[k] - step };
        bounds.clamp(&mut v);
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    let trial = |centroid: &[f64], worst: &[f64], coef: f64| -> Vec<f64> {
        let mut p: Vec<f64> = centroid
            .iter()
            .zip(worst)
            .map(|(c, w)| c + coef * (c - w))
            .collect();
        bounds.clamp(&mut p);
        p
    };

    for _ in 0..opts.max_iter {
        let mut order: Vec<usize> = (0..=m).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        let best = order[0];
        let worst = order[m];
        let second_worst = order[m.saturating_sub(1)];
        if (values[worst] - values[best]).abs() <= opts.f_tol {
            break;
        }
        let mut centroid = vec![0.0; m];
        for &i in order.iter().take(m) {
            for k in 0..m {
                centroid[k] += simplex[i][k] / m as f64;
            }
        }
        let xr = trial(&centroid, &simplex[worst], opts.reflection);
        let fr = f(&xr);
        if fr < values[best] {
            let xe = trial(&centroid, &simplex[worst], opts.reflection * opts.expansion);
            let fe = f(&xe);
            if fe < fr {
                simplex[worst] = xe;
                values[worst] = fe;
            } else {
                simplex[worst] = xr;
                values[worst] = fr;
            }
        } else if fr < values[second_worst] {
            simplex[worst] = xr;
            values[worst] = fr;
        } else {
            let (xc, fc) = if fr < values[worst] {
                let xc = trial(&centroid, &simplex[worst], opts.reflection * opts.contraction);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = trial(&centroid, &simplex[worst], -opts.contraction);
                let fc = f(&xc);
                (xc, fc)
            };
            if fc < values[worst].min(fr) {
                simplex[worst] = xc;
                values[worst] = fc;
            } else {
                let anchor = simplex[best].clone();
                for &i in order.iter().skip(1) {
                    let mut v: Vec<f64> = anchor
                        .iter()
                        .zip(&simplex[i])
                        .map(|(a, s)| a + opts.shrink * (s - a))
                        .collect();
                    bounds.clamp(&mut v);
                    values[i] = f(&v);
                    simplex[i] = v;
                }
            }
        }
    }
    let best = (0..=m).min_by(|&i, &j| values[i].total_cmp(&values[j])).unwrap();
    (simplex[best].clone(), values[best])
}

/// Multi-start minimisation over a box.
///
/// Scans `n_starts` points of a randomly rotated Halton sequence, then runs
/// Nelder-Mead from the best five. Returns every refined point (and the
/// best scan point) sorted by value; the first entry is the overall best.
pub fn multistart_minima<F: FnMut(&[f64]) -> f64>(
    f: &mut F,
    bounds: &SearchBox,
    n_starts: usize,
    stream: &mut RandomStream,
    opts: &NelderMeadOptions,
) -> Vec<(Vec<f64>, f64)> {
    const REFINE: usize = 5;
    let m = bounds.dim();
    let shift: Vec<f64> = (0..m).map(|_| stream.uniform()).collect();
    let mut halton = Halton::shifted(m, shift);
    let mut u = vec![0.0; m];
    let mut scan: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n_starts.max(1));
    for _ in 0..n_starts.max(1) {
        halton.next_into(&mut u);
        let mut x = vec![0.0; m];
        bounds.from_unit(&u, &mut x);
        let v = f(&x);
        scan.push((x, if v.is_nan() { f64::INFINITY } else { v }));
    }
    scan.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut out: Vec<(Vec<f64>, f64)> = scan
        .iter()
        .take(REFINE)
        .map(|(x0, f0)| {
            let (x, fx) = nelder_mead(f, x0, bounds, opts);
            if fx <= *f0 {
                (x, fx)
            } else {
                (x0.clone(), *f0)
            }
        })
        .collect();
    out.push(scan[0].clone());
    out.sort_by(|a, b| a.1.total_cmp(&b.1));
    out
}

/// Best point found by [`multistart_minima`].
pub fn multistart_min<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    bounds: &SearchBox,
    n_starts: usize,
    stream: &mut RandomStream,
) -> (Vec<f64>, f64) {
    multistart_minima(&mut f, bounds, n_starts, stream, &NelderMeadOptions::default())
        .into_iter()
        .next()
        .expect("at least one start")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_quadratic() {
        let (x, fx) = golden_section_min(|x| (x - 2.0).powi(2), 0.0, 5.0, 1e-8);
        assert!((x - 2.0).abs() < 1e-7);
        assert_eq!(fx, (x - 2.0).powi(2));
    }

    #[test]
    fn golden_kink() {
        let (x, _) = golden_section_min(|x: f64| (x - 1.0).abs(), 0.0, 3.0, 1e-8);
        assert!((x - 1.0).abs() < 1e-7);
    }

    #[test]
    fn golden_square_majorant_touch_point() {
        // Exponent sqrt(2r) with r = 0.1, printed as 0.447.
        let a = 0.2f64.sqrt();
        let f = |x: f64| 2.661 * ((a * x).exp() + (-a * x).exp()) - x * x;
        let (x, fx) = golden_section_min(f, 0.0, 6.0, 1e-8);
        assert!((x - 4.618).abs() < 0.01, "x = {x}");
        assert!(fx.abs() < 0.01, "f = {fx}");
    }

    #[test]
    fn grid_golden_finds_both_wells() {
        let f = |x: f64| (x * x - 1.0).powi(2) + 0.1 * x;
        let m = grid_golden_minima(f, -2.0, 2.0, 512, 2, 1e-10);
        assert_eq!(m.len(), 2);
        assert!(m[0].0 < 0.0 && m[1].0 > 0.0);
    }

    #[test]
    fn multistart_quadratic() {
        let bounds = SearchBox::new(vec![-5.0, -5.0], vec![5.0, 5.0]);
        let mut s = RandomStream::new(11);
        let (x, fx) =
            multistart_min(|p| (p[0] - 1.0).powi(2) + (p[1] + 2.0).powi(2), &bounds, 64, &mut s);
        assert!((x[0] - 1.0).abs() < 1e-4 && (x[1] + 2.0).abs() < 1e-4, "{x:?}");
        assert!(fx < 1e-8);
    }

    #[test]
    fn multistart_constant() {
        let bounds = SearchBox::new(vec![0.0; 3], vec![1.0; 3]);
        let mut s = RandomStream::new(0);
        let (x, fx) = multistart_min(|_| 3.0, &bounds, 16, &mut s);
        assert_eq!(fx, 3.0);
        assert!(bounds.contains(&x));
    }

    #[test]
    fn nelder_mead_respects_box() {
        let bounds = SearchBox::new(vec![0.0, 0.0], vec![1.0, 1.0]);
        let mut f = |p: &[f64]| p[0] + p[1];
        let (x, fx) = nelder_mead(&mut f, &[0.5, 0.5], &bounds, &NelderMeadOptions::default());
        assert!(bounds.contains(&x));
        assert!(fx < 1e-3, "{fx}");
    }

    #[test]
    fn corners_capped() {
        let b = SearchBox::new(vec![0.0; 8], vec![1.0; 8]);
        assert_eq!(b.corners(6).len(), 64);
        assert_eq!(SearchBox::new(vec![0.0; 2], vec![1.0; 2]).corners(6).len(), 4);
    }
}
