//! Small one-dimensional minimization helpers.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `xtol`; returns the best point seen.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, xtol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if hi - lo <= xtol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Coarse scan of `f` over a log grid, then golden-section refinement in
/// log-space around the best grid point. Returns `(argmin, min)`.
pub fn grid_then_golden<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, n: usize, log_xtol: f64) -> (f64, f64) {
    let grid = log_space(lo, hi, n);
    let mut best = (0usize, f64::INFINITY);
    for (i, &x) in grid.iter().enumerate() {
        let v = f(x);
        if v < best.1 {
            best = (i, v);
        }
    }
    let (i, grid_min) = best;
    if !grid_min.is_finite() {
        return (grid[i], grid_min);
    }
    let left = grid[i.saturating_sub(1)].ln();
    let right = grid[(i + 1).min(n - 1)].ln();
    let (lx, v) = golden_section(|u| f(u.exp()), left, right, log_xtol);
    if v < grid_min {
        (lx.exp(), v)
    } else {
        (grid[i], grid_min)
    }
}
