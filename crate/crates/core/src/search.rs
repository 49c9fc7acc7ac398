//! Deterministic scalar maximization: a coarse grid scan followed by
//! golden-section refinement inside the bracket around the best grid point.

use crate::math;

/// `(√5 − 1)/2`
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Values within this distance of the best are treated as ties.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
}

/// Picks the best candidate; among values within [`TIE_TOLERANCE`] of the
/// best, the smallest `x` wins. NaN values are ignored.
pub fn select_max<I: IntoIterator<Item = Maximum>>(candidates: I) -> Option<Maximum> {
    let all: alloc::vec::Vec<Maximum> = candidates.into_iter().filter(|c| !c.value.is_nan()).collect();
    let best = all.iter().map(|c| c.value).fold(f64::NEG_INFINITY, f64::max);
    all.into_iter()
        .filter(|c| c.value >= best - TIE_TOLERANCE)
        .min_by(|a, b| a.x.total_cmp(&b.x))
}

/// Golden-section search for a maximum of `f` on `[lo, hi]` until the bracket
/// is narrower than `x_tol`. Returns the better of the final interior probes.
pub fn golden_section_max<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, x_tol: f64) -> Maximum {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    // the bracket shrinks by 1/φ per iteration
    let max_iter = if b - a > x_tol {
        (math::ln((b - a) / x_tol) / math::ln(1.0 / INV_PHI)) as usize + 2
    } else {
        0
    };
    for _ in 0..max_iter {
        if b - a <= x_tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        Maximum { x: c, value: fc }
    } else {
        Maximum { x: d, value: fd }
    }
}

/// Scans `grid` (sorted ascending), then refines with golden-section search
/// between the neighbours of the best grid point. The result is never worse
/// than the best grid sample.
pub fn grid_then_golden<F: FnMut(f64) -> f64>(mut f: F, grid: &[f64], x_tol: f64) -> Option<Maximum> {
    let values: alloc::vec::Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    refine_best(f, grid, &values, x_tol)
}

/// Same as [`grid_then_golden`] with the grid samples already evaluated.
pub fn refine_best<F: FnMut(f64) -> f64>(mut f: F, grid: &[f64], values: &[f64], x_tol: f64) -> Option<Maximum> {
    let samples = grid.iter().zip(values).map(|(&x, &value)| Maximum { x, value });
    let best = select_max(samples)?;
    let idx = grid.iter().position(|&x| x == best.x)?;
    let lo = grid[idx.saturating_sub(1)];
    let hi = grid[(idx + 1).min(grid.len() - 1)];
    let refined = if hi > lo {
        golden_section_max(&mut f, lo, hi, x_tol)
    } else {
        best
    };
    if refined.value > best.value + TIE_TOLERANCE {
        Some(refined)
    } else {
        Some(best)
    }
}
