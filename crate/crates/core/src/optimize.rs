//! One-dimensional maximization: coarse grid scan plus golden-section
//! refinement around the best sample.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
///
/// Returns `(x, f(x))` for the best point visited. The search assumes
/// nothing beyond continuity; on a non-unimodal bracket it still returns
/// a point at least as good as either interior probe.
pub fn golden_max<F>(f: F, mut lo: f64, mut hi: f64, xtol: f64, max_iter: usize) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for _ in 0..max_iter {
        if (hi - lo).abs() <= xtol {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
            if f1 > best.1 {
                best = (x1, f1);
            }
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
            if f2 > best.1 {
                best = (x2, f2);
            }
        }
    }
    best
}

/// Maximize `f` over `[lo, hi]` by scanning `n` uniform samples (endpoints
/// included) and then refining with golden section between the neighbours
/// of the best sample. The result is never below the best grid value.
pub fn grid_then_golden<F>(f: F, lo: f64, hi: f64, n: usize, xtol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let n = n.max(3);
    let step = (hi - lo) / (n - 1) as f64;
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..n {
        let x = if i == n - 1 { hi } else { lo + step * i as f64 };
        let v = f(x);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    refine_around(f, lo, hi, n, best_i, best_v, xtol)
}

/// Golden-section refinement between the neighbours of sample `best_i` of
/// an `n`-point uniform scan of `[lo, hi]` whose best value was `best_v`.
pub fn refine_around<F>(f: F, lo: f64, hi: f64, n: usize, best_i: usize, best_v: f64, xtol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let step = (hi - lo) / (n - 1) as f64;
    let best_x = if best_i == n - 1 { hi } else { lo + step * best_i as f64 };
    if step <= 0.0 {
        return (best_x, best_v);
    }
    let a = lo + step * best_i.saturating_sub(1) as f64;
    let b = (lo + step * (best_i + 1) as f64).min(hi);
    let (x, v) = golden_max(&f, a, b, xtol, 200);
    if v > best_v {
        (x, v)
    } else {
        (best_x, best_v)
    }
}
