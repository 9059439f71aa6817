//! Bracketed scalar root refinement.

use crate::{Error, Result};

/// Bisection on a sign-changing bracket.
///
/// Halves `[a, b]` until its width is below `tol` (or floating point
/// resolution is reached) and returns the midpoint of the final bracket.
/// An exact zero met on the way is returned immediately.
pub fn refine_root<F>(mut f: F, bracket: (f64, f64), tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("root tolerance must be positive"));
    }
    let (mut a, mut b) = bracket;
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { a, fa, b, fb });
    }
    // 2200 halvings exhaust any finite double bracket.
    for _ in 0..2200 {
        let mid = 0.5 * (a + b);
        if (b - a).abs() < tol || mid == a || mid == b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Scan `f` on `samples` uniformly spaced points of `[lo, hi]` and return the
/// first sub-interval whose endpoints have opposite signs.
pub fn first_sign_change<F>(mut f: F, lo: f64, hi: f64, samples: usize) -> Option<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    if samples < 2 {
        return None;
    }
    let step = (hi - lo) / (samples - 1) as f64;
    let mut prev_x = lo;
    let mut prev = f(lo);
    for i in 1..samples {
        let x = if i == samples - 1 { hi } else { lo + step * i as f64 };
        let v = f(x);
        if prev.is_finite() && v.is_finite() && (prev == 0.0 || prev.signum() != v.signum()) {
            return Some((prev_x, x));
        }
        prev_x = x;
        prev = v;
    }
    None
}
