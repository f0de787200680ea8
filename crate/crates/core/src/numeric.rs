//! Small numerical kernels: bracketed bisection and adaptive Simpson
//! quadrature. Both are deliberately plain — the callers pin their
//! tolerances, and determinism matters more than speed here.

use crate::error::{Error, Result};

/// Absolute x-tolerance used by the cycle-point solvers.
pub const BISECT_TOL: f64 = 1e-8;

/// Iteration cap for bisection; generous, since each step halves the bracket.
pub const BISECT_MAX_ITER: usize = 200;

/// Find a root of `f` inside `[lo, hi]` by bisection.
///
/// Requires a sign change over the bracket and shrinks it until its width is
/// at most `tol` (absolute). An exact zero at either endpoint or at a
/// midpoint is returned immediately.
pub fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Result<f64> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Domain(format!("invalid bracket [{lo}, {hi}]")));
    }
    let (mut lo, mut hi) = (lo, hi);
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoBifurcation {
            what: "f(lo) and f(hi) have the same sign".into(),
            lo,
            hi,
        });
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol {
            return Ok(mid);
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence { max_iter })
}

/// Integrate `f` over `[a, b]` with adaptive Simpson quadrature to the given
/// absolute tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    adapt(f, a, fa, m, fm, b, fb, whole, tol, 48)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adapt(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1)
        + adapt(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1)
}
