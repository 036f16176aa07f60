//! Adaptive Simpson quadrature, 1-D and iterated 2-D.

use crate::error::{Error, Result};

/// Quadrature control: absolute tolerance and the truncation width in
/// standard deviations beyond the outermost mixture mean.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureCfg {
    pub abs_tol: f64,
    pub truncation: f64,
}

impl QuadratureCfg {
    pub fn new(abs_tol: f64, truncation: f64) -> Result<Self> {
        if abs_tol <= 0.0 {
            return Err(Error::InvalidParameter("abs_tol must be positive".into()));
        }
        if truncation < 6.0 {
            return Err(Error::InvalidParameter(
                "truncation below 6 sigma loses tail mass".into(),
            ));
        }
        Ok(QuadratureCfg { abs_tol, truncation })
    }

    /// 1-D default: 1e-9 absolute, 10 sigma truncation.
    pub fn default_1d() -> Self {
        QuadratureCfg { abs_tol: 1e-9, truncation: 10.0 }
    }

    /// 2-D default: 1e-7 absolute (cost balance), 10 sigma truncation.
    pub fn default_2d() -> Self {
        QuadratureCfg { abs_tol: 1e-7, truncation: 10.0 }
    }
}

impl Default for QuadratureCfg {
    fn default() -> Self {
        Self::default_1d()
    }
}

const MAX_DEPTH: u32 = 30;

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
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
    unresolved: &mut f64,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let eps = left + right - whole;
    if eps.abs() <= 15.0 * tol {
        return left + right + eps / 15.0;
    }
    if depth >= MAX_DEPTH {
        *unresolved += eps.abs() / 15.0;
        return left + right + eps / 15.0;
    }
    adapt(f, a, fa, lm, flm, m, fm, left, tol / 2.0, depth + 1, unresolved)
        + adapt(f, m, fm, rm, frm, b, fb, right, tol / 2.0, depth + 1, unresolved)
}

/// ∫_a^b f dx to absolute tolerance `abs_tol`. Fails with the achieved
/// error estimate if refinement bottoms out before reaching it.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    if !(a < b) {
        return Err(Error::InvalidParameter(format!("bad interval [{a}, {b}]")));
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    let mut unresolved = 0.0;
    let v = adapt(&f, a, fa, m, fm, b, fb, whole, abs_tol, 0, &mut unresolved);
    if unresolved > abs_tol {
        return Err(Error::QuadratureNonConvergence {
            requested: abs_tol,
            achieved: unresolved,
        });
    }
    Ok(v)
}

/// Iterated 2-D integral ∫∫ f(x,y) dy dx over a rectangle. The inner
/// integral runs at a tolerance budgeted against the outer extent.
pub fn integrate_2d<F: Fn(f64, f64) -> f64 + Sync>(
    f: F,
    x_range: (f64, f64),
    y_range: (f64, f64),
    abs_tol: f64,
) -> Result<f64> {
    let (ax, bx) = x_range;
    let (ay, by) = y_range;
    if !(ax < bx && ay < by) {
        return Err(Error::InvalidParameter("bad rectangle".into()));
    }
    let inner_tol = 0.25 * abs_tol / (bx - ax);
    // Inner failures surface through a sentinel; adaptive refinement of NaN
    // would mask them otherwise.
    let inner = |x: f64| -> f64 {
        integrate(|y| f(x, y), ay, by, inner_tol).unwrap_or(f64::NAN)
    };
    let v = integrate(inner, ax, bx, 0.75 * abs_tol)?;
    if v.is_nan() {
        return Err(Error::QuadratureNonConvergence { requested: abs_tol, achieved: f64::NAN });
    }
    Ok(v)
}
