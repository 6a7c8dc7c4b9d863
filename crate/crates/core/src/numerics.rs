//! Bracketed root finding, central differences, branch-controlled complex
//! square roots and sweep grids.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative x-tolerance used by [`RootOptions::for_bracket`].
pub const DEFAULT_REL_TOL_X: f64 = 1e-10;
/// Absolute residual tolerance, in the natural units of the target function.
pub const DEFAULT_TOL_F: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 200;
/// Relative step for [`central_derivative`]; also the absolute step when |x| < 1.
pub const DEFAULT_REL_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::BadBracket { lo, hi });
        }
        Ok(Bracket { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
    /// Width of the final enclosing bracket.
    pub bracket_width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    pub tol_x: f64,
    pub tol_f: f64,
    pub max_iter: usize,
}

impl RootOptions {
    /// Default tolerances scaled to the magnitude of the bracket ends.
    pub fn for_bracket(bracket: &Bracket) -> Self {
        RootOptions {
            tol_x: DEFAULT_REL_TOL_X * bracket.lo.abs().max(bracket.hi.abs()),
            tol_f: DEFAULT_TOL_F,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// Brent's method: inverse quadratic interpolation and secant steps, falling
/// back to bisection whenever the interpolated step leaves the bracket or
/// fails to shrink it fast enough.
///
/// Stops as soon as `|f(x)| <= tol_f` or the enclosing bracket is no wider
/// than `tol_x` (floored at a few ulps of `x`).
pub fn find_root<F>(f: F, bracket: Bracket, tol_x: f64, tol_f: f64, max_iter: usize) -> Result<RootResult>
where
    F: Fn(f64) -> f64,
{
    let Bracket { lo, hi } = Bracket::new(bracket.lo, bracket.hi)?;
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if !fa.is_finite() {
        return Err(Error::NonFinite { x: a });
    }
    if !fb.is_finite() {
        return Err(Error::NonFinite { x: b });
    }
    if fa == 0.0 {
        return Ok(RootResult { x: a, residual: 0.0, iterations: 0, bracket_width: hi - lo });
    }
    if fb == 0.0 {
        return Ok(RootResult { x: b, residual: 0.0, iterations: 0, bracket_width: hi - lo });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { lo, hi, f_lo: fa, f_hi: fb });
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for iter in 1..=max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let width = (c - b).abs();
        let floor = 4.0 * f64::EPSILON * b.abs();
        if fb.abs() <= tol_f || width <= tol_x.max(floor) {
            return Ok(RootResult { x: b, residual: fb, iterations: iter, bracket_width: width });
        }

        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol_x;
        let xm = 0.5 * (c - b);
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::NonFinite { x: b });
        }
    }

    Err(Error::NoConvergence { iterations: max_iter, x: b, residual: fb })
}

/// Symmetric difference quotient with step `rel_step * max(|x|, 1)`.
pub fn central_derivative<F>(f: F, x: f64, rel_step: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let h = rel_step * x.abs().max(1.0);
    let (xp, xm) = (x + h, x - h);
    let fp = f(xp);
    if !fp.is_finite() {
        return Err(Error::NonFinite { x: xp });
    }
    let fm = f(xm);
    if !fm.is_finite() {
        return Err(Error::NonFinite { x: xm });
    }
    // (xp - xm) is the step actually represented after rounding.
    Ok((fp - fm) / (xp - xm))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchRule {
    NonnegRealPart,
    NonnegImagPart,
}

/// Square root of `z` on the half-plane selected by `rule`.
///
/// On the boundary (designated part exactly zero) the root whose other part
/// is non-negative is returned.
pub fn complex_sqrt_branch(z: Complex64, rule: BranchRule) -> Complex64 {
    let w = stable_sqrt(z);
    let flip = match rule {
        BranchRule::NonnegRealPart => w.re < 0.0 || (w.re == 0.0 && w.im < 0.0),
        BranchRule::NonnegImagPart => w.im < 0.0 || (w.im == 0.0 && w.re < 0.0),
    };
    if flip {
        -w
    } else {
        w
    }
}

// Principal root without the cancellation of the polar form.
fn stable_sqrt(z: Complex64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let modulus = z.re.hypot(z.im);
    let t = ((modulus + z.re.abs()) * 0.5).sqrt();
    if z.re >= 0.0 {
        Complex64::new(t, z.im / (2.0 * t))
    } else {
        Complex64::new(z.im.abs() / (2.0 * t), t.copysign(z.im))
    }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::BadGrid(format!("need at least 2 points, got {n}")));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::BadGrid(format!("need lo < hi, got [{lo}, {hi}]")));
    }
    let span = hi - lo;
    let last = (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n).map(|i| lo + span * (i as f64 / last)).collect();
    grid[n - 1] = hi;
    Ok(grid)
}
