//! Grid-based feature detection on sampled time series (peaks, dips, zero
//! runs) plus golden-section / bisection refinement to sub-grid accuracy.

use crate::error::{Result, SimError};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Index of the first strict local maximum with `ys[i] > min_height`.
pub fn first_peak(ys: &[f64], min_height: f64) -> Option<usize> {
    (1..ys.len().saturating_sub(1))
        .find(|&i| ys[i] > ys[i - 1] && ys[i] >= ys[i + 1] && ys[i] > min_height)
}

/// Index of the first local minimum below `dip_below` that occurs after the
/// series has risen above `rise`. Detects the tangential returns to zero of
/// an entanglement measure (which touch zero without a sign change).
pub fn first_dip(ys: &[f64], rise: f64, dip_below: f64) -> Option<usize> {
    let mut risen = false;
    for i in 1..ys.len().saturating_sub(1) {
        if ys[i] > rise {
            risen = true;
        }
        if risen && ys[i] <= ys[i - 1] && ys[i] < ys[i + 1] && ys[i] < dip_below {
            return Some(i);
        }
    }
    None
}

/// Disjoint maximal intervals `(x_start, x_end)` where `ys <= threshold`.
pub fn zero_runs(xs: &[f64], ys: &[f64], threshold: f64) -> Vec<(f64, f64)> {
    let mut runs: Vec<(f64, f64)> = Vec::new();
    let mut open = false;
    for (&x, &y) in xs.iter().zip(ys) {
        if y <= threshold {
            if open {
                runs.last_mut().unwrap().1 = x;
            } else {
                runs.push((x, x));
                open = true;
            }
        } else {
            open = false;
        }
    }
    runs
}

fn check_bracket(lo: f64, hi: f64, tol: f64) -> Result<()> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() || !(tol > 0.0) {
        return Err(SimError::Domain(format!(
            "bad search bracket [{lo}, {hi}] / tol {tol}"
        )));
    }
    Ok(())
}

/// Golden-section minimization of a unimodal function on `[lo, hi]`;
/// returns `(x_min, f(x_min))` with `|x − x_min| < tol`.
pub fn minimize<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    check_bracket(lo, hi, tol)?;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x)?;
    Ok((x, fx))
}

/// Golden-section maximization; see [`minimize`].
pub fn maximize<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    let (x, fx) = minimize(|t| f(t).map(|v| -v), lo, hi, tol)?;
    Ok((x, -fx))
}

/// Bisection root of a function with a sign change on `[lo, hi]`.
pub fn bisect_root<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64> {
    check_bracket(lo, hi, tol)?;
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(SimError::Domain(format!(
            "no sign change on [{lo}, {hi}] ({flo} vs {fhi})"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Grid locate + refine in one step: find the first local maximum above
/// `min_height` on the sampled series, then polish it on the bracketing
/// interval. Returns `(x_peak, f(x_peak))`.
pub fn refine_first_peak<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    xs: &[f64],
    ys: &[f64],
    min_height: f64,
    tol: f64,
) -> Result<Option<(f64, f64)>> {
    match first_peak(ys, min_height) {
        None => Ok(None),
        Some(i) => {
            let (x, fx) = maximize(&mut f, xs[i - 1], xs[i + 1], tol)?;
            Ok(Some((x, fx)))
        }
    }
}

/// Locate + refine the first return-to-zero of an entanglement series:
/// first local minimum below `dip_below` after exceeding `rise`, polished
/// by golden-section minimization. Returns `(x_dip, f(x_dip))`.
pub fn refine_first_dip<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    xs: &[f64],
    ys: &[f64],
    rise: f64,
    dip_below: f64,
    tol: f64,
) -> Result<Option<(f64, f64)>> {
    match first_dip(ys, rise, dip_below) {
        None => Ok(None),
        Some(i) => {
            let (x, fx) = minimize(&mut f, xs[i - 1], xs[i + 1], tol)?;
            Ok(Some((x, fx)))
        }
    }
}
