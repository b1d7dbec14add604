//! Small numerical building blocks: adaptive quadrature, one-dimensional
//! minimization, root bracketing and least-squares line fits.

use crate::{Error, Result};

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule
// (QUADPACK dqk15 constants).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    for j in 0..7 {
        let x = half * XGK[j];
        let fsum = f(center - x) + f(center + x);
        resk += WGK[j] * fsum;
        if j % 2 == 1 {
            resg += WG[j / 2] * fsum;
        }
    }
    (resk * half, (resk - resg).abs() * half.abs())
}

/// Adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// Bisection proceeds until each panel satisfies its share of the combined
/// absolute/relative tolerance. Fails with a diagnostic when the recursion
/// depth limit is reached, which signals a non-integrable feature.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<f64> {
    // First coarse pass to set the scale for the relative tolerance.
    let (coarse, _) = gk15(&f, a, b);
    let scale = coarse.abs().max(1e-300);
    let mut total = 0.0;
    // Manual stack of (a, b, depth).
    let mut stack = vec![(a, b, 0u32)];
    let global = abs_tol + rel_tol * scale;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, err) = gk15(&f, lo, hi);
        let width_frac = ((hi - lo) / (b - a)).abs();
        // per-panel budget, floored so that panels whose error is a
        // negligible fraction of the global tolerance always terminate
        let budget = (global * width_frac).max(1e-10 * global);
        if err <= budget || err <= 1e-16 * val.abs() {
            total += val;
            continue;
        }
        if depth >= 60 {
            return Err(Error::Numeric(format!(
                "quadrature failed to converge on [{lo:.6e}, {hi:.6e}]: \
                 local error {err:.3e} > budget {budget:.3e} at depth {depth}"
            )));
        }
        let mid = 0.5 * (lo + hi);
        stack.push((lo, mid, depth + 1));
        stack.push((mid, hi, depth + 1));
    }
    Ok(total)
}

/// Integrate with interior break points (placed e.g. at kinks or jumps of
/// the integrand).
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    rel_tol: f64,
    abs_tol: f64,
) -> Result<f64> {
    let mut pts: Vec<f64> = std::iter::once(a)
        .chain(breaks.iter().copied().filter(|x| *x > a && *x < b))
        .chain(std::iter::once(b))
        .collect();
    pts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let mut total = 0.0;
    for w in pts.windows(2) {
        if w[1] > w[0] {
            total += integrate(&f, w[0], w[1], rel_tol, abs_tol)?;
        }
    }
    Ok(total)
}

/// Golden-section minimization of `f` on `[a, b]` down to an interval of
/// width `tol` in the argument. Returns `(x_min, f(x_min))`.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
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
    let xm = 0.5 * (lo + hi);
    (xm, f(xm))
}

/// Bisection on a sign change of `f` over `[a, b]`; `f(a)` and `f(b)` must
/// have opposite signs.
pub fn bisect<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let (mut lo, mut hi) = (a, b);
    let mut flo = f(lo);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm >= 0.0) == (flo >= 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Ordinary least-squares line fit `y = slope * x + intercept`.
///
/// Returns `(slope, intercept, stderr_slope)` with the usual OLS standard
/// error of the slope.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    assert!(n >= 2.0, "need at least two points for a line fit");
    let xbar = x.iter().sum::<f64>() / n;
    let ybar = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - xbar) * (xi - xbar)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(xi, yi)| (xi - xbar) * (yi - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let stderr = if x.len() > 2 {
        let ssr: f64 = x
            .iter()
            .zip(y)
            .map(|(xi, yi)| {
                let r = yi - (slope * xi + intercept);
                r * r
            })
            .sum();
        (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    (slope, intercept, stderr)
}

/// log2 binary entropy of a probability, with 0 log 0 := 0.
pub fn entropy_bit(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

/// Shannon entropy (base 2) of a probability vector; eigenvalues within
/// `1e-12` below zero are clipped to zero.
pub fn spectrum_entropy(probs: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &p in probs {
        if p < -1e-10 {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {p:.3e} in a density matrix spectrum"
            )));
        }
        let p = p.max(0.0);
        if p > 0.0 {
            s -= p * p.log2();
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn quadrature_smooth() {
        let v = integrate(|x| x.sin(), 0.0, PI, 1e-12, 1e-14).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn quadrature_kink() {
        // |cos k| over a period has kinks at +-pi/2.
        let v = integrate(|x| x.cos().abs(), -PI, PI, 1e-11, 1e-13).unwrap();
        assert!((v - 4.0).abs() < 1e-10, "got {v}");
    }

    #[test]
    fn golden_finds_quadratic_minimum() {
        // location accuracy of a smooth minimum is limited to ~sqrt(eps)
        let (x, fx) = golden_min(|x| (x - 0.3).powi(2) + 1.0, -1.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fit_recovers_exact_line() {
        let x: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|xi| 2.0 * xi + 1.0).collect();
        let (a, b, se) = linear_fit(&x, &y);
        assert!((a - 2.0).abs() < 1e-12);
        assert!((b - 1.0).abs() < 1e-12);
        assert!(se < 1e-12);
    }

    #[test]
    fn entropy_limits() {
        assert_eq!(entropy_bit(0.0), 0.0);
        assert_eq!(entropy_bit(1.0), 0.0);
        assert!((entropy_bit(0.5) - 1.0).abs() < 1e-15);
    }
}
